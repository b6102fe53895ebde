//! Point configurations, the orders they induce, realization search and the
//! step-by-step audit of the impossibility argument.

mod audit;
mod lemmas;
pub mod montecarlo;
mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Collision, Error, Result};
use crate::geom::{check_dims, diameter, squared_distance_unchecked, Point, DEFAULT_TOL};
use crate::order::{Cell, RankTable};

pub use audit::{audit, AuditStep, ChainBreak, AuditTrace, GeomObject, NamedObject, StepName, Verdict};
pub use lemmas::{
    cyclic_shift, halfspace_lemma_check, halfspace_lemma_diagnostic, lemma_conclusion_check,
    lemma_hypothesis, lemma_hypothesis_holds, observation_check, sphere_steps,
    three_lemma_instances, Check, HalfspacePrecondition, HalfspaceReport, InstanceKind,
    LemmaConclusion, LemmaHypothesis, LemmaInstance, ObservationCheck, SphereSteps,
};
pub use search::{search_realization, SearchParams, SearchResult, SearchStatus};

/// Point sets `P` (rows) and `Q` (columns) in a common dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRecord", into = "ConfigRecord")]
pub struct Configuration {
    dim: usize,
    p: Vec<Point>,
    q: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct ConfigRecord {
    dim: usize,
    #[serde(rename = "P")]
    p: Vec<Point>,
    #[serde(rename = "Q")]
    q: Vec<Point>,
}

impl TryFrom<ConfigRecord> for Configuration {
    type Error = Error;

    fn try_from(r: ConfigRecord) -> Result<Self> {
        Configuration::new(r.dim, r.p, r.q)
    }
}

impl From<Configuration> for ConfigRecord {
    fn from(c: Configuration) -> Self {
        ConfigRecord {
            dim: c.dim,
            p: c.p,
            q: c.q,
        }
    }
}

impl Configuration {
    pub fn new(dim: usize, p: Vec<Point>, q: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if p.len() < 2 || q.len() < p.len() {
            return Err(Error::Shape(format!(
                "need 2 <= |P| <= |Q|, got |P| = {}, |Q| = {}",
                p.len(),
                q.len()
            )));
        }
        for x in p.iter().chain(&q) {
            check_dims(dim, x.dim())?;
        }
        Ok(Self { dim, p, q })
    }

    /// Builds a configuration from flat coordinate slices, one per point.
    pub fn from_coords(dim: usize, p: &[&[f64]], q: &[&[f64]]) -> Result<Self> {
        let conv = |pts: &[&[f64]]| -> Result<Vec<Point>> {
            pts.iter().map(|c| Point::new(c.to_vec())).collect()
        };
        Self::new(dim, conv(p)?, conv(q)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> &[Point] {
        &self.p
    }

    pub fn q(&self) -> &[Point] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    /// Diameter of `P ∪ Q`.
    pub fn scale(&self) -> f64 {
        diameter(self.p.iter().chain(&self.q))
    }

    /// `Q` without `q_i`.
    pub fn q_without(&self, i: usize) -> Vec<Point> {
        self.q
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, x)| x.clone())
            .collect()
    }

    /// `|p_i - q_j|^2`.
    pub fn squared_distance(&self, (i, j): Cell) -> f64 {
        squared_distance_unchecked(self.p[i].coords(), self.q[j].coords())
    }

    /// Checks the `(d+1) x (d+2)` shape and returns `d`.
    pub fn unrealizable_shape(&self) -> Result<usize> {
        let d = self.dim;
        if self.n() != d + 1 || self.m() != d + 2 {
            return Err(Error::Shape(format!(
                "expected |P| = {} and |Q| = {} in dimension {d}, got {} and {}",
                d + 1,
                d + 2,
                self.n(),
                self.m()
            )));
        }
        Ok(d)
    }

    /// Applies `x -> scale * R x + shift` to every point, `R` given row-major.
    pub fn transformed(&self, rotation: &[Vec<f64>], scale: f64, shift: &[f64]) -> Result<Self> {
        let map = |x: &Point| -> Result<Point> {
            Point::new(
                rotation
                    .iter()
                    .zip(shift)
                    .map(|(row, s)| scale * crate::geom::dot(row, x.coords()) + s)
                    .collect(),
            )
        };
        Self::new(
            self.dim,
            self.p.iter().map(map).collect::<Result<_>>()?,
            self.q.iter().map(map).collect::<Result<_>>()?,
        )
    }
}

/// All squared distances in rank order, with their cells.
fn sorted_distances(c: &Configuration) -> Vec<(f64, Cell)> {
    let mut all: Vec<(f64, Cell)> = (0..c.n())
        .flat_map(|i| (0..c.m()).map(move |j| (i, j)))
        .map(|cell| (c.squared_distance(cell), cell))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all
}

/// The order on `[n] x [m]` induced by comparing `|p_i - q_j|`. Squared
/// distances closer than `tol * diameter^2` count as ties and are rejected.
pub fn induced_order(c: &Configuration, tol: f64) -> Result<RankTable> {
    let sorted = sorted_distances(c);
    let scale = c.scale();
    let threshold = tol * scale * scale;
    let mut collisions = Vec::new();
    for (a, &(da, ca)) in sorted.iter().enumerate() {
        for &(db, cb) in &sorted[a + 1..] {
            if db - da > threshold {
                break;
            }
            collisions.push(Collision {
                first: ca,
                second: cb,
                gap: db - da,
            });
        }
    }
    if !collisions.is_empty() {
        return Err(Error::Ties(collisions));
    }
    let order: Vec<Cell> = sorted.into_iter().map(|(_, cell)| cell).collect();
    RankTable::from_cell_order(c.n(), c.m(), &order)
}

/// [`induced_order`] at [`DEFAULT_TOL`].
pub fn induced_order_default(c: &Configuration) -> Result<RankTable> {
    induced_order(c, DEFAULT_TOL)
}

/// Smallest gap between consecutive sorted squared distances, absolute and
/// relative to the squared diameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub min_gap: f64,
    pub relative: f64,
}

pub fn distance_gaps(c: &Configuration) -> GapSummary {
    let sorted = sorted_distances(c);
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .fold(f64::INFINITY, f64::min);
    let scale = c.scale();
    GapSummary {
        min_gap,
        relative: min_gap / (scale * scale),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(p: &[f64], q: &[f64]) -> Configuration {
        let pts = |xs: &[f64]| xs.iter().map(|&x| Point::new(vec![x]).unwrap()).collect();
        Configuration::new(1, pts(p), pts(q)).unwrap()
    }

    #[test]
    fn induced_order_example() {
        let c = config(&[0.0, 3.0], &[1.0, 8.0, -2.2]);
        let t = induced_order(&c, DEFAULT_TOL).unwrap();
        assert_eq!(t.rows(), vec![vec![0, 5, 2], vec![1, 3, 4]]);
    }

    #[test]
    fn induced_order_reports_ties() {
        let c = config(&[0.0, 3.0], &[1.0, 5.0, -2.0]);
        match induced_order(&c, DEFAULT_TOL) {
            Err(Error::Ties(collisions)) => {
                // Squared distances 4 at (0,2), (1,0), (1,1) and 25 at (0,1), (1,2).
                let mut pairs: Vec<[Cell; 2]> = collisions
                    .iter()
                    .map(|c| {
                        let mut p = [c.first, c.second];
                        p.sort();
                        p
                    })
                    .collect();
                pairs.sort();
                assert_eq!(
                    pairs,
                    vec![[(0, 1), (1, 2)], [(0, 2), (1, 0)], [(0, 2), (1, 1)], [(1, 0), (1, 1)]]
                );
                assert!(collisions.iter().all(|c| c.gap == 0.0));
            }
            other => panic!("expected ties, got {other:?}"),
        }
    }

    #[test]
    fn configuration_json() {
        let c = config(&[0.0, 3.0], &[1.0, 8.0, -2.2]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"dim":1,"P":[[0.0],[3.0]],"Q":[[1.0],[8.0],[-2.2]]}"#);
        assert_eq!(serde_json::from_str::<Configuration>(&s).unwrap(), c);
        assert!(serde_json::from_str::<Configuration>(r#"{"dim":2,"P":[[0.0],[3.0]],"Q":[[1.0],[8.0]]}"#).is_err());
    }

    #[test]
    fn shape_guards() {
        assert!(Configuration::from_coords(1, &[&[0.0]], &[&[1.0], &[2.0]]).is_err());
        assert!(Configuration::from_coords(1, &[&[0.0], &[1.0], &[2.0]], &[&[1.0], &[2.0]]).is_err());
        let c = config(&[0.0, 3.0], &[1.0, 8.0]);
        assert!(c.unrealizable_shape().is_err());
    }

    #[test]
    fn gaps() {
        let c = config(&[0.0, 3.0], &[1.0, 8.0, -2.2]);
        let g = distance_gaps(&c);
        // Sorted squared distances: 1, 4, 4.84, 25, 27.04, 64.
        assert!((g.min_gap - 0.84).abs() < 1e-12);
    }
}
