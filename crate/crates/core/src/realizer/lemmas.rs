//! Checkers for the individual steps of the impossibility argument.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Configuration;
use crate::error::{Error, Result};
use crate::geom::{
    distance_permutation, hyperplane_through, sample, scale_of, squared_distance_unchecked,
    Hyperplane, Point, Simplex, Sphere,
};
use crate::order::{observation_comparisons, unrealizable_shape, Comparison, RankTable, Source};

/// `(i, i+1, ..., i-1)` modulo `k`.
pub fn cyclic_shift(i: usize, k: usize) -> Vec<usize> {
    (0..k).map(|t| (i + t) % k).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaHypothesis {
    pub holds: bool,
    /// Distance permutation of each `y_i` with respect to `X`.
    pub permutations: Vec<Vec<usize>>,
}

fn check_lemma_sizes(xs: &[Point], ys: &[Point]) -> Result<usize> {
    let d = xs
        .first()
        .ok_or_else(|| Error::Shape("empty point set".into()))?
        .dim();
    if xs.len() != d + 1 || ys.len() != d + 1 {
        return Err(Error::Shape(format!(
            "need {} points in each set for R^{d}, got {} and {}",
            d + 1,
            xs.len(),
            ys.len()
        )));
    }
    for p in xs.iter().chain(ys) {
        crate::geom::check_dims(d, p.dim())?;
    }
    Ok(d)
}

/// Whether every `y_i` sees `X` in the cyclic order `x_i, x_{i+1}, ..., x_{i-1}`.
pub fn lemma_hypothesis(xs: &[Point], ys: &[Point], tol: f64) -> Result<LemmaHypothesis> {
    let d = check_lemma_sizes(xs, ys)?;
    let permutations = ys
        .iter()
        .map(|y| distance_permutation(y, xs, tol))
        .collect::<Result<Vec<_>>>()?;
    let holds = permutations
        .iter()
        .enumerate()
        .all(|(i, p)| *p == cyclic_shift(i, d + 1));
    Ok(LemmaHypothesis { holds, permutations })
}

pub fn lemma_hypothesis_holds(xs: &[Point], ys: &[Point], tol: f64) -> Result<bool> {
    Ok(lemma_hypothesis(xs, ys, tol)?.holds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaConclusion {
    pub circumcenter: Point,
    /// Barycentric coordinates of the circumcenter of `X` in the simplex `Y`.
    pub barycentric: Vec<f64>,
    pub min_coordinate: f64,
    /// Strictly interior: every coordinate above `tol`.
    pub passed: bool,
}

pub(crate) fn lemma_conclusion_unchecked(xs: &[Point], ys: &[Point], tol: f64) -> Result<LemmaConclusion> {
    let circumcenter = Simplex::new(xs.to_vec())?.circumcenter()?;
    let barycentric = Simplex::new(ys.to_vec())?.barycentric(&circumcenter)?;
    let min_coordinate = barycentric.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(LemmaConclusion {
        circumcenter,
        barycentric,
        min_coordinate,
        passed: min_coordinate > tol,
    })
}

/// Circumcenter of `X` against the simplex `Y`; requires the hypothesis.
pub fn lemma_conclusion_check(xs: &[Point], ys: &[Point], tol: f64) -> Result<LemmaConclusion> {
    if !lemma_hypothesis(xs, ys, tol)?.holds {
        return Err(Error::Precondition(
            "the points of Y do not see X in cyclic distance order".into(),
        ));
    }
    lemma_conclusion_unchecked(xs, ys, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    /// `x_i = p_i`, `y_i = q_i`; concludes `O(P) ∈ conv(Q_{d+1})`.
    CircumcenterOfP,
    /// `x_i = q_{(d+1-i) mod (d+1)}`, `y_i = p_i`; concludes `O(Q_{d+1}) ∈ conv(P)`.
    CircumcenterOfQWithoutLast,
    /// `x_i = q_{d+1-i}` reduced into `1..=d+1`, `y_i = p_i`; concludes
    /// `O(Q_0) ∈ conv(P)`.
    CircumcenterOfQWithoutFirst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaInstance {
    pub kind: InstanceKind,
    /// Names of the points playing `x_0..x_d` and `y_0..y_d`.
    pub x_labels: Vec<String>,
    pub y_labels: Vec<String>,
    pub hypothesis: LemmaHypothesis,
    /// Computed whether or not the hypothesis holds.
    pub conclusion: LemmaConclusion,
}

impl LemmaInstance {
    pub fn passed(&self) -> bool {
        self.hypothesis.holds && self.conclusion.passed
    }
}

/// The three instantiations of the circumcenter lemma on a `(d+1) x (d+2)`
/// configuration, with index maps taken literally.
pub fn three_lemma_instances(c: &Configuration, tol: f64) -> Result<[LemmaInstance; 3]> {
    let d = c.unrealizable_shape()?;
    let k = d + 1;
    let build = |kind: InstanceKind| -> Result<LemmaInstance> {
        let (x_idx, x_set, y_idx, y_set): (Vec<usize>, &[Point], Vec<usize>, &[Point]) = match kind {
            InstanceKind::CircumcenterOfP => ((0..k).collect(), c.p(), (0..k).collect(), c.q()),
            InstanceKind::CircumcenterOfQWithoutLast => (
                (0..k).map(|i| (k - i) % k).collect(),
                c.q(),
                (0..k).collect(),
                c.p(),
            ),
            InstanceKind::CircumcenterOfQWithoutFirst => (
                (0..k).map(|i| (k - i + k - 1) % k + 1).collect(),
                c.q(),
                (0..k).collect(),
                c.p(),
            ),
        };
        let (x_name, y_name) = match kind {
            InstanceKind::CircumcenterOfP => ("p", "q"),
            _ => ("q", "p"),
        };
        let xs: Vec<Point> = x_idx.iter().map(|&i| x_set[i].clone()).collect();
        let ys: Vec<Point> = y_idx.iter().map(|&i| y_set[i].clone()).collect();
        Ok(LemmaInstance {
            kind,
            x_labels: x_idx.iter().map(|i| format!("{x_name}{i}")).collect(),
            y_labels: y_idx.iter().map(|i| format!("{y_name}{i}")).collect(),
            hypothesis: lemma_hypothesis(&xs, &ys, tol)?,
            conclusion: lemma_conclusion_unchecked(&xs, &ys, tol)?,
        })
    };
    Ok([
        build(InstanceKind::CircumcenterOfP)?,
        build(InstanceKind::CircumcenterOfQWithoutLast)?,
        build(InstanceKind::CircumcenterOfQWithoutFirst)?,
    ])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationCheck {
    pub d: usize,
    pub verdicts: Vec<(Comparison, bool)>,
}

impl ObservationCheck {
    pub fn part_one(&self) -> impl Iterator<Item = &(Comparison, bool)> {
        self.verdicts
            .iter()
            .filter(|(c, _)| matches!(c.source, Source::ObservationOne { .. }))
    }

    pub fn part_two(&self) -> impl Iterator<Item = &(Comparison, bool)> {
        self.verdicts
            .iter()
            .filter(|(c, _)| matches!(c.source, Source::ObservationTwo { .. }))
    }

    pub fn part_one_holds(&self) -> bool {
        self.part_one().all(|(_, ok)| *ok)
    }

    pub fn part_two_holds(&self) -> bool {
        self.part_two().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.verdicts.iter().filter(|(_, ok)| !ok).map(|(c, _)| c)
    }
}

/// Evaluates every observation comparison against `t`.
pub fn observation_check(t: &RankTable) -> Result<ObservationCheck> {
    let d = unrealizable_shape(t)?;
    Ok(ObservationCheck {
        d,
        verdicts: observation_comparisons(d).evaluate(t)?,
    })
}

/// A single verdict with a signed margin (positive = holds with room).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub margin: f64,
}

impl Check {
    fn new(name: &str, margin: f64) -> Self {
        Self {
            name: name.into(),
            passed: margin > 0.0,
            margin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereSteps {
    /// Circumsphere of `Q_0 = Q \ {q_0}`.
    pub s0: Sphere,
    /// Circumsphere of `Q_{d+1} = Q \ {q_{d+1}}`.
    pub s_last: Sphere,
    /// Hyperplane through `Q' = Q \ {q_0, q_{d+1}}`, oriented toward `q_0`.
    pub h: Hyperplane,
    /// `q_{d+1}` on `S_0` and `q_0` on `S_{d+1}`: absolute radial residuals
    /// relative to the configuration scale.
    pub q_last_on_s0: f64,
    pub q0_on_s_last: f64,
    pub center0_closer_to_q0: Check,
    pub center_last_closer_to_q0: Check,
    pub q0_in_b0: Check,
    pub q_last_outside_b_last: Check,
    pub same_side_of_h: Check,
}

impl SphereSteps {
    pub fn checks(&self) -> [&Check; 5] {
        [
            &self.center0_closer_to_q0,
            &self.center_last_closer_to_q0,
            &self.q0_in_b0,
            &self.q_last_outside_b_last,
            &self.same_side_of_h,
        ]
    }
}

/// Circumsphere argument on a `(d+1) x (d+2)` configuration. Margins are
/// divided by the configuration diameter; `tol` is the dead zone for the
/// hyperplane sides.
pub fn sphere_steps(c: &Configuration, tol: f64) -> Result<SphereSteps> {
    let d = c.unrealizable_shape()?;
    let q = c.q();
    let (q0, q_last) = (&q[0], &q[d + 1]);
    let scale = c.scale();
    let s0 = Simplex::new(c.q_without(0))?.circumsphere()?;
    let s_last = Simplex::new(c.q_without(d + 1))?.circumsphere()?;
    let h = hyperplane_through(&q[1..=d])?.oriented_toward(q0);

    let dist = |a: &Point, b: &Point| squared_distance_unchecked(a.coords(), b.coords()).sqrt();
    let closer = |center: &Point| (dist(center, q_last) - dist(center, q0)) / scale;

    let side0 = h.signed_distance(q0) / scale;
    let side_last = h.signed_distance(q_last) / scale;
    let same_side = if side0 > tol && side_last > tol {
        side0.min(side_last)
    } else {
        side_last.min(side0 - tol).min(0.0) - f64::MIN_POSITIVE
    };

    Ok(SphereSteps {
        q_last_on_s0: s0.margin(q_last).abs() / scale,
        q0_on_s_last: s_last.margin(q0).abs() / scale,
        center0_closer_to_q0: Check::new("O(Q_0) closer to q_0 than to q_{d+1}", closer(&s0.center)),
        center_last_closer_to_q0: Check::new(
            "O(Q_{d+1}) closer to q_0 than to q_{d+1}",
            closer(&s_last.center),
        ),
        q0_in_b0: Check::new("q_0 inside B_0", s0.margin(q0) / scale),
        q_last_outside_b_last: Check::new("q_{d+1} outside B_{d+1}", -s_last.margin(q_last) / scale),
        same_side_of_h: Check::new("q_0 and q_{d+1} strictly on one side of H", same_side),
        s0,
        s_last,
        h,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum HalfspacePrecondition {
    /// `X` is not a non-degenerate simplex.
    DegenerateSimplex { message: String },
    /// `O` is not strictly inside `conv(X)`.
    CenterNotInterior { min_coordinate: f64 },
    /// `O` lies on `L_0`.
    CenterOnFirstPlane { distance: f64 },
    /// Some `d` normals are dependent or all planes share a point.
    NotGeneralPosition { message: String },
    /// `x_i` is not on the positive side of `L_i`.
    VertexOutsideOwnPlane { vertex: usize, distance: f64 },
    /// `x_j` is not on the negative side of `L_i`, `j != i`.
    VertexInsideOtherPlane { vertex: usize, plane: usize, distance: f64 },
}

impl std::fmt::Display for HalfspacePrecondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::DegenerateSimplex { message } => write!(f, "X is degenerate: {message}"),
            Self::CenterNotInterior { min_coordinate } => write!(
                f,
                "O not interior to conv(X) (min barycentric {min_coordinate:.3e})"
            ),
            Self::CenterOnFirstPlane { distance } => {
                write!(f, "O ∉ L_0 fails (distance {distance:.3e})")
            }
            Self::NotGeneralPosition { message } => {
                write!(f, "hyperplanes not in general position: {message}")
            }
            Self::VertexOutsideOwnPlane { vertex, distance } => write!(
                f,
                "x_{vertex} ∉ L_{vertex}^+ (signed distance {distance:.3e})"
            ),
            Self::VertexInsideOtherPlane {
                vertex,
                plane,
                distance,
            } => write!(
                f,
                "x_{vertex} ∉ L_{plane}^- (signed distance {distance:.3e})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceReport {
    pub preconditions_failed: Vec<HalfspacePrecondition>,
    /// Planes oriented so that `O` (or `x_i` when `O` lies on `L_i`) is on
    /// the positive side.
    pub oriented: Vec<Hyperplane>,
    pub samples: usize,
    /// Sampled points of the intersection found outside `conv(X)`.
    pub violations: usize,
    /// Some sampled ray from `O` never leaves the intersection.
    pub unbounded: bool,
    /// Smallest barycentric coordinate over all sampled points.
    pub min_coordinate: f64,
    /// First few violating points.
    pub witnesses: Vec<Point>,
}

impl HalfspaceReport {
    pub fn passed(&self) -> bool {
        self.preconditions_failed.is_empty() && self.violations == 0 && !self.unbounded
    }
}

fn orient_planes(xs: &[Point], o: &Point, planes: &[Hyperplane], tol_abs: f64) -> Vec<Hyperplane> {
    planes
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let s = l.signed_distance(o);
            if s.abs() > tol_abs || i == 0 {
                l.clone().oriented_toward(o)
            } else {
                l.clone().oriented_toward(&xs[i])
            }
        })
        .collect()
}

fn general_position(planes: &[Hyperplane], scale: f64) -> Option<String> {
    let d = planes[0].dim();
    for skip in 0..planes.len() {
        let rows: Vec<&Hyperplane> = planes.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, l)| l).collect();
        let m = nalgebra::DMatrix::from_fn(d, d, |r, c| rows[r].normal[c]);
        if m.determinant().abs() <= 1e-9 {
            return Some(format!("normals without L_{skip} are dependent"));
        }
    }
    let aug = nalgebra::DMatrix::from_fn(d + 1, d + 1, |r, c| {
        if c < d {
            planes[r].normal[c]
        } else {
            -planes[r].offset
        }
    });
    if aug.determinant().abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Some("all hyperplanes pass through a common point".into());
    }
    None
}

/// Checks the halfspace lemma's preconditions and samples the intersection
/// of the positive halfspaces regardless of their outcome.
pub fn halfspace_lemma_diagnostic(
    xs: &[Point],
    o: &Point,
    planes: &[Hyperplane],
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<HalfspaceReport> {
    let d = o.dim();
    if xs.len() != d + 1 || planes.len() != d + 1 {
        return Err(Error::Shape(format!(
            "need {} points and {} hyperplanes in R^{d}",
            d + 1,
            d + 1
        )));
    }
    for l in planes {
        crate::geom::check_dims(d, l.dim())?;
    }
    let scale = scale_of(xs.iter().chain(std::iter::once(o)));
    let tol_abs = tol * scale;
    let mut failed = Vec::new();

    let simplex = match Simplex::new(xs.to_vec()) {
        Ok(s) => Some(s),
        Err(e) => {
            failed.push(HalfspacePrecondition::DegenerateSimplex {
                message: e.to_string(),
            });
            None
        }
    };
    if let Some(s) = &simplex {
        let m = s.interior_margin(o)?;
        if m <= tol {
            failed.push(HalfspacePrecondition::CenterNotInterior { min_coordinate: m });
        }
    }
    let first = planes[0].signed_distance(o);
    if first.abs() <= tol_abs {
        failed.push(HalfspacePrecondition::CenterOnFirstPlane { distance: first });
    }
    if let Some(message) = general_position(planes, scale) {
        failed.push(HalfspacePrecondition::NotGeneralPosition { message });
    }
    let oriented = orient_planes(xs, o, planes, tol_abs);
    for (i, l) in oriented.iter().enumerate() {
        for (j, x) in xs.iter().enumerate() {
            let s = l.signed_distance(x);
            if j == i && s < -tol_abs {
                failed.push(HalfspacePrecondition::VertexOutsideOwnPlane { vertex: j, distance: s });
            }
            if j != i && s > tol_abs {
                failed.push(HalfspacePrecondition::VertexInsideOtherPlane {
                    vertex: j,
                    plane: i,
                    distance: s,
                });
            }
        }
    }

    let mut report = HalfspaceReport {
        preconditions_failed: failed,
        samples: 0,
        violations: 0,
        unbounded: false,
        min_coordinate: f64::INFINITY,
        witnesses: Vec::new(),
        oriented,
    };
    let Some(simplex) = simplex else {
        return Ok(report);
    };
    // O must sit in every positive halfspace for rays from it to sample the
    // intersection.
    if report.oriented.iter().any(|l| l.signed_distance(o) < -tol_abs) {
        return Ok(report);
    }

    let mut rng = crate::seed::rng(seed);
    for _ in 0..n_samples {
        let u = sample::unit_vector(d, &mut rng);
        let mut t_max = f64::INFINITY;
        for l in &report.oriented {
            let rate = crate::geom::dot(&l.normal, &u);
            if rate < 0.0 {
                t_max = t_max.min(l.signed_distance(o).max(0.0) / -rate);
            }
        }
        report.samples += 1;
        if !t_max.is_finite() {
            report.unbounded = true;
            report.violations += 1;
            continue;
        }
        let inner: f64 = rng.random_range(0.0..1.0f64).powf(1.0 / d as f64);
        for t in [t_max * inner, t_max] {
            let p = o.offset(&u, t);
            let m = simplex.interior_margin(&p)?;
            report.min_coordinate = report.min_coordinate.min(m);
            if m < -tol {
                report.violations += 1;
                if report.witnesses.len() < 8 {
                    report.witnesses.push(p);
                }
            }
        }
    }
    Ok(report)
}

/// Strict form: fails with [`Error::Precondition`] naming the first unmet
/// precondition, otherwise samples `⋂ L_i^+` and reports any point outside
/// `conv(X)`.
pub fn halfspace_lemma_check(
    xs: &[Point],
    o: &Point,
    planes: &[Hyperplane],
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<HalfspaceReport> {
    let report = halfspace_lemma_diagnostic(xs, o, planes, n_samples, seed, tol)?;
    if let Some(first) = report.preconditions_failed.first() {
        return Err(Error::Precondition(first.to_string()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::DEFAULT_TOL;
    use crate::order::{construct_unrealizable, ConstructionChoice};
    use crate::pt;

    #[test]
    fn hypothesis_examples() {
        let xs = [pt![-1], pt![1]];
        assert!(lemma_hypothesis_holds(&xs, &[pt![-2], pt![2]], DEFAULT_TOL).unwrap());
        assert!(!lemma_hypothesis_holds(&xs, &[pt![2], pt![-2]], DEFAULT_TOL).unwrap());
        assert!(lemma_hypothesis_holds(&xs, &[pt![0], pt![2]], DEFAULT_TOL).is_err());
    }

    #[test]
    fn conclusion_examples() {
        let xs = [pt![-1], pt![1]];
        let c = lemma_conclusion_check(&xs, &[pt![-2], pt![2]], DEFAULT_TOL).unwrap();
        assert_eq!(c.circumcenter, pt![0]);
        assert_eq!(c.barycentric, vec![0.5, 0.5]);
        assert!(c.passed);
        assert!(matches!(
            lemma_conclusion_check(&xs, &[pt![1], pt![3]], DEFAULT_TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hypothesis_from_cone_sampling_d2() {
        let mut rng = crate::seed::rng(3);
        let xs = vec![pt![0, 0], pt![1, 0], pt![0, 1]];
        let o = Simplex::new(xs.clone()).unwrap().circumcenter().unwrap();
        let ys: Vec<Point> = (0..3)
            .map(|i| loop {
                let y = o.offset(&sample::unit_vector(2, &mut rng), rng.random_range(0.2..2.0));
                if distance_permutation(&y, &xs, DEFAULT_TOL).ok() == Some(cyclic_shift(i, 3)) {
                    break y;
                }
            })
            .collect();
        assert!(lemma_hypothesis_holds(&xs, &ys, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn observation_examples() {
        let t = construct_unrealizable(&ConstructionChoice::identity(1)).unwrap();
        let check = observation_check(&t).unwrap();
        assert_eq!(check.verdicts.len(), 5);
        assert!(check.verdicts.iter().all(|(_, ok)| *ok));

        let t = RankTable::from_rows(2, 3, &[[1, 4, 5], [3, 0, 2]]).unwrap();
        let check = observation_check(&t).unwrap();
        let failures: Vec<_> = check.failures().map(|c| (c.lesser, c.greater)).collect();
        assert_eq!(failures, vec![((1, 0), (1, 2))]);
        assert!(check.part_two_holds());

        let t = RankTable::from_rows(2, 3, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let check = observation_check(&t).unwrap();
        assert!(check.part_two().filter(|(_, ok)| !ok).count() >= 2);

        let t = RankTable::from_rows(2, 2, &[[0, 1], [2, 3]]).unwrap();
        assert!(observation_check(&t).is_err());
    }

    #[test]
    fn instance_index_maps() {
        let mut rng = crate::seed::rng(0);
        let c = crate::realizer::montecarlo::random_configuration(2, 3, 4, &mut rng);
        let [a, b, cc] = three_lemma_instances(&c, DEFAULT_TOL).unwrap();
        assert_eq!(a.x_labels, ["p0", "p1", "p2"]);
        assert_eq!(a.y_labels, ["q0", "q1", "q2"]);
        assert_eq!(b.x_labels, ["q0", "q2", "q1"]);
        assert_eq!(cc.x_labels, ["q3", "q2", "q1"]);
        assert_eq!(cc.y_labels, ["p0", "p1", "p2"]);
    }

    #[test]
    fn instance_shape_guard() {
        let c = Configuration::from_coords(2, &[&[0.0, 0.0], &[1.0, 0.0]], &[&[0.0, 1.0], &[1.0, 1.0], &[2.0, 0.5], &[3.0, 1.0]]).unwrap();
        assert!(matches!(three_lemma_instances(&c, DEFAULT_TOL), Err(Error::Shape(_))));
    }

    #[test]
    fn spheres_pass_through_their_vertices() {
        let mut rng = crate::seed::rng(4);
        for d in 1..=3 {
            for _ in 0..50 {
                let c = crate::realizer::montecarlo::random_configuration(d, d + 1, d + 2, &mut rng);
                let Ok(s) = sphere_steps(&c, DEFAULT_TOL) else { continue };
                assert!(s.q_last_on_s0 < 1e-10, "{}", s.q_last_on_s0);
                assert!(s.q0_on_s_last < 1e-10);
                // Both checks compare the same two distances from O(Q_0).
                assert_eq!(s.center0_closer_to_q0.passed, s.q0_in_b0.passed);
            }
        }
    }

    #[test]
    fn sphere_steps_reject_dependent_q_prime() {
        // Q' = {q_1, q_2} coincide: the hyperplane through them is undefined.
        let c = Configuration::from_coords(
            2,
            &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]],
            &[&[2.0, 2.0], &[0.5, 0.5], &[0.5, 0.5], &[-1.0, 0.3]],
        )
        .unwrap();
        assert!(sphere_steps(&c, DEFAULT_TOL).is_err());
    }

    fn interval_planes() -> Vec<Hyperplane> {
        vec![Hyperplane::new(vec![1.0], 0.5).unwrap(), Hyperplane::new(vec![1.0], -0.5).unwrap()]
    }

    #[test]
    fn halfspace_interval() {
        let report = halfspace_lemma_check(&[pt![-1], pt![1]], &pt![0], &interval_planes(), 200, 1, DEFAULT_TOL).unwrap();
        assert!(report.passed());
        assert!(report.min_coordinate >= 0.25 - 1e-12);
    }

    #[test]
    fn halfspace_center_on_first_plane() {
        let planes = vec![Hyperplane::new(vec![1.0], 0.0).unwrap(), Hyperplane::new(vec![1.0], -0.5).unwrap()];
        let err = halfspace_lemma_check(&[pt![-1], pt![1]], &pt![0], &planes, 10, 1, DEFAULT_TOL).unwrap_err();
        assert!(err.to_string().contains("O ∉ L_0"), "{err}");
    }

    #[test]
    fn halfspace_detects_violation() {
        // L_0 = {x = 2}: its positive side reaches beyond x_1 = 1.
        let planes = vec![Hyperplane::new(vec![1.0], 2.0).unwrap(), Hyperplane::new(vec![1.0], -0.5).unwrap()];
        let report = halfspace_lemma_diagnostic(&[pt![-1], pt![1]], &pt![0], &planes, 100, 1, DEFAULT_TOL).unwrap();
        assert!(!report.preconditions_failed.is_empty());
        assert!(report.violations > 0);
    }
}
