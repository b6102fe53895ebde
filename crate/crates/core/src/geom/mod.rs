//! Numerical geometry for the proof objects: bisectors, circumspheres,
//! simplices and the cones of the distance-permutation arrangement.
//!
//! Everything is `f64` with explicit tolerances. Inputs are assumed generic;
//! degeneracies are detected and rejected rather than resolved. Absolute
//! thresholds are derived from the diameter of the points involved.

mod cone;
pub mod sample;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cone::{
    cone_coverage_check, cone_coverage_check_with, cone_generators, distance_permutation,
    dual_cone_membership, edge_vectors, ConeMembership, CoverageReport, UncoveredDirection,
};
pub use simplex::Simplex;

/// Default relative tolerance for comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point of `R^d`, `d >= 1`, with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Degenerate("points need at least one coordinate".into()));
        }
        if let Some(bad) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::Degenerate(format!("non-finite coordinate {bad}")));
        }
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: &[f64], t: f64) -> Point {
        Point(self.0.iter().zip(dir).map(|(a, b)| a + t * b).collect())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Builds a point from literal coordinates; panics on non-finite input.
#[macro_export]
macro_rules! pt {
    ($($x:expr),+ $(,)?) => {
        $crate::geom::Point::new(vec![$(f64::from($x)),+]).expect("finite literal point")
    };
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub fn squared_distance(a: &Point, b: &Point) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(squared_distance_unchecked(a.coords(), b.coords()))
}

#[inline]
pub(crate) fn squared_distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Largest pairwise distance, or 0 for fewer than two points.
pub fn diameter<'a>(points: impl IntoIterator<Item = &'a Point>) -> f64 {
    let pts: Vec<&Point> = points.into_iter().collect();
    let mut best = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max(squared_distance_unchecked(a.coords(), b.coords()));
        }
    }
    best.sqrt()
}

/// Diameter, falling back to the largest coordinate magnitude (or 1) when all
/// points coincide, so that relative tolerances never collapse to zero.
pub(crate) fn scale_of<'a>(points: impl IntoIterator<Item = &'a Point> + Clone) -> f64 {
    let d = diameter(points.clone());
    if d > 0.0 {
        return d;
    }
    points
        .into_iter()
        .flat_map(|p| p.coords().iter().map(|x| x.abs()))
        .fold(1.0f64, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
    On,
}

/// `{x : <normal, x> = offset}` with a unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    /// Normalizes `normal` to unit length.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm(&normal);
        if !(len.is_finite() && len > 0.0) || !offset.is_finite() {
            return Err(Error::Degenerate("hyperplane normal must be nonzero".into()));
        }
        Ok(Self {
            normal: normal.iter().map(|x| x / len).collect(),
            offset: offset / len,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn signed_distance(&self, p: &Point) -> f64 {
        dot(&self.normal, p.coords()) - self.offset
    }

    /// Sign of `<normal, p> - offset` with a dead zone of `tol`.
    pub fn side(&self, p: &Point, tol: f64) -> Side {
        let s = self.signed_distance(p);
        if s > tol {
            Side::Positive
        } else if s < -tol {
            Side::Negative
        } else {
            Side::On
        }
    }

    pub fn flipped(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -self.offset,
        }
    }

    /// Flips the orientation if needed so that `p` is not on the negative side.
    pub fn oriented_toward(self, p: &Point) -> Self {
        if self.signed_distance(p) < 0.0 {
            self.flipped()
        } else {
            self
        }
    }
}

/// Perpendicular bisector of `xy`, oriented so its positive side is the
/// closed halfspace containing `y` (the points at least as close to `y`).
pub fn bisector(x: &Point, y: &Point) -> Result<Hyperplane> {
    check_dims(x.dim(), y.dim())?;
    let dir = sub(y.coords(), x.coords());
    let len = norm(&dir);
    let scale = x
        .coords()
        .iter()
        .chain(y.coords())
        .fold(1.0f64, |a, b| a.max(b.abs()));
    if len <= f64::EPSILON * scale {
        return Err(Error::Degenerate("bisector of coincident points".into()));
    }
    let mid: Vec<f64> = x.coords().iter().zip(y.coords()).map(|(a, b)| 0.5 * (a + b)).collect();
    Hyperplane::new(dir.clone(), dot(&dir, &mid))
}

/// Hyperplane through `d` affinely independent points of `R^d`. The normal is
/// the generalized cross product of the edge vectors; its sign is arbitrary.
pub fn hyperplane_through(points: &[Point]) -> Result<Hyperplane> {
    let d = points
        .first()
        .ok_or_else(|| Error::Degenerate("no points".into()))?
        .dim();
    if points.len() != d {
        return Err(Error::Shape(format!(
            "a hyperplane of R^{d} needs {d} points, got {}",
            points.len()
        )));
    }
    for p in points {
        check_dims(d, p.dim())?;
    }
    let base = points[0].coords();
    let normal: Vec<f64> = if d == 1 {
        vec![1.0]
    } else {
        let rows: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p.coords(), base)).collect();
        (0..d)
            .map(|k| {
                let minor = nalgebra::DMatrix::from_fn(d - 1, d - 1, |r, c| {
                    rows[r][if c < k { c } else { c + 1 }]
                });
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * minor.determinant()
            })
            .collect()
    };
    let scale = scale_of(points.iter());
    if norm(&normal) <= 1e-10 * scale.powi(d as i32 - 1) {
        return Err(Error::Degenerate(
            "points do not span a hyperplane".into(),
        ));
    }
    let plane = Hyperplane::new(normal.clone(), dot(&normal, base))?;
    Ok(plane)
}

/// Closed ball / sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
}

impl Sphere {
    /// `radius - |p - center|`: positive inside, negative outside.
    pub fn margin(&self, p: &Point) -> f64 {
        self.radius - squared_distance_unchecked(self.center.coords(), p.coords()).sqrt()
    }

    /// Closed-ball membership with absolute slack `tol`.
    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.margin(p) >= -tol
    }
}
