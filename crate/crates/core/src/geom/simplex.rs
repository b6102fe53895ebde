use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_dims, scale_of, sub, Point, Sphere};
use crate::error::{Error, Result};

/// `d + 1` affinely independent points of `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Simplex {
    vertices: Vec<Point>,
    scale: f64,
    /// Rows are `v_i - v_0`, `i = 1..=d`.
    edges: DMatrix<f64>,
}

impl TryFrom<Vec<Point>> for Simplex {
    type Error = Error;

    fn try_from(v: Vec<Point>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Point> {
    fn from(s: Simplex) -> Self {
        s.vertices
    }
}

impl Simplex {
    /// Requires `|det(v_i - v_0)| > 1e-10 * diameter^d`.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::with_conditioning(vertices, 1e-10)
    }

    /// Like [`Simplex::new`] with a caller-chosen relative determinant bound.
    pub fn with_conditioning(vertices: Vec<Point>, min_ratio: f64) -> Result<Self> {
        let d = vertices
            .first()
            .ok_or_else(|| Error::Degenerate("empty simplex".into()))?
            .dim();
        if vertices.len() != d + 1 {
            return Err(Error::Shape(format!(
                "a simplex in R^{d} has {} vertices, got {}",
                d + 1,
                vertices.len()
            )));
        }
        for v in &vertices {
            check_dims(d, v.dim())?;
        }
        let base = vertices[0].coords();
        let edges = DMatrix::from_fn(d, d, |r, c| vertices[r + 1].coords()[c] - base[c]);
        let scale = scale_of(vertices.iter());
        let det = edges.determinant();
        if !(det.abs() > min_ratio * scale.powi(d as i32)) {
            return Err(Error::Degenerate(format!(
                "affinely dependent simplex (|det| = {:.3e}, scale = {scale:.3e})",
                det.abs()
            )));
        }
        Ok(Self {
            vertices,
            scale,
            edges,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Diameter of the vertex set.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `det(v_1 - v_0, ..., v_d - v_0)`.
    pub fn affine_det(&self) -> f64 {
        self.edges.determinant()
    }

    fn solve(&self, matrix: DMatrix<f64>, rhs: DVector<f64>) -> Result<DVector<f64>> {
        matrix
            .lu()
            .solve(&rhs)
            .filter(|x| x.iter().all(|v| v.is_finite()))
            .ok_or_else(|| Error::Degenerate("singular simplex system".into()))
    }

    /// Unique point equidistant from all vertices. Solves
    /// `2 <v_i - v_0, w> = |v_i - v_0|^2` for `w = center - v_0`.
    pub fn circumcenter(&self) -> Result<Point> {
        let d = self.dim();
        let a = self.edges.clone() * 2.0;
        let b = DVector::from_fn(d, |r, _| self.edges.row(r).norm_squared());
        let w = self.solve(a, b)?;
        let base = self.vertices[0].coords();
        Point::new((0..d).map(|c| base[c] + w[c]).collect())
    }

    pub fn circumsphere(&self) -> Result<Sphere> {
        let center = self.circumcenter()?;
        let radius = super::squared_distance_unchecked(center.coords(), self.vertices[0].coords())
            .sqrt();
        Ok(Sphere { center, radius })
    }

    /// Affine coordinates of `p` (summing to 1).
    pub fn barycentric(&self, p: &Point) -> Result<Vec<f64>> {
        check_dims(self.dim(), p.dim())?;
        let d = self.dim();
        let rel = sub(p.coords(), self.vertices[0].coords());
        let lambda = self.solve(self.edges.transpose(), DVector::from_vec(rel))?;
        let mut out = Vec::with_capacity(d + 1);
        out.push(1.0 - lambda.sum());
        out.extend(lambda.iter());
        Ok(out)
    }

    /// Smallest barycentric coordinate of `p`: positive strictly inside,
    /// negative outside.
    pub fn interior_margin(&self, p: &Point) -> Result<f64> {
        Ok(self
            .barycentric(p)?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }

    /// Closed-hull membership: every coordinate `>= -tol`.
    pub fn contains(&self, p: &Point, tol: f64) -> Result<bool> {
        Ok(self.interior_margin(p)? >= -tol)
    }

    /// Strict interior: every coordinate `> tol`.
    pub fn strictly_contains(&self, p: &Point, tol: f64) -> Result<bool> {
        Ok(self.interior_margin(p)? > tol)
    }

    /// Reconstructs the point with the given affine coordinates.
    pub fn point_at(&self, coords: &[f64]) -> Result<Point> {
        if coords.len() != self.vertices.len() {
            return Err(Error::Shape("wrong number of barycentric coordinates".into()));
        }
        let d = self.dim();
        let mut out = vec![0.0; d];
        for (w, v) in coords.iter().zip(&self.vertices) {
            for (o, x) in out.iter_mut().zip(v.coords()) {
                *o += w * x;
            }
        }
        Point::new(out)
    }

    /// Facet opposite vertex `i`.
    pub fn facet(&self, i: usize) -> Vec<Point> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, v)| v.clone())
            .collect()
    }
}
