//! Distance permutations and the cones of the bisector arrangement.
//!
//! For reference points `x_0..x_d`, the bisectors `M(x_i, x_j)` all pass
//! through the circumcenter and cut space into cones, one per distance
//! permutation. The cone `C_i` of the cyclic permutation `(i, i+1, ..., i-1)`
//! is `{y : <y - O, v_j> >= 0 for j != i-1}` with `v_j = x_j - x_{j+1}`, so
//! its dual is generated by `{v_j : j != i-1}`. Because the `v_j` sum to
//! zero these duals cover space.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_dims, norm, sample, scale_of, squared_distance_unchecked, sub, Point};
use crate::error::{Error, Result};

/// Indices of `xs` sorted by increasing distance from `y`. Fails when two
/// squared distances differ by at most `tol * scale^2`.
pub fn distance_permutation(y: &Point, xs: &[Point], tol: f64) -> Result<Vec<usize>> {
    for x in xs {
        check_dims(y.dim(), x.dim())?;
    }
    let dists: Vec<f64> = xs
        .iter()
        .map(|x| squared_distance_unchecked(x.coords(), y.coords()))
        .collect();
    let mut perm: Vec<usize> = (0..xs.len()).collect();
    perm.sort_by(|&a, &b| dists[a].total_cmp(&dists[b]));
    let scale = scale_of(xs.iter().chain(std::iter::once(y)));
    let threshold = tol * scale * scale;
    for w in perm.windows(2) {
        if dists[w[1]] - dists[w[0]] <= threshold {
            return Err(Error::Degenerate(format!(
                "query point is equidistant from x_{} and x_{} within tolerance",
                w[0], w[1]
            )));
        }
    }
    Ok(perm)
}

/// `v_j = x_j - x_{j+1}` with indices modulo `xs.len()`.
pub fn edge_vectors(xs: &[Point]) -> Vec<Vec<f64>> {
    let k = xs.len();
    (0..k)
        .map(|j| sub(xs[j].coords(), xs[(j + 1) % k].coords()))
        .collect()
}

/// Generators of the dual cone `C_i^*`: every edge vector except
/// `v_{i-1}`, listed from `v_i` onward.
pub fn cone_generators(edges: &[Vec<f64>], i: usize) -> Vec<Vec<f64>> {
    let k = edges.len();
    (0..k - 1).map(|t| edges[(i + t) % k].clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeMembership {
    pub member: bool,
    pub coefficients: Vec<f64>,
}

/// Solves `u = sum_t alpha_t g_t` over `d` generators of `R^d`; `u` is in
/// the cone iff every `alpha_t >= -tol * |u| / min_t |g_t|`.
pub fn dual_cone_membership(u: &[f64], generators: &[Vec<f64>], tol: f64) -> Result<ConeMembership> {
    let d = u.len();
    if generators.len() != d {
        return Err(Error::Shape(format!(
            "need {d} generators in R^{d}, got {}",
            generators.len()
        )));
    }
    for g in generators {
        check_dims(d, g.len())?;
    }
    let g = DMatrix::from_fn(d, d, |r, c| generators[c][r]);
    let lengths: Vec<f64> = generators.iter().map(|g| norm(g)).collect();
    let volume: f64 = lengths.iter().product();
    let det = g.determinant();
    if !(det.abs() > 1e-12 * volume) {
        return Err(Error::Degenerate(format!(
            "dependent cone generators (|det| = {:.3e})",
            det.abs()
        )));
    }
    let alpha = g
        .lu()
        .solve(&DVector::from_column_slice(u))
        .ok_or_else(|| Error::Degenerate("singular generator matrix".into()))?;
    let shortest = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
    let slack = tol * norm(u) / shortest;
    Ok(ConeMembership {
        member: alpha.iter().all(|&a| a >= -slack),
        coefficients: alpha.iter().copied().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncoveredDirection {
    pub direction: Vec<f64>,
    /// Coefficients against each tested cone, in the order tested.
    pub coefficients: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub samples: usize,
    pub cones: Vec<usize>,
    pub uncovered: Vec<UncoveredDirection>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Samples random unit directions and checks each lies in some `C_i^*`.
pub fn cone_coverage_check(xs: &[Point], n_samples: usize, seed: u64) -> Result<CoverageReport> {
    let all: Vec<usize> = (0..xs.len()).collect();
    cone_coverage_check_with(xs, &all, n_samples, seed)
}

/// As [`cone_coverage_check`], restricted to the cones listed in `cones`.
pub fn cone_coverage_check_with(
    xs: &[Point],
    cones: &[usize],
    n_samples: usize,
    seed: u64,
) -> Result<CoverageReport> {
    let d = xs
        .first()
        .ok_or_else(|| Error::Shape("no reference points".into()))?
        .dim();
    if xs.len() != d + 1 {
        return Err(Error::Shape(format!(
            "need {} reference points in R^{d}, got {}",
            d + 1,
            xs.len()
        )));
    }
    if let Some(&bad) = cones.iter().find(|&&i| i > d) {
        return Err(Error::Shape(format!("cone index {bad} out of range")));
    }
    let edges = edge_vectors(xs);
    let generators: Vec<Vec<Vec<f64>>> = cones.iter().map(|&i| cone_generators(&edges, i)).collect();
    let mut rng = crate::seed::rng(seed);
    let mut uncovered = Vec::new();
    for _ in 0..n_samples {
        let u = sample::unit_vector(d, &mut rng);
        let mut coefficients = Vec::with_capacity(cones.len());
        let mut covered = false;
        for g in &generators {
            let m = dual_cone_membership(&u, g, 1e-12)?;
            if m.member {
                covered = true;
                break;
            }
            coefficients.push(m.coefficients);
        }
        if !covered {
            uncovered.push(UncoveredDirection {
                direction: u,
                coefficients,
            });
        }
    }
    Ok(CoverageReport {
        samples: n_samples,
        cones: cones.to_vec(),
        uncovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{bisector, Side, Simplex};
    use crate::pt;

    #[test]
    fn permutation_examples() {
        let xs = [pt![-1], pt![1]];
        assert_eq!(distance_permutation(&pt![-0.5], &xs, 1e-9).unwrap(), vec![0, 1]);

        let xs = [pt![0, 0], pt![1, 0], pt![0, 1]];
        assert_eq!(
            distance_permutation(&pt![0.9, 0.1], &xs, 1e-9).unwrap(),
            vec![1, 0, 2]
        );

        assert!(matches!(
            distance_permutation(&pt![0], &[pt![-1], pt![1]], 1e-9),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn edge_vector_examples() {
        let v = edge_vectors(&[pt![0, 0], pt![1, 0], pt![0, 1]]);
        assert_eq!(v, vec![vec![-1.0, 0.0], vec![1.0, -1.0], vec![0.0, 1.0]]);
        let v = edge_vectors(&[pt![-1], pt![1]]);
        assert_eq!(v, vec![vec![-2.0], vec![2.0]]);
    }

    #[test]
    fn membership_examples() {
        let gens = vec![vec![1.0, -1.0], vec![0.0, 1.0]];
        let m = dual_cone_membership(&[1.0, 0.0], &gens, 1e-12).unwrap();
        assert!(m.member);
        assert!((m.coefficients[0] - 1.0).abs() < 1e-15 && (m.coefficients[1] - 1.0).abs() < 1e-15);

        let m = dual_cone_membership(&[1.0, -1.0], &gens, 1e-12).unwrap();
        assert!(m.member);
        assert!((m.coefficients[0] - 1.0).abs() < 1e-15 && m.coefficients[1].abs() < 1e-15);

        let gens = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = dual_cone_membership(&[-1.0, -1.0], &gens, 1e-12).unwrap();
        assert!(!m.member);
        assert_eq!(m.coefficients, vec![-1.0, -1.0]);

        let gens = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        assert!(matches!(
            dual_cone_membership(&[1.0, 0.0], &gens, 1e-12),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn coverage_triangle() {
        let xs = [pt![0, 0], pt![1, 0], pt![0, 1]];
        let report = cone_coverage_check(&xs, 1000, 0).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn coverage_line() {
        let xs = [pt![-1], pt![1]];
        let edges = edge_vectors(&xs);
        assert_eq!(cone_generators(&edges, 0), vec![vec![-2.0]]);
        assert_eq!(cone_generators(&edges, 1), vec![vec![2.0]]);
        assert!(cone_coverage_check(&xs, 100, 1).unwrap().passed());
    }

    #[test]
    fn dropping_a_cone_leaves_gaps() {
        let mut rng = crate::seed::rng(2);
        for d in 1..=4 {
            let s = sample::conditioned_simplex(d, &mut rng, 1e-3);
            let cones: Vec<usize> = (1..=d).collect();
            let report = cone_coverage_check_with(s.vertices(), &cones, 2000, 4).unwrap();
            assert!(!report.passed(), "d={d}: truncated cone list still covered");
            let bad = &report.uncovered[0];
            assert_eq!(bad.coefficients.len(), d);
        }
    }

    #[test]
    fn cyclic_permutation_iff_bisector_halfspaces() {
        let mut rng = crate::seed::rng(8);
        for d in 1..=4 {
            for _ in 0..300 {
                let s: Simplex = sample::conditioned_simplex(d, &mut rng, 1e-3);
                let xs = s.vertices();
                let y = sample::uniform_point(d, &mut rng, -2.0, 2.0);
                let Ok(perm) = distance_permutation(&y, xs, 1e-9) else { continue };
                for i in 0..=d {
                    let cyclic: Vec<usize> = (0..=d).map(|t| (i + t) % (d + 1)).collect();
                    let in_cone = (0..d).all(|t| {
                        let a = (i + t) % (d + 1);
                        let b = (i + t + 1) % (d + 1);
                        bisector(&xs[b], &xs[a]).unwrap().side(&y, 0.0) == Side::Positive
                    });
                    assert_eq!(perm == cyclic, in_cone);
                }
            }
        }
    }
}
