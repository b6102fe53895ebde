//! Randomized falsification suites for the geometric lemmas and the main
//! theorem. Trials run in parallel; trial `k` of a suite draws from its own
//! stream derived from `(seed, d, k)`, so reports are identical across runs
//! and thread counts.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lemmas::{cyclic_shift, halfspace_lemma_diagnostic, lemma_conclusion_unchecked, lemma_hypothesis};
use super::{induced_order, three_lemma_instances, Configuration};
use crate::error::Error;
use crate::geom::{
    bisector, cone_coverage_check, diameter, dot, distance_permutation, edge_vectors, norm, sample,
    squared_distance_unchecked, Hyperplane, Point, Side, Simplex, DEFAULT_TOL,
};
use crate::order::{is_unrealizable, is_unrealizable_for, ChainReading};
use crate::seed::{derive, rng};

/// Points of `P` and `Q` uniform in `[-1, 1]^d`.
pub fn random_configuration<R: Rng + ?Sized>(d: usize, n: usize, m: usize, rng: &mut R) -> Configuration {
    let p = (0..n).map(|_| sample::uniform_point(d, rng, -1.0, 1.0)).collect();
    let q = (0..m).map(|_| sample::uniform_point(d, rng, -1.0, 1.0)).collect();
    Configuration::new(d, p, q).expect("valid shape")
}

fn trial_rng(seed: u64, suite: u64, d: usize, k: usize) -> ChaCha8Rng {
    rng(derive(derive(derive(seed, suite), d as u64), k as u64))
}

const LEMMA: u64 = 1;
const HALFSPACE: u64 = 2;
const CONES: u64 = 3;
const KERNEL: u64 = 4;
const THEOREM: u64 = 5;
const SCALE: u64 = 6;
const INSTANCES: u64 = 7;

/// Draws before a rejection sampler gives up on the current simplex.
const MAX_REJECTIONS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSuiteReport {
    pub d: usize,
    pub trials: usize,
    /// Smallest barycentric coordinate of `O(X)` in `Y` over all trials.
    pub min_coordinate: f64,
    /// Trials with a coordinate at or below the threshold.
    pub failures: usize,
    pub threshold: f64,
}

impl LemmaSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Draws `y` around `center` until its distance permutation w.r.t. `xs` is
/// `want`.
fn sample_with_permutation(
    xs: &[Point],
    center: &Point,
    radius: f64,
    want: &[usize],
    rng: &mut ChaCha8Rng,
) -> Option<Point> {
    let d = center.dim();
    for _ in 0..MAX_REJECTIONS {
        let r = radius * rng.random_range(0.05..2.0);
        let y = center.offset(&sample::unit_vector(d, rng), r);
        if distance_permutation(&y, xs, DEFAULT_TOL).ok().as_deref() == Some(want) {
            return Some(y);
        }
    }
    None
}

fn lemma_pair(d: usize, rng: &mut ChaCha8Rng) -> (Vec<Point>, Vec<Point>) {
    loop {
        let x = sample::conditioned_simplex(d, rng, 1e-2);
        let Ok(sphere) = x.circumsphere() else { continue };
        let xs = x.vertices().to_vec();
        let ys: Option<Vec<Point>> = (0..=d)
            .map(|i| sample_with_permutation(&xs, &sphere.center, sphere.radius, &cyclic_shift(i, d + 1), rng))
            .collect();
        let Some(ys) = ys else { continue };
        if Simplex::new(ys.clone()).is_ok() && matches!(lemma_hypothesis(&xs, &ys, DEFAULT_TOL), Ok(h) if h.holds) {
            return (xs, ys);
        }
    }
}

/// Circumcenter lemma over `trials` hypothesis-satisfying pairs `(X, Y)`.
pub fn lemma_suite(d: usize, trials: usize, seed: u64) -> LemmaSuiteReport {
    let threshold = DEFAULT_TOL;
    let mins: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, LEMMA, d, k);
            let (xs, ys) = lemma_pair(d, &mut rng);
            lemma_conclusion_unchecked(&xs, &ys, threshold)
                .map(|c| c.min_coordinate)
                .unwrap_or(f64::NEG_INFINITY)
        })
        .collect();
    LemmaSuiteReport {
        d,
        trials,
        min_coordinate: mins.iter().cloned().fold(f64::INFINITY, f64::min),
        failures: mins.iter().filter(|&&m| !(m > threshold)).count(),
        threshold,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceSuiteReport {
    pub d: usize,
    pub instances: usize,
    pub samples_per_instance: usize,
    /// Sampled points of the intersection outside `conv(X)`.
    pub violations: usize,
    pub unbounded: usize,
    pub min_coordinate: f64,
}

impl HalfspaceSuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.unbounded == 0
    }
}

/// A random instance satisfying every precondition of the halfspace lemma:
/// `L_i` starts parallel to the facet opposite `x_i`, between the facet and
/// `O`, and is then tilted at random.
pub fn halfspace_instance(d: usize, rng: &mut ChaCha8Rng) -> (Vec<Point>, Point, Vec<Hyperplane>) {
    loop {
        let x = sample::conditioned_simplex(d, rng, 1e-2);
        let xs = x.vertices().to_vec();
        let o = x
            .point_at(&sample::interior_weights(d + 1, rng, 0.05))
            .expect("matching weights");
        let tilt = rng.random_range(0.0..0.5);
        let planes: Option<Vec<Hyperplane>> = (0..=d)
            .map(|i| {
                let facet = x.facet(i);
                let h = crate::geom::hyperplane_through(&facet).ok()?.oriented_toward(&xs[i]);
                let mut normal = h.normal.clone();
                for (c, g) in normal.iter_mut().zip(sample::unit_vector(d, rng)) {
                    *c += tilt * g;
                }
                let centroid: Vec<f64> = (0..d)
                    .map(|c| facet.iter().map(|p| p.coords()[c]).sum::<f64>() / d as f64)
                    .collect();
                let s = rng.random_range(0.05..0.95);
                let anchor: Vec<f64> = centroid
                    .iter()
                    .zip(o.coords())
                    .map(|(f, oc)| f + s * (oc - f))
                    .collect();
                let offset = dot(&normal, &anchor);
                Hyperplane::new(normal, offset).ok()
            })
            .collect();
        let Some(planes) = planes else { continue };
        let scale = crate::geom::scale_of(xs.iter());
        let Ok(report) = halfspace_lemma_diagnostic(&xs, &o, &planes, 0, 0, DEFAULT_TOL) else { continue };
        // Keep clear of the tolerance band so the instance is unambiguous.
        let clear = report.oriented.iter().enumerate().all(|(i, l)| {
            l.signed_distance(&o) > 1e-6 * scale
                && xs.iter().enumerate().all(|(j, xj)| {
                    let s = l.signed_distance(xj);
                    if i == j { s > 1e-6 * scale } else { s < -1e-6 * scale }
                })
        });
        if report.preconditions_failed.is_empty() && clear {
            return (xs, o, planes);
        }
    }
}

/// Halfspace lemma over `instances` random precondition-satisfying
/// instances, sampling `samples` rays from `O` in each.
pub fn halfspace_suite(d: usize, instances: usize, samples: usize, seed: u64) -> HalfspaceSuiteReport {
    let reports: Vec<_> = (0..instances)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, HALFSPACE, d, k);
            let (xs, o, planes) = halfspace_instance(d, &mut rng);
            let run_seed = rng.random();
            halfspace_lemma_diagnostic(&xs, &o, &planes, samples, run_seed, DEFAULT_TOL)
                .expect("instance has valid shape")
        })
        .collect();
    HalfspaceSuiteReport {
        d,
        instances,
        samples_per_instance: samples,
        violations: reports.iter().map(|r| r.violations).sum(),
        unbounded: reports.iter().filter(|r| r.unbounded).count(),
        min_coordinate: reports.iter().map(|r| r.min_coordinate).fold(f64::INFINITY, f64::min),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSuiteReport {
    pub d: usize,
    pub simplices: usize,
    pub directions: usize,
    /// Largest `|sum_j v_j|` seen, relative to the simplex diameter.
    pub max_edge_sum: f64,
    pub uncovered: usize,
    pub consistency_trials: usize,
    /// Query points whose distance permutation disagrees with the bisector
    /// halfspaces for some cyclic cone.
    pub consistency_failures: usize,
    /// Query points skipped because of a distance tie.
    pub consistency_skipped: usize,
}

impl ConeSuiteReport {
    pub fn passed(&self) -> bool {
        self.max_edge_sum <= 1e-12 && self.uncovered == 0 && self.consistency_failures == 0
    }
}

/// Edge-sum identity and dual-cone coverage over random simplices, plus the
/// agreement between cyclic distance permutations and bisector halfspaces.
pub fn cone_suite(d: usize, simplices: usize, directions: usize, consistency_trials: usize, seed: u64) -> ConeSuiteReport {
    let coverage: Vec<(f64, usize)> = (0..simplices)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, CONES, d, k);
            let s = sample::conditioned_simplex(d, &mut rng, 1e-3);
            let mut sum = vec![0.0; d];
            for v in edge_vectors(s.vertices()) {
                sum.iter_mut().zip(&v).for_each(|(a, b)| *a += b);
            }
            let report = cone_coverage_check(s.vertices(), directions, rng.random()).expect("valid simplex");
            (norm(&sum) / s.scale(), report.uncovered.len())
        })
        .collect();
    let consistency: Vec<Option<bool>> = (0..consistency_trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, CONES, d, simplices + k);
            let s = sample::conditioned_simplex(d, &mut rng, 1e-3);
            let xs = s.vertices();
            let y = sample::uniform_point(d, &mut rng, -2.0, 2.0);
            let perm = distance_permutation(&y, xs, DEFAULT_TOL).ok()?;
            Some((0..=d).all(|i| {
                let in_cone = (0..d).all(|t| {
                    let a = (i + t) % (d + 1);
                    let b = (a + 1) % (d + 1);
                    bisector(&xs[b], &xs[a]).expect("distinct vertices").side(&y, 0.0) == Side::Positive
                });
                (perm == cyclic_shift(i, d + 1)) == in_cone
            }))
        })
        .collect();
    ConeSuiteReport {
        d,
        simplices,
        directions,
        max_edge_sum: coverage.iter().map(|c| c.0).fold(0.0, f64::max),
        uncovered: coverage.iter().map(|c| c.1).sum(),
        consistency_trials,
        consistency_failures: consistency.iter().filter(|c| **c == Some(false)).count(),
        consistency_skipped: consistency.iter().filter(|c| c.is_none()).count(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSuiteReport {
    pub d: usize,
    pub trials: usize,
    /// Largest `(max_i |O - x_i| - min_i |O - x_i|) / max_i |O - x_i|`.
    pub max_circumcenter_residual: f64,
    /// Largest `|sum_i lambda_i x_i - p|` for random `p`, relative to the
    /// diameter of the vertices together with `p`.
    pub max_barycentric_error: f64,
}

impl KernelSuiteReport {
    pub fn passed(&self) -> bool {
        self.max_circumcenter_residual < 1e-10 && self.max_barycentric_error < 1e-10
    }
}

/// Circumcenter equidistance and barycentric round-trip accuracy on
/// conditioned random simplices.
pub fn kernel_suite(d: usize, trials: usize, seed: u64) -> KernelSuiteReport {
    let errs: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, KERNEL, d, k);
            let s = sample::conditioned_simplex(d, &mut rng, 1e-3);
            let c = s.circumcenter().expect("conditioned simplex");
            let dists: Vec<f64> = s
                .vertices()
                .iter()
                .map(|v| squared_distance_unchecked(v.coords(), c.coords()).sqrt())
                .collect();
            let hi = dists.iter().cloned().fold(0.0, f64::max);
            let lo = dists.iter().cloned().fold(f64::INFINITY, f64::min);
            let p = sample::uniform_point(d, &mut rng, -1.5, 1.5);
            let back = s.point_at(&s.barycentric(&p).expect("conditioned simplex")).expect("same length");
            let scale = diameter(s.vertices().iter().chain(std::iter::once(&p)));
            let err = squared_distance_unchecked(back.coords(), p.coords()).sqrt() / scale;
            ((hi - lo) / hi, err)
        })
        .collect();
    KernelSuiteReport {
        d,
        trials,
        max_circumcenter_residual: errs.iter().map(|e| e.0).fold(0.0, f64::max),
        max_barycentric_error: errs.iter().map(|e| e.1).fold(0.0, f64::max),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremSuiteReport {
    pub d: usize,
    pub trials: usize,
    /// Draws rejected for distance ties.
    pub discarded: usize,
    /// Induced orders satisfying every chain as stated.
    pub hits: usize,
    /// Induced orders satisfying the closed-row chains.
    pub closed_row_hits: usize,
    /// The first few configurations counted in `hits`.
    pub examples: Vec<Configuration>,
}

impl TheoremSuiteReport {
    /// No sampled configuration induced an order satisfying the stated chains.
    pub fn passed(&self) -> bool {
        self.hits == 0
    }
}

/// Counts random `(d+1) x (d+2)` configurations in `[-1, 1]^d` whose
/// induced order satisfies the chain properties, under both readings.
pub fn theorem_suite(d: usize, trials: usize, seed: u64) -> TheoremSuiteReport {
    let outcomes: Vec<Option<(bool, bool, Configuration)>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, THEOREM, d, k);
            let c = random_configuration(d, d + 1, d + 2, &mut rng);
            let t = induced_order(&c, DEFAULT_TOL).ok()?;
            let stated = is_unrealizable(&t).expect("shape matches").holds();
            let closed = is_unrealizable_for(&t, ChainReading::ClosedRows).expect("shape matches").holds();
            Some((stated, closed, c))
        })
        .collect();
    TheoremSuiteReport {
        d,
        trials,
        discarded: outcomes.iter().filter(|o| o.is_none()).count(),
        hits: outcomes.iter().flatten().filter(|o| o.0).count(),
        closed_row_hits: outcomes.iter().flatten().filter(|o| o.1).count(),
        examples: outcomes.into_iter().flatten().filter(|o| o.0).take(5).map(|o| o.2).collect(),
    }
}

/// Fraction of random configurations for which each of the three lemma
/// instances has its hypothesis satisfied.
pub fn instance_hypothesis_rates(d: usize, trials: usize, seed: u64) -> [f64; 3] {
    let flags: Vec<[bool; 3]> = (0..trials)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = trial_rng(seed, INSTANCES, d, k);
            let c = random_configuration(d, d + 1, d + 2, &mut rng);
            let inst = three_lemma_instances(&c, DEFAULT_TOL).ok()?;
            Some(inst.map(|i| i.hypothesis.holds))
        })
        .collect();
    let total = flags.len().max(1) as f64;
    std::array::from_fn(|k| flags.iter().filter(|f| f[k]).count() as f64 / total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSuiteReport {
    pub trials: usize,
    pub mismatches: usize,
    /// Trials skipped because the base configuration has ties.
    pub skipped: usize,
}

impl ScaleSuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// Random orthogonal `d x d` matrix (Gram-Schmidt on Gaussian columns).
fn random_rotation(d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
        for _ in 0..d {
            let mut v = sample::unit_vector(d, rng);
            for r in &rows {
                let proj = dot(&v, r);
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= proj * b);
            }
            let len = norm(&v);
            if len < 1e-6 {
                break;
            }
            v.iter_mut().for_each(|a| *a /= len);
            rows.push(v);
        }
        if rows.len() == d {
            return rows;
        }
    }
}

/// Induced orders are unchanged by rigid motions and uniform scaling.
pub fn scale_invariance_suite(trials: usize, seed: u64) -> ScaleSuiteReport {
    let outcomes: Vec<Option<bool>> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, SCALE, 0, k);
            let d = rng.random_range(1..=3usize);
            let n = rng.random_range(2..=d + 2);
            let m = rng.random_range(n..=n + 2);
            let c = random_configuration(d, n, m, &mut rng);
            // A wider dead zone on the base configuration keeps every gap far
            // above the rounding error of the transform.
            let base = induced_order(&c, 1e-6).ok()?;
            let rotation = random_rotation(d, &mut rng);
            let scale = 10f64.powf(rng.random_range(-3.0..3.0));
            let shift: Vec<f64> = (0..d).map(|_| rng.random_range(-100.0..100.0)).collect();
            let moved = c.transformed(&rotation, scale, &shift).expect("finite transform");
            Some(matches!(induced_order(&moved, DEFAULT_TOL), Ok(t) if t == base))
        })
        .collect();
    ScaleSuiteReport {
        trials,
        mismatches: outcomes.iter().filter(|o| **o == Some(false)).count(),
        skipped: outcomes.iter().filter(|o| o.is_none()).count(),
    }
}

/// Every suite at a common trial count, as run by the command-line
/// `lemma-test`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: usize,
    pub lemma: Vec<LemmaSuiteReport>,
    pub halfspace: Vec<HalfspaceSuiteReport>,
    pub cones: Vec<ConeSuiteReport>,
    pub kernel: Vec<KernelSuiteReport>,
    pub theorem: Vec<TheoremSuiteReport>,
    pub scale: ScaleSuiteReport,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.lemma.iter().all(|r| r.passed())
            && self.halfspace.iter().all(|r| r.passed())
            && self.cones.iter().all(|r| r.passed())
            && self.kernel.iter().all(|r| r.passed())
            && self.theorem.iter().all(|r| r.passed())
            && self.scale.passed()
    }
}

/// Runs every suite with `trials` as the main count. The halfspace suite
/// uses `trials / 10` instances, and the cone suite `trials / 10` simplices
/// with `trials` directions each.
pub fn run_all(trials: usize, seed: u64) -> Result<SuiteSummary, Error> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be positive".into()));
    }
    let tenth = (trials / 10).max(1);
    Ok(SuiteSummary {
        seed,
        trials,
        lemma: (1..=3).map(|d| lemma_suite(d, trials, seed)).collect(),
        halfspace: (2..=3).map(|d| halfspace_suite(d, tenth, trials, seed)).collect(),
        cones: (1..=4).map(|d| cone_suite(d, tenth, trials, trials, seed)).collect(),
        kernel: (1..=6).map(|d| kernel_suite(d, trials, seed)).collect(),
        theorem: (1..=2).map(|d| theorem_suite(d, trials, seed)).collect(),
        scale: scale_invariance_suite(trials, seed),
    })
}
