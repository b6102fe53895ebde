//! Numerical search for configurations inducing a target order.
//!
//! With the target's cells listed by rank as `c_0, ..., c_{N-1}` and
//! `D(c)` the squared distance of a cell, the objective is
//!
//! ```text
//! L = sum_r max(0, margin + D(c_r) - D(c_{r+1}))^2
//! ```
//!
//! over the coordinates of all points. After every step the configuration is
//! rescaled so that the largest squared distance is 1, which makes `margin`
//! scale-relative; `p_0` stays pinned at the origin. Step sizes grow on
//! success and shrink on failure. A candidate is accepted only when its
//! induced order matches the target exactly with every consecutive gap at
//! least `margin / 2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{induced_order, Configuration};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::order::{Cell, RankTable};

/// Restarts evaluated per parallel batch.
const BATCH: usize = 16;

/// Tie tolerance used when re-deriving the order of a candidate.
const VERIFY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    pub restarts: usize,
    pub max_iters: usize,
    /// Target separation of consecutive squared distances, relative to the
    /// largest squared distance.
    pub margin: f64,
    pub initial_step: f64,
    pub step_growth: f64,
    pub step_shrink: f64,
    pub seed: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            margin: 1e-3,
            initial_step: 0.1,
            step_growth: 1.2,
            step_shrink: 0.5,
            seed: 0,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.into()));
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return bad("margin must lie in (0, 1)");
        }
        if !(self.initial_step > 0.0) {
            return bad("initial step must be positive");
        }
        if !(self.step_growth >= 1.0) || !(self.step_shrink > 0.0 && self.step_shrink < 1.0) {
            return bad("step growth must be >= 1 and shrink in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Realized,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// The realizing configuration, or the best candidate when exhausted.
    pub best: Configuration,
    /// Smallest consecutive gap of the target order in `best`, relative to the
    /// largest squared distance; negative when the order is violated.
    pub margin: f64,
    /// Restart that produced `best`.
    pub restart: usize,
    /// Iterations spent in that restart.
    pub iterations: usize,
    /// Restarts consumed: up to and including the success, or all of them.
    pub restarts_used: usize,
}

/// Searches `R^dim` for a configuration inducing `target`. Deterministic per
/// `params.seed`; the lowest successful restart index wins.
pub fn search_realization(target: &RankTable, dim: usize, params: &SearchParams) -> Result<SearchResult> {
    if dim == 0 {
        return Err(Error::InvalidParams("dimension must be positive".into()));
    }
    params.validate()?;
    let problem = Problem::new(target, dim);

    let mut best: Option<Attempt> = None;
    let mut start = 0;
    while start < params.restarts {
        let end = (start + BATCH).min(params.restarts);
        let attempts: Vec<Attempt> = (start..end)
            .into_par_iter()
            .map(|r| problem.run(r, params))
            .collect();
        for a in attempts {
            if a.realized {
                let restarts_used = a.restart + 1;
                return Ok(problem.result(a, SearchStatus::Realized, restarts_used));
            }
            if best.as_ref().is_none_or(|b| a.margin > b.margin) {
                best = Some(a);
            }
        }
        start = end;
    }
    let best = best.expect("at least one restart");
    Ok(problem.result(best, SearchStatus::Exhausted, params.restarts))
}

struct Attempt {
    restart: usize,
    coords: Vec<f64>,
    margin: f64,
    iterations: usize,
    realized: bool,
}

struct Problem<'a> {
    target: &'a RankTable,
    dim: usize,
    n: usize,
    /// Cells in increasing rank.
    order: Vec<Cell>,
}

impl<'a> Problem<'a> {
    fn new(target: &'a RankTable, dim: usize) -> Self {
        Self {
            target,
            dim,
            n: target.n(),
            order: target.cell_order(),
        }
    }

    fn vars(&self) -> usize {
        (self.target.n() + self.target.m()) * self.dim
    }

    #[inline]
    fn p_at(&self, i: usize) -> usize {
        i * self.dim
    }

    #[inline]
    fn q_at(&self, j: usize) -> usize {
        (self.n + j) * self.dim
    }

    fn sq(&self, x: &[f64], (i, j): Cell) -> f64 {
        let (a, b) = (self.p_at(i), self.q_at(j));
        (0..self.dim).map(|t| (x[a + t] - x[b + t]).powi(2)).sum()
    }

    fn distances(&self, x: &[f64]) -> Vec<f64> {
        self.order.iter().map(|&c| self.sq(x, c)).collect()
    }

    /// Rescales so the largest squared distance is 1.
    fn normalize(&self, x: &mut [f64]) -> bool {
        let max = self.distances(x).into_iter().fold(0.0, f64::max);
        if !(max.is_finite() && max > 1e-300) {
            return false;
        }
        let s = max.sqrt().recip();
        x.iter_mut().for_each(|v| *v *= s);
        true
    }

    /// Smallest consecutive gap over the largest squared distance.
    fn margin(&self, x: &[f64]) -> f64 {
        let d = self.distances(x);
        let max = d.iter().cloned().fold(0.0, f64::max);
        let gap = d.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        gap / max
    }

    fn loss(&self, x: &[f64], margin: f64, grad: Option<&mut [f64]>) -> f64 {
        let d = self.distances(x);
        let mut weights = vec![0.0; d.len()];
        let mut loss = 0.0;
        for r in 0..d.len() - 1 {
            let v = margin + d[r] - d[r + 1];
            if v > 0.0 {
                loss += v * v;
                weights[r] += 2.0 * v;
                weights[r + 1] -= 2.0 * v;
            }
        }
        if let Some(g) = grad {
            g.iter_mut().for_each(|v| *v = 0.0);
            for (w, &(i, j)) in weights.iter().zip(&self.order) {
                if *w == 0.0 {
                    continue;
                }
                let (a, b) = (self.p_at(i), self.q_at(j));
                for t in 0..self.dim {
                    let diff = 2.0 * w * (x[a + t] - x[b + t]);
                    g[a + t] += diff;
                    g[b + t] -= diff;
                }
            }
            // p_0 is pinned.
            g[..self.dim].iter_mut().for_each(|v| *v = 0.0);
        }
        loss
    }

    fn verified(&self, x: &[f64], params: &SearchParams) -> bool {
        if self.margin(x) < params.margin / 2.0 {
            return false;
        }
        let config = self.configuration(x);
        matches!(induced_order(&config, VERIFY_TOL), Ok(t) if &t == self.target)
    }

    fn run(&self, restart: usize, params: &SearchParams) -> Attempt {
        use rand::Rng;
        let mut rng = crate::seed::rng(crate::seed::derive(params.seed, restart as u64));
        let vars = self.vars();
        let mut x: Vec<f64> = loop {
            let mut x: Vec<f64> = (0..vars).map(|_| rng.random_range(-1.0..1.0)).collect();
            x[..self.dim].iter_mut().for_each(|v| *v = 0.0);
            if self.normalize(&mut x) {
                break x;
            }
        };
        let mut grad = vec![0.0; vars];
        let mut loss = self.loss(&x, params.margin, Some(&mut grad));
        let mut step = params.initial_step;
        let mut trial = vec![0.0; vars];
        let mut iterations = 0;
        while iterations < params.max_iters {
            if self.verified(&x, params) {
                return Attempt {
                    restart,
                    margin: self.margin(&x),
                    coords: x,
                    iterations,
                    realized: true,
                };
            }
            iterations += 1;
            for ((t, v), g) in trial.iter_mut().zip(&x).zip(&grad) {
                *t = v - step * g;
            }
            if self.normalize(&mut trial) {
                let next = self.loss(&trial, params.margin, None);
                if next < loss {
                    std::mem::swap(&mut x, &mut trial);
                    loss = self.loss(&x, params.margin, Some(&mut grad));
                    step *= params.step_growth;
                    continue;
                }
            }
            step *= params.step_shrink;
            if step < 1e-14 {
                break;
            }
        }
        let realized = self.verified(&x, params);
        Attempt {
            restart,
            margin: self.margin(&x),
            coords: x,
            iterations,
            realized,
        }
    }

    fn configuration(&self, x: &[f64]) -> Configuration {
        let point = |start: usize| Point::new(x[start..start + self.dim].to_vec()).expect("finite");
        let p = (0..self.n).map(|i| point(self.p_at(i))).collect();
        let q = (0..self.target.m()).map(|j| point(self.q_at(j))).collect();
        Configuration::new(self.dim, p, q).expect("shape matches target")
    }

    fn result(&self, a: Attempt, status: SearchStatus, restarts_used: usize) -> SearchResult {
        SearchResult {
            status,
            best: self.configuration(&a.coords),
            margin: a.margin,
            restart: a.restart,
            iterations: a.iterations,
            restarts_used,
        }
    }
}
