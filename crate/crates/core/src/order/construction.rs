//! Diagonal-filling construction of unrealizable tables.
//!
//! Diagonal `c` below the main diagonal is the set of cells `(k + c, k)`;
//! diagonal `c` above it is `(k, k + c)`, both for `k = 0..=d-c`. Values are
//! handed out in consecutive blocks: main diagonal, lower diagonals
//! `c = 1..=d`, the last column bottom to top, then upper diagonals
//! `c = d..=1`. Only the placement inside each diagonal is free.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RankTable;
use crate::error::{Error, Result};

/// Largest `d` accepted by [`enumerate_constructions`].
pub const MAX_CONSTRUCTION_D: usize = 4;

/// The free permutations of the construction. `diag[k]` is the offset of
/// cell `(k,k)` within the main-diagonal block; `lower[c-1][k]` and
/// `upper[c-1][k]` likewise place cells `(k+c,k)` and `(k,k+c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionChoice {
    pub d: usize,
    pub diag: Vec<usize>,
    pub lower: Vec<Vec<usize>>,
    pub upper: Vec<Vec<usize>>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl ConstructionChoice {
    pub fn identity(d: usize) -> Self {
        Self {
            d,
            diag: (0..=d).collect(),
            lower: (1..=d).map(|c| (0..=d - c).collect()).collect(),
            upper: (1..=d).map(|c| (0..=d - c).collect()).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let mut choice = Self::identity(d);
        choice.diag.shuffle(rng);
        for p in choice.lower.iter_mut().chain(choice.upper.iter_mut()) {
            p.shuffle(rng);
        }
        choice
    }

    /// [`ConstructionChoice::random`] driven by a seeded generator.
    pub fn seeded(d: usize, seed: u64) -> Self {
        Self::random(d, &mut crate::seed::rng(seed))
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        if d == 0 {
            return Err(Error::MalformedChoice("d must be positive".into()));
        }
        if self.diag.len() != d + 1 || !is_permutation(&self.diag) {
            return Err(Error::MalformedChoice(format!(
                "diag must be a permutation of 0..={d}"
            )));
        }
        for (name, perms) in [("lower", &self.lower), ("upper", &self.upper)] {
            if perms.len() != d {
                return Err(Error::MalformedChoice(format!(
                    "{name} must hold {d} permutations, found {}",
                    perms.len()
                )));
            }
            for (idx, p) in perms.iter().enumerate() {
                let c = idx + 1;
                if p.len() != d + 1 - c || !is_permutation(p) {
                    return Err(Error::MalformedChoice(format!(
                        "{name}[{c}] must be a permutation of 0..={}",
                        d - c
                    )));
                }
            }
        }
        Ok(())
    }

    /// Decodes a choice from its index in `0..construction_count(d)`; the
    /// main-diagonal permutation varies fastest.
    pub fn from_index(d: usize, mut index: u64) -> Self {
        let mut take = |len: usize| {
            let radix = factorial_u64(len);
            let p = nth_permutation(len, index % radix);
            index /= radix;
            p
        };
        let diag = take(d + 1);
        let lower = (1..=d).map(|c| take(d + 1 - c)).collect();
        let upper = (1..=d).map(|c| take(d + 1 - c)).collect();
        Self {
            d,
            diag,
            lower,
            upper,
        }
    }
}

fn factorial_u64(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// The `index`-th permutation of `0..len` in lexicographic order.
fn nth_permutation(len: usize, mut index: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..len).collect();
    let mut out = Vec::with_capacity(len);
    for remaining in (1..=len).rev() {
        let f = factorial_u64(remaining - 1);
        let pick = (index / f) as usize;
        index %= f;
        out.push(pool.remove(pick));
    }
    out
}

/// Builds the `(d+1) x (d+2)` table for `choice`.
pub fn construct_unrealizable(choice: &ConstructionChoice) -> Result<RankTable> {
    choice.validate()?;
    let d = choice.d;
    let cols = d + 2;
    let mut ranks = vec![0usize; (d + 1) * cols];
    let mut next = 0usize;

    for (k, &offset) in choice.diag.iter().enumerate() {
        ranks[k * cols + k] = next + offset;
    }
    next += d + 1;

    for c in 1..=d {
        for (k, &offset) in choice.lower[c - 1].iter().enumerate() {
            ranks[(k + c) * cols + k] = next + offset;
        }
        next += d + 1 - c;
    }

    for (t, row) in (0..=d).rev().enumerate() {
        ranks[row * cols + d + 1] = next + t;
    }
    next += d + 1;

    for c in (1..=d).rev() {
        for (k, &offset) in choice.upper[c - 1].iter().enumerate() {
            ranks[k * cols + k + c] = next + offset;
        }
        next += d + 1 - c;
    }
    debug_assert_eq!(next, (d + 1) * cols);

    RankTable::from_row_major(d + 1, cols, ranks)
}

/// `(d+1)! * (d! * (d-1)! * ... * 1!)^2`.
pub fn construction_count(d: usize) -> BigUint {
    let fact = |k: usize| -> BigUint { (1..=k).map(BigUint::from).product() };
    let tail: BigUint = (1..=d).map(fact).product();
    fact(d + 1) * &tail * &tail
}

/// Every construction output for `d <= MAX_CONSTRUCTION_D`.
pub fn enumerate_constructions(d: usize) -> Result<Constructions> {
    if d == 0 {
        return Err(Error::MalformedChoice("d must be positive".into()));
    }
    if d > MAX_CONSTRUCTION_D {
        return Err(Error::Budget(format!(
            "enumerating constructions for d = {d} (limit {MAX_CONSTRUCTION_D}) would yield {} tables",
            construction_count(d)
        )));
    }
    let total = u64::try_from(construction_count(d)).expect("fits for d <= 4");
    Ok(Constructions {
        d,
        next: 0,
        total,
    })
}

/// Iterator returned by [`enumerate_constructions`].
#[derive(Clone, Debug)]
pub struct Constructions {
    d: usize,
    next: u64,
    total: u64,
}

impl Iterator for Constructions {
    type Item = RankTable;

    fn next(&mut self) -> Option<RankTable> {
        if self.next >= self.total {
            return None;
        }
        let choice = ConstructionChoice::from_index(self.d, self.next);
        self.next += 1;
        Some(construct_unrealizable(&choice).expect("decoded choices are well formed"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Constructions {}
