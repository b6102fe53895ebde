//! Canonical representatives under independent relabeling of rows (points of
//! `P`) and columns (points of `Q`).

use std::cmp::Ordering;
use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::RankTable;

/// Row and column permutations: the relabeled table has
/// `out[i][j] = t[rows[i]][cols[j]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Relabeling {
    pub fn apply(&self, t: &RankTable) -> RankTable {
        let m = t.m();
        let ranks = self
            .rows
            .iter()
            .flat_map(|&r| self.cols.iter().map(move |&c| t.row_major()[r * m + c]))
            .collect();
        RankTable::from_row_major(t.n(), m, ranks).expect("relabeling preserves bijectivity")
    }
}

/// All `n! * m!` relabelings of an `n x m` grid, computed once and reused.
#[derive(Clone, Debug)]
pub struct RelabelingGroup {
    n: usize,
    m: usize,
    row_perms: Vec<Vec<usize>>,
    col_perms: Vec<Vec<usize>>,
}

impl RelabelingGroup {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            row_perms: (0..n).permutations(n).collect(),
            col_perms: (0..m).permutations(m).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.row_perms.len() * self.col_perms.len()
    }

    fn compare(t: &RankTable, rows: &[usize], cols: &[usize], other: &[usize]) -> Ordering {
        let m = t.m();
        let src = t.row_major();
        let mut k = 0;
        for &r in rows {
            for &c in cols {
                match src[r * m + c].cmp(&other[k]) {
                    Ordering::Equal => k += 1,
                    ord => return ord,
                }
            }
        }
        Ordering::Equal
    }

    fn check_shape(&self, t: &RankTable) {
        assert_eq!((t.n(), t.m()), (self.n, self.m), "group shape mismatch");
    }

    /// Lexicographically least relabeling (row-major order) and the
    /// permutations that produce it.
    pub fn canonical_form(&self, t: &RankTable) -> (RankTable, Relabeling) {
        self.check_shape(t);
        let mut best = Relabeling {
            rows: self.row_perms[0].clone(),
            cols: self.col_perms[0].clone(),
        };
        let mut best_ranks = t.row_major().to_vec();
        for rows in &self.row_perms {
            for cols in &self.col_perms {
                if Self::compare(t, rows, cols, &best_ranks) == Ordering::Less {
                    best = Relabeling {
                        rows: rows.clone(),
                        cols: cols.clone(),
                    };
                    best_ranks = best.apply(t).row_major().to_vec();
                }
            }
        }
        (best.apply(t), best)
    }

    /// True when no relabeling of `t` is lexicographically smaller.
    pub fn is_canonical(&self, t: &RankTable) -> bool {
        self.check_shape(t);
        let own = t.row_major();
        self.row_perms.iter().all(|rows| {
            self.col_perms
                .iter()
                .all(|cols| Self::compare(t, rows, cols, own) != Ordering::Less)
        })
    }

    /// Number of distinct tables in the orbit of `t`.
    pub fn orbit_size(&self, t: &RankTable) -> usize {
        self.check_shape(t);
        let mut orbit = HashSet::new();
        for rows in &self.row_perms {
            for cols in &self.col_perms {
                orbit.insert(
                    Relabeling {
                        rows: rows.clone(),
                        cols: cols.clone(),
                    }
                    .apply(t),
                );
            }
        }
        orbit.len()
    }
}

pub fn canonical_form(t: &RankTable) -> (RankTable, Relabeling) {
    RelabelingGroup::new(t.n(), t.m()).canonical_form(t)
}

pub fn is_canonical(t: &RankTable) -> bool {
    RelabelingGroup::new(t.n(), t.m()).is_canonical(t)
}

pub fn orbit_size(t: &RankTable) -> usize {
    RelabelingGroup::new(t.n(), t.m()).orbit_size(t)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::order::random_table;

    #[test]
    fn two_by_two_examples() {
        let t = RankTable::from_rows(2, 2, &[[1, 0], [2, 3]]).unwrap();
        let (c, relabel) = canonical_form(&t);
        assert_eq!(c.rows(), vec![vec![0, 1], vec![3, 2]]);
        assert_eq!(relabel.apply(&t), c);

        let t = RankTable::from_rows(2, 2, &[[0, 1], [2, 3]]).unwrap();
        assert_eq!(canonical_form(&t).0, t);
        assert!(is_canonical(&t));
    }

    #[test]
    fn orbits_are_free() {
        let t = random_table(3, 3, 9).unwrap();
        assert_eq!(orbit_size(&t), 36);
    }

    proptest! {
        #[test]
        fn canonical_form_is_idempotent_and_orbit_invariant(
            n in 2usize..4, extra in 0usize..2, seed in any::<u64>(), shuffle in any::<u64>()
        ) {
            let m = n + extra;
            let t = random_table(n, m, seed).unwrap();
            let group = RelabelingGroup::new(n, m);
            let (c, relabel) = group.canonical_form(&t);
            prop_assert_eq!(relabel.apply(&t), c.clone());
            prop_assert_eq!(group.canonical_form(&c).0, c.clone());
            prop_assert!(group.is_canonical(&c));

            let mut rng = crate::seed::rng(shuffle);
            let mut rows: Vec<usize> = (0..n).collect();
            let mut cols: Vec<usize> = (0..m).collect();
            rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
            rand::seq::SliceRandom::shuffle(cols.as_mut_slice(), &mut rng);
            let moved = Relabeling { rows, cols }.apply(&t);
            prop_assert_eq!(group.canonical_form(&moved).0, c);
        }
    }
}
