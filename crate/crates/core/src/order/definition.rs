//! The three chain properties defining unrealizable orders on `[d+1] x [d+2]`
//! and the derived distance comparisons between rows.
//!
//! Row indices wrap modulo `d + 1`, column indices modulo `d + 2`:
//!
//! 1. `(k,k) < (k,k-1) < ... < (k,k-d)` for every row `k`;
//! 2. `(k,k) < (k+1,k) < ... < (k+d,k)` for every column `k <= d`;
//! 3. `(d,d+1) < (d-1,d+1) < ... < (0,d+1)`.
//!
//! Property 1 as stated stops one cell short of closing the row: `(k,k+1)`
//! is unconstrained. Under that reading some of these orders are induced by
//! actual point sets when `d <= 2`. [`ChainReading::ClosedRows`] extends each
//! row chain through `(k,k-d-1) = (k,k+1)`, which makes every row a full
//! cycle like the columns.

use serde::{Deserialize, Serialize};

use super::{Cell, Comparison, ComparisonSet, RankTable, Source};
use crate::error::{Error, Result};

/// Returns `d` when `t` has shape `(d+1) x (d+2)`.
pub fn unrealizable_shape(t: &RankTable) -> Result<usize> {
    if t.m() != t.n() + 1 {
        return Err(Error::Shape(format!(
            "expected a (d+1)x(d+2) table, found {}x{}",
            t.n(),
            t.m()
        )));
    }
    Ok(t.n() - 1)
}

fn chain(cells: impl Iterator<Item = Cell>, source: Source, out: &mut Vec<Comparison>) {
    let cells: Vec<Cell> = cells.collect();
    out.extend(cells.windows(2).map(|w| Comparison {
        lesser: w[0],
        greater: w[1],
        source,
    }));
}

/// Which length of row chain to use for property 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainReading {
    /// `d + 1` cells per row, `(k,k)` through `(k,k-d)`.
    #[default]
    Stated,
    /// All `d + 2` cells per row, `(k,k)` through `(k,k+1)`.
    ClosedRows,
}

impl ChainReading {
    fn row_len(self, d: usize) -> usize {
        match self {
            ChainReading::Stated => d + 1,
            ChainReading::ClosedRows => d + 2,
        }
    }
}

/// Consecutive-pair comparisons of the three chain properties; `2d(d+1) + d`
/// comparisons in total.
pub fn definition_chains(d: usize) -> ComparisonSet {
    definition_chains_for(d, ChainReading::Stated)
}

/// [`definition_chains`] under an explicit reading; the closed-row reading
/// adds one comparison per row.
pub fn definition_chains_for(d: usize, reading: ChainReading) -> ComparisonSet {
    assert!(d >= 1, "d must be positive");
    let (rows, cols) = (d + 1, d + 2);
    let mut out = Vec::with_capacity(2 * d * (d + 1) + 2 * d + 1);
    for k in 0..rows {
        chain(
            (0..reading.row_len(d)).map(|t| (k, (k + cols - t) % cols)),
            Source::RowChain { row: k },
            &mut out,
        );
    }
    for k in 0..rows {
        chain(
            (0..=d).map(|t| ((k + t) % rows, k)),
            Source::ColumnChain { column: k },
            &mut out,
        );
    }
    chain((0..=d).map(|t| (d - t, d + 1)), Source::LastColumn, &mut out);
    ComparisonSet::new(rows, cols, out).expect("chains are well formed")
}

/// One broken chain link.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub comparison: Comparison,
    pub lesser_rank: usize,
    pub greater_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnrealizabilityReport {
    pub d: usize,
    pub violations: Vec<Violation>,
}

impl UnrealizabilityReport {
    /// True iff all three properties hold.
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks all three chain properties, reporting every broken link.
pub fn is_unrealizable(t: &RankTable) -> Result<UnrealizabilityReport> {
    is_unrealizable_for(t, ChainReading::Stated)
}

pub fn is_unrealizable_for(t: &RankTable, reading: ChainReading) -> Result<UnrealizabilityReport> {
    let d = unrealizable_shape(t)?;
    let violations = definition_chains_for(d, reading)
        .iter()
        .filter(|c| !c.holds_in(t))
        .map(|c| Violation {
            comparison: *c,
            lesser_rank: t.rank(c.lesser),
            greater_rank: t.rank(c.greater),
        })
        .collect();
    Ok(UnrealizabilityReport { d, violations })
}

/// Comparisons stating that every `p_i` is closer to `q_0` than to `q_{d+1}`
/// (part 1), and that for `i < d` the points `q_{i+1}` and `q_{d+1}` are
/// closer to `p_{i+1}` than to `p_i` while every other `q_j` is closer to
/// `p_i` (part 2).
pub fn observation_comparisons(d: usize) -> ComparisonSet {
    assert!(d >= 1, "d must be positive");
    let last = d + 1;
    let mut out = Vec::new();
    for i in 0..=d {
        out.push(Comparison {
            lesser: (i, 0),
            greater: (i, last),
            source: Source::ObservationOne { row: i },
        });
    }
    for i in 0..d {
        let source = Source::ObservationTwo { step: i };
        out.push(Comparison {
            lesser: (i + 1, i + 1),
            greater: (i, i + 1),
            source,
        });
        out.push(Comparison {
            lesser: (i + 1, last),
            greater: (i, last),
            source,
        });
        for j in (0..=d).filter(|&j| j != i + 1) {
            out.push(Comparison {
                lesser: (i, j),
                greater: (i + 1, j),
                source,
            });
        }
    }
    ComparisonSet::new(d + 1, d + 2, out).expect("observation comparisons are well formed")
}

/// For each observation comparison, whether it follows from the chain
/// properties by transitivity alone.
pub fn observation_entailment(d: usize) -> Vec<(Comparison, bool)> {
    observation_entailment_for(d, ChainReading::Stated)
}

pub fn observation_entailment_for(d: usize, reading: ChainReading) -> Vec<(Comparison, bool)> {
    let cols = d + 2;
    let cells = (d + 1) * cols;
    let idx = |(i, j): Cell| i * cols + j;
    let mut reach = vec![false; cells * cells];
    for c in &definition_chains_for(d, reading) {
        reach[idx(c.lesser) * cells + idx(c.greater)] = true;
    }
    for k in 0..cells {
        for a in 0..cells {
            if reach[a * cells + k] {
                for b in 0..cells {
                    if reach[k * cells + b] {
                        reach[a * cells + b] = true;
                    }
                }
            }
        }
    }
    observation_comparisons(d)
        .iter()
        .map(|c| (*c, reach[idx(c.lesser) * cells + idx(c.greater)]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[[usize; 3]]) -> RankTable {
        RankTable::from_rows(2, 3, rows).unwrap()
    }

    #[test]
    fn chains_for_d1() {
        let mut got = definition_chains(1).pairs();
        got.sort();
        let mut want = vec![
            ((0, 0), (0, 2)),
            ((1, 1), (1, 0)),
            ((0, 0), (1, 0)),
            ((1, 1), (0, 1)),
            ((1, 2), (0, 2)),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn chain_sizes() {
        for d in 1..=6 {
            assert_eq!(definition_chains(d).len(), 2 * d * (d + 1) + d);
        }
        assert_eq!(definition_chains(2).len(), 14);
    }

    #[test]
    fn predicate_examples() {
        assert!(is_unrealizable(&table(&[[0, 5, 4], [2, 1, 3]])).unwrap().holds());
        assert!(is_unrealizable(&table(&[[1, 4, 5], [3, 0, 2]])).unwrap().holds());

        let report = is_unrealizable(&table(&[[0, 1, 2], [3, 4, 5]])).unwrap();
        assert!(!report.holds());
        let column_one = report
            .violations
            .iter()
            .find(|v| v.comparison.source == Source::ColumnChain { column: 1 })
            .expect("column 1 chain must break");
        assert_eq!(column_one.comparison.lesser, (1, 1));
        assert_eq!(column_one.comparison.greater, (0, 1));
        assert_eq!((column_one.lesser_rank, column_one.greater_rank), (4, 1));
    }

    #[test]
    fn shape_error() {
        let t = RankTable::from_rows(2, 2, &[[0, 1], [2, 3]]).unwrap();
        assert!(matches!(is_unrealizable(&t), Err(Error::Shape(_))));
        let t = RankTable::from_row_major(2, 4, (0..8).collect()).unwrap();
        assert!(is_unrealizable(&t).is_err());
    }

    #[test]
    fn observation_pairs_d1() {
        let obs = observation_comparisons(1);
        let part1: Vec<_> = obs
            .iter()
            .filter(|c| matches!(c.source, Source::ObservationOne { .. }))
            .map(|c| (c.lesser, c.greater))
            .collect();
        assert_eq!(part1, vec![((0, 0), (0, 2)), ((1, 0), (1, 2))]);
        let mut part2: Vec<_> = obs
            .iter()
            .filter(|c| c.source == Source::ObservationTwo { step: 0 })
            .map(|c| (c.lesser, c.greater))
            .collect();
        part2.sort();
        let mut want = vec![((1, 1), (0, 1)), ((1, 2), (0, 2)), ((0, 0), (1, 0))];
        want.sort();
        assert_eq!(part2, want);
        assert_eq!(obs.len(), 5);
    }

    #[test]
    fn observation_part1_count_d2() {
        let n = observation_comparisons(2)
            .iter()
            .filter(|c| matches!(c.source, Source::ObservationOne { .. }))
            .count();
        assert_eq!(n, 3);
    }

    #[test]
    fn part_two_is_entailed_and_last_row_of_part_one_is_not() {
        for d in 1..=5 {
            for (c, entailed) in observation_entailment(d) {
                match c.source {
                    Source::ObservationTwo { .. } => assert!(entailed, "d={d}: {c}"),
                    Source::ObservationOne { row } if row == d => {
                        assert!(!entailed, "d={d}: {c}")
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn closed_rows_entail_every_observation() {
        for d in 1..=5 {
            assert_eq!(
                definition_chains_for(d, ChainReading::ClosedRows).len(),
                2 * d * (d + 1) + d + (d + 1)
            );
            assert!(observation_entailment_for(d, ChainReading::ClosedRows)
                .iter()
                .all(|(_, entailed)| *entailed));
        }
        let mut row0: Vec<_> = definition_chains_for(1, ChainReading::ClosedRows)
            .iter()
            .filter(|c| c.source == Source::RowChain { row: 0 })
            .map(|c| (c.lesser, c.greater))
            .collect();
        row0.sort();
        assert_eq!(row0, vec![((0, 0), (0, 2)), ((0, 2), (0, 1))]);
    }

    #[test]
    fn closed_rows_reject_the_open_question_table() {
        let t = table(&[[1, 4, 5], [3, 0, 2]]);
        assert!(!is_unrealizable_for(&t, ChainReading::ClosedRows).unwrap().holds());
        let t = table(&[[0, 5, 4], [2, 1, 3]]);
        assert!(is_unrealizable_for(&t, ChainReading::ClosedRows).unwrap().holds());
    }
}
