//! Backtracking enumeration of the linear extensions of a comparison set.

use super::{definition_chains_for, ChainReading, ComparisonSet, RankTable};
use crate::error::{Error, Result};

/// Largest grid (in cells) accepted by [`enumerate_unrealizable`].
pub const MAX_EXTENSION_CELLS: usize = 12;

/// Every rank table on `[d+1] x [d+2]` satisfying the chain properties.
pub fn enumerate_unrealizable(d: usize) -> Result<LinearExtensions> {
    enumerate_unrealizable_for(d, ChainReading::Stated)
}

pub fn enumerate_unrealizable_for(d: usize, reading: ChainReading) -> Result<LinearExtensions> {
    if d == 0 {
        return Err(Error::Shape("d must be positive".into()));
    }
    let cells = (d + 1) * (d + 2);
    if cells > MAX_EXTENSION_CELLS {
        return Err(Error::Budget(format!(
            "full enumeration needs (d+1)(d+2) <= {MAX_EXTENSION_CELLS}, got {cells}"
        )));
    }
    LinearExtensions::new(&definition_chains_for(d, reading))
}

/// Streams all rank tables compatible with a set of required comparisons.
///
/// Ranks are assigned in increasing order; at each depth only cells whose
/// required predecessors are already placed are candidates, so every branch
/// ends in a valid extension.
#[derive(Clone, Debug)]
pub struct LinearExtensions {
    n: usize,
    m: usize,
    preds: Vec<u64>,
    placed: u64,
    stack: Vec<usize>,
    cursor: Vec<usize>,
    done: bool,
}

impl LinearExtensions {
    pub fn new(constraints: &ComparisonSet) -> Result<Self> {
        let (n, m) = constraints.shape();
        let cells = n * m;
        if cells > 64 {
            return Err(Error::Budget(format!("{cells} cells exceed the 64-cell limit")));
        }
        let mut preds = vec![0u64; cells];
        for c in constraints {
            preds[c.greater.0 * m + c.greater.1] |= 1 << (c.lesser.0 * m + c.lesser.1);
        }
        Ok(Self {
            n,
            m,
            preds,
            placed: 0,
            stack: Vec::with_capacity(cells),
            cursor: vec![0; cells + 1],
            done: false,
        })
    }

    fn table(&self) -> RankTable {
        let mut ranks = vec![0; self.stack.len()];
        for (rank, &cell) in self.stack.iter().enumerate() {
            ranks[cell] = rank;
        }
        RankTable::from_row_major(self.n, self.m, ranks).expect("stack is a permutation")
    }
}

impl Iterator for LinearExtensions {
    type Item = RankTable;

    fn next(&mut self) -> Option<RankTable> {
        let cells = self.preds.len();
        while !self.done {
            let depth = self.stack.len();
            if depth == cells {
                let t = self.table();
                let last = self.stack.pop().expect("full stack");
                self.placed &= !(1 << last);
                return Some(t);
            }
            let start = self.cursor[depth];
            let candidate = (start..cells).find(|&c| {
                self.placed & (1 << c) == 0 && self.preds[c] & !self.placed == 0
            });
            match candidate {
                Some(c) => {
                    self.cursor[depth] = c + 1;
                    self.cursor[depth + 1] = 0;
                    self.stack.push(c);
                    self.placed |= 1 << c;
                }
                None => match self.stack.pop() {
                    Some(last) => self.placed &= !(1 << last),
                    None => self.done = true,
                },
            }
        }
        None
    }
}
