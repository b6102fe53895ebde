//! Total orders on the grid `[n] x [m]`.
//!
//! An order is stored as a [`RankTable`]: cell `(i, j)` holds the rank of the
//! pair `(p_i, q_j)`, with rank 0 the smallest. Comparisons between cells are
//! then O(1) lookups.

mod canonical;
mod construction;
mod definition;
mod extensions;

use std::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canonical::{canonical_form, is_canonical, orbit_size, Relabeling, RelabelingGroup};
pub use construction::{
    construct_unrealizable, construction_count, enumerate_constructions, ConstructionChoice,
    Constructions, MAX_CONSTRUCTION_D,
};
pub use definition::{
    definition_chains, definition_chains_for, is_unrealizable, is_unrealizable_for,
    observation_comparisons, observation_entailment, observation_entailment_for,
    unrealizable_shape, ChainReading, UnrealizabilityReport, Violation,
};
pub use extensions::{enumerate_unrealizable, enumerate_unrealizable_for, LinearExtensions, MAX_EXTENSION_CELLS};

/// A grid cell `(row, column)`, i.e. the pair `(p_row, q_column)`.
pub type Cell = (usize, usize);

/// A total order on `[n] x [m]` as a bijective rank matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TableRecord", into = "TableRecord")]
pub struct RankTable {
    n: usize,
    m: usize,
    /// Row-major ranks.
    ranks: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct TableRecord {
    n: usize,
    m: usize,
    ranks: Vec<Vec<usize>>,
}

impl TryFrom<TableRecord> for RankTable {
    type Error = Error;

    fn try_from(r: TableRecord) -> Result<Self> {
        RankTable::from_rows(r.n, r.m, &r.ranks)
    }
}

impl From<RankTable> for TableRecord {
    fn from(t: RankTable) -> Self {
        TableRecord {
            n: t.n,
            m: t.m,
            ranks: t.rows(),
        }
    }
}

impl RankTable {
    /// Builds a table from row-major ranks, checking `2 <= n <= m` and
    /// bijectivity onto `0..n*m`.
    pub fn from_row_major(n: usize, m: usize, ranks: Vec<usize>) -> Result<Self> {
        if n < 2 || n > m {
            return Err(Error::InvalidTable(format!(
                "shape {n}x{m} violates 2 <= n <= m"
            )));
        }
        if ranks.len() != n * m {
            return Err(Error::InvalidTable(format!(
                "expected {} ranks, found {}",
                n * m,
                ranks.len()
            )));
        }
        let mut seen = vec![false; n * m];
        for (idx, &r) in ranks.iter().enumerate() {
            if r >= n * m {
                return Err(Error::InvalidTable(format!(
                    "rank {r} at cell ({},{}) is out of range 0..{}",
                    idx / m,
                    idx % m,
                    n * m
                )));
            }
            if std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidTable(format!("rank {r} appears twice")));
            }
        }
        Ok(Self { n, m, ranks })
    }

    pub fn from_rows<R: AsRef<[usize]>>(n: usize, m: usize, rows: &[R]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::InvalidTable(format!(
                "expected {n} rows, found {}",
                rows.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_major(n, m, flat)
    }

    /// Builds the table that ranks cells in the given order (first = rank 0).
    pub fn from_cell_order(n: usize, m: usize, order: &[Cell]) -> Result<Self> {
        let mut ranks = vec![usize::MAX; n * m];
        if order.len() != n * m {
            return Err(Error::InvalidTable(format!(
                "cell order lists {} cells, expected {}",
                order.len(),
                n * m
            )));
        }
        for (r, &(i, j)) in order.iter().enumerate() {
            if i >= n || j >= m {
                return Err(Error::InvalidTable(format!("cell ({i},{j}) out of range")));
            }
            ranks[i * m + j] = r;
        }
        if ranks.contains(&usize::MAX) {
            return Err(Error::InvalidTable("cell order repeats a cell".into()));
        }
        Self::from_row_major(n, m, ranks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    #[inline]
    pub fn rank(&self, (i, j): Cell) -> usize {
        self.ranks[i * self.m + j]
    }

    /// True when `a` comes strictly before `b` in the order.
    #[inline]
    pub fn precedes(&self, a: Cell, b: Cell) -> bool {
        self.rank(a) < self.rank(b)
    }

    pub fn row_major(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.ranks.chunks(self.m).map(<[usize]>::to_vec).collect()
    }

    /// Cells sorted by rank; the inverse of the rank map.
    pub fn cell_order(&self) -> Vec<Cell> {
        let mut order = vec![(0, 0); self.ranks.len()];
        for (idx, &r) in self.ranks.iter().enumerate() {
            order[r] = (idx / self.m, idx % self.m);
        }
        order
    }

    /// Fixed textual form of the ranks, e.g. `2x3:0,5,4,2,1,3`.
    pub fn digest(&self) -> String {
        let body = self
            .ranks
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",");
        format!("{}x{}:{body}", self.n, self.m)
    }

    pub fn parse_digest(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTable(format!("malformed digest {s:?}"));
        let (shape, body) = s.split_once(':').ok_or_else(bad)?;
        let (n, m) = shape.split_once('x').ok_or_else(bad)?;
        let n = n.parse().map_err(|_| bad())?;
        let m = m.parse().map_err(|_| bad())?;
        let ranks = body
            .split(',')
            .map(|x| x.parse().map_err(|_| bad()))
            .collect::<Result<Vec<usize>>>()?;
        Self::from_row_major(n, m, ranks)
    }
}

impl fmt::Debug for RankTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RankTable{:?}", self.rows())
    }
}

impl fmt::Display for RankTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = (self.len() - 1).to_string().len();
        for row in self.ranks.chunks(self.m) {
            let cells: Vec<String> = row.iter().map(|r| format!("{r:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Uniformly random rank table, deterministic per seed.
pub fn random_table(n: usize, m: usize, seed: u64) -> Result<RankTable> {
    let mut ranks: Vec<usize> = (0..n * m).collect();
    ranks.shuffle(&mut crate::seed::rng(seed));
    RankTable::from_row_major(n, m, ranks)
}

/// Where a required comparison comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    /// Row chain of property 1 for row `row`.
    RowChain { row: usize },
    /// Column chain of property 2 for column `column`.
    ColumnChain { column: usize },
    /// The last-column chain of property 3.
    LastColumn,
    /// Observation part 1: `p_row` closer to `q_0` than to `q_{d+1}`.
    ObservationOne { row: usize },
    /// Observation part 2 for the consecutive rows `step`, `step + 1`.
    ObservationTwo { step: usize },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::RowChain { row } => write!(f, "property 1 (row {row})"),
            Source::ColumnChain { column } => write!(f, "property 2 (column {column})"),
            Source::LastColumn => write!(f, "property 3 (last column)"),
            Source::ObservationOne { row } => write!(f, "observation part 1 (row {row})"),
            Source::ObservationTwo { step } => write!(f, "observation part 2 (i = {step})"),
        }
    }
}

/// Assertion `rank(lesser) < rank(greater)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Comparison {
    pub lesser: Cell,
    pub greater: Cell,
    pub source: Source,
}

impl Comparison {
    pub fn holds_in(&self, t: &RankTable) -> bool {
        t.precedes(self.lesser, self.greater)
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) < ({},{})",
            self.lesser.0, self.lesser.1, self.greater.0, self.greater.1
        )
    }
}

/// A set of required comparisons on an `n x m` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSet {
    n: usize,
    m: usize,
    items: Vec<Comparison>,
}

impl ComparisonSet {
    /// Drops exact duplicates (same cell pair); rejects out-of-range cells and
    /// pairs listed in both orientations.
    pub fn new(n: usize, m: usize, items: Vec<Comparison>) -> Result<Self> {
        let mut kept: Vec<Comparison> = Vec::with_capacity(items.len());
        for c in items {
            for cell in [c.lesser, c.greater] {
                if cell.0 >= n || cell.1 >= m {
                    return Err(Error::Shape(format!(
                        "comparison {c} leaves the {n}x{m} grid"
                    )));
                }
            }
            if c.lesser == c.greater {
                return Err(Error::Shape(format!("comparison {c} is reflexive")));
            }
            if kept
                .iter()
                .any(|k| k.lesser == c.greater && k.greater == c.lesser)
            {
                return Err(Error::Shape(format!(
                    "comparison {c} listed in both orientations"
                )));
            }
            if !kept
                .iter()
                .any(|k| k.lesser == c.lesser && k.greater == c.greater)
            {
                kept.push(c);
            }
        }
        Ok(Self { n, m, items: kept })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Comparison> {
        self.items.iter()
    }

    /// Cell pairs without their sources, for set-style comparisons.
    pub fn pairs(&self) -> Vec<(Cell, Cell)> {
        self.items.iter().map(|c| (c.lesser, c.greater)).collect()
    }

    pub fn filter(&self, mut keep: impl FnMut(&Comparison) -> bool) -> Self {
        Self {
            n: self.n,
            m: self.m,
            items: self.items.iter().copied().filter(|c| keep(c)).collect(),
        }
    }

    /// Evaluates every comparison against `t`.
    pub fn evaluate(&self, t: &RankTable) -> Result<Vec<(Comparison, bool)>> {
        if (t.n(), t.m()) != (self.n, self.m) {
            return Err(Error::Shape(format!(
                "table is {}x{}, comparisons are for {}x{}",
                t.n(),
                t.m(),
                self.n,
                self.m
            )));
        }
        Ok(self.items.iter().map(|c| (*c, c.holds_in(t))).collect())
    }
}

impl<'a> IntoIterator for &'a ComparisonSet {
    type Item = &'a Comparison;
    type IntoIter = std::slice::Iter<'a, Comparison>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
