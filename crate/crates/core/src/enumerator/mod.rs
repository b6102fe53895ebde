//! Realizability campaigns over small grids: one search per relabeling
//! class, persisted to a resumable line-oriented store.

mod store;
mod summary;

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{random_table, RankTable, RelabelingGroup};
use crate::realizer::{search_realization, SearchParams, SearchStatus};
use crate::seed::{derive, fnv1a};

pub use store::{CampaignRecord, ResultStore, StoreHeader};
pub use summary::{summarize, summarize_path, MarginBin, Summary};

/// Largest grid (in cells) for exhaustive class enumeration.
pub const MAX_CLASS_CELLS: usize = 9;

/// Restart multiplier for the single retry of an exhausted square class.
pub const ESCALATION_FACTOR: usize = 4;

/// A canonical representative and the size of its relabeling orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRep {
    pub table: RankTable,
    pub orbit_size: usize,
}

/// One representative per orbit of `S_n x S_m` acting on `n x m` rank
/// tables, in increasing row-major order.
pub fn enumerate_classes(n: usize, m: usize) -> Result<Vec<ClassRep>> {
    if n < 2 || m < n {
        return Err(Error::Shape(format!("need 2 <= n <= m, got {n}x{m}")));
    }
    let cells = n * m;
    if cells > MAX_CLASS_CELLS {
        return Err(Error::Budget(format!(
            "class enumeration needs n*m <= {MAX_CLASS_CELLS}, got {cells}"
        )));
    }
    let group = RelabelingGroup::new(n, m);
    let all: Vec<Vec<usize>> = (0..cells).permutations(cells).collect();
    Ok(all
        .into_par_iter()
        .filter_map(|ranks| {
            let t = RankTable::from_row_major(n, m, ranks).expect("permutation");
            group.is_canonical(&t).then(|| ClassRep {
                orbit_size: group.orbit_size(&t),
                table: t,
            })
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CampaignMode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub mode: CampaignMode,
    /// Distinct classes to draw in sample mode; ignored otherwise.
    pub sample_size: usize,
    /// Search settings; the seed is replaced per class.
    pub params: SearchParams,
    pub seed: u64,
}

impl CampaignSpec {
    pub fn exhaustive(n: usize, m: usize, dim: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            dim,
            mode: CampaignMode::Exhaustive,
            sample_size: 0,
            params: SearchParams::default(),
            seed,
        }
    }

    pub fn sample(n: usize, m: usize, dim: usize, sample_size: usize, seed: u64) -> Self {
        Self {
            mode: CampaignMode::Sample,
            sample_size,
            ..Self::exhaustive(n, m, dim, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.m < self.n {
            return Err(Error::Shape(format!("need 2 <= n <= m, got {}x{}", self.n, self.m)));
        }
        if self.dim == 0 {
            return Err(Error::InvalidParams("dimension must be positive".into()));
        }
        match self.mode {
            CampaignMode::Exhaustive if self.n * self.m > MAX_CLASS_CELLS => Err(Error::Budget(format!(
                "exhaustive campaigns need n*m <= {MAX_CLASS_CELLS}"
            ))),
            CampaignMode::Sample if self.sample_size == 0 => {
                Err(Error::InvalidParams("sample size must be at least 1".into()))
            }
            _ => self.params.validate(),
        }
    }

    /// Exhausted classes get one retry with more restarts when the grid is
    /// square.
    pub fn escalates(&self) -> bool {
        self.n == self.m
    }

    /// Seed for the search on the class with digest `digest`.
    pub fn class_seed(&self, digest: &str) -> u64 {
        derive(self.seed, fnv1a(digest.as_bytes()))
    }

    /// Classes the campaign covers, in processing order.
    pub fn classes(&self) -> Result<Vec<ClassRep>> {
        self.validate()?;
        match self.mode {
            CampaignMode::Exhaustive => enumerate_classes(self.n, self.m),
            CampaignMode::Sample => self.sampled_classes(),
        }
    }

    fn sampled_classes(&self) -> Result<Vec<ClassRep>> {
        let group = RelabelingGroup::new(self.n, self.m);
        let max_draws = 1000 * self.sample_size + 10_000;
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(self.sample_size);
        for k in 0..max_draws {
            if out.len() == self.sample_size {
                return Ok(out);
            }
            let t = random_table(self.n, self.m, derive(self.seed, k as u64))?;
            let (canon, _) = group.canonical_form(&t);
            if seen.insert(canon.clone()) {
                out.push(ClassRep {
                    orbit_size: group.orbit_size(&canon),
                    table: canon,
                });
            }
        }
        if out.len() == self.sample_size {
            return Ok(out);
        }
        Err(Error::Budget(format!(
            "found only {} distinct classes in {max_draws} draws",
            out.len()
        )))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignOptions {
    /// Record wall-clock times in the header and records. Disable for
    /// byte-identical stores.
    pub record_timing: bool,
    /// Stop after writing this many new records.
    pub stop_after: Option<usize>,
    /// Classes searched in parallel before each append.
    pub chunk: usize,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        Self {
            record_timing: true,
            stop_after: None,
            chunk: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignReport {
    pub store: ResultStore,
    /// Records appended by this run.
    pub written: usize,
    /// Classes already present in the store.
    pub skipped: usize,
}

/// Searches one class, retrying once with [`ESCALATION_FACTOR`] times the
/// restarts when the campaign escalates.
pub fn search_class(spec: &CampaignSpec, class: &ClassRep, record_timing: bool) -> Result<CampaignRecord> {
    let digest = class.table.digest();
    let seed = spec.class_seed(&digest);
    let start = Instant::now();
    let params = SearchParams {
        seed,
        ..spec.params.clone()
    };
    let mut result = search_realization(&class.table, spec.dim, &params)?;
    let mut restarts = result.restarts_used;
    if result.status == SearchStatus::Exhausted && spec.escalates() {
        let retry = SearchParams {
            restarts: params.restarts * ESCALATION_FACTOR,
            seed: derive(seed, ESCALATION_FACTOR as u64),
            ..params
        };
        result = search_realization(&class.table, spec.dim, &retry)?;
        restarts += result.restarts_used;
    }
    Ok(CampaignRecord {
        digest,
        class_size: class.orbit_size as u64,
        status: result.status,
        margin: result.margin,
        restarts,
        millis: if record_timing { start.elapsed().as_millis() as u64 } else { 0 },
        seed,
    })
}

/// Runs (or resumes) a campaign into the store at `path`. Classes whose
/// digest is already stored are skipped; new records are appended in class
/// order, so an interrupted and resumed run ends with the same file as an
/// uninterrupted one.
pub fn run_campaign(spec: &CampaignSpec, path: &Path, options: &CampaignOptions) -> Result<CampaignReport> {
    let classes = spec.classes()?;
    let mut store = ResultStore::open_or_create(path, spec, options.record_timing)?;
    let done: HashSet<String> = store.records().iter().map(|r| r.digest.clone()).collect();
    let pending: Vec<&ClassRep> = classes
        .iter()
        .filter(|c| !done.contains(&c.table.digest()))
        .collect();
    let skipped = classes.len() - pending.len();
    let limit = options.stop_after.unwrap_or(usize::MAX).min(pending.len());
    let mut written = 0;
    for chunk in pending[..limit].chunks(options.chunk.max(1)) {
        let records: Vec<CampaignRecord> = chunk
            .par_iter()
            .map(|c| search_class(spec, c, options.record_timing))
            .collect::<Result<_>>()?;
        store.append(&records)?;
        written += records.len();
    }
    Ok(CampaignReport {
        store,
        written,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    /// Orbits by brute force: apply every row and column permutation
    /// directly to the rank matrix.
    fn brute_orbits(n: usize, m: usize) -> HashMap<Vec<usize>, usize> {
        let mut class_of: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for ranks in (0..n * m).permutations(n * m) {
            let mut least = ranks.clone();
            for rows in (0..n).permutations(n) {
                for cols in (0..m).permutations(m) {
                    let image: Vec<usize> = (0..n * m).map(|k| ranks[rows[k / m] * m + cols[k % m]]).collect();
                    least = least.min(image);
                }
            }
            class_of.insert(ranks, least);
        }
        let mut sizes = HashMap::new();
        for least in class_of.values() {
            *sizes.entry(least.clone()).or_insert(0) += 1;
        }
        sizes
    }

    #[test]
    fn classes_match_brute_force_orbits() {
        for (n, m) in [(2, 2), (2, 3)] {
            let brute = brute_orbits(n, m);
            let classes = enumerate_classes(n, m).unwrap();
            assert_eq!(classes.len(), brute.len());
            for c in &classes {
                assert_eq!(brute[c.table.row_major()], c.orbit_size);
            }
        }
        assert_eq!(enumerate_classes(2, 2).unwrap().len(), 6);
        assert_eq!(enumerate_classes(2, 3).unwrap().len(), 60);
    }

    #[test]
    fn three_by_three_coverage() {
        let classes = enumerate_classes(3, 3).unwrap();
        assert_eq!(classes.len(), 10080);
        assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<usize>(), 362_880);
        assert!(classes.windows(2).all(|w| w[0].table.row_major() < w[1].table.row_major()));
    }

    #[test]
    fn class_guards() {
        assert!(matches!(enumerate_classes(2, 5), Err(Error::Budget(_))));
        assert!(enumerate_classes(3, 2).is_err());
        let mut spec = CampaignSpec::sample(2, 2, 1, 0, 1);
        assert!(spec.validate().is_err());
        spec.sample_size = 7;
        assert!(matches!(spec.classes(), Err(Error::Budget(_))));
        spec.sample_size = 6;
        assert_eq!(spec.classes().unwrap().len(), 6);
    }

    #[test]
    fn sampled_classes_are_distinct_and_canonical() {
        let spec = CampaignSpec::sample(3, 4, 2, 40, 9);
        let classes = spec.classes().unwrap();
        assert_eq!(classes.len(), 40);
        let digests: HashSet<String> = classes.iter().map(|c| c.table.digest()).collect();
        assert_eq!(digests.len(), 40);
        assert!(classes.iter().all(|c| crate::order::is_canonical(&c.table) && c.orbit_size == 144));
        assert_eq!(spec.classes().unwrap(), classes);
    }
}
