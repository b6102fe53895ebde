use std::fmt;
use std::path::Path;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{CampaignSpec, ResultStore};
use crate::error::Result;
use crate::order::{is_unrealizable, RankTable, Relabeling};
use crate::realizer::SearchStatus;

/// Realized margins falling in `[10^decade, 10^(decade+1))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginBin {
    pub decade: i32,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub campaign: Option<CampaignSpec>,
    pub classes: usize,
    pub realized: usize,
    pub exhausted: usize,
    /// Labeled tables covered by the stored classes.
    pub labeled_covered: u64,
    /// All labeled tables of the shape, when it fits in a u64.
    pub labeled_total: Option<u64>,
    pub margin_histogram: Vec<MarginBin>,
    /// Up to ten slowest classes, as (digest, millis).
    pub slowest: Vec<(String, u64)>,
    pub exhausted_digests: Vec<String>,
    /// On `(d+1) x (d+2)` grids: classes with a member that satisfies every
    /// definition chain.
    pub chain_classes: usize,
    /// Those chain classes that the search nonetheless realized.
    pub chain_classes_realized: Vec<String>,
}

impl Summary {
    pub fn coverage(&self) -> Option<f64> {
        self.labeled_total.map(|t| self.labeled_covered as f64 / t as f64)
    }
}

pub fn summarize_path(path: &Path) -> Result<Summary> {
    Ok(summarize(&ResultStore::load(path)?))
}

pub fn summarize(store: &ResultStore) -> Summary {
    let records = store.records();
    let campaign = store.header().map(|h| h.campaign.clone());
    let realized: Vec<_> = records.iter().filter(|r| r.status == SearchStatus::Realized).collect();
    let exhausted_digests: Vec<String> = records
        .iter()
        .filter(|r| r.status == SearchStatus::Exhausted)
        .map(|r| r.digest.clone())
        .collect();

    let mut margin_histogram: Vec<MarginBin> = Vec::new();
    let decades = realized
        .iter()
        .filter(|r| r.margin > 0.0)
        .map(|r| r.margin.log10().floor() as i32)
        .sorted()
        .chunk_by(|d| *d);
    for (decade, group) in &decades {
        margin_histogram.push(MarginBin {
            decade,
            count: group.count(),
        });
    }

    let slowest = records
        .iter()
        .sorted_by(|a, b| b.millis.cmp(&a.millis).then_with(|| a.digest.cmp(&b.digest)))
        .take(10)
        .map(|r| (r.digest.clone(), r.millis))
        .collect();

    let labeled_total = campaign
        .as_ref()
        .and_then(|c| (1..=(c.n * c.m) as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)));

    let mut chain_classes = 0;
    let mut chain_classes_realized = Vec::new();
    for r in records {
        let Ok(t) = RankTable::parse_digest(&r.digest) else { continue };
        if t.m() != t.n() + 1 || !class_meets_chains(&t) {
            continue;
        }
        chain_classes += 1;
        if r.status == SearchStatus::Realized {
            chain_classes_realized.push(r.digest.clone());
        }
    }

    Summary {
        campaign,
        classes: records.len(),
        realized: realized.len(),
        exhausted: exhausted_digests.len(),
        labeled_covered: records.iter().map(|r| r.class_size).sum(),
        labeled_total,
        margin_histogram,
        slowest,
        exhausted_digests,
        chain_classes,
        chain_classes_realized,
    }
}

fn class_meets_chains(t: &RankTable) -> bool {
    (0..t.n()).permutations(t.n()).any(|rows| {
        (0..t.m()).permutations(t.m()).any(|cols| {
            let image = Relabeling {
                rows: rows.clone(),
                cols,
            }
            .apply(t);
            is_unrealizable(&image).is_ok_and(|r| r.holds())
        })
    })
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.campaign {
            writeln!(f, "campaign: {}x{} in R^{}, seed {}", c.n, c.m, c.dim, c.seed)?;
        }
        writeln!(
            f,
            "classes: {} ({} realized, {} exhausted)",
            self.classes, self.realized, self.exhausted
        )?;
        match (self.labeled_total, self.coverage()) {
            (Some(total), Some(frac)) => writeln!(
                f,
                "labeled tables covered: {} of {} ({:.2}%)",
                self.labeled_covered,
                total,
                100.0 * frac
            )?,
            _ => writeln!(f, "labeled tables covered: {}", self.labeled_covered)?,
        }
        if !self.margin_histogram.is_empty() {
            writeln!(f, "realized margins:")?;
            for b in &self.margin_histogram {
                writeln!(f, "  [1e{}, 1e{}): {}", b.decade, b.decade + 1, b.count)?;
            }
        }
        if self.slowest.iter().any(|(_, ms)| *ms > 0) {
            writeln!(f, "slowest classes:")?;
            for (d, ms) in &self.slowest {
                writeln!(f, "  {d}  {ms} ms")?;
            }
        }
        if !self.exhausted_digests.is_empty() {
            writeln!(f, "exhausted classes:")?;
            for d in &self.exhausted_digests {
                writeln!(f, "  {d}")?;
            }
        }
        if self.chain_classes > 0 {
            writeln!(
                f,
                "classes meeting the chain definition: {} ({} realized)",
                self.chain_classes,
                self.chain_classes_realized.len()
            )?;
        }
        Ok(())
    }
}
