//! Acceptance report: one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is always shown.
//! Pass `--ignored` or `--include-ignored` to add the full 3x3 campaign.
//! Criteria 3 and 4 are known to fail under the chain definition as
//! implemented (see the README); their lines stay red, and the process only
//! exits non-zero when some other criterion fails or when a reported
//! failure cannot be confirmed independently.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use distorder::enumerator::{run_campaign, summarize, CampaignOptions, CampaignSpec};
use distorder::order::{
    construction_count, enumerate_constructions, enumerate_unrealizable, enumerate_unrealizable_for,
    is_unrealizable, random_table, ChainReading, RankTable,
};
use distorder::realizer::montecarlo::{
    cone_suite, halfspace_suite, kernel_suite, lemma_suite, run_all, theorem_suite,
};
use distorder::realizer::{search_realization, Configuration, SearchParams, SearchStatus};

const SEED: u64 = 20240611;

/// Criteria whose failure is documented and expected.
const KNOWN_RED: [usize; 2] = [3, 4];

struct Line {
    criterion: usize,
    passed: bool,
    /// The outcome was confirmed by an independent check in this file.
    confirmed: bool,
    detail: String,
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let full = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");

    let criteria: Vec<(usize, Duration, fn(bool) -> (bool, bool, String))> = vec![
        (1, Duration::from_secs(10), criterion_1),
        (2, Duration::from_secs(5), criterion_2),
        (3, Duration::from_secs(120), criterion_3),
        (4, Duration::from_secs(600), criterion_4),
        (5, Duration::from_secs(1800), criterion_5),
        (6, Duration::from_secs(60), criterion_6),
        (7, Duration::from_secs(120), criterion_7),
        (8, Duration::from_secs(60), criterion_8),
        (9, Duration::from_secs(600), criterion_9),
        (10, Duration::from_secs(600), criterion_10),
    ];

    let mut lines = Vec::new();
    for (k, limit, run) in criteria {
        let start = Instant::now();
        let (passed, confirmed, detail) = run(full);
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let line = Line {
            criterion: k,
            passed: passed && in_time,
            confirmed,
            detail: format!(
                "{detail} [{:.1}s, limit {}s{}]",
                elapsed.as_secs_f64(),
                limit.as_secs(),
                if in_time { "" } else { ", over time" }
            ),
        };
        println!(
            "criterion {:>2}: {} {}",
            line.criterion,
            if line.passed { "PASS" } else { "FAIL" },
            line.detail
        );
        lines.push(line);
    }

    let unexpected: Vec<usize> = lines
        .iter()
        .filter(|l| !l.confirmed || (!l.passed && !KNOWN_RED.contains(&l.criterion)))
        .map(|l| l.criterion)
        .collect();
    let red: Vec<usize> = lines.iter().filter(|l| !l.passed).map(|l| l.criterion).collect();
    println!("acceptance: {} of {} criteria pass; red: {red:?}", lines.len() - red.len(), lines.len());
    if !unexpected.is_empty() {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

// Independent oracles.

/// `(d+1)! * (1! * 2! * ... * d!)^2`, hand-evaluated for d = 1, 2, 3.
const CONSTRUCTION_COUNTS: [(usize, u64); 3] = [(1, 2), (2, 24), (3, 3456)];

/// Chain check written from the definition on `rows x cols` ranks.
fn chains_hold(r: &[Vec<usize>]) -> bool {
    let d = r.len() - 1;
    let cols = d + 2;
    let increasing = |cells: &[(usize, usize)]| cells.windows(2).all(|w| r[w[0].0][w[0].1] < r[w[1].0][w[1].1]);
    (0..=d).all(|k| {
        let row: Vec<_> = (0..=d).map(|t| (k, (k + cols - t) % cols)).collect();
        let col: Vec<_> = (0..=d).map(|t| ((k + t) % (d + 1), k)).collect();
        increasing(&row) && increasing(&col)
    }) && increasing(&(0..=d).rev().map(|i| (i, d + 1)).collect::<Vec<_>>())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn to_rows(flat: &[usize], m: usize) -> Vec<Vec<usize>> {
    flat.chunks(m).map(<[usize]>::to_vec).collect()
}

/// Ranks of the distances `|p_i - q_j|`, computed directly; `None` when two
/// squared distances are within `1e-12` of each other relative to the largest.
fn oracle_order(c: &Configuration) -> Option<Vec<Vec<usize>>> {
    let (n, m) = (c.n(), c.m());
    let mut dist = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let s: f64 = c.p()[i]
                .coords()
                .iter()
                .zip(c.q()[j].coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            dist.push((s, i * m + j));
        }
    }
    dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let top = dist.last().unwrap().0;
    if dist.windows(2).any(|w| w[1].0 - w[0].0 <= 1e-12 * top) {
        return None;
    }
    let mut ranks = vec![0; n * m];
    for (rank, &(_, cell)) in dist.iter().enumerate() {
        ranks[cell] = rank;
    }
    Some(to_rows(&ranks, m))
}

// Criteria.

fn criterion_1(_: bool) -> (bool, bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, expected) in CONSTRUCTION_COUNTS {
        let tables: Vec<RankTable> = enumerate_constructions(d).unwrap().collect();
        let distinct: BTreeSet<_> = tables.iter().cloned().collect();
        let all_valid = tables.iter().all(|t| chains_hold(&t.rows()) && is_unrealizable(t).unwrap().holds());
        let formula = construction_count(d).to_string() == expected.to_string();
        ok &= tables.len() as u64 == expected && distinct.len() == tables.len() && all_valid && formula;
        parts.push(format!("d={d}: {}", tables.len()));
    }
    (ok, true, format!("construction counts {}", parts.join(", ")))
}

fn criterion_2(_: bool) -> (bool, bool, String) {
    let oracle: BTreeSet<Vec<Vec<usize>>> = permutations(6)
        .into_iter()
        .map(|p| to_rows(&p, 3))
        .filter(|r| chains_hold(r))
        .collect();
    let library: BTreeSet<Vec<Vec<usize>>> = enumerate_unrealizable(1).unwrap().map(|t| t.rows()).collect();
    let constructions: Vec<_> = enumerate_constructions(1).unwrap().map(|t| t.rows()).collect();
    let members = constructions.iter().all(|c| oracle.contains(c));
    let closed = enumerate_unrealizable_for(1, ChainReading::ClosedRows).unwrap().count();
    let ok = oracle.len() == 61 && library == oracle && members;
    (
        ok,
        true,
        format!(
            "brute force {} of 720, enumeration {}, constructions members: {members} (closed-row chains: {closed})",
            oracle.len(),
            library.len()
        ),
    )
}

fn criterion_3(_: bool) -> (bool, bool, String) {
    let mut ok = true;
    let mut confirmed = true;
    let mut parts = Vec::new();
    for d in 1..=2 {
        let r = theorem_suite(d, 100_000, SEED);
        ok &= r.hits == 0;
        // Every reported hit must be a genuine one.
        for c in &r.examples {
            confirmed &= oracle_order(c).is_some_and(|rows| chains_hold(&rows));
        }
        confirmed &= r.examples.len() == r.hits.min(5);
        parts.push(format!(
            "d={d}: {} hits in {} generic draws (closed-row chains: {} hits)",
            r.hits,
            r.trials - r.discarded,
            r.closed_row_hits
        ));
    }
    (ok, confirmed, parts.join("; "))
}

fn criterion_4(_: bool) -> (bool, bool, String) {
    let params = |seed| SearchParams {
        restarts: 256,
        max_iters: 2000,
        seed,
        ..SearchParams::default()
    };
    let targets: Vec<RankTable> = enumerate_unrealizable(1).unwrap().collect();
    let mut realized = 0;
    let mut confirmed = true;
    for (k, t) in targets.iter().enumerate() {
        let r = search_realization(t, 1, &params(k as u64)).unwrap();
        if r.status == SearchStatus::Realized {
            realized += 1;
            confirmed &= oracle_order(&r.best).as_ref() == Some(&t.rows());
        }
    }
    let controls: Vec<RankTable> = (0u64..)
        .map(|k| random_table(2, 3, SEED ^ k).unwrap())
        .filter(|t| !is_unrealizable(t).unwrap().holds())
        .take(61)
        .collect();
    let control_realized = controls
        .iter()
        .enumerate()
        .filter(|(k, t)| search_realization(t, 1, &params(*k as u64)).unwrap().status == SearchStatus::Realized)
        .count();
    (
        realized == 0,
        confirmed,
        format!(
            "{} of {} chain tables exhausted, {realized} realized (each realization re-checked); control: {control_realized} of 61 realized",
            targets.len() - realized,
            targets.len()
        ),
    )
}

fn criterion_5(full: bool) -> (bool, bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let options = CampaignOptions::default();
    let small = run_campaign(
        &CampaignSpec::exhaustive(2, 2, 1, SEED),
        &dir.path().join("2x2.jsonl"),
        &options,
    )
    .unwrap();
    let s2 = summarize(&small.store);
    let sampled = run_campaign(
        &CampaignSpec::sample(3, 3, 2, 500, SEED),
        &dir.path().join("3x3.jsonl"),
        &options,
    )
    .unwrap();
    let s3 = summarize(&sampled.store);
    let mut ok = s2.classes == 6 && s2.realized == 6 && s3.classes == 500 && s3.realized == 500;
    let mut detail = format!(
        "2x2 in R^1: {}/{} classes realized; 3x3 in R^2 sample: {}/{} realized",
        s2.realized, s2.classes, s3.realized, s3.classes
    );
    if full {
        let all = run_campaign(
            &CampaignSpec::exhaustive(3, 3, 2, SEED),
            &dir.path().join("3x3-full.jsonl"),
            &options,
        )
        .unwrap();
        let s = summarize(&all.store);
        ok &= s.classes == 10080 && s.realized == 10080;
        detail.push_str(&format!(
            "; full 3x3: {}/{} realized, exhausted {:?}",
            s.realized, s.classes, s.exhausted_digests
        ));
    }
    (ok, true, detail)
}

fn criterion_6(_: bool) -> (bool, bool, String) {
    let reports: Vec<_> = (1..=3).map(|d| lemma_suite(d, 1000, SEED)).collect();
    let ok = reports
        .iter()
        .all(|r| r.trials == 1000 && r.failures == 0 && r.min_coordinate > 1e-9);
    let mins: Vec<String> = reports.iter().map(|r| format!("d={}: {:.3e}", r.d, r.min_coordinate)).collect();
    (ok, true, format!("min barycentric coordinate {}", mins.join(", ")))
}

fn criterion_7(_: bool) -> (bool, bool, String) {
    let reports: Vec<_> = (1..=4).map(|d| cone_suite(d, 1000, 1000, 10_000, SEED)).collect();
    let ok = reports.iter().all(|r| {
        r.max_edge_sum <= 1e-12 && r.uncovered == 0 && r.consistency_failures == 0 && r.directions == 1000
    });
    let sum = reports.iter().map(|r| r.max_edge_sum).fold(0.0, f64::max);
    let uncovered: usize = reports.iter().map(|r| r.uncovered).sum();
    let failures: usize = reports.iter().map(|r| r.consistency_failures).sum();
    let checked: usize = reports.iter().map(|r| r.consistency_trials - r.consistency_skipped).sum();
    (
        ok,
        true,
        format!(
            "max |sum v_j| {sum:.1e}, uncovered {uncovered} of 4e6, consistency failures {failures} of {checked}"
        ),
    )
}

fn criterion_8(_: bool) -> (bool, bool, String) {
    let reports: Vec<_> = (2..=3).map(|d| halfspace_suite(d, 100, 1000, SEED)).collect();
    let ok = reports.iter().all(|r| r.violations == 0 && r.unbounded == 0 && r.instances == 100);
    let parts: Vec<String> = reports
        .iter()
        .map(|r| format!("d={}: {} violations, {} unbounded", r.d, r.violations, r.unbounded))
        .collect();
    (ok, true, parts.join("; "))
}

fn criterion_9(_: bool) -> (bool, bool, String) {
    let reports: Vec<_> = (1..=6).map(|d| kernel_suite(d, 10_000, SEED)).collect();
    let residual = reports.iter().map(|r| r.max_circumcenter_residual).fold(0.0, f64::max);
    let error = reports.iter().map(|r| r.max_barycentric_error).fold(0.0, f64::max);
    let ok = residual < 1e-10 && error < 1e-10;
    (
        ok,
        true,
        format!("max circumcenter residual {residual:.1e}, max relative barycentric error {error:.1e}"),
    )
}

fn run_cli(args: &[&str], dir: &Path) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_distorder"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap();
    (out.stdout, out.status.code())
}

fn criterion_10(_: bool) -> (bool, bool, String) {
    let suites = || serde_json::to_string(&run_all(200, SEED).unwrap()).unwrap();
    let suites_ok = suites() == suites();

    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let files = ["gen.json", "all.jsonl", "found.json", "report.json", "induced.json", "trace.json", "store.jsonl", "suites.json"];
    let invocations: [&[&str]; 9] = [
        &["gen", "--d", "2", "--seed", "5", "--out", "gen.json"],
        &["gen", "--d", "2", "--all", "--out", "all.jsonl"],
        &["check", "gen.json"],
        &["search", "gen.json", "--dim", "2", "--restarts", "16", "--iters", "300", "--out", "found.json", "--report", "report.json", "--seed", "3"],
        &["induce", "config.json", "--out", "induced.json"],
        &["audit", "config.json", "--trace", "trace.json"],
        &["enumerate", "--n", "2", "--m", "3", "--dim", "1", "--exhaustive", "--store", "store.jsonl", "--no-timing"],
        &["lemma-test", "--trials", "50", "--seed", "4", "--out", "suites.json"],
        &["count", "--d", "3"],
    ];
    let mut transcripts: [Vec<u8>; 2] = [Vec::new(), Vec::new()];
    for (dir, transcript) in dirs.iter().zip(transcripts.iter_mut()) {
        std::fs::write(
            dir.path().join("config.json"),
            r#"{"dim":1,"P":[[0.0],[3.0]],"Q":[[1.0],[8.0],[-2.2]]}"#,
        )
        .unwrap();
        for args in invocations {
            let (stdout, code) = run_cli(args, dir.path());
            transcript.extend(stdout);
            transcript.extend(format!("exit {code:?}\n").bytes());
        }
        for f in files {
            transcript.extend(std::fs::read(dir.path().join(f)).unwrap_or_default());
        }
    }
    let cli_ok = transcripts[0] == transcripts[1] && !transcripts[0].is_empty();
    (
        suites_ok && cli_ok,
        true,
        format!("suite summaries identical: {suites_ok}; CLI outputs and files identical: {cli_ok}"),
    )
}
