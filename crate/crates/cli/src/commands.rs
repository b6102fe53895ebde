use std::fs;
use std::path::Path;

use distorder::enumerator::{run_campaign, summarize, summarize_path, CampaignOptions, CampaignSpec};
use distorder::order::{
    construct_unrealizable, construction_count, enumerate_constructions, is_unrealizable, is_unrealizable_for,
    ChainReading, ConstructionChoice, RankTable, MAX_CONSTRUCTION_D,
};
use distorder::realizer::montecarlo::run_all;
use distorder::realizer::{
    audit, distance_gaps, induced_order, observation_check, search_realization, Configuration, SearchParams,
    SearchStatus,
};
use distorder::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Command, Failure, SearchFlags};

type Outcome = Result<(), Failure>;

/// Largest `d` for which `gen --all` writes every table.
const GEN_ALL_MAX_D: usize = 3;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Gen {
            d,
            seed,
            choice,
            all,
            out,
        } => gen(d as usize, seed, choice.as_deref(), all, &out),
        Command::Check { table } => check(&table),
        Command::Induce { config, out, tol } => induce(&config, &out, tol),
        Command::Search {
            table,
            dim,
            search,
            out,
            report,
        } => search_cmd(&table, dim, &search, &out, report.as_deref()),
        Command::Audit { config, trace, tol } => audit_cmd(&config, trace.as_deref(), tol),
        Command::Enumerate {
            n,
            m,
            dim,
            exhaustive: _,
            sample,
            store,
            search,
            no_timing,
            stop_after,
        } => enumerate(n, m, dim, sample, &store, &search, no_timing, stop_after),
        Command::Count { d } => {
            println!("{}", construction_count(d as usize));
            Ok(())
        }
        Command::LemmaTest { trials, seed, out } => lemma_test(trials, seed, out.as_deref()),
        Command::Summarize { store, json } => summarize_cmd(&store, json.as_deref()),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        let code = Failure::from(Error::Json(e));
        Failure::new(code.code, format!("{}: {}", path.display(), code.message))
    })
}

fn write_line<T: Serialize>(path: &Path, value: &T) -> Outcome {
    let mut text = serde_json::to_string(value).map_err(Error::from)?;
    text.push('\n');
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn gen(d: usize, seed: Option<u64>, choice: Option<&Path>, all: bool, out: &Path) -> Outcome {
    if all {
        if d > GEN_ALL_MAX_D.min(MAX_CONSTRUCTION_D) {
            return Err(Failure::new(
                2,
                format!(
                    "--all is limited to d <= {GEN_ALL_MAX_D}; d = {d} has {} tables",
                    construction_count(d)
                ),
            ));
        }
        let mut text = String::new();
        let mut count = 0usize;
        for t in enumerate_constructions(d)? {
            text.push_str(&serde_json::to_string(&t).map_err(Error::from)?);
            text.push('\n');
            count += 1;
        }
        write_text(out, &text)?;
        println!("wrote {count} tables to {}", out.display());
        return Ok(());
    }
    let choice = match (choice, seed) {
        (Some(path), _) => {
            let c: ConstructionChoice = read_json(path)?;
            if c.d != d {
                return Err(Failure::new(2, format!("choice is for d = {}, not {d}", c.d)));
            }
            c
        }
        (None, Some(s)) => ConstructionChoice::seeded(d, s),
        (None, None) => ConstructionChoice::identity(d),
    };
    let t = construct_unrealizable(&choice)?;
    write_line(out, &t)?;
    print!("{t}");
    Ok(())
}

fn check(path: &Path) -> Outcome {
    let t: RankTable = read_json(path)?;
    let report = is_unrealizable(&t)?;
    print!("{t}");
    println!("unrealizable: {}", if report.holds() { "yes" } else { "no" });
    for v in &report.violations {
        println!(
            "  violated: {} [{} has rank {}, {} has rank {}]",
            v.comparison,
            cell(v.comparison.lesser),
            v.lesser_rank,
            cell(v.comparison.greater),
            v.greater_rank
        );
    }
    let closed = is_unrealizable_for(&t, ChainReading::ClosedRows)?;
    println!("closed row chains: {}", if closed.holds() { "hold" } else { "broken" });
    let obs = observation_check(&t)?;
    println!(
        "observation part 1: {}",
        if obs.part_one_holds() { "holds" } else { "fails" }
    );
    println!(
        "observation part 2: {}",
        if obs.part_two_holds() { "holds" } else { "fails" }
    );
    for c in obs.failures() {
        println!("  fails: {c}");
    }
    Ok(())
}

fn cell((i, j): (usize, usize)) -> String {
    format!("({i},{j})")
}

fn induce(path: &Path, out: &Path, tol: f64) -> Outcome {
    let c: Configuration = read_json(path)?;
    let t = induced_order(&c, tol)?;
    write_line(out, &t)?;
    print!("{t}");
    let gaps = distance_gaps(&c);
    println!(
        "minimum squared-distance gap: {:e} (relative {:e})",
        gaps.min_gap, gaps.relative
    );
    Ok(())
}

fn search_params(flags: &SearchFlags) -> SearchParams {
    let mut p = SearchParams {
        seed: flags.seed,
        ..SearchParams::default()
    };
    if let Some(r) = flags.restarts {
        p.restarts = r;
    }
    if let Some(i) = flags.iters {
        p.max_iters = i;
    }
    if let Some(m) = flags.margin {
        p.margin = m;
    }
    p
}

fn search_cmd(path: &Path, dim: usize, flags: &SearchFlags, out: &Path, report: Option<&Path>) -> Outcome {
    let t: RankTable = read_json(path)?;
    let params = search_params(flags);
    params.validate()?;
    let result = search_realization(&t, dim, &params)?;
    if let Some(r) = report {
        write_line(r, &result)?;
    }
    match result.status {
        SearchStatus::Realized => {
            write_line(out, &result.best)?;
            println!(
                "realized: restart {} after {} iterations, margin {:e}",
                result.restart, result.iterations, result.margin
            );
            Ok(())
        }
        SearchStatus::Exhausted => {
            write_line(out, &result)?;
            println!(
                "exhausted: no realization found within budget ({} restarts, best margin {:e})",
                result.restarts_used, result.margin
            );
            Err(Failure::new(5, "no realization found within budget"))
        }
    }
}

fn audit_cmd(path: &Path, trace_path: Option<&Path>, tol: f64) -> Outcome {
    let c: Configuration = read_json(path)?;
    let trace = audit(&c, tol)?;
    print!("{trace}");
    if let Some(p) = trace_path {
        let mut text = serde_json::to_string_pretty(&trace).map_err(Error::from)?;
        text.push('\n');
        write_text(p, &text)?;
    }
    if trace.halted {
        return Err(Failure::new(4, "configuration is degenerate; audit halted"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    n: usize,
    m: usize,
    dim: usize,
    sample: Option<usize>,
    store: &Path,
    flags: &SearchFlags,
    no_timing: bool,
    stop_after: Option<usize>,
) -> Outcome {
    let mut spec = match sample {
        Some(k) => CampaignSpec::sample(n, m, dim, k, flags.seed),
        None => CampaignSpec::exhaustive(n, m, dim, flags.seed),
    };
    spec.params = SearchParams {
        seed: 0,
        ..search_params(flags)
    };
    let options = CampaignOptions {
        record_timing: !no_timing,
        stop_after,
        ..CampaignOptions::default()
    };
    let report = run_campaign(&spec, store, &options)?;
    println!(
        "{} new records, {} classes already stored",
        report.written, report.skipped
    );
    let summary = summarize(&report.store);
    print!("{summary}");
    if summary.classes > 0 {
        println!(
            "realized fraction: {:.4}",
            summary.realized as f64 / summary.classes as f64
        );
    }
    Ok(())
}

fn lemma_test(trials: usize, seed: u64, out: Option<&Path>) -> Outcome {
    let s = run_all(trials, seed)?;
    let mark = |ok: bool| if ok { "ok  " } else { "FAIL" };
    for r in &s.lemma {
        println!(
            "{} lemma d={}: {} trials, min barycentric coordinate {:e}, {} failures",
            mark(r.passed()),
            r.d,
            r.trials,
            r.min_coordinate,
            r.failures
        );
    }
    for r in &s.halfspace {
        println!(
            "{} halfspace d={}: {} instances x {} samples, {} violations, {} unbounded",
            mark(r.passed()),
            r.d,
            r.instances,
            r.samples_per_instance,
            r.violations,
            r.unbounded
        );
    }
    for r in &s.cones {
        println!(
            "{} cones d={}: max |sum v_j| {:e}, {} uncovered of {}, {} consistency failures of {}",
            mark(r.passed()),
            r.d,
            r.max_edge_sum,
            r.uncovered,
            r.simplices * r.directions,
            r.consistency_failures,
            r.consistency_trials - r.consistency_skipped
        );
    }
    for r in &s.kernel {
        println!(
            "{} kernel d={}: circumcenter residual {:e}, barycentric error {:e}",
            mark(r.passed()),
            r.d,
            r.max_circumcenter_residual,
            r.max_barycentric_error
        );
    }
    for r in &s.theorem {
        println!(
            "{} chain definition d={}: {} of {} random configurations satisfy it ({} discarded; closed rows: {})",
            mark(r.passed()),
            r.d,
            r.hits,
            r.trials - r.discarded,
            r.discarded,
            r.closed_row_hits
        );
    }
    println!(
        "{} scale invariance: {} mismatches in {} trials",
        mark(s.scale.passed()),
        s.scale.mismatches,
        s.scale.trials - s.scale.skipped
    );
    if let Some(p) = out {
        write_line(p, &s)?;
    }
    Ok(())
}

fn summarize_cmd(store: &Path, json: Option<&Path>) -> Outcome {
    let s = summarize_path(store)?;
    print!("{s}");
    if let Some(p) = json {
        write_line(p, &s)?;
    }
    Ok(())
}
