//! Step-by-step evaluation of the impossibility argument on a concrete
//! configuration.
//!
//! The argument assumes an unrealizable order and derives a contradiction,
//! so on a real configuration some premise must fail. The audit computes
//! every step anyway and records, for each one, whether its own premises
//! hold and whether its claimed conclusion holds on the input, with a signed
//! margin. Only a degenerate input stops the trace.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::lemmas::{halfspace_lemma_diagnostic, observation_check, sphere_steps, three_lemma_instances};
use super::{distance_gaps, induced_order, Configuration};
use crate::error::{Error, Result};
use crate::geom::{bisector, hyperplane_through, Hyperplane, Point, Simplex, Sphere};
use crate::order::{is_unrealizable, is_unrealizable_for, ChainReading, Comparison, RankTable};

/// Seed and sample count for the ray sampling in the halfspace step.
const HALFSPACE_SEED: u64 = 0x5eed;
const HALFSPACE_SAMPLES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepName {
    #[serde(rename = "degeneracy")]
    Degeneracy,
    #[serde(rename = "definition-check")]
    DefinitionCheck,
    #[serde(rename = "observation-1")]
    ObservationOne,
    #[serde(rename = "observation-2")]
    ObservationTwo,
    #[serde(rename = "lemma-instance-1")]
    LemmaInstance1,
    #[serde(rename = "lemma-instance-2")]
    LemmaInstance2,
    #[serde(rename = "lemma-instance-3")]
    LemmaInstance3,
    #[serde(rename = "sphere-q0")]
    SphereQ0,
    #[serde(rename = "sphere-qd1")]
    SphereQd1,
    #[serde(rename = "same-side-H")]
    SameSideH,
    #[serde(rename = "halfspace-lemma")]
    HalfspaceLemma,
    #[serde(rename = "final-contradiction")]
    FinalContradiction,
}

impl StepName {
    pub const ALL: [StepName; 12] = [
        StepName::Degeneracy,
        StepName::DefinitionCheck,
        StepName::ObservationOne,
        StepName::ObservationTwo,
        StepName::LemmaInstance1,
        StepName::LemmaInstance2,
        StepName::LemmaInstance3,
        StepName::SphereQ0,
        StepName::SphereQd1,
        StepName::SameSideH,
        StepName::HalfspaceLemma,
        StepName::FinalContradiction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StepName::Degeneracy => "degeneracy",
            StepName::DefinitionCheck => "definition-check",
            StepName::ObservationOne => "observation-1",
            StepName::ObservationTwo => "observation-2",
            StepName::LemmaInstance1 => "lemma-instance-1",
            StepName::LemmaInstance2 => "lemma-instance-2",
            StepName::LemmaInstance3 => "lemma-instance-3",
            StepName::SphereQ0 => "sphere-q0",
            StepName::SphereQd1 => "sphere-qd1",
            StepName::SameSideH => "same-side-H",
            StepName::HalfspaceLemma => "halfspace-lemma",
            StepName::FinalContradiction => "final-contradiction",
        }
    }
}

impl fmt::Display for StepName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotEvaluated,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::NotEvaluated => "not evaluated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "kebab-case")]
pub enum GeomObject {
    Point(Point),
    Points(Vec<Point>),
    Sphere(Sphere),
    Hyperplane(Hyperplane),
    Values(Vec<f64>),
    Table(RankTable),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedObject {
    pub name: String,
    pub object: GeomObject,
}

fn named(name: &str, object: GeomObject) -> NamedObject {
    NamedObject {
        name: name.into(),
        object,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditStep {
    pub name: StepName,
    pub verdict: Verdict,
    /// Signed margin of the step's conclusion, relative to the configuration
    /// scale: positive when it holds with room, negative when violated.
    pub margin: Option<f64>,
    /// Whether the premises the argument supplies for this step hold.
    pub premises_hold: bool,
    pub inputs: Vec<String>,
    pub objects: Vec<NamedObject>,
    pub notes: Vec<String>,
}

impl AuditStep {
    fn new(name: StepName) -> Self {
        Self {
            name,
            verdict: Verdict::NotEvaluated,
            margin: None,
            premises_hold: false,
            inputs: Vec::new(),
            objects: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn judged(mut self, ok: bool, margin: f64) -> Self {
        self.verdict = Verdict::from_bool(ok);
        self.margin = Some(margin);
        self
    }
}

/// A broken chain comparison with its distance margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainBreak {
    pub comparison: Comparison,
    pub lesser_rank: usize,
    pub greater_rank: usize,
    /// `(|p - q|^2 of greater) - (|p - q|^2 of lesser)` over the squared
    /// diameter; negative for a broken comparison.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditTrace {
    pub d: usize,
    pub configuration: Configuration,
    /// Induced order, absent when the configuration has ties.
    pub table: Option<RankTable>,
    pub halted: bool,
    pub chain_breaks: Vec<ChainBreak>,
    /// Whether the induced order also satisfies the closed-row chains.
    pub closed_rows_hold: Option<bool>,
    pub steps: Vec<AuditStep>,
}

impl AuditTrace {
    pub fn step(&self, name: StepName) -> &AuditStep {
        self.steps
            .iter()
            .find(|s| s.name == name)
            .expect("every step is present")
    }
}

impl fmt::Display for AuditTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit of a configuration in R^{}", self.d)?;
        if let Some(t) = &self.table {
            writeln!(f, "induced order:\n{t}")?;
        }
        for s in &self.steps {
            let margin = s.margin.map_or_else(|| "-".to_string(), |m| format!("{m:+.3e}"));
            let premises = if s.verdict == Verdict::NotEvaluated {
                ""
            } else if s.premises_hold {
                "  premises hold"
            } else {
                "  premises fail"
            };
            writeln!(f, "{:<20} {:<14} margin {margin}{premises}", s.name.as_str(), s.verdict.to_string())?;
            for n in &s.notes {
                writeln!(f, "    {n}")?;
            }
        }
        if self.halted {
            writeln!(f, "halted: degenerate configuration")?;
        }
        Ok(())
    }
}

/// Runs the full pipeline on a `(d+1) x (d+2)` configuration. Degeneracy
/// (distance ties or affinely dependent point sets) halts the trace after
/// the first step; a wrong shape is an error.
pub fn audit(c: &Configuration, tol: f64) -> Result<AuditTrace> {
    let d = c.unrealizable_shape()?;
    let scale = c.scale();
    let sq_scale = scale * scale;
    let mut trace = AuditTrace {
        d,
        configuration: c.clone(),
        table: None,
        halted: false,
        chain_breaks: Vec::new(),
        closed_rows_hold: None,
        steps: StepName::ALL.iter().map(|&n| AuditStep::new(n)).collect(),
    };
    let steps = &mut trace.steps;

    // Degeneracy.
    let mut deg = AuditStep::new(StepName::Degeneracy);
    deg.premises_hold = true;
    deg.inputs = vec!["P".into(), "Q".into()];
    let mut problems = Vec::new();
    let table = match induced_order(c, tol) {
        Ok(t) => Some(t),
        Err(Error::Ties(ties)) => {
            for t in ties.iter().take(8) {
                problems.push(format!(
                    "tie between ({},{}) and ({},{}), gap {:.3e}",
                    t.first.0, t.first.1, t.second.0, t.second.1, t.gap
                ));
            }
            None
        }
        Err(e) => return Err(e),
    };
    for (label, pts) in [
        ("P", c.p().to_vec()),
        ("Q_0", c.q_without(0)),
        ("Q_{d+1}", c.q_without(d + 1)),
    ] {
        if let Err(e) = Simplex::new(pts) {
            problems.push(format!("{label}: {e}"));
        }
    }
    let h = match hyperplane_through(&c.q()[1..=d]) {
        Ok(h) => Some(h.oriented_toward(&c.q()[0])),
        Err(e) => {
            problems.push(format!("Q': {e}"));
            None
        }
    };
    let gaps = distance_gaps(c);
    deg.notes = problems.clone();
    steps[0] = deg.judged(problems.is_empty(), gaps.relative);
    let (Some(table), Some(h), true) = (table, h, problems.is_empty()) else {
        trace.halted = true;
        return Ok(trace);
    };
    trace.table = Some(table.clone());
    steps[0].objects.push(named("induced order", GeomObject::Table(table.clone())));

    let cell_margin = |cmp: &Comparison| (c.squared_distance(cmp.greater) - c.squared_distance(cmp.lesser)) / sq_scale;

    // Definition check.
    let report = is_unrealizable(&table)?;
    let chains = crate::order::definition_chains(d);
    let def_margin = chains.iter().map(&cell_margin).fold(f64::INFINITY, f64::min);
    trace.chain_breaks = report
        .violations
        .iter()
        .map(|v| ChainBreak {
            comparison: v.comparison,
            lesser_rank: v.lesser_rank,
            greater_rank: v.greater_rank,
            margin: cell_margin(&v.comparison),
        })
        .collect();
    let mut step = AuditStep::new(StepName::DefinitionCheck);
    step.premises_hold = true;
    step.inputs = vec!["induced order".into()];
    step.notes = trace
        .chain_breaks
        .iter()
        .map(|b| {
            format!(
                "{}: {} broken (ranks {} > {}), distance margin {:+.3e}",
                b.comparison.source, b.comparison, b.lesser_rank, b.greater_rank, b.margin
            )
        })
        .collect();
    let definition_holds = report.holds();
    let closed = is_unrealizable_for(&table, ChainReading::ClosedRows)?.holds();
    trace.closed_rows_hold = Some(closed);
    if definition_holds {
        step.notes.push(format!(
            "every stated chain holds; closed-row chains {}",
            if closed { "hold too" } else { "do not" }
        ));
    }
    steps[1] = step.judged(definition_holds, def_margin);

    // Observation parts.
    let obs = observation_check(&table)?;
    for (slot, name, part_one) in [(2, StepName::ObservationOne, true), (3, StepName::ObservationTwo, false)] {
        let verdicts: Vec<_> = if part_one { obs.part_one().collect() } else { obs.part_two().collect() };
        let margin = verdicts.iter().map(|(cmp, _)| cell_margin(cmp)).fold(f64::INFINITY, f64::min);
        let mut step = AuditStep::new(name);
        step.premises_hold = definition_holds;
        step.inputs = vec!["induced order".into()];
        step.notes = verdicts
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(cmp, _)| format!("{cmp} fails, distance margin {:+.3e}", cell_margin(cmp)))
            .collect();
        steps[slot] = step.judged(verdicts.iter().all(|(_, ok)| *ok), margin);
    }
    let observations_hold = obs.part_one_holds() && obs.part_two_holds();

    // Lemma instances.
    let conclusions = ["O(P) ∈ conv(Q_{d+1})", "O(Q_{d+1}) ∈ conv(P)", "O(Q_0) ∈ conv(P)"];
    let instances = three_lemma_instances(c, tol)?;
    for (k, inst) in instances.iter().enumerate() {
        let mut step = AuditStep::new(StepName::ALL[4 + k]);
        step.premises_hold = inst.hypothesis.holds;
        step.inputs = vec![
            format!("X = ({})", inst.x_labels.join(", ")),
            format!("Y = ({})", inst.y_labels.join(", ")),
        ];
        step.objects = vec![
            named("circumcenter of X", GeomObject::Point(inst.conclusion.circumcenter.clone())),
            named("barycentric coordinates in Y", GeomObject::Values(inst.conclusion.barycentric.clone())),
        ];
        step.notes.push(format!("claim: {}", conclusions[k]));
        if !inst.hypothesis.holds {
            for (i, p) in inst.hypothesis.permutations.iter().enumerate() {
                let want = super::lemmas::cyclic_shift(i, d + 1);
                if *p != want {
                    step.notes.push(format!("y_{i} sees X in order {p:?}, expected {want:?}"));
                }
            }
        }
        steps[4 + k] = step.judged(inst.conclusion.passed, inst.conclusion.min_coordinate);
    }
    let instances_hold = instances.iter().all(|i| i.passed());

    // Circumspheres and H.
    let spheres = sphere_steps(c, tol)?;
    let sphere_objects = vec![
        named("S_0", GeomObject::Sphere(spheres.s0.clone())),
        named("S_{d+1}", GeomObject::Sphere(spheres.s_last.clone())),
    ];
    let sanity = format!(
        "vertex residuals: |q_{{d+1}} on S_0| = {:.1e}, |q_0 on S_{{d+1}}| = {:.1e}",
        spheres.q_last_on_s0, spheres.q0_on_s_last
    );
    for (slot, name, checks) in [
        (7, StepName::SphereQ0, [&spheres.center0_closer_to_q0, &spheres.q0_in_b0]),
        (8, StepName::SphereQd1, [&spheres.center_last_closer_to_q0, &spheres.q_last_outside_b_last]),
    ] {
        let mut step = AuditStep::new(name);
        step.premises_hold = instances_hold && observations_hold;
        step.inputs = vec!["Q_0".into(), "Q_{d+1}".into()];
        step.objects = sphere_objects.clone();
        step.notes.push(sanity.clone());
        for ch in checks {
            step.notes.push(format!("{}: {} ({:+.3e})", ch.name, Verdict::from_bool(ch.passed), ch.margin));
        }
        let margin = checks[0].margin.min(checks[1].margin);
        steps[slot] = step.judged(checks.iter().all(|ch| ch.passed), margin);
    }
    let spheres_hold = spheres.checks()[..4].iter().all(|ch| ch.passed);
    let mut step = AuditStep::new(StepName::SameSideH);
    step.premises_hold = spheres_hold;
    step.inputs = vec!["Q' = Q \\ {q_0, q_{d+1}}".into()];
    step.objects = vec![named("H", GeomObject::Hyperplane(spheres.h.clone()))];
    steps[9] = step.judged(spheres.same_side_of_h.passed, spheres.same_side_of_h.margin);

    // Halfspace lemma with O = O(P), x_i = q_i, L_0 = H, L_i = M(p_{i-1}, p_i).
    let o = Simplex::new(c.p().to_vec())?.circumcenter()?;
    let xs = c.q_without(d + 1);
    let mut planes = vec![h.clone()];
    for i in 1..=d {
        planes.push(bisector(&c.p()[i - 1], &c.p()[i])?);
    }
    let hs = halfspace_lemma_diagnostic(&xs, &o, &planes, HALFSPACE_SAMPLES, HALFSPACE_SEED, tol)?;
    let mut step = AuditStep::new(StepName::HalfspaceLemma);
    step.premises_hold = hs.preconditions_failed.is_empty();
    step.inputs = vec![
        "O = O(P)".into(),
        "X = Q_{d+1}".into(),
        "L_0 = H, L_i = M(p_{i-1}, p_i)".into(),
    ];
    step.objects = vec![named("O(P)", GeomObject::Point(o.clone()))];
    for (i, l) in hs.oriented.iter().enumerate() {
        step.objects.push(named(&format!("L_{i}"), GeomObject::Hyperplane(l.clone())));
    }
    step.notes = hs.preconditions_failed.iter().map(|p| format!("precondition: {p}")).collect();
    step.notes.push(format!(
        "{} rays sampled, {} points outside conv(X){}",
        hs.samples,
        hs.violations,
        if hs.unbounded { ", intersection unbounded" } else { "" }
    ));
    let hs_margin = if hs.min_coordinate.is_finite() { hs.min_coordinate } else { f64::NEG_INFINITY };
    steps[10] = step.judged(hs.passed(), hs_margin);

    // Final contradiction: q_{d+1} in conv(Q_{d+1}) and q_{d+1} outside B_{d+1}.
    let q_last = &c.q()[d + 1];
    let inside_hull = Simplex::new(xs)?.interior_margin(q_last)?;
    let in_all: f64 = hs
        .oriented
        .iter()
        .map(|l| l.signed_distance(q_last) / scale)
        .fold(f64::INFINITY, f64::min);
    let outside_ball = spheres.q_last_outside_b_last.margin;
    let mut step = AuditStep::new(StepName::FinalContradiction);
    step.premises_hold = in_all >= -tol && hs.passed();
    step.inputs = vec!["q_{d+1}".into(), "conv(Q_{d+1})".into(), "B_{d+1}".into()];
    step.notes = vec![
        format!("q_{{d+1}} in every L_i^+: margin {in_all:+.3e}"),
        format!("q_{{d+1}} ∈ conv(Q_{{d+1}}): min barycentric {inside_hull:+.3e}"),
        format!("q_{{d+1}} ∉ B_{{d+1}}: margin {outside_ball:+.3e}"),
        "both claims holding at once would be the contradiction".into(),
    ];
    steps[11] = step.judged(inside_hull >= -tol && outside_ball > 0.0, inside_hull.min(outside_ball));

    Ok(trace)
}
