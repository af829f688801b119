use std::path::PathBuf;

use anyhow::{bail, Context};
use forkred_core::dot::to_dot;
use forkred_core::explore::{level_sizes, ExploreOptions, Explorer};
use forkred_core::format::{parse_sequence, to_text, QuiverDoc};
use forkred_core::generate::{
    random_abundant_acyclic, random_framed_fork, random_rank3_cyclic, rng, WeightRange,
};
use forkred_core::reddening::{
    compute_ured, general_reddening_fork, source_cycle_reddening, ReddeningResult, ReddeningStatus,
    URedOptions, URedReport, URedValue,
};
use forkred_core::signs::{
    bfs_sign_coherence, check_no_all_red, random_trajectory, verify_trajectory, CoherenceVerdict,
    ConditionReading, NoAllRedVerdict, TrajectoryMode,
};
use forkred_core::structure::{
    classify, classify_rank3, detect_fork, find_fork, is_abundant, is_acyclic, FindForkOptions,
    ForkSearch, Rank3Class, StructureClass,
};
use forkred_core::{ExtendedQuiver, MutationSequence};
use serde_json::{json, Value};

use crate::input::{colors_string, print_json, quiver_text, quiver_value, InputArgs, OutputFormat};

/// What a command found: `Violation` maps to exit code 1.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violation,
}

fn emit(format: OutputFormat, value: &Value, text: impl FnOnce() -> String) {
    match format {
        OutputFormat::Text => print!("{}", text()),
        OutputFormat::Jsonl => println!("{value}"),
        _ => print_json(value),
    }
}

fn emit_quiver(format: OutputFormat, q: &ExtendedQuiver) {
    match format {
        OutputFormat::Text => print!("{}", quiver_text(q)),
        OutputFormat::Dot => print!("{}", to_dot(q)),
        OutputFormat::Jsonl => println!("{}", quiver_value(q)),
        OutputFormat::Json => print_json(&quiver_value(q)),
    }
}

fn sequence_arg(seq: Option<&str>) -> anyhow::Result<MutationSequence> {
    Ok(match seq {
        Some(s) => parse_sequence(s).context("parsing --seq")?,
        None => MutationSequence::empty(),
    })
}

pub fn mutate(
    input: &InputArgs,
    seq: Option<&str>,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    let q = input.load()?;
    let w = sequence_arg(seq)?;
    let p = q.mutate_seq(&w)?;
    emit_quiver(format, &p);
    Ok(Outcome::Ok)
}

pub fn classify_cmd(input: &InputArgs, format: OutputFormat) -> anyhow::Result<Outcome> {
    let q = input.load()?;
    let b = q.mutable_part();
    let class = classify(b);
    let mut value = serde_json::to_value(&class)?;
    let rank3 = (b.n() == 3 && !is_acyclic(b))
        .then(|| classify_rank3(b))
        .transpose()?;
    if let Some(r) = &rank3 {
        let (kind, descent) = match r {
            Rank3Class::MutationCyclic { descent, .. } => ("mutation_cyclic", descent),
            Rank3Class::MutationAcyclic { descent, .. } => ("mutation_acyclic", descent),
        };
        value["rank3"] = json!({ "class": kind, "descent": descent });
    }
    emit(format, &value, || {
        let mut out = match &class {
            StructureClass::AbundantAcyclic { ordering } => {
                format!("abundant acyclic, ordering {}\n", labels(ordering))
            }
            StructureClass::AcyclicNonAbundant { ordering } => {
                format!("acyclic (not abundant), ordering {}\n", labels(ordering))
            }
            StructureClass::Fork(cert) => format!(
                "fork with point of return {}, ordering of the rest {}\n",
                cert.point_of_return,
                labels(&cert.ordering)
            ),
            StructureClass::Other => "other\n".to_string(),
        };
        if let Some(r) = &rank3 {
            out.push_str(match r {
                Rank3Class::MutationCyclic { .. } => "rank 3: mutation-cyclic\n",
                Rank3Class::MutationAcyclic { .. } => "rank 3: mutation-acyclic\n",
            });
        }
        out
    });
    Ok(Outcome::Ok)
}

fn labels(vs: &[forkred_core::Vertex]) -> String {
    let v: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("[{}]", v.join(", "))
}

pub fn find_fork_cmd(
    input: &InputArgs,
    seed: u64,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    let q = input.load()?;
    let opts = FindForkOptions {
        seed,
        ..FindForkOptions::default()
    };
    match find_fork(q.mutable_part(), &opts)? {
        ForkSearch::Found {
            sequence,
            certificate,
            ..
        } => {
            let end = q.mutate_seq(&sequence)?;
            let value = json!({
                "status": "found",
                "sequence": sequence,
                "certificate": certificate,
                "quiver": quiver_value(&end),
            });
            emit(format, &value, || {
                format!(
                    "fork after {sequence}, point of return {}\n{}",
                    certificate.point_of_return,
                    quiver_text(&end)
                )
            });
            Ok(Outcome::Ok)
        }
        ForkSearch::Exhausted { steps } => {
            let value = json!({ "status": "exhausted", "steps": steps });
            emit(format, &value, || {
                format!("no fork found within {steps} mutations\n")
            });
            Ok(Outcome::Violation)
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Fork,
    Acyclic,
    Rank3,
}

impl From<Mode> for TrajectoryMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Fork => TrajectoryMode::Fork,
            Mode::Acyclic => TrajectoryMode::Acyclic,
            Mode::Rank3 => TrajectoryMode::Rank3,
        }
    }
}

fn reddening_text(kind: &str, r: &ReddeningResult) -> String {
    let mut out = format!(
        "{kind}: {} (length {}, bound {})\nred vertices: {} of {}\n",
        r.sequence,
        r.sequence.len(),
        r.length_bound,
        r.red_count,
        r.final_quiver.n()
    );
    if let Some((a, b)) = r.stage_lengths {
        out.push_str(&format!("stages: {a} + {b}\n"));
    }
    out.push_str(&format!(
        "final colors: {}\n",
        colors_string(&r.final_quiver)
    ));
    out
}

fn ured_text(r: &URedReport) -> String {
    let mut out = String::from("component\tstatus\tdetail\n");
    for c in &r.components {
        let (status, detail) = match &c.status {
            ReddeningStatus::Yes { sequence } => ("yes", sequence.to_string()),
            ReddeningStatus::No { reason } => ("no", reason.clone()),
            ReddeningStatus::Unknown { depth, truncated } => (
                "unknown",
                format!(
                    "none within depth {depth}{}",
                    if *truncated { " (truncated)" } else { "" }
                ),
            ),
        };
        out.push_str(&format!("{}\t{status}\t{detail}\n", labels(&c.vertices)));
    }
    match r.ured {
        URedValue::Exact(v) => out.push_str(&format!("uRed = {v} (n = {})\n", r.n)),
        URedValue::Bounds { lower, upper } => {
            out.push_str(&format!("{lower} <= uRed <= {upper} (n = {})\n", r.n))
        }
    }
    out
}

pub fn redden(
    input: &InputArgs,
    mode: Option<Mode>,
    depth: usize,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    let q = input.load_framed()?;
    let b = q.mutable_part();
    let mode = mode.or_else(|| {
        if detect_fork(b).is_some() {
            Some(Mode::Fork)
        } else if is_abundant(b) && is_acyclic(b) && source_cycle_reddening(&q).is_ok() {
            Some(Mode::Acyclic)
        } else {
            None
        }
    });
    let (kind, result) = match mode {
        Some(Mode::Fork) => ("fork reddening", general_reddening_fork(&q)?),
        Some(Mode::Acyclic) => ("source cycle", source_cycle_reddening(&q)?),
        Some(Mode::Rank3) | None => return ured(input, depth, format),
    };
    let mut value = serde_json::to_value(&result)?;
    value["construction"] = json!(kind);
    emit(format, &value, || reddening_text(kind, &result));
    Ok(Outcome::Ok)
}

pub fn ured(input: &InputArgs, depth: usize, format: OutputFormat) -> anyhow::Result<Outcome> {
    let q = input.load()?;
    let report = compute_ured(
        q.mutable_part(),
        &URedOptions {
            depth,
            ..URedOptions::default()
        },
    );
    emit(format, &serde_json::to_value(&report)?, || {
        ured_text(&report)
    });
    Ok(Outcome::Ok)
}

pub struct VerifyArgs<'a> {
    pub seq: Option<&'a str>,
    pub mode: Mode,
    pub count: usize,
    pub length: Option<usize>,
    pub seed: u64,
    pub bfs: bool,
    pub depth: usize,
    pub reading: ConditionReading,
}

pub fn verify(
    input: &InputArgs,
    args: VerifyArgs<'_>,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    let q = input.load_framed()?;
    if args.bfs {
        return verify_bfs(&q, args.mode, args.depth, format);
    }
    let mode = TrajectoryMode::from(args.mode);
    if let Some(s) = args.seq {
        let w = parse_sequence(s).context("parsing --seq")?;
        let report = verify_trajectory(&q, &w, mode, args.reading)?;
        let clean = report.is_clean();
        emit(format, &serde_json::to_value(&report)?, || {
            let mut out = format!(
                "{} prefixes checked, {} violations\n",
                report.prefixes.len(),
                report.violations.len()
            );
            for v in &report.violations {
                out.push_str(&format!("prefix {}: {} ({})\n", v.prefix, v.rule, v.detail));
            }
            out
        });
        return Ok(if clean {
            Outcome::Ok
        } else {
            Outcome::Violation
        });
    }

    let mut r = rng(args.seed);
    let length = args.length.unwrap_or(2 * q.n());
    let mut checked = 0;
    let mut prefixes = 0;
    let mut violations = Vec::new();
    for _ in 0..args.count {
        let w = random_trajectory(&q, length, mode, &mut r);
        if w.is_empty() {
            bail!("no mutation of the input has the shape required by {mode:?} mode");
        }
        let report = verify_trajectory(&q, &w, mode, args.reading)?;
        checked += 1;
        prefixes += report.prefixes.len();
        for v in report.violations {
            violations.push(
                json!({ "sequence": w, "prefix": v.prefix, "rule": v.rule, "detail": v.detail }),
            );
        }
    }
    let value = json!({
        "mode": mode,
        "trajectories": checked,
        "prefixes": prefixes,
        "violations": violations,
    });
    emit(format, &value, || {
        let mut out = format!(
            "{checked} random trajectories ({prefixes} prefixes), {} violations\n",
            violations.len()
        );
        for v in violations.iter().take(10) {
            out.push_str(&format!("{v}\n"));
        }
        out
    });
    Ok(if violations.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

fn verify_bfs(
    q: &ExtendedQuiver,
    mode: Mode,
    depth: usize,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    if mode == Mode::Rank3 {
        let report = check_no_all_red(q.mutable_part(), depth, ExploreOptions::default())?;
        let bad = !matches!(report.verdict, NoAllRedVerdict::NoAllRedFound { .. });
        emit(format, &serde_json::to_value(&report)?, || {
            format!(
                "{:?}\n{} states, {} obstruction checks\n",
                report.verdict, report.stats.nodes, report.obstruction_nodes
            )
        });
        return Ok(if bad { Outcome::Violation } else { Outcome::Ok });
    }
    let report = bfs_sign_coherence(q, depth, ExploreOptions::default());
    let bad = matches!(report.verdict, CoherenceVerdict::Violated { .. });
    emit(format, &serde_json::to_value(&report)?, || {
        format!(
            "{:?} to depth {} ({} states)\n",
            report.verdict, report.depth, report.stats.nodes
        )
    });
    Ok(if bad { Outcome::Violation } else { Outcome::Ok })
}

pub struct ExploreArgs {
    pub depth: usize,
    pub max_nodes: usize,
    pub snapshot: Option<PathBuf>,
    pub resume: bool,
}

pub fn explore(
    input: &InputArgs,
    args: ExploreArgs,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    let opts = ExploreOptions {
        max_nodes: args.max_nodes,
        ..ExploreOptions::default()
    };
    let mut explorer = match (&args.snapshot, args.resume) {
        (Some(path), true) => Explorer::load_snapshot(path, opts)
            .with_context(|| format!("resuming from {}", path.display()))?,
        (None, true) => bail!("--resume needs --snapshot"),
        _ => Explorer::new(input.load()?, opts),
    };
    let stats = explorer.run(args.depth);
    if let Some(path) = &args.snapshot {
        explorer
            .save_snapshot(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let nodes = explorer.nodes_in_order();
    let max_red = nodes
        .iter()
        .map(|n| n.quiver.red_count())
        .max()
        .unwrap_or(0);
    if format == OutputFormat::Jsonl {
        for n in &nodes {
            println!(
                "{}",
                json!({ "path": n.path, "red": n.quiver.red_count(), "colors": colors_string(&n.quiver) })
            );
        }
        return Ok(Outcome::Ok);
    }
    let levels = level_sizes(&explorer);
    let value = json!({ "stats": stats, "levels": levels, "max_red": max_red });
    emit(format, &value, || {
        format!(
            "depth {} complete: {} states, {} edges{}{}\nlevels: {:?}\nmost red: {max_red}\n",
            stats.completed_depth,
            stats.nodes,
            stats.edges,
            if stats.truncated { ", truncated" } else { "" },
            if stats.closed { ", class closed" } else { "" },
            levels
        )
    });
    Ok(Outcome::Ok)
}

pub fn dot(input: &InputArgs) -> anyhow::Result<Outcome> {
    print!("{}", to_dot(&input.load()?));
    Ok(Outcome::Ok)
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Abundant acyclic quiver.
    Abundant,
    /// Oriented 3-cycle.
    Cyclic,
    /// Framed fork reached from a framed abundant acyclic quiver.
    Fork,
}

pub fn gen(
    kind: GenKind,
    n: usize,
    weights: WeightRange,
    seed: u64,
    extra: usize,
    format: OutputFormat,
) -> anyhow::Result<Outcome> {
    let mut r = rng(seed);
    let q = match kind {
        GenKind::Abundant => ExtendedQuiver::unframed(random_abundant_acyclic(n, weights, &mut r)?),
        GenKind::Cyclic => {
            if n != 3 {
                bail!("cyclic generation is for three vertices");
            }
            ExtendedQuiver::unframed(random_rank3_cyclic(weights, &mut r)?)
        }
        GenKind::Fork => random_framed_fork(n, weights, extra, &mut r)?.0,
    };
    match format {
        OutputFormat::Text => print!("{}", to_text(&q)),
        _ if format == OutputFormat::Dot => print!("{}", to_dot(&q)),
        _ => print_json(&QuiverDoc::from_quiver(&q)),
    }
    Ok(Outcome::Ok)
}
