//! Command-line front end: cost analysis, protocol simulation and replay,
//! property verification, and instance generation.
//!
//! Exit codes: 0 on success (and all properties passing), 2 for input or
//! validation failures, 3 for property failures, 4 for budget exhaustion,
//! 5 for illegal or exhausted teacher scripts, 1 otherwise.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use featlab::costs::{fs_cost, SearchBudget};
use featlab::document::load_instance;
use featlab::error::Error;
use featlab::generators::{
    generate_1nn_explosion, generate_concept_spec_tightness, generate_invalidation_tightness,
    generate_random_instance, CertifiedInstance, GeneratorParams, LabelMode, LatticeKind,
};
use featlab::instance::{FeatureId, FeatureSet, Instance};
use featlab::learners::LearnerKind;
use featlab::protocol::{
    load_script, optimal_costs, run_protocol, Protocol, ScriptEntry, ScriptTeacher, TeacherAction,
};
use featlab::verifier::{run_verification, PropertyId, TrialCounts, VerifyConfig};

const EXIT_VALIDATION: u8 = 2;
const EXIT_PROPERTY_FAIL: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_SCRIPT: u8 = 5;

#[derive(Parser)]
#[command(name = "featlab", version, about = "Exact teaching-cost analysis over feature lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-feature-set cost vectors (representation, concept spec, invalidation).
    Analyze(AnalyzeArgs),
    /// Replay a teacher script or compute optimal per-feature-set teaching costs.
    Simulate(SimulateArgs),
    /// Run the property verification suites.
    Verify(VerifyArgs),
    /// Generate an instance file (seeded random or a certified construction).
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance document to analyze.
    #[arg(long)]
    instance: PathBuf,
    /// Restrict to one learner (default: both).
    #[arg(long, value_parser = LearnerKind::parse)]
    learner: Option<LearnerKind>,
    /// Feature set selector: "all" or a comma-separated id list (the empty
    /// string selects the empty feature set).
    #[arg(long, default_value = "all")]
    feature_set: String,
    /// Search-state budget.
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = LearnerKind::parse)]
    learner: LearnerKind,
    #[arg(long, value_parser = Protocol::parse)]
    protocol: Protocol,
    /// Teacher script to replay (JSON list of actions).
    #[arg(long, conflicts_with = "optimal")]
    script: Option<PathBuf>,
    /// Compute optimal teaching costs instead of replaying a script.
    #[arg(long)]
    optimal: bool,
    #[arg(long, default_value = "all")]
    feature_set: String,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Step limit for script replay.
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Properties to check: "all" or a comma-separated list like "P1,P7,L1".
    #[arg(long, default_value = "all")]
    props: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Instances per random suite (the protocol suite uses a quarter).
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Additional instance documents to include in every suite.
    #[arg(long)]
    instance: Vec<PathBuf>,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenerateKind {
    Random,
    ConceptTightness,
    InvalidationTightness,
    #[value(name = "1nn-explosion")]
    OneNnExplosion,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LabelsArg {
    Separable,
    General,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeArg {
    Chain,
    Power,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenerateKind,
    /// Feature-space dimension (random and tightness kinds).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Pool size (random kind).
    #[arg(long, default_value_t = 8)]
    pool: usize,
    /// Number of point pairs (1nn-explosion kind).
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, value_enum, default_value_t = LabelsArg::Separable)]
    labels: LabelsArg,
    /// With general labels, flip one label if a single class was drawn.
    #[arg(long)]
    force_both_labels: bool,
    #[arg(long, value_enum, default_value_t = LatticeArg::Chain)]
    lattice: LatticeArg,
    /// Coordinate grid bounds: numerators in [-max-numer, max-numer].
    #[arg(long, default_value_t = 8)]
    max_numer: i64,
    /// Coordinate grid bounds: denominators in [1, max-denom].
    #[arg(long, default_value_t = 4)]
    max_denom: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file to write.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Generate(args) => cmd_generate(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::MalformedDocument(_)
        | Error::BadRational { .. }
        | Error::DuplicateObjectId(_)
        | Error::MissingFeatureValue { .. }
        | Error::LatticeChainViolation(_)
        | Error::UnknownFeature(_)
        | Error::UnknownObject(_)
        | Error::FeatureSetNotInLattice(_)
        | Error::DimensionMismatch { .. }
        | Error::NotSeparable
        | Error::EmptyClass
        | Error::InvalidParams(_)
        | Error::ConstructionFailed(_) => EXIT_VALIDATION,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::IllegalAction { .. }
        | Error::ProtocolStuck
        | Error::ScriptExhausted { .. }
        | Error::StepLimitExceeded(_) => EXIT_SCRIPT,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::MalformedDocument(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Resolve a `--feature-set` selector against the instance lattice.
fn select_feature_sets(inst: &Instance, selector: &str) -> Result<Vec<FeatureSet>, Error> {
    if selector == "all" {
        return Ok(inst.lattice().sets().to_vec());
    }
    let ids: Vec<FeatureId> = selector
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(FeatureId::new)
        .collect();
    let fs = FeatureSet::from_ids(ids);
    if !inst.lattice().contains(&fs) {
        return Err(Error::FeatureSetNotInLattice(fs));
    }
    Ok(vec![fs])
}

fn feature_set_ids(fs: &FeatureSet) -> Vec<String> {
    fs.iter().map(|f| f.as_str().to_string()).collect()
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AnalyzeRow {
    feature_set: Vec<String>,
    learner: String,
    representation: usize,
    concept_spec: featlab::Cost,
    invalidation: featlab::Cost,
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    let inst = load_instance(&args.instance)?;
    let sets = select_feature_sets(&inst, &args.feature_set)?;
    let learners: Vec<LearnerKind> =
        args.learner.map(|l| vec![l]).unwrap_or_else(|| LearnerKind::ALL.to_vec());
    let budget = SearchBudget::with_max_states(args.budget);

    let mut rows = Vec::new();
    for fs in &sets {
        for &learner in &learners {
            let cv = fs_cost(&inst, fs, learner, &budget)?;
            rows.push(AnalyzeRow {
                feature_set: feature_set_ids(fs),
                learner: learner.id().to_string(),
                representation: cv.representation,
                concept_spec: cv.concept_spec,
                invalidation: cv.invalidation,
            });
        }
    }

    let text = match args.format {
        Format::Machine => {
            let doc = serde_json::json!({ "command": "analyze", "rows": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes"))
        }
        Format::Table => {
            // One column of (|F|, concept, invalidation) triples per learner,
            // mirroring the cost-table layout.
            let mut s = String::new();
            let header: Vec<String> =
                learners.iter().map(|l| format!("L_{}", l.id())).collect();
            let mut lines: Vec<Vec<String>> = vec![];
            for fs in &sets {
                let mut line = vec![fs.to_string()];
                for &learner in &learners {
                    let cv = fs_cost(&inst, fs, learner, &budget)?;
                    line.push(cv.to_string());
                }
                lines.push(line);
            }
            let mut widths = vec!["feature set".len()];
            widths.extend(header.iter().map(|h| h.len()));
            for line in &lines {
                for (w, cell) in widths.iter_mut().zip(line) {
                    *w = (*w).max(cell.len());
                }
            }
            write!(s, "{:<w$}", "feature set", w = widths[0]).unwrap();
            for (h, w) in header.iter().zip(&widths[1..]) {
                write!(s, "  {h:<w$}").unwrap();
            }
            s.push('\n');
            for line in &lines {
                write!(s, "{:<w$}", line[0], w = widths[0]).unwrap();
                for (cell, w) in line[1..].iter().zip(&widths[1..]) {
                    write!(s, "  {cell:<w$}").unwrap();
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OptimalRow {
    feature_set: Vec<String>,
    features: usize,
    labels: featlab::Cost,
}

#[derive(Serialize)]
struct ReplayStep {
    state: String,
    action: ScriptEntry,
}

fn action_entry(a: &TeacherAction) -> ScriptEntry {
    match a {
        TeacherAction::AddFeature(f) => ScriptEntry::Feature { add_feature: f.as_str().to_string() },
        TeacherAction::AddExample(x) => ScriptEntry::Example { add_example: x.as_str().to_string() },
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let inst = load_instance(&args.instance)?;
    let budget = SearchBudget::with_max_states(args.budget);
    if args.optimal {
        let sets = select_feature_sets(&inst, &args.feature_set)?;
        let costs = optimal_costs(&inst, args.learner, args.protocol, &budget)?;
        let rows: Vec<OptimalRow> = sets
            .iter()
            .map(|fs| {
                let c = costs[fs];
                OptimalRow { feature_set: feature_set_ids(fs), features: c.features, labels: c.labels }
            })
            .collect();
        let text = match args.format {
            Format::Machine => {
                let doc = serde_json::json!({
                    "command": "simulate",
                    "mode": "optimal",
                    "learner": args.learner.id(),
                    "protocol": args.protocol.id(),
                    "rows": rows,
                });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes"))
            }
            Format::Table => {
                let mut s = String::new();
                let col = format!("{}/L_{}", args.protocol.id(), args.learner.id());
                let w0 = sets.iter().map(|f| f.to_string().len()).max().unwrap_or(0).max("feature set".len());
                writeln!(s, "{:<w0$}  {col}", "feature set").unwrap();
                for fs in &sets {
                    let c = costs[fs];
                    writeln!(s, "{:<w0$}  ({}, {})", fs.to_string(), c.features, c.labels).unwrap();
                }
                s
            }
        };
        emit(&args.out, &text)?;
        return Ok(ExitCode::SUCCESS);
    }

    let Some(script_path) = &args.script else {
        return Err(Error::InvalidParams(
            "simulate needs either --script PATH (replay) or --optimal".to_string(),
        ));
    };
    let actions = load_script(script_path)?;
    let mut teacher = ScriptTeacher::new(actions);
    let transcript = run_protocol(&inst, args.learner, args.protocol, &mut teacher, args.max_steps)?;
    let cost = transcript.teaching_cost();
    let text = match args.format {
        Format::Machine => {
            let steps: Vec<ReplayStep> = transcript
                .steps
                .iter()
                .map(|s| ReplayStep { state: s.state_digest.clone(), action: action_entry(&s.action) })
                .collect();
            let doc = serde_json::json!({
                "command": "simulate",
                "mode": "replay",
                "learner": args.learner.id(),
                "protocol": args.protocol.id(),
                "steps": steps,
                "terminated": transcript.terminated,
                "final_feature_set": feature_set_ids(&transcript.final_feature_set),
                "features": cost.features,
                "labels": cost.labels,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes"))
        }
        Format::Table => {
            let mut s = String::new();
            for (i, step) in transcript.steps.iter().enumerate() {
                writeln!(s, "step {i}: [{}] -> {}", step.state_digest, step.action).unwrap();
            }
            writeln!(s, "terminated: {}", transcript.terminated).unwrap();
            writeln!(s, "final feature set: {}", transcript.final_feature_set).unwrap();
            writeln!(s, "teaching cost: {cost}").unwrap();
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let props: Vec<PropertyId> = if args.props == "all" {
        PropertyId::ALL.to_vec()
    } else {
        args.props
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(PropertyId::parse)
            .collect::<Result<_, _>>()?
    };
    let extra: Vec<Instance> =
        args.instance.iter().map(load_instance).collect::<Result<_, _>>()?;
    let cfg = VerifyConfig {
        seed: args.seed,
        trials: TrialCounts::from_trials(args.trials),
        budget: SearchBudget::with_max_states(args.budget),
    };
    let report = run_verification(&cfg, &extra, &props)?;

    let text = match args.format {
        Format::Machine => report.to_json(),
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "seed {} (suites: {} separable, {} general, {} protocol)",
                report.seed, report.trials.separable, report.trials.general, report.trials.protocol)
                .unwrap();
            for p in &report.properties {
                writeln!(
                    s,
                    "{:<3} {:<4} instances={:<4} violations={}{}",
                    p.id.to_string(),
                    if p.passed() { "pass" } else { "FAIL" },
                    p.instances_tried,
                    p.violations.len(),
                    if p.incomplete { " (incomplete: budget exhausted)" } else { "" }
                )
                .unwrap();
                for v in &p.violations {
                    writeln!(s, "    {}", v.context).unwrap();
                }
            }
            for c in &report.constructions {
                writeln!(
                    s,
                    "{} {}={}: {}",
                    if c.ok { "ok  " } else { "FAIL" },
                    c.kind,
                    c.param,
                    c.certificate.join("; ")
                )
                .unwrap();
            }
            writeln!(s, "overall: {}", if report.passed { "PASS" } else { "FAIL" }).unwrap();
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_PROPERTY_FAIL) })
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, Error> {
    let (instance, certificate) = match args.kind {
        GenerateKind::Random => {
            let labels = match args.labels {
                LabelsArg::Separable => LabelMode::Separable,
                LabelsArg::General => {
                    LabelMode::General { force_both_labels: args.force_both_labels }
                }
            };
            let lattice = match args.lattice {
                LatticeArg::Chain => LatticeKind::Chain,
                LatticeArg::Power => LatticeKind::PowerSet,
            };
            let params = GeneratorParams {
                dim: args.dim,
                pool: args.pool,
                max_numer: args.max_numer,
                max_denom: args.max_denom,
                seed: args.seed,
                labels,
                lattice,
            };
            (generate_random_instance(&params)?, vec![])
        }
        GenerateKind::ConceptTightness => {
            let CertifiedInstance { instance, certificate } =
                generate_concept_spec_tightness(args.dim)?;
            (instance, certificate)
        }
        GenerateKind::InvalidationTightness => {
            let CertifiedInstance { instance, certificate } =
                generate_invalidation_tightness(args.dim)?;
            (instance, certificate)
        }
        GenerateKind::OneNnExplosion => {
            let CertifiedInstance { instance, certificate } = generate_1nn_explosion(args.k)?;
            (instance, certificate)
        }
    };
    featlab::document::save_instance(&instance, &args.out)?;

    let text = match args.format {
        Format::Machine => {
            let doc = serde_json::json!({
                "command": "generate",
                "out": args.out.display().to_string(),
                "objects": instance.len(),
                "certificate": certificate,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializes"))
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "wrote {} ({} objects, {} lattice sets)",
                args.out.display(), instance.len(), instance.lattice().len())
                .unwrap();
            for line in &certificate {
                writeln!(s, "certificate: {line}").unwrap();
            }
            s
        }
    };
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}
