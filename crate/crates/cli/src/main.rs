use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nam_core::catalog::{preset, Comprehension, Nc5Mode, NormalityCondition, SystemConfig};
use nam_core::experiment::{
    run_matrix, summary_table, ExperimentError, ExperimentSpec, RunOptions,
};
use nam_core::search::{
    find_models, self_instantiation_probe, ProbeOutcome, SearchError, SearchOptions,
};
use nam_core::semantics::{eval, Assignment, HullMode, Philosophy, Structure};
use nam_core::syntax::{enumerate_family, parse_formula, Constant, Term};

const EXIT_USAGE: u8 = 1;
const EXIT_CONTRADICTION: u8 = 2;
const EXIT_CAP: u8 = 3;

/// Finite-model laboratory for naive set theories with a Normal predicate.
#[derive(Parser, Debug)]
#[command(name = "nam", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Instantiate a comprehension variant at its own set term.
    Probe {
        #[arg(long, value_parser = parse_variant)]
        variant: Comprehension,
        #[arg(long, default_value = "~(x in x)")]
        body: String,
    },
    /// Run an experiment spec and write the report.
    Matrix {
        spec: PathBuf,
        /// Report path; overrides the spec's outputPath.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Record wall time per cell (the report is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Evaluate a closed formula in a structure.
    Eval {
        /// File holding one structure line.
        structure: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = PhilosophyArg::A)]
        philosophy: PhilosophyArg,
        /// Bind a free variable: `q=AT` or `q=2`.
        #[arg(long = "let", value_name = "VAR=VALUE")]
        bindings: Vec<String>,
    },
    /// Find all models of one configuration at one size.
    Search(SearchArgs),
    /// List the comprehension family.
    Family {
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Allow the constants US, OM and AT as terms.
        #[arg(long)]
        constants: bool,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value = "NAM0a", conflicts_with = "config")]
    preset: String,
    /// Inline configuration as a JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    size: usize,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    philosophy: Option<PhilosophyArg>,
    #[arg(long)]
    nc: Option<NormalityCondition>,
    #[arg(long)]
    primed: bool,
    #[arg(long, value_enum)]
    hull_mode: Option<HullModeArg>,
    #[arg(long, value_enum)]
    nc5_mode: Option<Nc5ModeArg>,
    #[arg(long)]
    require_closure: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Witnesses printed; 0 prints all.
    #[arg(long, default_value_t = 16)]
    witness_cap: usize,
    /// Print each witness with its denotation table.
    #[arg(long)]
    tables: bool,
    /// Verdict as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhilosophyArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

impl From<PhilosophyArg> for Philosophy {
    fn from(p: PhilosophyArg) -> Philosophy {
        match p {
            PhilosophyArg::A => Philosophy::A,
            PhilosophyArg::B => Philosophy::B,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HullModeArg {
    Downward,
    Literal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Nc5ModeArg {
    Disjunctive,
    Bijection,
}

fn parse_variant(s: &str) -> Result<Comprehension, String> {
    Comprehension::ALL
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| {
            let names: Vec<&str> = Comprehension::ALL.iter().map(|c| c.name()).collect();
            format!("expected one of {}", names.join(", "))
        })
}

/// An error with the exit code it maps to.
struct Failure(u8, anyhow::Error);

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure(EXIT_USAGE, e)
    }
}

fn probe(variant: Comprehension, body: &str) -> Result<u8, Failure> {
    let body = parse_formula(body).context("body")?;
    let result = self_instantiation_probe(variant, &body).map_err(|e| anyhow!(e))?;
    println!("{result}");
    println!("instance: {}", result.instance);
    Ok(match result.outcome {
        ProbeOutcome::Consistent => 0,
        ProbeOutcome::Contradiction => EXIT_CONTRADICTION,
    })
}

fn matrix(
    spec: &PathBuf,
    out: Option<PathBuf>,
    workers: usize,
    timings: bool,
) -> Result<u8, Failure> {
    let text = fs::read_to_string(spec).with_context(|| format!("reading {}", spec.display()))?;
    let classify = |e: ExperimentError| {
        let code = if e.is_cap() { EXIT_CAP } else { EXIT_USAGE };
        Failure(code, anyhow!(e))
    };
    let spec = ExperimentSpec::from_json(&text).map_err(classify)?;
    let report = run_matrix(&spec, &RunOptions { workers, timings }).map_err(classify)?;
    let json = report.to_json();
    match out.or_else(|| spec.output_path.as_ref().map(PathBuf::from)) {
        Some(path) => {
            fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
            print!("{}", summary_table(&report));
        }
        None => {
            eprint!("{}", summary_table(&report));
            print!("{json}");
        }
    }
    Ok(0)
}

fn eval_cmd(
    path: &PathBuf,
    formula: &str,
    philosophy: Philosophy,
    bindings: &[String],
) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| anyhow!("{}: no structure line", path.display()))?;
    let s: Structure = line
        .parse()
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let mut f = parse_formula(formula).context("formula")?;
    let mut assignment = Assignment::new();
    for b in bindings {
        let (var, value) = b
            .split_once('=')
            .ok_or_else(|| anyhow!("binding '{b}' is not VAR=VALUE"))?;
        if let Some(c) = Constant::from_tag(value) {
            f = f.substitute(var, &Term::Const(c));
        } else {
            let e: usize = value
                .parse()
                .map_err(|_| anyhow!("binding '{b}': expected a constant or an element"))?;
            if e >= s.size() {
                return Err(anyhow!(
                    "binding '{b}': no element {e} in a structure of size {}",
                    s.size()
                )
                .into());
            }
            assignment.insert(var.to_string(), e);
        }
    }
    let value = eval(&s, philosophy, &assignment, &f).map_err(|e| anyhow!(e))?;
    println!("{value}");
    Ok(0)
}

fn search(args: &SearchArgs) -> Result<u8, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<SystemConfig>(&text)
                .with_context(|| format!("{}", path.display()))?
        }
        None => preset(&args.preset).ok_or_else(|| anyhow!("unknown preset '{}'", args.preset))?,
    };
    let before = cfg.clone();
    if let Some(d) = args.depth {
        cfg.family_depth = d;
    }
    if let Some(p) = args.philosophy {
        cfg.philosophy = p.into();
    }
    if let Some(nc) = args.nc {
        cfg.nc = nc;
    }
    cfg.primed |= args.primed;
    if let Some(m) = args.hull_mode {
        cfg.hull_mode = match m {
            HullModeArg::Downward => HullMode::Downward,
            HullModeArg::Literal => HullMode::Literal,
        };
    }
    if let Some(m) = args.nc5_mode {
        cfg.nc5_mode = match m {
            Nc5ModeArg::Disjunctive => Nc5Mode::Disjunctive,
            Nc5ModeArg::Bijection => Nc5Mode::Bijection,
        };
    }
    cfg.require_closure |= args.require_closure;
    if cfg != before {
        cfg.name = None;
    }
    let opts = SearchOptions {
        workers: args.workers,
        witness_cap: (args.witness_cap > 0).then_some(args.witness_cap),
        record_violations: args.out.is_some(),
    };
    let verdict = find_models(&cfg, args.size, &opts).map_err(|e| {
        let code = if matches!(e, SearchError::CapExceeded(_)) {
            EXIT_CAP
        } else {
            EXIT_USAGE
        };
        Failure(code, anyhow!(e))
    })?;
    println!(
        "{} n={} candidates={} models={}",
        cfg.label(),
        verdict.size,
        verdict.candidates,
        verdict.model_count
    );
    for w in &verdict.witnesses {
        if args.tables {
            println!("{w}");
        } else {
            let mut bare = w.clone();
            bare.denotations.clear();
            println!("{bare}");
        }
    }
    if !verdict.not_evaluated.is_empty() {
        println!("not evaluated: {}", verdict.not_evaluated.join(", "));
    }
    if let Some(path) = &args.out {
        let doc = json!({
            "config": cfg,
            "size": verdict.size,
            "candidates": verdict.candidates,
            "modelCount": verdict.model_count,
            "witnesses": verdict.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "violations": verdict.violations,
            "notEvaluated": verdict.not_evaluated,
        });
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| anyhow!(e))?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn family(depth: usize, constants: bool) -> Result<u8, Failure> {
    let fam = enumerate_family(depth, constants).map_err(|e| anyhow!(e))?;
    for (i, m) in fam.members.iter().enumerate() {
        println!("{i}\t{m}");
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Probe { variant, body } => probe(*variant, body),
        Command::Matrix {
            spec,
            out,
            workers,
            timings,
        } => matrix(spec, out.clone(), *workers, *timings),
        Command::Eval {
            structure,
            formula,
            philosophy,
            bindings,
        } => eval_cmd(structure, formula, (*philosophy).into(), bindings),
        Command::Search(args) => search(args),
        Command::Family { depth, constants } => family(*depth, *constants),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
