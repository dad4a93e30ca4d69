use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use pap_cli::{
    exit_code, preset, read_rows, run_experiment, summarize, write_summary, ExperimentConfig,
    Failure, Family,
};
use pap_core::instances::{
    decode, encode, sample_realizations, write_realizations_csv, DemandSpec, GaussianSpec,
    InstanceSpec, SetChoice, StageLayout,
};
use pap_core::solve::{solve_policy, PolicyKind, SolveOptions};
use pap_core::verify::{run_suite, write_reports_csv};

#[derive(Parser)]
#[command(
    name = "pap",
    version,
    about = "Piecewise affine policies for adjustable robust LPs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file (and optionally sampled realizations).
    Gen(GenArgs),
    /// Solve one instance file under one policy.
    Solve(SolveArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Medians per cell from result CSVs.
    Report(ReportArgs),
    /// Run an experiment grid.
    Run(RunArgs),
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "gaussian" => Ok(Family::Gaussian),
        "demand" => Ok(Family::Demand),
        "affine-gap" => Ok(Family::AffineGap),
        _ => Err(format!(
            "unknown family '{s}' (gaussian, demand, affine-gap)"
        )),
    }
}

fn parse_set(s: &str) -> Result<SetChoice, String> {
    match s {
        "hypersphere" => Ok(SetChoice::Hypersphere),
        "budgeted" => Ok(SetChoice::Budgeted),
        _ => Err(format!("unknown set '{s}' (hypersphere, budgeted)")),
    }
}

fn parse_layout(s: &str) -> Result<StageLayout, String> {
    match s {
        "multistage" => Ok(StageLayout::Multistage),
        "two-stage" => Ok(StageLayout::TwoStage),
        _ => Err(format!("unknown layout '{s}' (multistage, two-stage)")),
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_family, default_value = "gaussian")]
    family: Family,
    #[arg(long, default_value_t = 10)]
    m: usize,
    /// α for gaussian, c^D for demand.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, value_parser = parse_set, default_value = "hypersphere")]
    uset: SetChoice,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long, value_parser = parse_layout, default_value = "multistage")]
    layout: StageLayout,
    #[arg(long, default_value_t = 2)]
    locations: usize,
    #[arg(long, default_value_t = 1)]
    planning: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record only the generator spec; matrices are regenerated on load.
    #[arg(long)]
    spec_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump this many sampled realizations as CSV.
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long, requires = "realizations")]
    realizations_out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "pap")]
    policy: PolicyKind,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// domination, algorithm1, sandwich, dominance, affine-gap or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Verification CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON file with the ExperimentConfig fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_set)]
    uset: Option<Vec<SetChoice>>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    policy: Option<Vec<PolicyKind>>,
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-cell medians here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    Failure::BadInput(msg.into()).into()
}

fn gen(a: GenArgs) -> anyhow::Result<()> {
    let spec = match a.family {
        Family::Gaussian => {
            let mut g = GaussianSpec::new(a.m, a.alpha, a.uset, a.seed);
            g.budget = a.budget;
            g.layout = a.layout;
            InstanceSpec::Gaussian(g)
        }
        Family::Demand => InstanceSpec::Demand(DemandSpec::new(
            a.locations,
            a.planning,
            a.alpha,
            a.uset,
            a.seed,
        )),
        Family::AffineGap => InstanceSpec::AffineGap { m: a.m },
    };
    let inst = spec.generate()?;
    let text = encode(&inst, Some(&spec), !a.spec_only)?;
    match &a.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    if let Some(n) = a.realizations {
        let real = sample_realizations(&spec, n, a.seed)?;
        match &a.realizations_out {
            Some(p) => write_realizations_csv(fs::File::create(p)?, &real)?,
            None => write_realizations_csv(std::io::stderr(), &real)?,
        }
    }
    Ok(())
}

fn solve(a: SolveArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&a.instance)
        .with_context(|| format!("reading {}", a.instance.display()))?;
    let (inst, _) = decode(&text).map_err(|e| bad(format!("{}: {e}", a.instance.display())))?;
    let mut opts = SolveOptions::default();
    if let Some(t) = a.time_limit {
        if !(t > 0.0 && t.is_finite()) {
            return Err(bad("time limit must be positive"));
        }
        opts.time_limit = Some(Duration::from_secs_f64(t));
    }
    let out = solve_policy(&inst, a.policy, &opts)?;
    print!(
        "policy={} status={} objective={:.9}",
        a.policy,
        out.status_label(),
        out.objective
    );
    if let Some(b) = out.beta {
        print!(" beta={b:.7}");
    }
    if let Some(c) = out.cuts {
        print!(" cuts={c}");
    }
    println!(" time_ms={:.3}", out.elapsed.as_secs_f64() * 1e3);
    if !out.ok() {
        return Err(Failure::Solver(format!("{} ended {}", a.policy, out.status_label())).into());
    }
    Ok(())
}

fn verify(a: VerifyArgs) -> anyhow::Result<()> {
    let reports = run_suite(&a.suite).map_err(|e| bad(e.to_string()))?;
    for r in &reports {
        println!("{r}");
    }
    if let Some(p) = &a.out {
        write_reports_csv(fs::File::create(p)?, &reports)?;
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} checks, {failed} failed", reports.len());
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} verification checks failed")).into());
    }
    Ok(())
}

fn report(a: ReportArgs) -> anyhow::Result<()> {
    let mut rows = Vec::new();
    for p in &a.inputs {
        rows.extend(read_rows(p)?);
    }
    let summary = summarize(&rows);
    match &a.out {
        Some(p) => write_summary(fs::File::create(p)?, &summary),
        None => write_summary(std::io::stdout(), &summary),
    }
}

fn run(a: RunArgs) -> anyhow::Result<()> {
    let mut cfg = match (&a.preset, &a.config) {
        (Some(p), _) => preset(p)?,
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?
        }
        (None, None) => ExperimentConfig::default(),
    };
    if let Some(f) = a.family {
        cfg.family = f;
    }
    if let Some(v) = a.m {
        cfg.m = v;
    }
    if let Some(v) = a.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = a.uset {
        cfg.uset = v;
    }
    if a.budget.is_some() {
        cfg.budget = a.budget;
    }
    if let Some(v) = a.policy {
        cfg.policies = v;
    }
    if let Some(v) = a.seeds {
        cfg.seeds = v;
    }
    if let Some(v) = a.time_limit {
        cfg.time_limit = v;
    }
    if let Some(v) = a.jobs {
        cfg.jobs = v;
    }
    if a.out.is_some() {
        cfg.out = a.out;
    }
    let rows = run_experiment(&cfg)?;
    if let Some(p) = &a.summary {
        write_summary(fs::File::create(p)?, &summarize(&rows))?;
    }
    let failed = rows.iter().filter(|r| r.objective.is_none()).count();
    eprintln!("{} rows, {failed} without a solution", rows.len());
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a),
        Command::Run(a) => run(a),
    };
    if let Err(e) = res {
        eprintln!("error: {e:#}");
        std::process::exit(exit_code(&e));
    }
}
