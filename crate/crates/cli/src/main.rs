//! `ltot`: run, sweep and certify loss-tolerant oblivious-transfer
//! experiments from the command line.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 prediction or certificate
//! mismatch.

mod config;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::RunConfig;
use ltot_core::acceptance;
use ltot_core::adversaries::{build_strategy, AttackParams, BuiltStrategy};
use ltot_core::analysis::{compose_theorem1, estimate_cheating};
use ltot_core::engine::{ProtocolHandle, RestartLimit};
use ltot_core::protocols::{ProtocolParams, ProtocolRegistry};
use ltot_core::report::{Report, Verdict};
use ltot_core::types::Role;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ltot",
    about = "Simulator and analyzer for loss-tolerant quantum oblivious transfer protocols",
    version
)]
struct Cli {
    /// Worker threads for trial batches (results are independent of this).
    #[arg(long, global = true)]
    parallel: Option<usize>,
    /// Omit the timestamp so identical configs give byte-identical reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of one protocol/strategy pairing and report.
    Run(RunArgs),
    /// Evaluate the composition formulas for the given probabilities.
    Compose {
        a_wcf: f64,
        b_wcf: f64,
        a_rot: f64,
        b_rot: f64,
    },
    /// Re-run a base config across one swept dimension; emits CSV.
    Sweep(SweepArgs),
    /// List registered protocols and strategies.
    List,
    /// Run the full acceptance suite and report per-criterion results.
    Selftest(SelftestArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// TOML config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<String>,
    /// Alice strategy name (see `list`).
    #[arg(long)]
    alice: Option<String>,
    /// Bob strategy name (see `list`).
    #[arg(long)]
    bob: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Quantum-message loss probability.
    #[arg(long)]
    loss_rate: Option<f64>,
    /// Classical-message loss probability (messages are resent).
    #[arg(long)]
    classical_loss_rate: Option<f64>,
    /// Restart cap: a number or "unbounded".
    #[arg(long)]
    max_restarts: Option<String>,
    /// Whether a dishonest party may declare received messages lost.
    #[arg(long)]
    adversarial_loss: Option<bool>,
    #[arg(long)]
    wcf_a: Option<f64>,
    #[arg(long)]
    wcf_b: Option<f64>,
    /// Inner protocol for role-switch / combined-rot / ot-from-rot / rot-from-ot.
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    x0: Option<u8>,
    #[arg(long)]
    x1: Option<u8>,
    #[arg(long)]
    b: Option<u8>,
    /// False loss declarations made by the alice-guess attacker.
    #[arg(long)]
    declared_losses: Option<u32>,
    /// Report format: json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = v.clone(); })*
            };
        }
        take!(protocol, alice, bob, max_restarts, format);
        macro_rules! take_copy {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        take_copy!(
            trials,
            seed,
            loss_rate,
            classical_loss_rate,
            adversarial_loss,
            wcf_a,
            wcf_b,
            declared_losses
        );
        if self.base.is_some() {
            cfg.base = self.base.clone();
        }
        if self.x0.is_some() {
            cfg.x0 = self.x0;
        }
        if self.x1.is_some() {
            cfg.x1 = self.x1;
        }
        if self.b.is_some() {
            cfg.b = self.b;
        }
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Dimension to sweep: loss-rate, max-restarts, or wcf-a.
    #[arg(long)]
    dimension: String,
    /// Comma-separated grid points, e.g. "0,0.3,0.7" or "0,1,3,7".
    #[arg(long)]
    values: String,
    #[command(flatten)]
    base: RunArgs,
}

#[derive(Args, Clone)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0x4c54_4f54)]
    seed: u64,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.parallel {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized; --parallel ignored");
        }
    }
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args, cli.no_timestamp),
        Command::Compose {
            a_wcf,
            b_wcf,
            a_rot,
            b_rot,
        } => cmd_compose(*a_wcf, *b_wcf, *a_rot, *b_rot),
        Command::Sweep(args) => cmd_sweep(args),
        Command::List => cmd_list(),
        Command::Selftest(args) => cmd_selftest(args, cli.no_timestamp),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn timestamp() -> String {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_else(|_| "0".into())
}

fn attack_params(cfg: &RunConfig) -> Result<AttackParams> {
    let budget = match cfg.restart_limit()? {
        RestartLimit::Bounded(r) => r,
        RestartLimit::Unbounded => 0,
    };
    Ok(AttackParams {
        lost_message_budget: budget,
        declared_losses: cfg.declared_losses,
    })
}

/// Builds the protocol and the two per-party strategies named by the config.
fn build_run(
    cfg: &RunConfig,
) -> Result<(ProtocolHandle, BuiltStrategy, BuiltStrategy)> {
    let registry = ProtocolRegistry::standard();
    let params = cfg.protocol_params()?;
    let protocol = registry
        .build(&cfg.protocol, &params)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    if cfg.alice == "alice-lost-message" && cfg.restart_limit()? == RestartLimit::Unbounded {
        bail!("alice-lost-message needs a bounded --max-restarts (its declaration budget)");
    }
    let attack = attack_params(cfg)?;
    let alice = build_strategy(&cfg.alice, Role::Alice, &protocol, &attack)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let bob = build_strategy(&cfg.bob, Role::Bob, &protocol, &attack)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok((protocol, alice, bob))
}

/// Runs one config and appends its estimate to the report. Returns whether
/// every verdict passed.
fn execute_into(report: &mut Report, cfg: &RunConfig) -> Result<bool> {
    let (protocol, alice, bob) = build_run(cfg)?;
    let channel = cfg.channel()?;
    let attackers: Vec<&BuiltStrategy> = [&alice, &bob]
        .into_iter()
        .filter(|s| s.name != "honest")
        .collect();
    if attackers.len() > 1 {
        bail!("select at most one attacker; both sides cheating has no scored goal");
    }
    let label = format!(
        "{} vs {}/{}",
        cfg.protocol, cfg.alice, cfg.bob
    );
    let evaluated = match attackers.first() {
        Some(attacker) => {
            estimate_cheating(&protocol, attacker, &channel, cfg.trials, cfg.seed)
                .map_err(|e| anyhow::anyhow!("{e}"))?
        }
        None => {
            // Honest-honest: score protocol correctness against 1.
            estimate_cheating(&protocol, &alice, &channel, cfg.trials, cfg.seed)
                .map_err(|e| anyhow::anyhow!("{e}"))?
        }
    };
    let passed = evaluated.passed;
    report.push_certificates(&evaluated.certificates.clone());
    report.push_estimate(&label, evaluated);
    Ok(passed)
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn render(report: &Report, format: &str) -> Result<String> {
    match format {
        "json" => Ok(report.to_json()),
        "csv" => Ok(report.to_csv()),
        other => bail!("unknown format {other:?} (expected json or csv)"),
    }
}

fn cmd_run(args: &RunArgs, no_timestamp: bool) -> Result<ExitCode> {
    let cfg = args.resolve()?;
    let mut report = Report::new(cfg.echo());
    if !no_timestamp {
        report.timestamp = Some(timestamp());
    }
    let passed = execute_into(&mut report, &cfg)?;
    let text = render(&report, &cfg.format)?;
    write_output(&text, args.out.as_ref())?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_compose(a_wcf: f64, b_wcf: f64, a_rot: f64, b_rot: f64) -> Result<ExitCode> {
    let result =
        compose_theorem1(a_wcf, b_wcf, a_rot, b_rot).map_err(|e| anyhow::anyhow!("{e}"))?;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let base = args.base.resolve()?;
    let points: Vec<&str> = args
        .values
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if points.is_empty() {
        bail!("empty sweep range");
    }
    let mut rows = Vec::new();
    let mut all_passed = true;
    for point in points {
        let mut cfg = base.clone();
        match args.dimension.as_str() {
            "loss-rate" => cfg.loss_rate = point.parse().context("loss-rate value")?,
            "max-restarts" => cfg.max_restarts = point.to_string(),
            "wcf-a" => cfg.wcf_a = point.parse().context("wcf-a value")?,
            "wcf" => {
                let v: f64 = point.parse().context("wcf value")?;
                cfg.wcf_a = v;
                cfg.wcf_b = v;
            }
            other => bail!(
                "unknown sweep dimension {other:?} (expected loss-rate, max-restarts, wcf-a, or wcf)"
            ),
        }
        let mut report = Report::new(cfg.echo());
        let passed = execute_into(&mut report, &cfg)?;
        all_passed &= passed;
        let e = report.estimates.last().expect("one estimate per point");
        rows.push(format!(
            "{},{},{},{},{},{},{},{}",
            args.dimension,
            point,
            e.stats.n,
            e.stats.estimate,
            e.stats.wilson_low,
            e.stats.wilson_high,
            e.predicted,
            e.within_three_sigma
        ));
    }
    let mut csv = String::from("dimension,value,n,estimate,wilson_low,wilson_high,predicted,within_3sigma\n");
    csv.push_str(&rows.join("\n"));
    csv.push('\n');
    write_output(&csv, args.base.out.as_ref())?;
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_list() -> Result<ExitCode> {
    let registry = ProtocolRegistry::standard();
    let params = ProtocolParams::default();
    println!("protocols:");
    for name in registry.names() {
        let p = registry.build(name, &params).map_err(|e| anyhow::anyhow!("{e}"))?;
        match p.declared_profile() {
            Some(profile) => println!(
                "  {name:<15} cheat profile (A={:.4}, B={:.4}), bias {:.4}",
                profile.alice,
                profile.bob,
                profile.bias()
            ),
            None => println!("  {name:<15} (no declared profile)"),
        }
    }
    for role in [Role::Alice, Role::Bob] {
        println!("{} strategies:", role.to_string().to_lowercase());
        for name in ltot_core::adversaries::strategy_names(role) {
            println!(
                "  {name:<20} {}",
                ltot_core::adversaries::strategy_description(name)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(args: &SelftestArgs, no_timestamp: bool) -> Result<ExitCode> {
    let outcome = acceptance::run_selftest(args.seed);
    for criterion in &outcome.criteria {
        println!("{}", criterion.line());
    }
    let mut report = outcome.report;
    if !no_timestamp {
        report.timestamp = Some(timestamp());
    }
    report.verdicts.push(Verdict::new(
        "selftest",
        outcome.criteria.iter().all(|c| c.passed),
        format!("{} criteria", outcome.criteria.len()),
    ));
    if let Some(out) = &args.out {
        let format = args.format.as_deref().unwrap_or("json");
        let text = render(&report, format)?;
        write_output(&text, Some(out))?;
    }
    Ok(if outcome.criteria.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
