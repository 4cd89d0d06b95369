use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracphase::scenario::{run, Scenario, ScenarioError, ScenarioName};

#[derive(Parser)]
#[command(name = "fracphase", version, about = "Fractional topological phases of two-qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Qubit overlap trajectories for several concurrences.
    Fig1(Opts),
    /// Qutrit overlaps along the V_N and piecewise paths.
    Fig2a(Opts),
    /// Qutrit geometric phase accumulated over cycles.
    Fig2b(Opts),
    /// Random cyclic evolutions checked against the 2*pi/d lattice.
    AuditQuantization(Opts),
    /// Dynamical phase of maximally entangled states on random paths.
    DynVanishing(Opts),
    /// A single state through a single path.
    Evolve(Opts),
}

#[derive(Args)]
struct Opts {
    /// key=value file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension(s), comma separated.
    #[arg(long)]
    d: Option<String>,
    /// Concurrence(s), comma separated.
    #[arg(long)]
    concurrence: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    cycles: Option<String>,
    /// Angles take a `pi` suffix, e.g. `2pi`.
    #[arg(long)]
    zeta: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    chi_end: Option<String>,
    /// vn, euler, piecewise or random (evolve only).
    #[arg(long)]
    path: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

fn build(name: ScenarioName, o: Opts) -> Result<Scenario, ScenarioError> {
    let mut s = Scenario::new(name);
    if let Some(p) = &o.config {
        s.load_config(p)?;
    }
    let flags = [
        ("d", o.d),
        ("concurrence", o.concurrence),
        ("samples", o.samples),
        ("seed", o.seed),
        ("trials", o.trials),
        ("cycles", o.cycles),
        ("zeta", o.zeta),
        ("theta", o.theta),
        ("phi", o.phi),
        ("chi_end", o.chi_end),
        ("path", o.path),
        ("out", o.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            s.set(key, &v)?;
        }
    }
    Ok(s)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, opts) = match cli.command {
        Command::Fig1(o) => (ScenarioName::Fig1, o),
        Command::Fig2a(o) => (ScenarioName::Fig2a, o),
        Command::Fig2b(o) => (ScenarioName::Fig2b, o),
        Command::AuditQuantization(o) => (ScenarioName::AuditQuantization, o),
        Command::DynVanishing(o) => (ScenarioName::DynVanishing, o),
        Command::Evolve(o) => (ScenarioName::Evolve, o),
    };
    match build(name, opts).and_then(|s| run(&s)) {
        Ok(report) => {
            print!("{}", report.render());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            let kind = if e.is_usage() { "usage" } else { "error" };
            eprintln!("{kind}: {e}");
            ExitCode::from(1)
        }
    }
}
