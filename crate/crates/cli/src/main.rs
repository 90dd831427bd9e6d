use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use cosmoqsim::mitigation::Extrapolator;
use cosmoqsim_cli::commands;
use cosmoqsim_cli::Settings;

#[derive(Parser)]
#[command(name = "cosmoqsim", version, about = "Particle creation in an expanding universe on four simulated qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Particle number and fidelity over a log10 grid of expansion rates (CSV)
    Sweep(Common),
    /// Scale factor C(eta) for several expansion rates (CSV)
    ScaleFactor(ScaleArgs),
    /// Evolution circuit as OpenQASM 2.0, with gate counts
    ExportQasm(Common),
    /// Gate-error budget of the unmitigated circuit
    ErrorEstimate(Common),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct Common {
    #[arg(long = "A")]
    a: Option<f64>,
    #[arg(long = "B")]
    b: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    time: Option<f64>,
    /// Lower end of the log10(rho) grid
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Expansion rate for single-circuit commands
    #[arg(long)]
    rho: Option<f64>,
    /// One-qubit depolarizing probability
    #[arg(long)]
    eps1: Option<f64>,
    /// Two-qubit depolarizing probability
    #[arg(long)]
    eps2: Option<f64>,
    /// Odd folding factors, starting at 1
    #[arg(long, value_delimiter = ',')]
    zne_scales: Option<Vec<u32>>,
    /// linear, richardson-quadratic or exponential
    #[arg(long)]
    zne_method: Option<Extrapolator>,
    /// Sample the noisy branch with this many shots
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// File of `key = value` lines; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScaleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_delimiter = ',')]
    rhos: Option<Vec<f64>>,
    #[arg(long)]
    eta_min: Option<f64>,
    #[arg(long)]
    eta_max: Option<f64>,
    #[arg(long)]
    eta_points: Option<usize>,
}

fn overlay<T>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

impl Common {
    fn settings(self) -> anyhow::Result<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &self.config {
            s.apply_file(path)?;
        }
        overlay(&mut s.a, self.a);
        overlay(&mut s.b, self.b);
        overlay(&mut s.mass, self.mass);
        overlay(&mut s.momentum, self.momentum);
        overlay(&mut s.time, self.time);
        overlay(&mut s.x_min, self.x_min);
        overlay(&mut s.x_max, self.x_max);
        overlay(&mut s.points, self.points);
        overlay(&mut s.rho, self.rho);
        overlay(&mut s.eps1, self.eps1);
        overlay(&mut s.eps2, self.eps2);
        overlay(&mut s.zne_scales, self.zne_scales);
        overlay(&mut s.zne_method, self.zne_method);
        overlay(&mut s.seed, self.seed);
        if self.shots.is_some() {
            s.shots = self.shots;
        }
        if self.out.is_some() {
            s.out = self.out;
        }
        Ok(s)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Sweep(args) => {
            let s = args.settings()?;
            let csv = commands::sweep(&s)?;
            emit(s.out.as_ref(), &csv)
        }
        Command::ScaleFactor(args) => {
            let mut s = args.common.settings()?;
            overlay(&mut s.rhos, args.rhos);
            overlay(&mut s.eta_min, args.eta_min);
            overlay(&mut s.eta_max, args.eta_max);
            overlay(&mut s.eta_points, args.eta_points);
            let csv = commands::scale_factor_table(&s)?;
            emit(s.out.as_ref(), &csv)
        }
        Command::ExportQasm(args) => {
            let s = args.settings()?;
            let (qasm, summary) = commands::export(&s)?;
            match &s.out {
                Some(_) => {
                    emit(s.out.as_ref(), &qasm)?;
                    print!("{summary}");
                }
                None => {
                    print!("{qasm}");
                    eprint!("{summary}");
                }
            }
            Ok(())
        }
        Command::ErrorEstimate(args) => {
            let s = args.settings()?;
            print!("{}", commands::error_report(&s)?);
            Ok(())
        }
    }
}
