use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use telegraph::formats::{write_csv, write_json, Manifest};
use telegraph::{run_alpha_sweep, run_ensemble, run_spectrum, verify, ExperimentConfig, Runtime};

#[derive(Parser)]
#[command(version, about = "Two-qubit correlations under telegraph-noise ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correlation curves for each alpha and rate sample.
    Ensemble(Common),
    /// One curve per alpha, with revival summary.
    Sweep(Common),
    /// Ensemble and analytic noise spectra with fitted slopes.
    Spectrum(Common),
    /// Cross-check closed forms against trajectory averages and sampling.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (.json or .toml)
    config: PathBuf,
    /// Override master_seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override outputs.dir
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn load(&self) -> anyhow::Result<(ExperimentConfig, Runtime)> {
        let mut config = ExperimentConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            config.outputs.dir = dir.clone();
        }
        Ok((config, Runtime::new(self.threads)?))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let (name, common) = match &cli.command {
        Command::Ensemble(c) => ("ensemble", c),
        Command::Sweep(c) => ("sweep", c),
        Command::Spectrum(c) => ("spectrum", c),
        Command::Verify(c) => ("verify", c),
    };
    let (config, runtime) = common.load()?;
    let out = &config.outputs;
    match cli.command {
        Command::Ensemble(_) => {
            let run = run_ensemble(&config, &runtime)?;
            write_csv(&out.path(&out.curves), &run.records)?;
            write_json(&out.path(&out.ensembles), &run.ensembles)?;
            write_json(&out.path(&out.summary), &run.summary)?;
            println!(
                "{} curves, {} rows -> {}",
                run.summary.curves.len(),
                run.records.len(),
                out.path(&out.curves).display()
            );
        }
        Command::Sweep(_) => {
            let run = run_alpha_sweep(&config, &runtime)?;
            write_csv(&out.path(&out.curves), &run.records)?;
            write_json(&out.path(&out.ensembles), &run.ensembles)?;
            write_json(&out.path(&out.summary), &run.summary)?;
            for (alpha, h) in run.summary.alpha_values.iter().zip(&run.summary.first_revival_heights) {
                println!("alpha {alpha}: first revival height {h}");
            }
        }
        Command::Spectrum(_) => {
            let run = run_spectrum(&config, &runtime)?;
            write_csv(&out.path(&out.spectrum), &run.rows)?;
            write_json(&out.path(&out.summary), &run.fits)?;
            for fit in &run.fits {
                println!(
                    "alpha {}: ensemble slope {:.4}, analytic slope {:.4}",
                    fit.alpha, fit.ensemble_slope, fit.analytic_slope
                );
            }
        }
        Command::Verify(_) => {
            let report = verify(&config, &runtime)?;
            let path = out.path(&out.report);
            write_json(&path, &report)?;
            for check in &report.checks {
                println!("{} {}", if check.passed { "PASS" } else { "FAIL" }, check.name);
            }
            write_json(&out.path(&out.manifest), &Manifest::new(name, &config))
                .context("writing manifest")?;
            if !report.passed {
                eprintln!("verify failed: {}", report.failed_checks().join(", "));
                return Ok(ExitCode::FAILURE);
            }
            return Ok(ExitCode::SUCCESS);
        }
    }
    write_json(&out.path(&out.manifest), &Manifest::new(name, &config)).context("writing manifest")?;
    Ok(ExitCode::SUCCESS)
}
