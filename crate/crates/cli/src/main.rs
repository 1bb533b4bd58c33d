use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use revctl_core::harness::{write_csv_file, PRESET_NAMES};
use revctl_core::trajectories::{validate, ValidationTolerances};
use revctl_core::{load_scenario, preset, run, Error, RunOptions, RunResult, Scenario, TimeGrid};

#[derive(Parser)]
#[command(
    name = "revctl",
    version,
    about = "Reverse-engineered control fields for two-level systems"
)]
struct Cli {
    /// Run even if the trajectories violate a hard constraint.
    #[arg(long, global = true)]
    override_validation: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario's trajectories against the dynamical constraints.
    Validate { config: PathBuf },
    /// Synthesize the field and write it as CSV, without simulating.
    Synthesize {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize and simulate; with neither flag both integrators run.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        rwa: bool,
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a built-in scenario and print its summary.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> anyhow::Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_scenario(&text).with_context(|| format!("loading {}", path.display()))
}

fn options(cli: &Cli) -> RunOptions {
    RunOptions {
        override_validation: cli.override_validation,
        ..RunOptions::default()
    }
}

fn print_summary(r: &RunResult) {
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    if r.validation.has_hard_violations() {
        eprintln!(
            "warning: running despite constraint violations:\n{}",
            r.validation
        );
    }
    let Some(s) = r.summary else {
        println!("no simulation run");
        return;
    };
    let which = if r.series_full.is_some() {
        "full"
    } else {
        "rwa"
    };
    println!("simulation            {which}");
    println!("final population err  {:.3e}", s.final_pop_error);
    println!("final phase err       {:.3e} rad", s.final_phase_error);
    println!("max population dev    {:.3e}", s.max_pop_deviation);
    println!("max norm residual     {:.3e}", s.max_norm_residual);
    println!("peak field            {:.4e} V/m", s.peak_field_v_per_m);
    println!("peak detuning         {:.4} meV", s.peak_detuning_mev);
}

fn write_out(r: &RunResult, out: &Path) -> anyhow::Result<()> {
    let rows = write_csv_file(r, out).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {rows} rows to {}", out.display());
    Ok(())
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Validate { config } => {
            let sc = load(config)?;
            let grid = TimeGrid::new(sc.t0, sc.tf, sc.output_samples - 1)?;
            let report = validate(
                &sc.system,
                &sc.population,
                &sc.phase,
                &grid,
                &ValidationTolerances::default(),
            );
            if report.violations.is_empty() {
                println!("ok: no constraint violations");
            } else {
                print!("{report}");
            }
            Ok(!report.has_hard_violations())
        }
        Command::Synthesize { config, out } => {
            let mut sc = load(config)?;
            sc.simulate.rwa = false;
            sc.simulate.full = false;
            let r = run(&sc, &options(cli))?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            write_out(&r, out)?;
            Ok(true)
        }
        Command::Simulate {
            config,
            rwa,
            full,
            out,
        } => {
            let mut sc = load(config)?;
            let both = !rwa && !full;
            sc.simulate.rwa = *rwa || both;
            sc.simulate.full = *full || both;
            let r = run(&sc, &options(cli))?;
            print_summary(&r);
            write_out(&r, out)?;
            Ok(true)
        }
        Command::Preset { name, out } => {
            let r = run(&preset(name)?, &options(cli))?;
            print_summary(&r);
            if let Some(out) = out {
                write_out(&r, out)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // exit code 2 is reserved for refused scenarios
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::ValidationRefused { report, .. }) => {
                    eprint!("{report}");
                    eprintln!("rerun with --override-validation to proceed anyway");
                    ExitCode::from(2)
                }
                _ => ExitCode::FAILURE,
            }
        }
    }
}
