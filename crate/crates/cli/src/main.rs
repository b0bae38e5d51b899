mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use combplan::planner::Planner;
use combplan::study::{self, run_sweep_inspect};
use combplan::txmodel::{sweep_tx_osnr, SweepVariable, TxSweep};
use serde_json::json;

use config::ScenarioConfig;

#[derive(Parser)]
#[command(
    name = "combplan",
    version,
    about = "Comb-source aware optical network planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    PLine,
    Ocnr,
}

#[derive(Subcommand)]
enum Command {
    /// Transmit OSNR curves of single-laser and comb transmitters.
    Txosnr {
        #[arg(long, value_enum)]
        sweep: SweepArg,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        /// Directory for txosnr.csv; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan every policy of a scenario over its ART sweep and write metrics.csv.
    Plan {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write lightpath and spectrum tables for every plan.
        #[arg(long)]
        dump_plan: bool,
    },
    /// Break-even comb block cost from baseline and comb metrics tables.
    Cost {
        /// Metrics tables holding the single-laser rows.
        #[arg(long, required = true, num_args = 1..)]
        baseline: Vec<PathBuf>,
        /// Metrics tables holding the flexible-FSR rows.
        #[arg(long, required = true, num_args = 1..)]
        scenario: Vec<PathBuf>,
        /// Laser shares of the transponder cost; 0.10 to 0.60 in steps of 0.05 by default.
        #[arg(long, value_delimiter = ',')]
        shares: Option<Vec<f64>>,
        /// Directory for cost.csv; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Usage and configuration problems exit with 2, everything else with 1.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn internal(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Txosnr {
            sweep,
            from,
            to,
            step,
            out,
        } => txosnr(sweep, from, to, step, out),
        Command::Plan {
            config,
            out,
            dump_plan,
        } => plan(config, out, dump_plan),
        Command::Cost {
            baseline,
            scenario,
            shares,
            out,
        } => cost(baseline, scenario, shares, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) if is_broken_pipe(&f.error) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|e| {
                matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe)
            })
    })
}

fn emit(
    out: Option<PathBuf>,
    file: &str,
    config_json: &str,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(dir) => {
            let mut w = output::create(&dir.join(file), config_json)?;
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            output::write_comment(&mut w, config_json)?;
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn txosnr(
    sweep: SweepArg,
    from: Option<f64>,
    to: Option<f64>,
    step: f64,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let (variable, lo, hi) = match sweep {
        SweepArg::PLine => (SweepVariable::PLine, -20.0, 0.0),
        SweepArg::Ocnr => (SweepVariable::Ocnr, 35.0, 55.0),
    };
    let s = TxSweep::new(variable, from.unwrap_or(lo), to.unwrap_or(hi), step);
    s.points().map_err(|e| usage(e.into()))?;
    let curves = sweep_tx_osnr(&s).map_err(|e| usage(e.into()))?;
    let config = json!({
        "command": "txosnr",
        "sweep": variable,
        "from": s.from,
        "to": s.to,
        "step": s.step,
        "line_counts": s.line_counts,
        "mws_ocnr_db": s.mws_ocnr_db,
        "mws_p_line_dbm": s.mws_p_line_dbm,
        "target_line_power_dbm": s.target_line_power_dbm,
        "launch_per_channel_dbm": s.launch_per_channel_dbm,
    });
    emit(out, "txosnr.csv", &config.to_string(), |w| {
        output::write_txosnr(w, variable.as_str(), &curves)
    })
    .map_err(internal)
}

fn plan(config: PathBuf, out: Option<PathBuf>, dump_plan: bool) -> Result<(), Failure> {
    let mut cfg = ScenarioConfig::load(&config).map_err(usage)?;
    if let Some(dir) = out {
        cfg.output_dir = dir;
    }
    let topo = cfg.load_topology().map_err(usage)?;
    let planner = Planner::new(&topo, cfg.params).map_err(|e| usage(e.into()))?;
    let arts = cfg.art.points().map_err(|e| usage(e.into()))?;
    let config_json = cfg.to_json();

    let plans_dir = cfg.output_dir.join("plans");
    let dump = |art: f64,
                policy: &combplan::planner::PlannerPolicy,
                plan: &combplan::planner::PlanResult| {
        if !dump_plan {
            return Ok(());
        }
        let stem = format!("{}_art{}", policy.label(), art);
        let write = || -> Result<()> {
            let mut w = output::create(
                &plans_dir.join(format!("{stem}_lightpaths.csv")),
                &config_json,
            )?;
            output::write_lightpaths(&mut w, plan)?;
            w.flush()?;
            let mut w = output::create(
                &plans_dir.join(format!("{stem}_spectrum.csv")),
                &config_json,
            )?;
            plan.grid.write_csv(&mut w)?;
            w.flush()?;
            Ok(())
        };
        write().map_err(|e| combplan::Error::Io(std::io::Error::other(format!("{e:#}"))))
    };
    let rows =
        run_sweep_inspect(&planner, &cfg.policies, &arts, &dump).map_err(|e| internal(e.into()))?;

    let path = cfg.output_dir.join("metrics.csv");
    (|| -> Result<()> {
        let mut w = output::create(&path, &config_json)?;
        output::write_metrics(&mut w, &rows)?;
        w.flush()?;
        Ok(())
    })()
    .map_err(internal)?;
    eprintln!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn cost(
    baseline: Vec<PathBuf>,
    scenario: Vec<PathBuf>,
    shares: Option<Vec<f64>>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let shares = shares.unwrap_or_else(study::default_laser_shares);
    let read = |paths: &[PathBuf]| -> Result<Vec<_>> {
        let mut rows = Vec::new();
        for p in paths {
            rows.extend(output::read_metrics(p)?);
        }
        Ok(rows)
    };
    let base_rows = read(&baseline).map_err(usage)?;
    let scen_rows = read(&scenario).map_err(usage)?;
    let table = study::cost_table(&base_rows, &scen_rows, &shares)
        .context("cannot build the cost table")
        .map_err(usage)?;
    let config = json!({
        "command": "cost",
        "baseline": baseline,
        "scenario": scenario,
        "shares": shares,
    });
    emit(out, "cost.csv", &config.to_string(), |w| {
        output::write_cost(w, &table)
    })
    .map_err(internal)
}
