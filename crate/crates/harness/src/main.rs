use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmd_harness::config::{load_config_file, ExperimentConfig, TestId};
use dmd_harness::report::{
    compare_methods, read_comparison_csv, write_comparison_csv, write_summary_csv,
};
use dmd_harness::runner::run_experiment;
use dmd_harness::sweep::{run_sweep, SweepParam};
use dmd_harness::HarnessError;

/// Benchmark runner for DMD extrapolation with computable error bounds,
/// against fully resolved solvers and a POD-DEIM baseline.
#[derive(Parser)]
#[command(name = "dmdlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV reports.
    Run(RunArgs),
    /// Run an experiment once per value of m or rank_eps.
    Sweep(SweepArgs),
    /// Merge comparison.csv files and write a ranked summary.
    Compare(CompareArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Test problem: 1a, 1b, 2a, 2b, 3, or 4.
    #[arg(long)]
    test: Option<String>,
    /// Interior grid points (total grid for test 4; must be a power of two).
    #[arg(long)]
    n_grid: Option<usize>,
    /// Total snapshot count on the uniform data window.
    #[arg(long)]
    snapshots: Option<usize>,
    /// Training snapshot count.
    #[arg(long)]
    m: Option<usize>,
    /// Rank truncation threshold (keep sigma_i > eps * sigma_1).
    #[arg(long)]
    rank_eps: Option<f64>,
    /// Comma-separated observables (g1, g2).
    #[arg(long)]
    observables: Option<String>,
    /// Comma-separated methods (resolved, dmd, pod_deim).
    #[arg(long)]
    methods: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Exit with code 2 if a DMD error bound falls below the measured error.
    #[arg(long)]
    assert_bound: bool,
    /// Timing repeats for the comparison table (median reported).
    #[arg(long)]
    timing_repeats: Option<usize>,
    /// Also write the resolved snapshot trajectory (binary + CSV).
    #[arg(long)]
    export_trajectories: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Parameter to vary: m or rank_eps.
    #[arg(long)]
    param: String,
    /// Comma-separated values, e.g. 100,200,300.
    #[arg(long)]
    values: String,
}

#[derive(Args)]
struct CompareArgs {
    /// comparison.csv files to merge.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output directory for merged.csv and summary.csv.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn build_config(common: &CommonArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match (&common.config, &common.test) {
        (Some(path), _) => {
            let mut cfg = load_config_file(path)?;
            // A --test flag on top of a config file rebuilds the defaults for
            // that test before the remaining flags apply.
            if let Some(test) = &common.test {
                let fresh = ExperimentConfig::new(TestId::parse(test)?);
                cfg.test_id = fresh.test_id;
            }
            cfg
        }
        (None, Some(test)) => ExperimentConfig::new(TestId::parse(test)?),
        (None, None) => {
            return Err(HarnessError::Config(
                "either --config or --test is required".into(),
            ))
        }
    };
    if let Some(v) = common.n_grid {
        cfg.n_grid = v;
    }
    if let Some(v) = common.snapshots {
        cfg.n_snapshots_total = v;
    }
    if let Some(v) = common.m {
        cfg.m = v;
    }
    if let Some(v) = common.rank_eps {
        cfg.rank_eps = v;
    }
    if let Some(v) = &common.observables {
        cfg.set("observables", v)?;
    }
    if let Some(v) = &common.methods {
        cfg.set("methods", v)?;
    }
    cfg.output_dir = common.out.clone();
    cfg.assert_bound = common.assert_bound;
    if let Some(v) = common.timing_repeats {
        cfg.timing_repeats = v;
    }
    if common.export_trajectories {
        cfg.export_trajectories = true;
    }
    Ok(cfg)
}

/// Exit codes: 0 success, 1 error, 2 invariant violation.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("invariant violated: error bound fell below the measured error");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Run(args) => {
            let cfg = build_config(&args.common)?;
            let output = run_experiment(&cfg)?;
            for row in &output.rows {
                println!(
                    "{:10} {:12} rank={:<4} total={:.3e}s max_error={:.3e} final_error={:.3e}",
                    row.method,
                    row.observable,
                    row.rank,
                    row.total_time_s,
                    row.max_error,
                    row.final_error
                );
            }
            println!("reports written to {}", cfg.output_dir.display());
            Ok(!(cfg.assert_bound && output.bound_violated))
        }
        Command::Sweep(args) => {
            let cfg = build_config(&args.common)?;
            let param = SweepParam::parse(&args.param)?;
            let values: Vec<String> = args
                .values
                .split(',')
                .map(|s| s.trim().to_string())
                .collect();
            let outcomes = run_sweep(&cfg, param, &values)?;
            let mut violated = false;
            for outcome in &outcomes {
                for row in &outcome.output.rows {
                    println!(
                        "{}={:8} {:10} {:12} max_error={:.3e}",
                        args.param,
                        outcome.value_label,
                        row.method,
                        row.observable,
                        row.max_error
                    );
                }
                violated |= cfg.assert_bound && outcome.output.bound_violated;
            }
            println!("sweep summary written to {}", cfg.output_dir.display());
            Ok(!violated)
        }
        Command::Compare(args) => {
            let mut rows = Vec::new();
            for path in &args.inputs {
                rows.extend(read_comparison_csv(path)?);
            }
            if rows.len() < 2 {
                return Err(HarnessError::Config(
                    "compare needs at least two rows across the inputs".into(),
                ));
            }
            std::fs::create_dir_all(&args.out)?;
            write_comparison_csv(&args.out.join("merged.csv"), &rows)?;
            let summary = compare_methods(&rows);
            write_summary_csv(&args.out.join("summary.csv"), &summary)?;
            println!(
                "fastest: {} ({}), most accurate: {} ({})",
                summary.by_time[0].method,
                summary.by_time[0].observable,
                summary.by_error[0].method,
                summary.by_error[0].observable,
            );
            println!("summary written to {}", args.out.display());
            Ok(true)
        }
    }
}
