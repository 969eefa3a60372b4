//! The experiment pipeline: resolved solve → snapshot window → DMD / POD
//! fits → error reports → CSV artifacts and the method comparison table.

use std::time::Instant;

use dmd_core::dmd::{self, DmdModel};
use dmd_core::error_analysis::{error_report, ErrorReport};
use dmd_core::numerics::{vec_diff_norm, DenseMatrix};
use dmd_core::pod_deim::{
    build_deim, fit_pod, nonlinear_term_snapshots, rom_integrate_snapshots, DeimOperator,
    PodBasis,
};
use dmd_core::snapshots::{build_snapshot_pair, io as traj_io, ObservableMap, Trajectory};
use dmd_core::solvers::{solve_snapshots, ProblemKind};

use crate::config::{ExperimentConfig, Method};
use crate::report::{write_comparison_csv, write_pod_report_csv, ComparisonRow};
use crate::HarnessError;

/// Everything one `run` produces, kept in memory for tests and the CLI.
pub struct ExperimentOutput {
    /// (observable name, report) per DMD fit.
    pub dmd_reports: Vec<(String, ErrorReport)>,
    /// Per-step POD errors over the prediction window, when POD ran.
    pub pod_errors: Option<Vec<f64>>,
    pub rows: Vec<ComparisonRow>,
    /// Set when `assert_bound` found a violated step.
    pub bound_violated: bool,
}

/// Individual timing repeats backing the medians in the comparison table.
struct TimingSample {
    method: &'static str,
    observable: String,
    fit_times: Vec<f64>,
    predict_times: Vec<f64>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs[xs.len() / 2]
}

fn write_timings_csv(
    path: &std::path::Path,
    samples: &[TimingSample],
) -> Result<(), HarnessError> {
    use std::io::Write;
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "method,observable,repeat,fit_time_s,predict_time_s")?;
    for s in samples {
        for (i, (f, p)) in s.fit_times.iter().zip(&s.predict_times).enumerate() {
            writeln!(
                w,
                "{},{},{},{:.16e},{:.16e}",
                s.method, s.observable, i, f, p
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Runs one experiment and writes its artifacts under `cfg.output_dir`:
/// `report_dmd_<obs>.csv` per observable, `report_pod.csv` when POD runs,
/// `comparison.csv`, and optionally the resolved snapshot trajectory and the
/// fitted DMD model files.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let problem = cfg.problem();
    let n_max = cfg.n_snapshots_total - 1;

    // Resolved reference on the snapshot grid, timed like any other method.
    let mut solve_times = Vec::with_capacity(cfg.timing_repeats);
    let mut resolved: Option<Trajectory> = None;
    for _ in 0..cfg.timing_repeats {
        let t = Instant::now();
        resolved = Some(solve_snapshots(&problem, cfg.n_snapshots_total)?);
        solve_times.push(t.elapsed().as_secs_f64());
    }
    let resolved = resolved.expect("at least one timing repeat");

    if cfg.export_trajectories {
        traj_io::save_binary(&resolved, &cfg.output_dir.join("resolved_snapshots.bin"))?;
        traj_io::export_csv(&resolved, &cfg.output_dir.join("resolved_snapshots.csv"))?;
    }

    let mut rows = Vec::new();
    let mut dmd_reports = Vec::new();
    let mut pod_errors = None;
    let mut bound_violated = false;
    let mut timing_samples = Vec::new();

    for method in &cfg.methods {
        match method {
            Method::Resolved => {
                rows.push(ComparisonRow {
                    method: "resolved".into(),
                    observable: "-".into(),
                    rank: problem.n_grid,
                    fit_time_s: median(solve_times.clone()),
                    predict_time_s: 0.0,
                    total_time_s: median(solve_times.clone()),
                    max_error: 0.0,
                    final_error: 0.0,
                });
                timing_samples.push(TimingSample {
                    method: "resolved",
                    observable: "-".into(),
                    fit_times: solve_times.clone(),
                    predict_times: vec![0.0; solve_times.len()],
                });
            }
            Method::Dmd => {
                for name in &cfg.observables {
                    let g = cfg.resolve_observable(name)?;
                    let (model, report, row, sample) =
                        run_dmd(cfg, &resolved, &g, name, n_max)?;
                    if cfg.assert_bound && !report.bound_dominates() {
                        bound_violated = true;
                    }
                    report.write_csv(
                        &cfg.output_dir.join(format!("report_dmd_{}.csv", sanitize(name))),
                    )?;
                    dmd::io::save_model(
                        &model,
                        &cfg.output_dir.join(format!("model_dmd_{}.bin", sanitize(name))),
                    )?;
                    dmd_reports.push((name.clone(), report));
                    rows.push(row);
                    timing_samples.push(sample);
                }
            }
            Method::PodDeim => {
                let (errors, row, sample) = run_pod(cfg, &problem, &resolved, n_max)?;
                write_pod_report_csv(
                    &cfg.output_dir.join("report_pod.csv"),
                    cfg.m,
                    resolved.t0(),
                    resolved.dt(),
                    &errors,
                )?;
                pod_errors = Some(errors);
                rows.push(row);
                timing_samples.push(sample);
            }
        }
    }

    write_comparison_csv(&cfg.output_dir.join("comparison.csv"), &rows)?;
    write_timings_csv(&cfg.output_dir.join("timings.csv"), &timing_samples)?;

    Ok(ExperimentOutput {
        dmd_reports,
        pod_errors,
        rows,
        bound_violated,
    })
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn run_dmd(
    cfg: &ExperimentConfig,
    resolved: &Trajectory,
    g: &ObservableMap,
    name: &str,
    n_max: usize,
) -> Result<(DmdModel, ErrorReport, ComparisonRow, TimingSample), HarnessError> {
    let pair = build_snapshot_pair(resolved, cfg.m)?;

    let mut fit_times = Vec::with_capacity(cfg.timing_repeats);
    let mut model: Option<DmdModel> = None;
    for _ in 0..cfg.timing_repeats {
        let t = Instant::now();
        model = Some(dmd::fit(&pair, g, cfg.rank_eps)?);
        fit_times.push(t.elapsed().as_secs_f64());
    }
    let model = model.expect("at least one timing repeat");

    // Prediction cost over the full horizon, separated from fitting.
    let mut predict_times = Vec::with_capacity(cfg.timing_repeats);
    for _ in 0..cfg.timing_repeats {
        let t = Instant::now();
        for n in cfg.m..=n_max {
            let _ = dmd::predict(&model, n)?;
        }
        predict_times.push(t.elapsed().as_secs_f64());
    }

    let report = error_report(&model, resolved, n_max)?;
    let fit_time_s = median(fit_times.clone());
    let predict_time_s = median(predict_times.clone());
    let row = ComparisonRow {
        method: "dmd".into(),
        observable: name.into(),
        rank: model.rank(),
        fit_time_s,
        predict_time_s,
        total_time_s: fit_time_s + predict_time_s,
        max_error: report.max_measured(),
        final_error: report.final_measured(),
    };
    let sample = TimingSample {
        method: "dmd",
        observable: name.into(),
        fit_times,
        predict_times,
    };
    Ok((model, report, row, sample))
}

struct PodFit {
    pod: PodBasis,
    deim: Option<DeimOperator>,
}

fn fit_pod_deim(
    cfg: &ExperimentConfig,
    problem: &dmd_core::solvers::PdeProblem,
    resolved: &Trajectory,
) -> Result<PodFit, HarnessError> {
    // State and nonlinear-term snapshots share the training window.
    let training = &resolved.states()[..cfg.m];
    let snapshots = DenseMatrix::from_columns(training)
        .map_err(dmd_core::pod_deim::PodError::from)?;
    let pod = fit_pod(&snapshots, cfg.rank_eps)?;
    let deim = match problem.kind {
        ProblemKind::HeatDirichlet => None,
        _ => {
            let nl = nonlinear_term_snapshots(problem, training)
                .expect("nonlinear kinds have a nonlinear term");
            let nl_basis = fit_pod(&nl, cfg.rank_eps)?;
            Some(build_deim(&pod, nl_basis.modes)?)
        }
    };
    Ok(PodFit { pod, deim })
}

fn run_pod(
    cfg: &ExperimentConfig,
    problem: &dmd_core::solvers::PdeProblem,
    resolved: &Trajectory,
    n_max: usize,
) -> Result<(Vec<f64>, ComparisonRow, TimingSample), HarnessError> {
    let mut fit_times = Vec::with_capacity(cfg.timing_repeats);
    let mut fitted: Option<PodFit> = None;
    for _ in 0..cfg.timing_repeats {
        let t = Instant::now();
        fitted = Some(fit_pod_deim(cfg, problem, resolved)?);
        fit_times.push(t.elapsed().as_secs_f64());
    }
    let fitted = fitted.expect("at least one timing repeat");

    let mut predict_times = Vec::with_capacity(cfg.timing_repeats);
    let mut rom: Option<Trajectory> = None;
    for _ in 0..cfg.timing_repeats {
        let t = Instant::now();
        rom = Some(rom_integrate_snapshots(
            &fitted.pod,
            fitted.deim.as_ref(),
            problem,
            cfg.n_snapshots_total,
        )?);
        predict_times.push(t.elapsed().as_secs_f64());
    }
    let rom = rom.expect("at least one timing repeat");

    let errors: Vec<f64> = (cfg.m..=n_max)
        .map(|n| vec_diff_norm(resolved.state(n), rom.state(n)))
        .collect();
    let max_error = errors.iter().cloned().fold(0.0, f64::max);
    let final_error = *errors.last().expect("prediction window nonempty");
    let fit_time_s = median(fit_times.clone());
    let predict_time_s = median(predict_times.clone());
    let row = ComparisonRow {
        method: "pod_deim".into(),
        observable: "-".into(),
        rank: fitted.pod.r,
        fit_time_s,
        predict_time_s,
        total_time_s: fit_time_s + predict_time_s,
        max_error,
        final_error,
    };
    let sample = TimingSample {
        method: "pod_deim",
        observable: "-".into(),
        fit_times,
        predict_times,
    };
    Ok((errors, row, sample))
}
