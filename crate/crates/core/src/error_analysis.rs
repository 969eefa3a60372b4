//! Computable error estimators for DMD extrapolation: per-step local
//! truncation errors, the ε_m surrogate, measured global errors, and the
//! product-form global error bound
//!
//!   ‖eⁿ‖₂ ≤ ‖ΦΛ^{n−m}‖_F‖Φ⁺‖_F‖e^m‖₂
//!           + (n−m)·ε_m·max_{0≤k≤n−m−1}‖ΦΛ^k‖_F‖Φ⁺‖_F.
//!
//! Local quantities live in the model's observable space; the measured global
//! error is reported in state space after unlifting. The bound is never
//! clamped to the measured error, so divergence between the two is visible in
//! the reports.

use std::ops::RangeInclusive;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::dmd::{apply_propagator, predict, predict_observable, DmdError, DmdModel};
use crate::numerics::vec_diff_norm;
use crate::snapshots::{SnapshotError, SnapshotPair, Trajectory};

#[derive(Debug, Error)]
pub enum ErrorAnalysisError {
    #[error("step range {start}..={end} is invalid for a trajectory of {len} states (start must be >= {min_start})")]
    RangeError {
        start: usize,
        end: usize,
        len: usize,
        min_start: usize,
    },
    #[error(transparent)]
    Dmd(#[from] DmdError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Per-step error data over the prediction window [m, n_max].
#[derive(Debug, Clone)]
pub struct ErrorReport {
    /// Training snapshot count; reports start at this step.
    pub m: usize,
    /// Last step covered.
    pub n_max: usize,
    pub t0: f64,
    pub dt: f64,
    /// ‖τⁿ‖₂ in observable space, n = m…n_max.
    pub tau: Vec<f64>,
    /// ‖uⁿ − u_DMDⁿ‖₂ in state space, n = m…n_max.
    pub e_measured: Vec<f64>,
    /// Per-step bound in observable space, n = m…n_max.
    pub e_bound: Vec<f64>,
    /// max training-window ‖τᵏ‖₂, the computable surrogate for ε_m.
    pub eps_m: f64,
    /// Anchor ‖e^m‖₂ in observable space.
    pub e_m: f64,
    /// ‖Φ⁺‖_F.
    pub phi_pinv_fro: f64,
    /// max_k ‖ΦΛᵏ‖_F over the evaluated window.
    pub max_phi_lambda_fro: f64,
}

fn check_range(
    range: &RangeInclusive<usize>,
    len: usize,
    min_start: usize,
) -> Result<(), ErrorAnalysisError> {
    let (start, end) = (*range.start(), *range.end());
    if start < min_start || end >= len || start > end {
        return Err(ErrorAnalysisError::RangeError {
            start,
            end,
            len,
            min_start,
        });
    }
    Ok(())
}

/// ‖τⁿ‖₂ = ‖yⁿ − A_dmd y^{n−1}‖₂ for each n in `range`; the reference state
/// trajectory is lifted by the model's observable.
pub fn local_truncation_errors(
    model: &DmdModel,
    reference: &Trajectory,
    range: RangeInclusive<usize>,
) -> Result<Vec<f64>, ErrorAnalysisError> {
    check_range(&range, reference.len(), 1)?;
    let g = &model.observable;
    let mut prev = g.lift(reference.state(range.start() - 1));
    let mut out = Vec::with_capacity(range.end() - range.start() + 1);
    for n in range {
        let current = g.lift(reference.state(n));
        let propagated = apply_propagator(model, &prev);
        out.push(vec_diff_norm(&current, &propagated));
        prev = current;
    }
    Ok(out)
}

/// Computable surrogate for the ε_m of the local-truncation-error theorem:
/// the maximum ‖τᵏ‖₂ over the training window k = 1…m. Conservative on the
/// training data; the prediction window is assumed not to exceed it.
pub fn epsilon_m(model: &DmdModel, training: &SnapshotPair) -> f64 {
    let g = &model.observable;
    let mut prev = g.lift(training.training_state(0));
    let mut max_tau: f64 = 0.0;
    for k in 1..=training.m {
        let current = g.lift(training.training_state(k));
        let propagated = apply_propagator(model, &prev);
        max_tau = max_tau.max(vec_diff_norm(&current, &propagated));
        prev = current;
    }
    max_tau
}

/// ‖uⁿ − predict(model, n)‖₂ in state space for each n in `range`.
pub fn measured_global_error(
    model: &DmdModel,
    reference: &Trajectory,
    range: RangeInclusive<usize>,
) -> Result<Vec<f64>, ErrorAnalysisError> {
    check_range(&range, reference.len(), 0)?;
    let mut out = Vec::with_capacity(range.end() - range.start() + 1);
    for n in range {
        let predicted = predict(model, n)?;
        out.push(vec_diff_norm(reference.state(n), &predicted));
    }
    Ok(out)
}

/// Squared column norms of Φ; ‖ΦΛᵏ‖_F falls out of these by diagonal scaling.
fn phi_col_norms_sq(model: &DmdModel) -> Vec<f64> {
    (0..model.rank())
        .map(|j| model.phi.col(j).iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

fn phi_lambda_fro(col_norms_sq: &[f64], powers: &[f64]) -> f64 {
    col_norms_sq
        .iter()
        .zip(powers)
        .map(|(&c, &p)| c * p)
        .sum::<f64>()
        .sqrt()
}

/// Evaluates the product-form bound at a single step n ≥ m.
pub fn global_error_bound(model: &DmdModel, eps_m: f64, e_m_anchor: f64, n: usize) -> f64 {
    assert!(n >= model.m, "bound is defined for n >= m");
    let pinv_fro = model.phi_pinv.fro_norm();
    let col_norms_sq = phi_col_norms_sq(model);
    let lam_sq: Vec<f64> = model.lambda.iter().map(|z| z.norm_sqr()).collect();

    let mut powers = vec![1.0; model.rank()];
    let mut fro_k = phi_lambda_fro(&col_norms_sq, &powers);
    let mut running_max: f64 = 0.0;
    for _ in 0..(n - model.m) {
        running_max = running_max.max(fro_k);
        for (p, &l) in powers.iter_mut().zip(&lam_sq) {
            *p *= l;
        }
        fro_k = phi_lambda_fro(&col_norms_sq, &powers);
    }
    fro_k * pinv_fro * e_m_anchor + (n - model.m) as f64 * eps_m * running_max * pinv_fro
}

/// Builds the full per-step report over [m, n_max].
///
/// `reference` must be the trajectory the model was trained on (its first
/// m+1 states are the training window) extended over the prediction horizon.
pub fn error_report(
    model: &DmdModel,
    reference: &Trajectory,
    n_max: usize,
) -> Result<ErrorReport, ErrorAnalysisError> {
    let m = model.m;
    check_range(&(m..=n_max), reference.len(), 1)?;
    let g = &model.observable;

    // Training-window τ for the surrogate.
    let training_tau = local_truncation_errors(model, reference, 1..=m)?;
    let eps_m = training_tau.iter().cloned().fold(0.0, f64::max);

    // Observable-space anchor at the training boundary.
    let y_m = g.lift(reference.state(m));
    let e_m = vec_diff_norm(&y_m, &predict_observable(model, m)?);

    let tau = local_truncation_errors(model, reference, m..=n_max)?;
    let e_measured = measured_global_error(model, reference, m..=n_max)?;

    let pinv_fro = model.phi_pinv.fro_norm();
    let col_norms_sq = phi_col_norms_sq(model);
    let lam_sq: Vec<f64> = model.lambda.iter().map(|z| z.norm_sqr()).collect();
    let mut powers = vec![1.0; model.rank()];
    let mut fro_k = phi_lambda_fro(&col_norms_sq, &powers);
    let mut running_max: f64 = 0.0;
    let mut e_bound = Vec::with_capacity(n_max - m + 1);
    for n in m..=n_max {
        e_bound.push(fro_k * pinv_fro * e_m + (n - m) as f64 * eps_m * running_max * pinv_fro);
        running_max = running_max.max(fro_k);
        for (p, &l) in powers.iter_mut().zip(&lam_sq) {
            *p *= l;
        }
        fro_k = phi_lambda_fro(&col_norms_sq, &powers);
    }

    Ok(ErrorReport {
        m,
        n_max,
        t0: reference.t0(),
        dt: reference.dt(),
        tau,
        e_measured,
        e_bound,
        eps_m,
        e_m,
        phi_pinv_fro: pinv_fro,
        max_phi_lambda_fro: running_max,
    })
}

impl ErrorReport {
    pub fn steps(&self) -> RangeInclusive<usize> {
        self.m..=self.n_max
    }

    pub fn max_measured(&self) -> f64 {
        self.e_measured.iter().cloned().fold(0.0, f64::max)
    }

    pub fn final_measured(&self) -> f64 {
        *self.e_measured.last().expect("report is never empty")
    }

    /// True when the bound dominates the measured error at every step.
    pub fn bound_dominates(&self) -> bool {
        self.e_bound
            .iter()
            .zip(&self.e_measured)
            .all(|(b, e)| b >= e)
    }

    /// Writes the fixed-schema CSV: `step,t,tau,e_measured,e_bound` with 17
    /// significant digits.
    pub fn write_csv(&self, path: &Path) -> Result<(), ErrorAnalysisError> {
        use std::io::Write;
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "step,t,tau,e_measured,e_bound")?;
        for (i, n) in self.steps().enumerate() {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                n,
                self.t0 + self.dt * n as f64,
                self.tau[i],
                self.e_measured[i],
                self.e_bound[i],
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Observable-space global errors yⁿ − y_DMDⁿ, used by the recurrence
/// identity eⁿ = τⁿ + A_dmd e^{n−1}.
pub fn observable_global_errors(
    model: &DmdModel,
    reference: &Trajectory,
    range: RangeInclusive<usize>,
) -> Result<Vec<Vec<Complex64>>, ErrorAnalysisError> {
    check_range(&range, reference.len(), 0)?;
    let g = &model.observable;
    let mut out = Vec::with_capacity(range.end() - range.start() + 1);
    for n in range {
        let y = g.lift(reference.state(n));
        let y_dmd = predict_observable(model, n)?;
        out.push(y.iter().zip(&y_dmd).map(|(&a, &b)| a - b).collect());
    }
    Ok(out)
}
