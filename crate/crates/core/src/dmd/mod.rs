//! Rank-truncated dynamic mode decomposition on state or observable space,
//! with iteration-free prediction at arbitrary step indices.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{eig_dense, left_pinv, truncated_svd, DenseMatrix, NumericsError};
use crate::snapshots::{ObservableMap, SnapshotError, SnapshotPair};

pub mod io;

#[derive(Debug, Error)]
pub enum DmdError {
    #[error("snapshot data is degenerate (numerical rank zero)")]
    DegenerateData,
    #[error("|lambda|^n overflows at step {step}; extrapolation is unstable")]
    Overflow { step: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
}

/// Fitted DMD model: y_DMD^n = Φ Λⁿ b in the lifted space of `observable`.
#[derive(Debug, Clone)]
pub struct DmdModel {
    /// DMD modes, p×r.
    pub phi: DenseMatrix,
    /// Eigenvalues of the reduced one-step operator.
    pub lambda: Vec<Complex64>,
    /// Mode amplitudes b = Φ⁺ y⁰.
    pub b: Vec<Complex64>,
    /// Snapshot count the model was fitted on.
    pub m: usize,
    /// Snapshot spacing.
    pub dt: f64,
    /// Lifting the model lives in (identity map for state-space DMD).
    pub observable: ObservableMap,
    /// Cached Moore–Penrose left inverse of Φ, r×p.
    pub phi_pinv: DenseMatrix,
    /// Whether the training data was real-valued; predictions then return
    /// the real part, discarding conjugate-pair roundoff dust.
    pub real_state: bool,
}

impl DmdModel {
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// Lifted dimension p.
    pub fn lifted_dim(&self) -> usize {
        self.phi.rows()
    }

    /// State dimension N = p / blocks.
    pub fn state_dim(&self) -> usize {
        self.phi.rows() / self.observable.n_blocks()
    }
}

/// Fits a DMD model from a snapshot pair, lifting both matrices columnwise by
/// `g` first. `rank_eps` drives the σ_i > ε·σ₁ truncation of the lifted X.
pub fn fit(pair: &SnapshotPair, g: &ObservableMap, rank_eps: f64) -> Result<DmdModel, DmdError> {
    let y = g.lift_matrix(&pair.x);
    let y_prime = g.lift_matrix(&pair.x_prime);

    let svd = match truncated_svd(&y, rank_eps) {
        Err(NumericsError::ZeroMatrix) => return Err(DmdError::DegenerateData),
        other => other?,
    };

    // M = Y' V Σ⁻¹, shared by the reduced operator and the modes.
    let inv_sigma: Vec<Complex64> = svd
        .sigma
        .iter()
        .map(|&s| Complex64::new(1.0 / s, 0.0))
        .collect();
    let m_factor = y_prime.mul(&svd.v.scale_cols(&inv_sigma));
    let k_reduced = svd.u.adjoint().mul(&m_factor);

    let pairs = eig_dense(&k_reduced)?;
    let phi = m_factor.mul(&pairs.vectors);
    let phi_pinv = left_pinv(&phi)?;
    let b = phi_pinv.matvec(y.col(0));

    Ok(DmdModel {
        phi,
        lambda: pairs.values,
        b,
        m: pair.m,
        dt: pair.dt,
        observable: g.clone(),
        phi_pinv,
        real_state: pair.x.is_real() && pair.x_prime.is_real(),
    })
}

/// Λⁿ b with overflow detection; exponentiation by squaring keeps the cost
/// logarithmic in n.
fn lambda_pow_times_b(model: &DmdModel, n: usize) -> Result<Vec<Complex64>, DmdError> {
    const LN_F64_MAX: f64 = 709.0;
    let mut out = Vec::with_capacity(model.rank());
    for (&lam, &bk) in model.lambda.iter().zip(&model.b) {
        let mag = lam.norm();
        if mag > 1.0 && n as f64 * mag.ln() > LN_F64_MAX {
            return Err(DmdError::Overflow { step: n });
        }
        let powed = if n <= u32::MAX as usize {
            lam.powu(n as u32)
        } else {
            lam.powf(n as f64)
        };
        if !powed.re.is_finite() || !powed.im.is_finite() {
            return Err(DmdError::Overflow { step: n });
        }
        out.push(powed * bk);
    }
    Ok(out)
}

/// Predicted observable vector y_DMD^n = Φ Λⁿ b.
pub fn predict_observable(model: &DmdModel, n: usize) -> Result<Vec<Complex64>, DmdError> {
    let coeff = lambda_pow_times_b(model, n)?;
    Ok(model.phi.matvec(&coeff))
}

/// Predicted state at step n: unlifts y_DMD^n through the model's observable.
/// No iteration is involved; the cost does not depend on n.
pub fn predict(model: &DmdModel, n: usize) -> Result<Vec<Complex64>, DmdError> {
    let y = predict_observable(model, n)?;
    let mut u = model.observable.unlift(&y)?;
    if model.real_state {
        for z in &mut u {
            *z = Complex64::new(z.re, 0.0);
        }
    }
    Ok(u)
}

/// The one-step propagator A_dmd = Φ Λ Φ⁺ as a dense p×p matrix.
/// B of the error analysis is A_dmd − I.
pub fn propagator_matrix(model: &DmdModel) -> DenseMatrix {
    model
        .phi
        .scale_cols(&model.lambda)
        .mul(&model.phi_pinv)
}

/// Applies the propagator to a lifted vector in factored form,
/// Φ (Λ (Φ⁺ y)), at O(p·r) cost.
pub fn apply_propagator(model: &DmdModel, y: &[Complex64]) -> Vec<Complex64> {
    let mut reduced = model.phi_pinv.matvec(y);
    for (v, &lam) in reduced.iter_mut().zip(&model.lambda) {
        *v *= lam;
    }
    model.phi.matvec(&reduced)
}
