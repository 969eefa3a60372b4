use num_complex::Complex64;

use super::matrix::DenseMatrix;
use super::NumericsError;

/// Rank-truncated singular value decomposition `x ≈ U Σ Vᴴ`.
///
/// `u` is N×r and `v` is m×r, both with orthonormal columns; `sigma` holds the
/// r retained singular values in nonincreasing order, all strictly positive.
#[derive(Debug, Clone)]
pub struct SvdTruncation {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
    pub r: usize,
}

/// Convergence threshold for Jacobi column rotations, relative to the column
/// norms of the pair being orthogonalized.
const JACOBI_TOL: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Truncated SVD with the rank rule `r = max{i : σ_i > rank_eps · σ₁}`.
///
/// The threshold comparison is strict: singular values exactly equal to
/// `rank_eps · σ₁` are excluded.
pub fn truncated_svd(x: &DenseMatrix, rank_eps: f64) -> Result<SvdTruncation, NumericsError> {
    assert!(
        rank_eps > 0.0 && rank_eps < 1.0,
        "rank_eps must lie in (0, 1), got {rank_eps}"
    );
    let (u, sigma, v) = svd(x)?;
    let sigma_max = sigma[0];
    if sigma_max == 0.0 {
        return Err(NumericsError::ZeroMatrix);
    }
    let r = sigma.iter().take_while(|&&s| s > rank_eps * sigma_max).count();
    debug_assert!(r >= 1);
    Ok(SvdTruncation {
        u: take_cols(&u, r),
        sigma: sigma[..r].to_vec(),
        v: take_cols(&v, r),
        r,
    })
}

/// Full economy SVD `x = U Σ Vᴴ` with U: N×k, V: m×k, k = min(N, m).
///
/// One-sided Jacobi on the side with more rows, preceded by a Householder QR
/// factorization when the matrix is distinctly tall (Jacobi then runs on the
/// small triangular factor). Deterministic for identical input bits (fixed
/// sweep order, no data-dependent branching beyond the rotation threshold).
pub fn svd(x: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix), NumericsError> {
    if !x.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    if x.fro_norm() == 0.0 {
        return Err(NumericsError::ZeroMatrix);
    }
    if x.rows() >= x.cols() {
        svd_tall(x)
    } else {
        // svd(xᴴ) = (V, Σ, U)
        let (v, sigma, u) = svd_tall(&x.adjoint())?;
        Ok((u, sigma, v))
    }
}

fn svd_tall(x: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix), NumericsError> {
    // For distinctly tall matrices the QR preconditioning pays for itself:
    // Jacobi sweeps cost O(rows·cols²) and run on the cols×cols factor
    // instead.
    if x.rows() >= 2 * x.cols() {
        let (q, r) = qr_economy(x);
        let (u_r, sigma, v) = jacobi_svd_tall(&r)?;
        Ok((q.mul(&u_r), sigma, v))
    } else {
        jacobi_svd_tall(x)
    }
}

/// Economy Householder QR for rows ≥ cols: returns (Q rows×cols with
/// orthonormal columns, R cols×cols upper triangular).
fn qr_economy(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = a.rows();
    let m = a.cols();
    let mut work = a.clone();
    // Householder vectors, one per column.
    let mut reflectors: Vec<(Vec<Complex64>, f64)> = Vec::with_capacity(m);

    for k in 0..m {
        let x: Vec<Complex64> = (k..n).map(|i| work.get(i, k)).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push((vec![Complex64::ZERO; n - k], 0.0));
            continue;
        }
        let x0 = x[0];
        let alpha = if x0.norm() > 0.0 {
            -(x0 / x0.norm()) * norm
        } else {
            Complex64::new(-norm, 0.0)
        };
        let mut v = x;
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = if v_norm_sqr > 0.0 { 2.0 / v_norm_sqr } else { 0.0 };
        // Apply (I − βvvᴴ) to the trailing columns.
        for j in k..m {
            let mut w = Complex64::ZERO;
            for (t, vi) in v.iter().enumerate() {
                w += vi.conj() * work.get(k + t, j);
            }
            w *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = work.get(k + t, j);
                work.set(k + t, j, cur - w * vi);
            }
        }
        reflectors.push((v, beta));
    }

    let mut r = DenseMatrix::zeros(m, m);
    for j in 0..m {
        for i in 0..=j {
            r.set(i, j, work.get(i, j));
        }
    }

    // Q = H_0 H_1 … H_{m−1} · [I_m; 0], applied from the last reflector back.
    let mut q = DenseMatrix::zeros(n, m);
    for i in 0..m {
        q.set(i, i, Complex64::ONE);
    }
    for k in (0..m).rev() {
        let (v, beta) = &reflectors[k];
        if *beta == 0.0 {
            continue;
        }
        for j in 0..m {
            let mut w = Complex64::ZERO;
            for (t, vi) in v.iter().enumerate() {
                w += vi.conj() * q.get(k + t, j);
            }
            w *= *beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = q.get(k + t, j);
                q.set(k + t, j, cur - w * vi);
            }
        }
    }
    (q, r)
}

/// One-sided Jacobi for rows ≥ cols: orthogonalizes the columns of a working
/// copy by plane rotations, accumulating the rotations into V.
fn jacobi_svd_tall(
    x: &DenseMatrix,
) -> Result<(DenseMatrix, Vec<f64>, DenseMatrix), NumericsError> {
    let n = x.rows();
    let m = x.cols();
    debug_assert!(n >= m);

    let mut w = x.clone();
    let mut v = DenseMatrix::identity(m);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m.saturating_sub(1) {
            for q in (p + 1)..m {
                let (alpha, beta, gamma) = column_gram(&w, p, q);
                let thresh = JACOBI_TOL * (alpha * beta).sqrt();
                if gamma.norm() <= thresh || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                apply_rotation(&mut w, p, q, c, s, phase);
                apply_rotation(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    // Singular values are the column norms; order them nonincreasing with a
    // stable tie-break on the original column index.
    let mut order: Vec<usize> = (0..m).collect();
    let norms: Vec<f64> = (0..m)
        .map(|j| w.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap().then(a.cmp(&b)));

    let mut u = DenseMatrix::zeros(n, m);
    let mut v_sorted = DenseMatrix::zeros(m, m);
    let mut sigma = Vec::with_capacity(m);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        if s > 0.0 {
            let inv = 1.0 / s;
            for i in 0..n {
                u.set(i, dst, w.get(i, src) * inv);
            }
        }
        for i in 0..m {
            v_sorted.set(i, dst, v.get(i, src));
        }
    }
    Ok((u, sigma, v_sorted))
}

/// (‖a_p‖², ‖a_q‖², a_pᴴ a_q) for a column pair.
fn column_gram(w: &DenseMatrix, p: usize, q: usize) -> (f64, f64, Complex64) {
    let cp = w.col(p);
    let cq = w.col(q);
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = Complex64::ZERO;
    for (&a, &b) in cp.iter().zip(cq) {
        alpha += a.norm_sqr();
        beta += b.norm_sqr();
        gamma += a.conj() * b;
    }
    (alpha, beta, gamma)
}

/// Rotation (c, s, e^{iθ}) diagonalizing the 2×2 Hermitian Gram block
/// [[α, γ], [γ̄, β]] with γ = |γ|e^{iθ}.
fn jacobi_rotation(alpha: f64, beta: f64, gamma: Complex64) -> (f64, f64, Complex64) {
    let abs_g = gamma.norm();
    let phase = gamma / abs_g;
    let zeta = (beta - alpha) / (2.0 * abs_g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    (c, s, phase)
}

/// Applies the plane rotation to columns p, q:
///   a_p ← c·a_p − s·e^{−iθ}·a_q,   a_q ← s·e^{iθ}·a_p + c·a_q.
fn apply_rotation(w: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let rows = w.rows();
    let s_conj_phase = s * phase.conj();
    let s_phase = s * phase;
    for i in 0..rows {
        let a = w.get(i, p);
        let b = w.get(i, q);
        w.set(i, p, c * a - s_conj_phase * b);
        w.set(i, q, s_phase * a + c * b);
    }
}

fn take_cols(m: &DenseMatrix, r: usize) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(m.rows(), r);
    for j in 0..r {
        for i in 0..m.rows() {
            out.set(i, j, m.get(i, j));
        }
    }
    out
}

/// Moore–Penrose left inverse of a full-column-rank N×r matrix.
///
/// Errors with `RankDeficient` when σ_min ≤ 1e−12 · σ_max.
pub fn left_pinv(phi: &DenseMatrix) -> Result<DenseMatrix, NumericsError> {
    if phi.rows() < phi.cols() {
        return Err(NumericsError::ShapeError(format!(
            "left inverse needs rows >= cols, got {}x{}",
            phi.rows(),
            phi.cols()
        )));
    }
    let (u, sigma, v) = svd(phi)?;
    let smax = sigma[0];
    let smin = sigma[phi.cols() - 1];
    if smin <= 1e-12 * smax {
        return Err(NumericsError::RankDeficient {
            sigma_min: smin,
            sigma_max: smax,
        });
    }
    // P = V Σ⁻¹ Uᴴ
    let inv_sigma: Vec<Complex64> = sigma
        .iter()
        .map(|&s| Complex64::new(1.0 / s, 0.0))
        .collect();
    Ok(v.scale_cols(&inv_sigma).mul(&u.adjoint()))
}
