use num_complex::Complex64;

use super::matrix::{vec_norm, DenseMatrix};
use super::NumericsError;

/// Eigendecomposition of a small dense matrix: `values[k]` pairs with column
/// `k` of `vectors`, each normalized to unit 2-norm.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<Complex64>,
    pub vectors: DenseMatrix,
}

/// Advisory size cap: the dense QR path is meant for the small operators
/// left after rank truncation. Nothing breaks above this, but cost grows
/// as n³ and callers should loosen their truncation instead.
pub const EIG_SIZE_CAP: usize = 512;

/// All eigenpairs of a square complex matrix.
///
/// Hessenberg reduction followed by shifted QR driven to Schur form, with a
/// 30·n iteration cap; eigenvectors come from back-substitution on the
/// triangular factor. Intended for matrices up to [`EIG_SIZE_CAP`]. For real
/// input, complex-conjugate pairs land adjacently in the output ordering.
pub fn eig_dense(k: &DenseMatrix) -> Result<EigenPairs, NumericsError> {
    if k.rows() != k.cols() {
        return Err(NumericsError::ShapeError(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            k.rows(),
            k.cols()
        )));
    }
    if !k.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let n = k.rows();
    if n == 1 {
        return Ok(EigenPairs {
            values: vec![k.get(0, 0)],
            vectors: DenseMatrix::identity(1),
        });
    }

    // Diagonal similarity balancing: K̃ from truncated SVD data can have
    // columns spanning many orders of magnitude, which wrecks the accuracy
    // of QR-derived eigenvectors without it.
    let (balanced, scale) = balance(k);
    let (mut h, mut z) = hessenberg(&balanced);
    schur_in_place(&mut h, &mut z)?;
    let mut vectors = triangular_eigenvectors(&h, &z);
    unbalance_vectors(&mut vectors, &scale);
    let values: Vec<Complex64> = (0..n).map(|i| h.get(i, i)).collect();

    // Deterministic ordering: real part descending, then imaginary part
    // descending. Conjugate pairs of a real matrix share their real part up
    // to roundoff and therefore end up adjacent.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .re
            .partial_cmp(&values[a].re)
            .unwrap()
            .then(values[b].im.partial_cmp(&values[a].im).unwrap())
    });
    let sorted_values: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let mut sorted_vectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            sorted_vectors.set(i, dst, vectors.get(i, src));
        }
    }
    Ok(EigenPairs {
        values: sorted_values,
        vectors: sorted_vectors,
    })
}

/// Parlett–Reinsch balancing: a diagonal similarity D⁻¹AD with power-of-two
/// entries that roughly equalizes row and column norms. Exact in floating
/// point (scales are powers of the radix) and deterministic.
fn balance(a: &DenseMatrix) -> (DenseMatrix, Vec<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.rows();
    let mut m = a.clone();
    let mut scale = vec![1.0f64; n];
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut col_norm = 0.0;
            let mut row_norm = 0.0;
            for j in 0..n {
                if j != i {
                    col_norm += m.get(j, i).norm();
                    row_norm += m.get(i, j).norm();
                }
            }
            if col_norm == 0.0 || row_norm == 0.0 {
                continue;
            }
            let total = col_norm + row_norm;
            let mut factor = 1.0;
            let mut c = col_norm;
            let target = row_norm / RADIX;
            while c < target {
                factor *= RADIX;
                c *= RADIX * RADIX;
            }
            let target = row_norm * RADIX;
            while c > target {
                factor /= RADIX;
                c /= RADIX * RADIX;
            }
            if factor != 1.0 && (c + row_norm) / factor < 0.95 * total {
                // Row i scaled by 1/factor, column i by factor.
                converged = false;
                scale[i] *= factor;
                let inv = 1.0 / factor;
                for j in 0..n {
                    let v = m.get(i, j);
                    m.set(i, j, v * inv);
                }
                for j in 0..n {
                    let v = m.get(j, i);
                    m.set(j, i, v * factor);
                }
            }
        }
        if converged {
            break;
        }
    }
    (m, scale)
}

/// Undoes balancing on eigenvectors (row i scales by `scale[i]`) and
/// renormalizes each column to unit length.
fn unbalance_vectors(vectors: &mut DenseMatrix, scale: &[f64]) {
    let n = vectors.rows();
    for j in 0..vectors.cols() {
        for (i, &s) in scale.iter().enumerate().take(n) {
            let v = vectors.get(i, j);
            vectors.set(i, j, v * s);
        }
        let norm: f64 = (0..n)
            .map(|i| vectors.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for i in 0..n {
                let v = vectors.get(i, j);
                vectors.set(i, j, v * inv);
            }
        }
    }
}

/// Unitary reduction to upper Hessenberg form: returns (H, Q) with
/// `A = Q H Qᴴ`.
fn hessenberg(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);

    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let x: Vec<Complex64> = (k + 1..n).map(|i| h.get(i, k)).collect();
        let norm = vec_norm(&x);
        if norm == 0.0 {
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
        if v_norm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / v_norm_sqr;

        // Left application on rows k+1..n (columns k..n; earlier columns are
        // already zero below the subdiagonal).
        for j in k..n {
            let mut w = Complex64::ZERO;
            for (t, vi) in v.iter().enumerate() {
                w += vi.conj() * h.get(k + 1 + t, j);
            }
            w *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = h.get(k + 1 + t, j);
                h.set(k + 1 + t, j, cur - w * vi);
            }
        }
        // Right application on columns k+1..n, all rows.
        for i in 0..n {
            let mut w = Complex64::ZERO;
            for (t, vi) in v.iter().enumerate() {
                w += h.get(i, k + 1 + t) * vi;
            }
            w *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = h.get(i, k + 1 + t);
                h.set(i, k + 1 + t, cur - w * vi.conj());
            }
        }
        // Accumulate Q ← Q·P.
        for i in 0..n {
            let mut w = Complex64::ZERO;
            for (t, vi) in v.iter().enumerate() {
                w += q.get(i, k + 1 + t) * vi;
            }
            w *= beta;
            for (t, vi) in v.iter().enumerate() {
                let cur = q.get(i, k + 1 + t);
                q.set(i, k + 1 + t, cur - w * vi.conj());
            }
        }
        h.set(k + 1, k, alpha);
        for i in k + 2..n {
            h.set(i, k, Complex64::ZERO);
        }
    }
    (h, q)
}

/// Drives an upper Hessenberg matrix to upper triangular (Schur) form by
/// explicit shifted QR, accumulating the unitary similarity into `z`.
fn schur_in_place(h: &mut DenseMatrix, z: &mut DenseMatrix) -> Result<(), NumericsError> {
    let n = h.rows();
    let cap = 30 * n;
    let h_norm = h.fro_norm();
    let eps = f64::EPSILON;

    let negligible = |h: &DenseMatrix, i: usize| -> bool {
        let sub = h.get(i, i - 1).norm();
        let scale = h.get(i - 1, i - 1).norm() + h.get(i, i).norm();
        let thresh = if scale > 0.0 {
            eps * scale
        } else {
            eps * h_norm
        };
        sub <= thresh
    };

    let mut hi = n - 1;
    let mut iters_total = 0usize;
    let mut iters_since_deflation = 0usize;

    while hi > 0 {
        if negligible(h, hi) {
            h.set(hi, hi - 1, Complex64::ZERO);
            hi -= 1;
            iters_since_deflation = 0;
            continue;
        }
        // Active block start.
        let mut lo = hi - 1;
        while lo > 0 && !negligible(h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h.set(lo, lo - 1, Complex64::ZERO);
        }

        if iters_total >= cap {
            return Err(NumericsError::NoConvergence { iterations: cap });
        }
        iters_total += 1;
        iters_since_deflation += 1;

        let mu = if iters_since_deflation % 11 == 10 {
            // Exceptional shift to break rare stagnation cycles.
            h.get(hi, hi) + Complex64::new(0.75 * h.get(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };
        qr_step(h, z, lo, hi, mu);
    }
    Ok(())
}

/// Eigenvalue of the trailing 2×2 block closest to the corner entry.
fn wilkinson_shift(h: &DenseMatrix, hi: usize) -> Complex64 {
    let a = h.get(hi - 1, hi - 1);
    let b = h.get(hi - 1, hi);
    let c = h.get(hi, hi - 1);
    let d = h.get(hi, hi);
    let delta = (a - d) * 0.5;
    let disc = (delta * delta + b * c).sqrt();
    if (delta - disc).norm() <= (delta + disc).norm() {
        d + delta - disc
    } else {
        d + delta + disc
    }
}

/// One explicit shifted QR similarity on the active block `lo..=hi`:
/// H − μI = QR, then H ← RQ + μI, Z ← Z·Q.
fn qr_step(h: &mut DenseMatrix, z: &mut DenseMatrix, lo: usize, hi: usize, mu: Complex64) {
    let n = h.rows();
    for i in lo..=hi {
        let d = h.get(i, i);
        h.set(i, i, d - mu);
    }

    // Row rotations G_k zero the subdiagonal: R = G_{hi-1}···G_lo (H − μI).
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
        for j in k..n {
            let a = h.get(k, j);
            let b = h.get(k + 1, j);
            h.set(k, j, c * a + s * b);
            h.set(k + 1, j, -s.conj() * a + c * b);
        }
        h.set(k + 1, k, Complex64::ZERO);
        rotations.push((c, s));
    }

    // Right-multiply by Q = G_loᴴ···G_{hi-1}ᴴ, restoring Hessenberg form.
    for (idx, k) in (lo..hi).enumerate() {
        let (c, s) = rotations[idx];
        let s_conj = s.conj();
        for i in 0..=(k + 1).min(hi) {
            let a = h.get(i, k);
            let b = h.get(i, k + 1);
            h.set(i, k, c * a + s_conj * b);
            h.set(i, k + 1, -s * a + c * b);
        }
        for i in 0..n {
            let a = z.get(i, k);
            let b = z.get(i, k + 1);
            z.set(i, k, c * a + s_conj * b);
            z.set(i, k + 1, -s * a + c * b);
        }
    }

    for i in lo..=hi {
        let d = h.get(i, i);
        h.set(i, i, d + mu);
    }
}

/// Rotation [[c, s], [−s̄, c]] with real c mapping (f, g) to (r, 0).
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g.norm() == 0.0 {
        return (1.0, Complex64::ZERO);
    }
    if f.norm() == 0.0 {
        return (0.0, g.conj() / g.norm());
    }
    let fn_ = f.norm();
    let norm = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = fn_ / norm;
    let s = (f / fn_) * g.conj() / norm;
    (c, s)
}

/// Eigenvectors of the original matrix from Schur form: back-substitution on
/// the triangular factor, transformed by Z and normalized with a fixed phase
/// convention (largest-modulus entry real positive).
fn triangular_eigenvectors(t: &DenseMatrix, z: &DenseMatrix) -> DenseMatrix {
    let n = t.rows();
    let smin = f64::EPSILON * t.fro_norm().max(f64::MIN_POSITIVE);
    let mut vectors = DenseMatrix::zeros(n, n);

    for k in 0..n {
        let lambda = t.get(k, k);
        let mut y = vec![Complex64::ZERO; k + 1];
        y[k] = Complex64::ONE;
        for i in (0..k).rev() {
            let mut sum = Complex64::ZERO;
            for (j, yj) in y.iter().enumerate().take(k + 1).skip(i + 1) {
                sum += t.get(i, j) * yj;
            }
            let mut denom = t.get(i, i) - lambda;
            if denom.norm() < smin {
                denom = Complex64::new(smin, 0.0);
            }
            y[i] = -sum / denom;
            // Guard against overflow in nearly defective cases.
            let mag = y[i].norm();
            if mag > 1e100 {
                let scale = 1.0 / mag;
                for v in y.iter_mut() {
                    *v *= scale;
                }
            }
        }
        let mut x = vec![Complex64::ZERO; n];
        for (j, yj) in y.iter().enumerate() {
            if *yj == Complex64::ZERO {
                continue;
            }
            for i in 0..n {
                x[i] += z.get(i, j) * yj;
            }
        }
        let norm = vec_norm(&x);
        let inv = 1.0 / norm;
        for v in &mut x {
            *v *= inv;
        }
        // Phase fix for reproducibility.
        let mut imax = 0;
        let mut best = 0.0;
        for (i, v) in x.iter().enumerate() {
            let m = v.norm();
            if m > best {
                best = m;
                imax = i;
            }
        }
        let phase = x[imax].conj() / x[imax].norm();
        for (i, v) in x.iter().enumerate() {
            vectors.set(i, k, v * phase);
        }
    }
    vectors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(k: &DenseMatrix, pairs: &EigenPairs) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..pairs.values.len() {
            let w: Vec<Complex64> = (0..k.rows()).map(|i| pairs.vectors.get(i, j)).collect();
            let kw = k.matvec(&w);
            let lw: Vec<Complex64> = w.iter().map(|&x| pairs.values[j] * x).collect();
            let diff: f64 = kw
                .iter()
                .zip(&lw)
                .map(|(&a, &b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(diff);
        }
        worst
    }

    #[test]
    fn scalar_case() {
        let k = DenseMatrix::from_real_column_major(1, 1, &[0.5]).unwrap();
        let p = eig_dense(&k).unwrap();
        assert_eq!(p.values, vec![c(0.5, 0.0)]);
    }

    #[test]
    fn diagonal_case() {
        let k = DenseMatrix::from_real_column_major(2, 2, &[0.9, 0.0, 0.0, 0.5]).unwrap();
        let p = eig_dense(&k).unwrap();
        let mut got: Vec<f64> = p.values.iter().map(|v| v.re).collect();
        got.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((got[0] - 0.9).abs() < 1e-12);
        assert!((got[1] - 0.5).abs() < 1e-12);
        assert!(residual(&k, &p) < 1e-8 * k.fro_norm());
    }

    #[test]
    fn rotation_gives_conjugate_pair() {
        // [[0, −0.8], [0.8, 0]]: characteristic polynomial λ² + 0.64 = 0,
        // so the eigenvalues are ±0.8i.
        let k = DenseMatrix::from_real_column_major(2, 2, &[0.0, 0.8, -0.8, 0.0]).unwrap();
        let p = eig_dense(&k).unwrap();
        let mut ims: Vec<f64> = p.values.iter().map(|v| v.im).collect();
        ims.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((ims[0] - 0.8).abs() < 1e-10);
        assert!((ims[1] + 0.8).abs() < 1e-10);
        for v in &p.values {
            assert!(v.re.abs() < 1e-10);
        }
        assert!(residual(&k, &p) < 1e-8 * k.fro_norm());
    }

    #[test]
    fn conjugate_pairs_adjacent_for_real_input() {
        // Block diagonal: rotation pair (±0.6i scaled) and two real values.
        let k = DenseMatrix::from_rows(&[
            vec![c(0.3, 0.0), c(-0.6, 0.0), c(0.1, 0.0), c(0.0, 0.0)],
            vec![c(0.6, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.2, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.0), c(0.1, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)],
        ])
        .unwrap();
        let p = eig_dense(&k).unwrap();
        // Locate the complex pair; its two members must be adjacent.
        let idx: Vec<usize> = (0..4).filter(|&i| p.values[i].im.abs() > 1e-8).collect();
        assert_eq!(idx.len(), 2);
        assert_eq!(idx[1], idx[0] + 1);
        assert!((p.values[idx[0]].im + p.values[idx[1]].im).abs() < 1e-10);
        assert!(residual(&k, &p) < 1e-8 * k.fro_norm());
    }

    #[test]
    fn repeated_eigenvalue_identity() {
        let k = DenseMatrix::identity(3);
        let p = eig_dense(&k).unwrap();
        for v in &p.values {
            assert!((v - c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(residual(&k, &p) < 1e-8 * k.fro_norm());
    }

    #[test]
    fn complex_input_matrix() {
        let k = DenseMatrix::from_rows(&[
            vec![c(0.2, 0.5), c(1.0, -0.3)],
            vec![c(0.0, 0.1), c(-0.4, 0.2)],
        ])
        .unwrap();
        let p = eig_dense(&k).unwrap();
        // Trace and determinant checks against Vieta.
        let tr: Complex64 = p.values.iter().sum();
        assert!((tr - (k.get(0, 0) + k.get(1, 1))).norm() < 1e-10);
        let det = p.values[0] * p.values[1];
        let det_k = k.get(0, 0) * k.get(1, 1) - k.get(0, 1) * k.get(1, 0);
        assert!((det - det_k).norm() < 1e-10);
        assert!(residual(&k, &p) < 1e-8 * k.fro_norm());
    }

    #[test]
    fn rejects_non_square() {
        let k = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            eig_dense(&k),
            Err(NumericsError::ShapeError(_))
        ));
    }
}
