use num_complex::Complex64;

use super::matrix::DenseMatrix;
use super::NumericsError;

/// Solves the square system `a · x = b` for several right-hand sides by LU
/// with partial pivoting. Used for the small interpolation systems in DEIM;
/// not intended for large or ill-conditioned problems.
pub fn lu_solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, NumericsError> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n {
        return Err(NumericsError::ShapeError(format!(
            "lu_solve expects square a and matching b, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.fro_norm();

    for k in 0..n {
        // Partial pivot: largest modulus in column k at or below the diagonal.
        let mut piv = k;
        let mut best = lu.get(k, k).norm();
        for i in k + 1..n {
            let m = lu.get(i, k).norm();
            if m > best {
                best = m;
                piv = i;
            }
        }
        if best <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(NumericsError::RankDeficient {
                sigma_min: best,
                sigma_max: scale,
            });
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(piv, j));
                lu.set(piv, j, tmp);
            }
            for j in 0..x.cols() {
                let tmp = x.get(k, j);
                x.set(k, j, x.get(piv, j));
                x.set(piv, j, tmp);
            }
        }
        let inv_diag = Complex64::ONE / lu.get(k, k);
        for i in k + 1..n {
            let factor = lu.get(i, k) * inv_diag;
            if factor == Complex64::ZERO {
                continue;
            }
            lu.set(i, k, factor);
            for j in k + 1..n {
                let cur = lu.get(i, j);
                lu.set(i, j, cur - factor * lu.get(k, j));
            }
            for j in 0..x.cols() {
                let cur = x.get(i, j);
                x.set(i, j, cur - factor * x.get(k, j));
            }
        }
    }

    // Back substitution.
    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut sum = x.get(i, j);
            for t in i + 1..n {
                sum -= lu.get(i, t) * x.get(t, j);
            }
            x.set(i, j, sum / lu.get(i, i));
        }
    }
    Ok(x)
}
