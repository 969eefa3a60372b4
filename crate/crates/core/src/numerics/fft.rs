use std::f64::consts::PI;

use num_complex::Complex64;

use super::NumericsError;

/// Forward DFT with the e^{−i2πjk/n} kernel, unnormalized. Length must be a
/// power of two (n ≥ 2).
pub fn fft(x: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
    let mut out = x.to_vec();
    fft_in_place(&mut out, false)?;
    Ok(out)
}

/// Inverse DFT, scaled by 1/n so that `inverse_fft(fft(x)) = x`.
pub fn inverse_fft(x: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
    let mut out = x.to_vec();
    fft_in_place(&mut out, true)?;
    let scale = 1.0 / out.len() as f64;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

fn fft_in_place(x: &mut [Complex64], inverse: bool) -> Result<(), NumericsError> {
    let n = x.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(NumericsError::BadLength(n));
    }

    // Bit-reversal permutation.
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            x.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        // Twiddles from exact angles each stage; n stays small enough that
        // the trig cost is irrelevant.
        let step = sign * 2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = Complex64::from_polar(1.0, step * k as f64);
                let a = x[start + k];
                let b = x[start + k + half] * w;
                x[start + k] = a + b;
                x[start + k + half] = a - b;
            }
        }
        len *= 2;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct O(n²) DFT used as the independent oracle.
    fn dft_direct(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        let angle = -2.0 * PI * (j * k) as f64 / n as f64;
                        x[j] * Complex64::from_polar(1.0, angle)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn impulse_transforms_to_constant() {
        let x = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let y = fft(&x).unwrap();
        for v in y {
            assert!((v - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_transforms_to_dc_bin() {
        let x = vec![c(1.0, 0.0); 4];
        let y = fft(&x).unwrap();
        assert!((y[0] - c(4.0, 0.0)).norm() < 1e-14);
        for v in &y[1..] {
            assert!(v.norm() < 1e-14);
        }
    }

    #[test]
    fn single_exponential_hits_one_bin() {
        // x_j = e^{i2πj/8} lands entirely in bin 1 with weight 8; checked
        // against the direct DFT oracle as well.
        let x: Vec<Complex64> = (0..8)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 8.0))
            .collect();
        let y = fft(&x).unwrap();
        let oracle = dft_direct(&x);
        for (a, b) in y.iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((y[1] - c(8.0, 0.0)).norm() < 1e-12);
        for (k, v) in y.iter().enumerate() {
            if k != 1 {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn round_trip_recovers_input() {
        let x: Vec<Complex64> = (0..16)
            .map(|j| c((j as f64 * 0.37).sin(), (j as f64 * 0.91).cos()))
            .collect();
        let y = inverse_fft(&fft(&x).unwrap()).unwrap();
        let scale: f64 = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let x = vec![c(1.0, 0.0); 6];
        assert!(matches!(fft(&x), Err(NumericsError::BadLength(6))));
        assert!(matches!(
            fft(&x[..1]),
            Err(NumericsError::BadLength(1))
        ));
    }
}
