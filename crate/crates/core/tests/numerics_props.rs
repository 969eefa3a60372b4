//! Property tests for the matrix kernels.

use num_complex::Complex64;
use proptest::prelude::*;

use dmd_core::numerics::{
    eig_dense, fft, inverse_fft, left_pinv, lu_solve, truncated_svd, DenseMatrix, NumericsError,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-1.0f64..1.0, rows * cols)
        .prop_map(move |data| DenseMatrix::from_real_column_major(rows, cols, &data).unwrap())
}

fn complex_vector(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| v.into_iter().map(|(re, im)| c(re, im)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn svd_reconstructs_random_matrices(m in real_matrix(12, 7)) {
        prop_assume!(m.fro_norm() > 1e-6);
        let t = truncated_svd(&m, 1e-14).unwrap();
        let sig: Vec<Complex64> = t.sigma.iter().map(|&s| c(s, 0.0)).collect();
        let recon = t.u.scale_cols(&sig).mul(&t.v.adjoint());
        let err = m.sub(&recon).fro_norm();
        prop_assert!(err <= 1e-8 * t.sigma[0], "reconstruction error {err:e}");
        // Orthonormal factors.
        let eye = DenseMatrix::identity(t.r);
        prop_assert!(t.u.adjoint().mul(&t.u).sub(&eye).fro_norm() <= 1e-10);
        prop_assert!(t.v.adjoint().mul(&t.v).sub(&eye).fro_norm() <= 1e-10);
        // Nonincreasing positive spectrum.
        for w in t.sigma.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(*t.sigma.last().unwrap() > 0.0);
    }

    #[test]
    fn eig_round_trip_on_diagonalizable_10x10(
        diag in prop::collection::vec(-1.0f64..1.0, 10),
        mix in prop::collection::vec(-0.4f64..0.4, 100),
    ) {
        // K = S D S⁻¹ with S = I + R kept well conditioned by construction,
        // and eigenvalues separated enough to stay diagonalizable.
        let mut d = diag;
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for i in 1..10 {
            if d[i] - d[i - 1] < 0.05 {
                d[i] = d[i - 1] + 0.05;
            }
        }
        let mut s = DenseMatrix::identity(10);
        for j in 0..10 {
            for i in 0..10 {
                if i != j {
                    s.set(i, j, c(mix[j * 10 + i] / 4.0, 0.0));
                }
            }
        }
        let s_inv = lu_solve(&s, &DenseMatrix::identity(10)).unwrap();
        let d_mat = {
            let mut m = DenseMatrix::zeros(10, 10);
            for (i, &v) in d.iter().enumerate() {
                m.set(i, i, c(v, 0.0));
            }
            m
        };
        let k = s.mul(&d_mat).mul(&s_inv);

        let pairs = eig_dense(&k).unwrap();
        let w = &pairs.vectors;
        let w_inv = lu_solve(w, &DenseMatrix::identity(10)).unwrap();
        let recon = w.scale_cols(&pairs.values).mul(&w_inv);
        let err = recon.sub(&k).fro_norm();
        prop_assert!(err <= 1e-6 * k.fro_norm(), "round-trip error {err:e}");
    }

    #[test]
    fn left_pinv_idempotent_on_column_space(m in real_matrix(9, 4)) {
        let p = match left_pinv(&m) {
            Ok(p) => p,
            // Randomly near-singular inputs are outside the contract.
            Err(NumericsError::RankDeficient { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        let eye = DenseMatrix::identity(4);
        prop_assert!(p.mul(&m).sub(&eye).fro_norm() <= 1e-8);
        let round = m.mul(&p.mul(&m));
        prop_assert!(round.sub(&m).fro_norm() <= 1e-8 * m.fro_norm().max(1.0));
    }
}

#[test]
fn fft_matches_direct_dft_across_lengths() {
    for exp in 3..=8 {
        let n = 1usize << exp;
        let x: Vec<Complex64> = (0..n)
            .map(|j| {
                c(
                    (j as f64 * 0.37 + 0.2).sin(),
                    (j as f64 * 1.13 - 0.4).cos() * 0.5,
                )
            })
            .collect();
        let y = fft(&x).unwrap();
        let scale = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (k, yk) in y.iter().enumerate() {
            let direct: Complex64 = (0..n)
                .map(|j| {
                    let angle = -2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64;
                    x[j] * Complex64::from_polar(1.0, angle)
                })
                .sum();
            assert!(
                (yk - direct).norm() <= 1e-10 * scale,
                "n={n} bin {k}: fft {yk} vs dft {direct}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fft_round_trip(x in complex_vector(64)) {
        let y = inverse_fft(&fft(&x).unwrap()).unwrap();
        let scale = x.iter().map(|z| z.norm()).fold(1e-30, f64::max);
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).norm() <= 1e-12 * scale);
        }
    }
}
