//! Property tests for observable lifting.

use num_complex::Complex64;
use proptest::prelude::*;

use dmd_core::snapshots::{BlockTransform, ObservableMap};

fn maps() -> Vec<ObservableMap> {
    vec![
        ObservableMap::identity(),
        ObservableMap::with_cube(),
        ObservableMap::with_square_and_cube(),
        ObservableMap::nls_cubic(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unlift_lift_is_identity(
        state in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..12)
    ) {
        let u: Vec<Complex64> = state.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        for g in maps() {
            let y = g.lift(&u);
            prop_assert_eq!(y.len(), g.lifted_dim(u.len()));
            let back = g.unlift(&y).unwrap();
            prop_assert_eq!(back, u.clone());
        }
    }

    #[test]
    fn power_blocks_are_positively_homogeneous(
        state in prop::collection::vec(-2.0f64..2.0, 1..8),
        alpha in 0.1f64..3.0,
    ) {
        // Scaling u → αu scales a degree-k block by α^k.
        let u: Vec<Complex64> = state.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let scaled: Vec<Complex64> = u.iter().map(|&z| alpha * z).collect();
        let n = u.len();
        for g in maps() {
            let y = g.lift(&u);
            let y_scaled = g.lift(&scaled);
            for (b, &block) in g.blocks().iter().enumerate() {
                let degree = match block {
                    BlockTransform::Power(k) => k as i32,
                    BlockTransform::ModSqTimes => 3,
                };
                let factor = alpha.powi(degree);
                for i in 0..n {
                    let expect = factor * y[b * n + i];
                    let got = y_scaled[b * n + i];
                    prop_assert!(
                        (got - expect).norm() <= 1e-12 * expect.norm().max(1.0),
                        "block {b} entry {i}: {got} vs {expect}"
                    );
                }
            }
        }
    }
}
