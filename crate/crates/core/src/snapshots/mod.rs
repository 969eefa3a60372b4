//! Snapshot matrices, observable lifting, and trajectory handling.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{DenseMatrix, NumericsError};

pub mod io;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SnapshotError {
    #[error("trajectory holds {have} states but {need} are required")]
    TooFewStates { have: usize, need: usize },
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// A uniformly sampled solution trajectory u⁰…uⁿ.
#[derive(Debug, Clone)]
pub struct Trajectory {
    states: Vec<Vec<Complex64>>,
    dt: f64,
    t0: f64,
}

impl Trajectory {
    pub fn new(states: Vec<Vec<Complex64>>, dt: f64, t0: f64) -> Result<Self, SnapshotError> {
        if states.is_empty() || states[0].is_empty() {
            return Err(SnapshotError::ShapeError(
                "trajectory needs at least one nonempty state".into(),
            ));
        }
        let dim = states[0].len();
        if states.iter().any(|s| s.len() != dim) {
            return Err(SnapshotError::ShapeError(
                "trajectory states have inconsistent dimensions".into(),
            ));
        }
        if dt <= 0.0 || dt.is_nan() {
            return Err(SnapshotError::ShapeError(format!(
                "time step must be positive, got {dt}"
            )));
        }
        Ok(Self { states, dt, t0 })
    }

    pub fn from_real_states(states: Vec<Vec<f64>>, dt: f64, t0: f64) -> Result<Self, SnapshotError> {
        let complex = states
            .into_iter()
            .map(|s| s.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::new(complex, dt, t0)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn state(&self, n: usize) -> &[Complex64] {
        &self.states[n]
    }

    pub fn states(&self) -> &[Vec<Complex64>] {
        &self.states
    }

    pub fn time_at(&self, n: usize) -> f64 {
        self.t0 + self.dt * n as f64
    }

    pub fn is_real(&self) -> bool {
        self.states.iter().flatten().all(|z| z.im == 0.0)
    }
}

/// The time-shifted data matrices X (columns u⁰…u^{m−1}) and X′ (columns
/// u¹…u^m).
#[derive(Debug, Clone)]
pub struct SnapshotPair {
    pub x: DenseMatrix,
    pub x_prime: DenseMatrix,
    pub dt: f64,
    pub m: usize,
}

impl SnapshotPair {
    /// State u^k of the training window, k = 0…m.
    pub fn training_state(&self, k: usize) -> &[Complex64] {
        if k < self.m {
            self.x.col(k)
        } else {
            self.x_prime.col(self.m - 1)
        }
    }
}

/// Builds the shifted snapshot matrices from the first m+1 states.
pub fn build_snapshot_pair(traj: &Trajectory, m: usize) -> Result<SnapshotPair, SnapshotError> {
    if m < 2 {
        return Err(SnapshotError::ShapeError(format!(
            "snapshot count must be at least 2, got {m}"
        )));
    }
    if traj.len() < m + 1 {
        return Err(SnapshotError::TooFewStates {
            have: traj.len(),
            need: m + 1,
        });
    }
    let x = DenseMatrix::from_columns(&traj.states[0..m])?;
    let x_prime = DenseMatrix::from_columns(&traj.states[1..m + 1])?;
    Ok(SnapshotPair {
        x,
        x_prime,
        dt: traj.dt,
        m,
    })
}

/// Uniformly selects `n_out` states by nearest-index rounding:
/// index(j) = round(j·(len−1)/(n_out−1)). Endpoints are always kept; the
/// selected states are true solver states, not interpolants.
pub fn subsample_uniform(traj: &Trajectory, n_out: usize) -> Result<Trajectory, SnapshotError> {
    if n_out < 2 {
        return Err(SnapshotError::ShapeError(format!(
            "subsampling needs at least 2 output states, got {n_out}"
        )));
    }
    if traj.len() < n_out {
        return Err(SnapshotError::TooFewStates {
            have: traj.len(),
            need: n_out,
        });
    }
    let indices = subsample_indices(traj.len(), n_out);
    let states: Vec<Vec<Complex64>> = indices.iter().map(|&i| traj.states[i].clone()).collect();
    let dt = traj.dt * (traj.len() - 1) as f64 / (n_out - 1) as f64;
    Trajectory::new(states, dt, traj.t0)
}

/// The index rule behind [`subsample_uniform`], exposed so solvers can
/// decimate on the fly without storing the full fine trajectory.
pub fn subsample_indices(len: usize, n_out: usize) -> Vec<usize> {
    debug_assert!(n_out >= 2 && len >= n_out);
    (0..n_out)
        .map(|j| {
            let pos = j as f64 * (len - 1) as f64 / (n_out - 1) as f64;
            pos.round() as usize
        })
        .collect()
}

/// One block of an observable map, applied componentwise to the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockTransform {
    /// u ↦ u^k (k = 1 is the identity block).
    Power(u32),
    /// q ↦ |q|²·q, the cubic nonlinearity of the Schrödinger equation.
    ModSqTimes,
}

impl BlockTransform {
    #[inline]
    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            BlockTransform::Power(1) => z,
            BlockTransform::Power(k) => z.powu(k),
            BlockTransform::ModSqTimes => z * z.norm_sqr(),
        }
    }

}

/// A named observable lifting g(u): an ordered stack of componentwise blocks,
/// exactly one of which is the identity so that inversion is well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableMap {
    name: String,
    blocks: Vec<BlockTransform>,
    state_block: usize,
}

impl ObservableMap {
    pub fn new(name: impl Into<String>, blocks: Vec<BlockTransform>) -> Result<Self, SnapshotError> {
        let identity_blocks: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| matches!(b, BlockTransform::Power(1)))
            .map(|(i, _)| i)
            .collect();
        if identity_blocks.len() != 1 {
            return Err(SnapshotError::ShapeError(format!(
                "observable map needs exactly one identity block, found {}",
                identity_blocks.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            blocks,
            state_block: identity_blocks[0],
        })
    }

    /// g₁(u) = u.
    pub fn identity() -> Self {
        Self::new("(u)", vec![BlockTransform::Power(1)]).unwrap()
    }

    /// g₂(u) = (u, u³), for the cubic reaction term.
    pub fn with_cube() -> Self {
        Self::new("(u,u^3)", vec![BlockTransform::Power(1), BlockTransform::Power(3)]).unwrap()
    }

    /// g₂(u) = (u, u², u³), for quadratic diffusion plus cubic reaction.
    pub fn with_square_and_cube() -> Self {
        Self::new(
            "(u,u^2,u^3)",
            vec![
                BlockTransform::Power(1),
                BlockTransform::Power(2),
                BlockTransform::Power(3),
            ],
        )
        .unwrap()
    }

    /// g₂(q) = (q, |q|²q), for the Schrödinger nonlinearity.
    pub fn nls_cubic() -> Self {
        Self::new("(q,|q|^2 q)", vec![BlockTransform::Power(1), BlockTransform::ModSqTimes])
            .unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn blocks(&self) -> &[BlockTransform] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn state_block(&self) -> usize {
        self.state_block
    }

    /// Lifted dimension for a state of dimension n.
    pub fn lifted_dim(&self, n: usize) -> usize {
        n * self.blocks.len()
    }

    /// Stacks the blocks in declared order: y = g(u).
    pub fn lift(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut y = Vec::with_capacity(u.len() * self.blocks.len());
        for &block in &self.blocks {
            y.extend(u.iter().map(|&z| block.apply(z)));
        }
        y
    }

    /// Extracts the state block: u = g⁻¹(y). Redundant blocks of a predicted
    /// observable vector are ignored rather than reconciled.
    pub fn unlift(&self, y: &[Complex64]) -> Result<Vec<Complex64>, SnapshotError> {
        let p = y.len();
        let blocks = self.blocks.len();
        if !p.is_multiple_of(blocks) {
            return Err(SnapshotError::ShapeError(format!(
                "observable vector length {p} is not a multiple of {blocks} blocks"
            )));
        }
        let n = p / blocks;
        Ok(y[self.state_block * n..(self.state_block + 1) * n].to_vec())
    }

    /// Lifts every column of a state matrix.
    pub fn lift_matrix(&self, m: &DenseMatrix) -> DenseMatrix {
        let cols: Vec<Vec<Complex64>> = (0..m.cols()).map(|j| self.lift(m.col(j))).collect();
        DenseMatrix::from_columns(&cols).expect("lifted columns share a dimension")
    }
}

/// Serialization label for an observable map, used by the DMD model file
/// format. Round-trips through [`parse_block_spec`].
pub fn block_spec(map: &ObservableMap) -> String {
    map.blocks
        .iter()
        .map(|b| match b {
            BlockTransform::Power(k) => format!("p{k}"),
            BlockTransform::ModSqTimes => "msq".into(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_block_spec(name: &str, spec: &str) -> Result<ObservableMap, SnapshotError> {
    let blocks = spec
        .split(',')
        .map(|tok| {
            if tok == "msq" {
                Ok(BlockTransform::ModSqTimes)
            } else if let Some(k) = tok.strip_prefix('p') {
                k.parse::<u32>()
                    .map(BlockTransform::Power)
                    .map_err(|_| SnapshotError::ShapeError(format!("bad block token {tok:?}")))
            } else {
                Err(SnapshotError::ShapeError(format!("bad block token {tok:?}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    ObservableMap::new(name, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn traj_1d(values: &[f64]) -> Trajectory {
        Trajectory::from_real_states(values.iter().map(|&v| vec![v]).collect(), 0.1, 0.0).unwrap()
    }

    #[test]
    fn pair_from_three_states() {
        let traj = traj_1d(&[1.0, 2.0, 3.0]);
        let pair = build_snapshot_pair(&traj, 2).unwrap();
        assert_eq!(pair.x.col(0)[0].re, 1.0);
        assert_eq!(pair.x.col(1)[0].re, 2.0);
        assert_eq!(pair.x_prime.col(0)[0].re, 2.0);
        assert_eq!(pair.x_prime.col(1)[0].re, 3.0);
        assert_eq!(pair.dt, 0.1);
    }

    #[test]
    fn pair_uses_all_states_when_exact() {
        let traj = traj_1d(&[1.0, 2.0, 3.0, 4.0]);
        let pair = build_snapshot_pair(&traj, 3).unwrap();
        assert_eq!(pair.m, 3);
        assert_eq!(pair.x_prime.col(2)[0].re, 4.0);
    }

    #[test]
    fn pair_overlap_consistency() {
        let traj = traj_1d(&[0.3, -1.2, 0.7, 2.2, -0.4]);
        let pair = build_snapshot_pair(&traj, 4).unwrap();
        for j in 0..pair.m - 1 {
            assert_eq!(pair.x_prime.col(j), pair.x.col(j + 1));
        }
    }

    #[test]
    fn pair_rejects_short_trajectory() {
        let traj = traj_1d(&[1.0, 2.0]);
        assert!(matches!(
            build_snapshot_pair(&traj, 2),
            Err(SnapshotError::TooFewStates { have: 2, need: 3 })
        ));
    }

    #[test]
    fn subsample_picks_expected_indices() {
        assert_eq!(subsample_indices(5, 3), vec![0, 2, 4]);
        let traj = traj_1d(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let sub = subsample_uniform(&traj, 3).unwrap();
        assert_eq!(sub.state(0)[0].re, 0.0);
        assert_eq!(sub.state(1)[0].re, 2.0);
        assert_eq!(sub.state(2)[0].re, 4.0);
        assert!((sub.dt() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn subsample_identity_when_n_out_equals_len() {
        let traj = traj_1d(&[0.0, 1.0, 2.0]);
        let sub = subsample_uniform(&traj, 3).unwrap();
        for i in 0..3 {
            assert_eq!(sub.state(i), traj.state(i));
        }
        assert_eq!(sub.dt(), traj.dt());
    }

    #[test]
    fn subsample_preserves_endpoints() {
        let idx = subsample_indices(20001, 500);
        assert_eq!(idx[0], 0);
        assert_eq!(idx[499], 20000);
        assert_eq!(idx.len(), 500);
    }

    #[test]
    fn lift_identity() {
        let g = ObservableMap::identity();
        assert_eq!(g.lift(&[c(2.0, 0.0)]), vec![c(2.0, 0.0)]);
    }

    #[test]
    fn lift_cube_blocks() {
        let g = ObservableMap::with_cube();
        let y = g.lift(&[c(2.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(y, vec![c(2.0, 0.0), c(-1.0, 0.0), c(8.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn lift_modsq_times() {
        // |1+i|² = 2, so g(q) = (1+i, 2+2i).
        let g = ObservableMap::nls_cubic();
        let y = g.lift(&[c(1.0, 1.0)]);
        assert_eq!(y[0], c(1.0, 1.0));
        assert!((y[1] - c(2.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn unlift_round_trip_and_redundant_blocks() {
        let g = ObservableMap::with_cube();
        let u = vec![c(2.0, 0.0), c(-1.0, 0.0)];
        assert_eq!(g.unlift(&g.lift(&u)).unwrap(), u);
        // Inconsistent cube block is ignored by design.
        let y = vec![c(2.0, 0.0), c(-1.0, 0.0), c(99.0, 0.0), c(99.0, 0.0)];
        assert_eq!(g.unlift(&y).unwrap(), u);
    }

    #[test]
    fn unlift_shape_error() {
        let g = ObservableMap::with_cube();
        assert!(matches!(
            g.unlift(&[c(1.0, 0.0); 3]),
            Err(SnapshotError::ShapeError(_))
        ));
    }

    #[test]
    fn observable_requires_one_identity_block() {
        assert!(ObservableMap::new("bad", vec![BlockTransform::Power(3)]).is_err());
        assert!(ObservableMap::new(
            "bad",
            vec![BlockTransform::Power(1), BlockTransform::Power(1)]
        )
        .is_err());
    }

    #[test]
    fn block_spec_round_trip() {
        for g in [
            ObservableMap::identity(),
            ObservableMap::with_cube(),
            ObservableMap::with_square_and_cube(),
            ObservableMap::nls_cubic(),
        ] {
            let spec = block_spec(&g);
            let back = parse_block_spec(g.name(), &spec).unwrap();
            assert_eq!(back, g);
        }
    }
}
