//! POD-Galerkin reduced-order model with DEIM treatment of nonlinear terms,
//! the comparison baseline for DMD prediction.
//!
//! The reduced model integrates with the same integrator and time step as the
//! resolved solver for its problem kind (forward Euler for the parabolic
//! problems, RK4 for Schrödinger), so the cost comparison charges POD for
//! full-horizon time stepping.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{lu_solve, truncated_svd, DenseMatrix, NumericsError};
use crate::snapshots::{subsample_indices, SnapshotError, Trajectory};
use crate::solvers::{kirchhoff_eta, PdeProblem, ProblemKind};

#[derive(Debug, Error)]
pub enum PodError {
    #[error("DEIM interpolation system became singular at step {k}")]
    SingularInterpolation { k: usize },
    #[error("problem kind has a nonlinear term but no DEIM operator was supplied")]
    MissingDeim,
    #[error("time step {dt:e} violates the stability limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
}

/// Orthonormal spatial basis from snapshot SVD, truncated by the
/// σ_i > ε·σ₁ rule.
#[derive(Debug, Clone)]
pub struct PodBasis {
    pub modes: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub r: usize,
}

pub fn fit_pod(snapshots: &DenseMatrix, rank_eps: f64) -> Result<PodBasis, PodError> {
    let svd = truncated_svd(snapshots, rank_eps)?;
    Ok(PodBasis {
        modes: svd.u,
        singular_values: svd.sigma,
        r: svd.r,
    })
}

/// Greedy DEIM point selection: the first index maximizes |first mode|; each
/// following index maximizes the residual of interpolating the next mode at
/// the points chosen so far. Ties break toward the lowest index.
pub fn deim_select(basis_nl: &DenseMatrix) -> Result<Vec<usize>, PodError> {
    let s = basis_nl.cols();
    let mut indices = vec![argmax_modulus(basis_nl.col(0))];
    for k in 1..s {
        // Solve (Pᵀ U_k) c = Pᵀ u_k for the current interpolation coefficients.
        let mut p_u = DenseMatrix::zeros(k, k);
        let mut rhs = DenseMatrix::zeros(k, 1);
        for (row, &idx) in indices.iter().enumerate() {
            for j in 0..k {
                p_u.set(row, j, basis_nl.get(idx, j));
            }
            rhs.set(row, 0, basis_nl.get(idx, k));
        }
        let coeff =
            lu_solve(&p_u, &rhs).map_err(|_| PodError::SingularInterpolation { k })?;
        let mut residual: Vec<Complex64> = basis_nl.col(k).to_vec();
        for j in 0..k {
            let c = coeff.get(j, 0);
            for (ri, &uj) in residual.iter_mut().zip(basis_nl.col(j)) {
                *ri -= c * uj;
            }
        }
        let next = argmax_modulus(&residual);
        if indices.contains(&next) {
            return Err(PodError::SingularInterpolation { k });
        }
        indices.push(next);
    }
    Ok(indices)
}

fn argmax_modulus(v: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_mag = v[0].norm();
    for (i, z) in v.iter().enumerate().skip(1) {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    best
}

/// DEIM operator: interpolation indices plus the precomputed projector
/// Vᴴ·U_nl·(PᵀU_nl)⁻¹ mapping sampled nonlinear values into the reduced space.
#[derive(Debug, Clone)]
pub struct DeimOperator {
    pub basis_nl: DenseMatrix,
    pub indices: Vec<usize>,
    pub projector: DenseMatrix,
}

pub fn build_deim(pod: &PodBasis, basis_nl: DenseMatrix) -> Result<DeimOperator, PodError> {
    let indices = deim_select(&basis_nl)?;
    let s = indices.len();
    let mut p_u = DenseMatrix::zeros(s, s);
    for (row, &idx) in indices.iter().enumerate() {
        for j in 0..s {
            p_u.set(row, j, basis_nl.get(idx, j));
        }
    }
    let inv = lu_solve(&p_u, &DenseMatrix::identity(s))
        .map_err(|_| PodError::SingularInterpolation { k: s })?;
    let projector = pod.modes.adjoint().mul(&basis_nl).mul(&inv);
    Ok(DeimOperator {
        basis_nl,
        indices,
        projector,
    })
}

/// Full-order evaluation of the problem's nonlinear term on a set of states;
/// training-time only. Returns None for the purely linear heat problem.
pub fn nonlinear_term_snapshots(
    p: &PdeProblem,
    states: &[Vec<Complex64>],
) -> Option<DenseMatrix> {
    match p.kind {
        ProblemKind::HeatDirichlet => None,
        _ => {
            let cols: Vec<Vec<Complex64>> = states
                .iter()
                .map(|u| nonlinear_term_full(p, u, 0.0))
                .collect();
            Some(DenseMatrix::from_columns(&cols).expect("states share a dimension"))
        }
    }
}

fn nonlinear_term_full(p: &PdeProblem, u: &[Complex64], t: f64) -> Vec<Complex64> {
    let n = u.len();
    match p.kind {
        ProblemKind::HeatDirichlet => vec![Complex64::ZERO; n],
        ProblemKind::ReactionDiffusion => u
            .iter()
            .map(|&z| -p.mu * (z - z * z * z))
            .collect(),
        ProblemKind::NonlinearRdKirchhoff => {
            let inv_dx2 = 1.0 / (p.dx() * p.dx());
            let eta: Vec<f64> = u.iter().map(|z| kirchhoff_eta(z.re)).collect();
            let eta_l = kirchhoff_eta(p.bc_left.eval(t));
            let eta_r = kirchhoff_eta(p.bc_right.eval(t));
            (0..n)
                .map(|i| {
                    let left = if i == 0 { eta_l } else { eta[i - 1] };
                    let right = if i + 1 == n { eta_r } else { eta[i + 1] };
                    let lap = (left - 2.0 * eta[i] + right) * inv_dx2;
                    let z = u[i];
                    Complex64::new(lap, 0.0) - p.mu * (z - z * z * z)
                })
                .collect()
        }
        ProblemKind::Nls => u.iter().map(|&z| Complex64::I * z.norm_sqr() * z).collect(),
    }
}

/// Integrates the Galerkin ROM over the full horizon at the resolved fine
/// step and returns the lifted trajectory u = V·a at `n_out` uniformly
/// selected times (the same selection rule as the resolved pipeline).
pub fn rom_integrate(
    pod: &PodBasis,
    deim: Option<&DeimOperator>,
    p: &PdeProblem,
    n_out: usize,
) -> Result<Trajectory, PodError> {
    rom_integrate_with_steps(pod, deim, p, p.n_fine_steps(), n_out, false)
}

/// ROM integration recorded on the benchmark snapshot grid: times j·T/n_out,
/// j = 1…n_out, exactly matching `solvers::solve_snapshots`.
pub fn rom_integrate_snapshots(
    pod: &PodBasis,
    deim: Option<&DeimOperator>,
    p: &PdeProblem,
    n_out: usize,
) -> Result<Trajectory, PodError> {
    let n_steps = p.n_fine_steps().div_ceil(n_out) * n_out;
    rom_integrate_with_steps(pod, deim, p, n_steps, n_out, true)
}

pub fn rom_integrate_with_steps(
    pod: &PodBasis,
    deim: Option<&DeimOperator>,
    p: &PdeProblem,
    n_steps: usize,
    n_out: usize,
    snapshot_grid: bool,
) -> Result<Trajectory, PodError> {
    let dt = p.t_final / n_steps as f64;
    if dt > p.dt_limit() {
        return Err(PodError::CflViolation {
            dt,
            limit: p.dt_limit(),
        });
    }
    if p.kind != ProblemKind::HeatDirichlet && deim.is_none() {
        return Err(PodError::MissingDeim);
    }

    let v = &pod.modes;
    let n = v.rows();
    let r = pod.r;
    let u0 = p.initial_state();
    let mut a = v.adjoint_matvec(&u0);

    // Reduced linear operator and boundary forcing directions.
    let (a_r, w_left, w_right) = reduced_linear_parts(p, v)?;

    // Sampled rows of V for DEIM evaluation: center, left and right
    // neighbors (the Kirchhoff Laplacian needs the stencil).
    let sampler = deim.map(|d| DeimSampler::new(v, d, n));

    let keep: Vec<usize> = if snapshot_grid {
        (1..=n_out)
            .map(|j| (j as f64 * n_steps as f64 / n_out as f64).round() as usize)
            .collect()
    } else {
        subsample_indices(n_steps + 1, n_out)
    };
    let mut kept: Vec<Vec<Complex64>> = Vec::with_capacity(n_out);
    let mut cursor = 0usize;
    let mut record = |step: usize, a: &[Complex64], kept: &mut Vec<Vec<Complex64>>| {
        if cursor < keep.len() && keep[cursor] == step {
            kept.push(v.matvec(a));
            cursor += 1;
        }
    };
    record(0, &a, &mut kept);

    let reduced_rhs = |a: &[Complex64], t: f64| -> Vec<Complex64> {
        let mut rhs = a_r.matvec(a);
        let bl = p.bc_left.eval(t);
        let br = p.bc_right.eval(t);
        for i in 0..r {
            rhs[i] += bl * w_left[i] + br * w_right[i];
        }
        if let (Some(s), Some(d)) = (&sampler, deim) {
            let n_sampled = s.sample_nonlinear(p, a, t);
            let projected = d.projector.matvec(&n_sampled);
            for i in 0..r {
                rhs[i] += projected[i];
            }
        }
        rhs
    };

    for step in 0..n_steps {
        let t = dt * step as f64;
        a = match p.kind {
            ProblemKind::Nls => {
                let k1 = reduced_rhs(&a, t);
                let a2 = axpy(&a, &k1, 0.5 * dt);
                let k2 = reduced_rhs(&a2, t + 0.5 * dt);
                let a3 = axpy(&a, &k2, 0.5 * dt);
                let k3 = reduced_rhs(&a3, t + 0.5 * dt);
                let a4 = axpy(&a, &k3, dt);
                let k4 = reduced_rhs(&a4, t + dt);
                a.iter()
                    .enumerate()
                    .map(|(i, &ai)| ai + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            }
            _ => axpy(&a, &reduced_rhs(&a, t), dt),
        };
        record(step + 1, &a, &mut kept);
    }

    let (dt_out, t0_out) = if snapshot_grid {
        let spacing = p.t_final / n_out as f64;
        (spacing, spacing)
    } else {
        (dt * n_steps as f64 / (n_out - 1) as f64, 0.0)
    };
    Ok(Trajectory::new(kept, dt_out, t0_out)?)
}

fn axpy(a: &[Complex64], k: &[Complex64], h: f64) -> Vec<Complex64> {
    a.iter().zip(k).map(|(&ai, &ki)| ai + h * ki).collect()
}

/// (VᴴAV, Vᴴe_L·scale, Vᴴe_R·scale) for the problem's linear part.
fn reduced_linear_parts(
    p: &PdeProblem,
    v: &DenseMatrix,
) -> Result<(DenseMatrix, Vec<Complex64>, Vec<Complex64>), PodError> {
    let n = v.rows();
    let r = v.cols();
    let mut a_r = DenseMatrix::zeros(r, r);
    let mut w_left = vec![Complex64::ZERO; r];
    let mut w_right = vec![Complex64::ZERO; r];

    match p.kind {
        ProblemKind::HeatDirichlet | ProblemKind::ReactionDiffusion => {
            let scale = p.theta / (p.dx() * p.dx());
            for j in 0..r {
                let col = v.col(j);
                let mut w = vec![Complex64::ZERO; n];
                for i in 0..n {
                    let left = if i == 0 { Complex64::ZERO } else { col[i - 1] };
                    let right = if i + 1 == n { Complex64::ZERO } else { col[i + 1] };
                    w[i] = scale * (left - 2.0 * col[i] + right);
                }
                let reduced = v.adjoint_matvec(&w);
                for i in 0..r {
                    a_r.set(i, j, reduced[i]);
                }
            }
            for i in 0..r {
                w_left[i] = v.get(0, i).conj() * scale;
                w_right[i] = v.get(n - 1, i).conj() * scale;
            }
        }
        ProblemKind::NonlinearRdKirchhoff => {
            // Everything is nonlinear; the DEIM term carries the dynamics.
        }
        ProblemKind::Nls => {
            use crate::numerics::{fft, inverse_fft};
            use std::f64::consts::PI;
            let (lo, hi) = p.domain;
            let half_width = (hi - lo) / 2.0;
            for j in 0..r {
                let mut spec = fft(v.col(j))?;
                for (idx, s) in spec.iter_mut().enumerate() {
                    let freq = if idx < n / 2 {
                        idx as f64
                    } else {
                        idx as f64 - n as f64
                    };
                    let k = PI * freq / half_width;
                    *s *= -k * k;
                }
                let d2 = inverse_fft(&spec)?;
                let w: Vec<Complex64> = d2.iter().map(|&z| Complex64::I * 0.5 * z).collect();
                let reduced = v.adjoint_matvec(&w);
                for i in 0..r {
                    a_r.set(i, j, reduced[i]);
                }
            }
        }
    }
    Ok((a_r, w_left, w_right))
}

/// Rows of V at the DEIM indices and their grid neighbors, so the nonlinear
/// term can be evaluated from O(s·r) work per step.
struct DeimSampler {
    center: DenseMatrix,
    left: DenseMatrix,
    right: DenseMatrix,
    indices: Vec<usize>,
    n_full: usize,
}

impl DeimSampler {
    fn new(v: &DenseMatrix, deim: &DeimOperator, n_full: usize) -> Self {
        let s = deim.indices.len();
        let r = v.cols();
        let mut center = DenseMatrix::zeros(s, r);
        let mut left = DenseMatrix::zeros(s, r);
        let mut right = DenseMatrix::zeros(s, r);
        for (row, &idx) in deim.indices.iter().enumerate() {
            for j in 0..r {
                center.set(row, j, v.get(idx, j));
                if idx > 0 {
                    left.set(row, j, v.get(idx - 1, j));
                }
                if idx + 1 < n_full {
                    right.set(row, j, v.get(idx + 1, j));
                }
            }
        }
        Self {
            center,
            left,
            right,
            indices: deim.indices.clone(),
            n_full,
        }
    }

    fn sample_nonlinear(&self, p: &PdeProblem, a: &[Complex64], t: f64) -> Vec<Complex64> {
        let u_c = self.center.matvec(a);
        match p.kind {
            ProblemKind::ReactionDiffusion => {
                u_c.iter().map(|&z| -p.mu * (z - z * z * z)).collect()
            }
            ProblemKind::NonlinearRdKirchhoff => {
                let inv_dx2 = 1.0 / (p.dx() * p.dx());
                let u_l = self.left.matvec(a);
                let u_r = self.right.matvec(a);
                let eta_bl = kirchhoff_eta(p.bc_left.eval(t));
                let eta_br = kirchhoff_eta(p.bc_right.eval(t));
                self.indices
                    .iter()
                    .enumerate()
                    .map(|(row, &idx)| {
                        let eta_left = if idx == 0 {
                            eta_bl
                        } else {
                            kirchhoff_eta(u_l[row].re)
                        };
                        let eta_right = if idx + 1 == self.n_full {
                            eta_br
                        } else {
                            kirchhoff_eta(u_r[row].re)
                        };
                        let eta_c = kirchhoff_eta(u_c[row].re);
                        let lap = (eta_left - 2.0 * eta_c + eta_right) * inv_dx2;
                        let z = u_c[row];
                        Complex64::new(lap, 0.0) - p.mu * (z - z * z * z)
                    })
                    .collect()
            }
            ProblemKind::Nls => u_c
                .iter()
                .map(|&z| Complex64::I * z.norm_sqr() * z)
                .collect(),
            ProblemKind::HeatDirichlet => vec![Complex64::ZERO; u_c.len()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::vec_norm;
    use crate::solvers::{solve_sampled, InitialCondition};

    #[test]
    fn pod_of_repeated_column_is_rank_one() {
        let col = vec![1.0, 2.0, -1.0];
        let data: Vec<f64> = col.iter().chain(&col).chain(&col).cloned().collect();
        let snap = DenseMatrix::from_real_column_major(3, 3, &data).unwrap();
        let pod = fit_pod(&snap, 1e-8).unwrap();
        assert_eq!(pod.r, 1);
        // Mode is proportional to the repeated column.
        let scale = pod.modes.get(0, 0).re / col[0];
        for (i, &c) in col.iter().enumerate() {
            assert!((pod.modes.get(i, 0).re - scale * c).abs() < 1e-10);
        }
    }

    #[test]
    fn pod_of_orthogonal_equal_norm_columns_keeps_all() {
        let snap =
            DenseMatrix::from_real_column_major(3, 3, &[2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 2.0])
                .unwrap();
        let pod = fit_pod(&snap, 1e-8).unwrap();
        assert_eq!(pod.r, 3);
    }

    #[test]
    fn pod_modes_orthonormal_and_energy_ordered() {
        // Snapshots from the heat problem: modes are orthonormal and the
        // training reconstruction error is nonincreasing in r.
        let p = PdeProblem::test_1a(30);
        let traj = solve_sampled(&p, 40).unwrap();
        let snap = DenseMatrix::from_columns(traj.states()).unwrap();
        let pod = fit_pod(&snap, 1e-12).unwrap();
        let gram = pod.modes.adjoint().mul(&pod.modes);
        assert!(gram.sub(&DenseMatrix::identity(pod.r)).fro_norm() < 1e-10);

        let mut prev_err = f64::INFINITY;
        for r in 1..=pod.r {
            let mut vr = DenseMatrix::zeros(snap.rows(), r);
            for j in 0..r {
                for i in 0..snap.rows() {
                    vr.set(i, j, pod.modes.get(i, j));
                }
            }
            let recon = vr.mul(&vr.adjoint().mul(&snap));
            let err = snap.sub(&recon).fro_norm();
            assert!(err <= prev_err + 1e-12);
            prev_err = err;
        }
    }

    #[test]
    fn pod_rank_of_diffusion_data_is_small_and_matches_spectrum() {
        // Diffusive snapshots are low rank: r << N, and r agrees with a
        // direct count over the singular spectrum.
        let p = PdeProblem::test_1a(60);
        let traj = crate::solvers::solve_snapshots(&p, 200).unwrap();
        let snap = DenseMatrix::from_columns(&traj.states()[..100]).unwrap();
        let pod = fit_pod(&snap, 1e-8).unwrap();
        assert!(pod.r * 3 < 60, "rank {} is not small next to N=60", pod.r);
        let (_, sigma, _) = crate::numerics::svd(&snap).unwrap();
        let expected = sigma.iter().filter(|&&s| s > 1e-8 * sigma[0]).count();
        assert_eq!(pod.r, expected);
    }

    #[test]
    fn deim_select_unit_vectors() {
        let basis =
            DenseMatrix::from_real_column_major(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(deim_select(&basis).unwrap(), vec![0, 1]);
    }

    #[test]
    fn deim_select_single_mode_argmax() {
        let basis = DenseMatrix::from_real_column_major(3, 1, &[0.1, 0.9, 0.3]).unwrap();
        assert_eq!(deim_select(&basis).unwrap(), vec![1]);
    }

    #[test]
    fn deim_reproduces_span_exactly() {
        // U(PᵀU)⁻¹Pᵀu = u for u ∈ span(U): deterministic 8×3 basis, random
        // enough to be well conditioned.
        let vals: Vec<f64> = (0..24)
            .map(|i| ((i * i + 3 * i) as f64 * 0.7).sin() + 0.1)
            .collect();
        let basis = DenseMatrix::from_real_column_major(8, 3, &vals).unwrap();
        let pod = PodBasis {
            modes: DenseMatrix::identity(8),
            singular_values: vec![1.0; 8],
            r: 8,
        };
        let deim = build_deim(&pod, basis.clone()).unwrap();
        // With V = I the projector is U(PᵀU)⁻¹ itself.
        let coeffs = [0.3, -1.2, 0.8];
        let mut u = vec![Complex64::ZERO; 8];
        for (j, &c) in coeffs.iter().enumerate() {
            for (ui, &bij) in u.iter_mut().zip(basis.col(j)) {
                *ui += c * bij;
            }
        }
        let sampled: Vec<Complex64> = deim.indices.iter().map(|&i| u[i]).collect();
        let recon = deim.projector.matvec(&sampled);
        for (a, b) in recon.iter().zip(&u) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn deim_indices_distinct() {
        let p = PdeProblem::test_2b(40);
        let traj = solve_sampled(&p, 60).unwrap();
        let nl = nonlinear_term_snapshots(&p, traj.states()).unwrap();
        let basis = fit_pod(&nl, 1e-10).unwrap();
        let idx = deim_select(&basis.modes).unwrap();
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), idx.len());
    }

    #[test]
    fn galerkin_reduced_operator_matches_dense_oracle() {
        let p = PdeProblem::test_1a(20);
        let traj = solve_sampled(&p, 30).unwrap();
        let snap = DenseMatrix::from_columns(traj.states()).unwrap();
        let pod = fit_pod(&snap, 1e-10).unwrap();
        let (a_r, _, _) = reduced_linear_parts(&p, &pod.modes).unwrap();

        // Dense oracle: build L explicitly and form VᴴLV.
        let n = 20;
        let scale = p.theta / (p.dx() * p.dx());
        let mut l = DenseMatrix::zeros(n, n);
        for i in 0..n {
            l.set(i, i, Complex64::new(-2.0 * scale, 0.0));
            if i > 0 {
                l.set(i, i - 1, Complex64::new(scale, 0.0));
            }
            if i + 1 < n {
                l.set(i, i + 1, Complex64::new(scale, 0.0));
            }
        }
        let oracle = pod.modes.adjoint().mul(&l.mul(&pod.modes));
        assert!(a_r.sub(&oracle).fro_norm() <= 1e-10 * oracle.fro_norm().max(1.0));
    }

    #[test]
    fn full_rank_rom_matches_resolved_linear_solver() {
        // Exact projection: with a square orthonormal basis the ROM recursion
        // is unitarily similar to the resolved one. The fine trajectory is
        // needed for a full-rank basis; early steps carry the sharp boundary
        // transients that excite every grid mode.
        let p = PdeProblem::test_1a(24);
        let n_out = 60;
        let resolved = solve_sampled(&p, n_out).unwrap();
        let fine = crate::solvers::solve(&p).unwrap();
        let snap = DenseMatrix::from_columns(fine.states()).unwrap();
        let pod = fit_pod(&snap, 1e-13).unwrap();
        assert_eq!(pod.r, 24, "Test 1a fine snapshots span the full grid");
        let rom = rom_integrate(&pod, None, &p, n_out).unwrap();

        let scale = (0..n_out)
            .map(|n| vec_norm(resolved.state(n)))
            .fold(0.0, f64::max);
        for n in 0..n_out {
            let diff: f64 = rom
                .state(n)
                .iter()
                .zip(resolved.state(n))
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff <= 1e-10 * scale, "step {n}: {:e}", diff / scale);
        }
    }

    #[test]
    fn zero_initial_data_gives_zero_rom_trajectory() {
        let mut p = PdeProblem::test_2b(20);
        p.ic = InitialCondition::Zero;
        p.t_final = 0.1;
        // Basis from the nonzero standard problem, applied to zero data.
        let base = PdeProblem::test_2b(20);
        let traj = solve_sampled(&base, 30).unwrap();
        let snap = DenseMatrix::from_columns(traj.states()).unwrap();
        let pod = fit_pod(&snap, 1e-10).unwrap();
        let nl = nonlinear_term_snapshots(&base, traj.states()).unwrap();
        let nl_basis = fit_pod(&nl, 1e-10).unwrap();
        let deim = build_deim(&pod, nl_basis.modes).unwrap();
        let rom = rom_integrate(&pod, Some(&deim), &p, 10).unwrap();
        for n in 0..rom.len() {
            assert!(vec_norm(rom.state(n)) <= 1e-14);
        }
    }

    #[test]
    fn missing_deim_is_an_error_for_nonlinear_kinds() {
        let p = PdeProblem::test_2b(20);
        let traj = solve_sampled(&p, 30).unwrap();
        let snap = DenseMatrix::from_columns(traj.states()).unwrap();
        let pod = fit_pod(&snap, 1e-8).unwrap();
        assert!(matches!(
            rom_integrate(&pod, None, &p, 10),
            Err(PodError::MissingDeim)
        ));
    }

    #[test]
    fn rom_rejects_unstable_step() {
        let p = PdeProblem::test_1a(20);
        let traj = solve_sampled(&p, 30).unwrap();
        let snap = DenseMatrix::from_columns(traj.states()).unwrap();
        let pod = fit_pod(&snap, 1e-8).unwrap();
        assert!(matches!(
            rom_integrate_with_steps(&pod, None, &p, 1, 2, false),
            Err(PodError::CflViolation { .. })
        ));
    }
}
