//! Fully resolved reference solvers for the four benchmark problems:
//! linear diffusion with Dirichlet data, a reaction-diffusion equation in
//! diffusion- and reaction-dominated regimes, a nonlinear-diffusion equation
//! handled through the Kirchhoff transform, and the focusing nonlinear
//! Schrödinger equation.
//!
//! Parabolic problems use second-order central differences in space and
//! forward Euler in time at a CFL-compliant step; the state vector holds
//! interior nodes only, with Dirichlet values entering the stencil as known
//! forcing. The Schrödinger solver is spectral in space (FFT) with classical
//! fourth-order Runge–Kutta in time on a periodic domain.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{fft, inverse_fft, NumericsError};
use crate::snapshots::{subsample_indices, SnapshotError, Trajectory};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("time step {dt:e} violates the stability limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("state left the admissible range at step {step} (max |u| = {max_abs:e})")]
    StateOutOfRange { step: usize, max_abs: f64 },
    #[error("mass drifted by {drift:e} (relative), above the 1e-6 guard; time step too large")]
    NormDrift { drift: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    HeatDirichlet,
    ReactionDiffusion,
    NonlinearRdKirchhoff,
    Nls,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Zero,
    Constant(f64),
    /// sin(πx) on [0, 1].
    SinPi,
    /// 0.5 + 0.5 sin(πx) on [0, 1].
    HalfPlusHalfSinPi,
    /// 2 sech(x), the Schrödinger two-soliton bound state.
    TwoSech,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryValue {
    Constant(f64),
    /// u(t) = 1.01 + 0.01 sin(−π/2 + 10t); period π/5.
    PeriodicFluctuation,
}

impl BoundaryValue {
    pub fn eval(self, t: f64) -> f64 {
        match self {
            BoundaryValue::Constant(c) => c,
            BoundaryValue::PeriodicFluctuation => 1.01 + 0.01 * (-PI / 2.0 + 10.0 * t).sin(),
        }
    }
}

/// One of the benchmark problems, with grid and horizon configurable.
#[derive(Debug, Clone)]
pub struct PdeProblem {
    pub kind: ProblemKind,
    pub domain: (f64, f64),
    /// Interior node count for Dirichlet kinds; total (power-of-two) grid
    /// size for the periodic Schrödinger problem.
    pub n_grid: usize,
    pub t_final: f64,
    /// Linear diffusivity θ.
    pub theta: f64,
    /// Reaction rate μ multiplying (u − u³).
    pub mu: f64,
    pub ic: InitialCondition,
    pub bc_left: BoundaryValue,
    pub bc_right: BoundaryValue,
    pub is_real: bool,
}

impl PdeProblem {
    /// Test 1a: relaxation to equilibrium. T = 0.2, u₀ = 0, u_L = 0, u_R = 1.
    pub fn test_1a(n_grid: usize) -> Self {
        Self::heat_custom(
            n_grid,
            0.2,
            InitialCondition::Zero,
            BoundaryValue::Constant(0.0),
            BoundaryValue::Constant(1.0),
        )
    }

    /// Test 1b: periodic boundary fluctuations. T = π/2, u₀ = 1,
    /// u_L = 1.01 + 0.01 sin(−π/2 + 10t), u_R = 1.
    pub fn test_1b(n_grid: usize) -> Self {
        Self::heat_custom(
            n_grid,
            PI / 2.0,
            InitialCondition::Constant(1.0),
            BoundaryValue::PeriodicFluctuation,
            BoundaryValue::Constant(1.0),
        )
    }

    pub fn heat_custom(
        n_grid: usize,
        t_final: f64,
        ic: InitialCondition,
        bc_left: BoundaryValue,
        bc_right: BoundaryValue,
    ) -> Self {
        Self {
            kind: ProblemKind::HeatDirichlet,
            domain: (0.0, 1.0),
            n_grid,
            t_final,
            theta: 1.0,
            mu: 0.0,
            ic,
            bc_left,
            bc_right,
            is_real: true,
        }
    }

    fn reaction_diffusion(n_grid: usize, mu: f64) -> Self {
        Self {
            kind: ProblemKind::ReactionDiffusion,
            domain: (0.0, 1.0),
            n_grid,
            t_final: 2.0,
            theta: 0.1,
            mu,
            ic: InitialCondition::HalfPlusHalfSinPi,
            bc_left: BoundaryValue::Constant(0.0),
            bc_right: BoundaryValue::Constant(0.0),
            is_real: true,
        }
    }

    /// Test 2a: diffusion-dominated regime, θ = 0.1, μ = 0.01.
    pub fn test_2a(n_grid: usize) -> Self {
        Self::reaction_diffusion(n_grid, 0.01)
    }

    /// Test 2b: reaction-dominated regime, θ = 0.1, μ = 1.
    pub fn test_2b(n_grid: usize) -> Self {
        Self::reaction_diffusion(n_grid, 1.0)
    }

    /// Test 3: state-dependent diffusion ∂ₜu = ∂ₓ(u ∂ₓu) − (u − u³), handled
    /// through the Kirchhoff form ∂ₜu = ∂ₓₓ(u²/2) − (u − u³).
    pub fn test_3(n_grid: usize) -> Self {
        Self {
            kind: ProblemKind::NonlinearRdKirchhoff,
            domain: (0.0, 1.0),
            n_grid,
            t_final: 2.0,
            theta: 1.0, // max diffusivity ψ(u) = u on u ∈ [0, 1]
            mu: 1.0,
            ic: InitialCondition::HalfPlusHalfSinPi,
            bc_left: BoundaryValue::Constant(0.0),
            bc_right: BoundaryValue::Constant(0.0),
            is_real: true,
        }
    }

    /// Test 4: focusing NLS i∂ₜq + ½∂²ₓq + |q|²q = 0, q(x,0) = 2 sech(x),
    /// on [−15, 15] with periodic boundary; n_grid must be a power of two.
    pub fn test_4(n_grid: usize) -> Self {
        Self {
            kind: ProblemKind::Nls,
            domain: (-15.0, 15.0),
            n_grid,
            t_final: PI,
            theta: 0.0,
            mu: 0.0,
            ic: InitialCondition::TwoSech,
            bc_left: BoundaryValue::Constant(0.0),
            bc_right: BoundaryValue::Constant(0.0),
            is_real: false,
        }
    }

    pub fn dx(&self) -> f64 {
        let (a, b) = self.domain;
        match self.kind {
            ProblemKind::Nls => (b - a) / self.n_grid as f64,
            _ => (b - a) / (self.n_grid + 1) as f64,
        }
    }

    /// Grid coordinates carried by the state vector.
    pub fn grid(&self) -> Vec<f64> {
        let (a, _) = self.domain;
        let dx = self.dx();
        match self.kind {
            ProblemKind::Nls => (0..self.n_grid).map(|j| a + dx * j as f64).collect(),
            _ => (1..=self.n_grid).map(|i| a + dx * i as f64).collect(),
        }
    }

    /// Stability limit on the time step.
    pub fn dt_limit(&self) -> f64 {
        let dx = self.dx();
        match self.kind {
            ProblemKind::Nls => {
                // RK4 imaginary-axis stability: |λ| dt ≤ 2√2 with
                // λ_max = k_max²/2 for the spectral Laplacian.
                let (a, b) = self.domain;
                let k_max = PI * (self.n_grid as f64 / 2.0) / ((b - a) / 2.0);
                2.0 * 2.0_f64.sqrt() / (0.5 * k_max * k_max)
            }
            _ => dx * dx / (2.0 * self.theta.max(f64::MIN_POSITIVE)),
        }
    }

    /// CFL-compliant step actually used: an integer division of the horizon
    /// below 0.9× the stability limit (parabolic kinds), or a conservative
    /// fixed target for the Schrödinger problem chosen so that mass drift
    /// stays below 1e−8 on the benchmark horizon.
    pub fn dt_fine(&self) -> f64 {
        let target = match self.kind {
            ProblemKind::Nls => (5e-4_f64).min(0.35 * self.dt_limit()),
            _ => 0.9 * self.dt_limit(),
        };
        self.t_final / self.n_fine_steps_for(target) as f64
    }

    fn n_fine_steps_for(&self, dt_target: f64) -> usize {
        (self.t_final / dt_target).ceil().max(1.0) as usize
    }

    pub fn n_fine_steps(&self) -> usize {
        self.n_fine_steps_for(match self.kind {
            ProblemKind::Nls => (5e-4_f64).min(0.35 * self.dt_limit()),
            _ => 0.9 * self.dt_limit(),
        })
    }

    pub fn initial_state(&self) -> Vec<Complex64> {
        let grid = self.grid();
        grid.iter()
            .map(|&x| match self.ic {
                InitialCondition::Zero => Complex64::ZERO,
                InitialCondition::Constant(c) => Complex64::new(c, 0.0),
                InitialCondition::SinPi => Complex64::new((PI * x).sin(), 0.0),
                InitialCondition::HalfPlusHalfSinPi => {
                    Complex64::new(0.5 + 0.5 * (PI * x).sin(), 0.0)
                }
                InitialCondition::TwoSech => Complex64::new(2.0 / x.cosh(), 0.0),
            })
            .collect()
    }
}

/// Kirchhoff transform η(u) = ∫₀ᵘ ψ(s) ds for ψ(u) = u: η(u) = u²/2.
#[inline]
pub fn kirchhoff_eta(u: f64) -> f64 {
    0.5 * u * u
}

/// Solves on the fine CFL grid and returns every step.
pub fn solve(p: &PdeProblem) -> Result<Trajectory, SolverError> {
    solve_decimated(p, None)
}

/// Solves with an explicit step count (dt = T / n_steps); errors with
/// `CflViolation` when that step breaks stability.
pub fn solve_with_steps(p: &PdeProblem, n_steps: usize) -> Result<Trajectory, SolverError> {
    let dt = p.t_final / n_steps as f64;
    if dt > p.dt_limit() {
        return Err(SolverError::CflViolation {
            dt,
            limit: p.dt_limit(),
        });
    }
    integrate(p, n_steps, None)
}

/// Solves on the fine grid but stores only the `n_out` states that
/// `snapshots::subsample_uniform` would select, without materializing the
/// full fine trajectory. The stored states are bit-identical to subsampling
/// after the fact.
pub fn solve_sampled(p: &PdeProblem, n_out: usize) -> Result<Trajectory, SolverError> {
    solve_decimated(p, Some(SampleWindow::WithInitial(n_out)))
}

/// The benchmark data window: `n_out` computed solutions at the exactly
/// uniform times j·T/n_out, j = 1…n_out. The fine step count is rounded up
/// to a multiple of `n_out` (still CFL-compliant) so that every snapshot is
/// a true solver state and the snapshot spacing is exactly uniform; DMD
/// assumes uniform spacing and reacts badly to stride jitter. The prescribed
/// initial state is not a computed solution and is excluded; for the
/// relaxation problem it is identically zero and could not anchor mode
/// amplitudes.
pub fn solve_snapshots(p: &PdeProblem, n_out: usize) -> Result<Trajectory, SolverError> {
    let base = p.n_fine_steps();
    let n_steps = base.div_ceil(n_out) * n_out;
    integrate(p, n_steps, Some(SampleWindow::SolutionsOnly(n_out)))
}

#[derive(Clone, Copy)]
enum SampleWindow {
    /// Uniform over fine indices 0…n_steps.
    WithInitial(usize),
    /// Nearest fine indices to the nominal times j·T/n_out, j = 1…n_out.
    SolutionsOnly(usize),
}

fn solve_decimated(p: &PdeProblem, window: Option<SampleWindow>) -> Result<Trajectory, SolverError> {
    integrate(p, p.n_fine_steps(), window)
}

fn integrate(
    p: &PdeProblem,
    n_steps: usize,
    window: Option<SampleWindow>,
) -> Result<Trajectory, SolverError> {
    let dt = p.t_final / n_steps as f64;
    let keep: Option<Vec<usize>> = window.map(|w| match w {
        SampleWindow::WithInitial(k) => subsample_indices(n_steps + 1, k),
        SampleWindow::SolutionsOnly(k) => (1..=k)
            .map(|j| (j as f64 * n_steps as f64 / k as f64).round() as usize)
            .collect(),
    });
    let mut kept_states: Vec<Vec<Complex64>> = Vec::new();
    let mut keep_cursor = 0usize;

    let mut u = p.initial_state();
    let mut record = |step: usize, state: &Vec<Complex64>, kept: &mut Vec<Vec<Complex64>>| {
        match &keep {
            None => kept.push(state.clone()),
            Some(idx) => {
                if keep_cursor < idx.len() && idx[keep_cursor] == step {
                    kept.push(state.clone());
                    keep_cursor += 1;
                }
            }
        }
    };
    record(0, &u, &mut kept_states);

    let mut nls = if p.kind == ProblemKind::Nls {
        Some(NlsWorkspace::new(p)?)
    } else {
        None
    };
    let mass0 = nls.as_ref().map(|w| w.mass(&u));

    for step in 0..n_steps {
        let t = dt * step as f64;
        match p.kind {
            ProblemKind::HeatDirichlet | ProblemKind::ReactionDiffusion => {
                u = parabolic_step(p, &u, t, dt, false);
            }
            ProblemKind::NonlinearRdKirchhoff => {
                u = parabolic_step(p, &u, t, dt, true);
                let max_abs = u.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
                if max_abs > 10.0 {
                    return Err(SolverError::StateOutOfRange {
                        step: step + 1,
                        max_abs,
                    });
                }
            }
            ProblemKind::Nls => {
                let w = nls.as_mut().expect("nls workspace");
                u = w.rk4_step(&u, dt)?;
            }
        }
        record(step + 1, &u, &mut kept_states);
    }

    if let (Some(w), Some(m0)) = (nls.as_ref(), mass0) {
        let drift = (w.mass(&u) - m0).abs() / m0;
        if drift > 1e-6 {
            return Err(SolverError::NormDrift { drift });
        }
    }

    let (dt_out, t0_out) = match window {
        None => (dt, 0.0),
        Some(SampleWindow::WithInitial(k)) => (dt * n_steps as f64 / (k - 1) as f64, 0.0),
        Some(SampleWindow::SolutionsOnly(k)) => {
            let spacing = p.t_final / k as f64;
            (spacing, spacing)
        }
    };
    Ok(Trajectory::new(kept_states, dt_out, t0_out)?)
}

/// One forward Euler step of the Dirichlet problems. With `kirchhoff` set,
/// the Laplacian acts on η(u) = u²/2 instead of u and the diffusivity θ
/// multiplies nothing (it is folded into η).
fn parabolic_step(
    p: &PdeProblem,
    u: &[Complex64],
    t: f64,
    dt: f64,
    kirchhoff: bool,
) -> Vec<Complex64> {
    let n = u.len();
    let inv_dx2 = 1.0 / (p.dx() * p.dx());
    let ul = p.bc_left.eval(t);
    let ur = p.bc_right.eval(t);

    let field: Vec<f64> = if kirchhoff {
        u.iter().map(|z| kirchhoff_eta(z.re)).collect()
    } else {
        u.iter().map(|z| z.re).collect()
    };
    let (left_val, right_val) = if kirchhoff {
        (kirchhoff_eta(ul), kirchhoff_eta(ur))
    } else {
        (ul, ur)
    };
    let diff_coeff = if kirchhoff { 1.0 } else { p.theta };

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let left = if i == 0 { left_val } else { field[i - 1] };
        let right = if i + 1 == n { right_val } else { field[i + 1] };
        let lap = (left - 2.0 * field[i] + right) * inv_dx2;
        let ui = u[i].re;
        let reaction = p.mu * (ui - ui * ui * ui);
        out.push(Complex64::new(ui + dt * (diff_coeff * lap - reaction), 0.0));
    }
    out
}

/// FFT workspace for the spectral Schrödinger right-hand side
/// F(q) = i(½ ∂ₓₓq + |q|²q).
struct NlsWorkspace {
    k_sq: Vec<f64>,
    dx: f64,
}

impl NlsWorkspace {
    fn new(p: &PdeProblem) -> Result<Self, SolverError> {
        let n = p.n_grid;
        if n < 2 || !n.is_power_of_two() {
            return Err(SolverError::Numerics(NumericsError::BadLength(n)));
        }
        let (a, b) = p.domain;
        let half_width = (b - a) / 2.0;
        let k_sq = (0..n)
            .map(|j| {
                let freq = if j < n / 2 {
                    j as f64
                } else {
                    j as f64 - n as f64
                };
                let k = PI * freq / half_width;
                k * k
            })
            .collect();
        Ok(Self { k_sq, dx: p.dx() })
    }

    fn rhs(&self, q: &[Complex64]) -> Result<Vec<Complex64>, SolverError> {
        let mut spec = fft(q)?;
        for (s, &ks) in spec.iter_mut().zip(&self.k_sq) {
            *s *= -ks;
        }
        let q_xx = inverse_fft(&spec)?;
        Ok(q
            .iter()
            .zip(&q_xx)
            .map(|(&qi, &dxx)| Complex64::I * (0.5 * dxx + qi.norm_sqr() * qi))
            .collect())
    }

    fn rk4_step(&self, q: &[Complex64], dt: f64) -> Result<Vec<Complex64>, SolverError> {
        let k1 = self.rhs(q)?;
        let q2: Vec<Complex64> = q.iter().zip(&k1).map(|(&a, &b)| a + 0.5 * dt * b).collect();
        let k2 = self.rhs(&q2)?;
        let q3: Vec<Complex64> = q.iter().zip(&k2).map(|(&a, &b)| a + 0.5 * dt * b).collect();
        let k3 = self.rhs(&q3)?;
        let q4: Vec<Complex64> = q.iter().zip(&k3).map(|(&a, &b)| a + dt * b).collect();
        let k4 = self.rhs(&q4)?;
        Ok(q.iter()
            .enumerate()
            .map(|(i, &qi)| qi + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect())
    }

    /// Discrete mass ∫|q|² dx; on the uniform periodic grid the trapezoid
    /// rule reduces to Δx·Σ|qⱼ|².
    fn mass(&self, q: &[Complex64]) -> f64 {
        self.dx * q.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// Discrete mass of a periodic complex field, exposed for tests and reports.
pub fn discrete_mass(q: &[Complex64], dx: f64) -> f64 {
    dx * q.iter().map(|z| z.norm_sqr()).sum::<f64>()
}
