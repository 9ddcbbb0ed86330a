//! Homogeneous evolution, the Duhamel operator and Picard iteration.
//!
//! Data enter as `(eps u0, eps u1)`. The linear solution is
//! `u^(t) = K0(t) eps u0^ + K1(t) eps u1^` per representation; with a forcing
//! `F(s)` the mild solution adds `int_0^t K1(t - s) F^(s) ds` and its time
//! derivative adds the same integral with `dK1` (since `K1(0) = 0`).

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::group_spectra::{Dual, Eigenvalue, GroupSpec};
use crate::harmonic::{forward_gft, inverse_gft, Grid, HarmonicError, SpectralField};
use crate::propagator::{eval_propagator, PropagatorError, PropagatorValues};
use crate::par_collect;
use crate::quadrature::gauss_legendre;

/// Gauss-Legendre nodes per time panel.
pub const NODES_PER_PANEL: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolutionError {
    #[error("fields live on different group specifications")]
    SpecMismatch,
    #[error("epsilon must be finite and nonnegative, got {0}")]
    InvalidEpsilon(f64),
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("invalid semilinear configuration: {0}")]
    InvalidConfig(String),
    #[error("forcing covers [0, {horizon}] but t = {t} was requested")]
    InsufficientForcing { horizon: f64, t: f64 },
    #[error("forcing history has {got} samples, time grid needs {expected}")]
    ForcingLength { expected: usize, got: usize },
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
}

/// Initial data `u(0) = eps u0`, `u_t(0) = eps u1`.
#[derive(Debug, Clone)]
pub struct CauchyData {
    pub u0: SpectralField,
    pub u1: SpectralField,
    pub epsilon: f64,
}

impl CauchyData {
    pub fn new(u0: SpectralField, u1: SpectralField, epsilon: f64) -> Result<Self, EvolutionError> {
        if !u0.same_spec(&u1) {
            return Err(EvolutionError::SpecMismatch);
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(EvolutionError::InvalidEpsilon(epsilon));
        }
        Ok(CauchyData { u0, u1, epsilon })
    }

    /// `epsilon = 1`.
    pub fn unscaled(u0: SpectralField, u1: SpectralField) -> Result<Self, EvolutionError> {
        Self::new(u0, u1, 1.0)
    }

    pub fn dual(&self) -> &Arc<Dual> {
        self.u0.dual()
    }

    pub fn spec(&self) -> &GroupSpec {
        self.u0.spec()
    }
}

/// `(t, u^(t), d/dt u^(t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub t: f64,
    pub u: SpectralField,
    pub du: SpectralField,
}

impl EvolutionState {
    /// Difference of the field parts; the time is taken from `self`.
    pub fn diff(&self, other: &EvolutionState) -> Result<EvolutionState, EvolutionError> {
        Ok(EvolutionState {
            t: self.t,
            u: self.u.sub(&other.u)?,
            du: self.du.sub(&other.du)?,
        })
    }
}

fn eigenvalues(dual: &Dual) -> Vec<Eigenvalue> {
    dual.iter().map(|r| r.eigenvalue).collect()
}

fn propagators(dual: &Dual, t: f64) -> Result<Vec<PropagatorValues>, EvolutionError> {
    eigenvalues(dual)
        .into_iter()
        .map(|l| eval_propagator(t, l).map_err(EvolutionError::from))
        .collect()
}

/// Exact solution of the truncated linear system at time `t`.
pub fn evolve_homogeneous(data: &CauchyData, t: f64) -> Result<EvolutionState, EvolutionError> {
    if !(t >= 0.0) {
        return Err(EvolutionError::NegativeTime(t));
    }
    let k = propagators(data.dual(), t)?;
    let eps = Complex64::new(data.epsilon, 0.0);
    let mut u = SpectralField::zeros(data.dual().clone());
    let mut du = SpectralField::zeros(data.dual().clone());
    for (i, kv) in k.iter().enumerate() {
        let a = &data.u0.coeffs()[i];
        let b = &data.u1.coeffs()[i];
        u.coeffs_mut()[i] = a * (eps * kv.k0) + b * (eps * kv.k1);
        du.coeffs_mut()[i] = a * (eps * kv.dk0) + b * (eps * kv.dk1);
    }
    Ok(EvolutionState { t, u, du })
}

fn weighted_norms(field: &SpectralField) -> (f64, f64) {
    let mut plain = 0.0;
    let mut grad = 0.0;
    for (r, c) in field.iter() {
        let e: f64 = c.iter().map(|z| z.norm_sqr()).sum::<f64>() * r.dim as f64;
        plain += e;
        grad += e * r.eigenvalue.to_f64();
    }
    (plain.sqrt(), grad.sqrt())
}

/// `[||u||, ||(-L)^{1/2} u||, ||u_t||, ||(-L)^{1/2} u_t||]`, all L^2.
pub fn theorem1_norms(state: &EvolutionState) -> [f64; 4] {
    let (u, gu) = weighted_norms(&state.u);
    let (du, gdu) = weighted_norms(&state.du);
    [u, gu, du, gdu]
}

/// Sup over the samples of the sum of the four energy norms; 0 for an empty
/// trajectory.
pub fn xt_norm(trajectory: &[EvolutionState]) -> f64 {
    trajectory
        .iter()
        .map(|s| theorem1_norms(s).iter().sum::<f64>())
        .fold(0.0, f64::max)
}

/// Truncated projection of `|u|^p`, evaluated pseudo-spectrally on `grid`.
pub fn apply_nonlinearity(u: &SpectralField, p: f64, grid: &Arc<Grid>) -> Result<SpectralField, EvolutionError> {
    let samples = inverse_gft(u, grid)?;
    let powered = samples.map(|z| Complex64::new(z.norm().powf(p), 0.0));
    Ok(forward_gft(&powered)?)
}

/// Composite Gauss-Legendre time grid on `[0, T]`.
///
/// Samples are stored panel by panel: `t = 0`, then for every panel its four
/// Gauss nodes followed by its right endpoint, `5 n + 1` samples in total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    t_final: f64,
    panels: usize,
    // reference nodes on [0, 1] and their weights (summing to 1)
    ref_nodes: Vec<f64>,
    ref_weights: Vec<f64>,
}

impl TimeGrid {
    pub fn new(t_final: f64, panels: usize) -> Result<Self, EvolutionError> {
        if !(t_final > 0.0 && t_final.is_finite()) || panels == 0 {
            return Err(EvolutionError::InvalidConfig(format!(
                "time grid needs T > 0 and at least one panel (T = {t_final}, panels = {panels})"
            )));
        }
        let (x, w) = gauss_legendre(NODES_PER_PANEL);
        Ok(TimeGrid {
            t_final,
            panels,
            ref_nodes: x.iter().map(|x| 0.5 * (1.0 + x)).collect(),
            ref_weights: w.iter().map(|w| 0.5 * w).collect(),
        })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn panel_width(&self) -> f64 {
        self.t_final / self.panels as f64
    }

    /// Left endpoint of panel `j`.
    pub fn panel_start(&self, j: usize) -> f64 {
        self.t_final * j as f64 / self.panels as f64
    }

    /// Gauss nodes of all panels, in time order.
    pub fn quadrature_nodes(&self) -> Vec<f64> {
        (0..self.panels)
            .flat_map(|j| {
                let a = self.panel_start(j);
                let h = self.panel_width();
                self.ref_nodes.iter().map(move |x| a + h * x)
            })
            .collect()
    }

    /// Quadrature weights matching [`Self::quadrature_nodes`].
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let h = self.panel_width();
        (0..self.panels)
            .flat_map(|_| self.ref_weights.iter().map(move |w| h * w))
            .collect()
    }

    /// All trajectory sample times.
    pub fn samples(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(5 * self.panels + 1);
        out.push(0.0);
        let h = self.panel_width();
        for j in 0..self.panels {
            let a = self.panel_start(j);
            out.extend(self.ref_nodes.iter().map(|x| a + h * x));
            out.push(if j + 1 == self.panels { self.t_final } else { self.panel_start(j + 1) });
        }
        out
    }
}

/// Forcing `F^(s)` at the Gauss nodes of a [`TimeGrid`].
#[derive(Debug, Clone)]
pub struct ForcingHistory {
    pub grid: TimeGrid,
    pub values: Vec<SpectralField>,
}

impl ForcingHistory {
    pub fn new(grid: TimeGrid, values: Vec<SpectralField>) -> Result<Self, EvolutionError> {
        let expected = grid.panels * NODES_PER_PANEL;
        if values.len() != expected {
            return Err(EvolutionError::ForcingLength {
                expected,
                got: values.len(),
            });
        }
        if values.windows(2).any(|w| !w[0].same_spec(&w[1])) {
            return Err(EvolutionError::SpecMismatch);
        }
        Ok(ForcingHistory { grid, values })
    }

    /// Forcing sampled from a closure of time.
    pub fn from_fn(
        grid: TimeGrid,
        mut f: impl FnMut(f64) -> SpectralField,
    ) -> Result<Self, EvolutionError> {
        let values = grid.quadrature_nodes().into_iter().map(&mut f).collect();
        Self::new(grid, values)
    }

    pub fn zero(grid: TimeGrid, dual: Arc<Dual>) -> Self {
        let n = grid.panels * NODES_PER_PANEL;
        ForcingHistory {
            grid,
            values: vec![SpectralField::zeros(dual); n],
        }
    }
}

/// Lagrange basis through the reference nodes, evaluated at `x` in `[0, 1]`.
fn lagrange_weights(nodes: &[f64], x: f64) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| (x - xj) / (nodes[i] - xj))
                .product()
        })
        .collect()
}

/// Adds `w K1(t - s) F` into `u` and `w dK1(t - s) F` into `du`.
fn accumulate(u: &mut SpectralField, du: &mut SpectralField, f: &SpectralField, k: &[PropagatorValues], w: f64) {
    for (i, kv) in k.iter().enumerate() {
        let c = &f.coeffs()[i];
        u.coeffs_mut()[i].scaled_add(Complex64::new(w * kv.k1, 0.0), c);
        du.coeffs_mut()[i].scaled_add(Complex64::new(w * kv.dk1, 0.0), c);
    }
}

/// Mild solution at time `t` for a prescribed forcing history.
///
/// Whole panels below `t` use their Gauss nodes directly; the partial panel
/// containing `t` uses a Gauss rule on `[tau_j, t]` with the forcing
/// interpolated by the cubic through that panel's four samples.
pub fn duhamel_apply(
    data: &CauchyData,
    forcing: &ForcingHistory,
    t: f64,
) -> Result<EvolutionState, EvolutionError> {
    let grid = &forcing.grid;
    let horizon = grid.t_final;
    if !(t >= 0.0) {
        return Err(EvolutionError::NegativeTime(t));
    }
    if t > horizon * (1.0 + 1e-12) {
        return Err(EvolutionError::InsufficientForcing { horizon, t });
    }
    if let Some(f) = forcing.values.first() {
        if !f.same_spec(&data.u0) {
            return Err(EvolutionError::SpecMismatch);
        }
    }
    let mut state = evolve_homogeneous(data, t)?;
    let dual = data.dual();
    let h = grid.panel_width();
    let full = (((t / h) * (1.0 + 1e-13)).floor() as usize).min(grid.panels);
    for j in 0..full {
        let a = grid.panel_start(j);
        for (i, (&x, &w)) in grid.ref_nodes.iter().zip(&grid.ref_weights).enumerate() {
            let s = a + h * x;
            let k = propagators(dual, (t - s).max(0.0))?;
            accumulate(&mut state.u, &mut state.du, &forcing.values[j * NODES_PER_PANEL + i], &k, h * w);
        }
    }
    let a = grid.panel_start(full);
    let rest = t - a;
    if full < grid.panels && rest > 1e-14 * h {
        let panel = &forcing.values[full * NODES_PER_PANEL..(full + 1) * NODES_PER_PANEL];
        for (&x, &w) in grid.ref_nodes.iter().zip(&grid.ref_weights) {
            let s = a + rest * x;
            let lw = lagrange_weights(&grid.ref_nodes, (s - a) / h);
            let mut f = SpectralField::zeros(dual.clone());
            for (li, fi) in lw.iter().zip(panel) {
                f.add_scaled(fi, Complex64::new(*li, 0.0))?;
            }
            let k = propagators(dual, t - s)?;
            accumulate(&mut state.u, &mut state.du, &f, &k, rest * w);
        }
    }
    Ok(state)
}

/// Parameters of the semilinear solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemilinearConfig {
    pub p: f64,
    pub t_final: f64,
    pub n_time_steps: usize,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub oversample: f64,
    pub amplitude_ceiling: f64,
}

impl Default for SemilinearConfig {
    fn default() -> Self {
        SemilinearConfig {
            p: 2.0,
            t_final: 0.5,
            n_time_steps: 10,
            picard_tol: 1e-12,
            picard_max_iters: 50,
            oversample: 2.0,
            amplitude_ceiling: 1e6,
        }
    }
}

impl SemilinearConfig {
    /// Checks the preconditions; on tori, exponents outside the local
    /// existence range only produce a warning.
    pub fn validate(&self, spec: &GroupSpec) -> Result<(), EvolutionError> {
        let bad = |m: String| Err(EvolutionError::InvalidConfig(m));
        if !(self.p > 1.0 && self.p.is_finite()) {
            return bad(format!("p must be > 1, got {}", self.p));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("T must be > 0, got {}", self.t_final));
        }
        if self.n_time_steps == 0 {
            return bad("n_time_steps must be positive".into());
        }
        if !(self.picard_tol > 0.0) {
            return bad(format!("picard_tol must be > 0, got {}", self.picard_tol));
        }
        if self.picard_max_iters == 0 {
            return bad("picard_max_iters must be positive".into());
        }
        if !(self.oversample >= 2.0 && self.oversample.is_finite()) {
            return bad(format!("oversample must be >= 2, got {}", self.oversample));
        }
        if !(self.amplitude_ceiling > 0.0) {
            return bad(format!("amplitude_ceiling must be > 0, got {}", self.amplitude_ceiling));
        }
        let n = spec.n_topological();
        if spec.is_torus() {
            if n < 3 {
                log::warn!(
                    "{}-dimensional torus: local existence is only established for n >= 3",
                    n
                );
            } else if self.p > n as f64 / (n as f64 - 2.0) {
                log::warn!("p = {} exceeds n/(n-2) = {} on T^{}", self.p, n as f64 / (n as f64 - 2.0), n);
            }
        } else if self.p > 3.0 {
            return bad(format!("p must be <= 3 on {}, got {}", spec.name(), self.p));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PicardStatus {
    Converged,
    /// Successive differences stopped shrinking.
    NonContraction,
    MaxIterations,
    /// The iterate exceeded the amplitude ceiling or became non-finite.
    BlowUp,
}

impl PicardStatus {
    pub fn is_converged(&self) -> bool {
        matches!(self, PicardStatus::Converged)
    }
}

#[derive(Debug, Clone)]
pub struct PicardReport {
    pub status: PicardStatus,
    pub iterations: usize,
    /// X(T) distance between successive iterates.
    pub differences: Vec<f64>,
    /// Max ratio of successive differences above the roundoff floor.
    pub contraction_factor: Option<f64>,
    /// X(T) distance between the returned trajectory and its image under N.
    pub fixed_point_residual: Option<f64>,
    pub time_grid: TimeGrid,
    /// States at [`TimeGrid::samples`].
    pub trajectory: Vec<EvolutionState>,
    pub diagnostic: Option<String>,
}

impl PicardReport {
    pub fn final_state(&self) -> &EvolutionState {
        self.trajectory.last().expect("trajectory is never empty")
    }
}

struct Solver<'a> {
    data: &'a CauchyData,
    grid: TimeGrid,
    samples: Vec<f64>,
    nonlinear_grid: Arc<Grid>,
    p: f64,
}

impl Solver<'_> {
    /// Index of Gauss node `(panel j, node i)` inside the sample list.
    fn node_sample(j: usize, i: usize) -> usize {
        5 * j + 1 + i
    }

    fn forcing(&self, traj: &[EvolutionState]) -> Result<ForcingHistory, EvolutionError> {
        let n = self.grid.panels * NODES_PER_PANEL;
        let values = par_collect(n, |q| {
            let s = Self::node_sample(q / NODES_PER_PANEL, q % NODES_PER_PANEL);
            apply_nonlinearity(&traj[s].u, self.p, &self.nonlinear_grid)
        })?;
        ForcingHistory::new(self.grid.clone(), values)
    }

    /// `N u` on the sample grid.
    fn apply(&self, traj: &[EvolutionState]) -> Result<Vec<EvolutionState>, EvolutionError> {
        let forcing = self.forcing(traj)?;
        par_collect(self.samples.len(), |i| duhamel_apply(self.data, &forcing, self.samples[i]))
    }

    fn distance(a: &[EvolutionState], b: &[EvolutionState]) -> Result<f64, EvolutionError> {
        let diffs = a
            .iter()
            .zip(b)
            .map(|(x, y)| x.diff(y))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(xt_norm(&diffs))
    }
}

fn blown_up(traj: &[EvolutionState], ceiling: f64) -> bool {
    traj.iter().any(|s| {
        !s.u.is_finite() || !s.du.is_finite() || s.u.max_abs() > ceiling || s.du.max_abs() > ceiling
    })
}

/// Picard iteration `u_{k+1} = N u_k` started from the homogeneous solution.
///
/// Fails (as a status, not an error) on non-contraction, iteration budget
/// exhaustion or blow-up; only invalid inputs are errors.
pub fn picard_solve(data: &CauchyData, cfg: &SemilinearConfig) -> Result<PicardReport, EvolutionError> {
    cfg.validate(data.spec())?;
    let grid = TimeGrid::new(cfg.t_final, cfg.n_time_steps)?;
    let samples = grid.samples();
    let solver = Solver {
        data,
        nonlinear_grid: Grid::build_with_dual(data.dual().clone(), cfg.oversample)?,
        grid: grid.clone(),
        samples,
        p: cfg.p,
    };
    let mut current = solver
        .samples
        .iter()
        .map(|&t| evolve_homogeneous(data, t))
        .collect::<Result<Vec<_>, _>>()?;
    let scale = xt_norm(&current).max(f64::MIN_POSITIVE);
    // differences below this are roundoff and carry no contraction information
    let noise = 1e3 * f64::EPSILON * scale;

    let mut differences = Vec::new();
    let mut ratios: Vec<f64> = Vec::new();
    let mut status = PicardStatus::MaxIterations;
    let mut diagnostic = None;
    let mut iterations = 0;
    if blown_up(&current, cfg.amplitude_ceiling) {
        status = PicardStatus::BlowUp;
        diagnostic = Some("initial data exceed the amplitude ceiling".to_string());
    } else {
        while iterations < cfg.picard_max_iters {
            iterations += 1;
            let next = solver.apply(&current)?;
            if blown_up(&next, cfg.amplitude_ceiling) {
                status = PicardStatus::BlowUp;
                diagnostic = Some(format!(
                    "iterate {iterations} exceeded amplitude {:e}: possible blow-up, T too large",
                    cfg.amplitude_ceiling
                ));
                current = next;
                break;
            }
            let d = Solver::distance(&next, &current)?;
            if let Some(&prev) = differences.last() {
                if d > noise && prev > noise {
                    ratios.push(d / prev);
                }
            }
            differences.push(d);
            current = next;
            if d < cfg.picard_tol {
                status = PicardStatus::Converged;
                break;
            }
            if ratios.len() >= 2 && ratios[ratios.len() - 1] >= 1.0 && ratios[ratios.len() - 2] >= 1.0 {
                status = PicardStatus::NonContraction;
                diagnostic = Some(format!(
                    "successive differences grew by {:.3} and {:.3}: no contraction, T too large",
                    ratios[ratios.len() - 2],
                    ratios[ratios.len() - 1]
                ));
                break;
            }
        }
        if status == PicardStatus::MaxIterations {
            diagnostic = Some(format!(
                "no convergence to {:e} within {} iterations",
                cfg.picard_tol, cfg.picard_max_iters
            ));
        }
    }

    let contraction_factor = ratios.iter().copied().reduce(f64::max).or(if status.is_converged() {
        Some(0.0)
    } else {
        None
    });
    if status.is_converged() {
        if let Some(rho) = contraction_factor {
            if rho >= 1.0 {
                status = PicardStatus::NonContraction;
                diagnostic = Some(format!("converged, but contraction factor estimate {rho:.3} >= 1"));
            }
        }
    }
    let fixed_point_residual = if status.is_converged() {
        Some(Solver::distance(&solver.apply(&current)?, &current)?)
    } else {
        None
    };
    Ok(PicardReport {
        status,
        iterations,
        differences,
        contraction_factor,
        fixed_point_residual,
        time_grid: grid,
        trajectory: current,
        diagnostic,
    })
}
