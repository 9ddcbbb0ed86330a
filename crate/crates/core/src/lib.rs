//! Spectral solver and verification harness for the viscoelastic damped wave
//! equation
//!
//! ```text
//! u_tt - L u + u_t - L u_t = f(u)
//! ```
//!
//! on the compact groups T^n, SU(2) and SO(3), where `L` is the
//! Laplace-Beltrami operator. Every representation of the (truncated) unitary
//! dual evolves independently under closed-form multipliers, so the linear
//! problem is solved exactly in frequency space; the semilinear problem with
//! `f(u) = |u|^p` is solved by Picard iteration on the Duhamel operator.
//!
//! Module map:
//!
//! * [`group_spectra`]: unitary dual, Laplace-Beltrami eigenvalues, regions.
//! * [`harmonic`]: quadrature grids, group Fourier transforms, norms.
//! * [`propagator`]: the multipliers `K0`, `K1` and their time derivatives.
//! * [`evolution`]: homogeneous evolution, Duhamel operator, Picard solver.
//! * [`analysis`]: decay-bound verification, zero-mode experiment,
//!   Gagliardo-Nirenberg ratio checks.
//! * [`data`]: initial-data presets shared by the CLI and the web demo.

pub mod analysis;
pub mod data;
pub mod evolution;
pub mod group_spectra;
pub mod harmonic;
pub mod propagator;
mod quadrature;

pub use num_complex::Complex64;

pub use analysis::{
    gn_corpus_max, gn_ratio_check, l1_no_improvement_experiment, verify_decay_bounds,
    DecayReport, GnRatio, L1Report, Verdict,
};
pub use evolution::{
    apply_nonlinearity, duhamel_apply, evolve_homogeneous, picard_solve, theorem1_norms,
    xt_norm, CauchyData, EvolutionError, EvolutionState, ForcingHistory, PicardReport,
    PicardStatus, SemilinearConfig, TimeGrid,
};
pub use group_spectra::{
    enumerate_dual, region_of, spectral_gaps, Dual, Eigenvalue, GroupKind, GroupSpec,
    Region, RepIndex, Representation, SpecError, SpectralGaps,
};
pub use harmonic::{
    forward_gft, inverse_gft, linf_dual_norm, lq_norm, plancherel_norm, sobolev_apply, Grid,
    GridField, HarmonicError, SpectralField,
};
pub use propagator::{
    eval_propagator, eval_propagator_f64, multiplier_bound_check, BoundReport, PropagatorError,
    PropagatorValues, RESONANCE_SWITCH,
};

/// Library version string echoed into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(feature = "parallel")]
pub(crate) fn par_collect<T: Send, E: Send>(
    n: usize,
    f: impl Fn(usize) -> Result<T, E> + Sync + Send,
) -> Result<Vec<T>, E> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_collect<T, E>(n: usize, f: impl Fn(usize) -> Result<T, E>) -> Result<Vec<T>, E> {
    (0..n).map(f).collect()
}
