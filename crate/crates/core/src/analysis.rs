//! Decay-bound verification, the zero-mode (L^1 data) experiment and
//! Gagliardo-Nirenberg ratio checks.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::data::{self, RandomParams};
use crate::evolution::{evolve_homogeneous, theorem1_norms, CauchyData, EvolutionError};
use crate::group_spectra::{Dual, GroupSpec, SpecError};
use crate::harmonic::{
    forward_gft, h1_norm, inverse_gft, linf_dual_norm, lq_norm, plancherel_norm, Grid, GridField,
    HarmonicError,
};
use crate::par_collect;

/// Polynomial rates of the four energy estimates.
pub const RATES: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

/// Constant in `|u^(t, trivial)|^2 <= C (||u0||_1^2 + ||u1||_1^2)`, from
/// `|K0|, |K1| <= 1` and `(a + b)^2 <= 2 (a^2 + b^2)`.
pub const LINF_CHAIN_CONSTANT: f64 = 2.0;

/// Mean-zero data count as decayed once `||u(t_final)||_2` is below this.
pub const MEAN_ZERO_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("time list is empty")]
    EmptyTimes,
    #[error("times must be sorted and nonnegative")]
    BadTimes,
    #[error("Gagliardo-Nirenberg check needs dimension n >= 3, got {0}")]
    DimensionTooLow(usize),
    #[error("exponent q = {q} outside [2, {max}]")]
    ExponentOutOfRange { q: f64, max: f64 },
    #[error("ratio undefined for the zero field")]
    ZeroField,
    #[error("corpus must be nonempty")]
    EmptyCorpus,
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        *self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_pass() { "PASS" } else { "FAIL" })
    }
}

/// Knobs of [`verify_decay_bounds_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayOptions {
    /// The empirical constant is read off `[0, calibration_end]`.
    pub calibration_end: f64,
    pub slack: f64,
    pub fit_window: (f64, f64),
    pub log_floor: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions {
            calibration_end: 1.0,
            slack: 1.01,
            fit_window: (5.0, 30.0),
            log_floor: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateCheck {
    pub name: &'static str,
    pub rate: f64,
    pub data_norm: f64,
    /// Max of the weighted ratio on the calibration window.
    pub calibration_max: f64,
    /// Max of the weighted ratio after it.
    pub late_max: f64,
    pub first: f64,
    pub last: f64,
    pub final_below_first: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub norms: [Vec<f64>; 4],
    pub rates: [f64; 4],
    pub ratios: [Vec<f64>; 4],
    pub data_norms: [f64; 4],
    pub estimates: Vec<EstimateCheck>,
    /// Least-squares exponential rates of each norm over the fit window.
    pub fitted_rates: [Option<f64>; 4],
    pub delta1: Option<f64>,
}

impl DecayReport {
    pub fn pass(&self) -> bool {
        self.estimates.iter().all(|e| e.verdict.is_pass())
    }

    /// The three non-L^2 norms decay at rate at least `delta1 - tol` (norms
    /// that are already below the log floor count as decayed).
    pub fn exponential_tail_ok(&self, tol: f64) -> Option<bool> {
        let d = self.delta1?;
        Some(
            self.fitted_rates[1..]
                .iter()
                .all(|r| r.is_none_or(|r| r >= d - tol)),
        )
    }
}

const ESTIMATE_NAMES: [&str; 4] = [
    "||u||",
    "||(-L)^{1/2} u||",
    "||u_t||",
    "||(-L)^{1/2} u_t||",
];

/// Least-squares slope of `ln max(v, floor)` over `times` in `window`,
/// returned as a decay rate (minus the slope). `None` if fewer than two
/// samples fall in the window or the series starts below the floor.
pub fn fit_decay_rate(times: &[f64], values: &[f64], window: (f64, f64), floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(&t, &v)| (t, v))
        .collect();
    if pts.len() < 2 || pts[0].1 < floor {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.max(floor).ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, v) in &pts {
        sxy += (t - mt) * (v.max(floor).ln() - my);
        sxx += (t - mt) * (t - mt);
    }
    Some(-sxy / sxx)
}

pub fn verify_decay_bounds(data: &CauchyData, times: &[f64]) -> Result<DecayReport, AnalysisError> {
    verify_decay_bounds_with(data, times, &DecayOptions::default())
}

/// Weighted ratios `r_i(t) = norm_i(t) (1 + t)^{rate_i} / data_norm_i`; an
/// estimate passes when the ratio after the calibration window stays below
/// `slack` times its maximum on the window.
pub fn verify_decay_bounds_with(
    data: &CauchyData,
    times: &[f64],
    opts: &DecayOptions,
) -> Result<DecayReport, AnalysisError> {
    if times.is_empty() {
        return Err(AnalysisError::EmptyTimes);
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(AnalysisError::BadTimes);
    }
    let per_time = par_collect(times.len(), |i| {
        evolve_homogeneous(data, times[i]).map(|s| theorem1_norms(&s))
    })?;
    let mut norms: [Vec<f64>; 4] = Default::default();
    for n in &per_time {
        for i in 0..4 {
            norms[i].push(n[i]);
        }
    }
    let eps = data.epsilon;
    let l2_0 = eps * plancherel_norm(&data.u0);
    let l2_1 = eps * plancherel_norm(&data.u1);
    let h1_0 = eps * h1_norm(&data.u0);
    let h1_1 = eps * h1_norm(&data.u1);
    let data_norms = [l2_0 + l2_1, h1_0 + l2_1, h1_0 + l2_1, h1_0 + h1_1];
    let mut ratios: [Vec<f64>; 4] = Default::default();
    let mut estimates = Vec::with_capacity(4);
    for i in 0..4 {
        ratios[i] = times
            .iter()
            .zip(&norms[i])
            .map(|(t, n)| {
                if data_norms[i] > 0.0 {
                    n * (1.0 + t).powf(RATES[i]) / data_norms[i]
                } else {
                    0.0
                }
            })
            .collect();
        let (mut cal, mut late) = (0.0f64, 0.0f64);
        for (t, r) in times.iter().zip(&ratios[i]) {
            if *t <= opts.calibration_end {
                cal = cal.max(*r);
            } else {
                late = late.max(*r);
            }
        }
        let first = ratios[i][0];
        let last = *ratios[i].last().unwrap();
        estimates.push(EstimateCheck {
            name: ESTIMATE_NAMES[i],
            rate: RATES[i],
            data_norm: data_norms[i],
            calibration_max: cal,
            late_max: late,
            first,
            last,
            final_below_first: last < first,
            verdict: Verdict::from_bool(late <= opts.slack * cal),
        });
    }
    let fitted_rates = [0, 1, 2, 3].map(|i| fit_decay_rate(times, &norms[i], opts.fit_window, opts.log_floor));
    let delta1 = data.dual().gaps().ok().map(|g| g.delta1_f64());
    Ok(DecayReport {
        times: times.to_vec(),
        norms,
        rates: RATES,
        ratios,
        data_norms,
        estimates,
        fitted_rates,
        delta1,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct L1Report {
    pub group: String,
    pub delta1: f64,
    pub times: Vec<f64>,
    /// `||u(t)||_2` for `u0 = u1 = 1`.
    pub constant_norms: Vec<f64>,
    pub constant_final: f64,
    /// `|mean(u0) + mean(u1)|`.
    pub constant_limit: f64,
    pub constant_verdict: Verdict,
    /// `||u(t)||_2` for mean-zero `u0 = u1` of unit L^1 norm.
    pub mean_zero_norms: Vec<f64>,
    pub mean_zero_final: f64,
    /// Log-linear fit over the fit window; informational, since resonant
    /// modes carry a `(1 + t)` prefactor that lowers the fitted rate.
    pub mean_zero_rate: Option<f64>,
    /// `mean_zero_rate >= delta1 - 0.05`.
    pub mean_zero_rate_ok: bool,
    /// `||u(t_final)||_2 < MEAN_ZERO_THRESHOLD`.
    pub mean_zero_verdict: Verdict,
    pub linf_samples: usize,
    /// Max over random data and times of
    /// `|u^(t, trivial)|^2 / (||u0||_1^2 + ||u1||_1^2)`.
    pub linf_max_ratio: f64,
    pub linf_constant: f64,
    /// `||f^||_{l^inf} <= ||f||_{L^1}` held for every sampled datum.
    pub linf_hausdorff_young_ok: bool,
    pub linf_verdict: Verdict,
}

impl L1Report {
    pub fn pass(&self) -> bool {
        self.constant_verdict.is_pass() && self.mean_zero_verdict.is_pass() && self.linf_verdict.is_pass()
    }
}

/// Knobs of [`l1_no_improvement_experiment_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Options {
    pub t_final: f64,
    pub n_times: usize,
    pub fit_window: (f64, f64),
    pub random_samples: usize,
    pub seed: u64,
    pub oversample: f64,
}

impl Default for L1Options {
    fn default() -> Self {
        L1Options {
            t_final: 30.0,
            n_times: 301,
            fit_window: (5.0, 30.0),
            random_samples: 50,
            seed: 2024,
            oversample: 4.0,
        }
    }
}

pub fn l1_no_improvement_experiment(spec: &GroupSpec) -> Result<L1Report, AnalysisError> {
    l1_no_improvement_experiment_with(spec, &L1Options::default())
}

/// Non-decay of data with nonzero mean versus exponential decay of mean-zero
/// data with the same L^1 norm, plus the trivial-mode bound by L^1 norms.
pub fn l1_no_improvement_experiment_with(spec: &GroupSpec, opts: &L1Options) -> Result<L1Report, AnalysisError> {
    let dual = Arc::new(Dual::new(spec.clone()));
    let delta1 = dual.gaps()?.delta1_f64();
    let times: Vec<f64> = (0..opts.n_times)
        .map(|i| opts.t_final * i as f64 / (opts.n_times.max(2) - 1) as f64)
        .collect();
    let series = |cd: &CauchyData| -> Result<Vec<f64>, AnalysisError> {
        Ok(par_collect(times.len(), |i| {
            evolve_homogeneous(cd, times[i]).map(|s| theorem1_norms(&s)[0])
        })?)
    };

    let one = data::constant(dual.clone(), 1.0);
    let constant = CauchyData::unscaled(one.clone(), one)?;
    let constant_norms = series(&constant)?;
    let z = dual.trivial_position();
    let constant_limit = (constant.u0.coeffs()[z][(0, 0)] + constant.u1.coeffs()[z][(0, 0)]).norm();
    let constant_final = *constant_norms.last().unwrap();
    let constant_verdict = Verdict::from_bool(constant_limit > 0.0 && (constant_final - constant_limit).abs() < 1e-10);

    let g = data::mean_zero_unit_l1(dual.clone())?;
    let mean_zero = CauchyData::unscaled(g.clone(), g)?;
    let mean_zero_norms = series(&mean_zero)?;
    let mean_zero_final = *mean_zero_norms.last().unwrap();
    let mean_zero_rate = fit_decay_rate(&times, &mean_zero_norms, opts.fit_window, 1e-14);
    let mean_zero_rate_ok = mean_zero_rate.is_some_and(|r| r >= delta1 - 0.05);
    let mean_zero_verdict = Verdict::from_bool(mean_zero_final < MEAN_ZERO_THRESHOLD);

    let grid = Grid::build_with_dual(dual.clone(), opts.oversample)?;
    let checks = par_collect(opts.random_samples, |i| -> Result<(f64, bool), AnalysisError> {
        let seed = opts.seed.wrapping_add(2 * i as u64);
        let u0 = data::random_real(dual.clone(), RandomParams::new(seed))?;
        let u1 = data::random_real(dual.clone(), RandomParams::new(seed + 1))?;
        let n0 = lq_norm(&inverse_gft(&u0, &grid)?, 1.0)?;
        let n1 = lq_norm(&inverse_gft(&u1, &grid)?, 1.0)?;
        let hy = linf_dual_norm(&u0) <= n0 + 1e-10 && linf_dual_norm(&u1) <= n1 + 1e-10;
        let cd = CauchyData::unscaled(u0, u1)?;
        let mut worst: f64 = 0.0;
        for &t in &times {
            let s = evolve_homogeneous(&cd, t)?;
            worst = worst.max(s.u.coeffs()[z][(0, 0)].norm_sqr() / (n0 * n0 + n1 * n1));
        }
        Ok((worst, hy))
    })?;
    let linf_max_ratio = checks.iter().map(|c| c.0).fold(0.0, f64::max);
    let linf_hausdorff_young_ok = checks.iter().all(|c| c.1);
    Ok(L1Report {
        group: spec.name().to_string(),
        delta1,
        times,
        constant_norms,
        constant_final,
        constant_limit,
        constant_verdict,
        mean_zero_norms,
        mean_zero_final,
        mean_zero_rate,
        mean_zero_rate_ok,
        mean_zero_verdict,
        linf_samples: opts.random_samples,
        linf_max_ratio,
        linf_constant: LINF_CHAIN_CONSTANT,
        linf_hausdorff_young_ok,
        linf_verdict: Verdict::from_bool(linf_hausdorff_young_ok && linf_max_ratio <= LINF_CHAIN_CONSTANT),
    })
}

/// `theta(n, q) = n (1/2 - 1/q)`.
pub fn gn_theta(n: usize, q: f64) -> f64 {
    n as f64 * (0.5 - 1.0 / q)
}

/// Largest admissible `q = 2n/(n-2)`.
pub fn gn_max_exponent(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GnRatio {
    pub q: f64,
    pub theta: f64,
    pub lq: f64,
    pub h1: f64,
    pub l2: f64,
    /// `||f||_q / (||f||_{H^1}^theta ||f||_2^{1 - theta})`.
    pub ratio: f64,
}

/// Gagliardo-Nirenberg ratio of a grid field; the grid must be exact for the
/// field's bandlimit.
pub fn gn_ratio_check(f: &GridField, q: f64) -> Result<GnRatio, AnalysisError> {
    let n = f.spec().n_topological();
    if n < 3 {
        return Err(AnalysisError::DimensionTooLow(n));
    }
    let max = gn_max_exponent(n);
    if !(q >= 2.0 && q <= max) {
        return Err(AnalysisError::ExponentOutOfRange { q, max });
    }
    let coeffs = forward_gft(f)?;
    let lq = lq_norm(f, q)?;
    let h1 = h1_norm(&coeffs);
    let l2 = plancherel_norm(&coeffs);
    if !(l2 > 0.0) {
        return Err(AnalysisError::ZeroField);
    }
    let theta = gn_theta(n, q);
    Ok(GnRatio {
        q,
        theta,
        lq,
        h1,
        l2,
        ratio: lq / (h1.powf(theta) * l2.powf(1.0 - theta)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GnCorpus {
    pub bandlimit: u32,
    pub q: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
}

/// GN ratios of `size` random real fields with seeds `seed..seed + size`.
///
/// Random fields are truncation consistent, so corpora at `B` and `2B` with
/// the same seeds differ only by the added high modes.
pub fn gn_corpus_max(
    spec: &GroupSpec,
    q: f64,
    size: usize,
    seed: u64,
    decay: f64,
    oversample: f64,
) -> Result<GnCorpus, AnalysisError> {
    if size == 0 {
        return Err(AnalysisError::EmptyCorpus);
    }
    let dual = Arc::new(Dual::new(spec.clone()));
    let grid = Grid::build_with_dual(dual.clone(), oversample)?;
    let ratios = par_collect(size, |i| -> Result<f64, AnalysisError> {
        let params = RandomParams {
            seed: seed + i as u64,
            decay,
            normalize: true,
        };
        let f = data::random_real(dual.clone(), params)?;
        Ok(gn_ratio_check(&inverse_gft(&f, &grid)?, q)?.ratio)
    })?;
    Ok(GnCorpus {
        bandlimit: spec.bandlimit(),
        q,
        max_ratio: ratios.iter().copied().fold(0.0, f64::max),
        ratios,
    })
}

/// Constant on the grid, `f = c`.
pub fn constant_grid_field(grid: &Arc<Grid>, c: f64) -> GridField {
    GridField::from_fn(grid.clone(), |_| Complex64::new(c, 0.0))
}
