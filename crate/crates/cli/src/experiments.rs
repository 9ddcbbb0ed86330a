//! The six experiments behind `liewave run`.

use std::collections::BTreeMap;
use std::sync::Arc;

use liewave_core::analysis::{
    constant_grid_field, gn_corpus_max, gn_ratio_check, l1_no_improvement_experiment_with,
    verify_decay_bounds_with, DecayOptions, L1Options, Verdict,
};
use liewave_core::data::{self, RandomParams};
use liewave_core::evolution::{evolve_homogeneous, picard_solve, theorem1_norms, xt_norm, PicardStatus};
use liewave_core::group_spectra::{Dual, Eigenvalue, Region};
use liewave_core::propagator::{eval_propagator, multiplier_bound_check};
use liewave_core::{forward_gft, inverse_gft, linf_dual_norm, lq_norm, plancherel_norm, Grid};
use serde_json::json;

use crate::config::{Experiment, LoadedConfig};
use crate::output::{num, Artifacts, Table, VerdictEntry};
use crate::{presets, CliError};

/// Identity defects below this count as exact.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Allowed relative change of the GN corpus maximum under `B -> 2B`.
pub const GN_STABILITY_TOL: f64 = 0.05;

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub verdicts: Vec<VerdictEntry>,
    pub results: serde_json::Value,
    pub artifacts: Artifacts,
    /// Set when the computation stopped on a numerical failure.
    pub abort: Option<String>,
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn verdict(&mut self, name: &str, ok: bool) {
        self.verdicts.push(VerdictEntry {
            name: name.to_string(),
            verdict: Verdict::from_bool(ok),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict.is_pass())
    }
}

pub fn linspace(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

pub fn run(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    match cfg.config.experiment {
        Experiment::PlancherelCheck => plancherel_check(cfg),
        Experiment::LinearDecay => linear_decay(cfg),
        Experiment::L1Experiment => l1_experiment(cfg),
        Experiment::Semilinear => semilinear(cfg),
        Experiment::GnCheck => gn_check(cfg),
        Experiment::MultiplierCheck => multiplier_check(cfg),
    }
}

fn plancherel_check(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    let p = &cfg.config.params;
    let grid = Grid::build(&cfg.spec, p.oversample.unwrap_or(1.0))?;
    let mut table = Table::new(
        "plancherel",
        &["seed", "grid_l2", "spectral_l2", "defect", "round_trip", "linf_dual", "l1"],
    );
    let (mut max_defect, mut max_round, mut max_imag) = (0.0f64, 0.0f64, 0.0f64);
    let mut linf_ok = true;
    for s in 0..p.samples.unwrap_or(100) as u64 {
        let params = RandomParams {
            seed: p.seed + s,
            decay: p.decay.unwrap_or(2.0),
            normalize: true,
        };
        let f_hat = data::random_real(grid.dual().clone(), params)?;
        let f = inverse_gft(&f_hat, &grid)?;
        let grid_l2 = lq_norm(&f, 2.0)?;
        let spectral = plancherel_norm(&f_hat);
        let round = forward_gft(&f)?.max_abs_diff(&f_hat)?;
        let linf = linf_dual_norm(&f_hat);
        let l1 = lq_norm(&f, 1.0)?;
        max_defect = max_defect.max((grid_l2 - spectral).abs());
        max_round = max_round.max(round);
        max_imag = max_imag.max(f.max_imag());
        linf_ok &= linf <= l1 + IDENTITY_TOL;
        table.push(vec![
            (p.seed + s).to_string(),
            num(grid_l2),
            num(spectral),
            num((grid_l2 - spectral).abs()),
            num(round),
            num(linf),
            num(l1),
        ]);
    }
    let mut out = Outcome::default();
    out.verdict("plancherel", max_defect < IDENTITY_TOL);
    out.verdict("round_trip", max_round < IDENTITY_TOL);
    out.verdict("linf_below_l1", linf_ok);
    out.results = json!({
        "grid_nodes": grid.len(),
        "max_defect": max_defect,
        "max_round_trip": max_round,
        "max_imag": max_imag,
        "tolerance": IDENTITY_TOL,
    });
    out.artifacts.tables.push(table);
    Ok(out)
}

fn linear_decay(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    let p = &cfg.config.params;
    let data = presets::cauchy_data(cfg)?;
    let times = linspace(p.t_max, p.n_times);
    let opts = DecayOptions {
        calibration_end: p.calibration_end,
        slack: p.slack,
        fit_window: (p.fit_window[0], p.fit_window[1]),
        log_floor: DecayOptions::default().log_floor,
    };
    let rep = verify_decay_bounds_with(&data, &times, &opts)?;
    let mut table = Table::new(
        "decay",
        &["t", "norm_u", "norm_grad_u", "norm_ut", "norm_grad_ut", "r1", "r2", "r3", "r4"],
    );
    for (i, t) in times.iter().enumerate() {
        let mut row = vec![*t];
        row.extend((0..4).map(|k| rep.norms[k][i]));
        row.extend((0..4).map(|k| rep.ratios[k][i]));
        table.push_nums(&row);
    }
    let mut out = Outcome::default();
    for (k, e) in rep.estimates.iter().enumerate() {
        out.verdict(&format!("estimate_{}", k + 1), e.verdict.is_pass());
    }
    out.results = json!({
        "estimates": rep.estimates,
        "fitted_rates": rep.fitted_rates,
        "delta1": rep.delta1,
        "data_norms": rep.data_norms,
        "exponential_tail_ok": rep.exponential_tail_ok(0.05),
    });
    out.artifacts.tables.push(table);
    if cfg.config.output.dump_coefficients {
        for (i, &t) in times.iter().enumerate().step_by(p.dump_stride) {
            let s = evolve_homogeneous(&data, t)?;
            out.artifacts.coefficients.push((format!("t{i:05}"), s.u));
        }
    }
    Ok(out)
}

fn l1_experiment(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    let p = &cfg.config.params;
    let opts = L1Options {
        t_final: p.t_max,
        n_times: p.n_times,
        fit_window: (p.fit_window[0], p.fit_window[1]),
        random_samples: p.samples.unwrap_or(50),
        seed: p.seed,
        oversample: p.oversample.unwrap_or(4.0),
    };
    let rep = l1_no_improvement_experiment_with(&cfg.spec, &opts)?;
    let mut table = Table::new("l1", &["t", "constant_data", "mean_zero_data"]);
    for i in 0..rep.times.len() {
        table.push_nums(&[rep.times[i], rep.constant_norms[i], rep.mean_zero_norms[i]]);
    }
    let mut out = Outcome::default();
    out.verdict("no_decay_constant_data", rep.constant_verdict.is_pass());
    out.verdict("decay_mean_zero_data", rep.mean_zero_verdict.is_pass());
    out.verdict("linf_chain", rep.linf_verdict.is_pass());
    out.results = json!({
        "delta1": rep.delta1,
        "constant_final": rep.constant_final,
        "constant_limit": rep.constant_limit,
        "mean_zero_final": rep.mean_zero_final,
        "mean_zero_rate": rep.mean_zero_rate,
        "mean_zero_rate_ok": rep.mean_zero_rate_ok,
        "linf_samples": rep.linf_samples,
        "linf_max_ratio": rep.linf_max_ratio,
        "linf_constant": rep.linf_constant,
        "linf_hausdorff_young_ok": rep.linf_hausdorff_young_ok,
    });
    out.artifacts.tables.push(table);
    Ok(out)
}

fn semilinear(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    let data = presets::cauchy_data(cfg)?;
    let solver = cfg.config.solver.to_config();
    let rep = picard_solve(&data, &solver)?;
    let mut out = Outcome::default();
    let mut diffs = Table::new("picard", &["iteration", "difference"]);
    for (k, d) in rep.differences.iter().enumerate() {
        diffs.push(vec![(k + 1).to_string(), num(*d)]);
    }
    let mut traj = Table::new("trajectory", &["t", "norm_u", "norm_grad_u", "norm_ut", "norm_grad_ut"]);
    for s in &rep.trajectory {
        let n = theorem1_norms(s);
        traj.push_nums(&[s.t, n[0], n[1], n[2], n[3]]);
    }
    out.verdict("converged", rep.status.is_converged());
    out.verdict("contraction", rep.contraction_factor.is_none_or(|r| r < 1.0));
    out.results = json!({
        "status": rep.status,
        "iterations": rep.iterations,
        "contraction_factor": rep.contraction_factor,
        "fixed_point_residual": rep.fixed_point_residual,
        "xt_norm": xt_norm(&rep.trajectory),
        "time_samples": rep.trajectory.len(),
    });
    out.diagnostic = rep.diagnostic.clone();
    if rep.status == PicardStatus::BlowUp {
        out.abort = rep.diagnostic.clone().or_else(|| Some("blow-up".into()));
    }
    out.artifacts.tables.push(diffs);
    out.artifacts.tables.push(traj);
    if cfg.config.output.dump_coefficients {
        for (i, s) in rep.trajectory.iter().enumerate().step_by(cfg.config.params.dump_stride) {
            out.artifacts.coefficients.push((format!("t{i:05}"), s.u.clone()));
        }
    }
    Ok(out)
}

fn gn_check(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    let p = &cfg.config.params;
    let (size, decay, os) = (p.samples.unwrap_or(100), p.decay.unwrap_or(3.0), p.oversample.unwrap_or(4.0));
    let spec2 = cfg.spec.with_bandlimit(2 * cfg.spec.bandlimit())?;
    let coarse = gn_corpus_max(&cfg.spec, p.q, size, p.seed, decay, os)?;
    let fine = gn_corpus_max(&spec2, p.q, size, p.seed, decay, os)?;
    let grid = Grid::build(&cfg.spec, os)?;
    let constant = gn_ratio_check(&constant_grid_field(&grid, 1.0), p.q)?;
    let growth = (fine.max_ratio - coarse.max_ratio) / coarse.max_ratio;
    let mut table = Table::new("gn", &["seed", "ratio_b", "ratio_2b"]);
    for (i, (a, b)) in coarse.ratios.iter().zip(&fine.ratios).enumerate() {
        table.push(vec![(p.seed + i as u64).to_string(), num(*a), num(*b)]);
    }
    let mut out = Outcome::default();
    out.verdict("constant_ratio", (constant.ratio - 1.0).abs() < 1e-12);
    out.verdict("corpus_stable", growth.abs() < GN_STABILITY_TOL);
    out.results = json!({
        "q": p.q,
        "theta": constant.theta,
        "constant_ratio": constant.ratio,
        "bandlimit": coarse.bandlimit,
        "max_ratio_b": coarse.max_ratio,
        "max_ratio_2b": fine.max_ratio,
        "relative_growth": growth,
        "decay": decay,
    });
    out.artifacts.tables.push(table);
    Ok(out)
}

fn multiplier_check(cfg: &LoadedConfig) -> Result<Outcome, CliError> {
    let p = &cfg.config.params;
    let dual = Arc::new(Dual::new(cfg.spec.clone()));
    let gaps = dual.gaps()?;
    let times = linspace(p.t_max, p.n_times);
    let mut by_region: BTreeMap<Region, Vec<Eigenvalue>> = BTreeMap::new();
    for r in dual.iter() {
        let list = by_region.entry(r.region).or_default();
        if !list.contains(&r.eigenvalue) {
            list.push(r.eigenvalue);
        }
    }
    let mut out = Outcome::default();
    let mut table = Table::new("multipliers", &["region", "estimate", "constant", "refined_constant", "verdict"]);
    let mut curves = Table::new("propagators", &["lambda2", "t", "k0", "k1", "dk0", "dk1"]);
    let mut reports = Vec::new();
    for (region, eigs) in &by_region {
        let rep = multiplier_bound_check(*region, &gaps, &times, eigs)?;
        for e in &rep.estimates {
            table.push(vec![
                region.name().into(),
                e.name.replace(',', ";"),
                num(e.constant),
                num(e.refined_constant),
                Verdict::from_bool(e.pass).to_string(),
            ]);
        }
        out.verdict(region.name(), rep.pass());
        reports.push(rep);
        for &l in eigs {
            for &t in &times {
                let k = eval_propagator(t, l)?;
                curves.push(vec![num(l.to_f64()), num(t), num(k.k0), num(k.k1), num(k.dk0), num(k.dk1)]);
            }
        }
    }
    out.results = json!({
        "delta1": gaps.delta1_f64(),
        "delta2": gaps.delta2.map(|d| d.to_f64()),
        "delta3": gaps.delta3.map(|d| d.to_f64()),
        "regions": reports,
    });
    out.artifacts.tables.push(table);
    out.artifacts.tables.push(curves);
    Ok(out)
}
