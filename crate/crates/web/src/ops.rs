use std::f64::consts::TAU;
use std::sync::Arc;

use liewave_core::data::{self, RandomParams};
use liewave_core::evolution::{evolve_homogeneous, theorem1_norms, CauchyData};
use liewave_core::group_spectra::{Dual, GroupSpec, RepIndex};
use liewave_core::propagator::eval_propagator_f64;
use liewave_core::Complex64;

pub const MAX_SAMPLES: usize = 20_000;
pub const MAX_RES: usize = 256;

fn times(t_max: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(format!("t_max must be positive, got {t_max}"));
    }
    if !(2..=MAX_SAMPLES).contains(&n) {
        return Err(format!("need 2..={MAX_SAMPLES} samples, got {n}"));
    }
    Ok((0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect())
}

pub fn propagator_curves(lambda2: f64, t_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(5 * n);
    for t in times(t_max, n)? {
        let k = eval_propagator_f64(t, lambda2).map_err(|e| e.to_string())?;
        out.extend([t, k.k0, k.k1, k.dk0, k.dk1]);
    }
    Ok(out)
}

fn spec(group: &str, bandlimit: u32) -> Result<GroupSpec, String> {
    let s = match group {
        "circle" => GroupSpec::unit_torus(1, bandlimit),
        "torus2" => GroupSpec::unit_torus(2, bandlimit),
        "su2" => GroupSpec::su2(bandlimit),
        "so3" => GroupSpec::so3(bandlimit),
        other => return Err(format!("unknown group {other:?}")),
    };
    let s = s.map_err(|e| e.to_string())?;
    if s.bandlimit() > 16 {
        return Err("bandlimit above 16 is too slow for the demo".into());
    }
    Ok(s)
}

fn random_data(spec: GroupSpec, seed: u64) -> Result<CauchyData, String> {
    let dual = Arc::new(Dual::new(spec));
    let f = |s| data::random_real(dual.clone(), RandomParams::new(s)).map_err(|e| e.to_string());
    CauchyData::unscaled(f(seed)?, f(seed + 1)?).map_err(|e| e.to_string())
}

pub fn decay_series(group: &str, bandlimit: u32, seed: u64, t_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let data = random_data(spec(group, bandlimit)?, seed)?;
    let mut out = Vec::with_capacity(5 * n);
    for t in times(t_max, n)? {
        let s = evolve_homogeneous(&data, t).map_err(|e| e.to_string())?;
        out.push(t);
        out.extend(theorem1_norms(&s));
    }
    Ok(out)
}

pub fn torus_snapshot(bandlimit: u32, seed: u64, t: f64, res: usize) -> Result<Vec<f64>, String> {
    if !(1..=MAX_RES).contains(&res) {
        return Err(format!("resolution must be in 1..={MAX_RES}, got {res}"));
    }
    if !(t >= 0.0) {
        return Err(format!("t must be nonnegative, got {t}"));
    }
    let data = random_data(spec("torus2", bandlimit)?, seed)?;
    let u = evolve_homogeneous(&data, t).map_err(|e| e.to_string())?.u;
    let modes: Vec<(f64, f64, Complex64)> = u
        .iter()
        .map(|(r, c)| {
            let RepIndex::Torus(k) = &r.index else { unreachable!() };
            (k[0] as f64, k[1] as f64, c[(0, 0)])
        })
        .collect();
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        let y = TAU * i as f64 / res as f64;
        for j in 0..res {
            let x = TAU * j as f64 / res as f64;
            let v: Complex64 = modes.iter().map(|&(a, b, c)| c * Complex64::from_polar(1.0, a * x + b * y)).sum();
            out.push(v.re);
        }
    }
    Ok(out)
}
