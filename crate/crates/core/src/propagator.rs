//! Fundamental multipliers `K0(t, lambda^2)`, `K1(t, lambda^2)`.
//!
//! Each matrix entry of `u^(t, xi)` solves
//! `y'' + (1 + lambda^2) y' + lambda^2 y = 0`, whose characteristic roots are
//! `-1` and `-lambda^2`. `K0` is the solution with data `(1, 0)` and `K1` the
//! one with data `(0, 1)`:
//!
//! ```text
//! lambda^2 != 1:  K0 = (e^{-lambda^2 t} - lambda^2 e^{-t}) / (1 - lambda^2)
//!                 K1 = (e^{-lambda^2 t} - e^{-t}) / (1 - lambda^2)
//! lambda^2 == 1:  K0 = (1 + t) e^{-t},  K1 = t e^{-t}
//! ```
//!
//! Near the double root the quotient cancels catastrophically, so for
//! `|1 - lambda^2| < RESONANCE_SWITCH` the code uses
//! `K1 = t e^{-t} phi1((1 - lambda^2) t)` with `phi1(z) = (e^z - 1)/z`.

use serde::Serialize;
use thiserror::Error;

use crate::group_spectra::{Eigenvalue, Region, SpectralGaps};

/// Width of the band around `lambda^2 = 1` handled by the `phi1` form.
pub const RESONANCE_SWITCH: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagatorError {
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("eigenvalue must be nonnegative, got {0}")]
    NegativeEigenvalue(f64),
    #[error("sample lambda^2 = {lambda2} does not lie in region {region:?}")]
    RegionMismatch { region: Region, lambda2: Eigenvalue },
    #[error("{0} is needed for this region's bound but is undefined")]
    MissingGap(&'static str),
    #[error("empty time grid or sample list")]
    EmptyGrid,
}

/// `K0`, `K1` and their first time derivatives at one `(t, lambda^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropagatorValues {
    pub k0: f64,
    pub k1: f64,
    pub dk0: f64,
    pub dk1: f64,
}

/// `phi1(z) = (e^z - 1) / z`, continuous at 0.
pub fn phi1(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else if z.abs() < 1e-5 {
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
    } else {
        z.exp_m1() / z
    }
}

/// Multipliers for an exact eigenvalue; the resonant branch is chosen by
/// exact comparison with 1.
pub fn eval_propagator(t: f64, lambda2: Eigenvalue) -> Result<PropagatorValues, PropagatorError> {
    if lambda2.is_negative() {
        return Err(PropagatorError::NegativeEigenvalue(lambda2.to_f64()));
    }
    check_time(t)?;
    if lambda2.is_one() {
        Ok(resonant(t))
    } else {
        Ok(off_resonance(t, lambda2.to_f64()))
    }
}

/// Multipliers for a floating eigenvalue; only `lambda2 == 1.0` takes the
/// resonant closed form.
pub fn eval_propagator_f64(t: f64, lambda2: f64) -> Result<PropagatorValues, PropagatorError> {
    if !(lambda2 >= 0.0) {
        return Err(PropagatorError::NegativeEigenvalue(lambda2));
    }
    check_time(t)?;
    if lambda2 == 1.0 {
        Ok(resonant(t))
    } else {
        Ok(off_resonance(t, lambda2))
    }
}

fn check_time(t: f64) -> Result<(), PropagatorError> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(PropagatorError::NegativeTime(t))
    }
}

fn resonant(t: f64) -> PropagatorValues {
    let e = (-t).exp();
    PropagatorValues {
        k0: (1.0 + t) * e,
        k1: t * e,
        dk0: -t * e,
        dk1: (1.0 - t) * e,
    }
}

fn off_resonance(t: f64, lambda2: f64) -> PropagatorValues {
    let gap = 1.0 - lambda2;
    let et = (-t).exp();
    let el = (-lambda2 * t).exp();
    if lambda2 == 0.0 {
        return PropagatorValues {
            k0: 1.0,
            k1: -(-t).exp_m1(),
            dk0: 0.0,
            dk1: et,
        };
    }
    // K0 = K1 + e^{-t}, dK0 = -lambda^2 K1 and dK1 = e^{-lambda^2 t} - K1 hold
    // exactly, so everything follows from a stable K1.
    let k1 = if gap.abs() < RESONANCE_SWITCH {
        t * et * phi1(gap * t)
    } else {
        // (e^{-lambda^2 t} - e^{-t}) / (1 - lambda^2) through expm1 keeps full
        // accuracy just outside the switch; the direct quotient is used once
        // e^{(1 - lambda^2) t} could overflow.
        let z = gap * t;
        if z < 700.0 {
            et * z.exp_m1() / gap
        } else {
            (el - et) / gap
        }
    };
    PropagatorValues {
        k0: k1 + et,
        k1,
        dk0: -lambda2 * k1,
        dk1: el - k1,
    }
}

/// One estimate checked by [`multiplier_bound_check`].
#[derive(Debug, Clone, Serialize)]
pub struct BoundEstimate {
    /// e.g. `"|K0| <= C e^{-delta1 t}"`
    pub name: String,
    /// `sup |K| / bound(t)` over the supplied grid.
    pub constant: f64,
    /// Same supremum over the grid with every time step halved.
    pub refined_constant: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub region: Region,
    pub estimates: Vec<BoundEstimate>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.estimates.iter().all(|e| e.pass)
    }
}

#[derive(Clone, Copy)]
enum Quantity {
    K0,
    K1,
    Dk0,
    Dk1,
}

impl Quantity {
    const ALL: [Quantity; 4] = [Quantity::K0, Quantity::K1, Quantity::Dk0, Quantity::Dk1];

    fn label(self) -> &'static str {
        match self {
            Quantity::K0 => "|K0|",
            Quantity::K1 => "|K1|",
            Quantity::Dk0 => "|dK0/dt|",
            Quantity::Dk1 => "|dK1/dt|",
        }
    }

    fn pick(self, v: &PropagatorValues) -> f64 {
        match self {
            Quantity::K0 => v.k0,
            Quantity::K1 => v.k1,
            Quantity::Dk0 => v.dk0,
            Quantity::Dk1 => v.dk1,
        }
    }
}

/// Empirical constants for the region-wise multiplier estimates
/// `1` (R1), `e^{-delta1 t}` (R2), `(1+t) e^{-t}` (R3), `e^{-t}` (R4), plus
/// the combined derivative bound `(1+t) e^{-delta1 t}` valid on every region.
///
/// An estimate passes when its constant is finite and grows by less than 1%
/// when the time grid is refined by inserting midpoints.
pub fn multiplier_bound_check(
    region: Region,
    gaps: &SpectralGaps,
    t_grid: &[f64],
    lambda2_samples: &[Eigenvalue],
) -> Result<BoundReport, PropagatorError> {
    if t_grid.is_empty() || lambda2_samples.is_empty() {
        return Err(PropagatorError::EmptyGrid);
    }
    for &l in lambda2_samples {
        let r = crate::group_spectra::region_of(l)
            .map_err(|_| PropagatorError::NegativeEigenvalue(l.to_f64()))?;
        if r != region {
            return Err(PropagatorError::RegionMismatch { region, lambda2: l });
        }
    }
    for &t in t_grid {
        check_time(t)?;
    }
    let delta1 = gaps.delta1_f64();
    let (bound_name, bound): (&str, Box<dyn Fn(f64) -> f64>) = match region {
        Region::R1 => ("1", Box::new(|_| 1.0)),
        Region::R2 => ("e^{-delta1 t}", Box::new(move |t: f64| (-delta1 * t).exp())),
        Region::R3 => ("(1+t) e^{-t}", Box::new(|t: f64| (1.0 + t) * (-t).exp())),
        Region::R4 => ("e^{-t}", Box::new(|t: f64| (-t).exp())),
    };
    if region == Region::R2 && gaps.delta2.is_none() {
        return Err(PropagatorError::MissingGap("delta2"));
    }
    let refined = refine(t_grid);
    let sup = |times: &[f64], q: Quantity, b: &dyn Fn(f64) -> f64| -> f64 {
        let mut worst: f64 = 0.0;
        for &l in lambda2_samples {
            for &t in times {
                let v = eval_propagator(t, l).expect("validated inputs");
                worst = worst.max(q.pick(&v).abs() / b(t));
            }
        }
        worst
    };
    let mut estimates = Vec::new();
    let mut push = |name: String, coarse: f64, fine: f64| {
        let pass = coarse.is_finite() && fine.is_finite() && fine <= coarse * 1.01 + 1e-300;
        estimates.push(BoundEstimate {
            name,
            constant: coarse,
            refined_constant: fine,
            pass,
        });
    };
    for q in Quantity::ALL {
        push(
            format!("{} <= C {}", q.label(), bound_name),
            sup(t_grid, q, bound.as_ref()),
            sup(&refined, q, bound.as_ref()),
        );
    }
    let combined = move |t: f64| (1.0 + t) * (-delta1 * t).exp();
    if region != Region::R1 {
        for q in [Quantity::Dk0, Quantity::Dk1] {
            push(
                format!("{} <= C (1+t) e^{{-delta1 t}}", q.label()),
                sup(t_grid, q, &combined),
                sup(&refined, q, &combined),
            );
        }
    }
    Ok(BoundReport { region, estimates })
}

fn refine(t_grid: &[f64]) -> Vec<f64> {
    let mut sorted = t_grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(2 * sorted.len());
    for w in sorted.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(sorted.last());
    out
}
