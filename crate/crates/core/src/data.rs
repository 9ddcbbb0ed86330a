//! Initial-data presets.
//!
//! All presets produce real-valued fields. Random fields draw the
//! coefficients of each representation from a generator keyed on
//! `(seed, index)`, so a field at bandlimit `B` is the truncation of the field
//! with the same seed at any larger bandlimit.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::group_spectra::{Dual, GroupKind, RepIndex};
use crate::harmonic::{forward_gft, inverse_gft, lq_norm, plancherel_norm, Grid, HarmonicError, SpectralField};

/// Oversample factor for the quadrature L^1 norm used to rescale presets.
const L1_OVERSAMPLE: f64 = 8.0;

pub fn zero(dual: Arc<Dual>) -> SpectralField {
    SpectralField::zeros(dual)
}

/// `f = c`.
pub fn constant(dual: Arc<Dual>, c: f64) -> SpectralField {
    SpectralField::constant(dual, Complex64::new(c, 0.0))
}

/// Real single-mode field with unit L^2 norm.
///
/// Tori: `sqrt(2) cos(k . theta)` (the constant 1 for `k = 0`).
/// SU(2)/SO(3): the character `Tr xi(x)`, whose coefficient is `I / d_xi`.
pub fn single_mode(dual: Arc<Dual>, index: &RepIndex) -> Result<SpectralField, HarmonicError> {
    let pos = dual.position(index).ok_or(HarmonicError::SpecMismatch)?;
    let mut f = SpectralField::zeros(dual.clone());
    match index {
        RepIndex::Torus(k) => {
            if k.iter().all(|&v| v == 0) {
                f.coeffs_mut()[pos][(0, 0)] = Complex64::new(1.0, 0.0);
            } else {
                let minus: Vec<i64> = k.iter().map(|v| -v).collect();
                let neg = dual
                    .position(&RepIndex::Torus(minus))
                    .ok_or(HarmonicError::SpecMismatch)?;
                let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                f.coeffs_mut()[pos][(0, 0)] = a;
                f.coeffs_mut()[neg][(0, 0)] = a;
            }
        }
        RepIndex::Su2(_) | RepIndex::So3(_) => {
            let d = dual.reps()[pos].dim;
            f.coeffs_mut()[pos] = Array2::eye(d).mapv(|v: f64| Complex64::new(v / d as f64, 0.0));
        }
    }
    Ok(f)
}

/// The lowest nontrivial mode used for the mean-zero experiments: `k = e_1` on
/// tori, doubled spin 1 on SU(2), `l = 1` on SO(3).
pub fn lowest_mode_index(dual: &Dual) -> RepIndex {
    match dual.spec().kind() {
        GroupKind::Torus { radii } => {
            let mut k = vec![0; radii.len()];
            k[0] = 1;
            RepIndex::Torus(k)
        }
        GroupKind::Su2 => RepIndex::Su2(1),
        GroupKind::So3 => RepIndex::So3(1),
    }
}

/// Quadrature L^1 norm of a spectral field on an oversampled grid.
pub fn l1_norm(field: &SpectralField) -> Result<f64, HarmonicError> {
    let grid = Grid::build_with_dual(field.dual().clone(), L1_OVERSAMPLE)?;
    lq_norm(&inverse_gft(field, &grid)?, 1.0)
}

/// Mean-zero single-mode field rescaled to unit L^1 norm.
pub fn mean_zero_unit_l1(dual: Arc<Dual>) -> Result<SpectralField, HarmonicError> {
    let idx = lowest_mode_index(&dual);
    let f = single_mode(dual, &idx)?;
    let l1 = l1_norm(&f)?;
    Ok(f.scaled(Complex64::new(1.0 / l1, 0.0)))
}

/// Parameters of the random real bandlimited preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomParams {
    pub seed: u64,
    /// Coefficient entries at `xi` have standard deviation
    /// `(1 + lambda_xi^2)^{-decay/2} / sqrt(d_xi)`.
    pub decay: f64,
    /// Rescale to unit L^2 norm.
    pub normalize: bool,
}

impl RandomParams {
    pub fn new(seed: u64) -> Self {
        RandomParams {
            seed,
            decay: 2.0,
            normalize: true,
        }
    }
}

fn index_stream(index: &RepIndex) -> u64 {
    // splitmix-style fold of the index components
    let mix = |mut z: u64| {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    match index {
        RepIndex::Torus(k) => k
            .iter()
            .fold(0x9e37_79b9_7f4a_7c15, |h, &v| mix(h ^ (v as u64).wrapping_add(0x632b_e59b_d9b4_e019))),
        RepIndex::Su2(m) => mix(0x1000 + *m as u64),
        RepIndex::So3(l) => mix(0x2000 + *l as u64),
    }
}

/// Real random bandlimited field.
///
/// Complex Gaussian coefficients are drawn per representation, mapped to the
/// grid, and the real part is transformed back (real parts of bandlimited
/// fields stay within the bandlimit on all supported groups).
pub fn random_real(dual: Arc<Dual>, params: RandomParams) -> Result<SpectralField, HarmonicError> {
    let raw = SpectralField::from_fn(dual.clone(), |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(index_stream(&r.index));
        let sd = (1.0 + r.eigenvalue.to_f64()).powf(-params.decay / 2.0) / (r.dim as f64).sqrt();
        Array2::from_shape_fn((r.dim, r.dim), |_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re * sd, im * sd)
        })
    })?;
    let grid = Grid::build_with_dual(dual, 1.0)?;
    let samples = inverse_gft(&raw, &grid)?.map(|z| Complex64::new(z.re, 0.0));
    let field = forward_gft(&samples)?;
    if params.normalize {
        let n = plancherel_norm(&field);
        if n > 0.0 {
            return Ok(field.scaled(Complex64::new(1.0 / n, 0.0)));
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_spectra::GroupSpec;

    fn dual(spec: GroupSpec) -> Arc<Dual> {
        Arc::new(Dual::new(spec))
    }

    #[test]
    fn single_modes_have_unit_norm() {
        for spec in [
            GroupSpec::unit_torus(1, 3).unwrap(),
            GroupSpec::unit_torus(2, 2).unwrap(),
            GroupSpec::su2(3).unwrap(),
            GroupSpec::so3(3).unwrap(),
        ] {
            let d = dual(spec);
            let idx = lowest_mode_index(&d);
            let f = single_mode(d, &idx).unwrap();
            assert!((plancherel_norm(&f) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn character_is_real() {
        let d = dual(GroupSpec::su2(3).unwrap());
        let f = single_mode(d.clone(), &RepIndex::Su2(3)).unwrap();
        let g = Grid::build_with_dual(d, 1.0).unwrap();
        assert!(inverse_gft(&f, &g).unwrap().max_imag() < 1e-13);
    }

    #[test]
    fn random_fields_are_real_and_truncation_consistent() {
        let small = dual(GroupSpec::su2(3).unwrap());
        let large = dual(GroupSpec::su2(6).unwrap());
        let p = RandomParams {
            seed: 7,
            decay: 1.0,
            normalize: false,
        };
        let a = random_real(small.clone(), p).unwrap();
        let b = random_real(large.clone(), p).unwrap();
        for (r, c) in a.iter() {
            let other = b.get(&r.index).unwrap();
            for (x, y) in c.iter().zip(other.iter()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        let g = Grid::build_with_dual(large, 1.0).unwrap();
        assert!(inverse_gft(&b, &g).unwrap().max_imag() < 1e-12);

        let t = dual(GroupSpec::unit_torus(2, 3).unwrap());
        let f = random_real(t.clone(), RandomParams::new(3)).unwrap();
        assert!((plancherel_norm(&f) - 1.0).abs() < 1e-13);
        // conjugate symmetry
        for (r, c) in f.iter() {
            let RepIndex::Torus(k) = &r.index else { unreachable!() };
            let minus = RepIndex::Torus(k.iter().map(|v| -v).collect());
            assert!((c[(0, 0)] - f.get(&minus).unwrap()[(0, 0)].conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn random_fields_depend_on_seed() {
        let d = dual(GroupSpec::unit_torus(1, 4).unwrap());
        let a = random_real(d.clone(), RandomParams::new(1)).unwrap();
        let b = random_real(d.clone(), RandomParams::new(1)).unwrap();
        let c = random_real(d, RandomParams::new(2)).unwrap();
        assert_eq!(a, b);
        assert!(a.max_abs_diff(&c).unwrap() > 1e-3);
    }

    #[test]
    fn mean_zero_preset() {
        let d = dual(GroupSpec::unit_torus(1, 2).unwrap());
        let f = mean_zero_unit_l1(d.clone()).unwrap();
        assert!(f.coeffs()[d.trivial_position()][(0, 0)].norm() < 1e-15);
        assert!((l1_norm(&f).unwrap() - 1.0).abs() < 1e-12);
        // ||sqrt(2) cos||_1 = 2 sqrt(2) / pi on a fine grid
        let unit = single_mode(d, &RepIndex::Torus(vec![1])).unwrap();
        assert!((l1_norm(&unit).unwrap() - 2.0 * 2f64.sqrt() / std::f64::consts::PI).abs() < 2e-3);
    }
}
