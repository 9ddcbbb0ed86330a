mod common;

use std::sync::Arc;

use common::{adaptive_simpson, rk4_circle_semilinear};
use liewave_core::data::{self, RandomParams};
use liewave_core::evolution::{
    apply_nonlinearity, duhamel_apply, evolve_homogeneous, picard_solve, CauchyData, ForcingHistory,
    SemilinearConfig, TimeGrid,
};
use liewave_core::group_spectra::{Dual, GroupSpec, RepIndex};
use liewave_core::{inverse_gft, Complex64, Grid, SpectralField};
use proptest::prelude::*;

fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::unit_torus(1, 6).unwrap(),
        GroupSpec::torus(vec![1.0, 2.0], 3).unwrap(),
        GroupSpec::su2(4).unwrap(),
        GroupSpec::so3(3).unwrap(),
    ]
}

fn random_data(spec: &GroupSpec, seed: u64, eps: f64) -> CauchyData {
    let dual = Arc::new(Dual::new(spec.clone()));
    let u0 = data::random_real(dual.clone(), RandomParams::new(seed)).unwrap();
    let u1 = data::random_real(dual, RandomParams::new(seed + 1)).unwrap();
    CauchyData::new(u0, u1, eps).unwrap()
}

#[test]
fn homogeneous_modes_satisfy_the_ode() {
    let dt = 1e-3;
    for spec in specs() {
        let data = random_data(&spec, 5, 1.0);
        for &t in &[0.2, 1.0, 3.7] {
            let [a, b, c] = [t - dt, t, t + dt].map(|s| evolve_homogeneous(&data, s).unwrap());
            for (i, r) in data.dual().iter().enumerate() {
                let l = r.eigenvalue.to_f64();
                for ((&ym, &y0), &yp) in a.u.coeffs()[i].iter().zip(b.u.coeffs()[i].iter()).zip(c.u.coeffs()[i].iter()) {
                    let ydd = (yp - y0 * 2.0 + ym) / (dt * dt);
                    let yd = (yp - ym) / (2.0 * dt);
                    // the centered stencils carry O(dt^2 (1 + l)^4) truncation
                    let scale = (1.0 + l).powi(4) * (y0.norm() + 1e-3);
                    let res = (ydd + yd * (1.0 + l) + y0 * l).norm();
                    assert!(res < 1e-6f64.max(1e-6 * scale), "{} {} t={t}: {res}", spec.name(), r.index);
                }
            }
        }
    }
}

#[test]
fn zero_mode_closed_form_and_real_solutions() {
    for spec in specs() {
        let data = random_data(&spec, 9, 1.0);
        let grid = Grid::build(&spec, 1.0).unwrap();
        let z = data.dual().trivial_position();
        let (a, b) = (data.u0.coeffs()[z][(0, 0)], data.u1.coeffs()[z][(0, 0)]);
        for &t in &[0.0, 0.5, 2.0, 10.0] {
            let s = evolve_homogeneous(&data, t).unwrap();
            assert!((s.u.coeffs()[z][(0, 0)] - (a + b * (-(-t).exp_m1()))).norm() < 1e-15);
            assert!((s.du.coeffs()[z][(0, 0)] - b * (-t).exp()).norm() < 1e-15);
            assert!(inverse_gft(&s.u, &grid).unwrap().max_imag() < 1e-10);
            assert!(inverse_gft(&s.du, &grid).unwrap().max_imag() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homogeneous_evolution_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, al in -2.0f64..2.0, be in -2.0f64..2.0, t in 0.0f64..8.0, which in 0usize..4) {
        let spec = specs()[which].clone();
        let a = random_data(&spec, s1, 1.0);
        let b = random_data(&spec, s2 + 5000, 1.0);
        let lin = |x: &SpectralField, y: &SpectralField| {
            let mut out = x.scaled(Complex64::new(al, 0.0));
            out.add_scaled(y, Complex64::new(be, 0.0)).unwrap();
            out
        };
        let comb = CauchyData::unscaled(lin(&a.u0, &b.u0), lin(&a.u1, &b.u1)).unwrap();
        let (sa, sb, sc) = (
            evolve_homogeneous(&a, t).unwrap(),
            evolve_homogeneous(&b, t).unwrap(),
            evolve_homogeneous(&comb, t).unwrap(),
        );
        prop_assert!(sc.u.max_abs_diff(&lin(&sa.u, &sb.u)).unwrap() < 1e-13);
        prop_assert!(sc.du.max_abs_diff(&lin(&sa.du, &sb.du)).unwrap() < 1e-13);
    }
}

#[test]
fn duhamel_single_mode_against_closed_form() {
    // lambda^2 = 2 at k = (1, 1); y'' + 3y' + 2y = e^{-t}, y(0) = y'(0) = 0
    let spec = GroupSpec::unit_torus(2, 1).unwrap();
    let dual = Arc::new(Dual::new(spec));
    let idx = RepIndex::Torus(vec![1, 1]);
    assert_eq!(dual.spec().eigenvalue(&idx).to_f64(), 2.0);
    let zero = SpectralField::zeros(dual.clone());
    let data = CauchyData::unscaled(zero.clone(), zero.clone()).unwrap();
    let grid = TimeGrid::new(2.0, 20).unwrap();
    let forcing = ForcingHistory::from_fn(grid, |s| {
        let mut f = zero.clone();
        f.get_mut(&idx).unwrap()[(0, 0)] = Complex64::new((-s).exp(), 0.0);
        f
    })
    .unwrap();
    for &t in &[0.1, 0.37, 1.0, 1.3, 2.0] {
        let st = duhamel_apply(&data, &forcing, t).unwrap();
        let y = t * (-t).exp() - (-t).exp() + (-2.0 * t).exp();
        let dy = (2.0 - t) * (-t).exp() - 2.0 * (-2.0 * t).exp();
        assert!((st.u.get(&idx).unwrap()[(0, 0)].re - y).abs() < 1e-8, "t={t}");
        assert!((st.du.get(&idx).unwrap()[(0, 0)].re - dy).abs() < 1e-8, "t={t}: {} vs {dy}", st.du.get(&idx).unwrap()[(0, 0)].re);
        assert!(st.u.max_abs() <= y.abs() + 1e-15);
    }
}

fn circle_coeffs(f: &SpectralField, b: i64) -> Vec<Complex64> {
    (-b..=b).map(|k| f.get(&RepIndex::Torus(vec![k])).unwrap()[(0, 0)]).collect()
}

#[test]
fn picard_matches_rk4_of_the_truncated_system() {
    let b = 8;
    let spec = GroupSpec::unit_torus(1, b as u32).unwrap();
    let dual = Arc::new(Dual::new(spec));
    let g = data::single_mode(dual.clone(), &RepIndex::Torus(vec![1])).unwrap();
    for (eps, u1_seed) in [(1e-3, None), (0.2, Some(3u64))] {
        let u1 = match u1_seed {
            Some(s) => data::random_real(dual.clone(), RandomParams::new(s)).unwrap(),
            None => g.clone(),
        };
        let cd = CauchyData::new(g.clone(), u1, eps).unwrap();
        let cfg = SemilinearConfig::default();
        let rep = picard_solve(&cd, &cfg).unwrap();
        assert!(rep.status.is_converged(), "{:?}", rep.diagnostic);
        assert!(rep.contraction_factor.unwrap() < 0.5);
        assert!(rep.fixed_point_residual.unwrap() < 10.0 * cfg.picard_tol);

        let c0: Vec<Complex64> = circle_coeffs(&cd.u0, b).iter().map(|z| z * eps).collect();
        let c1: Vec<Complex64> = circle_coeffs(&cd.u1, b).iter().map(|z| z * eps).collect();
        let (c, v) = rk4_circle_semilinear(&c0, &c1, cfg.p, cfg.t_final, 4000, 64);
        let fin = rep.final_state();
        assert!((fin.t - cfg.t_final).abs() < 1e-15);
        let dist = |a: &[Complex64], f: &SpectralField| {
            a.iter().zip(circle_coeffs(f, b)).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
        };
        assert!(dist(&c, &fin.u) < 1e-6 * eps.max(1e-3), "eps {eps}: {}", dist(&c, &fin.u));
        assert!(dist(&v, &fin.du) < 1e-6 * eps.max(1e-3));
    }
}

#[test]
fn picard_fixed_point_on_groups() {
    for spec in [GroupSpec::su2(3).unwrap(), GroupSpec::so3(2).unwrap(), GroupSpec::unit_torus(2, 3).unwrap()] {
        let cd = random_data(&spec, 21, 0.05);
        let cfg = SemilinearConfig { n_time_steps: 6, ..SemilinearConfig::default() };
        let rep = picard_solve(&cd, &cfg).unwrap();
        assert!(rep.status.is_converged(), "{}: {:?}", spec.name(), rep.diagnostic);
        assert!(rep.fixed_point_residual.unwrap() < 10.0 * cfg.picard_tol);
        let grid = Grid::build(&spec, 1.0).unwrap();
        for s in &rep.trajectory {
            assert!(inverse_gft(&s.u, &grid).unwrap().max_imag() < 1e-10);
        }
        assert_eq!(rep.trajectory.len(), rep.time_grid.samples().len());
    }
}

#[test]
fn cubic_modulus_against_dense_quadrature() {
    let b = 48u32;
    let spec = GroupSpec::unit_torus(1, b).unwrap();
    let grid = Grid::build(&spec, 4.0).unwrap();
    let dual = grid.dual().clone();
    let mut u = SpectralField::zeros(dual);
    u.get_mut(&RepIndex::Torus(vec![1])).unwrap()[(0, 0)] = Complex64::new(0.5, 0.0);
    u.get_mut(&RepIndex::Torus(vec![-1])).unwrap()[(0, 0)] = Complex64::new(0.5, 0.0);
    let f = apply_nonlinearity(&u, 3.0, &grid).unwrap();
    let tau = 2.0 * std::f64::consts::PI;
    for k in -2i64..=2 {
        let re = adaptive_simpson(&|x| x.cos().abs().powi(3) * (k as f64 * x).cos(), 0.0, tau, 1e-14) / tau;
        let got = f.get(&RepIndex::Torus(vec![k])).unwrap()[(0, 0)];
        assert!((got.re - re).abs() < 1e-8 && got.im.abs() < 1e-12, "k={k}: {} vs {re}", got.re);
    }
    // odd coefficients vanish, c_0 = 4 / (3 pi)
    let c0 = f.get(&RepIndex::Torus(vec![0])).unwrap()[(0, 0)].re;
    assert!((c0 - 4.0 / (3.0 * std::f64::consts::PI)).abs() < 1e-8);
}
