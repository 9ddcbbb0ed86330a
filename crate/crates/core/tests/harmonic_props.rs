use std::sync::Arc;

use liewave_core::data::{self, RandomParams};
use liewave_core::group_spectra::{Dual, GroupSpec, RepIndex};
use liewave_core::harmonic::{rep_matrix, GridPoint};
use liewave_core::{
    forward_gft, inverse_gft, linf_dual_norm, lq_norm, plancherel_norm, sobolev_apply, Complex64, Grid,
    SpectralField,
};
use ndarray::Array2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::unit_torus(1, 8).unwrap(),
        GroupSpec::unit_torus(2, 4).unwrap(),
        GroupSpec::torus(vec![1.5, 0.5], 3).unwrap(),
        GroupSpec::su2(4).unwrap(),
        GroupSpec::so3(4).unwrap(),
    ]
}

fn complex_field(dual: &Arc<Dual>, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(dual.clone(), |r| {
        Array2::from_shape_fn((r.dim, r.dim), |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_parseval_and_linf(seed in any::<u64>(), which in 0usize..5, os in 1.0f64..2.5) {
        let spec = specs()[which].clone();
        let grid = Grid::build(&spec, os).unwrap();
        let f = complex_field(grid.dual(), seed);
        let samples = inverse_gft(&f, &grid).unwrap();
        let back = forward_gft(&samples).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-10);
        prop_assert!((plancherel_norm(&f) - lq_norm(&samples, 2.0).unwrap()).abs() < 1e-10);
        prop_assert!(linf_dual_norm(&f) <= lq_norm(&samples, 1.0).unwrap() + 1e-10);
    }

    #[test]
    fn transform_is_linear(seed in any::<u64>(), which in 0usize..5, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let spec = specs()[which].clone();
        let grid = Grid::build(&spec, 1.0).unwrap();
        let f = inverse_gft(&complex_field(grid.dual(), seed), &grid).unwrap();
        let g = inverse_gft(&complex_field(grid.dual(), seed ^ 0x5555), &grid).unwrap();
        let comb = liewave_core::GridField::new(
            grid.clone(),
            f.samples().iter().zip(g.samples()).map(|(x, y)| x * a + y * b).collect(),
        ).unwrap();
        let mut want = forward_gft(&f).unwrap().scaled(Complex64::new(a, 0.0));
        want.add_scaled(&forward_gft(&g).unwrap(), Complex64::new(b, 0.0)).unwrap();
        prop_assert!(forward_gft(&comb).unwrap().max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn real_torus_fields_are_conjugate_symmetric(seed in any::<u64>(), which in 0usize..3) {
        let spec = specs()[which].clone();
        let grid = Grid::build(&spec, 1.0).unwrap();
        let raw = inverse_gft(&complex_field(grid.dual(), seed), &grid).unwrap();
        let real = raw.map(|z| Complex64::new(z.re, 0.0));
        let f = forward_gft(&real).unwrap();
        for (r, c) in f.iter() {
            let RepIndex::Torus(k) = &r.index else { unreachable!() };
            let minus = RepIndex::Torus(k.iter().map(|v| -v).collect());
            prop_assert!((c[(0, 0)] - f.get(&minus).unwrap()[(0, 0)].conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn sobolev_orders_compose(seed in any::<u64>(), which in 0usize..5, s1 in 0.0f64..3.0, s2 in 0.0f64..3.0) {
        let dual = Arc::new(Dual::new(specs()[which].clone()));
        let f = complex_field(&dual, seed);
        let two = sobolev_apply(&sobolev_apply(&f, s1).unwrap(), s2).unwrap();
        let one = sobolev_apply(&f, s1 + s2).unwrap();
        let scale = one.max_abs().max(1.0);
        prop_assert!(two.max_abs_diff(&one).unwrap() <= 1e-13 * scale);
    }
}

#[test]
fn plancherel_on_hundred_random_real_fields() {
    for spec in specs() {
        let grid = Grid::build(&spec, 1.0).unwrap();
        let mut worst: f64 = 0.0;
        for seed in 0..100 {
            let f = data::random_real(grid.dual().clone(), RandomParams::new(seed)).unwrap();
            let s = inverse_gft(&f, &grid).unwrap();
            worst = worst.max((plancherel_norm(&f) - lq_norm(&s, 2.0).unwrap()).abs());
            assert!(linf_dual_norm(&f) <= lq_norm(&s, 1.0).unwrap() + 1e-10);
            assert!(s.max_imag() < 1e-12);
        }
        assert!(worst < 1e-10, "{}: {worst}", spec.name());
    }
}

#[test]
fn schur_orthogonality_with_half_integer_spins() {
    // all retained matrix entries, products integrated on the B = 5 grid
    let spec = GroupSpec::su2(5).unwrap();
    let grid = Grid::build(&spec, 1.0).unwrap();
    let reps: Vec<_> = grid.dual().iter().map(|r| r.index.clone()).collect();
    let points: Vec<GridPoint> = grid.points().collect();
    let mats: Vec<Vec<Array2<Complex64>>> =
        reps.iter().map(|r| points.iter().map(|p| rep_matrix(r, p)).collect()).collect();
    let mut defect: f64 = 0.0;
    for (a, ma) in reps.iter().zip(&mats) {
        for (b, mb) in reps.iter().zip(&mats) {
            let (da, db) = (a.dim(), b.dim());
            for i in 0..da {
                for j in 0..da {
                    for k in 0..db {
                        for l in 0..db {
                            let v: Complex64 = grid
                                .weights()
                                .iter()
                                .enumerate()
                                .map(|(n, w)| ma[n][(i, j)] * mb[n][(k, l)].conj() * *w)
                                .sum();
                            let want = if a == b && i == k && j == l { 1.0 / da as f64 } else { 0.0 };
                            defect = defect.max((v - want).norm());
                        }
                    }
                }
            }
        }
    }
    assert!(defect < 1e-12, "defect {defect}");
}

/// Bi-invariant Laplacian in ZYZ Euler angles,
/// `d_bb + cot b d_b + (d_aa - 2 cos b d_ag + d_gg) / sin^2 b`, by central
/// differences.
fn fd_laplacian(f: &dyn Fn(f64, f64, f64) -> Complex64, a: f64, b: f64, g: f64, h: f64) -> Complex64 {
    let f0 = f(a, b, g);
    let d_bb = (f(a, b + h, g) - f0 * 2.0 + f(a, b - h, g)) / (h * h);
    let d_b = (f(a, b + h, g) - f(a, b - h, g)) / (2.0 * h);
    let d_aa = (f(a + h, b, g) - f0 * 2.0 + f(a - h, b, g)) / (h * h);
    let d_gg = (f(a, b, g + h) - f0 * 2.0 + f(a, b, g - h)) / (h * h);
    let d_ag = (f(a + h, b, g + h) - f(a + h, b, g - h) - f(a - h, b, g + h) + f(a - h, b, g - h)) / (4.0 * h * h);
    d_bb + d_b * (b.cos() / b.sin()) + (d_aa - d_ag * (2.0 * b.cos()) + d_gg) / b.sin().powi(2)
}

#[test]
fn casimir_eigenvalues_by_finite_differences() {
    let dual = Dual::new(GroupSpec::su2(4).unwrap());
    for r in dual.iter() {
        let lambda2 = r.eigenvalue.to_f64();
        for i in 0..r.dim {
            for j in 0..r.dim {
                let entry = |a: f64, b: f64, g: f64| {
                    rep_matrix(&r.index, &GridPoint::Euler { alpha: a, beta: b, gamma: g })[(i, j)]
                };
                let (a, b, g) = (0.4, 1.1, 2.3);
                let v = entry(a, b, g);
                if v.norm() < 1e-3 {
                    continue;
                }
                let lap = fd_laplacian(&entry, a, b, g, 1e-3);
                let est = -(lap / v).re;
                assert!((est - lambda2).abs() < 1e-4, "{} ({i},{j}): {est} vs {lambda2}", r.index);
            }
        }
    }
}

#[test]
fn nonlinear_grid_integrates_squares_exactly() {
    // oversample 2 resolves |u|^2 for bandlimited u on every group
    for spec in specs() {
        let grid = Grid::build(&spec, 2.0).unwrap();
        let f = data::random_real(grid.dual().clone(), RandomParams::new(11)).unwrap();
        let s = inverse_gft(&f, &grid).unwrap();
        let sq = forward_gft(&s.map(|z| z * z)).unwrap();
        let mean = sq.coeffs()[grid.dual().trivial_position()][(0, 0)].re;
        assert!((mean - plancherel_norm(&f).powi(2)).abs() < 1e-12, "{}", spec.name());
    }
}
