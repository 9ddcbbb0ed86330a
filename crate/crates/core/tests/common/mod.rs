//! Reference solvers that share no code with the library kernels.
#![allow(dead_code)]

use liewave_core::Complex64;

/// Classical RK4 for `y'' + (1 + l) y' + l y = 0`, fixed step close to `h`.
/// Returns `(y, y')` at `t` for data `(y0, y1)`.
pub fn rk4_mode(t: f64, l: f64, y0: f64, y1: f64, h: f64) -> (f64, f64) {
    if t == 0.0 {
        return (y0, y1);
    }
    let n = (t / h).ceil() as usize;
    let dt = t / n as f64;
    let f = |y: f64, v: f64| (v, -(1.0 + l) * v - l * y);
    let (mut y, mut v) = (y0, y1);
    for _ in 0..n {
        let (a1, b1) = f(y, v);
        let (a2, b2) = f(y + 0.5 * dt * a1, v + 0.5 * dt * b1);
        let (a3, b3) = f(y + 0.5 * dt * a2, v + 0.5 * dt * b2);
        let (a4, b4) = f(y + dt * a3, v + dt * b3);
        y += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        v += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    (y, v)
}

/// `(K0, K1, dK0, dK1)` by RK4 with step 1e-4.
pub fn propagator_ode_oracle(t: f64, l: f64) -> [f64; 4] {
    let (k0, dk0) = rk4_mode(t, l, 1.0, 0.0, 1e-4);
    let (k1, dk1) = rk4_mode(t, l, 0.0, 1.0, 1e-4);
    [k0, k1, dk0, dk1]
}

/// Truncated spectral system on the unit circle,
/// `c_k'' + (1 + k^2) c_k' + k^2 c_k = (|u|^p)^_k`, integrated by RK4 with
/// `steps` steps. Coefficients are indexed `k = -b..=b`; the nonlinearity is
/// evaluated by a direct DFT on `m` equispaced points.
pub fn rk4_circle_semilinear(
    c0: &[Complex64],
    c1: &[Complex64],
    p: f64,
    t_final: f64,
    steps: usize,
    m: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = c0.len();
    let b = (n as i64 - 1) / 2;
    let ks: Vec<i64> = (-b..=b).collect();
    let xs: Vec<f64> = (0..m).map(|j| 2.0 * std::f64::consts::PI * j as f64 / m as f64).collect();
    let forcing = |c: &[Complex64]| -> Vec<Complex64> {
        let vals: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let u: Complex64 = ks
                    .iter()
                    .zip(c)
                    .map(|(&k, &ck)| ck * Complex64::from_polar(1.0, k as f64 * x))
                    .sum();
                u.norm().powf(p)
            })
            .collect();
        ks.iter()
            .map(|&k| {
                vals.iter()
                    .zip(&xs)
                    .map(|(&v, &x)| Complex64::from_polar(v, -(k as f64) * x))
                    .sum::<Complex64>()
                    / m as f64
            })
            .collect()
    };
    let rhs = |c: &[Complex64], v: &[Complex64]| -> (Vec<Complex64>, Vec<Complex64>) {
        let f = forcing(c);
        let dv = (0..n)
            .map(|i| {
                let l = (ks[i] * ks[i]) as f64;
                f[i] - v[i] * (1.0 + l) - c[i] * l
            })
            .collect();
        (v.to_vec(), dv)
    };
    let axpy = |a: &[Complex64], s: f64, b: &[Complex64]| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x + y * s).collect()
    };
    let dt = t_final / steps as f64;
    let (mut c, mut v) = (c0.to_vec(), c1.to_vec());
    for _ in 0..steps {
        let (a1, b1) = rhs(&c, &v);
        let (a2, b2) = rhs(&axpy(&c, 0.5 * dt, &a1), &axpy(&v, 0.5 * dt, &b1));
        let (a3, b3) = rhs(&axpy(&c, 0.5 * dt, &a2), &axpy(&v, 0.5 * dt, &b2));
        let (a4, b4) = rhs(&axpy(&c, dt, &a3), &axpy(&v, dt, &b3));
        for i in 0..n {
            c[i] += (a1[i] + a2[i] * 2.0 + a3[i] * 2.0 + a4[i]) * (dt / 6.0);
            v[i] += (b1[i] + b2[i] * 2.0 + b3[i] * 2.0 + b4[i]) * (dt / 6.0);
        }
    }
    (c, v)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// Bandlimited evaluation of circle coefficients (index `k = -b..=b`).
pub fn circle_eval(c: &[Complex64], x: f64) -> Complex64 {
    let b = (c.len() as i64 - 1) / 2;
    (-b..=b)
        .zip(c)
        .map(|(k, &ck)| ck * Complex64::from_polar(1.0, k as f64 * x))
        .sum()
}
