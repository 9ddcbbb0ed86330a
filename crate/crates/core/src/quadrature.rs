//! Gauss-Legendre rules and Wigner small-d matrices.

use ndarray::Array2;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// `ln(k!)` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Wigner small-d by the finite sum, all spins doubled:
/// `d^{j}_{m' m}(beta)` with `j = j2/2`, `m' = mp2/2`, `m = m2/2`.
///
/// Used for the recurrence base cases, where the sum has a single term.
pub(crate) fn wigner_d_sum(j2: i64, mp2: i64, m2: i64, beta: f64, lnf: &[f64]) -> f64 {
    let jpm_p = ((j2 + mp2) / 2) as usize;
    let jmm_p = ((j2 - mp2) / 2) as usize;
    let jpm = ((j2 + m2) / 2) as usize;
    let jmm = ((j2 - m2) / 2) as usize;
    let shift = (m2 - mp2) / 2; // m - m'
    let k_lo = shift.max(0);
    let k_hi = (jpm as i64).min(jmm_p as i64);
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let prefactor = 0.5 * (lnf[jpm_p] + lnf[jmm_p] + lnf[jpm] + lnf[jmm]);
    let mut sum = 0.0;
    for k in k_lo..=k_hi {
        let ku = k as usize;
        let ln_den = lnf[jpm - ku] + lnf[ku] + lnf[jmm_p - ku] + lnf[(k - shift) as usize];
        let cos_pow = (j2 - 2 * k + shift) as i32;
        let sin_pow = (2 * k - shift) as i32;
        let sign = if (k - shift).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign * (prefactor - ln_den).exp() * c.powi(cos_pow) * s.powi(sin_pow);
    }
    sum
}

/// Small-d matrices `d^{j}(beta)` for all doubled spins `0..=j2_max` with
/// the given parity filter, by the three-term recurrence in `j`.
///
/// `out[j2][(a, b)] = d^{j}_{m' m}(beta)` with `m' = -j + a`, `m = -j + b`.
/// Entries for skipped spins are empty matrices.
pub(crate) fn wigner_d_table(j2_max: u32, integer_only: bool, beta: f64) -> Vec<Array2<f64>> {
    let j2_max = j2_max as i64;
    let lnf = ln_factorials(j2_max as usize + 2);
    let mut out: Vec<Array2<f64>> = (0..=j2_max)
        .map(|j2| {
            if integer_only && j2 % 2 == 1 {
                Array2::zeros((0, 0))
            } else {
                Array2::zeros((j2 as usize + 1, j2 as usize + 1))
            }
        })
        .collect();
    let cos_beta = beta.cos();
    let parities: &[i64] = if integer_only { &[0] } else { &[0, 1] };
    for &parity in parities {
        let top = j2_max - (j2_max - parity).rem_euclid(2);
        if top < 0 {
            continue;
        }
        let mut mp2 = -top;
        while mp2 <= top {
            let mut m2 = -top;
            while m2 <= top {
                let start = mp2.abs().max(m2.abs());
                let mut prev = 0.0;
                let mut cur = wigner_d_sum(start, mp2, m2, beta, &lnf);
                store(&mut out, start, mp2, m2, cur);
                let (mp, m) = (mp2 as f64 / 2.0, m2 as f64 / 2.0);
                let mut j2 = start;
                while j2 + 2 <= top {
                    let j = j2 as f64 / 2.0;
                    let jn = j + 1.0;
                    let norm = ((jn * jn - m * m) * (jn * jn - mp * mp)).sqrt();
                    let centre = if j2 == 0 { cos_beta } else { cos_beta - m * mp / (j * jn) };
                    let a = jn * (2.0 * j + 1.0) / norm;
                    let b = if j2 == 0 {
                        0.0
                    } else {
                        jn * ((j * j - m * m) * (j * j - mp * mp)).sqrt() / (j * norm)
                    };
                    let next = a * centre * cur - b * prev;
                    prev = cur;
                    cur = next;
                    j2 += 2;
                    store(&mut out, j2, mp2, m2, cur);
                }
                m2 += 2;
            }
            mp2 += 2;
        }
    }
    out
}

fn store(out: &mut [Array2<f64>], j2: i64, mp2: i64, m2: i64, value: f64) {
    let a = ((mp2 + j2) / 2) as usize;
    let b = ((m2 + j2) / 2) as usize;
    out[j2 as usize][(a, b)] = value;
}
