//! Quadrature grids, group Fourier transforms and the norms built on them.
//!
//! Conventions: `f^(xi) = int f(x) xi(x)^* dx` against the normalised Haar
//! measure and `f(x) = sum_xi d_xi Tr(xi(x) f^(xi))`.
//!
//! Tori use a uniform product grid, so the transform is a separable DFT.
//! SU(2) and SO(3) use ZYZ Euler angles with
//! `D^j_{m'm}(a, b, g) = exp(-i m' a) d^j_{m'm}(b) exp(-i m g)`, uniform in
//! `a` and `g` and Gauss-Legendre in `cos b`; spins are handled doubled
//! throughout so half-integer representations need no special casing.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

use crate::group_spectra::{Dual, GroupKind, GroupSpec, RepIndex, Representation};
use crate::quadrature::{gauss_legendre, wigner_d_table};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error("oversample factor must be >= 1, got {0}")]
    InvalidOversample(f64),
    #[error("grid has {expected} nodes but {got} samples were supplied")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("fields live on different group specifications")]
    SpecMismatch,
    #[error("L^q norm needs q >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("Sobolev order must be nonnegative, got {0}")]
    NegativeOrder(f64),
    #[error("coefficient matrix for {index} has shape {got:?}, expected {dim}x{dim}")]
    CoefficientShape {
        index: RepIndex,
        dim: usize,
        got: (usize, usize),
    },
}

/// Coordinates of a single grid node.
#[derive(Debug, Clone, PartialEq)]
pub enum GridPoint {
    /// Angles `theta_j in [0, 2 pi)`; the physical coordinate is
    /// `r_j theta_j`.
    Torus(Vec<f64>),
    Euler { alpha: f64, beta: f64, gamma: f64 },
}

#[derive(Debug)]
enum Layout {
    Torus {
        dims: usize,
        per_axis: usize,
        angles: Vec<f64>,
        // (2B+1) x N, entries exp(-i k theta) / N
        forward: Array2<Complex64>,
        // N x (2B+1), entries exp(i k theta)
        inverse: Array2<Complex64>,
    },
    Euler(EulerLayout),
}

#[derive(Debug)]
struct EulerLayout {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    // normalised weights in cos(beta), summing to 1
    beta_weights: Vec<f64>,
    // largest doubled spin
    j2_max: u32,
    // small-d tables per beta node, indexed by doubled spin
    wigner: Vec<Vec<Array2<f64>>>,
}

impl EulerLayout {
    fn m_count(&self) -> usize {
        2 * self.j2_max as usize + 1
    }

    /// Column for doubled magnetic number `m2` in `-J..=J`.
    fn m_slot(&self, m2: i64) -> usize {
        (m2 + self.j2_max as i64) as usize
    }
}

/// Quadrature grid realising the normalised Haar integral on a group.
#[derive(Debug)]
pub struct Grid {
    spec: GroupSpec,
    dual: Arc<Dual>,
    oversample: f64,
    layout: Layout,
    weights: Vec<f64>,
}

impl Grid {
    /// Builds the grid for `spec` with at least `oversample` times the
    /// minimal node count per axis.
    pub fn build(spec: &GroupSpec, oversample: f64) -> Result<Arc<Grid>, HarmonicError> {
        Self::build_with_dual(Arc::new(Dual::new(spec.clone())), oversample)
    }

    /// Like [`Grid::build`] but reuses an existing dual.
    pub fn build_with_dual(dual: Arc<Dual>, oversample: f64) -> Result<Arc<Grid>, HarmonicError> {
        if !(oversample.is_finite() && oversample >= 1.0) {
            return Err(HarmonicError::InvalidOversample(oversample));
        }
        let spec = dual.spec().clone();
        let b = spec.bandlimit() as usize;
        let uniform_count = node_count(oversample, 2 * b + 1);
        let (layout, weights) = match spec.kind() {
            GroupKind::Torus { radii } => {
                let dims = radii.len();
                let n = uniform_count;
                let angles: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
                let modes = 2 * b + 1;
                let mut forward = Array2::zeros((modes, n));
                let mut inverse = Array2::zeros((n, modes));
                for (row, k) in (-(b as i64)..=b as i64).enumerate() {
                    for col in 0..n {
                        // reduce k*i mod n before scaling for exact periodicity
                        let phase = 2.0 * PI * ((k * col as i64).rem_euclid(n as i64)) as f64
                            / n as f64;
                        let e = Complex64::from_polar(1.0, phase);
                        inverse[(col, row)] = e;
                        forward[(row, col)] = e.conj() / n as f64;
                    }
                }
                let total = n.pow(dims as u32);
                let w = 1.0 / total as f64;
                (
                    Layout::Torus {
                        dims,
                        per_axis: n,
                        angles,
                        forward,
                        inverse,
                    },
                    vec![w; total],
                )
            }
            GroupKind::Su2 | GroupKind::So3 => {
                let integer_only = matches!(spec.kind(), GroupKind::So3);
                let (j2_max, alpha_period) = if integer_only {
                    (2 * spec.bandlimit(), 2.0 * PI)
                } else {
                    (spec.bandlimit(), 4.0 * PI)
                };
                let n_beta = node_count(oversample, b + 1);
                let (x, w) = gauss_legendre(n_beta);
                let beta: Vec<f64> = x.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect();
                let beta_weights: Vec<f64> = w.iter().map(|w| w / 2.0).collect();
                let alpha: Vec<f64> = (0..uniform_count)
                    .map(|i| alpha_period * i as f64 / uniform_count as f64)
                    .collect();
                let gamma: Vec<f64> = (0..uniform_count)
                    .map(|i| 2.0 * PI * i as f64 / uniform_count as f64)
                    .collect();
                let wigner = beta
                    .iter()
                    .map(|&bt| wigner_d_table(j2_max, integer_only, bt))
                    .collect();
                let mut weights = Vec::with_capacity(alpha.len() * beta.len() * gamma.len());
                let planar = 1.0 / (alpha.len() * gamma.len()) as f64;
                for _ in &alpha {
                    for wb in &beta_weights {
                        for _ in &gamma {
                            weights.push(planar * wb);
                        }
                    }
                }
                (
                    Layout::Euler(EulerLayout {
                        alpha,
                        beta,
                        gamma,
                        beta_weights,
                        j2_max,
                        wigner,
                    }),
                    weights,
                )
            }
        };
        Ok(Arc::new(Grid {
            spec,
            dual,
            oversample,
            layout,
            weights,
        }))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn dual(&self) -> &Arc<Dual> {
        &self.dual
    }

    pub fn oversample(&self) -> f64 {
        self.oversample
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Node counts per axis: `[N; n]` on tori, `[#alpha, #beta, #gamma]`
    /// on SU(2)/SO(3).
    pub fn axis_counts(&self) -> Vec<usize> {
        match &self.layout {
            Layout::Torus { dims, per_axis, .. } => vec![*per_axis; *dims],
            Layout::Euler(e) => vec![e.alpha.len(), e.beta.len(), e.gamma.len()],
        }
    }

    /// Coordinates of node `i` (row-major over the axes).
    pub fn point(&self, i: usize) -> GridPoint {
        match &self.layout {
            Layout::Torus {
                dims,
                per_axis,
                angles,
                ..
            } => {
                let mut rest = i;
                let mut theta = vec![0.0; *dims];
                for slot in theta.iter_mut().rev() {
                    *slot = angles[rest % per_axis];
                    rest /= per_axis;
                }
                GridPoint::Torus(theta)
            }
            Layout::Euler(e) => {
                let ng = e.gamma.len();
                let nb = e.beta.len();
                GridPoint::Euler {
                    alpha: e.alpha[i / (nb * ng)],
                    beta: e.beta[(i / ng) % nb],
                    gamma: e.gamma[i % ng],
                }
            }
        }
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

fn node_count(oversample: f64, minimal: usize) -> usize {
    // guard against 2.0 * 5 = 10.000000000000002 style rounding
    let raw = oversample * minimal as f64;
    let rounded = raw.round();
    if (raw - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        raw.ceil() as usize
    }
}

/// Evaluates the unitary matrix `xi(x)` of a representation at a point.
pub fn rep_matrix(index: &RepIndex, point: &GridPoint) -> Array2<Complex64> {
    match (index, point) {
        (RepIndex::Torus(k), GridPoint::Torus(theta)) => {
            let phase: f64 = k.iter().zip(theta).map(|(&k, t)| k as f64 * t).sum();
            Array2::from_elem((1, 1), Complex64::from_polar(1.0, phase))
        }
        (idx, GridPoint::Euler { alpha, beta, gamma }) => {
            let j2 = idx.doubled_spin().expect("Euler point needs an SU(2)/SO(3) index");
            let table = wigner_d_table(j2, false, *beta);
            let d = &table[j2 as usize];
            let dim = j2 as usize + 1;
            Array2::from_shape_fn((dim, dim), |(a, b)| {
                let mp = (2 * a as i64 - j2 as i64) as f64 / 2.0;
                let m = (2 * b as i64 - j2 as i64) as f64 / 2.0;
                Complex64::from_polar(d[(a, b)], -(mp * alpha + m * gamma))
            })
        }
        _ => panic!("representation index does not match grid point type"),
    }
}

/// Fourier coefficients `xi -> f^(xi)` over an enumerated dual.
#[derive(Debug, Clone)]
pub struct SpectralField {
    dual: Arc<Dual>,
    coeffs: Vec<Array2<Complex64>>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.same_spec(other) && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(dual: Arc<Dual>) -> Self {
        let coeffs = dual
            .iter()
            .map(|r| Array2::zeros((r.dim, r.dim)))
            .collect();
        SpectralField { dual, coeffs }
    }

    pub fn from_fn(
        dual: Arc<Dual>,
        mut f: impl FnMut(&Representation) -> Array2<Complex64>,
    ) -> Result<Self, HarmonicError> {
        let coeffs: Vec<_> = dual.iter().map(&mut f).collect();
        Self::from_coeffs(dual, coeffs)
    }

    pub fn from_coeffs(
        dual: Arc<Dual>,
        coeffs: Vec<Array2<Complex64>>,
    ) -> Result<Self, HarmonicError> {
        if coeffs.len() != dual.len() {
            return Err(HarmonicError::ShapeMismatch {
                expected: dual.len(),
                got: coeffs.len(),
            });
        }
        for (r, c) in dual.iter().zip(&coeffs) {
            if c.dim() != (r.dim, r.dim) {
                return Err(HarmonicError::CoefficientShape {
                    index: r.index.clone(),
                    dim: r.dim,
                    got: c.dim(),
                });
            }
        }
        Ok(SpectralField { dual, coeffs })
    }

    /// The field whose only nonzero coefficient is the trivial mode `value`.
    pub fn constant(dual: Arc<Dual>, value: Complex64) -> Self {
        let mut f = Self::zeros(dual);
        let pos = f.dual.trivial_position();
        f.coeffs[pos][(0, 0)] = value;
        f
    }

    pub fn dual(&self) -> &Arc<Dual> {
        &self.dual
    }

    pub fn spec(&self) -> &GroupSpec {
        self.dual.spec()
    }

    pub fn coeffs(&self) -> &[Array2<Complex64>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Array2<Complex64>] {
        &mut self.coeffs
    }

    pub fn get(&self, index: &RepIndex) -> Option<&Array2<Complex64>> {
        self.dual.position(index).map(|p| &self.coeffs[p])
    }

    pub fn get_mut(&mut self, index: &RepIndex) -> Option<&mut Array2<Complex64>> {
        self.dual.position(index).map(|p| &mut self.coeffs[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Representation, &Array2<Complex64>)> {
        self.dual.iter().zip(&self.coeffs)
    }

    pub fn same_spec(&self, other: &SpectralField) -> bool {
        Arc::ptr_eq(&self.dual, &other.dual) || self.dual.spec() == other.dual.spec()
    }

    pub fn check_same_spec(&self, other: &SpectralField) -> Result<(), HarmonicError> {
        if self.same_spec(other) {
            Ok(())
        } else {
            Err(HarmonicError::SpecMismatch)
        }
    }

    /// Per-representation scalar multiplier `xi -> m(xi)`.
    pub fn map_scalar(&self, mut multiplier: impl FnMut(&Representation) -> f64) -> Self {
        let coeffs = self
            .dual
            .iter()
            .zip(&self.coeffs)
            .map(|(r, c)| c * Complex64::new(multiplier(r), 0.0))
            .collect();
        SpectralField {
            dual: self.dual.clone(),
            coeffs,
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        SpectralField {
            dual: self.dual.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &SpectralField, factor: Complex64) -> Result<(), HarmonicError> {
        self.check_same_spec(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.scaled_add(factor, b);
        }
        Ok(())
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self, HarmonicError> {
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(-1.0, 0.0))?;
        Ok(out)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> Result<f64, HarmonicError> {
        self.check_same_spec(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Samples of a function on a [`Grid`].
#[derive(Debug, Clone)]
pub struct GridField {
    grid: Arc<Grid>,
    samples: Vec<Complex64>,
}

impl GridField {
    pub fn new(grid: Arc<Grid>, samples: Vec<Complex64>) -> Result<Self, HarmonicError> {
        if samples.len() != grid.len() {
            return Err(HarmonicError::ShapeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        Ok(GridField { grid, samples })
    }

    pub fn from_fn(grid: Arc<Grid>, mut f: impl FnMut(&GridPoint) -> Complex64) -> Self {
        let samples = grid.points().map(|p| f(&p)).collect();
        GridField { grid, samples }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn spec(&self) -> &GroupSpec {
        self.grid.spec()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.weights()
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        GridField {
            grid: self.grid.clone(),
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

/// Forward group Fourier transform by quadrature.
pub fn forward_gft(f: &GridField) -> Result<SpectralField, HarmonicError> {
    let grid = &f.grid;
    if f.samples.len() != grid.len() {
        return Err(HarmonicError::ShapeMismatch {
            expected: grid.len(),
            got: f.samples.len(),
        });
    }
    let coeffs = match &grid.layout {
        Layout::Torus {
            dims,
            per_axis,
            forward,
            ..
        } => {
            let mut data = f.samples.clone();
            let mut shape = vec![*per_axis; *dims];
            for axis in 0..*dims {
                data = apply_along_axis(&data, &mut shape, axis, forward);
            }
            data.into_iter()
                .map(|z| Array2::from_elem((1, 1), z))
                .collect()
        }
        Layout::Euler(e) => euler_forward(e, grid.dual(), &f.samples),
    };
    SpectralField::from_coeffs(grid.dual.clone(), coeffs)
}

/// Inverse transform `f(x) = sum d_xi Tr(xi(x) F(xi))` evaluated on `grid`.
pub fn inverse_gft(field: &SpectralField, grid: &Arc<Grid>) -> Result<GridField, HarmonicError> {
    if field.dual.spec() != grid.spec() {
        return Err(HarmonicError::SpecMismatch);
    }
    let samples = match &grid.layout {
        Layout::Torus {
            dims,
            per_axis,
            inverse,
            ..
        } => {
            let modes = 2 * grid.spec.bandlimit() as usize + 1;
            let mut data: Vec<Complex64> = field.coeffs.iter().map(|c| c[(0, 0)]).collect();
            let mut shape = vec![modes; *dims];
            for axis in 0..*dims {
                data = apply_along_axis(&data, &mut shape, axis, inverse);
            }
            debug_assert!(shape.iter().all(|&s| s == *per_axis));
            data
        }
        Layout::Euler(e) => euler_inverse(e, field),
    };
    GridField::new(grid.clone(), samples)
}

/// Applies `mat` (out x in) along one axis of a row-major array.
fn apply_along_axis(
    data: &[Complex64],
    shape: &mut [usize],
    axis: usize,
    mat: &Array2<Complex64>,
) -> Vec<Complex64> {
    let (out_len, in_len) = mat.dim();
    debug_assert_eq!(shape[axis], in_len);
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * out_len * inner];
    for o in 0..outer {
        for r in 0..out_len {
            let dst = &mut out[(o * out_len + r) * inner..(o * out_len + r + 1) * inner];
            for c in 0..in_len {
                let m = mat[(r, c)];
                let src = &data[(o * in_len + c) * inner..(o * in_len + c + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += m * s;
                }
            }
        }
    }
    shape[axis] = out_len;
    out
}

fn euler_forward(e: &EulerLayout, dual: &Dual, samples: &[Complex64]) -> Vec<Array2<Complex64>> {
    let (na, nb, ng) = (e.alpha.len(), e.beta.len(), e.gamma.len());
    let mc = e.m_count();
    let j = e.j2_max as i64;
    // exp(+i m gamma) / Ng and exp(+i m' alpha) / Na for doubled m in -J..=J
    let gamma_phase = phase_table(&e.gamma, j, 1.0, ng);
    let alpha_phase = phase_table(&e.alpha, j, 1.0, na);
    // q[(a, b, m)] = sum_g f e^{i m g} / Ng
    let mut q = vec![Complex64::new(0.0, 0.0); na * nb * mc];
    for a in 0..na {
        for b in 0..nb {
            let row = &samples[(a * nb + b) * ng..(a * nb + b + 1) * ng];
            let dst = &mut q[(a * nb + b) * mc..(a * nb + b + 1) * mc];
            for (g, f) in row.iter().enumerate() {
                for (slot, d) in dst.iter_mut().enumerate() {
                    *d += f * gamma_phase[(g, slot)];
                }
            }
        }
    }
    // p[(b, m', m)] = sum_a q e^{i m' a} / Na
    let mut p = vec![Complex64::new(0.0, 0.0); nb * mc * mc];
    for a in 0..na {
        for b in 0..nb {
            let src = &q[(a * nb + b) * mc..(a * nb + b + 1) * mc];
            for mp in 0..mc {
                let ph = alpha_phase[(a, mp)];
                let dst = &mut p[(b * mc + mp) * mc..(b * mc + mp + 1) * mc];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += ph * s;
                }
            }
        }
    }
    dual.iter()
        .map(|rep| {
            let j2 = rep.index.doubled_spin().expect("Euler layout index") as i64;
            let dim = rep.dim;
            let mut out = Array2::zeros((dim, dim));
            for b in 0..nb {
                let d = &e.wigner[b][j2 as usize];
                let wb = e.beta_weights[b];
                for r in 0..dim {
                    let m_slot = e.m_slot(2 * r as i64 - j2);
                    for c in 0..dim {
                        let mp_slot = e.m_slot(2 * c as i64 - j2);
                        out[(r, c)] += p[(b * mc + mp_slot) * mc + m_slot] * (wb * d[(c, r)]);
                    }
                }
            }
            out
        })
        .collect()
}

fn euler_inverse(e: &EulerLayout, field: &SpectralField) -> Vec<Complex64> {
    let (na, nb, ng) = (e.alpha.len(), e.beta.len(), e.gamma.len());
    let mc = e.m_count();
    let j = e.j2_max as i64;
    // g[(b, m', m)] = sum_j d_j d^j_{m'm}(beta_b) F^j[m, m']
    let mut gsum = vec![Complex64::new(0.0, 0.0); nb * mc * mc];
    for (rep, coeff) in field.iter() {
        let j2 = rep.index.doubled_spin().expect("Euler layout index") as i64;
        let dim = rep.dim;
        let weight = dim as f64;
        for b in 0..nb {
            let d = &e.wigner[b][j2 as usize];
            for c in 0..dim {
                let mp_slot = e.m_slot(2 * c as i64 - j2);
                for r in 0..dim {
                    let m_slot = e.m_slot(2 * r as i64 - j2);
                    gsum[(b * mc + mp_slot) * mc + m_slot] += coeff[(r, c)] * (weight * d[(c, r)]);
                }
            }
        }
    }
    let alpha_phase = phase_table(&e.alpha, j, -1.0, 1);
    let gamma_phase = phase_table(&e.gamma, j, -1.0, 1);
    // h[(a, b, m)] = sum_{m'} e^{-i m' a} g[(b, m', m)]
    let mut h = vec![Complex64::new(0.0, 0.0); na * nb * mc];
    for a in 0..na {
        for b in 0..nb {
            let dst = &mut h[(a * nb + b) * mc..(a * nb + b + 1) * mc];
            for mp in 0..mc {
                let ph = alpha_phase[(a, mp)];
                let src = &gsum[(b * mc + mp) * mc..(b * mc + mp + 1) * mc];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += ph * s;
                }
            }
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); na * nb * ng];
    for a in 0..na {
        for b in 0..nb {
            let src = &h[(a * nb + b) * mc..(a * nb + b + 1) * mc];
            for g in 0..ng {
                let mut acc = Complex64::new(0.0, 0.0);
                for (slot, s) in src.iter().enumerate() {
                    acc += gamma_phase[(g, slot)] * s;
                }
                out[(a * nb + b) * ng + g] = acc;
            }
        }
    }
    out
}

/// `table[(node, slot)] = exp(sign * i * (m2/2) * angle) / norm` for doubled
/// `m2 = slot - J`.
fn phase_table(angles: &[f64], j2_max: i64, sign: f64, norm: usize) -> Array2<Complex64> {
    let mc = (2 * j2_max + 1) as usize;
    Array2::from_shape_fn((angles.len(), mc), |(i, slot)| {
        let m = (slot as i64 - j2_max) as f64 / 2.0;
        Complex64::from_polar(1.0 / norm as f64, sign * m * angles[i])
    })
}

/// `(sum_xi d_xi ||F(xi)||_HS^2)^{1/2}`.
pub fn plancherel_norm(field: &SpectralField) -> f64 {
    field
        .iter()
        .map(|(r, c)| r.dim as f64 * hs_norm_sq(c))
        .sum::<f64>()
        .sqrt()
}

fn hs_norm_sq(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `(-L)^{s/2}`, i.e. multiplies the coefficient at `xi` by
/// `(lambda_xi^2)^{s/2}`.
pub fn sobolev_apply(field: &SpectralField, s: f64) -> Result<SpectralField, HarmonicError> {
    if !(s >= 0.0) {
        return Err(HarmonicError::NegativeOrder(s));
    }
    Ok(field.map_scalar(|r| r.eigenvalue.to_f64().powf(s / 2.0)))
}

/// `H^1` norm `||f||_2 + ||(-L)^{1/2} f||_2`.
pub fn h1_norm(field: &SpectralField) -> f64 {
    let grad = field.map_scalar(|r| r.eigenvalue.sqrt_f64());
    plancherel_norm(field) + plancherel_norm(&grad)
}

/// `sup_xi d_xi^{-1/2} ||F(xi)||_HS`.
pub fn linf_dual_norm(field: &SpectralField) -> f64 {
    field
        .iter()
        .map(|(r, c)| hs_norm_sq(c).sqrt() / (r.dim as f64).sqrt())
        .fold(0.0, f64::max)
}

/// Quadrature `L^q` norm; pass `f64::INFINITY` for the sup norm.
pub fn lq_norm(f: &GridField, q: f64) -> Result<f64, HarmonicError> {
    if !(q >= 1.0) {
        return Err(HarmonicError::InvalidExponent(q));
    }
    if q.is_infinite() {
        return Ok(f.samples.iter().fold(0.0, |m, z| m.max(z.norm())));
    }
    let sum: f64 = f
        .samples
        .iter()
        .zip(f.weights())
        .map(|(z, w)| w * z.norm().powf(q))
        .sum();
    Ok(sum.powf(1.0 / q))
}
