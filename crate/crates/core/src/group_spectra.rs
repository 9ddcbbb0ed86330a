//! Truncated unitary duals of T^n, SU(2) and SO(3).
//!
//! Eigenvalues of `-L` are kept as exact rationals so that the region split
//! `lambda^2 = 0 | (0,1) | 1 | > 1` never depends on floating comparisons.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("bandlimit must be at least 1, got {0}")]
    InvalidBandlimit(u32),
    #[error("torus needs at least one dimension")]
    NoDimensions,
    #[error("torus radius {0} is not a positive finite number")]
    InvalidRadius(f64),
    #[error("spectral gaps are undefined for a dual containing only the trivial representation")]
    OnlyTrivial,
    #[error("empty representation list")]
    Empty,
    #[error("negative eigenvalue {0}")]
    NegativeEigenvalue(Eigenvalue),
    #[error("cannot parse representation index {0:?}")]
    BadIndex(String),
}

/// Exact Laplace-Beltrami eigenvalue `lambda_xi^2`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigenvalue(Ratio<i128>);

impl Eigenvalue {
    pub const ZERO: Eigenvalue = Eigenvalue(Ratio::new_raw(0, 1));
    pub const ONE: Eigenvalue = Eigenvalue(Ratio::new_raw(1, 1));

    pub fn new(numer: i128, denom: i128) -> Self {
        Eigenvalue(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Self {
        Eigenvalue(Ratio::from_integer(n))
    }

    pub fn ratio(&self) -> Ratio<i128> {
        self.0
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0 < Ratio::zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `lambda_xi = sqrt(lambda_xi^2)`.
    pub fn sqrt_f64(&self) -> f64 {
        self.to_f64().sqrt()
    }
}

impl fmt::Debug for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Eigenvalue({})", self.0)
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The four-way partition of the dual by eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    /// `lambda^2 = 0`
    R1,
    /// `0 < lambda^2 < 1`
    R2,
    /// `lambda^2 = 1`
    R3,
    /// `lambda^2 > 1`
    R4,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::R1, Region::R2, Region::R3, Region::R4];

    pub fn name(&self) -> &'static str {
        match self {
            Region::R1 => "R1",
            Region::R2 => "R2",
            Region::R3 => "R3",
            Region::R4 => "R4",
        }
    }
}

/// Classifies an eigenvalue into its region. Exact.
pub fn region_of(eigenvalue: Eigenvalue) -> Result<Region, SpecError> {
    if eigenvalue.is_negative() {
        return Err(SpecError::NegativeEigenvalue(eigenvalue));
    }
    Ok(if eigenvalue.is_zero() {
        Region::R1
    } else {
        match eigenvalue.cmp(&Eigenvalue::ONE) {
            Ordering::Less => Region::R2,
            Ordering::Equal => Region::R3,
            Ordering::Greater => Region::R4,
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupKind {
    /// Flat torus `prod_j R/(2 pi r_j Z)`.
    Torus { radii: Vec<f64> },
    Su2,
    So3,
}

/// A group together with its spectral truncation.
///
/// The bandlimit `B` keeps `|k|_inf <= B` on tori, `2l <= B` on SU(2) and
/// `l <= B` on SO(3).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    kind: GroupKind,
    bandlimit: u32,
    // exact 1/r_j^2 per torus axis
    inv_radius_sq: Vec<Ratio<i128>>,
}

impl GroupSpec {
    pub fn torus(radii: Vec<f64>, bandlimit: u32) -> Result<Self, SpecError> {
        if radii.is_empty() {
            return Err(SpecError::NoDimensions);
        }
        check_bandlimit(bandlimit)?;
        let mut inv_radius_sq = Vec::with_capacity(radii.len());
        for &r in &radii {
            if !(r.is_finite() && r > 0.0) {
                return Err(SpecError::InvalidRadius(r));
            }
            let r2 = rational_approximation(r * r, RADIUS_DENOMINATOR_LIMIT);
            inv_radius_sq.push(r2.recip());
        }
        Ok(GroupSpec {
            kind: GroupKind::Torus { radii },
            bandlimit,
            inv_radius_sq,
        })
    }

    /// Unit-radius torus of the given dimension.
    pub fn unit_torus(dims: usize, bandlimit: u32) -> Result<Self, SpecError> {
        Self::torus(vec![1.0; dims], bandlimit)
    }

    pub fn su2(bandlimit: u32) -> Result<Self, SpecError> {
        check_bandlimit(bandlimit)?;
        Ok(GroupSpec {
            kind: GroupKind::Su2,
            bandlimit,
            inv_radius_sq: Vec::new(),
        })
    }

    pub fn so3(bandlimit: u32) -> Result<Self, SpecError> {
        check_bandlimit(bandlimit)?;
        Ok(GroupSpec {
            kind: GroupKind::So3,
            bandlimit,
            inv_radius_sq: Vec::new(),
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn bandlimit(&self) -> u32 {
        self.bandlimit
    }

    /// Same group with a different truncation.
    pub fn with_bandlimit(&self, bandlimit: u32) -> Result<Self, SpecError> {
        check_bandlimit(bandlimit)?;
        let mut spec = self.clone();
        spec.bandlimit = bandlimit;
        Ok(spec)
    }

    /// Topological dimension: `n` for `T^n`, 3 for SU(2) and SO(3).
    pub fn n_topological(&self) -> usize {
        match &self.kind {
            GroupKind::Torus { radii } => radii.len(),
            GroupKind::Su2 | GroupKind::So3 => 3,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, GroupKind::Torus { .. })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GroupKind::Torus { .. } => "torus",
            GroupKind::Su2 => "su2",
            GroupKind::So3 => "so3",
        }
    }

    /// Radius list for tori, empty otherwise.
    pub fn radii(&self) -> &[f64] {
        match &self.kind {
            GroupKind::Torus { radii } => radii,
            _ => &[],
        }
    }

    pub fn eigenvalue(&self, index: &RepIndex) -> Eigenvalue {
        match index {
            RepIndex::Torus(k) => {
                let sum = k
                    .iter()
                    .zip(&self.inv_radius_sq)
                    .fold(Ratio::zero(), |acc, (&kj, inv)| {
                        acc + Ratio::from_integer(kj as i128 * kj as i128) * inv
                    });
                Eigenvalue(sum)
            }
            // l(l+1) with l = m/2
            RepIndex::Su2(m) => Eigenvalue::new(*m as i128 * (*m as i128 + 2), 4),
            RepIndex::So3(l) => Eigenvalue::from_integer(*l as i128 * (*l as i128 + 1)),
        }
    }

    pub fn contains(&self, index: &RepIndex) -> bool {
        let b = self.bandlimit as i64;
        match (index, &self.kind) {
            (RepIndex::Torus(k), GroupKind::Torus { radii }) => {
                k.len() == radii.len() && k.iter().all(|kj| kj.abs() <= b)
            }
            (RepIndex::Su2(m), GroupKind::Su2) => *m <= self.bandlimit,
            (RepIndex::So3(l), GroupKind::So3) => *l <= self.bandlimit,
            _ => false,
        }
    }
}

fn check_bandlimit(bandlimit: u32) -> Result<(), SpecError> {
    if bandlimit == 0 {
        Err(SpecError::InvalidBandlimit(bandlimit))
    } else {
        Ok(())
    }
}

/// Squared radii are read through their best rational approximation with
/// denominator at most this value.
pub const RADIUS_DENOMINATOR_LIMIT: i128 = 1_000_000;

/// Best rational approximation of a positive real with bounded denominator
/// (continued-fraction convergents plus the best semiconvergent).
fn rational_approximation(x: f64, max_denom: i128) -> Ratio<i128> {
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        let ai = a as i128;
        let q2 = q0 + ai * q1;
        if q2 > max_denom {
            // largest admissible semiconvergent
            let k = (max_denom - q0) / q1;
            let (ps, qs) = (p0 + k * p1, q0 + k * q1);
            let conv = Ratio::new(p1, q1);
            let semi = Ratio::new(ps, qs);
            let err = |r: Ratio<i128>| (r.to_f64().unwrap() - x).abs();
            return if err(semi) < err(conv) { semi } else { conv };
        }
        let p2 = p0 + ai * p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rem - a;
        if frac.abs() < 1e-15 * x.max(1.0) {
            break;
        }
        rem = 1.0 / frac;
    }
    Ratio::new(p1, q1)
}

/// A point of the unitary dual.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepIndex {
    /// Character `x -> exp(i k.x)`.
    Torus(Vec<i64>),
    /// Doubled spin `m = 2l`.
    Su2(u32),
    /// Integer spin `l`.
    So3(u32),
}

impl RepIndex {
    /// Twice the spin for SU(2)/SO(3); `None` on tori.
    pub fn doubled_spin(&self) -> Option<u32> {
        match self {
            RepIndex::Torus(_) => None,
            RepIndex::Su2(m) => Some(*m),
            RepIndex::So3(l) => Some(2 * l),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            RepIndex::Torus(_) => 1,
            RepIndex::Su2(m) => *m as usize + 1,
            RepIndex::So3(l) => 2 * *l as usize + 1,
        }
    }
}

impl fmt::Display for RepIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepIndex::Torus(k) => {
                let parts: Vec<String> = k.iter().map(|v| v.to_string()).collect();
                write!(f, "k=({})", parts.join(";"))
            }
            RepIndex::Su2(m) => write!(f, "m={m}"),
            RepIndex::So3(l) => write!(f, "l={l}"),
        }
    }
}

/// Parses the [`fmt::Display`] form: `k=(1;-2)`, `m=3`, `l=2`.
impl std::str::FromStr for RepIndex {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpecError::BadIndex(s.to_string());
        let (tag, rest) = s.trim().split_once('=').ok_or_else(bad)?;
        match tag.trim() {
            "k" => {
                let inner = rest.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                let k = inner
                    .split(';')
                    .map(|v| v.trim().parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(RepIndex::Torus(k))
            }
            "m" => rest.trim().parse().map(RepIndex::Su2).map_err(|_| bad()),
            "l" => rest.trim().parse().map(RepIndex::So3).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub index: RepIndex,
    pub dim: usize,
    pub eigenvalue: Eigenvalue,
    pub region: Region,
}

/// The enumerated truncated dual of a [`GroupSpec`], in lexicographic index
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    spec: GroupSpec,
    reps: Vec<Representation>,
}

impl Dual {
    pub fn new(spec: GroupSpec) -> Self {
        let reps = enumerate_dual(&spec);
        Dual { spec, reps }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Representation> {
        self.reps.iter()
    }

    pub fn position(&self, index: &RepIndex) -> Option<usize> {
        self.reps.binary_search_by(|r| r.index.cmp(index)).ok()
    }

    pub fn trivial_position(&self) -> usize {
        self.reps
            .iter()
            .position(|r| r.region == Region::R1)
            .expect("dual always contains the trivial representation")
    }

    /// Number of Peter-Weyl basis functions `sqrt(d) xi_ij` retained.
    pub fn basis_size(&self) -> usize {
        self.reps.iter().map(|r| r.dim * r.dim).sum()
    }

    pub fn gaps(&self) -> Result<SpectralGaps, SpecError> {
        spectral_gaps(&self.reps)
    }
}

/// Lists the truncated dual in lexicographic index order.
pub fn enumerate_dual(spec: &GroupSpec) -> Vec<Representation> {
    let indices: Vec<RepIndex> = match spec.kind() {
        GroupKind::Torus { radii } => {
            let b = spec.bandlimit() as i64;
            let side = (2 * b + 1) as usize;
            let count = side.pow(radii.len() as u32);
            (0..count)
                .map(|mut flat| {
                    let mut k = vec![0i64; radii.len()];
                    for slot in k.iter_mut().rev() {
                        *slot = (flat % side) as i64 - b;
                        flat /= side;
                    }
                    RepIndex::Torus(k)
                })
                .collect()
        }
        GroupKind::Su2 => (0..=spec.bandlimit()).map(RepIndex::Su2).collect(),
        GroupKind::So3 => (0..=spec.bandlimit()).map(RepIndex::So3).collect(),
    };
    indices
        .into_iter()
        .map(|index| {
            let eigenvalue = spec.eigenvalue(&index);
            Representation {
                dim: index.dim(),
                region: region_of(eigenvalue).expect("eigenvalues of -L are nonnegative"),
                eigenvalue,
                index,
            }
        })
        .collect()
}

/// Constructive gap constants over a finite list of representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGaps {
    /// `min(lambda^2, 1)` minimised over nonzero eigenvalues.
    pub delta1: Eigenvalue,
    /// Largest eigenvalue in R2.
    pub delta2: Option<Eigenvalue>,
    /// Least eigenvalue in R4.
    pub delta3: Option<Eigenvalue>,
}

impl SpectralGaps {
    pub fn delta1_f64(&self) -> f64 {
        self.delta1.to_f64()
    }
}

pub fn spectral_gaps(reps: &[Representation]) -> Result<SpectralGaps, SpecError> {
    if reps.is_empty() {
        return Err(SpecError::Empty);
    }
    let nonzero = reps.iter().map(|r| r.eigenvalue).filter(|e| !e.is_zero());
    let delta1 = nonzero
        .map(|e| e.min(Eigenvalue::ONE))
        .min()
        .ok_or(SpecError::OnlyTrivial)?;
    let delta2 = reps
        .iter()
        .filter(|r| r.region == Region::R2)
        .map(|r| r.eigenvalue)
        .max();
    let delta3 = reps
        .iter()
        .filter(|r| r.region == Region::R4)
        .map(|r| r.eigenvalue)
        .min();
    Ok(SpectralGaps {
        delta1,
        delta2,
        delta3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(n: i128, d: i128) -> Eigenvalue {
        Eigenvalue::new(n, d)
    }

    #[test]
    fn unit_circle_dual() {
        let spec = GroupSpec::unit_torus(1, 2).unwrap();
        let reps = enumerate_dual(&spec);
        let ks: Vec<_> = reps.iter().map(|r| r.index.clone()).collect();
        assert_eq!(
            ks,
            (-2..=2).map(|k| RepIndex::Torus(vec![k])).collect::<Vec<_>>()
        );
        let eigs: Vec<_> = reps.iter().map(|r| r.eigenvalue).collect();
        assert_eq!(
            eigs,
            [4, 1, 0, 1, 4].map(Eigenvalue::from_integer).to_vec()
        );
        assert!(reps.iter().all(|r| r.dim == 1));
    }

    #[test]
    fn su2_dual() {
        let reps = enumerate_dual(&GroupSpec::su2(2).unwrap());
        assert_eq!(reps.iter().map(|r| r.dim).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(
            reps.iter().map(|r| r.eigenvalue).collect::<Vec<_>>(),
            vec![Eigenvalue::ZERO, eig(3, 4), eig(2, 1)]
        );
        assert_eq!(reps[1].region, Region::R2);
    }

    #[test]
    fn so3_dual() {
        let reps = enumerate_dual(&GroupSpec::so3(2).unwrap());
        assert_eq!(reps.iter().map(|r| r.dim).collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(reps[1].eigenvalue, eig(2, 1));
        assert_eq!(reps[2].eigenvalue, eig(6, 1));
    }

    #[test]
    fn two_torus_dual() {
        let spec = GroupSpec::unit_torus(2, 1).unwrap();
        let reps = enumerate_dual(&spec);
        assert_eq!(reps.len(), 9);
        let r = reps
            .iter()
            .find(|r| r.index == RepIndex::Torus(vec![1, 1]))
            .unwrap();
        assert_eq!(r.eigenvalue, Eigenvalue::from_integer(2));
        assert_eq!(r.region, Region::R4);
    }

    #[test]
    fn regions_are_exact() {
        assert_eq!(region_of(Eigenvalue::ZERO).unwrap(), Region::R1);
        assert_eq!(region_of(eig(3, 4)).unwrap(), Region::R2);
        assert_eq!(region_of(Eigenvalue::ONE).unwrap(), Region::R3);
        assert_eq!(region_of(eig(1_000_001, 1_000_000)).unwrap(), Region::R4);
        assert_eq!(region_of(eig(999_999, 1_000_000)).unwrap(), Region::R2);
        assert!(region_of(eig(-1, 2)).is_err());
    }

    #[test]
    fn gaps_examples() {
        let circle = Dual::new(GroupSpec::unit_torus(1, 2).unwrap());
        let g = circle.gaps().unwrap();
        assert_eq!(g.delta1, Eigenvalue::ONE);
        assert_eq!(g.delta2, None);
        assert_eq!(g.delta3, Some(Eigenvalue::from_integer(4)));

        let su2 = Dual::new(GroupSpec::su2(2).unwrap());
        let g = su2.gaps().unwrap();
        assert_eq!(g.delta1, eig(3, 4));
        assert_eq!(g.delta2, Some(eig(3, 4)));
        assert_eq!(g.delta3, Some(Eigenvalue::from_integer(2)));

        let wide = Dual::new(GroupSpec::torus(vec![2.0], 2).unwrap());
        let g = wide.gaps().unwrap();
        assert_eq!(g.delta1, eig(1, 4));
        assert_eq!(g.delta2, Some(eig(1, 4)));
        assert_eq!(g.delta3, None);
        // k = 2 on the radius-2 circle sits exactly on the resonance
        assert_eq!(wide.reps()[0].region, Region::R3);
    }

    #[test]
    fn gaps_errors() {
        let reps = enumerate_dual(&GroupSpec::su2(2).unwrap());
        assert_eq!(spectral_gaps(&reps[..1]), Err(SpecError::OnlyTrivial));
        assert_eq!(spectral_gaps(&[]), Err(SpecError::Empty));
    }

    #[test]
    fn invalid_specs() {
        assert!(GroupSpec::su2(0).is_err());
        assert!(GroupSpec::torus(vec![], 2).is_err());
        assert!(GroupSpec::torus(vec![1.0, -1.0], 2).is_err());
        assert!(GroupSpec::torus(vec![f64::NAN], 2).is_err());
    }

    #[test]
    fn radius_rationalisation() {
        let spec = GroupSpec::torus(vec![1.5, 0.5], 1).unwrap();
        assert_eq!(
            spec.eigenvalue(&RepIndex::Torus(vec![1, 0])),
            eig(4, 9)
        );
        assert_eq!(
            spec.eigenvalue(&RepIndex::Torus(vec![0, 1])),
            Eigenvalue::from_integer(4)
        );
        let r = rational_approximation(std::f64::consts::PI, 1000);
        assert_eq!(r, Ratio::new(355, 113));
    }

    #[test]
    fn topological_dimension() {
        assert_eq!(GroupSpec::unit_torus(4, 1).unwrap().n_topological(), 4);
        assert_eq!(GroupSpec::su2(1).unwrap().n_topological(), 3);
        assert_eq!(GroupSpec::so3(1).unwrap().n_topological(), 3);
    }

    #[test]
    fn single_trivial_and_basis_count() {
        for spec in [
            GroupSpec::unit_torus(2, 3).unwrap(),
            GroupSpec::torus(vec![2.0, 0.7, 1.0], 2).unwrap(),
            GroupSpec::su2(5).unwrap(),
            GroupSpec::so3(4).unwrap(),
        ] {
            let dual = Dual::new(spec.clone());
            assert_eq!(
                dual.iter().filter(|r| r.region == Region::R1).count(),
                1,
                "{spec:?}"
            );
            for r in dual.iter() {
                assert_eq!(region_of(r.eigenvalue).unwrap(), r.region);
                assert!(spec.contains(&r.index));
            }
            let expected = match spec.kind() {
                GroupKind::Torus { radii } => {
                    (2 * spec.bandlimit() as usize + 1).pow(radii.len() as u32)
                }
                GroupKind::Su2 => (1..=spec.bandlimit() as usize + 1).map(|d| d * d).sum(),
                GroupKind::So3 => (0..=spec.bandlimit() as usize)
                    .map(|l| (2 * l + 1) * (2 * l + 1))
                    .sum(),
            };
            assert_eq!(dual.basis_size(), expected);
        }
    }

    #[test]
    fn prefix_consistent_in_bandlimit() {
        for spec in [
            GroupSpec::unit_torus(2, 2).unwrap(),
            GroupSpec::su2(3).unwrap(),
            GroupSpec::so3(3).unwrap(),
        ] {
            let small = enumerate_dual(&spec);
            let big = enumerate_dual(&spec.with_bandlimit(spec.bandlimit() + 1).unwrap());
            // small is an order-preserving subsequence of big
            let mut it = big.iter();
            for r in &small {
                assert!(it.any(|b| b == r), "{r:?} missing or out of order");
            }
        }
    }

    #[test]
    fn rep_index_parses_its_display_form() {
        for idx in [RepIndex::Torus(vec![1, -2, 0]), RepIndex::Torus(vec![3]), RepIndex::Su2(5), RepIndex::So3(2)] {
            assert_eq!(idx.to_string().parse::<RepIndex>(), Ok(idx));
        }
        for bad in ["k=1", "m=-1", "x=2", "k=(1;a)", ""] {
            assert!(bad.parse::<RepIndex>().is_err(), "{bad}");
        }
    }
}
