//! Initial data from the `[data]` block.

use std::path::Path;
use std::sync::Arc;

use liewave_core::data::{self, RandomParams};
use liewave_core::evolution::CauchyData;
use liewave_core::group_spectra::{Dual, GroupKind, GroupSpec, RepIndex};
use liewave_core::{Complex64, SpectralField};

use crate::config::{LoadedConfig, Preset};
use crate::CliError;

/// Index of a single-mode preset, checked against the truncation.
pub fn rep_index(spec: &GroupSpec, index: &[i64]) -> Result<RepIndex, String> {
    let idx = match spec.kind() {
        GroupKind::Torus { radii } => {
            if index.len() != radii.len() {
                return Err(format!("index needs {} components, got {}", radii.len(), index.len()));
            }
            RepIndex::Torus(index.to_vec())
        }
        GroupKind::Su2 | GroupKind::So3 => {
            let [v] = index else {
                return Err(format!("index needs one component on {}", spec.name()));
            };
            let v = u32::try_from(*v).map_err(|_| format!("index must be nonnegative, got {v}"))?;
            if matches!(spec.kind(), GroupKind::Su2) {
                RepIndex::Su2(v)
            } else {
                RepIndex::So3(v)
            }
        }
    };
    if !spec.contains(&idx) {
        return Err(format!("{idx} lies outside bandlimit {}", spec.bandlimit()));
    }
    Ok(idx)
}

/// Reads a coefficient CSV (`rep,k,l,re,im`, header optional). Entries not
/// listed are zero.
pub fn read_coefficients(dual: Arc<Dual>, text: &str) -> Result<SpectralField, String> {
    let mut f = SpectralField::zeros(dual.clone());
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (n == 0 && line.starts_with("rep")) {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let [rep, k, l, re, im] = cols[..] else {
            return Err(format!("line {}: expected 5 columns", n + 1));
        };
        let idx: RepIndex = rep.parse().map_err(|e| format!("line {}: {e}", n + 1))?;
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("line {}: bad number {s:?}", n + 1));
        let ix = |s: &str| s.parse::<usize>().map_err(|_| format!("line {}: bad matrix index {s:?}", n + 1));
        let (k, l) = (ix(k)?, ix(l)?);
        let value = Complex64::new(num(re)?, num(im)?);
        let c = f
            .get_mut(&idx)
            .ok_or_else(|| format!("line {}: {idx} not in the truncated dual", n + 1))?;
        if k >= c.nrows() || l >= c.ncols() {
            return Err(format!("line {}: entry ({k},{l}) outside a {}x{} block", n + 1, c.nrows(), c.ncols()));
        }
        c[(k, l)] = value;
    }
    Ok(f)
}

pub fn field(preset: &Preset, dual: &Arc<Dual>, base_dir: &Path) -> Result<SpectralField, CliError> {
    let scale = |f: SpectralField, a: f64| f.scaled(Complex64::new(a, 0.0));
    let f = match preset {
        Preset::Zero => data::zero(dual.clone()),
        Preset::Constant { value } => data::constant(dual.clone(), *value),
        Preset::SingleMode { index, amplitude } => {
            let idx = rep_index(dual.spec(), index).map_err(CliError::Config)?;
            scale(data::single_mode(dual.clone(), &idx)?, *amplitude)
        }
        Preset::Random {
            seed,
            decay,
            normalize,
            amplitude,
        } => {
            let params = RandomParams {
                seed: *seed,
                decay: *decay,
                normalize: *normalize,
            };
            scale(data::random_real(dual.clone(), params)?, *amplitude)
        }
        Preset::MeanZeroL1 => data::mean_zero_unit_l1(dual.clone())?,
        Preset::File { path } => {
            let full = base_dir.join(path);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", full.display())))?;
            read_coefficients(dual.clone(), &text)
                .map_err(|e| CliError::Config(format!("{}: {e}", full.display())))?
        }
    };
    Ok(f)
}

pub fn cauchy_data(cfg: &LoadedConfig) -> Result<CauchyData, CliError> {
    let dual = Arc::new(Dual::new(cfg.spec.clone()));
    let d = &cfg.config.data;
    let u0 = field(&d.u0, &dual, &cfg.base_dir)?;
    let u1 = field(&d.u1, &dual, &cfg.base_dir)?;
    CauchyData::new(u0, u1, d.epsilon).map_err(|e| CliError::Config(e.to_string()))
}
