//! Run configuration.
//!
//! A run file is TOML with a top-level `experiment` key and the blocks
//! `[group]`, `[data]`, `[solver]`, `[params]` and `[output]`. Unknown keys
//! are rejected everywhere.

use std::path::{Path, PathBuf};

use liewave_core::analysis::gn_max_exponent;
use liewave_core::evolution::SemilinearConfig;
use liewave_core::group_spectra::GroupSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    PlancherelCheck,
    LinearDecay,
    L1Experiment,
    Semilinear,
    GnCheck,
    MultiplierCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::PlancherelCheck,
        Experiment::LinearDecay,
        Experiment::L1Experiment,
        Experiment::Semilinear,
        Experiment::GnCheck,
        Experiment::MultiplierCheck,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::PlancherelCheck => "plancherel_check",
            Experiment::LinearDecay => "linear_decay",
            Experiment::L1Experiment => "l1_experiment",
            Experiment::Semilinear => "semilinear",
            Experiment::GnCheck => "gn_check",
            Experiment::MultiplierCheck => "multiplier_check",
        }
    }

    /// Whether the experiment reads the `[data]` block.
    pub fn uses_data(&self) -> bool {
        matches!(self, Experiment::LinearDecay | Experiment::Semilinear)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupName {
    Torus,
    Su2,
    So3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub group: GroupName,
    /// Torus dimension; defaults to the number of radii, else 1.
    #[serde(default)]
    pub dims: Option<usize>,
    /// Torus radii; defaults to all ones.
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
    pub bandlimit: u32,
}

impl GroupBlock {
    pub fn to_spec(&self) -> Result<GroupSpec, CliError> {
        let spec = match self.group {
            GroupName::Torus => {
                let radii = match (&self.radii, self.dims) {
                    (Some(r), Some(d)) if r.len() != d => {
                        return Err(CliError::Config(format!(
                            "group.dims = {d} but {} radii were given",
                            r.len()
                        )))
                    }
                    (Some(r), _) => r.clone(),
                    (None, d) => vec![1.0; d.unwrap_or(1)],
                };
                GroupSpec::torus(radii, self.bandlimit)
            }
            GroupName::Su2 | GroupName::So3 => {
                if self.dims.is_some() || self.radii.is_some() {
                    return Err(CliError::Config("dims/radii only apply to group = \"torus\"".into()));
                }
                if self.group == GroupName::Su2 {
                    GroupSpec::su2(self.bandlimit)
                } else {
                    GroupSpec::so3(self.bandlimit)
                }
            }
        };
        spec.map_err(|e| CliError::Config(format!("group: {e}")))
    }
}

/// Named initial-data presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    Zero,
    Constant {
        value: f64,
    },
    /// `index` is `k` on tori, the doubled spin `m` on SU(2), `l` on SO(3).
    SingleMode {
        index: Vec<i64>,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Random {
        seed: u64,
        #[serde(default = "two")]
        decay: f64,
        #[serde(default = "yes")]
        normalize: bool,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Lowest nontrivial mode rescaled to unit L^1 norm.
    MeanZeroL1,
    /// Coefficient CSV in the dump format, relative to the config file.
    File {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn yes() -> bool {
    true
}

impl Preset {
    pub fn describe_all() -> Vec<(&'static str, &'static str)> {
        vec![
            ("zero", "u = 0"),
            ("constant", "u = value"),
            ("single_mode", "real unit-L2 mode: sqrt(2) cos(k.x) on tori, character on SU(2)/SO(3); keys index, amplitude"),
            ("random", "real random bandlimited field; keys seed, decay (2), normalize (true), amplitude (1)"),
            ("mean_zero_l1", "lowest nontrivial mode with unit L1 norm"),
            ("file", "coefficient CSV (rep,k,l,re,im) at path"),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataBlock {
    #[serde(default = "one")]
    pub epsilon: f64,
    #[serde(default = "zero_preset")]
    pub u0: Preset,
    #[serde(default = "zero_preset")]
    pub u1: Preset,
}

fn zero_preset() -> Preset {
    Preset::Zero
}

impl Default for DataBlock {
    fn default() -> Self {
        DataBlock {
            epsilon: 1.0,
            u0: Preset::Zero,
            u1: Preset::Zero,
        }
    }
}

/// Mirror of [`SemilinearConfig`] with every key optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub p: f64,
    pub t_final: f64,
    pub n_time_steps: usize,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub oversample: f64,
    pub amplitude_ceiling: f64,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let c = SemilinearConfig::default();
        SolverBlock {
            p: c.p,
            t_final: c.t_final,
            n_time_steps: c.n_time_steps,
            picard_tol: c.picard_tol,
            picard_max_iters: c.picard_max_iters,
            oversample: c.oversample,
            amplitude_ceiling: c.amplitude_ceiling,
        }
    }
}

impl SolverBlock {
    pub fn to_config(&self) -> SemilinearConfig {
        SemilinearConfig {
            p: self.p,
            t_final: self.t_final,
            n_time_steps: self.n_time_steps,
            picard_tol: self.picard_tol,
            picard_max_iters: self.picard_max_iters,
            oversample: self.oversample,
            amplitude_ceiling: self.amplitude_ceiling,
        }
    }
}

/// Experiment knobs. Keys an experiment does not use are ignored by it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsBlock {
    /// Number of random fields (plancherel_check, gn_check, l1_experiment);
    /// experiment default if unset.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Spectral decay of random fields; experiment default if unset.
    pub decay: Option<f64>,
    /// Grid oversample factor; experiment default if unset.
    pub oversample: Option<f64>,
    /// Time window `[0, t_max]` sampled at `n_times` points.
    pub t_max: f64,
    pub n_times: usize,
    pub calibration_end: f64,
    pub slack: f64,
    pub fit_window: [f64; 2],
    /// Lebesgue exponent for gn_check.
    pub q: f64,
    /// Dump coefficients at every `dump_stride`-th sample.
    pub dump_stride: usize,
}

impl Default for ParamsBlock {
    fn default() -> Self {
        ParamsBlock {
            samples: None,
            seed: 2024,
            decay: None,
            oversample: None,
            t_max: 30.0,
            n_times: 601,
            calibration_end: 1.0,
            slack: 1.01,
            fit_window: [5.0, 30.0],
            q: 4.0,
            dump_stride: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
    pub dump_coefficients: bool,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            directory: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
            dump_coefficients: false,
        }
    }
}

impl OutputBlock {
    pub fn csv(&self) -> bool {
        self.formats.contains(&Format::Csv)
    }

    pub fn json(&self) -> bool {
        self.formats.contains(&Format::Json)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub group: GroupBlock,
    #[serde(default)]
    pub data: DataBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub params: ParamsBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

/// A parsed and validated configuration plus the directory relative paths
/// are resolved against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub spec: GroupSpec,
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Checks every numeric field against the preconditions of the
    /// experiment it feeds.
    pub fn validate(&self) -> Result<GroupSpec, CliError> {
        let spec = self.group.to_spec()?;
        let p = &self.params;
        let bad = |m: String| Err(CliError::Config(m));
        if p.samples == Some(0) {
            return bad("params.samples must be positive".into());
        }
        if !(p.t_max > 0.0 && p.t_max.is_finite()) {
            return bad(format!("params.t_max must be > 0, got {}", p.t_max));
        }
        if p.n_times < 2 {
            return bad("params.n_times must be at least 2".into());
        }
        if !(p.calibration_end >= 0.0) || !(p.slack >= 1.0) {
            return bad("params.calibration_end must be >= 0 and params.slack >= 1".into());
        }
        if !(p.fit_window[0] < p.fit_window[1]) {
            return bad("params.fit_window must be increasing".into());
        }
        if p.dump_stride == 0 {
            return bad("params.dump_stride must be positive".into());
        }
        if let Some(d) = p.decay {
            if !(d >= 0.0 && d.is_finite()) {
                return bad(format!("params.decay must be >= 0, got {d}"));
            }
        }
        if let Some(o) = p.oversample {
            if !(o >= 1.0 && o.is_finite()) {
                return bad(format!("params.oversample must be >= 1, got {o}"));
            }
        }
        if !(self.data.epsilon >= 0.0 && self.data.epsilon.is_finite()) {
            return bad(format!("data.epsilon must be >= 0, got {}", self.data.epsilon));
        }
        for (name, preset) in [("u0", &self.data.u0), ("u1", &self.data.u1)] {
            if let Preset::SingleMode { index, .. } = preset {
                crate::presets::rep_index(&spec, index)
                    .map_err(|e| CliError::Config(format!("data.{name}: {e}")))?;
            }
            if let Preset::Random { decay, .. } = preset {
                if !(*decay >= 0.0) {
                    return bad(format!("data.{name}.decay must be >= 0"));
                }
            }
        }
        match self.experiment {
            Experiment::Semilinear => {
                self.solver
                    .to_config()
                    .validate(&spec)
                    .map_err(|e| CliError::Config(format!("solver: {e}")))?;
            }
            Experiment::GnCheck => {
                let n = spec.n_topological();
                if n < 3 {
                    return bad(format!("gn_check needs a group of dimension >= 3, got {n}"));
                }
                let max = gn_max_exponent(n);
                if !(p.q >= 2.0 && p.q <= max) {
                    return bad(format!("params.q must lie in [2, {max}], got {}", p.q));
                }
            }
            _ => {}
        }
        if self.output.formats.is_empty() {
            return bad("output.formats must not be empty".into());
        }
        Ok(spec)
    }
}

/// Reads, parses and validates a config file. Data files named by the
/// `file` preset are checked for readability here.
pub fn load(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let config = RunConfig::from_toml_str(&text)?;
    let spec = config.validate()?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let loaded = LoadedConfig { config, spec, base_dir };
    if loaded.config.experiment.uses_data() {
        crate::presets::cauchy_data(&loaded)?;
    }
    Ok(loaded)
}
