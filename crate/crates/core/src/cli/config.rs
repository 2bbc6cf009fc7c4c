use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::laplace::InversionConfig;
use crate::model::{ModelParams, WaveParams};
use crate::ou::OUParams;
use crate::solvers::VolterraConfig;

/// Effective run configuration; every field has a default so a config
/// file only needs the keys it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: u64,
    /// Continued-fraction depths to invert, strictly increasing.
    pub depths: Vec<usize>,
    pub out: PathBuf,
    pub ou: OuSection,
    pub oscillator: OscillatorSection,
    pub wave: WaveSection,
    pub inversion: InversionSection,
    pub volterra: VolterraSection,
    pub residual: ResidualSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OuSection {
    pub sigma: f64,
    pub lambda: f64,
    pub t_max: f64,
    pub n_steps: usize,
    /// Number of sampled paths written out (the estimate uses all samples).
    pub paths_written: usize,
    pub max_lag: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillatorSection {
    pub nu: f64,
    pub mu_kernel: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub t_max: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveSection {
    pub k: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub xi_max: f64,
    pub n_steps: usize,
    /// Values of sigma in the attenuation-ordering table, spread over `(0, sigma_table_max]`.
    pub sigma_table_points: usize,
    pub sigma_table_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InversionSection {
    pub tolerance: f64,
    pub series_terms: usize,
    pub euler_order: usize,
    pub max_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VolterraSection {
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualSection {
    /// Sample points `[re, im]` in the right half plane.
    pub points: Vec<[f64; 2]>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 1000,
            depths: vec![2, 3, 30],
            out: PathBuf::from("out"),
            ou: OuSection::default(),
            oscillator: OscillatorSection::default(),
            wave: WaveSection::default(),
            inversion: InversionSection::default(),
            volterra: VolterraSection::default(),
            residual: ResidualSection::default(),
        }
    }
}

impl Default for OuSection {
    fn default() -> Self {
        Self {
            sigma: 0.2,
            lambda: 0.1,
            t_max: 100.0,
            n_steps: 1001,
            paths_written: 5,
            max_lag: 50,
        }
    }
}

impl Default for OscillatorSection {
    fn default() -> Self {
        Self {
            nu: 0.04,
            mu_kernel: 0.0,
            sigma: 0.1,
            lambda: 0.1,
            t_max: 20.0,
            n_steps: 2001,
        }
    }
}

impl Default for WaveSection {
    fn default() -> Self {
        Self {
            k: 10.0,
            sigma: 0.1,
            lambda: 0.05,
            xi_max: 4.0,
            n_steps: 4001,
            sigma_table_points: 100,
            sigma_table_max: 0.5,
        }
    }
}

impl Default for InversionSection {
    fn default() -> Self {
        let d = InversionConfig::default();
        Self {
            tolerance: 1e-8,
            series_terms: d.series_terms,
            euler_order: d.euler_order,
            max_terms: d.max_terms,
        }
    }
}

impl Default for VolterraSection {
    fn default() -> Self {
        Self {
            tolerance: VolterraConfig::default().tolerance,
        }
    }
}

impl Default for ResidualSection {
    fn default() -> Self {
        Self {
            points: vec![[0.5, 0.0], [1.0, 1.0], [0.2, 5.0], [2.0, -3.0], [5.0, 10.0]],
        }
    }
}

fn config_err(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Re-home a parameter error under a section prefix.
fn scoped(section: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parameter { field, reason } => config_err(format!("{section}.{field}"), reason),
        other => config_err(section, other.to_string()),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let reason = e.message().to_owned();
            let field = e
                .span()
                .and_then(|s| text.get(..s.start))
                .map(|before| format!("line {}", before.lines().count().max(1)))
                .unwrap_or_else(|| "<config>".into());
            config_err(field, reason)
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        if self.depths.is_empty() {
            return Err(config_err("depths", "must not be empty"));
        }
        if self.depths[0] == 0 {
            return Err(config_err("depths", "depths start at 1"));
        }
        if self.depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_err("depths", "must be strictly increasing"));
        }
        if self.samples < 2 {
            return Err(config_err("samples", format!("must be >= 2, got {}", self.samples)));
        }
        self.ou_params()?;
        self.ou_grid()?;
        if self.ou.max_lag >= self.ou.n_steps {
            return Err(config_err("ou.max_lag", "must be below ou.n_steps"));
        }
        self.model_params()?;
        self.model_grid()?;
        self.wave_params()?;
        self.wave_grid()?;
        if self.wave.sigma_table_points == 0 {
            return Err(config_err("wave.sigma_table_points", "must be >= 1"));
        }
        if !(self.wave.sigma_table_max > 0.0 && self.wave.sigma_table_max.is_finite()) {
            return Err(config_err("wave.sigma_table_max", "must be finite and > 0"));
        }
        let inv = &self.inversion;
        if !(inv.tolerance > 0.0 && inv.tolerance < 1.0) {
            return Err(config_err("inversion.tolerance", "must lie in (0, 1)"));
        }
        if inv.series_terms < 16 {
            return Err(config_err("inversion.series_terms", "must be >= 16"));
        }
        if inv.max_terms < inv.series_terms {
            return Err(config_err("inversion.max_terms", "must be >= inversion.series_terms"));
        }
        if !(self.volterra.tolerance > 0.0) {
            return Err(config_err("volterra.tolerance", "must be > 0"));
        }
        for (i, p) in self.residual.points.iter().enumerate() {
            if !(p[0] > 0.0 && p[1].is_finite()) {
                return Err(config_err(
                    format!("residual.points[{i}]"),
                    "points must lie in the open right half plane",
                ));
            }
        }
        Ok(())
    }

    pub fn ou_params(&self) -> Result<OUParams> {
        OUParams::new(self.ou.sigma, self.ou.lambda).map_err(scoped("ou"))
    }

    pub fn ou_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.ou.t_max, self.ou.n_steps).map_err(scoped("ou"))
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let s = &self.oscillator;
        let p = ModelParams::new(s.nu, s.mu_kernel, s.sigma, s.lambda).map_err(scoped("oscillator"))?;
        p.ou.validate().map_err(scoped("oscillator"))?;
        Ok(p)
    }

    pub fn model_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.oscillator.t_max, self.oscillator.n_steps).map_err(scoped("oscillator"))
    }

    pub fn wave_params(&self) -> Result<WaveParams> {
        let s = &self.wave;
        let p = WaveParams::new(s.k, s.sigma, s.lambda).map_err(scoped("wave"))?;
        p.ou.validate().map_err(scoped("wave"))?;
        Ok(p)
    }

    pub fn wave_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.wave.xi_max, self.wave.n_steps).map_err(scoped("wave"))
    }

    pub fn inversion_config(&self) -> InversionConfig {
        InversionConfig {
            shift: None,
            series_terms: self.inversion.series_terms,
            euler_order: self.inversion.euler_order,
            tolerance: self.inversion.tolerance,
            max_terms: self.inversion.max_terms,
        }
    }

    pub fn volterra_config(&self) -> VolterraConfig {
        VolterraConfig {
            tolerance: self.volterra.tolerance,
        }
    }
}
