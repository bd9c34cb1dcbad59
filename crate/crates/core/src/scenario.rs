//! Scenario description and its flat `key = value` file format.
//!
//! One assignment per line, `#` starts a comment, lists are comma
//! separated. Unknown keys are rejected. Relative paths are resolved
//! against the directory of the scenario file. Every key is optional and
//! defaults to the reference parameter set (5 users, 5 channels of 180 kHz,
//! -174 dBm/Hz, 128.1 + 37.6·log10(d) pathloss, 6 dB shadowing, 10 dBm,
//! K = 20, ξ_th = 0.9, Φ_th = 0.025, μ = 40, 500 m cell).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::allocator::Constraints;
use crate::channel::RadioParams;
use crate::error::{Error, Result};
use crate::link_adaptation::{load_cqi_table, CqiTable, CqiTables, SystemKind};
use crate::metrics::{SourceStats, TransformFactor};
use crate::similarity::{default_surrogate, load_surface, SimilaritySurface};

pub const DEFAULT_DROPS: usize = 500;

/// Parameters that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepParam {
    NChannels,
    TxPowerDbm,
    Mu,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::NChannels => "n_channels",
            SweepParam::TxPowerDbm => "tx_power_dbm",
            SweepParam::Mu => "mu",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n_channels" => Ok(SweepParam::NChannels),
            "tx_power_dbm" => Ok(SweepParam::TxPowerDbm),
            "mu" => Ok(SweepParam::Mu),
            other => Err(Error::validation(format!("cannot sweep '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSource {
    Surrogate,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableSource {
    Builtin,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_users: usize,
    pub n_channels: usize,
    pub radio: RadioParams,
    pub constraints: Constraints,
    pub tf: TransformFactor,
    pub src: SourceStats,
    pub systems: Vec<SystemKind>,
    pub surface_source: SurfaceSource,
    pub cqi_4g: TableSource,
    pub cqi_5g: TableSource,
    pub cqi_4g_thresholds_db: Option<Vec<f64>>,
    pub cqi_5g_thresholds_db: Option<Vec<f64>>,
    pub n_drops: usize,
    pub base_seed: u64,
    pub sweep: Option<Sweep>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_users: 5,
            n_channels: 5,
            radio: RadioParams::default(),
            constraints: Constraints::default(),
            tf: TransformFactor::default(),
            src: SourceStats::default(),
            systems: SystemKind::ALL.to_vec(),
            surface_source: SurfaceSource::Surrogate,
            cqi_4g: TableSource::Builtin,
            cqi_5g: TableSource::Builtin,
            cqi_4g_thresholds_db: None,
            cqi_5g_thresholds_db: None,
            n_drops: DEFAULT_DROPS,
            base_seed: 1,
            sweep: None,
        }
    }
}

/// Surface and CQI tables a scenario refers to, loaded once.
#[derive(Debug, Clone)]
pub struct Resources {
    pub surface: SimilaritySurface,
    pub tables: CqiTables,
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::validation(format!("{key}: '{}' is not a valid number", value.trim())))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

fn resolve(base: &Path, value: &str) -> PathBuf {
    let p = PathBuf::from(value.trim());
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

impl ScenarioConfig {
    /// Parse scenario text; relative paths are resolved against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut sweep_param: Option<SweepParam> = None;
        let mut sweep_values: Option<Vec<f64>> = None;
        let mut seen = std::collections::HashSet::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::validation(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::validation(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            match key {
                "n_users" => cfg.n_users = parse_num(key, value)?,
                "n_channels" => cfg.n_channels = parse_num(key, value)?,
                "bandwidth_hz" => cfg.radio.bandwidth_hz = parse_num(key, value)?,
                "noise_psd_dbm_hz" => cfg.radio.noise_psd_dbm_hz = parse_num(key, value)?,
                "tx_power_dbm" => cfg.radio.tx_power_dbm = parse_num(key, value)?,
                "pathloss_a" => cfg.radio.pathloss_a = parse_num(key, value)?,
                "pathloss_b" => cfg.radio.pathloss_b = parse_num(key, value)?,
                "shadow_sigma_db" => cfg.radio.shadow_sigma_db = parse_num(key, value)?,
                "cell_radius_km" => cfg.radio.cell_radius_km = parse_num(key, value)?,
                "k_max" => cfg.constraints.k_max = parse_num(key, value)?,
                "xi_threshold" => cfg.constraints.xi_threshold = parse_num(key, value)?,
                "sse_threshold" => cfg.constraints.sse_threshold = parse_num(key, value)?,
                "mu" => cfg.tf = TransformFactor::new(parse_num(key, value)?)?,
                "i_over_l" => cfg.src = SourceStats::new(parse_num(key, value)?)?,
                "systems" => {
                    cfg.systems = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::parse)
                        .collect::<Result<_>>()?
                }
                "surface" => {
                    cfg.surface_source = if value == "surrogate" {
                        SurfaceSource::Surrogate
                    } else {
                        SurfaceSource::File(resolve(base_dir, value))
                    }
                }
                "cqi_4g" | "cqi_5g" => {
                    let src = if value == "builtin" {
                        TableSource::Builtin
                    } else {
                        TableSource::File(resolve(base_dir, value))
                    };
                    if key == "cqi_4g" {
                        cfg.cqi_4g = src;
                    } else {
                        cfg.cqi_5g = src;
                    }
                }
                "cqi_4g_thresholds_db" => cfg.cqi_4g_thresholds_db = Some(parse_list(key, value)?),
                "cqi_5g_thresholds_db" => cfg.cqi_5g_thresholds_db = Some(parse_list(key, value)?),
                "n_drops" => cfg.n_drops = parse_num(key, value)?,
                "base_seed" => cfg.base_seed = parse_num(key, value)?,
                "sweep_param" => {
                    sweep_param = if value == "none" { None } else { Some(value.parse()?) }
                }
                "sweep_values" => sweep_values = Some(parse_list(key, value)?),
                other => {
                    return Err(Error::validation(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }

        cfg.sweep = match (sweep_param, sweep_values) {
            (Some(param), Some(values)) => Some(Sweep { param, values }),
            (None, None) => None,
            (Some(_), None) => return Err(Error::validation("sweep_param given without sweep_values")),
            (None, Some(_)) => return Err(Error::validation("sweep_values given without sweep_param")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_users == 0 || self.n_channels == 0 {
            return Err(Error::validation("n_users and n_channels must be >= 1"));
        }
        if self.n_drops == 0 {
            return Err(Error::validation("n_drops must be >= 1"));
        }
        if self.systems.is_empty() {
            return Err(Error::validation("at least one system is required"));
        }
        let mut sorted = self.systems.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.systems.len() {
            return Err(Error::validation("systems list contains duplicates"));
        }
        self.radio.validate()?;
        self.constraints.validate()?;
        TransformFactor::new(self.tf.mu)?;
        SourceStats::new(self.src.i_over_l)?;
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                return Err(Error::validation("sweep_values must not be empty"));
            }
            for &v in &sweep.values {
                self.at(sweep.param, v)?;
            }
        }
        Ok(())
    }

    /// Copy of the scenario with one parameter replaced by a sweep value.
    pub fn at(&self, param: SweepParam, value: f64) -> Result<Self> {
        let mut cfg = self.clone();
        cfg.sweep = None;
        match param {
            SweepParam::NChannels => {
                if !(value >= 1.0) || value.fract() != 0.0 || value > 1e6 {
                    return Err(Error::validation(format!(
                        "n_channels sweep value {value} is not a positive integer"
                    )));
                }
                cfg.n_channels = value as usize;
            }
            SweepParam::TxPowerDbm => {
                if !value.is_finite() {
                    return Err(Error::validation("tx_power_dbm sweep value must be finite"));
                }
                cfg.radio.tx_power_dbm = value;
            }
            SweepParam::Mu => cfg.tf = TransformFactor::new(value)?,
        }
        Ok(cfg)
    }

    /// Load the surface and CQI tables this scenario refers to.
    pub fn load_resources(&self) -> Result<Resources> {
        let surface = match &self.surface_source {
            SurfaceSource::Surrogate => default_surrogate(self.constraints.k_max)?,
            SurfaceSource::File(p) => load_surface(p)?,
        };
        if !surface.covers(self.constraints.k_max) {
            return Err(Error::validation(format!(
                "similarity surface must tabulate every k in 1..={}",
                self.constraints.k_max
            )));
        }
        let load = |src: &TableSource, builtin: fn() -> CqiTable, thresholds: &Option<Vec<f64>>| {
            let table = match src {
                TableSource::Builtin => builtin(),
                TableSource::File(p) => load_cqi_table(p)?,
            };
            match thresholds {
                Some(t) => table.with_thresholds(t),
                None => Ok(table),
            }
        };
        Ok(Resources {
            surface,
            tables: CqiTables {
                four_g: load(&self.cqi_4g, CqiTable::lte, &self.cqi_4g_thresholds_db)?,
                five_g: load(&self.cqi_5g, CqiTable::nr, &self.cqi_5g_thresholds_db)?,
            },
        })
    }
}

/// Read and parse a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    ScenarioConfig::parse(&text, base)
}
