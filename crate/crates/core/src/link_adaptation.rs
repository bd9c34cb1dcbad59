//! Bit-domain spectral efficiency of the conventional benchmarks: the
//! Shannon bound and CQI lookups against the LTE and NR four-bit CQI tables.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CQI_LEVELS: usize = 15;

const LTE_TABLE: &str = include_str!("../data/lte_cqi.csv");
const NR_TABLE: &str = include_str!("../data/nr_cqi.csv");

/// SHA-256 of the transcribed LTE table (TS 36.213 Table 7.2.3-1) in
/// canonical form, see [`CqiTable::transcription_digest`].
pub const LTE_DIGEST: &str = "67f48de8b03bc37da48439567111d174a89b49d4cb7ee857b42e47c95e8b5af6";
/// SHA-256 of the transcribed NR table (TS 38.214, 256QAM CQI table).
pub const NR_DIGEST: &str = "947a1de218caa3b43917427a804ea82c95d95e88e702e1db0dd5de2116529769";

/// Which system a link is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    Semantic,
    Ideal,
    FourG,
    FiveG,
}

impl SystemKind {
    pub const ALL: [SystemKind; 4] = [
        SystemKind::Semantic,
        SystemKind::Ideal,
        SystemKind::FourG,
        SystemKind::FiveG,
    ];

    pub fn is_conventional(self) -> bool {
        self != SystemKind::Semantic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::Semantic => "semantic",
            SystemKind::Ideal => "ideal",
            SystemKind::FourG => "4g",
            SystemKind::FiveG => "5g",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "semantic" => Ok(SystemKind::Semantic),
            "ideal" | "shannon" => Ok(SystemKind::Ideal),
            "4g" | "lte" => Ok(SystemKind::FourG),
            "5g" | "nr" => Ok(SystemKind::FiveG),
            other => Err(Error::validation(format!("unknown system '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqiEntry {
    pub index: u8,
    /// bits/s/Hz
    pub efficiency: f64,
    /// Minimum SNR at which this CQI is reported, dB.
    pub threshold_db: f64,
}

/// A 15-level CQI table with SNR switching thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct CqiTable {
    entries: Vec<CqiEntry>,
}

impl CqiTable {
    pub fn new(entries: Vec<CqiEntry>) -> Result<Self> {
        if entries.len() != CQI_LEVELS {
            return Err(Error::validation(format!(
                "CQI table needs {CQI_LEVELS} rows, got {}",
                entries.len()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            if usize::from(e.index) != i + 1 {
                return Err(Error::validation(format!(
                    "CQI row {} has index {}, expected {}",
                    i + 1,
                    e.index,
                    i + 1
                )));
            }
            if !e.efficiency.is_finite() || e.efficiency <= 0.0 || !e.threshold_db.is_finite() {
                return Err(Error::validation(format!("CQI {} has an invalid value", e.index)));
            }
        }
        for w in entries.windows(2) {
            if w[1].efficiency <= w[0].efficiency {
                return Err(Error::validation(format!(
                    "efficiency must increase strictly (CQI {} -> {})",
                    w[0].index, w[1].index
                )));
            }
            if w[1].threshold_db <= w[0].threshold_db {
                return Err(Error::validation(format!(
                    "thresholds must increase strictly (CQI {} -> {})",
                    w[0].index, w[1].index
                )));
            }
        }
        Ok(Self { entries })
    }

    /// LTE four-bit CQI table with the default linear threshold grid
    /// (-6.7 dB to 22.7 dB in 2.1 dB steps).
    pub fn lte() -> Self {
        Self::from_reader(LTE_TABLE.as_bytes(), "builtin LTE table").expect("builtin table")
    }

    /// NR 256QAM four-bit CQI table. Each threshold is the LTE threshold of
    /// the entry with the same efficiency plus 1 dB; the three 256QAM-only
    /// entries continue the 2.1 dB step.
    pub fn nr() -> Self {
        Self::from_reader(NR_TABLE.as_bytes(), "builtin NR table").expect("builtin table")
    }

    pub fn entries(&self) -> &[CqiEntry] {
        &self.entries
    }

    pub fn thresholds_db(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.threshold_db).collect()
    }

    /// Same efficiencies, new switching thresholds.
    pub fn with_thresholds(&self, thresholds_db: &[f64]) -> Result<Self> {
        if thresholds_db.len() != CQI_LEVELS {
            return Err(Error::validation(format!(
                "expected {CQI_LEVELS} thresholds, got {}",
                thresholds_db.len()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(thresholds_db)
            .map(|(e, &t)| CqiEntry {
                threshold_db: t,
                ..*e
            })
            .collect();
        Self::new(entries)
    }

    /// Parse `index, efficiency, threshold_db` rows, with or without header.
    pub fn from_reader<R: Read>(reader: R, origin: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut entries = Vec::with_capacity(CQI_LEVELS);
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::parse(origin, e.to_string()))?;
            if rec.len() != 3 {
                return Err(Error::parse(
                    origin,
                    format!("line {}: expected 3 fields, got {}", line + 1, rec.len()),
                ));
            }
            if line == 0 && rec[0].eq_ignore_ascii_case("index") {
                continue;
            }
            let bad = |field: &str| Error::parse(origin, format!("line {}: bad {field}", line + 1));
            entries.push(CqiEntry {
                index: rec[0].parse().map_err(|_| bad("index"))?,
                efficiency: rec[1].parse().map_err(|_| bad("efficiency"))?,
                threshold_db: rec[2].parse().map_err(|_| bad("threshold"))?,
            });
        }
        Self::new(entries)
    }

    /// SHA-256 over `index,efficiency\n` lines with four-decimal
    /// efficiencies. Thresholds are configuration and are not hashed.
    pub fn transcription_digest(&self) -> String {
        let mut hasher = Sha256::new();
        for e in &self.entries {
            hasher.update(format!("{},{:.4}\n", e.index, e.efficiency).as_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Largest CQI whose threshold is at or below `snr_db`; 0 is outage.
    pub fn snr_to_cqi(&self, snr_db: f64) -> u8 {
        let n = self.entries.partition_point(|e| e.threshold_db <= snr_db);
        n as u8
    }

    /// Spectral efficiency of the reported CQI, bits/s/Hz.
    pub fn table_se(&self, snr_db: f64) -> f64 {
        match self.snr_to_cqi(snr_db) {
            0 => 0.0,
            cqi => self.entries[usize::from(cqi) - 1].efficiency,
        }
    }

    pub fn max_efficiency(&self) -> f64 {
        self.entries[CQI_LEVELS - 1].efficiency
    }
}

/// Load a CQI table from a CSV file.
pub fn load_cqi_table(path: &Path) -> Result<CqiTable> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    CqiTable::from_reader(file, &path.display().to_string())
}

/// `log2(1 + γ)`, bits/s/Hz.
pub fn shannon_se(snr_linear: f64) -> f64 {
    debug_assert!(snr_linear >= 0.0);
    snr_linear.ln_1p() / std::f64::consts::LN_2
}

/// The two tables used by the 4G and 5G benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct CqiTables {
    pub four_g: CqiTable,
    pub five_g: CqiTable,
}

impl Default for CqiTables {
    fn default() -> Self {
        Self {
            four_g: CqiTable::lte(),
            five_g: CqiTable::nr(),
        }
    }
}

impl CqiTables {
    /// Bit-domain SE of `system` on a link, bits/s/Hz.
    pub fn bit_se(&self, system: SystemKind, snr_linear: f64, snr_db: f64) -> Result<f64> {
        match system {
            SystemKind::Ideal => Ok(shannon_se(snr_linear)),
            SystemKind::FourG => Ok(self.four_g.table_se(snr_db)),
            SystemKind::FiveG => Ok(self.five_g.table_se(snr_db)),
            SystemKind::Semantic => Err(Error::domain(
                "the semantic system has no bit-domain spectral efficiency",
            )),
        }
    }
}

/// Result of checking one builtin table against its pinned digest.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCheck {
    pub name: &'static str,
    pub expected: &'static str,
    pub actual: String,
}

impl TableCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

/// Verify both builtin tables against the pinned transcription digests.
pub fn check_builtin_tables() -> Vec<TableCheck> {
    vec![
        TableCheck {
            name: "LTE TS 36.213 Table 7.2.3-1",
            expected: LTE_DIGEST,
            actual: CqiTable::lte().transcription_digest(),
        },
        TableCheck {
            name: "NR TS 38.214 256QAM CQI table",
            expected: NR_DIGEST,
            actual: CqiTable::nr().transcription_digest(),
        },
    ]
}
