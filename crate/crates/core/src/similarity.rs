//! Semantic similarity surface ξ(k, γ).
//!
//! The surface is a table indexed by symbols-per-word `k` (exact match only)
//! and SNR in dB (linear interpolation between grid points, clamped at the
//! edges). It can be loaded from CSV or generated from a smooth surrogate.

use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Tabulated ξ(k, γ_dB).
#[derive(Debug, Clone, PartialEq)]
pub struct SimilaritySurface {
    k_values: Vec<u32>,
    snr_grid_db: Vec<f64>,
    /// Row-major, one row per entry of `k_values`.
    xi: Vec<f64>,
}

impl SimilaritySurface {
    /// Build and validate a surface. `xi[i][j]` belongs to `k_values[i]` and
    /// `snr_grid_db[j]`.
    pub fn new(k_values: Vec<u32>, snr_grid_db: Vec<f64>, xi: Vec<Vec<f64>>) -> Result<Self> {
        if k_values.is_empty() || snr_grid_db.is_empty() {
            return Err(Error::validation("surface needs at least one k and one SNR point"));
        }
        if let Some(&k) = k_values.iter().find(|&&k| k == 0) {
            return Err(Error::validation(format!("k = {k} is not a valid symbol count")));
        }
        for w in k_values.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::validation(format!(
                    "k values must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if snr_grid_db.iter().any(|s| !s.is_finite()) {
            return Err(Error::validation("SNR grid must be finite"));
        }
        for (j, w) in snr_grid_db.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::validation(format!(
                    "SNR grid must be strictly increasing: column {} ({} dB) follows {} dB",
                    j + 2,
                    w[1],
                    w[0]
                )));
            }
        }
        if xi.len() != k_values.len() {
            return Err(Error::validation(format!(
                "expected {} rows of similarity values, got {}",
                k_values.len(),
                xi.len()
            )));
        }
        for (i, row) in xi.iter().enumerate() {
            let k = k_values[i];
            if row.len() != snr_grid_db.len() {
                return Err(Error::validation(format!(
                    "row k = {k} has {} values, expected {}",
                    row.len(),
                    snr_grid_db.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::validation(format!(
                        "similarity {v} at k = {k}, snr = {} dB is outside [0, 1]",
                        snr_grid_db[j]
                    )));
                }
                if j > 0 && v < row[j - 1] {
                    return Err(Error::validation(format!(
                        "similarity decreases along SNR at k = {k}, snr = {} dB",
                        snr_grid_db[j]
                    )));
                }
            }
        }
        Ok(Self {
            k_values,
            snr_grid_db,
            xi: xi.into_iter().flatten().collect(),
        })
    }

    pub fn k_values(&self) -> &[u32] {
        &self.k_values
    }

    pub fn snr_grid_db(&self) -> &[f64] {
        &self.snr_grid_db
    }

    /// Stored row for `k`, if tabulated.
    pub fn row(&self, k: u32) -> Option<&[f64]> {
        let i = self.k_values.binary_search(&k).ok()?;
        let n = self.snr_grid_db.len();
        Some(&self.xi[i * n..(i + 1) * n])
    }

    /// True when every k in `1..=k_max` is tabulated.
    pub fn covers(&self, k_max: u32) -> bool {
        (1..=k_max).all(|k| self.k_values.binary_search(&k).is_ok())
    }

    /// ξ at `k` and `snr_db`.
    pub fn query(&self, k: u32, snr_db: f64) -> Result<f64> {
        if k == 0 {
            return Err(Error::domain("k must be >= 1"));
        }
        let row = self
            .row(k)
            .ok_or_else(|| Error::domain(format!("k = {k} is not tabulated in the surface")))?;
        if snr_db.is_nan() {
            return Err(Error::domain("SNR is NaN"));
        }
        let grid = &self.snr_grid_db;
        let last = grid.len() - 1;
        if snr_db <= grid[0] {
            return Ok(row[0]);
        }
        if snr_db >= grid[last] {
            return Ok(row[last]);
        }
        // first index with grid[idx] > snr_db; idx is in 1..=last
        let idx = grid.partition_point(|&g| g <= snr_db);
        let (x0, x1) = (grid[idx - 1], grid[idx]);
        let (y0, y1) = (row[idx - 1], row[idx]);
        if snr_db == x0 {
            return Ok(y0);
        }
        let t = (snr_db - x0) / (x1 - x0);
        Ok(y0 + t * (y1 - y0))
    }

    /// Parse the CSV layout `k\snr, s1, s2, ...` / `k, xi1, xi2, ...`.
    pub fn from_reader<R: Read>(reader: R, origin: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut records = rdr.records();

        let header = match records.next() {
            Some(r) => r.map_err(|e| Error::parse(origin, e.to_string()))?,
            None => return Err(Error::parse(origin, "empty surface file")),
        };
        let snr_grid_db = header
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, s)| {
                s.parse::<f64>().map_err(|_| {
                    Error::parse(origin, format!("header column {}: '{s}' is not a number", j + 2))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut k_values = Vec::new();
        let mut xi = Vec::new();
        for (line, rec) in records.enumerate() {
            let rec = rec.map_err(|e| Error::parse(origin, e.to_string()))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            let lineno = line + 2;
            let mut fields = rec.iter();
            let k_text = fields.next().unwrap_or_default();
            let k = k_text.parse::<u32>().map_err(|_| {
                Error::parse(origin, format!("line {lineno}: '{k_text}' is not a symbol count"))
            })?;
            let row = fields
                .map(|s| {
                    s.parse::<f64>().map_err(|_| {
                        Error::parse(origin, format!("line {lineno}: '{s}' is not a number"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            k_values.push(k);
            xi.push(row);
        }
        Self::new(k_values, snr_grid_db, xi)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["k\\snr".to_string()];
        header.extend(self.snr_grid_db.iter().map(|s| s.to_string()));
        let to_err = |e: csv::Error| Error::parse("surface output", e.to_string());
        w.write_record(&header).map_err(to_err)?;
        for &k in &self.k_values {
            let mut rec = vec![k.to_string()];
            rec.extend(self.row(k).unwrap().iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(to_err)?;
        }
        w.flush()
            .map_err(|e| Error::io("surface output", e))
    }
}

/// Load a surface from a CSV file.
pub fn load_surface(path: &Path) -> Result<SimilaritySurface> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    SimilaritySurface::from_reader(file, &path.display().to_string())
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Closed form of the default surrogate,
/// `ξ = (1 − 0.2·e^(−0.4(k−1))) · σ(0.3·(γ_dB − (4 − k)))`.
pub fn surrogate_value(k: u32, snr_db: f64) -> f64 {
    let k = f64::from(k);
    let amplitude = 1.0 - 0.2 * (-0.4 * (k - 1.0)).exp();
    let midpoint = 4.0 - k;
    amplitude * logistic(0.3 * (snr_db - midpoint))
}

/// Grid of the default surrogate over k = 1..=k_max, SNR = -10..=20 dB in 1 dB steps.
///
/// Qualitatively a DeepSC-like surface: rises with SNR, rises with k, and
/// saturates below one.
pub fn default_surrogate(k_max: u32) -> Result<SimilaritySurface> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be >= 1"));
    }
    let k_values: Vec<u32> = (1..=k_max).collect();
    let snr_grid_db: Vec<f64> = (-10..=20).map(f64::from).collect();
    let xi = k_values
        .iter()
        .map(|&k| snr_grid_db.iter().map(|&s| surrogate_value(k, s)).collect())
        .collect();
    SimilaritySurface::new(k_values, snr_grid_db, xi)
}
