//! Semantic rate and semantic spectral efficiency.
//!
//! Semantic quantities are carried in units of the source ratio I/L
//! (semantic units per word); `SourceStats::default()` sets it to one so
//! results read directly "in units of I/L".

use crate::error::{Error, Result};

/// Source statistics. Only the ratio I/L ever enters a formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceStats {
    /// Expected semantic information per sentence over expected words per
    /// sentence, suts/word.
    pub i_over_l: f64,
}

impl Default for SourceStats {
    fn default() -> Self {
        Self { i_over_l: 1.0 }
    }
}

impl SourceStats {
    pub fn new(i_over_l: f64) -> Result<Self> {
        if !(i_over_l > 0.0) || !i_over_l.is_finite() {
            return Err(Error::validation(format!("i_over_l must be > 0, got {i_over_l}")));
        }
        Ok(Self { i_over_l })
    }
}

/// Average bits per word produced by a conventional source coder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformFactor {
    pub mu: f64,
}

impl Default for TransformFactor {
    fn default() -> Self {
        Self { mu: 40.0 }
    }
}

impl TransformFactor {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::validation(format!("transform factor must be > 0, got {mu}")));
        }
        Ok(Self { mu })
    }
}

fn check_semantic_inputs(xi: f64, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("k must be >= 1"));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::domain(format!("similarity {xi} outside [0, 1]")));
    }
    Ok(())
}

/// Semantic rate `W·(I/L)·ξ/k`, suts/s.
pub fn semantic_rate(bandwidth_hz: f64, xi: f64, k: u32, src: SourceStats) -> Result<f64> {
    check_semantic_inputs(xi, k)?;
    Ok(bandwidth_hz * semantic_se(xi, k, src)?)
}

/// Semantic spectral efficiency `(I/L)·ξ/k`, suts/s/Hz.
pub fn semantic_se(xi: f64, k: u32, src: SourceStats) -> Result<f64> {
    check_semantic_inputs(xi, k)?;
    Ok(src.i_over_l * (xi / f64::from(k)))
}

/// Equivalent semantic rate of a bit pipe, `C·(I/L)/μ·ξ`, suts/s.
pub fn equivalent_semantic_rate(
    bit_rate: f64,
    xi: f64,
    tf: TransformFactor,
    src: SourceStats,
) -> Result<f64> {
    if !(bit_rate >= 0.0) {
        return Err(Error::domain(format!("bit rate must be >= 0, got {bit_rate}")));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::domain(format!("similarity {xi} outside [0, 1]")));
    }
    Ok(bit_rate * (src.i_over_l / tf.mu) * xi)
}

/// Equivalent semantic spectral efficiency `R·(I/L)/μ`, suts/s/Hz.
pub fn equivalent_semantic_se(se_bits: f64, tf: TransformFactor, src: SourceStats) -> Result<f64> {
    if !(se_bits >= 0.0) {
        return Err(Error::domain(format!("spectral efficiency must be >= 0, got {se_bits}")));
    }
    Ok(se_bits * (src.i_over_l / tf.mu))
}
