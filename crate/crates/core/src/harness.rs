//! Monte-Carlo experiment driver and CSV output.
//!
//! Drop `d` always uses seed `base_seed + d`, whatever the system list or
//! sweep value, so every system and every sweep point is evaluated on the
//! same realizations.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::allocator::{fixed_k_objective, solve_benchmark, solve_semantic};
use crate::channel::sample_drop;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::link_adaptation::SystemKind;
use crate::scenario::{Resources, ScenarioConfig, SweepParam};

pub const CSV_HEADER: [&str; 6] = [
    "system",
    "sweep_param",
    "sweep_value",
    "mean_total_sse",
    "std_error",
    "n_drops",
];

/// Which curve a record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    System(SystemKind),
    /// Ideal-system assignment evaluated with a fixed k for every user.
    ConventionalFixedK,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::System(s) => write!(f, "{s}"),
            Series::ConventionalFixedK => f.write_str("conventional"),
        }
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "conventional" {
            Ok(Series::ConventionalFixedK)
        } else {
            s.parse().map(Series::System)
        }
    }
}

/// What the `sweep_value` column of a record refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordParam {
    None,
    Sweep(SweepParam),
    FixedK,
}

impl fmt::Display for RecordParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordParam::None => f.write_str("none"),
            RecordParam::Sweep(p) => write!(f, "{p}"),
            RecordParam::FixedK => f.write_str("k"),
        }
    }
}

impl FromStr for RecordParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RecordParam::None),
            "k" => Ok(RecordParam::FixedK),
            other => other.parse().map(RecordParam::Sweep),
        }
    }
}

/// Mean and standard error of the total S-SE of one series at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub series: Series,
    pub sweep_param: RecordParam,
    pub sweep_value: Option<f64>,
    /// suts/s/Hz; equals units of I/L when i_over_l = 1.
    pub mean_total_sse: f64,
    pub std_error: f64,
    pub n_drops: usize,
}

impl SweepRecord {
    fn from_samples(
        series: Series,
        sweep_param: RecordParam,
        sweep_value: Option<f64>,
        samples: &[f64],
    ) -> Self {
        let (mean, std_error) = mean_and_std_error(samples);
        Self {
            series,
            sweep_param,
            sweep_value,
            mean_total_sse: mean,
            std_error,
            n_drops: samples.len(),
        }
    }
}

/// Sample mean and `s / sqrt(n)` with the n−1 sample deviation; zero
/// error for a single sample.
pub fn mean_and_std_error(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = samples.iter().fold(0.0, |acc, x| acc + x) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Per-drop totals of every system at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSamples {
    pub sweep_value: Option<f64>,
    /// One entry per configured system, in configuration order; each holds
    /// `n_drops` totals in drop order.
    pub per_system: Vec<(SystemKind, Vec<f64>)>,
}

impl SweepSamples {
    pub fn totals(&self, system: SystemKind) -> Option<&[f64]> {
        self.per_system
            .iter()
            .find(|(s, _)| *s == system)
            .map(|(_, v)| v.as_slice())
    }
}

/// Total S-SE of each system on the drop with the given seed.
pub fn evaluate_drop(cfg: &ScenarioConfig, res: &Resources, seed: u64) -> Result<Vec<f64>> {
    let drop = sample_drop(cfg.n_users, cfg.n_channels, &cfg.radio, seed)?;
    cfg.systems
        .iter()
        .map(|&system| match system {
            SystemKind::Semantic => Ok(solve_semantic(&drop, &res.surface, &cfg.constraints)?
                .total_weight
                * cfg.src.i_over_l),
            _ => Ok(solve_benchmark(
                &drop,
                system,
                &res.tables,
                cfg.tf,
                cfg.src,
                &cfg.constraints,
            )?
            .total_weight),
        })
        .collect()
}

fn sweep_points(cfg: &ScenarioConfig) -> Result<Vec<(Option<f64>, ScenarioConfig)>> {
    match &cfg.sweep {
        None => Ok(vec![(None, cfg.clone())]),
        Some(sweep) => sweep
            .values
            .iter()
            .map(|&v| Ok((Some(v), cfg.at(sweep.param, v)?)))
            .collect(),
    }
}

fn drop_seed(cfg: &ScenarioConfig, d: usize) -> u64 {
    cfg.base_seed.wrapping_add(d as u64)
}

/// Per-drop totals for every sweep point and system.
pub fn sweep_drop_totals(cfg: &ScenarioConfig, exec: Execution) -> Result<Vec<SweepSamples>> {
    cfg.validate()?;
    let res = cfg.load_resources()?;
    let mut out = Vec::new();
    for (value, point) in sweep_points(cfg)? {
        let per_drop = map_indexed(exec, point.n_drops, |d| {
            evaluate_drop(&point, &res, drop_seed(&point, d))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let per_system = point
            .systems
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, per_drop.iter().map(|totals| totals[i]).collect()))
            .collect();
        out.push(SweepSamples {
            sweep_value: value,
            per_system,
        });
    }
    Ok(out)
}

/// Run every sweep point, system and drop; one record per (system, point),
/// ordered by system then sweep value.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<SweepRecord>> {
    run_scenario_with(cfg, Execution::default())
}

pub fn run_scenario_with(cfg: &ScenarioConfig, exec: Execution) -> Result<Vec<SweepRecord>> {
    let samples = sweep_drop_totals(cfg, exec)?;
    let param = cfg
        .sweep
        .as_ref()
        .map_or(RecordParam::None, |s| RecordParam::Sweep(s.param));
    let mut records = Vec::new();
    for point in &samples {
        for (system, totals) in &point.per_system {
            records.push(SweepRecord::from_samples(
                Series::System(*system),
                param,
                point.sweep_value,
                totals,
            ));
        }
    }
    sort_records(&mut records);
    Ok(records)
}

fn sort_records(records: &mut [SweepRecord]) {
    records.sort_by(|a, b| {
        a.series.cmp(&b.series).then_with(|| {
            let av = a.sweep_value.unwrap_or(f64::NEG_INFINITY);
            let bv = b.sweep_value.unwrap_or(f64::NEG_INFINITY);
            av.total_cmp(&bv)
        })
    });
}

/// Per-drop totals of the model comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    /// Jointly optimized assignment and k.
    pub proposed: Vec<f64>,
    /// Ideal-system assignment with a fixed k, one entry per requested k.
    pub fixed_k: Vec<(u32, Vec<f64>)>,
}

/// Per-drop totals for [`run_fig3_comparison`]. Any sweep in the scenario
/// is ignored; the base parameters are used.
pub fn model_comparison_totals(
    cfg: &ScenarioConfig,
    fixed_k_values: &[u32],
    exec: Execution,
) -> Result<ModelComparison> {
    cfg.validate()?;
    if let Some(&k) = fixed_k_values
        .iter()
        .find(|&&k| k == 0 || k > cfg.constraints.k_max)
    {
        return Err(Error::validation(format!(
            "fixed k = {k} outside 1..={}",
            cfg.constraints.k_max
        )));
    }
    let res = cfg.load_resources()?;
    let scale = cfg.src.i_over_l;
    let per_drop = map_indexed(exec, cfg.n_drops, |d| -> Result<(f64, Vec<f64>)> {
        let drop = sample_drop(cfg.n_users, cfg.n_channels, &cfg.radio, drop_seed(cfg, d))?;
        let ideal = solve_benchmark(
            &drop,
            SystemKind::Ideal,
            &res.tables,
            cfg.tf,
            cfg.src,
            &cfg.constraints,
        )?;
        let fixed = fixed_k_values
            .iter()
            .map(|&k| {
                Ok(fixed_k_objective(&drop, &res.surface, &cfg.constraints, &ideal.pairs, k)?
                    * scale)
            })
            .collect::<Result<Vec<_>>>()?;
        let proposed = solve_semantic(&drop, &res.surface, &cfg.constraints)?.total_weight * scale;
        Ok((proposed, fixed))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    Ok(ModelComparison {
        proposed: per_drop.iter().map(|p| p.0).collect(),
        fixed_k: fixed_k_values
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, per_drop.iter().map(|p| p.1[i]).collect()))
            .collect(),
    })
}

/// Conventional assignment with fixed k versus the jointly optimized model.
pub fn run_fig3_comparison(cfg: &ScenarioConfig, fixed_k_values: &[u32]) -> Result<Vec<SweepRecord>> {
    run_fig3_comparison_with(cfg, fixed_k_values, Execution::default())
}

pub fn run_fig3_comparison_with(
    cfg: &ScenarioConfig,
    fixed_k_values: &[u32],
    exec: Execution,
) -> Result<Vec<SweepRecord>> {
    let totals = model_comparison_totals(cfg, fixed_k_values, exec)?;
    let mut records = vec![SweepRecord::from_samples(
        Series::System(SystemKind::Semantic),
        RecordParam::None,
        None,
        &totals.proposed,
    )];
    for (k, samples) in &totals.fixed_k {
        records.push(SweepRecord::from_samples(
            Series::ConventionalFixedK,
            RecordParam::FixedK,
            Some(f64::from(*k)),
            samples,
        ));
    }
    sort_records(&mut records);
    Ok(records)
}

/// Transform factor at which a conventional curve meets the semantic one.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossover {
    pub system: SystemKind,
    /// `None` when the curves do not cross inside the swept range.
    pub mu: Option<f64>,
}

/// Crossover μ of each conventional system against the semantic system,
/// from records of a μ sweep. Interpolates linearly in 1/μ, along which a
/// conventional curve (SE/μ) is a straight line.
pub fn crossover_mu(records: &[SweepRecord]) -> Vec<Crossover> {
    let curve = |series: Series| -> Vec<(f64, f64)> {
        let mut pts: Vec<_> = records
            .iter()
            .filter(|r| r.series == series && r.sweep_param == RecordParam::Sweep(SweepParam::Mu))
            .filter_map(|r| r.sweep_value.map(|mu| (mu, r.mean_total_sse)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    };
    let semantic = curve(Series::System(SystemKind::Semantic));
    if semantic.is_empty() {
        return Vec::new();
    }
    SystemKind::ALL
        .into_iter()
        .filter(|s| s.is_conventional())
        .filter_map(|system| {
            let conv = curve(Series::System(system));
            if conv.is_empty() {
                return None;
            }
            let diffs: Vec<(f64, f64)> = conv
                .iter()
                .filter_map(|&(mu, c)| {
                    semantic
                        .iter()
                        .find(|p| p.0 == mu)
                        .map(|&(_, s)| (mu, c - s))
                })
                .collect();
            let mut mu_cross = diffs.iter().find(|d| d.1 == 0.0).map(|d| d.0);
            if mu_cross.is_none() {
                mu_cross = diffs.windows(2).find_map(|w| {
                    let ((m0, d0), (m1, d1)) = (w[0], w[1]);
                    (d0.signum() != d1.signum()).then(|| {
                        let (x0, x1) = (1.0 / m0, 1.0 / m1);
                        let x = x0 + (x1 - x0) * d0 / (d0 - d1);
                        1.0 / x
                    })
                });
            }
            Some(Crossover {
                system,
                mu: mu_cross,
            })
        })
        .collect()
}

/// Format with six significant digits, `%g` style.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // exponent after rounding to six significant digits
    let sci = format!("{v:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let s = if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}{exp}")
}

/// Write records as CSV, in the order given.
pub fn write_csv<W: Write>(records: &[SweepRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("csv output", io),
        other => Error::parse("csv output", format!("{other:?}")),
    };
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for r in records {
        w.write_record([
            r.series.to_string(),
            r.sweep_param.to_string(),
            r.sweep_value.map(format_sig6).unwrap_or_default(),
            format_sig6(r.mean_total_sse),
            format_sig6(r.std_error),
            r.n_drops.to_string(),
        ])
        .map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::io("csv output", e))
}

/// Write records to `path`.
pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = std::io::BufWriter::new(file);
    write_csv(records, &mut buf).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })?;
    buf.flush().map_err(|e| Error::io(path, e))
}

/// Parse records written by [`write_csv`].
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let origin = "results csv";
    let header = rdr.headers().map_err(|e| Error::parse(origin, e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::parse(origin, "unexpected header"));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::parse(origin, e.to_string()))?;
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .parse()
                    .map_err(|_| Error::parse(origin, format!("bad number '{}'", &rec[i])))
            };
            Ok(SweepRecord {
                series: rec[0].parse()?,
                sweep_param: rec[1].parse()?,
                sweep_value: if rec[2].is_empty() { None } else { Some(num(2)?) },
                mean_total_sse: num(3)?,
                std_error: num(4)?,
                n_drops: rec[5]
                    .parse()
                    .map_err(|_| Error::parse(origin, "bad n_drops"))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(series: Series, mu: f64, mean: f64) -> SweepRecord {
        SweepRecord {
            series,
            sweep_param: RecordParam::Sweep(SweepParam::Mu),
            sweep_value: Some(mu),
            mean_total_sse: mean,
            std_error: 0.0,
            n_drops: 1,
        }
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(0.12290003), "0.1229");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(1.234567e-7), "1.23457e-7");
        assert_eq!(format_sig6(9.999996e5), "1e6");
        assert_eq!(format_sig6(99999.96), "100000");
        assert_eq!(format_sig6(40.0), "40");
    }

    #[test]
    fn mean_and_error() {
        assert_eq!(mean_and_std_error(&[]), (0.0, 0.0));
        assert_eq!(mean_and_std_error(&[3.0]), (3.0, 0.0));
        let (m, e) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // s² = 5/3, se = sqrt(5/12)
        assert!((e - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut out = Vec::new();
        write_csv(&[], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "system,sweep_param,sweep_value,mean_total_sse,std_error,n_drops\n"
        );
    }

    #[test]
    fn csv_reader_rejects_wrong_header() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn crossover_interpolates_in_inverse_mu() {
        // conventional = 4/μ, semantic = 0.2 → crossing at μ = 20
        let mut recs = Vec::new();
        for mu in [10.0, 40.0] {
            recs.push(record(Series::System(SystemKind::Semantic), mu, 0.2));
            recs.push(record(Series::System(SystemKind::Ideal), mu, 4.0 / mu));
            recs.push(record(Series::System(SystemKind::FourG), mu, 1.0 / mu));
        }
        let cross = crossover_mu(&recs);
        assert_eq!(cross.len(), 2);
        assert_eq!(cross[0].system, SystemKind::Ideal);
        assert!((cross[0].mu.unwrap() - 20.0).abs() < 1e-9);
        assert_eq!(cross[1].mu, None);
    }

    #[test]
    fn text_forms_round_trip() {
        for s in ["semantic", "ideal", "4g", "5g", "conventional"] {
            assert_eq!(s.parse::<Series>().unwrap().to_string(), s);
        }
        for p in ["none", "k", "mu", "n_channels", "tx_power_dbm"] {
            assert_eq!(p.parse::<RecordParam>().unwrap().to_string(), p);
        }
    }
}
