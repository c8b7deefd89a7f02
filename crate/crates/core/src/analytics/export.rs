use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::frame::{EnsembleSummary, TimeSeriesFrame};
use crate::engine::{Ensemble, RunOutput};
use crate::error::{Result, SimError};

pub const AUDIT_FILE: &str = "audit.csv";
pub const INTERBANK_FILE: &str = "interbank.csv";
pub const SERIES_FILE: &str = "series.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const CONFIG_FILE: &str = "config.toml";

/// Shortest decimal representation that parses back to the same value.
fn num(x: f64) -> String {
    format!("{x}")
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
        }
    }
    let file = File::create(path).map_err(|e| SimError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

fn finish(mut w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| SimError::io(path, e))?;
    let inner = w.into_inner().map_err(|e| SimError::io(path, e.into_error()))?;
    inner
        .into_inner()
        .map_err(|e| SimError::io(path, e.into_error()))?
        .flush()
        .map_err(|e| SimError::io(path, e))
}

/// Long format: one `replicate, period, variable, value` row per cell.
pub fn write_long(frames: &[TimeSeriesFrame], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = writer(path)?;
    w.write_record(["replicate", "period", "variable", "value"])?;
    for f in frames {
        for (name, col) in &f.columns {
            for (p, v) in f.periods.iter().zip(col) {
                w.write_record([f.replicate.to_string(), p.to_string(), name.clone(), num(*v)])?;
            }
        }
    }
    finish(w, path)
}

/// Reads frames written by [`write_long`].
pub fn read_long(path: impl AsRef<Path>) -> Result<Vec<TimeSeriesFrame>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    let mut acc: BTreeMap<u32, BTreeMap<String, Vec<(u32, f64)>>> = BTreeMap::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or_default();
        let parse_err = || SimError::Config(format!("malformed row in {}", path.display()));
        let rep: u32 = field(0).parse().map_err(|_| parse_err())?;
        let period: u32 = field(1).parse().map_err(|_| parse_err())?;
        let value: f64 = field(3).parse().map_err(|_| parse_err())?;
        acc.entry(rep)
            .or_default()
            .entry(field(2).to_string())
            .or_default()
            .push((period, value));
    }
    Ok(acc
        .into_iter()
        .map(|(rep, cols)| {
            let periods = cols
                .values()
                .next()
                .map(|c| c.iter().map(|x| x.0).collect())
                .unwrap_or_default();
            let mut f = TimeSeriesFrame::new(rep, periods);
            for (k, v) in cols {
                f.columns.insert(k, v.into_iter().map(|x| x.1).collect());
            }
            f
        })
        .collect())
}

/// Wide format: `period` followed by one column per variable.
pub fn write_wide(frame: &TimeSeriesFrame, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = writer(path)?;
    let names: Vec<&String> = frame.columns.keys().collect();
    let mut header = vec!["period".to_string()];
    header.extend(names.iter().map(|s| (*s).clone()));
    w.write_record(&header)?;
    for (t, p) in frame.periods.iter().enumerate() {
        let mut row = vec![p.to_string()];
        row.extend(names.iter().map(|n| num(frame.columns[*n][t])));
        w.write_record(&row)?;
    }
    finish(w, path)
}

/// Reads a frame written by [`write_wide`].
pub fn read_wide(path: impl AsRef<Path>, replicate: u32) -> Result<TimeSeriesFrame> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut periods = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len().saturating_sub(1)];
    let parse_err = || SimError::Config(format!("malformed row in {}", path.display()));
    for rec in r.records() {
        let rec = rec?;
        periods.push(rec.get(0).unwrap_or_default().parse().map_err(|_| parse_err())?);
        for (k, col) in cols.iter_mut().enumerate() {
            col.push(rec.get(k + 1).unwrap_or_default().parse().map_err(|_| parse_err())?);
        }
    }
    let mut f = TimeSeriesFrame::new(replicate, periods);
    for (name, col) in header.into_iter().skip(1).zip(cols) {
        f.columns.insert(name, col);
    }
    Ok(f)
}

/// Per-period audit outcome; across replicates the worst residual is kept
/// and the period passes only if every replicate passed.
pub fn write_audit(runs: &[RunOutput], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut by_period: BTreeMap<u32, (f64, bool)> = BTreeMap::new();
    for run in runs {
        for a in &run.audits {
            let e = by_period.entry(a.period).or_insert((0.0, true));
            e.0 = e.0.max(a.max_residual);
            e.1 &= a.pass;
        }
    }
    let mut w = writer(path)?;
    w.write_record(["period", "max_residual", "pass"])?;
    for (p, (res, pass)) in by_period {
        w.write_record([p.to_string(), num(res), pass.to_string()])?;
    }
    finish(w, path)
}

/// Per-period, per-segment interbank aggregates of every replicate.
pub fn write_interbank(runs: &[RunOutput], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = writer(path)?;
    w.write_record([
        "period",
        "replicate",
        "segment",
        "sum_df",
        "sum_lf",
        "sum_settled",
        "rate",
        "gamma",
        "sum_rl",
        "sum_rd",
    ])?;
    for run in runs {
        for s in &run.segments {
            w.write_record([
                s.period.to_string(),
                s.replicate.to_string(),
                s.segment.to_string(),
                num(s.demand),
                num(s.supply),
                num(s.settled),
                num(s.rate),
                num(s.gamma),
                num(s.rl),
                num(s.rd),
            ])?;
        }
    }
    finish(w, path)
}

/// Cross-replicate mean and inter-decile band, long format.
pub fn write_summary(summary: &EnsembleSummary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = writer(path)?;
    w.write_record(["period", "variable", "mean", "q10", "q90"])?;
    for (name, s) in &summary.series {
        for (t, p) in summary.periods.iter().enumerate() {
            w.write_record([
                p.to_string(),
                name.clone(),
                num(s.mean[t]),
                num(s.lower[t]),
                num(s.upper[t]),
            ])?;
        }
    }
    finish(w, path)
}

/// Writes the effective configuration, audit log, interbank table,
/// long-format series and cross-replicate summary of an ensemble.
pub fn write_ensemble(ensemble: &Ensemble, out_dir: impl AsRef<Path>) -> Result<Vec<std::path::PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
    let cfg_path = dir.join(CONFIG_FILE);
    std::fs::write(&cfg_path, ensemble.config.to_toml_string()).map_err(|e| SimError::io(&cfg_path, e))?;
    write_audit(&ensemble.runs, dir.join(AUDIT_FILE))?;
    write_interbank(&ensemble.runs, dir.join(INTERBANK_FILE))?;
    let frames: Vec<TimeSeriesFrame> = ensemble.runs.iter().map(TimeSeriesFrame::from_run).collect();
    write_long(&frames, dir.join(SERIES_FILE))?;
    let mut written = vec![
        cfg_path,
        dir.join(AUDIT_FILE),
        dir.join(INTERBANK_FILE),
        dir.join(SERIES_FILE),
    ];
    if let Some(summary) = EnsembleSummary::from_frames(&frames) {
        write_summary(&summary, dir.join(SUMMARY_FILE))?;
        written.push(dir.join(SUMMARY_FILE));
    }
    Ok(written)
}
