use std::collections::BTreeMap;

use super::stats::{mean, quantile};
use crate::engine::{PeriodRecord, RunOutput};

/// Per-period outputs of one replicate, keyed by variable name.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesFrame {
    pub replicate: u32,
    pub periods: Vec<u32>,
    pub columns: BTreeMap<String, Vec<f64>>,
}

impl TimeSeriesFrame {
    pub fn new(replicate: u32, periods: Vec<u32>) -> Self {
        TimeSeriesFrame {
            replicate,
            periods,
            columns: BTreeMap::new(),
        }
    }

    pub fn from_records(replicate: u32, records: &[PeriodRecord]) -> Self {
        let mut frame = Self::new(replicate, records.iter().map(|r| r.period).collect());
        let rows: Vec<Vec<f64>> = records.iter().map(PeriodRecord::values).collect();
        for (k, name) in PeriodRecord::VARIABLES.iter().enumerate() {
            frame
                .columns
                .insert((*name).to_string(), rows.iter().map(|r| r[k]).collect());
        }
        frame
    }

    pub fn from_run(run: &RunOutput) -> Self {
        Self::from_records(run.replicate, &run.records)
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.get(name).map(Vec::as_slice)
    }

    pub fn insert(&mut self, name: impl Into<String>, values: Vec<f64>) {
        assert_eq!(values.len(), self.len(), "column length must match periods");
        self.columns.insert(name.into(), values);
    }

    /// Frame restricted to periods after `burn_in`.
    pub fn trimmed(&self, burn_in: u32) -> Self {
        let start = self
            .periods
            .iter()
            .position(|&p| p > burn_in)
            .unwrap_or(self.periods.len());
        TimeSeriesFrame {
            replicate: self.replicate,
            periods: self.periods[start..].to_vec(),
            columns: self
                .columns
                .iter()
                .map(|(k, v)| (k.clone(), v[start..].to_vec()))
                .collect(),
        }
    }

    /// Mean of a column over periods after `burn_in`.
    pub fn mean_after(&self, name: &str, burn_in: u32) -> f64 {
        let t = self.trimmed(burn_in);
        t.column(name).map(mean).unwrap_or(f64::NAN)
    }

    /// Mean of a column over periods in `[from, to]`.
    pub fn mean_between(&self, name: &str, from: u32, to: u32) -> f64 {
        let Some(col) = self.column(name) else {
            return f64::NAN;
        };
        let v: Vec<f64> = self
            .periods
            .iter()
            .zip(col)
            .filter(|(p, _)| (from..=to).contains(*p))
            .map(|(_, x)| *x)
            .collect();
        mean(&v)
    }
}

/// Cross-replicate mean and inter-decile band of one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSummary {
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Cross-replicate summaries of every variable.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub periods: Vec<u32>,
    pub series: BTreeMap<String, SeriesSummary>,
}

impl EnsembleSummary {
    /// Summarises frames period by period over their common length.
    pub fn from_frames(frames: &[TimeSeriesFrame]) -> Option<Self> {
        let first = frames.first()?;
        let len = frames.iter().map(TimeSeriesFrame::len).min().unwrap_or(0);
        let periods = first.periods[..len].to_vec();
        let mut series = BTreeMap::new();
        for name in first.columns.keys() {
            let cols: Vec<&[f64]> = frames.iter().filter_map(|f| f.column(name)).collect();
            let mut s = SeriesSummary {
                mean: Vec::with_capacity(len),
                lower: Vec::with_capacity(len),
                upper: Vec::with_capacity(len),
            };
            let mut cross = Vec::with_capacity(cols.len());
            for t in 0..len {
                cross.clear();
                cross.extend(cols.iter().map(|c| c[t]));
                s.mean.push(mean(&cross));
                s.lower.push(quantile(&cross, 0.1));
                s.upper.push(quantile(&cross, 0.9));
            }
            series.insert(name.clone(), s);
        }
        Some(EnsembleSummary { periods, series })
    }

    pub fn get(&self, name: &str) -> Option<&SeriesSummary> {
        self.series.get(name)
    }

    /// The mean path as a frame labelled with `replicate`.
    pub fn mean_frame(&self, replicate: u32) -> TimeSeriesFrame {
        let mut f = TimeSeriesFrame::new(replicate, self.periods.clone());
        for (k, s) in &self.series {
            f.columns.insert(k.clone(), s.mean.clone());
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(rep: u32, xs: &[f64]) -> TimeSeriesFrame {
        let mut f = TimeSeriesFrame::new(rep, (1..=xs.len() as u32).collect());
        f.insert("x", xs.to_vec());
        f
    }

    #[test]
    fn single_replicate_summary_is_the_frame() {
        let f = frame(0, &[1.0, 2.0, 3.0]);
        let s = EnsembleSummary::from_frames(std::slice::from_ref(&f)).unwrap();
        assert_eq!(s.get("x").unwrap().mean, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.mean_frame(0), f);
    }

    #[test]
    fn trimming_and_means() {
        let f = frame(0, &[10.0, 1.0, 2.0, 3.0]);
        assert_eq!(f.trimmed(1).len(), 3);
        assert_eq!(f.mean_after("x", 1), 2.0);
        assert_eq!(f.mean_between("x", 1, 2), 5.5);
        assert!(EnsembleSummary::from_frames(&[]).is_none());
    }
}
