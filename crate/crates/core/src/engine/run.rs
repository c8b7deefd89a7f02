use log::{info, warn};
use rayon::prelude::*;

use super::init::initialize;
use super::params::ModelParams;
use super::record::{PeriodRecord, SegmentRow};
use super::state::EconomyState;
use super::step::step;
use crate::config::RunConfig;
use crate::error::{Result, SimError};
use crate::interbank::{Segment, SegmentBook};
use crate::ledger::AuditReport;
use crate::scalar::Scalar;

/// Outputs of one replicate.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub replicate: u32,
    pub seed: u64,
    pub records: Vec<PeriodRecord>,
    pub audits: Vec<AuditReport>,
    pub segments: Vec<SegmentRow>,
    /// Description of the error that stopped the run early, if any.
    pub failure: Option<String>,
}

impl RunOutput {
    pub fn audits_pass(&self) -> bool {
        self.failure.is_none() && self.audits.iter().all(|a| a.pass)
    }

    /// Records after the first `burn_in` periods.
    pub fn after_burn_in(&self, burn_in: u32) -> &[PeriodRecord] {
        let start = self
            .records
            .iter()
            .position(|r| r.period > burn_in)
            .unwrap_or(self.records.len());
        &self.records[start..]
    }
}

/// All replicates of one configuration, in replicate order.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub config: RunConfig,
    pub runs: Vec<RunOutput>,
}

impl Ensemble {
    pub fn all_pass(&self) -> bool {
        self.runs.iter().all(RunOutput::audits_pass)
    }
}

fn segment_rows<T: Scalar>(period: u32, replicate: u32, book: &SegmentBook<T>) -> [SegmentRow; 2] {
    let f = |x: T| x.as_f64();
    let mut rl = [0.0; 2];
    for b in &book.borrowers {
        if let Some(s) = book.settlement(b.bank) {
            rl[0] += f((b.split.on - s.ibl_on).pos());
            rl[1] += f((b.split.term - s.ibl_term).pos());
        }
    }
    let mut rd = [0.0; 2];
    for l in &book.lenders {
        if let Some(s) = book.settlement(l.bank) {
            if l.amount > T::zero() {
                rd[0] += f(s.rd * l.split.on / l.amount);
                rd[1] += f(s.rd * l.split.term / l.amount);
            }
        }
    }
    let row = |k: usize, seg: Segment, df: T, lf: T, settled: T, rate: T, gamma: T| SegmentRow {
        period,
        replicate,
        segment: seg.label(),
        demand: f(df),
        supply: f(lf),
        settled: f(settled),
        rate: f(rate),
        gamma: f(gamma),
        rl: rl[k],
        rd: rd[k],
    };
    [
        row(
            0,
            Segment::Overnight,
            book.df_on,
            book.lf_on,
            book.settled_on,
            book.rate_on,
            book.gamma_on,
        ),
        row(
            1,
            Segment::Term,
            book.df_term,
            book.lf_term,
            book.settled_term,
            book.rate_term,
            book.gamma_term,
        ),
    ]
}

fn carry_forward(rec: &mut PeriodRecord, prev: Option<&PeriodRecord>) {
    let fill = |x: &mut f64, p: Option<f64>, init: f64| {
        if x.is_nan() {
            *x = p.unwrap_or(init);
        }
    };
    fill(&mut rec.ms_deficit, prev.map(|p| p.ms_deficit), 1.0);
    fill(&mut rec.ms_surplus, prev.map(|p| p.ms_surplus), 1.0);
    fill(&mut rec.pi_b, prev.map(|p| p.pi_b), 0.0);
    fill(&mut rec.pi_l, prev.map(|p| p.pi_l), 0.0);
}

/// Steps an already initialised economy through `steps` periods, calling
/// `observe` after each one.
pub fn run_state<T: Scalar>(
    state: &mut EconomyState<T>,
    cfg: &RunConfig,
    replicate: u32,
    mut observe: impl FnMut(&EconomyState<T>, &PeriodRecord),
) -> RunOutput {
    let params = ModelParams::<T>::from_config(cfg);
    let steps = cfg.run.steps as usize;
    let mut out = RunOutput {
        replicate,
        seed: cfg.run.seed.wrapping_add(u64::from(replicate)),
        records: Vec::with_capacity(steps),
        audits: Vec::with_capacity(steps),
        segments: Vec::with_capacity(2 * steps),
        failure: None,
    };
    while state.period < cfg.run.steps {
        match step(state, &params, cfg.run.audit_tolerance) {
            Ok(o) => {
                let mut rec = o.record;
                carry_forward(&mut rec, out.records.last());
                out.segments
                    .extend(segment_rows(state.period, replicate, &state.book));
                observe(state, &rec);
                out.records.push(rec);
                let failed = !o.audit.pass;
                if failed {
                    warn!(
                        "replicate {replicate}: audit failed at period {} (residual {:e})",
                        o.audit.period, o.audit.max_residual
                    );
                }
                out.audits.push(o.audit);
                if failed && cfg.run.halt_on_audit_failure {
                    out.failure = Some(format!("audit failed at period {}", state.period));
                    break;
                }
            }
            Err(e) => {
                warn!("replicate {replicate}: {e}");
                out.failure = Some(e.to_string());
                break;
            }
        }
    }
    out
}

/// Runs one replicate with seed `base_seed + replicate`.
pub fn run_single<T: Scalar>(cfg: &RunConfig, replicate: u32) -> Result<RunOutput> {
    let seed = cfg.run.seed.wrapping_add(u64::from(replicate));
    let mut state = initialize::<T>(cfg, seed)?;
    Ok(run_state(&mut state, cfg, replicate, |_, _| {}))
}

/// Runs every replicate in parallel and returns them in replicate order.
pub fn run_ensemble(cfg: &RunConfig) -> Result<Ensemble> {
    cfg.validate()?;
    info!(
        "running {} replicates of {} steps ({} scenario, {} shock)",
        cfg.run.replicates, cfg.run.steps, cfg.interbank.scenario, cfg.run.shock
    );
    let runs = (0..cfg.run.replicates)
        .into_par_iter()
        .map(|r| run_single::<f64>(cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        config: cfg.clone(),
        runs,
    })
}

/// State after `period` steps, for inspection.
pub fn state_at<T: Scalar>(cfg: &RunConfig, replicate: u32, period: u32) -> Result<EconomyState<T>> {
    let seed = cfg.run.seed.wrapping_add(u64::from(replicate));
    let mut state = initialize::<T>(cfg, seed)?;
    let mut c = cfg.clone();
    c.run.steps = period;
    c.run.burn_in = 0;
    let out = run_state(&mut state, &c, replicate, |_, _| {});
    match out.failure {
        Some(msg) => Err(SimError::Config(format!("run stopped before period {period}: {msg}"))),
        None => Ok(state),
    }
}
