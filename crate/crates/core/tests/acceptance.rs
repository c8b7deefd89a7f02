//! Desk-scale acceptance run: one PASS/FAIL line per criterion.
//!
//! Replicates default to 20 and can be lowered through
//! `IBSFC_ACCEPTANCE_REPLICATES` for a quick look; the verdict is only
//! meaningful at the default.

mod common;

use std::process::ExitCode;

use ibsfc::analytics::{hp_filter, mean, spearman, std_dev, write_ensemble, EnsembleSummary, TimeSeriesFrame, HP_LAMBDA_MONTHLY};
use ibsfc::engine::{run_ensemble, Ensemble};
use ibsfc::experiments::{ShockKind, SweepParam, SweepSpec};
use ibsfc::interbank::Scenario;
use ibsfc::RunConfig;

const STEPS: u32 = 1200;
const BURN_IN: u32 = 100;
const PRE_SHOCK_END: u32 = 299;
const END_WINDOW: u32 = 12;

struct Verdicts {
    failed: usize,
}

impl Verdicts {
    fn report(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!(
            "criterion {id:>2} {} {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

fn base_config(replicates: u32) -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.run.steps = STEPS;
    cfg.run.burn_in = BURN_IN;
    cfg.run.replicates = replicates;
    cfg
}

fn run(cfg: &RunConfig) -> Ensemble {
    run_ensemble(cfg).expect("ensemble runs")
}

fn frames(e: &Ensemble) -> Vec<TimeSeriesFrame> {
    e.runs.iter().map(TimeSeriesFrame::from_run).collect()
}

/// Per-replicate means of `var` over `[from, to]`.
fn per_run(e: &Ensemble, var: &str, from: u32, to: u32) -> Vec<f64> {
    frames(e).iter().map(|f| f.mean_between(var, from, to)).collect()
}

fn ens_mean(e: &Ensemble, var: &str, from: u32, to: u32) -> f64 {
    mean(&per_run(e, var, from, to))
}

fn post(e: &Ensemble, var: &str) -> f64 {
    ens_mean(e, var, BURN_IN + 1, STEPS)
}

fn volume(e: &Ensemble) -> f64 {
    post(e, "volume_on") + post(e, "volume_term")
}

fn facilities(e: &Ensemble) -> f64 {
    post(e, "facility_rl") + post(e, "facility_rd")
}

/// Mean distance of a rate from the corridor midpoint, in half-widths.
fn anchoring(e: &Ensemble, var: &str) -> f64 {
    let mut d = Vec::new();
    for r in &e.runs {
        for rec in r.after_burn_in(BURN_IN) {
            let rate = rec.get(var).unwrap();
            let hw = 0.5 * (rec.icb_l - rec.icb_d);
            d.push((rate - 0.5 * (rec.icb_l + rec.icb_d)).abs() / hw);
        }
    }
    mean(&d)
}

fn sweep(param: SweepParam, base: &RunConfig) -> Vec<(f64, Ensemble)> {
    let mut spec = SweepSpec::new(param);
    spec.replicates = base.run.replicates;
    spec.configs(base)
        .expect("valid sweep")
        .into_iter()
        .map(|(v, cfg)| (v, run(&cfg)))
        .collect()
}

fn level(points: &[(f64, Ensemble)], x: f64) -> &Ensemble {
    &points.iter().find(|(v, _)| (v - x).abs() < 1e-9).expect("grid point present").1
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

fn main() -> ExitCode {
    let replicates = std::env::var("IBSFC_ACCEPTANCE_REPLICATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(20);
    let base = base_config(replicates);
    println!("acceptance: {replicates} replicates x {STEPS} steps, burn-in {BURN_IN}");
    let mut v = Verdicts { failed: 0 };

    let mut scenario_runs = Vec::new();
    for scenario in [Scenario::Baseline, Scenario::Maturity] {
        for shock in ShockKind::ALL {
            let mut cfg = base.clone();
            cfg.interbank.scenario = scenario;
            cfg.run.shock = shock;
            scenario_runs.push((scenario, shock, run(&cfg)));
        }
    }
    let get = |s: Scenario, k: ShockKind| {
        &scenario_runs
            .iter()
            .find(|(a, b, _)| *a == s && *b == k)
            .unwrap()
            .2
    };
    let b_missing = get(Scenario::Baseline, ShockKind::Missing);
    let m_missing = get(Scenario::Maturity, ShockKind::Missing);

    let m1 = sweep(SweepParam::M1, &base);
    let m4 = sweep(SweepParam::M4, &base);
    let m3 = sweep(SweepParam::M3, &base);
    let appendix: Vec<(SweepParam, Vec<(f64, Ensemble)>)> = [
        SweepParam::R,
        SweepParam::Delta,
        SweepParam::L,
        SweepParam::Gamma,
        SweepParam::GD,
    ]
    .into_iter()
    .map(|p| (p, sweep(p, &base)))
    .collect();

    // 1
    let all: Vec<&Ensemble> = scenario_runs
        .iter()
        .map(|x| &x.2)
        .chain(m1.iter().chain(&m4).chain(&m3).map(|x| &x.1))
        .chain(appendix.iter().flat_map(|(_, s)| s.iter().map(|x| &x.1)))
        .collect();
    let periods: usize = all.iter().flat_map(|e| &e.runs).map(|r| r.audits.len()).sum();
    let worst = all
        .iter()
        .flat_map(|e| &e.runs)
        .flat_map(|r| &r.audits)
        .map(|a| a.max_residual)
        .fold(0.0, f64::max);
    let complete = all
        .iter()
        .flat_map(|e| &e.runs)
        .all(|r| r.failure.is_none() && r.audits.len() == STEPS as usize);
    v.report(
        1,
        "balance-sheet audit",
        complete && all.iter().all(|e| e.all_pass()) && worst <= 1e-8,
        format!("{periods} audited periods, worst relative residual {worst:.2e} (limit 1e-8)"),
    );

    // 2
    let mut outside = 0usize;
    let mut checked = 0usize;
    for (_, _, e) in &scenario_runs {
        for r in &e.runs {
            for rec in &r.records {
                for rate in [rec.rate_on, rec.rate_term] {
                    checked += 1;
                    if !(rec.icb_d..=rec.icb_l).contains(&rate) {
                        outside += 1;
                    }
                }
            }
        }
    }
    v.report(
        2,
        "corridor containment",
        outside == 0,
        format!("{outside} of {checked} rates outside the corridor across both scenarios and four shocks"),
    );

    // 3
    let mut worst_g: f64 = 0.0;
    for k in ShockKind::ALL {
        for r in &get(Scenario::Baseline, k).runs {
            for rec in &r.records {
                worst_g = worst_g.max(rec.gamma_matched_on).max(rec.gamma_matched_term);
            }
        }
    }
    v.report(
        3,
        "baseline accommodation",
        worst_g == 0.0,
        format!("largest rationing among matched borrowers {worst_g:.3e}"),
    );

    // 4
    let mut detail = Vec::new();
    let mut ok = true;
    for k in ShockKind::ALL {
        let e = get(Scenario::Baseline, k);
        let (on, term) = (anchoring(e, "rate_on"), anchoring(e, "rate_term"));
        ok &= on <= 0.05 && term <= 0.05;
        detail.push(format!("{k} {on:.3}/{term:.3}"));
    }
    v.report(
        4,
        "baseline rate anchoring",
        ok,
        format!(
            "mean |i - target| in half-widths, overnight/term: {} (limit 0.05)",
            detail.join(", ")
        ),
    );

    // 5
    let e = get(Scenario::Baseline, ShockKind::Uncertainty);
    let pre_on = ens_mean(e, "volume_on", BURN_IN + 1, PRE_SHOCK_END);
    let pre_term = ens_mean(e, "volume_term", BURN_IN + 1, PRE_SHOCK_END);
    let hi_on = ens_mean(e, "volume_on", STEPS, STEPS);
    let hi_term = ens_mean(e, "volume_term", STEPS, STEPS);
    let drop = 1.0 - hi_on / pre_on;
    v.report(
        5,
        "baseline uncertainty freeze",
        drop >= 0.8 && hi_term >= pre_term,
        format!(
            "overnight at PDU 0.8 {} below pre-shock (limit 80%), term {:.1} vs pre-shock {:.1}",
            pct(drop),
            hi_term,
            pre_term
        ),
    );

    // 6
    let d_on = 1.0 - post(m_missing, "volume_on") / post(b_missing, "volume_on");
    let d_term = 1.0 - post(m_missing, "volume_term") / post(b_missing, "volume_term");
    v.report(
        6,
        "maturity volume collapse",
        (0.80..=1.10).contains(&d_on) && (0.20..=0.60).contains(&d_term),
        format!(
            "overnight {} lower (band 80-110%), term {} lower (band 20-60%)",
            pct(d_on),
            pct(d_term)
        ),
    );

    // 7
    let g_on = post(m_missing, "gamma_on");
    let g_term = post(m_missing, "gamma_term");
    v.report(
        7,
        "maturity rationing levels",
        (0.40..=0.70).contains(&g_on) && (0.50..=0.80).contains(&g_term),
        format!("overnight {g_on:.3} (band 0.40-0.70), term {g_term:.3} (band 0.50-0.80)"),
    );

    // 8
    let rates = base.interbank.clone();
    let hw = 0.5 * (rates.icb_l - rates.icb_d);
    let above_floor = (post(m_missing, "rate_on") - rates.icb_d) / hw;
    let below_ceiling = (rates.icb_l - post(m_missing, "rate_term")) / hw;
    v.report(
        8,
        "maturity rate dislocation",
        above_floor <= 0.1 && below_ceiling <= 0.1,
        format!(
            "overnight {above_floor:.3} half-widths above the floor, term {below_ceiling:.3} below the ceiling (limit 0.1)"
        ),
    );

    // 9
    let ms_d = post(m_missing, "ms_deficit");
    let ms_s = post(m_missing, "ms_surplus");
    v.report(
        9,
        "stability split",
        ms_d > ms_s,
        format!("deficit banks {ms_d:.3}, surplus banks {ms_s:.3}"),
    );

    // 10
    let e = get(Scenario::Maturity, ShockKind::Corridor);
    let g_end = ens_mean(e, "gamma_term", STEPS - END_WINDOW + 1, STEPS);
    v.report(
        10,
        "corridor-shock term rationing",
        g_end >= 0.9,
        format!("term rationing over the last {END_WINDOW} periods {g_end:.3} (limit 0.9)"),
    );

    // 11
    let ref_on = post(level(&m1, 0.1), "volume_on");
    let ref_term = post(level(&m1, 0.1), "volume_term");
    let mut worst = 0.0f64;
    for (_, e) in m1.iter().filter(|(x, _)| *x >= 0.5 - 1e-9) {
        worst = worst
            .max(post(e, "volume_on") / ref_on)
            .max(post(e, "volume_term") / ref_term);
    }
    v.report(
        11,
        "m1 sweep freeze",
        worst < 0.05,
        format!("largest segment volume for m1 >= 0.5 is {} of the m1 = 0.1 level (limit 5%)", pct(worst)),
    );

    // 12
    let top = level(&m4, 0.9);
    let (ref_vol, ref_fac) = (volume(top), facilities(top));
    let low: Vec<&(f64, Ensemble)> = m4.iter().filter(|(x, _)| *x < 0.5 - 1e-9).collect();
    let worst_vol = low.iter().map(|(_, e)| volume(e) / ref_vol).fold(0.0, f64::max);
    let fac_up = low.iter().all(|(_, e)| facilities(e) > ref_fac);
    v.report(
        12,
        "m4 sweep halt",
        worst_vol < 0.1 && fac_up,
        format!(
            "largest volume for m4 < 0.5 is {} of the m4 = 0.9 level (limit 10%), facility use above the m4 = 0.9 level at every point: {fac_up}",
            pct(worst_vol)
        ),
    );

    // 13
    let mut overlap = true;
    let mut widest = 0.0f64;
    for seg in ["volume_on", "volume_term"] {
        let stats: Vec<(f64, f64)> = m3
            .iter()
            .map(|(_, e)| {
                let r = per_run(e, seg, BURN_IN + 1, STEPS);
                (mean(&r), std_dev(&r))
            })
            .collect();
        for i in 0..stats.len() {
            for j in i + 1..stats.len() {
                let sd = stats[i].1.max(stats[j].1);
                let gap = (stats[i].0 - stats[j].0).abs();
                if sd > 0.0 {
                    widest = widest.max(gap / sd);
                }
                overlap &= gap <= sd;
            }
        }
    }
    let fac: Vec<f64> = m3.iter().map(|(_, e)| facilities(e)).collect();
    let up = fac.windows(2).all(|w| w[1] >= w[0]);
    let down = fac.windows(2).all(|w| w[1] <= w[0]);
    v.report(
        13,
        "m3 sweep overlap",
        overlap && (up || down),
        format!(
            "largest pairwise gap {widest:.2} ensemble SDs (limit 1), facility use monotone: {}",
            up || down
        ),
    );

    // 14
    let mut lowest = f64::INFINITY;
    let mut detail = Vec::new();
    for (param, points) in &appendix {
        let cycles: Vec<(Vec<f64>, Vec<f64>)> = points
            .iter()
            .map(|(_, e)| {
                let s = EnsembleSummary::from_frames(&frames(e)).unwrap().mean_frame(0).trimmed(BURN_IN);
                let c = |var: &str| hp_filter(s.column(var).unwrap(), HP_LAMBDA_MONTHLY).unwrap().1;
                (c("volume_on"), c("output"))
            })
            .collect();
        let mid = cycles.len() / 2;
        let mut p_low = f64::INFINITY;
        for (k, c) in cycles.iter().enumerate() {
            if k == mid {
                continue;
            }
            p_low = p_low
                .min(spearman(&c.0, &cycles[mid].0))
                .min(spearman(&c.1, &cycles[mid].1));
        }
        lowest = lowest.min(p_low);
        detail.push(format!("{param} {p_low:.3}"));
    }
    v.report(
        14,
        "secondary sweeps preserve dynamics",
        lowest >= 0.8,
        format!(
            "lowest rank correlation of de-trended overnight volume and output against the default point: {} (limit 0.8)",
            detail.join(", ")
        ),
    );

    // 15
    let suite = common::oracle_suite(1000, 2024);
    let worst = suite.iter().map(|x| x.1).fold(0.0, f64::max);
    let (name, _) = suite.iter().copied().fold(("", -1.0), |a, x| if x.1 > a.1 { x } else { a });
    v.report(
        15,
        "unit oracles",
        worst <= common::ORACLE_TOLERANCE,
        format!(
            "{} oracle groups on 1000 random states, worst relative error {worst:.2e} ({name})",
            suite.len()
        ),
    );

    // 16
    let mut small = base.clone();
    small.run.replicates = 3;
    small.run.steps = 300;
    small.interbank.scenario = Scenario::Maturity;
    small.run.shock = ShockKind::Corridor;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let written: Vec<_> = dirs
        .iter()
        .map(|d| write_ensemble(&run(&small), d.path()).unwrap())
        .collect();
    let identical = written[0].len() == written[1].len()
        && written[0]
            .iter()
            .zip(&written[1])
            .all(|(a, b)| std::fs::read(a).unwrap() == std::fs::read(b).unwrap());
    v.report(
        16,
        "determinism",
        identical,
        format!("{} files compared byte for byte across two executions", written[0].len()),
    );

    println!("acceptance: {} of 16 criteria failed", v.failed);
    if v.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
