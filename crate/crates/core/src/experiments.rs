//! Policy-shock schedules and one-at-a-time parameter sweeps.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Result, SimError};
use crate::interbank::Scenario;

/// Steps at which a shock fires.
pub const SHOCK_STEPS: [u32; 4] = [300, 600, 900, 1200];
/// Corridor increment per event (50 basis points).
pub const RATE_STEP: f64 = 0.005;
/// Uncertainty increment per event.
pub const PDU_STEP: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ShockKind {
    #[default]
    Missing,
    Corridor,
    Width,
    Uncertainty,
}

impl ShockKind {
    pub const ALL: [ShockKind; 4] = [
        ShockKind::Missing,
        ShockKind::Corridor,
        ShockKind::Width,
        ShockKind::Uncertainty,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ShockKind::Missing => "missing",
            ShockKind::Corridor => "corridor",
            ShockKind::Width => "width",
            ShockKind::Uncertainty => "uncertainty",
        }
    }
}

impl std::str::FromStr for ShockKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ShockKind::ALL
            .into_iter()
            .find(|k| k.label() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown shock '{s}' (expected missing|corridor|width|uncertainty)"))
    }
}

impl std::fmt::Display for ShockKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Parameters moved by shocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockedParams {
    pub icb_d: f64,
    pub icb_l: f64,
    pub pdu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockSchedule {
    pub kind: ShockKind,
    pub steps: Vec<u32>,
}

impl ShockSchedule {
    pub fn new(kind: ShockKind) -> Self {
        ShockSchedule {
            kind,
            steps: SHOCK_STEPS.to_vec(),
        }
    }

    /// Number of events that have fired by period `t`.
    pub fn events_by(&self, t: u32) -> usize {
        self.steps.iter().filter(|&&s| s <= t).count()
    }
}

/// Parameters in force at period `t`, from the unshocked `base`.
///
/// The result depends only on `t`, so re-applying a step is a no-op and
/// steps beyond the horizon never fire.
pub fn apply_shocks(schedule: &ShockSchedule, t: u32, base: ShockedParams) -> ShockedParams {
    let n = schedule.events_by(t) as f64;
    let mut p = base;
    match schedule.kind {
        ShockKind::Missing => {}
        ShockKind::Corridor => {
            p.icb_d += n * RATE_STEP;
            p.icb_l += n * RATE_STEP;
        }
        ShockKind::Width => p.icb_l += n * RATE_STEP,
        ShockKind::Uncertainty => p.pdu += n * PDU_STEP,
    }
    p
}

/// Parameters that can be swept one at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    M1,
    M2,
    M3,
    M4,
    M5,
    R,
    Delta,
    L,
    Gamma,
    GD,
}

impl SweepParam {
    pub const ALL: [SweepParam; 10] = [
        SweepParam::M1,
        SweepParam::M2,
        SweepParam::M3,
        SweepParam::M4,
        SweepParam::M5,
        SweepParam::R,
        SweepParam::Delta,
        SweepParam::L,
        SweepParam::Gamma,
        SweepParam::GD,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SweepParam::M1 => "m1",
            SweepParam::M2 => "m2",
            SweepParam::M3 => "m3",
            SweepParam::M4 => "m4",
            SweepParam::M5 => "m5",
            SweepParam::R => "r",
            SweepParam::Delta => "delta",
            SweepParam::L => "l",
            SweepParam::Gamma => "gamma",
            SweepParam::GD => "g_d",
        }
    }

    pub fn is_weight(self) -> bool {
        matches!(
            self,
            SweepParam::M1 | SweepParam::M2 | SweepParam::M3 | SweepParam::M4 | SweepParam::M5
        )
    }

    /// Scenario the sweep is run under by default.
    pub fn default_scenario(self) -> Scenario {
        if self.is_weight() {
            Scenario::Maturity
        } else {
            Scenario::Baseline
        }
    }

    /// Default grid: tenths of the unit interval for weights, three levels
    /// around the default otherwise.
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            p if p.is_weight() => parse_grid("0:1:0.1").expect("valid literal"),
            SweepParam::R => vec![0.4, 0.6, 0.8],
            SweepParam::Delta => vec![0.01, 0.02, 0.05],
            SweepParam::L => vec![0.005, 0.01, 0.02],
            SweepParam::Gamma => vec![0.25, 0.5, 0.75],
            SweepParam::GD => vec![0.1, 0.3, 0.5],
            _ => unreachable!(),
        }
    }

    /// Writes `value` into the matching configuration field.
    pub fn set(self, cfg: &mut RunConfig, value: f64) {
        let w = &mut cfg.interbank.weights;
        match self {
            SweepParam::M1 => w.m1 = value,
            SweepParam::M2 => w.m2 = value,
            SweepParam::M3 => w.m3 = value,
            SweepParam::M4 => w.m4 = value,
            SweepParam::M5 => w.m5 = value,
            SweepParam::R => cfg.government.r = value,
            SweepParam::Delta => cfg.real_sector.delta = value,
            SweepParam::L => cfg.banking.l = value,
            SweepParam::Gamma => cfg.real_sector.gamma = value,
            SweepParam::GD => cfg.real_sector.g_d = value,
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.to_ascii_lowercase();
        let s = match s.as_str() {
            "δ" => "delta",
            "γ" => "gamma",
            "gd" => "g_d",
            other => other,
        };
        SweepParam::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| format!("unknown sweep parameter '{s}'"))
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A one-at-a-time sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: Vec<f64>,
    pub scenario: Scenario,
    /// Replicates per grid point; weight sweeps default to a single run.
    pub replicates: u32,
}

impl SweepSpec {
    pub fn new(param: SweepParam) -> Self {
        SweepSpec {
            param,
            grid: param.default_grid(),
            scenario: param.default_scenario(),
            replicates: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.param.is_weight() {
            if let Some(bad) = self.grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(SimError::Config(format!(
                    "grid value {bad} for {} outside [0, 1]",
                    self.param
                )));
            }
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(SimError::Config("grid values must be finite".into()));
        }
        Ok(())
    }

    /// Configurations for every grid point, sharing the base seed.
    pub fn configs(&self, base: &RunConfig) -> Result<Vec<(f64, RunConfig)>> {
        self.validate()?;
        self.grid
            .iter()
            .map(|&v| {
                let mut cfg = base.clone();
                cfg.interbank.scenario = self.scenario;
                cfg.run.replicates = self.replicates;
                self.param.set(&mut cfg, v);
                cfg.validate()?;
                Ok((v, cfg))
            })
            .collect()
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
///
/// Grid points are rounded to twelve decimals so that `0:1:0.1` yields the
/// eleven tenths exactly as written.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| SimError::Config(format!("invalid grid '{spec}': {m}"));
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        if step <= 0.0 || !step.is_finite() {
            return Err(bad("step must be positive"));
        }
        if stop < start {
            return Ok(Vec::new());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect())
    } else {
        spec.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ShockedParams {
        ShockedParams {
            icb_d: 0.005,
            icb_l: 0.015,
            pdu: 0.0,
        }
    }

    #[test]
    fn corridor_first_event() {
        let s = ShockSchedule::new(ShockKind::Corridor);
        let p = apply_shocks(&s, 299, base());
        assert_eq!(p, base());
        let p = apply_shocks(&s, 300, base());
        assert!((p.icb_d - 0.010).abs() < 1e-15);
        assert!((p.icb_l - 0.020).abs() < 1e-15);
    }

    #[test]
    fn width_after_all_events() {
        let p = apply_shocks(&ShockSchedule::new(ShockKind::Width), 1200, base());
        assert!((p.icb_l - 0.035).abs() < 1e-15);
        assert_eq!(p.icb_d, 0.005);
    }

    #[test]
    fn uncertainty_path() {
        let s = ShockSchedule::new(ShockKind::Uncertainty);
        assert!((apply_shocks(&s, 1000, base()).pdu - 0.6).abs() < 1e-12);
        assert!((apply_shocks(&s, 1200, base()).pdu - 0.8).abs() < 1e-12);
        let once = apply_shocks(&s, 600, base());
        assert_eq!(once, apply_shocks(&s, 600, base()));
    }

    #[test]
    fn missing_is_constant() {
        let s = ShockSchedule::new(ShockKind::Missing);
        for t in [0, 300, 1200, 5000] {
            assert_eq!(apply_shocks(&s, t, base()), base());
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:1:0.1").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], 0.3);
        assert_eq!(g[10], 1.0);
        assert!(parse_grid("").unwrap().is_empty());
        assert_eq!(parse_grid("0.4, 0.6").unwrap(), vec![0.4, 0.6]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn sweep_configs_share_seed() {
        let spec = SweepSpec::new(SweepParam::M1);
        let cfgs = spec.configs(&RunConfig::default()).unwrap();
        assert_eq!(cfgs.len(), 11);
        assert!(cfgs.iter().all(|(_, c)| c.run.seed == RunConfig::default().run.seed));
        assert_eq!(cfgs[5].1.interbank.weights.m1, 0.5);
        assert_eq!(cfgs[5].1.interbank.scenario, Scenario::Maturity);
        let mut bad = spec.clone();
        bad.grid = vec![1.5];
        assert!(bad.configs(&RunConfig::default()).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("m3".parse::<SweepParam>().unwrap(), SweepParam::M3);
        assert_eq!("g_d".parse::<SweepParam>().unwrap(), SweepParam::GD);
        assert_eq!("Corridor".parse::<ShockKind>().unwrap(), ShockKind::Corridor);
    }
}
