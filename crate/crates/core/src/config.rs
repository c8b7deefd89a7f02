//! Run configuration, loadable from TOML with every field defaulted.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::banking::PolicyRates;
use crate::error::{Result, SimError};
use crate::experiments::ShockKind;
use crate::interbank::{NsfrWeights, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub real_sector: RealSectorParams,
    pub banking: BankingParams,
    pub interbank: InterbankParams,
    pub government: GovernmentParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run: RunSection::default(),
            real_sector: RealSectorParams::default(),
            banking: BankingParams::default(),
            interbank: InterbankParams::default(),
            government: GovernmentParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub steps: u32,
    pub replicates: u32,
    pub burn_in: u32,
    pub seed: u64,
    pub shock: ShockKind,
    /// Relative tolerance of the end-of-period audit.
    pub audit_tolerance: f64,
    /// Stop a run at the first failed audit.
    pub halt_on_audit_failure: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            steps: 1200,
            replicates: 100,
            burn_in: 100,
            seed: 42,
            shock: ShockKind::Missing,
            audit_tolerance: 1e-8,
            halt_on_audit_failure: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RealSectorParams {
    pub households: usize,
    pub firms: usize,
    /// Adaptive-expectations speed.
    pub lambda_e: f64,
    /// Propensity to consume out of expected disposable income.
    pub alpha1: f64,
    /// Propensity to consume out of deposits.
    pub alpha2: f64,
    pub wage: f64,
    pub markup: f64,
    pub inventory_share: f64,
    /// Capital depreciation rate.
    pub delta: f64,
    /// Capital stock per firm, in goods units.
    pub capital: f64,
    pub subset_size: usize,
    /// Intensity of choice in partner switching.
    pub intensity: f64,
    pub tax_rate: f64,
    /// Household leverage: desired debt relative to expected income over
    /// `debt_horizon` periods.
    pub gamma: f64,
    pub debt_horizon: f64,
    pub household_amortization: f64,
    pub firm_amortization: f64,
    /// Firms' propensity to hold deposits.
    pub g_d: f64,
    /// Periods of wage and investment outlays scaled by `g_d` that firms
    /// keep as deposits before paying dividends.
    pub deposit_horizon: f64,
    pub initial_household_deposits: f64,
    pub initial_firm_deposits: f64,
}

impl Default for RealSectorParams {
    fn default() -> Self {
        RealSectorParams {
            households: 500,
            firms: 100,
            lambda_e: 0.25,
            alpha1: 0.8,
            alpha2: 0.1,
            wage: 1.0,
            markup: 0.2,
            inventory_share: 0.1,
            delta: 0.02,
            capital: 100.0,
            subset_size: 3,
            intensity: 5.0,
            tax_rate: 0.2,
            gamma: 0.5,
            debt_horizon: 7.0,
            household_amortization: 0.05,
            firm_amortization: 0.5,
            g_d: 0.3,
            deposit_horizon: 12.0,
            initial_household_deposits: 10.0,
            initial_firm_deposits: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BankingParams {
    pub mu: f64,
    pub v: f64,
    /// Share of loans turning non-performing each period.
    pub l: f64,
    pub markup_l: f64,
    pub markdown_d: f64,
    #[serde(rename = "N_bj")]
    pub n_bj: usize,
    #[serde(rename = "N_bk")]
    pub n_bk: usize,
    /// Bills yield over the policy target.
    pub bills_spread: f64,
    /// Bond yield over the policy target.
    pub bonds_spread: f64,
}

impl Default for BankingParams {
    fn default() -> Self {
        BankingParams {
            mu: 0.01,
            v: 0.01,
            l: 0.01,
            markup_l: 0.5,
            markdown_d: 0.5,
            n_bj: 10,
            n_bk: 10,
            bills_spread: 0.0,
            bonds_spread: 0.002,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterbankParams {
    pub scenario: Scenario,
    pub sigma_ib: f64,
    #[serde(rename = "PDU0")]
    pub pdu0: f64,
    pub icb_d: f64,
    pub icb_l: f64,
    /// Bounds of the uniform draw entering the money-market parameters.
    pub a0: [f64; 2],
    pub weights: NsfrWeights<f64>,
}

impl Default for InterbankParams {
    fn default() -> Self {
        InterbankParams {
            scenario: Scenario::Baseline,
            sigma_ib: 0.5,
            pdu0: 0.0,
            icb_d: 0.005,
            icb_l: 0.015,
            a0: [0.2, 0.4],
            weights: NsfrWeights::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GovernmentParams {
    /// Target debt relative to annualised reference output (the initial
    /// full-employment output).
    pub r: f64,
    /// Periods per year used to annualise output.
    pub periods_per_year: f64,
    /// Speed at which transfers close the gap to the debt target.
    pub adjustment: f64,
}

impl Default for GovernmentParams {
    fn default() -> Self {
        GovernmentParams {
            r: 0.6,
            periods_per_year: 12.0,
            adjustment: 0.05,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("configuration is always serialisable")
    }

    pub fn policy_rates(&self) -> PolicyRates<f64> {
        let ib = &self.interbank;
        let t = (ib.icb_d + ib.icb_l) / 2.0;
        PolicyRates {
            icb_d: ib.icb_d,
            icb_l: ib.icb_l,
            ib: t + self.banking.bills_spread,
            ib_lr: t + self.banking.bonds_spread,
            mu: self.banking.mu,
            v: self.banking.v,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(SimError::Config(m));
        let r = &self.run;
        if r.steps == 0 {
            return err("run.steps must be positive".into());
        }
        if r.burn_in >= r.steps {
            return err(format!(
                "run.burn_in ({}) must be below run.steps ({})",
                r.burn_in, r.steps
            ));
        }
        let rs = &self.real_sector;
        if rs.households == 0 || rs.firms == 0 {
            return err("real_sector needs at least one household and one firm".into());
        }
        if rs.subset_size == 0 || rs.subset_size > rs.firms.min(self.banking.n_bj.max(1)) {
            return err(format!(
                "real_sector.subset_size must be in 1..={}",
                rs.firms.min(self.banking.n_bj)
            ));
        }
        if rs.intensity < 0.0 {
            return err("real_sector.intensity must be non-negative".into());
        }
        for (name, x) in [
            ("lambda_e", rs.lambda_e),
            ("tax_rate", rs.tax_rate),
            ("delta", rs.delta),
            ("household_amortization", rs.household_amortization),
            ("firm_amortization", rs.firm_amortization),
            ("g_d", rs.g_d),
            ("l", self.banking.l),
        ] {
            if !(0.0..=1.0).contains(&x) {
                return err(format!("{name} must lie in [0, 1], got {x}"));
            }
        }
        let b = &self.banking;
        if b.n_bj == 0 || b.n_bk == 0 {
            return err("banking.N_bj and banking.N_bk must be positive".into());
        }
        if !self.policy_rates().is_valid() || self.interbank.icb_d > self.interbank.icb_l {
            return err("corridor must satisfy icb_d <= icb_l and mu, v in [0, 1)".into());
        }
        let [lo, hi] = self.interbank.a0;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return err(format!("interbank.a0 must be finite with low <= high, got [{lo}, {hi}]"));
        }
        if self.interbank.sigma_ib <= 0.0 {
            return err("interbank.sigma_ib must be positive".into());
        }
        if self.interbank.pdu0 < 0.0 {
            return err("interbank.PDU0 must be non-negative".into());
        }
        if !self.interbank.weights.is_valid() {
            return err("NSFR weights must lie in [0, 1]".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let back = RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let cfg = RunConfig::from_toml_str(
            "[interbank]\nscenario = \"maturity\"\n[banking]\nN_bj = 4\nN_bk = 6\n",
        )
        .unwrap();
        assert_eq!(cfg.interbank.scenario, Scenario::Maturity);
        assert_eq!(cfg.banking.n_bj, 4);
        assert_eq!(cfg.run.steps, 1200);
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(RunConfig::from_toml_str("[run]\nburn_in = 2000\n").is_err());
        assert!(RunConfig::from_toml_str("[interbank.weights]\nm1 = 1.5\n").is_err());
        assert!(RunConfig::from_toml_str("[nonsense]\n").is_err());
    }
}
