use crate::config::RunConfig;
use crate::experiments::{ShockSchedule, ShockedParams};
use crate::interbank::{NsfrWeights, Scenario};
use crate::real_sector::MatchingParams;
use crate::scalar::Scalar;

/// Run configuration converted once into the model's scalar type.
#[derive(Debug, Clone)]
pub struct ModelParams<T> {
    pub scenario: Scenario,
    pub schedule: ShockSchedule,
    pub base: ShockedParams,
    pub weights: NsfrWeights<T>,
    pub sigma_ib: T,
    pub a0_low: T,
    pub a0_high: T,
    pub lambda_e: T,
    pub alpha1: T,
    pub alpha2: T,
    pub wage: T,
    pub markup: T,
    pub inventory_share: T,
    pub delta: T,
    pub tax_rate: T,
    pub gamma: T,
    pub debt_horizon: T,
    pub household_amortization: T,
    pub firm_amortization: T,
    pub g_d: T,
    pub deposit_horizon: T,
    pub npl_share: T,
    pub mu: T,
    pub v: T,
    pub markup_l: T,
    pub markdown_d: T,
    pub bills_spread: T,
    pub bonds_spread: T,
    /// Government debt level the fiscal rule steers towards.
    pub debt_target: T,
    pub fiscal_adjustment: T,
    pub matching: MatchingParams<T>,
}

impl<T: Scalar> ModelParams<T> {
    pub fn from_config(cfg: &RunConfig) -> Self {
        let rs = &cfg.real_sector;
        let b = &cfg.banking;
        let c = T::lit;
        ModelParams {
            scenario: cfg.interbank.scenario,
            schedule: ShockSchedule::new(cfg.run.shock),
            base: ShockedParams {
                icb_d: cfg.interbank.icb_d,
                icb_l: cfg.interbank.icb_l,
                pdu: cfg.interbank.pdu0,
            },
            weights: cfg.interbank.weights.cast(),
            sigma_ib: c(cfg.interbank.sigma_ib),
            a0_low: c(cfg.interbank.a0[0]),
            a0_high: c(cfg.interbank.a0[1]),
            lambda_e: c(rs.lambda_e),
            alpha1: c(rs.alpha1),
            alpha2: c(rs.alpha2),
            wage: c(rs.wage),
            markup: c(rs.markup),
            inventory_share: c(rs.inventory_share),
            delta: c(rs.delta),
            tax_rate: c(rs.tax_rate),
            gamma: c(rs.gamma),
            debt_horizon: c(rs.debt_horizon),
            household_amortization: c(rs.household_amortization),
            firm_amortization: c(rs.firm_amortization),
            g_d: c(rs.g_d),
            deposit_horizon: c(rs.deposit_horizon),
            npl_share: c(b.l),
            mu: c(b.mu),
            v: c(b.v),
            markup_l: c(b.markup_l),
            markdown_d: c(b.markdown_d),
            bills_spread: c(b.bills_spread),
            bonds_spread: c(b.bonds_spread),
            debt_target: c(cfg.government.r
                * cfg.government.periods_per_year
                * rs.households as f64
                * rs.wage
                * (1.0 + rs.markup)),
            fiscal_adjustment: c(cfg.government.adjustment),
            matching: MatchingParams {
                subset_size: rs.subset_size,
                intensity: c(rs.intensity),
            },
        }
    }
}
