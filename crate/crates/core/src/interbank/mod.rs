//! Two-segment unsecured interbank market: stability margins derived from
//! net-stable-funding weights, maturity-split demand and supply, the two
//! matching protocols with short-side settlement, standing facilities,
//! logistic rate clearing, funding costs and rationing.

mod matching;
mod nsfr;
mod rates;
mod split;

pub use matching::{
    match_baseline, match_maturity, standing_facilities, stability_distance, BankSettlement,
    Match, Order, SegmentBook,
};
pub use nsfr::nsfr_components;
pub use rates::{clear_rate, clear_rates, funding_cost, rationing, FundingTrades};
pub use split::{
    baseline_borrower_split, baseline_lender_split, borrower_split, lbw, lender_split, theta,
    Split,
};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Interbank matching protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Lenders accommodate borrowers in amount and maturity.
    #[default]
    Baseline,
    /// Splits and pairing follow stability margins; settlement is short-side.
    Maturity,
}

impl std::str::FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "baseline" => Ok(Scenario::Baseline),
            "maturity" => Ok(Scenario::Maturity),
            other => Err(format!("unknown scenario '{other}' (expected baseline|maturity)")),
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scenario::Baseline => "baseline",
            Scenario::Maturity => "maturity",
        })
    }
}

/// Interbank maturity segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    Overnight,
    Term,
}

impl Segment {
    pub const ALL: [Segment; 2] = [Segment::Overnight, Segment::Term];

    pub fn label(self) -> &'static str {
        match self {
            Segment::Overnight => "overnight",
            Segment::Term => "term",
        }
    }
}

/// Required (`m1..m3`) and available (`m4, m5`) stable-funding weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct NsfrWeights<T> {
    /// Short-term assets: firm loans, overnight interbank assets.
    pub m1: T,
    /// Medium-term assets: bills, household loans, term interbank assets.
    pub m2: T,
    /// Long-term bonds.
    pub m3: T,
    /// Customer deposits.
    pub m4: T,
    /// Term interbank liabilities.
    pub m5: T,
}

impl<T: Scalar> Default for NsfrWeights<T> {
    fn default() -> Self {
        NsfrWeights {
            m1: T::lit(0.1),
            m2: T::lit(0.5),
            m3: T::lit(0.05),
            m4: T::lit(0.9),
            m5: T::lit(0.5),
        }
    }
}

impl<T: Scalar> NsfrWeights<T> {
    pub fn as_array(&self) -> [T; 5] {
        [self.m1, self.m2, self.m3, self.m4, self.m5]
    }

    pub fn is_valid(&self) -> bool {
        self.as_array()
            .iter()
            .all(|w| *w >= T::zero() && *w <= T::one())
    }

    pub fn cast<U: Scalar>(&self) -> NsfrWeights<U> {
        let c = |x: T| U::lit(x.as_f64());
        NsfrWeights {
            m1: c(self.m1),
            m2: c(self.m2),
            m3: c(self.m3),
            m4: c(self.m4),
            m5: c(self.m5),
        }
    }
}

/// Stability margin of one bank and its derived maturity preferences.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StabilityProfile<T> {
    /// Unweighted assets.
    pub am: T,
    /// Unweighted liabilities.
    pub lm: T,
    /// Required stable funding as a share of assets.
    pub b_m: T,
    /// Available stable funding as a share of liabilities.
    pub a_m: T,
    /// Margin of stability; `+inf` when no stable funding is required.
    pub ms: T,
    pub bor: T,
    pub bor_target: T,
    pub pi_b: T,
    pub lor: T,
    pub lor_target: T,
    pub pi_l: T,
}

impl<T: Scalar> StabilityProfile<T> {
    /// True when the margin satisfies the regulatory floor.
    pub fn is_stable(&self) -> bool {
        self.ms >= T::one()
    }
}

/// Exogenous money-market inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams<T> {
    /// Perceived degree of uncertainty.
    pub pdu: T,
    /// Slope of the logistic rate-clearing map.
    pub sigma_ib: T,
}
