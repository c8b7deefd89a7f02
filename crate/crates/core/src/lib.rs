//! Agent-based, stock-flow consistent simulator of a two-tier payment system
//! with overnight and term unsecured interbank markets.
//!
//! Households and firms bank with commercial and business banks; their
//! payments leave banks in surplus or deficit, and deficit banks seek funds
//! from surplus banks in two maturity segments. How demand and supply are
//! split across maturities, and how counterparties are paired, depends on
//! the scenario and on each bank's margin of stability under net stable
//! funding weights. Every period ends with a balance-sheet audit.
//!
//! Numerical code is generic over [`Scalar`]; the aliases below fix it to
//! `f64`.

pub mod analytics;
pub mod banking;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod interbank;
pub mod ledger;
pub mod real_sector;
pub mod scalar;

pub use config::RunConfig;
pub use error::{Result, SimError};
pub use scalar::Scalar;

pub type Economy = engine::EconomyState<f64>;
pub type Bank = banking::BankState<f64>;
pub type Rates = banking::PolicyRates<f64>;
pub type Weights = interbank::NsfrWeights<f64>;
pub type Profile = interbank::StabilityProfile<f64>;
pub type Book = interbank::SegmentBook<f64>;
