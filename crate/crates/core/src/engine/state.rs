use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::banking::{BankKind, BankState, PolicyRates};
use crate::interbank::{SegmentBook, StabilityProfile};
use crate::ledger::{Instrument, Sector, SectorBalance};
use crate::real_sector::{Firm, Household};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Government<T> {
    /// Total debt, tracked from the government's own flows.
    pub debt: T,
    /// Bills outstanding.
    pub bills: T,
    /// Long-term bonds issued against non-performing loans.
    pub bonds: T,
    pub transfers: T,
    pub taxes: T,
    /// Interest paid net of central-bank profits in the last period.
    pub net_interest: T,
    /// Bonds issued to absorb non-performing loans in the last period.
    pub absorbed: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralBank<T> {
    pub bills: T,
    pub hpm: T,
    pub advances: T,
    pub rl: T,
    pub rd: T,
    pub profits: T,
}

/// Independent random streams, one per purpose, so that the number of draws
/// in one stream never depends on model state.
#[derive(Debug, Clone)]
pub struct RngStreams {
    pub goods: ChaCha8Rng,
    pub credit: ChaCha8Rng,
    pub market: ChaCha8Rng,
    pub split: ChaCha8Rng,
    pub order: ChaCha8Rng,
    pub init: ChaCha8Rng,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        let stream = |k: u64| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(k);
            r
        };
        RngStreams {
            goods: stream(1),
            credit: stream(2),
            market: stream(3),
            split: stream(4),
            order: stream(5),
            init: stream(6),
        }
    }

    pub fn uniform<T: Scalar>(rng: &mut ChaCha8Rng) -> T {
        T::lit(rng.gen::<f64>())
    }
}

/// Per-bank interbank diagnostics of the last period.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BankMarketView<T> {
    pub profile: StabilityProfile<T>,
    pub demand: T,
    pub supply: T,
    pub delta_hpm: T,
}

/// Everything that evolves in a run.
#[derive(Debug, Clone, Serialize)]
pub struct EconomyState<T> {
    pub period: u32,
    pub households: Vec<Household<T>>,
    pub firms: Vec<Firm<T>>,
    pub banks: Vec<BankState<T>>,
    pub government: Government<T>,
    pub central_bank: CentralBank<T>,
    pub rates: PolicyRates<T>,
    pub pdu: T,
    pub rate_on: T,
    pub rate_term: T,
    /// Nominal output of the last period.
    pub output: T,
    pub market: Vec<BankMarketView<T>>,
    #[serde(skip)]
    pub book: SegmentBook<T>,
    #[serde(skip)]
    pub rng: RngStreams,
}

impl<T: Scalar> EconomyState<T> {
    pub fn commercial_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.banks
            .iter()
            .filter(|b| b.kind == BankKind::Commercial)
            .map(|b| b.id)
    }

    pub fn business_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.banks
            .iter()
            .filter(|b| b.kind == BankKind::Business)
            .map(|b| b.id)
    }

    /// Rebuilds each bank's customer list from the agents' links.
    pub fn refresh_customers(&mut self) {
        for b in &mut self.banks {
            b.customers.clear();
        }
        for h in &self.households {
            self.banks[h.bank].customers.push(h.id);
        }
        for f in &self.firms {
            self.banks[f.bank].customers.push(f.id);
        }
    }

    /// Columns of the balance-sheet matrix.
    pub fn sector_balances(&self) -> Vec<SectorBalance<T>> {
        use Instrument::*;
        let sum = |it: &mut dyn Iterator<Item = T>| crate::scalar::compensated_sum(it);

        let (mut k, mut inv) = (T::zero(), T::zero());
        for f in &self.firms {
            let (kv, iv) = f.real_assets();
            k += kv;
            inv += iv;
        }
        let firms = SectorBalance::closing(
            Sector::Firms,
            vec![
                (Capital, k),
                (Inventories, inv),
                (Loans, -sum(&mut self.firms.iter().map(|f| f.loans))),
                (Deposits, sum(&mut self.firms.iter().map(|f| f.deposits))),
            ],
        );
        let households = SectorBalance::closing(
            Sector::Households,
            vec![
                (Loans, -sum(&mut self.households.iter().map(|h| h.loans))),
                (Deposits, sum(&mut self.households.iter().map(|h| h.deposits))),
            ],
        );
        let b = &self.banks;
        let banks = SectorBalance::new(
            Sector::Banks,
            -sum(&mut b.iter().map(|x| x.net_worth)),
        )
        .with(Loans, sum(&mut b.iter().map(|x| x.loans)))
        .with(Deposits, -sum(&mut b.iter().map(|x| x.deposits)))
        .with(Bills, sum(&mut b.iter().map(|x| x.bills)))
        .with(Bonds, sum(&mut b.iter().map(|x| x.bonds)))
        .with(Hpm, sum(&mut b.iter().map(|x| x.hpm)))
        .with(Advances, -sum(&mut b.iter().map(|x| x.advances)))
        .with(LendingFacility, -sum(&mut b.iter().map(|x| x.rl)))
        .with(DepositFacility, sum(&mut b.iter().map(|x| x.rd)))
        .with(
            Interbank,
            sum(&mut b
                .iter()
                .map(|x| x.iba_on + x.iba_term - x.ibl_on - x.ibl_term)),
        );
        let g = &self.government;
        let government = SectorBalance::new(Sector::Government, g.debt)
            .with(Bills, -g.bills)
            .with(Bonds, -g.bonds);
        let c = &self.central_bank;
        let central_bank = SectorBalance::new(Sector::CentralBank, T::zero())
            .with(Bills, c.bills)
            .with(Hpm, -c.hpm)
            .with(Advances, c.advances)
            .with(LendingFacility, c.rl)
            .with(DepositFacility, -c.rd);
        vec![firms, households, banks, government, central_bank]
    }
}
