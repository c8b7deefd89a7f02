use rand::Rng;

use super::params::ModelParams;
use super::state::{BankMarketView, CentralBank, EconomyState, Government, RngStreams};
use crate::banking::{
    bills_and_advances, required_reserves, update_credit_rates, BankKind, BankState,
    BufferInputs, PolicyRates,
};
use crate::config::RunConfig;
use crate::error::{Result, SimError};
use crate::interbank::SegmentBook;
use crate::real_sector::{update_price, Firm, Household};
use crate::scalar::Scalar;

pub(crate) fn policy_rates<T: Scalar>(p: &ModelParams<T>, icb_d: f64, icb_l: f64) -> PolicyRates<T> {
    let icb_d = T::lit(icb_d);
    let icb_l = T::lit(icb_l);
    let t = (icb_d + icb_l) / T::lit(2.0);
    PolicyRates {
        icb_d,
        icb_l,
        ib: t + p.bills_spread,
        ib_lr: t + p.bonds_spread,
        mu: p.mu,
        v: p.v,
    }
}

/// Period-zero economy: equal deposits for every household and firm, backed
/// by bills, with links drawn at random.
pub fn initialize<T: Scalar>(cfg: &RunConfig, seed: u64) -> Result<EconomyState<T>> {
    cfg.validate()?;
    let p = ModelParams::<T>::from_config(cfg);
    let rs = &cfg.real_sector;
    let nb_j = cfg.banking.n_bj;
    let nb_k = cfg.banking.n_bk;
    let mut rng = RngStreams::new(seed);

    let mut banks: Vec<BankState<T>> = (0..nb_j)
        .map(|i| BankState::new(i, BankKind::Commercial))
        .chain((0..nb_k).map(|i| BankState::new(nb_j + i, BankKind::Business)))
        .collect();

    let cost = p.wage;
    let per_firm = T::lit(rs.households as f64 / rs.firms as f64);
    let mut firms: Vec<Firm<T>> = (0..rs.firms)
        .map(|i| {
            let bank = nb_j + rng.init.gen_range(0..nb_k);
            let supplier = if rs.firms > 1 {
                (i + 1 + rng.init.gen_range(0..rs.firms - 1)) % rs.firms
            } else {
                i
            };
            let mut f = Firm::new(i, bank, supplier, cost);
            f.price = update_price(cost, p.markup);
            f.capital = T::lit(rs.capital);
            f.expected_sales = per_firm;
            f.sales = per_firm;
            f.inventory = per_firm * p.inventory_share;
            f.deposits = T::lit(rs.initial_firm_deposits);
            f
        })
        .collect();
    let households: Vec<Household<T>> = (0..rs.households)
        .map(|i| {
            let bank = rng.init.gen_range(0..nb_j);
            let supplier = rng.init.gen_range(0..rs.firms);
            let mut h = Household::new(i, i % rs.firms, bank, supplier);
            h.deposits = T::lit(rs.initial_household_deposits);
            h.expected_income = p.wage;
            h.wage = p.wage;
            h
        })
        .collect();

    for h in &households {
        banks[h.bank].deposits += h.deposits;
    }
    for f in &firms {
        banks[f.bank].deposits += f.deposits;
    }
    let rates = policy_rates(&p, cfg.interbank.icb_d, cfg.interbank.icb_l);
    let deposits: T = banks.iter().map(|b| b.deposits).sum();
    let bills_total = deposits;
    let per_bank = bills_total / T::lit((nb_j + nb_k) as f64);
    let icb_t = rates.target();
    for b in &mut banks {
        b.hpm = required_reserves(b.deposits, &rates);
        let out = bills_and_advances(&BufferInputs::from_bank(b), per_bank, &rates)
            .map_err(|_| SimError::Config("inconsistent initial balance sheet".into()))?;
        b.bills = out.bills;
        b.advances = out.advances;
        b.parked = out.parked;
        b.rd = out.parked;
        b.funding_cost = icb_t;
        let (il, id) = update_credit_rates(icb_t, p.markup_l, p.markdown_d);
        b.loan_rate = il;
        b.deposit_rate = id;
    }
    let bank_bills: T = banks.iter().map(|b| b.bills).sum();
    let central_bank = CentralBank {
        bills: bills_total - bank_bills,
        hpm: banks.iter().map(|b| b.hpm).sum(),
        advances: banks.iter().map(|b| b.advances).sum(),
        rl: T::zero(),
        rd: banks.iter().map(|b| b.rd).sum(),
        profits: T::zero(),
    };
    let output: T = firms.iter().map(|f| f.sales * f.price).sum();
    for f in &mut firms {
        f.revenue = f.sales * f.price;
    }

    let mut state = EconomyState {
        period: 0,
        households,
        firms,
        banks,
        government: Government {
            debt: bills_total,
            bills: bills_total,
            bonds: T::zero(),
            transfers: T::zero(),
            taxes: T::zero(),
            net_interest: T::zero(),
            absorbed: T::zero(),
        },
        central_bank,
        rates,
        pdu: T::lit(cfg.interbank.pdu0),
        rate_on: icb_t,
        rate_term: icb_t,
        output,
        market: vec![BankMarketView::default(); nb_j + nb_k],
        book: SegmentBook::default(),
        rng,
    };
    state.refresh_customers();
    Ok(state)
}
