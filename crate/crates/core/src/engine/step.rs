use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use super::init::policy_rates;
use super::params::ModelParams;
use super::record::{PeriodRecord, MS_CAP};
use super::state::{BankMarketView, EconomyState, RngStreams};
use crate::banking::{
    bills_and_advances, interbank_position, payment_flow, profits, required_reserves,
    update_credit_rates, BankKind, BufferInputs, Status,
};
use crate::error::{Result, SimError};
use crate::experiments::apply_shocks;
use crate::interbank::{
    self, baseline_borrower_split, baseline_lender_split, borrower_split, clear_rates,
    funding_cost, lender_split, match_baseline, match_maturity, nsfr_components, FundingTrades,
    Order, Scenario, StabilityProfile,
};
use crate::ledger::{assemble_matrix, audit, AuditReport};
use crate::real_sector::{
    adaptive, choose_partner, consume_and_tax, plan_and_produce, rationing_factor, unit_cost,
    update_price,
};
use crate::scalar::{compensated_sum, Scalar};

/// Result of one period.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub record: PeriodRecord,
    pub audit: AuditReport,
}

fn draw_subset<T: Scalar>(rng: &mut ChaCha8Rng, n: usize, k: usize) -> (Vec<usize>, T) {
    let picks = sample(rng, n, k.min(n)).into_vec();
    let u = RngStreams::uniform::<T>(rng);
    (picks, u)
}

/// Advances the economy by one period and audits the result.
pub fn step<T: Scalar>(s: &mut EconomyState<T>, p: &ModelParams<T>, tolerance: f64) -> Result<StepOutcome> {
    let t = s.period + 1;
    let shocked = apply_shocks(&p.schedule, t, p.base);
    let prev_rates = s.rates;
    let rates = policy_rates(p, shocked.icb_d, shocked.icb_l);
    s.rates = rates;
    s.pdu = T::lit(shocked.pdu);
    let prev_banks = s.banks.clone();
    let prev_cb = s.central_bank.clone();
    let prev_gov = s.government.clone();
    let prev_hh: Vec<(T, T)> = s.households.iter().map(|h| (h.deposits, h.loans)).collect();
    let prev_firms: Vec<(T, T)> = s.firms.iter().map(|f| (f.deposits, f.loans)).collect();
    let n_h = s.households.len();
    let n_f = s.firms.len();
    let n_b = s.banks.len();
    let z = T::zero();

    // 1. Pricing.
    for f in &mut s.firms {
        f.price = update_price(f.unit_cost, p.markup);
    }
    for b in &mut s.banks {
        let (il, id) = update_credit_rates(b.funding_cost, p.markup_l, p.markdown_d);
        b.loan_rate = il;
        b.deposit_rate = id;
    }
    let prices: Vec<T> = s.firms.iter().map(|f| f.price).collect();

    // 2. Production and wages.
    let mut employees = vec![0usize; n_f];
    for h in &s.households {
        employees[h.employer] += 1;
    }
    for f in &mut s.firms {
        f.expected_sales = adaptive(f.expected_sales, f.sales, p.lambda_e);
        f.investment = if n_f > 1 { p.delta * f.capital } else { z };
        let inv_value = f.investment * prices[f.supplier];
        let plan = plan_and_produce(
            f.expected_sales,
            f.inventory,
            p.inventory_share,
            p.wage,
            inv_value,
            f.deposits,
            p.g_d,
        );
        let staffed = employees[f.id] > 0;
        f.output = if staffed { plan.output } else { z };
        f.wage_bill = if staffed { plan.wage_bill } else { z };
        f.credit_demand = plan.credit_demand;
        f.inventory += f.output;
        f.unit_cost = unit_cost(f.wage_bill, f.output, f.unit_cost);
        f.deposits -= f.wage_bill;
        s.banks[f.bank].deposits -= f.wage_bill;
        f.sales = z;
        f.revenue = z;
    }
    for h in &mut s.households {
        let f = &s.firms[h.employer];
        h.wage = f.wage_bill / T::lit(employees[f.id] as f64);
        h.deposits += h.wage;
        s.banks[h.bank].deposits += h.wage;
        h.other_income = z;
    }

    // 3. Transfers, taxes, partner choice and the goods market.
    let gov = &mut s.government;
    let transfers = (prev_gov.taxes - prev_gov.net_interest - prev_gov.absorbed
        + p.fiscal_adjustment * (p.debt_target - prev_gov.debt))
        .pos();
    let per_household = transfers / T::lit(n_h as f64);
    gov.transfers = transfers;
    gov.debt += per_household * T::lit(n_h as f64);
    let mut taxes = z;
    let mut orders = vec![z; n_f];
    let mut consumption = vec![z; n_h];
    for h in &mut s.households {
        h.deposits += per_household;
        s.banks[h.bank].deposits += per_household;
        h.other_income += per_household;
        let (c, tax) = consume_and_tax(h, p.tax_rate, p.alpha1, p.alpha2);
        h.taxes = tax;
        h.deposits -= tax;
        s.banks[h.bank].deposits -= tax;
        taxes += tax;
        let (picks, u) = draw_subset::<T>(&mut s.rng.goods, n_f, p.matching.subset_size);
        let cands: Vec<(usize, T)> = picks.iter().map(|&j| (j, prices[j])).collect();
        h.supplier = choose_partner(h.supplier, prices[h.supplier], &cands, &p.matching, u);
        consumption[h.id] = c;
        orders[h.supplier] += c / prices[h.supplier];
    }
    s.government.debt -= taxes;
    s.government.taxes = taxes;
    for i in 0..n_f {
        let (picks, u) = draw_subset::<T>(&mut s.rng.goods, n_f, p.matching.subset_size);
        let f = &mut s.firms[i];
        if n_f > 1 {
            let cands: Vec<(usize, T)> = picks
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (j, prices[j]))
                .collect();
            f.supplier = choose_partner(f.supplier, prices[f.supplier], &cands, &p.matching, u);
        }
        let sup = f.supplier;
        orders[sup] += f.investment;
    }
    let factors: Vec<T> = (0..n_f)
        .map(|j| rationing_factor(orders[j], s.firms[j].inventory))
        .collect();
    let mut output = z;
    for h in &mut s.households {
        let j = h.supplier;
        let spend = consumption[h.id] * factors[j];
        h.consumption = spend;
        h.deposits -= spend;
        s.banks[h.bank].deposits -= spend;
        let seller = &mut s.firms[j];
        seller.deposits += spend;
        s.banks[seller.bank].deposits += spend;
        let units = spend / prices[j];
        seller.inventory = (seller.inventory - units).pos();
        seller.sales += units;
        seller.revenue += spend;
        output += spend;
    }
    for i in 0..n_f {
        let j = s.firms[i].supplier;
        let units = s.firms[i].investment * factors[j];
        let cost = units * prices[j];
        let buyer = &mut s.firms[i];
        buyer.capital = buyer.capital * (T::one() - p.delta) + units;
        buyer.deposits -= cost;
        let bb = buyer.bank;
        s.banks[bb].deposits -= cost;
        let seller = &mut s.firms[j];
        seller.deposits += cost;
        seller.inventory = (seller.inventory - units).pos();
        seller.sales += units;
        let sb = seller.bank;
        s.banks[sb].deposits += cost;
        output += cost;
    }
    s.output = output;
    for b in &mut s.banks {
        b.flow = match b.kind {
            BankKind::Commercial => payment_flow(
                b.kind,
                b.customers
                    .iter()
                    .map(|&i| (s.households[i].consumption, s.households[i].wage)),
            ),
            BankKind::Business => payment_flow(
                b.kind,
                b.customers
                    .iter()
                    .map(|&i| (s.firms[i].revenue, s.firms[i].wage_bill)),
            ),
        };
    }

    // 4. Credit market: interest on last period's stocks, switching, new
    //    loans, non-performing loans and distributions.
    for (i, h) in s.households.iter_mut().enumerate() {
        let (d0, l0) = prev_hh[i];
        let pb = &prev_banks[h.bank];
        let dep_int = pb.deposit_rate * d0;
        let loan_int = pb.loan_rate * l0;
        let due = loan_int + p.household_amortization * l0;
        let bank = &mut s.banks[h.bank];
        h.deposits += dep_int;
        let paid = due.min(h.deposits.pos());
        h.deposits -= paid;
        h.loans += loan_int - paid;
        bank.deposits += dep_int - paid;
        bank.loans += loan_int - paid;
        h.other_income += dep_int - loan_int;
    }
    let mut defaulted = vec![false; n_f];
    for (i, f) in s.firms.iter_mut().enumerate() {
        let (d0, l0) = prev_firms[i];
        let pb = &prev_banks[f.bank];
        let dep_int = pb.deposit_rate * d0.pos();
        let loan_int = pb.loan_rate * l0;
        let due = loan_int + p.firm_amortization * l0;
        defaulted[i] = loan_int > f.revenue;
        let bank = &mut s.banks[f.bank];
        f.deposits += dep_int;
        let paid = due.min(f.deposits.pos());
        f.deposits -= paid;
        f.loans += loan_int - paid;
        bank.deposits += dep_int - paid;
        bank.loans += loan_int - paid;
    }
    for (i, b) in s.banks.iter_mut().enumerate() {
        b.profits = profits(&prev_banks[i], &prev_rates);
    }
    let icb_t_prev = prev_rates.target();
    let gov_interest = prev_rates.ib * prev_gov.bills + prev_rates.ib_lr * prev_gov.bonds;
    let cb_profits = prev_rates.ib * prev_cb.bills + icb_t_prev * prev_cb.advances
        + prev_rates.icb_l * prev_cb.rl
        - icb_t_prev * prev_cb.hpm
        - prev_rates.icb_d * prev_cb.rd;
    s.government.debt += gov_interest - cb_profits;
    s.government.net_interest = gov_interest - cb_profits;
    s.central_bank.profits = cb_profits;

    let commercial: Vec<usize> = s.commercial_ids().collect();
    let business: Vec<usize> = s.business_ids().collect();
    for h in &mut s.households {
        let (picks, u) = draw_subset::<T>(&mut s.rng.credit, commercial.len(), p.matching.subset_size);
        let cands: Vec<(usize, T)> = picks
            .iter()
            .map(|&k| (commercial[k], s.banks[commercial[k]].loan_rate))
            .collect();
        let new = choose_partner(h.bank, s.banks[h.bank].loan_rate, &cands, &p.matching, u);
        if new != h.bank {
            s.banks[h.bank].deposits -= h.deposits;
            s.banks[h.bank].loans -= h.loans;
            s.banks[new].deposits += h.deposits;
            s.banks[new].loans += h.loans;
            h.bank = new;
        }
    }
    for f in &mut s.firms {
        let (picks, u) = draw_subset::<T>(&mut s.rng.credit, business.len(), p.matching.subset_size);
        let cands: Vec<(usize, T)> = picks
            .iter()
            .map(|&k| (business[k], s.banks[business[k]].loan_rate))
            .collect();
        let new = choose_partner(f.bank, s.banks[f.bank].loan_rate, &cands, &p.matching, u);
        if new != f.bank {
            s.banks[f.bank].deposits -= f.deposits;
            s.banks[f.bank].loans -= f.loans;
            s.banks[new].deposits += f.deposits;
            s.banks[new].loans += f.loans;
            f.bank = new;
        }
    }
    s.refresh_customers();

    for h in &mut s.households {
        let target = p.gamma * p.debt_horizon * h.expected_income.pos();
        let new = (target - h.loans).pos();
        h.loans += new;
        h.deposits += new;
        s.banks[h.bank].loans += new;
        s.banks[h.bank].deposits += new;
    }
    for f in &mut s.firms {
        let new = f.credit_demand.max((-f.deposits).pos());
        f.loans += new;
        f.deposits += new;
        s.banks[f.bank].loans += new;
        s.banks[f.bank].deposits += new;
    }

    let mut npl_total = z;
    for b in &mut s.banks {
        let mut npl = z;
        for &c in &b.customers {
            let (loans, share) = match b.kind {
                BankKind::Commercial => (&mut s.households[c].loans, p.npl_share),
                BankKind::Business if defaulted[c] => (&mut s.firms[c].loans, T::one()),
                BankKind::Business => (&mut s.firms[c].loans, p.npl_share),
            };
            let bad = share * *loans;
            *loans -= bad;
            npl += bad;
        }
        b.loans -= npl;
        b.bonds = npl;
        b.npl = npl;
        npl_total += npl;
    }
    s.government.bonds = npl_total;
    s.government.debt += npl_total;
    s.government.absorbed = npl_total;

    let mut firm_dividends = z;
    for f in &mut s.firms {
        let buffer =
            p.g_d * p.deposit_horizon * (f.wage_bill + f.investment * prices[f.supplier]);
        let div = (f.deposits - buffer).pos();
        f.deposits -= div;
        s.banks[f.bank].deposits -= div;
        firm_dividends += div;
    }
    let mut to_all = firm_dividends;
    for i in 0..n_b {
        let b = &mut s.banks[i];
        let div = b.profits - (b.npl - prev_banks[i].npl);
        b.net_worth += b.profits - div;
        if b.kind == BankKind::Commercial && !b.customers.is_empty() {
            b.deposits += div;
            let share = div / T::lit(b.customers.len() as f64);
            for &c in &b.customers {
                s.households[c].deposits += share;
                s.households[c].other_income += share;
            }
        } else {
            to_all += div;
        }
    }
    let share = to_all / T::lit(n_h as f64);
    for h in &mut s.households {
        h.deposits += share;
        h.other_income += share;
        s.banks[h.bank].deposits += share;
        h.expected_income = adaptive(h.expected_income, h.disposable_income(), p.lambda_e);
    }

    // 5. Interbank market.
    let mut delta_hpm = vec![z; n_b];
    for (i, b) in s.banks.iter_mut().enumerate() {
        let hpm = required_reserves(b.deposits, &rates);
        delta_hpm[i] = hpm - prev_banks[i].hpm;
        b.hpm = hpm;
    }
    let mut profiles: Vec<StabilityProfile<T>> = prev_banks
        .iter()
        .map(|b| nsfr_components(b, &p.weights))
        .collect();
    let a0 = |u: T| p.a0_low + (p.a0_high - p.a0_low) * u;
    let a0_theta = a0(RngStreams::uniform::<T>(&mut s.rng.market));
    let a0_lbw = a0(RngStreams::uniform::<T>(&mut s.rng.market));
    let theta = interbank::theta(s.rate_on, s.rate_term, rates.icb_l, s.pdu, a0_theta);
    let lbw = interbank::lbw(s.rate_on, s.rate_term, rates.icb_d, s.pdu, a0_lbw);
    let draws: Vec<T> = (0..n_b).map(|_| RngStreams::uniform(&mut s.rng.split)).collect();
    let keys: Vec<T> = (0..n_b).map(|_| RngStreams::uniform(&mut s.rng.order)).collect();

    let positions: Vec<_> = s
        .banks
        .iter()
        .enumerate()
        .map(|(i, b)| interbank_position(b.flow, delta_hpm[i]))
        .collect();
    let mut borrowers = Vec::new();
    let mut lenders = Vec::new();
    for (i, b) in s.banks.iter_mut().enumerate() {
        b.status = positions[i].status;
        let pr = &mut profiles[i];
        let (amount, is_borrower) = match b.status {
            Status::Deficit if positions[i].demand > z => (positions[i].demand, true),
            Status::Surplus if positions[i].supply > z => (positions[i].supply, false),
            _ => continue,
        };
        let split = match (p.scenario, is_borrower) {
            (Scenario::Baseline, true) => baseline_borrower_split(amount, theta),
            (Scenario::Baseline, false) => Default::default(),
            (Scenario::Maturity, true) => borrower_split(amount, pr, theta, draws[i]),
            (Scenario::Maturity, false) => lender_split(amount, pr, lbw, draws[i]),
        };
        let order = Order {
            bank: i,
            amount,
            split,
            ms: pr.ms,
            a_m: pr.a_m,
        };
        if is_borrower {
            borrowers.push(order);
        } else {
            lenders.push(order);
        }
    }
    if p.scenario == Scenario::Baseline {
        let total: T = borrowers.iter().map(|o| o.amount).sum();
        let share = if total > z {
            borrowers.iter().map(|o| o.split.on).sum::<T>() / total
        } else {
            theta.clamp_to(z, T::one())
        };
        for l in &mut lenders {
            l.split = baseline_lender_split(l.amount, share);
        }
    }
    let mut order: Vec<usize> = (0..borrowers.len()).collect();
    order.sort_by(|&a, &b| {
        keys[borrowers[a].bank]
            .partial_cmp(&keys[borrowers[b].bank])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut book = match p.scenario {
        Scenario::Baseline => match_baseline(&borrowers, &lenders, &order),
        Scenario::Maturity => match_maturity(&borrowers, &lenders, &order),
    };
    clear_rates(&mut book, rates.icb_d, rates.icb_l, p.sigma_ib);
    for b in &mut s.banks {
        b.iba_on = z;
        b.iba_term = z;
        b.ibl_on = z;
        b.ibl_term = z;
        b.rl = z;
        b.rd = z;
        b.parked = z;
    }
    for st in &book.settlements {
        let b = &mut s.banks[st.bank];
        b.iba_on = st.iba_on;
        b.iba_term = st.iba_term;
        b.ibl_on = st.ibl_on;
        b.ibl_term = st.ibl_term;
        b.rl = st.rl;
        b.rd = st.rd;
    }
    let icb_t = rates.target();
    for b in &mut s.banks {
        b.funding_cost = funding_cost(
            icb_t,
            book.rate_on,
            book.rate_term,
            rates.icb_l,
            FundingTrades {
                borrowed_on: b.ibl_on > z,
                borrowed_term: b.ibl_term > z,
                used_lending_facility: b.rl > z,
            },
        );
    }
    s.rate_on = book.rate_on;
    s.rate_term = book.rate_term;
    s.market = (0..n_b)
        .map(|i| BankMarketView {
            profile: profiles[i],
            demand: positions[i].demand,
            supply: positions[i].supply,
            delta_hpm: delta_hpm[i],
        })
        .collect();

    // 6. Securities market.
    for b in &mut s.banks {
        let (d, l) = match b.kind {
            BankKind::Commercial => (
                compensated_sum(b.customers.iter().map(|&c| s.households[c].deposits)),
                compensated_sum(b.customers.iter().map(|&c| s.households[c].loans)),
            ),
            BankKind::Business => (
                compensated_sum(b.customers.iter().map(|&c| s.firms[c].deposits)),
                compensated_sum(b.customers.iter().map(|&c| s.firms[c].loans)),
            ),
        };
        b.deposits = d;
        b.loans = l;
    }
    let bills = s.government.debt - s.government.bonds;
    s.government.bills = bills;
    let per_bank = bills / T::lit(n_b as f64);
    for b in &mut s.banks {
        let out = bills_and_advances(&BufferInputs::from_bank(b), per_bank, &rates).map_err(|e| {
            match e {
                SimError::NegativeAdvances { advances, .. } => SimError::NegativeAdvances {
                    bank: b.id,
                    advances,
                },
                other => other,
            }
        })?;
        b.bills = out.bills;
        b.advances = out.advances;
        b.parked = out.parked;
        b.rd += out.parked;
    }
    let cb = &mut s.central_bank;
    cb.bills = bills - s.banks.iter().map(|b| b.bills).sum::<T>();
    cb.hpm = s.banks.iter().map(|b| b.hpm).sum();
    cb.advances = s.banks.iter().map(|b| b.advances).sum();
    cb.rl = s.banks.iter().map(|b| b.rl).sum();
    cb.rd = s.banks.iter().map(|b| b.rd).sum();
    s.period = t;

    let matrix = assemble_matrix(&s.sector_balances())?;
    let report = audit(t, &matrix, tolerance)?;
    let record = summarize(s, &book, &profiles, theta, lbw, &delta_hpm, &report);
    s.book = book;
    Ok(StepOutcome {
        record,
        audit: report,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

fn summarize<T: Scalar>(
    s: &EconomyState<T>,
    book: &interbank::SegmentBook<T>,
    profiles: &[StabilityProfile<T>],
    theta: T,
    lbw: T,
    delta_hpm: &[T],
    report: &AuditReport,
) -> PeriodRecord {
    let f = |x: T| x.as_f64();
    let ms = |i: usize| f(profiles[i].ms).min(MS_CAP);
    let ms_where = |st: Status| {
        mean(
            s.banks
                .iter()
                .filter(|b| b.status == st)
                .map(|b| ms(b.id)),
        )
    };
    let loans_where = |st: Status| {
        s.banks
            .iter()
            .filter(|b| b.status == st)
            .map(|b| f(b.loans))
            .sum::<f64>()
    };
    let bank_sum = |g: fn(&crate::banking::BankState<T>) -> T| s.banks.iter().map(|b| f(g(b))).sum::<f64>();
    let rates = &s.rates;
    PeriodRecord {
        period: s.period,
        volume_on: f(book.settled_on),
        volume_term: f(book.settled_term),
        rate_on: f(book.rate_on),
        rate_term: f(book.rate_term),
        gamma_on: f(book.gamma_on),
        gamma_term: f(book.gamma_term),
        gamma_matched_on: f(book.gamma_matched_on),
        gamma_matched_term: f(book.gamma_matched_term),
        df_on: f(book.df_on),
        df_term: f(book.df_term),
        lf_on: f(book.lf_on),
        lf_term: f(book.lf_term),
        excess_on: f(book.excess_on),
        excess_term: f(book.excess_term),
        facility_rl: f(book.rl),
        facility_rd: f(book.rd),
        parked: bank_sum(|b| b.parked),
        accommodation: f(book.accommodation),
        ms_all: mean((0..s.banks.len()).map(ms)),
        ms_deficit: ms_where(Status::Deficit),
        ms_surplus: ms_where(Status::Surplus),
        asf: mean(profiles.iter().map(|p| f(p.a_m))),
        rsf: mean(profiles.iter().map(|p| f(p.b_m))),
        pi_b: mean(book.borrowers.iter().map(|o| f(profiles[o.bank].pi_b))),
        pi_l: mean(book.lenders.iter().map(|o| f(profiles[o.bank].pi_l))),
        flow_sum: bank_sum(|b| b.flow),
        flow_abs: bank_sum(|b| b.flow.abs()),
        delta_hpm_sum: delta_hpm.iter().map(|d| f(*d)).sum(),
        output: f(s.output),
        consumption: s.households.iter().map(|h| f(h.consumption)).sum(),
        loans_deficit: loans_where(Status::Deficit),
        loans_surplus: loans_where(Status::Surplus),
        loans_households: s.households.iter().map(|h| f(h.loans)).sum(),
        loans_firms: s.firms.iter().map(|x| f(x.loans)).sum(),
        deposits: bank_sum(|b| b.deposits),
        government_debt: f(s.government.debt),
        bills_cb: f(s.central_bank.bills),
        advances: f(s.central_bank.advances),
        hpm: f(s.central_bank.hpm),
        icb_d: f(rates.icb_d),
        icb_l: f(rates.icb_l),
        icb_t: f(rates.target()),
        pdu: f(s.pdu),
        theta: f(theta),
        lbw: f(lbw),
        n_borrowers: book.borrowers.len() as f64,
        n_lenders: book.lenders.len() as f64,
        n_matched: book.matches.len() as f64,
        audit_residual: report.max_residual,
    }
}
