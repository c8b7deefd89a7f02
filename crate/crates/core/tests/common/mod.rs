//! Independent reference implementations and random bank states shared by
//! the oracle and acceptance targets.

#![allow(dead_code)]

use ibsfc::banking::{
    bills_and_advances, interbank_position, payment_flow, profits, required_reserves,
    transfer_npl, update_credit_rates, BankKind, BankState, BufferInputs, PolicyRates, Status,
};
use ibsfc::interbank::{
    borrower_split, clear_rate, funding_cost, lbw, lender_split, match_maturity, nsfr_components,
    rationing, standing_facilities, theta, FundingTrades, NsfrWeights, Order, Split,
    StabilityProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_TOLERANCE: f64 = 1e-10;

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / b.abs().max(1.0)
}

pub fn random_weights(rng: &mut impl Rng) -> NsfrWeights<f64> {
    NsfrWeights {
        m1: rng.gen(),
        m2: rng.gen(),
        m3: rng.gen(),
        m4: rng.gen(),
        m5: rng.gen(),
    }
}

pub fn random_rates(rng: &mut impl Rng) -> PolicyRates<f64> {
    let icb_d = rng.gen_range(0.0..0.03);
    PolicyRates {
        icb_d,
        icb_l: icb_d + rng.gen_range(0.0..0.03),
        ib: rng.gen_range(0.0..0.05),
        ib_lr: rng.gen_range(0.0..0.05),
        mu: rng.gen_range(0.0..0.1),
        v: rng.gen_range(0.0..0.1),
    }
}

/// A bank with every stock drawn independently; some are zeroed at random
/// so degenerate balance sheets appear too.
pub fn random_bank(rng: &mut impl Rng) -> BankState<f64> {
    let kind = if rng.gen_bool(0.5) {
        BankKind::Commercial
    } else {
        BankKind::Business
    };
    let mut b = BankState::new(rng.gen_range(0..20), kind);
    let mut draw = || {
        if rng.gen_bool(0.15) {
            0.0
        } else {
            rng.gen_range(0.0..1000.0)
        }
    };
    b.loans = draw();
    b.deposits = draw();
    b.hpm = draw();
    b.bills = draw();
    b.bonds = draw();
    b.advances = draw();
    b.rl = draw();
    b.rd = draw();
    b.npl = draw();
    b.iba_on = draw();
    b.iba_term = draw();
    b.ibl_on = draw();
    b.ibl_term = draw();
    b.loan_rate = rng.gen_range(0.0..0.05);
    b.deposit_rate = rng.gen_range(0.0..0.05);
    b
}

/// Stability margin from explicit (stock, weight) lists.
pub fn ref_nsfr(b: &BankState<f64>, w: &NsfrWeights<f64>) -> (f64, f64, f64) {
    let loan_weight = match b.kind {
        BankKind::Commercial => w.m2,
        BankKind::Business => w.m1,
    };
    let assets = [
        (b.loans, loan_weight),
        (b.bills, w.m2),
        (b.iba_term, w.m2),
        (b.iba_on, w.m1),
        (b.bonds, w.m3),
        (b.hpm, 0.0),
        (b.rd, 0.0),
    ];
    let liabilities = [
        (b.deposits, w.m4),
        (b.ibl_term, w.m5),
        (b.ibl_on, 0.0),
        (b.rl, 0.0),
        (b.npl, 0.0),
        (b.advances, 0.0),
    ];
    let am: f64 = assets.iter().map(|a| a.0).sum();
    let lm: f64 = liabilities.iter().map(|l| l.0).sum();
    let rsf: f64 = assets.iter().map(|a| a.0 * a.1).sum();
    let asf: f64 = liabilities.iter().map(|l| l.0 * l.1).sum();
    let b_m = if am > 0.0 { rsf / am } else { 0.0 };
    let a_m = if lm > 0.0 { asf / lm } else { 0.0 };
    let ms = if rsf > 0.0 {
        asf / rsf
    } else if asf > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    (a_m, b_m, ms)
}

/// Logistic clearing written through `tanh`.
pub fn ref_rate(excess: f64, icb_d: f64, icb_l: f64, sigma: f64) -> f64 {
    let mid = 0.5 * (icb_d + icb_l);
    let hw = 0.5 * (icb_l - icb_d);
    (mid + hw * (0.5 * sigma * excess).tanh()).clamp(icb_d, icb_l)
}

pub fn ref_funding_cost(icb_t: f64, on: f64, term: f64, icb_l: f64, t: FundingTrades) -> f64 {
    let mut used = vec![icb_t];
    if t.borrowed_on {
        used.push(on);
    }
    if t.borrowed_term {
        used.push(term);
    }
    if t.used_lending_facility {
        used.push(icb_l);
    }
    used.iter().sum::<f64>() / used.len() as f64
}

pub fn ref_profits(b: &BankState<f64>, r: &PolicyRates<f64>) -> f64 {
    let t = 0.5 * (r.icb_d + r.icb_l);
    let income = [
        b.loan_rate * b.loans,
        t * b.hpm,
        r.ib * b.bills,
        r.ib_lr * b.bonds,
        r.icb_d * b.rd,
    ];
    let cost = [b.deposit_rate * b.deposits, t * b.advances, r.icb_l * b.rl];
    income.iter().sum::<f64>() - cost.iter().sum::<f64>()
}

/// Greedy closest-stability pairing with per-segment short side, written
/// without the library's helpers.
pub fn ref_maturity_pairs(
    borrowers: &[Order<f64>],
    lenders: &[Order<f64>],
    order: &[usize],
) -> Vec<(usize, usize, f64, f64)> {
    let mut free: Vec<usize> = (0..lenders.len()).collect();
    let mut out = Vec::new();
    for &i in order {
        if free.is_empty() {
            break;
        }
        let b = &borrowers[i];
        let mut best_pos = 0;
        let mut best_d = f64::INFINITY;
        for (pos, &j) in free.iter().enumerate() {
            let raw = (b.a_m - lenders[j].ms).abs();
            let d = if raw.is_nan() { f64::INFINITY } else { raw };
            if pos == 0 || d < best_d {
                best_pos = pos;
                best_d = d;
            }
        }
        let j = free.remove(best_pos);
        let l = &lenders[j];
        out.push((
            l.bank,
            b.bank,
            b.split.on.min(l.split.on),
            b.split.term.min(l.split.term),
        ));
    }
    out
}

fn random_order(rng: &mut impl Rng, bank: usize) -> Order<f64> {
    let on: f64 = rng.gen_range(0.0..100.0);
    let term: f64 = rng.gen_range(0.0..100.0);
    Order {
        bank,
        amount: on + term,
        split: Split { on, term },
        ms: if rng.gen_bool(0.05) {
            f64::INFINITY
        } else {
            rng.gen_range(0.0..3.0)
        },
        a_m: rng.gen(),
    }
}

/// Largest relative error of each oracle over `states` random draws.
pub fn oracle_suite(states: usize, seed: u64) -> Vec<(&'static str, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Vec<(&'static str, f64)> = [
        "stability margins",
        "maturity splits",
        "money-market parameters",
        "rate clearing",
        "funding cost",
        "interbank position",
        "payment flow",
        "bills and advances closure",
        "profits",
        "credit rates and npl transfer",
        "pairing and facilities",
    ]
    .into_iter()
    .map(|n| (n, 0.0))
    .collect();
    let mut note = |k: usize, e: f64| {
        let e = if e.is_nan() { f64::INFINITY } else { e };
        worst[k].1 = worst[k].1.max(e);
    };

    for _ in 0..states {
        let b = random_bank(&mut rng);
        let w = random_weights(&mut rng);
        let r = random_rates(&mut rng);

        let p = nsfr_components(&b, &w);
        let (a_m, b_m, ms) = ref_nsfr(&b, &w);
        let ms_err = if ms.is_infinite() && p.ms.is_infinite() {
            0.0
        } else {
            rel_err(p.ms, ms)
        };
        note(0, rel_err(p.a_m, a_m).max(rel_err(p.b_m, b_m)).max(ms_err));

        let amount: f64 = rng.gen_range(0.0..500.0);
        let th: f64 = rng.gen_range(-0.5..1.5);
        let u: f64 = rng.gen();
        let mut prof = StabilityProfile {
            ms: rng.gen_range(0.0..2.0),
            a_m: rng.gen(),
            b_m: rng.gen(),
            ..Default::default()
        };
        let base = prof;
        let s = borrower_split(amount, &mut prof, th, u);
        let gap = if base.ms < 1.0 { 0.0 } else { (1.0 - base.a_m) * (1.0 - u) };
        let on = amount * (th * gap).clamp(0.0, 1.0);
        let mut e = rel_err(s.on, on).max(rel_err(s.term, amount - on));
        let mut prof = base;
        let s = lender_split(amount, &mut prof, th, u);
        let gap = if base.ms >= 1.0 { 0.0 } else { (1.0 - base.b_m) * (1.0 - u) };
        let on = amount * (th * gap).clamp(0.0, 1.0);
        e = e.max(rel_err(s.on, on)).max(rel_err(s.term, amount - on));
        note(1, e);

        let (pon, pterm, pdu, a0) = (
            rng.gen_range(0.0..0.05),
            rng.gen_range(0.0..0.05),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
        );
        let th_ref = a0 + r.icb_l + pterm - 2.0 * pon - pdu;
        let lbw_ref = a0 + pdu + 2.0 * pon - r.icb_d - pterm;
        note(
            2,
            rel_err(theta(pon, pterm, r.icb_l, pdu, a0), th_ref)
                .max(rel_err(lbw(pon, pterm, r.icb_d, pdu, a0), lbw_ref)),
        );

        let excess: f64 = rng.gen_range(-200.0..200.0);
        let sigma: f64 = rng.gen_range(0.001..2.0);
        note(
            3,
            rel_err(
                clear_rate(excess, r.icb_d, r.icb_l, sigma),
                ref_rate(excess, r.icb_d, r.icb_l, sigma),
            ),
        );

        let trades = FundingTrades {
            borrowed_on: rng.gen(),
            borrowed_term: rng.gen(),
            used_lending_facility: rng.gen(),
        };
        let t = r.target();
        note(
            4,
            rel_err(
                funding_cost(t, pon, pterm, r.icb_l, trades),
                ref_funding_cost(t, pon, pterm, r.icb_l, trades),
            ),
        );

        let flow: f64 = rng.gen_range(-500.0..500.0);
        let dh: f64 = rng.gen_range(-50.0..50.0);
        let pos = interbank_position(flow, dh);
        let (df, lf, st) = if flow < 0.0 {
            ((-flow - dh).max(0.0), 0.0, Status::Deficit)
        } else if flow > 0.0 {
            (0.0, (flow - dh).max(0.0), Status::Surplus)
        } else {
            (0.0, 0.0, Status::Neutral)
        };
        let status_err = if pos.status == st { 0.0 } else { f64::INFINITY };
        note(5, rel_err(pos.demand, df).max(rel_err(pos.supply, lf)).max(status_err));

        let n = rng.gen_range(0..30);
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
            .collect();
        let net: f64 = pairs.iter().map(|(c, w)| c - w).sum();
        note(
            6,
            rel_err(payment_flow(BankKind::Commercial, pairs.iter().copied()), net)
                .max(rel_err(payment_flow(BankKind::Business, pairs.iter().copied()), -net)),
        );

        let mut inputs = BufferInputs::from_bank(&b);
        inputs.rd = b.rd;
        inputs.hpm = required_reserves(b.deposits, &r);
        let cap: f64 = rng.gen_range(0.0..2000.0);
        let closure = match bills_and_advances(&inputs, cap, &r) {
            Ok(o) => {
                let assets = inputs.loans + inputs.hpm + o.bills + o.parked + inputs.bonds + inputs.rd + inputs.iba;
                let liabilities = inputs.deposits + o.advances + inputs.ibl + inputs.rl + inputs.npl;
                let scale = assets.abs().max(liabilities.abs()).max(1.0);
                let bounds = o.bills >= 0.0 && o.bills <= cap.max(0.0) + 1e-12 && o.parked >= 0.0;
                if bounds {
                    (assets - liabilities).abs() / scale
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        };
        note(7, closure);

        note(8, rel_err(profits(&b, &r), ref_profits(&b, &r)));

        let fc: f64 = rng.gen_range(0.0..0.05);
        let (ml, md) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let (il, id) = update_credit_rates(fc, ml, md);
        let share: f64 = rng.gen();
        let npl = transfer_npl(b.loans, share);
        note(
            9,
            rel_err(il, (fc * (1.0 + ml)).max(0.0))
                .max(rel_err(id, (fc * (1.0 - md)).max(0.0)))
                .max(rel_err(npl.npl, share * b.loans))
                .max(rel_err(npl.loans + npl.npl, b.loans))
                .max(rel_err(npl.bonds, npl.npl))
                .max(rel_err(
                    required_reserves(b.deposits, &r),
                    (r.mu + r.v) * b.deposits,
                )),
        );

        let nb = rng.gen_range(0..8);
        let nl = rng.gen_range(0..8);
        let borrowers: Vec<Order<f64>> = (0..nb).map(|k| random_order(&mut rng, k)).collect();
        let lenders: Vec<Order<f64>> = (0..nl).map(|k| random_order(&mut rng, 100 + k)).collect();
        let mut order: Vec<usize> = (0..nb).collect();
        for k in (1..order.len()).rev() {
            order.swap(k, rng.gen_range(0..=k));
        }
        let book = match_maturity(&borrowers, &lenders, &order);
        let expect = ref_maturity_pairs(&borrowers, &lenders, &order);
        let mut e = if book.matches.len() == expect.len() { 0.0 } else { f64::INFINITY };
        for (m, x) in book.matches.iter().zip(&expect) {
            if m.lender != x.0 || m.borrower != x.1 {
                e = f64::INFINITY;
            }
            e = e.max(rel_err(m.on, x.2)).max(rel_err(m.term, x.3));
        }
        for s in standing_facilities(&borrowers, &lenders, &book.matches) {
            if let Some(b) = borrowers.iter().find(|o| o.bank == s.bank) {
                e = e.max(rel_err(s.ibl_on + s.ibl_term + s.rl, b.amount));
            }
            if let Some(l) = lenders.iter().find(|o| o.bank == s.bank) {
                e = e.max(rel_err(s.iba_on + s.iba_term + s.rd, l.amount));
            }
        }
        let settled: f64 = expect.iter().map(|x| x.2 + x.3).sum();
        e = e.max(rel_err(book.settled(), settled));
        note(10, e);
        let g = rationing(book.settled_on, book.df_on);
        let g_ref = if book.df_on > 0.0 { (1.0 - book.settled_on / book.df_on).clamp(0.0, 1.0) } else { 0.0 };
        note(10, rel_err(g, g_ref));
    }
    worst
}
