use serde::{Deserialize, Serialize};

use super::rates::rationing;
use super::split::Split;
use crate::scalar::Scalar;

/// One bank's interbank demand (borrower) or supply (lender).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order<T> {
    pub bank: usize,
    pub amount: T,
    pub split: Split<T>,
    pub ms: T,
    pub a_m: T,
}

/// A settled lender-borrower pair with the amount traded in each segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match<T> {
    pub lender: usize,
    pub borrower: usize,
    pub on: T,
    pub term: T,
}

/// Interbank and facility stocks resulting for one participating bank.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BankSettlement<T> {
    pub bank: usize,
    pub ibl_on: T,
    pub ibl_term: T,
    pub iba_on: T,
    pub iba_term: T,
    pub rl: T,
    pub rd: T,
    pub matched: bool,
}

/// Per-period record of both segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SegmentBook<T> {
    pub borrowers: Vec<Order<T>>,
    pub lenders: Vec<Order<T>>,
    pub matches: Vec<Match<T>>,
    pub settlements: Vec<BankSettlement<T>>,
    pub df_on: T,
    pub df_term: T,
    pub lf_on: T,
    pub lf_term: T,
    /// Supply standing in each segment when rates clear: the lenders' own
    /// offers, or the accommodated demand when lenders accommodate.
    pub supply_on: T,
    pub supply_term: T,
    pub settled_on: T,
    pub settled_term: T,
    pub rl: T,
    pub rd: T,
    /// Lending beyond a lender's own offer when it accommodates a borrower.
    pub accommodation: T,
    pub excess_on: T,
    pub excess_term: T,
    pub rate_on: T,
    pub rate_term: T,
    pub gamma_on: T,
    pub gamma_term: T,
    /// Rationing restricted to borrowers that found a counterparty.
    pub gamma_matched_on: T,
    pub gamma_matched_term: T,
}

impl<T: Scalar> SegmentBook<T> {
    fn new(borrowers: &[Order<T>], lenders: &[Order<T>]) -> Self {
        let sum = |v: &[Order<T>], f: fn(&Order<T>) -> T| v.iter().map(f).sum::<T>();
        SegmentBook {
            borrowers: borrowers.to_vec(),
            lenders: lenders.to_vec(),
            df_on: sum(borrowers, |o| o.split.on),
            df_term: sum(borrowers, |o| o.split.term),
            lf_on: sum(lenders, |o| o.split.on),
            lf_term: sum(lenders, |o| o.split.term),
            supply_on: sum(lenders, |o| o.split.on),
            supply_term: sum(lenders, |o| o.split.term),
            ..Default::default()
        }
    }

    fn finish(mut self) -> Self {
        self.settlements = standing_facilities(&self.borrowers, &self.lenders, &self.matches);
        let z = T::zero();
        let (mut dm_on, mut dm_term, mut sm_on, mut sm_term) = (z, z, z, z);
        for m in &self.matches {
            self.settled_on += m.on;
            self.settled_term += m.term;
            sm_on += m.on;
            sm_term += m.term;
            if let Some(b) = self.borrowers.iter().find(|o| o.bank == m.borrower) {
                dm_on += b.split.on;
                dm_term += b.split.term;
            }
        }
        for s in &self.settlements {
            self.rl += s.rl;
            self.rd += s.rd;
        }
        for l in &self.lenders {
            let lent: T = self
                .matches
                .iter()
                .filter(|m| m.lender == l.bank)
                .map(|m| m.on + m.term)
                .sum();
            self.accommodation += (lent - l.amount).pos();
        }
        self.gamma_on = rationing(self.settled_on, self.df_on);
        self.gamma_term = rationing(self.settled_term, self.df_term);
        self.gamma_matched_on = rationing(sm_on, dm_on);
        self.gamma_matched_term = rationing(sm_term, dm_term);
        self
    }

    pub fn settled(&self) -> T {
        self.settled_on + self.settled_term
    }

    pub fn settlement(&self, bank: usize) -> Option<&BankSettlement<T>> {
        self.settlements.iter().find(|s| s.bank == bank)
    }
}

/// Gap between a lender's maturity mismatch and a borrower's stable funding.
pub fn stability_distance<T: Scalar>(lender_ms: T, borrower_a_m: T) -> T {
    ((T::one() - lender_ms) - (T::one() - borrower_a_m)).abs()
}

fn pick<T: Scalar>(
    lenders: &[Order<T>],
    taken: &[bool],
    better: impl Fn(&Order<T>, &Order<T>) -> bool,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (j, l) in lenders.iter().enumerate() {
        if taken[j] {
            continue;
        }
        match best {
            Some(b) if !better(l, &lenders[b]) => {}
            _ => best = Some(j),
        }
    }
    best
}

/// Lenders accommodate borrowers in amount and maturity.
///
/// Borrowers are served in `order` (positions into `borrowers`), each taking
/// the unmatched lender with the largest offer. The lender supplies exactly
/// the borrower's overnight and term demand.
pub fn match_baseline<T: Scalar>(
    borrowers: &[Order<T>],
    lenders: &[Order<T>],
    order: &[usize],
) -> SegmentBook<T> {
    let mut book = SegmentBook::new(borrowers, lenders);
    let mut taken = vec![false; lenders.len()];
    book.supply_on = T::zero();
    book.supply_term = T::zero();
    for &i in order {
        let b = &borrowers[i];
        let Some(j) = pick(lenders, &taken, |l, best| l.amount > best.amount) else {
            break;
        };
        taken[j] = true;
        book.supply_on += b.split.on;
        book.supply_term += b.split.term;
        book.matches.push(Match {
            lender: lenders[j].bank,
            borrower: b.bank,
            on: b.split.on,
            term: b.split.term,
        });
    }
    book.finish()
}

/// Pairing by closest stability with short-side settlement per segment.
///
/// Each borrower, in `order`, takes the unmatched lender minimising
/// [`stability_distance`]; ties go to the earlier lender. Unserved demand is
/// not re-queued.
pub fn match_maturity<T: Scalar>(
    borrowers: &[Order<T>],
    lenders: &[Order<T>],
    order: &[usize],
) -> SegmentBook<T> {
    let mut book = SegmentBook::new(borrowers, lenders);
    let mut taken = vec![false; lenders.len()];
    for &i in order {
        let b = &borrowers[i];
        let dist = |l: &Order<T>| {
            let d = stability_distance(l.ms, b.a_m);
            if d.is_nan() {
                T::infinity()
            } else {
                d
            }
        };
        let Some(j) = pick(lenders, &taken, |l, best| dist(l) < dist(best)) else {
            break;
        };
        taken[j] = true;
        let l = &lenders[j];
        book.matches.push(Match {
            lender: l.bank,
            borrower: b.bank,
            on: b.split.on.min(l.split.on),
            term: b.split.term.min(l.split.term),
        });
    }
    book.finish()
}

/// Interbank and facility stocks per participant. Unserved demand goes to
/// the lending facility and unplaced supply to the deposit facility; an
/// unmatched bank uses the facility for its full amount.
pub fn standing_facilities<T: Scalar>(
    borrowers: &[Order<T>],
    lenders: &[Order<T>],
    matches: &[Match<T>],
) -> Vec<BankSettlement<T>> {
    let mut out = Vec::with_capacity(borrowers.len() + lenders.len());
    for b in borrowers {
        let mut s = BankSettlement {
            bank: b.bank,
            ..Default::default()
        };
        for m in matches.iter().filter(|m| m.borrower == b.bank) {
            s.ibl_on += m.on;
            s.ibl_term += m.term;
            s.matched = true;
        }
        s.rl = (b.amount - s.ibl_on - s.ibl_term).pos();
        out.push(s);
    }
    for l in lenders {
        let mut s = BankSettlement {
            bank: l.bank,
            ..Default::default()
        };
        for m in matches.iter().filter(|m| m.lender == l.bank) {
            s.iba_on += m.on;
            s.iba_term += m.term;
            s.matched = true;
        }
        s.rd = (l.amount - s.iba_on - s.iba_term).pos();
        out.push(s);
    }
    out
}
