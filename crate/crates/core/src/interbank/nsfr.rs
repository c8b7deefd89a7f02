use super::{NsfrWeights, StabilityProfile};
use crate::banking::{BankKind, BankState};
use crate::scalar::Scalar;

/// Stability margin from previous-period stocks.
///
/// Commercial banks weight their (household) loans as medium-term assets,
/// business banks weight their (firm) loans as short-term assets. The margin
/// is available over required stable funding; a bank that requires none is
/// assigned `+inf` if it has stable funding and `1` otherwise.
pub fn nsfr_components<T: Scalar>(prev: &BankState<T>, w: &NsfrWeights<T>) -> StabilityProfile<T> {
    let b = prev;
    let am = b.loans + b.hpm + b.bills + b.bonds + b.iba_on + b.iba_term + b.rd;
    let lm = b.deposits + b.ibl_on + b.ibl_term + b.rl + b.npl + b.advances;

    let rsf = match b.kind {
        BankKind::Commercial => {
            w.m1 * b.iba_on + w.m2 * (b.loans + b.bills + b.iba_term) + w.m3 * b.bonds
        }
        BankKind::Business => {
            w.m1 * (b.loans + b.iba_on) + w.m2 * (b.bills + b.iba_term) + w.m3 * b.bonds
        }
    };
    let asf = w.m4 * b.deposits + w.m5 * b.ibl_term;

    let b_m = if am > T::zero() { rsf / am } else { T::zero() };
    let a_m = if lm > T::zero() { asf / lm } else { T::zero() };

    let required = b_m * am;
    let available = a_m * lm;
    let ms = if required > T::zero() {
        available / required
    } else if available > T::zero() {
        T::infinity()
    } else {
        T::one()
    };

    let bor = T::one() - a_m;
    let lor = T::one() - b_m;
    StabilityProfile {
        am,
        lm,
        b_m,
        a_m,
        ms,
        bor,
        bor_target: bor,
        pi_b: T::zero(),
        lor,
        lor_target: lor,
        pi_l: T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_margin() {
        let mut b = BankState::<f64>::new(0, BankKind::Commercial);
        b.deposits = 100.0;
        b.bills = 100.0;
        let p = nsfr_components(&b, &NsfrWeights::default());
        assert!((p.a_m - 0.9).abs() < 1e-12);
        assert!((p.b_m - 0.5).abs() < 1e-12);
        assert!((p.ms - 1.8).abs() < 1e-12);
        assert!(p.is_stable());
    }

    #[test]
    fn unit_weights_with_equal_totals_give_unit_margin() {
        let w = NsfrWeights {
            m1: 1.0,
            m2: 1.0,
            m3: 1.0,
            m4: 1.0,
            m5: 1.0,
        };
        let mut b = BankState::<f64>::new(0, BankKind::Business);
        b.loans = 40.0;
        b.bills = 30.0;
        b.bonds = 10.0;
        b.iba_on = 20.0;
        b.deposits = 60.0;
        b.ibl_term = 40.0;
        let p = nsfr_components(&b, &w);
        assert!((p.am - p.lm).abs() < 1e-12);
        assert!((p.ms - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_margins() {
        let mut b = BankState::<f64>::new(0, BankKind::Commercial);
        let p = nsfr_components(&b, &NsfrWeights::default());
        assert_eq!(p.ms, 1.0);
        b.deposits = 10.0;
        b.hpm = 0.2;
        let p = nsfr_components(&b, &NsfrWeights::default());
        assert!(p.ms.is_infinite() && p.ms > 0.0);
    }

    #[test]
    fn loan_weight_depends_on_bank_kind() {
        let mut c = BankState::<f64>::new(0, BankKind::Commercial);
        c.loans = 100.0;
        c.deposits = 100.0;
        let mut k = c.clone();
        k.kind = BankKind::Business;
        let w = NsfrWeights::default();
        assert!((nsfr_components(&c, &w).b_m - 0.5).abs() < 1e-12);
        assert!((nsfr_components(&k, &w).b_m - 0.1).abs() < 1e-12);
    }
}
