use super::SegmentBook;
use crate::scalar::Scalar;

/// Logistic map of excess demand into the open corridor `(icb_d, icb_l)`.
pub fn clear_rate<T: Scalar>(excess: T, icb_d: T, icb_l: T, sigma: T) -> T {
    let z = -(sigma * excess);
    let rate = icb_d + (icb_l - icb_d) / (T::one() + z.exp());
    rate.clamp_to(icb_d, icb_l)
}

/// Records pre-settlement excess demand per segment and clears both rates.
pub fn clear_rates<T: Scalar>(book: &mut SegmentBook<T>, icb_d: T, icb_l: T, sigma: T) {
    book.excess_on = book.df_on - book.supply_on;
    book.excess_term = book.df_term - book.supply_term;
    book.rate_on = clear_rate(book.excess_on, icb_d, icb_l, sigma);
    book.rate_term = clear_rate(book.excess_term, icb_d, icb_l, sigma);
}

/// Which funding sources a bank drew on in the period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FundingTrades {
    pub borrowed_on: bool,
    pub borrowed_term: bool,
    pub used_lending_facility: bool,
}

/// Average cost over the policy target and every funding source used.
pub fn funding_cost<T: Scalar>(
    icb_t: T,
    rate_on: T,
    rate_term: T,
    icb_l: T,
    trades: FundingTrades,
) -> T {
    let mut sum = icb_t;
    let mut n = 1u32;
    for (used, rate) in [
        (trades.borrowed_on, rate_on),
        (trades.borrowed_term, rate_term),
        (trades.used_lending_facility, icb_l),
    ] {
        if used {
            sum += rate;
            n += 1;
        }
    }
    sum / T::lit(f64::from(n))
}

/// Share of demand left unserved by interbank liabilities, zero without demand.
pub fn rationing<T: Scalar>(settled: T, demand: T) -> T {
    if demand > T::zero() {
        (T::one() - settled / demand).clamp_to(T::zero(), T::one())
    } else {
        T::zero()
    }
}
