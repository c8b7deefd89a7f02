use super::StabilityProfile;
use crate::scalar::Scalar;

/// Demand or supply divided between the two maturities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Split<T> {
    pub on: T,
    pub term: T,
}

impl<T: Scalar> Split<T> {
    pub fn total(&self) -> T {
        self.on + self.term
    }

    fn of(amount: T, share: T) -> Self {
        let on = amount * share.clamp_to(T::zero(), T::one());
        Split {
            on,
            term: amount - on,
        }
    }
}

/// Borrowers' money-market conditions parameter.
pub fn theta<T: Scalar>(prev_on: T, prev_term: T, icb_l: T, pdu: T, a0: T) -> T {
    a0 + (icb_l - prev_on) + (prev_term - prev_on) - pdu
}

/// Lenders' willingness to lend overnight.
pub fn lbw<T: Scalar>(prev_on: T, prev_term: T, icb_d: T, pdu: T, a0: T) -> T {
    a0 + pdu + (prev_on - icb_d) - (prev_term - prev_on)
}

/// Maturity split of a borrower's demand.
///
/// A bank below the stability floor targets its whole gap and demands no
/// overnight funds; otherwise its target is drawn as `u * BOR` with
/// `u ~ U(0, 1)`, and the overnight share scales with the remaining gap.
pub fn borrower_split<T: Scalar>(
    demand: T,
    profile: &mut StabilityProfile<T>,
    theta: T,
    u: T,
) -> Split<T> {
    let bor = T::one() - profile.a_m;
    let target = if profile.ms < T::one() { bor } else { u * bor };
    profile.bor = bor;
    profile.bor_target = target;
    profile.pi_b = bor - target;
    Split::of(demand, theta * profile.pi_b)
}

/// Maturity split of a lender's supply; the mirror image of
/// [`borrower_split`], with the floor test reversed.
pub fn lender_split<T: Scalar>(
    supply: T,
    profile: &mut StabilityProfile<T>,
    lbw: T,
    u: T,
) -> Split<T> {
    let lor = T::one() - profile.b_m;
    let target = if profile.ms >= T::one() { lor } else { u * lor };
    profile.lor = lor;
    profile.lor_target = target;
    profile.pi_l = lor - target;
    Split::of(supply, lbw * profile.pi_l)
}

/// Borrowers choose maturities from market conditions alone.
pub fn baseline_borrower_split<T: Scalar>(demand: T, theta: T) -> Split<T> {
    Split::of(demand, theta)
}

/// Lenders offer maturities in the proportions demanded system-wide.
pub fn baseline_lender_split<T: Scalar>(supply: T, overnight_share: T) -> Split<T> {
    Split::of(supply, overnight_share)
}
