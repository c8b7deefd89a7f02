//! Bank balance-sheet mechanics: reserve requirements, the bills/advances
//! buffer, non-performing loan transfer, profits, payment flows, interbank
//! position sizing and credit-rate setting.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::scalar::Scalar;

/// Commercial banks lend to households, business banks to firms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BankKind {
    Commercial,
    Business,
}

/// Interbank role of a bank in the current period, from the sign of its
/// payment flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Surplus,
    Deficit,
    #[default]
    Neutral,
}

/// Central-bank corridor, securities yields and reserve-ratio components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyRates<T> {
    /// Deposit-facility rate (corridor floor).
    pub icb_d: T,
    /// Lending-facility rate (corridor ceiling).
    pub icb_l: T,
    /// Bills yield.
    pub ib: T,
    /// Long-term bond yield.
    pub ib_lr: T,
    pub mu: T,
    pub v: T,
}

impl<T: Scalar> PolicyRates<T> {
    /// Corridor midpoint.
    pub fn target(&self) -> T {
        (self.icb_l + self.icb_d) / T::lit(2.0)
    }

    pub fn half_width(&self) -> T {
        (self.icb_l - self.icb_d) / T::lit(2.0)
    }

    /// Checks `icb_d <= icb_t <= icb_l` and `mu, v in [0, 1)`.
    pub fn is_valid(&self) -> bool {
        let t = self.target();
        let unit = |x: T| x >= T::zero() && x < T::one();
        self.icb_d <= t && t <= self.icb_l && unit(self.mu) && unit(self.v)
    }
}

/// Full balance sheet of one bank plus its pricing and interbank state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankState<T> {
    pub id: usize,
    pub kind: BankKind,
    pub loans: T,
    pub deposits: T,
    /// Required reserves.
    pub hpm: T,
    pub bills: T,
    /// Long-term government bonds received against non-performing loans.
    pub bonds: T,
    pub advances: T,
    /// Lending-facility stock.
    pub rl: T,
    /// Deposit-facility stock (interbank leftovers plus `parked`).
    pub rd: T,
    /// Part of `rd` that could not be placed in bills because the
    /// per-bank issuance cap was binding.
    pub parked: T,
    pub npl: T,
    pub iba_on: T,
    pub iba_term: T,
    pub ibl_on: T,
    pub ibl_term: T,
    pub loan_rate: T,
    pub deposit_rate: T,
    pub funding_cost: T,
    /// Own funds; distributed profits keep it equal to the current NPL stock.
    pub net_worth: T,
    /// Indices of the households (commercial) or firms (business) banking here.
    pub customers: Vec<usize>,
    pub flow: T,
    pub status: Status,
    pub profits: T,
}

impl<T: Scalar> BankState<T> {
    pub fn new(id: usize, kind: BankKind) -> Self {
        let z = T::zero();
        BankState {
            id,
            kind,
            loans: z,
            deposits: z,
            hpm: z,
            bills: z,
            bonds: z,
            advances: z,
            rl: z,
            rd: z,
            parked: z,
            npl: z,
            iba_on: z,
            iba_term: z,
            ibl_on: z,
            ibl_term: z,
            loan_rate: z,
            deposit_rate: z,
            funding_cost: z,
            net_worth: z,
            customers: Vec::new(),
            flow: z,
            status: Status::Neutral,
            profits: z,
        }
    }

    pub fn total_assets(&self) -> T {
        self.loans + self.hpm + self.bills + self.bonds + self.iba_on + self.iba_term + self.rd
    }

    pub fn total_liabilities(&self) -> T {
        self.deposits + self.advances + self.ibl_on + self.ibl_term + self.rl
    }
}

/// Required reserves, a fixed share `mu + v` of current deposits.
pub fn required_reserves<T: Scalar>(deposits: T, rates: &PolicyRates<T>) -> T {
    (rates.mu + rates.v) * deposits
}

/// Stocks entering the bills/advances buffer.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BufferInputs<T> {
    pub deposits: T,
    pub npl: T,
    pub rl: T,
    pub rd: T,
    pub loans: T,
    pub bonds: T,
    pub hpm: T,
    /// Interbank liabilities (both segments).
    pub ibl: T,
    /// Interbank assets (both segments).
    pub iba: T,
}

impl<T: Scalar> BufferInputs<T> {
    pub fn from_bank(bank: &BankState<T>) -> Self {
        BufferInputs {
            deposits: bank.deposits,
            npl: bank.npl,
            rl: bank.rl,
            rd: bank.rd - bank.parked,
            loans: bank.loans,
            bonds: bank.bonds,
            hpm: bank.hpm,
            ibl: bank.ibl_on + bank.ibl_term,
            iba: bank.iba_on + bank.iba_term,
        }
    }
}

/// Which side of the buffer rule closed the balance sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BufferBranch {
    /// Non-negative bills, advances equal to `v * D`.
    Bills,
    /// Bills would be negative: bills reset to zero, advances absorb the gap.
    Advances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BufferOutcome<T> {
    pub bills: T,
    pub advances: T,
    /// Funds above the bills cap, held at the deposit facility.
    pub parked: T,
    pub branch: BufferBranch,
}

/// Bills demand capped by the per-bank issuance share, with central-bank
/// advances as the buffer when bills would turn negative.
///
/// Interbank assets and liabilities enter the residual alongside the
/// facilities so the bank's balance sheet closes in every period.
pub fn bills_and_advances<T: Scalar>(
    inputs: &BufferInputs<T>,
    bills_per_bank: T,
    rates: &PolicyRates<T>,
) -> Result<BufferOutcome<T>> {
    let x = inputs;
    let residual = x.deposits + x.npl + x.rl + x.ibl
        - x.loans
        - rates.mu * x.deposits
        - x.bonds
        - x.rd
        - x.iba;
    if residual < T::zero() {
        let advances =
            x.loans + x.rd + x.iba + x.hpm + x.bonds - x.deposits - x.npl - x.rl - x.ibl;
        if advances < T::zero() {
            return Err(SimError::NegativeAdvances {
                bank: usize::MAX,
                advances: advances.as_f64(),
            });
        }
        return Ok(BufferOutcome {
            bills: T::zero(),
            advances,
            parked: T::zero(),
            branch: BufferBranch::Advances,
        });
    }
    let cap = bills_per_bank.pos();
    let bills = residual.min(cap);
    Ok(BufferOutcome {
        bills,
        advances: rates.v * x.deposits,
        parked: residual - bills,
        branch: BufferBranch::Bills,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NplTransfer<T> {
    pub npl: T,
    pub loans: T,
    pub bonds: T,
}

/// Moves a share `l` of the loan book to the government against long-term
/// bonds of equal value.
pub fn transfer_npl<T: Scalar>(loans: T, share: T) -> NplTransfer<T> {
    let npl = share * loans;
    NplTransfer {
        npl,
        loans: loans - npl,
        bonds: npl,
    }
}

/// Bank profits on previous-period stocks and rates.
pub fn profits<T: Scalar>(prev: &BankState<T>, rates: &PolicyRates<T>) -> T {
    let icb_t = rates.target();
    prev.loan_rate * prev.loans + icb_t * prev.hpm + rates.ib * prev.bills + rates.ib_lr * prev.bonds
        + rates.icb_d * prev.rd
        - prev.deposit_rate * prev.deposits
        - icb_t * prev.advances
        - rates.icb_l * prev.rl
}

/// Net payment flow of a bank from its customers' consumption and wage
/// payments. `customers` yields `(consumption, wage)` pairs.
pub fn payment_flow<T: Scalar, I>(kind: BankKind, customers: I) -> T
where
    I: IntoIterator<Item = (T, T)>,
{
    let net: T = crate::scalar::compensated_sum(customers.into_iter().map(|(c, w)| c - w));
    match kind {
        BankKind::Commercial => net,
        BankKind::Business => -net,
    }
}

/// Interbank status and the amount demanded (deficit) or offered (surplus).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position<T> {
    pub status: Status,
    /// Demand for interbank funds (`DF`), zero unless in deficit.
    pub demand: T,
    /// Loanable funds (`LF`), zero unless in surplus.
    pub supply: T,
}

/// Sizes the interbank position from the payment flow and the change in
/// required reserves. `delta_hpm` enters signed; both amounts clamp at zero.
pub fn interbank_position<T: Scalar>(flow: T, delta_hpm: T) -> Position<T> {
    let z = T::zero();
    if flow < z {
        Position {
            status: Status::Deficit,
            demand: (flow.abs() - delta_hpm).pos(),
            supply: z,
        }
    } else if flow > z {
        Position {
            status: Status::Surplus,
            demand: z,
            supply: (flow - delta_hpm).pos(),
        }
    } else {
        Position {
            status: Status::Neutral,
            demand: z,
            supply: z,
        }
    }
}

/// Loan and deposit rates as a mark-up / mark-down on last period's
/// funding cost, floored at zero.
pub fn update_credit_rates<T: Scalar>(funding_cost: T, markup_l: T, markdown_d: T) -> (T, T) {
    let loan = (funding_cost * (T::one() + markup_l)).pos();
    let deposit = (funding_cost * (T::one() - markdown_d)).pos();
    (loan, deposit)
}
