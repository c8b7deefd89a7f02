//! Households and firms: pricing, production, consumption, taxes and the
//! partner-switching protocol shared by the goods and credit markets.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Household<T> {
    pub id: usize,
    pub deposits: T,
    pub loans: T,
    /// Expected disposable income.
    pub expected_income: T,
    pub employer: usize,
    pub bank: usize,
    pub supplier: usize,
    pub wage: T,
    pub consumption: T,
    pub taxes: T,
    /// Transfers, dividends and net interest received this period.
    pub other_income: T,
}

impl<T: Scalar> Household<T> {
    pub fn new(id: usize, employer: usize, bank: usize, supplier: usize) -> Self {
        let z = T::zero();
        Household {
            id,
            deposits: z,
            loans: z,
            expected_income: z,
            employer,
            bank,
            supplier,
            wage: z,
            consumption: z,
            taxes: z,
            other_income: z,
        }
    }

    pub fn disposable_income(&self) -> T {
        self.wage + self.other_income - self.taxes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Firm<T> {
    pub id: usize,
    pub deposits: T,
    pub loans: T,
    /// Capital stock in goods units.
    pub capital: T,
    /// Inventories in goods units.
    pub inventory: T,
    pub price: T,
    /// Unit direct cost of the last period with positive output.
    pub unit_cost: T,
    pub expected_sales: T,
    /// Units sold this period.
    pub sales: T,
    pub revenue: T,
    pub output: T,
    pub wage_bill: T,
    /// Units of capital goods bought to replace depreciation.
    pub investment: T,
    pub credit_demand: T,
    pub bank: usize,
    /// Supplier of capital goods.
    pub supplier: usize,
}

impl<T: Scalar> Firm<T> {
    pub fn new(id: usize, bank: usize, supplier: usize, unit_cost: T) -> Self {
        let z = T::zero();
        Firm {
            id,
            deposits: z,
            loans: z,
            capital: z,
            inventory: z,
            price: unit_cost,
            unit_cost,
            expected_sales: z,
            sales: z,
            revenue: z,
            output: z,
            wage_bill: z,
            investment: z,
            credit_demand: z,
            bank,
            supplier,
        }
    }

    /// Capital and inventories valued at the current price and unit cost.
    pub fn real_assets(&self) -> (T, T) {
        (self.capital * self.price, self.inventory * self.unit_cost)
    }
}

/// Partner-selection protocol shared by goods and credit markets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingParams<T> {
    /// Number of alternative partners observed each period.
    pub subset_size: usize,
    /// Intensity of choice.
    pub intensity: T,
}

impl<T: Scalar> MatchingParams<T> {
    pub fn is_valid(&self, population: usize) -> bool {
        self.subset_size >= 1 && self.subset_size <= population && self.intensity >= T::zero()
    }
}

/// Adaptive revision toward the last realisation.
pub fn adaptive<T: Scalar>(expected: T, realised: T, lambda: T) -> T {
    expected + lambda * (realised - expected)
}

/// Unit direct cost, carried forward when nothing was produced.
pub fn unit_cost<T: Scalar>(wage_bill: T, output: T, carried: T) -> T {
    if output > T::zero() {
        wage_bill / output
    } else {
        carried
    }
}

/// Mark-up price over last period's unit cost.
pub fn update_price<T: Scalar>(unit_cost: T, markup: T) -> T {
    (T::one() + markup) * unit_cost
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Production<T> {
    pub output: T,
    pub wage_bill: T,
    pub credit_demand: T,
}

/// Output toward expected sales plus an inventory cushion, and the credit
/// needed to pay wages and investment beyond the deposits firms let go of.
pub fn plan_and_produce<T: Scalar>(
    expected_sales: T,
    inventory: T,
    inventory_share: T,
    wage: T,
    investment_value: T,
    deposits: T,
    g_d: T,
) -> Production<T> {
    let output = (expected_sales * (T::one() + inventory_share) - inventory).pos();
    let wage_bill = output * wage;
    let credit_demand = (wage_bill + investment_value - deposits.pos() * (T::one() - g_d)).pos();
    Production {
        output,
        wage_bill,
        credit_demand,
    }
}

/// Probability of leaving the current partner for a cheaper one.
pub fn switch_probability<T: Scalar>(x_old: T, x_new: T, intensity: T) -> T {
    if x_new < x_old && x_old > T::zero() {
        T::one() - (intensity * (x_new - x_old) / x_old).exp()
    } else {
        T::zero()
    }
}

/// Keeps `current` or moves to the cheapest observed candidate with the
/// switching probability; `u` is a uniform draw on `[0, 1)`.
pub fn choose_partner<T: Scalar>(
    current: usize,
    x_current: T,
    candidates: &[(usize, T)],
    params: &MatchingParams<T>,
    u: T,
) -> usize {
    let best = candidates
        .iter()
        .copied()
        .filter(|&(id, _)| id != current)
        .fold(None::<(usize, T)>, |acc, c| match acc {
            Some(a) if a.1 <= c.1 => Some(a),
            _ => Some(c),
        });
    match best {
        Some((id, x)) if u < switch_probability(x_current, x, params.intensity) => id,
        _ => current,
    }
}

/// Consumption out of expected disposable income and deposits.
pub fn desired_consumption<T: Scalar>(alpha1: T, alpha2: T, expected_income: T, deposits: T) -> T {
    (alpha1 * expected_income + alpha2 * deposits.pos()).pos()
}

/// Taxes on the period's wage and the affordable consumption budget.
///
/// Returns `(consumption, taxes)`; consumption is capped by the deposits
/// left once taxes are paid.
pub fn consume_and_tax<T: Scalar>(
    household: &Household<T>,
    tax_rate: T,
    alpha1: T,
    alpha2: T,
) -> (T, T) {
    let taxes = tax_rate * household.wage;
    let available = (household.deposits - taxes).pos();
    let desired = desired_consumption(alpha1, alpha2, household.expected_income, household.deposits);
    (desired.min(available), taxes)
}

/// Scale factor applied to every order when demand exceeds what is on sale.
pub fn rationing_factor<T: Scalar>(demand: T, available: T) -> T {
    if demand > available && demand > T::zero() {
        available.pos() / demand
    } else {
        T::one()
    }
}
