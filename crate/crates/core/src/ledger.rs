//! Economy-wide balance-sheet matrix and the end-of-period consistency audit.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::scalar::Scalar;

/// Rows of the balance-sheet matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Instrument {
    Capital,
    Inventories,
    Loans,
    Deposits,
    Bills,
    Bonds,
    Hpm,
    Advances,
    LendingFacility,
    DepositFacility,
    Interbank,
}

impl Instrument {
    pub const ALL: [Instrument; 11] = [
        Instrument::Capital,
        Instrument::Inventories,
        Instrument::Loans,
        Instrument::Deposits,
        Instrument::Bills,
        Instrument::Bonds,
        Instrument::Hpm,
        Instrument::Advances,
        Instrument::LendingFacility,
        Instrument::DepositFacility,
        Instrument::Interbank,
    ];

    /// Real assets have no financial counterpart; their row sums to the
    /// stock itself rather than to zero.
    pub fn is_real(self) -> bool {
        matches!(self, Instrument::Capital | Instrument::Inventories)
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Columns of the balance-sheet matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    Firms,
    Households,
    Banks,
    Government,
    CentralBank,
}

impl Sector {
    pub const ALL: [Sector; 5] = [
        Sector::Firms,
        Sector::Households,
        Sector::Banks,
        Sector::Government,
        Sector::CentralBank,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

/// Signed stocks of one sector (assets positive, liabilities negative) and
/// its balancing item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorBalance<T> {
    pub sector: Sector,
    pub stocks: Vec<(Instrument, T)>,
    /// Balance row entry: minus net worth, or plus government debt.
    pub balance: T,
}

impl<T: Scalar> SectorBalance<T> {
    pub fn new(sector: Sector, balance: T) -> Self {
        SectorBalance {
            sector,
            stocks: Vec::new(),
            balance,
        }
    }

    pub fn with(mut self, instrument: Instrument, value: T) -> Self {
        self.stocks.push((instrument, value));
        self
    }

    /// Balancing item that closes the column exactly.
    pub fn closing(sector: Sector, stocks: Vec<(Instrument, T)>) -> Self {
        let balance = -stocks.iter().map(|(_, v)| *v).sum::<T>();
        SectorBalance {
            sector,
            stocks,
            balance,
        }
    }
}

/// Instrument-by-sector matrix with the balance row kept separately.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSheetMatrix<T> {
    cells: [[T; 5]; 11],
    balance: [T; 5],
}

impl<T: Scalar> BalanceSheetMatrix<T> {
    pub fn zeros() -> Self {
        BalanceSheetMatrix {
            cells: [[T::zero(); 5]; 11],
            balance: [T::zero(); 5],
        }
    }

    pub fn get(&self, instrument: Instrument, sector: Sector) -> T {
        self.cells[instrument.index()][sector.index()]
    }

    pub fn set(&mut self, instrument: Instrument, sector: Sector, value: T) {
        self.cells[instrument.index()][sector.index()] = value;
    }

    pub fn balance(&self, sector: Sector) -> T {
        self.balance[sector.index()]
    }

    pub fn set_balance(&mut self, sector: Sector, value: T) {
        self.balance[sector.index()] = value;
    }

    /// Σ column entry of an instrument row.
    pub fn row_sum(&self, instrument: Instrument) -> T {
        self.cells[instrument.index()].iter().copied().sum()
    }

    /// Σ column entry of the balance row; equals `-(K + INV)` when consistent.
    pub fn balance_sum(&self) -> T {
        self.balance.iter().copied().sum()
    }

    pub fn column_sum(&self, sector: Sector) -> T {
        let j = sector.index();
        self.cells.iter().map(|row| row[j]).sum::<T>() + self.balance[j]
    }

    pub fn max_abs_stock(&self) -> T {
        let mut m = T::zero();
        for row in &self.cells {
            for v in row {
                m = m.max(v.abs());
            }
        }
        for v in &self.balance {
            m = m.max(v.abs());
        }
        m
    }
}

/// Residuals of one audit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub period: u32,
    pub row_residuals: Vec<(Instrument, f64)>,
    pub column_residuals: Vec<(Sector, f64)>,
    /// Largest absolute residual relative to the largest absolute stock.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl AuditReport {
    pub fn worst_row(&self) -> Option<(Instrument, f64)> {
        self.row_residuals
            .iter()
            .copied()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    }

    pub fn into_result(self) -> Result<Self> {
        if self.pass {
            Ok(self)
        } else {
            Err(SimError::AuditFailed {
                period: self.period,
                max_residual: self.max_residual,
                threshold: self.tolerance,
            })
        }
    }
}

/// Builds the matrix from one balance per sector.
pub fn assemble_matrix<T: Scalar>(sectors: &[SectorBalance<T>]) -> Result<BalanceSheetMatrix<T>> {
    let mut m = BalanceSheetMatrix::zeros();
    for sector in Sector::ALL {
        let Some(sb) = sectors.iter().find(|s| s.sector == sector) else {
            return Err(SimError::MissingStock {
                agent: format!("{sector:?}"),
                instrument: Instrument::Deposits,
            });
        };
        for &(instrument, value) in &sb.stocks {
            if !value.is_finite() {
                return Err(SimError::NonFiniteStock {
                    sector,
                    instrument,
                    value: value.as_f64(),
                });
            }
            let cur = m.get(instrument, sector);
            m.set(instrument, sector, cur + value);
        }
        m.set_balance(sector, sb.balance);
    }
    Ok(m)
}

/// Checks that every financial row and every column sums to zero, and that
/// the balance row sums to minus the real stocks, within `tolerance` relative
/// to the largest absolute stock.
pub fn audit<T: Scalar>(period: u32, matrix: &BalanceSheetMatrix<T>, tolerance: f64) -> Result<AuditReport> {
    let scale = matrix.max_abs_stock().as_f64().max(1.0);
    let mut row_residuals = Vec::with_capacity(Instrument::ALL.len());
    let mut real = 0.0;
    for instrument in Instrument::ALL {
        let sum = matrix.row_sum(instrument).as_f64();
        if !sum.is_finite() {
            return Err(SimError::NonFiniteStock {
                sector: Sector::Banks,
                instrument,
                value: sum,
            });
        }
        if instrument.is_real() {
            real += sum;
        } else {
            row_residuals.push((instrument, sum));
        }
    }
    let column_residuals: Vec<(Sector, f64)> = Sector::ALL
        .iter()
        .map(|&s| (s, matrix.column_sum(s).as_f64()))
        .collect();
    let balance_residual = matrix.balance_sum().as_f64() + real;
    if !balance_residual.is_finite() {
        return Err(SimError::NonFiniteStock {
            sector: Sector::Government,
            instrument: Instrument::Bonds,
            value: balance_residual,
        });
    }
    let worst = row_residuals
        .iter()
        .map(|r| r.1.abs())
        .chain(column_residuals.iter().map(|c| c.1.abs()))
        .fold(balance_residual.abs(), f64::max);
    let max_residual = worst / scale;
    Ok(AuditReport {
        period,
        row_residuals,
        column_residuals,
        max_residual,
        tolerance,
        pass: max_residual <= tolerance,
    })
}

/// Copy of `matrix` with one cell shifted by `delta`.
pub fn perturb<T: Scalar>(
    matrix: &BalanceSheetMatrix<T>,
    instrument: Instrument,
    sector: Sector,
    delta: T,
) -> BalanceSheetMatrix<T> {
    let mut m = matrix.clone();
    m.set(instrument, sector, m.get(instrument, sector) + delta);
    m
}
