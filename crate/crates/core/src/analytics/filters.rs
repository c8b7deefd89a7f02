use crate::error::{Result, SimError};
use crate::scalar::Scalar;

/// Conventional smoothing parameter for monthly data.
pub const HP_LAMBDA_MONTHLY: f64 = 14_400.0;

/// Hodrick-Prescott decomposition into `(trend, cycle)`.
///
/// The trend solves `(I + lambda * D'D) tau = y`, where `D` takes second
/// differences; the system is pentadiagonal and is solved by banded
/// elimination in `O(n)`.
pub fn hp_filter<T: Scalar>(series: &[T], lambda: T) -> Result<(Vec<T>, Vec<T>)> {
    let n = series.len();
    if n < 4 {
        return Err(SimError::SeriesTooShort {
            op: "hp_filter",
            needed: 4,
            got: n,
        });
    }
    if !(lambda > T::zero()) {
        return Err(SimError::Config("HP smoothing parameter must be positive".into()));
    }
    let l = lambda;
    let c = |x: f64| T::lit(x);
    // Bands of the symmetric matrix: main, first and second super-diagonals.
    let mut d = vec![T::one() + c(6.0) * l; n];
    let mut e = vec![c(-4.0) * l; n - 1];
    let f = vec![l; n - 2];
    d[0] = T::one() + l;
    d[n - 1] = T::one() + l;
    d[1] = T::one() + c(5.0) * l;
    d[n - 2] = T::one() + c(5.0) * l;
    e[0] = c(-2.0) * l;
    e[n - 2] = c(-2.0) * l;
    let trend = solve_symmetric_pentadiagonal(&d, &e, &f, series);
    let cycle = series.iter().zip(&trend).map(|(y, t)| *y - *t).collect();
    Ok((trend, cycle))
}

/// Solves `A x = b` for a symmetric pentadiagonal `A` given its diagonal `d`,
/// first off-diagonal `e` and second off-diagonal `f`, via `LDL'`.
fn solve_symmetric_pentadiagonal<T: Scalar>(d: &[T], e: &[T], f: &[T], b: &[T]) -> Vec<T> {
    let n = d.len();
    let mut diag = vec![T::zero(); n];
    let mut l1 = vec![T::zero(); n];
    let mut l2 = vec![T::zero(); n];
    for i in 0..n {
        let mut di = d[i];
        if i >= 1 {
            di -= l1[i - 1] * l1[i - 1] * diag[i - 1];
        }
        if i >= 2 {
            di -= l2[i - 2] * l2[i - 2] * diag[i - 2];
        }
        diag[i] = di;
        if i + 1 < n {
            let mut v = e[i];
            if i >= 1 {
                v -= l1[i - 1] * l2[i - 1] * diag[i - 1];
            }
            l1[i] = v / di;
        }
        if i + 2 < n {
            l2[i] = f[i] / di;
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        if i >= 1 {
            let v = l1[i - 1] * y[i - 1];
            y[i] -= v;
        }
        if i >= 2 {
            let v = l2[i - 2] * y[i - 2];
            y[i] -= v;
        }
    }
    for i in 0..n {
        y[i] /= diag[i];
    }
    for i in (0..n).rev() {
        if i + 1 < n {
            let v = l1[i] * y[i + 1];
            y[i] -= v;
        }
        if i + 2 < n {
            let v = l2[i] * y[i + 2];
            y[i] -= v;
        }
    }
    y
}

/// Trailing mean over the last `window` points, or all points so far.
pub fn moving_average<T: Scalar>(series: &[T], window: usize) -> Vec<T> {
    let w = window.max(1);
    let mut out = Vec::with_capacity(series.len());
    let mut acc = T::zero();
    for (i, &x) in series.iter().enumerate() {
        acc += x;
        if i >= w {
            acc -= series[i - w];
        }
        let n = (i + 1).min(w);
        out.push(acc / T::lit(n as f64));
    }
    out
}
