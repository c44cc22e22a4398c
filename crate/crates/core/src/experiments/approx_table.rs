use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::function::{sample, Basis, FunctionSpec, Term};
use crate::nonlinear::EpsilonParameter;
use crate::scheme::{subdivide, SchemeDescriptor};
use crate::sequence::abscissae;

/// Coarse cells of padding on each side of the measured interval. The
/// 4-point rule loses less than two coarse cells in total however many
/// levels are applied.
const PAD: i64 = 3;

/// `exp(-2 t^2)`
pub fn f1() -> FunctionSpec {
    FunctionSpec::custom("exp(-2t^2)", |t| (-2.0 * t * t).exp())
}

pub const F1_INTERVAL: (f64, f64) = (-1.0, -0.3);

/// `exp(t) - t`
pub fn f2() -> FunctionSpec {
    FunctionSpec::ExpPoly(vec![
        Term::new(Basis::Exp { rate: 1.0 }, 1.0),
        Term::new(Basis::Poly { power: 1 }, -1.0),
    ])
}

pub const F2_INTERVAL: (f64, f64) = (-0.4, 0.4);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub k: u32,
    pub error: f64,
    /// `log2(E_(k-1) / E_k)`, absent on the first row.
    pub order: Option<f64>,
}

/// For each `k`, sample `func` with step `2^-k / 100`, apply `refine_levels`
/// steps of `S_eps` and take the sup error over fine nodes in `[a, b]`.
pub fn approximation_table(
    func: &FunctionSpec,
    interval: (f64, f64),
    k_range: std::ops::RangeInclusive<u32>,
    refine_levels: u32,
    eps: EpsilonParameter,
) -> Result<Vec<ApproxRow>> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(SubdivError::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    let scheme = SchemeDescriptor::s_eps(eps);
    let mut rows: Vec<ApproxRow> = Vec::new();
    for k in k_range {
        let h = 0.5f64.powi(k as i32) / 100.0;
        let lo = (a / h).floor() as i64 - PAD;
        let hi = (b / h).ceil() as i64 + PAD;
        let refined = subdivide(&scheme, &sample(func, h, lo..=hi)?, refine_levels)?;
        let x = abscissae(&refined);
        let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
        if x[0] > a + tol || x[x.len() - 1] < b - tol {
            return Err(SubdivError::InsufficientData {
                needed: (hi - lo + 1) as usize + 1,
                got: (hi - lo + 1) as usize,
            });
        }
        let mut error = 0.0f64;
        for (t, v) in x.iter().zip(refined.values()) {
            if *t >= a - tol && *t <= b + tol {
                error = error.max((v - func.eval(*t)?).abs());
            }
        }
        let order = rows.last().map(|prev| (prev.error / error).log2());
        rows.push(ApproxRow { k, error, order });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_function_is_exact() {
        let f = FunctionSpec::exp_poly(vec![
            Term::new(Basis::Poly { power: 1 }, 3.0),
            Term::new(Basis::Poly { power: 0 }, 1.0),
        ])
        .unwrap();
        let rows = approximation_table(&f, (0.0, 0.1), 0..=2, 3, Default::default()).unwrap();
        assert!(rows.iter().all(|r| r.error < 1e-14), "{rows:?}");
    }

    #[test]
    fn gaussian_first_rows() {
        let rows = approximation_table(&f1(), F1_INTERVAL, 0..=1, 7, Default::default()).unwrap();
        assert!((rows[0].error / 5.5174e-9 - 1.0).abs() < 0.01, "{rows:?}");
        assert!((rows[1].order.unwrap() - 4.0).abs() < 0.02);
    }
}
