use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::function::FunctionSpec;
use crate::nonlinear::{refine_s_eps, EpsilonParameter};
use crate::sequence::{abscissae, BoundaryPolicy, RefinableSequence, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub h: f64,
    pub error: f64,
    /// `log(E_prev / E) / log(h_prev / h)`; absent on the first row.
    pub order: Option<f64>,
}

/// Error of a single `S_eps` step on samples `F(center + i h)`, `|i| <= 3`,
/// measured at the inserted nodes.
pub fn one_step_order(
    func: &FunctionSpec,
    center: f64,
    h_list: &[f64],
    eps: EpsilonParameter,
) -> Result<Vec<OrderRow>> {
    let mut rows: Vec<OrderRow> = Vec::with_capacity(h_list.len());
    for &h in h_list {
        if !(h > 0.0) {
            return Err(SubdivError::InvalidParameter(format!("h must be positive, got {h}")));
        }
        let values = (-3..=3)
            .map(|i| func.eval(center + i as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        if values.iter().all(|&v| v == values[0]) {
            return Err(SubdivError::Degenerate(format!("constant samples at h = {h}")));
        }
        // local abscissa t - center, so the grid starts at index -3
        let seq = RefinableSequence::new(values, 0, h, -3, Topology::Open)?;
        let refined = refine_s_eps(&seq, eps, BoundaryPolicy::Truncate)?;
        let mut error = 0.0f64;
        for (j, (x, v)) in abscissae(&refined).iter().zip(refined.values()).enumerate() {
            if (refined.left_index() + j as i64) % 2 != 0 {
                error = error.max((v - func.eval(center + x)?).abs());
            }
        }
        let order = rows
            .last()
            .map(|prev| (prev.error / error).ln() / (prev.h / h).ln());
        rows.push(OrderRow { h, error, order });
    }
    Ok(rows)
}
