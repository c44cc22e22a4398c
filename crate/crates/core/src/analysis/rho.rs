use serde::{Deserialize, Serialize};

use crate::sequence::RefinableSequence;

/// Deviation of consecutive ratios from one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RhoValue {
    Finite(f64),
    Infinite,
    /// Some entry is zero or two neighbours have opposite signs.
    NotApplicable,
}

impl RhoValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            RhoValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Finite value, `inf` for overflow, `None` when not applicable.
    pub fn as_f64(self) -> Option<f64> {
        match self {
            RhoValue::Finite(v) => Some(v),
            RhoValue::Infinite => Some(f64::INFINITY),
            RhoValue::NotApplicable => None,
        }
    }
}

/// `sup_i max(|d_{i+1}/d_i - 1|, |d_i/d_{i+1} - 1|)` over stored neighbours.
pub fn rho(d: &RefinableSequence) -> RhoValue {
    rho_slice(d.values())
}

pub fn rho_slice(d: &[f64]) -> RhoValue {
    if d.contains(&0.0) {
        return RhoValue::NotApplicable;
    }
    let mut sup = 0.0f64;
    for w in d.windows(2) {
        if (w[0] > 0.0) != (w[1] > 0.0) {
            return RhoValue::NotApplicable;
        }
        let r = w[1] / w[0];
        sup = sup.max((r - 1.0).abs()).max((1.0 / r - 1.0).abs());
    }
    if sup.is_finite() {
        RhoValue::Finite(sup)
    } else {
        RhoValue::Infinite
    }
}
