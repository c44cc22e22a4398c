//! Numerical checks of the scheme's analytical properties.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

mod approx;
mod contraction;
mod gradients;
mod rho;
mod smoothness;
mod stability;

pub use approx::{one_step_order, OrderRow};
pub use contraction::{contraction_report, DataClass, DifferenceScheme};
pub use gradients::{
    delta_bar_holds, delta_bar_scan, fd_gradient, fd_jacobian, g1, g2, g2j, gradient_tables, psi,
    psi2,
};
pub use rho::{rho, rho_slice, RhoValue};
pub use smoothness::smoothness_estimate;
pub use stability::{stability_path_diagnostic, DEFAULT_T_GRID};

/// A gradient evaluated at a point, with its 1-norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientEntry {
    pub point: Vec<f64>,
    pub gradient: Vec<f64>,
    pub norm: f64,
}

/// Common output of the analysis routines. Fields a routine does not
/// compute are left empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub estimated_alpha: Option<f64>,
    /// `alpha` estimate from each pair of consecutive levels.
    pub alpha_trace: Vec<f64>,
    pub contraction_factors: Vec<f64>,
    /// Infinite entries mark sequences where a ratio overflowed.
    pub rho_trace: Vec<f64>,
    pub gradient_norm_table: BTreeMap<String, GradientEntry>,
    pub notes: Vec<String>,
}
