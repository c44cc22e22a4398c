//! Interpolatory curve subdivision with a nonlinear 4-point rule that
//! reproduces conics (circles, ellipses, hyperbolas) without being told
//! their frequency.
//!
//! Modules, bottom up:
//! - [`sequence`]: samples on dyadic grids, differences, boundary handling.
//! - [`linear`]: stationary masks, level-dependent exponential schemes,
//!   annihilating filters.
//! - [`nonlinear`]: the cut-off function and the scheme `S_eps`.
//! - [`scheme`]: a single descriptor over all rules plus the multi-level driver.
//! - [`analysis`]: smoothness, contraction, gradients and stability checks.
//! - [`experiments`]: reproducible numerical experiments.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod function;
pub mod linear;
pub mod nonlinear;
pub mod scheme;
pub mod sequence;

pub use error::{Result, SubdivError};
pub use function::{sample, Basis, FunctionSpec, Term};
pub use linear::{FrequencyParameter, Mask, OrthogonalRule, SpaceFactor};
pub use nonlinear::{Branch, BranchStats, DiffScale, EpsilonParameter, TieMode};
pub use scheme::{subdivide, subdivide_curve, subdivide_with_stats, SchemeDescriptor};
pub use sequence::{BoundaryPolicy, RefinableSequence, Stencil, Topology};
