//! The nonlinear stationary 4-point scheme `S_eps` and its companions.
//!
//! `S_eps` inserts `f_i/2 + f_{i+1}/2 - G * (second difference)` where the
//! weight `G` is read off the data through the cut-off function
//! [`gamma_eps`]. On strictly monotone samples of `a + b cosh(g t) + c sinh(g t)`
//! (or the trigonometric analogue) it coincides with the non-stationary
//! linear scheme for that `g`, so conics are reproduced without knowing `g`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::sequence::{
    refine_interpolatory, refine_pairs, BoundaryPolicy, Reach, RefinableSequence,
};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EpsilonParameter(f64);

impl EpsilonParameter {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&value) {
            return Err(SubdivError::InvalidParameter(format!(
                "epsilon must lie in [0, 2], got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `eps in (sqrt(3) - 1, 2]`: the scheme is known to converge.
    pub fn convergence_certified(self) -> bool {
        self.0 > 3f64.sqrt() - 1.0
    }

    /// `eps in [0, sqrt(2)]`: monotone data stays monotone.
    pub fn monotonicity_certified(self) -> bool {
        self.0 <= std::f64::consts::SQRT_2
    }

    /// Upper bound of the cut-off function, `1 / (2 eps (2 + eps))`.
    pub fn m_eps(self) -> f64 {
        1.0 / (2.0 * self.0 * (2.0 + self.0))
    }

    /// Human-readable caveat for values outside the certified ranges.
    pub fn warning(self) -> Option<&'static str> {
        match (self.convergence_certified(), self.monotonicity_certified()) {
            (true, true) => None,
            (false, _) => Some("epsilon <= sqrt(3)-1: convergence is not certified"),
            (_, false) => Some("epsilon > sqrt(2): monotonicity preservation is not certified"),
        }
    }
}

impl Default for EpsilonParameter {
    fn default() -> Self {
        Self(1.0)
    }
}

/// How `f_0 == f_1` is decided.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum TieMode {
    /// Exact floating-point equality. The only mode with reproduction guarantees.
    #[default]
    Exact,
    /// `|f_1 - f_0| <= tol * max |f_m|` over the window. Uncertified, for noisy data.
    Relative(f64),
}

/// Which piece of the cut-off function fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Exponential weight read from the data.
    Exponential,
    /// Monotone tie, weight 0 (midpoint).
    Tie,
    /// Fallback weight 1/16 (Deslauriers-Dubuc).
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BranchStats {
    pub exponential: u64,
    pub tie: u64,
    pub fallback: u64,
}

impl BranchStats {
    pub fn record(&mut self, branch: Branch) {
        match branch {
            Branch::Exponential => self.exponential += 1,
            Branch::Tie => self.tie += 1,
            Branch::Fallback => self.fallback += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.exponential + self.tie + self.fallback
    }

    pub fn merge(&mut self, other: &BranchStats) {
        self.exponential += other.exponential;
        self.tie += other.tie;
        self.fallback += other.fallback;
    }
}

fn exponential_weight(r: f64) -> f64 {
    let s = 1.0 + r.sqrt();
    0.5 / (s * s - 1.0)
}

fn monotone_around(a: f64, b: f64) -> bool {
    (a >= 0.0 && b >= 0.0) || (a <= 0.0 && b <= 0.0)
}

/// Cut-off function on a window of four samples, with the branch taken.
pub fn gamma_eps_branch(
    f_m1: f64,
    f_0: f64,
    f_1: f64,
    f_2: f64,
    eps: EpsilonParameter,
    tie: TieMode,
) -> (f64, Branch) {
    let tied = match tie {
        TieMode::Exact => f_1 == f_0,
        TieMode::Relative(tol) => {
            let scale = f_m1.abs().max(f_0.abs()).max(f_1.abs()).max(f_2.abs());
            (f_1 - f_0).abs() <= tol * scale
        }
    };
    if !tied {
        let r = 1.0 + (f_2 - f_m1) / (f_1 - f_0);
        if r >= eps.0 * eps.0 {
            return (exponential_weight(r), Branch::Exponential);
        }
    }
    if tied && monotone_around(f_0 - f_m1, f_2 - f_1) {
        (0.0, Branch::Tie)
    } else {
        (1.0 / 16.0, Branch::Fallback)
    }
}

/// Cut-off function `Gamma_eps(f_m1, f_0, f_1, f_2)` with exact tie detection.
pub fn gamma_eps(f_m1: f64, f_0: f64, f_1: f64, f_2: f64, eps: EpsilonParameter) -> f64 {
    gamma_eps_branch(f_m1, f_0, f_1, f_2, eps, TieMode::Exact).0
}

/// The cut-off function written on first differences `d_j = f_{j+1} - f_j`.
pub fn gamma_eps_diff(d_m1: f64, d_0: f64, d_1: f64, eps: EpsilonParameter) -> f64 {
    if d_0 != 0.0 {
        let r = 1.0 + (d_m1 + d_0 + d_1) / d_0;
        if r >= eps.0 * eps.0 {
            return exponential_weight(r);
        }
    }
    if d_0 == 0.0 && monotone_around(d_m1, d_1) {
        0.0
    } else {
        1.0 / 16.0
    }
}

/// Value inserted between `w[1]` and `w[2]`.
fn insert(w: &[f64], eps: EpsilonParameter, tie: TieMode) -> (f64, Branch) {
    let (g, branch) = gamma_eps_branch(w[0], w[1], w[2], w[3], eps, tie);
    let value = 0.5 * w[1] + 0.5 * w[2] - g * (w[3] - w[2] - w[1] + w[0]);
    (value, branch)
}

pub fn refine_s_eps(
    seq: &RefinableSequence,
    eps: EpsilonParameter,
    policy: BoundaryPolicy,
) -> Result<RefinableSequence> {
    refine_interpolatory(seq, policy, Reach::FOUR_POINT, |_, w| {
        Ok(insert(w, eps, TieMode::Exact).0)
    })
}

/// [`refine_s_eps`] with a configurable tie test, counting the branches used.
pub fn refine_s_eps_with_stats(
    seq: &RefinableSequence,
    eps: EpsilonParameter,
    tie: TieMode,
    policy: BoundaryPolicy,
) -> Result<(RefinableSequence, BranchStats)> {
    let mut stats = BranchStats::default();
    let out = refine_interpolatory(seq, policy, Reach::FOUR_POINT, |_, w| {
        let (value, branch) = insert(w, eps, tie);
        stats.record(branch);
        Ok(value)
    })?;
    Ok((out, stats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiffScale {
    /// Scheme for forward differences.
    Half,
    /// Scheme for divided differences, twice the forward one.
    Divided,
}

/// The scheme satisfied by the differences of `S_eps`:
/// `out_{2i+j} = d_i / 2 + (-1)^j G(d_{i-1}, d_i, d_{i+1}) (d_{i-1} - d_{i+1})`.
pub fn refine_s_eps_diff(
    dseq: &RefinableSequence,
    eps: EpsilonParameter,
    scale: DiffScale,
    policy: BoundaryPolicy,
) -> Result<RefinableSequence> {
    let factor = match scale {
        DiffScale::Half => 1.0,
        DiffScale::Divided => 2.0,
    };
    refine_pairs(dseq, policy, |[a, b, c]| {
        let g = gamma_eps_diff(a, b, c, eps);
        let t = g * (a - c);
        [factor * (0.5 * b + t), factor * (0.5 * b - t)]
    })
}

/// `H(x, y) = (x - y) / (2 + x + y + 2 sqrt(2 + x + y))` for `x, y >= 0`.
pub fn h_ratio(x: f64, y: f64) -> Result<f64> {
    if !(x >= 0.0 && y >= 0.0) {
        return Err(SubdivError::Domain(format!(
            "H needs nonnegative arguments, got ({x}, {y})"
        )));
    }
    Ok(h_unchecked(x, y))
}

pub(crate) fn h_unchecked(x: f64, y: f64) -> f64 {
    let s = 2.0 + x + y;
    (x - y) / (s + 2.0 * s.sqrt())
}

/// Stationary square-root rule
/// `f_{2i+1} = sqrt(f_i / (f_{i-1} + 2 f_i + f_{i+1})) (f_i + f_{i+1})`.
///
/// Reproduces `span{cos(g t), sin(g t)}` (and the hyperbolic pair) wherever it
/// is defined, which is not everywhere. Experimental.
pub fn refine_r(seq: &RefinableSequence, policy: BoundaryPolicy) -> Result<RefinableSequence> {
    let reach = Reach { left: 1, right: 0 };
    refine_interpolatory(seq, policy, reach, |i, w| {
        let denom = w[0] + 2.0 * w[1] + w[2];
        if denom == 0.0 {
            return Err(SubdivError::RuleDomain {
                index: i,
                reason: "zero denominator",
            });
        }
        let radicand = w[1] / denom;
        if radicand < 0.0 || radicand.is_nan() {
            return Err(SubdivError::RuleDomain {
                index: i,
                reason: "negative radicand",
            });
        }
        Ok(radicand.sqrt() * (w[1] + w[2]))
    })
}
