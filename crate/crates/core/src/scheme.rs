//! A uniform handle over every refinement rule, and the multi-level driver.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::linear::{refine_2pt_nonstationary, refine_mask, refine_t_gamma, FrequencyParameter, Mask};
use crate::nonlinear::{refine_r, refine_s_eps_with_stats, BranchStats, EpsilonParameter, TieMode};
use crate::sequence::{BoundaryPolicy, RefinableSequence};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SchemeDescriptor {
    Mask(Mask),
    TGamma(FrequencyParameter),
    TwoPoint(FrequencyParameter),
    SEps { eps: EpsilonParameter, tie: TieMode },
    RRule,
}

impl SchemeDescriptor {
    pub fn t22() -> Self {
        Self::Mask(Mask::t22())
    }

    pub fn t11() -> Self {
        Self::Mask(Mask::t11())
    }

    pub fn s_eps(eps: EpsilonParameter) -> Self {
        Self::SEps {
            eps,
            tie: TieMode::Exact,
        }
    }

    /// Coarse cells lost at each end of an open sequence per level.
    pub fn truncation_radius(&self) -> usize {
        match self {
            Self::Mask(m) => {
                let reach = |s: &crate::sequence::Stencil| {
                    let lo = (-s.offset).max(0);
                    let hi = (s.offset + s.coeffs.len() as i64 - 1).max(0);
                    lo.max(hi) as usize
                };
                reach(m.even()).max(reach(m.odd()))
            }
            Self::TGamma(_) | Self::SEps { .. } => 1,
            Self::TwoPoint(_) => 0,
            Self::RRule => 1,
        }
    }

    /// One refinement step. Branch statistics are only produced by `S_eps`.
    pub fn refine_once(
        &self,
        seq: &RefinableSequence,
    ) -> Result<(RefinableSequence, Option<BranchStats>)> {
        let policy = BoundaryPolicy::for_topology(seq.topology());
        match self {
            Self::Mask(mask) => Ok((refine_mask(seq, mask, policy)?, None)),
            Self::TGamma(g) => Ok((refine_t_gamma(seq, *g, policy)?, None)),
            Self::TwoPoint(g) => Ok((refine_2pt_nonstationary(seq, *g, policy)?, None)),
            Self::SEps { eps, tie } => {
                let (out, stats) = refine_s_eps_with_stats(seq, *eps, *tie, policy)?;
                Ok((out, Some(stats)))
            }
            Self::RRule => Ok((refine_r(seq, policy)?, None)),
        }
    }
}

/// Result of [`subdivide_with_stats`]: final sequence and per-level branch counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub sequence: RefinableSequence,
    pub branch_stats: Vec<BranchStats>,
}

pub fn subdivide(
    scheme: &SchemeDescriptor,
    seq: &RefinableSequence,
    levels: u32,
) -> Result<RefinableSequence> {
    Ok(subdivide_with_stats(scheme, seq, levels)?.sequence)
}

/// Apply `levels` refinement steps. Non-stationary schemes read the level
/// from the sequence, so each step uses the right coefficients.
pub fn subdivide_with_stats(
    scheme: &SchemeDescriptor,
    seq: &RefinableSequence,
    levels: u32,
) -> Result<Subdivision> {
    let mut current = seq.clone();
    let mut branch_stats = Vec::new();
    for _ in 0..levels {
        let (next, stats) = scheme.refine_once(&current).map_err(|e| match e {
            SubdivError::InsufficientData { .. } => SubdivError::Exhausted {
                level: current.level(),
            },
            other => other,
        })?;
        log::debug!("level {} -> {} values", next.level(), next.len());
        branch_stats.extend(stats);
        current = next;
    }
    Ok(Subdivision {
        sequence: current,
        branch_stats,
    })
}

/// A planar point sequence refined one coordinate at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSubdivision {
    pub x: RefinableSequence,
    pub y: RefinableSequence,
    pub x_stats: Vec<BranchStats>,
    pub y_stats: Vec<BranchStats>,
}

pub fn subdivide_curve(
    scheme: &SchemeDescriptor,
    x: &RefinableSequence,
    y: &RefinableSequence,
    levels: u32,
) -> Result<CurveSubdivision> {
    if x.len() != y.len() || x.topology() != y.topology() {
        return Err(SubdivError::LengthMismatch(format!(
            "coordinate sequences differ: {} vs {} values",
            x.len(),
            y.len()
        )));
    }
    let sx = subdivide_with_stats(scheme, x, levels)?;
    let sy = subdivide_with_stats(scheme, y, levels)?;
    Ok(CurveSubdivision {
        x: sx.sequence,
        y: sy.sequence,
        x_stats: sx.branch_stats,
        y_stats: sy.branch_stats,
    })
}
