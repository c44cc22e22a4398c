use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::nonlinear::{BranchStats, EpsilonParameter};
use crate::scheme::{subdivide_curve, SchemeDescriptor};
use crate::sequence::RefinableSequence;

/// `n` equispaced unit-circle points rotated by `u`.
///
/// Angles are formed from the fraction `i/n` reduced to `(-1/2, 1/2]`, so
/// points symmetric about the x-axis get bit-identical x-coordinates, as
/// they would in exact arithmetic.
pub fn circle_points(n: usize, u: f64) -> (Vec<f64>, Vec<f64>) {
    (0..n)
        .map(|i| {
            let frac = if 2 * i <= n {
                i as f64 / n as f64
            } else {
                -((n - i) as f64) / n as f64
            };
            let angle = 2.0 * std::f64::consts::PI * frac + u;
            (angle.cos(), angle.sin())
        })
        .unzip()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleOutcome {
    pub max_radial_deviation: f64,
    pub points: usize,
    pub x_stats: BranchStats,
    pub y_stats: BranchStats,
}

/// Refine the closed polygon through [`circle_points`] with `S_eps` and
/// measure how far the result strays from the unit circle.
pub fn circle_outcome(n: usize, u: f64, eps: EpsilonParameter, levels: u32) -> Result<CircleOutcome> {
    if n < 3 {
        return Err(SubdivError::InvalidParameter(format!("need n >= 3 points, got {n}")));
    }
    let (x, y) = circle_points(n, u);
    let x = RefinableSequence::periodic(x, 1.0)?;
    let y = RefinableSequence::periodic(y, 1.0)?;
    let curve = subdivide_curve(&SchemeDescriptor::s_eps(eps), &x, &y, levels)?;
    let max_radial_deviation = curve
        .x
        .values()
        .iter()
        .zip(curve.y.values())
        .map(|(a, b)| (a.hypot(*b) - 1.0).abs())
        .fold(0.0, f64::max);
    let total = |s: &[BranchStats]| {
        s.iter().fold(BranchStats::default(), |mut acc, b| {
            acc.merge(b);
            acc
        })
    };
    Ok(CircleOutcome {
        max_radial_deviation,
        points: curve.x.len(),
        x_stats: total(&curve.x_stats),
        y_stats: total(&curve.y_stats),
    })
}

/// Maximum radial deviation after `levels` steps.
pub fn circle_reproduction(n: usize, u: f64, eps: EpsilonParameter, levels: u32) -> Result<f64> {
    Ok(circle_outcome(n, u, eps, levels)?.max_radial_deviation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_samples_tie_exactly() {
        let (x, _) = circle_points(3, 0.0);
        assert_eq!(x[1].to_bits(), x[2].to_bits());
    }

    #[test]
    fn reproduction_depends_on_phase() {
        let eps = EpsilonParameter::default();
        assert!(circle_reproduction(3, 1e-5, eps, 7).unwrap() <= 1e-9);
        assert!(circle_reproduction(3, 0.0, eps, 7).unwrap() >= 1e-3);
        assert!(circle_reproduction(6, 0.1, eps, 7).unwrap() <= 1e-9);
        let o = circle_outcome(3, 0.0, eps, 2).unwrap();
        assert_eq!(o.points, 12);
        assert!(o.x_stats.tie + o.x_stats.fallback > 0);
    }

    #[test]
    fn rotation_by_one_step_relabels() {
        let eps = EpsilonParameter::default();
        let n = 5;
        let u = 0.2;
        let a = circle_reproduction(n, u, eps, 5).unwrap();
        let b = circle_reproduction(n, u + 2.0 * std::f64::consts::PI / n as f64, eps, 5).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }
}
