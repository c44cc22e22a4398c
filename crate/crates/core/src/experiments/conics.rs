use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nonlinear::EpsilonParameter;
use crate::scheme::{subdivide_curve, SchemeDescriptor};
use crate::sequence::{abscissae, RefinableSequence};

pub const ARC_SAMPLES: usize = 7;

/// A conic arc sampled at seven equispaced parameter values
/// `start + i * step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConicArc {
    /// `(a cos s, b sin s)`
    Ellipse { a: f64, b: f64, start: f64, step: f64 },
    /// `(a cosh s, b sinh s)`
    Hyperbola { a: f64, b: f64, start: f64, step: f64 },
    /// `(s, p s^2)`
    Parabola { p: f64, start: f64, step: f64 },
}

impl ConicArc {
    pub fn name(&self) -> &'static str {
        match self {
            ConicArc::Ellipse { .. } => "ellipse",
            ConicArc::Hyperbola { .. } => "hyperbola",
            ConicArc::Parabola { .. } => "parabola",
        }
    }

    fn start_step(&self) -> (f64, f64) {
        match *self {
            ConicArc::Ellipse { start, step, .. }
            | ConicArc::Hyperbola { start, step, .. }
            | ConicArc::Parabola { start, step, .. } => (start, step),
        }
    }

    pub fn point(&self, s: f64) -> (f64, f64) {
        match *self {
            ConicArc::Ellipse { a, b, .. } => (a * s.cos(), b * s.sin()),
            ConicArc::Hyperbola { a, b, .. } => (a * s.cosh(), b * s.sinh()),
            ConicArc::Parabola { p, .. } => (s, p * s * s),
        }
    }

    /// Conic point at grid abscissa `t` (sample `i` sits at `t = i`).
    fn at(&self, t: f64) -> (f64, f64) {
        let (start, step) = self.start_step();
        self.point(start + t * step)
    }
}

/// The arcs used when none are given: a quarter ellipse, a hyperbola
/// branch and a parabola, each monotone per coordinate.
pub fn default_arcs() -> Vec<ConicArc> {
    vec![
        ConicArc::Ellipse {
            a: 2.0,
            b: 1.0,
            start: 0.05,
            step: 0.25,
        },
        ConicArc::Hyperbola {
            a: 1.0,
            b: 1.0,
            start: 0.1,
            step: 0.2,
        },
        ConicArc::Parabola {
            p: 1.0,
            start: -1.5,
            step: 0.5,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicError {
    pub arc: ConicArc,
    /// Sup distance between refined nodes and the conic point with the same parameter.
    pub s_eps_error: f64,
    pub t22_error: f64,
    pub warnings: Vec<String>,
}

fn probe_error(arc: &ConicArc, scheme: &SchemeDescriptor, levels: u32) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..ARC_SAMPLES).map(|i| arc.at(i as f64)).unzip();
    let x = RefinableSequence::open(xs, 1.0)?;
    let y = RefinableSequence::open(ys, 1.0)?;
    let curve = subdivide_curve(scheme, &x, &y, levels)?;
    let t = abscissae(&curve.x);
    Ok(t.iter()
        .zip(curve.x.values().iter().zip(curve.y.values()))
        .map(|(&t, (&px, &py))| {
            let (cx, cy) = arc.at(t);
            (px - cx).hypot(py - cy)
        })
        .fold(0.0, f64::max))
}

/// Refine each arc with `S_eps` and with the 4-point scheme and report the
/// distance of the refined nodes from the true conic.
pub fn conic_reproduction(
    arcs: &[ConicArc],
    eps: EpsilonParameter,
    levels: u32,
) -> Result<Vec<ConicError>> {
    arcs.iter()
        .map(|arc| {
            let mut warnings = Vec::new();
            let samples: Vec<(f64, f64)> = (0..ARC_SAMPLES).map(|i| arc.at(i as f64)).collect();
            for (k, w) in samples.windows(2).enumerate() {
                if w[0].0 == w[1].0 || w[0].1 == w[1].1 {
                    warnings.push(format!(
                        "{}: coordinate tie between samples {k} and {}; reproduction not guaranteed",
                        arc.name(),
                        k + 1
                    ));
                }
            }
            for w in &warnings {
                log::warn!("{w}");
            }
            Ok(ConicError {
                arc: *arc,
                s_eps_error: probe_error(arc, &SchemeDescriptor::s_eps(eps), levels)?,
                t22_error: probe_error(arc, &SchemeDescriptor::t22(), levels)?,
                warnings,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_arcs_behave_as_expected() {
        let r = conic_reproduction(&default_arcs(), Default::default(), 5).unwrap();
        let (ellipse, hyperbola, parabola) = (&r[0], &r[1], &r[2]);
        assert!(ellipse.s_eps_error <= 1e-12 && ellipse.t22_error > 1e-4, "{ellipse:?}");
        assert!(hyperbola.s_eps_error <= 1e-12 && hyperbola.t22_error > 1e-6, "{hyperbola:?}");
        assert!(parabola.s_eps_error <= 1e-13 && parabola.t22_error <= 1e-13, "{parabola:?}");
        assert!(r.iter().all(|e| e.warnings.is_empty()));
    }

    #[test]
    fn ties_are_flagged() {
        let arc = ConicArc::Ellipse {
            a: 1.0,
            b: 1.0,
            start: -0.625,
            step: 0.25,
        };
        let r = conic_reproduction(&[arc], Default::default(), 2).unwrap();
        assert!(!r[0].warnings.is_empty());
    }
}
