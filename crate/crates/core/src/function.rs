//! Test functions and sampling onto dyadic grids.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::sequence::{RefinableSequence, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Basis {
    /// `(t + phase)^power`
    Poly { power: u32 },
    /// `cos(freq t + phase)`
    Cos { freq: f64 },
    Sin { freq: f64 },
    /// `cosh(rate t + phase)`
    Cosh { rate: f64 },
    Sinh { rate: f64 },
    /// `exp(rate t + phase)`, signed rate.
    Exp { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub basis: Basis,
    pub coefficient: f64,
    pub phase: f64,
}

impl Term {
    pub fn new(basis: Basis, coefficient: f64) -> Self {
        Self {
            basis,
            coefficient,
            phase: 0.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    fn eval(&self, t: f64) -> f64 {
        let p = self.phase;
        let v = match self.basis {
            Basis::Poly { power } => (t + p).powi(power as i32),
            Basis::Cos { freq } => (freq * t + p).cos(),
            Basis::Sin { freq } => (freq * t + p).sin(),
            Basis::Cosh { rate } => (rate * t + p).cosh(),
            Basis::Sinh { rate } => (rate * t + p).sinh(),
            Basis::Exp { rate } => (rate * t + p).exp(),
        };
        self.coefficient * v
    }

    fn validate(&self) -> Result<()> {
        let ok = match self.basis {
            Basis::Poly { .. } => true,
            Basis::Cos { freq } | Basis::Sin { freq } => freq > 0.0 && freq.is_finite(),
            Basis::Cosh { rate } | Basis::Sinh { rate } => rate > 0.0 && rate.is_finite(),
            Basis::Exp { rate } => rate.is_finite(),
        };
        if ok && self.coefficient.is_finite() && self.phase.is_finite() {
            Ok(())
        } else {
            Err(SubdivError::InvalidParameter(format!("invalid term {self:?}")))
        }
    }
}

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one variable.
#[derive(Clone)]
pub enum FunctionSpec {
    ExpPoly(Vec<Term>),
    Tabulated { abscissae: Vec<f64>, ordinates: Vec<f64> },
    /// Anything else, e.g. `exp(-2 t^2)`.
    Custom { name: String, f: Closure },
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExpPoly(terms) => fm.debug_tuple("ExpPoly").field(terms).finish(),
            Self::Tabulated { abscissae, .. } => fm
                .debug_struct("Tabulated")
                .field("points", &abscissae.len())
                .finish(),
            Self::Custom { name, .. } => fm.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

impl FunctionSpec {
    pub fn exp_poly(terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            t.validate()?;
        }
        Ok(Self::ExpPoly(terms))
    }

    pub fn tabulated(abscissae: Vec<f64>, ordinates: Vec<f64>) -> Result<Self> {
        if abscissae.len() != ordinates.len() {
            return Err(SubdivError::LengthMismatch(format!(
                "{} abscissae, {} ordinates",
                abscissae.len(),
                ordinates.len()
            )));
        }
        Ok(Self::Tabulated {
            abscissae,
            ordinates,
        })
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Self::ExpPoly(terms) => Ok(terms.iter().map(|term| term.eval(t)).sum()),
            Self::Tabulated {
                abscissae,
                ordinates,
            } => {
                let tol = 1e-12 * t.abs().max(1.0);
                abscissae
                    .iter()
                    .position(|x| (x - t).abs() <= tol)
                    .map(|j| ordinates[j])
                    .ok_or(SubdivError::GridMismatch(t))
            }
            Self::Custom { f, .. } => Ok(f(t)),
        }
    }
}

/// Open level-0 sequence with `values[j] = F((start + j) h)`.
pub fn sample(func: &FunctionSpec, h: f64, index_range: RangeInclusive<i64>) -> Result<RefinableSequence> {
    let start = *index_range.start();
    let values = index_range
        .map(|i| func.eval(i as f64 * h))
        .collect::<Result<Vec<_>>>()?;
    RefinableSequence::new(values, 0, h, start, Topology::Open)
}
