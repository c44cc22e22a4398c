//! Linear refinement: stationary masks, the level-dependent schemes that
//! reproduce exponential polynomials, and orthogonal (annihilating) rules.
//!
//! Frequencies are expressed in units of the level-0 grid step. Schemes that
//! take a [`FrequencyParameter`] together with a sequence rescale it by the
//! sequence's `base_step`, so `Hyperbolic { magnitude: 1.0 }` refers to
//! `exp(t)` in the abscissa units of the samples.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};
use crate::sequence::{
    refine_interpolatory, refine_stencils, BoundaryPolicy, Reach, RefinableSequence, Stencil,
    Topology,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FrequencyParameter {
    Zero,
    /// `gamma` real, `phi = cosh`.
    Hyperbolic { magnitude: f64 },
    /// `gamma` imaginary with `|gamma| < pi`, `phi = cos`.
    Trigonometric { magnitude: f64 },
}

impl FrequencyParameter {
    pub fn hyperbolic(magnitude: f64) -> Result<Self> {
        if !(magnitude > 0.0 && magnitude.is_finite()) {
            return Err(SubdivError::InvalidParameter(format!(
                "hyperbolic magnitude must be positive, got {magnitude}"
            )));
        }
        Ok(Self::Hyperbolic { magnitude })
    }

    pub fn trigonometric(magnitude: f64) -> Result<Self> {
        if !(magnitude > 0.0 && magnitude < std::f64::consts::PI) {
            return Err(SubdivError::InvalidParameter(format!(
                "trigonometric magnitude must lie in (0, pi), got {magnitude}"
            )));
        }
        Ok(Self::Trigonometric { magnitude })
    }

    pub fn magnitude(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Hyperbolic { magnitude } | Self::Trigonometric { magnitude } => magnitude,
        }
    }

    /// Frequency seen on a grid of spacing `step`.
    pub fn scaled(self, step: f64) -> Result<Self> {
        match self {
            Self::Zero => Ok(Self::Zero),
            Self::Hyperbolic { magnitude } => Self::hyperbolic(magnitude * step),
            Self::Trigonometric { magnitude } => Self::trigonometric(magnitude * step),
        }
    }
}

/// Tension parameter `phi_{gamma,k} = cosh/cos(2^-k |gamma|)`.
pub fn phi(gamma: FrequencyParameter, k: u32) -> f64 {
    let scale = 0.5f64.powi(k as i32);
    match gamma {
        FrequencyParameter::Zero => 1.0,
        FrequencyParameter::Hyperbolic { magnitude } => (scale * magnitude).cosh(),
        FrequencyParameter::Trigonometric { magnitude } => (scale * magnitude).cos(),
    }
}

/// Weight of the second difference in the level-`k` rule of the
/// non-stationary 4-point scheme.
pub fn gamma_level_coefficient(gamma: FrequencyParameter, k: u32) -> f64 {
    let p1 = phi(gamma, k + 1);
    let p2 = phi(gamma, k + 2);
    let value = 1.0 / (16.0 * p2 * p2 * p1);
    debug_assert!({
        let closed = gamma_level_coefficient_closed_form(phi(gamma, k));
        !value.is_normal() || ((value - closed) / value).abs() <= 1e-13
    });
    value
}

/// The same coefficient written through `phi_{gamma,k}` alone.
pub(crate) fn gamma_level_coefficient_closed_form(phi_k: f64) -> f64 {
    let s = 1.0 + (2.0 * (1.0 + phi_k)).sqrt();
    0.5 / (s * s - 1.0)
}

/// Interpolatory-or-not linear mask given by its even and odd stencils.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    even: Stencil,
    odd: Stencil,
}

impl Mask {
    /// Both stencils must sum to one (reproduction of constants).
    pub fn new(even: Stencil, odd: Stencil) -> Result<Self> {
        for (name, s) in [("even", &even), ("odd", &odd)] {
            if s.coeffs.is_empty() {
                return Err(SubdivError::InvalidMask(format!("{name} stencil is empty")));
            }
            if (s.sum() - 1.0).abs() > 1e-12 {
                return Err(SubdivError::InvalidMask(format!(
                    "{name} coefficients sum to {}, expected 1",
                    s.sum()
                )));
            }
        }
        Ok(Self { even, odd })
    }

    /// Two-point midpoint scheme.
    pub fn t11() -> Self {
        Self {
            even: Stencil::new(0, vec![1.0]),
            odd: Stencil::new(0, vec![0.5, 0.5]),
        }
    }

    /// Four-point Deslauriers-Dubuc scheme.
    pub fn t22() -> Self {
        Self {
            even: Stencil::new(0, vec![1.0]),
            odd: Stencil::new(-1, vec![-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0]),
        }
    }

    pub fn even(&self) -> &Stencil {
        &self.even
    }

    pub fn odd(&self) -> &Stencil {
        &self.odd
    }
}

pub fn refine_mask(
    seq: &RefinableSequence,
    mask: &Mask,
    policy: BoundaryPolicy,
) -> Result<RefinableSequence> {
    refine_stencils(seq, policy, &mask.even, &mask.odd)
}

fn copy_stencil() -> Stencil {
    Stencil::new(0, vec![1.0])
}

/// Non-stationary 4-point scheme reproducing `span{1, t, exp(gamma t), exp(-gamma t)}`.
/// With `gamma = Zero` this is exactly the stationary 4-point mask.
/// The level is read from `seq`.
pub fn refine_t_gamma(
    seq: &RefinableSequence,
    gamma: FrequencyParameter,
    policy: BoundaryPolicy,
) -> Result<RefinableSequence> {
    if gamma == FrequencyParameter::Zero {
        return refine_mask(seq, &Mask::t22(), policy);
    }
    let grid_gamma = gamma.scaled(seq.base_step())?;
    let w = gamma_level_coefficient(grid_gamma, seq.level());
    refine_interpolatory(seq, policy, Reach::FOUR_POINT, |_, f| {
        Ok(0.5 * f[1] + 0.5 * f[2] - w * (f[3] - f[2] - f[1] + f[0]))
    })
}

/// Non-stationary 2-point scheme reproducing `span{exp(gamma t), exp(-gamma t)}`.
pub fn refine_2pt_nonstationary(
    seq: &RefinableSequence,
    gamma: FrequencyParameter,
    policy: BoundaryPolicy,
) -> Result<RefinableSequence> {
    let grid_gamma = gamma.scaled(seq.base_step())?;
    let c = 1.0 / (2.0 * phi(grid_gamma, seq.level() + 1));
    let odd = Stencil::new(0, vec![c, c]);
    refine_stencils(seq, policy, &copy_stencil(), &odd)
}

/// One factor of the symbol of an orthogonal rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpaceFactor {
    /// Polynomials of degree `< multiplicity`: `(1 - z)^mu`.
    Polynomial { multiplicity: u32 },
    /// `exp(rate t)`: `(1 - exp(2^-k rate) z)`.
    RealExp { rate: f64 },
    /// `cos(m t), sin(m t)` (times `t^l`, `l < multiplicity`):
    /// `(1 - 2 phi z + z^2)^mu`.
    ConjugatePair { magnitude: f64, multiplicity: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalRule {
    coefficients: Vec<f64>,
    reference_level: u32,
}

impl OrthogonalRule {
    /// Coefficients `b_0, b_1, ...` of `b(z) = sum b_m z^m`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn reference_level(&self) -> u32 {
        self.reference_level
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(PartialEq)]
enum Exponent {
    Real(f64),
    Imaginary(f64),
}

/// Annihilating filter of the exponential-polynomial space described by
/// `factors`, for samples on the level-`k` grid.
pub fn orthogonal_rule(factors: &[SpaceFactor], k: u32) -> Result<OrthogonalRule> {
    if factors.is_empty() {
        return Err(SubdivError::InvalidSpace("no factors given".into()));
    }
    let scale = 0.5f64.powi(k as i32);
    let mut seen: Vec<Exponent> = Vec::new();
    let mut coefficients = vec![1.0];
    for factor in factors {
        let (exponent, poly) = match *factor {
            SpaceFactor::Polynomial { multiplicity } => {
                check_multiplicity(multiplicity)?;
                let p = (0..multiplicity).fold(vec![1.0], |acc, _| poly_mul(&acc, &[1.0, -1.0]));
                (Exponent::Real(0.0), p)
            }
            SpaceFactor::RealExp { rate } => {
                if !rate.is_finite() {
                    return Err(SubdivError::InvalidSpace(format!("non-finite rate {rate}")));
                }
                (Exponent::Real(rate), vec![1.0, -(scale * rate).exp()])
            }
            SpaceFactor::ConjugatePair {
                magnitude,
                multiplicity,
            } => {
                check_multiplicity(multiplicity)?;
                let gamma = FrequencyParameter::trigonometric(magnitude)
                    .map_err(|e| SubdivError::InvalidSpace(e.to_string()))?;
                let quad = [1.0, -2.0 * phi(gamma, k), 1.0];
                let p = (0..multiplicity).fold(vec![1.0], |acc, _| poly_mul(&acc, &quad));
                (Exponent::Imaginary(magnitude), p)
            }
        };
        if seen.contains(&exponent) {
            return Err(SubdivError::InvalidSpace(format!(
                "factor {factor:?} repeats an exponent already present"
            )));
        }
        seen.push(exponent);
        coefficients = poly_mul(&coefficients, &poly);
    }
    Ok(OrthogonalRule {
        coefficients,
        reference_level: k,
    })
}

fn check_multiplicity(mu: u32) -> Result<()> {
    if mu == 0 {
        return Err(SubdivError::InvalidSpace("multiplicity must be positive".into()));
    }
    Ok(())
}

/// `sup_i |sum_m b_m f_{i-m}|` over every position where the whole filter
/// fits (all positions for periodic data).
pub fn annihilation_residual(rule: &OrthogonalRule, seq: &RefinableSequence) -> Result<f64> {
    if seq.level() != rule.reference_level {
        return Err(SubdivError::LengthMismatch(format!(
            "rule built for level {} applied to level {} data",
            rule.reference_level,
            seq.level()
        )));
    }
    let b = &rule.coefficients;
    let v = seq.values();
    let len = b.len();
    let residual = |window: &mut dyn Iterator<Item = f64>| -> f64 {
        // window yields f_{i-L}, ..., f_i; b_m multiplies f_{i-m}.
        window.zip(b.iter().rev()).map(|(f, c)| c * f).sum::<f64>().abs()
    };
    match seq.topology() {
        Topology::Open => {
            if v.len() < len {
                return Err(SubdivError::LengthMismatch(format!(
                    "need {len} values for one window, got {}",
                    v.len()
                )));
            }
            Ok(v.windows(len)
                .map(|w| residual(&mut w.iter().copied()))
                .fold(0.0, f64::max))
        }
        Topology::Periodic { period } => Ok((0..period)
            .map(|i| residual(&mut (0..len).map(|m| v[(i + m) % period])))
            .fold(0.0, f64::max)),
    }
}

/// Recover `phi_{gamma,k}` from four consecutive samples of a function in
/// `span{1, exp(gamma t), exp(-gamma t)}`.
pub fn phi_from_samples(f_im1: f64, f_i: f64, f_ip1: f64, f_ip2: f64) -> Result<f64> {
    if f_ip1 == f_i {
        return Err(SubdivError::IndeterminatePhi);
    }
    Ok(0.5 * ((f_ip2 - f_im1) / (f_ip1 - f_i) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn open(values: Vec<f64>, h: f64) -> RefinableSequence {
        RefinableSequence::open(values, h).unwrap()
    }

    #[test]
    fn phi_examples() {
        let g = FrequencyParameter::trigonometric(2.0 * PI / 3.0).unwrap();
        assert!((phi(g, 0) + 0.5).abs() < 1e-15);
        assert!((phi(g, 1) - 0.5).abs() < 1e-15);
        for k in 0..5 {
            assert_eq!(phi(FrequencyParameter::Zero, k), 1.0);
        }
        let h = FrequencyParameter::hyperbolic(2.0).unwrap();
        assert!(phi(h, 0) >= 1.0);
    }

    #[test]
    fn frequency_domain_is_enforced() {
        assert!(FrequencyParameter::trigonometric(PI).is_err());
        assert!(FrequencyParameter::trigonometric(0.0).is_err());
        assert!(FrequencyParameter::hyperbolic(-1.0).is_err());
        let g = FrequencyParameter::trigonometric(2.0).unwrap();
        assert!(g.scaled(2.0).is_err());
        assert_eq!(g.scaled(0.5).unwrap().magnitude(), 1.0);
    }

    #[test]
    fn gamma_level_coefficient_examples() {
        for k in 0..6 {
            assert_eq!(gamma_level_coefficient(FrequencyParameter::Zero, k), 1.0 / 16.0);
        }
        let g = FrequencyParameter::trigonometric(2.0 * PI / 3.0).unwrap();
        // phi_1 = 1/2, phi_2 = sqrt(3)/2
        assert!((gamma_level_coefficient(g, 0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((gamma_level_coefficient_closed_form(-0.5) - 1.0 / 6.0).abs() < 1e-15);

        let mut prev = 1.0 / 16.0;
        for m in [0.5, 2.0, 5.0, 10.0] {
            let w = gamma_level_coefficient(FrequencyParameter::hyperbolic(m).unwrap(), 0);
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn closed_form_agrees_with_product_form() {
        for m in [0.1, 1.0, 2.5, 3.1] {
            let g = FrequencyParameter::trigonometric(m).unwrap();
            for k in 0..10 {
                let a = gamma_level_coefficient(g, k);
                let b = gamma_level_coefficient_closed_form(phi(g, k));
                assert!(((a - b) / a).abs() < 1e-13, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn t11_midpoints() {
        let r = refine_mask(&open(vec![0.0, 2.0], 1.0), &Mask::t11(), BoundaryPolicy::Truncate)
            .unwrap();
        assert_eq!(r.values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn t22_reproduces_cubics() {
        let f = |t: f64| t * t * t - 2.0 * t + 0.5;
        let s = open((0..10).map(|i| f(i as f64 * 0.5)).collect(), 0.5);
        let r = refine_mask(&s, &Mask::t22(), BoundaryPolicy::Truncate).unwrap();
        for (x, v) in crate::sequence::abscissae(&r).iter().zip(r.values()) {
            assert!((v - f(*x)).abs() < 1e-12, "t={x}");
        }
    }

    #[test]
    fn masks_reproduce_constants() {
        let s = open(vec![3.25; 8], 1.0);
        for m in [Mask::t11(), Mask::t22()] {
            let r = refine_mask(&s, &m, BoundaryPolicy::Truncate).unwrap();
            assert!(r.values().iter().all(|&v| v == 3.25));
        }
    }

    #[test]
    fn mask_sum_validation() {
        let bad = Mask::new(Stencil::new(0, vec![1.0]), Stencil::new(0, vec![0.5, 0.4]));
        assert!(matches!(bad, Err(SubdivError::InvalidMask(_))));
    }

    #[test]
    fn t_gamma_zero_is_t22() {
        let s = open((0..12).map(|i| ((i * 7) % 5) as f64 * 0.3).collect(), 1.0);
        let a = refine_t_gamma(&s, FrequencyParameter::Zero, BoundaryPolicy::Truncate).unwrap();
        let b = refine_mask(&s, &Mask::t22(), BoundaryPolicy::Truncate).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn t_gamma_reproduces_exponential() {
        let f = |t: f64| t.exp() + 1.0;
        let h = 0.5;
        let s = open((0..8).map(|i| f(i as f64 * h)).collect(), h);
        let g = FrequencyParameter::hyperbolic(1.0).unwrap();
        let r = refine_t_gamma(&s, g, BoundaryPolicy::Truncate).unwrap();
        for (x, v) in crate::sequence::abscissae(&r).iter().zip(r.values()) {
            assert!((v - f(*x)).abs() < 1e-12 * f(*x), "t={x}");
        }
        // linear data: Gamma multiplies a zero second difference
        let lin = open((0..6).map(f64::from).collect(), 1.0);
        let r = refine_t_gamma(&lin, g, BoundaryPolicy::Truncate).unwrap();
        assert_eq!(r.values(), &[1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
    }

    #[test]
    fn two_point_examples() {
        let s = open(vec![0.0, 2.0, 4.0], 1.0);
        let r = refine_2pt_nonstationary(&s, FrequencyParameter::Zero, BoundaryPolicy::Truncate)
            .unwrap();
        assert_eq!(r.values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);

        let g = FrequencyParameter::trigonometric(1.0).unwrap();
        let s = open((0..5).map(|i| (i as f64).cos()).collect(), 1.0);
        let r = refine_2pt_nonstationary(&s, g, BoundaryPolicy::Truncate).unwrap();
        for (x, v) in crate::sequence::abscissae(&r).iter().zip(r.values()) {
            assert!((v - x.cos()).abs() < 1e-13, "t={x}");
        }

        let c = open(vec![2.0; 4], 1.0);
        let r = refine_2pt_nonstationary(&c, g, BoundaryPolicy::Truncate).unwrap();
        let phi1 = (0.5f64).cos();
        assert!((r.values()[1] - 2.0 / phi1).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_rule_examples() {
        let r = orthogonal_rule(&[SpaceFactor::Polynomial { multiplicity: 3 }], 4).unwrap();
        assert_eq!(r.coefficients(), &[1.0, -3.0, 3.0, -1.0]);

        let pair = SpaceFactor::ConjugatePair {
            magnitude: 2.0 * PI / 3.0,
            multiplicity: 1,
        };
        let r = orthogonal_rule(&[pair], 0).unwrap();
        for (c, e) in r.coefficients().iter().zip([1.0, 1.0, 1.0]) {
            assert!((c - e).abs() < 1e-15);
        }
        let r = orthogonal_rule(&[SpaceFactor::Polynomial { multiplicity: 1 }, pair], 0).unwrap();
        for (c, e) in r.coefficients().iter().zip([1.0, 0.0, 0.0, -1.0]) {
            assert!((c - e).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_rule_rejects_duplicates() {
        let dup = orthogonal_rule(
            &[
                SpaceFactor::Polynomial { multiplicity: 1 },
                SpaceFactor::RealExp { rate: 0.0 },
            ],
            0,
        );
        assert!(matches!(dup, Err(SubdivError::InvalidSpace(_))));
        let dup = orthogonal_rule(
            &[SpaceFactor::RealExp { rate: 0.3 }, SpaceFactor::RealExp { rate: 0.3 }],
            0,
        );
        assert!(dup.is_err());
    }

    #[test]
    fn residual_examples() {
        let diff = orthogonal_rule(&[SpaceFactor::Polynomial { multiplicity: 1 }], 0).unwrap();
        assert_eq!(annihilation_residual(&diff, &open(vec![4.0; 5], 1.0)).unwrap(), 0.0);
        assert_eq!(annihilation_residual(&diff, &open(vec![0.0, 1.0], 1.0)).unwrap(), 1.0);
        assert!(annihilation_residual(&diff, &open(vec![0.0], 1.0)).is_err());

        // real exponentials are annihilated with the orientation of the symbol
        let k = 2;
        let rate = 0.7;
        let rule = orthogonal_rule(&[SpaceFactor::RealExp { rate }], k).unwrap();
        let vals = (0..8).map(|i| (rate * i as f64 / 4.0).exp()).collect();
        let s = RefinableSequence::new(vals, k, 1.0, 0, Topology::Open).unwrap();
        assert!(annihilation_residual(&rule, &s).unwrap() < 1e-14);
    }

    #[test]
    fn w0gamma_rule_annihilates_shifted_cosine() {
        let m = 2.0 * PI / 3.0;
        let factors = [
            SpaceFactor::Polynomial { multiplicity: 1 },
            SpaceFactor::ConjugatePair {
                magnitude: m,
                multiplicity: 1,
            },
        ];
        for k in 0..4 {
            let rule = orthogonal_rule(&factors, k).unwrap();
            let vals = (0..20)
                .map(|i| 2.0 + (m * i as f64 * 0.5f64.powi(k as i32)).cos())
                .collect();
            let s = RefinableSequence::new(vals, k, 1.0, 0, Topology::Open).unwrap();
            assert!(annihilation_residual(&rule, &s).unwrap() <= 3e-12);
        }
    }

    #[test]
    fn phi_from_samples_examples() {
        let p = phi_from_samples(0f64.cos(), 1f64.cos(), 2f64.cos(), 3f64.cos()).unwrap();
        assert!((p - 1f64.cos()).abs() < 1e-13);
        assert_eq!(phi_from_samples(1.0, 0.0, 1.0, 4.0).unwrap(), 1.0);
        assert_eq!(phi_from_samples(0.0, 1.0, 1.0, 2.0), Err(SubdivError::IndeterminatePhi));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::sequence::abscissae;
    use proptest::prelude::*;

    fn frequency() -> impl Strategy<Value = FrequencyParameter> {
        prop_oneof![
            Just(FrequencyParameter::Zero),
            (0.01f64..4.0).prop_map(|m| FrequencyParameter::Hyperbolic { magnitude: m }),
            (0.01f64..3.1).prop_map(|m| FrequencyParameter::Trigonometric { magnitude: m }),
        ]
    }

    /// `a e^{gt} + b e^{-gt}` (or `a cos + b sin`), plus `c + d t` when `with_affine`.
    fn exp_space(gamma: FrequencyParameter, coef: [f64; 4], with_affine: bool) -> impl Fn(f64) -> f64 {
        move |t| {
            let m = gamma.magnitude();
            let pair = match gamma {
                FrequencyParameter::Trigonometric { .. } => {
                    coef[0] * (m * t).cos() + coef[1] * (m * t).sin()
                }
                _ => coef[0] * (m * t).exp() + coef[1] * (-m * t).exp(),
            };
            if with_affine {
                pair + coef[2] + coef[3] * t
            } else {
                pair
            }
        }
    }

    fn max_insertion_error(
        f: &dyn Fn(f64) -> f64,
        refine: &dyn Fn(&RefinableSequence) -> Result<RefinableSequence>,
        k: u32,
        h: f64,
    ) -> (f64, f64) {
        let step = h * 0.5f64.powi(k as i32);
        let vals: Vec<f64> = (0..10).map(|i| f(i as f64 * step)).collect();
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let seq = RefinableSequence::new(vals, k, h, 0, Topology::Open).unwrap();
        let out = refine(&seq).unwrap();
        let err = abscissae(&out)
            .iter()
            .zip(out.values())
            .map(|(t, v)| (v - f(*t)).abs())
            .fold(0.0, f64::max);
        (err, scale)
    }

    proptest! {
        #[test]
        fn two_scale_identity(gamma in frequency(), k in 0u32..=20) {
            let lhs = phi(gamma, k + 1).powi(2);
            let rhs = (1.0 + phi(gamma, k)) / 2.0;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1.0));
        }

        #[test]
        fn masks_keep_constants(c in -1e3f64..1e3, n in 4usize..12) {
            let seq = RefinableSequence::open(vec![c; n], 1.0).unwrap();
            for mask in [Mask::t11(), Mask::t22()] {
                let out = refine_mask(&seq, &mask, BoundaryPolicy::Truncate).unwrap();
                prop_assert!(out.values().iter().all(|&v| v == c));
            }
        }

        #[test]
        fn two_point_reproduces_its_space(
            gamma in frequency().prop_filter("nonzero", |g| *g != FrequencyParameter::Zero),
            coef in prop::array::uniform4(-2.0f64..2.0),
            k in 0u32..6,
            h in 0.1f64..1.0,
        ) {
            let f = exp_space(gamma, coef, false);
            let (err, scale) = max_insertion_error(
                &f,
                &|s| refine_2pt_nonstationary(s, gamma, BoundaryPolicy::Truncate),
                k,
                h,
            );
            prop_assert!(err <= 1e-11 * scale, "err {err}");
        }

        #[test]
        fn t_gamma_reproduces_its_space(
            gamma in frequency(),
            coef in prop::array::uniform4(-2.0f64..2.0),
            k in 0u32..6,
            h in 0.1f64..1.0,
        ) {
            let f = exp_space(gamma, coef, true);
            // with gamma = 0 the pair collapses to a constant
            let (err, scale) = max_insertion_error(
                &f,
                &|s| refine_t_gamma(s, gamma, BoundaryPolicy::Truncate),
                k,
                h,
            );
            prop_assert!(err <= 1e-11 * scale, "err {err}");
        }

        #[test]
        fn orthogonal_rules_annihilate_their_space(
            poly in 0u32..3,
            rate in prop::option::of(-2.0f64..2.0),
            pair in prop::option::of((0.1f64..3.0, 1u32..3)),
            coef in prop::collection::vec(-2.0f64..2.0, 8),
            k in 0u32..5,
        ) {
            let mut factors = Vec::new();
            let mut basis: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
            if poly > 0 {
                factors.push(SpaceFactor::Polynomial { multiplicity: poly });
                for l in 0..poly as i32 {
                    basis.push(Box::new(move |t: f64| t.powi(l)));
                }
            }
            if let Some(r) = rate.filter(|r| poly == 0 || r.abs() > 1e-3) {
                factors.push(SpaceFactor::RealExp { rate: r });
                basis.push(Box::new(move |t: f64| (r * t).exp()));
            }
            if let Some((m, mu)) = pair {
                factors.push(SpaceFactor::ConjugatePair { magnitude: m, multiplicity: mu });
                for l in 0..mu as i32 {
                    basis.push(Box::new(move |t: f64| t.powi(l) * (m * t).cos()));
                    basis.push(Box::new(move |t: f64| t.powi(l) * (m * t).sin()));
                }
            }
            prop_assume!(!factors.is_empty());
            let rule = orthogonal_rule(&factors, k).unwrap();
            let step = 0.5f64.powi(k as i32);
            let vals: Vec<f64> = (0..24)
                .map(|i| {
                    let t = i as f64 * step;
                    basis.iter().zip(&coef).map(|(b, c)| c * b(t)).sum()
                })
                .collect();
            let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let seq = RefinableSequence::new(vals, k, 1.0, 0, Topology::Open).unwrap();
            let res = annihilation_residual(&rule, &seq).unwrap();
            prop_assert!(res <= 1e-10 * scale, "residual {res} scale {scale}");
        }
    }
}
