//! Sequences on dyadic grids.
//!
//! A [`RefinableSequence`] stores a finite window of samples of a bi-infinite
//! sequence at refinement level `k`. Entry `j` sits at abscissa
//! `(left_index + j) * base_step * 2^-k`. Open sequences shrink under
//! refinement (every emitted value comes from a complete stencil), periodic
//! ones wrap around.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SubdivError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    Periodic { period: usize },
    Open,
}

impl Topology {
    fn name(self) -> &'static str {
        match self {
            Topology::Periodic { .. } => "periodic",
            Topology::Open => "open",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryPolicy {
    /// Only emit values whose full stencil lies inside the stored window.
    Truncate,
    PeriodicWrap,
}

impl BoundaryPolicy {
    /// The only policy that is valid for `topology`.
    pub fn for_topology(topology: Topology) -> Self {
        match topology {
            Topology::Periodic { .. } => BoundaryPolicy::PeriodicWrap,
            Topology::Open => BoundaryPolicy::Truncate,
        }
    }

    fn name(self) -> &'static str {
        match self {
            BoundaryPolicy::Truncate => "truncate",
            BoundaryPolicy::PeriodicWrap => "periodic-wrap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinableSequence {
    values: Vec<f64>,
    level: u32,
    base_step: f64,
    left_index: i64,
    topology: Topology,
}

impl RefinableSequence {
    pub fn new(
        values: Vec<f64>,
        level: u32,
        base_step: f64,
        left_index: i64,
        topology: Topology,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(SubdivError::InvalidSequence("values must be nonempty".into()));
        }
        if !(base_step > 0.0 && base_step.is_finite()) {
            return Err(SubdivError::InvalidSequence(format!(
                "base step must be positive and finite, got {base_step}"
            )));
        }
        if let Topology::Periodic { period } = topology {
            if period != values.len() {
                return Err(SubdivError::InvalidSequence(format!(
                    "period {period} does not match {} stored values",
                    values.len()
                )));
            }
        }
        Ok(Self {
            values,
            level,
            base_step,
            left_index,
            topology,
        })
    }

    /// Open sequence at level 0 starting at grid index 0.
    pub fn open(values: Vec<f64>, base_step: f64) -> Result<Self> {
        Self::new(values, 0, base_step, 0, Topology::Open)
    }

    /// Periodic sequence at level 0 whose period is the number of values.
    pub fn periodic(values: Vec<f64>, base_step: f64) -> Result<Self> {
        let period = values.len();
        Self::new(values, 0, base_step, 0, Topology::Periodic { period })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn base_step(&self) -> f64 {
        self.base_step
    }

    pub fn left_index(&self) -> i64 {
        self.left_index
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.topology, Topology::Periodic { .. })
    }

    /// Grid spacing at the current level, `h * 2^-level`.
    pub fn spacing(&self) -> f64 {
        self.base_step * 0.5f64.powi(self.level as i32)
    }

    /// Same metadata, new values. Used for entry-wise maps.
    pub(crate) fn map_values(&self, values: Vec<f64>) -> Result<Self> {
        let topology = match self.topology {
            Topology::Periodic { .. } => Topology::Periodic {
                period: values.len(),
            },
            Topology::Open => Topology::Open,
        };
        Self::new(values, self.level, self.base_step, self.left_index, topology)
    }

    /// Sequence one level finer holding `values`, with first stored entry at
    /// fine index `2 * left_index + offset`.
    pub(crate) fn refined(&self, values: Vec<f64>, offset: i64) -> Result<Self> {
        let topology = match self.topology {
            Topology::Periodic { .. } => Topology::Periodic {
                period: values.len(),
            },
            Topology::Open => Topology::Open,
        };
        Self::new(
            values,
            self.level + 1,
            self.base_step,
            2 * self.left_index + offset,
            topology,
        )
    }

    pub(crate) fn check_policy(&self, policy: BoundaryPolicy) -> Result<()> {
        match (self.topology, policy) {
            (Topology::Open, BoundaryPolicy::Truncate)
            | (Topology::Periodic { .. }, BoundaryPolicy::PeriodicWrap) => Ok(()),
            _ => Err(SubdivError::PolicyMismatch {
                policy: policy.name(),
                topology: self.topology.name(),
            }),
        }
    }
}

/// `values[j+1] - values[j]`, wrapping for periodic sequences.
pub fn forward_difference(seq: &RefinableSequence) -> Result<RefinableSequence> {
    let v = seq.values();
    let diffs: Vec<f64> = match seq.topology() {
        Topology::Open => {
            if v.len() < 2 {
                return Err(SubdivError::InsufficientData {
                    needed: 2,
                    got: v.len(),
                });
            }
            v.windows(2).map(|w| w[1] - w[0]).collect()
        }
        Topology::Periodic { .. } => {
            let n = v.len();
            (0..n).map(|j| v[(j + 1) % n] - v[j]).collect()
        }
    };
    seq.map_values(diffs)
}

/// `2^level * forward_difference(seq)`, the first divided difference on the
/// level-`k` grid of unit base step.
pub fn divided_difference(seq: &RefinableSequence) -> Result<RefinableSequence> {
    let scale = 2f64.powi(seq.level() as i32);
    let diff = forward_difference(seq)?;
    let scaled = diff.values().iter().map(|d| scale * d).collect();
    diff.map_values(scaled)
}

/// Iterated forward difference of order `n`.
pub fn nth_difference(seq: &RefinableSequence, n: usize) -> Result<RefinableSequence> {
    let mut out = seq.clone();
    for _ in 0..n {
        out = forward_difference(&out)?;
    }
    Ok(out)
}

pub fn sup_norm(seq: &RefinableSequence) -> f64 {
    sup_norm_slice(seq.values())
}

pub(crate) fn sup_norm_slice(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Abscissa of every stored value.
pub fn abscissae(seq: &RefinableSequence) -> Vec<f64> {
    let spacing = seq.spacing();
    (0..seq.len() as i64)
        .map(|j| (seq.left_index() + j) as f64 * spacing)
        .collect()
}

// ---------------------------------------------------------------------------
// Shared refinement machinery.
// ---------------------------------------------------------------------------

/// Reach of an interpolatory insertion rule: the value inserted between
/// coarse `i` and `i + 1` reads `f[i - left ..= i + 1 + right]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reach {
    pub left: usize,
    pub right: usize,
}

impl Reach {
    #[cfg(test)]
    pub const TWO_POINT: Reach = Reach { left: 0, right: 0 };
    pub const FOUR_POINT: Reach = Reach { left: 1, right: 1 };

    fn width(self) -> usize {
        self.left + self.right + 2
    }
}

/// Interpolatory refinement: even outputs copy the input, odd outputs come
/// from `insert(i, window)` where `i` is the coarse index (relative to the
/// stored values) of the left neighbour.
pub(crate) fn refine_interpolatory<F>(
    seq: &RefinableSequence,
    policy: BoundaryPolicy,
    reach: Reach,
    mut insert: F,
) -> Result<RefinableSequence>
where
    F: FnMut(usize, &[f64]) -> Result<f64>,
{
    seq.check_policy(policy)?;
    let v = seq.values();
    let n = v.len();
    match policy {
        BoundaryPolicy::Truncate => {
            if n < reach.width() {
                return Err(SubdivError::InsufficientData {
                    needed: reach.width(),
                    got: n,
                });
            }
            let first = reach.left;
            let last = n - 2 - reach.right;
            let mut out = Vec::with_capacity(2 * (last - first + 1) + 1);
            for i in first..=last {
                out.push(v[i]);
                out.push(insert(i, &v[i - reach.left..=i + 1 + reach.right])?);
            }
            out.push(v[last + 1]);
            seq.refined(out, 2 * first as i64)
        }
        BoundaryPolicy::PeriodicWrap => {
            let mut window = vec![0.0; reach.width()];
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n {
                for (m, w) in window.iter_mut().enumerate() {
                    let idx = (i + n * (reach.left + 1) + m - reach.left) % n;
                    *w = v[idx];
                }
                out.push(v[i]);
                out.push(insert(i, &window)?);
            }
            seq.refined(out, 0)
        }
    }
}

/// Rules that map `(d[i-1], d[i], d[i+1])` to the pair of outputs at fine
/// indices `2i` and `2i+1` (difference schemes).
pub(crate) fn refine_pairs<F>(
    seq: &RefinableSequence,
    policy: BoundaryPolicy,
    mut rule: F,
) -> Result<RefinableSequence>
where
    F: FnMut([f64; 3]) -> [f64; 2],
{
    seq.check_policy(policy)?;
    let v = seq.values();
    let n = v.len();
    match policy {
        BoundaryPolicy::Truncate => {
            if n < 3 {
                return Err(SubdivError::InsufficientData { needed: 3, got: n });
            }
            let mut out = Vec::with_capacity(2 * (n - 2));
            for w in v.windows(3) {
                out.extend_from_slice(&rule([w[0], w[1], w[2]]));
            }
            seq.refined(out, 2)
        }
        BoundaryPolicy::PeriodicWrap => {
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n {
                let w = [v[(i + n - 1) % n], v[i], v[(i + 1) % n]];
                out.extend_from_slice(&rule(w));
            }
            seq.refined(out, 0)
        }
    }
}

/// A linear stencil: output `2i + parity` is `sum_m coeffs[m] * f[i + offset + m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stencil {
    pub offset: i64,
    pub coeffs: Vec<f64>,
}

impl Stencil {
    pub fn new(offset: i64, coeffs: Vec<f64>) -> Self {
        Self { offset, coeffs }
    }

    pub fn sum(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Evaluated as `S f_a + sum_m c_m (f_m - f_a)` around the dominant tap
    /// `a`, so stencils summing to one keep constant data bit-exact.
    fn apply(&self, window: impl Iterator<Item = f64>) -> f64 {
        let w: Vec<f64> = window.take(self.coeffs.len()).collect();
        let a = self
            .coeffs
            .iter()
            .enumerate()
            .fold(0, |best, (m, c)| if c.abs() > self.coeffs[best].abs() { m } else { best });
        let anchor = w[a];
        let spread: f64 = self
            .coeffs
            .iter()
            .zip(&w)
            .enumerate()
            .filter(|(m, _)| *m != a)
            .map(|(_, (c, f))| c * (f - anchor))
            .sum();
        self.sum() * anchor + spread
    }

    /// Coarse indices `i` (relative, possibly negative) whose stencil fits
    /// inside `0..n`.
    fn valid_range(&self, n: usize) -> (i64, i64) {
        let len = self.coeffs.len() as i64;
        (-self.offset, n as i64 - self.offset - len)
    }
}

/// Upsample-and-convolve with one stencil per output parity.
pub(crate) fn refine_stencils(
    seq: &RefinableSequence,
    policy: BoundaryPolicy,
    even: &Stencil,
    odd: &Stencil,
) -> Result<RefinableSequence> {
    seq.check_policy(policy)?;
    let v = seq.values();
    let n = v.len();
    match policy {
        BoundaryPolicy::Truncate => {
            let (e_lo, e_hi) = even.valid_range(n);
            let (o_lo, o_hi) = odd.valid_range(n);
            let valid = |p: i64| {
                let i = p.div_euclid(2);
                if p.rem_euclid(2) == 0 {
                    (e_lo..=e_hi).contains(&i)
                } else {
                    (o_lo..=o_hi).contains(&i)
                }
            };
            let p_min = (2 * e_lo).min(2 * o_lo + 1);
            let p_max = (2 * e_hi).max(2 * o_hi + 1);
            // Longest run of consecutive fine positions with a complete stencil.
            let mut best: Option<(i64, i64)> = None;
            let mut run_start: Option<i64> = None;
            for p in p_min..=p_max + 1 {
                if p <= p_max && valid(p) {
                    run_start.get_or_insert(p);
                } else if let Some(start) = run_start.take() {
                    let end = p - 1;
                    if best.is_none_or(|(s, e)| end - start > e - s) {
                        best = Some((start, end));
                    }
                }
            }
            // a usable step emits at least one value of each parity
            let (start, end) = best
                .filter(|(s, e)| e > s)
                .ok_or(SubdivError::InsufficientData {
                    needed: even.coeffs.len().max(odd.coeffs.len()),
                    got: n,
                })?;
            let out = (start..=end)
                .map(|p| {
                    let i = p.div_euclid(2);
                    let stencil = if p.rem_euclid(2) == 0 { even } else { odd };
                    let base = (i + stencil.offset) as usize;
                    stencil.apply(v[base..base + stencil.coeffs.len()].iter().copied())
                })
                .collect();
            seq.refined(out, start)
        }
        BoundaryPolicy::PeriodicWrap => {
            let n_i = n as i64;
            let mut out = Vec::with_capacity(2 * n);
            for i in 0..n_i {
                for stencil in [even, odd] {
                    let window = (0..stencil.coeffs.len() as i64)
                        .map(|m| v[(i + stencil.offset + m).rem_euclid(n_i) as usize]);
                    out.push(stencil.apply(window));
                }
            }
            seq.refined(out, 0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(v: &[f64]) -> RefinableSequence {
        RefinableSequence::open(v.to_vec(), 1.0).unwrap()
    }

    #[test]
    fn forward_difference_open_and_periodic() {
        let d = forward_difference(&open(&[1.0, 2.0, 4.0])).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0]);

        let p = RefinableSequence::periodic(vec![1.0, 2.0, 4.0], 1.0).unwrap();
        let d = forward_difference(&p).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, -3.0]);
        assert_eq!(d.topology(), Topology::Periodic { period: 3 });

        let c = forward_difference(&open(&[7.5; 5])).unwrap();
        assert!(c.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn forward_difference_needs_two_points() {
        assert_eq!(
            forward_difference(&open(&[1.0])),
            Err(SubdivError::InsufficientData { needed: 2, got: 1 })
        );
        let single = RefinableSequence::periodic(vec![3.0], 1.0).unwrap();
        assert_eq!(forward_difference(&single).unwrap().values(), &[0.0]);
    }

    #[test]
    fn divided_difference_scales_by_level() {
        let s0 = open(&[0.0, 1.0, 3.0]);
        assert_eq!(divided_difference(&s0).unwrap().values(), &[1.0, 2.0]);

        let s2 = RefinableSequence::new(vec![0.0, 1.0, 3.0], 2, 1.0, 0, Topology::Open).unwrap();
        let d = divided_difference(&s2).unwrap();
        assert_eq!(d.values(), &[4.0, 8.0]);
        assert_eq!(d.level(), 2);

        // samples of t on the level-3 grid
        let k = 3;
        let vals: Vec<f64> = (0..6).map(|i| i as f64 / 8.0).collect();
        let s = RefinableSequence::new(vals, k, 1.0, 0, Topology::Open).unwrap();
        assert!(divided_difference(&s).unwrap().values().iter().all(|&x| x == 1.0));
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(sup_norm(&open(&[1.0, -3.0, 2.0])), 3.0);
        assert_eq!(sup_norm(&open(&[0.0, 0.0])), 0.0);
        assert_eq!(sup_norm(&open(&[-0.5])), 0.5);
    }

    #[test]
    fn abscissae_examples() {
        assert_eq!(abscissae(&open(&[5.0, 6.0, 7.0])), vec![0.0, 1.0, 2.0]);
        let s = RefinableSequence::new(vec![1.0, 2.0], 1, 0.5, 1, Topology::Open).unwrap();
        assert_eq!(abscissae(&s), vec![0.25, 0.5]);
        let fine = RefinableSequence::new(vec![0.0; 3], 4, 1.0, 0, Topology::Open).unwrap();
        let x = abscissae(&fine);
        assert_eq!(x[1] - x[0], 1.0 / 16.0);
    }

    #[test]
    fn constructor_invariants() {
        assert!(RefinableSequence::open(vec![], 1.0).is_err());
        assert!(RefinableSequence::open(vec![1.0], 0.0).is_err());
        assert!(RefinableSequence::new(vec![1.0, 2.0], 0, 1.0, 0, Topology::Periodic { period: 3 })
            .is_err());
    }

    #[test]
    fn policy_must_match_topology() {
        let s = open(&[0.0, 1.0, 2.0, 3.0]);
        let err = refine_pairs(&s, BoundaryPolicy::PeriodicWrap, |w| [w[1], w[1]]).unwrap_err();
        assert!(matches!(err, SubdivError::PolicyMismatch { .. }));
    }

    #[test]
    fn truncation_count_laws() {
        let s = open(&(0..10).map(f64::from).collect::<Vec<_>>());
        let four = refine_interpolatory(&s, BoundaryPolicy::Truncate, Reach::FOUR_POINT, |_, w| {
            Ok(0.5 * (w[1] + w[2]))
        })
        .unwrap();
        assert_eq!(four.len(), 2 * 10 - 5);
        assert_eq!(four.left_index(), 2);

        let two = refine_interpolatory(&s, BoundaryPolicy::Truncate, Reach::TWO_POINT, |_, w| {
            Ok(0.5 * (w[0] + w[1]))
        })
        .unwrap();
        assert_eq!(two.len(), 2 * 10 - 1);
        assert_eq!(two.left_index(), 0);
    }

    #[test]
    fn stencil_truncation_matches_interpolatory_window() {
        let s = open(&(0..9).map(|i| (i * i) as f64).collect::<Vec<_>>());
        let even = Stencil::new(0, vec![1.0]);
        let odd = Stencil::new(-1, vec![-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0]);
        let r = refine_stencils(&s, BoundaryPolicy::Truncate, &even, &odd).unwrap();
        assert_eq!(r.len(), 2 * 9 - 5);
        assert_eq!(r.left_index(), 2);
        assert_eq!(r.values()[0], 1.0);
    }
}
