use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nonlinear::{refine_s_eps_diff, DiffScale, EpsilonParameter};
use crate::sequence::{refine_pairs, sup_norm_slice, BoundaryPolicy, RefinableSequence};

use super::rho::rho_slice;
use super::AnalysisReport;

/// Difference schemes whose contraction can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DifferenceScheme {
    SEps(EpsilonParameter),
    /// Differences of the midpoint scheme: plain halving.
    T11,
    /// Differences of the 4-point scheme (weight 1/16).
    T22,
}

impl DifferenceScheme {
    pub fn refine(
        self,
        d: &RefinableSequence,
        scale: DiffScale,
        policy: BoundaryPolicy,
    ) -> Result<RefinableSequence> {
        let factor = match scale {
            DiffScale::Half => 1.0,
            DiffScale::Divided => 2.0,
        };
        match self {
            DifferenceScheme::SEps(eps) => refine_s_eps_diff(d, eps, scale, policy),
            DifferenceScheme::T11 => refine_pairs(d, policy, |[_, b, _]| [factor * 0.5 * b; 2]),
            DifferenceScheme::T22 => refine_pairs(d, policy, |[a, b, c]| {
                let t = (a - c) / 16.0;
                [factor * (0.5 * b + t), factor * (0.5 * b - t)]
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DataClass {
    /// Periodic, entries uniform in `[-1, 1]`.
    General,
    /// Periodic, entries uniform in `(0, 1]`.
    StrictlyPositive,
    /// Open positive sequences with `rho <= rho_bound`; measured on the
    /// divided-difference scheme applied twice per step.
    NearConstantPositive { rho_bound: f64 },
}

const TRIAL_LEN: usize = 24;

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn draw(rng: &mut ChaCha8Rng, class: DataClass) -> RefinableSequence {
    match class {
        DataClass::General => {
            let v = (0..TRIAL_LEN).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            RefinableSequence::periodic(v, 1.0).expect("nonempty")
        }
        DataClass::StrictlyPositive => {
            let v = (0..TRIAL_LEN).map(|_| 1.0 - rng.gen::<f64>()).collect();
            RefinableSequence::periodic(v, 1.0).expect("nonempty")
        }
        DataClass::NearConstantPositive { rho_bound } => {
            // log-uniform ratios in [1/(1+b), 1+b] keep rho <= b
            let l = rho_bound.ln_1p();
            let mut d = rng.gen_range(0.5..2.0);
            let v = (0..TRIAL_LEN)
                .map(|_| {
                    let out = d;
                    d *= rng.gen_range(-l..=l).exp();
                    out
                })
                .collect();
            RefinableSequence::open(v, 1.0).expect("nonempty")
        }
    }
}

/// Worst observed contraction over `trials` seeded random inputs.
///
/// `contraction_factors[l]` is the sup of `|S^(l+1) f| / |f|` for the
/// `General` and `StrictlyPositive` classes. For `NearConstantPositive` it is
/// the sup of `rho(d_(l+1)) / rho(d_0)` where `d_(l+1)` comes from `2(l+1)`
/// divided-difference steps; `rho_trace[l]` then holds the sup of `rho(d_l)`.
pub fn contraction_report(
    scheme: DifferenceScheme,
    trials: usize,
    levels: usize,
    data_class: DataClass,
    seed: u64,
) -> Result<AnalysisReport> {
    let per_trial: Vec<(Vec<f64>, Vec<f64>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut rng = trial_rng(seed, t);
            let d0 = draw(&mut rng, data_class);
            let policy = BoundaryPolicy::for_topology(d0.topology());
            match data_class {
                DataClass::NearConstantPositive { .. } => {
                    let rho0 = rho_slice(d0.values()).as_f64().unwrap_or(f64::NAN);
                    let mut rhos = vec![rho0];
                    let mut factors = Vec::with_capacity(levels);
                    let mut d = d0;
                    for _ in 0..levels {
                        for _ in 0..2 {
                            d = scheme.refine(&d, DiffScale::Divided, policy)?;
                        }
                        let r = rho_slice(d.values()).as_f64().unwrap_or(f64::INFINITY);
                        rhos.push(r);
                        factors.push(r / rho0);
                    }
                    Ok((factors, rhos))
                }
                _ => {
                    let norm0 = sup_norm_slice(d0.values());
                    let mut factors = Vec::with_capacity(levels);
                    let mut d = d0;
                    for _ in 0..levels {
                        d = scheme.refine(&d, DiffScale::Half, policy)?;
                        factors.push(sup_norm_slice(d.values()) / norm0);
                    }
                    Ok((factors, Vec::new()))
                }
            }
        })
        .collect::<Result<_>>()?;

    let sup_columns = |pick: fn(&(Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Vec<f64> {
        let width = per_trial.first().map_or(0, |t| pick(t).len());
        (0..width)
            .map(|l| {
                per_trial
                    .iter()
                    .map(|t| pick(t)[l])
                    .filter(|v| !v.is_nan())
                    .fold(0.0, f64::max)
            })
            .collect()
    };
    let contraction_factors = sup_columns(|t| &t.0);
    let rho_trace = sup_columns(|t| &t.1);
    log::info!("{scheme:?} on {data_class:?}: factors {contraction_factors:?}");
    Ok(AnalysisReport {
        contraction_factors,
        rho_trace,
        notes: vec![format!(
            "{trials} trials, {levels} levels, seed {seed}, ChaCha8 streams per trial"
        )],
        ..Default::default()
    })
}
