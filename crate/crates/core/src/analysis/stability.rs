use rayon::prelude::*;

use crate::error::{Result, SubdivError};
use crate::nonlinear::{gamma_eps_diff, refine_s_eps_diff, DiffScale, EpsilonParameter};
use crate::sequence::{BoundaryPolicy, RefinableSequence};

use super::gradients::fd_jacobian;

pub const DEFAULT_T_GRID: usize = 33;

fn same_strict_sign(v: &[f64]) -> bool {
    v.iter().all(|&x| x > 0.0) || v.iter().all(|&x| x < 0.0)
}

/// Row-sum norm of the Jacobian of one difference step at `d`.
fn jacobian_norm(d: &[f64], eps: EpsilonParameter) -> Result<f64> {
    let mut worst = 0.0f64;
    for w in d.windows(3) {
        let rule = |x: &[f64]| {
            let t = gamma_eps_diff(x[0], x[1], x[2], eps) * (x[0] - x[2]);
            vec![0.5 * x[1] + t, 0.5 * x[1] - t]
        };
        let jac = fd_jacobian(rule, w, 1e-6 * w[1].abs())?;
        for row in jac {
            worst = worst.max(row.iter().map(|g| g.abs()).sum());
        }
    }
    Ok(worst)
}

/// Sup over `t` in a uniform grid of `prod_k |D S(tau_k(t))|_inf`, where
/// `tau_0(t) = (1 - t) f + t g` and `tau_(k+1) = S tau_k`, for difference
/// sequences `f` and `g` of one strict sign.
pub fn stability_path_diagnostic(
    f: &RefinableSequence,
    g: &RefinableSequence,
    eps: EpsilonParameter,
    levels: usize,
    t_grid: usize,
) -> Result<f64> {
    if f.len() != g.len() || f.topology() != g.topology() {
        return Err(SubdivError::LengthMismatch(format!(
            "paths need matching sequences, got {} and {} values",
            f.len(),
            g.len()
        )));
    }
    if t_grid < 2 {
        return Err(SubdivError::InvalidParameter("t grid needs at least 2 points".into()));
    }
    let policy = BoundaryPolicy::for_topology(f.topology());
    let products = (0..t_grid)
        .into_par_iter()
        .map(|m| -> Result<f64> {
            let t = m as f64 / (t_grid - 1) as f64;
            let mix: Vec<f64> = f
                .values()
                .iter()
                .zip(g.values())
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect();
            let mut tau = RefinableSequence::new(mix, f.level(), f.base_step(), f.left_index(), f.topology())?;
            let mut product = 1.0;
            for _ in 0..levels {
                if !same_strict_sign(tau.values()) {
                    return Err(SubdivError::NotApplicable(format!(
                        "path leaves the strictly signed region at t = {t}"
                    )));
                }
                product *= jacobian_norm(tau.values(), eps)?;
                tau = refine_s_eps_diff(&tau, eps, DiffScale::Half, policy)?;
            }
            Ok(product)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(products.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(v: Vec<f64>) -> RefinableSequence {
        RefinableSequence::open(v, 1.0).unwrap()
    }

    #[test]
    fn constant_data_gives_five_eighths() {
        let f = open(vec![0.7; 40]);
        for levels in 1..=3 {
            let v = stability_path_diagnostic(&f, &f, Default::default(), levels, 5).unwrap();
            assert!((v - 0.625f64.powi(levels as i32)).abs() < 1e-6);
        }
    }

    #[test]
    fn nearby_positive_pair_contracts() {
        let f = open((0..12).map(|i| 1.0 + 0.02 * (i as f64).sin()).collect());
        let g = open((0..12).map(|i| 1.0 - 0.03 * (i as f64 * 0.7).cos()).collect());
        let v = stability_path_diagnostic(&f, &g, Default::default(), 1, DEFAULT_T_GRID).unwrap();
        assert!(v < 1.0);
    }

    #[test]
    fn sign_change_is_rejected() {
        let f = open(vec![1.0; 6]);
        let g = open(vec![1.0, 1.0, -1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            stability_path_diagnostic(&f, &g, Default::default(), 1, 5),
            Err(SubdivError::NotApplicable(_))
        ));
    }
}
