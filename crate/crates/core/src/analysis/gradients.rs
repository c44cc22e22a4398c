//! Finite-difference gradients of the divided-difference rules near the
//! all-ones sequence, where the scheme is smooth.

use std::collections::BTreeMap;

use crate::error::{Result, SubdivError};
use crate::nonlinear::h_unchecked;

use super::{AnalysisReport, GradientEntry};

/// Central-difference Jacobian. Row `i` holds the partial derivatives of
/// output `i`.
pub fn fd_jacobian<F>(map: F, point: &[f64], step: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(SubdivError::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let eval = |x: &[f64]| {
        let y = map(x);
        if y.iter().all(|v| v.is_finite()) {
            Ok(y)
        } else {
            Err(SubdivError::EvaluationFailure(x.to_vec()))
        }
    };
    let m = eval(point)?.len();
    let mut jac = vec![vec![0.0; point.len()]; m];
    let mut x = point.to_vec();
    for j in 0..point.len() {
        x[j] = point[j] + step;
        let plus = eval(&x)?;
        x[j] = point[j] - step;
        let minus = eval(&x)?;
        x[j] = point[j];
        if plus.len() != m || minus.len() != m {
            return Err(SubdivError::EvaluationFailure(x.clone()));
        }
        for i in 0..m {
            jac[i][j] = (plus[i] - minus[i]) / (2.0 * step);
        }
    }
    Ok(jac)
}

/// Gradient of a scalar map.
pub fn fd_gradient<F>(map: F, point: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    Ok(fd_jacobian(|x| vec![map(x)], point, step)?.remove(0))
}

/// Rule `j` of the divided-difference scheme on positive data:
/// `Psi_j(a, b, c) = b (1 + (-1)^j H(a/b, c/b))`.
pub fn psi(j: usize, a: f64, b: f64, c: f64) -> f64 {
    let h = h_unchecked(a / b, c / b);
    if j.is_multiple_of(2) {
        b * (1.0 + h)
    } else {
        b * (1.0 - h)
    }
}

/// All five double-step rules at once, `d = (d_{i-2}, ..., d_{i+2})`.
fn psi2_all(d: &[f64; 5]) -> [f64; 5] {
    let a = psi(1, d[0], d[1], d[2]);
    let b = psi(0, d[1], d[2], d[3]);
    let c = psi(1, d[1], d[2], d[3]);
    let e = psi(0, d[2], d[3], d[4]);
    let f = psi(1, d[2], d[3], d[4]);
    [
        psi(0, a, b, c),
        psi(1, a, b, c),
        psi(0, b, c, e),
        psi(1, b, c, e),
        psi(0, c, e, f),
    ]
}

/// Output `4i + j` of two divided-difference steps, `j = 0..=4`.
pub fn psi2(j: usize, d: &[f64; 5]) -> f64 {
    psi2_all(d)[j]
}

pub fn g1(x: f64, y: f64) -> f64 {
    psi(1, x, 1.0, y) / psi(0, x, 1.0, y)
}

pub fn g2(x: f64, y: f64, z: f64) -> f64 {
    psi(0, 1.0, y, y * z) / psi(1, x, 1.0, y)
}

fn g2_all(p: &[f64; 4]) -> [f64; 4] {
    let [x, y, z, w] = *p;
    let v = psi2_all(&[x * y, y, 1.0, z, z * w]);
    [v[1] / v[0], v[2] / v[1], v[3] / v[2], v[4] / v[3]]
}

/// Ratio of consecutive double-step outputs, `j = 0..=3`.
pub fn g2j(j: usize, p: &[f64; 4]) -> f64 {
    g2_all(p)[j]
}

const FD_STEP: f64 = 1e-5;

fn entry(point: Vec<f64>, gradient: Vec<f64>) -> GradientEntry {
    let norm = gradient.iter().map(|g| g.abs()).sum();
    GradientEntry {
        point,
        gradient,
        norm,
    }
}

/// Gradients and 1-norms of `Psi_0`, `Psi_1`, `G_1`, `G_2` and the four
/// double-step ratios, all at the all-ones point.
pub fn gradient_tables() -> Result<AnalysisReport> {
    let mut table = BTreeMap::new();
    let ones = |n| vec![1.0; n];
    for j in 0..2 {
        let g = fd_gradient(|x| psi(j, x[0], x[1], x[2]), &ones(3), FD_STEP)?;
        table.insert(format!("psi{j}"), entry(ones(3), g));
    }
    let g = fd_gradient(|x| g1(x[0], x[1]), &ones(2), FD_STEP)?;
    table.insert("g1".into(), entry(ones(2), g));
    let g = fd_gradient(|x| g2(x[0], x[1], x[2]), &ones(3), FD_STEP)?;
    table.insert("g2".into(), entry(ones(3), g));
    for j in 0..4 {
        let g = fd_gradient(|x| g2j(j, &[x[0], x[1], x[2], x[3]]), &ones(4), FD_STEP)?;
        table.insert(format!("g2_{j}"), entry(ones(4), g));
    }
    Ok(AnalysisReport {
        gradient_norm_table: table,
        notes: vec![format!("central differences, step {FD_STEP}")],
        ..Default::default()
    })
}

/// Largest of `|grad G2_j|_1` and `|grad (1/G2_j)|_1` over `j` at `p`.
fn worst_norm(p: &[f64; 4]) -> f64 {
    let mut grads = [[0.0; 4]; 4];
    let mut x = *p;
    for k in 0..4 {
        x[k] = p[k] + FD_STEP;
        let plus = g2_all(&x);
        x[k] = p[k] - FD_STEP;
        let minus = g2_all(&x);
        x[k] = p[k];
        for j in 0..4 {
            grads[j][k] = (plus[j] - minus[j]) / (2.0 * FD_STEP);
        }
    }
    let centre = g2_all(p);
    (0..4)
        .map(|j| {
            let n: f64 = grads[j].iter().map(|g| g.abs()).sum();
            // grad(1/G) = -grad(G) / G^2
            n.max(n / (centre[j] * centre[j]))
        })
        .fold(0.0, f64::max)
}

/// Whether the gradient conditions hold on the boundary of the box
/// `|x - 1|_inf <= delta`, sampled with `resolution` cells per edge.
pub fn delta_bar_holds(delta: f64, resolution: usize) -> bool {
    let r = resolution as i64;
    let coord = |i: i64| 1.0 - delta + 2.0 * delta * i as f64 / r as f64;
    let on_face = |i: i64| i == 0 || i == r;
    // corners first: they fail first in practice
    let corners = (0..16).map(|m| {
        [0, 1, 2, 3].map(|k| if m >> k & 1 == 1 { r } else { 0 })
    });
    let boundary = (0..=r).flat_map(move |a| {
        (0..=r).flat_map(move |b| {
            (0..=r).flat_map(move |c| {
                (0..=r)
                    .filter(move |&d| on_face(a) || on_face(b) || on_face(c) || on_face(d))
                    .map(move |d| [a, b, c, d])
            })
        })
    });
    corners
        .chain(boundary)
        .all(|idx| worst_norm(&idx.map(coord)) < 1.0)
}

/// Bisection for the largest `delta <= delta_max` at which
/// [`delta_bar_holds`]; stops once the bracket is below `1e-4`.
pub fn delta_bar_scan(resolution: usize, delta_max: f64) -> Result<f64> {
    if resolution < 8 || !(delta_max > 0.0 && delta_max < 1.0) {
        return Err(SubdivError::InvalidParameter(format!(
            "need resolution >= 8 and delta_max in (0, 1), got {resolution}, {delta_max}"
        )));
    }
    if delta_bar_holds(delta_max, resolution) {
        return Ok(delta_max);
    }
    let (mut lo, mut hi) = (0.0, delta_max);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if delta_bar_holds(mid, resolution) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    log::info!("delta bar at resolution {resolution}: {lo}");
    Ok(lo)
}
