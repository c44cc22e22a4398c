use crate::error::{Result, SubdivError};
use crate::scheme::SchemeDescriptor;
use crate::sequence::{nth_difference, sup_norm, RefinableSequence};

use super::AnalysisReport;

/// Hoelder exponent estimate `log2(|D^n f^k| / |D^n f^(k+1)|)` from
/// `k_max` refinement levels. `n` must exceed the true exponent; the trace
/// shows whether the estimate has settled.
pub fn smoothness_estimate(
    scheme: &SchemeDescriptor,
    f0: &RefinableSequence,
    n: usize,
    k_max: u32,
) -> Result<AnalysisReport> {
    if n < 2 || k_max == 0 {
        return Err(SubdivError::InvalidParameter(format!(
            "need n >= 2 and k_max >= 1, got n = {n}, k_max = {k_max}"
        )));
    }
    let exhausted = |level| move |e: SubdivError| match e {
        SubdivError::InsufficientData { .. } => SubdivError::Exhausted { level },
        other => other,
    };
    let mut f = f0.clone();
    let mut norms = vec![sup_norm(&nth_difference(&f, n).map_err(exhausted(f.level()))?)];
    for _ in 0..k_max {
        f = scheme.refine_once(&f).map_err(exhausted(f.level()))?.0;
        norms.push(sup_norm(&nth_difference(&f, n).map_err(exhausted(f.level()))?));
    }
    let alpha_trace: Vec<f64> = norms.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let mut notes = vec![format!("n = {n}, levels = {k_max}")];
    if norms.last() == Some(&0.0) {
        notes.push("n-th differences vanish: data lies in a reproduced space".into());
    }
    Ok(AnalysisReport {
        estimated_alpha: alpha_trace.last().copied(),
        alpha_trace,
        notes,
        ..Default::default()
    })
}
