use crate::analysis::smoothness_estimate;
use crate::error::{Result, SubdivError};
use crate::nonlinear::EpsilonParameter;
use crate::scheme::SchemeDescriptor;
use crate::sequence::RefinableSequence;

use super::ExperimentRecord;

/// Nondecreasing data with flat stretches and jumps.
pub fn monotone_data1() -> Vec<f64> {
    vec![
        10.0, 10.0, 10.0, 10.0, 10.0, 10.5, 10.5, 10.5, 10.5, 15.0, 50.0, 50.0, 50.0, 50.0, 60.0,
        85.0, 85.0, 85.0, 85.0,
    ]
}

/// The same profile with the flat stretches tilted slightly upwards.
pub fn monotone_data2() -> Vec<f64> {
    vec![
        10.0, 10.1, 10.2, 10.3, 10.4, 10.5, 10.6, 10.7, 10.8, 15.0, 50.0, 50.1, 50.2, 50.3, 60.0,
        85.0, 85.1, 85.2, 85.3,
    ]
}

/// Difference order used for the smoothness estimate. Must exceed the
/// exponent being measured, which reaches 2 on strictly monotone data.
pub const SMOOTHNESS_ORDER: usize = 3;

/// Refine `data` with `S_eps` for `levels` steps, recording whether each
/// level is nondecreasing and strictly increasing, plus the smoothness estimate.
pub fn monotone_experiment(
    data: &RefinableSequence,
    eps: EpsilonParameter,
    levels: u32,
) -> Result<ExperimentRecord> {
    if data.is_periodic() {
        return Err(SubdivError::InvalidParameter("monotone data must be open".into()));
    }
    if data.values().iter().any(|v| !v.is_finite()) {
        return Err(SubdivError::InvalidSequence("non-finite sample".into()));
    }
    let scheme = SchemeDescriptor::s_eps(eps);
    let mut nondecreasing = Vec::with_capacity(levels as usize + 1);
    let mut strict = Vec::with_capacity(levels as usize + 1);
    let mut f = data.clone();
    for k in 0..=levels {
        if k > 0 {
            f = scheme.refine_once(&f)?.0;
        }
        nondecreasing.push(f.values().windows(2).all(|w| w[1] >= w[0]));
        strict.push(f.values().windows(2).all(|w| w[1] > w[0]));
    }
    let report = smoothness_estimate(&scheme, data, SMOOTHNESS_ORDER, levels)?;

    let mut record = ExperimentRecord::new("monotone", 0)
        .param("data", data.values())
        .param("eps", eps.value())
        .param("levels", levels)
        .param("difference_order", SMOOTHNESS_ORDER);
    record.output("nondecreasing", &nondecreasing);
    record.output("strictly_increasing", &strict);
    record.output("alpha", report.estimated_alpha);
    record.output("alpha_trace", &report.alpha_trace);
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flag(record: &ExperimentRecord, key: &str) -> Vec<bool> {
        serde_json::from_value(record.outputs[key].clone()).unwrap()
    }

    #[test]
    fn constant_plateau_stays_constant() {
        let s = RefinableSequence::open(vec![5.0; 6], 1.0).unwrap();
        let scheme = SchemeDescriptor::s_eps(Default::default());
        let mut f = s.clone();
        for _ in 0..4 {
            f = scheme.refine_once(&f).unwrap().0;
            assert!(f.values().iter().all(|&v| v == 5.0));
        }
        let r = monotone_experiment(&s, Default::default(), 3).unwrap();
        assert!(flag(&r, "nondecreasing").iter().all(|&b| b));
    }

    #[test]
    fn reference_data_levels() {
        let d1 = RefinableSequence::open(monotone_data1(), 1.0).unwrap();
        let r = monotone_experiment(&d1, Default::default(), 6).unwrap();
        assert!(flag(&r, "nondecreasing").iter().all(|&b| b));
        let d2 = RefinableSequence::open(monotone_data2(), 1.0).unwrap();
        let r = monotone_experiment(&d2, Default::default(), 6).unwrap();
        assert!(flag(&r, "strictly_increasing").iter().all(|&b| b));
    }
}
