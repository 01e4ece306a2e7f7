//! Statistical analysis: exact oracles, distances, autocorrelation,
//! time-to-solution measurement, and scaling fits.

pub mod acf;
pub mod oracle;
pub mod scaling;
pub mod stats;
pub mod tts;

pub use acf::{acf_from_trace, autocorrelation, fit_decay_rate, AcfEstimate};
pub use oracle::{
    clamped_distribution, exact_distribution, ground_states, min_energy, ExactDistribution,
    MAX_ORACLE_SPINS,
};
pub use scaling::{fit_scaling, FitError, FitForm, ScalingFit, ScalingReport, SizeSamples};
pub use stats::{
    exponential_ks, mean, median, pearson_r, percentile, shannon_entropy, variance,
};
pub use tts::{
    async_time_to_target, sync_time_to_target, trace_time_to_target, FirstHit, ENERGY_HIT_TOL,
};

use crate::model::ModelError;
use crate::sampler::{EventTrace, SamplerError, SnapshotTrace};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("exhaustive enumeration limited to {max} spins, model has {n}")]
    TooManySpins { n: usize, max: usize },
    #[error("distributions have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("distribution sums to {0}, expected 1 within 1e-6")]
    NotNormalized(f64),
    #[error("input is empty or too short")]
    EmptyInput,
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("rate must be positive and finite, got {0}")]
    BadRate(f64),
    #[error("too few usable points ({got}), need at least {need}")]
    TooFewPoints { got: usize, need: usize },
    #[error("clamp list has {got} entries, model has {expected}")]
    ClampLength { expected: usize, got: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

/// Total variation distance `(1/2) sum |p_i - q_i|` between two finite
/// distributions over the same index set. Both inputs must sum to 1 within
/// 1e-6.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64, AnalysisError> {
    if p.len() != q.len() {
        return Err(AnalysisError::LengthMismatch(p.len(), q.len()));
    }
    for dist in [p, q] {
        let sum: f64 = dist.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(AnalysisError::NotNormalized(sum));
        }
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0)
}

/// Time-weighted empirical distribution over state indices visited by an
/// event trace. A zero-duration trace yields a point mass on the initial
/// state.
pub fn occupancy_distribution(trace: &EventTrace) -> Result<Vec<f64>, AnalysisError> {
    let n = trace.n();
    if n > MAX_ORACLE_SPINS {
        return Err(AnalysisError::TooManySpins {
            n,
            max: MAX_ORACLE_SPINS,
        });
    }
    let mut acc = vec![0.0f64; 1 << n];
    let mut idx = trace.initial().index();
    let mut t_prev = 0.0f64;
    for e in trace.events() {
        acc[idx] += e.time - t_prev;
        t_prev = e.time;
        let bit = 1usize << e.neuron;
        if e.value == trace.domain().up() {
            idx |= bit;
        } else {
            idx &= !bit;
        }
    }
    let total = trace.final_time();
    acc[idx] += total - t_prev;
    if total > 0.0 {
        for a in &mut acc {
            *a /= total;
        }
    } else {
        acc[idx] = 1.0;
    }
    Ok(acc)
}

/// Count-weighted empirical distribution over state indices in a snapshot
/// trace.
pub fn snapshot_distribution(snap: &SnapshotTrace) -> Result<Vec<f64>, AnalysisError> {
    let n = snap.n();
    if n > MAX_ORACLE_SPINS {
        return Err(AnalysisError::TooManySpins {
            n,
            max: MAX_ORACLE_SPINS,
        });
    }
    if snap.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let mut acc = vec![0.0f64; 1 << n];
    for k in 0..snap.len() {
        acc[snap.state(k).index()] += 1.0;
    }
    let total = snap.len() as f64;
    for a in &mut acc {
        *a /= total;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SpinDomain, SpinState};
    use crate::sampler::{Event, TraceMeta};

    #[test]
    fn tv_distance_known_value() {
        let uniform = vec![0.5, 0.5];
        let skewed = vec![0.75, 0.25];
        assert!((tv_distance(&uniform, &skewed).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(tv_distance(&uniform, &uniform).unwrap(), 0.0);
    }

    #[test]
    fn tv_distance_rejects_bad_inputs() {
        assert!(matches!(
            tv_distance(&[1.0], &[0.5, 0.5]),
            Err(AnalysisError::LengthMismatch(1, 2))
        ));
        assert!(matches!(
            tv_distance(&[0.9, 0.2], &[0.5, 0.5]),
            Err(AnalysisError::NotNormalized(_))
        ));
    }

    #[test]
    fn occupancy_weights_time_not_events() {
        let initial = SpinState::new(SpinDomain::ZeroOne, vec![0]).unwrap();
        // Up from t=1 to t=4 in a trace of duration 4: occupancy 1/4, 3/4.
        let trace = EventTrace::new(
            TraceMeta {
                lambda0: 1.0,
                seed: 0,
                tau_circ: 0.0,
            },
            initial,
            vec![Event {
                time: 1.0,
                neuron: 0,
                value: 1,
            }],
            4.0,
        );
        let d = occupancy_distribution(&trace).unwrap();
        assert!((d[0] - 0.25).abs() < 1e-15);
        assert!((d[1] - 0.75).abs() < 1e-15);
    }
}
