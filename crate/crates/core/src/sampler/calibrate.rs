//! Response-curve calibration.
//!
//! A physical neuron's activation is `p_up(u) = logistic(a (u - b))` rather
//! than the ideal `logistic(u)`. Sweeping the drive `u` over a grid and
//! measuring the up-state occupancy gives points on the curve; a linear
//! regression in logit space recovers `(a, b)`, and the correction rescales
//! the drive so the composed response is ideal again.

use crate::math::logit;
use crate::model::{EnergySign, IsingModel, SpinDomain};
use crate::sampler::engine::{run_async, AsyncConfig, InitPolicy, SamplerError, StopRule};
use crate::sampler::params::NeuronParams;
use crate::seed::derive_u64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CalibrationError {
    #[error("need at least two distinct drive points, got {0}")]
    TooFewPoints(usize),
    #[error("fitted slope must be positive, got {0}")]
    NonPositiveSlope(f64),
    #[error("occupancy {p} at drive {u} is not a probability")]
    BadOccupancy { u: f64, p: f64 },
}

/// Result of a logit-space linear fit to sweep data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmoidFit {
    pub slope: f64,
    pub offset: f64,
}

/// Measures the activation curve of one neuron by simulation: for each drive
/// `u` the neuron is placed in a one-spin model whose ideal logit drive
/// equals `u`, run for `events_per_point` flips, and its time-weighted
/// up-state occupancy recorded.
pub fn sweep_activation(
    neuron: &NeuronParams,
    drives: &[f64],
    events_per_point: u64,
    seed: u64,
) -> Result<Vec<(f64, f64)>, SamplerError> {
    let mut out = Vec::with_capacity(drives.len());
    for (k, &u) in drives.iter().enumerate() {
        // {-1,+1} spin with bias -u/2 under the as-written sign has ideal
        // drive exactly u.
        let model = IsingModel::new(
            SpinDomain::PlusMinus,
            EnergySign::AsWritten,
            vec![-u / 2.0],
            vec![],
        )?;
        let cfg = AsyncConfig {
            stop: StopRule::MaxEvents(events_per_point),
            seed: derive_u64(seed, "activation-sweep", k as u64),
            tau_circ: 0.0,
            init: InitPolicy::AllDown,
        };
        let trace = run_async(&model, &[*neuron], &cfg)?;
        let mut up_time = 0.0f64;
        let mut last_t = 0.0f64;
        let mut up = trace.initial().is_up(0);
        for e in trace.events() {
            if up {
                up_time += e.time - last_t;
            }
            last_t = e.time;
            up = e.value == SpinDomain::PlusMinus.up();
        }
        if up {
            up_time += trace.final_time() - last_t;
        }
        let occupancy = if trace.final_time() > 0.0 {
            up_time / trace.final_time()
        } else {
            0.0
        };
        out.push((u, occupancy));
    }
    Ok(out)
}

/// Fits `(slope, offset)` from `(drive, occupancy)` points by least squares
/// on `logit(p) = slope * u - slope * offset`. Occupancies are clipped away
/// from 0 and 1 before the transform.
pub fn fit_sigmoid(points: &[(f64, f64)]) -> Result<SigmoidFit, CalibrationError> {
    const CLIP: f64 = 1e-6;
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(u, p) in points {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() || !u.is_finite() {
            return Err(CalibrationError::BadOccupancy { u, p });
        }
        xs.push(u);
        ys.push(logit(p.clamp(CLIP, 1.0 - CLIP)));
    }
    let n = xs.len() as f64;
    let mut distinct = xs.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CalibrationError::TooFewPoints(distinct.len()));
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    if !(slope > 0.0) || !slope.is_finite() {
        return Err(CalibrationError::NonPositiveSlope(slope));
    }
    let intercept = my - slope * mx;
    Ok(SigmoidFit {
        slope,
        offset: -intercept / slope,
    })
}

/// Folds an input-side correction `u -> u / fit.slope + fit.offset` into a
/// neuron's parameters. If the fit matches the true response exactly, the
/// corrected neuron behaves ideally.
pub fn corrected_params(actual: &NeuronParams, fit: &SigmoidFit) -> NeuronParams {
    NeuronParams {
        slope: actual.slope / fit.slope,
        offset: (actual.offset - fit.offset) * fit.slope,
        ..*actual
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::logistic;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fit_recovers_exact_sigmoid_points() {
        let truth = SigmoidFit {
            slope: 1.7,
            offset: -0.4,
        };
        let points: Vec<(f64, f64)> = (-6..=6)
            .map(|k| {
                let u = k as f64 * 0.5;
                (u, logistic(truth.slope * (u - truth.offset)))
            })
            .collect();
        let fit = fit_sigmoid(&points).unwrap();
        assert_abs_diff_eq!(fit.slope, truth.slope, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.offset, truth.offset, epsilon = 1e-9);
    }

    #[test]
    fn correction_composes_to_identity() {
        let actual = NeuronParams {
            lambda0: 1.0,
            slope: 0.8,
            offset: 0.3,
            ..NeuronParams::ideal(1.0)
        };
        let fit = SigmoidFit {
            slope: 0.8,
            offset: 0.3,
        };
        let corrected = corrected_params(&actual, &fit);
        for &u in &[-2.0, -0.5, 0.0, 1.0, 3.0] {
            assert_abs_diff_eq!(corrected.prob_up(u), logistic(u), epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_sweeps_are_rejected() {
        assert_eq!(
            fit_sigmoid(&[(0.0, 0.5), (0.0, 0.6)]),
            Err(CalibrationError::TooFewPoints(1))
        );
        assert!(matches!(
            fit_sigmoid(&[(0.0, 0.9), (1.0, 0.1), (2.0, 0.05)]),
            Err(CalibrationError::NonPositiveSlope(_))
        ));
        assert!(matches!(
            fit_sigmoid(&[(0.0, 1.5), (1.0, 0.5)]),
            Err(CalibrationError::BadOccupancy { .. })
        ));
    }
}
