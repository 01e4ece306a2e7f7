//! Per-neuron hardware parameters.

use crate::math::logistic;
use crate::seed::derive_rng;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("neuron {index}: rate must be positive and finite, got {value}")]
    BadRate { index: usize, value: f64 },
    #[error("neuron {index}: sigmoid slope must be positive and finite, got {value}")]
    BadSlope { index: usize, value: f64 },
    #[error("neuron {index}: sigmoid offset must be finite, got {value}")]
    BadOffset { index: usize, value: f64 },
    #[error("expected {expected} parameter entries, got {got}")]
    Length { expected: usize, got: usize },
}

/// Which value a neuron is pinned to, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clamp {
    Free,
    /// Pinned to the domain's low value (0 or -1).
    Down,
    /// Pinned to the domain's high value.
    Up,
}

/// Physical knobs of one neuron: its Poisson clock rate and the shape of its
/// activation response `p_up(u) = logistic(slope * (u - offset))`, where `u`
/// is the ideal logit drive from the synapse array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronParams {
    pub lambda0: f64,
    pub slope: f64,
    pub offset: f64,
    pub clamp: Clamp,
    /// A dead neuron never fires; it holds its initial value forever.
    pub dead: bool,
}

impl NeuronParams {
    /// An ideal neuron: unit slope, zero offset, free, alive.
    pub fn ideal(lambda0: f64) -> Self {
        NeuronParams {
            lambda0,
            slope: 1.0,
            offset: 0.0,
            clamp: Clamp::Free,
            dead: false,
        }
    }

    pub fn clamped(lambda0: f64, clamp: Clamp) -> Self {
        NeuronParams {
            clamp,
            ..NeuronParams::ideal(lambda0)
        }
    }

    /// Probability of the up state given ideal logit drive `u`.
    pub fn prob_up(&self, u: f64) -> f64 {
        logistic(self.slope * (u - self.offset))
    }

    pub fn validate(&self, index: usize) -> Result<(), ParamError> {
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(ParamError::BadRate {
                index,
                value: self.lambda0,
            });
        }
        if !(self.slope > 0.0 && self.slope.is_finite()) {
            return Err(ParamError::BadSlope {
                index,
                value: self.slope,
            });
        }
        if !self.offset.is_finite() {
            return Err(ParamError::BadOffset {
                index,
                value: self.offset,
            });
        }
        Ok(())
    }
}

/// Homogeneous ideal parameter set for `n` neurons.
pub fn ideal_params(n: usize, lambda0: f64) -> Vec<NeuronParams> {
    vec![NeuronParams::ideal(lambda0); n]
}

/// Spread of device variation across an array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationSpec {
    /// Standard deviation of the sigmoid slope around 1.
    pub slope_sd: f64,
    /// Standard deviation of the sigmoid offset around 0.
    pub offset_sd: f64,
    /// Probability that a neuron is dead.
    pub dead_prob: f64,
}

/// Draws a parameter set with device-to-device variation. Slopes are
/// resampled until positive (truncated normal around 1).
pub fn make_varied_params(
    n: usize,
    lambda0: f64,
    spec: &VariationSpec,
    seed: u64,
) -> Vec<NeuronParams> {
    let mut rng = derive_rng(seed, "varied-params", 0);
    let slope_dist = Normal::new(1.0, spec.slope_sd.max(0.0)).expect("finite sd");
    let offset_dist = Normal::new(0.0, spec.offset_sd.max(0.0)).expect("finite sd");
    (0..n)
        .map(|_| {
            let mut slope = slope_dist.sample(&mut rng);
            while slope <= 0.05 {
                slope = slope_dist.sample(&mut rng);
            }
            let offset = offset_dist.sample(&mut rng);
            let dead = rng.random::<f64>() < spec.dead_prob;
            NeuronParams {
                lambda0,
                slope,
                offset,
                clamp: Clamp::Free,
                dead,
            }
        })
        .collect()
}

pub(crate) fn validate_params(n: usize, params: &[NeuronParams]) -> Result<(), ParamError> {
    if params.len() != n {
        return Err(ParamError::Length {
            expected: n,
            got: params.len(),
        });
    }
    for (i, p) in params.iter().enumerate() {
        p.validate(i)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_params_reproduce_logistic() {
        let p = NeuronParams::ideal(1.0);
        assert!((p.prob_up(0.0) - 0.5).abs() < 1e-15);
        assert!((p.prob_up(2.0) - logistic(2.0)).abs() < 1e-15);
    }

    #[test]
    fn varied_params_are_reproducible_and_positive() {
        let spec = VariationSpec {
            slope_sd: 0.2,
            offset_sd: 0.3,
            dead_prob: 0.1,
        };
        let a = make_varied_params(64, 1.5e8, &spec, 3);
        let b = make_varied_params(64, 1.5e8, &spec, 3);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.slope > 0.0));
        assert!(a.iter().any(|p| p.dead));
        assert!(a.iter().any(|p| !p.dead));
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut p = NeuronParams::ideal(0.0);
        assert!(p.validate(0).is_err());
        p.lambda0 = 1.0;
        p.slope = -1.0;
        assert!(p.validate(0).is_err());
    }
}
