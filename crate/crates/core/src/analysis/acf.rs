//! Autocorrelation estimation and exponential decay fits.

use super::AnalysisError;
use crate::sampler::EventTrace;

/// Normalized autocorrelation values on an evenly spaced lag grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfEstimate {
    /// Lag spacing in seconds.
    pub dt: f64,
    /// `values[k]` is the autocorrelation at lag `k * dt`; `values[0] == 1`.
    pub values: Vec<f64>,
}

impl AcfEstimate {
    pub fn lag(&self, k: usize) -> f64 {
        self.dt * k as f64
    }
}

fn acf_guards(len: usize, dt: f64, max_lag: usize) -> Result<(), AnalysisError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(AnalysisError::BadRate(dt));
    }
    if max_lag == 0 || len < 2 || max_lag >= len {
        return Err(AnalysisError::TooFewPoints {
            got: len,
            need: max_lag + 1,
        });
    }
    Ok(())
}

/// Unbiased lagged autocovariance estimates normalized by the variance, for
/// lags `0..=max_lag`. Values are clipped to `[-1, 1]`.
pub fn autocorrelation(xs: &[f64], dt: f64, max_lag: usize) -> Result<AcfEstimate, AnalysisError> {
    acf_guards(xs.len(), dt, max_lag)?;
    let n = xs.len();
    let m = xs.iter().sum::<f64>() / n as f64;
    let c0 = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(1.0);
    for k in 1..=max_lag {
        let c: f64 = (0..n - k).map(|t| (xs[t] - m) * (xs[t + k] - m)).sum::<f64>()
            / (n - k) as f64;
        values.push((c / c0).clamp(-1.0, 1.0));
    }
    Ok(AcfEstimate { dt, values })
}

/// Autocorrelation of small-integer series (spin values), using exact
/// integer lag sums so long traces stay cheap and stable.
fn autocorrelation_ints(xs: &[i8], dt: f64, max_lag: usize) -> Result<AcfEstimate, AnalysisError> {
    acf_guards(xs.len(), dt, max_lag)?;
    let n = xs.len();
    // Prefix sums make the cross terms of (x - m)(y - m) exact.
    let mut prefix = vec![0i64; n + 1];
    for (i, &x) in xs.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x as i64;
    }
    let total = prefix[n];
    let m = total as f64 / n as f64;
    let sq: i64 = xs.iter().map(|&x| (x as i64) * (x as i64)).sum();
    let c0 = sq as f64 / n as f64 - m * m;
    if c0 == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(1.0);
    for k in 1..=max_lag {
        let pairs = n - k;
        let mut s: i64 = 0;
        for t in 0..pairs {
            s += (xs[t] as i64) * (xs[t + k] as i64);
        }
        let sum_head = prefix[pairs] as f64;
        let sum_tail = (prefix[n] - prefix[k]) as f64;
        let c = (s as f64 - m * (sum_head + sum_tail)) / pairs as f64 + m * m;
        values.push((c / c0).clamp(-1.0, 1.0));
    }
    Ok(AcfEstimate { dt, values })
}

/// Resamples one neuron of an event trace onto a uniform clock and estimates
/// its autocorrelation. The sampling rate should comfortably exceed the
/// neuron's flip rate (ten times the clock rate is typical) so the
/// continuous-time decay is resolved.
pub fn acf_from_trace(
    trace: &EventTrace,
    neuron: usize,
    sample_rate: f64,
    max_lag: usize,
) -> Result<AcfEstimate, AnalysisError> {
    if !(sample_rate > 0.0 && sample_rate.is_finite()) {
        return Err(AnalysisError::BadRate(sample_rate));
    }
    if neuron >= trace.n() {
        return Err(AnalysisError::Model(
            crate::model::ModelError::IndexOutOfRange {
                index: neuron,
                n: trace.n(),
            },
        ));
    }
    let period = 1.0 / sample_rate;
    let ticks = (trace.final_time() / period + 1e-9).floor() as usize + 1;
    let mut series = Vec::with_capacity(ticks);
    let mut value = trace.initial().value(neuron);
    let mut events = trace
        .events()
        .iter()
        .filter(|e| e.neuron as usize == neuron)
        .peekable();
    for k in 0..ticks {
        let t = k as f64 * period;
        while let Some(e) = events.peek() {
            if e.time <= t {
                value = e.value;
                events.next();
            } else {
                break;
            }
        }
        series.push(value);
    }
    autocorrelation_ints(&series, period, max_lag)
}

/// Fits `r(t) = e^{-lambda t}` to the leading positive stretch of an
/// autocorrelation estimate by least squares of `ln r` through the origin.
/// Lags after the first value at or below the noise floor (0.02) are
/// ignored. Returns the decay rate `lambda` in 1/seconds.
pub fn fit_decay_rate(acf: &AcfEstimate) -> Result<f64, AnalysisError> {
    const FLOOR: f64 = 0.02;
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    let mut used = 0usize;
    for (k, &r) in acf.values.iter().enumerate().skip(1) {
        if r <= FLOOR {
            break;
        }
        let t = acf.lag(k);
        num += t * r.ln();
        den += t * t;
        used += 1;
    }
    if used < 2 {
        return Err(AnalysisError::TooFewPoints { got: used, need: 2 });
    }
    Ok(-num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_exponential_series_fits_its_rate() {
        let lambda = 2.5e8;
        let dt = 1.0 / 3e9;
        let values: Vec<f64> = (0..200).map(|k| (-lambda * dt * k as f64).exp()).collect();
        let acf = AcfEstimate { dt, values };
        let fit = fit_decay_rate(&acf).unwrap();
        assert_abs_diff_eq!(fit, lambda, epsilon = lambda * 1e-10);
    }

    #[test]
    fn lag_zero_is_one_and_integer_path_matches_float_path() {
        let xs: Vec<i8> = vec![1, -1, -1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1];
        let fs: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
        let a = autocorrelation_ints(&xs, 1.0, 5).unwrap();
        let b = autocorrelation(&fs, 1.0, 5).unwrap();
        assert_eq!(a.values[0], 1.0);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_series_is_rejected() {
        assert!(matches!(
            autocorrelation(&[1.0; 32], 1.0, 4),
            Err(AnalysisError::ZeroVariance)
        ));
    }

    #[test]
    fn resampling_reflects_the_underlying_step_signal() {
        use crate::model::{SpinDomain, SpinState};
        use crate::sampler::{Event, TraceMeta};
        let initial = SpinState::new(SpinDomain::PlusMinus, vec![-1]).unwrap();
        let trace = EventTrace::new(
            TraceMeta {
                lambda0: 1.0,
                seed: 0,
                tau_circ: 0.0,
            },
            initial,
            vec![
                Event { time: 0.3, neuron: 0, value: 1 },
                Event { time: 1.2, neuron: 0, value: -1 },
            ],
            5.0,
        );
        // 1 Hz resample of a signal that is +1 on (0.3, 1.2): only t=1 up.
        let acf = acf_from_trace(&trace, 0, 1.0, 2).unwrap();
        assert_eq!(acf.values.len(), 3);
        assert_eq!(acf.values[0], 1.0);
    }
}
