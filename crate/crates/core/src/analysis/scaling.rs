//! Exponential scaling fits for time-to-solution data.
//!
//! Fits `a * exp(b * sqrt(n))` or `(a / n) * exp(b * sqrt(n))` to the mean
//! time to solution per problem size by damped (Levenberg-Marquardt)
//! nonlinear least squares in the original time units, seeded by a
//! log-linear regression. Confidence intervals come from a percentile
//! bootstrap that resamples trials within each size.

use rayon::prelude::*;
use thiserror::Error;

use super::stats::percentile;
use crate::seed::derive_rng;
use rand::Rng;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least two distinct sizes, got {0}")]
    TooFewSizes(usize),
    #[error("fit target must be positive and finite for every size")]
    DegenerateData,
    #[error("nonlinear fit did not converge")]
    NoConvergence,
}

/// Functional form of the scaling law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitForm {
    /// `a * exp(b * sqrt(n))`
    PureExp,
    /// `(a / n) * exp(b * sqrt(n))`
    ExpOverN,
}

impl FitForm {
    pub fn label(self) -> &'static str {
        match self {
            FitForm::PureExp => "a*exp(b*sqrt(n))",
            FitForm::ExpOverN => "(a/n)*exp(b*sqrt(n))",
        }
    }

    /// log of the model value at size `n` for parameters (log a, b).
    fn log_value(self, log_a: f64, b: f64, n: f64) -> f64 {
        let base = log_a + b * n.sqrt();
        match self {
            FitForm::PureExp => base,
            FitForm::ExpOverN => base - n.ln(),
        }
    }
}

/// Fitted parameters; `a` is kept as a log to stay well-scaled when times
/// span many orders of magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub form: FitForm,
    pub log_a: f64,
    pub b: f64,
}

impl ScalingFit {
    pub fn a(&self) -> f64 {
        self.log_a.exp()
    }

    /// Model prediction at size `n`.
    pub fn predict(&self, n: f64) -> f64 {
        self.form.log_value(self.log_a, self.b, n).exp()
    }
}

/// Per-trial times (seconds) observed at one problem size. Trials that
/// never reached the target are recorded as `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeSamples {
    pub size: usize,
    pub tts: Vec<f64>,
}

/// Scaling fit plus bootstrap confidence intervals and the raw samples.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub samples: Vec<SizeSamples>,
    pub fit: ScalingFit,
    /// 95% percentile-bootstrap interval for `a`, widened to contain the
    /// point estimate.
    pub a_ci: (f64, f64),
    /// Same for `b`.
    pub b_ci: (f64, f64),
    pub resamples: usize,
    /// Resamples discarded because their refit failed (e.g. a size whose
    /// resample drew only unsolved trials).
    pub dropped_resamples: usize,
}

impl ScalingReport {
    /// Tabular text form: a `#`-prefixed fit summary followed by one
    /// `size trial tts` row per trial (unsolved trials print `inf`).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# pbit-scaling v1\n");
        out.push_str(&format!("# form {}\n", self.fit.form.label()));
        out.push_str(&format!("# a {:e}\n", self.fit.a()));
        out.push_str(&format!("# b {}\n", self.fit.b));
        out.push_str(&format!("# a_ci {:e} {:e}\n", self.a_ci.0, self.a_ci.1));
        out.push_str(&format!("# b_ci {} {}\n", self.b_ci.0, self.b_ci.1));
        out.push_str(&format!("# resamples {}\n", self.resamples));
        out.push_str(&format!(
            "# dropped_resamples {}\n",
            self.dropped_resamples
        ));
        out.push_str("size trial tts\n");
        for s in &self.samples {
            for (t, v) in s.tts.iter().enumerate() {
                out.push_str(&format!("{} {} {:e}\n", s.size, t, v));
            }
        }
        out
    }
}

/// Mean over the finite entries; `None` when nothing finite remains or the
/// mean is not a usable fit target (zero or negative).
fn finite_mean(values: &[f64]) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for &v in values {
        if v.is_finite() {
            sum += v;
            count += 1;
        }
    }
    if count == 0 {
        return None;
    }
    let m = sum / count as f64;
    if m.is_finite() && m > 0.0 {
        Some(m)
    } else {
        None
    }
}

/// Least-squares fit of the chosen form to `(size, mean time)` points in
/// the original (not log) space.
pub fn fit_points(form: FitForm, sizes: &[f64], means: &[f64]) -> Result<ScalingFit, FitError> {
    assert_eq!(sizes.len(), means.len());
    let mut distinct = sizes.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(FitError::TooFewSizes(distinct.len()));
    }
    if sizes.iter().any(|&n| !n.is_finite() || n <= 0.0)
        || means.iter().any(|&y| !y.is_finite() || y <= 0.0)
    {
        return Err(FitError::DegenerateData);
    }

    // Log-linear seed: regress log(target) on sqrt(n).
    let xs: Vec<f64> = sizes.iter().map(|&n| n.sqrt()).collect();
    let zs: Vec<f64> = sizes
        .iter()
        .zip(means)
        .map(|(&n, &y)| match form {
            FitForm::PureExp => y.ln(),
            FitForm::ExpOverN => y.ln() + n.ln(),
        })
        .collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let mz = zs.iter().sum::<f64>() / zs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxz: f64 = xs.iter().zip(&zs).map(|(x, z)| (x - mx) * (z - mz)).sum();
    if sxx <= 0.0 {
        return Err(FitError::TooFewSizes(1));
    }
    let mut b = sxz / sxx;
    let mut log_a = mz - b * mx;

    let sse = |log_a: f64, b: f64| -> f64 {
        sizes
            .iter()
            .zip(means)
            .map(|(&n, &y)| {
                let r = y - form.log_value(log_a, b, n).exp();
                r * r
            })
            .sum()
    };

    const MAX_ITERS: usize = 10_000;
    const REL_STEP: f64 = 1e-10;
    let mut lambda = 1e-3;
    let mut current = sse(log_a, b);
    if !current.is_finite() {
        return Err(FitError::DegenerateData);
    }

    let converged = |da: f64, db: f64, log_a: f64, b: f64| {
        da.abs() <= REL_STEP * (REL_STEP + log_a.abs()) && db.abs() <= REL_STEP * (REL_STEP + b.abs())
    };

    for _ in 0..MAX_ITERS {
        // Accumulate J^T J and J^T r for the two parameters (log a, b);
        // the Jacobian rows are (m, m * sqrt(n)).
        let mut a11 = 0.0;
        let mut a12 = 0.0;
        let mut a22 = 0.0;
        let mut g1 = 0.0;
        let mut g2 = 0.0;
        for (&n, &y) in sizes.iter().zip(means) {
            let m = form.log_value(log_a, b, n).exp();
            let s = n.sqrt();
            let r = y - m;
            a11 += m * m;
            a12 += m * m * s;
            a22 += m * m * s * s;
            g1 += m * r;
            g2 += m * s * r;
        }
        if !(a11.is_finite() && a22.is_finite() && g1.is_finite() && g2.is_finite()) {
            return Err(FitError::NoConvergence);
        }
        let mut accepted = false;
        let mut last_step = (f64::INFINITY, f64::INFINITY);
        // Inner damping loop: grow lambda until a step helps or vanishes.
        for _ in 0..200 {
            let d11 = a11 * (1.0 + lambda);
            let d22 = a22 * (1.0 + lambda);
            let det = d11 * d22 - a12 * a12;
            if det.abs() < f64::MIN_POSITIVE || !det.is_finite() {
                return Err(FitError::NoConvergence);
            }
            let da = (g1 * d22 - g2 * a12) / det;
            let db = (g2 * d11 - g1 * a12) / det;
            last_step = (da, db);
            let trial = sse(log_a + da, b + db);
            if trial.is_finite() && trial <= current {
                log_a += da;
                b += db;
                current = trial;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
            if lambda > 1e15 {
                break;
            }
        }
        let (da, db) = last_step;
        if converged(da, db, log_a, b) {
            return Ok(ScalingFit { form, log_a, b });
        }
        if !accepted {
            // Damping saturated with a non-tiny proposed step: stuck.
            return Err(FitError::NoConvergence);
        }
    }
    Err(FitError::NoConvergence)
}

/// Point statistic for one size: mean time over solved trials.
fn size_targets(samples: &[SizeSamples]) -> Result<(Vec<f64>, Vec<f64>), FitError> {
    let mut sizes = Vec::with_capacity(samples.len());
    let mut means = Vec::with_capacity(samples.len());
    for s in samples {
        let m = finite_mean(&s.tts).ok_or(FitError::DegenerateData)?;
        sizes.push(s.size as f64);
        means.push(m);
    }
    Ok((sizes, means))
}

/// Fits the scaling law and attaches 95% percentile-bootstrap confidence
/// intervals obtained by resampling trials within each size. Resample
/// refits run in parallel; each draws from its own seed derived from
/// `seed` and the resample index, so results do not depend on thread
/// scheduling. With fewer than two resamples the intervals collapse to the
/// point estimate.
pub fn fit_scaling(
    form: FitForm,
    samples: &[SizeSamples],
    resamples: usize,
    seed: u64,
) -> Result<ScalingReport, FitError> {
    let (sizes, means) = size_targets(samples)?;
    let fit = fit_points(form, &sizes, &means)?;

    if resamples <= 1 {
        return Ok(ScalingReport {
            samples: samples.to_vec(),
            fit,
            a_ci: (fit.a(), fit.a()),
            b_ci: (fit.b, fit.b),
            resamples,
            dropped_resamples: 0,
        });
    }

    let refits: Vec<Option<(f64, f64)>> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = derive_rng(seed, "scaling-bootstrap", r as u64);
            let mut bs_sizes = Vec::with_capacity(samples.len());
            let mut bs_means = Vec::with_capacity(samples.len());
            for s in samples {
                let k = s.tts.len();
                if k == 0 {
                    return None;
                }
                let draw: Vec<f64> = (0..k).map(|_| s.tts[rng.random_range(0..k)]).collect();
                let m = finite_mean(&draw)?;
                bs_sizes.push(s.size as f64);
                bs_means.push(m);
            }
            fit_points(form, &bs_sizes, &bs_means)
                .ok()
                .map(|f| (f.a(), f.b))
        })
        .collect();

    let mut a_vals = Vec::with_capacity(resamples);
    let mut b_vals = Vec::with_capacity(resamples);
    for f in refits.iter().flatten() {
        a_vals.push(f.0);
        b_vals.push(f.1);
    }
    let dropped = resamples - a_vals.len();
    if a_vals.is_empty() {
        return Err(FitError::NoConvergence);
    }
    let ci = |vals: &[f64], point: f64| -> (f64, f64) {
        let lo = percentile(vals, 0.025).expect("nonempty");
        let hi = percentile(vals, 0.975).expect("nonempty");
        (lo.min(point), hi.max(point))
    };
    Ok(ScalingReport {
        samples: samples.to_vec(),
        fit,
        a_ci: ci(&a_vals, fit.a()),
        b_ci: ci(&b_vals, fit.b),
        resamples,
        dropped_resamples: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exact_samples(form: FitForm, a: f64, b: f64, sizes: &[usize]) -> Vec<SizeSamples> {
        sizes
            .iter()
            .map(|&n| {
                let fit = ScalingFit {
                    form,
                    log_a: a.ln(),
                    b,
                };
                SizeSamples {
                    size: n,
                    tts: vec![fit.predict(n as f64); 3],
                }
            })
            .collect()
    }

    #[test]
    fn recovers_exact_pure_exponential() {
        let sizes = [10, 20, 30, 40, 50, 60];
        let samples = exact_samples(FitForm::PureExp, 1e-7, 0.9, &sizes);
        let (s, m) = size_targets(&samples).unwrap();
        let fit = fit_points(FitForm::PureExp, &s, &m).unwrap();
        assert_relative_eq!(fit.a(), 1e-7, max_relative = 1e-6);
        assert_relative_eq!(fit.b, 0.9, max_relative = 1e-6);
    }

    #[test]
    fn recovers_exact_over_n_form() {
        let sizes = [10, 20, 40, 80];
        let samples = exact_samples(FitForm::ExpOverN, 3e-6, 0.55, &sizes);
        let (s, m) = size_targets(&samples).unwrap();
        let fit = fit_points(FitForm::ExpOverN, &s, &m).unwrap();
        assert_relative_eq!(fit.a(), 3e-6, max_relative = 1e-6);
        assert_relative_eq!(fit.b, 0.55, max_relative = 1e-6);
    }

    #[test]
    fn rescaling_times_rescales_a_only() {
        let sizes: Vec<f64> = vec![10.0, 20.0, 30.0, 40.0];
        // Noisy targets so the fit has nonzero residuals.
        let means: Vec<f64> = sizes
            .iter()
            .enumerate()
            .map(|(k, &n)| 2e-6 * (0.7 * n.sqrt()).exp() * (1.0 + 0.05 * ((k as f64) - 1.5)))
            .collect();
        let base = fit_points(FitForm::PureExp, &sizes, &means).unwrap();
        let scaled_means: Vec<f64> = means.iter().map(|&y| y * 1000.0).collect();
        let scaled = fit_points(FitForm::PureExp, &sizes, &scaled_means).unwrap();
        assert_relative_eq!(scaled.a(), base.a() * 1000.0, max_relative = 1e-8);
        assert_relative_eq!(scaled.b, base.b, max_relative = 1e-8);
    }

    #[test]
    fn single_resample_gives_point_interval() {
        let samples = exact_samples(FitForm::PureExp, 1e-5, 0.4, &[10, 20, 30]);
        let report = fit_scaling(FitForm::PureExp, &samples, 1, 7).unwrap();
        assert_eq!(report.a_ci, (report.fit.a(), report.fit.a()));
        assert_eq!(report.b_ci, (report.fit.b, report.fit.b));
    }

    #[test]
    fn bootstrap_interval_contains_point_and_is_deterministic() {
        let mut samples = exact_samples(FitForm::PureExp, 1e-6, 0.6, &[10, 20, 30, 40]);
        // Perturb trials so resamples differ.
        for (i, s) in samples.iter_mut().enumerate() {
            for (j, v) in s.tts.iter_mut().enumerate() {
                *v *= 1.0 + 0.1 * ((i + 2 * j) as f64 % 3.0 - 1.0);
            }
        }
        let r1 = fit_scaling(FitForm::PureExp, &samples, 200, 11).unwrap();
        let r2 = fit_scaling(FitForm::PureExp, &samples, 200, 11).unwrap();
        assert_eq!(r1.a_ci, r2.a_ci);
        assert_eq!(r1.b_ci, r2.b_ci);
        assert!(r1.a_ci.0 <= r1.fit.a() && r1.fit.a() <= r1.a_ci.1);
        assert!(r1.b_ci.0 <= r1.fit.b && r1.fit.b <= r1.b_ci.1);
        assert!(r1.b_ci.0 < r1.b_ci.1);
        assert_eq!(r1.dropped_resamples, 0);
    }

    #[test]
    fn unsolved_trials_are_ignored_in_the_mean() {
        let mut samples = exact_samples(FitForm::PureExp, 1e-6, 0.6, &[10, 20, 30]);
        samples[0].tts.push(f64::INFINITY);
        let (s, m) = size_targets(&samples).unwrap();
        let fit = fit_points(FitForm::PureExp, &s, &m).unwrap();
        assert_relative_eq!(fit.b, 0.6, max_relative = 1e-6);
    }

    #[test]
    fn rejects_single_size_and_nonpositive_targets() {
        assert_eq!(
            fit_points(FitForm::PureExp, &[10.0, 10.0], &[1.0, 2.0]),
            Err(FitError::TooFewSizes(1))
        );
        assert_eq!(
            fit_points(FitForm::PureExp, &[10.0, 20.0], &[1.0, -2.0]),
            Err(FitError::DegenerateData)
        );
    }

    #[test]
    fn report_text_has_summary_and_rows() {
        let samples = exact_samples(FitForm::PureExp, 1e-5, 0.4, &[10, 20]);
        let report = fit_scaling(FitForm::PureExp, &samples, 1, 3).unwrap();
        let text = report.to_text();
        assert!(text.starts_with("# pbit-scaling v1\n"));
        assert!(text.contains("# form a*exp(b*sqrt(n))"));
        assert!(text.contains("size trial tts\n"));
        assert!(text.contains("\n20 2 "));
    }
}
