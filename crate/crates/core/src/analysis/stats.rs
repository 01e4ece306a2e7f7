//! Elementary statistics used across the analysis layer.

use super::AnalysisError;

pub fn mean(xs: &[f64]) -> Result<f64, AnalysisError> {
    if xs.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() < 2 {
        return Err(AnalysisError::EmptyInput);
    }
    let m = mean(xs)?;
    Ok(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

/// Median; infinities are allowed and sort to the ends.
pub fn median(xs: &[f64]) -> Result<f64, AnalysisError> {
    percentile(xs, 0.5)
}

/// Percentile with linear interpolation between order statistics,
/// `q` in `[0, 1]`.
pub fn percentile(xs: &[f64], q: f64) -> Result<f64, AnalysisError> {
    if xs.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        return Ok(sorted[lo]);
    }
    let frac = h - lo as f64;
    let (a, b) = (sorted[lo], sorted[hi]);
    if a.is_infinite() || b.is_infinite() {
        // Interpolating with an infinity would poison finite quantiles.
        return Ok(if frac < 0.5 { a } else { b });
    }
    Ok(a + (b - a) * frac)
}

/// Pearson correlation coefficient.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(AnalysisError::EmptyInput);
    }
    let mx = mean(xs)?;
    let my = mean(ys)?;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(AnalysisError::ZeroVariance);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Kolmogorov-Smirnov statistic of `samples` against the exponential
/// distribution with the given rate.
pub fn exponential_ks(samples: &[f64], rate: f64) -> Result<f64, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(AnalysisError::BadRate(rate));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = 1.0 - (-rate * x).exp();
        d = d.max(cdf - i as f64 / n).max((i + 1) as f64 / n - cdf);
    }
    Ok(d)
}

/// Shannon entropy in nats; zero-probability entries contribute nothing.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}
