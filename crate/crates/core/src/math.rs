//! Small numeric helpers shared across modules.

/// Logistic function `1 / (1 + e^-x)`.
pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Inverse of [`logistic`]; `p` must lie strictly inside `(0, 1)`.
pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn logistic_known_values() {
        assert_abs_diff_eq!(logistic(0.0), 0.5);
        assert_abs_diff_eq!(logistic(1.0), 0.731_058_578_630_004_9, epsilon = 1e-15);
        assert_abs_diff_eq!(logistic(-1.0), 1.0 - logistic(1.0), epsilon = 1e-15);
    }

    #[test]
    fn logit_inverts_logistic() {
        for &x in &[-3.0, -0.5, 0.0, 0.25, 2.0] {
            assert_abs_diff_eq!(logit(logistic(x)), x, epsilon = 1e-12);
        }
    }
}
