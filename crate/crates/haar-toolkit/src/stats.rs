//! Small shared statistics helpers for Monte-Carlo estimators.

/// Sample mean and standard error (`s/√N`, Bessel-corrected).
pub(crate) fn mean_and_std_error(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 1, "mean of empty sample");
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Bessel-corrected sample variance around the supplied mean, with a
/// standard error taken from the spread of the squared deviations (adequate
/// for 5-SE agreement checks against exact variances).
pub(crate) fn variance_and_std_error(samples: &[f64], mean: f64) -> (f64, f64) {
    let n = samples.len();
    assert!(n >= 2, "variance needs at least two samples");
    let squared: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
    let (mean_sq, se_sq) = mean_and_std_error(&squared);
    (mean_sq * n as f64 / (n - 1) as f64, se_sq)
}

/// Median of a slice (average of the two central order statistics when the
/// length is even).
pub(crate) fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_se_known_values() {
        let (m, se) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-15);
        // var = (2.25+0.25+0.25+2.25)/3 = 5/3, se = sqrt(5/12).
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
