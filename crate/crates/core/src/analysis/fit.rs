use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};

/// Ordinary least-squares fit of `ln sigma = intercept + slope * ln n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
    pub points: Vec<(u64, f64)>,
}

/// Fits a power law through the usable points (`n > 0`, finite `sigma > 0`).
/// At least four usable points are required.
pub fn fit_power_law(points: &[(u64, f64)]) -> Result<ScalingFit> {
    let used: Vec<(u64, f64)> = points
        .iter()
        .copied()
        .filter(|&(n, s)| n > 0 && s.is_finite() && s > 0.0)
        .collect();
    if used.len() < 4 {
        return Err(ThermoError::TooFewPoints(used.len()));
    }
    let xs: Vec<f64> = used.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|&(_, s)| s.ln()).collect();
    let k = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ThermoError::InvalidPlan(
            "all fit points share the same n".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr_slope = (ssr / (k - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ScalingFit {
        slope,
        intercept,
        stderr_slope,
        r_squared,
        points: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_laws() {
        for s in [-1.0, -0.5, 0.0] {
            let pts: Vec<(u64, f64)> = [16u64, 32, 64, 128, 256, 4096]
                .iter()
                .map(|&n| (n, 3.7 * (n as f64).powf(s)))
                .collect();
            let fit = fit_power_law(&pts).unwrap();
            assert!((fit.slope - s).abs() < 1e-12, "{s}: {}", fit.slope);
            assert!((fit.r_squared - 1.0).abs() < 1e-12);
            assert!(fit.stderr_slope < 1e-12);
            assert!((fit.intercept - 3.7f64.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn refuses_short_inputs() {
        let pts = [(1, 1.0), (2, 0.5), (4, 0.25)];
        assert!(matches!(
            fit_power_law(&pts),
            Err(ThermoError::TooFewPoints(3))
        ));
        // unusable points do not count
        let pts = [(1, 1.0), (2, 0.5), (4, 0.25), (8, f64::NAN), (16, 0.0)];
        assert!(matches!(
            fit_power_law(&pts),
            Err(ThermoError::TooFewPoints(3))
        ));
    }

    #[test]
    fn noisy_fit_reports_spread() {
        let pts = [(1, 1.0), (2, 0.8), (4, 0.45), (8, 0.37), (16, 0.24)];
        let fit = fit_power_law(&pts).unwrap();
        assert!(fit.stderr_slope > 0.0);
        assert!(fit.r_squared > 0.9 && fit.r_squared < 1.0);
    }
}
