//! Sample statistics and the curve fits used by sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean with its standard error and sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// `s/√n`; absent for a single sample.
    pub stderr: Option<f64>,
    pub count: usize,
}

impl Stat {
    pub fn from_samples(xs: &[f64]) -> Option<Stat> {
        let n = xs.len();
        if n == 0 {
            return None;
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = (n > 1).then(|| {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        });
        Some(Stat { mean, stderr, count: n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub intercept_stderr: f64,
    pub count: usize,
}

fn least_squares(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (stderr, intercept_stderr) = if x.len() > 2 {
        let rss: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - intercept - slope * xi).powi(2)).sum();
        let s2 = rss / (n - 2.0);
        ((s2 / sxx).sqrt(), (s2 * (1.0 / n + mx * mx / sxx)).sqrt())
    } else {
        (0.0, 0.0)
    };
    LinearFit { slope, intercept, stderr, intercept_stderr, count: x.len() }
}

/// Least squares on the points whose `x` lies in the inclusive `window`
/// (all points when `None`). At least three distinct abscissae are required.
pub fn fit_linear(x: &[f64], y: &[f64], window: Option<(f64, f64)>) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(xi, _)| window.is_none_or(|(lo, hi)| **xi >= lo && **xi <= hi))
        .map(|(a, b)| (*a, *b))
        .unzip();
    if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
        return Err(Error::param("data", "contains non-finite values"));
    }
    let spread = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - xs.iter().copied().fold(f64::INFINITY, f64::min);
    if xs.len() < 3 || !(spread > 0.0) {
        return Err(Error::param("window", format!("needs at least 3 distinct points, got {}", xs.len())));
    }
    Ok(least_squares(&xs, &ys))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub kappa: f64,
    pub beta: f64,
    pub beta_stderr: f64,
    pub count: usize,
}

/// `y = κ x^β` by least squares in log-log space.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::param("data", "needs at least 2 points"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::param("data", "power-law fit needs positive finite values"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    if lx.iter().all(|v| *v == lx[0]) {
        return Err(Error::param("data", "abscissae must not all coincide"));
    }
    let f = least_squares(&lx, &ly);
    Ok(PowerLawFit { kappa: f.intercept.exp(), beta: f.slope, beta_stderr: f.stderr, count: f.count })
}

/// Plateau value and onset index (0-based); see [`plateau_run`].
pub fn saturation_estimate(series: &[f64], rel_tol: f64) -> Option<(f64, usize)> {
    plateau_run(series, rel_tol).map(|(v, start, _)| (v, start))
}

fn spread(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    if mean == 0.0 {
        f64::INFINITY
    } else {
        (hi - lo) / mean.abs()
    }
}

/// First run of at least `max(3, len/4)` consecutive entries whose relative
/// spread `(max − min)/|mean|` is at most `rel_tol`, extended forward while
/// the spread stays within tolerance. Returns `(mean, start, end)` with an
/// inclusive 0-based `end`.
pub fn plateau_run(series: &[f64], rel_tol: f64) -> Option<(f64, usize, usize)> {
    let min_len = 3.max(series.len() / 4);
    if series.len() < min_len || series.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let start = (0..=series.len() - min_len).find(|&k| spread(&series[k..k + min_len]) <= rel_tol)?;
    let mut end = start + min_len - 1;
    while end + 1 < series.len() && spread(&series[start..=end + 1]) <= rel_tol {
        end += 1;
    }
    let run = &series[start..=end];
    Some((run.iter().sum::<f64>() / run.len() as f64, start, end))
}

/// Default `|a_n|` window `[2, min(10, onset − 2)]` in 1-based `n`. When
/// that holds fewer than three points it falls back to the three points
/// ending at the onset, `[max(1, onset − 2), onset]`.
pub fn default_slope_window(onset_n: Option<usize>, len: usize) -> (usize, usize) {
    let onset = onset_n.unwrap_or(len + 2);
    let hi = 10.min(onset.saturating_sub(2)).min(len);
    if hi >= 4 {
        return (2, hi);
    }
    let end = onset.clamp(3, len.max(3));
    (end - 2, end)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let lambda = 0.1;
        let x: Vec<f64> = (1..=12).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|n| 2.0 * lambda * n - lambda).collect();
        let f = fit_linear(&x, &y, Some((2.0, 10.0))).unwrap();
        assert!((f.slope - 0.2).abs() < 1e-14 && (f.intercept + 0.1).abs() < 1e-14);
        assert_eq!(f.count, 9);
        let c = fit_linear(&x, &[3.0; 12], None).unwrap();
        assert_eq!(c.slope, 0.0);
        assert!(fit_linear(&x, &y, Some((2.0, 3.0))).is_err());
    }

    #[test]
    fn power_law_exact() {
        let v = [0.01, 0.02, 0.05];
        let c: Vec<f64> = v.iter().map(|x| 0.1 * x * x).collect();
        let f = fit_power_law(&v, &c).unwrap();
        assert!((f.kappa - 0.1).abs() < 1e-12 && (f.beta - 2.0).abs() < 1e-12);
        assert!(fit_power_law(&v, &[1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn plateau_detection() {
        let s = [1.0, 2.0, 3.0, 4.0, 4.0, 4.0, 4.0, 4.0];
        assert_eq!(saturation_estimate(&s, 1e-12), Some((4.0, 3)));
        let lin: Vec<f64> = (1..=40).map(f64::from).collect();
        assert_eq!(saturation_estimate(&lin, 0.1), None);
        let mut blown = vec![1.0, 2.0, 3.0, 3.05, 2.95, 3.0, 3.02, 2.98];
        blown.extend([10.0, 50.0]);
        assert_eq!(plateau_run(&blown, 0.05), Some((3.0, 2, 7)));
    }

    #[test]
    fn windows() {
        assert_eq!(default_slope_window(None, 40), (2, 10));
        assert_eq!(default_slope_window(Some(8), 40), (2, 6));
        assert_eq!(default_slope_window(Some(3), 40), (1, 3));
        assert_eq!(default_slope_window(Some(5), 40), (3, 5));
    }

    #[test]
    fn stat_basics() {
        let s = Stat::from_samples(&[1.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.count), (2.0, 2));
        assert!((s.stderr.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(Stat::from_samples(&[5.0]).unwrap().stderr, None);
        assert!(Stat::from_samples(&[]).is_none());
    }
}
