use crate::{Error, Result};

/// Minimum number of samples past the transient cutoff.
pub const MIN_FIT_POINTS: usize = 20;
/// Residuals at or below this are treated as exactly converged.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Sampled overlap curve `O(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSeries {
    pub times: Vec<f64>,
    pub overlaps: Vec<f64>,
}

impl OverlapSeries {
    pub fn new(times: Vec<f64>, overlaps: Vec<f64>) -> Result<Self> {
        if times.len() != overlaps.len() {
            return Err(Error::Dimension { expected: times.len(), found: overlaps.len() });
        }
        Ok(OverlapSeries { times, overlaps })
    }

    /// `1 - O(t)`.
    pub fn residuals(&self) -> Vec<f64> {
        self.overlaps.iter().map(|o| 1.0 - o).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Samples with `t` below this are discarded.
    pub transient_cutoff: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { transient_cutoff: 5.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Power-law exponent in `1 - O ~ amplitude * t^(-alpha)`.
    pub alpha: f64,
    pub alpha_stderr: f64,
    pub amplitude: f64,
    /// Points that entered the log-log regression.
    pub points_used: usize,
    /// False when the residual had too few local maxima and every point
    /// was fitted instead.
    pub used_envelope: bool,
    /// Dominant angular frequency of the detrended residual, when it
    /// oscillates at all.
    pub frequency: Option<f64>,
}

/// Fits `log(1 - O)` against `log t` on the upper envelope (local maxima)
/// of the residual, so superimposed oscillations do not bias the slope.
pub fn fit_decay_exponent(series: &OverlapSeries, options: FitOptions) -> Result<DecayFit> {
    let (times, residuals): (Vec<f64>, Vec<f64>) = series
        .times
        .iter()
        .zip(series.residuals())
        .filter(|&(&t, _)| t >= options.transient_cutoff && t > 0.0)
        .map(|(&t, r)| (t, r))
        .unzip();
    if times.len() < MIN_FIT_POINTS {
        return Err(Error::domain(format!(
            "need at least {MIN_FIT_POINTS} samples after t = {}, got {}",
            options.transient_cutoff,
            times.len()
        )));
    }
    if residuals.iter().all(|&r| r <= RESIDUAL_FLOOR) {
        return Err(Error::NothingToFit(format!("residual 1 - O is below {RESIDUAL_FLOOR:e} everywhere")));
    }

    let peaks: Vec<usize> = (1..residuals.len() - 1)
        .filter(|&i| residuals[i] > residuals[i - 1] && residuals[i] >= residuals[i + 1])
        .filter(|&i| residuals[i] > RESIDUAL_FLOOR)
        .collect();
    let used_envelope = peaks.len() >= 3;
    let chosen: Vec<usize> =
        if used_envelope { peaks } else { (0..residuals.len()).filter(|&i| residuals[i] > RESIDUAL_FLOOR).collect() };
    if chosen.len() < 3 {
        return Err(Error::NothingToFit("fewer than three usable residual samples".into()));
    }

    let xs: Vec<f64> = chosen.iter().map(|&i| times[i].ln()).collect();
    let ys: Vec<f64> = chosen.iter().map(|&i| residuals[i].ln()).collect();
    let (slope, intercept, slope_stderr) = least_squares(&xs, &ys);
    let alpha = -slope;
    let amplitude = intercept.exp();

    let detrended: Vec<f64> =
        times.iter().zip(&residuals).map(|(&t, &r)| r / (amplitude * t.powf(-alpha)) - 1.0).collect();
    let frequency = dominant_frequency(&times, &detrended);

    Ok(DecayFit { alpha, alpha_stderr: slope_stderr, amplitude, points_used: chosen.len(), used_envelope, frequency })
}

/// Ordinary least squares `y = a + b x`; returns `(b, a, stderr(b))`.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    let stderr = if xs.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (b, a, stderr)
}

/// Peak of the periodogram `|sum d_i e^{-i w t_i}|^2` over a 4x oversampled
/// grid up to the Nyquist frequency of the smallest spacing.
fn dominant_frequency(times: &[f64], signal: &[f64]) -> Option<f64> {
    let n = times.len();
    let mean = signal.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = signal.iter().map(|s| s - mean).collect();
    let rms = (centered.iter().map(|c| c * c).sum::<f64>() / n as f64).sqrt();
    if rms.is_nan() || rms <= 1e-6 {
        return None;
    }
    let span = times[n - 1] - times[0];
    let min_gap = times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if !(span > 0.0 && min_gap > 0.0) {
        return None;
    }
    let step = std::f64::consts::TAU / (4.0 * span);
    let nyquist = std::f64::consts::PI / min_gap;
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut omega = step;
    while omega <= nyquist {
        let (mut re, mut im) = (0.0, 0.0);
        for (&t, &c) in times.iter().zip(&centered) {
            re += c * (omega * t).cos();
            im -= c * (omega * t).sin();
        }
        let power = re * re + im * im;
        if power > best.1 {
            best = (omega, power);
        }
        omega += step;
    }
    Some(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(residual: impl Fn(f64) -> f64, t_max: f64, dt: f64) -> OverlapSeries {
        let n = (t_max / dt).round() as usize;
        let times: Vec<f64> = (1..=n).map(|k| k as f64 * dt).collect();
        let overlaps = times.iter().map(|&t| 1.0 - residual(t)).collect();
        OverlapSeries::new(times, overlaps).unwrap()
    }

    #[test]
    fn pure_power_law() {
        let fit = fit_decay_exponent(&synthetic(|t| t.powi(-2), 100.0, 0.25), FitOptions::default()).unwrap();
        assert!((fit.alpha - 2.0).abs() < 0.01, "{fit:?}");
        assert!(!fit.used_envelope);
        assert_eq!(fit.frequency, None);
    }

    #[test]
    fn oscillating_power_law_uses_envelope() {
        let fit =
            fit_decay_exponent(&synthetic(|t| (1.0 + 0.3 * (5.0 * t).sin()) / t, 100.0, 0.05), FitOptions::default())
                .unwrap();
        assert!(fit.used_envelope);
        assert!((fit.alpha - 1.0).abs() < 0.1, "{fit:?}");
        assert!((fit.frequency.unwrap() - 5.0).abs() < 0.1, "{fit:?}");
    }

    #[test]
    fn converged_series_has_nothing_to_fit() {
        let s = synthetic(|_| 0.0, 50.0, 0.5);
        assert!(matches!(fit_decay_exponent(&s, FitOptions::default()), Err(Error::NothingToFit(_))));
    }

    #[test]
    fn too_short_after_cutoff() {
        let s = synthetic(|t| 1.0 / t, 8.0, 0.5);
        assert!(matches!(fit_decay_exponent(&s, FitOptions::default()), Err(Error::Domain(_))));
    }
}
