//! Small statistics helpers shared by the simulators and the oracle.

/// Sample mean and its standard error.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Ordinary least-squares line fit `x ≈ a + b·t`.
///
/// Returns the slope `b` and its standard error under the homoskedastic
/// residual model. Needs at least 3 points for a residual variance estimate.
pub fn linear_fit(ts: &[f64], xs: &[f64]) -> (f64, f64) {
    assert_eq!(ts.len(), xs.len());
    let n = ts.len() as f64;
    let t_mean = ts.iter().sum::<f64>() / n;
    let x_mean = xs.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut stx = 0.0;
    for (t, x) in ts.iter().zip(xs) {
        stt += (t - t_mean) * (t - t_mean);
        stx += (t - t_mean) * (x - x_mean);
    }
    let slope = stx / stt;
    let intercept = x_mean - slope * t_mean;
    let mut rss = 0.0;
    for (t, x) in ts.iter().zip(xs) {
        let resid = x - intercept - slope * t;
        rss += resid * resid;
    }
    let se = if ts.len() > 2 {
        (rss / (n - 2.0) / stt).sqrt()
    } else {
        0.0
    };
    (slope, se)
}
