//! Small statistics toolkit for the experiments.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Exp};
use statrs::statistics::Statistics;

use crate::error::{Result, ZrpError};

/// Sample mean and its standard error.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let mean = xs.mean();
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    (mean, xs.std_dev() / (xs.len() as f64).sqrt())
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(ZrpError::InsufficientData(format!(
            "need at least 2 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.mean(), ys.mean());
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ZrpError::InsufficientData("all x values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if xs.len() > 2 {
        let rss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
    })
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and Exp(1).
pub fn ks_exp1(samples: &[f64]) -> f64 {
    let exp = Exp::new(1.0).unwrap();
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = exp.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Total-variation distance between two distributions on the same index set.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Least concave majorant of the points `(xs[i], ys[i])` (`xs` increasing),
/// evaluated at every `xs[i]`.
pub fn upper_concave_envelope(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..xs.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or below the chord from a to i
            let cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = Vec::with_capacity(xs.len());
    let mut seg = 0;
    for (i, &x) in xs.iter().enumerate() {
        while seg + 1 < hull.len() && xs[hull[seg + 1]] < x {
            seg += 1;
        }
        if seg + 1 == hull.len() || hull[seg] == i {
            out.push(ys[hull[seg]].max(ys[i]));
            continue;
        }
        let (a, b) = (hull[seg], hull[seg + 1]);
        let t = (x - xs[a]) / (xs[b] - xs[a]);
        out.push(ys[a] + t * (ys[b] - ys[a]));
    }
    out
}
