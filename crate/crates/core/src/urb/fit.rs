//! Fitting `q_m = B u^(m-1)` to averaged shifted purities.

use serde::Serialize;

use crate::error::{Error, Result};

/// Points at or below this value are dropped from the log-linear fit.
pub const Q_FLOOR: f64 = 1e-4;

/// Points whose mean is within this many standard errors of zero are dropped
/// from the log-linear fit.
pub const RESOLUTION_SIGMAS: f64 = 2.0;

/// A point is counted as weak when its standard error exceeds this fraction
/// of its mean.
pub const RELATIVE_PRECISION: f64 = 0.1;

/// Averaged shifted purity at one depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DepthAverage {
    pub depth: usize,
    pub mean: f64,
    /// Standard error of `mean` over iterations; zero when unknown.
    pub std_err: f64,
}

impl DepthAverage {
    pub fn new(depth: usize, mean: f64, std_err: f64) -> Self {
        Self { depth, mean, std_err }
    }

    fn usable(&self) -> bool {
        self.mean > Q_FLOOR && self.mean > RESOLUTION_SIGMAS * self.std_err
    }

    fn weak(&self) -> bool {
        self.std_err > RELATIVE_PRECISION * self.mean.max(Q_FLOOR)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    LogLinear,
    Nonlinear,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    #[serde(rename = "B")]
    pub b: f64,
    pub u: f64,
    pub u_variance: f64,
    /// Sum of squared residuals of `q - B u^(m-1)` over all points.
    pub residual_sum_sq: f64,
    pub points_used: usize,
    pub method: FitMethod,
    /// Set when the decay has mostly vanished into the noise floor, the regime
    /// where the estimate is biased upward.
    pub low_signal: bool,
}

impl DecayFit {
    pub fn predict(&self, depth: usize) -> f64 {
        self.b * self.u.powi(depth as i32 - 1)
    }
}

fn distinct_depths(points: &[(usize, f64)]) -> usize {
    let mut ms: Vec<usize> = points.iter().map(|p| p.0).collect();
    ms.sort_unstable();
    ms.dedup();
    ms.len()
}

struct LineFit {
    slope: f64,
    intercept: f64,
    slope_variance: f64,
}

fn least_squares_line(xs: &[f64], ys: &[f64]) -> LineFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_variance = if xs.len() > 2 { rss / (n - 2.0) / sxx } else { 0.0 };
    LineFit { slope, intercept, slope_variance }
}

fn residual_sum_sq(points: &[(usize, f64)], b: f64, u: f64) -> f64 {
    points.iter().map(|&(m, q)| (q - b * u.powi(m as i32 - 1)).powi(2)).sum()
}

/// Levenberg-damped Gauss-Newton on `(B, u)`, started from the two largest
/// points.
fn gauss_newton(points: &[(usize, f64)]) -> Option<(f64, f64)> {
    let mut by_value: Vec<(usize, f64)> = points.to_vec();
    by_value.sort_by(|a, b| b.1.total_cmp(&a.1));
    let (m1, q1) = by_value[0];
    let (m2, q2) = by_value.iter().copied().find(|&(m, _)| m != m1).expect("at least two distinct depths");
    let mut u = if q1 > 0.0 && q2 > 0.0 { (q2 / q1).powf(1.0 / (m2 as f64 - m1 as f64)).clamp(1e-3, 1.0) } else { 0.5 };
    let mut b = q1 / u.powi(m1 as i32 - 1);
    let mut lambda = 1e-3;
    let mut cost = residual_sum_sq(points, b, u);
    for _ in 0..500 {
        let (mut jtj, mut jtr) = ([[0.0f64; 2]; 2], [0.0f64; 2]);
        for &(m, q) in points {
            let k = m as i32 - 1;
            let uk = u.powi(k);
            let duk = if k == 0 { 0.0 } else { k as f64 * u.powi(k - 1) };
            let j = [uk, b * duk];
            let r = q - b * uk;
            for a in 0..2 {
                jtr[a] += j[a] * r;
                for c in 0..2 {
                    jtj[a][c] += j[a] * j[c];
                }
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let a00 = jtj[0][0] * (1.0 + lambda);
            let a11 = jtj[1][1] * (1.0 + lambda);
            let det = a00 * a11 - jtj[0][1] * jtj[1][0];
            if det.abs() < 1e-300 {
                lambda *= 10.0;
                continue;
            }
            let db = (a11 * jtr[0] - jtj[0][1] * jtr[1]) / det;
            let du = (a00 * jtr[1] - jtj[1][0] * jtr[0]) / det;
            let (nb, nu) = (b + db, (u + du).clamp(0.0, 1.0));
            let next = residual_sum_sq(points, nb, nu);
            if next.is_finite() && next <= cost {
                let converged = (cost - next) <= 1e-15 * cost.max(1e-300) || (db.abs() < 1e-14 && du.abs() < 1e-14);
                b = nb;
                u = nu;
                cost = next;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                if converged {
                    return Some((b, u));
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // no descent direction left: at a (possibly boundary) minimum
            return (cost.is_finite() && b.is_finite()).then_some((b, u));
        }
    }
    None
}

/// Fits `q = B u^(m-1)` to bare `(depth, mean)` points.
///
/// Ordinary least squares on `(m - 1, ln q)` over the points above
/// [`Q_FLOOR`]; when fewer than two distinct depths survive the floor, falls
/// back to a nonlinear least-squares fit over all points. `u` is clamped to
/// `[0, 1]`.
pub fn fit_decay(points: &[(usize, f64)]) -> Result<DecayFit> {
    let averages: Vec<DepthAverage> = points.iter().map(|&(m, q)| DepthAverage::new(m, q, 0.0)).collect();
    fit_decay_averages(&averages)
}

/// As [`fit_decay`], additionally dropping points that are not resolved above
/// zero by their standard error.
///
/// `low_signal` is set when more than half the points fall below
/// [`Q_FLOOR`], or when at least half carry a standard error above
/// [`RELATIVE_PRECISION`] of their mean.
pub fn fit_decay_averages(averages: &[DepthAverage]) -> Result<DecayFit> {
    let points: Vec<(usize, f64)> = averages.iter().map(|a| (a.depth, a.mean)).collect();
    if averages.iter().any(|a| !a.mean.is_finite() || !a.std_err.is_finite()) {
        return Err(Error::FitFailure("non-finite shifted purity".into()));
    }
    if distinct_depths(&points) < 2 {
        return Err(Error::FitFailure("need at least two distinct depths".into()));
    }
    let below = averages.iter().filter(|a| a.mean <= Q_FLOOR).count();
    let weak = averages.iter().filter(|a| a.weak()).count();
    let low_signal = 2 * below > averages.len() || 2 * weak >= averages.len();
    let kept: Vec<(usize, f64)> = averages.iter().filter(|a| a.usable()).map(|a| (a.depth, a.mean)).collect();

    if distinct_depths(&kept) >= 2 {
        let xs: Vec<f64> = kept.iter().map(|p| p.0 as f64 - 1.0).collect();
        let ys: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
        let line = least_squares_line(&xs, &ys);
        let u_raw = line.slope.exp();
        let u = u_raw.clamp(0.0, 1.0);
        let b = line.intercept.exp();
        return Ok(DecayFit {
            b,
            u,
            u_variance: u_raw * u_raw * line.slope_variance,
            residual_sum_sq: residual_sum_sq(&points, b, u),
            points_used: kept.len(),
            method: FitMethod::LogLinear,
            low_signal,
        });
    }

    let (b, u) = gauss_newton(&points).ok_or_else(|| Error::FitFailure("nonlinear fit did not converge".into()))?;
    let rss = residual_sum_sq(&points, b, u);
    // curvature-based variance of u from the Gauss-Newton normal matrix
    let (mut jbb, mut jbu, mut juu) = (0.0, 0.0, 0.0);
    for &(m, _) in &points {
        let k = m as i32 - 1;
        let ju = if k == 0 { 0.0 } else { b * k as f64 * u.powi(k - 1) };
        let jb = u.powi(k);
        jbb += jb * jb;
        jbu += jb * ju;
        juu += ju * ju;
    }
    let det = jbb * juu - jbu * jbu;
    let dof = points.len().saturating_sub(2).max(1) as f64;
    let u_variance = if det.abs() > 1e-300 { rss / dof * jbb / det } else { f64::INFINITY };
    Ok(DecayFit {
        b,
        u,
        u_variance,
        residual_sum_sq: rss,
        points_used: points.len(),
        method: FitMethod::Nonlinear,
        low_signal,
    })
}
