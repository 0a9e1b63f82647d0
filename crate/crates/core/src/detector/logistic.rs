use super::linalg::{cholesky, cholesky_solve, spd_inverse, Matrix};
use super::DetectorError;

pub const MAX_ITERATIONS: usize = 100;
pub const TOLERANCE: f64 = 1e-8;
pub const FALLBACK_RIDGE: f64 = 1e-6;

pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Linear predictor; `params[0]` is the intercept.
fn eta(params: &[f64], row: &[f64]) -> f64 {
    params[0] + params[1..].iter().zip(row).map(|(b, x)| b * x).sum::<f64>()
}

/// Bernoulli log-likelihood minus `ridge / 2 * |beta|^2` (the intercept is
/// not penalized).
pub fn log_likelihood(params: &[f64], x: &Matrix, y: &[f64], ridge: f64) -> f64 {
    let ll: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let t = eta(params, row);
            yi * t - softplus(t)
        })
        .sum();
    ll - 0.5 * ridge * params[1..].iter().map(|b| b * b).sum::<f64>()
}

/// Gradient of [`log_likelihood`] with respect to `params`.
pub fn gradient(params: &[f64], x: &Matrix, y: &[f64], ridge: f64) -> Vec<f64> {
    let mut g = vec![0.0; params.len()];
    for (row, &yi) in x.iter().zip(y) {
        let r = yi - sigmoid(eta(params, row));
        g[0] += r;
        for (gj, xj) in g[1..].iter_mut().zip(row) {
            *gj += r * xj;
        }
    }
    for (gj, b) in g[1..].iter_mut().zip(&params[1..]) {
        *gj -= ridge * b;
    }
    g
}

/// Negative Hessian (observed information) of [`log_likelihood`].
pub(crate) fn information(params: &[f64], x: &Matrix, ridge: f64) -> Matrix {
    let p = params.len();
    let mut h = vec![vec![0.0; p]; p];
    for row in x {
        let mu = sigmoid(eta(params, row));
        let w = mu * (1.0 - mu);
        let xi = |k: usize| if k == 0 { 1.0 } else { row[k - 1] };
        for a in 0..p {
            let wa = w * xi(a);
            for b in 0..=a {
                h[a][b] += wa * xi(b);
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            h[b][a] = h[a][b];
        }
    }
    for (k, hk) in h.iter_mut().enumerate().skip(1) {
        hk[k] += ridge;
    }
    h
}

fn separates(params: &[f64], x: &Matrix, y: &[f64]) -> bool {
    x.iter().zip(y).all(|(row, &yi)| {
        let t = eta(params, row);
        if yi > 0.5 {
            t > 0.0
        } else {
            t < 0.0
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub intercept: f64,
    pub beta: Vec<f64>,
    /// Unpenalized log-likelihood at the optimum.
    pub ll: f64,
    pub ll_null: f64,
    pub iterations: usize,
    pub ridge: f64,
    /// Set when the fallback ridge had to be used.
    pub ridge_fallback: bool,
    /// Inverse observed information over `[intercept, beta...]`.
    pub covariance: Matrix,
}

enum Attempt {
    Converged(Vec<f64>, usize),
    Separated,
    Failed,
}

fn newton(x: &Matrix, y: &[f64], ridge: f64, start: Vec<f64>) -> Attempt {
    let mut params = start;
    let mut obj = log_likelihood(&params, x, y, ridge);
    for iter in 1..=MAX_ITERATIONS {
        let g = gradient(&params, x, y, ridge);
        let Some(l) = cholesky(&information(&params, x, ridge)) else {
            return Attempt::Failed;
        };
        let step = cholesky_solve(&l, &g);
        let mut scale = 1.0;
        let (mut next, mut next_obj);
        loop {
            next = params.iter().zip(&step).map(|(p, s)| p + scale * s).collect::<Vec<_>>();
            next_obj = log_likelihood(&next, x, y, ridge);
            if next_obj >= obj - 1e-12 * obj.abs().max(1.0) || scale < 1e-10 {
                break;
            }
            scale *= 0.5;
        }
        if !next_obj.is_finite() {
            return Attempt::Failed;
        }
        let delta = next
            .iter()
            .zip(&params)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        params = next;
        obj = next_obj;
        if ridge == 0.0 && separates(&params, x, y) {
            return Attempt::Separated;
        }
        if delta < TOLERANCE {
            return Attempt::Converged(params, iter);
        }
    }
    Attempt::Failed
}

fn null_fit(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let k = y.iter().sum::<f64>();
    let p = k / n;
    let ll = k * p.ln() + (n - k) * (1.0 - p).ln();
    ((p / (1.0 - p)).ln(), ll)
}

/// Newton-Raphson (IRLS) maximum likelihood with step halving. With
/// `ridge = 0`, detected separation or a failed fit triggers one retry with
/// ridge [`FALLBACK_RIDGE`], recorded in `ridge_fallback`.
pub fn fit_logistic(x: &Matrix, y: &[f64], ridge: f64) -> Result<LogisticFit, DetectorError> {
    if x.len() != y.len() {
        return Err(DetectorError::LengthMismatch {
            rows: x.len(),
            labels: y.len(),
        });
    }
    let positives = y.iter().filter(|&&v| v > 0.5).count();
    if positives == 0 || positives == y.len() {
        return Err(DetectorError::OneClassOnly);
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(DetectorError::NonFinite);
    }
    let d = x.first().map_or(0, Vec::len);
    let (b0, ll_null) = null_fit(y);
    let mut start = vec![0.0; d + 1];
    start[0] = b0;

    let (params, iterations, used_ridge, fallback) = match newton(x, y, ridge, start.clone()) {
        Attempt::Converged(p, it) => (p, it, ridge, false),
        _ if ridge == 0.0 => match newton(x, y, FALLBACK_RIDGE, start) {
            Attempt::Converged(p, it) => (p, it, FALLBACK_RIDGE, true),
            _ => return Err(DetectorError::NoConvergence),
        },
        _ => return Err(DetectorError::NoConvergence),
    };
    let covariance = spd_inverse(&information(&params, x, used_ridge))
        .ok_or(DetectorError::SingularInformation)?;
    Ok(LogisticFit {
        intercept: params[0],
        beta: params[1..].to_vec(),
        ll: log_likelihood(&params, x, y, 0.0),
        ll_null,
        iterations,
        ridge: used_ridge,
        ridge_fallback: fallback,
        covariance,
    })
}
