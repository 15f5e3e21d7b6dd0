use nalgebra::{DMatrix, DVector};

use super::matrix::{TransitionMatrix, DENSE_CAP};
use crate::error::{Error, Result};

/// The stationary distribution of an irreducible chain.
///
/// Dense chains solve `π (P - I) = 0, Σ π = 1` directly; larger ones use
/// power iteration on the lazy chain `(P + I) / 2`, which shares the
/// stationary law and is aperiodic.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<Vec<f64>> {
    if let Some(pi) = p.cached_stationary().get() {
        return Ok(pi.clone());
    }
    let n = p.n();
    let pi = if n <= DENSE_CAP {
        let mut a: DMatrix<f64> = p.to_dense()?.transpose() - DMatrix::identity(n, n);
        for j in 0..n {
            a[(n - 1, j)] = 1.0;
        }
        let mut b = DVector::zeros(n);
        b[n - 1] = 1.0;
        let x = a.lu().solve(&b).ok_or(Error::SingularSystem)?;
        x.iter().map(|v| v.max(0.0)).collect::<Vec<_>>()
    } else {
        let mut mu = vec![1.0 / n as f64; n];
        let mut converged = false;
        for _ in 0..1_000_000 {
            let next: Vec<f64> = p.left_mul(&mu).iter().zip(&mu).map(|(a, b)| 0.5 * (a + b)).collect();
            let diff: f64 = next.iter().zip(&mu).map(|(a, b)| (a - b).abs()).sum();
            mu = next;
            if diff < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { horizon: 1_000_000 });
        }
        mu
    };
    let total: f64 = pi.iter().sum();
    let pi: Vec<f64> = pi.iter().map(|v| v / total).collect();
    let _ = p.cached_stationary().set(pi.clone());
    Ok(pi)
}

/// Largest violation `|π(x) P(x, y) - π(y) P(y, x)|` over all pairs.
pub fn check_detailed_balance(p: &TransitionMatrix, pi: &[f64]) -> Result<f64> {
    if pi.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: pi.len() });
    }
    let mut worst: f64 = 0.0;
    for x in 0..p.n() {
        let (c, v) = p.row(x);
        for (y, pxy) in c.iter().zip(v) {
            worst = worst.max((pi[x] * pxy - pi[*y] * p.get(*y, x)).abs());
        }
    }
    Ok(worst)
}

/// Largest violation `|(π P)(y) - π(y)|`.
pub fn check_invariance(p: &TransitionMatrix, pi: &[f64]) -> Result<f64> {
    if pi.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: pi.len() });
    }
    Ok(p.left_mul(pi).iter().zip(pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Total variation distance `½ Σ |μ - ν|`.
pub fn tv_distance(mu: &[f64], nu: &[f64]) -> f64 {
    0.5 * mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `‖μ0 P^t - π‖_TV` for `t = 0..=horizon`.
pub fn tv_curve(mu0: &[f64], p: &TransitionMatrix, pi: &[f64], horizon: usize) -> Result<Vec<f64>> {
    if mu0.len() != p.n() || pi.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: mu0.len().min(pi.len()) });
    }
    let mut mu = mu0.to_vec();
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(tv_distance(&mu, pi));
    for _ in 0..horizon {
        mu = p.left_mul(&mu);
        out.push(tv_distance(&mu, pi));
    }
    Ok(out)
}

/// Smallest `t ≥ 0` with `‖μ0 P^t - π‖_TV < ε`.
pub fn mixing_time(mu0: &[f64], p: &TransitionMatrix, pi: &[f64], eps: f64, horizon: usize) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadProbability { name: "eps", value: eps });
    }
    if mu0.len() != p.n() || pi.len() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), found: mu0.len().min(pi.len()) });
    }
    let mut mu = mu0.to_vec();
    for t in 0..=horizon {
        if tv_distance(&mu, pi) < eps {
            return Ok(t);
        }
        mu = p.left_mul(&mu);
    }
    Err(Error::NoConvergence { horizon })
}
