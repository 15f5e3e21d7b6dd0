//! Estimators for simulated chains: nearest-neighbour KL divergence,
//! replicate-based asymptotic variance, and empirical total variation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::DiscreteTarget;

/// A batch of points of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    points: Vec<Vec<f64>>,
    dim: usize,
    pub label: String,
}

impl SampleBatch {
    pub fn new(label: impl Into<String>, points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptySample)?;
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sample point"));
        }
        Ok(Self { points, dim, label: label.into() })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Adds independent uniform noise of half-width `1e-12 × scale` per
    /// coordinate, where `scale` is the largest absolute coordinate. Breaks
    /// exact ties (e.g. from rejected MH moves) without visibly moving points.
    pub fn jittered(&self, rng: &mut RngStream) -> Self {
        let scale = self.points.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let amp = 1e-12 * scale;
        let points =
            self.points.iter().map(|p| p.iter().map(|v| v + amp * (2.0 * rng.uniform() - 1.0)).collect()).collect();
        Self { points, dim: self.dim, label: self.label.clone() }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Squared distance from `x` to its `k`-th nearest neighbour in `pool`,
/// skipping index `skip`.
fn kth_nearest(x: &[f64], pool: &[Vec<f64>], k: usize, skip: Option<usize>) -> f64 {
    let mut best = vec![f64::INFINITY; k];
    for (j, y) in pool.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        let d = dist2(x, y);
        if d < best[k - 1] {
            let pos = best.partition_point(|b| *b <= d);
            best.insert(pos, d);
            best.pop();
        }
    }
    best[k - 1]
}

/// k-nearest-neighbour estimate of `KL(p ‖ q)` from samples of each law:
/// `(d/N) Σ log(ν_k(i)/ρ_k(i)) + log(M/(N-1))`, with `ρ_k(i)` the distance
/// from `pᵢ` to its k-th neighbour among the other `p` samples and `ν_k(i)`
/// the distance to its k-th neighbour among the `q` samples.
pub fn knn_kl(p: &SampleBatch, q: &SampleBatch, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: q.dim });
    }
    let (n, m) = (p.len(), q.len());
    if n <= k {
        return Err(Error::TooFewReplicates { needed: k + 1, got: n });
    }
    if m < k {
        return Err(Error::TooFewReplicates { needed: k, got: m });
    }
    let mut acc = 0.0;
    for (i, x) in p.points.iter().enumerate() {
        let rho = kth_nearest(x, &p.points, k, Some(i));
        let nu = kth_nearest(x, &q.points, k, None);
        if rho == 0.0 || nu == 0.0 {
            return Err(Error::DuplicatePoints);
        }
        // Squared distances: halve the log.
        acc += 0.5 * (nu.ln() - rho.ln());
    }
    Ok(p.dim as f64 * acc / n as f64 + (m as f64 / (n - 1) as f64).ln())
}

/// An estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

/// `T ×` the unbiased sample variance of per-replicate path averages.
pub fn mc_asymptotic_variance(means: &[f64], t: usize) -> Result<f64> {
    if means.len() < 2 {
        return Err(Error::TooFewReplicates { needed: 2, got: means.len() });
    }
    if means.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("replicate mean"));
    }
    let n = means.len() as f64;
    let mu = means.iter().sum::<f64>() / n;
    let var = means.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (n - 1.0);
    Ok(t as f64 * var)
}

/// [`mc_asymptotic_variance`] with a bootstrap-over-replicates standard error.
pub fn mc_asymptotic_variance_bootstrap(
    means: &[f64],
    t: usize,
    n_boot: usize,
    rng: &mut RngStream,
) -> Result<Estimate> {
    let value = mc_asymptotic_variance(means, t)?;
    if n_boot < 2 {
        return Err(Error::TooFewReplicates { needed: 2, got: n_boot });
    }
    let n = means.len();
    let mut resample = vec![0.0; n];
    let stats: Vec<f64> = (0..n_boot)
        .map(|_| {
            for r in resample.iter_mut() {
                *r = means[(rng.uniform() * n as f64) as usize % n];
            }
            mc_asymptotic_variance(&resample, t).expect("same length as input")
        })
        .collect();
    let b = n_boot as f64;
    let mean = stats.iter().sum::<f64>() / b;
    let var = stats.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (b - 1.0);
    Ok(Estimate { value, stderr: var.sqrt() })
}

/// Half the L1 distance between the empirical law of `samples` and `target`.
///
/// The plug-in estimate is biased upward by roughly `√(S/N)` for `S`
/// support states and `N` samples.
pub fn empirical_tv(samples: &[usize], target: &DiscreteTarget) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for s in samples {
        *counts.entry(*s).or_default() += 1;
    }
    let n = samples.len() as f64;
    let mut l1 = 0.0;
    for (&s, &pi) in target.support().iter().zip(target.support_masses()) {
        let f = counts.remove(&s).unwrap_or(0) as f64 / n;
        l1 += (f - pi).abs();
    }
    // Whatever is left was sampled off the support.
    l1 += counts.values().map(|c| *c as f64 / n).sum::<f64>();
    Ok(0.5 * l1)
}
