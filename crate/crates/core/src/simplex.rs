//! Probability vectors over kernel indices.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A point of the probability simplex: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights(Vec<f64>);

impl SimplexWeights {
    /// Normalize non-negative `raw` weights.
    pub fn from_unnormalized(raw: Vec<f64>) -> Result<Self> {
        simplex_normalize(raw)
    }

    /// The uniform vector of length `n`.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform weights need at least one entry");
        SimplexWeights(vec![1.0 / n as f64; n])
    }

    /// All mass on index `i` out of `n`.
    pub fn point_mass(n: usize, i: usize) -> Self {
        let mut w = vec![0.0; n];
        w[i] = 1.0;
        SimplexWeights(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `a * self + (1 - a) * other`.
    pub fn blend(&self, a: f64, other: &SimplexWeights) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        simplex_normalize(self.0.iter().zip(&other.0).map(|(x, y)| a * x + (1.0 - a) * y).collect())
    }

    /// Draw an index with probability proportional to its weight.
    pub fn sample(&self, rng: &mut RngStream) -> usize {
        sample_categorical(&self.0, rng)
    }
}

/// Divide by the sum, rejecting negative, non-finite or all-zero input.
pub fn simplex_normalize(mut raw: Vec<f64>) -> Result<SimplexWeights> {
    if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::NonFinite("weights"));
    }
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(Error::AllZero);
    }
    for w in raw.iter_mut() {
        *w /= total;
    }
    Ok(SimplexWeights(raw))
}

/// Inverse-CDF draw from unnormalized non-negative weights.
///
/// Zero-weight entries are never returned.
pub fn sample_categorical(weights: &[f64], rng: &mut RngStream) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.uniform() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalizes() {
        let w = simplex_normalize(vec![1.0, 3.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(simplex_normalize(vec![0.0, 0.0]), Err(Error::AllZero));
        assert!(simplex_normalize(vec![1.0, f64::NAN]).is_err());
        assert!(simplex_normalize(vec![1.0, -0.5]).is_err());
    }

    #[test]
    fn categorical_frequencies() {
        let mut rng = RngStream::new(11, 0);
        let w = [0.2, 0.0, 0.5, 0.3];
        let mut counts = [0usize; 4];
        let n = 200_000;
        for _ in 0..n {
            counts[sample_categorical(&w, &mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        for i in [0, 2, 3] {
            let f = counts[i] as f64 / n as f64;
            assert!((f - w[i]).abs() < 4.0 * (w[i] * (1.0 - w[i]) / n as f64).sqrt());
        }
    }

    proptest! {
        #[test]
        fn normalized_sums_to_one(raw in proptest::collection::vec(0.0f64..1e6, 1..20)) {
            prop_assume!(raw.iter().any(|w| *w > 0.0));
            let w = simplex_normalize(raw).unwrap();
            let s: f64 = w.as_slice().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
            prop_assert!(w.as_slice().iter().all(|x| *x >= 0.0));
        }

        #[test]
        fn categorical_hits_support(raw in proptest::collection::vec(0.0f64..10.0, 1..10), seed in 0u64..1000) {
            prop_assume!(raw.iter().any(|w| *w > 0.0));
            let mut rng = RngStream::new(seed, 0);
            let i = sample_categorical(&raw, &mut rng);
            prop_assert!(raw[i] > 0.0);
        }
    }
}
