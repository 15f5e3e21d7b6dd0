use nalgebra::{DMatrix, DVector};

use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};

/// Asymptotic variance of `Σ f(X_t) / √T` under a stationary chain.
///
/// Solves the Poisson equation `(I - P + 1 πᵀ) g = f̄` for the centred
/// function `f̄ = f - π f` and returns `2 ⟨f̄, g⟩_π - ⟨f̄, f̄⟩_π`.
pub fn exact_asymptotic_variance(p: &TransitionMatrix, pi: &[f64], f: &[f64]) -> Result<f64> {
    let n = p.n();
    if pi.len() != n || f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: pi.len().min(f.len()) });
    }
    let mean: f64 = pi.iter().zip(f).map(|(a, b)| a * b).sum();
    let fc: Vec<f64> = f.iter().map(|v| v - mean).collect();
    let dense = p.to_dense()?;
    let a = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - dense[(i, j)] + pi[j]);
    let g = a.lu().solve(&DVector::from_vec(fc.clone())).ok_or(Error::SingularSystem)?;
    let fg: f64 = (0..n).map(|i| pi[i] * fc[i] * g[i]).sum();
    let ff: f64 = (0..n).map(|i| pi[i] * fc[i] * fc[i]).sum();
    Ok(2.0 * fg - ff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_closed_form() {
        // For a two-state chain with second eigenvalue ρ = 1 - a - b and
        // f = indicator of state 1: v = π0 π1 (1 + ρ) / (1 - ρ).
        let (a, b) = (0.2, 0.05);
        let p = TransitionMatrix::from_rows(vec![vec![(0, 1.0 - a), (1, a)], vec![(0, b), (1, 1.0 - b)]]).unwrap();
        let pi = [b / (a + b), a / (a + b)];
        let rho = 1.0 - a - b;
        let v = exact_asymptotic_variance(&p, &pi, &[0.0, 1.0]).unwrap();
        assert!((v - pi[0] * pi[1] * (1.0 + rho) / (1.0 - rho)).abs() < 1e-12);
    }

    #[test]
    fn iid_chain_gives_plain_variance() {
        let pi = [0.2, 0.3, 0.5];
        let rows = (0..3).map(|_| pi.iter().copied().enumerate().collect()).collect();
        let p = TransitionMatrix::from_rows(rows).unwrap();
        let f = [1.0, -2.0, 4.0];
        let m: f64 = pi.iter().zip(&f).map(|(a, b)| a * b).sum();
        let var: f64 = pi.iter().zip(&f).map(|(a, b)| a * (b - m) * (b - m)).sum();
        assert!((exact_asymptotic_variance(&p, &pi, &f).unwrap() - var).abs() < 1e-12);
    }
}
