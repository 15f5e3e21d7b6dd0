use nalgebra::{Complex, DMatrix};

use super::analysis::{check_detailed_balance, stationary_distribution};
use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};

/// Tolerance within which an eigenvalue is treated as the unit eigenvalue.
pub const UNIT_TOL: f64 = 1e-9;

/// Eigenvalues of a square matrix, sorted by decreasing modulus.
///
/// Symmetric input goes through the symmetric solver and yields exactly real
/// values.
pub fn dense_spectrum(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let asym = (m - m.transpose()).abs().max();
    let mut eig: Vec<Complex<f64>> = if asym <= 1e-13 * m.abs().max().max(1.0) {
        let sym = (m + m.transpose()) * 0.5;
        sym.symmetric_eigen().eigenvalues.iter().map(|v| Complex::new(*v, 0.0)).collect()
    } else {
        m.complex_eigenvalues().iter().copied().collect()
    };
    eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
    Ok(eig)
}

/// Eigenvalues of a transition matrix.
///
/// A chain reversible with respect to a positive stationary law is
/// symmetrized as `D^{1/2} P D^{-1/2}` first, so its spectrum is computed by
/// the symmetric solver.
pub fn spectrum(p: &TransitionMatrix) -> Result<Vec<Complex<f64>>> {
    let dense = p.to_dense()?;
    let pi = match stationary_distribution(p) {
        Ok(pi) => pi,
        // Reducible: no unique stationary law to symmetrize with.
        Err(Error::SingularSystem) => return dense_spectrum(&dense),
        Err(e) => return Err(e),
    };
    let scale = pi.iter().copied().fold(0.0, f64::max);
    if pi.iter().all(|v| *v > 0.0) && check_detailed_balance(p, &pi)? <= 1e-12 * scale {
        let n = p.n();
        let root: Vec<f64> = pi.iter().map(|v| v.sqrt()).collect();
        let sym = DMatrix::from_fn(n, n, |i, j| root[i] * dense[(i, j)] / root[j]);
        let sym = (&sym + sym.transpose()) * 0.5;
        let mut eig: Vec<Complex<f64>> =
            sym.symmetric_eigen().eigenvalues.iter().map(|v| Complex::new(*v, 0.0)).collect();
        eig.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)));
        return Ok(eig);
    }
    dense_spectrum(&dense)
}

/// `1 - max |λ|` over the spectrum with one unit eigenvalue removed.
pub fn gap_from_spectrum(eig: &[Complex<f64>]) -> f64 {
    let unit = eig
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - Complex::new(1.0, 0.0)).norm().total_cmp(&(b.1 - Complex::new(1.0, 0.0)).norm()))
        .map(|(k, _)| k);
    let rest = eig
        .iter()
        .enumerate()
        .filter(|(k, _)| Some(*k) != unit)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    if rest >= 1.0 - UNIT_TOL {
        0.0
    } else {
        1.0 - rest
    }
}

/// Absolute spectral gap of a transition matrix.
pub fn spectral_gap(p: &TransitionMatrix) -> Result<f64> {
    Ok(gap_from_spectrum(&spectrum(p)?))
}

/// Absolute spectral gap of a dense stochastic matrix.
pub fn dense_spectral_gap(m: &DMatrix<f64>) -> Result<f64> {
    spectral_gap(&TransitionMatrix::from_dense(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_gap() {
        let p = TransitionMatrix::from_rows(vec![vec![(0, 0.7), (1, 0.3)], vec![(0, 0.1), (1, 0.9)]]).unwrap();
        assert!((spectral_gap(&p).unwrap() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn non_reversible_cycle() {
        // Lazy 3-cycle: non-unit eigenvalues ½(1 + e^{±2πi/3}) have modulus ½.
        let rows = (0..3).map(|i| vec![(i, 0.5), ((i + 1) % 3, 0.5)]).collect();
        let p = TransitionMatrix::from_rows(rows).unwrap();
        assert!((spectral_gap(&p).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reducible_chain_has_zero_gap() {
        let p = TransitionMatrix::identity(3);
        assert_eq!(gap_from_spectrum(&dense_spectrum(&p.to_dense().unwrap()).unwrap()), 0.0);
    }
}
