use nalgebra::{Complex, DMatrix};

use super::folding::{build_folding_maps, fold_unfold, FoldingMaps};
use super::hitting::expected_hitting_times;
use super::induce::{induce, Variant};
use super::matrix::TransitionMatrix;
use super::spectral::{dense_spectrum, gap_from_spectrum, spectrum};
use crate::error::Result;
use crate::zoo::hypercube::HypercubeSetup;

/// Folded-chain quantities for the noise-free hypercube path.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub d: usize,
    pub n: usize,
    /// Uninformed folded chain `Q`.
    pub q: DMatrix<f64>,
    /// Informed folded chain `Q*`.
    pub q_star: DMatrix<f64>,
    /// Expected steps from the start corner to the middle folded state.
    pub hitting_uninformed: f64,
    pub hitting_informed: f64,
    /// `γ(Q)` and the gap of the informed chain made lazy with `λ = 2/d`.
    pub gap_uninformed: f64,
    pub gap_informed_lazy: f64,
    /// `max |ΓΩ - I|`.
    pub gamma_omega_defect: f64,
    /// Largest distance between the sorted spectra of `P̄` and `Q ∪ {0}^{(n-3)d}`,
    /// taken over both chains.
    pub spectrum_union_defect: f64,
    /// Number of eigenvalues of `P̄` within `1e-9` of zero, for the
    /// uninformed chain.
    pub zero_multiplicity: usize,
}

fn sorted_real(eig: &[Complex<f64>]) -> Vec<f64> {
    let mut v: Vec<f64> = eig.iter().map(|c| c.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn union_defect(lifted: &DMatrix<f64>, q: &DMatrix<f64>, zeros: usize) -> Result<(f64, usize)> {
    let big = sorted_real(&dense_spectrum(lifted)?);
    let mut small = sorted_real(&dense_spectrum(q)?);
    small.extend(std::iter::repeat_n(0.0, zeros));
    small.sort_by(f64::total_cmp);
    let imag = dense_spectrum(lifted)?.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let defect = big.iter().zip(&small).map(|(a, b)| (a - b).abs()).fold(imag, f64::max);
    let near_zero = big.iter().filter(|v| v.abs() < 1e-9).count();
    Ok((defect, near_zero))
}

/// Build both samplers on the noise-free path with `d` edges of `n` states,
/// fold them and collect the identities linking the two.
pub fn verify_lemma_suite(d: usize, n: usize) -> Result<LemmaReport> {
    let setup = HypercubeSetup::new(n, d, 0.0)?;
    let order = setup.spec.path_order();
    let rsgs = induce(&setup.kernels, &setup.informed, &Variant::Hybrid(setup.uninformed.clone()), &setup.target)?;
    let inf = induce(&setup.kernels, &setup.informed, &Variant::Alg1, &setup.target)?;
    let p = rsgs.restrict_to(&order)?.to_dense()?;
    let p_star = inf.restrict_to(&order)?.to_dense()?;
    let maps: FoldingMaps = build_folding_maps(d, n)?;

    let (q, lifted) = fold_unfold(&p, &maps)?;
    let (q_star, lifted_star) = fold_unfold(&p_star, &maps)?;
    let lambda = 2.0 / d as f64;
    let lazy = TransitionMatrix::from_dense(&p_star)?.lazy(lambda)?.to_dense()?;
    let (q_star_lazy, _) = fold_unfold(&lazy, &maps)?;

    let middle = d;
    let h = expected_hitting_times(&TransitionMatrix::from_dense(&q)?, &[middle])?;
    let h_star = expected_hitting_times(&TransitionMatrix::from_dense(&q_star)?, &[middle])?;

    let gap_uninformed = gap_from_spectrum(&spectrum(&TransitionMatrix::from_dense(&q)?)?);
    let gap_informed_lazy = gap_from_spectrum(&spectrum(&TransitionMatrix::from_dense(&q_star_lazy)?)?);

    let id = &maps.gamma * &maps.omega;
    let gamma_omega_defect = (id - DMatrix::<f64>::identity(2 * d + 1, 2 * d + 1)).abs().max();

    let zeros = (n - 3) * d;
    let (u1, zero_multiplicity) = union_defect(&lifted, &q, zeros)?;
    let (u2, _) = union_defect(&lifted_star, &q_star, zeros)?;

    Ok(LemmaReport {
        d,
        n,
        q,
        q_star,
        hitting_uninformed: h[0],
        hitting_informed: h_star[0],
        gap_uninformed,
        gap_informed_lazy,
        gamma_omega_defect,
        spectrum_union_defect: u1.max(u2),
        zero_multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_path_identities() {
        let r = verify_lemma_suite(2, 4).unwrap();
        assert!(r.gamma_omega_defect < 1e-14);
        assert!(r.spectrum_union_defect < 1e-9);
        assert_eq!(r.zero_multiplicity, 2);
        assert!((r.gap_uninformed - r.gap_informed_lazy).abs() < 1e-9);
    }
}
