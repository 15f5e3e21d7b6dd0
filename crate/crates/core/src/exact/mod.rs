//! Exact analysis of chains on enumerable state spaces.
//!
//! [`induce`] turns a kernel collection, a weight function and a sampler
//! variant into the transition matrix on the target support. The remaining
//! functions study such matrices: reversibility, total-variation curves,
//! mixing times, spectral gaps, asymptotic variances, hitting times, and the
//! folding of hypercube path chains onto `2d + 1` states.

mod analysis;
mod coupling;
mod folding;
mod hitting;
mod induce;
mod lemma;
mod matrix;
mod spectral;
mod variance;

pub use analysis::{check_detailed_balance, check_invariance, mixing_time, stationary_distribution, tv_curve, tv_distance};
pub use coupling::{mirror_defect, reflection_coupling};
pub use folding::{build_folding_maps, fold_unfold, FoldingMaps};
pub use hitting::expected_hitting_times;
pub use induce::{induce, InducedChain, Variant, STATE_CAP};
pub use lemma::{verify_lemma_suite, LemmaReport};
pub use matrix::{TransitionMatrix, DENSE_CAP, STOCHASTIC_TOL};
pub use spectral::{dense_spectral_gap, dense_spectrum, gap_from_spectrum, spectral_gap, spectrum, UNIT_TOL};
pub use variance::exact_asymptotic_variance;
