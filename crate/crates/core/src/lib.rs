//! Locally informed Markov chain Monte Carlo.
//!
//! A sampler holds a finite collection of reversible kernels and, at every
//! iteration, picks one according to a state-dependent probability vector
//! `ω(x)`. Selecting a kernel this way breaks invariance of the target, so
//! the proposed move is corrected by an extra accept/reject step. The crate
//! offers the two corrections ([`samplers::step_alg1`] and
//! [`samplers::step_alg2`]), the uninformed hybrid baseline, lazy and mixed
//! variants, and an exact engine ([`exact`]) that builds transition matrices
//! on enumerable spaces for spectral, mixing-time and variance analysis.
//!
//! ```
//! use locinf::zoo::three_state::ThreeStateSetup;
//! use locinf::exact::{induce, spectral_gap, Variant};
//!
//! let setup = ThreeStateSetup::new(0.1).unwrap();
//! let informed = induce(&setup.kernels, &setup.informed, &Variant::Alg2, &setup.target).unwrap();
//! let gap = spectral_gap(&informed.matrix).unwrap();
//! assert!((gap - 0.1 * (3.0 - 0.5) / (1.0 - 0.01)).abs() < 1e-10);
//! ```

pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod kernel;
pub mod rng;
pub mod samplers;
pub mod simplex;
pub mod space;
pub mod zoo;

pub use error::{Error, Result};
pub use rng::RngStream;
pub use simplex::SimplexWeights;
