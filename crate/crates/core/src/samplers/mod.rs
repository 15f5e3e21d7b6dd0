//! Informed and uninformed kernel-selection samplers.
//!
//! Every sampler draws a kernel index from a probability vector, applies that
//! kernel, and (for informed selection) corrects with an accept/reject step
//! so that the target remains invariant and the chain reversible.

mod collection;
mod particle;
mod step;
mod trace;
mod weights;

pub use collection::{Kernel, KernelCollection, ReverseIndex};
pub use particle::{FrozenParticleWeights, OffsetProposal, ParticleAlg2, ParticleWeights};
pub use step::{
    step_alg1, step_alg2, step_delayed, step_hybrid, step_mixed, Alg1, Alg2, Alternating, Delayed, Hybrid, Mixed,
    Sampler, StepOutcome,
};
pub use trace::{run_chain, run_chain_with, ChainTrace};
pub use weights::{WeightFunction, WeightKind, Weights};
