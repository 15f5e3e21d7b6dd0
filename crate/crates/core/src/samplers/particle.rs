use std::sync::Arc;

use super::collection::KernelCollection;
use super::step::{step_alg2, Sampler, StepOutcome};
use super::weights::Weights;
use crate::error::{Error, Result};
use crate::kernel::LogDensity;
use crate::rng::RngStream;
use crate::simplex::SimplexWeights;

const PARTICLE_TAG: u64 = 0x7061_7274_6963_6c65;

/// A proposal of the form `y = x + η` with `η` independent of `x`.
pub trait OffsetProposal: Send + Sync {
    fn draw_offset(&self, rng: &mut RngStream) -> Vec<f64>;
}

/// Weights estimated by averaging target density over proposal particles:
/// `ω_i(x) ∝ (1/L) Σ_l π(x + η_{i,l})`.
///
/// The offsets are drawn once per iteration and shared by the current and
/// the proposed state, so each iteration is an ordinary informed step under a
/// deterministic (offset-indexed) weight function.
pub struct ParticleWeights {
    pub offsets: Vec<Arc<dyn OffsetProposal>>,
    pub target: Arc<dyn LogDensity<Vec<f64>>>,
    pub n_particles: usize,
}

impl ParticleWeights {
    pub fn freeze(&self, rng: &mut RngStream) -> Result<FrozenParticleWeights> {
        if self.n_particles == 0 {
            return Err(Error::InvalidSpec("particle count must be positive".into()));
        }
        let etas = self
            .offsets
            .iter()
            .map(|p| (0..self.n_particles).map(|_| p.draw_offset(rng)).collect())
            .collect();
        Ok(FrozenParticleWeights { etas, target: Arc::clone(&self.target) })
    }
}

/// Particle weights with their offsets fixed.
pub struct FrozenParticleWeights {
    etas: Vec<Vec<Vec<f64>>>,
    target: Arc<dyn LogDensity<Vec<f64>>>,
}

impl Weights<Vec<f64>> for FrozenParticleWeights {
    fn weights(&self, x: &Vec<f64>) -> Result<SimplexWeights> {
        let mut logs: Vec<Vec<f64>> = Vec::with_capacity(self.etas.len());
        let mut top = f64::NEG_INFINITY;
        for particles in &self.etas {
            let row: Vec<f64> = particles
                .iter()
                .map(|eta| {
                    let z: Vec<f64> = x.iter().zip(eta).map(|(a, b)| a + b).collect();
                    self.target.log_density(&z)
                })
                .collect();
            if row.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
                return Err(Error::NonFiniteDensity);
            }
            top = row.iter().copied().fold(top, f64::max);
            logs.push(row);
        }
        if top == f64::NEG_INFINITY {
            // No particle found mass anywhere; fall back to uniform selection.
            return Ok(SimplexWeights::uniform(self.etas.len()));
        }
        SimplexWeights::from_unnormalized(logs.iter().map(|row| row.iter().map(|v| (v - top).exp()).sum()).collect())
    }

    fn num_kernels(&self) -> usize {
        self.etas.len()
    }
}

/// Single-correction informed sampler with particle-estimated weights.
pub struct ParticleAlg2 {
    pub kernels: Arc<KernelCollection<Vec<f64>>>,
    pub particles: ParticleWeights,
}

impl Sampler<Vec<f64>> for ParticleAlg2 {
    fn step(&self, t: usize, x: &Vec<f64>, rng: &mut RngStream) -> Result<StepOutcome<Vec<f64>>> {
        let mut sub = rng.derive(PARTICLE_TAG ^ t as u64);
        let frozen = self.particles.freeze(&mut sub)?;
        step_alg2(x, &self.kernels, &frozen, rng)
    }
}
