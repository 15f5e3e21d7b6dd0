//! A three-state target with no geometry: `π = ((1-p)/2, (1-p)/2, p)`.
//!
//! Two deterministic proposals jump to the smallest and to the largest of
//! the other two states. Neither can propose its own reverse move, so the
//! collection carries a reverse index pairing each move with the proposal
//! that undoes it. With uniform selection this reproduces Metropolis-Hastings
//! with a uniform proposal over the other states.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{LogDensity, MhKernel, Proposal};
use crate::rng::RngStream;
use crate::samplers::{Kernel, KernelCollection, WeightFunction};
use crate::simplex::SimplexWeights;
use crate::space::{DiscreteSpace, DiscreteTarget};

fn lowest_other(x: usize) -> usize {
    if x == 0 {
        1
    } else {
        0
    }
}

fn highest_other(x: usize) -> usize {
    if x == 2 {
        1
    } else {
        2
    }
}

/// Point-mass proposal `Q(x, .) = δ_{f(x)}`.
pub struct DeterministicJump {
    map: fn(usize) -> usize,
}

impl Proposal<usize> for DeterministicJump {
    fn sample(&self, from: &usize, _rng: &mut RngStream) -> usize {
        (self.map)(*from)
    }

    fn log_density(&self, from: &usize, to: &usize) -> f64 {
        if (self.map)(*from) == *to {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }

    fn support(&self, from: &usize) -> Option<Vec<(usize, f64)>> {
        Some(vec![((self.map)(*from), 1.0)])
    }
}

pub struct ThreeStateSetup {
    pub p: f64,
    pub target: Arc<DiscreteTarget>,
    pub kernels: KernelCollection<usize>,
    /// `ω(x) ∝ (π(lowest other), π(highest other))`.
    pub informed: WeightFunction<usize>,
    pub uninformed: SimplexWeights,
}

impl ThreeStateSetup {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::BadProbability { name: "p", value: p });
        }
        let space = DiscreteSpace::new(vec![3])?;
        let target = Arc::new(DiscreteTarget::from_dense(space, vec![(1.0 - p) / 2.0, (1.0 - p) / 2.0, p])?);
        let dyn_target = Arc::clone(&target) as Arc<dyn LogDensity<usize>>;
        let kernels = KernelCollection::new(vec![
            Kernel::Mh(MhKernel::new(Arc::new(DeterministicJump { map: lowest_other }), Arc::clone(&dyn_target))),
            Kernel::Mh(MhKernel::new(Arc::new(DeterministicJump { map: highest_other }), dyn_target)),
        ])?
        .with_reverse_index(|_, x: &usize, y: &usize| if lowest_other(*y) == *x { 0 } else { 1 });
        let t = Arc::clone(&target);
        let informed = WeightFunction::closed_form(2, move |x: &usize| {
            SimplexWeights::from_unnormalized(vec![t.prob(lowest_other(*x)), t.prob(highest_other(*x))])
        });
        Ok(Self { p, target, kernels, informed, uninformed: SimplexWeights::uniform(2) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{check_detailed_balance, induce, Variant};

    #[test]
    fn uniform_selection_is_plain_mh() {
        let s = ThreeStateSetup::new(0.2).unwrap();
        let c = induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target).unwrap();
        let pi = [0.4f64, 0.4, 0.2];
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    let expected = 0.5 * (pi[y] / pi[x]).min(1.0);
                    assert!((c.matrix.get(x, y) - expected).abs() < 1e-15);
                }
            }
        }
        assert!(check_detailed_balance(&c.matrix, &c.pi).unwrap() < 1e-15);
    }
}
