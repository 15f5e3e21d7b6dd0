//! Two crossing planes in `{0, 1, 2}^d`.
//!
//! One plane fixes coordinates `0..d-2` at 0 and leaves the last two free;
//! the other fixes coordinates `2..d` at 0 and leaves the first two free.
//! States on either plane carry mass 1, all others `100^{-d}`. Kernels are
//! single-coordinate Gibbs updates; the informed weight of coordinate `i` is
//! the total mass on the line through `x` along `i`.

use std::sync::Arc;

use super::gibbs_collection;
use crate::error::{Error, Result};
use crate::exact::STATE_CAP;
use crate::samplers::{KernelCollection, WeightFunction};
use crate::simplex::SimplexWeights;
use crate::space::{DiscreteSpace, DiscreteTarget};

/// Whether `x` lies on one of the two planes.
pub fn on_planes(x: &[usize]) -> bool {
    let d = x.len();
    x[..d - 2].iter().all(|&c| c == 0) || x[2..].iter().all(|&c| c == 0)
}

pub struct CrossSetup {
    pub d: usize,
    pub target: Arc<DiscreteTarget>,
    pub kernels: KernelCollection<usize>,
    pub informed: WeightFunction<usize>,
    pub uninformed: SimplexWeights,
}

impl CrossSetup {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSpec(format!("cross target needs d ≥ 2, got {d}")));
        }
        let space = DiscreteSpace::cube(3, d)?;
        if space.total_states() > STATE_CAP {
            return Err(Error::SpaceTooLarge { states: space.total_states(), cap: STATE_CAP });
        }
        let noise = 100f64.powi(-(d as i32));
        let mut coords = vec![0; d];
        let raw = (0..space.total_states())
            .map(|s| {
                space.decode_into(s, &mut coords);
                if on_planes(&coords) {
                    1.0
                } else {
                    noise
                }
            })
            .collect();
        let target = Arc::new(DiscreteTarget::from_dense(space, raw)?);
        let t = Arc::clone(&target);
        let informed = WeightFunction::closed_form(d, move |x: &usize| {
            let space = t.space();
            let raw = (0..d).map(|i| (0..3).map(|v| t.prob(space.with_coord(*x, i, v))).sum()).collect();
            SimplexWeights::from_unnormalized(raw)
        });
        Ok(Self { d, kernels: gibbs_collection(&target), target, informed, uninformed: SimplexWeights::uniform(d) })
    }

    /// The all-zero state, on both planes.
    pub fn start(&self) -> usize {
        0
    }
}
