//! A path of `d` edges through the `m^d` hypercube, optionally immersed in
//! uniform background noise.
//!
//! Coordinates are 0-based. The path starts at the all-zero corner `V1`,
//! runs along coordinate 0 to `V2 = (m-1, 0, .., 0)`, then along coordinate 1
//! to `V3 = (m-1, m-1, 0, .., 0)`, and so on up to the opposite corner
//! `V_{d+1}`. The path carries mass `1 - p` uniformly, the rest of the cube
//! carries `p` uniformly.

use std::sync::Arc;

use super::gibbs_collection;
use crate::error::{Error, Result};
use crate::exact::STATE_CAP;
use crate::samplers::{KernelCollection, WeightFunction};
use crate::simplex::SimplexWeights;
use crate::space::{DiscreteSpace, DiscreteTarget};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypercubeSpec {
    pub m: usize,
    pub d: usize,
    pub p: f64,
}

impl HypercubeSpec {
    pub fn new(m: usize, d: usize, p: f64) -> Result<Self> {
        if m < 3 || d < 2 {
            return Err(Error::InvalidSpec(format!("hypercube needs m ≥ 3 and d ≥ 2, got m = {m}, d = {d}")));
        }
        if !(0.0..1.0).contains(&p) {
            return Err(Error::BadProbability { name: "p", value: p });
        }
        Ok(Self { m, d, p })
    }

    pub fn space(&self) -> DiscreteSpace {
        DiscreteSpace::cube(self.m, self.d).expect("validated shape")
    }

    /// Whether a coordinate vector lies on the path.
    pub fn on_path(&self, x: &[usize]) -> bool {
        match x.iter().position(|&c| c != self.m - 1) {
            None => true,
            Some(i) => x[i + 1..].iter().all(|&c| c == 0),
        }
    }

    /// Path states in walking order `V1, E1, V2, .., V_{d+1}`.
    pub fn path_order(&self) -> Vec<usize> {
        let space = self.space();
        let mut x = vec![0usize; self.d];
        let mut out = vec![space.encode(&x)];
        for k in 0..self.d {
            for v in 1..self.m {
                x[k] = v;
                out.push(space.encode(&x));
            }
        }
        out
    }

    /// Number of path states, `(m - 1) d + 1`.
    pub fn path_len(&self) -> usize {
        (self.m - 1) * self.d + 1
    }

    pub fn target(&self) -> Result<DiscreteTarget> {
        let space = self.space();
        let path = self.path_order();
        let on = (1.0 - self.p) / path.len() as f64;
        if self.p == 0.0 {
            let pairs = path.iter().map(|&s| (s, on)).collect();
            return Ok(DiscreteTarget::from_pairs(space, pairs)?.with_filament(path));
        }
        let total = space.total_states();
        if total > STATE_CAP {
            return Err(Error::SpaceTooLarge { states: total, cap: STATE_CAP });
        }
        let off = self.p / (total - path.len()) as f64;
        let mut raw = vec![off; total];
        for &s in &path {
            raw[s] = on;
        }
        Ok(DiscreteTarget::from_dense(space, raw)?.with_filament(path))
    }

    /// Directions whose coordinate line through `x` leaves the path.
    pub fn exit_directions(&self, x: &[usize]) -> Vec<bool> {
        let mut y = x.to_vec();
        (0..self.d)
            .map(|i| {
                let keep = y[i];
                let exits = (0..self.m).any(|v| {
                    y[i] = v;
                    !self.on_path(&y)
                });
                y[i] = keep;
                exits
            })
            .collect()
    }

    /// Selection weights on the path: with probability `p` a uniformly chosen
    /// exit direction, otherwise a uniformly chosen direction that stays on
    /// the path. Off the path the choice is uniform.
    ///
    /// With `p = 0` this puts all mass on the edge direction inside an edge
    /// and splits evenly between the two incident edges at an inner corner.
    pub fn weights(&self) -> WeightFunction<usize> {
        let spec = *self;
        let space = self.space();
        WeightFunction::closed_form(self.d, move |x: &usize| {
            let c = space.decode(*x);
            if !spec.on_path(&c) {
                return Ok(SimplexWeights::uniform(spec.d));
            }
            let exits = spec.exit_directions(&c);
            let n_exit = exits.iter().filter(|e| **e).count();
            let n_stay = spec.d - n_exit;
            let raw = exits
                .iter()
                .map(|&e| match (e, n_exit, n_stay) {
                    (true, _, 0) => 1.0 / n_exit as f64,
                    (false, 0, _) => 1.0 / n_stay as f64,
                    (true, _, _) => spec.p / n_exit as f64,
                    (false, _, _) => (1.0 - spec.p) / n_stay as f64,
                })
                .collect();
            SimplexWeights::from_unnormalized(raw)
        })
    }
}

/// Everything needed to sample or analyse a hypercube target.
pub struct HypercubeSetup {
    pub spec: HypercubeSpec,
    pub target: Arc<DiscreteTarget>,
    pub kernels: KernelCollection<usize>,
    pub informed: WeightFunction<usize>,
    pub uninformed: SimplexWeights,
}

impl HypercubeSetup {
    pub fn new(m: usize, d: usize, p: f64) -> Result<Self> {
        let spec = HypercubeSpec::new(m, d, p)?;
        let target = Arc::new(spec.target()?);
        Ok(Self {
            kernels: gibbs_collection(&target),
            informed: spec.weights(),
            uninformed: SimplexWeights::uniform(d),
            spec,
            target,
        })
    }

    /// The corner `V1`, the usual starting state.
    pub fn start(&self) -> usize {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::Weights;

    #[test]
    fn path_has_expected_length_and_mass() {
        let s = HypercubeSpec::new(10, 3, 0.0).unwrap();
        let t = s.target().unwrap();
        assert_eq!(t.support().len(), 28);
        assert_eq!(s.path_order().len(), s.path_len());
        let noisy = HypercubeSpec::new(4, 3, 0.1).unwrap().target().unwrap();
        let on: f64 = noisy.filament().iter().map(|&z| noisy.prob(z)).sum();
        assert!((on - 0.9).abs() < 1e-14);
    }

    #[test]
    fn noise_free_weights() {
        let s = HypercubeSpec::new(10, 4, 0.0).unwrap();
        let w = s.weights();
        let space = s.space();
        // Inside the first edge all mass is on coordinate 0.
        assert_eq!(w.weights(&space.encode(&[3, 0, 0, 0])).unwrap().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        // Second corner: split between the two incident edges.
        assert_eq!(w.weights(&space.encode(&[9, 0, 0, 0])).unwrap().as_slice(), &[0.5, 0.5, 0.0, 0.0]);
        // Third corner.
        assert_eq!(w.weights(&space.encode(&[9, 9, 0, 0])).unwrap().as_slice(), &[0.0, 0.5, 0.5, 0.0]);
        // Start corner.
        assert_eq!(w.weights(&0).unwrap().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn noisy_weights_split_by_exit_set() {
        let s = HypercubeSpec::new(10, 2, 0.1).unwrap();
        let w = s.weights();
        let space = s.space();
        // Interior of edge 1: direction 0 stays, direction 1 exits.
        let v = w.weights(&space.encode(&[4, 0])).unwrap();
        assert!((v.get(0) - 0.9).abs() < 1e-15 && (v.get(1) - 0.1).abs() < 1e-15);
        // Off the path: uniform.
        assert_eq!(w.weights(&space.encode(&[4, 4])).unwrap().as_slice(), &[0.5, 0.5]);
        // Middle corner: both lines lie on the path.
        assert_eq!(w.weights(&space.encode(&[9, 0])).unwrap().as_slice(), &[0.5, 0.5]);
    }
}
