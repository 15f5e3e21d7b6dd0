use super::matrix::TransitionMatrix;
use crate::error::{Error, Result};
use crate::samplers::{KernelCollection, Weights};
use crate::simplex::SimplexWeights;
use crate::space::DiscreteTarget;

/// Largest support size for which transition matrices are built.
pub const STATE_CAP: usize = 200_000;

/// Which sampler's transition matrix to build.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    /// Informed selection, full kernel step, weight correction.
    Alg1,
    /// Informed selection with a single extended-space MH correction.
    Alg2,
    /// Constant selection vector.
    Hybrid(SimplexWeights),
    /// `λ inner + (1 - λ) I`.
    Delayed { lambda: f64, inner: Box<Variant> },
    /// `ϖ informed + (1 - ϖ) uninformed`.
    Mixed { varpi: f64, informed: Box<Variant>, uninformed: Box<Variant> },
}

/// A transition matrix on the support of a discrete target.
///
/// Row `k` corresponds to the full-space state `states[k]`.
#[derive(Debug, Clone)]
pub struct InducedChain {
    pub matrix: TransitionMatrix,
    pub states: Vec<usize>,
    pub pi: Vec<f64>,
}

impl InducedChain {
    /// Row index of a full-space state.
    pub fn position(&self, state: usize) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// The point mass at `state`, as a distribution over rows.
    pub fn point_mass(&self, state: usize) -> Result<Vec<f64>> {
        let k = self.position(state).ok_or(Error::LeavesSupport { from: state })?;
        let mut mu = vec![0.0; self.states.len()];
        mu[k] = 1.0;
        Ok(mu)
    }

    /// The sub-chain on the listed full-space states, in the given order.
    pub fn restrict_to(&self, order: &[usize]) -> Result<TransitionMatrix> {
        let idx = order
            .iter()
            .map(|s| self.position(*s).ok_or(Error::LeavesSupport { from: *s }))
            .collect::<Result<Vec<_>>>()?;
        self.matrix.restrict(&idx)
    }
}

struct Ctx<'a> {
    kernels: &'a KernelCollection<usize>,
    target: &'a DiscreteTarget,
    omega: Vec<SimplexWeights>,
}

impl Ctx<'_> {
    fn omega_at(&self, state: usize) -> Result<&SimplexWeights> {
        let k = self.target.support_position(state).ok_or(Error::LeavesSupport { from: state })?;
        Ok(&self.omega[k])
    }

    fn row(&self, variant: &Variant, x: usize) -> Result<Vec<(usize, f64)>> {
        match variant {
            Variant::Alg1 => self.alg1_row(x),
            Variant::Alg2 => self.alg2_row(x),
            Variant::Hybrid(wc) => {
                if wc.len() != self.kernels.len() {
                    return Err(Error::DimensionMismatch { expected: self.kernels.len(), found: wc.len() });
                }
                let mut out = Vec::new();
                for i in 0..self.kernels.len() {
                    let w = wc.get(i);
                    if w > 0.0 {
                        out.extend(self.kernels.transition_row(i, &x)?.into_iter().map(|(y, p)| (y, w * p)));
                    }
                }
                Ok(out)
            }
            Variant::Delayed { lambda, inner } => {
                if !(*lambda > 0.0 && *lambda <= 1.0) {
                    return Err(Error::BadProbability { name: "lambda", value: *lambda });
                }
                let mut out: Vec<_> = self.row(inner, x)?.into_iter().map(|(y, p)| (y, lambda * p)).collect();
                out.push((x, 1.0 - lambda));
                Ok(out)
            }
            Variant::Mixed { varpi, informed, uninformed } => {
                if !(0.0..=1.0).contains(varpi) {
                    return Err(Error::BadProbability { name: "varpi", value: *varpi });
                }
                let mut out: Vec<_> = self.row(informed, x)?.into_iter().map(|(y, p)| (y, varpi * p)).collect();
                out.extend(self.row(uninformed, x)?.into_iter().map(|(y, p)| (y, (1.0 - varpi) * p)));
                Ok(out)
            }
        }
    }

    fn alg1_row(&self, x: usize) -> Result<Vec<(usize, f64)>> {
        let wx = self.omega_at(x)?;
        let mut out = Vec::new();
        let mut stay = 0.0;
        for i in 0..self.kernels.len() {
            let wi = wx.get(i);
            if wi <= 0.0 {
                continue;
            }
            for (y, p) in self.kernels.transition_row(i, &x)? {
                if y == x {
                    stay += wi * p;
                    continue;
                }
                let j = self.kernels.reverse_index(i, &x, &y);
                let a = (self.omega_at(y)?.get(j) / wi).min(1.0);
                out.push((y, wi * p * a));
                stay += wi * p * (1.0 - a);
            }
        }
        out.push((x, stay));
        Ok(out)
    }

    fn alg2_row(&self, x: usize) -> Result<Vec<(usize, f64)>> {
        if !self.kernels.all_mh() {
            return Err(Error::KernelTagMismatch("single-correction informed sampling"));
        }
        let wx = self.omega_at(x)?;
        let px = self.target.prob(x);
        let mut out = Vec::new();
        let mut stay = 0.0;
        for i in 0..self.kernels.len() {
            let wi = wx.get(i);
            if wi <= 0.0 {
                continue;
            }
            let ki = self.kernels.mh(i).expect("checked above");
            let support = ki
                .proposal
                .support(&x)
                .ok_or_else(|| Error::InvalidSpec("proposal has no enumerable support".into()))?;
            for (y, q) in support {
                if q <= 0.0 {
                    continue;
                }
                if y == x {
                    stay += wi * q;
                    continue;
                }
                let py = self.target.prob(y);
                let a = if py > 0.0 {
                    let j = self.kernels.reverse_index(i, &x, &y);
                    let qr = self.kernels.mh(j).expect("checked above").proposal.log_density(&y, &x).exp();
                    (py * qr * self.omega_at(y)?.get(j) / (px * q * wi)).min(1.0)
                } else {
                    0.0
                };
                out.push((y, wi * q * a));
                stay += wi * q * (1.0 - a);
            }
        }
        out.push((x, stay));
        Ok(out)
    }
}

/// Build the transition matrix of `variant` restricted to the target support.
///
/// Every support state gets a row; a kernel that puts mass outside the
/// support is reported as [`Error::LeavesSupport`].
pub fn induce(
    kernels: &KernelCollection<usize>,
    weights: &dyn Weights<usize>,
    variant: &Variant,
    target: &DiscreteTarget,
) -> Result<InducedChain> {
    let states = target.support().to_vec();
    if states.len() > STATE_CAP {
        return Err(Error::SpaceTooLarge { states: states.len(), cap: STATE_CAP });
    }
    if weights.num_kernels() != kernels.len() {
        return Err(Error::DimensionMismatch { expected: kernels.len(), found: weights.num_kernels() });
    }
    let omega = states.iter().map(|s| weights.weights(s)).collect::<Result<Vec<_>>>()?;
    let ctx = Ctx { kernels, target, omega };
    let mut rows = Vec::with_capacity(states.len());
    for &x in &states {
        let row = ctx.row(variant, x)?;
        let mapped = row
            .into_iter()
            .filter(|(_, p)| *p != 0.0)
            .map(|(y, p)| target.support_position(y).map(|k| (k, p)).ok_or(Error::LeavesSupport { from: x }))
            .collect::<Result<Vec<_>>>()?;
        rows.push(mapped);
    }
    let matrix = TransitionMatrix::from_rows(rows)?;
    Ok(InducedChain { matrix, states, pi: target.support_masses().to_vec() })
}
