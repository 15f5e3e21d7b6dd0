//! Targets, proposals and the reversible kernels built from them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::simplex::sample_categorical;
use crate::space::DiscreteTarget;

/// Unnormalized log density of a target. `-inf` marks zero density.
pub trait LogDensity<S>: Send + Sync {
    fn log_density(&self, x: &S) -> f64;
}

impl LogDensity<usize> for DiscreteTarget {
    fn log_density(&self, x: &usize) -> f64 {
        self.log_prob(*x)
    }
}

/// A proposal distribution `Q(x, .)`.
pub trait Proposal<S>: Send + Sync {
    fn sample(&self, from: &S, rng: &mut RngStream) -> S;

    /// `log Q(from, to)`, `-inf` when `to` cannot be proposed.
    fn log_density(&self, from: &S, to: &S) -> f64;

    /// The full proposal distribution, when it is finite and enumerable.
    fn support(&self, _from: &S) -> Option<Vec<(S, f64)>> {
        None
    }
}

/// A Markov kernel reversible with respect to some target.
pub trait ReversibleKernel<S>: Send + Sync {
    fn step(&self, x: &S, rng: &mut RngStream) -> Result<S>;

    /// The full transition row `P(x, .)`, when enumerable.
    fn transition_row(&self, _x: &S) -> Option<Result<Vec<(S, f64)>>> {
        None
    }
}

/// Log acceptance probability for the ratio `exp(log_num - log_den)`.
///
/// A zero numerator rejects. A zero denominator with a positive numerator
/// accepts, which only happens when a chain starts outside the support.
pub fn log_accept(log_num: f64, log_den: f64) -> Result<f64> {
    if log_num.is_nan() || log_den.is_nan() || log_den == f64::INFINITY || log_num == f64::INFINITY {
        return Err(Error::NonFiniteDensity);
    }
    if log_num == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    if log_den == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok((log_num - log_den).min(0.0))
}

/// Accept with probability `exp(log_alpha)`.
pub fn coin(log_alpha: f64, rng: &mut RngStream) -> bool {
    if log_alpha >= 0.0 {
        return true;
    }
    if log_alpha == f64::NEG_INFINITY {
        // Still consume a draw so stream positions do not depend on the outcome.
        rng.uniform();
        return false;
    }
    rng.uniform() < log_alpha.exp()
}

/// A Metropolis-Hastings kernel: proposal plus target.
pub struct MhKernel<S> {
    pub proposal: Arc<dyn Proposal<S>>,
    pub target: Arc<dyn LogDensity<S>>,
}

impl<S> Clone for MhKernel<S> {
    fn clone(&self) -> Self {
        Self { proposal: Arc::clone(&self.proposal), target: Arc::clone(&self.target) }
    }
}

impl<S> MhKernel<S> {
    pub fn new(proposal: Arc<dyn Proposal<S>>, target: Arc<dyn LogDensity<S>>) -> Self {
        Self { proposal, target }
    }

    /// `log β(x, y)` where the reverse move is proposed by `reverse`.
    pub fn log_beta_with(&self, reverse: &dyn Proposal<S>, x: &S, y: &S) -> Result<f64> {
        let num = self.target.log_density(y) + reverse.log_density(y, x);
        let den = self.target.log_density(x) + self.proposal.log_density(x, y);
        log_accept(num, den)
    }

    pub fn log_beta(&self, x: &S, y: &S) -> Result<f64> {
        self.log_beta_with(self.proposal.as_ref(), x, y)
    }
}

/// One Metropolis-Hastings transition. Returns the new state and whether the
/// proposal was accepted.
pub fn mh_step<S: Clone>(x: &S, kernel: &MhKernel<S>, rng: &mut RngStream) -> Result<(S, bool)> {
    let lx = kernel.target.log_density(x);
    if lx.is_nan() || lx == f64::INFINITY {
        return Err(Error::NonFiniteDensity);
    }
    let y = kernel.proposal.sample(x, rng);
    if coin(kernel.log_beta(x, &y)?, rng) {
        Ok((y, true))
    } else {
        Ok((x.clone(), false))
    }
}

impl<S: Clone> ReversibleKernel<S> for MhKernel<S> {
    fn step(&self, x: &S, rng: &mut RngStream) -> Result<S> {
        mh_step(x, self, rng).map(|(y, _)| y)
    }
}

/// Proposal drawing coordinate `coord` from its full conditional under a
/// discrete target. Used inside an [`MhKernel`] it is accepted with
/// probability one and reproduces the Gibbs update.
pub struct FullConditional {
    pub target: Arc<DiscreteTarget>,
    pub coord: usize,
}

impl FullConditional {
    pub fn new(target: Arc<DiscreteTarget>, coord: usize) -> Self {
        Self { target, coord }
    }

    /// `(state, normalized probability)` over the line through `x`.
    pub fn conditional(&self, x: usize) -> Result<Vec<(usize, f64)>> {
        let space = self.target.space();
        let m = space.radix(self.coord);
        let mut line: Vec<(usize, f64)> =
            (0..m).map(|v| space.with_coord(x, self.coord, v)).map(|s| (s, self.target.prob(s))).collect();
        let total: f64 = line.iter().map(|(_, p)| p).sum();
        if total <= 0.0 {
            return Err(Error::ZeroSlice { coord: self.coord });
        }
        for e in line.iter_mut() {
            e.1 /= total;
        }
        line.retain(|(_, p)| *p > 0.0);
        Ok(line)
    }
}

impl Proposal<usize> for FullConditional {
    fn sample(&self, from: &usize, rng: &mut RngStream) -> usize {
        match self.conditional(*from) {
            Ok(line) => {
                let w: Vec<f64> = line.iter().map(|(_, p)| *p).collect();
                line[sample_categorical(&w, rng)].0
            }
            Err(_) => *from,
        }
    }

    fn log_density(&self, from: &usize, to: &usize) -> f64 {
        let space = self.target.space();
        let differs = (0..space.dim()).any(|k| k != self.coord && space.coord(*from, k) != space.coord(*to, k));
        if differs {
            return f64::NEG_INFINITY;
        }
        match self.conditional(*from) {
            Ok(line) => line.iter().find(|(s, _)| s == to).map_or(f64::NEG_INFINITY, |(_, p)| p.ln()),
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn support(&self, from: &usize) -> Option<Vec<(usize, f64)>> {
        self.conditional(*from).ok()
    }
}

/// Single-coordinate Gibbs update on a discrete target.
pub struct GibbsKernel {
    inner: FullConditional,
}

impl GibbsKernel {
    pub fn new(target: Arc<DiscreteTarget>, coord: usize) -> Self {
        Self { inner: FullConditional::new(target, coord) }
    }
}

/// Resample coordinate `coord` of `x` from its full conditional.
pub fn gibbs_full_conditional_step(
    x: usize,
    coord: usize,
    target: &DiscreteTarget,
    rng: &mut RngStream,
) -> Result<usize> {
    let space = target.space();
    let w: Vec<f64> = (0..space.radix(coord)).map(|v| target.prob(space.with_coord(x, coord, v))).collect();
    if w.iter().sum::<f64>() <= 0.0 {
        return Err(Error::ZeroSlice { coord });
    }
    Ok(space.with_coord(x, coord, sample_categorical(&w, rng)))
}

impl ReversibleKernel<usize> for GibbsKernel {
    fn step(&self, x: &usize, rng: &mut RngStream) -> Result<usize> {
        gibbs_full_conditional_step(*x, self.inner.coord, &self.inner.target, rng)
    }

    fn transition_row(&self, x: &usize) -> Option<Result<Vec<(usize, f64)>>> {
        Some(self.inner.conditional(*x))
    }
}
