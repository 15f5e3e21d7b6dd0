use super::step::{Sampler, StepOutcome};
use crate::error::Result;
use crate::rng::RngStream;

/// A recorded chain: `n_iter + 1` states starting from the initial one.
///
/// Entry 0 of `kernels` and `accepted` belongs to the initial state and is
/// `None` / `false`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace<S> {
    pub states: Vec<S>,
    pub kernels: Vec<Option<usize>>,
    pub accepted: Vec<bool>,
}

impl<S> ChainTrace<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Fraction of iterations whose proposal was accepted.
    pub fn acceptance_rate(&self) -> f64 {
        let n = self.accepted.len().saturating_sub(1);
        if n == 0 {
            return 0.0;
        }
        self.accepted[1..].iter().filter(|a| **a).count() as f64 / n as f64
    }
}

/// Run `n_iter` iterations and keep every state.
pub fn run_chain<S: Clone>(sampler: &dyn Sampler<S>, x0: S, n_iter: usize, rng: &mut RngStream) -> Result<ChainTrace<S>> {
    let mut trace = ChainTrace {
        states: Vec::with_capacity(n_iter + 1),
        kernels: Vec::with_capacity(n_iter + 1),
        accepted: Vec::with_capacity(n_iter + 1),
    };
    trace.states.push(x0.clone());
    trace.kernels.push(None);
    trace.accepted.push(false);
    run_chain_with(sampler, x0, n_iter, rng, |_, out| {
        trace.states.push(out.state.clone());
        trace.kernels.push(out.kernel);
        trace.accepted.push(out.accepted);
    })?;
    Ok(trace)
}

/// Run `n_iter` iterations, handing each outcome to `visit` instead of
/// storing it. Returns the final state.
pub fn run_chain_with<S: Clone>(
    sampler: &dyn Sampler<S>,
    x0: S,
    n_iter: usize,
    rng: &mut RngStream,
    mut visit: impl FnMut(usize, &StepOutcome<S>),
) -> Result<S> {
    let mut x = x0;
    for t in 0..n_iter {
        let out = sampler.step(t, &x, rng)?;
        visit(t + 1, &out);
        x = out.state;
    }
    Ok(x)
}
