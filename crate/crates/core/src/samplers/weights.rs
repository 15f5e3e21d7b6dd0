use std::sync::Arc;

use crate::error::Result;
use crate::simplex::SimplexWeights;

/// How a weight function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// The same vector everywhere: selection carries no information.
    Constant,
    /// A deterministic function of the state.
    ClosedForm,
    /// Estimated from particles drawn at every iteration.
    Particle,
}

/// A state-dependent probability vector over kernel indices.
pub trait Weights<S>: Send + Sync {
    fn weights(&self, x: &S) -> Result<SimplexWeights>;
    fn num_kernels(&self) -> usize;
}

type WeightEval<S> = Arc<dyn Fn(&S) -> Result<SimplexWeights> + Send + Sync>;

/// A deterministic weight function `x -> ω(x)`.
pub struct WeightFunction<S> {
    kind: WeightKind,
    n: usize,
    eval: WeightEval<S>,
}

impl<S> Clone for WeightFunction<S> {
    fn clone(&self) -> Self {
        Self { kind: self.kind, n: self.n, eval: Arc::clone(&self.eval) }
    }
}

impl<S: 'static> WeightFunction<S> {
    pub fn constant(w: SimplexWeights) -> Self {
        let n = w.len();
        Self { kind: WeightKind::Constant, n, eval: Arc::new(move |_| Ok(w.clone())) }
    }

    pub fn closed_form(n: usize, f: impl Fn(&S) -> Result<SimplexWeights> + Send + Sync + 'static) -> Self {
        Self { kind: WeightKind::ClosedForm, n, eval: Arc::new(f) }
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }
}

impl<S> Weights<S> for WeightFunction<S> {
    fn weights(&self, x: &S) -> Result<SimplexWeights> {
        let w = (self.eval)(x)?;
        debug_assert_eq!(w.len(), self.n);
        Ok(w)
    }

    fn num_kernels(&self) -> usize {
        self.n
    }
}
