use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{coin, MhKernel, ReversibleKernel};
use crate::rng::RngStream;

/// One member of a [`KernelCollection`].
pub enum Kernel<S> {
    /// Any reversible kernel, used as a black box.
    General(Arc<dyn ReversibleKernel<S>>),
    /// A Metropolis-Hastings kernel whose proposal and acceptance are exposed.
    Mh(MhKernel<S>),
}

impl<S> Clone for Kernel<S> {
    fn clone(&self) -> Self {
        match self {
            Kernel::General(k) => Kernel::General(Arc::clone(k)),
            Kernel::Mh(k) => Kernel::Mh(k.clone()),
        }
    }
}

/// Maps a move `x -> y` made by kernel `i` to the kernel that proposes the
/// reverse move `y -> x`.
pub type ReverseIndex<S> = Arc<dyn Fn(usize, &S, &S) -> usize + Send + Sync>;

/// The finite family of kernels a sampler chooses from.
///
/// By default the reverse of a move by kernel `i` is scored under kernel `i`
/// itself. Deterministic proposals, such as "jump to the nearest state on the
/// left", cannot propose their own reverse move; a reverse index lets the
/// acceptance ratio use the partner kernel instead.
pub struct KernelCollection<S> {
    kernels: Vec<Kernel<S>>,
    reverse: Option<ReverseIndex<S>>,
}

impl<S> Clone for KernelCollection<S> {
    fn clone(&self) -> Self {
        Self { kernels: self.kernels.clone(), reverse: self.reverse.clone() }
    }
}

impl<S: Clone> KernelCollection<S> {
    pub fn new(kernels: Vec<Kernel<S>>) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::InvalidSpec("kernel collection is empty".into()));
        }
        Ok(Self { kernels, reverse: None })
    }

    pub fn with_reverse_index(mut self, f: impl Fn(usize, &S, &S) -> usize + Send + Sync + 'static) -> Self {
        self.reverse = Some(Arc::new(f));
        self
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn kernel(&self, i: usize) -> &Kernel<S> {
        &self.kernels[i]
    }

    pub fn all_mh(&self) -> bool {
        self.kernels.iter().all(|k| matches!(k, Kernel::Mh(_)))
    }

    pub fn mh(&self, i: usize) -> Option<&MhKernel<S>> {
        match &self.kernels[i] {
            Kernel::Mh(k) => Some(k),
            Kernel::General(_) => None,
        }
    }

    /// Index of the kernel scoring the reverse of a move `x -> y` by `i`.
    pub fn reverse_index(&self, i: usize, x: &S, y: &S) -> usize {
        self.reverse.as_ref().map_or(i, |f| f(i, x, y))
    }

    /// `log β_i(x, y)` for an MH member, scoring the reverse proposal under
    /// the reverse index.
    pub fn log_beta(&self, i: usize, x: &S, y: &S) -> Result<f64> {
        let k = self.mh(i).ok_or(Error::KernelTagMismatch("MH acceptance"))?;
        let j = self.reverse_index(i, x, y);
        let rev = self.mh(j).ok_or(Error::KernelTagMismatch("MH acceptance"))?;
        k.log_beta_with(rev.proposal.as_ref(), x, y)
    }

    /// One full transition of kernel `i`. Returns the new state and whether
    /// the inner MH proposal was accepted (always true for general kernels).
    pub fn step_kernel(&self, i: usize, x: &S, rng: &mut RngStream) -> Result<(S, bool)> {
        match &self.kernels[i] {
            Kernel::General(k) => Ok((k.step(x, rng)?, true)),
            Kernel::Mh(k) => {
                let y = k.proposal.sample(x, rng);
                if coin(self.log_beta(i, x, &y)?, rng) {
                    Ok((y, true))
                } else {
                    Ok((x.clone(), false))
                }
            }
        }
    }
}

impl<S: Clone + PartialEq> KernelCollection<S> {
    /// The transition row of kernel `i` at `x`, when it is enumerable.
    ///
    /// Entries may repeat a state; callers accumulate.
    pub fn transition_row(&self, i: usize, x: &S) -> Result<Vec<(S, f64)>> {
        match &self.kernels[i] {
            Kernel::General(k) => k
                .transition_row(x)
                .unwrap_or_else(|| Err(Error::InvalidSpec("kernel has no enumerable transition row".into()))),
            Kernel::Mh(k) => {
                let support = k
                    .proposal
                    .support(x)
                    .ok_or_else(|| Error::InvalidSpec("proposal has no enumerable support".into()))?;
                let mut row = Vec::with_capacity(support.len() + 1);
                let mut stay = 0.0;
                for (y, q) in support {
                    if q <= 0.0 {
                        continue;
                    }
                    if y == *x {
                        stay += q;
                        continue;
                    }
                    let a = self.log_beta(i, x, &y)?.exp();
                    row.push((y, q * a));
                    stay += q * (1.0 - a);
                }
                row.push((x.clone(), stay));
                Ok(row)
            }
        }
    }
}
