//! Ready-made targets, kernel collections and weight functions.

pub mod cross;
pub mod cylinder;
pub mod hypercube;
pub mod mixture;
mod quad;
pub mod sinusoid;
pub mod three_state;
pub(crate) mod util;

use std::sync::Arc;

use crate::kernel::{FullConditional, LogDensity, MhKernel};
use crate::samplers::{Kernel, KernelCollection};
use crate::space::DiscreteTarget;

/// A named real-valued function of a continuous state.
pub type TestFunction = (&'static str, Box<dyn Fn(&[f64]) -> f64 + Send + Sync>);

/// One Gibbs kernel per coordinate, each expressed as an MH kernel with a
/// full-conditional proposal so that every sampler variant accepts it.
pub fn gibbs_collection(target: &Arc<DiscreteTarget>) -> KernelCollection<usize> {
    let kernels = (0..target.space().dim())
        .map(|c| {
            Kernel::Mh(MhKernel::new(
                Arc::new(FullConditional::new(Arc::clone(target), c)),
                Arc::clone(target) as Arc<dyn LogDensity<usize>>,
            ))
        })
        .collect();
    KernelCollection::new(kernels).expect("at least one coordinate")
}
