use std::sync::Arc;

use super::collection::KernelCollection;
use super::weights::Weights;
use crate::error::{Error, Result};
use crate::kernel::{coin, log_accept};
use crate::rng::RngStream;
use crate::simplex::SimplexWeights;

/// Result of one sampler iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<S> {
    pub state: S,
    /// Kernel drawn this iteration; `None` when a lazy step skipped selection.
    pub kernel: Option<usize>,
    /// Whether the proposed move passed every accept/reject stage.
    pub accepted: bool,
}

fn check_len(w: &SimplexWeights, n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: w.len() });
    }
    Ok(())
}

/// Informed selection followed by a full kernel step and a weight correction.
///
/// Draw `i ~ ω(x)`, move `x -> y` with kernel `i`, then keep `y` with
/// probability `1 ∧ ω_j(y) / ω_i(x)`, where `j` is the reverse index (equal to
/// `i` unless the collection says otherwise). For MH members the inner
/// acceptance and the weight correction are two separate coins.
pub fn step_alg1<S: Clone + PartialEq>(
    x: &S,
    kernels: &KernelCollection<S>,
    weights: &dyn Weights<S>,
    rng: &mut RngStream,
) -> Result<StepOutcome<S>> {
    let wx = weights.weights(x)?;
    check_len(&wx, kernels.len())?;
    let i = wx.sample(rng);
    let (y, inner) = kernels.step_kernel(i, x, rng)?;
    if !inner || y == *x {
        return Ok(StepOutcome { state: x.clone(), kernel: Some(i), accepted: inner });
    }
    let j = kernels.reverse_index(i, x, &y);
    let wy = weights.weights(&y)?;
    check_len(&wy, kernels.len())?;
    if coin(log_accept(wy.get(j).ln(), wx.get(i).ln())?, rng) {
        Ok(StepOutcome { state: y, kernel: Some(i), accepted: true })
    } else {
        Ok(StepOutcome { state: x.clone(), kernel: Some(i), accepted: false })
    }
}

/// Informed selection with a single Metropolis-Hastings correction on the
/// extended space of (state, kernel index) pairs.
///
/// Requires every member to be an MH kernel. The proposal `y ~ Q_i(x, .)` is
/// accepted with probability
/// `1 ∧ π(y) Q_j(y, x) ω_j(y) / (π(x) Q_i(x, y) ω_i(x))`.
pub fn step_alg2<S: Clone + PartialEq>(
    x: &S,
    kernels: &KernelCollection<S>,
    weights: &dyn Weights<S>,
    rng: &mut RngStream,
) -> Result<StepOutcome<S>> {
    if !kernels.all_mh() {
        return Err(Error::KernelTagMismatch("single-correction informed sampling"));
    }
    let wx = weights.weights(x)?;
    check_len(&wx, kernels.len())?;
    let i = wx.sample(rng);
    let ki = kernels.mh(i).expect("checked above");
    let y = ki.proposal.sample(x, rng);
    let lx = ki.target.log_density(x);
    let ly = ki.target.log_density(&y);
    let log_a = if ly == f64::NEG_INFINITY && !lx.is_nan() && lx != f64::INFINITY {
        f64::NEG_INFINITY
    } else {
        let j = kernels.reverse_index(i, x, &y);
        let kj = kernels.mh(j).expect("checked above");
        let wy = weights.weights(&y)?;
        check_len(&wy, kernels.len())?;
        let num = ly + kj.proposal.log_density(&y, x) + wy.get(j).ln();
        let den = lx + ki.proposal.log_density(x, &y) + wx.get(i).ln();
        log_accept(num, den)?
    };
    if coin(log_a, rng) {
        Ok(StepOutcome { state: y, kernel: Some(i), accepted: true })
    } else {
        Ok(StepOutcome { state: x.clone(), kernel: Some(i), accepted: false })
    }
}

/// Uninformed selection: draw `i` from a constant vector and apply kernel `i`.
pub fn step_hybrid<S: Clone + PartialEq>(
    x: &S,
    kernels: &KernelCollection<S>,
    omega_c: &SimplexWeights,
    rng: &mut RngStream,
) -> Result<StepOutcome<S>> {
    check_len(omega_c, kernels.len())?;
    let i = omega_c.sample(rng);
    let (state, accepted) = kernels.step_kernel(i, x, rng)?;
    Ok(StepOutcome { state, kernel: Some(i), accepted })
}

/// Lazy version `λ P + (1 - λ) I` of an inner sampler.
pub fn step_delayed<S: Clone>(
    x: &S,
    t: usize,
    lambda: f64,
    inner: &dyn Sampler<S>,
    rng: &mut RngStream,
) -> Result<StepOutcome<S>> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::BadProbability { name: "lambda", value: lambda });
    }
    if rng.uniform() < lambda {
        inner.step(t, x, rng)
    } else {
        Ok(StepOutcome { state: x.clone(), kernel: None, accepted: false })
    }
}

/// Mixture `ϖ P_informed + (1 - ϖ) P_uninformed`.
pub fn step_mixed<S: Clone>(
    x: &S,
    t: usize,
    varpi: f64,
    informed: &dyn Sampler<S>,
    uninformed: &dyn Sampler<S>,
    rng: &mut RngStream,
) -> Result<StepOutcome<S>> {
    if !(0.0..=1.0).contains(&varpi) {
        return Err(Error::BadProbability { name: "varpi", value: varpi });
    }
    if rng.uniform() < varpi {
        informed.step(t, x, rng)
    } else {
        uninformed.step(t, x, rng)
    }
}

/// A Markov transition, possibly depending on the iteration counter `t`.
pub trait Sampler<S>: Send + Sync {
    fn step(&self, t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>>;
}

/// Sampler wrapper around [`step_alg1`].
pub struct Alg1<S> {
    pub kernels: Arc<KernelCollection<S>>,
    pub weights: Arc<dyn Weights<S>>,
}

impl<S: Clone + PartialEq + Send + Sync> Sampler<S> for Alg1<S> {
    fn step(&self, _t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>> {
        step_alg1(x, &self.kernels, self.weights.as_ref(), rng)
    }
}

/// Sampler wrapper around [`step_alg2`].
pub struct Alg2<S> {
    pub kernels: Arc<KernelCollection<S>>,
    pub weights: Arc<dyn Weights<S>>,
}

impl<S: Clone + PartialEq + Send + Sync> Sampler<S> for Alg2<S> {
    fn step(&self, _t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>> {
        step_alg2(x, &self.kernels, self.weights.as_ref(), rng)
    }
}

/// Sampler wrapper around [`step_hybrid`].
pub struct Hybrid<S> {
    pub kernels: Arc<KernelCollection<S>>,
    pub omega_c: SimplexWeights,
}

impl<S: Clone + PartialEq + Send + Sync> Sampler<S> for Hybrid<S> {
    fn step(&self, _t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>> {
        step_hybrid(x, &self.kernels, &self.omega_c, rng)
    }
}

/// Sampler wrapper around [`step_delayed`].
pub struct Delayed<S> {
    pub lambda: f64,
    pub inner: Box<dyn Sampler<S>>,
}

impl<S: Clone + Send + Sync> Sampler<S> for Delayed<S> {
    fn step(&self, t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>> {
        step_delayed(x, t, self.lambda, self.inner.as_ref(), rng)
    }
}

/// Sampler wrapper around [`step_mixed`].
pub struct Mixed<S> {
    pub varpi: f64,
    pub informed: Box<dyn Sampler<S>>,
    pub uninformed: Box<dyn Sampler<S>>,
}

impl<S: Clone + Send + Sync> Sampler<S> for Mixed<S> {
    fn step(&self, t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>> {
        step_mixed(x, t, self.varpi, self.informed.as_ref(), self.uninformed.as_ref(), rng)
    }
}

/// Deterministic cycle through several samplers, one per iteration.
pub struct Alternating<S> {
    pub stages: Vec<Box<dyn Sampler<S>>>,
}

impl<S: Clone + Send + Sync> Sampler<S> for Alternating<S> {
    fn step(&self, t: usize, x: &S, rng: &mut RngStream) -> Result<StepOutcome<S>> {
        self.stages[t % self.stages.len()].step(t, x, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::super::collection::Kernel;
    use super::super::weights::WeightFunction;
    use super::*;
    use crate::kernel::{FullConditional, GibbsKernel, LogDensity, MhKernel};
    use crate::space::{DiscreteSpace, DiscreteTarget};

    fn setup() -> (Arc<DiscreteTarget>, KernelCollection<usize>, KernelCollection<usize>) {
        let s = DiscreteSpace::cube(4, 2).unwrap();
        let t = Arc::new(DiscreteTarget::from_dense(s, (0..16).map(|v| 1.0 + (v % 5) as f64).collect()).unwrap());
        let general = KernelCollection::new(
            (0..2).map(|c| Kernel::General(Arc::new(GibbsKernel::new(Arc::clone(&t), c)) as _)).collect(),
        )
        .unwrap();
        let mh = KernelCollection::new(
            (0..2)
                .map(|c| {
                    Kernel::Mh(MhKernel::new(
                        Arc::new(FullConditional::new(Arc::clone(&t), c)),
                        Arc::clone(&t) as Arc<dyn LogDensity<usize>>,
                    ))
                })
                .collect(),
        )
        .unwrap();
        (t, general, mh)
    }

    fn informed(t: &Arc<DiscreteTarget>) -> WeightFunction<usize> {
        let t = Arc::clone(t);
        WeightFunction::closed_form(2, move |x: &usize| {
            let c = t.space().decode(*x);
            SimplexWeights::from_unnormalized(vec![1.0 + c[0] as f64, 1.0 + c[1] as f64])
        })
    }

    #[test]
    fn alg2_rejects_general_kernels() {
        let (t, general, _) = setup();
        let mut rng = RngStream::new(0, 0);
        let w = informed(&t);
        assert_eq!(step_alg2(&0, &general, &w, &mut rng), Err(Error::KernelTagMismatch("single-correction informed sampling")));
    }

    #[test]
    fn long_run_frequencies_match_target() {
        let (t, general, mh) = setup();
        let w = informed(&t);
        let n = 400_000;
        for (name, alg) in [("alg1", 1), ("alg2", 2)] {
            let mut rng = RngStream::new(5, alg);
            let mut counts = vec![0usize; 16];
            let mut x = 0usize;
            for _ in 0..n {
                x = if alg == 1 { step_alg1(&x, &general, &w, &mut rng) } else { step_alg2(&x, &mh, &w, &mut rng) }
                    .unwrap()
                    .state;
                counts[x] += 1;
            }
            for s in 0..16 {
                let f = counts[s] as f64 / n as f64;
                assert!((f - t.prob(s)).abs() < 0.01, "{name}: state {s} freq {f} vs {}", t.prob(s));
            }
        }
    }

    #[test]
    fn delayed_rejects_bad_lambda() {
        let (_, general, _) = setup();
        let inner = Hybrid { kernels: Arc::new(general), omega_c: SimplexWeights::uniform(2) };
        let mut rng = RngStream::new(0, 0);
        assert!(step_delayed(&0, 0, 0.0, &inner, &mut rng).is_err());
        assert!(step_delayed(&0, 0, 1.5, &inner, &mut rng).is_err());
    }
}
