//! A target on the unit square with mass piled against the edges `x₁ = 1`
//! and `x₂ = 1`, modulated by five sinusoidal ridges along each edge.
//!
//! `π(x) ∝ φ(x₁, x₂) + φ(x₂, x₁)` with `φ(a, b) = a¹⁰⁰ (1 - cos 10πb)`.
//! States are `Vec<f64>` of length 2, index 0 holding `x₁`.

use std::sync::Arc;

use rand::Rng;

use super::util::{ln_norm_pdf, norm_cdf, std_normal, truncated_unit_normal};
use super::TestFunction;
use crate::error::Result;
use crate::kernel::{LogDensity, MhKernel, Proposal};
use crate::rng::RngStream;
use crate::samplers::{Kernel, KernelCollection, WeightFunction};
use crate::simplex::SimplexWeights;

const POWER: f64 = 100.0;
const FREQ: f64 = 10.0 * std::f64::consts::PI;
/// Threshold separating the bulk of the square from the two edge bands.
pub const EDGE: f64 = 0.9;

fn ln_phi(a: f64, b: f64) -> f64 {
    // 1 - cos(t) = 2 sin²(t/2), without cancellation near the troughs.
    let s = (0.5 * FREQ * b).sin();
    POWER * a.ln() + (2.0 * s * s).ln()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SinusoidTarget;

impl LogDensity<Vec<f64>> for SinusoidTarget {
    fn log_density(&self, x: &Vec<f64>) -> f64 {
        let (a, b) = (x[0], x[1]);
        if !((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b)) {
            return f64::NEG_INFINITY;
        }
        let (u, v) = (ln_phi(a, b), ln_phi(b, a));
        let top = u.max(v);
        if top == f64::NEG_INFINITY {
            return top;
        }
        top + ((u - top).exp() + (v - top).exp()).ln() - std::f64::consts::LN_2
    }
}

/// Gaussian random walk on one coordinate, truncated to `[0, 1]`.
///
/// The truncation normalizer depends on the current point, so it enters the
/// proposal density and hence the acceptance ratio.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedWalk {
    pub coord: usize,
    pub sigma: f64,
}

impl TruncatedWalk {
    fn ln_normalizer(&self, from: f64) -> f64 {
        (norm_cdf((1.0 - from) / self.sigma) - norm_cdf(-from / self.sigma)).ln()
    }
}

impl Proposal<Vec<f64>> for TruncatedWalk {
    fn sample(&self, from: &Vec<f64>, rng: &mut RngStream) -> Vec<f64> {
        let c = from[self.coord];
        let mut y = from.clone();
        y[self.coord] = loop {
            let v = c + self.sigma * std_normal(rng);
            if (0.0..=1.0).contains(&v) {
                break v;
            }
        };
        y
    }

    fn log_density(&self, from: &Vec<f64>, to: &Vec<f64>) -> f64 {
        let frozen_ok = from.iter().zip(to).enumerate().all(|(k, (a, b))| k == self.coord || a == b);
        let v = to[self.coord];
        if !frozen_ok || !(0.0..=1.0).contains(&v) {
            return f64::NEG_INFINITY;
        }
        let c = from[self.coord];
        ln_norm_pdf(v, c, self.sigma) - self.ln_normalizer(c)
    }
}

pub struct SinusoidSetup {
    pub target: Arc<SinusoidTarget>,
    /// `P₁, P₂` move `x₂` with σ = 0.01 and 1; `P₃, P₄` do the same on `x₁`.
    pub kernels: KernelCollection<Vec<f64>>,
    pub informed: WeightFunction<Vec<f64>>,
    pub uninformed: SimplexWeights,
}

/// The four-branch weight vector. Points exactly on the threshold count as
/// being inside the edge band.
pub fn sinusoid_weights(x: &[f64]) -> Result<SimplexWeights> {
    let (a, b) = (x[0], x[1]);
    let raw = match (a >= EDGE, b >= EDGE) {
        (false, false) => [a, 1.0 - a, b, 1.0 - b],
        (true, false) => [a, 1.0 - a, a, 1.0 - a],
        (false, true) => [b, 1.0 - b, b, 1.0 - b],
        (true, true) => [1.0; 4],
    };
    SimplexWeights::from_unnormalized(raw.to_vec())
}

impl SinusoidSetup {
    pub fn new() -> Result<Self> {
        let target = Arc::new(SinusoidTarget);
        let dyn_target = Arc::clone(&target) as Arc<dyn LogDensity<Vec<f64>>>;
        let walks = [(1, 0.01), (1, 1.0), (0, 0.01), (0, 1.0)];
        let kernels = KernelCollection::new(
            walks
                .iter()
                .map(|&(coord, sigma)| {
                    Kernel::Mh(MhKernel::new(Arc::new(TruncatedWalk { coord, sigma }), Arc::clone(&dyn_target)))
                })
                .collect(),
        )?;
        let informed = WeightFunction::closed_form(4, |x: &Vec<f64>| sinusoid_weights(x));
        Ok(Self { target, kernels, informed, uninformed: SimplexWeights::uniform(4) })
    }

    /// `N((0.95, 0.5), I)` conditioned on the unit square.
    pub fn initial(rng: &mut RngStream) -> Vec<f64> {
        vec![truncated_unit_normal(rng, 0.95, 0.0, 1.0), truncated_unit_normal(rng, 0.5, 0.0, 1.0)]
    }

    /// An exact draw from the target.
    ///
    /// `φ` factorizes: the first argument has density `101 a¹⁰⁰` and the
    /// second `1 - cos 10πb`, both normalized on `[0, 1]`.
    pub fn sample_exact(rng: &mut RngStream) -> Vec<f64> {
        let a = rng.uniform().powf(1.0 / (POWER + 1.0));
        let b = loop {
            let b = rng.uniform();
            if 2.0 * rng.uniform() < 1.0 - (FREQ * b).cos() {
                break b;
            }
        };
        if rng.random_bool(0.5) {
            vec![a, b]
        } else {
            vec![b, a]
        }
    }

    /// The four test functions used for variance comparisons.
    pub fn test_functions() -> Vec<TestFunction> {
        vec![
            ("f1", Box::new(|x: &[f64]| 1.0 / (1.0 + x[0].powf(POWER)))),
            ("f2", Box::new(|x: &[f64]| if x[1] > 0.4 && x[1] < 0.5 { 1.0 / x[0] } else { 0.0 })),
            ("f3", Box::new(|x: &[f64]| x[0] / (1.0 + x[1]))),
            ("f4", Box::new(|x: &[f64]| if x[1] < EDGE { (-(x[0] - 0.8).powi(10)).exp() } else { 0.0 })),
        ]
    }
}
