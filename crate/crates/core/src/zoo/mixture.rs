//! Equal-weight mixture of three axis-aligned Gaussians in `ℝ³`.
//!
//! Component `k` has variance `θ` along axis `k` and 1 elsewhere; the means
//! are placed so the three elongated components meet end to end, forming a
//! bent filament whose thickness stays fixed while its length grows as `√θ`.

use std::sync::Arc;

use super::util::{std_normal, LN_SQRT_2PI};
use super::TestFunction;
use crate::error::{Error, Result};
use crate::kernel::{LogDensity, MhKernel, Proposal};
use crate::rng::RngStream;
use crate::samplers::{Kernel, KernelCollection, OffsetProposal, WeightFunction};
use crate::simplex::SimplexWeights;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSpec {
    pub theta: f64,
    /// Walk scale of the three "large" kernels. Defaults to `√θ`.
    pub sigma_large: f64,
    /// Walk scale of the three "small" kernels. Defaults to 1.
    pub sigma_small: f64,
    /// Floor given to off-edge large moves in the weight matrices.
    pub eps: f64,
}

impl MixtureSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidSpec(format!("theta must be positive, got {theta}")));
        }
        Ok(Self { theta, sigma_large: theta.sqrt(), sigma_small: 1.0, eps: 0.01 })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.theta)?;
        for (name, v) in [("sigma_large", self.sigma_large), ("sigma_small", self.sigma_small)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidSpec(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }

    pub fn means(&self) -> [[f64; 3]; 3] {
        let s = 2.0 * self.theta.sqrt();
        [[0.0, s, 0.0], [-s, 0.0, 0.0], [-s, -s, s]]
    }

    /// Mean of the mixture.
    pub fn target_mean(&self) -> [f64; 3] {
        let r = self.theta.sqrt();
        [-4.0 * r / 3.0, 0.0, 2.0 * r / 3.0]
    }

    fn sd(&self, component: usize, axis: usize) -> f64 {
        if component == axis {
            self.theta.sqrt()
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct MixtureTarget {
    pub spec: MixtureSpec,
}

impl MixtureTarget {
    /// Log density of each (equally weighted, normalized) component.
    pub fn component_log_densities(&self, x: &[f64]) -> [f64; 3] {
        let means = self.spec.means();
        let mut out = [0.0; 3];
        for (k, mu) in means.iter().enumerate() {
            out[k] = (0..3)
                .map(|a| {
                    let sd = self.spec.sd(k, a);
                    let z = (x[a] - mu[a]) / sd;
                    -0.5 * z * z - sd.ln() - LN_SQRT_2PI
                })
                .sum();
        }
        out
    }

    /// Posterior component probabilities `ξ(x)`.
    pub fn responsibilities(&self, x: &[f64]) -> [f64; 3] {
        let l = self.component_log_densities(x);
        let top = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e = l.map(|v| (v - top).exp());
        let z: f64 = e.iter().sum();
        e.map(|v| v / z)
    }

    pub fn sample_exact(&self, rng: &mut RngStream) -> Vec<f64> {
        let k = (rng.uniform() * 3.0) as usize % 3;
        let mu = self.spec.means()[k];
        (0..3).map(|a| mu[a] + self.spec.sd(k, a) * std_normal(rng)).collect()
    }
}

impl LogDensity<Vec<f64>> for MixtureTarget {
    fn log_density(&self, x: &Vec<f64>) -> f64 {
        let l = self.component_log_densities(x);
        let top = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        top + l.iter().map(|v| (v - top).exp()).sum::<f64>().ln() - 3f64.ln()
    }
}

/// Symmetric Gaussian random walk on a single coordinate.
#[derive(Debug, Clone, Copy)]
pub struct CoordinateWalk {
    pub coord: usize,
    pub sigma: f64,
    pub dim: usize,
}

impl Proposal<Vec<f64>> for CoordinateWalk {
    fn sample(&self, from: &Vec<f64>, rng: &mut RngStream) -> Vec<f64> {
        let mut y = from.clone();
        y[self.coord] += self.sigma * std_normal(rng);
        y
    }

    fn log_density(&self, from: &Vec<f64>, to: &Vec<f64>) -> f64 {
        if from.iter().zip(to).enumerate().any(|(k, (a, b))| k != self.coord && a != b) {
            return f64::NEG_INFINITY;
        }
        let z = (to[self.coord] - from[self.coord]) / self.sigma;
        -0.5 * z * z - self.sigma.ln() - LN_SQRT_2PI
    }
}

impl OffsetProposal for CoordinateWalk {
    fn draw_offset(&self, rng: &mut RngStream) -> Vec<f64> {
        let mut eta = vec![0.0; self.dim];
        eta[self.coord] = self.sigma * std_normal(rng);
        eta
    }
}

/// The 2 × 3 weight matrix favouring component `k`, flattened row-major
/// (row 0: large scale, row 1: small scale; column: axis) and normalized.
pub fn component_weight_matrix(k: usize, eps: f64) -> [f64; 6] {
    let mut m = [0.0; 6];
    for a in 0..3 {
        m[a] = if a == k { 1.0 } else { eps };
        m[3 + a] = if a == k { 0.125 } else { 0.25 };
    }
    let z: f64 = m.iter().sum();
    m.map(|v| v / z)
}

pub struct MixtureSetup {
    pub spec: MixtureSpec,
    pub target: Arc<MixtureTarget>,
    /// Kernel `3 r + a` walks along axis `a` at scale `σ_large` (`r = 0`) or
    /// `σ_small` (`r = 1`).
    pub kernels: KernelCollection<Vec<f64>>,
    pub walks: Vec<CoordinateWalk>,
    pub informed: WeightFunction<Vec<f64>>,
    pub uninformed: SimplexWeights,
}

impl MixtureSetup {
    pub fn new(spec: MixtureSpec) -> Result<Self> {
        spec.validate()?;
        let target = Arc::new(MixtureTarget { spec });
        let dyn_target = Arc::clone(&target) as Arc<dyn LogDensity<Vec<f64>>>;
        let walks: Vec<CoordinateWalk> = [spec.sigma_large, spec.sigma_small]
            .iter()
            .flat_map(|&sigma| (0..3).map(move |coord| CoordinateWalk { coord, sigma, dim: 3 }))
            .collect();
        let kernels = KernelCollection::new(
            walks.iter().map(|w| Kernel::Mh(MhKernel::new(Arc::new(*w), Arc::clone(&dyn_target)))).collect(),
        )?;
        let mats: Vec<[f64; 6]> = (0..3).map(|k| component_weight_matrix(k, spec.eps)).collect();
        let t = Arc::clone(&target);
        let informed = WeightFunction::closed_form(6, move |x: &Vec<f64>| {
            let xi = t.responsibilities(x);
            let w = (0..6).map(|e| (0..3).map(|k| xi[k] * mats[k][e]).sum()).collect();
            SimplexWeights::from_unnormalized(w)
        });
        Ok(Self { spec, target, kernels, walks, informed, uninformed: SimplexWeights::uniform(6) })
    }

    /// `N((3√θ, 2√θ, 1), I)`.
    pub fn initial(&self, rng: &mut RngStream) -> Vec<f64> {
        let r = self.spec.theta.sqrt();
        [3.0 * r, 2.0 * r, 1.0].iter().map(|m| m + std_normal(rng)).collect()
    }

    /// The four test functions used for variance comparisons.
    pub fn test_functions(&self) -> Vec<TestFunction> {
        let r = self.spec.theta.sqrt();
        vec![
            ("ratio", Box::new(|x: &[f64]| (x[0] + x[1]) / (100.0 + x[2]))),
            ("corner", Box::new(|x: &[f64]| if x[0] > x[1] { (-x[2].abs()).exp() } else { 0.0 })),
            ("tail", Box::new(move |x: &[f64]| if x[0] > 2.0 * r { 1.0 } else { 0.0 })),
            ("sum", Box::new(move |x: &[f64]| ((x[0] + x[1]) / (2.0 * r)).max(1.0))),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::Weights;
    use approx::assert_relative_eq;

    #[test]
    fn weight_matrix_rows() {
        let m = component_weight_matrix(0, 0.01);
        let z = 1.02 + 0.625;
        assert_relative_eq!(m[0], 1.0 / z, epsilon = 1e-15);
        assert_relative_eq!(m[1], 0.01 / z, epsilon = 1e-15);
        assert_relative_eq!(m[3], 0.125 / z, epsilon = 1e-15);
        assert_relative_eq!(m.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn responsibility_peaks_at_component_mean() {
        let spec = MixtureSpec::new(1000.0).unwrap();
        let t = MixtureTarget { spec };
        for (k, mu) in spec.means().iter().enumerate() {
            assert!(t.responsibilities(mu)[k] > 0.99);
        }
    }

    #[test]
    fn density_is_normalized() {
        // Coarse product rule at small theta; the Gaussian tails are negligible.
        let t = MixtureTarget { spec: MixtureSpec::new(2.0).unwrap() };
        let h = 0.2;
        let mut total = 0.0;
        for i in -60..40 {
            for j in -50..50 {
                for k in -40..50 {
                    let x = vec![i as f64 * h, j as f64 * h, k as f64 * h];
                    total += t.log_density(&x).exp() * h * h * h;
                }
            }
        }
        assert_relative_eq!(total, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn informed_weights_are_on_the_simplex() {
        let setup = MixtureSetup::new(MixtureSpec::new(100.0).unwrap()).unwrap();
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            let x = setup.target.sample_exact(&mut rng);
            let w = setup.informed.weights(&x).unwrap();
            assert_relative_eq!(w.as_slice().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(w.as_slice().iter().all(|v| *v > 0.0));
        }
    }

    #[test]
    fn exact_sampler_mean() {
        let spec = MixtureSpec::new(100.0).unwrap();
        let t = MixtureTarget { spec };
        let mut rng = RngStream::new(5, 0);
        let n = 200_000;
        let mut m = [0.0; 3];
        for _ in 0..n {
            let x = t.sample_exact(&mut rng);
            for a in 0..3 {
                m[a] += x[a] / n as f64;
            }
        }
        let expect = spec.target_mean();
        for a in 0..3 {
            assert!((m[a] - expect[a]).abs() < 0.15, "axis {a}: {} vs {}", m[a], expect[a]);
        }
    }
}
