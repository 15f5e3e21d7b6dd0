use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;

use crate::rng::RngStream;

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub(crate) fn std_normal(rng: &mut RngStream) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard normal CDF, accurate in both tails.
pub(crate) fn norm_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

pub(crate) fn ln_norm_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - LN_SQRT_2PI
}

/// `x` drawn from `N(mean, 1)` restricted to `[lo, hi]`, by rejection.
pub(crate) fn truncated_unit_normal(rng: &mut RngStream, mean: f64, lo: f64, hi: f64) -> f64 {
    loop {
        let v = mean + std_normal(rng);
        if (lo..=hi).contains(&v) {
            return v;
        }
    }
}
