//! Browser front end for the exact (discrete) calculations of `locinf`.
//!
//! Each operation has a plain Rust version returning `Result<_, String>`,
//! tested natively, and a thin `#[wasm_bindgen]` wrapper that hands flat
//! `Float64Array`s to the page.

use locinf::exact::{induce, mixing_time, spectral_gap, tv_curve, Variant};
use locinf::zoo::cross::CrossSetup;
use locinf::zoo::hypercube::HypercubeSetup;
use locinf::zoo::three_state::ThreeStateSetup;
use wasm_bindgen::prelude::*;

/// Largest state count the page may ask for; keeps the tab responsive.
pub const MAX_STATES: usize = 20_000;

fn err(e: locinf::Error) -> String {
    e.to_string()
}

fn informed(name: &str) -> Result<Variant, String> {
    match name {
        "alg1" => Ok(Variant::Alg1),
        "alg2" => Ok(Variant::Alg2),
        other => Err(format!("unknown sampler `{other}` (expected alg1 or alg2)")),
    }
}

/// Spectral gaps `(p, γ_rsgs, γ_informed)` of the three-state chain on an
/// even grid of `n` points in `[lo, hi]`.
pub fn three_state_gaps(lo: f64, hi: f64, n: usize) -> Result<Vec<(f64, f64, f64)>, String> {
    if n < 2 || !(0.0 < lo && lo < hi && hi < 0.5) {
        return Err("need 0 < lo < hi < 0.5 and at least two points".into());
    }
    (0..n)
        .map(|i| {
            let p = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let s = ThreeStateSetup::new(p).map_err(err)?;
            let rsgs = induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target).map_err(err)?;
            let inf = induce(&s.kernels, &s.informed, &Variant::Alg2, &s.target).map_err(err)?;
            Ok((p, spectral_gap(&rsgs.matrix).map_err(err)?, spectral_gap(&inf.matrix).map_err(err)?))
        })
        .collect()
}

/// Exact TV distance to the target from the filament extremity of the
/// hypercube example, for the informed sampler and RSGS.
pub fn hypercube_tv(m: usize, d: usize, p: f64, horizon: usize, sampler: &str) -> Result<(Vec<f64>, Vec<f64>), String> {
    let states = (m as f64).powi(d as i32);
    if m < 2 || d < 1 || states > MAX_STATES as f64 {
        return Err(format!("m^d must lie in [2, {MAX_STATES}]"));
    }
    if horizon > 5_000 {
        return Err("horizon is capped at 5000".into());
    }
    let variant = informed(sampler)?;
    let s = HypercubeSetup::new(m, d, p).map_err(err)?;
    let inf = induce(&s.kernels, &s.informed, &variant, &s.target).map_err(err)?;
    let rsgs = induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target).map_err(err)?;
    let mu = inf.point_mass(s.start()).map_err(err)?;
    Ok((
        tv_curve(&mu, &inf.matrix, &inf.pi, horizon).map_err(err)?,
        tv_curve(&mu, &rsgs.matrix, &rsgs.pi, horizon).map_err(err)?,
    ))
}

/// Mixing times `(informed, rsgs)` on the crossing planes, counting the
/// starting state as iteration 1.
pub fn cross_mixing(d: usize, eps: f64, horizon: usize) -> Result<(usize, usize), String> {
    if !(2..=60).contains(&d) {
        return Err("d must lie in [2, 60]".into());
    }
    let s = CrossSetup::new(d).map_err(err)?;
    let inf = induce(&s.kernels, &s.informed, &Variant::Alg1, &s.target).map_err(err)?;
    let rsgs = induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target).map_err(err)?;
    let mu = inf.point_mass(s.start()).map_err(err)?;
    let a = mixing_time(&mu, &inf.matrix, &inf.pi, eps, horizon).map_err(err)?;
    let b = mixing_time(&mu, &rsgs.matrix, &rsgs.pi, eps, horizon).map_err(err)?;
    Ok((a + 1, b + 1))
}

/// Flat `[p0, g0, g*0, p1, ...]`.
#[wasm_bindgen(js_name = threeStateGaps)]
pub fn three_state_gaps_js(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    Ok(three_state_gaps(lo, hi, n)?.into_iter().flat_map(|(p, g, gs)| [p, g, gs]).collect())
}

/// Informed curve followed by the RSGS curve, each `horizon + 1` long.
#[wasm_bindgen(js_name = hypercubeTv)]
pub fn hypercube_tv_js(m: usize, d: usize, p: f64, horizon: usize, sampler: &str) -> Result<Vec<f64>, String> {
    let (mut a, b) = hypercube_tv(m, d, p, horizon, sampler)?;
    a.extend(b);
    Ok(a)
}

#[wasm_bindgen(js_name = crossMixing)]
pub fn cross_mixing_js(d: usize, eps: f64, horizon: usize) -> Result<Vec<u32>, String> {
    let (a, b) = cross_mixing(d, eps, horizon)?;
    Ok(vec![a as u32, b as u32])
}
