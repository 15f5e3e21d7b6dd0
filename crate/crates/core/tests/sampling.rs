//! Monte Carlo checks of the samplers against exact answers.

use std::sync::Arc;

use locinf::exact::{induce, Variant};
use locinf::kernel::LogDensity;
use locinf::samplers::{
    run_chain, run_chain_with, Alg1, Alg2, OffsetProposal, ParticleAlg2, ParticleWeights, Sampler, WeightFunction,
    Weights,
};
use locinf::simplex::{sample_categorical, SimplexWeights};
use locinf::zoo::cross::CrossSetup;
use locinf::zoo::mixture::{CoordinateWalk, MixtureSetup, MixtureSpec};
use locinf::zoo::sinusoid::SinusoidTarget;
use locinf::zoo::three_state::ThreeStateSetup;
use locinf::RngStream;

#[test]
fn chains_are_reproducible() {
    let s = ThreeStateSetup::new(0.2).unwrap();
    let sampler = Alg2 { kernels: Arc::new(s.kernels), weights: Arc::new(s.informed) };
    let a = run_chain(&sampler, 0, 500, &mut RngStream::new(9, 3)).unwrap();
    let b = run_chain(&sampler, 0, 500, &mut RngStream::new(9, 3)).unwrap();
    let c = run_chain(&sampler, 0, 500, &mut RngStream::new(9, 4)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.states, c.states);
    assert_eq!(a.len(), 501);
    let empty = run_chain(&sampler, 2, 0, &mut RngStream::new(9, 3)).unwrap();
    assert_eq!(empty.states, vec![2]);
}

#[test]
fn zero_reverse_weight_blocks_the_move() {
    // From state 0 the first kernel proposes 1, whose reverse kernel has
    // weight 0 at state 1; that move must never be accepted.
    let s = ThreeStateSetup::new(0.2).unwrap();
    let w = WeightFunction::closed_form(2, |x: &usize| {
        SimplexWeights::from_unnormalized(if *x == 1 { vec![0.0, 1.0] } else { vec![0.5, 0.5] })
    });
    let a1 = induce(&s.kernels, &w, &Variant::Alg1, &s.target).unwrap();
    assert_eq!(a1.matrix.get(0, 1), 0.0);
    let sampler = Alg1 { kernels: Arc::new(s.kernels), weights: Arc::new(w) };
    let mut rng = RngStream::new(1, 0);
    for _ in 0..2000 {
        let out = sampler.step(0, &0, &mut rng).unwrap();
        assert_ne!(out.state, 1);
    }
}

#[test]
fn cross_chain_law_at_t25_matches_matrix_power() {
    let s = CrossSetup::new(5).unwrap();
    let exact = induce(&s.kernels, &s.informed, &Variant::Alg1, &s.target).unwrap();
    let mut mu = exact.point_mass(s.start()).unwrap();
    for _ in 0..25 {
        mu = exact.matrix.left_mul(&mu);
    }
    let start = s.start();
    let sampler = Alg1 { kernels: Arc::new(s.kernels), weights: Arc::new(s.informed) };
    let reps = 100_000;
    let mut counts = vec![0usize; exact.states.len()];
    for r in 0..reps {
        let mut rng = RngStream::new(77, r);
        let x = run_chain_with(&sampler, start, 25, &mut rng, |_, _| {}).unwrap();
        counts[exact.position(x).unwrap()] += 1;
    }
    let tv: f64 = 0.5 * counts.iter().zip(&mu).map(|(c, m)| (*c as f64 / reps as f64 - m).abs()).sum::<f64>();
    assert!(tv < 0.05, "{tv}");
}

#[test]
fn categorical_draws_pass_chi_square() {
    let raw: Vec<f64> = (0..16).map(|k| 1.0 + ((k * 7) % 5) as f64).collect();
    let w = SimplexWeights::from_unnormalized(raw).unwrap();
    let n = 1_000_000;
    let mut rng = RngStream::new(5, 0);
    let mut counts = [0usize; 16];
    for _ in 0..n {
        counts[sample_categorical(w.as_slice(), &mut rng)] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let e = n as f64 * w.get(k);
            (*c as f64 - e).powi(2) / e
        })
        .sum();
    // Upper 1e-3 quantile of χ² with 15 degrees of freedom.
    assert!(chi2 < 37.697, "{chi2}");
}

fn particle_weights(setup: &MixtureSetup, n_particles: usize) -> ParticleWeights {
    ParticleWeights {
        offsets: setup.walks.iter().map(|w| Arc::new(*w) as Arc<dyn OffsetProposal>).collect(),
        target: Arc::clone(&setup.target) as Arc<dyn LogDensity<Vec<f64>>>,
        n_particles,
    }
}

fn argmax(v: impl Iterator<Item = f64>) -> usize {
    v.enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).map(|(k, _)| k).unwrap()
}

#[test]
fn particle_weights_favour_the_edge_axis() {
    // Mid-edge points lie on the centre line of a component, within one long
    // standard deviation of its mean. Weights are compared per axis, summing
    // the two scales: the small-scale walk barely moves and so always scores
    // close to π(x), which makes the raw argmax land on it.
    let setup = MixtureSetup::new(MixtureSpec::new(1000.0).unwrap()).unwrap();
    let pw = particle_weights(&setup, 100);
    let mut rng = RngStream::new(21, 0);
    let s = setup.spec.theta.sqrt();
    let trials = 1000;
    let mut hits = 0;
    for t in 0..trials {
        let k = t % 3;
        let mut x = setup.spec.means()[k].to_vec();
        x[k] += s * (2.0 * rng.uniform() - 1.0);
        let w = pw.freeze(&mut rng).unwrap().weights(&x).unwrap();
        let closed = setup.informed.weights(&x).unwrap();
        let axis_of = |w: &SimplexWeights| argmax((0..3).map(|a| w.get(a) + w.get(a + 3)));
        if axis_of(&w) == axis_of(&closed) {
            hits += 1;
        }
        assert_eq!(axis_of(&closed), k);
    }
    assert!(hits as f64 / trials as f64 >= 0.9, "{hits}/{trials}");
}

#[test]
fn particle_weight_noise_shrinks_like_one_over_l() {
    let setup = MixtureSetup::new(MixtureSpec::new(100.0).unwrap()).unwrap();
    let x = vec![1.0, 20.0, 0.5];
    let spread = |l: usize| {
        let pw = particle_weights(&setup, l);
        let mut rng = RngStream::new(31, l as u64);
        let v: Vec<f64> = (0..400).map(|_| pw.freeze(&mut rng).unwrap().weights(&x).unwrap().get(0)).collect();
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
    };
    let ratio = spread(20) / spread(200);
    assert!(ratio > 6.0 && ratio < 16.0, "{ratio}");
}

#[test]
fn particle_weights_degenerate_cases() {
    // Zero-scale offsets put every particle on x itself: equal averages.
    let target = Arc::new(SinusoidTarget) as Arc<dyn LogDensity<Vec<f64>>>;
    let still = ParticleWeights {
        offsets: (0..3).map(|c| Arc::new(CoordinateWalk { coord: c % 2, sigma: 0.0, dim: 2 }) as _).collect(),
        target: Arc::clone(&target),
        n_particles: 5,
    };
    let mut rng = RngStream::new(1, 1);
    let w = still.freeze(&mut rng).unwrap().weights(&vec![0.95, 0.3]).unwrap();
    assert!(w.as_slice().iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
    // Far outside the support every particle has zero density.
    let walk = ParticleWeights {
        offsets: (0..2).map(|c| Arc::new(CoordinateWalk { coord: c, sigma: 0.1, dim: 2 }) as _).collect(),
        target,
        n_particles: 10,
    };
    let w = walk.freeze(&mut rng).unwrap().weights(&vec![50.0, 50.0]).unwrap();
    assert_eq!(w, SimplexWeights::uniform(2));
}

#[test]
fn particle_sampler_preserves_exact_draws() {
    let setup = MixtureSetup::new(MixtureSpec::new(100.0).unwrap()).unwrap();
    let particles = particle_weights(&setup, 20);
    let target = Arc::clone(&setup.target);
    let sampler = ParticleAlg2 { kernels: Arc::new(setup.kernels), particles };
    let reps = 4000;
    let (mut chain, mut sq, mut fresh) = ([0.0; 3], [0.0; 3], [0.0; 3]);
    for r in 0..reps {
        let mut rng = RngStream::new(41, r);
        let x0 = target.sample_exact(&mut rng);
        let x = run_chain_with(&sampler, x0, 10, &mut rng, |_, _| {}).unwrap();
        let y = target.sample_exact(&mut rng);
        for a in 0..3 {
            chain[a] += x[a] / reps as f64;
            sq[a] += x[a] * x[a] / reps as f64;
            fresh[a] += y[a] / reps as f64;
        }
    }
    for a in 0..3 {
        let se = (2.0 * (sq[a] - chain[a] * chain[a]) / reps as f64).sqrt();
        assert!((chain[a] - fresh[a]).abs() < 4.0 * se, "axis {a}: {} vs {} (se {se})", chain[a], fresh[a]);
    }
}
