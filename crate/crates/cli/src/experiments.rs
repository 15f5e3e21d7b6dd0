//! Experiment drivers. Each returns the tables it produces; nothing here
//! touches the file system.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use locinf::diagnostics::{empirical_tv, knn_kl, mc_asymptotic_variance_bootstrap, SampleBatch};
use locinf::exact::{induce, mixing_time, reflection_coupling, spectral_gap, tv_curve, verify_lemma_suite, Variant};
use locinf::kernel::{GibbsKernel, LogDensity};
use locinf::samplers::{
    run_chain, Alg1, Alg2, Delayed, Hybrid, Kernel, KernelCollection, Mixed, OffsetProposal, ParticleAlg2,
    ParticleWeights, Sampler, WeightFunction,
};
use locinf::simplex::SimplexWeights;
use locinf::space::DiscreteTarget;
use locinf::zoo::cross::CrossSetup;
use locinf::zoo::cylinder::{CylinderSetup, CylinderSpec};
use locinf::zoo::hypercube::HypercubeSetup;
use locinf::zoo::mixture::{MixtureSetup, MixtureSpec};
use locinf::zoo::sinusoid::SinusoidSetup;
use locinf::zoo::three_state::ThreeStateSetup;
use locinf::zoo::TestFunction;
use locinf::RngStream;
use rayon::prelude::*;

use crate::config::*;
use crate::output::{Cell, Table};

/// RNG stream for replicate `r` of block `block`. Blocks keep samplers and
/// reference draws on disjoint streams.
fn stream(block: u64, r: usize) -> u64 {
    (block << 40) | r as u64
}

const REFERENCE_BLOCK: u64 = 1000;
const BOOTSTRAP_BLOCK: u64 = 2000;

/// Map `f` over replicates in parallel; results come back in replicate order.
fn replicate<T: Send>(n: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..n).into_par_iter().map(f).collect()
}

pub fn run(cfg: &Config) -> Result<Vec<Table>> {
    let seed = cfg.seed;
    let reps = || cfg.replicates().expect("simulating experiments have a scale");
    let tables = match &cfg.params {
        Params::Coupling(p) => vec![coupling(p, reps(), seed)?],
        Params::Tv(p) => vec![tv(p)?],
        Params::Gaps(p) => vec![gaps(p)?],
        Params::Mixing(p) => vec![mixing(p)?],
        Params::SinusoidKl(p) => vec![sinusoid_kl(p, reps(), seed)?],
        Params::SinusoidVar(p) => vec![sinusoid_var(p, reps(), seed)?],
        Params::MixtureKl(p) => vec![mixture_kl(p, reps(), seed)?],
        Params::MixtureVar(p) => vec![mixture_var(p, reps(), seed)?],
        Params::CylinderKl(p) => vec![cylinder_kl(p, reps(), seed)?],
        Params::CylinderVar(p) => vec![cylinder_var(p, reps(), seed)?],
        Params::Lemma(p) => vec![lemma(p)?],
        Params::Custom(p) => custom(p, seed)?,
    };
    Ok(tables)
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn coupling(p: &CouplingParams, reps: usize, seed: u64) -> Result<Table> {
    let report = verify_lemma_suite(p.d, p.n).context("building the folded chains")?;
    let (d, n) = (p.d as f64, p.n as f64);
    let closed = [(n - 1.0) * d.powi(3) / 4.0 + d * d / 2.0, (n - 1.0) * d * d / 2.0 + d];
    let exact = [report.hitting_uninformed, report.hitting_informed];
    let mut table = Table::new(
        "coupling",
        &["chain", "replicates", "mean_coupling_time", "stderr", "hitting_time_exact", "hitting_time_closed_form"],
    );
    let mut means = [0.0; 2];
    let mut ses = [0.0; 2];
    for (k, (name, q)) in [("rsgs", &report.q), ("informed", &report.q_star)].into_iter().enumerate() {
        let times = replicate(reps, |r| {
            let mut rng = RngStream::new(seed, stream(k as u64, r));
            Ok(reflection_coupling(q, &mut rng, p.max_t)? as f64)
        })?;
        (means[k], ses[k]) = mean_and_se(&times);
        table.push(vec![name.into(), reps.into(), means[k].into(), ses[k].into(), exact[k].into(), closed[k].into()]);
    }
    let ratio = means[0] / means[1];
    let ratio_se = ratio * ((ses[0] / means[0]).powi(2) + (ses[1] / means[1]).powi(2)).sqrt();
    table.push(vec![
        "ratio".into(),
        reps.into(),
        ratio.into(),
        ratio_se.into(),
        (exact[0] / exact[1]).into(),
        (closed[0] / closed[1]).into(),
    ]);
    Ok(table)
}

fn informed_variant(name: InformedName) -> Variant {
    match name {
        InformedName::Alg1 => Variant::Alg1,
        InformedName::Alg2 => Variant::Alg2,
    }
}

fn tv(p: &TvParams) -> Result<Table> {
    let s = HypercubeSetup::new(p.m, p.d, p.p)?;
    let inf = induce(&s.kernels, &s.informed, &informed_variant(p.informed), &s.target)?;
    let rsgs = induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target)?;
    let mu = inf.point_mass(s.start())?;
    let a = tv_curve(&mu, &inf.matrix, &inf.pi, p.horizon)?;
    let b = tv_curve(&mu, &rsgs.matrix, &rsgs.pi, p.horizon)?;
    let mut table = Table::new("tv", &["t", "tv_informed", "tv_rsgs"]);
    for (t, (x, y)) in a.iter().zip(&b).enumerate() {
        table.push(vec![t.into(), (*x).into(), (*y).into()]);
    }
    Ok(table)
}

/// Closed forms of the three-state gaps: `(γ, γ*)`.
pub fn three_state_gaps(p: f64) -> (f64, f64) {
    if p < 1.0 / 3.0 {
        ((1.0 - 2.0 * p) / (1.0 - p), p * (3.0 - 5.0 * p) / (1.0 - p * p))
    } else {
        (0.5, 2.0 * p / (1.0 + p))
    }
}

fn gaps(p: &GapsParams) -> Result<Table> {
    let mut table = Table::new(
        "gaps",
        &["p", "gamma", "gamma_star", "gamma_closed_form", "gamma_star_closed_form", "delta", "delta_star"],
    );
    for &v in &p.p {
        let s = ThreeStateSetup::new(v)?;
        let g = spectral_gap(&induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target)?.matrix)?;
        let gs = spectral_gap(&induce(&s.kernels, &s.informed, &Variant::Alg2, &s.target)?.matrix)?;
        let (c, cs) = three_state_gaps(v);
        table.push(vec![v.into(), g.into(), gs.into(), c.into(), cs.into(), (g - c).abs().into(), (gs - cs).abs().into()]);
    }
    Ok(table)
}

fn mixing(p: &MixingParams) -> Result<Table> {
    let mut table = Table::new("mixing", &["d", "eps", "tau_informed", "tau_rsgs"]);
    for &d in &p.d {
        let s = CrossSetup::new(d)?;
        let inf = induce(&s.kernels, &s.informed, &Variant::Alg1, &s.target)?;
        let rsgs = induce(&s.kernels, &s.informed, &Variant::Hybrid(s.uninformed.clone()), &s.target)?;
        let mu = inf.point_mass(s.start())?;
        for &eps in &p.eps {
            // Iterations are counted from 1 at the starting state.
            let a = mixing_time(&mu, &inf.matrix, &inf.pi, eps, p.horizon)? + 1;
            let b = mixing_time(&mu, &rsgs.matrix, &rsgs.pi, eps, p.horizon)? + 1;
            table.push(vec![d.into(), eps.into(), a.into(), b.into()]);
        }
    }
    Ok(table)
}

type Named<'a> = (&'static str, &'a dyn Sampler<Vec<f64>>);

struct KlRun<'a> {
    samplers: Vec<Named<'a>>,
    initial: &'a (dyn Fn(&mut RngStream) -> Vec<f64> + Sync),
    exact: &'a (dyn Fn(&mut RngStream) -> Vec<f64> + Sync),
    reps: usize,
    horizon: usize,
    every: usize,
    k: usize,
    seed: u64,
}

impl KlRun<'_> {
    fn table(&self) -> Result<Table> {
        let checkpoints: Vec<usize> = (0..=self.horizon).step_by(self.every).collect();
        let reference = replicate(self.reps, |r| Ok((self.exact)(&mut RngStream::new(self.seed, stream(REFERENCE_BLOCK, r)))))?;
        let reference = SampleBatch::new("target", reference)?;
        let mut table = Table::new("kl", &["t", "sampler", "replicates", "kl"]);
        let mut curves = Vec::new();
        for (b, (name, sampler)) in self.samplers.iter().enumerate() {
            let snapshots = replicate(self.reps, |r| {
                let mut rng = RngStream::new(self.seed, stream(b as u64, r));
                let mut x = (self.initial)(&mut rng);
                let mut out = vec![x.clone()];
                for t in 1..=self.horizon {
                    x = sampler.step(t - 1, &x, &mut rng)?.state;
                    if t % self.every == 0 {
                        out.push(x.clone());
                    }
                }
                Ok(out)
            })
            .with_context(|| format!("running {name}"))?;
            let kl: Vec<f64> = (0..checkpoints.len())
                .into_par_iter()
                .map(|c| {
                    let batch = SampleBatch::new(*name, snapshots.iter().map(|s| s[c].clone()).collect())?;
                    Ok(knn_kl(&batch, &reference, self.k)?)
                })
                .collect::<Result<_>>()?;
            curves.push((*name, kl));
        }
        for (c, t) in checkpoints.iter().enumerate() {
            for (name, kl) in &curves {
                table.push(vec![(*t).into(), (*name).into(), self.reps.into(), kl[c].into()]);
            }
        }
        Ok(table)
    }
}

struct VarRun<'a> {
    samplers: Vec<Named<'a>>,
    functions: Vec<TestFunction>,
    exact: &'a (dyn Fn(&mut RngStream) -> Vec<f64> + Sync),
    reps: usize,
    iterations: usize,
    bootstrap: usize,
    seed: u64,
}

impl VarRun<'_> {
    fn table(&self) -> Result<Table> {
        let nf = self.functions.len();
        let mut table = Table::new("variance", &["function", "sampler", "replicates", "iterations", "sigma2", "stderr"]);
        let mut rows = vec![Vec::new(); nf];
        for (b, (name, sampler)) in self.samplers.iter().enumerate() {
            // Chains start from exact draws, so no burn-in enters the averages.
            let means = replicate(self.reps, |r| {
                let mut rng = RngStream::new(self.seed, stream(b as u64, r));
                let mut x = (self.exact)(&mut rng);
                let mut acc = vec![0.0; nf];
                for t in 0..self.iterations {
                    x = sampler.step(t, &x, &mut rng)?.state;
                    for (a, (_, f)) in acc.iter_mut().zip(&self.functions) {
                        *a += f(&x);
                    }
                }
                Ok(acc.into_iter().map(|a| a / self.iterations as f64).collect::<Vec<f64>>())
            })
            .with_context(|| format!("running {name}"))?;
            for (j, row) in rows.iter_mut().enumerate() {
                let col: Vec<f64> = means.iter().map(|m| m[j]).collect();
                let mut rng = RngStream::new(self.seed, stream(BOOTSTRAP_BLOCK + b as u64, j));
                let est = mc_asymptotic_variance_bootstrap(&col, self.iterations, self.bootstrap, &mut rng)?;
                row.push((*name, est));
            }
        }
        for (j, row) in rows.into_iter().enumerate() {
            for (name, est) in row {
                table.push(vec![
                    self.functions[j].0.into(),
                    name.into(),
                    self.reps.into(),
                    self.iterations.into(),
                    est.value.into(),
                    est.stderr.into(),
                ]);
            }
        }
        Ok(table)
    }
}

struct SinusoidSamplers {
    rsgs: Hybrid<Vec<f64>>,
    alg1: Alg1<Vec<f64>>,
    alg2: Alg2<Vec<f64>>,
}

impl SinusoidSamplers {
    fn new() -> Result<Self> {
        let s = SinusoidSetup::new()?;
        let kernels = Arc::new(s.kernels);
        let w = Arc::new(s.informed);
        Ok(Self {
            rsgs: Hybrid { kernels: Arc::clone(&kernels), omega_c: s.uninformed },
            alg1: Alg1 { kernels: Arc::clone(&kernels), weights: w.clone() },
            alg2: Alg2 { kernels, weights: w },
        })
    }

    fn named(&self) -> Vec<Named<'_>> {
        vec![("rsgs", &self.rsgs), ("alg1", &self.alg1), ("alg2", &self.alg2)]
    }
}

fn sinusoid_kl(p: &SinusoidKlParams, reps: usize, seed: u64) -> Result<Table> {
    let s = SinusoidSamplers::new()?;
    KlRun {
        samplers: s.named(),
        initial: &SinusoidSetup::initial,
        exact: &SinusoidSetup::sample_exact,
        reps,
        horizon: p.horizon,
        every: p.every,
        k: p.k,
        seed,
    }
    .table()
}

fn sinusoid_var(p: &SinusoidVarParams, reps: usize, seed: u64) -> Result<Table> {
    let s = SinusoidSamplers::new()?;
    VarRun {
        samplers: s.named(),
        functions: SinusoidSetup::test_functions(),
        exact: &SinusoidSetup::sample_exact,
        reps,
        iterations: p.iterations,
        bootstrap: p.bootstrap,
        seed,
    }
    .table()
}

fn mixture_setup(theta: f64, sigma_large: Option<f64>, sigma_small: f64, eps: f64) -> Result<MixtureSetup> {
    let mut spec = MixtureSpec::new(theta)?;
    if let Some(s) = sigma_large {
        spec.sigma_large = s;
    }
    spec.sigma_small = sigma_small;
    spec.eps = eps;
    Ok(MixtureSetup::new(spec)?)
}

fn mixture_kl(p: &MixtureKlParams, reps: usize, seed: u64) -> Result<Table> {
    let setup = mixture_setup(p.theta, p.sigma_large, p.sigma_small, p.eps)?;
    let kernels = Arc::new(setup.kernels.clone());
    let rsgs = Hybrid { kernels: Arc::clone(&kernels), omega_c: setup.uninformed.clone() };
    let alg2 = Alg2 { kernels: Arc::clone(&kernels), weights: Arc::new(setup.informed.clone()) };
    let particle = ParticleAlg2 {
        kernels,
        particles: ParticleWeights {
            offsets: setup.walks.iter().map(|w| Arc::new(*w) as Arc<dyn OffsetProposal>).collect(),
            target: Arc::clone(&setup.target) as Arc<dyn LogDensity<Vec<f64>>>,
            n_particles: p.particles.max(1),
        },
    };
    let mut samplers: Vec<Named<'_>> = vec![("rsgs", &rsgs), ("alg2", &alg2)];
    if p.particles > 0 {
        samplers.push(("alg2_particle", &particle));
    }
    let initial = |rng: &mut RngStream| setup.initial(rng);
    let exact = |rng: &mut RngStream| setup.target.sample_exact(rng);
    KlRun { samplers, initial: &initial, exact: &exact, reps, horizon: p.horizon, every: p.every, k: p.k, seed }.table()
}

fn mixture_var(p: &MixtureVarParams, reps: usize, seed: u64) -> Result<Table> {
    let setup = mixture_setup(p.theta, p.sigma_large, p.sigma_small, p.eps)?;
    let kernels = Arc::new(setup.kernels.clone());
    let rsgs = Hybrid { kernels: Arc::clone(&kernels), omega_c: setup.uninformed.clone() };
    let alg2 = Alg2 { kernels, weights: Arc::new(setup.informed.clone()) };
    let exact = |rng: &mut RngStream| setup.target.sample_exact(rng);
    VarRun {
        samplers: vec![("rsgs", &rsgs), ("alg2", &alg2)],
        functions: setup.test_functions(),
        exact: &exact,
        reps,
        iterations: p.iterations,
        bootstrap: p.bootstrap,
        seed,
    }
    .table()
}

fn cylinder_setup(lambda: f64, big: f64, small: f64, n_control: usize, eps: f64, sigma: f64) -> Result<CylinderSetup> {
    let spec = CylinderSpec { big_radius: big, small_radius: small, lambda, n_control, eps, sigma };
    Ok(CylinderSetup::new(spec)?)
}

fn cylinder_kl(p: &CylinderKlParams, reps: usize, seed: u64) -> Result<Table> {
    let setup = cylinder_setup(p.lambda, p.big_radius, p.small_radius, p.n_control, p.eps, p.sigma)?;
    let rsgs = setup.uninformed_sampler();
    let alg2 = setup.informed_sampler();
    let initial = |rng: &mut RngStream| setup.initial(rng);
    let exact = |rng: &mut RngStream| setup.target.sample_exact(rng);
    KlRun {
        samplers: vec![("rsgs", &rsgs), ("alg2", &alg2)],
        initial: &initial,
        exact: &exact,
        reps,
        horizon: p.horizon,
        every: p.every,
        k: p.k,
        seed,
    }
    .table()
}

fn cylinder_var(p: &CylinderVarParams, reps: usize, seed: u64) -> Result<Table> {
    let setup = cylinder_setup(p.lambda, p.big_radius, p.small_radius, p.n_control, p.eps, p.sigma)?;
    let rsgs = setup.uninformed_sampler();
    let alg2 = setup.informed_sampler();
    let exact = |rng: &mut RngStream| setup.target.sample_exact(rng);
    VarRun {
        samplers: vec![("rsgs", &rsgs), ("alg2", &alg2)],
        functions: setup.test_functions(),
        exact: &exact,
        reps,
        iterations: p.iterations,
        bootstrap: p.bootstrap,
        seed,
    }
    .table()
}

fn lemma(p: &LemmaParams) -> Result<Table> {
    let r = verify_lemma_suite(p.d, p.n)?;
    let (d, n) = (p.d as f64, p.n as f64);
    let hu = (n - 1.0) * d.powi(3) / 4.0 + d * d / 2.0;
    let hi = (n - 1.0) * d * d / 2.0 + d;
    let mut table = Table::new("lemma", &["quantity", "value", "reference", "deviation"]);
    let mut row = |q: &str, v: f64, reference: f64| {
        table.push(vec![q.into(), v.into(), reference.into(), (v - reference).abs().into()]);
    };
    row("hitting_time_rsgs", r.hitting_uninformed, hu);
    row("hitting_time_informed", r.hitting_informed, hi);
    row("hitting_ratio", r.hitting_uninformed / r.hitting_informed, hu / hi);
    row("gap_rsgs_vs_lazy_informed", r.gap_uninformed, r.gap_informed_lazy);
    row("gamma_omega_defect", r.gamma_omega_defect, 0.0);
    row("spectrum_union_defect", r.spectrum_union_defect, 0.0);
    row("zero_eigenvalue_multiplicity", r.zero_multiplicity as f64, ((p.n - 3) * p.d) as f64);
    Ok(table)
}

struct Discrete {
    target: Arc<DiscreteTarget>,
    kernels: KernelCollection<usize>,
    informed: WeightFunction<usize>,
    uninformed: SimplexWeights,
    start: usize,
}

fn discrete_example(p: &CustomParams) -> Result<Discrete> {
    let d = match p.example {
        ExampleName::ThreeState => {
            let s = ThreeStateSetup::new(p.p)?;
            Discrete { target: s.target, kernels: s.kernels, informed: s.informed, uninformed: s.uninformed, start: 0 }
        }
        ExampleName::Hypercube => {
            let s = HypercubeSetup::new(p.m, p.d, p.p)?;
            let start = s.start();
            Discrete { target: s.target, kernels: s.kernels, informed: s.informed, uninformed: s.uninformed, start }
        }
        ExampleName::Cross => {
            let s = CrossSetup::new(p.d)?;
            let start = s.start();
            Discrete { target: s.target, kernels: s.kernels, informed: s.informed, uninformed: s.uninformed, start }
        }
    };
    Ok(d)
}

fn informed_sampler(
    name: InformedName,
    kernels: &Arc<KernelCollection<usize>>,
    w: &Arc<WeightFunction<usize>>,
) -> Box<dyn Sampler<usize>> {
    match name {
        InformedName::Alg1 => Box::new(Alg1 { kernels: Arc::clone(kernels), weights: w.clone() }),
        InformedName::Alg2 => Box::new(Alg2 { kernels: Arc::clone(kernels), weights: w.clone() }),
    }
}

fn custom(p: &CustomParams, seed: u64) -> Result<Vec<Table>> {
    let ex = discrete_example(p)?;
    let kernels = match p.kernels {
        KernelsName::Native => ex.kernels,
        KernelsName::Gibbs => {
            if p.example == ExampleName::ThreeState {
                bail!("Gibbs kernels need a grid example");
            }
            let dim = ex.target.space().dim();
            KernelCollection::new(
                (0..dim).map(|c| Kernel::General(Arc::new(GibbsKernel::new(Arc::clone(&ex.target), c)) as _)).collect(),
            )?
        }
    };
    let kernels = Arc::new(kernels);
    let w = Arc::new(ex.informed);
    let hybrid = || Box::new(Hybrid { kernels: Arc::clone(&kernels), omega_c: ex.uninformed.clone() });
    let sampler: Box<dyn Sampler<usize>> = match p.variant {
        VariantName::Alg1 => informed_sampler(InformedName::Alg1, &kernels, &w),
        VariantName::Alg2 => informed_sampler(InformedName::Alg2, &kernels, &w),
        VariantName::Hybrid => hybrid(),
        VariantName::Delayed => Box::new(Delayed { lambda: p.lambda, inner: informed_sampler(p.inner, &kernels, &w) }),
        VariantName::Mixed => Box::new(Mixed {
            varpi: p.varpi,
            informed: informed_sampler(p.inner, &kernels, &w),
            uninformed: hybrid(),
        }),
    };
    let space = ex.target.space();
    let dim = space.dim();
    let mut columns = vec!["chain".to_owned(), "t".to_owned(), "state".to_owned()];
    columns.extend((1..=dim).map(|c| format!("x{c}")));
    columns.extend(["kernel_index".to_owned(), "accepted".to_owned()]);
    let mut trace_table = Table::with_columns("trace", columns);
    let mut summary = Table::new("summary", &["chain", "iterations", "acceptance_rate", "empirical_tv"]);
    let traces = replicate(p.chains, |c| {
        Ok(run_chain(sampler.as_ref(), ex.start, p.iterations, &mut RngStream::new(seed, stream(0, c)))?)
    })?;
    for (c, trace) in traces.iter().enumerate() {
        for t in 0..trace.len() {
            let x = trace.states[t];
            let mut row: Vec<Cell> = vec![c.into(), t.into(), x.into()];
            row.extend(space.decode(x).into_iter().map(Cell::from));
            row.push(trace.kernels[t].map_or(Cell::Text(String::new()), Cell::from));
            row.push(usize::from(trace.accepted[t]).into());
            trace_table.push(row);
        }
        let tv = empirical_tv(&trace.states[1..], &ex.target)?;
        summary.push(vec![c.into(), p.iterations.into(), trace.acceptance_rate().into(), tv.into()]);
    }
    Ok(vec![trace_table, summary])
}
