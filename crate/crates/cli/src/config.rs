//! Experiment configuration files.
//!
//! A config is a TOML document with a few top-level keys and one `[params]`
//! table whose schema depends on the experiment:
//!
//! ```toml
//! experiment = "ex5_mixing"
//! seed = 1
//! [params]
//! d = [8]
//! ```
//!
//! Unknown keys are rejected. Every parameter has a default, so an empty
//! `[params]` table (or none at all) is valid.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use locinf::exact::STATE_CAP;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Experiment identifiers, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Ex1Coupling,
    Ex2Tv,
    Ex3Gaps,
    Ex5Mixing,
    Ex6Kl,
    Ex6Var,
    Ex7Kl,
    Ex7Var,
    Ex8Kl,
    Ex8Var,
    LemmaSuite,
    CustomChain,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Self::Ex1Coupling,
        Self::Ex2Tv,
        Self::Ex3Gaps,
        Self::Ex5Mixing,
        Self::Ex6Kl,
        Self::Ex6Var,
        Self::Ex7Kl,
        Self::Ex7Var,
        Self::Ex8Kl,
        Self::Ex8Var,
        Self::LemmaSuite,
        Self::CustomChain,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Ex1Coupling => "ex1_coupling",
            Self::Ex2Tv => "ex2_tv",
            Self::Ex3Gaps => "ex3_gaps",
            Self::Ex5Mixing => "ex5_mixing",
            Self::Ex6Kl => "ex6_kl",
            Self::Ex6Var => "ex6_var",
            Self::Ex7Kl => "ex7_kl",
            Self::Ex7Var => "ex7_var",
            Self::Ex8Kl => "ex8_kl",
            Self::Ex8Var => "ex8_var",
            Self::LemmaSuite => "lemma_suite",
            Self::CustomChain => "custom_chain",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.id() == id)
    }

    pub fn default_params(self) -> Params {
        match self {
            Self::Ex1Coupling => Params::Coupling(Default::default()),
            Self::Ex2Tv => Params::Tv(Default::default()),
            Self::Ex3Gaps => Params::Gaps(Default::default()),
            Self::Ex5Mixing => Params::Mixing(Default::default()),
            Self::Ex6Kl => Params::SinusoidKl(Default::default()),
            Self::Ex6Var => Params::SinusoidVar(Default::default()),
            Self::Ex7Kl => Params::MixtureKl(Default::default()),
            Self::Ex7Var => Params::MixtureVar(Default::default()),
            Self::Ex8Kl => Params::CylinderKl(Default::default()),
            Self::Ex8Var => Params::CylinderVar(Default::default()),
            Self::LemmaSuite => Params::Lemma(Default::default()),
            Self::CustomChain => Params::Custom(Default::default()),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Replicate counts: a desk-scale default and the full count.
#[derive(Debug, Clone, Copy)]
pub struct Scale {
    pub desk: usize,
    pub paper: usize,
}

impl Scale {
    /// `--paper-scale` wins over the file, which wins over the desk default.
    pub fn pick(self, configured: Option<usize>, paper_scale: bool) -> usize {
        if paper_scale {
            self.paper
        } else {
            configured.unwrap_or(self.desk)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    Alg1,
    Alg2,
    Hybrid,
    Delayed,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InformedName {
    Alg1,
    Alg2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelsName {
    /// The example's own collection (MH kernels).
    Native,
    /// Exact full-conditional Gibbs kernels, with no MH factorization.
    Gibbs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    ThreeState,
    Hypercube,
    Cross,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingParams {
    pub d: usize,
    pub n: usize,
    pub replicates: Option<usize>,
    pub max_t: usize,
}

impl Default for CouplingParams {
    fn default() -> Self {
        Self { d: 4, n: 10, replicates: None, max_t: 1_000_000 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TvParams {
    pub m: usize,
    pub d: usize,
    pub p: f64,
    pub horizon: usize,
    pub informed: InformedName,
}

impl Default for TvParams {
    fn default() -> Self {
        Self { m: 10, d: 2, p: 0.1, horizon: 300, informed: InformedName::Alg1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GapsParams {
    pub p: Vec<f64>,
}

impl Default for GapsParams {
    fn default() -> Self {
        Self { p: vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.45] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixingParams {
    pub d: Vec<usize>,
    pub eps: Vec<f64>,
    pub horizon: usize,
}

impl Default for MixingParams {
    fn default() -> Self {
        Self { d: vec![2, 5, 8], eps: vec![0.25, 0.1, 0.01, 0.001], horizon: 10_000 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SinusoidKlParams {
    pub replicates: Option<usize>,
    pub horizon: usize,
    pub every: usize,
    pub k: usize,
}

impl Default for SinusoidKlParams {
    fn default() -> Self {
        Self { replicates: None, horizon: 1000, every: 10, k: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SinusoidVarParams {
    pub replicates: Option<usize>,
    pub iterations: usize,
    pub bootstrap: usize,
}

impl Default for SinusoidVarParams {
    fn default() -> Self {
        Self { replicates: None, iterations: 5000, bootstrap: 200 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixtureKlParams {
    pub theta: f64,
    pub sigma_large: Option<f64>,
    pub sigma_small: f64,
    pub eps: f64,
    pub replicates: Option<usize>,
    pub horizon: usize,
    pub every: usize,
    pub k: usize,
    /// Particles per kernel for the particle-weight sampler; 0 leaves it out.
    pub particles: usize,
}

impl Default for MixtureKlParams {
    fn default() -> Self {
        Self {
            theta: 100.0,
            sigma_large: None,
            sigma_small: 1.0,
            eps: 0.01,
            replicates: None,
            horizon: 2000,
            every: 20,
            k: 1,
            particles: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixtureVarParams {
    pub theta: f64,
    pub sigma_large: Option<f64>,
    pub sigma_small: f64,
    pub eps: f64,
    pub replicates: Option<usize>,
    pub iterations: usize,
    pub bootstrap: usize,
}

impl Default for MixtureVarParams {
    fn default() -> Self {
        Self {
            theta: 1000.0,
            sigma_large: None,
            sigma_small: 1.0,
            eps: 0.01,
            replicates: None,
            iterations: 5000,
            bootstrap: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CylinderKlParams {
    pub lambda: f64,
    pub big_radius: f64,
    pub small_radius: f64,
    pub n_control: usize,
    pub eps: f64,
    pub sigma: f64,
    pub replicates: Option<usize>,
    pub horizon: usize,
    pub every: usize,
    pub k: usize,
}

impl Default for CylinderKlParams {
    fn default() -> Self {
        Self {
            lambda: 100.0,
            big_radius: 1.0,
            small_radius: 0.05,
            n_control: 12,
            eps: 0.1,
            sigma: 0.1,
            replicates: None,
            horizon: 200,
            every: 10,
            k: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CylinderVarParams {
    pub lambda: f64,
    pub big_radius: f64,
    pub small_radius: f64,
    pub n_control: usize,
    pub eps: f64,
    pub sigma: f64,
    pub replicates: Option<usize>,
    pub iterations: usize,
    pub bootstrap: usize,
}

impl Default for CylinderVarParams {
    fn default() -> Self {
        Self {
            lambda: 100.0,
            big_radius: 1.0,
            small_radius: 0.05,
            n_control: 12,
            eps: 0.1,
            sigma: 0.1,
            replicates: None,
            iterations: 5000,
            bootstrap: 200,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaParams {
    pub d: usize,
    pub n: usize,
}

impl Default for LemmaParams {
    fn default() -> Self {
        Self { d: 4, n: 10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CustomParams {
    pub example: ExampleName,
    pub kernels: KernelsName,
    pub variant: VariantName,
    /// Informed sampler inside `delayed` and `mixed`.
    pub inner: InformedName,
    pub p: f64,
    pub m: usize,
    pub d: usize,
    pub lambda: f64,
    pub varpi: f64,
    pub iterations: usize,
    pub chains: usize,
}

impl Default for CustomParams {
    fn default() -> Self {
        Self {
            example: ExampleName::ThreeState,
            kernels: KernelsName::Native,
            variant: VariantName::Alg2,
            inner: InformedName::Alg2,
            p: 0.1,
            m: 10,
            d: 3,
            lambda: 0.5,
            varpi: 0.5,
            iterations: 1000,
            chains: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Params {
    Coupling(CouplingParams),
    Tv(TvParams),
    Gaps(GapsParams),
    Mixing(MixingParams),
    SinusoidKl(SinusoidKlParams),
    SinusoidVar(SinusoidVarParams),
    MixtureKl(MixtureKlParams),
    MixtureVar(MixtureVarParams),
    CylinderKl(CylinderKlParams),
    CylinderVar(CylinderVarParams),
    Lemma(LemmaParams),
    Custom(CustomParams),
}

/// A problem found by static validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub key: String,
    /// 1-based line of the key in the config file, if present there.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.key, self.message),
            None => write!(f, "{}: {}", self.key, self.message),
        }
    }
}

type Issues = Vec<(&'static str, String)>;

fn probability(issues: &mut Issues, key: &'static str, v: f64, lo_open: bool, hi_open: bool) {
    let ok = v.is_finite() && if lo_open { v > 0.0 } else { v >= 0.0 } && if hi_open { v < 1.0 } else { v <= 1.0 };
    if !ok {
        let lo = if lo_open { "(0" } else { "[0" };
        let hi = if hi_open { "1)" } else { "1]" };
        issues.push((key, format!("{v} is outside {lo}, {hi}")));
    }
}

fn positive(issues: &mut Issues, key: &'static str, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        issues.push((key, format!("must be positive and finite, got {v}")));
    }
}

fn at_least(issues: &mut Issues, key: &'static str, v: usize, min: usize) {
    if v < min {
        issues.push((key, format!("must be at least {min}, got {v}")));
    }
}

fn three_state_p(issues: &mut Issues, v: f64) {
    if (0.5..1.0).contains(&v) {
        issues.push(("p", format!("{v}: the three-state example needs p < 1/2")));
    } else {
        probability(issues, "p", v, true, true);
    }
}

fn replicates(issues: &mut Issues, v: Option<usize>, min: usize) {
    if let Some(r) = v {
        at_least(issues, "replicates", r, min);
    }
}

fn kl_keys(issues: &mut Issues, replicates_v: Option<usize>, horizon: usize, every: usize, k: usize) {
    replicates(issues, replicates_v, k + 2);
    at_least(issues, "every", every, 1);
    at_least(issues, "k", k, 1);
    if every > horizon {
        issues.push(("every", format!("checkpoint spacing {every} exceeds horizon {horizon}")));
    }
}

fn var_keys(issues: &mut Issues, replicates_v: Option<usize>, iterations: usize, bootstrap: usize) {
    replicates(issues, replicates_v, 2);
    at_least(issues, "iterations", iterations, 1);
    at_least(issues, "bootstrap", bootstrap, 2);
}

fn grid_states(issues: &mut Issues, m: usize, d: usize) {
    let states = (m as f64).powi(d as i32);
    if states > STATE_CAP as f64 {
        issues.push(("d", format!("{m}^{d} states exceeds the cap of {STATE_CAP}")));
    }
}

impl Params {
    fn issues(&self) -> Issues {
        let mut out = Issues::new();
        let o = &mut out;
        match self {
            Params::Coupling(p) => {
                if p.d < 2 || p.d % 2 != 0 {
                    o.push(("d", format!("must be even and at least 2, got {}", p.d)));
                }
                at_least(o, "n", p.n, 4);
                replicates(o, p.replicates, 2);
                at_least(o, "max_t", p.max_t, 1);
            }
            Params::Tv(p) => {
                at_least(o, "m", p.m, 3);
                at_least(o, "d", p.d, 2);
                probability(o, "p", p.p, false, true);
                grid_states(o, p.m, p.d);
            }
            Params::Gaps(p) => {
                if p.p.is_empty() {
                    o.push(("p", "grid is empty".into()));
                }
                for &v in &p.p {
                    three_state_p(o, v);
                    if (v - 1.0 / 3.0).abs() < 1e-12 {
                        o.push(("p", format!("{v} is the branch point of the closed forms")));
                    }
                }
            }
            Params::Mixing(p) => {
                for &d in &p.d {
                    at_least(o, "d", d, 2);
                    grid_states(o, 3, d);
                }
                for &e in &p.eps {
                    probability(o, "eps", e, true, true);
                }
                at_least(o, "horizon", p.horizon, 1);
            }
            Params::SinusoidKl(p) => kl_keys(o, p.replicates, p.horizon, p.every, p.k),
            Params::SinusoidVar(p) => {
                var_keys(o, p.replicates, p.iterations, p.bootstrap);
            }
            Params::MixtureKl(p) => {
                positive(o, "theta", p.theta);
                if let Some(s) = p.sigma_large {
                    positive(o, "sigma_large", s);
                }
                positive(o, "sigma_small", p.sigma_small);
                positive(o, "eps", p.eps);
                kl_keys(o, p.replicates, p.horizon, p.every, p.k);
            }
            Params::MixtureVar(p) => {
                positive(o, "theta", p.theta);
                if let Some(s) = p.sigma_large {
                    positive(o, "sigma_large", s);
                }
                positive(o, "sigma_small", p.sigma_small);
                positive(o, "eps", p.eps);
                var_keys(o, p.replicates, p.iterations, p.bootstrap);
            }
            Params::CylinderKl(p) => {
                cylinder(o, p.lambda, p.big_radius, p.small_radius, p.n_control, p.eps, p.sigma);
                kl_keys(o, p.replicates, p.horizon, p.every, p.k);
            }
            Params::CylinderVar(p) => {
                cylinder(o, p.lambda, p.big_radius, p.small_radius, p.n_control, p.eps, p.sigma);
                var_keys(o, p.replicates, p.iterations, p.bootstrap);
            }
            Params::Lemma(p) => {
                if p.d < 2 || p.d % 2 != 0 {
                    o.push(("d", format!("must be even and at least 2, got {}", p.d)));
                }
                at_least(o, "n", p.n, 4);
                grid_states(o, p.n, p.d);
            }
            Params::Custom(p) => {
                match p.example {
                    ExampleName::ThreeState => {
                        three_state_p(o, p.p);
                        if p.kernels == KernelsName::Gibbs {
                            o.push(("kernels", "the three-state example has no coordinate structure for Gibbs kernels".into()));
                        }
                    }
                    ExampleName::Hypercube => {
                        at_least(o, "m", p.m, 3);
                        at_least(o, "d", p.d, 2);
                        probability(o, "p", p.p, false, true);
                        grid_states(o, p.m, p.d);
                    }
                    ExampleName::Cross => {
                        at_least(o, "d", p.d, 2);
                        grid_states(o, 3, p.d);
                    }
                }
                let single = match p.variant {
                    VariantName::Alg2 => true,
                    VariantName::Delayed | VariantName::Mixed => p.inner == InformedName::Alg2,
                    VariantName::Alg1 | VariantName::Hybrid => false,
                };
                if single && p.kernels == KernelsName::Gibbs {
                    let key = if p.variant == VariantName::Alg2 { "variant" } else { "inner" };
                    o.push((key, "alg2 needs Metropolis-Hastings kernels, but kernels = \"gibbs\" has none".into()));
                }
                probability(o, "lambda", p.lambda, true, false);
                probability(o, "varpi", p.varpi, false, false);
                at_least(o, "chains", p.chains, 1);
                at_least(o, "iterations", p.iterations, 1);
            }
        }
        out
    }

    /// Default parameters as a TOML table body.
    pub fn to_toml(&self) -> String {
        let r = match self {
            Params::Coupling(p) => toml::to_string(p),
            Params::Tv(p) => toml::to_string(p),
            Params::Gaps(p) => toml::to_string(p),
            Params::Mixing(p) => toml::to_string(p),
            Params::SinusoidKl(p) => toml::to_string(p),
            Params::SinusoidVar(p) => toml::to_string(p),
            Params::MixtureKl(p) => toml::to_string(p),
            Params::MixtureVar(p) => toml::to_string(p),
            Params::CylinderKl(p) => toml::to_string(p),
            Params::CylinderVar(p) => toml::to_string(p),
            Params::Lemma(p) => toml::to_string(p),
            Params::Custom(p) => toml::to_string(p),
        };
        r.expect("parameter structs serialize")
    }
}

fn cylinder(o: &mut Issues, lambda: f64, big: f64, small: f64, n: usize, eps: f64, sigma: f64) {
    positive(o, "lambda", lambda);
    positive(o, "big_radius", big);
    positive(o, "small_radius", small);
    if small >= big {
        o.push(("small_radius", format!("must be below big_radius ({small} >= {big})")));
    }
    at_least(o, "n_control", n, 4);
    probability(o, "eps", eps, false, false);
    positive(o, "sigma", sigma);
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub paper_scale: bool,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub experiment: Experiment,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub paper_scale: bool,
    pub params: Params,
    /// The file as read, echoed into the manifest.
    pub source: String,
}

#[derive(Deserialize)]
struct Header {
    experiment: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document<P> {
    #[allow(dead_code)]
    experiment: String,
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    params: Option<P>,
}

fn parse_doc<P: DeserializeOwned + Default>(text: &str) -> anyhow::Result<(Option<u64>, Option<usize>, Option<PathBuf>, P)> {
    let doc: Document<P> = toml::from_str(text).map_err(|e| anyhow!("config error: {e}"))?;
    Ok((doc.seed, doc.threads, doc.out, doc.params.unwrap_or_default()))
}

impl Config {
    pub fn parse(text: &str, overrides: &Overrides) -> anyhow::Result<Self> {
        let header: Header = toml::from_str(text).map_err(|e| anyhow!("config error: {e}"))?;
        let id = header.experiment.ok_or_else(|| anyhow!("config error: missing key `experiment`"))?;
        let experiment = Experiment::from_id(&id).ok_or_else(|| {
            let known: Vec<_> = Experiment::ALL.iter().map(|e| e.id()).collect();
            anyhow!("config error: unknown experiment `{id}` (expected one of {})", known.join(", "))
        })?;
        macro_rules! load {
            ($variant:ident) => {{
                let (s, t, o, p) = parse_doc(text)?;
                (s, t, o, Params::$variant(p))
            }};
        }
        let (seed, threads, out, params) = match experiment {
            Experiment::Ex1Coupling => load!(Coupling),
            Experiment::Ex2Tv => load!(Tv),
            Experiment::Ex3Gaps => load!(Gaps),
            Experiment::Ex5Mixing => load!(Mixing),
            Experiment::Ex6Kl => load!(SinusoidKl),
            Experiment::Ex6Var => load!(SinusoidVar),
            Experiment::Ex7Kl => load!(MixtureKl),
            Experiment::Ex7Var => load!(MixtureVar),
            Experiment::Ex8Kl => load!(CylinderKl),
            Experiment::Ex8Var => load!(CylinderVar),
            Experiment::LemmaSuite => load!(Lemma),
            Experiment::CustomChain => load!(Custom),
        };
        Ok(Self {
            experiment,
            seed: overrides.seed.or(seed).unwrap_or(1),
            threads: overrides.threads.or(threads),
            out: overrides.out.clone().or(out).unwrap_or_else(|| PathBuf::from("out").join(experiment.id())),
            paper_scale: overrides.paper_scale,
            params,
            source: text.to_owned(),
        })
    }

    pub fn load(path: &Path, overrides: &Overrides) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text, overrides).with_context(|| format!("in {}", path.display()))
    }

    /// Effective replicate count, for experiments that simulate.
    pub fn replicates(&self) -> Option<usize> {
        let configured = match &self.params {
            Params::Coupling(p) => p.replicates,
            Params::SinusoidKl(p) => p.replicates,
            Params::SinusoidVar(p) => p.replicates,
            Params::MixtureKl(p) => p.replicates,
            Params::MixtureVar(p) => p.replicates,
            Params::CylinderKl(p) => p.replicates,
            Params::CylinderVar(p) => p.replicates,
            _ => None,
        };
        crate::catalog::entry(self.experiment).scale.map(|s| s.pick(configured, self.paper_scale))
    }

    /// Static checks that do not run anything.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        let mut out: Vec<Diagnostic> = self
            .params
            .issues()
            .into_iter()
            .map(|(key, message)| Diagnostic { key: key.to_owned(), line: line_of(&self.source, key), message })
            .collect();
        if self.threads == Some(0) {
            out.push(Diagnostic { key: "threads".into(), line: line_of(&self.source, "threads"), message: "must be at least 1".into() });
        }
        out
    }
}

/// Line of the first `key = ...` assignment in `text`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| l.trim_start().strip_prefix(key).is_some_and(|r| r.trim_start().starts_with('='))).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_clean() {
        for e in Experiment::ALL {
            let c = Config::parse(&format!("experiment = \"{e}\"\n"), &Overrides::default()).unwrap();
            assert!(c.diagnostics().is_empty(), "{e}: {:?}", c.diagnostics());
        }
    }

    #[test]
    fn unknown_key_names_its_line() {
        let text = "experiment = \"ex3_gaps\"\n[params]\np = [0.1]\nq = 2\n";
        let err = format!("{:#}", Config::parse(text, &Overrides::default()).unwrap_err());
        assert!(err.contains("unknown field `q`"), "{err}");
        assert!(err.contains("line 4"), "{err}");
    }

    #[test]
    fn overrides_take_precedence() {
        let text = "experiment = \"lemma_suite\"\nseed = 5\nthreads = 3\n";
        let o = Overrides { seed: Some(9), threads: None, out: Some("x".into()), paper_scale: true };
        let c = Config::parse(text, &o).unwrap();
        assert_eq!((c.seed, c.threads, c.out, c.paper_scale), (9, Some(3), PathBuf::from("x"), true));
    }

    #[test]
    fn range_diagnostic_points_at_the_key() {
        let text = "experiment = \"ex2_tv\"\n\n[params]\np = 1.5\n";
        let d = Config::parse(text, &Overrides::default()).unwrap().diagnostics();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].key.as_str(), d[0].line), ("p", Some(4)));
    }

    #[test]
    fn scale_resolution() {
        let s = Scale { desk: 10, paper: 100 };
        assert_eq!(s.pick(None, false), 10);
        assert_eq!(s.pick(Some(3), false), 3);
        assert_eq!(s.pick(Some(3), true), 100);
    }
}
