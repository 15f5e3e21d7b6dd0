use crate::config::{Experiment, Scale};

pub struct Entry {
    pub experiment: Experiment,
    /// Table or figure the experiment regenerates.
    pub artifact: &'static str,
    pub summary: &'static str,
    /// Replicate counts, for experiments that simulate.
    pub scale: Option<Scale>,
}

const fn scale(desk: usize, paper: usize) -> Option<Scale> {
    Some(Scale { desk, paper })
}

pub const CATALOG: [Entry; 12] = [
    Entry {
        experiment: Experiment::Ex1Coupling,
        artifact: "Figure 11 / Algorithm 5",
        summary: "reflection coupling on folded hypercube chains, mean coupling and hitting times",
        scale: scale(10_000, 100_000),
    },
    Entry {
        experiment: Experiment::Ex2Tv,
        artifact: "Figure 3",
        summary: "exact TV curves from a filament extremity, informed vs RSGS",
        scale: None,
    },
    Entry {
        experiment: Experiment::Ex3Gaps,
        artifact: "Example 3 spectral gaps",
        summary: "three-state spectral gaps against their closed forms",
        scale: None,
    },
    Entry {
        experiment: Experiment::Ex5Mixing,
        artifact: "Table 1",
        summary: "exact mixing times on the crossing planes, informed vs RSGS",
        scale: None,
    },
    Entry {
        experiment: Experiment::Ex6Kl,
        artifact: "Figure 8",
        summary: "k-NN KL to the sinusoid target over time, RSGS / alg1 / alg2",
        scale: scale(2_000, 20_000),
    },
    Entry {
        experiment: Experiment::Ex6Var,
        artifact: "Table 2",
        summary: "asymptotic variances of four test functions on the sinusoid target",
        scale: scale(2_000, 20_000),
    },
    Entry {
        experiment: Experiment::Ex7Kl,
        artifact: "Figure 13 / Figure 16",
        summary: "k-NN KL to the three-Gaussian mixture over time, RSGS / alg2 (optionally particle weights)",
        scale: scale(500, 1_000),
    },
    Entry {
        experiment: Experiment::Ex7Var,
        artifact: "Table 3",
        summary: "asymptotic variances of four test functions on the three-Gaussian mixture",
        scale: scale(2_000, 20_000),
    },
    Entry {
        experiment: Experiment::Ex8Kl,
        artifact: "Figure 15",
        summary: "k-NN KL to the noisy two-cylinder target over time",
        scale: scale(200, 1_000),
    },
    Entry {
        experiment: Experiment::Ex8Var,
        artifact: "Table 4",
        summary: "asymptotic variances of four test functions on the noisy two-cylinder target",
        scale: scale(200, 2_000),
    },
    Entry {
        experiment: Experiment::LemmaSuite,
        artifact: "Figure 11 folded chains",
        summary: "hitting times, gaps, folding-map and spectrum identities of the folded chains",
        scale: None,
    },
    Entry {
        experiment: Experiment::CustomChain,
        artifact: "ad hoc",
        summary: "trace of any sampler variant on a discrete example",
        scale: None,
    },
];

pub fn entry(e: Experiment) -> &'static Entry {
    CATALOG.iter().find(|c| c.experiment == e).expect("every experiment is catalogued")
}

/// Human-readable catalog with default parameters.
pub fn render() -> String {
    let mut s = String::new();
    for c in &CATALOG {
        s.push_str(&format!("{:<13} {:<24} {}\n", c.experiment.id(), c.artifact, c.summary));
        if let Some(sc) = c.scale {
            s.push_str(&format!("    replicates: {} (desk), {} (--paper-scale)\n", sc.desk, sc.paper));
        }
        for line in c.experiment.default_params().to_toml().lines() {
            s.push_str("    ");
            s.push_str(line);
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_covers_every_experiment_once() {
        for e in Experiment::ALL {
            assert_eq!(CATALOG.iter().filter(|c| c.experiment == e).count(), 1, "{e}");
        }
        assert_eq!(entry(Experiment::Ex5Mixing).artifact, "Table 1");
        assert_eq!(entry(Experiment::Ex7Var).artifact, "Table 3");
    }
}
