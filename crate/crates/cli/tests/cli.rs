//! End-to-end runs of the `locinf` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn locinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locinf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_ok(config: &Path, out: &Path, extra: &[&str]) {
    let mut args = vec!["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = locinf(&args);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
}

/// Data rows of a CSV written by the runner, split into fields.
fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# locinf-csv v1 "));
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    (header, lines.map(|l| l.split(',').map(str::to_owned).collect()).collect())
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn list_maps_experiments_to_their_artifacts() {
    let o = locinf(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = |id: &str| text.lines().find(|l| l.starts_with(id)).unwrap_or_else(|| panic!("{id} missing")).to_owned();
    assert!(line("ex5_mixing").contains("Table 1"));
    assert!(line("ex7_var").contains("Table 3"));
    for id in ["ex1_coupling", "ex2_tv", "ex3_gaps", "ex6_kl", "ex6_var", "ex7_kl", "ex8_kl", "ex8_var", "lemma_suite", "custom_chain"] {
        line(id);
    }
}

#[test]
fn shipped_configs_validate() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let o = locinf(&["validate", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}: {}{}", path.display(), stdout(&o), stderr(&o));
        assert_eq!(stdout(&o).trim(), "ok");
        n += 1;
    }
    assert_eq!(n, 12);
}

#[test]
fn validate_reports_out_of_range_probability() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tv.toml", "experiment = \"ex2_tv\"\n[params]\np = 1.5\n");
    let o = locinf(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("line 3: p:"), "{text}");
    // Running the same file refuses to start.
    let o = locinf(&["run", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(!dir.path().join("o").exists());
}

#[test]
fn validate_reports_kernel_tag_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        "experiment = \"custom_chain\"\n[params]\nexample = \"hypercube\"\nvariant = \"alg2\"\nkernels = \"gibbs\"\n",
    );
    let o = locinf(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 4: variant: alg2 needs Metropolis-Hastings kernels"), "{}", stdout(&o));
}

#[test]
fn unknown_keys_and_experiments_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a.toml", "experiment = \"ex3_gaps\"\n[params]\np = [0.1]\nsigma = 2\n");
    let o = locinf(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field `sigma`") && stderr(&o).contains("line 4"), "{}", stderr(&o));
    let cfg = write_config(dir.path(), "b.toml", "experiment = \"ex4\"\n");
    let o = locinf(&["validate", cfg.to_str().unwrap()]);
    assert!(stderr(&o).contains("unknown experiment `ex4`"));
}

#[test]
fn mixing_times_at_d8() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.toml", "experiment = \"ex5_mixing\"\n[params]\nd = [8]\n");
    run_ok(&cfg, dir.path(), &[]);
    let (h, rows) = rows(&dir.path().join("mixing.csv"));
    let last = rows.iter().find(|r| r[col(&h, "eps")].parse::<f64>().unwrap() == 0.001).unwrap();
    assert_eq!(last[col(&h, "tau_informed")], "21");
    assert_eq!(last[col(&h, "tau_rsgs")], "42");
}

#[test]
fn gaps_match_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs_dir().join("ex3_gaps.toml"), dir.path(), &[]);
    let (h, rows) = rows(&dir.path().join("gaps.csv"));
    assert_eq!(rows.len(), 8);
    for r in &rows {
        for c in ["delta", "delta_star"] {
            assert!(r[col(&h, c)].parse::<f64>().unwrap() < 1e-10, "{r:?}");
        }
    }
}

#[test]
fn lemma_suite_deviations_are_small() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&configs_dir().join("lemma_suite.toml"), dir.path(), &[]);
    let (h, rows) = rows(&dir.path().join("lemma.csv"));
    assert_eq!(rows.len(), 7);
    for r in &rows {
        assert!(r[col(&h, "deviation")].parse::<f64>().unwrap() < 1e-9, "{r:?}");
    }
}

#[test]
fn data_files_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "v.toml",
        "experiment = \"ex7_var\"\nseed = 4\n[params]\ntheta = 100.0\nreplicates = 24\niterations = 200\nbootstrap = 20\n",
    );
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    run_ok(&cfg, &a, &["--threads", "1"]);
    run_ok(&cfg, &b, &["--threads", "3"]);
    run_ok(&cfg, &c, &["--threads", "2", "--seed", "5"]);
    let read = |d: &Path| std::fs::read(d.join("variance.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let manifest = std::fs::read_to_string(c.join("manifest.toml")).unwrap();
    assert!(manifest.contains("seed = 5") && manifest.contains("threads = 2") && manifest.contains("replicates = 24"));
}

#[test]
fn paper_scale_restores_full_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "experiment = \"ex1_coupling\"\n[params]\nreplicates = 100\n");
    run_ok(&cfg, &dir.path().join("desk"), &[]);
    run_ok(&cfg, &dir.path().join("full"), &["--paper-scale"]);
    let reps = |d: &str| {
        let (h, rows) = rows(&dir.path().join(d).join("coupling.csv"));
        rows[0][col(&h, "replicates")].clone()
    };
    assert_eq!(reps("desk"), "100");
    assert_eq!(reps("full"), "100000");
    let (h, rows) = rows(&dir.path().join("full").join("coupling.csv"));
    let ratio = &rows[2];
    let (m, se) = (ratio[col(&h, "mean_coupling_time")].parse::<f64>().unwrap(), ratio[col(&h, "stderr")].parse::<f64>().unwrap());
    assert!((m - 2.0).abs() < 4.0 * se, "{m} ± {se}");
}

#[test]
fn every_experiment_runs_at_small_scale() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ex2_tv", "horizon = 20", "tv", 21),
        ("ex6_kl", "replicates = 40\nhorizon = 20\nevery = 10", "kl", 9),
        ("ex6_var", "replicates = 8\niterations = 50\nbootstrap = 10", "variance", 12),
        ("ex7_kl", "replicates = 40\nhorizon = 20\nevery = 10\nparticles = 5", "kl", 9),
        ("ex8_kl", "replicates = 30\nhorizon = 10\nevery = 5", "kl", 6),
        ("ex8_var", "replicates = 4\niterations = 20\nbootstrap = 10", "variance", 8),
        ("custom_chain", "example = \"cross\"\nd = 3\nvariant = \"mixed\"\ninner = \"alg1\"\nkernels = \"gibbs\"\niterations = 30\nchains = 2", "trace", 62),
        ("custom_chain", "example = \"hypercube\"\nm = 4\nd = 3\np = 0.01\nvariant = \"delayed\"\niterations = 30", "summary", 1),
    ];
    for (k, (id, params, table, n_rows)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("{k}.toml"), &format!("experiment = \"{id}\"\n[params]\n{params}\n"));
        let out = dir.path().join(format!("out{k}"));
        run_ok(&cfg, &out, &[]);
        let (h, rows) = rows(&out.join(format!("{table}.csv")));
        assert_eq!(rows.len(), *n_rows, "{id}");
        for r in &rows {
            assert_eq!(r.len(), h.len(), "{id}");
        }
        assert!(out.join("manifest.toml").exists());
    }
}
