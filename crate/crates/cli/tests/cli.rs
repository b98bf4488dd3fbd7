//! End-to-end tests of the binary: exit-code contract, file formats, and
//! byte-for-byte reproducibility across reruns and worker counts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_negdep"))
}

struct Fixtures {
    dir: tempfile::TempDir,
}

impl Fixtures {
    fn new() -> Self {
        Fixtures {
            dir: tempfile::tempdir().expect("tempdir"),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, contents).expect("write fixture");
        p
    }

    fn write_json(&self, name: &str, value: serde_json::Value) -> PathBuf {
        self.write(name, &serde_json::to_string_pretty(&value).unwrap())
    }
}

fn k4_graph(fx: &Fixtures) -> PathBuf {
    fx.write(
        "k4.txt",
        "0 1 1.0\n0 2 1.0\n0 3 1.0\n1 2 1.0\n1 3 1.0\n2 3 1.0\n",
    )
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn negdep")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn sample_path_graph_rows_are_identical() {
    let fx = Fixtures::new();
    let graph = fx.write("p3.txt", "0 1 1.0\n1 2 1.0\n");
    let config = fx.write_json(
        "sample.json",
        serde_json::json!({"source": {"kind": "spanning_tree", "graph": graph}}),
    );
    let out_file = fx.path("rows.txt");
    let out = run(bin()
        .args(["sample", "--seed", "7", "--trials", "10"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out_file));
    assert_exit(&out, 0);
    let text = std::fs::read_to_string(&out_file).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows, vec!["11"; 10]);
}

#[test]
fn sample_reruns_are_byte_identical() {
    let fx = Fixtures::new();
    let graph = fx.write("tri.txt", "0 1 2.0\n1 2 1.0\n0 2 1.0\n");
    let config = fx.write_json(
        "sample.json",
        serde_json::json!({"source": {"kind": "spanning_tree", "graph": graph}}),
    );
    let emit = |name: &str, workers: &str| {
        let out_file = fx.path(name);
        let out = run(bin()
            .args(["sample", "--seed", "42", "--trials", "500", "--workers", workers])
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&out_file));
        assert_exit(&out, 0);
        std::fs::read(&out_file).unwrap()
    };
    let a = emit("a.txt", "1");
    let b = emit("b.txt", "2");
    assert_eq!(a, b);
}

#[test]
fn sample_projection_dpp_frequencies() {
    let fx = Fixtures::new();
    let kernel = fx.write_json(
        "proj.json",
        serde_json::json!({"n": 2, "re": [[0.5, 0.5], [0.5, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}),
    );
    let config = fx.write_json(
        "sample.json",
        serde_json::json!({"source": {"kind": "dpp", "kernel": kernel}}),
    );
    let out_file = fx.path("dpp.txt");
    let out = run(bin()
        .args(["sample", "--seed", "11", "--trials", "100000"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out_file));
    assert_exit(&out, 0);
    let text = std::fs::read_to_string(&out_file).unwrap();
    let mut first = 0u64;
    let mut second = 0u64;
    for line in text.lines().skip(2) {
        match line {
            "10" => first += 1,
            "01" => second += 1,
            other => panic!("unexpected row {other:?}"),
        }
    }
    let total = (first + second) as f64;
    assert_eq!(total as u64, 100_000);
    assert!((first as f64 / total - 0.5).abs() < 0.005);
}

#[test]
fn verify_scp_exit_codes() {
    let fx = Fixtures::new();
    let graph = k4_graph(&fx);
    let holds_config = fx.write_json(
        "verify_k4.json",
        serde_json::json!({
            "measure": {"kind": "spanning_tree", "graph": graph},
            "checks": [{"check": "scp"}]
        }),
    );
    let out = run(bin().arg("verify").arg("--config").arg(&holds_config));
    assert_exit(&out, 0);
    let parsed: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verdict JSON on stdout");
    assert_eq!(parsed["all_hold"], serde_json::json!(true));

    let two_point = fx.write_json(
        "two_point.json",
        serde_json::json!({"n": 2, "atoms": {"00": 0.5, "11": 0.5}}),
    );
    let refuted_config = fx.write_json(
        "verify_pair.json",
        serde_json::json!({
            "measure": {"kind": "measure", "path": two_point},
            "checks": [
                {"check": "scp"},
                {"check": "negative_cylinder"},
                {"check": "rayleigh"},
                {"check": "real_rooted"}
            ]
        }),
    );
    let out_path = fx.path("verdicts.json");
    let out = run(bin()
        .arg("verify")
        .arg("--config")
        .arg(&refuted_config)
        .arg("--out")
        .arg(&out_path));
    assert_exit(&out, 1);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(parsed["all_hold"], serde_json::json!(false));
    let checks = parsed["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    for entry in checks {
        assert_eq!(entry["verdict"]["holds"], serde_json::json!(false));
        assert_eq!(entry["verdict"]["witness_type"], serde_json::json!("violation"));
    }
}

#[test]
fn verify_lipschitz_of_graph_functionals() {
    let fx = Fixtures::new();
    let graph = k4_graph(&fx);
    let config = fx.write_json(
        "lip.json",
        serde_json::json!({
            "lipschitz": {
                "functional": {"name": "half_odd_degree"},
                "graph": graph
            }
        }),
    );
    let out = run(bin().arg("verify").arg("--config").arg(&config));
    assert_exit(&out, 0);
}

#[test]
fn tail_k4_spanning_tree_bound_passes() {
    let fx = Fixtures::new();
    let graph = k4_graph(&fx);
    let config = fx.write_json(
        "tail.json",
        serde_json::json!({
            "source": {"kind": "spanning_tree", "graph": graph},
            "functional": {"name": "half_odd_degree"},
            "bounds": [{"family": "spanning_tree", "vertices": 4}]
        }),
    );
    let base = fx.path("report");
    let out = run(bin()
        .arg("tail")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&base));
    assert_exit(&out, 0);
    let csv = std::fs::read_to_string(fx.path("report.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "a,empirical,ci_lo,ci_hi,bound_spanning_tree,pass");
    assert_eq!(csv.lines().count(), 21); // header + 20 grid rows
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",pass")));
    assert!(Path::new(&fx.path("report.json")).exists());
}

#[test]
fn tail_monte_carlo_is_worker_independent() {
    let fx = Fixtures::new();
    let graph = fx.write("tri.txt", "0 1 2.0\n1 2 1.0\n0 2 1.0\n");
    let config = fx.write_json(
        "tail.json",
        serde_json::json!({
            "source": {"kind": "spanning_tree", "graph": graph},
            "functional": {"name": "indicator_sum", "coeffs": [1, 0, 0]},
            "bounds": [{"family": "general_one_sided"}],
            "mode": "monte_carlo",
            "grid": {"points": 10, "max": 2.0}
        }),
    );
    let emit = |prefix: &str, workers: &str| {
        let base = fx.path(prefix);
        let out = run(bin()
            .args(["tail", "--seed", "5", "--trials", "2000", "--workers", workers])
            .arg("--config")
            .arg(&config)
            .arg("--out")
            .arg(&base));
        assert_exit(&out, 0);
        (
            std::fs::read(fx.path(&format!("{prefix}.csv"))).unwrap(),
            std::fs::read(fx.path(&format!("{prefix}.json"))).unwrap(),
        )
    };
    let a = emit("r1", "1");
    let b = emit("r2", "2");
    assert_eq!(a.0, b.0, "CSV differs across worker counts");
    assert_eq!(a.1, b.1, "JSON differs across worker counts");
}

#[test]
fn tail_rejects_tiny_trial_counts() {
    let fx = Fixtures::new();
    let graph = fx.write("tri.txt", "0 1 1.0\n1 2 1.0\n0 2 1.0\n");
    let config = fx.write_json(
        "tail.json",
        serde_json::json!({
            "source": {"kind": "spanning_tree", "graph": graph},
            "functional": {"name": "indicator_sum", "coeffs": [1, 0, 0]},
            "bounds": [{"family": "azuma", "n": 3}],
            "mode": "monte_carlo"
        }),
    );
    let out = run(bin()
        .args(["tail", "--trials", "50"])
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(fx.path("r")));
    assert_exit(&out, 2);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let fx = Fixtures::new();
    let config = fx.write_json(
        "bad.json",
        serde_json::json!({
            "source": {"kind": "ginibre", "matrix_size": 4, "observation_radius": 1.0},
            "typo_key": true
        }),
    );
    let out = run(bin()
        .arg("sample")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(fx.path("x")));
    assert_exit(&out, 2);
}

#[test]
fn missing_out_is_a_usage_error() {
    let fx = Fixtures::new();
    let graph = fx.write("p3.txt", "0 1 1.0\n1 2 1.0\n");
    let config = fx.write_json(
        "sample.json",
        serde_json::json!({"source": {"kind": "spanning_tree", "graph": graph}}),
    );
    let out = run(bin().arg("sample").arg("--config").arg(&config));
    assert_exit(&out, 2);
}
