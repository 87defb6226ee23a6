//! End-to-end checks of the `coco` binary: exit codes, report formats,
//! determinism across runs and thread counts, and the screening sweep.

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

fn coco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coco"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn coco_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_coco"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("stdin is piped")
        .write_all(input.as_bytes())
        .expect("input fits in the pipe");
    child.wait_with_output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("terminated normally")
}

/// Vertices and arcs of the complete directed triangle, colored by the
/// orbits of the symmetric group on three letters. The arc fiber carries
/// the regular representation, so the configuration is coherent but not
/// fiber-commutative.
fn triangle_arc_configuration() -> String {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 2, 0],
        [2, 0, 1],
        [0, 2, 1],
        [1, 0, 2],
        [2, 1, 0],
    ];
    let arcs: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
    let compose = |f: [usize; 3], g: [usize; 3]| [f[g[0]], f[g[1]], f[g[2]]];
    let invert = |f: [usize; 3]| {
        let mut inv = [0usize; 3];
        for (i, &fi) in f.iter().enumerate() {
            inv[fi] = i;
        }
        inv
    };
    let arc_perm = |a: (usize, usize)| {
        perms
            .iter()
            .copied()
            .find(|g| g[0] == a.0 && g[1] == a.1)
            .expect("the action on arcs is simply transitive")
    };
    let index = |p: [usize; 3]| perms.iter().position(|&e| e == p).expect("closed") as u32;

    let n = 9;
    let mut rows = vec![vec![0u32; n]; n];
    for (x, row) in rows.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = match (x < 3, y < 3) {
                (true, true) => u32::from(x != y),
                (true, false) => {
                    let (p, q) = arcs[y - 3];
                    if x == p {
                        2
                    } else if x == q {
                        3
                    } else {
                        4
                    }
                }
                (false, true) => {
                    let (p, q) = arcs[x - 3];
                    if y == p {
                        5
                    } else if y == q {
                        6
                    } else {
                        7
                    }
                }
                (false, false) => {
                    let (ga, gb) = (arc_perm(arcs[x - 3]), arc_perm(arcs[y - 3]));
                    8 + index(compose(invert(ga), gb))
                }
            };
        }
    }
    serde_json::json!({ "fibers": [3, 6], "colors": rows }).to_string()
}

#[test]
fn identical_runs_give_byte_identical_reports() {
    for format in ["text", "json"] {
        let a = coco(&["krein", "--gen", "gq-w2", "--format", format]);
        let b = coco(&["krein", "--gen", "gq-w2", "--format", format]);
        assert_eq!(exit_code(&a), 0, "stderr: {}", stderr_str(&a));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{format} reports differ between runs");
    }

    let serial = coco(&["krein", "--gen", "gq-w2", "--format", "json", "--jobs", "1"]);
    let threaded = coco(&["krein", "--gen", "gq-w2", "--format", "json", "--jobs", "3"]);
    assert_eq!(
        serial.stdout, threaded.stdout,
        "thread count changed the report"
    );

    let reseeded = coco(&["krein", "--gen", "gq-w2", "--seed", "7"]);
    assert_eq!(exit_code(&reseeded), 0);
    assert!(stdout_str(&reseeded).contains("verdict: feasible"));
}

#[test]
fn screening_exit_codes_and_witnesses() {
    let out = coco(&["gq", "feasibility", "2", "5"]);
    assert_eq!(exit_code(&out), 2);
    let text = stdout_str(&out);
    assert!(text.contains("infeasible"));
    assert!(text.contains("Q_{3,3}^3"));
    assert!(text.contains("-0.224489795918"));

    let out = coco(&["gq", "feasibility", "2", "4"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_str(&out).contains("boundary"));

    let out = coco(&["gq", "feasibility", "3", "3"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_str(&out).starts_with("GQ(3,3) screening: feasible"));
}

#[test]
fn sweep_flags_exactly_the_power_violations() {
    let out = coco(&["gq", "feasibility", "--sweep", "2..6", "2..6"]);
    assert_eq!(exit_code(&out), 0, "a sweep is a survey, not a failure");
    let text = stdout_str(&out);
    let mut infeasible = Vec::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        let s: u64 = cols[0].parse().expect("s column");
        let t: u64 = cols[1].parse().expect("t column");
        if cols[2] == "infeasible" {
            infeasible.push((s, t));
        }
    }
    infeasible.sort_unstable();
    assert_eq!(infeasible, vec![(2, 5), (2, 6), (5, 2), (6, 2)]);
}

#[test]
fn build_output_flows_back_through_the_pipeline() {
    let built = coco(&["gq", "build", "2", "1"]);
    assert_eq!(exit_code(&built), 0);
    let json = stdout_str(&built);

    let validated = coco_stdin(&["validate", "-"], &json);
    assert_eq!(
        exit_code(&validated),
        0,
        "stderr: {}",
        stderr_str(&validated)
    );
    assert!(stdout_str(&validated).contains("verdict: valid"));

    let analyzed = coco_stdin(&["krein", "--format", "json"], &json);
    assert_eq!(exit_code(&analyzed), 0, "boundary still exits 0");
    let report: serde_json::Value =
        serde_json::from_str(&stdout_str(&analyzed)).expect("report is json");
    assert_eq!(report["verdict"], "boundary");
    assert_eq!(report["meta"]["seed"], 42);
    assert_eq!(report["meta"]["fibers"], serde_json::json!([9, 6]));
    assert!(report["krein"]["entries"].is_array());
    assert!(report["bounds"].is_array());
}

#[test]
fn non_fiber_commutative_input_is_rejected_with_diagnostic() {
    let json = triangle_arc_configuration();

    let validated = coco_stdin(&["validate", "-"], &json);
    assert_eq!(
        exit_code(&validated),
        0,
        "stderr: {}",
        stderr_str(&validated)
    );
    assert!(stdout_str(&validated).contains("fiber-commutative: no"));

    let rejected = coco_stdin(&["decompose", "-"], &json);
    assert_eq!(exit_code(&rejected), 1);
    let err = stderr_str(&rejected);
    assert!(
        err.contains("fiber 2 is not commutative"),
        "diagnostic names the offending fiber: {err}"
    );
}

#[test]
fn usage_and_input_errors_exit_one() {
    let out = coco(&["krein", "--gen", "nosuch"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_str(&out).contains("unknown generator family"));

    let out = coco(&["gq", "build", "3", "3"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_str(&out).contains("no bundled quadrangle"));

    let out = coco_stdin(&["validate", "-"], "{ not json");
    assert_eq!(exit_code(&out), 1);

    let out = coco(&["gq", "feasibility", "--sweep", "6..2", "2..6"]);
    assert_eq!(exit_code(&out), 1);

    let out = coco(&["krein", "--gen", "gq-w2", "--tol-psd", "-1"]);
    assert_eq!(exit_code(&out), 1);

    let out = coco(&["frobnicate"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn closed_form_json_lists_every_triple() {
    let out = coco(&["gq", "closed-form", "2", "2", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).expect("valid json");
    assert_eq!(doc["s"], 2);
    assert_eq!(doc["t"], 2);
    assert_eq!(
        doc["multiplicities"],
        serde_json::json!([1.0, 9.0, 5.0, 5.0])
    );
    let entries = doc["entries"].as_array().expect("entries array");
    let q333 = entries
        .iter()
        .find(|e| e["triple"] == serde_json::json!([3, 3, 3]))
        .expect("the point-fiber triple is present");
    assert_eq!(q333["matrix"], serde_json::json!([[[0.625, 0.0]]]));
}
