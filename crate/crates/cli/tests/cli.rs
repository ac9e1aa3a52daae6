use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn sff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sff-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let o = sff(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    write(dir, name, &stdout(&o))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn g3_auto_certificate_revalidates_in_a_fresh_process() {
    let d = scratch("g3");
    let g = gen(&d, "g3.json", &["gn", "--n", "3"]);
    let (c, t) = (path(&d, "c.json"), path(&d, "t.json"));
    let o = sff(&[
        "construct6",
        "--graph",
        &g,
        "--cert-out",
        &c,
        "--trace-out",
        &t,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = sff(&["check", "--graph", &g, "--cert", &c]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let trace: serde_json::Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(trace["trace"]["achieved_k"], 6);
}

#[test]
fn altered_value_is_rejected_with_the_vertex() {
    let d = scratch("altered");
    let g = gen(&d, "g.json", &["fig2"]);
    let c = path(&d, "c.json");
    assert_eq!(
        code(&sff(&["construct6", "--graph", &g, "--cert-out", &c])),
        0
    );
    let mut cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
    let v = cert["f"]["0"].as_i64().unwrap();
    cert["f"]["0"] = serde_json::json!(if v == 1 { 2 } else { 1 });
    let bad = write(&d, "bad.json", &cert.to_string());
    let o = sff(&["check", "--graph", &g, "--cert", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("vertex"), "{}", stderr(&o));
}

#[test]
fn certificate_for_another_graph_is_a_fingerprint_mismatch() {
    let d = scratch("foreign");
    let g3 = gen(&d, "g3.json", &["gn", "--n", "3"]);
    let f2 = gen(&d, "f2.json", &["fig2"]);
    let c = path(&d, "c.json");
    assert_eq!(
        code(&sff(&["construct6", "--graph", &g3, "--cert-out", &c])),
        0
    );
    let o = sff(&["check", "--graph", &f2, "--cert", &c]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("fingerprint"));
}

#[test]
fn tree_has_no_strategy() {
    let d = scratch("tree");
    let g = write(
        &d,
        "tree.json",
        r#"{"vertices":3,"edges":[{"id":0,"u":0,"v":1,"sign":1},{"id":1,"u":1,"v":2,"sign":1}]}"#,
    );
    let o = sff(&["construct6", "--graph", &g]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no strategy succeeded"));
    assert!(stderr(&o).contains("not flow-admissible"));
}

#[test]
fn fig2_via_cayley_sidecar() {
    let d = scratch("cayley");
    let g = gen(
        &d,
        "g.json",
        &[
            "cayley",
            "--orders",
            "4,2",
            "--connection",
            "1,0;3,0;0,1",
            "--negative",
            "1,6,10",
        ],
    );
    let spec = write(
        &d,
        "spec.json",
        r#"{"orders":[4,2],"connection":[[1,0],[3,0],[0,1]],"negative":[1,6,10]}"#,
    );
    let c = path(&d, "c.json");
    let o = sff(&[
        "construct6",
        "--graph",
        &g,
        "--strategy",
        "cayley",
        "--cayley-spec",
        &spec,
        "--cert-out",
        &c,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&sff(&["check", "--graph", &g, "--cert", &c])), 0);
    let o = sff(&["oracle", "--graph", &g, "--k", "5"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["decision"], "not-exists");
}

#[test]
fn kotzig_on_k4() {
    let d = scratch("k4");
    let g = write(
        &d,
        "k4.json",
        r#"{"vertices":4,"edges":[
            {"id":0,"u":0,"v":1,"sign":1},{"id":1,"u":2,"v":3,"sign":1},
            {"id":2,"u":0,"v":2,"sign":1},{"id":3,"u":1,"v":3,"sign":1},
            {"id":4,"u":0,"v":3,"sign":1},{"id":5,"u":1,"v":2,"sign":1}]}"#,
    );
    let c = path(&d, "c.json");
    let o = sff(&[
        "construct6",
        "--graph",
        &g,
        "--strategy",
        "kotzig",
        "--cert-out",
        &c,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&sff(&["check", "--graph", &g, "--cert", &c])), 0);
    let w = write(&d, "w.json", r#"{"parts":[[0,1],[2,3],[4,5]]}"#);
    let o = sff(&[
        "construct6",
        "--graph",
        &g,
        "--strategy",
        "kotzig",
        "--witness",
        &w,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn oracle_decides_g3_at_5_and_6() {
    let d = scratch("oracle");
    let g = gen(&d, "g3.json", &["gn", "--n", "3"]);
    let five: serde_json::Value =
        serde_json::from_str(&stdout(&sff(&["oracle", "--graph", &g, "--k", "5"]))).unwrap();
    let six: serde_json::Value =
        serde_json::from_str(&stdout(&sff(&["oracle", &g, "--k", "6"]))).unwrap();
    assert_eq!(five["decision"], "not-exists");
    assert_eq!(six["decision"], "exists");
    let phi: serde_json::Value = serde_json::from_str(&stdout(&sff(&["oracle", &g]))).unwrap();
    assert_eq!(phi["phi"], 6);
}

#[test]
fn exit_codes_for_parse_and_budget() {
    let d = scratch("codes");
    let bad = write(&d, "bad.json", "{not json");
    assert_eq!(code(&sff(&["oracle", "--graph", &bad, "--k", "3"])), 2);
    assert_eq!(code(&sff(&["construct6"])), 2);
    let g = gen(&d, "f2.json", &["fig2"]);
    let o = sff(&["oracle", "--graph", &g, "--k", "5", "--budget-nodes", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("budget-exceeded"));
}

#[test]
fn outputs_are_byte_deterministic() {
    let d = scratch("determinism");
    let g = gen(
        &d,
        "g.json",
        &[
            "ladder",
            "--kind",
            "moebius",
            "--n",
            "4",
            "--negative",
            "0,5",
        ],
    );
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| sff(&["construct6", "--graph", &g]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let sweeps: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            sff(&[
                "sweep",
                "--family",
                "cl",
                "--range",
                "2..3",
                "--threads",
                if i == 0 { "1" } else { "3" },
            ])
            .stdout
        })
        .collect();
    assert_eq!(sweeps[0], sweeps[1]);
}

#[test]
fn reduce_emits_a_verified_cubic_graph() {
    let d = scratch("reduce");
    let g = gen(&d, "g3.json", &["gn", "--n", "3"]);
    let o = sff(&["reduce", "--graph", &g]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verified"], true);
    let cubic = write(&d, "cubic.json", &doc["g_prime"].to_string());
    let o = sff(&["construct6", "--graph", &cubic, "--strategy", "bal-ham"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn classify_cayley_reports_phi_and_a_checkable_certificate() {
    let d = scratch("classify");
    let spec = write(
        &d,
        "spec.json",
        r#"{"orders":[7],"connection":[[1],[6],[2],[5],[3],[4]],"negative":[0,1,2]}"#,
    );
    let o = sff(&["classify-cayley", "--spec", &spec]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["phi"], 3);
    let g = gen(
        &d,
        "g.json",
        &[
            "cayley",
            "--orders",
            "7",
            "--connection",
            "1;6;2;5;3;4",
            "--negative",
            "0,1,2",
        ],
    );
    let cert = write(&d, "cert.json", &doc["certificate"].to_string());
    assert_eq!(code(&sff(&["check", "--graph", &g, "--cert", &cert])), 0);
    for (i, s) in doc["supporting"].as_array().unwrap().iter().enumerate() {
        let p = write(&d, &format!("s{i}.json"), &s.to_string());
        assert_eq!(code(&sff(&["check", "--graph", &g, "--cert", &p])), 0);
    }
}

#[test]
fn sweeps_match_the_documented_rows() {
    let gn = stdout(&sff(&["sweep", "--family", "gn", "--range", "3..5"]));
    for n in [3, 5] {
        let row = gn
            .lines()
            .find(|l| l.starts_with(&format!("gn{n:03},")))
            .unwrap();
        assert!(row.ends_with(",6,6,yes"), "{row}");
    }
    let o = sff(&[
        "sweep",
        "--family",
        "cayley",
        "--orders",
        "9",
        "--connection",
        "1;8;2;7",
    ]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(["2", "4", "inf"].contains(&cols[6]), "{line}");
        assert_eq!(cols[7], "yes");
    }
    let o = sff(&[
        "sweep", "--family", "ml", "--range", "2..3", "--sample", "5", "--seed", "7",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 11);
}
