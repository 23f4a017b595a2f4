use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gqpa_core::repcat::builders::build_l_case_a;
use gqpa_core::repcat::json::rep_to_json;
use gqpa_core::{ExactField, GradedQuiver, GradedRep, Scalar};
use serde_json::Value;
use tempfile::TempDir;

const D5: &str = "vertices: 1 2 3 4 5
arrow a: 1 -> 2 deg 3
arrow b: 2 -> 3 deg -7
arrow c: 3 -> 4 deg 2
arrow d: 5 -> 3 deg -1
";

const FLAT_SQUARE: &str = "vertices: 1 2 3 4
arrow a: 1 -> 2 deg 0
arrow b: 2 -> 3 deg 0
arrow c: 1 -> 4 deg 0
arrow d: 4 -> 3 deg 0
";

const DOUBLE: &str = "vertices: 1 2 3
arrow a: 1 -> 2 deg 0
arrow b: 1 -> 2 deg -1
arrow c: 2 -> 3 deg 0
";

const FIRST_EXAMPLE: &str = "vertices: 1 2 3 4 5 6
arrow a: 1 -> 2 deg 0
arrow b: 2 -> 3 deg 0
arrow c: 2 -> 4 deg 0
arrow d: 5 -> 4 deg 0
arrow e: 5 -> 6 deg 0
arrow f: 3 -> 6 deg -1
arrow alpha: 1 -> 5 deg -1
arrow alpha2: 1 -> 5 deg -1
";

const THIRD_EXAMPLE: &str = "vertices: 1 2 3 4 5 6
arrow a: 1 -> 2 deg 0
arrow b: 2 -> 3 deg 0
arrow c: 4 -> 3 deg 0
arrow d: 4 -> 5 deg 0
arrow e: 6 -> 5 deg 0
arrow alpha: 1 -> 5 deg -1
arrow beta: 6 -> 2 deg -1
";

const A2: &str = "vertices: 1 2\narrow a: 1 -> 2 deg 0\n";
const A3: &str = "vertices: 1 2 3\narrow a: 1 -> 2 deg 0\narrow b: 2 -> 3 deg 0\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, contents).unwrap();
        p
    }
}

fn gqpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqpa")).args(args).output().unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = gqpa(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn classify_exit_codes() {
    let ws = Workspace::new();
    let (code, text) = run(&["classify", p(&ws.file("d5.txt", D5))]);
    assert_eq!(code, 0);
    assert!(text.contains("discrete: true"));
    assert!(text.contains("D5"));

    let (code, text) = run(&["--json", "classify", p(&ws.file("sq.txt", FLAT_SQUARE))]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["discrete"], false);
    assert_eq!(v["reason"]["tag"], "AtildeEqualTotals");
    assert_eq!(v["totals"], serde_json::json!([0, 0]));

    let (code, _) = run(&[
        "classify",
        p(&ws.file("bad.txt", "vertices: 1 2\narrow a: 1 -> 9 deg 0\n")),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn malformed_inputs_exit_two() {
    let ws = Workspace::new();
    let corpus = [
        "",
        "garbage",
        "vertices: 1 2\narrow a: 1 -> 2 deg x\n",
        "vertices: 1 2\narrow a: 1 -> 2 deg 0\narrow a: 2 -> 1 deg 0\n",
        "vertices: 1 2\narrow a: 1 -> 2 deg 0\narrow b: 2 -> 1 deg 0\n",
        "vertices: 1 2\n",
        "vertices: 1 1\n",
    ];
    for (i, text) in corpus.iter().enumerate() {
        let f = ws.file(&format!("m{i}.txt"), text);
        for cmd in ["classify", "reduce", "normalize"] {
            let (code, _) = run(&[cmd, p(&f)]);
            assert_eq!(code, 2, "{cmd} on {text:?}");
        }
        let (code, _) = run(&["qtilde", p(&f), "-n", "1"]);
        assert_eq!(code, 2, "qtilde on {text:?}");
    }
    assert_eq!(run(&["classify", "/nonexistent/file.txt"]).0, 2);
}

#[test]
fn classify_with_level_check() {
    let ws = Workspace::new();
    let (code, text) = run(&["--json", "classify", p(&ws.file("q.txt", DOUBLE)), "--check-depth", "2"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&text).unwrap();
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    assert_eq!(levels[2]["dynkin_union"], false);
    assert_eq!(v["consistency"], "Consistent");
}

#[test]
fn reduce_worked_examples() {
    let ws = Workspace::new();
    let (code, text) = run(&["--json", "reduce", p(&ws.file("e1.txt", FIRST_EXAMPLE))]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["terminal"]["tag"], "CaseC");
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);

    let (code, text) = run(&["reduce", "--trace", p(&ws.file("e3.txt", THIRD_EXAMPLE))]);
    assert_eq!(code, 0);
    assert!(text.contains("terminal: CaseB(m=1, n=1)"), "{text}");

    let out = gqpa(&["reduce", p(&ws.file("a3.txt", A3))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("input is silting-discrete"));
}

#[test]
fn qtilde_outputs() {
    let ws = Workspace::new();
    let (code, text) = run(&["qtilde", p(&ws.file("q.txt", DOUBLE)), "-n", "2"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("vertices (9):"));
    assert!(text.contains("non-Dynkin"));

    let a2 = ws.file("a2.txt", A2);
    let (_, text) = run(&["--json", "qtilde", p(&a2), "-n", "1", "--count"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["total"], 6);

    let (code, text) = run(&[
        "--json",
        "qtilde",
        p(&a2),
        "-n",
        "0",
        "--oracle",
        "fp:2",
        "--caps",
        "1@0=1,2@0=1",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["oracle"]["count"], 3);
    assert_eq!(v["oracle"]["predicted"], 3);

    // caps of 2 at a single vertex still agree with roots under the caps
    let (code, _) = run(&["qtilde", p(&a2), "--oracle", "fp:2", "--caps", "1@0=2,2@0=1"]);
    assert_eq!(code, 0);

    let (code, _) = run(&["qtilde", p(&a2), "--oracle", "Q"]);
    assert_eq!(code, 2);
}

#[test]
fn oracle_budget_exhaustion_exits_three() {
    let ws = Workspace::new();
    let out = Command::new(env!("CARGO_BIN_EXE_gqpa"))
        .args(["qtilde", p(&ws.file("a3.txt", A3)), "--oracle", "fp:2"])
        .env("GQPA_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_psmc_cases() {
    let ws = Workspace::new();
    let (code, text) = run(&["verify-psmc", p(&ws.file("a.txt", DOUBLE)), "--lambdas", "1,2,3"]);
    assert_eq!(code, 0, "{text}");
    assert!(text.contains("verdict: pass"));

    let (code, _) = run(&[
        "verify-psmc",
        "--case",
        "b",
        "--params",
        "2,3",
        "--lambdas",
        "1,2",
        "--field",
        "fp:101",
    ]);
    assert_eq!(code, 0);

    let out = gqpa(&["verify-psmc", "--case", "b", "--params", "2,4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("construction not provided at these parameters"));

    assert_eq!(run(&["verify-psmc", "--case", "a", "--params", "2"]).0, 3);
    // repeated residues mod 5
    assert_eq!(
        run(&[
            "verify-psmc",
            "--case",
            "c",
            "--params",
            "1,2",
            "--lambdas",
            "1,6",
            "--field",
            "fp:5"
        ])
        .0,
        2
    );
    assert_eq!(
        run(&["verify-psmc", "--case", "deg0", "--params", "3", "--field", "fp:7"]).0,
        0
    );
    assert_eq!(run(&["verify-psmc", "--case", "special", "--params", "1,2,2"]).0, 0);
    assert_eq!(run(&["verify-psmc"]).0, 2);
}

fn write_rep(ws: &Workspace, name: &str, rep: &GradedRep) -> PathBuf {
    ws.file(name, &rep_to_json(rep))
}

#[test]
fn hom_tables() {
    let ws = Workspace::new();
    let a2_file = ws.file("a2.txt", A2);
    let a2: GradedQuiver = A2.parse().unwrap();
    let p1 = GradedRep::projective(&a2, ExactField::Rationals, "1", 0).unwrap();
    let p1_file = write_rep(&ws, "p1.json", &p1);
    let (code, text) = run(&["--json", "hom", p(&a2_file), p(&p1_file), p(&p1_file)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["degrees"], serde_json::json!([{ "degree": 0, "hom": 1 }]));

    let qa = ws.file("qa.txt", DOUBLE);
    let one = Scalar::from_integer(1.into());
    let two = Scalar::from_integer(2.into());
    let l1 = write_rep(&ws, "l1.json", &build_l_case_a(ExactField::Rationals, &one).unwrap());
    let l2 = write_rep(&ws, "l2.json", &build_l_case_a(ExactField::Rationals, &two).unwrap());
    let (code, text) = run(&["--json", "hom", p(&qa), p(&l1), p(&l2), "--ext"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    for row in v["degrees"].as_array().unwrap() {
        assert_eq!(row["hom"], 0, "{row}");
        if row["degree"].as_i64().unwrap() < 0 {
            assert_eq!(row["ext1"], 0, "{row}");
        }
    }

    let l2_f7 = write_rep(
        &ws,
        "l2f7.json",
        &build_l_case_a(ExactField::prime(7).unwrap(), &two).unwrap(),
    );
    assert_eq!(run(&["hom", p(&qa), p(&l1), p(&l2_f7)]).0, 2);
    assert_eq!(run(&["hom", p(&a2_file), p(&l1), p(&l1)]).0, 2);
}

#[test]
fn normalize_round_trips() {
    let ws = Workspace::new();
    let (code, text) = run(&["normalize", p(&ws.file("d5.txt", D5))]);
    assert_eq!(code, 0);
    let normalized = ws.file("n.txt", &text);
    let q: GradedQuiver = std::fs::read_to_string(&normalized).unwrap().parse().unwrap();
    assert!(q.arrows().iter().all(|a| a.degree <= 0));
    assert!(text.contains("# degree-zero part connected: true"));
}

#[test]
fn output_is_stable() {
    let ws = Workspace::new();
    let f = ws.file("e1.txt", FIRST_EXAMPLE);
    for args in [
        vec!["reduce", p(&f)],
        vec!["--json", "classify", p(&f), "--check-depth", "3"],
    ] {
        let a = gqpa(&args).stdout;
        let b = gqpa(&args).stdout;
        assert_eq!(a, b);
    }
}
