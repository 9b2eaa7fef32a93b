use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const A3: &str = r#"{"ex":[1,2,3],"fr":[],"rows":{"1":[0,1,0],"2":[-1,0,1],"3":[0,-1,0]}}"#;
const A4: &str =
    r#"{"ex":[1,2,3,4],"fr":[],"rows":{"1":[0,1,0,0],"2":[-1,0,1,0],"3":[0,-1,0,1],"4":[0,0,-1,0]}}"#;

fn mgs(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgs"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Dir {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self) -> &Path {
        self.0.path()
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.path().join(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        mgs(args, self.path())
    }
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not JSON ({e}): {s}"))
}

#[test]
fn mutate_worked_example() {
    let d = Dir::new();
    d.file("b.json", r#"{"ex":[1,2,3],"fr":[],"rows":{"1":[0,2,-1],"2":[-2,0,1],"3":[1,-1,0]}}"#);
    let o = d.run(&["mutate", "b.json", "--at", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        json(&stdout(&o)),
        json(r#"{"ex":[1,2,3],"fr":[],"rows":{"1":[0,1,1],"2":[-1,0,-1],"3":[-1,1,0]}}"#)
    );
}

#[test]
fn mutate_round_trips_and_is_an_involution() {
    let d = Dir::new();
    let input = r#"{"ex":[1,2],"fr":[3],"rows":{"1":[0,2],"2":[-1,0],"3":[1,-1]}}"#;
    d.file("b.json", input);
    let once = d.run(&["mutate", "b.json", "--at", "1"]);
    assert_eq!(code(&once), 0);
    d.file("once.json", &stdout(&once));
    let twice = d.run(&["mutate", "once.json", "--at", "1"]);
    assert_eq!(json(&stdout(&twice)), json(input));
    let seq = d.run(&["mutate", "b.json", "--seq", "1,1"]);
    assert_eq!(json(&stdout(&seq)), json(input));
}

#[test]
fn mutate_error_codes() {
    let d = Dir::new();
    d.file("b.json", r#"{"ex":[1,2],"fr":[3],"rows":{"1":[0,1],"2":[-1,0],"3":[1,0]}}"#);
    let frozen = d.run(&["mutate", "b.json", "--at", "3"]);
    assert_eq!(code(&frozen), 3);
    let late = d.run(&["mutate", "b.json", "--seq", "1,2,3"]);
    assert_eq!(code(&late), 3);
    assert!(stderr(&late).contains("step 3"), "{}", stderr(&late));
    let unknown = d.run(&["mutate", "b.json", "--at", "9"]);
    assert_eq!(code(&unknown), 3);
    d.file("bad.json", r#"{"ex":[1],"fr":[],"rows":{"1":[0, 1]}}"#);
    assert_eq!(code(&d.run(&["mutate", "bad.json", "--at", "1"])), 2);
    d.file("garbage.json", "not json");
    assert_eq!(code(&d.run(&["mutate", "garbage.json", "--at", "1"])), 2);
    assert_eq!(code(&d.run(&["mutate", "missing.json", "--at", "1"])), 2);
    assert_eq!(code(&d.run(&["mutate", "b.json", "--seq", "1,x"])), 2);
}

#[test]
fn check_green_verdicts() {
    let d = Dir::new();
    d.file("a3.json", A3);
    let o = d.run(&["check-green", "a3.json", "--seq", "1,2,1,3,2,1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "MAXIMAL_GREEN length=6");
    let empty = d.run(&["check-green", "a3.json", "--seq", ""]);
    assert!(stdout(&empty).starts_with("NOT_REDDENING"), "{}", stdout(&empty));
    let red = d.run(&["check-green", "a3.json", "--seq", "1,1"]);
    assert!(stdout(&red).starts_with("NOT_GREEN step=2"), "{}", stdout(&red));
}

#[test]
fn reports_are_payload_deterministic() {
    let d = Dir::new();
    d.file("a3.json", A3);
    for name in ["r1.json", "r2.json"] {
        let o = d.run(&["check-green", "a3.json", "--seq", "[1,2,1,3,2,1]", "--report", name]);
        assert_eq!(code(&o), 0);
    }
    let r1 = json(&fs::read_to_string(d.path().join("r1.json")).unwrap());
    let r2 = json(&fs::read_to_string(d.path().join("r2.json")).unwrap());
    assert_eq!(r1["command"], "check-green");
    assert_eq!(r1["payload"]["verdict"]["kind"], "MaximalGreen");
    assert_eq!(r1["payload"]["length"], 6);
    assert!(r1["duration_ms"].is_u64());
    for key in ["command", "inputs", "tool_version", "payload"] {
        assert_eq!(r1[key], r2[key], "{key}");
    }
}

#[test]
fn tsystem_staircase_on_a4() {
    let d = Dir::new();
    d.file("a4.json", A4);
    d.file("eta.json", r#"{"1":0,"2":0,"3":0,"4":0}"#);
    let o = d.run(&["tsystem", "a4.json", "eta.json", "--seq", "1,2,3,1,2,1,4,3,2,1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert = json(&stdout(&o));
    assert_eq!(cert["verdict"]["verdict"]["kind"], "MaximalGreen");
    assert_eq!(cert["hypotheses_hold"], true);
    assert_eq!(cert["steps"].as_array().unwrap().len(), 10);
}

#[test]
fn tsystem_enumerate_and_errors() {
    let d = Dir::new();
    d.file("a2.json", r#"{"ex":[1,2],"fr":[],"rows":{"1":[0,1],"2":[-1,0]}}"#);
    d.file("eta.json", r#"{"mode":"exchange","eta":{"1":0,"2":0}}"#);
    let o = d.run(&["tsystem", "a2.json", "eta.json", "--enumerate"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let certs = json(&stdout(&o));
    assert_eq!(certs.as_array().unwrap().len(), 1);
    assert_eq!(certs[0]["instance"]["seq"], json("[1,2,1]"));

    d.file("short.json", r#"{"1":0}"#);
    assert_eq!(code(&d.run(&["tsystem", "a2.json", "short.json", "--enumerate"])), 2);

    let not_full = d.run(&["tsystem", "a2.json", "eta.json", "--seq", "1,2"]);
    assert_eq!(code(&not_full), 4);
    assert!(stderr(&not_full).contains("not full"), "{}", stderr(&not_full));
}

#[test]
fn tsystem_enumerate_a3_levels() {
    let d = Dir::new();
    d.file("a3.json", A3);
    d.file("eta.json", r#"{"1":0,"2":0,"3":0}"#);
    let o = d.run(&["tsystem", "a3.json", "eta.json", "--enumerate", "--limit", "1"]);
    assert_eq!(json(&stdout(&o)).as_array().unwrap().len(), 1);
    let all = d.run(&["tsystem", "a3.json", "eta.json", "--enumerate"]);
    let certs = json(&stdout(&all));
    assert_eq!(certs.as_array().unwrap().len(), 2);
    assert!(certs
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["verdict"]["verdict"]["kind"] == "MaximalGreen"));
}

#[test]
fn paths_listing() {
    let d = Dir::new();
    let o = d.run(&["paths", "--n", "3", "--words"]);
    assert_eq!(stdout(&o).trim(), "1 2 1");
    let two = d.run(&["paths", "--n", "2"]);
    assert_eq!(stdout(&two).trim(), "[1 2] -> [2 1]");
    let a = d.run(&["paths", "--n", "5", "--limit", "10"]);
    let b = d.run(&["paths", "--n", "5", "--limit", "10"]);
    assert_eq!(stdout(&a).lines().count(), 10);
    assert_eq!(a.stdout, b.stdout);
    let all = d.run(&["paths", "--n", "5", "--words"]);
    assert_eq!(stdout(&all).lines().count(), 12);
    assert_eq!(code(&d.run(&["paths", "--n", "0"])), 4);
}

#[test]
fn theorem_a_runs() {
    let d = Dir::new();
    d.file("eta.json", r#"{"1":0,"2":0,"3":0}"#);
    let o = d.run(&["theorem-a", "eta.json", "--word", "1,2,1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert = json(&stdout(&o));
    assert_eq!(cert["instance"]["seq"], json("[1,2,1]"));
    assert_eq!(cert["instance"]["path"], json("[1,2,1]"));
    assert_eq!(cert["verdict"]["verdict"]["kind"], "MaximalGreen");

    let bad = d.run(&["theorem-a", "eta.json", "--word", "2,1,2"]);
    assert_eq!(code(&bad), 4);
    assert!(stderr(&bad).contains("not a contiguous path"), "{}", stderr(&bad));

    assert_eq!(code(&d.run(&["theorem-a", "eta.json", "--path-index", "1"])), 3);
    assert_eq!(code(&d.run(&["theorem-a", "eta.json", "--word", "1,x"])), 2);

    d.file("inj.json", r#"{"1":0,"2":1,"3":2}"#);
    let vacuous = d.run(&["theorem-a", "inj.json", "--path-index", "0"]);
    assert_eq!(code(&vacuous), 0);
    let cert = json(&stdout(&vacuous));
    assert_eq!(cert["instance"]["seq"], json("[]"));
    assert_eq!(cert["verdict"]["verdict"]["kind"], "MaximalGreen");
}

#[test]
fn theorem_a_every_path_of_four() {
    let d = Dir::new();
    d.file("eta.json", r#"{"1":0,"2":1,"3":0,"4":1}"#);
    for i in 0..2 {
        let o = d.run(&["theorem-a", "eta.json", "--path-index", &i.to_string()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(json(&stdout(&o))["hypotheses_hold"], true);
    }
    assert_eq!(code(&d.run(&["theorem-a", "eta.json", "--path-index", "2"])), 3);
    d.file("ex.json", r#"{"mode":"exchange","eta":{"1":0,"2":0}}"#);
    assert_eq!(code(&d.run(&["theorem-a", "ex.json", "--path-index", "0"])), 4);
}

#[test]
fn export_dot_is_deterministic() {
    let d = Dir::new();
    d.file("a3.json", A3);
    d.file("eta.json", r#"{"1":0,"2":0,"3":1}"#);
    let a = d.run(&["export-dot", "a3.json", "eta.json"]);
    let b = d.run(&["export-dot", "a3.json", "eta.json"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("\"2\" -> \"1\""));
    d.file("q.json", r#"{"ex":[1,2],"fr":[],"arrows":[{"src":1,"dst":2,"v":[2,1]}]}"#);
    let q = d.run(&["export-dot", "q.json"]);
    assert_eq!(code(&q), 0, "{}", stderr(&q));
    assert!(stdout(&q).contains("\"1\" -> \"2\""));
}

#[test]
fn corpus_generate_and_verify() {
    let d = Dir::new();
    let args = ["corpus", "generate", "--out", "c1", "--seed", "7", "--count", "6", "--max-n", "3"];
    let g = d.run(&args);
    assert_eq!(code(&g), 0, "{}", stderr(&g));
    for fam in ["acyclic_finest", "disjoint_chains", "path_derived", "random_layered"] {
        assert!(stdout(&g).contains(fam), "{}", stdout(&g));
        assert!(d.path().join("c1").join(fam).is_dir());
    }
    let again = d.run(&["corpus", "generate", "--out", "c2", "--seed", "7", "--count", "6", "--max-n", "3"]);
    assert_eq!(code(&again), 0);
    let listing = |dir: &str| -> Vec<(String, Vec<u8>)> {
        let mut out = Vec::new();
        for fam in fs::read_dir(d.path().join(dir)).unwrap() {
            let fam = fam.unwrap().path();
            for f in fs::read_dir(&fam).unwrap() {
                let f = f.unwrap().path();
                let rel = f.strip_prefix(d.path().join(dir)).unwrap().display().to_string();
                out.push((rel, fs::read(&f).unwrap()));
            }
        }
        out.sort();
        out
    };
    assert_eq!(listing("c1"), listing("c2"));

    let v = d.run(&["corpus", "verify", "c1", "--jobs", "2", "--certificates", "certs"]);
    assert_eq!(code(&v), 0, "{}\n{}", stdout(&v), stderr(&v));
    let last = stdout(&v).lines().last().unwrap().to_string();
    assert!(last.ends_with(" 0 failures"), "{last}");
    assert!(fs::read_dir(d.path().join("certs")).unwrap().count() > 0);

    let serial = d.run(&["corpus", "verify", "c1", "--jobs", "1"]);
    assert_eq!(stdout(&serial), stdout(&v));
}

#[test]
fn corpus_verify_detects_tampering() {
    let d = Dir::new();
    let g = d.run(&["corpus", "generate", "--out", "c", "--count", "2", "--max-n", "2", "--family", "disjoint-chains"]);
    assert_eq!(code(&g), 0, "{}", stderr(&g));
    let fam = d.path().join("c").join("disjoint_chains");
    let file = fs::read_dir(&fam).unwrap().next().unwrap().unwrap().path();
    let mut entry = json(&fs::read_to_string(&file).unwrap());
    entry["instance"]["seq"] = json("[1]");
    fs::write(&file, serde_json::to_string(&entry).unwrap()).unwrap();
    let v = d.run(&["corpus", "verify", "c"]);
    assert_eq!(code(&v), 4);
    assert!(stdout(&v).contains("digest mismatch"), "{}", stdout(&v));

    fs::write(&file, "{").unwrap();
    assert_eq!(code(&d.run(&["corpus", "verify", "c"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    let d = Dir::new();
    d.file("a3.json", A3);
    assert_eq!(code(&d.run(&["mutate", "a3.json"])), 2);
    assert_eq!(code(&d.run(&["no-such-command"])), 2);
}
