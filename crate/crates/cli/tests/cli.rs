use std::process::{Command, Output};

use clandestine_ca::firing_squad::{fs_alphabet, FIRING};
use clandestine_ca::render::gray_level;
use clandestine_ca::Rule;

fn ca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ca")).args(args).output().unwrap()
}

fn ca_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ca")).args(args).env(key, value).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = ca(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn simulate_min_dies_out() {
    let out = ok(&["simulate", "--rule", "min", "--periodic", "110", "--steps", "3", "--render", "ascii"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows, ["110", "000", "000", "000"]);
}

#[test]
fn simulate_identity_repeats() {
    let out = ok(&["simulate", "--rule", "identity", "--periodic", "ab", "--steps", "2"]);
    assert_eq!(out, "ab\nab\nab\n");
}

#[test]
fn simulate_squad_pgm_has_firing_row() {
    let o = ca(&["simulate", "--rule", "fs", "--periodic", "#BBB", "--steps", "40", "--render", "pgm"]);
    assert_eq!(o.status.code(), Some(0));
    let img = o.stdout;
    let header = b"P5\n4 41\n255\n";
    assert!(img.starts_with(header));
    let gamma = gray_level(&fs_alphabet(), FIRING);
    let pixels = &img[header.len()..];
    assert_eq!(pixels.len(), 4 * 41);
    assert!(pixels.chunks(4).any(|row| row.iter().all(|&p| p == gamma)));
}

#[test]
fn simulate_presented_config_window() {
    let out = ok(&["simulate", "--rule", "shift", "--config", "ω(a) b (a)ω", "--steps", "2", "--from", "-2", "--to", "3"]);
    assert_eq!(out, "aabaa\nabaaa\nbaaaa\n");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(ca(&["simulate", "--rule", "min", "--periodic", "1x2"]).status.code(), Some(2));
    assert_eq!(ca(&["simulate", "--rule", "nope", "--periodic", "1"]).status.code(), Some(2));
    assert_eq!(ca(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(ca(&["build", "delta", "--base", "shift"]).status.code(), Some(2));
    assert_eq!(ca_env(&["limit", "--rule", "min", "--n", "2", "--t", "1"], "CA_BUDGET_CELLS", "zero").status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = ca_env(&["limit", "--rule", "min", "--n", "3", "--t", "4", "--strategy", "enumerate"], "CA_BUDGET_CELLS", "10");
    assert_eq!(o.status.code(), Some(3));
    let o = ca_env(&["simulate", "--rule", "min", "--periodic", "110", "--steps", "100"], "CA_BUDGET_CELLS", "50");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn built_rules_round_trip() {
    let tilde = ok(&["build", "tilde", "--base", "elementary:110"]);
    assert_eq!(tilde, ok(&["build", "tilde", "--base", "elementary:110"]));
    let parsed = Rule::parse_rule_file("t", &tilde).unwrap();
    assert_eq!(parsed.alphabet().len(), 6);
    let direct = clandestine_ca::constructions::build_tilde(&Rule::elementary(110)).unwrap();
    assert_eq!(parsed.table(), direct.table());

    let spread = ok(&["build", "spread", "--base", "shift"]);
    let s = Rule::parse_rule_file("s", &spread).unwrap();
    assert_eq!(s.alphabet().len(), 3);
    assert!(s.has_spreading_state(s.alphabet().require("⊥").unwrap()).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spread.rule");
    std::fs::write(&path, &spread).unwrap();
    let delta = ok(&["build", "delta", "--base", path.to_str().unwrap(), "--squad", "fs"]);
    let d = Rule::parse_rule_file("d", &delta).unwrap();
    assert_eq!(d.alphabet().len(), 3 + 3 * 22);
    assert_eq!(Rule::parse_rule_file("d", &d.to_rule_file()).unwrap().table(), d.table());
}

#[test]
fn trace_and_graph_files() {
    assert_eq!(ok(&["trace", "--rule", "min", "--k", "1", "--T", "3"]), "000\n100\n110\n111\n");
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["trace", "--rule", "min", "--graph", "--out", g.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&g).unwrap(), "0 -> 0\n1 -> 0\n1 -> 1\n");
    assert_eq!(ok(&["trace", "--rule", "min", "--paths-of", g.to_str().unwrap(), "--T", "3"]), "k=1 T=3 paths=4\n");
    let check = ok(&["trace", "--rule", "min", "--check", "--T", "4"]);
    assert!(check.contains("holds=true"));
}

#[test]
fn limit_samples_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    ok(&["limit", "--rule", "min", "--n", "3", "--t", "1", "--out", s.to_str().unwrap()]);
    let text = std::fs::read_to_string(&s).unwrap();
    assert!(text.starts_with("n=3 t=1 rule=min\n"));
    assert!(!text.lines().any(|l| l == "101"));
    let cmp = ok(&["limit", "--rule", "min", "--n", "3", "--t", "3", "--against", s.to_str().unwrap()]);
    assert!(cmp.contains("equal=true"));
    let chain = ok(&["limit", "--rule", "min", "--n", "3", "--t", "4", "--chain"]);
    assert!(chain.contains("last_decrease=1\nstable_for=3\n"));
}

#[test]
fn firing_squad_commands() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../rules/fs.rule")).unwrap();
    assert_eq!(ok(&["fs", "rule"]), text);
    assert!(ok(&["fs", "fire", "--n", "7"]).contains("first_firing=15\nfirst_killer=none\nsynchronous=true\n"));
    let fire: serde_json::Value = serde_json::from_str(&ok(&["fs", "fire", "--n", "5", "--steps", "20", "--json"])).unwrap();
    assert_eq!(fire["synchronous"], false);
    assert_eq!(ok(&["fs", "chain", "--j", "2"]), "t=0 spacing=3\nt=4 spacing=1\nt=6 spacing=0\n");
    let hist = ok(&["fs", "history", "--n", "3", "--steps", "7"]);
    assert!(hist.starts_with("GGGGGGGGG\n"));
    assert!(hist.ends_with("#...#...#\n"));
    assert!(ok(&["fs", "history", "--n", "3", "--steps", "6", "--render", "svg"]).starts_with("<svg"));
    assert!(ok(&["fs", "reach", "γ", "--T", "3"]).contains("reach=true"));
    assert!(ok(&["fs", "reach", "L1 R1", "--T", "6"]).contains("reach=false"));
    assert!(ok(&["fs", "schema", "--n", "3", "--t", "0"]).contains("schema=# B^3\n"));
}

#[test]
fn recognizer_commands() {
    assert!(ok(&["xs", "recognize", "BBBB"]).contains("accepted=true\nlabel=NO_SHARPS\n"));
    let g: serde_json::Value = serde_json::from_str(&ok(&["xs", "recognize", "γ γ", "--json"])).unwrap();
    assert_eq!(g["label"], "ALL_GAMMA");
    assert!(ok(&["xs", "recognize", "L1 R1"]).contains("accepted=false"));
    assert!(ok(&["xs", "classify", "B", "κ", "B"]).contains("accepted=false"));
    assert!(ok(&["xs", "classify", "B", "", "B"]).contains("label=NO_SHARPS"));
    assert!(ok(&["xs", "classify", "# B B B", "", "# B B B"]).contains("label=TWO_SHARPS"));
    let cc = ok(&["xs", "crosscheck", "--max-len", "1", "--lines"]);
    assert!(cc.contains("unsound=0\n"));
}

#[test]
fn verify_suites_pass() {
    let out = ok(&["verify", "tilde-sft2", "--base", "elementary:110", "--k", "1", "--T", "6"]);
    assert!(out.ends_with("result=PASS\n"));
    assert!(out.contains("assertion=sft2[k=1,T=6] status=PASS"));
    assert!(ok(&["verify", "limsim", "--n", "3", "--t", "3"]).ends_with("result=PASS\n"));
    let report: serde_json::Value = serde_json::from_str(&ok(&["verify", "fs-contract", "--json"])).unwrap();
    assert_eq!(report["suite"], "fs-contract");
    assert!(report["assertions"].as_array().unwrap().iter().all(|a| a["pass"] == true));
}
