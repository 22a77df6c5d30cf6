use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn nlrefute(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlrefute")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

const WORKED: &str = "Round, kind people are rough.\nEveryone is not rough.\n# a comment\n\nEveryone is round.\n";

#[test]
fn prove_worked_example() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t.txt", WORKED);
    let o = nlrefute(&["prove", "--theory", "t.txt", "--hypothesis", "Bob is not kind."], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let expected = "True\n\
STEP 1: [4] kind(Bob) | [1] -kind(v1) | -round(v1) | rough(v1) => [5] -round(Bob) | rough(Bob) ;; NL: Bob is kind. + Everyone is not kind or not round or rough. => Bob is not round or rough.\n\
STEP 2: [5] -round(Bob) | rough(Bob) | [2] -rough(v1) => [6] -round(Bob) ;; NL: Bob is not round or rough. + Everyone is not rough. => Bob is not round.\n\
STEP 3: [6] -round(Bob) | [3] round(v1) => [7] [] ;; NL: Bob is not round. + Everyone is round. => \n";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn prove_fact_and_unknown() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t.txt", "Bob is kind.\n");
    let o = nlrefute(&["prove", "--theory", "t.txt", "--hypothesis", "Bob is kind."], dir.path());
    let out = stdout(&o);
    assert!(out.starts_with("True\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("STEP")).count(), 1);

    let o = nlrefute(&["prove", "--theory", "t.txt", "--hypothesis", "Bob is round."], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Unknown\n");
}

#[test]
fn budget_exhaustion_is_a_verdict() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t.txt", WORKED);
    let o = nlrefute(&["--budget", "1", "prove", "--theory", "t.txt", "--hypothesis", "Bob is not kind.", "--json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["predicted_label"], "Unknown");
    assert_eq!(v["halt_t2"], "budget_exhausted");
}

#[test]
fn sat_examples() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "u.txt", "Everyone is round.\nBob is not round.\n");
    write(dir.path(), "s.txt", "Bob is kind.\n");
    let o = nlrefute(&["sat", "--theory", "u.txt"], dir.path());
    let out = stdout(&o);
    assert!(out.starts_with("Unsatisfiable\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("STEP")).count(), 1);
    assert_eq!(stdout(&nlrefute(&["sat", "--theory", "s.txt"], dir.path())), "Satisfiable\n");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t.txt", "Bob is purple.\n");
    let o = nlrefute(&["prove", "--theory", "t.txt", "--hypothesis", "Bob is kind."], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown_word"));

    assert_eq!(
        nlrefute(&["prove", "--theory", "missing.txt", "--hypothesis", "Bob is kind."], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(nlrefute(&["prove", "--hypothesis", "Bob is kind."], dir.path()).status.code(), Some(4));
    assert_eq!(nlrefute(&["--strategy", "greedy", "sat", "--theory", "t.txt"], dir.path()).status.code(), Some(4));
    assert_eq!(nlrefute(&["--budget", "0", "sat", "--theory", "t.txt"], dir.path()).status.code(), Some(4));

    write(dir.path(), "bad.toml", "n_entitys = 3\n");
    assert_eq!(nlrefute(&["gen", "--config", "bad.toml"], dir.path()).status.code(), Some(4));
    write(dir.path(), "big.toml", "n_entities = 40\n");
    assert_eq!(nlrefute(&["gen", "--config", "big.toml"], dir.path()).status.code(), Some(4));

    assert_eq!(nlrefute(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(nlrefute(&["--version"], dir.path()).status.code(), Some(0));
}

#[test]
fn help_documents_every_flag() {
    let dir = TempDir::new().unwrap();
    let help = stdout(&nlrefute(&["prove", "--help"], dir.path()));
    for flag in ["--budget", "--strategy", "--lexicon", "--seed", "--json", "--jobs", "--theory", "--hypothesis", "--instances"] {
        assert!(help.contains(flag), "{flag} missing from\n{help}");
    }
    let help = stdout(&nlrefute(&["gen", "--help"], dir.path()));
    for flag in ["--config", "--out", "--nlsat", "--training-records", "--count"] {
        assert!(help.contains(flag), "{flag} missing from\n{help}");
    }
}

#[test]
fn gen_and_prove_are_deterministic() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "g.toml", "seed = 7\nn_instances = 30\nstrategy = \"sos-linear\"\ntarget_depth_range = [0, 5]\n");
    for run in ["a", "b"] {
        let o = nlrefute(
            &["gen", "--config", "g.toml", "--out", &format!("{run}.jsonl"), "--training-records", &format!("{run}.rec.jsonl")],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |n: &str| fs::read(dir.path().join(n)).unwrap();
    assert_eq!(read("a.jsonl"), read("b.jsonl"));
    assert_eq!(read("a.rec.jsonl"), read("b.rec.jsonl"));
    assert_eq!(String::from_utf8(read("a.jsonl")).unwrap().lines().count(), 30);

    let one = nlrefute(&["--jobs", "1", "prove", "--instances", "a.jsonl", "--json"], dir.path());
    let many = nlrefute(&["--jobs", "4", "prove", "--instances", "a.jsonl", "--json"], dir.path());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);

    let other = nlrefute(&["--seed", "8", "gen", "--config", "g.toml"], dir.path());
    assert_ne!(other.stdout, read("a.jsonl"));
}

#[test]
fn prove_output_scores_perfectly() {
    let dir = TempDir::new().unwrap();
    let o = nlrefute(&["--seed", "3", "gen", "--count", "24", "--out", "gold.jsonl"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let p = nlrefute(&["prove", "--instances", "gold.jsonl", "--json"], dir.path());
    write(dir.path(), "pred.jsonl", &stdout(&p));

    let e = nlrefute(&["eval", "--predictions", "pred.jsonl", "--gold", "gold.jsonl", "--json"], dir.path());
    let s: serde_json::Value = serde_json::from_str(stdout(&e).trim()).unwrap();
    assert_eq!(s["entailment_accuracy"], 1.0);
    assert_eq!(s["full_accuracy"], 1.0);
    assert_eq!(s["n"], 24);

    let c = nlrefute(&["check", "--proofs", "pred.jsonl", "--instances", "gold.jsonl"], dir.path());
    assert!(stdout(&c).ends_with("valid: 24/24\n"));
}

#[test]
fn eval_detects_wrong_labels_and_bad_proofs() {
    let dir = TempDir::new().unwrap();
    let gold = nlrefute(&["gen", "--count", "3", "--out", "gold.jsonl"], dir.path());
    assert_eq!(gold.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("gold.jsonl")).unwrap();
    let ids: Vec<String> =
        text.lines().map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["id"].as_str().unwrap().to_string()).collect();
    let labels: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["label"].as_str().unwrap().to_string())
        .collect();
    // right labels, but every non-Unknown proof is a bogus single step
    let preds: String = ids
        .iter()
        .zip(&labels)
        .map(|(id, label)| {
            let proof = if label == "Unknown" {
                "[]".to_string()
            } else {
                r#"[{"premises_fol":["kind(Bob)","tall(Bob)"],"conclusion_fol":"[]"}]"#.to_string()
            };
            format!("{{\"id\":\"{id}\",\"predicted_label\":\"{label}\",\"predicted_proof\":{proof}}}\n")
        })
        .collect();
    write(dir.path(), "pred.jsonl", &preds);
    let e = nlrefute(&["eval", "--predictions", "pred.jsonl", "--gold", "gold.jsonl", "--json"], dir.path());
    let s: serde_json::Value = serde_json::from_str(stdout(&e).trim()).unwrap();
    assert_eq!(s["entailment_accuracy"], 1.0);
    let unknown = labels.iter().filter(|l| *l == "Unknown").count() as f64;
    assert_eq!(s["full_accuracy"], unknown / 3.0);

    write(dir.path(), "stray.jsonl", "{\"id\":\"nope\",\"predicted_label\":\"True\"}\n");
    let e = nlrefute(&["eval", "--predictions", "stray.jsonl", "--gold", "gold.jsonl"], dir.path());
    assert_eq!(e.status.code(), Some(2));
}

#[test]
fn nlsat_generation() {
    let dir = TempDir::new().unwrap();
    let o = nlrefute(&["gen", "--nlsat", "0.5", "--count", "10", "--out", "s.jsonl"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = nlrefute(&["sat", "--instances", "s.jsonl", "--json"], dir.path());
    let text = fs::read_to_string(dir.path().join("s.jsonl")).unwrap();
    for (gold, pred) in text.lines().zip(stdout(&s).lines()) {
        let g: serde_json::Value = serde_json::from_str(gold).unwrap();
        let p: serde_json::Value = serde_json::from_str(pred).unwrap();
        assert_eq!(g["id"], p["id"]);
        assert_eq!(g["label"], p["predicted_label"]);
    }
}
