use std::path::PathBuf;
use std::process::{Command, Output};

use unambig::format::{parse_automata, write_nfa};
use unambig::generate::{random_trim_nfa, rng};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn unambig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unambig")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unambig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_reference_automata() {
    let expected = [
        ("a1.nfa", "unambiguous"),
        ("a2.nfa", "exponentially-ambiguous"),
        ("a3.nfa", "finitely-ambiguous"),
        ("a4.nfa", "polynomially-ambiguous"),
    ];
    for (file, class) in expected {
        let o = unambig(&["classify", data(file).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(first_line(&o), class, "{file}");
    }
    let o = unambig(&["classify", "--unary-fast", data("a4.nfa").to_str().unwrap()]);
    assert_eq!(first_line(&o), "polynomially-ambiguous");
}

#[test]
fn empty_language_is_unambiguous() {
    let o = unambig(&["classify", data("empty.nfa").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "unambiguous\n");
}

#[test]
fn json_output_carries_class_and_witness() {
    let o = unambig(&["--json", "classify", data("a3.nfa").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "FinitelyAmbiguous");
    assert_eq!(v["witness"]["kind"], "two_runs");
}

#[test]
fn unary_fast_agrees_on_random_unary_automata() {
    let mut r = rng(11);
    for i in 0..20 {
        let a = random_trim_nfa(&mut r, 7, 1);
        let path = temp(&format!("unary{i}.nfa"));
        std::fs::write(&path, write_nfa(&a)).unwrap();
        let p = path.to_str().unwrap();
        let general = unambig(&["classify", p]);
        let fast = unambig(&["classify", "--unary-fast", p]);
        assert_eq!(first_line(&general), first_line(&fast), "{}", write_nfa(&a));
    }
}

#[test]
fn unary_fast_rejects_larger_alphabets() {
    let o = unambig(&["classify", "--unary-fast", data("a1.nfa").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_errors_name_the_line() {
    let o = unambig(&["classify", data("bad.nfa").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn cap_exceeded_exit_code() {
    let o = unambig(&["--cap", "5", "classify", data("a1.nfa").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ov_reduction_accepts_the_orthogonal_pair_word() {
    let out = temp("ov.nfa");
    let o = unambig(&["reduce", "ov2ie", data("small.ov").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dfas = parse_automata(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(dfas.len(), 2);
    for d in &dfas {
        assert!(d.nfa().accepts(&[2, 1, 1, 2, 2, 1]));
    }
}

#[test]
fn reductions_chain_through_files() {
    let ov = temp("chain.nfa");
    let union = temp("union.nfa");
    let eda = temp("eda.nfa");
    let twins = temp("twins.wfa");
    let run = |args: &[&str]| assert_eq!(unambig(args).status.code(), Some(0), "{args:?}");
    run(&["reduce", "ov2ie", "--binary", data("small.ov").to_str().unwrap(), "-o", ov.to_str().unwrap()]);
    run(&["reduce", "ie2unamb", ov.to_str().unwrap(), "-o", union.to_str().unwrap()]);
    run(&["reduce", "unamb2eda", union.to_str().unwrap(), "-o", eda.to_str().unwrap()]);
    run(&["reduce", "unamb2twins", union.to_str().unwrap(), "-o", twins.to_str().unwrap()]);
    // The instance has an orthogonal pair: the union is ambiguous, the EDA automaton
    // is exponentially ambiguous and the twins automaton is not determinisable.
    assert_ne!(first_line(&unambig(&["classify", union.to_str().unwrap()])), "unambiguous");
    assert_eq!(first_line(&unambig(&["classify", eda.to_str().unwrap()])), "exponentially-ambiguous");
    assert_eq!(first_line(&unambig(&["twins", twins.to_str().unwrap()])), "not-twins");
}

#[test]
fn unknown_reduction_kind_is_rejected() {
    let o = unambig(&["reduce", "sat2ie", data("small.ov").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_dp_verdicts() {
    let o = unambig(&["solve-dp", data("single.prog").to_str().unwrap()]);
    assert_eq!(stdout(&o), "disjoint\n");
    let o = unambig(&["solve-dp", data("two.prog").to_str().unwrap()]);
    assert_eq!(first_line(&o), "not-disjoint");
}

#[test]
fn twins_on_siblings_with_different_loops() {
    let o = unambig(&["twins", data("siblings.wfa").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "not-twins");
}

#[test]
fn verify_suites_pass() {
    let o = unambig(&["verify", "all", "--cases", "30", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 6);
}

#[test]
fn bench_csv_is_stable_apart_from_times() {
    let strip = |o: Output| -> Vec<String> {
        stdout(&o)
            .lines()
            .map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 4).map(|(_, x)| x).collect::<Vec<_>>().join(","))
            .collect()
    };
    let args = ["bench", "twins-chain", "--sizes", "64,128", "--runs", "2"];
    let a = strip(unambig(&args));
    assert_eq!(a[0], "algo,family,n,m,verdict,extra");
    assert_eq!(a.len(), 5);
    assert_eq!(a, strip(unambig(&args)));
}
