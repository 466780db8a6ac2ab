use std::process::{Command, Output};

use robust_crt::{Field, Polynomial};
use serde_json::Value;

const M1: &str = "x^8+x^6+x^5+x^3+x^2+1";
const M2: &str = "x^11+x^7+x^3+x^2+x+1";

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robust-crt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn poly(v: &Value) -> Polynomial {
    Polynomial::parse(v.as_str().expect("string"), Field::binary()).unwrap()
}

#[test]
fn analyze_json_matches_example() {
    let o = bin(&["--format", "json", "analyze", "--m1", M1, "--m2", M2]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["m"], "x^2+1");
    assert_eq!(v["gammaInv21"], "x^5");
    assert_eq!(v["degM"], 17);
    assert_eq!(v["K"], 3);
    assert_eq!(v["sigma"], serde_json::json!(["x^4", "x^3+1", "x", "1"]));
    let bounds: Vec<u64> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["errorBoundExclusive"].as_u64().unwrap())
        .collect();
    assert_eq!(bounds, [6, 5, 3, 2]);
}

#[test]
fn encode_corrupt_reconstruct_pipeline() {
    let enc = json(&bin(&[
        "--format", "json", "encode", "--m1", M1, "--m2", M2, "--poly", "x^15+x^11+x^7+x^6+x+1",
    ]));
    let (a1, a2) = (poly(&enc["a1"]), poly(&enc["a2"]));
    assert_eq!(a1.to_string(), "x^7+x^2+x+1");
    assert_eq!(enc["k2"], "x^4");

    // seed 104 happens to draw the example's errors
    let cor = json(&bin(&[
        "--format", "json", "corrupt", "--r1", &a1.to_string(), "--r2", &a2.to_string(),
        "--tau", "2", "--seed", "104",
    ]));
    assert_eq!(cor["e1"], "x^2+x+1");
    assert_eq!(cor["e2"], "x");
    assert_eq!(cor["r1"], "x^7");
    assert_eq!(cor["r2"], "x^5+x^4+1");

    let rec = json(&bin(&[
        "--format", "json", "reconstruct", "--m1", M1, "--m2", M2, "--r1", "x^7", "--r2",
        "x^5+x^4+1", "--level", "3",
    ]));
    assert_eq!(rec["aHat"], "x^15+x^11+x^7+x^6+1");
    assert_eq!(rec["k2Hat"], "x^4");
    assert_eq!(rec["branch"], "Case1_FoldedDifference");
    assert_eq!(rec["cascadeTail"], "x^2+1");
}

#[test]
fn crt_recovers_and_swaps() {
    let o = bin(&["crt", "--m1", M1, "--m2", M2, "--r1", "x^7+x^2+x+1", "--r2", "x^5+x^4+x+1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "a = x^15+x^11+x^7+x^6+x+1\n");
    // residues follow their moduli through the swap
    let o = bin(&["crt", "--m1", M2, "--m2", M1, "--r1", "x^5+x^4+x+1", "--r2", "x^7+x^2+x+1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "a = x^15+x^11+x^7+x^6+x+1\n");
    assert!(stderr(&o).contains("swapped"));
}

#[test]
fn polynomial_text_round_trips_through_json() {
    // m1 = (x+1)(x^2+2), m2 = (x+1)(x^3+5) over F_13
    let o = bin(&["--p", "13", "--format", "json", "encode", "--m1", "x^3+x^2+2*x+2", "--m2",
        "x^4+x^3+5*x+5", "--poly", "[5,0,12,1,0,7]"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    for key in ["a1", "a2", "k1", "k2"] {
        let text = v[key].as_str().unwrap();
        let p = Polynomial::parse(text, Field::new(13).unwrap()).unwrap();
        assert_eq!(p.to_string(), text);
    }
    let o = bin(&["--p", "13", "crt", "--m1", "x^3+x^2+2*x+2", "--m2", "x^4+x^3+5*x+5", "--r1",
        v["a1"].as_str().unwrap(), "--r2", v["a2"].as_str().unwrap()]);
    assert_eq!(stdout(&o), "a = 7*x^5+x^3+12*x^2+5\n");
}

#[test]
fn exit_codes_and_streams() {
    let cases: [(&[&str], i32); 8] = [
        (&["analyze", "--m1", "x^2", "--m2", "x^2+1"], 3),
        (&["analyze", "--m1", "x^^2", "--m2", "x"], 2),
        (&["--p", "6", "bound", "--moduli", "x,x"], 2),
        (&["encode", "--m1", M1, "--m2", M2, "--poly", "x^20"], 4),
        (&["crt", "--m1", M1, "--m2", M2, "--r1", "x", "--r2", "0"], 6),
        (&["bound", "--moduli", "x"], 7),
        (&["simulate", "--m1", M1, "--m2", M2, "--level", "3", "--tau", "3"], 2),
        (&["reconstruct", "--m1", M1, "--m2", M2, "--r1", "x^8", "--r2", "0", "--level", "1"], 2),
    ];
    for (args, code) in cases {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args:?} wrote to stdout");
        assert!(stderr(&o).contains("error"), "{args:?}");
    }
}

#[test]
fn boundary_simulation_reports_but_succeeds() {
    let o = bin(&[
        "--format", "json", "simulate", "--m1", M1, "--m2", M2, "--level", "2", "--tau", "6",
        "--trials", "300", "--boundary",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    let failures = v["failures"].as_u64().unwrap();
    assert!(failures > 0, "tau past the bound should break some trials");
    assert_eq!(v["failureCases"].as_array().unwrap().len() as u64, failures);
    assert_eq!(v["successes"].as_u64().unwrap() + failures, 300);
}

#[test]
fn guarantee_simulation_is_clean() {
    let o = bin(&[
        "simulate", "--m1", M1, "--m2", M2, "--level", "1", "--tau", "5", "--trials", "300",
        "--threads", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("failures: 0"));
}

#[test]
fn bound_accepts_repeated_and_list_moduli() {
    let o = bin(&["bound", "--moduli", "[1,0,1]", "--moduli", "x^3+x^2+x+1", "--moduli", "x^2+x"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // pairwise gcd degrees 2, 1, 1: every modulus has a partner sharing only x+1
    assert_eq!(stdout(&o), "1\n");
    let o = bin(&["bound", "--moduli", "[1,0,1],x^3+x^2+x+1"]);
    assert_eq!(stdout(&o), "2\n");
}
