use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use skeinlab_core::skein::SkeinElement;
use skeinlab_core::surface::SurfacePattern;
use skeinlab_core::Backend;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("skeinlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn skeinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skeinlab")).args(args).env_remove("SKEINLAB_SEED").output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_element(name: &str, s: &SkeinElement) -> String {
    let p = scratch(name);
    std::fs::write(&p, serde_json::to_string(&s.to_json()).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn torus_traces() -> (String, String) {
    let c = Backend::classical();
    let t = SurfacePattern::punctured_torus();
    (
        write_element("tr_a.json", &SkeinElement::handle_trace(&c, &t, 0, 1).unwrap()),
        write_element("tr_b.json", &SkeinElement::handle_trace(&c, &t, 1, 1).unwrap()),
    )
}

#[test]
fn classical_crossing_is_the_flip() {
    let o = skeinlab(&["eval-tangle", "--backend", "classical", data("crossing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = stdout_json(&o);
    assert_eq!(m["source"], m["target"]);
    let text = m.to_string();
    assert!(text.contains("\"1\""), "{text}");
}

#[test]
fn kink_matches_the_twist_over_the_quantum_backend() {
    let o = skeinlab(&["eval-tangle", "--backend", "quantum", "--order", "3", data("kink.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // theta_V = exp(3h/4): coefficients 1, 3/4, 9/32.
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("3/4") && text.contains("9/32"), "{text}");
}

#[test]
fn product_of_commuting_traces() {
    let c = Backend::classical();
    let an = SurfacePattern::annulus();
    let t = write_element("annulus_tr.json", &SkeinElement::handle_trace(&c, &an, 0, 1).unwrap());
    let o = skeinlab(&["product", "--backend", "quantum", "--order", "2", &t, &t]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let product = SkeinElement::from_json(&v).unwrap();
    let labels: Vec<Vec<u32>> = product.terms().keys().cloned().collect();
    assert_eq!(labels, vec![vec![0], vec![2]]);
}

#[test]
fn sigma_methods_agree_on_torus_traces() {
    let (a, b) = torus_traces();
    let mut outs = Vec::new();
    for m in ["algebraic", "goldman", "fock-rosly"] {
        let o = skeinlab(&["sigma", "--method", m, "--backend", "epsilon", &a, &b]);
        assert_eq!(o.status.code(), Some(0), "{m}: {}", String::from_utf8_lossy(&o.stderr));
        let v = stdout_json(&o);
        assert_eq!(v["method"], m);
        outs.push(SkeinElement::from_json(&v["element"]).unwrap());
    }
    assert!(outs[0].equal(&outs[1]));
    assert!(!outs[0].is_zero());
}

#[test]
fn fusing_the_disk_gives_the_annulus() {
    let o = skeinlab(&["fuse", "--v1", "0", "--v2", "1", data("disk2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let p = SurfacePattern::from_json(&v["pattern"]).unwrap();
    assert_eq!(p.vertex_count(), 1);
    assert_eq!(p.euler_characteristic(), SurfacePattern::annulus().euler_characteristic());
}

#[test]
fn verify_moves_example_passes() {
    let o = skeinlab(&["verify", "--suite", "moves", "--backend", "quantum", "--order", "3", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    assert_eq!(v["suite"], "moves");
    assert_eq!(v["cases"], 150);
    assert_eq!(v["defects"], Value::Array(vec![]));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 4);
}

#[test]
fn reports_are_byte_identical_with_a_pinned_clock() {
    let run = || skeinlab(&["verify", "--suite", "torsion", "--backend", "drinfeld", "--order", "3", "--pin-clock"]).stdout;
    let first = run();
    assert_eq!(first, run());
    assert!(String::from_utf8_lossy(&first).contains("\"elapsed_ms\": 0"));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let out = scratch("env_seed.json");
    let by_flag = skeinlab(&["verify", "--suite", "fusion", "--backend", "epsilon", "--seed", "5", "--pin-clock"]).stdout;
    let o = Command::new(env!("CARGO_BIN_EXE_skeinlab"))
        .args(["verify", "--suite", "fusion", "--backend", "epsilon", "--pin-clock", "--out", out.to_str().unwrap()])
        .env("SKEINLAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), by_flag);
}

#[test]
fn dropping_the_diagonal_reports_defects() {
    let o = skeinlab(&["verify", "--suite", "jacobi", "--backend", "epsilon", "--fr-diagonal", "exclude", "--pin-clock"]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    let defects = v["defects"].as_array().unwrap();
    assert!(!defects.is_empty());
    assert!(defects[0]["element"].get("terms").is_some());
    let ids: Vec<&str> = defects.iter().map(|d| d["case"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
}

#[test]
fn other_fusion_convention_also_passes() {
    let o = skeinlab(&["verify", "--suite", "fusion", "--backend", "epsilon", "--convention", "fusion=v2v1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn malformed_json_exits_2_with_location() {
    let o = skeinlab(&["eval-tangle", data("malformed.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("malformed.json:3:"), "{err}");
}

#[test]
fn bad_options_exit_2() {
    for args in [
        vec!["verify", "--suite", "nonsense"],
        vec!["verify", "--suite", "torsion", "--backend", "su3"],
        vec!["verify", "--suite", "torsion", "--convention", "fusion=v3"],
        vec!["verify", "--suite", "torsion", "--backend", "drinfeld", "--order", "4"],
        vec!["product"],
    ] {
        assert_eq!(skeinlab(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn non_strict_products_are_refused() {
    let (a, b) = torus_traces();
    let o = skeinlab(&["product", "--backend", "drinfeld", "--order", "3", &a, &b]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}
