use std::path::{Path, PathBuf};
use std::process::Command;

use fibered_harness::cli::{run, Outcome};
use serde_json::Value;

fn corpus(rel: &str) -> String {
    let p: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel);
    p.to_str().unwrap().to_string()
}

fn cli(args: &[&str], stdin: &str) -> Outcome {
    run(std::iter::once("fibered").chain(args.iter().copied()), &mut stdin.as_bytes())
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {} {}", o.stdout, o.stderr))
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["check"] == name).unwrap()
}

#[test]
fn documented_examples() {
    let o = cli(&["battery", "--pair", &corpus("pairs/self_catmap.json")], "");
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = cli(&["compare-reciprocal", "--a", "t^2-3t+1", "--b", "t^2-t+1", "--mmax", "10"], "");
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["verdict"], "distinguished-at 1");
    let o = cli(&["compare-reciprocal", "--a", "t^2-3t+1", "--b", "-t^3+3t^2-t", "--mmax", "10"], "");
    assert_eq!((o.code, json(&o)["verdict"].as_str().unwrap()), (0, "equivalent"));
    let o = cli(&["zeta", "--model", &corpus("models/catmap.json"), "--depth", "8"], "");
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["fit"]["display"], "(t^2 - 3t + 1)/(t^2 - 2t + 1)");
}

#[test]
fn shallow_zeta_has_no_fit() {
    let o = cli(&["zeta", "--model", &corpus("models/catmap.json"), "--depth", "3"], "");
    assert_eq!(o.code, 1);
    assert!(json(&o)["fit"].is_null());
}

#[test]
fn twisted_zeta_by_power_class() {
    let path = corpus("models/anosov_s3.json");
    let parts: usize = {
        let o = cli(&["nielsen", "--input", &path], "");
        json(&o)["omega_parts"].as_array().unwrap().len()
    };
    assert_eq!(parts, 3);
    for w in 0..parts {
        let o = cli(&["zeta", "--model", &path, "--depth", "4", "--omega", &w.to_string()], "");
        assert!(o.code <= 1, "{}", o.stderr);
        assert_eq!(json(&o)["series"].as_array().unwrap().len(), 5);
    }
    let o = cli(&["zeta", "--model", &path, "--depth", "4", "--omega", "9"], "");
    assert_eq!(o.code, 2);
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["--seed", "11", "battery", "--pair"],
        vec!["--seed", "11", "nielsen", "--input"],
    ] {
        let file = if args[2] == "battery" { corpus("pairs/perturbed_orbit_table.json") } else { corpus("models/anosov_s3.json") };
        let mut a = args.clone();
        a.push(&file);
        let x = cli(&a, "");
        let y = cli(&a, "");
        assert_eq!(x, y);
    }
}

#[test]
fn seed_changes_only_random_samples() {
    let p = corpus("pairs/perturbed_dilated_ball.json");
    let a = json(&cli(&["--seed", "1", "battery", "--pair", &p], ""));
    let b = json(&cli(&["--seed", "2", "battery", "--pair", &p], ""));
    assert_eq!(check(&a, "norm_values")["verdict"], check(&b, "norm_values")["verdict"]);
    assert_eq!(check(&a, "norm_cones"), check(&b, "norm_cones"));
}

#[test]
fn malformed_json_reports_position() {
    let o = cli(&["alexander"], "{\n  \"genus\": 1,\n  \"punctures\": ,\n}");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
    let o = cli(&["battery", "--pair", "/nonexistent/pair.json"], "");
    assert_eq!(o.code, 2);
    let o = cli(&["no-such-command"], "");
    assert_eq!(o.code, 2);
}

#[test]
fn invalid_pairs_are_input_errors() {
    let text = std::fs::read_to_string(corpus("pairs/self_square.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["mu"] = serde_json::json!({ "residue": "2", "modulus": "8" });
    let o = cli(&["battery"], &v.to_string());
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("not a unit"), "{}", o.stderr);

    let text = std::fs::read_to_string(corpus("pairs/self_anosov_s3.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["quotient"]["images_b"] = serde_json::json!([[1, 2, 0], [2, 0, 1]]);
    let o = cli(&["battery"], &v.to_string());
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("do not generate"), "{}", o.stderr);

    let o = cli(&["battery", "--check", "bogus", "--pair", &corpus("pairs/self_square.json")], "");
    assert_eq!(o.code, 2);
}

#[test]
fn plain_integers_are_accepted() {
    let p = r#"{"genus": 1, "punctures": 1, "monodromy": [[2, 1], [1, 1]]}"#;
    let o = cli(&["torsion"], p);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["torsion"], "(t^2 - 3t + 1)/(-t + 1)");
}

#[test]
fn battery_details() {
    let r = json(&cli(&["battery", "--pair", &corpus("pairs/self_catmap.json")], ""));
    let t = check(&r, "torsion");
    assert_eq!(t["detail"]["tau_a"], t["detail"]["tau_b"]);
    let nv = check(&r, "norm_values");
    let fc = &nv["detail"]["fibered_classes"][0];
    assert_eq!((fc["norm"].as_str(), fc["expected"].as_str()), (Some("1"), Some("1")));
    let mc = check(&r, "mc");
    assert_eq!(mc["detail"]["shape"], "Ẑ×-regular shape");
    assert!(r["scope"].as_str().unwrap().contains("not a proof"));

    let r = json(&cli(&["battery", "--pair", &corpus("pairs/perturbed_trace.json")], ""));
    let vals = &check(&r, "torsion")["detail"]["char_poly_values_at_1"][1];
    assert_eq!(vals, &serde_json::json!(["-1", "-2"]));

    let r = json(&cli(&["battery", "--pair", &corpus("pairs/perturbed_cone_count.json")], ""));
    let tried = &check(&r, "norm_cones")["detail"]["tried"][0]["correspondence"];
    assert!(tried.get("straddle").is_some(), "{tried}");

    let r = json(&cli(&["battery", "--pair", &corpus("pairs/perturbed_dilated_ball.json")], ""));
    let mismatch = &check(&r, "norm_values")["detail"]["mismatch"];
    assert_eq!(mismatch["norm_b"].as_str().unwrap(), "2");
    assert_eq!(mismatch["norm_a_of_t_phi"].as_str().unwrap(), "1");
}

#[test]
fn only_selected_checks_run() {
    let o = cli(&["battery", "--check", "torsion", "--pair", &corpus("pairs/perturbed_orbit_table.json")], "");
    assert_eq!(o.code, 0);
    let r = json(&o);
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn seminorm_balls_are_refused_by_the_cone_check() {
    let strip = std::fs::read_to_string(corpus("balls/seminorm_strip.json")).unwrap();
    let o = cli(&["norm-ball", "--phi", "0,5", "--phi", "-2,1"], &strip);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["is_norm"], false);
    assert_eq!(v["kernel_dimension"], 1);
    assert_eq!(v["norms"][0]["norm"], "0");
    assert_eq!(v["norms"][1]["norm"], "2");
    let side = serde_json::json!({ "ball": serde_json::from_str::<Value>(&strip).unwrap() });
    let pair = serde_json::json!({ "name": "strip", "a": side, "b": side, "mu": { "residue": "1", "modulus": "1" } });
    let r = json(&cli(&["battery"], &pair.to_string()));
    assert_eq!(check(&r, "norm_cones")["verdict"], "skipped");
    assert_eq!(check(&r, "norm_values")["verdict"], "pass");
}

#[test]
fn mc_rank_shapes() {
    let cases = [
        ("maps/unit_times_unimodular.json", 0, "Ẑ×-regular shape"),
        ("maps/rank_two.json", 1, "not rank one"),
        ("maps/nonunit_residue.json", 1, "generator not a unit"),
        ("maps/split_generator.json", 0, "Ẑ×-regular shape"),
    ];
    for (file, code, shape) in cases {
        let o = cli(&["mc-rank", "--input", &corpus(file)], "");
        assert_eq!(o.code, code, "{file}");
        assert_eq!(json(&o)["shape"], shape, "{file}");
    }
    let o = cli(&["mc-rank", "--input", &corpus("maps/unit_times_unimodular.json")], "");
    assert_eq!(json(&o)["f_unimodular"], true);
    // x·2I + y·(−I): generator 2x − y.
    let o = cli(&["mc-rank", "--input", &corpus("maps/split_generator.json")], "");
    assert_eq!(json(&o)["generator"], serde_json::json!(["2", "-1"]));
}

#[test]
fn norm_ball_reports_cones_and_duals() {
    let o = cli(&["norm-ball", "--input", &corpus("balls/hexagon.json"), "--phi", "1,1"], "");
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["cones"].as_array().unwrap().len(), 6);
    assert_eq!(v["norms"][0]["norm"], "2");
    for c in v["cones"].as_array().unwrap() {
        assert_eq!(c["projective_dual"]["vertices"].as_array().unwrap().len(), 2);
        assert_eq!(c["projective_dual"]["dimension"], 1);
    }
}

#[test]
fn alexander_reports_duality() {
    for p in ["presentations/catmap.json", "presentations/sign_rep.json", "presentations/anosov_5221.json"] {
        let o = cli(&["alexander", "--input", &corpus(p)], "");
        assert_eq!(o.code, 0, "{p}: {}", o.stdout);
        assert_eq!(json(&o)["duality"]["pass"], true);
    }
}

#[test]
fn fried_cone_of_corpus_graphs() {
    let o = cli(&["fried-cone", "--graph", &corpus("graphs/two_loops.json")], "");
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["rays"], serde_json::json!([["0", "1"], ["1", "0"]]));
    let o = cli(&["fried-cone", "--graph", &corpus("graphs/theta.json"), "--max-len", "4"], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn nielsen_comparison_mode() {
    let a: Value = serde_json::from_str(&std::fs::read_to_string(corpus("models/catmap.json")).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(corpus("tables/catmap_relabeled.json")).unwrap()).unwrap();
    let input = serde_json::json!({ "a": a, "b": b }).to_string();
    assert_eq!(cli(&["nielsen", "--mmax", "4"], &input).code, 0);
    let e: Value = serde_json::from_str(&std::fs::read_to_string(corpus("tables/catmap_edited.json")).unwrap()).unwrap();
    let input = serde_json::json!({ "a": a, "b": e }).to_string();
    let o = cli(&["nielsen", "--mmax", "4"], &input);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["first_difference"], serde_json::json!({ "m": 2, "index": -1 }));
}

#[test]
fn ladder_from_environment() {
    let bin = env!("CARGO_BIN_EXE_fibered");
    let pair = corpus("pairs/self_catmap.json");
    let out = Command::new(bin)
        .args(["battery", "--check", "torsion", "--pair", &pair])
        .env("FIBERED_LADDER", "5:1,5:4,7:5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = &v["checks"][0]["detail"];
    let levels: Vec<(u64, u64)> = d["ideals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| (x["l"].as_u64().unwrap(), x["d"].as_u64().unwrap()))
        .collect();
    assert!(levels.iter().all(|l| *l == (5, 1) || *l == (5, 4)));
    assert_eq!(d["ladder_levels_skipped"], serde_json::json!(["7:5"]));
    let out = Command::new(bin).args(["battery", "--pair", &pair]).env("FIBERED_LADDER", "oops").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
