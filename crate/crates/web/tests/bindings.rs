use cubesum_web::{identities_json, p_info_json, search_json, MAX_SEARCH_N};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn p_info() {
    let v = parse(p_info_json(8).unwrap());
    assert_eq!(v["p"], "32640");
    assert_eq!(v["mod9"], 6);
    assert_eq!(v["x_mod3"], serde_json::json!([2]));
    assert!(p_info_json(0).is_err());
}

#[test]
fn identities_include_four_cubes() {
    let v = parse(identities_json(3).unwrap());
    let terms: Vec<&Value> = v.as_array().unwrap().iter().map(|r| &r["terms"]).collect();
    assert!(terms.contains(&&serde_json::json!(["36", "-35", "-16", "7"])));
    let v = parse(identities_json(8).unwrap());
    assert_eq!(v[0]["terms"], serde_json::json!(["-4", "-4", "32"]));
    assert_eq!(v[0]["provenance"], "identity:p6m2");
}

#[test]
fn search_small() {
    let v = parse(search_json(18, false).unwrap());
    assert_eq!(v["reps"].as_array().unwrap().len(), 6);
    assert_eq!(v["complete"], true);
    let v = parse(search_json(4, true).unwrap());
    let reps = v["reps"].as_array().unwrap();
    assert!(reps.iter().all(|r| r["sign_class"] == "mixed"));
    assert!(!reps.is_empty());
    assert!(search_json(MAX_SEARCH_N + 1, false).is_err());
}
