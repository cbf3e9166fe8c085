use serde_json::Value;
use unirow_web::{bounds_json, lemma23_json, sl2_json};

#[test]
fn sl2_export_verifies() {
    let v: Value = serde_json::from_str(&sl2_json("field(Q)", r#"[["2","0"],["0","1/2"]]"#).unwrap()).unwrap();
    assert_eq!(v["min_length"], 4);
    assert_eq!(v["verified"], true);
    assert!(sl2_json("field(Q)", r#"[["2","0"],["0","1"]]"#).is_err());
}

#[test]
fn lemma23_export_verifies() {
    let out = lemma23_json("trunc(Q;1;1;2)", r#"[["1 + e1","x1*e1"],["e1","1"]]"#).unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verified"], true);
    assert!(lemma23_json("trunc(Q;1;1;2)", "[[").is_err());
}

#[test]
fn bounds_export() {
    let v: Value = serde_json::from_str(&bounds_json(2, 10).unwrap()).unwrap();
    assert_eq!(v["sup_tn_d2"], 7);
    assert!(bounds_json(0, 3).is_err());
}
