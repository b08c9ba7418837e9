use immersion_core::graph6;
use immersion_core::immersion::{
    make_target, verify_certificate, ImmersionCertificate, TargetSpec,
};
use immersion_web::{decompose_json, immerse_json, random_alpha2_json};
use serde_json::Value;

#[test]
fn immerse_returns_a_checkable_certificate() {
    let v: Value = serde_json::from_str(&immerse_json("Dhc", "clique:3").unwrap()).unwrap();
    assert_eq!(v["status"], "found");
    assert_eq!(v["graph"]["n"], 5);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 5);
    let cert: ImmersionCertificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    let g = graph6::decode("Dhc").unwrap();
    let h = make_target(&TargetSpec::Clique { k: 3 }).unwrap();
    assert_eq!(verify_certificate(&g, &h, &cert), Ok(()));

    let v: Value = serde_json::from_str(&immerse_json("Dhc", "kst:3,3").unwrap()).unwrap();
    assert_eq!(v["status"], "not_found");
    assert!(v["certificate"].is_null());
    assert!(immerse_json("Dhc", "wheel").is_err());
    assert!(immerse_json("??", "clique:3").is_err());
}

#[test]
fn decomposition_view() {
    let v: Value = serde_json::from_str(&decompose_json("Dhc", 0, 2).unwrap()).unwrap();
    let d = &v["decomposition"];
    assert_eq!(d["common"], serde_json::json!([1]));
    assert_eq!(d["x_side"], serde_json::json!([0, 4]));
    assert_eq!(d["y_side"], serde_json::json!([2, 3]));
    assert!(decompose_json("Dhc", 0, 1).is_err());
}

#[test]
fn random_graphs_are_seeded() {
    let a = random_alpha2_json(9, 5).unwrap();
    assert_eq!(a, random_alpha2_json(9, 5).unwrap());
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(v["alpha"].as_u64().unwrap() <= 2);
    assert!(v["chi"].is_u64());
    assert!(random_alpha2_json(0, 1).is_err());
}
