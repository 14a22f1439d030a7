use gridramsey_web::{bounds_json, minimal_coloring_json, resample_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn minimal_coloring_has_one_box() {
    let v = parse(minimal_coloring_json(2, 2).unwrap());
    assert_eq!(v["grid"], "3x7");
    assert_eq!(v["mono_count"], "1");
    assert_eq!(v["cells"].as_array().unwrap().len(), 21);
    assert!(minimal_coloring_json(2, 3).is_err());
}

#[test]
fn resampling_is_seeded() {
    let a = resample_json(2, 4, 6, 3, 100_000).unwrap();
    assert_eq!(a, resample_json(2, 4, 6, 3, 100_000).unwrap());
    let v = parse(a);
    assert_eq!(v["success"], true);
    assert_eq!(v["mono_boxes"].as_array().unwrap().len(), 0);
    let v = parse(resample_json(2, 3, 7, 0, 200).unwrap());
    assert_eq!(v["success"], false);
}

#[test]
fn bounds_for_corollary_sized_grids() {
    // Plain Delta misses 3x7; rounding each count up recovers it.
    let v = parse(bounds_json(2, "3x7").unwrap());
    assert_eq!(v["delta"]["guaranteed"], false);
    assert_eq!(v["count"], "1");
    assert_eq!(v["delta"]["terms"].as_array().unwrap().len(), 3);
    assert!(bounds_json(2, "3xq").is_err());
}
