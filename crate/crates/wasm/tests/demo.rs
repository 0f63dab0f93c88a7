use borcherds_wasm::{fj_grid, theta_an_series, theta_translate_law};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("ok")).unwrap()
}

#[test]
fn j744_grid() {
    let g = parse(fj_grid("j744", 2, "3"));
    assert_eq!(g["i0"], "-1");
    assert_eq!(g["q1_exps"], serde_json::json!(["-1", "0", "1", "2"]));
    let rows = g["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["q2_exp"], "-1");
    assert_eq!(rows[0]["cells"], serde_json::json!(["0", "1", "0", "0"]));
    // Grade 1 is 744 - j: -q^-1 - 196884 q - 21493760 q^2.
    assert_eq!(rows[1]["cells"], serde_json::json!(["-1", "0", "-196884", "-21493760"]));
    // Grade 2 is the constant c(1) of j.
    assert_eq!(rows[2]["cells"], serde_json::json!(["0", "196884", "0", "0"]));
}

#[test]
fn gn_grid_has_half_integral_rows() {
    let g = parse(fj_grid("gn", 1, "2"));
    assert_eq!(g["i0"], "1/2");
    assert_eq!(g["rows"][0]["q2_exp"], "1/2");
    assert_eq!(g["rows"][1]["q2_exp"], "3/2");
}

#[test]
fn theta_11_of_gn() {
    let s = parse(theta_an_series("gn", 1, 1, "1"));
    assert_eq!(s["lines"][0], "q^0: 1 X^[-1] + 10 + 1 X^[1]");
    assert_eq!(s["lines"][1], "O(q^1)");
}

#[test]
fn translate_law_holds() {
    for (a, b) in [(0, 1), (1, 0), (1, 1)] {
        let v = parse(theta_translate_law("1/3", "-2/5", a, b, "4"));
        assert_eq!(v["holds"], true, "{v}");
        assert!(v["first_difference"].is_null());
    }
}

#[test]
fn bad_input_is_an_error() {
    assert!(fj_grid("e8", 1, "2").is_err());
    assert!(fj_grid("j744", 40, "2").is_err());
    assert!(fj_grid("j744", 1, "0").is_err());
    assert!(theta_an_series("gn", 0, 1, "2").is_err());
    assert!(theta_translate_law("x", "0", 1, 0, "2").is_err());
}
