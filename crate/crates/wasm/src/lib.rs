//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export takes plain strings and numbers and returns a JSON string, so
//! the page needs nothing beyond the generated glue. The exports are ordinary
//! Rust functions and are tested natively.

use borcherds_core::borcherds::{fj_expansion, theta_an, theta_translate_law_check};
use borcherds_core::exactmath::{parse_rat, JacobiSeries, Rat};
use borcherds_core::lattice::{PosDefLattice, WittLattice};
use borcherds_core::modforms::VectorValuedForm;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper limits that keep a browser tab responsive.
const MAX_GRADES: usize = 6;
const MAX_ORDER: i64 = 12;

#[derive(Debug, Serialize, PartialEq)]
pub struct Grid {
    pub form: String,
    pub i0: String,
    pub q1_exps: Vec<String>,
    pub rows: Vec<GridRow>,
    pub truncated_at: String,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct GridRow {
    pub q2_exp: String,
    /// One cell per entry of `q1_exps`: the character sum at that exponent.
    pub cells: Vec<String>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct SeriesView {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct LawView {
    pub law: String,
    pub holds: bool,
    pub first_difference: Option<String>,
    pub lhs: Vec<String>,
}

fn model(form: &str) -> Result<(WittLattice, VectorValuedForm), String> {
    let (l0, build): (_, fn(&WittLattice) -> borcherds_core::Result<VectorValuedForm>) = match form {
        "j744" => (PosDefLattice::rank_zero(), VectorValuedForm::j744),
        "gn" => (PosDefLattice::a1_scaled(1), VectorValuedForm::gn_phi01),
        other => return Err(format!("unknown form {other:?}; use \"j744\" or \"gn\"")),
    };
    let lattice = WittLattice::unimodular_hyperbolic(l0);
    let f = build(&lattice).map_err(|e| e.to_string())?;
    Ok((lattice, f))
}

fn order(s: &str) -> Result<Rat, String> {
    let r = parse_rat(s).map_err(|e| e.to_string())?;
    if r <= Rat::from_integer(0.into()) || r > Rat::from_integer(MAX_ORDER.into()) {
        return Err(format!("order must lie in (0, {MAX_ORDER}]"));
    }
    Ok(r)
}

fn character(key: &[Rat]) -> String {
    if key.iter().all(|k| k == &Rat::from_integer(0.into())) {
        return String::new();
    }
    let k: Vec<String> = key.iter().map(Rat::to_string).collect();
    format!(" X^[{}]", k.join(","))
}

/// `c1 X^k1 + c2 X^k2 + ...` for the terms of `s` at exponent `exp`.
fn cell(s: &JacobiSeries, exp: &Rat) -> String {
    let parts: Vec<String> = s
        .terms()
        .into_iter()
        .filter(|t| &t.exp == exp)
        .map(|t| format!("{}{}", t.coeff, character(&t.key)))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn lines(s: &JacobiSeries) -> Vec<String> {
    let mut out: Vec<String> = s
        .exponents()
        .iter()
        .map(|e| format!("q^{e}: {}", cell(s, e)))
        .collect();
    if let Some(t) = s.trunc() {
        out.push(format!("O(q^{t})"));
    }
    out
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Coefficient grid of `Psi` for `"j744"` or `"gn"` through `grades`, below `q1^q1_order`.
#[wasm_bindgen]
pub fn fj_grid(form: &str, grades: usize, q1_order: &str) -> Result<String, String> {
    if grades > MAX_GRADES {
        return Err(format!("at most {MAX_GRADES} grades"));
    }
    let (l, f) = model(form)?;
    let order = order(q1_order)?;
    let r = fj_expansion(&f, &l, grades, &order).map_err(|e| e.to_string())?;
    let mut exps: Vec<Rat> = r.psi.grades.iter().flat_map(|g| g.exponents()).collect();
    exps.sort();
    exps.dedup();
    let rows = r
        .psi
        .grades
        .iter()
        .enumerate()
        .map(|(k, g)| GridRow {
            q2_exp: (&r.psi.offset + Rat::from_integer((k as i64).into())).to_string(),
            cells: exps.iter().map(|e| cell(g, e)).collect(),
        })
        .collect();
    Ok(to_json(&Grid {
        form: form.into(),
        i0: r.i0.to_string(),
        q1_exps: exps.iter().map(Rat::to_string).collect(),
        rows,
        truncated_at: order.to_string(),
    }))
}

#[wasm_bindgen]
pub fn theta_an_series(form: &str, a: u32, n: u32, q1_order: &str) -> Result<String, String> {
    if a == 0 || n == 0 {
        return Err("a and n must be positive".into());
    }
    let (l, f) = model(form)?;
    let order = order(q1_order)?;
    let s = theta_an(&f, &l, a.into(), n.into(), &order).map_err(|e| e.to_string())?;
    Ok(to_json(&SeriesView {
        title: format!("Theta_{{{a},{n}}} for {form}"),
        lines: lines(&s),
    }))
}

/// Compare `Theta1[eta + l]` with the law's multiple of `Theta1[eta]` for
/// `eta = s1 tau + s2` and `l = a tau + b`.
#[wasm_bindgen]
pub fn theta_translate_law(s1: &str, s2: &str, a: i32, b: i32, q_order: &str) -> Result<String, String> {
    let s1 = parse_rat(s1).map_err(|e| e.to_string())?;
    let s2 = parse_rat(s2).map_err(|e| e.to_string())?;
    let order = order(q_order)?;
    let c = theta_translate_law_check(&s1, &s2, a.into(), b.into(), &order);
    Ok(to_json(&LawView {
        law: c.name.clone(),
        holds: c.holds(),
        first_difference: c.first_difference.as_ref().map(|d| d.to_string()),
        lhs: lines(&c.lhs),
    }))
}
