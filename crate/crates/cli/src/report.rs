//! Command results, serialized as JSON or rendered as aligned text.

use std::fmt::Write as _;

use borcherds_core::exactmath::{CycRational, Difference, GradedFJSeries, JacobiSeries, Rat};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub command: String,
    pub form: String,
    pub i0: String,
    pub phase: CycRational,
    pub grades: usize,
    pub q1_order: String,
    pub psi0: JacobiSeries,
    pub expansion: GradedFJSeries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct I0Report {
    pub command: String,
    pub form: String,
    pub i0: String,
    pub sigma_sum: String,
    pub e2_constant_term: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaAnReport {
    pub command: String,
    pub form: String,
    pub a: u64,
    pub n: u64,
    pub theta_order: String,
    pub series: JacobiSeries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Psi0Report {
    pub command: String,
    pub form: String,
    pub phase: CycRational,
    pub psi0: JacobiSeries,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub e1: String,
    pub x0: Vec<String>,
    pub e1p: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub command: String,
    pub form: String,
    pub m_max: String,
    pub b: String,
    pub unit: CycRational,
    /// `y = -y2 e1 + y0 + y1 e1'`.
    pub witness_y2: String,
    pub witness_y0: Vec<String>,
    pub witness_y1: String,
    pub rho00: VectorJson,
    pub product: GradedFJSeries,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Where two series first differ; `grade` and `q1_exp` are absent when the
/// `q2` offsets already disagree (then `left`/`right` are the offsets).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffReport {
    pub grade: Option<usize>,
    pub q1_exp: Option<String>,
    pub key: Vec<String>,
    pub left: CycRational,
    pub right: CycRational,
}

impl DiffReport {
    pub fn series(d: &Difference, grade: Option<usize>) -> Self {
        DiffReport {
            grade,
            q1_exp: Some(d.exp.to_string()),
            key: d.key.iter().map(Rat::to_string).collect(),
            left: d.left.clone(),
            right: d.right.clone(),
        }
    }

    pub fn graded(a: &GradedFJSeries, b: &GradedFJSeries) -> Option<Self> {
        if a.offset != b.offset {
            return Some(DiffReport {
                grade: None,
                q1_exp: None,
                key: Vec::new(),
                left: CycRational::from_rat(a.offset.clone()),
                right: CycRational::from_rat(b.offset.clone()),
            });
        }
        a.first_difference(b).map(|(k, d)| Self::series(&d, Some(k)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub first_difference: Option<DiffReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub form: String,
    pub pass: bool,
    pub checks: Vec<CheckEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Expansion(ExpansionReport),
    I0(I0Report),
    ThetaAn(ThetaAnReport),
    Psi0(Psi0Report),
    Weyl(WeylReport),
    Check(CheckReport),
}

impl Report {
    /// Whether the run verified everything it claims; drives exit code 1.
    pub fn ok(&self) -> bool {
        match self {
            Report::I0(r) => r.sigma_sum == r.e2_constant_term,
            Report::Check(r) => r.pass,
            _ => true,
        }
    }

    pub fn to_json(&self) -> String {
        borcherds_core::exactmath::json::to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Expansion(r) => {
                let _ = writeln!(s, "{} {}  K = {}  q1 order {}", r.command, r.form, r.grades, r.q1_order);
                let _ = writeln!(s, "I0 = {}", r.i0);
                let _ = writeln!(s, "phase = {}", r.phase);
                s.push_str(&render_graded(&r.expansion));
            }
            Report::I0(r) => {
                let _ = writeln!(s, "I0 = {}", r.i0);
                let _ = writeln!(s, "sigma sum = {}", r.sigma_sum);
                let _ = writeln!(s, "E2 constant term = {}", r.e2_constant_term);
            }
            Report::ThetaAn(r) => {
                let _ = writeln!(s, "Theta_{{{},{}}} for {}", r.a, r.n, r.form);
                s.push_str(&render_series(&r.series, ""));
            }
            Report::Psi0(r) => {
                let _ = writeln!(s, "Psi0 for {}  phase = {}", r.form, r.phase);
                s.push_str(&render_series(&r.psi0, ""));
            }
            Report::Weyl(r) => {
                let _ = writeln!(s, "m_max = {}  B = {}  unit = {}", r.m_max, r.b, r.unit);
                let _ = writeln!(
                    s,
                    "witness y = -{} e1 + [{}] + {} e1'",
                    r.witness_y2,
                    r.witness_y0.join(", "),
                    r.witness_y1
                );
                let _ = writeln!(
                    s,
                    "rho00 = {} e1 + [{}] + {} e1'",
                    r.rho00.e1,
                    r.rho00.x0.join(", "),
                    r.rho00.e1p
                );
                s.push_str(&render_graded(&r.product));
            }
            Report::Check(r) => {
                for c in &r.checks {
                    let tag = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skip => "SKIP",
                    };
                    let _ = writeln!(s, "{tag} {}: {}", c.name, c.detail);
                    if let Some(d) = &c.first_difference {
                        let _ = writeln!(s, "     first difference: {}", render_diff(d));
                    }
                }
                let _ = writeln!(s, "{}", if r.pass { "all checks passed" } else { "some checks failed" });
            }
        }
        s
    }
}

pub fn render_diff(d: &DiffReport) -> String {
    match (&d.grade, &d.q1_exp) {
        (Some(g), Some(e)) => format!(
            "grade {g}, q1^{e}, key [{}]: {} vs {}",
            d.key.join(", "),
            d.left,
            d.right
        ),
        (None, Some(e)) => format!("q1^{e}, key [{}]: {} vs {}", d.key.join(", "), d.left, d.right),
        _ => format!("q2 offset {} vs {}", d.left, d.right),
    }
}

/// `q2^{offset + k}` blocks, each holding the q1-sorted rows of grade `k`.
pub fn render_graded(g: &GradedFJSeries) -> String {
    let mut s = String::new();
    for (k, grade) in g.grades.iter().enumerate() {
        let e = &g.offset + Rat::from_integer((k as i64).into());
        let _ = writeln!(s, "q2^{e}:");
        s.push_str(&render_series(grade, "  "));
    }
    s
}

/// One line per q1-exponent; characters in lexicographic key order.
pub fn render_series(series: &JacobiSeries, indent: &str) -> String {
    let mut s = String::new();
    let terms = series.terms();
    let mut i = 0;
    while i < terms.len() {
        let exp = &terms[i].exp;
        let mut parts = Vec::new();
        while i < terms.len() && &terms[i].exp == exp {
            let t = &terms[i];
            if t.key.is_empty() {
                parts.push(format!("{}", t.coeff));
            } else {
                let k: Vec<String> = t.key.iter().map(Rat::to_string).collect();
                parts.push(format!("{} X^[{}]", t.coeff, k.join(",")));
            }
            i += 1;
        }
        let _ = writeln!(s, "{indent}q1^{exp}: {}", parts.join(" + "));
    }
    match series.trunc() {
        Some(t) => {
            let _ = writeln!(s, "{indent}O(q1^{t})");
        }
        None if terms.is_empty() => {
            let _ = writeln!(s, "{indent}0");
        }
        None => {}
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use borcherds_core::exactmath::{int, rat};

    fn mono(e: i64, k: i64, c: i64) -> JacobiSeries {
        JacobiSeries::monomial(1, &int(e), &[rat(k, 2)], CycRational::from_int(c))
    }

    #[test]
    fn first_difference_names_grade_exponent_and_key() {
        let a = GradedFJSeries::new(int(0), vec![mono(0, 0, 1), mono(1, 1, 3)]);
        let b = GradedFJSeries::new(int(0), vec![mono(0, 0, 1), mono(1, 1, 4)]);
        let d = DiffReport::graded(&a, &b).unwrap();
        assert_eq!(render_diff(&d), "grade 1, q1^1, key [1/2]: 3 vs 4");
        let c = GradedFJSeries::new(rat(1, 2), vec![mono(0, 0, 1)]);
        assert_eq!(render_diff(&DiffReport::graded(&a, &c).unwrap()), "q2 offset 0 vs 1/2");
        assert!(DiffReport::graded(&a, &a).is_none());
    }

    #[test]
    fn text_blocks_are_sorted() {
        let s = mono(1, -1, 2)
            .checked_add(&mono(0, 1, 1))
            .unwrap()
            .checked_add(&mono(1, 1, -2))
            .unwrap();
        let g = GradedFJSeries::new(int(-1), vec![s.truncate(&int(2))]);
        assert_eq!(render_graded(&g), "q2^-1:\n  q1^0: 1 X^[1/2]\n  q1^1: 2 X^[-1/2] + -2 X^[1/2]\n  O(q1^2)\n");
    }
}
