use borcherds_core::borcherds::{
    choose_chamber, compute_i0, fj_expansion, local_product_identity, product_expansion, psi0,
    theta_an, translation_law_check, vector_system_check, I0Route, LawCheck,
};
use borcherds_core::exactmath::{int, Rat};
use borcherds_core::modforms::{theta1_product, theta1_sum};
use borcherds_core::weyl::{borcherds_side_product, borcherds_unit, select_chamber_witness};
use borcherds_core::Error;

use crate::config::Job;
use crate::report::*;
use crate::{CliError, Command};

pub fn run(command: Command, job: &Job) -> Result<Report, CliError> {
    let form = job.form.name().to_string();
    let (f, l) = (&job.form, &job.lattice);
    Ok(match command {
        Command::Expand | Command::Product => {
            let fj = fj_expansion(f, l, job.grades, &job.q1_order)?;
            let (name, r) = if matches!(command, Command::Product) {
                ("product", product_expansion(f, l, &fj.chamber, job.grades, &job.q1_order)?)
            } else {
                ("expand", fj)
            };
            Report::Expansion(ExpansionReport {
                command: name.into(),
                form,
                i0: r.i0.to_string(),
                phase: r.phase.clone(),
                grades: job.grades,
                q1_order: job.q1_order.to_string(),
                psi0: r.psi.grades[0].clone(),
                expansion: r.psi,
            })
        }
        Command::I0 => {
            let s = compute_i0(f, l, I0Route::SigmaSum)?;
            let e = compute_i0(f, l, I0Route::E2ConstantTerm)?;
            Report::I0(I0Report {
                command: "i0".into(),
                form,
                i0: s.to_string(),
                sigma_sum: s.to_string(),
                e2_constant_term: e.to_string(),
            })
        }
        Command::ThetaAn => {
            let (a, n) = job.theta_an.ok_or_else(|| CliError::Config {
                location: "theta_an".into(),
                message: "theta-an needs a [theta_an] section with a and n".into(),
            })?;
            Report::ThetaAn(ThetaAnReport {
                command: "theta-an".into(),
                form,
                a,
                n,
                theta_order: job.theta_order.to_string(),
                series: theta_an(f, l, a, n, &job.theta_order)?,
            })
        }
        Command::Psi0 => {
            let chamber = choose_chamber(f, l)?;
            let (series, phase) = psi0(f, l, &chamber, &job.q1_order)?;
            Report::Psi0(Psi0Report {
                command: "psi0".into(),
                form,
                phase,
                psi0: series,
            })
        }
        Command::Weyl => {
            let chamber = choose_chamber(f, l)?;
            let w = select_chamber_witness(f, l, &chamber)?;
            let product = borcherds_side_product(f, l, &w, job.grades, &job.q1_order)?;
            let strs = |v: &[Rat]| v.iter().map(Rat::to_string).collect::<Vec<_>>();
            Report::Weyl(WeylReport {
                command: "weyl".into(),
                form,
                m_max: w.m_max.to_string(),
                b: w.b.to_string(),
                unit: borcherds_unit(&w.b),
                witness_y2: w.witness_y.0.to_string(),
                witness_y0: strs(&w.witness_y.1),
                witness_y1: w.witness_y.2.to_string(),
                rho00: VectorJson {
                    e1: w.rho00.e1.to_string(),
                    x0: strs(&w.rho00.x0),
                    e1p: w.rho00.e1p.to_string(),
                },
                product,
            })
        }
        Command::Check => Report::Check(check_suite(job)),
    })
}

fn entry(name: &str, pass: bool, detail: String, diff: Option<DiffReport>) -> CheckEntry {
    CheckEntry {
        name: name.into(),
        status: if pass { Status::Pass } else { Status::Fail },
        detail,
        first_difference: diff,
    }
}

fn skip(name: &str, detail: impl Into<String>) -> CheckEntry {
    CheckEntry {
        name: name.into(),
        status: Status::Skip,
        detail: detail.into(),
        first_difference: None,
    }
}

/// Run one check; unsupported inputs and missing coefficients skip it, other
/// errors fail it.
fn attempt(name: &str, f: impl FnOnce() -> Result<CheckEntry, Error>) -> CheckEntry {
    match f() {
        Ok(e) => e,
        Err(Error::Unsupported(m)) => skip(name, format!("not applicable: {m}")),
        Err(e @ Error::CoefficientUnavailable { .. }) => skip(name, format!("input too short: {e}")),
        Err(e) => entry(name, false, e.to_string(), None),
    }
}

fn law_entry(name: &str, checks: &[LawCheck]) -> CheckEntry {
    match checks.iter().find(|c| !c.holds()) {
        None => entry(name, true, format!("{} identities hold", checks.len()), None),
        Some(c) => entry(
            name,
            false,
            c.name.clone(),
            c.first_difference.as_ref().map(|d| DiffReport::series(d, None)),
        ),
    }
}

pub fn check_suite(job: &Job) -> CheckReport {
    let (f, l) = (&job.form, &job.lattice);
    let (k, order) = (job.grades, &job.q1_order);
    let rank = l.l0().rank();
    let mut checks = Vec::new();

    checks.push(attempt("I0 routes", || {
        let s = compute_i0(f, l, I0Route::SigmaSum)?;
        let e = compute_i0(f, l, I0Route::E2ConstantTerm)?;
        let integral = (&s * int(24)).is_integer();
        Ok(entry(
            "I0 routes",
            s == e && integral,
            format!("sigma sum {s}, E2 constant term {e}"),
            None,
        ))
    }));

    let fj = fj_expansion(f, l, k, order);
    checks.push(attempt("route equality", || {
        let fj = fj.clone()?;
        let p = product_expansion(f, l, &fj.chamber, k, order)?;
        let diff = DiffReport::graded(&fj.psi, &p.psi);
        let same_phase = fj.phase == p.phase;
        Ok(entry(
            "route equality",
            diff.is_none() && same_phase,
            format!("grades 0..={k} below q1^{order}, phases {} and {}", fj.phase, p.phase),
            diff,
        ))
    }));

    checks.push(attempt("vector system", || {
        let v = vector_system_check(f, l)?;
        let detail = if v.equal {
            format!("2 I0 G0 equals the root second moment ({rank} x {rank})")
        } else {
            let d: Vec<String> = v
                .difference()
                .iter()
                .map(|row| row.iter().map(Rat::to_string).collect::<Vec<_>>().join(" "))
                .collect();
            format!("lhs - rhs = [{}]", d.join("; "))
        };
        Ok(entry("vector system", v.equal, detail, None))
    }));

    checks.push(if rank == 0 {
        skip("translation law", "L0 has rank 0")
    } else {
        attempt("translation law", || {
            let mut laws = Vec::new();
            for (a, n) in [(1, 1), (1, 2), (2, 1)] {
                for i in 0..rank {
                    for s in [1, -1] {
                        let mut b1 = vec![0; rank];
                        b1[i] = s;
                        laws.push(translation_law_check(f, l, a, n, &b1, &vec![0; rank], &job.theta_order)?);
                    }
                }
            }
            Ok(law_entry("translation law", &laws))
        })
    });

    checks.push({
        let o = &job.theta_order;
        let s = theta1_sum(o);
        match theta1_product(o) {
            Ok(p) => {
                let d = s.first_difference(&p);
                entry(
                    "theta1 sum = product",
                    d.is_none(),
                    format!("below q^{o}"),
                    d.map(|d| DiffReport::series(&d, None)),
                )
            }
            Err(e) => entry("theta1 sum = product", false, e.to_string(), None),
        }
    });

    checks.push(if rank == 0 {
        skip("local product identity", "L0 has rank 0")
    } else {
        attempt("local product identity", || {
            let cases: Vec<(Vec<Rat>, Rat, Rat)> = match &job.local {
                Some(x) => vec![x.clone()],
                None => choose_chamber(f, l)?
                    .positive_roots()
                    .take(4)
                    .map(|r| (r.x0.clone(), int(0), int(0)))
                    .collect(),
            };
            if cases.is_empty() {
                return Ok(skip("local product identity", "no roots and no [local] section"));
            }
            let laws = cases
                .iter()
                .map(|(x0, a, b)| local_product_identity(l, x0, a, b, &job.theta_order))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(law_entry("local product identity", &laws))
        })
    });

    checks.push(attempt("Weyl comparison", || {
        let fj = fj.clone()?;
        let w = select_chamber_witness(f, l, &fj.chamber)?;
        let p = borcherds_side_product(f, l, &w, k, order)?;
        Ok(match p.unit_ratio(&fj.psi) {
            Some(u) => entry(
                "Weyl comparison",
                true,
                format!("classical product = ({u}) x expansion through grade {k}"),
                None,
            ),
            None => entry(
                "Weyl comparison",
                false,
                "classical product is not a unit multiple of the expansion".into(),
                DiffReport::graded(&p, &fj.psi),
            ),
        })
    }));

    let pass = checks.iter().all(|c| c.status != Status::Fail);
    CheckReport {
        command: "check".into(),
        form: f.name().to_string(),
        pass,
        checks,
    }
}
