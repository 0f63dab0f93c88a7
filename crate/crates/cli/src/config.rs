//! Job configuration: lattice, form and truncation, read from TOML or JSON.

use std::path::{Path, PathBuf};

use borcherds_core::exactmath::{parse_rat, rat, Rat};
use borcherds_core::lattice::{PosDefLattice, WittLattice};
use borcherds_core::modforms::{parse_coefficient_table, validate_form, VectorValuedForm};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub lattice: LatticeSpec,
    pub form: FormSpec,
    #[serde(default)]
    pub truncation: TruncationSpec,
    #[serde(default)]
    pub theta_an: Option<ThetaAnSpec>,
    #[serde(default)]
    pub local: Option<LocalSpec>,
}

/// Either a named `L0` or an explicit Gram matrix, plus the level `N`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default)]
    pub l0: Option<String>,
    #[serde(default)]
    pub gram: Option<Vec<Vec<i64>>>,
    #[serde(default = "one")]
    pub n: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub k: Option<i64>,
    #[serde(default)]
    pub coefficients_file: Option<PathBuf>,
    /// Weight of a tabulated form; defaults to `-rank(L0)/2`.
    #[serde(default)]
    pub weight: Option<String>,
    #[serde(default)]
    pub skip_weight_check: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    #[serde(rename = "K", alias = "grades", default = "default_grades")]
    pub grades: usize,
    #[serde(default = "default_order")]
    pub q1_order: String,
    #[serde(default)]
    pub theta_order: Option<String>,
}

fn default_grades() -> usize {
    3
}

fn default_order() -> String {
    "4".into()
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec {
            grades: default_grades(),
            q1_order: default_order(),
            theta_order: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaAnSpec {
    pub a: u64,
    pub n: u64,
}

/// `x = x0 + lam21 e1 + lam22 e2` data for the local-product identity.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LocalSpec {
    pub x0: Vec<String>,
    #[serde(default = "zero_str")]
    pub lam21: String,
    #[serde(default = "zero_str")]
    pub lam22: String,
}

fn zero_str() -> String {
    "0".into()
}

/// Everything a command needs, built and cross-validated.
pub struct Job {
    pub lattice: WittLattice,
    pub form: VectorValuedForm,
    pub grades: usize,
    pub q1_order: Rat,
    pub theta_order: Rat,
    pub theta_an: Option<(u64, u64)>,
    pub local: Option<(Vec<Rat>, Rat, Rat)>,
}

fn err(location: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Config {
        location: location.into(),
        message: message.to_string(),
    }
}

fn rational(location: &str, s: &str) -> Result<Rat, CliError> {
    parse_rat(s).map_err(|e| err(location, e))
}

fn positive(location: &str, s: &str) -> Result<Rat, CliError> {
    let r = rational(location, s)?;
    if r <= rat(0, 1) {
        return Err(err(location, format!("must be positive, got {r}")));
    }
    Ok(r)
}

/// Parse a config file, choosing JSON for `.json` and TOML otherwise.
pub fn load(path: &Path) -> Result<JobConfig, CliError> {
    let where_ = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| err(&where_, e))?;
    parse(&text, path.extension().and_then(|e| e.to_str()) == Some("json"))
        .map_err(|message| err(&where_, message))
}

pub fn parse(text: &str, json: bool) -> Result<JobConfig, String> {
    if json {
        serde_json::from_str(text).map_err(|e| e.to_string())
    } else {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

fn named_l0(name: &str) -> Option<PosDefLattice> {
    Some(match name {
        "rank0" | "zero" => PosDefLattice::rank_zero(),
        "a1" => PosDefLattice::a1_scaled(1),
        "a2" => PosDefLattice::a2(),
        "e8" => PosDefLattice::e8(),
        "e8_cubed" | "e8^3" => PosDefLattice::e8_cubed(),
        _ => return None,
    })
}

impl JobConfig {
    pub fn build_lattice(&self) -> Result<WittLattice, CliError> {
        let l0 = match (&self.lattice.l0, &self.lattice.gram) {
            (Some(name), None) => named_l0(name).ok_or_else(|| {
                err(
                    "lattice.l0",
                    format!("unknown lattice {name:?} (rank0, a1, a2, e8, e8_cubed)"),
                )
            })?,
            (None, Some(g)) => PosDefLattice::new(g.clone()).map_err(|e| err("lattice.gram", e))?,
            _ => return Err(err("lattice", "give exactly one of l0 and gram")),
        };
        if self.lattice.n == 0 {
            return Err(err("lattice.n", "must be positive"));
        }
        WittLattice::new(l0, self.lattice.n).map_err(|e| err("lattice", e))
    }

    pub fn build_form(&self, lattice: &WittLattice, base_dir: &Path) -> Result<VectorValuedForm, CliError> {
        let f = &self.form;
        let form = match (&f.builtin, &f.coefficients_file) {
            (Some(name), None) => {
                let built = match name.as_str() {
                    "j744" => VectorValuedForm::j744(lattice),
                    "gn_phi01" => VectorValuedForm::gn_phi01(lattice),
                    "eta_power" => {
                        let k = f.k.ok_or_else(|| err("form.k", "eta_power needs k"))?;
                        VectorValuedForm::eta_power(lattice, k)
                    }
                    other => {
                        return Err(err(
                            "form.builtin",
                            format!("unknown form {other:?} (j744, gn_phi01, eta_power)"),
                        ))
                    }
                };
                built.map_err(|e| err("form", e))?
            }
            (None, Some(file)) => {
                let path = base_dir.join(file);
                let where_ = path.display().to_string();
                let text = std::fs::read_to_string(&path).map_err(|e| err(&where_, e))?;
                let (rows, order) = parse_coefficient_table(&text).map_err(|e| err(&where_, e))?;
                let weight = match &f.weight {
                    Some(w) => rational("form.weight", w)?,
                    None => -rat(lattice.l0().rank() as i64, 2),
                };
                for (id, _, _) in &rows {
                    if *id >= lattice.num_cosets() {
                        return Err(err(
                            &where_,
                            format!("coset id {id} out of range (lattice has {})", lattice.num_cosets()),
                        ));
                    }
                }
                let name = file.display().to_string();
                VectorValuedForm::from_table(&name, weight, lattice.num_cosets(), &rows, order)
                    .map_err(|e| err(&where_, e))?
            }
            _ => return Err(err("form", "give exactly one of builtin and coefficients_file")),
        };
        let form = if f.skip_weight_check { form.without_weight_check() } else { form };
        let diag = validate_form(&form, lattice);
        if !diag.is_ok() {
            let lines: Vec<String> = diag
                .issues
                .iter()
                .map(|i| match i.coset {
                    Some(id) => {
                        let c = lattice.coset(id);
                        let lam0: Vec<String> = c.lam0.iter().map(|v| v.to_string()).collect();
                        format!(
                            "{i} [lambda = (lam0 [{}], lam1 {:?}, lam2 {:?})]",
                            lam0.join(", "),
                            c.lam1,
                            c.lam2
                        )
                    }
                    None => i.to_string(),
                })
                .collect();
            return Err(err("form", lines.join("; ")));
        }
        Ok(form)
    }

    /// Build and validate everything; `grades` and `q1_order` override the file.
    pub fn job(&self, base_dir: &Path, grades: Option<usize>, q1_order: Option<&str>) -> Result<Job, CliError> {
        let lattice = self.build_lattice()?;
        let form = self.build_form(&lattice, base_dir)?;
        let q1_order = match q1_order {
            Some(s) => positive("--q1-order", s)?,
            None => positive("truncation.q1_order", &self.truncation.q1_order)?,
        };
        let theta_order = match &self.truncation.theta_order {
            Some(s) => positive("truncation.theta_order", s)?,
            None => q1_order.clone(),
        };
        let theta_an = match &self.theta_an {
            Some(t) if t.a == 0 || t.n == 0 => return Err(err("theta_an", "a and n must be positive")),
            Some(t) => Some((t.a, t.n)),
            None => None,
        };
        let local = match &self.local {
            Some(l) => {
                if l.x0.len() != lattice.l0().rank() {
                    return Err(err(
                        "local.x0",
                        format!("expected {} entries, got {}", lattice.l0().rank(), l.x0.len()),
                    ));
                }
                let x0 = l
                    .x0
                    .iter()
                    .map(|s| rational("local.x0", s))
                    .collect::<Result<Vec<_>, _>>()?;
                Some((x0, rational("local.lam21", &l.lam21)?, rational("local.lam22", &l.lam22)?))
            }
            None => None,
        };
        Ok(Job {
            lattice,
            form,
            grades: grades.unwrap_or(self.truncation.grades),
            q1_order,
            theta_order,
            theta_an,
            local,
        })
    }
}
