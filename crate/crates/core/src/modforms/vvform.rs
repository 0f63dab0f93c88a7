//! Vector-valued input forms indexed by the discriminant group.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::rational::{ceil_i64, frac, int, is_integer, parse_rat, rat, Rat};
use crate::lattice::{DiscCoset, PosDefLattice, WittLattice};

use super::classical::{classical_series, eta_power, Classical, QSeries};
use super::phi01::phi01_components;

/// Produces one component per coset, each known below the requested order.
pub type ComponentGenerator = dyn Fn(&Rat) -> Result<Vec<QSeries>> + Send + Sync;

#[derive(Clone)]
enum Source {
    /// Rows per coset; `order = None` means the table is complete.
    Table {
        rows: Vec<BTreeMap<Rat, Rat>>,
        order: Option<Rat>,
    },
    Generator(Arc<ComponentGenerator>),
}

struct Cache {
    order: Rat,
    comps: Vec<QSeries>,
}

/// `F = sum_lam F_lam phi_lam` with exact coefficients `c_lam(m)`.
#[derive(Clone)]
pub struct VectorValuedForm {
    name: String,
    weight: Rat,
    num_cosets: usize,
    check_weight: bool,
    source: Source,
    principal: Vec<(usize, Rat, Rat)>,
    cache: Arc<RwLock<Option<Cache>>>,
}

impl fmt::Debug for VectorValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorValuedForm")
            .field("name", &self.name)
            .field("weight", &self.weight)
            .field("num_cosets", &self.num_cosets)
            .field("principal", &self.principal)
            .finish()
    }
}

impl VectorValuedForm {
    /// A form whose components come from a generator.
    pub fn from_generator(
        name: impl Into<String>,
        weight: Rat,
        num_cosets: usize,
        generator: Arc<ComponentGenerator>,
    ) -> Result<Self> {
        let mut f = VectorValuedForm {
            name: name.into(),
            weight,
            num_cosets,
            check_weight: true,
            source: Source::Generator(generator),
            principal: Vec::new(),
            cache: Arc::new(RwLock::new(None)),
        };
        f.ensure(&int(1))?;
        let mut principal = Vec::new();
        for id in 0..num_cosets {
            for (m, c) in f.support(id, &Rat::zero())? {
                principal.push((id, m, c));
            }
        }
        f.principal = principal;
        Ok(f)
    }

    /// A form given by a finite table of `(coset id, m, c)` rows.
    pub fn from_table(
        name: impl Into<String>,
        weight: Rat,
        num_cosets: usize,
        entries: &[(usize, Rat, Rat)],
        order: Option<Rat>,
    ) -> Result<Self> {
        let mut rows = vec![BTreeMap::new(); num_cosets];
        for (id, m, c) in entries {
            if *id >= num_cosets {
                return Err(Error::InvalidForm(format!(
                    "coset id {id} out of range (lattice has {num_cosets} cosets)"
                )));
            }
            if let Some(o) = &order {
                if m >= o {
                    return Err(Error::InvalidForm(format!(
                        "row at m = {m} lies beyond the declared order {o}"
                    )));
                }
            }
            if !c.is_zero() {
                *rows[*id].entry(m.clone()).or_insert_with(Rat::zero) += c;
            }
        }
        let principal = rows
            .iter()
            .enumerate()
            .flat_map(|(id, r)| {
                r.iter()
                    .filter(|(m, c)| m.is_negative() && !c.is_zero())
                    .map(move |(m, c)| (id, m.clone(), c.clone()))
            })
            .collect();
        Ok(VectorValuedForm {
            name: name.into(),
            weight,
            num_cosets,
            check_weight: true,
            source: Source::Table { rows, order },
            principal,
            cache: Arc::new(RwLock::new(None)),
        })
    }

    /// A scalar form placed on the zero coset of `lattice`.
    pub fn on_zero_coset<G>(
        name: impl Into<String>,
        lattice: &WittLattice,
        weight: Rat,
        scalar: G,
    ) -> Result<Self>
    where
        G: Fn(&Rat) -> Result<QSeries> + Send + Sync + 'static,
    {
        let n = lattice.num_cosets();
        let zero = lattice.zero_id();
        Self::from_generator(
            name,
            weight,
            n,
            Arc::new(move |order: &Rat| {
                let mut v = vec![QSeries::big_o(0, order); n];
                v[zero] = scalar(order)?;
                Ok(v)
            }),
        )
    }

    /// `j - 744` on the zero coset, weight 0.
    pub fn j744(lattice: &WittLattice) -> Result<Self> {
        Self::on_zero_coset("j744", lattice, Rat::zero(), |o| {
            classical_series(Classical::J744, o)
        })
    }

    /// `eta^k` on the zero coset, weight `k/2`.
    pub fn eta_power(lattice: &WittLattice, k: i64) -> Result<Self> {
        Self::on_zero_coset(format!("eta^{k}"), lattice, rat(k, 2), move |o| eta_power(k, o))
    }

    /// The theta decomposition of `phi_{0,1}` over `<2>`, weight `-1/2`.
    pub fn gn_phi01(lattice: &WittLattice) -> Result<Self> {
        if lattice.l0() != &PosDefLattice::a1_scaled(1) || lattice.n() != 1 {
            return Err(Error::InvalidForm(
                "gn_phi01 needs L0 = <2> and N = 1".into(),
            ));
        }
        let half = lattice
            .find(&[rat(1, 2)], [0, 0], [0, 0])
            .expect("coset 1/2 exists");
        let zero = lattice.zero_id();
        Self::from_generator(
            "gn_phi01",
            rat(-1, 2),
            2,
            Arc::new(move |order: &Rat| {
                let (f0, f1) = phi01_components(order)?;
                let mut v = vec![QSeries::zero(0); 2];
                v[zero] = f0;
                v[half] = f1;
                Ok(v)
            }),
        )
    }

    /// The zero form.
    pub fn zero(lattice: &WittLattice, weight: Rat) -> Result<Self> {
        Self::from_table("zero", weight, lattice.num_cosets(), &[], None)
    }

    /// Lift a form over `base` (with `N = 1`) to `target` with the same `L0`:
    /// `c_lam = c_{lam0}` on cosets accepted by `keep`, zero elsewhere.
    pub fn induce<P>(
        &self,
        base: &WittLattice,
        target: &WittLattice,
        keep: P,
    ) -> Result<Self>
    where
        P: Fn(&DiscCoset) -> bool,
    {
        if base.n() != 1 || base.l0() != target.l0() {
            return Err(Error::InvalidForm(
                "induction needs N = 1 on the base and a common L0".into(),
            ));
        }
        let map: Vec<Option<usize>> = target
            .cosets()
            .iter()
            .map(|c| {
                if keep(c) {
                    base.find(&c.lam0, [0, 0], [0, 0])
                } else {
                    None
                }
            })
            .collect();
        let src = self.clone();
        Self::from_generator(
            format!("{}^induced", self.name),
            self.weight.clone(),
            target.num_cosets(),
            Arc::new(move |order: &Rat| {
                src.ensure(order)?;
                let comps = src.components(order)?;
                Ok(map
                    .iter()
                    .map(|m| match m {
                        Some(id) => comps[*id].clone(),
                        None => QSeries::big_o(0, order),
                    })
                    .collect())
            }),
        )
    }

    /// Skip the weight check in `validate_form` (synthetic test forms).
    pub fn without_weight_check(mut self) -> Self {
        self.check_weight = false;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn num_cosets(&self) -> usize {
        self.num_cosets
    }

    /// Entries `(coset id, m, c)` with `m < 0`.
    pub fn principal_part(&self) -> &[(usize, Rat, Rat)] {
        &self.principal
    }

    /// Largest `-m` in the principal part.
    pub fn m_max(&self) -> Option<Rat> {
        self.principal.iter().map(|(_, m, _)| -m).max()
    }

    /// Order through which coefficients are available without error, if bounded.
    pub fn known_order(&self) -> Option<Rat> {
        match &self.source {
            Source::Table { order, .. } => order.clone(),
            Source::Generator(_) => None,
        }
    }

    fn ensure(&self, order: &Rat) -> Result<()> {
        let Source::Generator(gen) = &self.source else {
            return Ok(());
        };
        {
            let guard = self.cache.read().expect("form cache poisoned");
            if guard.as_ref().is_some_and(|c| &c.order >= order) {
                return Ok(());
            }
        }
        let mut guard = self.cache.write().expect("form cache poisoned");
        let current = guard.as_ref().map(|c| c.order.clone());
        if current.as_ref().is_some_and(|o| o >= order) {
            return Ok(());
        }
        let doubled = current.map_or(int(2), |o| int(2) * o.max(int(1)));
        let target = int(ceil_i64(order).max(1)).max(doubled);
        let comps = gen(&target)?;
        if comps.len() != self.num_cosets {
            return Err(Error::InvalidForm(format!(
                "generator produced {} components for {} cosets",
                comps.len(),
                self.num_cosets
            )));
        }
        *guard = Some(Cache {
            order: target,
            comps,
        });
        Ok(())
    }

    /// All components, known below `order`.
    pub fn components(&self, order: &Rat) -> Result<Vec<QSeries>> {
        match &self.source {
            Source::Table { rows, order: known } => {
                if let Some(k) = known {
                    if order > k {
                        return Err(Error::CoefficientUnavailable {
                            coset: 0,
                            m: order.to_string(),
                            order: k.to_string(),
                        });
                    }
                }
                Ok(rows
                    .iter()
                    .map(|r| {
                        QSeries::from_q_terms(
                            r.iter().map(|(m, c)| (m.clone(), c.clone())),
                            Some(order.clone()),
                        )
                    })
                    .collect())
            }
            Source::Generator(_) => {
                self.ensure(order)?;
                let guard = self.cache.read().expect("form cache poisoned");
                let cache = guard.as_ref().expect("cache filled by ensure");
                Ok(cache.comps.iter().map(|c| c.truncate(order)).collect())
            }
        }
    }

    /// `c_id(m)`.
    pub fn coefficient(&self, id: usize, m: &Rat) -> Result<Rat> {
        if id >= self.num_cosets {
            return Err(Error::InvalidForm(format!("coset id {id} out of range")));
        }
        match &self.source {
            Source::Table { rows, order } => {
                if order.as_ref().is_some_and(|o| m >= o) {
                    return Err(Error::CoefficientUnavailable {
                        coset: id,
                        m: m.to_string(),
                        order: order.as_ref().expect("checked").to_string(),
                    });
                }
                Ok(rows[id].get(m).cloned().unwrap_or_else(Rat::zero))
            }
            Source::Generator(_) => {
                self.ensure(&(m + int(1)))?;
                let guard = self.cache.read().expect("form cache poisoned");
                let cache = guard.as_ref().expect("cache filled by ensure");
                Ok(cache.comps[id].q_coefficient_rat(m))
            }
        }
    }

    /// Nonzero `(m, c_id(m))` with `m < order`, increasing in `m`.
    pub fn support(&self, id: usize, order: &Rat) -> Result<Vec<(Rat, Rat)>> {
        let comps = self.components(order)?;
        let comp = comps
            .get(id)
            .ok_or_else(|| Error::InvalidForm(format!("coset id {id} out of range")))?;
        Ok(comp
            .terms()
            .into_iter()
            .map(|t| {
                let c = t
                    .coeff
                    .as_rational()
                    .expect("input forms have rational coefficients");
                (t.exp, c)
            })
            .collect())
    }
}

/// The kind of a failed validation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IssueKind {
    CosetCount,
    Weight,
    Integrality,
    Congruence,
    Symmetry,
    Unavailable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Issue {
    pub kind: IssueKind,
    pub coset: Option<usize>,
    pub m: Option<Rat>,
    pub detail: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(c) = self.coset {
            write!(f, " at coset {c}")?;
        }
        if let Some(m) = &self.m {
            write!(f, ", m = {m}")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Outcome of `validate_form`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub issues: Vec<Issue>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            return Ok(());
        }
        let lines: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
        Err(Error::Validation(lines.join("; ")))
    }
}

/// Coefficients below this order are checked by `validate_form`.
pub const VALIDATION_ORDER: i64 = 3;

/// Check weight, integrality on `m <= 0`, `m + Q(lam) in Z`, and `c_lam = c_{-lam}`.
pub fn validate_form(form: &VectorValuedForm, lattice: &WittLattice) -> Diagnostics {
    let mut issues = Vec::new();
    if form.num_cosets() != lattice.num_cosets() {
        issues.push(Issue {
            kind: IssueKind::CosetCount,
            coset: None,
            m: None,
            detail: format!(
                "form has {} components, lattice has {} cosets",
                form.num_cosets(),
                lattice.num_cosets()
            ),
        });
        return Diagnostics { issues };
    }
    let expected = -rat(lattice.l0().rank() as i64, 2);
    if form.check_weight && form.weight() != &expected {
        issues.push(Issue {
            kind: IssueKind::Weight,
            coset: None,
            m: None,
            detail: format!("weight {} but the lattice requires {}", form.weight(), expected),
        });
    }
    let order = match form.known_order() {
        Some(o) => o.min(int(VALIDATION_ORDER)),
        None => int(VALIDATION_ORDER),
    };
    let comps = match form.components(&order) {
        Ok(c) => c,
        Err(e) => {
            issues.push(Issue {
                kind: IssueKind::Unavailable,
                coset: None,
                m: None,
                detail: e.to_string(),
            });
            return Diagnostics { issues };
        }
    };
    for (id, comp) in comps.iter().enumerate() {
        let q = lattice.q_value(id);
        for t in comp.terms() {
            let Some(c) = t.coeff.as_rational() else {
                issues.push(Issue {
                    kind: IssueKind::Integrality,
                    coset: Some(id),
                    m: Some(t.exp.clone()),
                    detail: format!("coefficient {} is not rational", t.coeff),
                });
                continue;
            };
            if !t.exp.is_positive() && !is_integer(&c) {
                issues.push(Issue {
                    kind: IssueKind::Integrality,
                    coset: Some(id),
                    m: Some(t.exp.clone()),
                    detail: format!("coefficient {c} is not an integer"),
                });
            }
            if !frac(&(&t.exp + &q)).is_zero() {
                issues.push(Issue {
                    kind: IssueKind::Congruence,
                    coset: Some(id),
                    m: Some(t.exp.clone()),
                    detail: format!("m + Q(lam) = {} is not integral", &t.exp + &q),
                });
            }
        }
        let neg = lattice.negate(id);
        if neg > id {
            if let Some(d) = comp.first_difference(&comps[neg]) {
                issues.push(Issue {
                    kind: IssueKind::Symmetry,
                    coset: Some(id),
                    m: Some(d.exp.clone()),
                    detail: format!(
                        "c_lam(m) = {} but c_(-lam)(m) = {} (-lam is coset {neg})",
                        d.left, d.right
                    ),
                });
            }
        }
    }
    Diagnostics { issues }
}

/// Parse coefficient rows `coset_id,m,c`; `#` starts a comment and an
/// optional `# order: R` line bounds the table.
pub fn parse_coefficient_table(text: &str) -> Result<(Vec<(usize, Rat, Rat)>, Option<Rat>)> {
    let mut rows = Vec::new();
    let mut order = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(o) = rest.trim().strip_prefix("order:") {
                order = Some(parse_rat(o.trim())?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "line {}: expected 'coset_id,m,c', got '{line}'",
                ln + 1
            )));
        }
        let id = fields[0]
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("line {}: coset id: {e}", ln + 1)))?;
        let m = parse_rat(fields[1]).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
        let c = parse_rat(fields[2]).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1)))?;
        rows.push((id, m, c));
    }
    Ok((rows, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank0() -> WittLattice {
        WittLattice::unimodular_hyperbolic(PosDefLattice::rank_zero())
    }

    #[test]
    fn j744_validates() {
        let l = rank0();
        let f = VectorValuedForm::j744(&l).unwrap();
        assert!(validate_form(&f, &l).is_ok());
        assert_eq!(f.principal_part(), &[(0, int(-1), int(1))]);
        assert_eq!(f.coefficient(0, &int(5)).unwrap(), int(333202640600i64));
    }

    #[test]
    fn wrong_weight_fails() {
        let l = rank0();
        let (rows, _) = parse_coefficient_table("0,-1,1\n0,1,196884\n").unwrap();
        let f = VectorValuedForm::from_table("t", int(1), 1, &rows, Some(int(2))).unwrap();
        let d = validate_form(&f, &l);
        assert!(d.has(IssueKind::Weight));
        assert!(f.coefficient(0, &int(2)).is_err());
    }

    #[test]
    fn phi01_validates() {
        let l = WittLattice::unimodular_hyperbolic(PosDefLattice::a1_scaled(1));
        let f = VectorValuedForm::gn_phi01(&l).unwrap();
        assert!(validate_form(&f, &l).is_ok());
        assert_eq!(f.m_max(), Some(rat(1, 4)));
    }

    #[test]
    fn congruence_violation() {
        let l = WittLattice::unimodular_hyperbolic(PosDefLattice::a1_scaled(1));
        let f = VectorValuedForm::from_table("t", rat(-1, 2), 2, &[(1, int(-1), int(1))], None)
            .unwrap();
        assert!(validate_form(&f, &l).has(IssueKind::Congruence));
    }
}
