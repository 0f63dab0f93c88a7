use num_traits::Zero;

use crate::error::Result;
use crate::exactmath::rational::{frac, int, Rat};
use crate::exactmath::{CycRational, JacobiSeries};
use crate::lattice::WittLattice;
use crate::modforms::VectorValuedForm;

use super::keys_for;

/// `Theta_{a,n}(F)` through `q1^order`:
/// `sum c_lam(m) q1^{n (m + Q(x0)) / a} X^{-n G x0} e(-n lam22)` over cosets with
/// `lam12 = 0`, `lam11 = a mod N`, and `x0 in lam0 + L0` with
/// `(m + Q(x0)) / a + lam21` integral.
pub fn theta_an(
    form: &VectorValuedForm,
    lattice: &WittLattice,
    a: u64,
    n: u64,
    order: &Rat,
) -> Result<JacobiSeries> {
    assert!(a >= 1 && n >= 1, "a and n must be positive");
    let l0 = lattice.l0();
    let rank = l0.rank();
    let (ar, nr) = (int(a as i64), int(n as i64));
    // n (m + Q) / a < order  <=>  m + Q < a order / n
    let bound = &ar * order / &nr;
    let big_n = lattice.n();
    let mut items = Vec::new();
    for id in 0..lattice.num_cosets() {
        let coset = lattice.coset(id);
        if coset.lam1[1] != 0 || coset.lam1[0] != a % big_n {
            continue;
        }
        let (l21, l22) = lattice.lam2(id);
        let phase = CycRational::e(&(-&nr * &l22));
        for (m, c) in form.support(id, &bound)? {
            let qmax = &bound - &m;
            if qmax <= Rat::zero() {
                continue;
            }
            for x0 in l0.enumerate_by_norm(&coset.lam0, &qmax) {
                let s = &m + l0.q(&x0);
                if s >= bound || !frac(&(&s / &ar + &l21)).is_zero() {
                    continue;
                }
                items.push((
                    &nr * &s / &ar,
                    keys_for(lattice, &x0, &-&nr),
                    phase.scale(&c),
                ));
            }
        }
    }
    Ok(JacobiSeries::from_terms(rank, items, Some(order.clone())))
}
