//! Big-rational helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse `"n"`, `"-n"` or `"n/d"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Canonical string: `"n"` for integers, `"n/d"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn to_i64(r: &BigInt) -> i64 {
    r.to_i64().expect("integer exceeds i64")
}

/// Denominator as `i64`.
pub fn den_i64(r: &Rat) -> i64 {
    to_i64(r.denom())
}

pub fn floor_i64(r: &Rat) -> i64 {
    to_i64(&r.floor().to_integer())
}

pub fn ceil_i64(r: &Rat) -> i64 {
    to_i64(&r.ceil().to_integer())
}

pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

pub fn is_integer(r: &Rat) -> bool {
    r.is_integer()
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Numerator of `r` over the denominator `scale`; panics if `r * scale` is not integral.
pub fn scaled(r: &Rat, scale: i64) -> i64 {
    let t = r * int(scale);
    assert!(t.is_integer(), "{r} not representable at scale {scale}");
    to_i64(t.numer())
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zero() -> Rat {
    Rat::zero()
}
