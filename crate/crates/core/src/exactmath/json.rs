//! Canonical JSON forms.
//!
//! Rationals are strings (`"n"` or `"n/d"`), keys are integer arrays over the
//! series' `key_den`, cyclotomic numbers are `{order, coeffs}` with the
//! smallest possible order. Output is byte-deterministic.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclotomic::CycRational;
use super::graded::GradedFJSeries;
use super::rational::{fmt_rat, int, parse_rat, Rat};
use super::series::JacobiSeries;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycJson {
    pub order: u64,
    pub coeffs: BTreeMap<u64, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub key: Vec<i64>,
    pub coeff: CycJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub rank: usize,
    pub key_den: i64,
    pub trunc: Option<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedJson {
    pub offset: String,
    pub grades: Vec<SeriesJson>,
}

impl From<&CycRational> for CycJson {
    fn from(c: &CycRational) -> Self {
        let c = c.canonical();
        let coeffs = c
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j as u64, fmt_rat(v)))
            .collect();
        CycJson {
            order: c.order(),
            coeffs,
        }
    }
}

impl TryFrom<&CycJson> for CycRational {
    type Error = Error;
    fn try_from(j: &CycJson) -> Result<Self> {
        if j.order == 0 {
            return Err(Error::Parse("cyclotomic order 0".into()));
        }
        let len = j.coeffs.keys().max().map_or(1, |m| m + 1) as usize;
        let mut poly = vec![Rat::zero(); len];
        for (&k, v) in &j.coeffs {
            poly[k as usize] = parse_rat(v)?;
        }
        Ok(CycRational::from_poly(j.order, poly))
    }
}

impl From<&JacobiSeries> for SeriesJson {
    fn from(s: &JacobiSeries) -> Self {
        let s = s.normalized();
        let kd = s.key_den();
        let terms = s
            .terms()
            .into_iter()
            .map(|t| TermJson {
                exp: fmt_rat(&t.exp),
                key: t
                    .key
                    .iter()
                    .map(|k| super::rational::scaled(k, kd))
                    .collect(),
                coeff: CycJson::from(&t.coeff),
            })
            .collect();
        SeriesJson {
            rank: s.rank(),
            key_den: kd,
            trunc: s.trunc().map(|t| fmt_rat(&t)),
            terms,
        }
    }
}

impl TryFrom<&SeriesJson> for JacobiSeries {
    type Error = Error;
    fn try_from(j: &SeriesJson) -> Result<Self> {
        if j.key_den <= 0 {
            return Err(Error::Parse("key_den must be positive".into()));
        }
        let kd = int(j.key_den);
        let mut items = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.key.len() != j.rank {
                return Err(Error::DimensionMismatch {
                    expected: j.rank,
                    got: t.key.len(),
                });
            }
            items.push((
                parse_rat(&t.exp)?,
                t.key.iter().map(|&k| int(k) / &kd).collect(),
                CycRational::try_from(&t.coeff)?,
            ));
        }
        let trunc = j.trunc.as_deref().map(parse_rat).transpose()?;
        Ok(JacobiSeries::from_terms(j.rank, items, trunc))
    }
}

impl From<&GradedFJSeries> for GradedJson {
    fn from(g: &GradedFJSeries) -> Self {
        GradedJson {
            offset: fmt_rat(&g.offset),
            grades: g.grades.iter().map(SeriesJson::from).collect(),
        }
    }
}

impl TryFrom<&GradedJson> for GradedFJSeries {
    type Error = Error;
    fn try_from(j: &GradedJson) -> Result<Self> {
        if j.grades.is_empty() {
            return Err(Error::Parse("graded series without grades".into()));
        }
        Ok(GradedFJSeries::new(
            parse_rat(&j.offset)?,
            j.grades
                .iter()
                .map(JacobiSeries::try_from)
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

macro_rules! serde_via {
    ($ty:ty, $dto:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                <$dto>::from(self).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let dto = <$dto>::deserialize(d)?;
                <$ty>::try_from(&dto).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via!(CycRational, CycJson);
serde_via!(JacobiSeries, SeriesJson);
serde_via!(GradedFJSeries, GradedJson);

/// Serialize any value to canonical pretty JSON.
pub fn to_canonical_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialization of owned data")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    #[test]
    fn series_round_trip() {
        let s = JacobiSeries::from_terms(
            1,
            vec![
                (rat(1, 8), vec![rat(1, 2)], CycRational::i()),
                (rat(1, 8), vec![rat(-1, 2)], -CycRational::i()),
                (rat(9, 8), vec![rat(3, 2)], CycRational::root_of_unity(1, 3)),
            ],
            Some(rat(2, 1)),
        );
        let text = to_canonical_json(&s);
        let back: JacobiSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(to_canonical_json(&back), text);
    }

    #[test]
    fn integers_print_without_denominator() {
        let c = CycRational::from_int(-1);
        let j = CycJson::from(&c);
        assert_eq!(j.order, 1);
        assert_eq!(j.coeffs.get(&0).map(String::as_str), Some("-1"));
    }
}
