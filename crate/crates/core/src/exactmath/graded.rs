//! Series graded by a second variable `q2`: `q2^offset * sum_k S_k q2^k`.

use num_traits::Zero;

use super::cyclotomic::CycRational;
use super::rational::{int, Rat};
use super::series::{Difference, JacobiSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GradedFJSeries {
    pub offset: Rat,
    pub grades: Vec<JacobiSeries>,
}

impl GradedFJSeries {
    pub fn new(offset: Rat, grades: Vec<JacobiSeries>) -> Self {
        assert!(!grades.is_empty(), "graded series needs grade 0");
        GradedFJSeries { offset, grades }
    }

    /// Highest grade held.
    pub fn top_grade(&self) -> usize {
        self.grades.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.grades[0].rank()
    }

    pub fn grade(&self, k: usize) -> &JacobiSeries {
        &self.grades[k]
    }

    /// `1 + 0 q2 + ...` through grade `top`.
    pub fn one(rank: usize, top: usize) -> Self {
        let mut grades = vec![JacobiSeries::zero(rank); top + 1];
        grades[0] = JacobiSeries::one(rank);
        GradedFJSeries {
            offset: Rat::zero(),
            grades,
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let top = self.top_grade().min(other.top_grade());
        let mut grades = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let mut acc: Option<JacobiSeries> = None;
            for i in 0..=k {
                let p = self.grades[i].checked_mul(&other.grades[k - i])?;
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.checked_add(&p)?,
                });
            }
            grades.push(acc.expect("at least one product"));
        }
        Ok(GradedFJSeries {
            offset: &self.offset + &other.offset,
            grades,
        })
    }

    /// Grade-wise sum; offsets must agree.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.offset != other.offset {
            return Err(Error::Consistency(format!(
                "graded offsets differ: {} vs {}",
                self.offset, other.offset
            )));
        }
        let top = self.top_grade().min(other.top_grade());
        let grades = (0..=top)
            .map(|k| self.grades[k].checked_add(&other.grades[k]))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedFJSeries {
            offset: self.offset.clone(),
            grades,
        })
    }

    pub fn scalar_mul(&self, c: &CycRational) -> Self {
        GradedFJSeries {
            offset: self.offset.clone(),
            grades: self.grades.iter().map(|g| g.scalar_mul(c)).collect(),
        }
    }

    /// Multiply every grade by a `q2`-free series.
    pub fn mul_series(&self, s: &JacobiSeries) -> Result<Self> {
        Ok(GradedFJSeries {
            offset: self.offset.clone(),
            grades: self
                .grades
                .iter()
                .map(|g| g.checked_mul(s))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn truncate_grades(&self, order: &Rat) -> Self {
        GradedFJSeries {
            offset: self.offset.clone(),
            grades: self.grades.iter().map(|g| g.truncate(order)).collect(),
        }
    }

    /// Keep grades `0..=top`.
    pub fn through_grade(&self, top: usize) -> Self {
        GradedFJSeries {
            offset: self.offset.clone(),
            grades: self.grades[..=top.min(self.top_grade())].to_vec(),
        }
    }

    /// First disagreement as `(grade, difference)`; offsets are compared first.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, Difference)> {
        if self.offset != other.offset {
            return Some((
                0,
                Difference {
                    exp: Rat::zero(),
                    key: Vec::new(),
                    left: CycRational::from_rat(self.offset.clone()),
                    right: CycRational::from_rat(other.offset.clone()),
                },
            ));
        }
        let top = self.top_grade().min(other.top_grade());
        (0..=top).find_map(|k| {
            self.grades[k]
                .first_difference(&other.grades[k])
                .map(|d| (k, d))
        })
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// The single scalar `u` with `self = u * other` across all grades, if any.
    pub fn unit_ratio(&self, other: &Self) -> Option<CycRational> {
        if self.offset != other.offset {
            return None;
        }
        let top = self.top_grade().min(other.top_grade());
        let k = (0..=top).find(|&k| !other.grades[k].is_zero())?;
        let u = self.grades[k].ratio_to(&other.grades[k])?;
        if self.agrees_with(&other.scalar_mul(&u)) {
            Some(u)
        } else {
            None
        }
    }
}

/// `exp(s)` for a graded series with vanishing grade 0.
///
/// Uses `E_0 = 1` and `k E_k = sum_{j=1..k} j S_j E_{k-j}`.
pub fn series_exp_graded(s: &GradedFJSeries) -> Result<GradedFJSeries> {
    if !s.grades[0].is_zero() {
        return Err(Error::NonzeroGradeZero);
    }
    let rank = s.rank();
    let top = s.top_grade();
    let mut e: Vec<JacobiSeries> = Vec::with_capacity(top + 1);
    e.push(JacobiSeries::one(rank));
    for k in 1..=top {
        let mut acc = JacobiSeries::zero(rank);
        for j in 1..=k {
            if s.grades[j].is_zero() && s.grades[j].is_exact() {
                continue;
            }
            let term = s.grades[j].checked_mul(&e[k - j])?.scale_rat(&int(j as i64));
            acc = acc.checked_add(&term)?;
        }
        e.push(acc.scale_rat(&Rat::new(1.into(), (k as i64).into())));
    }
    Ok(GradedFJSeries {
        offset: Rat::zero(),
        grades: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    fn scalar(c: Rat, rank: usize) -> JacobiSeries {
        JacobiSeries::constant(rank, CycRational::from_rat(c))
    }

    #[test]
    fn exp_of_zero_is_one() {
        let s = GradedFJSeries::new(Rat::zero(), vec![JacobiSeries::zero(0); 4]);
        assert_eq!(series_exp_graded(&s).unwrap(), GradedFJSeries::one(0, 3));
    }

    #[test]
    fn scalar_exponential() {
        let c = rat(3, 2);
        let mut grades = vec![JacobiSeries::zero(0); 4];
        grades[1] = scalar(c.clone(), 0);
        let e = series_exp_graded(&GradedFJSeries::new(Rat::zero(), grades)).unwrap();
        let expected = [
            Rat::from_integer(1.into()),
            c.clone(),
            &c * &c / rat(2, 1),
            &c * &c * &c / rat(6, 1),
        ];
        for (k, v) in expected.iter().enumerate() {
            assert_eq!(e.grades[k], scalar(v.clone(), 0));
        }
    }

    #[test]
    fn nonzero_grade_zero_rejected() {
        let s = GradedFJSeries::new(Rat::zero(), vec![JacobiSeries::one(0)]);
        assert_eq!(series_exp_graded(&s).unwrap_err(), Error::NonzeroGradeZero);
    }
}
