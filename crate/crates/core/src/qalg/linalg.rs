//! Incremental row echelon forms: over `Z/pZ`, and fraction-free over the
//! Laurent ring (which computes ranks over its fraction field `Q(q, p)`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::laurent::LaurentPoly;
use crate::modp::PrimeField;

/// Dense echelon basis over a prime field. Each stored row is normalized to
/// pivot 1 and vanishes at the pivots of all earlier rows.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    field: PrimeField,
    width: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        ModEchelon {
            field,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    fn reduce(&self, row: &mut [u64]) {
        let f = &self.field;
        for (pivot, prow) in &self.rows {
            let c = row[*pivot];
            if c == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(prow) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        if self.is_full() {
            return false;
        }
        self.reduce(&mut row);
        let Some(pivot) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(row[pivot]).expect("nonzero pivot");
        for x in row.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push((pivot, row));
        true
    }

    pub fn contains(&self, mut row: Vec<u64>) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        self.reduce(&mut row);
        row.iter().all(|&x| x == 0)
    }
}

/// Fraction-free echelon basis over `Q[vars^±1]`; ranks agree with ranks over
/// the fraction field.
#[derive(Clone, Debug)]
pub struct ExactEchelon {
    width: usize,
    rows: Vec<(usize, Vec<LaurentPoly>)>,
}

impl ExactEchelon {
    pub fn new(width: usize) -> Self {
        ExactEchelon {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, row: &mut [LaurentPoly]) {
        for (pivot, prow) in &self.rows {
            let c = row[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            let a = &prow[*pivot];
            if a.is_one() {
                for (x, y) in row.iter_mut().zip(prow) {
                    if !y.is_zero() {
                        *x = &*x - &(&c * y);
                    }
                }
            } else {
                for (x, y) in row.iter_mut().zip(prow) {
                    *x = &(&*x * a) - &(&c * y);
                }
            }
            make_primitive(row);
        }
    }

    pub fn insert(&mut self, mut row: Vec<LaurentPoly>) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        if self.rows.len() == self.width {
            return false;
        }
        self.reduce(&mut row);
        // prefer a unit pivot so later reductions avoid cross-multiplication
        let pivot = row
            .iter()
            .position(LaurentPoly::is_monomial)
            .or_else(|| row.iter().position(|x| !x.is_zero()));
        let Some(pivot) = pivot else {
            return false;
        };
        if row[pivot].is_monomial() {
            let inv = row[pivot].inverse_unit().expect("monomial is a unit");
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        self.rows.push((pivot, row));
        true
    }

    pub fn contains(&self, mut row: Vec<LaurentPoly>) -> bool {
        assert_eq!(row.len(), self.width, "row width");
        self.reduce(&mut row);
        row.iter().all(LaurentPoly::is_zero)
    }
}

/// Divides a row by its monomial and rational content.
fn make_primitive(row: &mut [LaurentPoly]) {
    let Some(first) = row.iter().find(|x| !x.is_zero()) else {
        return;
    };
    let nvars = first.vars().len();
    let mut min_exp = vec![i64::MAX; nvars];
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for x in row.iter() {
        for (e, c) in x.terms() {
            for (m, &k) in min_exp.iter_mut().zip(e) {
                *m = (*m).min(k);
            }
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    let shift: Vec<i64> = min_exp.iter().map(|m| -m).collect();
    let scale = BigRational::new(den_lcm, num_gcd.abs());
    let trivial = shift.iter().all(|&s| s == 0) && scale.is_one();
    if trivial {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = x.shift(&shift).scale(&scale);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Vars;
    use crate::modp::DEFAULT_MODULUS;

    #[test]
    fn mod_rank_and_membership() {
        let f = PrimeField::new(DEFAULT_MODULUS).unwrap();
        let mut e = ModEchelon::new(f, 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![2, 4, 7]));
        assert!(!e.insert(vec![3, 6, 10]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(vec![0, 0, 5]));
        assert!(!e.contains(vec![0, 1, 0]));
    }

    #[test]
    fn exact_rank_over_fraction_field() {
        let v = Vars::qp();
        let q = LaurentPoly::unit(&v, vec![1, 0]);
        let p = LaurentPoly::unit(&v, vec![0, 1]);
        let one = LaurentPoly::one(&v);
        let zero = LaurentPoly::zero(&v);
        let mut e = ExactEchelon::new(3);
        // (q+p, 1, 0) and (q^2 - p^2, q - p, 0) are dependent over Q(q,p)
        assert!(e.insert(vec![&q + &p, one.clone(), zero.clone()]));
        assert!(!e.insert(vec![&(&q * &q) - &(&p * &p), &q - &p, zero.clone()]));
        assert!(e.contains(vec![&(&q + &p) * &q, q.clone(), zero.clone()]));
        assert!(!e.contains(vec![zero.clone(), zero.clone(), one.clone()]));
        assert!(e.insert(vec![one.clone(), one.clone(), zero]));
        assert_eq!(e.rank(), 2);
    }
}
