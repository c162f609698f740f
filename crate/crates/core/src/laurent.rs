//! Exact multivariate Laurent polynomials with rational coefficients.
//!
//! A [`LaurentPoly`] is a finite map from integer exponent vectors to nonzero
//! rational coefficients over an explicit, ordered list of variable names.
//! Every constructor and ring operation returns the canonical form (no stored
//! zero coefficients), so structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::modp::PrimeField;

pub type Exponent = Vec<i64>;

/// Ordered variable names of a Laurent ring.
#[derive(Clone, Debug, Eq)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    /// The two-variable ring `Q[q^±1, p^±1]`.
    pub fn qp() -> Self {
        Self::new(&["q", "p"])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Default for Vars {
    fn default() -> Self {
        Self::qp()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vars,
    terms: BTreeMap<Exponent, BigRational>,
}

impl LaurentPoly {
    pub fn zero(vars: &Vars) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Vars, c: BigRational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, BigRational::from_integer(c.into()))
    }

    /// `c * x^exps`. Panics if `exps` has the wrong length.
    pub fn monomial(vars: &Vars, exps: Exponent, c: BigRational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// The unit monomial `x^exps`.
    pub fn unit(vars: &Vars, exps: Exponent) -> Self {
        Self::monomial(vars, exps, BigRational::one())
    }

    /// The variable `name` raised to `power`.
    pub fn var_pow(vars: &Vars, name: &str, power: i64) -> Result<Self> {
        let idx = vars.index_of(name)?;
        let mut e = vec![0; vars.len()];
        e[idx] = power;
        Ok(Self::unit(vars, e))
    }

    /// Builds from `(exponent, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        let mut out = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            out.add_term(e, c);
        }
        out
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// True for a single term `c * x^e` with `c != 0`: the units of the ring.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Coefficient of `x^e` (zero when absent).
    pub fn coeff(&self, e: &[i64]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The exponent-zero coefficient.
    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.vars.len()])
    }

    fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// In-place `self += a * b`.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        debug_assert!(self.vars == a.vars && a.vars == b.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                self.add_term(e, ca * cb);
            }
        }
    }

    /// In-place `self += other`.
    pub fn add_assign_ref(&mut self, other: &Self) {
        debug_assert!(self.vars == other.vars);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the unit monomial `x^shift`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Inverse of a unit; errors for anything that is not a single term.
    pub fn inverse_unit(&self) -> Result<Self> {
        if !self.is_monomial() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        Ok(Self::monomial(
            &self.vars,
            e.iter().map(|x| -x).collect(),
            c.recip(),
        ))
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse_unit()? } else { self.clone() };
        let mut acc = Self::one(&self.vars);
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Substitutes every variable by its inverse: negates all exponent vectors.
    pub fn substitute_inverse(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// Ring map sending source variable `i` to the unit monomial
    /// `target^images[i]`.
    pub fn substitute_monomials(&self, target: &Vars, images: &[Exponent]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|im| im.len() != target.len()) {
            return Err(Error::Arity {
                expected: target.len(),
                got: bad.len(),
            });
        }
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut img = vec![0i64; target.len()];
            for (a, im) in e.iter().zip(images) {
                for (slot, b) in img.iter_mut().zip(im) {
                    *slot += a * b;
                }
            }
            out.add_term(img, c.clone());
        }
        Ok(out)
    }

    /// Exact value at a point with nonzero rational coordinates.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        if point.iter().any(Zero::is_zero) {
            return Err(Error::ZeroCoordinate);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= pow_rational(x, k);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value modulo a prime at a point of nonzero residues.
    pub fn evaluate_mod(&self, point: &[u64], field: &PrimeField) -> Result<u64> {
        if point.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        if point.iter().any(|&x| x % field.modulus() == 0) {
            return Err(Error::ZeroCoordinate);
        }
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = field.from_rational(c)?;
            for (&x, &k) in point.iter().zip(e) {
                t = field.mul(t, field.pow_signed(x, k)?);
            }
            acc = field.add(acc, t);
        }
        Ok(acc)
    }

    /// Value and first derivative at `h = 0` of `f(exp(u_1 h), ..., exp(u_k h))`.
    pub fn first_order(&self, direction: &[BigRational]) -> Result<(BigRational, BigRational)> {
        if direction.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: direction.len(),
            });
        }
        let mut value = BigRational::zero();
        let mut deriv = BigRational::zero();
        for (e, c) in &self.terms {
            value += c;
            let weight: BigRational = e
                .iter()
                .zip(direction)
                .map(|(&k, u)| u * BigRational::from_integer(k.into()))
                .sum();
            deriv += c * weight;
        }
        Ok((value, deriv))
    }

    /// Rows `[e_1, ..., e_k, numerator, denominator]`, lexicographic in the
    /// exponent vector.
    pub fn to_rows(&self) -> Vec<Vec<Value>> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut row: Vec<Value> = e.iter().map(|&x| Value::from(x)).collect();
                row.push(bigint_to_json(c.numer()));
                row.push(bigint_to_json(c.denom()));
                row
            })
            .collect()
    }

    pub fn from_rows(vars: &Vars, rows: &[Vec<Value>]) -> Result<Self> {
        let k = vars.len();
        let mut out = Self::zero(vars);
        for row in rows {
            if row.len() != k + 2 {
                return Err(Error::Format(format!(
                    "coefficient row has {} fields, expected {}",
                    row.len(),
                    k + 2
                )));
            }
            let e = row[..k]
                .iter()
                .map(|v| {
                    v.as_i64()
                        .ok_or_else(|| Error::Format(format!("bad exponent {v}")))
                })
                .collect::<Result<Exponent>>()?;
            let num = json_to_bigint(&row[k])?;
            let den = json_to_bigint(&row[k + 1])?;
            if den.is_zero() {
                return Err(Error::Format("zero denominator".into()));
            }
            if out.terms.contains_key(&e) {
                return Err(Error::Format(format!("duplicate exponent {e:?}")));
            }
            out.add_term(e, BigRational::new(num, den));
        }
        Ok(out)
    }
}

pub(crate) fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    num_traits::pow::pow(base, k.unsigned_abs() as usize)
}

fn bigint_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn json_to_bigint(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(i.into());
    }
    if let Some(s) = v.as_str() {
        return s
            .parse()
            .map_err(|_| Error::Format(format!("bad integer {s:?}")));
    }
    Err(Error::Format(format!("bad integer {v}")))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on mismatched variable lists; use the `checked_*` form
            /// for untrusted operands.
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("Laurent operands over the same ring")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest exponents first reads more naturally.
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mono: Vec<String> = e
                .iter()
                .zip(self.vars.names())
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
