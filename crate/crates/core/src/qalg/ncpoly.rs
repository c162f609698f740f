//! Noncommutative polynomials over the Laurent ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};

/// A letter of an alphabet, as a 0-based index.
pub type Letter = u16;
pub type Word = Vec<Letter>;

/// Generator alphabets: the `n^2` matrix coefficients `T_i^k` of `A(R)`, or
/// the `n` generators `x_i` of `S(R)` and `Λ(R)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    T(usize),
    X(usize),
}

impl Alphabet {
    pub fn n(&self) -> usize {
        match *self {
            Alphabet::T(n) | Alphabet::X(n) => n,
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            Alphabet::T(n) => n * n,
            Alphabet::X(n) => n,
        }
    }

    /// `T_i^k` (1-based).
    pub fn t(&self, i: usize, k: usize) -> Letter {
        let n = self.n();
        debug_assert!(matches!(self, Alphabet::T(_)) && (1..=n).contains(&i) && (1..=n).contains(&k));
        ((i - 1) * n + (k - 1)) as Letter
    }

    /// `x_i` (1-based).
    pub fn x(&self, i: usize) -> Letter {
        debug_assert!(matches!(self, Alphabet::X(_)) && (1..=self.n()).contains(&i));
        (i - 1) as Letter
    }

    /// `(i, k)` for the letter `T_i^k`.
    pub fn t_indices(&self, letter: Letter) -> (usize, usize) {
        let n = self.n();
        (letter as usize / n + 1, letter as usize % n + 1)
    }

    pub fn name(&self, letter: Letter) -> String {
        match self {
            Alphabet::T(_) => {
                let (i, k) = self.t_indices(letter);
                format!("T_{i}^{k}")
            }
            Alphabet::X(_) => format!("x_{}", letter + 1),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.size() as Letter).map(|l| self.name(l)).collect()
    }

    pub fn parse_name(&self, name: &str) -> Result<Letter> {
        (0..self.size() as Letter)
            .find(|&l| self.name(l) == name)
            .ok_or_else(|| Error::Alphabet(format!("unknown letter {name:?}")))
    }

    /// Additive grading preserved by every relation built from a homogeneous
    /// R-matrix: (lower-index sum, upper-index sum) for `T`, index sum for `x`.
    pub fn grade(&self, word: &[Letter]) -> (usize, usize) {
        match self {
            Alphabet::T(_) => word.iter().fold((0, 0), |(a, b), &l| {
                let (i, k) = self.t_indices(l);
                (a + i, b + k)
            }),
            Alphabet::X(_) => (word.iter().map(|&l| l as usize + 1).sum(), 0),
        }
    }

    /// All words of length `d`, lexicographic.
    pub fn words(&self, d: usize) -> Vec<Word> {
        let size = self.size();
        let total = size.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let mut w = vec![0 as Letter; d];
                for slot in w.iter_mut().rev() {
                    *slot = (idx % size) as Letter;
                    idx /= size;
                }
                w
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPolynomial {
    alphabet: Alphabet,
    vars: Vars,
    terms: BTreeMap<Word, LaurentPoly>,
}

impl NCPolynomial {
    pub fn zero(alphabet: Alphabet, vars: &Vars) -> Self {
        NCPolynomial {
            alphabet,
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: Alphabet, vars: &Vars) -> Self {
        Self::term(alphabet, Vec::new(), LaurentPoly::one(vars))
    }

    pub fn term(alphabet: Alphabet, word: Word, coeff: LaurentPoly) -> Self {
        let mut out = Self::zero(alphabet, coeff.vars());
        out.add_term(word, coeff);
        out
    }

    pub fn letter(alphabet: Alphabet, vars: &Vars, letter: Letter) -> Self {
        Self::term(alphabet, vec![letter], LaurentPoly::one(vars))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[Letter]) -> LaurentPoly {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(&self.vars))
    }

    pub fn add_term(&mut self, word: Word, coeff: LaurentPoly) {
        assert!(
            word.iter().all(|&l| (l as usize) < self.alphabet.size()),
            "word outside the alphabet"
        );
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::Alphabet(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&LaurentPoly::from_int(&self.vars, -1)))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.alphabet, &self.vars);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.alphabet, &self.vars);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    /// The common word length, if all terms share one.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Vec::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn map_coeffs<F>(&self, target: &Vars, f: F) -> Result<Self>
    where
        F: Fn(&LaurentPoly) -> Result<LaurentPoly>,
    {
        let mut out = Self::zero(self.alphabet, target);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn word_string(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter()
            .map(|&l| self.alphabet.name(l))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c})*{}", self.word_string(w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_and_names() {
        let a = Alphabet::T(3);
        assert_eq!(a.size(), 9);
        let l = a.t(2, 3);
        assert_eq!(a.t_indices(l), (2, 3));
        assert_eq!(a.name(l), "T_2^3");
        assert_eq!(a.parse_name("T_2^3").unwrap(), l);
        assert_eq!(Alphabet::X(4).name(3), "x_4");
        assert_eq!(a.words(2).len(), 81);
    }

    #[test]
    fn products_concatenate() {
        let v = Vars::qp();
        let a = Alphabet::X(2);
        let x1 = NCPolynomial::letter(a, &v, 0);
        let x2 = NCPolynomial::letter(a, &v, 1);
        let prod = x1.mul(&x2).unwrap();
        assert_eq!(prod.degree(), Some(2));
        assert!(prod.coeff(&[0, 1]).is_one());
        let diff = prod.sub(&x2.mul(&x1).unwrap()).unwrap();
        assert_eq!(diff.num_terms(), 2);
        assert!(diff.add(&x1).unwrap().degree().is_none());
    }

    #[test]
    fn alphabet_mismatch() {
        let v = Vars::qp();
        let x = NCPolynomial::letter(Alphabet::X(2), &v, 0);
        let t = NCPolynomial::letter(Alphabet::T(2), &v, 0);
        assert!(matches!(x.add(&t), Err(Error::Alphabet(_))));
    }
}
