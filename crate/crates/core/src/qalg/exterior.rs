//! Normal forms in the quantum exterior algebra and the quantum determinant.
//!
//! In `Λ(R_n)` the generators satisfy `x_i^2 = 0` and, for `j > i`,
//! `x_j x_i = -p^{2(j-i)} x_i x_j`. This orientation is the one forced by the
//! relations `q^{-1} x_j x_i + p R_{ij}^{kl} x_k x_l` for the entry convention
//! used throughout the crate; it is checked against those relations in the
//! tests below.

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};
use crate::qalg::ncpoly::{Alphabet, NCPolynomial};

/// Coefficient `c` with `word = c · (sorted word)` in `Λ(R_n)`, or `None`
/// when the word vanishes. Letters are 1-based.
pub fn lambda_coefficient(word: &[usize], n: usize, vars: &Vars) -> Result<Option<LaurentPoly>> {
    if let Some(&bad) = word.iter().find(|&&x| x == 0 || x > n) {
        return Err(Error::Index(format!("letter x_{bad} outside 1..={n}")));
    }
    let p_index = vars.index_of("p")?;
    let mut w = word.to_vec();
    let mut sign = 1i64;
    let mut p_exp = 0i64;
    // bubble sort, one rewrite per adjacent swap
    for pass in 0..w.len() {
        for pos in 0..w.len().saturating_sub(1 + pass) {
            let (a, b) = (w[pos], w[pos + 1]);
            if a == b {
                return Ok(None);
            }
            if a > b {
                sign = -sign;
                p_exp += 2 * (a as i64 - b as i64);
                w.swap(pos, pos + 1);
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return Ok(None);
    }
    let mut e = vec![0i64; vars.len()];
    e[p_index] = p_exp;
    Ok(Some(LaurentPoly::monomial(vars, e, crate::laurent::rat(sign))))
}

/// Normal form of a word in `Λ(R_n)`: zero, or a coefficient times the
/// increasing word.
pub fn lambda_normal_form(word: &[usize], n: usize, vars: &Vars) -> Result<NCPolynomial> {
    let alphabet = Alphabet::X(n);
    match lambda_coefficient(word, n, vars)? {
        None => Ok(NCPolynomial::zero(alphabet, vars)),
        Some(c) => {
            let mut sorted = word.to_vec();
            sorted.sort_unstable();
            Ok(NCPolynomial::term(
                alphabet,
                sorted.iter().map(|&i| alphabet.x(i)).collect(),
                c,
            ))
        }
    }
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inversions(&self) -> usize {
        let w = &self.0;
        (0..w.len())
            .flat_map(|a| (a + 1..w.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| w[a] > w[b])
            .count()
    }

    pub fn sign(&self) -> i64 {
        if self.inversions() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// `a_σ` with `x_{σ(1)} ⋯ x_{σ(n)} = a_σ x_1 ⋯ x_n` in `Λ(R_n)`.
pub fn a_sigma(sigma: &Permutation, vars: &Vars) -> Result<LaurentPoly> {
    lambda_coefficient(sigma.images(), sigma.len(), vars)?
        .ok_or_else(|| Error::Precondition("permutation word cannot vanish".into()))
}

/// `det_q = Σ_σ a_σ T_1^{σ(1)} ⋯ T_n^{σ(n)}`, fully expanded.
pub fn quantum_determinant(n: usize, vars: &Vars) -> Result<NCPolynomial> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let alphabet = Alphabet::T(n);
    let mut det = NCPolynomial::zero(alphabet, vars);
    for sigma in Permutation::all(n) {
        let word = (1..=n).map(|i| alphabet.t(i, sigma.apply(i))).collect();
        det.add_term(word, a_sigma(&sigma, vars)?);
    }
    Ok(det)
}
