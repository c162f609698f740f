//! The braiding pairing on `A(R)` and the functionals `l^±(T_i^k)`.
//!
//! Both `l^+(T_i^k) = ⟨T_i^k | ·⟩` and `l^-(T_i^k) = ⟨· | S(T_i^k)⟩` act on
//! products through the matrix rule `F_i^k(bc) = Σ_m F_i^m(b) F_m^k(c)`, and
//! products of functionals are convolutions along the coproduct
//! `Δ T_i^k = Σ_j T_i^j ⊗ T_j^k`. A product of `r` functionals is therefore
//! evaluated on a word by a transfer computation over its letters whose
//! state is the running chain index of each factor.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};
use crate::qalg::exterior::{a_sigma, Permutation};
use crate::qalg::ncpoly::{Alphabet, Letter, NCPolynomial};
use crate::report::{witness, Check, CheckSet};
use crate::rmatrix::{build_cg, hecke_inverse, CgParams};
use crate::tensor::SparseOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// `l^+(T_i^k)` or `l^-(T_i^k)`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Functional {
    pub sign: Sign,
    pub i: usize,
    pub k: usize,
}

impl Functional {
    pub fn plus(i: usize, k: usize) -> Self {
        Functional { sign: Sign::Plus, i, k }
    }

    pub fn minus(i: usize, k: usize) -> Self {
        Functional { sign: Sign::Minus, i, k }
    }

    pub fn label(&self) -> String {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        format!("l{s}(T_{}^{})", self.i, self.k)
    }
}

/// Transition `(y, c', weight)` lists indexed by `[x][c]`: reading letter
/// `T_x^y` moves a chain at `c` to `c'`.
type Table = Vec<Vec<Vec<(usize, usize, LaurentPoly)>>>;

/// Evaluates products of `l^±` functionals built from one R-matrix.
#[derive(Clone, Debug)]
pub struct FunctionalEngine {
    n: usize,
    r: SparseOperator,
    r_inv: SparseOperator,
    plus: Table,
    minus: Table,
}

impl FunctionalEngine {
    /// Requires a Hecke R-matrix, whose inverse is then known in closed form.
    pub fn new(r: &SparseOperator) -> Result<Self> {
        if r.legs() != 2 {
            return Err(Error::Dimension("functionals need a 2-leg R".into()));
        }
        let n = r.n();
        let r_inv = hecke_inverse(r)?;
        let mut plus: Table = vec![vec![Vec::new(); n + 1]; n + 1];
        let mut minus: Table = vec![vec![Vec::new(); n + 1]; n + 1];
        for x in 1..=n {
            for c in 1..=n {
                // l+(T_c^c')(T_x^y) = R_{xc}^{yc'}
                for (out, w) in r.apply_basis(&[x, c])? {
                    plus[x][c].push((out[0], out[1], w));
                }
                // l-(T_c^c')(T_x^y) = (R^{-1})_{cx}^{c'y}
                for (out, w) in r_inv.apply_basis(&[c, x])? {
                    minus[x][c].push((out[1], out[0], w));
                }
            }
        }
        Ok(FunctionalEngine {
            n,
            r: r.clone(),
            r_inv,
            plus,
            minus,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Vars {
        self.r.vars()
    }

    pub fn r(&self) -> &SparseOperator {
        &self.r
    }

    pub fn r_inv(&self) -> &SparseOperator {
        &self.r_inv
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::T(self.n)
    }

    /// `(f_1 ⋯ f_r)(w)`; the empty product is the counit.
    pub fn eval(&self, factors: &[Functional], word: &[Letter]) -> LaurentPoly {
        let alphabet = self.alphabet();
        let zero = LaurentPoly::zero(self.vars());
        let start: Vec<usize> = factors.iter().map(|f| f.i).collect();
        let mut states: BTreeMap<Vec<usize>, LaurentPoly> = BTreeMap::new();
        states.insert(start, LaurentPoly::one(self.vars()));
        for &letter in word {
            let (a, b) = alphabet.t_indices(letter);
            // split T_a^b across the factors as T_a^{j_1} ⊗ T_{j_1}^{j_2} ⊗ ...
            let mut inner: BTreeMap<(Vec<usize>, usize), LaurentPoly> =
                states.into_iter().map(|(cs, v)| ((cs, a), v)).collect();
            for (s, f) in factors.iter().enumerate() {
                let table = match f.sign {
                    Sign::Plus => &self.plus,
                    Sign::Minus => &self.minus,
                };
                let mut next: BTreeMap<(Vec<usize>, usize), LaurentPoly> = BTreeMap::new();
                for ((cs, x), v) in inner {
                    for (y, c2, w) in &table[x][cs[s]] {
                        let mut cs2 = cs.clone();
                        cs2[s] = *c2;
                        let e = next.entry((cs2, *y)).or_insert_with(|| zero.clone());
                        e.add_product(&v, w);
                    }
                }
                next.retain(|_, v| !v.is_zero());
                inner = next;
            }
            states = inner
                .into_iter()
                .filter(|((_, j), _)| *j == b)
                .map(|((cs, _), v)| (cs, v))
                .collect();
            if states.is_empty() {
                return zero;
            }
        }
        let end: Vec<usize> = factors.iter().map(|f| f.k).collect();
        states.remove(&end).unwrap_or(zero)
    }

    /// A linear combination of functional products applied to an element.
    pub fn eval_combination(&self, combo: &[(LaurentPoly, Vec<Functional>)], elem: &NCPolynomial) -> LaurentPoly {
        let mut total = LaurentPoly::zero(self.vars());
        for (w, c) in elem.terms() {
            for (a, factors) in combo {
                let v = self.eval(factors, w);
                if !v.is_zero() {
                    total.add_product(&(c * a), &v);
                }
            }
        }
        total
    }

    /// `⟨a | b⟩` for elements of `A(R)`. Since `⟨ab | ·⟩ = ⟨b | ·⟩⟨a | ·⟩`,
    /// a word of `a` pairs as the reversed product of `l^+` functionals.
    pub fn braiding_pair(&self, a: &NCPolynomial, b: &NCPolynomial) -> Result<LaurentPoly> {
        for x in [a, b] {
            if x.alphabet() != self.alphabet() {
                return Err(Error::Alphabet("braiding_pair needs T-words of the engine's size".into()));
            }
            if x.vars() != self.vars() {
                return Err(Error::VariableMismatch {
                    left: self.vars().names().to_vec(),
                    right: x.vars().names().to_vec(),
                });
            }
        }
        let alphabet = self.alphabet();
        let mut total = LaurentPoly::zero(self.vars());
        for (wa, ca) in a.terms() {
            let factors: Vec<Functional> = wa
                .iter()
                .rev()
                .map(|&l| {
                    let (i, k) = alphabet.t_indices(l);
                    Functional::plus(i, k)
                })
                .collect();
            for (wb, cb) in b.terms() {
                let v = self.eval(&factors, wb);
                if !v.is_zero() {
                    total.add_product(&(ca * cb), &v);
                }
            }
        }
        Ok(total)
    }

    /// Closed-form actions of one functional on the generators and on their
    /// antipodes.
    pub fn matrix(&self, f: Functional) -> FunctionalMatrix {
        let n = self.n;
        let get = |op: &SparseOperator, row: [usize; 2], col: [usize; 2]| {
            op.get(&row, &col).expect("indices in range")
        };
        let mut on_t = vec![vec![LaurentPoly::zero(self.vars()); n]; n];
        let mut on_s = on_t.clone();
        let (i, k) = (f.i, f.k);
        for j in 1..=n {
            for l in 1..=n {
                let (t, s) = match f.sign {
                    // R_{ji}^{lk} and (R^{-1})_{ji}^{lk}
                    Sign::Plus => (get(&self.r, [l, k], [j, i]), get(&self.r_inv, [l, k], [j, i])),
                    // (R^{-1})_{ij}^{kl} and R_{ij}^{kl}
                    Sign::Minus => (get(&self.r_inv, [k, l], [i, j]), get(&self.r, [k, l], [i, j])),
                };
                on_t[j - 1][l - 1] = t;
                on_s[j - 1][l - 1] = s;
            }
        }
        FunctionalMatrix { functional: f, on_t, on_s }
    }
}

/// Values of `l^±(T_i^k)` on `T_j^l` and on `S(T_j^l)`, indexed `[j-1][l-1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalMatrix {
    pub functional: Functional,
    pub on_t: Vec<Vec<LaurentPoly>>,
    pub on_s: Vec<Vec<LaurentPoly>>,
}

impl FunctionalMatrix {
    pub fn is_zero(&self) -> bool {
        self.on_t.iter().chain(&self.on_s).flatten().all(LaurentPoly::is_zero)
    }

    /// First `(j, l, on_t?, left, right)` where two matrices differ.
    fn first_difference(&self, other: &Self) -> Option<String> {
        for (name, a, b) in [("T", &self.on_t, &other.on_t), ("S(T)", &self.on_s, &other.on_s)] {
            for (j, (ra, rb)) in a.iter().zip(b).enumerate() {
                for (l, (x, y)) in ra.iter().zip(rb).enumerate() {
                    if x != y {
                        return Some(format!("on {name}_{}^{}: {x} vs {y}", j + 1, l + 1));
                    }
                }
            }
        }
        None
    }

    fn first_nonzero(&self) -> Option<String> {
        let zero = LaurentPoly::zero(self.on_t[0][0].vars());
        self.first_difference(&FunctionalMatrix {
            functional: self.functional,
            on_t: vec![vec![zero.clone(); self.on_t.len()]; self.on_t.len()],
            on_s: vec![vec![zero; self.on_t.len()]; self.on_t.len()],
        })
    }
}

/// `⟨a | b⟩` for `A(R)` with `R = R_n(q, p)`.
pub fn braiding_pair(n: usize, a: &NCPolynomial, b: &NCPolynomial) -> Result<LaurentPoly> {
    let r = build_cg(CgParams::new(n))?;
    FunctionalEngine::new(&r)?.braiding_pair(a, b)
}

/// All `l^±(T_i^k)` for `R_n`, with the vanishing, shift, and pairing
/// identities among them.
pub fn l_functionals(n: usize) -> Result<(CheckSet, Vec<FunctionalMatrix>)> {
    if n < 2 {
        return Err(Error::Precondition("l_functionals needs n >= 2".into()));
    }
    let r = build_cg(CgParams::new(n))?;
    let engine = FunctionalEngine::new(&r)?;
    let mut mats = Vec::with_capacity(2 * n * n);
    for sign in [Sign::Plus, Sign::Minus] {
        for i in 1..=n {
            for k in 1..=n {
                mats.push(engine.matrix(Functional { sign, i, k }));
            }
        }
    }
    let find = |f: Functional| mats.iter().find(|m| m.functional == f).expect("built above");
    let mut checks = CheckSet::new();

    let vanish = |fs: Vec<Functional>| {
        fs.into_iter()
            .find_map(|f| find(f).first_nonzero().map(|v| witness(f.label(), v)))
    };
    checks.push(Check::from_witness(
        "plus_vanishing",
        vanish((2..=n).map(|i| Functional::plus(i, 1)).collect()),
    ));
    checks.push(Check::from_witness(
        "minus_vanishing",
        vanish((1..n).map(|i| Functional::minus(i, n)).collect()),
    ));

    let mut shift = None;
    'outer: for i in 1..n {
        for k in 1..n {
            let (a, b) = (Functional::minus(i, k), Functional::plus(i + 1, k + 1));
            if let Some(d) = find(a).first_difference(find(b)) {
                shift = Some(witness(format!("{} vs {}", a.label(), b.label()), d));
                break 'outer;
            }
        }
    }
    checks.push(Check::from_witness("minus_equals_shifted_plus", shift));

    // (t_i^k | t_j^l) = ⟨T_{i+1}^{k+1} | S(T_j^l)⟩ = R_{ij}^{kl}
    let mut pairing = None;
    'pair: for i in 1..n {
        for k in 1..n {
            let m = find(Functional::plus(i + 1, k + 1));
            for j in 1..n {
                for l in 1..n {
                    let expected = r.get(&[k, l], &[i, j])?;
                    let got = &m.on_s[j - 1][l - 1];
                    if *got != expected {
                        pairing = Some(witness(
                            format!("(t_{i}^{k} | t_{j}^{l})"),
                            format!("{got} vs {expected}"),
                        ));
                        break 'pair;
                    }
                }
            }
        }
    }
    checks.push(Check::from_witness("t_pairing", pairing));
    Ok((checks, mats))
}

/// `Σ_{σ(1)=1} a_σ l^+(T_n^{σ(n)}) ⋯ l^+(T_2^{σ(2)})`.
pub fn d_plus(n: usize, vars: &Vars) -> Result<Vec<(LaurentPoly, Vec<Functional>)>> {
    Permutation::all(n)
        .into_iter()
        .filter(|s| s.apply(1) == 1)
        .map(|s| {
            let fs = (2..=n).rev().map(|i| Functional::plus(i, s.apply(i))).collect();
            Ok((a_sigma(&s, vars)?, fs))
        })
        .collect()
}

/// `Σ_{σ(n)=n} a_σ l^-(T_{n-1}^{σ(n-1)}) ⋯ l^-(T_1^{σ(1)})`.
pub fn d_minus(n: usize, vars: &Vars) -> Result<Vec<(LaurentPoly, Vec<Functional>)>> {
    Permutation::all(n)
        .into_iter()
        .filter(|s| s.apply(n) == n)
        .map(|s| {
            let fs = (1..n).rev().map(|i| Functional::minus(i, s.apply(i))).collect();
            Ok((a_sigma(&s, vars)?, fs))
        })
        .collect()
}

fn combination_on_word(engine: &FunctionalEngine, combo: &[(LaurentPoly, Vec<Functional>)], word: &[Letter]) -> LaurentPoly {
    let mut total = LaurentPoly::zero(engine.vars());
    for (a, fs) in combo {
        total.add_product(a, &engine.eval(fs, word));
    }
    total
}

/// Generator-level checks that `T̄_i^k ↦ l^-(T_i^k)` embeds
/// `A(P R_{n-1} P)` into the dual of `A(R_n)` and that the dual map kills
/// `T_1^n` and `T_n^1`.
pub fn psi_phi_check(n: usize, max_degree: usize) -> Result<CheckSet> {
    if n < 2 {
        return Err(Error::Precondition("psi_phi_check needs n >= 2".into()));
    }
    if max_degree < 2 {
        return Err(Error::Precondition("max_degree must be at least 2".into()));
    }
    let r = build_cg(CgParams::new(n))?;
    let engine = FunctionalEngine::new(&r)?;
    let vars = r.vars().clone();
    let alphabet = Alphabet::T(n);
    let mut checks = CheckSet::new();

    // (a) braiding of A(R̄) on generators equals the pairing of the t's
    let small = build_cg(CgParams::new(n - 1))?;
    let mut braided = None;
    'a: for i in 1..n {
        for k in 1..n {
            for j in 1..n {
                for l in 1..n {
                    // R̄_{ji}^{lk} = (P R_{n-1} P)_{ji}^{lk} = (R_{n-1})_{ij}^{kl}
                    let bar = small.get(&[k, l], &[i, j])?;
                    // (t_i^k | t_j^l) = ⟨T_{i+1}^{k+1} | S(T_j^l)⟩
                    let t_pair = engine.matrix(Functional::plus(i + 1, k + 1)).on_s[j - 1][l - 1].clone();
                    if bar != t_pair {
                        braided = Some(witness(format!("i={i} k={k} j={j} l={l}"), format!("{bar} vs {t_pair}")));
                        break 'a;
                    }
                }
            }
        }
    }
    checks.push(Check::from_witness("braided_generators", braided));

    // (b) both expressions of d agree on every word up to max_degree
    let dp = d_plus(n, &vars)?;
    let dm = d_minus(n, &vars)?;
    let mut words_checked = 0usize;
    let mut d_witness = None;
    'b: for deg in 0..=max_degree {
        for w in alphabet.words(deg) {
            words_checked += 1;
            let x = combination_on_word(&engine, &dp, &w);
            let y = combination_on_word(&engine, &dm, &w);
            if x != y {
                let word = NCPolynomial::zero(alphabet, &vars).word_string(&w);
                d_witness = Some(witness(word, &x - &y));
                break 'b;
            }
        }
    }
    checks.push(
        Check::from_witness("d_expressions_agree", d_witness).with_detail(json!({ "words": words_checked })),
    );

    // (c) every t-monomial vanishes on T_1^n and T_n^1
    let mut phi = None;
    let ts: Vec<Functional> = (1..n)
        .flat_map(|i| (1..n).map(move |k| Functional::minus(i, k)))
        .collect();
    let mut monomials = 0usize;
    'c: for deg in 0..=max_degree {
        for code in 0..ts.len().pow(deg as u32) {
            let mut rest = code;
            let fs: Vec<Functional> = (0..deg)
                .map(|_| {
                    let f = ts[rest % ts.len()];
                    rest /= ts.len();
                    f
                })
                .collect();
            monomials += 1;
            for target in [alphabet.t(1, n), alphabet.t(n, 1)] {
                let v = engine.eval(&fs, &[target]);
                if !v.is_zero() {
                    let label: Vec<String> = fs.iter().map(Functional::label).collect();
                    phi = Some(witness(format!("{} on {}", label.join("*"), alphabet.name(target)), v));
                    break 'c;
                }
            }
        }
    }
    checks.push(Check::from_witness("phi_vanishing", phi).with_detail(json!({ "monomials": monomials })));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::exterior::quantum_determinant;

    fn engine(n: usize) -> FunctionalEngine {
        FunctionalEngine::new(&build_cg(CgParams::new(n)).unwrap()).unwrap()
    }

    fn letter(n: usize, i: usize, k: usize) -> NCPolynomial {
        let a = Alphabet::T(n);
        NCPolynomial::letter(a, &Vars::qp(), a.t(i, k))
    }

    #[test]
    fn generator_pairing_reads_r() {
        let e = engine(2);
        let r = e.r().clone();
        for (i, k, j, l) in [(1, 1, 1, 1), (2, 1, 1, 2), (1, 2, 2, 1), (2, 2, 2, 2), (1, 1, 2, 2)] {
            let v = e.braiding_pair(&letter(2, i, k), &letter(2, j, l)).unwrap();
            assert_eq!(v, r.get(&[l, k], &[j, i]).unwrap(), "{i}{k}{j}{l}");
        }
        assert!(e.braiding_pair(&letter(2, 2, 1), &letter(2, 1, 2)).unwrap().is_zero());
    }

    #[test]
    fn counit_on_both_sides() {
        let e = engine(2);
        let one = NCPolynomial::one(Alphabet::T(2), &Vars::qp());
        assert!(e.braiding_pair(&one, &letter(2, 1, 1)).unwrap().is_one());
        assert!(e.braiding_pair(&one, &letter(2, 1, 2)).unwrap().is_zero());
        assert!(e.braiding_pair(&letter(2, 2, 2), &one).unwrap().is_one());
        assert!(e.braiding_pair(&one, &one).unwrap().is_one());
    }

    #[test]
    fn determinant_pairs_with_generators() {
        let det = quantum_determinant(2, &Vars::qp()).unwrap();
        assert!(braiding_pair(2, &det, &letter(2, 1, 1)).unwrap().is_one());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let x = NCPolynomial::letter(Alphabet::X(2), &Vars::qp(), 0);
        assert!(matches!(braiding_pair(2, &x, &letter(2, 1, 1)), Err(Error::Alphabet(_))));
    }

    #[test]
    fn l_functional_identities() {
        for n in 2..=4 {
            let (checks, mats) = l_functionals(n).unwrap();
            assert!(checks.all_pass(), "n={n}: {checks:?}");
            assert_eq!(mats.len(), 2 * n * n);
        }
    }

    #[test]
    fn l_functional_examples() {
        let e = engine(2);
        assert!(e.matrix(Functional::plus(2, 1)).is_zero());
        let e3 = engine(3);
        assert!(e3.matrix(Functional::minus(1, 3)).is_zero());
        assert_eq!(e3.matrix(Functional::minus(1, 1)).on_t, e3.matrix(Functional::plus(2, 2)).on_t);
        assert_eq!(e3.matrix(Functional::minus(1, 1)).on_s, e3.matrix(Functional::plus(2, 2)).on_s);
        // l+(T_1^1) is not zero
        assert!(!e.matrix(Functional::plus(1, 1)).is_zero());
    }

    #[test]
    fn shifted_functionals_agree_on_words() {
        let e = engine(3);
        let a = Alphabet::T(3);
        for w in a.words(2) {
            assert_eq!(
                e.eval(&[Functional::minus(1, 2)], &w),
                e.eval(&[Functional::plus(2, 3)], &w)
            );
        }
    }

    #[test]
    fn psi_phi_small_cases() {
        let c2 = psi_phi_check(2, 3).unwrap();
        assert!(c2.all_pass(), "{c2:?}");
        let c3 = psi_phi_check(3, 3).unwrap();
        assert!(c3.all_pass(), "{c3:?}");
        assert_eq!(c3.get("d_expressions_agree").unwrap().detail, Some(json!({"words": 1 + 9 + 81 + 729})));
    }

    #[test]
    fn non_hecke_r_is_rejected() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let bad = crate::rmatrix::with_entry_scaled(&r, [1, 2], [2, 1], &crate::laurent::rat(2)).unwrap();
        assert!(FunctionalEngine::new(&bad).is_err());
    }
}
