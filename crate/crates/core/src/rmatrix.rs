//! The two-parameter Cremmer–Gervais R-matrix and its matrix-level identities.
//!
//! Every check here is an exact identity in the Laurent ring: nothing is
//! specialized, and a failure carries the first offending entry.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};
use crate::report::{witness, Check, CheckSet, Witness};
use crate::tensor::SparseOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CgParams {
    pub n: usize,
    /// Impose `q = p^n`; the matrix then lives in `Q[p^±1]`.
    pub one_param: bool,
}

impl CgParams {
    pub fn new(n: usize) -> Self {
        CgParams { n, one_param: false }
    }

    pub fn one_param(n: usize) -> Self {
        CgParams { n, one_param: true }
    }
}

/// The scalars `q` and `p` inside the coefficient ring of an operator.
#[derive(Clone, Debug)]
pub struct Scalars {
    pub vars: Vars,
    pub q: LaurentPoly,
    pub p: LaurentPoly,
}

impl Scalars {
    pub fn two_param() -> Self {
        let vars = Vars::qp();
        Scalars {
            q: LaurentPoly::unit(&vars, vec![1, 0]),
            p: LaurentPoly::unit(&vars, vec![0, 1]),
            vars,
        }
    }

    /// `Q[p^±1]` with `q = p^n`.
    pub fn one_param(n: usize) -> Self {
        let vars = Vars::new(&["p"]);
        Scalars {
            q: LaurentPoly::unit(&vars, vec![n as i64]),
            p: LaurentPoly::unit(&vars, vec![1]),
            vars,
        }
    }

    /// Recovers `q` and `p` from a ring: either it names both, or it names
    /// only `p` and `q = p^n`.
    pub fn of(vars: &Vars, n: usize) -> Result<Self> {
        match (vars.index_of("q"), vars.index_of("p")) {
            (Ok(_), Ok(_)) => Ok(Scalars {
                q: LaurentPoly::var_pow(vars, "q", 1)?,
                p: LaurentPoly::var_pow(vars, "p", 1)?,
                vars: vars.clone(),
            }),
            (Err(_), Ok(_)) if vars.len() == 1 => Ok(Scalars {
                q: LaurentPoly::var_pow(vars, "p", n as i64)?,
                p: LaurentPoly::var_pow(vars, "p", 1)?,
                vars: vars.clone(),
            }),
            _ => Err(Error::UnknownVariable("p".into())),
        }
    }

    /// `q - q^{-1}`.
    pub fn q_diff(&self) -> LaurentPoly {
        &self.q - &self.q.inverse_unit().expect("q is a unit")
    }

    pub fn p_pow(&self, k: i64) -> LaurentPoly {
        self.p.pow(k).expect("p is a unit")
    }
}

/// `p R_{ij}^{kl}` as a function of the four indices, before dividing by `p`.
fn cg_entry(s: &Scalars, i: usize, j: usize, k: usize, l: usize) -> LaurentPoly {
    let (i_, j_, k_, l_) = (i as i64, j as i64, k as i64, l as i64);
    let weight = s.p_pow(2 * (l_ - i_) - 1);
    let qinv = s.q.inverse_unit().expect("q is a unit");
    if i == k && j == l {
        let c = if i >= j { s.q.clone() } else { qinv };
        return &c * &weight;
    }
    if i_ + j_ != k_ + l_ {
        return LaurentPoly::zero(&s.vars);
    }
    if j <= k && k < i {
        &s.q_diff() * &weight
    } else if i < k && k < j {
        &(-s.q_diff()) * &weight
    } else {
        LaurentPoly::zero(&s.vars)
    }
}

/// Builds `R_n` over the given scalars.
pub fn build_cg_over(n: usize, s: &Scalars) -> SparseOperator {
    let mut r = SparseOperator::zero(n, 2, &s.vars);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let v = cg_entry(s, i, j, k, l);
                    if !v.is_zero() {
                        r.set(&[k, l], &[i, j], v).expect("indices in range");
                    }
                }
            }
        }
    }
    r
}

/// The Cremmer–Gervais R-matrix `R_n(q, p)`, or `R_n(p^n, p)` in the
/// one-parameter case.
pub fn build_cg(params: CgParams) -> Result<SparseOperator> {
    if params.n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let s = if params.one_param {
        Scalars::one_param(params.n)
    } else {
        Scalars::two_param()
    };
    Ok(build_cg_over(params.n, &s))
}

fn diff_check(name: &str, lhs: &SparseOperator, rhs: &SparseOperator) -> Result<Check> {
    Ok(Check::from_witness(
        name,
        lhs.first_difference(rhs)?.as_ref().map(Witness::from),
    ))
}

/// Checks `R12 R13 R23 = R23 R13 R12` and, for `Ř = RP`, the braid relation
/// `Ř12 Ř23 Ř12 = Ř23 Ř12 Ř23`.
pub fn check_yang_baxter(r: &SparseOperator) -> Result<CheckSet> {
    require_two_legs(r)?;
    let r12 = r.embed_leg((1, 2), 3)?;
    let r13 = r.embed_leg((1, 3), 3)?;
    let r23 = r.embed_leg((2, 3), 3)?;
    let lhs = r12.compose(&r13)?.compose(&r23)?;
    let rhs = r23.compose(&r13)?.compose(&r12)?;
    let mut out = CheckSet::new();
    out.push(diff_check("ybe", &lhs, &rhs)?);

    let braid = r.compose(&SparseOperator::flip(r.n(), r.vars()))?;
    let b12 = braid.embed_leg((1, 2), 3)?;
    let b23 = braid.embed_leg((2, 3), 3)?;
    let lhs = b12.compose(&b23)?.compose(&b12)?;
    let rhs = b23.compose(&b12)?.compose(&b23)?;
    out.push(diff_check("braid", &lhs, &rhs)?);
    Ok(out)
}

fn require_two_legs(r: &SparseOperator) -> Result<()> {
    if r.legs() != 2 {
        return Err(Error::Dimension(format!(
            "expected a 2-leg operator, got {} legs",
            r.legs()
        )));
    }
    Ok(())
}

/// `pRP`.
pub fn braid_operator(r: &SparseOperator) -> Result<SparseOperator> {
    require_two_legs(r)?;
    let s = Scalars::of(r.vars(), r.n())?;
    r.compose(&SparseOperator::flip(r.n(), r.vars()))?.scale(&s.p)
}

/// Checks `(pRP - q)(pRP + q^{-1}) = 0`.
pub fn check_hecke(r: &SparseOperator) -> Result<Check> {
    let s = Scalars::of(r.vars(), r.n())?;
    let b = braid_operator(r)?;
    let q_id = SparseOperator::scalar(r.n(), 2, &s.q);
    let qinv_id = SparseOperator::scalar(r.n(), 2, &s.q.inverse_unit()?);
    let product = b.sub(&q_id)?.compose(&b.add(&qinv_id)?)?;
    let zero = SparseOperator::zero(r.n(), 2, r.vars());
    diff_check("hecke", &product, &zero)
}

/// `R^{-1} = p^2 PRP - p(q - q^{-1}) P`, valid for Hecke-type `R`.
pub fn hecke_inverse(r: &SparseOperator) -> Result<SparseOperator> {
    let hecke = check_hecke(r)?;
    if !hecke.passed() {
        let w = hecke.witness.map(|w| w.location).unwrap_or_default();
        return Err(Error::Precondition(format!("Hecke relation fails at {w}")));
    }
    let s = Scalars::of(r.vars(), r.n())?;
    let p = SparseOperator::flip(r.n(), r.vars());
    let prp = p.compose(r)?.compose(&p)?;
    prp.scale(&s.p_pow(2))?.sub(&p.scale(&(&s.p * &s.q_diff()))?)
}

/// Entrywise `q ↦ q^{-1}, p ↦ p^{-1}`.
pub fn substitute_inverse_op(r: &SparseOperator) -> SparseOperator {
    r.map_entries(LaurentPoly::substitute_inverse)
}

/// Checks the inverse, shift and homogeneity identities of `R_n` entrywise.
pub fn check_structure_identities(n: usize) -> Result<CheckSet> {
    if n < 2 {
        return Err(Error::Precondition("structure identities need n >= 2".into()));
    }
    let r = build_cg(CgParams::new(n))?;
    let rinv = hecke_inverse(&r)?;
    let id = SparseOperator::identity(n, 2, r.vars());
    let mut out = CheckSet::new();

    out.push(diff_check("inverse_left", &r.compose(&rinv)?, &id)?);
    out.push(diff_check("inverse_right", &rinv.compose(&r)?, &id)?);
    out.push(diff_check(
        "inverse_is_inverted_parameters",
        &rinv,
        &substitute_inverse_op(&r),
    )?);

    // (R^{-1})_{ij}^{kl} = R_{j,i+1}^{l,k+1} for i, k < n.
    let mut w = None;
    'outer: for i in 1..n {
        for k in 1..n {
            for j in 1..=n {
                for l in 1..=n {
                    let lhs = rinv.get(&[k, l], &[i, j])?;
                    let rhs = r.get(&[l, k + 1], &[j, i + 1])?;
                    if lhs != rhs {
                        w = Some(witness(
                            format!("(i,j,k,l)=({i},{j},{k},{l})"),
                            &lhs - &rhs,
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    out.push(Check::from_witness("inverse_index_shift", w));

    let smaller = build_cg(CgParams::new(n - 1))?;
    out.push(Check::from_witness(
        "shift_embedding",
        compare_shifted(&r, &smaller, 1)?,
    ));
    out.push(Check::from_witness("corner", compare_shifted(&r, &smaller, 0)?));

    let w = r
        .entries()
        .find(|(row, col, _)| row[0] + row[1] != col[0] + col[1])
        .map(|(row, col, v)| witness(format!("row {row:?} col {col:?}"), v));
    out.push(Check::from_witness("homogeneity", w));
    Ok(out)
}

/// Compares `big` at indices shifted by `offset` with `small`, over all
/// indices of `small`.
fn compare_shifted(
    big: &SparseOperator,
    small: &SparseOperator,
    offset: usize,
) -> Result<Option<Witness>> {
    let m = small.n();
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=m {
                for l in 1..=m {
                    let lhs = big.get(&[k + offset, l + offset], &[i + offset, j + offset])?;
                    let rhs = small.get(&[k, l], &[i, j])?;
                    if lhs != rhs {
                        return Ok(Some(witness(
                            format!("(i,j,k,l)=({i},{j},{k},{l}) offset {offset}"),
                            &lhs - &rhs,
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The diagonal twist `Q = Σ p^{j-i} e_ii ⊗ e_jj` over the given scalars.
pub fn build_twist_q_over(n: usize, s: &Scalars) -> SparseOperator {
    let mut q = SparseOperator::zero(n, 2, &s.vars);
    for i in 1..=n {
        for j in 1..=n {
            q.set(&[i, j], &[i, j], s.p_pow(j as i64 - i as i64))
                .expect("indices in range");
        }
    }
    q
}

pub fn build_twist_q(n: usize) -> Result<SparseOperator> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(build_twist_q_over(n, &Scalars::two_param()))
}

/// `R_σ = Q R (P Q^{-1} P)`.
pub fn twist(r: &SparseOperator, q: &SparseOperator) -> Result<SparseOperator> {
    let qinv = q.diagonal_inverse()?;
    let p = SparseOperator::flip(r.n(), r.vars());
    q.compose(r)?.compose(&p.compose(&qinv)?.compose(&p)?)
}

/// `pR(q, p) = Q(p) R(q, 1) Q(p)` with the given `Q(p)`.
pub fn check_twist_identity_with(n: usize, q_op: &SparseOperator) -> Result<Check> {
    let s = Scalars::two_param();
    let r = build_cg(CgParams::new(n))?;
    let at_p_one = r.map_ring(&s.vars, |v| {
        v.substitute_monomials(&s.vars, &[vec![1, 0], vec![0, 0]])
    })?;
    let lhs = r.scale(&s.p)?;
    let rhs = q_op.compose(&at_p_one)?.compose(q_op)?;
    diff_check("twist_identity", &lhs, &rhs)
}

pub fn check_twist_identity(n: usize) -> Result<Check> {
    if n < 2 {
        return Err(Error::Precondition("twist identity needs n >= 2".into()));
    }
    check_twist_identity_with(n, &build_twist_q(n)?)
}

/// The three-variable form `p' R(q, p p') = Q(p') R(q, p) Q(p')` and the
/// group law `Q(p) Q(p') = Q(p p')`, over `Q[q^±1, p^±1, p'^±1]`.
pub fn check_twist_identity_three_var(n: usize) -> Result<CheckSet> {
    let vars = Vars::new(&["q", "p", "p'"]);
    let two = Scalars::two_param();
    let r = build_cg(CgParams::new(n))?;
    let lift = |images: [Vec<i64>; 2]| {
        r.map_ring(&vars, |v| v.substitute_monomials(&vars, &images))
    };
    let r_qp = lift([vec![1, 0, 0], vec![0, 1, 0]])?;
    let r_q_ppp = lift([vec![1, 0, 0], vec![0, 1, 1]])?;
    let pp = LaurentPoly::unit(&vars, vec![0, 0, 1]);

    let q_of = |p_image: Vec<i64>| -> Result<SparseOperator> {
        let images = vec![vec![1, 0, 0], p_image];
        build_twist_q_over(n, &two).map_ring(&vars, |v| v.substitute_monomials(&vars, &images))
    };
    let q_pp = q_of(vec![0, 0, 1])?;
    let q_p = q_of(vec![0, 1, 0])?;
    let q_prod = q_of(vec![0, 1, 1])?;

    let mut out = CheckSet::new();
    out.push(diff_check(
        "twist_identity_three_var",
        &r_q_ppp.scale(&pp)?,
        &q_pp.compose(&r_qp)?.compose(&q_pp)?,
    )?);
    out.push(diff_check("q_group_law", &q_p.compose(&q_pp)?, &q_prod)?);
    Ok(out)
}

/// The full twist suite for `R_n`.
pub fn check_twist_suite(n: usize) -> Result<CheckSet> {
    if n < 2 {
        return Err(Error::Precondition("twist suite needs n >= 2".into()));
    }
    let r = build_cg(CgParams::new(n))?;
    let q = build_twist_q(n)?;
    let p = SparseOperator::flip(n, r.vars());
    let qinv = q.diagonal_inverse()?;
    let mut out = CheckSet::new();
    out.push(diff_check(
        "q_flip_inverse",
        &p.compose(&qinv)?.compose(&p)?,
        &q,
    )?);
    let twisted = twist(&r, &q)?;
    out.extend(check_yang_baxter(&twisted)?.prefixed("twisted"));
    out.push(diff_check(
        "twisted_braid_conjugation",
        &twisted.compose(&p)?,
        &q.compose(&r.compose(&p)?)?.compose(&qinv)?,
    )?);
    out.push(check_twist_identity(n)?);
    out.extend(check_twist_identity_three_var(n)?);
    Ok(out)
}

/// The first-order term `r̂` of `R(e^{u_q h}, e^{u_p h}) = 1 + h r̂ + O(h^2)`
/// and the outcome of its classical Yang–Baxter check.
#[derive(Clone, Debug)]
pub struct ClassicalLimit {
    /// Constant-entry operator over the empty variable list.
    pub r: SparseOperator,
    pub cybe: Check,
}

pub fn rational_vars() -> Vars {
    Vars::new::<&str>(&[])
}

pub fn constant(c: BigRational) -> LaurentPoly {
    LaurentPoly::constant(&rational_vars(), c)
}

pub fn semiclassical_limit(r: &SparseOperator, direction: &[BigRational]) -> Result<ClassicalLimit> {
    require_two_legs(r)?;
    let cv = rational_vars();
    let mut at_one = SparseOperator::zero(r.n(), 2, &cv);
    let mut deriv = SparseOperator::zero(r.n(), 2, &cv);
    for (row, col, v) in r.entries() {
        let (value, d) = v.first_order(direction)?;
        at_one.set(&row, &col, constant(value))?;
        deriv.set(&row, &col, constant(d))?;
    }
    if !at_one.is_identity() {
        return Err(Error::Precondition(
            "R at q = p = 1 is not the identity".into(),
        ));
    }
    let residual = cybe_residual(&deriv)?;
    let w = residual
        .entries()
        .next()
        .map(|(row, col, v)| witness(format!("row {row:?} col {col:?}"), v));
    Ok(ClassicalLimit {
        r: deriv,
        cybe: Check::from_witness("cybe", w),
    })
}

/// `[r12, r13] + [r12, r23] + [r13, r23]` as a 3-leg operator.
pub fn cybe_residual(r: &SparseOperator) -> Result<SparseOperator> {
    require_two_legs(r)?;
    let r12 = r.embed_leg((1, 2), 3)?;
    let r13 = r.embed_leg((1, 3), 3)?;
    let r23 = r.embed_leg((2, 3), 3)?;
    let bracket = |a: &SparseOperator, b: &SparseOperator| -> Result<SparseOperator> {
        a.compose(b)?.sub(&b.compose(a)?)
    };
    bracket(&r12, &r13)?
        .add(&bracket(&r12, &r23)?)?
        .add(&bracket(&r13, &r23)?)
}

/// Record of one entry in the R-matrix file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RMatrixEntry {
    #[serde(rename = "in")]
    pub input: [usize; 2],
    pub out: [usize; 2],
    pub coeff: Vec<Vec<Value>>,
}

/// The R-matrix document: `n`, `vars` and entries sorted by input pair then
/// output pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RMatrixFile {
    pub n: usize,
    pub vars: Vec<String>,
    pub entries: Vec<RMatrixEntry>,
}

impl RMatrixFile {
    pub fn from_operator(r: &SparseOperator) -> Result<Self> {
        require_two_legs(r)?;
        // entries() walks columns then rows, which is exactly (in, out) order.
        let entries = r
            .entries()
            .map(|(row, col, v)| RMatrixEntry {
                input: [col[0], col[1]],
                out: [row[0], row[1]],
                coeff: v.to_rows(),
            })
            .collect();
        Ok(RMatrixFile {
            n: r.n(),
            vars: r.vars().names().to_vec(),
            entries,
        })
    }

    pub fn to_operator(&self) -> Result<SparseOperator> {
        if self.n == 0 {
            return Err(Error::Format("n must be positive".into()));
        }
        let vars = Vars::new(&self.vars);
        let mut r = SparseOperator::zero(self.n, 2, &vars);
        let mut seen = BTreeMap::new();
        for e in &self.entries {
            let v = LaurentPoly::from_rows(&vars, &e.coeff)?;
            if v.is_zero() {
                return Err(Error::Format(format!("explicit zero entry {e:?}")));
            }
            if seen.insert((e.input, e.out), ()).is_some() {
                return Err(Error::Format(format!("duplicate entry in {:?} out {:?}", e.input, e.out)));
            }
            r.set(&e.out, &e.input, v)?;
        }
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("R-matrix serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Summary of `R` for reports: entry count and the value table.
pub fn describe(r: &SparseOperator) -> Value {
    json!({
        "n": r.n(),
        "nonzero_entries": r.nnz(),
        "vars": r.vars().names(),
    })
}

/// Identity-at-one sanity helper used by tests and the CLI.
pub fn value_at_one_is_identity(r: &SparseOperator) -> Result<bool> {
    let ones = vec![BigRational::one(); r.vars().len()];
    let cv = rational_vars();
    let evaluated = r.map_ring(&cv, |v| Ok(constant(v.evaluate(&ones)?)))?;
    Ok(evaluated.is_identity())
}

/// Returns `r` with one entry multiplied by `c`; used for negative controls.
pub fn with_entry_scaled(
    r: &SparseOperator,
    row: [usize; 2],
    col: [usize; 2],
    c: &BigRational,
) -> Result<SparseOperator> {
    let mut out = r.clone();
    let v = r.get(&row, &col)?;
    out.set(&row, &col, v.scale(c))?;
    Ok(out)
}

/// Returns `r` with one entry replaced by zero; used for negative controls.
pub fn with_entry_zeroed(r: &SparseOperator, row: [usize; 2], col: [usize; 2]) -> Result<SparseOperator> {
    let mut out = r.clone();
    out.set(&row, &col, LaurentPoly::zero(r.vars()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::rat;

    fn s() -> Scalars {
        Scalars::two_param()
    }

    fn qp(a: i64, b: i64) -> LaurentPoly {
        LaurentPoly::unit(&Vars::qp(), vec![a, b])
    }

    /// Direct expansion of the operator sum defining `R_n`, written with
    /// `e_ab ⊗ e_cd`, `e_ab(e_a) = e_b`: the term contributes to `R_{ac}^{bd}`.
    fn oracle_from_sum(n: usize) -> SparseOperator {
        let s = s();
        let mut out = SparseOperator::zero(n, 2, &s.vars);
        let mut add = |a: usize, b: usize, c: usize, d: usize, v: LaurentPoly| {
            let cur = out.get(&[b, d], &[a, c]).unwrap();
            out.set(&[b, d], &[a, c], &cur + &v).unwrap();
        };
        let pinv = s.p_pow(-1);
        let qinv = s.q.inverse_unit().unwrap();
        for i in 1..=n {
            add(i, i, i, i, &pinv * &s.q);
        }
        for i in 1..=n {
            for j in 1..=n {
                let e = -2 * (i as i64 - j as i64);
                if i > j {
                    add(i, i, j, j, &(&pinv * &s.q) * &s.p_pow(e));
                }
                if i < j {
                    add(i, i, j, j, &(&pinv * &qinv) * &s.p_pow(e));
                    for k in 1..j - i {
                        add(i, j - k, j, i + k, &(&pinv * &(-s.q_diff())) * &s.p_pow(2 * k as i64));
                    }
                }
                if i > j {
                    for k in 0..i - j {
                        add(i, j + k, j, i - k, &(&pinv * &s.q_diff()) * &s.p_pow(-2 * k as i64));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn entry_table_matches_operator_sum() {
        for n in 1..=5 {
            assert_eq!(build_cg(CgParams::new(n)).unwrap(), oracle_from_sum(n), "n = {n}");
        }
    }

    #[test]
    fn n2_has_five_entries() {
        let r = build_cg(CgParams::new(2)).unwrap();
        assert_eq!(r.nnz(), 5);
        assert_eq!(r.get(&[1, 1], &[1, 1]).unwrap(), qp(1, -1));
        assert_eq!(r.get(&[2, 2], &[2, 2]).unwrap(), qp(1, -1));
        assert_eq!(r.get(&[1, 2], &[1, 2]).unwrap(), qp(-1, 1));
        assert_eq!(r.get(&[2, 1], &[2, 1]).unwrap(), qp(1, -3));
        assert_eq!(r.get(&[1, 2], &[2, 1]).unwrap(), qp(1, -1) - qp(-1, -1));
    }

    #[test]
    fn n1_is_scalar() {
        let r = build_cg(CgParams::new(1)).unwrap();
        assert_eq!(r.nnz(), 1);
        assert_eq!(r.get(&[1, 1], &[1, 1]).unwrap(), qp(1, -1));
    }

    #[test]
    fn identity_at_one() {
        for n in 1..=5 {
            assert!(value_at_one_is_identity(&build_cg(CgParams::new(n)).unwrap()).unwrap());
        }
    }

    #[test]
    fn one_param_substitutes_q() {
        let r = build_cg(CgParams::one_param(3)).unwrap();
        assert_eq!(r.vars().names(), ["p".to_string()]);
        let two = build_cg(CgParams::new(3)).unwrap();
        let pv = Vars::new(&["p"]);
        let sub = two
            .map_ring(&pv, |v| v.substitute_monomials(&pv, &[vec![3], vec![1]]))
            .unwrap();
        assert_eq!(r, sub);
    }

    #[test]
    fn ybe_holds_n3() {
        let r = build_cg(CgParams::new(3)).unwrap();
        assert!(check_yang_baxter(&r).unwrap().all_pass());
        assert!(check_yang_baxter(&SparseOperator::identity(3, 2, &Vars::qp()))
            .unwrap()
            .all_pass());
    }

    #[test]
    fn corrupted_r_fails_ybe_with_witness() {
        let r = build_cg(CgParams::new(2)).unwrap();
        // Zeroing the single off-diagonal entry leaves a diagonal operator,
        // which solves the YBE; doubling it does not.
        let diagonal = with_entry_zeroed(&r, [1, 2], [2, 1]).unwrap();
        assert!(check_yang_baxter(&diagonal).unwrap().all_pass());
        let bad = with_entry_scaled(&r, [1, 2], [2, 1], &rat(2)).unwrap();
        let report = check_yang_baxter(&bad).unwrap();
        let ybe = report.get("ybe").unwrap();
        assert!(!ybe.passed());
        assert!(ybe.witness.is_some());
    }

    #[test]
    fn hecke_holds_and_identity_fails() {
        for n in [2, 4] {
            assert!(check_hecke(&build_cg(CgParams::new(n)).unwrap()).unwrap().passed());
        }
        let id = SparseOperator::identity(2, 2, &Vars::qp());
        let c = check_hecke(&id).unwrap();
        assert!(!c.passed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn one_param_hecke_and_ybe() {
        let r = build_cg(CgParams::one_param(3)).unwrap();
        assert!(check_hecke(&r).unwrap().passed());
        assert!(check_yang_baxter(&r).unwrap().all_pass());
    }

    #[test]
    fn hecke_inverse_entries() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let rinv = hecke_inverse(&r).unwrap();
        assert_eq!(rinv.get(&[1, 1], &[1, 1]).unwrap(), qp(-1, 1));
        assert_eq!(rinv.get(&[1, 2], &[2, 1]).unwrap(), qp(-1, 1) - qp(1, 1));
        for n in 2..=4 {
            let r = build_cg(CgParams::new(n)).unwrap();
            let rinv = hecke_inverse(&r).unwrap();
            assert!(r.compose(&rinv).unwrap().is_identity());
            assert!(rinv.compose(&r).unwrap().is_identity());
        }
        let id = SparseOperator::identity(2, 2, &Vars::qp());
        assert!(matches!(hecke_inverse(&id), Err(Error::Precondition(_))));
    }

    #[test]
    fn structure_identities_n3() {
        let set = check_structure_identities(3).unwrap();
        assert!(set.all_pass(), "{set:?}");
        assert_eq!(set.checks.len(), 7);
    }

    #[test]
    fn twist_q_n2() {
        let q = build_twist_q(2).unwrap();
        assert_eq!(q.nnz(), 4);
        assert!(q.get(&[1, 1], &[1, 1]).unwrap().is_one());
        assert_eq!(q.get(&[1, 2], &[1, 2]).unwrap(), qp(0, 1));
        assert_eq!(q.get(&[2, 1], &[2, 1]).unwrap(), qp(0, -1));
        assert!(q.get(&[2, 2], &[2, 2]).unwrap().is_one());
        let ones = [rat(1), rat(1)];
        let at_one = q
            .map_ring(&rational_vars(), |v| Ok(constant(v.evaluate(&ones)?)))
            .unwrap();
        assert!(at_one.is_identity());
    }

    #[test]
    fn twist_by_identity_is_noop() {
        let r = build_cg(CgParams::new(3)).unwrap();
        let id = SparseOperator::identity(3, 2, &Vars::qp());
        assert_eq!(twist(&r, &id).unwrap(), r);
    }

    #[test]
    fn twist_rejects_singular_q() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let q = with_entry_zeroed(&build_twist_q(2).unwrap(), [1, 2], [1, 2]).unwrap();
        assert!(twist(&r, &q).is_err());
    }

    #[test]
    fn twist_suite_n2_n3() {
        for n in [2, 3] {
            let set = check_twist_suite(n).unwrap();
            assert!(set.all_pass(), "n={n}: {set:?}");
        }
    }

    #[test]
    fn corrupted_q_fails_twist_identity() {
        let mut q = build_twist_q(2).unwrap();
        q.set(&[1, 2], &[1, 2], qp(0, 2)).unwrap();
        let c = check_twist_identity_with(2, &q).unwrap();
        assert!(!c.passed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn semiclassical_examples() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let lim = semiclassical_limit(&r, &[rat(1), rat(1)]).unwrap();
        assert!(lim.r.get(&[1, 1], &[1, 1]).unwrap().is_zero());
        assert_eq!(lim.r.get(&[1, 2], &[2, 1]).unwrap(), constant(rat(2)));
        let lim = semiclassical_limit(&r, &[rat(2), rat(1)]).unwrap();
        assert_eq!(lim.r.get(&[2, 1], &[2, 1]).unwrap(), constant(rat(-1)));
        for n in [2, 3] {
            let r = build_cg(CgParams::new(n)).unwrap();
            let lim = semiclassical_limit(&r, &[rat(n as i64), rat(1)]).unwrap();
            assert!(lim.cybe.passed(), "n = {n}");
        }
    }

    #[test]
    fn semiclassical_requires_identity_at_one() {
        let bad = SparseOperator::scalar(2, 2, &LaurentPoly::from_int(&Vars::qp(), 2));
        assert!(semiclassical_limit(&bad, &[rat(1), rat(1)]).is_err());
    }

    #[test]
    fn rmatrix_file_round_trip_is_bit_exact() {
        let r = build_cg(CgParams::new(3)).unwrap();
        let text = RMatrixFile::from_operator(&r).unwrap().to_json();
        let back = RMatrixFile::from_json(&text).unwrap().to_operator().unwrap();
        assert_eq!(back, r);
        assert_eq!(RMatrixFile::from_operator(&back).unwrap().to_json(), text);
    }
}
