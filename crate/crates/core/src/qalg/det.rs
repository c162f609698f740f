//! Pairings of the quantum determinant with generators, and its normality.

use serde_json::json;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};
use crate::qalg::exterior::quantum_determinant;
use crate::qalg::functionals::FunctionalEngine;
use crate::qalg::graded::{ideal_membership_bounded, Mode, DEFAULT_TRIALS};
use crate::qalg::ncpoly::{Alphabet, NCPolynomial};
use crate::qalg::presentation::{frt_relations, QuadraticPresentation};
use crate::report::{witness, Check, CheckSet};
use crate::rmatrix::{build_cg, CgParams, Scalars};

/// `q^{-1} p^n`, the unit in which all determinant pairings are powers.
pub fn det_unit(n: usize, vars: &Vars) -> Result<LaurentPoly> {
    let s = Scalars::of(vars, n)?;
    Ok(&s.q.inverse_unit()? * &s.p_pow(n as i64))
}

/// Expected `⟨det_q | T_i^k⟩`.
pub fn expected_det_left(n: usize, i: usize, k: usize, vars: &Vars) -> Result<LaurentPoly> {
    if i != k {
        return Ok(LaurentPoly::zero(vars));
    }
    det_unit(n, vars)?.pow(n as i64 - 2 * i as i64)
}

/// Expected `⟨T_i^k | det_q⟩`.
pub fn expected_det_right(n: usize, i: usize, k: usize, vars: &Vars) -> Result<LaurentPoly> {
    if i != k {
        return Ok(LaurentPoly::zero(vars));
    }
    det_unit(n, vars)?.pow(-(n as i64 - 2 * i as i64 + 2))
}

/// `T_i^k det_q - (q^{-1} p^n)^{2(i-k)} det_q T_i^k`.
pub fn normality_element(n: usize, i: usize, k: usize, vars: &Vars) -> Result<NCPolynomial> {
    let alphabet = Alphabet::T(n);
    let det = quantum_determinant(n, vars)?;
    let t = NCPolynomial::letter(alphabet, vars, alphabet.t(i, k));
    let factor = det_unit(n, vars)?.pow(2 * (i as i64 - k as i64))?;
    t.mul(&det)?.sub(&det.mul(&t)?.scale(&factor))
}

/// Pairing formulas for every generator and unit-ness of the values.
pub fn check_det_pairings(n: usize) -> Result<CheckSet> {
    if n < 2 {
        return Err(Error::Precondition("determinant checks need n >= 2".into()));
    }
    let r = build_cg(CgParams::new(n))?;
    let vars = r.vars().clone();
    let engine = FunctionalEngine::new(&r)?;
    let alphabet = Alphabet::T(n);
    let det = quantum_determinant(n, &vars)?;
    let mut left = None;
    let mut right = None;
    let mut units = None;
    for i in 1..=n {
        for k in 1..=n {
            let t = NCPolynomial::letter(alphabet, &vars, alphabet.t(i, k));
            let got_left = engine.braiding_pair(&det, &t)?;
            let got_right = engine.braiding_pair(&t, &det)?;
            let want_left = expected_det_left(n, i, k, &vars)?;
            let want_right = expected_det_right(n, i, k, &vars)?;
            if left.is_none() && got_left != want_left {
                left = Some(witness(format!("<det_q | T_{i}^{k}>"), format!("{got_left} vs {want_left}")));
            }
            if right.is_none() && got_right != want_right {
                right = Some(witness(format!("<T_{i}^{k} | det_q>"), format!("{got_right} vs {want_right}")));
            }
            if units.is_none() && i == k {
                for (name, v) in [("<det_q | T>", &got_left), ("<T | det_q>", &got_right)] {
                    if !v.is_monomial() {
                        units = Some(witness(format!("{name} at i=k={i}"), v));
                    }
                }
            }
        }
    }
    let mut checks = CheckSet::new();
    checks.push(Check::from_witness("det_pairing_left", left));
    checks.push(Check::from_witness("det_pairing_right", right));
    checks.push(Check::from_witness("det_pairings_are_units", units));
    Ok(checks)
}

fn first_non_normal(n: usize, pres: &QuadraticPresentation, mode: Mode, vars: &Vars) -> Result<Option<(usize, usize)>> {
    for i in 1..=n {
        for k in 1..=n {
            let elem = normality_element(n, i, k, vars)?;
            if !ideal_membership_bounded(&elem, pres, mode, n + 1)? {
                return Ok(Some((i, k)));
            }
        }
    }
    Ok(None)
}

/// Normality of `det_q` in degree `n + 1`: exact for `n = 2`, otherwise at
/// `DEFAULT_TRIALS` random points modulo `modulus` (seeds `seed, seed + 1,
/// ...`), each trial recorded separately; passes only if every trial does.
pub fn check_det_normality(n: usize, modulus: u64, seed: u64) -> Result<Check> {
    if n < 2 {
        return Err(Error::Precondition("determinant checks need n >= 2".into()));
    }
    let r = build_cg(CgParams::new(n))?;
    let vars = r.vars().clone();
    let pres = frt_relations(&r)?;
    if n == 2 {
        let bad = first_non_normal(n, &pres, Mode::Exact, &vars)?;
        return Ok(Check::from_witness(
            "det_normal",
            bad.map(|(i, k)| witness(format!("(i, k) = ({i}, {k})"), "not in the relation ideal")),
        )
        .with_detail(json!({ "mode": "exact" })));
    }
    let mut per_trial = Vec::with_capacity(DEFAULT_TRIALS);
    let mut failure = None;
    for t in 0..DEFAULT_TRIALS {
        let mode = Mode::Specialized {
            modulus,
            seed: seed.wrapping_add(t as u64),
            trials: 1,
        };
        let bad = first_non_normal(n, &pres, mode, &vars)?;
        if failure.is_none() {
            failure = bad.map(|(i, k)| witness(format!("trial {t}, (i, k) = ({i}, {k})"), "not in the relation ideal"));
        }
        per_trial.push(bad.is_none());
    }
    Ok(Check::from_witness("det_normal", failure).with_detail(json!({
        "mode": {"modulus": modulus.to_string(), "seed": seed, "trials": DEFAULT_TRIALS},
        "per_trial": per_trial,
    })))
}

/// [`check_det_pairings`] together with [`check_det_normality`].
pub fn check_det_properties(n: usize, modulus: u64, seed: u64) -> Result<CheckSet> {
    let mut checks = check_det_pairings(n)?;
    checks.push(check_det_normality(n, modulus, seed)?);
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::DEFAULT_MODULUS;
    use crate::qalg::graded::ideal_membership;

    fn v() -> Vars {
        Vars::qp()
    }

    #[test]
    fn expected_values_for_n2() {
        // (q^-1 p^2)^-2 = q^2 p^-4, the product of the diagonal entries R_11^11 R_21^21
        let want = expected_det_right(2, 1, 1, &v()).unwrap();
        assert_eq!(want, LaurentPoly::unit(&v(), vec![2, -4]));
        let r = build_cg(CgParams::new(2)).unwrap();
        let prod = &r.get(&[1, 1], &[1, 1]).unwrap() * &r.get(&[2, 1], &[2, 1]).unwrap();
        assert_eq!(want, prod);
        assert!(expected_det_left(2, 1, 1, &v()).unwrap().is_one());
        assert!(expected_det_right(2, 1, 2, &v()).unwrap().is_zero());
    }

    #[test]
    fn off_diagonal_pairing_vanishes() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let e = FunctionalEngine::new(&r).unwrap();
        let a = Alphabet::T(2);
        let det = quantum_determinant(2, &v()).unwrap();
        let t12 = NCPolynomial::letter(a, &v(), a.t(1, 2));
        assert!(e.braiding_pair(&t12, &det).unwrap().is_zero());
    }

    #[test]
    fn normality_n2_exact() {
        let pres = frt_relations(&build_cg(CgParams::new(2)).unwrap()).unwrap();
        let elem = normality_element(2, 1, 2, &v()).unwrap();
        assert!(ideal_membership(&elem, &pres, Mode::Exact).unwrap());
        // the plain commutator is not in the ideal
        let a = Alphabet::T(2);
        let det = quantum_determinant(2, &v()).unwrap();
        let t = NCPolynomial::letter(a, &v(), a.t(1, 2));
        let commutator = t.mul(&det).unwrap().sub(&det.mul(&t).unwrap()).unwrap();
        assert!(!ideal_membership(&commutator, &pres, Mode::Exact).unwrap());
    }

    #[test]
    fn all_properties_n2_n3() {
        for n in 2..=3 {
            let c = check_det_properties(n, DEFAULT_MODULUS, 11).unwrap();
            assert!(c.all_pass(), "n={n}: {c:?}");
        }
    }
}
