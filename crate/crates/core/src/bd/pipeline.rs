//! End-to-end runs: validate a quadruple, build `f`, check the bialgebra
//! identities, analyse `c₁ / c₁⊥`, and for the Cremmer–Gervais triple compare
//! with the quantum R-matrix.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::bd::algebra::{AlgebraType, ReductiveAlgebra};
use crate::bd::endo::{build_f, check_bialgebra, r_on_defining, EndoF};
use crate::bd::qmatrix::{QMatrix, Q};
use crate::bd::quotient::{check_flb_on, subalgebra_analysis};
use crate::bd::triple::{check_quadruple, solve_f0, validate_triple, AdmissibleTriple, BdQuadruple};
use crate::error::{Error, Result};
use crate::laurent::rat;
use crate::report::{witness, Check, CheckSet};
use crate::rmatrix::{build_cg, semiclassical_limit, CgParams};

/// Outcome of a run; the later fields are absent when validation failed.
#[derive(Clone, Debug)]
pub struct BdRun {
    pub checks: CheckSet,
    pub f: Option<EndoF>,
    pub quotient_dim: Option<usize>,
    pub induced: Option<AdmissibleTriple>,
}

/// Triple and quadruple validation only.
pub fn validate_quadruple(g: &ReductiveAlgebra, quad: &BdQuadruple) -> Result<CheckSet> {
    let mut checks = validate_triple(g, &quad.triple)
        .map_err(|e| e.at_stage("triple"))?
        .prefixed("triple");
    if checks.all_pass() {
        checks.extend(
            check_quadruple(g, quad)
                .map_err(|e| e.at_stage("quadruple"))?
                .prefixed("quadruple"),
        );
    }
    Ok(checks)
}

/// All checks for one quadruple. Stops after validation if it fails.
pub fn run_quadruple(g: &ReductiveAlgebra, quad: &BdQuadruple) -> Result<BdRun> {
    let mut checks = validate_quadruple(g, quad)?;
    if !checks.all_pass() {
        return Ok(BdRun {
            checks,
            f: None,
            quotient_dim: None,
            induced: None,
        });
    }
    let f = build_f(g, quad).map_err(|e| e.at_stage("operator"))?;
    checks.extend(check_bialgebra(g, &f).prefixed("bialgebra"));
    let (analysis, data) = subalgebra_analysis(g, &f).map_err(|e| e.at_stage("subalgebra"))?;
    let analysis_ok = analysis.all_pass();
    checks.extend(analysis.prefixed("subalgebra"));
    let induced = if analysis_ok {
        let (flb, induced) = check_flb_on(g, quad, &data).map_err(|e| e.at_stage("flb"))?;
        checks.extend(flb.prefixed("flb"));
        Some(induced)
    } else {
        None
    };
    Ok(BdRun {
        checks,
        f: Some(f),
        quotient_dim: Some(data.dim()),
        induced,
    })
}

/// `sl(m)` with the Cremmer–Gervais triple: `f₀` must be unique, the
/// quotient must have dimension `(m - 1)²`, and `τ̃(α_i) = α_{i+1}` for
/// `i = 1..m-3`. With `compare`, the skew part of the semiclassical limit of
/// the quantum R-matrix is compared with that of the classical `r` (info only).
pub fn cg_pipeline(m: usize, compare: bool) -> Result<BdRun> {
    if m < 3 {
        return Err(Error::Precondition(format!("the Cremmer-Gervais pipeline needs m >= 3, got {m}")));
    }
    let g = ReductiveAlgebra::build(AlgebraType::Sl, m).map_err(|e| e.at_stage("algebra"))?;
    let triple = AdmissibleTriple::cremmer_gervais(m - 1);
    let sol = solve_f0(&g, &triple).map_err(|e| e.at_stage("f0"))?;
    let mut head = CheckSet::new();
    head.push(
        Check::from_witness(
            "f0_unique",
            (!sol.is_unique()).then(|| witness("freedom", sol.freedom.len())),
        )
        .with_detail(json!({ "f0": matrix_strings(&sol.particular) })),
    );
    let quad = BdQuadruple {
        triple,
        f0: sol.particular,
    };
    let mut run = run_quadruple(&g, &quad)?;
    let want_dim = (m - 1) * (m - 1);
    head.push(Check::from_witness(
        "quotient_dim_square",
        (run.quotient_dim != Some(want_dim)).then(|| witness("dim c1/c1_perp", format!("{:?} vs {want_dim}", run.quotient_dim))),
    ));
    let want_tau: Vec<(usize, usize)> = (1..m.saturating_sub(2)).map(|i| (i, i + 1)).collect();
    let got_tau: Option<Vec<(usize, usize)>> = run.induced.as_ref().map(|t| t.tau.iter().map(|(&a, &b)| (a, b)).collect());
    head.push(Check::from_witness(
        "induced_tau_shift",
        (got_tau.as_ref() != Some(&want_tau)).then(|| witness("tau~", format!("{got_tau:?} vs {want_tau:?}"))),
    ));
    if compare {
        if let Some(f) = &run.f {
            let detail = compare_semiclassical(&g, f).map_err(|e| e.at_stage("semiclassical"))?;
            head.push(Check::info("semiclassical_comparison", detail));
        }
    }
    head.extend(run.checks);
    run.checks = head.prefixed("cg");
    Ok(run)
}

fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// `A - P A P` on `V ⊗ V` with rows and columns indexed `k * m + l`.
fn skew_part(a: &QMatrix, m: usize) -> QMatrix {
    let swap = |x: usize| (x % m) * m + x / m;
    let mut out = a.clone();
    for r in 0..m * m {
        for c in 0..m * m {
            let v = a.get(r, c) - a.get(swap(r), swap(c));
            out.set(r, c, v);
        }
    }
    out
}

/// `λ` with `a = λ b`, if one exists.
fn proportionality(a: &QMatrix, b: &QMatrix) -> Option<Q> {
    let n = a.rows();
    let mut factor: Option<Q> = None;
    for r in 0..n {
        for c in 0..n {
            let (x, y) = (a.get(r, c), b.get(r, c));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (false, true) | (true, false) => return None,
                (false, false) => {
                    let l = x / y;
                    if factor.as_ref().is_some_and(|f| *f != l) {
                        return None;
                    }
                    factor = Some(l);
                }
            }
        }
    }
    factor
}

fn compare_semiclassical(g: &ReductiveAlgebra, f: &EndoF) -> Result<Value> {
    let m = g.m();
    let quantum = build_cg(CgParams::new(m))?;
    let limit = semiclassical_limit(&quantum, &[rat(m as i64), rat(1)])?;
    let mut classical = QMatrix::zeros(m * m, m * m);
    for (row, col, v) in limit.r.entries() {
        let flat = |ix: &[usize]| (ix[0] - 1) * m + (ix[1] - 1);
        classical.set(flat(&row), flat(&col), v.constant_term());
    }
    let bd = r_on_defining(g, f);
    let skew_limit = skew_part(&classical, m);
    let skew_bd = skew_part(&bd, m);
    let direct = proportionality(&skew_limit, &skew_bd);
    let transposed = proportionality(&skew_limit, &skew_bd.transpose());
    Ok(json!({
        "direction": [m, 1],
        "limit_cybe": limit.cybe.passed(),
        "skew_proportional": direct.as_ref().map(|x| x.to_string()),
        "skew_proportional_transposed": transposed.as_ref().map(|x| x.to_string()),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::qmatrix::qf;
    use std::collections::BTreeMap;

    #[test]
    fn sl3_pipeline_passes() {
        let run = cg_pipeline(3, true).unwrap();
        assert!(run.checks.all_pass(), "{:?}", run.checks.failures().collect::<Vec<_>>());
        assert_eq!(run.quotient_dim, Some(4));
        assert!(run.checks.get("cg.bialgebra.cybe").unwrap().passed());
        assert!(run.checks.get("cg.semiclassical_comparison").is_some());
    }

    #[test]
    fn sl4_pipeline_induces_shift() {
        let run = cg_pipeline(4, false).unwrap();
        assert!(run.checks.all_pass());
        assert_eq!(run.quotient_dim, Some(9));
        assert_eq!(run.induced.unwrap().tau, BTreeMap::from([(1, 2)]));
    }

    #[test]
    fn small_rank_is_rejected() {
        assert!(matches!(cg_pipeline(2, false), Err(Error::Precondition(_))));
    }

    #[test]
    fn identity_tau_stops_after_validation() {
        let g = ReductiveAlgebra::build(AlgebraType::Sl, 3).unwrap();
        let quad = BdQuadruple {
            triple: AdmissibleTriple::new([1], [1], BTreeMap::from([(1, 1)])),
            f0: QMatrix::scalar(2, &qf(1, 2)),
        };
        let run = run_quadruple(&g, &quad).unwrap();
        assert!(!run.checks.get("triple.orbits_leave_b1").unwrap().passed());
        assert!(run.f.is_none());
    }

    #[test]
    fn bad_shape_reports_stage() {
        let g = ReductiveAlgebra::build(AlgebraType::Sl, 3).unwrap();
        let quad = BdQuadruple {
            triple: AdmissibleTriple::new([1], [7], BTreeMap::from([(1, 7)])),
            f0: QMatrix::scalar(2, &qf(1, 2)),
        };
        match run_quadruple(&g, &quad) {
            Err(Error::Stage { stage, .. }) => assert_eq!(stage, "triple"),
            other => panic!("{other:?}"),
        }
    }
}
