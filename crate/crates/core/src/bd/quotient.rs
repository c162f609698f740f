//! The subalgebra `c₁ = Im(f - 1)`, the quotient `c₁ / c₁⊥`, and the induced
//! quadruple on it.

use num_traits::Zero;
use serde_json::json;

use crate::bd::algebra::{LieData, ReductiveAlgebra};
use crate::bd::endo::{asy_witness, build_f, dual_bracket_table, mcy_witness, EndoF};
use crate::bd::qmatrix::{axpy, in_span, is_zero_vec, show_vec, span_basis, span_contains, span_eq, sub_vec, unit_vec, QMatrix, QVec, Q};
use crate::bd::triple::{validate_triple, AdmissibleTriple, BdQuadruple};
use crate::error::{Error, Result};
use crate::report::{witness, Check, CheckSet, Witness};

/// Subspaces attached to `f` and the factorizable quotient `c₁ / c₁⊥`.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub c1: Vec<QVec>,
    pub ker_f: Vec<QVec>,
    pub ker_f_minus_1: Vec<QVec>,
    pub k: Vec<QVec>,
    pub c: Vec<QVec>,
    /// `c₁ ∩ h`, spanning the Cartan part of the quotient modulo `Ker f`.
    pub c1_cartan: Vec<QVec>,
    /// Representatives of a basis of the quotient; the first `cartan_dim`
    /// lie in `c₁ ∩ h`.
    pub representatives: Vec<QVec>,
    pub cartan_dim: usize,
    pub lie: LieData,
    pub f_tilde: QMatrix,
}

impl QuotientData {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// `f̃` on the Cartan part of the quotient.
    pub fn f0_tilde(&self) -> QMatrix {
        let c = self.cartan_dim;
        let mut out = QMatrix::zeros(c, c);
        for i in 0..c {
            for j in 0..c {
                out.set(i, j, self.f_tilde.get(i, j).clone());
            }
        }
        out
    }
}

/// `S⊥` for the form with Gram matrix `gram`.
pub fn perp(gram: &QMatrix, span: &[QVec]) -> Vec<QVec> {
    let n = gram.rows();
    if span.is_empty() {
        return (0..n).map(|i| unit_vec(n, i)).collect();
    }
    let rows: Vec<QVec> = span.iter().map(|s| gram.transpose().mul_vec(s)).collect();
    QMatrix::from_rows(rows).kernel()
}

fn image_of(f: &QMatrix, span: &[QVec]) -> Vec<QVec> {
    let n = f.rows();
    span_basis(n, &span.iter().map(|v| f.mul_vec(v)).collect::<Vec<_>>())
}

/// `A ∩ B` for spans given by bases.
fn intersect(n: usize, a: &[QVec], b: &[QVec]) -> Vec<QVec> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Σ x_i a_i = Σ y_j b_j
    let mut cols = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect::<QVec>()));
    let m = QMatrix::from_cols(n, &cols);
    let vecs = m
        .kernel()
        .into_iter()
        .map(|coef| {
            let mut v = vec![Q::zero(); n];
            for (c, ai) in coef.iter().zip(a) {
                axpy(&mut v, c, ai);
            }
            v
        })
        .collect::<Vec<_>>();
    span_basis(n, &vecs)
}

/// First bracket of two elements of `a` leaving `b`.
fn bracket_escape(lie: &LieData, a: &[QVec], with: &[QVec], b: &[QVec]) -> Option<Witness> {
    let n = lie.dim();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in with.iter().enumerate() {
            let z = lie.bracket(x, y);
            if !in_span(n, b, &z) {
                return Some(witness(format!("basis pair ({i}, {j})"), show_vec(&z)));
            }
        }
    }
    None
}

/// Coordinates of `v ∈ c₁` on representatives, discarding the `Ker f` part.
fn quotient_coords(frame: &QMatrix, reps: usize, v: &[Q]) -> Result<QVec> {
    let x = frame
        .solve(v)
        .ok_or_else(|| Error::Precondition(format!("{} is not in Im(f - 1)", show_vec(v))))?;
    Ok(x[..reps].to_vec())
}

/// Bases of `c₁`, `Ker f`, `Ker(f - 1)`, `k`, `c`; their orthogonality
/// relations; subalgebra, ideal and homomorphism properties; and the quotient
/// with induced form and `f̃` checked for (asy)/(mcy).
pub fn subalgebra_analysis(g: &ReductiveAlgebra, f: &EndoF) -> Result<(CheckSet, QuotientData)> {
    let lie = g.lie();
    let n = lie.dim();
    let fm = &f.matrix;
    let f1 = fm.sub(&QMatrix::identity(n));
    let c1 = f1.image();
    let ker_f = fm.kernel();
    let ker_f_minus_1 = f1.kernel();
    let mut k_gen = ker_f.clone();
    k_gen.extend(ker_f_minus_1.iter().cloned());
    let k = span_basis(n, &k_gen);
    let c = image_of(fm, &c1);

    let mut checks = CheckSet::new();
    let rn = c1.len() + ker_f_minus_1.len() == n;
    checks.push(
        Check::from_witness(
            "rank_nullity",
            (!rn).then(|| witness("dim c1 + dim Ker(f - 1)", c1.len() + ker_f_minus_1.len())),
        )
        .with_detail(json!({
            "dim_c1": c1.len(),
            "dim_ker_f": ker_f.len(),
            "dim_ker_f_minus_1": ker_f_minus_1.len(),
            "dim_k": k.len(),
            "dim_c": c.len(),
        })),
    );
    let gram = lie.gram();
    let c1_perp = perp(gram, &c1);
    checks.push(Check::from_witness(
        "c1_perp_is_ker_f",
        (!span_eq(n, &c1_perp, &ker_f)).then(|| witness("dim c1_perp vs dim Ker f", format!("{} vs {}", c1_perp.len(), ker_f.len()))),
    ));
    let c_perp = perp(gram, &c);
    checks.push(Check::from_witness(
        "c_perp_is_k",
        (!span_eq(n, &c_perp, &k)).then(|| witness("dim c_perp vs dim k", format!("{} vs {}", c_perp.len(), k.len()))),
    ));
    checks.push(Check::from_witness("c1_subalgebra", bracket_escape(lie, &c1, &c1, &c1)));
    checks.push(Check::from_witness("ker_f_subalgebra", bracket_escape(lie, &ker_f, &ker_f, &ker_f)));
    let contained = span_contains(n, &c1, &ker_f);
    let ideal = if contained {
        bracket_escape(lie, &c1, &ker_f, &ker_f)
    } else {
        Some(witness("Ker f", "not contained in c1"))
    };
    checks.push(Check::from_witness("c1_perp_ideal_of_c1", ideal));

    let dual = dual_bracket_table(lie, fm);
    let labels = |a: usize| g.basis_label(a);
    let mut hom = None;
    'hom: for a in 0..n {
        let fa = f1.col(a);
        for b in 0..n {
            let lhs = f1.mul_vec(&dual[a][b]);
            let rhs = lie.bracket(&fa, &f1.col(b));
            let diff = sub_vec(&lhs, &rhs);
            // Ker f = c₁⊥, so membership is f(diff) = 0
            if !is_zero_vec(&fm.mul_vec(&diff)) {
                hom = Some(witness(format!("({}, {})", labels(a), labels(b)), g.show(&diff)));
                break 'hom;
            }
        }
    }
    checks.push(Check::from_witness("f_minus_1_homomorphism_mod_c1_perp", hom));
    checks.push(Check::from_witness("f_dual_homomorphism", mcy_witness(lie, fm, &dual, &labels)));

    // c₁ ∩ h, then a complement of Ker f in c₁ starting from it
    let cartan: Vec<QVec> = (0..g.cartan_dim()).map(|i| unit_vec(n, i)).collect();
    let c1_cartan = intersect(n, &c1, &cartan);
    let mut representatives: Vec<QVec> = Vec::new();
    let mut spanned = ker_f.clone();
    let mut cartan_dim = 0;
    for (i, v) in c1_cartan.iter().chain(&c1).enumerate() {
        if !in_span(n, &spanned, v) {
            representatives.push(v.clone());
            spanned.push(v.clone());
            if i < c1_cartan.len() {
                cartan_dim += 1;
            }
        }
    }
    let reps = representatives.len();
    let mut frame_cols = representatives.clone();
    frame_cols.extend(ker_f.iter().cloned());
    let frame = QMatrix::from_cols(n, &frame_cols);
    let mut brackets = vec![vec![Vec::new(); reps]; reps];
    let mut qgram = QMatrix::zeros(reps, reps);
    for a in 0..reps {
        for b in 0..reps {
            let z = lie.bracket(&representatives[a], &representatives[b]);
            brackets[a][b] = quotient_coords(&frame, reps, &z)?;
            qgram.set(a, b, lie.form(&representatives[a], &representatives[b]));
        }
    }
    let qlie = LieData::new(brackets, qgram)?;
    let f_tilde_cols = representatives
        .iter()
        .map(|v| quotient_coords(&frame, reps, &fm.mul_vec(v)))
        .collect::<Result<Vec<_>>>()?;
    let f_tilde = QMatrix::from_cols(reps, &f_tilde_cols);
    let qlabel = |a: usize| format!("q{a}");
    checks.push(Check::from_witness("quotient_asy", asy_witness(&qlie, &f_tilde, &qlabel)));
    let qdual = dual_bracket_table(&qlie, &f_tilde);
    checks.push(Check::from_witness("quotient_mcy", mcy_witness(&qlie, &f_tilde, &qdual, &qlabel)));
    checks.push(Check::info(
        "quotient_dim",
        json!({ "dim": reps, "cartan": cartan_dim }),
    ));

    let data = QuotientData {
        c1,
        ker_f,
        ker_f_minus_1,
        k,
        c,
        c1_cartan,
        representatives,
        cartan_dim,
        lie: qlie,
        f_tilde,
    };
    Ok((checks, data))
}

/// Structure of `c₁ / c₁⊥` predicted from the quadruple: its dimension, the
/// Cartan part `Im(f₀ - 1) / Im(f₀ - 1)⊥`, the centre, and the induced triple
/// `τ̃ = τ|_{τ⁻¹(B₁ ∩ B₂)}`.
pub fn check_flb(g: &ReductiveAlgebra, quad: &BdQuadruple) -> Result<(CheckSet, QuotientData, AdmissibleTriple)> {
    let f = build_f(g, quad)?;
    let (analysis, data) = subalgebra_analysis(g, &f)?;
    if let Some(bad) = analysis.failures().next() {
        return Err(Error::Precondition(format!("subalgebra analysis fails {}", bad.name)));
    }
    let (checks, induced) = check_flb_on(g, quad, &data)?;
    Ok((checks, data, induced))
}

/// [`check_flb`] against an already computed quotient.
pub fn check_flb_on(g: &ReductiveAlgebra, quad: &BdQuadruple, data: &QuotientData) -> Result<(CheckSet, AdmissibleTriple)> {
    let c = g.cartan_dim();
    let f0_minus_1 = quad.f0.sub(&QMatrix::identity(c));
    let im = f0_minus_1.image();
    let im_perp = perp(&g.cartan_gram(), &im);
    let im_in_perp = intersect(c, &im, &im_perp);
    let cartan_expected = im.len() - im_in_perp.len();
    let ker_f0 = quad.f0.kernel().len();
    let r1: Vec<usize> = g
        .positive_roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.support().all(|s| quad.triple.b1.contains(&s)))
        .map(|(i, _)| i)
        .collect();
    let b1 = quad.triple.b1.len();
    let recipe = cartan_expected + 2 * r1.len();

    let mut checks = CheckSet::new();
    checks.push(
        Check::from_witness(
            "quotient_dim_matches_recipe",
            (data.dim() != recipe).then(|| witness("dim c1/c1_perp", format!("{} vs {recipe}", data.dim()))),
        )
        .with_detail(json!({
            "dim_a": b1 + 2 * r1.len(),
            "dim_v_mod_v_perp": cartan_expected as i64 - b1 as i64,
            "r1_positive": r1.iter().map(|&i| g.positive_roots()[i].label()).collect::<Vec<_>>(),
        })),
    );
    let measured = data.cartan_dim;
    let two_ways = measured == cartan_expected && im.len() - ker_f0.min(im.len()) == cartan_expected;
    checks.push(Check::from_witness(
        "cartan_part_dim",
        (!two_ways).then(|| {
            witness(
                "Im(f0 - 1) / Im(f0 - 1)_perp",
                format!("measured {measured}, predicted {cartan_expected}, rank minus dim Ker f0 {}", im.len() as i64 - ker_f0 as i64),
            )
        }),
    ));
    let centre = data.lie.center_dim();
    let centre_expected = cartan_expected as i64 - b1 as i64;
    checks.push(
        Check::from_witness(
            "quotient_center_dim",
            (centre as i64 != centre_expected).then(|| witness("centre", format!("{centre} vs {centre_expected}"))),
        )
        .with_detail(json!({ "center": centre, "derived": data.lie.derived_dim() })),
    );

    let induced = quad.triple.induced();
    let domain_ok = induced
        .tau
        .keys()
        .copied()
        .eq(quad.triple.tau.iter().filter(|(_, b)| quad.triple.b1.contains(b) && quad.triple.b2.contains(b)).map(|(&a, _)| a));
    checks.push(Check::from_witness(
        "induced_domain",
        (!domain_ok).then(|| witness("tau~ domain", format!("{:?}", induced.b1))),
    ));
    checks.extend(validate_triple(g, &induced)?.prefixed("induced"));
    let f0t = data.f0_tilde();
    checks.push(Check::info(
        "induced_quadruple",
        json!({
            "tau": induced.tau.iter().map(|(a, b)| (format!("a{a}"), format!("a{b}"))).collect::<Vec<_>>(),
            "f0": f0t.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    ));
    Ok((checks, induced))
}
