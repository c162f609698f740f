//! The operator `f` of a quadruple and the identities making `g` a
//! factorizable Lie bialgebra.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bd::algebra::{jacobi_witness_for, LieData, ReductiveAlgebra, SparseQ};
use crate::bd::qmatrix::{axpy, show_vec, sub_vec, unit_vec, zero_vec, QMatrix, QVec, Q};
use crate::bd::triple::{check_quadruple, tau_order, validate_triple, BdQuadruple};
use crate::error::{Error, Result};
use crate::report::{witness, Check, CheckSet, Witness};

/// `f ∈ End(g)` as the matrix whose columns are the images of basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoF {
    pub matrix: QMatrix,
}

impl EndoF {
    pub fn apply(&self, v: &[Q]) -> QVec {
        self.matrix.mul_vec(v)
    }
}

/// `f(e_α) = -Σ_{β≻α} e_β`, `f(e_{-α}) = Σ_{β⪯α} e_{-β}`, `f|_h = f_0`.
pub fn build_f(g: &ReductiveAlgebra, quad: &BdQuadruple) -> Result<EndoF> {
    let mut gate = validate_triple(g, &quad.triple)?;
    gate.extend(check_quadruple(g, quad)?);
    if let Some(bad) = gate.failures().next() {
        return Err(Error::Admissible(format!("quadruple fails {}", bad.name)));
    }
    let order = tau_order(g, &quad.triple)?;
    let d = g.dim();
    let c = g.cartan_dim();
    let mut f = QMatrix::zeros(d, d);
    for i in 0..c {
        for j in 0..c {
            f.set(i, j, quad.f0.get(i, j).clone());
        }
    }
    for alpha in 0..g.positive_roots().len() {
        for &beta in order.strictly_above(alpha) {
            f.set(g.pos_index(beta), g.pos_index(alpha), -Q::one());
        }
        for beta in order.at_most(alpha) {
            f.set(g.neg_index(beta), g.neg_index(alpha), Q::one());
        }
    }
    Ok(EndoF { matrix: f })
}

/// Basis labels for witnesses.
pub type Labels<'a> = &'a (dyn Fn(usize) -> String + Sync);

/// First basis pair with `κ(f x, y) + κ(x, f y) ≠ κ(x, y)`.
pub fn asy_witness(lie: &LieData, f: &QMatrix, label: Labels<'_>) -> Option<Witness> {
    let g = lie.gram();
    let m = f.transpose().mul(g).add(&g.mul(f)).sub(g);
    for a in 0..lie.dim() {
        for b in 0..lie.dim() {
            if !m.get(a, b).is_zero() {
                return Some(witness(format!("({}, {})", label(a), label(b)), m.get(a, b)));
            }
        }
    }
    None
}

/// `[x, y]_f = [x, f y] + [f x, y] - [x, y]` on all basis pairs.
pub fn dual_bracket_table(lie: &LieData, f: &QMatrix) -> Vec<Vec<QVec>> {
    let d = lie.dim();
    let cols = f.to_cols();
    (0..d)
        .into_par_iter()
        .map(|a| {
            let ea = unit_vec(d, a);
            (0..d)
                .map(|b| {
                    let eb = unit_vec(d, b);
                    let mut v = lie.bracket(&ea, &cols[b]);
                    let w = lie.bracket(&cols[a], &eb);
                    for (x, y) in v.iter_mut().zip(&w) {
                        *x += y;
                    }
                    for (e, s) in lie.bracket_basis(a, b) {
                        v[*e] -= s;
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// First basis pair violating `[f x, f y] = f([x, y]_f)`.
pub fn mcy_witness(lie: &LieData, f: &QMatrix, dual: &[Vec<QVec>], label: Labels<'_>) -> Option<Witness> {
    let d = lie.dim();
    let cols = f.to_cols();
    (0..d).into_par_iter().find_map_first(|a| {
        (0..d).find_map(|b| {
            let lhs = lie.bracket(&cols[a], &cols[b]);
            let rhs = f.mul_vec(&dual[a][b]);
            let diff = sub_vec(&lhs, &rhs);
            diff.iter()
                .any(|x| !x.is_zero())
                .then(|| witness(format!("({}, {})", label(a), label(b)), show_vec(&diff)))
        })
    })
}

fn sparse(v: &[Q]) -> SparseQ {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// First basis triple violating Jacobi for the dual bracket.
pub fn dual_jacobi_witness(dual: &[Vec<QVec>], label: Labels<'_>) -> Option<Witness> {
    let d = dual.len();
    let sparse_dual: Vec<Vec<SparseQ>> = dual.iter().map(|row| row.iter().map(|v| sparse(v)).collect()).collect();
    jacobi_witness_for(
        d,
        |a, b| sparse_dual[a][b].clone(),
        |u, c| {
            let mut out = zero_vec(d);
            for (a, ua) in u {
                for (e, s) in &sparse_dual[*a][c] {
                    out[*e] += ua * s;
                }
            }
            out
        },
    )
    .map(|(loc, v)| {
        let _ = label;
        witness(loc, show_vec(&v))
    })
}

/// Coefficients `r[a][b]` of `r = Σ_μ a_μ ⊗ f(a^μ)`.
pub fn r_tensor(lie: &LieData, f: &QMatrix) -> QMatrix {
    f.mul(lie.gram_inv()).transpose()
}

/// `[r12, r13] + [r12, r23] + [r13, r23]` as coefficients in `g⊗g⊗g`,
/// indexed `(a * d + b) * d + c`.
pub fn cybe_tensor(lie: &LieData, r: &QMatrix) -> QVec {
    let d = lie.dim();
    let nz_rows: Vec<Vec<(usize, Q)>> = (0..d).map(|a| sparse(r.row(a))).collect();
    let nz_cols: Vec<Vec<(usize, Q)>> = (0..d).map(|b| sparse(&r.col(b))).collect();
    let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
    let mut t = zero_vec(d * d * d);
    for x in 0..d {
        for y in 0..d {
            for (e, s) in lie.bracket_basis(x, y) {
                // [r12, r13]: [x_a, x_c] ⊗ x_b ⊗ x_d with (a, c) = (x, y)
                for (b, rab) in &nz_rows[x] {
                    let w = s * rab;
                    for (dd, rcd) in &nz_rows[y] {
                        t[idx(*e, *b, *dd)] += &w * rcd;
                    }
                }
                // [r12, r23]: x_a ⊗ [x_b, x_c] ⊗ x_d with (b, c) = (x, y)
                for (a, rab) in &nz_cols[x] {
                    let w = s * rab;
                    for (dd, rcd) in &nz_rows[y] {
                        t[idx(*a, *e, *dd)] += &w * rcd;
                    }
                }
                // [r13, r23]: x_a ⊗ x_c ⊗ [x_b, x_d] with (b, d) = (x, y)
                for (a, rab) in &nz_cols[x] {
                    let w = s * rab;
                    for (c, rcd) in &nz_cols[y] {
                        t[idx(*a, *c, *e)] += &w * rcd;
                    }
                }
            }
        }
    }
    t
}

fn first_nonzero_triple(t: &[Q], d: usize, label: Labels<'_>) -> Option<Witness> {
    t.iter().position(|x| !x.is_zero()).map(|i| {
        let (a, b, c) = (i / (d * d), (i / d) % d, i % d);
        witness(format!("{} ⊗ {} ⊗ {}", label(a), label(b), label(c)), &t[i])
    })
}

/// `[x ⊗ 1 + 1 ⊗ x, t] = 0` for every basis `x`, with `t` the Casimir tensor.
pub fn casimir_witness(lie: &LieData, label: Labels<'_>) -> Option<Witness> {
    let d = lie.dim();
    let t = lie.casimir();
    for x in 0..d {
        let mut ad = QMatrix::zeros(d, d);
        for a in 0..d {
            for (e, s) in lie.bracket_basis(x, a) {
                ad.set(*e, a, s.clone());
            }
        }
        let m = ad.mul(t).add(&t.mul(&ad.transpose()));
        for a in 0..d {
            for b in 0..d {
                if !m.get(a, b).is_zero() {
                    return Some(witness(
                        format!("x = {}, entry {} ⊗ {}", label(x), label(a), label(b)),
                        m.get(a, b),
                    ));
                }
            }
        }
    }
    None
}

/// (asy), (mcy), Jacobi of the dual bracket, CYBE for `r`, `r + r_21 = t`,
/// and invariance of `t`.
pub fn check_bialgebra_on(lie: &LieData, f: &QMatrix, label: Labels<'_>) -> CheckSet {
    let mut checks = CheckSet::new();
    checks.timed(|| Check::from_witness("asy", asy_witness(lie, f, label)));
    let dual = dual_bracket_table(lie, f);
    checks.timed(|| Check::from_witness("mcy", mcy_witness(lie, f, &dual, label)));
    checks.timed(|| Check::from_witness("dual_jacobi", dual_jacobi_witness(&dual, label)));
    let r = r_tensor(lie, f);
    checks.timed(|| Check::from_witness("cybe", first_nonzero_triple(&cybe_tensor(lie, &r), lie.dim(), label)));
    let sym = r.add(&r.transpose()).sub(lie.casimir());
    let mut sym_w = None;
    'sym: for a in 0..lie.dim() {
        for b in 0..lie.dim() {
            if !sym.get(a, b).is_zero() {
                sym_w = Some(witness(format!("{} ⊗ {}", label(a), label(b)), sym.get(a, b)));
                break 'sym;
            }
        }
    }
    checks.push(Check::from_witness("r_plus_flip_is_casimir", sym_w));
    checks.timed(|| Check::from_witness("casimir_invariant", casimir_witness(lie, label)));
    checks
}

pub fn check_bialgebra(g: &ReductiveAlgebra, f: &EndoF) -> CheckSet {
    check_bialgebra_on(g.lie(), &f.matrix, &|a| g.basis_label(a))
}

/// `r` as an operator on `V ⊗ V` for the defining representation, entry at
/// row `(k, l)`, column `(i, j)` equal to `Σ r[a][b] x_a[k][i] x_b[l][j]`.
pub fn r_on_defining(g: &ReductiveAlgebra, f: &EndoF) -> QMatrix {
    let m = g.m();
    let r = r_tensor(g.lie(), &f.matrix);
    let mut out = QMatrix::zeros(m * m, m * m);
    for a in 0..g.dim() {
        let xa = g.basis_matrix(a);
        for b in 0..g.dim() {
            let c = r.get(a, b);
            if c.is_zero() {
                continue;
            }
            let xb = g.basis_matrix(b);
            for k in 0..m {
                for i in 0..m {
                    let u = xa.get(k, i);
                    if u.is_zero() {
                        continue;
                    }
                    for l in 0..m {
                        for j in 0..m {
                            let v = xb.get(l, j);
                            if !v.is_zero() {
                                let cur = out.get(k * m + l, i * m + j) + c * u * v;
                                out.set(k * m + l, i * m + j, cur);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// `Σ_μ κ(x, a_μ) a^μ`; equals `x` when the dual basis is right.
pub fn resolve_with_dual_basis(lie: &LieData, x: &[Q]) -> QVec {
    let d = lie.dim();
    let mut acc = zero_vec(d);
    let t = lie.casimir();
    for mu in 0..d {
        axpy(&mut acc, &lie.form(x, &unit_vec(d, mu)), &t.col(mu));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::algebra::{AlgebraType, PositiveRoot};
    use crate::bd::qmatrix::qf;
    use crate::bd::triple::{solve_f0, AdmissibleTriple};

    fn cg_quad(m: usize) -> (ReductiveAlgebra, BdQuadruple) {
        let g = ReductiveAlgebra::build(AlgebraType::Sl, m).unwrap();
        let t = AdmissibleTriple::cremmer_gervais(m - 1);
        let f0 = solve_f0(&g, &t).unwrap().particular;
        (g, BdQuadruple { triple: t, f0 })
    }

    #[test]
    fn sl3_cg_f_images() {
        let (g, quad) = cg_quad(3);
        let f = build_f(&g, &quad).unwrap();
        let d = g.dim();
        let r = |i, j| g.root_index(PositiveRoot { i, j }).unwrap();
        let e = |k| unit_vec(d, k);
        let neg = |v: QVec| v.iter().map(|x| -x).collect::<QVec>();
        assert_eq!(f.apply(&e(g.pos_index(r(1, 2)))), neg(e(g.pos_index(r(2, 3)))));
        assert!(f.apply(&e(g.pos_index(r(2, 3)))).iter().all(Zero::is_zero));
        let mut want = e(g.neg_index(r(2, 3)));
        want[g.neg_index(r(1, 2))] = Q::one();
        assert_eq!(f.apply(&e(g.neg_index(r(2, 3)))), want);
        assert_eq!(f.apply(&e(g.neg_index(r(1, 3)))), e(g.neg_index(r(1, 3))));
    }

    #[test]
    fn sl3_cg_is_a_factorizable_bialgebra() {
        let (g, quad) = cg_quad(3);
        let c = check_bialgebra(&g, &build_f(&g, &quad).unwrap());
        assert!(c.all_pass(), "{c:?}");
    }

    #[test]
    fn sl2_standard_structure() {
        let g = ReductiveAlgebra::build(AlgebraType::Sl, 2).unwrap();
        let quad = BdQuadruple {
            triple: AdmissibleTriple::empty(),
            f0: QMatrix::scalar(1, &qf(1, 2)),
        };
        let f = build_f(&g, &quad).unwrap();
        assert!(f.apply(&unit_vec(3, 1)).iter().all(Zero::is_zero));
        assert_eq!(f.apply(&unit_vec(3, 2)), unit_vec(3, 2));
        assert_eq!(f.apply(&unit_vec(3, 0)), vec![qf(1, 2), Q::zero(), Q::zero()]);
        let c = check_bialgebra(&g, &f);
        assert!(c.all_pass(), "{c:?}");
        // r = e ⊗ f + h ⊗ h / 4
        let r = r_tensor(g.lie(), &f.matrix);
        assert_eq!(*r.get(0, 0), qf(1, 4));
        assert_eq!(*r.get(1, 2), Q::one());
        assert!(r.get(2, 1).is_zero());
    }

    #[test]
    fn broken_skew_part_fails_asy() {
        let (g, quad) = cg_quad(3);
        let mut f = build_f(&g, &quad).unwrap();
        let v = f.matrix.get(0, 0) + qf(1, 5);
        f.matrix.set(0, 0, v);
        let c = check_bialgebra(&g, &f);
        let asy = c.get("asy").unwrap();
        assert!(!asy.passed());
        assert!(asy.witness.is_some());
    }

    #[test]
    fn invalid_quadruple_is_rejected() {
        let (g, quad) = cg_quad(3);
        let broken = BdQuadruple {
            f0: QMatrix::identity(2),
            ..quad
        };
        assert!(matches!(build_f(&g, &broken), Err(Error::Admissible(_))));
    }

    #[test]
    fn gl_structures_pass() {
        let g = ReductiveAlgebra::build(AlgebraType::Gl, 3).unwrap();
        let t = AdmissibleTriple::cremmer_gervais(2);
        let sol = solve_f0(&g, &t).unwrap();
        // gl has one more skew direction than the constraints remove
        assert_eq!(sol.freedom.len(), 1);
        for f0 in [sol.particular.clone(), sol.particular.add(&sol.freedom[0])] {
            let f = build_f(&g, &BdQuadruple { triple: t.clone(), f0 }).unwrap();
            let c = check_bialgebra(&g, &f);
            assert!(c.all_pass(), "{c:?}");
        }
    }

    #[test]
    fn dual_basis_resolution() {
        let g = ReductiveAlgebra::build(AlgebraType::Sl, 4).unwrap();
        for a in 0..g.dim() {
            let x = unit_vec(g.dim(), a);
            assert_eq!(resolve_with_dual_basis(g.lie(), &x), x);
        }
    }
}
