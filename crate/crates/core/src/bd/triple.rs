//! Admissible triples, the induced order on positive roots, and Cartan
//! operators `f_0` completing a triple to a quadruple.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bd::algebra::{AlgebraType, PositiveRoot, ReductiveAlgebra};
use crate::bd::qmatrix::{add_vec, qf, show_vec, sub_vec, QMatrix, Q};
use crate::error::{Error, Result};
use crate::report::{witness, Check, CheckSet};

/// `(B₁, B₂, τ)` with simple roots named by their 1-based index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleTriple {
    pub b1: BTreeSet<usize>,
    pub b2: BTreeSet<usize>,
    pub tau: BTreeMap<usize, usize>,
}

impl AdmissibleTriple {
    pub fn new(b1: impl IntoIterator<Item = usize>, b2: impl IntoIterator<Item = usize>, tau: BTreeMap<usize, usize>) -> Self {
        AdmissibleTriple {
            b1: b1.into_iter().collect(),
            b2: b2.into_iter().collect(),
            tau,
        }
    }

    pub fn empty() -> Self {
        Self::new([], [], BTreeMap::new())
    }

    /// `B₁ = {α_1..α_{r-1}}`, `B₂ = {α_2..α_r}`, `τ(α_i) = α_{i+1}` for `r`
    /// simple roots.
    pub fn cremmer_gervais(num_simple: usize) -> Self {
        let tau = (1..num_simple).map(|i| (i, i + 1)).collect();
        Self::new(1..num_simple, 2..=num_simple, tau)
    }

    pub fn apply(&self, alpha: usize) -> Option<usize> {
        self.tau.get(&alpha).copied()
    }

    /// `τ` restricted to `τ^{-1}(B₁ ∩ B₂)`.
    pub fn induced(&self) -> Self {
        let tau: BTreeMap<usize, usize> = self
            .tau
            .iter()
            .filter(|(_, b)| self.b1.contains(b))
            .map(|(&a, &b)| (a, b))
            .collect();
        let (b1, b2): (Vec<usize>, Vec<usize>) = tau.iter().map(|(&a, &b)| (a, b)).unzip();
        Self::new(b1, b2, tau)
    }
}

/// Checks that `τ` is a bijection `B₁ → B₂` of valid simple roots; errors
/// otherwise.
fn check_shape(g: &ReductiveAlgebra, t: &AdmissibleTriple) -> Result<()> {
    let r = g.num_simple();
    for &a in t.b1.iter().chain(&t.b2).chain(t.tau.keys()).chain(t.tau.values()) {
        if a == 0 || a > r {
            return Err(Error::Index(format!("simple root {a} outside 1..={r}")));
        }
    }
    let domain: BTreeSet<usize> = t.tau.keys().copied().collect();
    let image: BTreeSet<usize> = t.tau.values().copied().collect();
    if domain != t.b1 {
        return Err(Error::Admissible(format!("tau is defined on {domain:?}, B1 is {:?}", t.b1)));
    }
    if image.len() != t.tau.len() || image != t.b2 {
        return Err(Error::Admissible(format!("tau is not a bijection onto B2 = {:?}", t.b2)));
    }
    Ok(())
}

/// Inner-product preservation and escape of every `τ`-orbit from `B₁`.
pub fn validate_triple(g: &ReductiveAlgebra, t: &AdmissibleTriple) -> Result<CheckSet> {
    check_shape(g, t)?;
    let mut checks = CheckSet::new();
    let mut iso = None;
    'iso: for (&a, &ta) in &t.tau {
        for (&b, &tb) in &t.tau {
            if g.simple_inner(ta, tb) != g.simple_inner(a, b) {
                iso = Some(witness(
                    format!("(a{a}, a{b})"),
                    format!("{} vs {}", g.simple_inner(ta, tb), g.simple_inner(a, b)),
                ));
                break 'iso;
            }
        }
    }
    checks.push(Check::from_witness("tau_isometry", iso));
    let mut stuck = None;
    for &a in &t.b1 {
        let mut cur = a;
        let mut steps = 0;
        while let Some(next) = t.apply(cur) {
            cur = next;
            steps += 1;
            if steps > t.b1.len() {
                stuck = Some(witness(format!("orbit of a{a}"), "never leaves B1"));
                break;
            }
        }
        if stuck.is_some() {
            break;
        }
    }
    checks.push(Check::from_witness("orbits_leave_b1", stuck));
    Ok(checks)
}

/// `τ` extended to positive roots supported in `B₁`, and the order
/// `β ⪰ α` iff `β = τ^j(α)` with every intermediate root supported in `B₁`.
#[derive(Clone, Debug)]
pub struct RootOrder {
    /// `chains[α] = [α, τα, τ²α, ...]` as positive-root indices.
    chains: Vec<Vec<usize>>,
}

impl RootOrder {
    pub fn chain(&self, alpha: usize) -> &[usize] {
        &self.chains[alpha]
    }

    /// Roots `β ≻ α`.
    pub fn strictly_above(&self, alpha: usize) -> &[usize] {
        &self.chains[alpha][1..]
    }

    /// Roots `β ⪯ α`, including `α`.
    pub fn at_most(&self, alpha: usize) -> Vec<usize> {
        (0..self.chains.len()).filter(|&b| self.chains[b].contains(&alpha)).collect()
    }

    /// All pairs `(β, α)` with `β ⪰ α`.
    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(a, ch)| ch.iter().map(move |&b| (b, a)))
            .collect()
    }
}

/// Image of a positive root supported in `B₁`; `None` when the support
/// leaves `B₁` or the images do not form a root.
fn tau_root(t: &AdmissibleTriple, root: PositiveRoot) -> Option<PositiveRoot> {
    let images: Option<BTreeSet<usize>> = root.support().map(|k| t.apply(k)).collect();
    let images = images?;
    let lo = *images.iter().next()?;
    let hi = *images.iter().next_back()?;
    (hi - lo + 1 == images.len()).then_some(PositiveRoot { i: lo, j: hi + 1 })
}

pub fn tau_order(g: &ReductiveAlgebra, t: &AdmissibleTriple) -> Result<RootOrder> {
    check_shape(g, t)?;
    let roots = g.positive_roots();
    let mut chains = Vec::with_capacity(roots.len());
    for (idx, &root) in roots.iter().enumerate() {
        let mut chain = vec![idx];
        let mut cur = root;
        while let Some(next) = tau_root(t, cur) {
            let ni = g
                .root_index(next)
                .ok_or_else(|| Error::Admissible(format!("image of {} is not a root", cur.label())))?;
            if chain.contains(&ni) {
                return Err(Error::Admissible(format!("tau cycles on {}", root.label())));
            }
            chain.push(ni);
            cur = next;
        }
        chains.push(chain);
    }
    Ok(RootOrder { chains })
}

/// Solutions `f_0 = particular + Σ c_k freedom[k]` of the quadruple
/// conditions, as matrices on the Cartan coordinates.
#[derive(Clone, Debug)]
pub struct F0Solution {
    pub particular: QMatrix,
    pub freedom: Vec<QMatrix>,
}

impl F0Solution {
    pub fn is_unique(&self) -> bool {
        self.freedom.is_empty()
    }
}

/// Writes `f_0 = 1/2 + G⁻¹A` with `A` antisymmetric (so `f_0 + f_0^* = 1`)
/// and solves `f_0(h_α) = (f_0 - 1)(h_{τα})`, i.e.
/// `A(h_α - h_{τα}) = -1/2 G (h_α + h_{τα})`, for `α ∈ B₁`.
pub fn solve_f0(g: &ReductiveAlgebra, t: &AdmissibleTriple) -> Result<F0Solution> {
    check_shape(g, t)?;
    let c = g.cartan_dim();
    let gram = g.cartan_gram();
    let gram_inv = gram.inverse().expect("Cartan form is nondegenerate");
    let unknowns: Vec<(usize, usize)> = (0..c).flat_map(|a| (a + 1..c).map(move |b| (a, b))).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (&a, &ta) in &t.tau {
        let (ha, hta) = (g.simple_coroot_cartan(a), g.simple_coroot_cartan(ta));
        let v = sub_vec(&ha, &hta);
        let w = gram.mul_vec(&add_vec(&ha, &hta));
        for row_idx in 0..c {
            // (A v)_row = Σ_{b>row} x_{row,b} v_b - Σ_{b<row} x_{b,row} v_b
            let mut row = vec![Q::zero(); unknowns.len()];
            for (u, &(x, y)) in unknowns.iter().enumerate() {
                if x == row_idx {
                    row[u] += &v[y];
                } else if y == row_idx {
                    row[u] -= &v[x];
                }
            }
            rows.push(row);
            rhs.push(-&w[row_idx] * qf(1, 2));
        }
    }
    let to_f0 = |x: &[Q], with_half: bool| {
        let mut a = QMatrix::zeros(c, c);
        for (u, &(i, j)) in unknowns.iter().enumerate() {
            a.set(i, j, x[u].clone());
            a.set(j, i, -x[u].clone());
        }
        let s = gram_inv.mul(&a);
        if with_half {
            QMatrix::scalar(c, &qf(1, 2)).add(&s)
        } else {
            s
        }
    };
    if unknowns.is_empty() {
        if rows.iter().zip(&rhs).any(|(_, b)| !b.is_zero()) {
            return Err(Error::Inconsistent("no skew freedom to satisfy the constraints".into()));
        }
        return Ok(F0Solution {
            particular: QMatrix::scalar(c, &qf(1, 2)),
            freedom: Vec::new(),
        });
    }
    let system = if rows.is_empty() {
        QMatrix::zeros(0, unknowns.len())
    } else {
        QMatrix::from_rows(rows)
    };
    let x = if rhs.is_empty() {
        vec![Q::zero(); unknowns.len()]
    } else {
        system
            .solve(&rhs)
            .ok_or_else(|| Error::Inconsistent("the conditions on f0 have no solution".into()))?
    };
    let freedom = if system.rows() == 0 {
        (0..unknowns.len())
            .map(|u| {
                let mut e = vec![Q::zero(); unknowns.len()];
                e[u] = qf(1, 1);
                to_f0(&e, false)
            })
            .collect()
    } else {
        system.kernel().iter().map(|k| to_f0(k, false)).collect()
    };
    Ok(F0Solution {
        particular: to_f0(&x, true),
        freedom,
    })
}

/// A triple together with its Cartan operator.
#[derive(Clone, Debug, PartialEq)]
pub struct BdQuadruple {
    pub triple: AdmissibleTriple,
    pub f0: QMatrix,
}

/// `f_0 + f_0^* = 1` on the Cartan, and the compatibility with `τ`.
pub fn check_quadruple(g: &ReductiveAlgebra, quad: &BdQuadruple) -> Result<CheckSet> {
    check_shape(g, &quad.triple)?;
    let c = g.cartan_dim();
    if quad.f0.rows() != c || quad.f0.cols() != c {
        return Err(Error::Dimension(format!("f0 must be {c}x{c}")));
    }
    let gram = g.cartan_gram();
    let adj = gram.inverse().expect("nondegenerate").mul(&quad.f0.transpose()).mul(&gram);
    let sum = quad.f0.add(&adj);
    let mut checks = CheckSet::new();
    let mut asy = None;
    'asy: for i in 0..c {
        for j in 0..c {
            let want = if i == j { qf(1, 1) } else { Q::zero() };
            if *sum.get(i, j) != want {
                asy = Some(witness(format!("entry ({}, {})", i + 1, j + 1), sum.get(i, j) - want));
                break 'asy;
            }
        }
    }
    checks.push(Check::from_witness("f0_asy", asy));
    let mut compat = None;
    let minus_one = quad.f0.sub(&QMatrix::identity(c));
    for (&a, &ta) in &quad.triple.tau {
        let lhs = quad.f0.mul_vec(&g.simple_coroot_cartan(a));
        let rhs = minus_one.mul_vec(&g.simple_coroot_cartan(ta));
        if lhs != rhs {
            compat = Some(witness(format!("a{a}"), show_vec(&sub_vec(&lhs, &rhs))));
            break;
        }
    }
    checks.push(Check::from_witness("f0_tau_compatible", compat));
    Ok(checks)
}

/// The BD data document. `rank` is the matrix size `m`; roots are 1-based
/// simple-root indices; `f0` rows are rational strings such as `"1/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BdFile {
    #[serde(rename = "type")]
    pub kind: AlgebraType,
    pub rank: usize,
    #[serde(rename = "B1")]
    pub b1: Vec<usize>,
    #[serde(rename = "B2")]
    pub b2: Vec<usize>,
    pub tau: BTreeMap<usize, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<Vec<Vec<String>>>,
}

impl BdFile {
    pub fn new(kind: AlgebraType, m: usize, triple: &AdmissibleTriple, f0: Option<&QMatrix>) -> Self {
        BdFile {
            kind,
            rank: m,
            b1: triple.b1.iter().copied().collect(),
            b2: triple.b2.iter().copied().collect(),
            tau: triple.tau.clone(),
            f0: f0.map(|m| m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()),
        }
    }

    pub fn triple(&self) -> AdmissibleTriple {
        AdmissibleTriple::new(self.b1.iter().copied(), self.b2.iter().copied(), self.tau.clone())
    }

    pub fn f0_matrix(&self) -> Result<Option<QMatrix>> {
        let Some(rows) = &self.f0 else {
            return Ok(None);
        };
        let parsed = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| Q::from_str(s.trim()).map_err(|_| Error::Format(format!("bad rational {s:?}"))))
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, Vec::len);
        if parsed.iter().any(|r| r.len() != cols) || parsed.len() != cols {
            return Err(Error::Format("f0 must be a square matrix".into()));
        }
        Ok(Some(QMatrix::from_rows(parsed)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
