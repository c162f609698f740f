//! Lie algebras with an invariant form, given by structure constants, and the
//! matrix realizations of `gl(m)` and `sl(m)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bd::qmatrix::{zero_vec, QMatrix, QVec, Q};
use crate::error::{Error, Result};

/// Coordinates with only the nonzero entries listed.
pub type SparseQ = Vec<(usize, Q)>;

fn sparsify(v: &[Q]) -> SparseQ {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// A Lie algebra on a fixed basis `x_0, ..., x_{d-1}` with a nondegenerate
/// symmetric form.
#[derive(Clone, Debug)]
pub struct LieData {
    dim: usize,
    structure: Vec<Vec<SparseQ>>,
    gram: QMatrix,
    gram_inv: QMatrix,
}

impl LieData {
    /// `brackets[a][b]` are the coordinates of `[x_a, x_b]`.
    pub fn new(brackets: Vec<Vec<QVec>>, gram: QMatrix) -> Result<Self> {
        let dim = gram.rows();
        if brackets.len() != dim || brackets.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("structure constants do not match the form".into()));
        }
        let gram_inv = gram
            .inverse()
            .ok_or_else(|| Error::Precondition("invariant form is degenerate".into()))?;
        let structure = brackets
            .iter()
            .map(|row| row.iter().map(|v| sparsify(v)).collect())
            .collect();
        Ok(LieData {
            dim,
            structure,
            gram,
            gram_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &QMatrix {
        &self.gram_inv
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseQ {
        &self.structure[a][b]
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> QVec {
        let mut out = zero_vec(self.dim);
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                let c = ua * vb;
                for (e, s) in &self.structure[a][b] {
                    out[*e] += &c * s;
                }
            }
        }
        out
    }

    pub fn form(&self, u: &[Q], v: &[Q]) -> Q {
        let gv = self.gram.mul_vec(v);
        let mut acc = Q::zero();
        for (x, y) in u.iter().zip(&gv) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        acc
    }

    /// The adjoint `f*` with `κ(f x, y) = κ(x, f* y)`.
    pub fn adjoint(&self, f: &QMatrix) -> QMatrix {
        self.gram_inv.mul(&f.transpose()).mul(&self.gram)
    }

    /// Coefficients `t^{ab}` of the Casimir tensor `Σ a_μ ⊗ a^μ`.
    pub fn casimir(&self) -> &QMatrix {
        &self.gram_inv
    }

    /// First basis triple violating `κ([x,y],z) + κ(y,[x,z]) = 0`.
    pub fn invariance_witness(&self) -> Option<(String, Q)> {
        let d = self.dim;
        let e = |i| crate::bd::qmatrix::unit_vec(d, i);
        for a in 0..d {
            for b in 0..d {
                let xy = self.bracket(&e(a), &e(b));
                for c in 0..d {
                    let xz = self.bracket(&e(a), &e(c));
                    let v = self.form(&xy, &e(c)) + self.form(&e(b), &xz);
                    if !v.is_zero() {
                        return Some((format!("(x{a}, x{b}, x{c})"), v));
                    }
                }
            }
        }
        None
    }

    /// First basis triple violating the Jacobi identity.
    pub fn jacobi_witness(&self) -> Option<(String, QVec)> {
        jacobi_witness_for(self.dim, |a, b| self.structure[a][b].clone(), |u, c| {
            let mut out = zero_vec(self.dim);
            for (a, ua) in u {
                for (e, s) in &self.structure[*a][c] {
                    out[*e] += ua * s;
                }
            }
            out
        })
    }

    /// Dimension of the centre.
    pub fn center_dim(&self) -> usize {
        // x is central iff [x, x_b] = 0 for every b
        let d = self.dim;
        let mut m = QMatrix::zeros(d * d, d);
        for a in 0..d {
            for b in 0..d {
                for (e, s) in &self.structure[a][b] {
                    m.set(b * d + e, a, s.clone());
                }
            }
        }
        m.kernel().len()
    }

    /// Dimension of `[g, g]`.
    pub fn derived_dim(&self) -> usize {
        let vecs: Vec<QVec> = (0..self.dim)
            .flat_map(|a| (0..self.dim).map(move |b| (a, b)))
            .map(|(a, b)| {
                let mut v = zero_vec(self.dim);
                for (e, s) in &self.structure[a][b] {
                    v[*e] = s.clone();
                }
                v
            })
            .collect();
        crate::bd::qmatrix::span_dim(self.dim, &vecs)
    }
}

/// Jacobi check for a bilinear bracket given on basis pairs (`pair`) and
/// extended linearly in the first slot (`with`).
pub(crate) fn jacobi_witness_for<P, W>(d: usize, pair: P, with: W) -> Option<(String, QVec)>
where
    P: Fn(usize, usize) -> SparseQ + Sync,
    W: Fn(&SparseQ, usize) -> QVec + Sync,
{
    use rayon::prelude::*;
    let pairs: Vec<Vec<SparseQ>> = (0..d).map(|a| (0..d).map(|b| pair(a, b)).collect()).collect();
    (0..d).into_par_iter().find_map_first(|a| {
        for b in 0..d {
            for c in 0..d {
                // [[a,b],c] + [[b,c],a] + [[c,a],b]
                let mut total = with(&pairs[a][b], c);
                let t2 = with(&pairs[b][c], a);
                let t3 = with(&pairs[c][a], b);
                for (x, (y, z)) in total.iter_mut().zip(t2.iter().zip(&t3)) {
                    *x += y + z;
                }
                if total.iter().any(|x| !x.is_zero()) {
                    return Some((format!("(x{a}, x{b}, x{c})"), total));
                }
            }
        }
        None
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraType {
    Gl,
    Sl,
}

impl AlgebraType {
    pub fn name(&self) -> &'static str {
        match self {
            AlgebraType::Gl => "gl",
            AlgebraType::Sl => "sl",
        }
    }
}

/// The positive root `ε_i - ε_j` (`i < j`, 1-based), which is the sum of the
/// simple roots `α_i, ..., α_{j-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositiveRoot {
    pub i: usize,
    pub j: usize,
}

impl PositiveRoot {
    /// Simple-root indices in the support.
    pub fn support(&self) -> std::ops::Range<usize> {
        self.i..self.j
    }

    pub fn height(&self) -> usize {
        self.j - self.i
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.support().map(|k| format!("a{k}")).collect();
        parts.join("+")
    }
}

/// `gl(m)` or `sl(m)` realized by `m × m` rational matrices, with the trace
/// form. The basis lists the Cartan part first (`E_kk` for `gl`,
/// `h_k = E_kk - E_{k+1,k+1}` for `sl`), then `e_α = E_ij` for positive roots
/// ordered by height, then `e_{-α} = E_ji` in the same order.
#[derive(Clone, Debug)]
pub struct ReductiveAlgebra {
    kind: AlgebraType,
    m: usize,
    basis: Vec<QMatrix>,
    positive: Vec<PositiveRoot>,
    lie: LieData,
}

fn matrix_unit(m: usize, i: usize, j: usize) -> QMatrix {
    let mut e = QMatrix::zeros(m, m);
    e.set(i - 1, j - 1, Q::one());
    e
}

fn trace(x: &QMatrix) -> Q {
    (0..x.rows()).fold(Q::zero(), |acc, i| acc + x.get(i, i))
}

impl ReductiveAlgebra {
    pub fn build(kind: AlgebraType, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Precondition(format!("{}({m}) needs m >= 2", kind.name())));
        }
        let mut basis = Vec::new();
        match kind {
            AlgebraType::Gl => {
                for k in 1..=m {
                    basis.push(matrix_unit(m, k, k));
                }
            }
            AlgebraType::Sl => {
                for k in 1..m {
                    basis.push(matrix_unit(m, k, k).sub(&matrix_unit(m, k + 1, k + 1)));
                }
            }
        }
        let positive: Vec<PositiveRoot> = (1..m)
            .flat_map(|h| (1..=m - h).map(move |i| PositiveRoot { i, j: i + h }))
            .collect();
        for r in &positive {
            basis.push(matrix_unit(m, r.i, r.j));
        }
        for r in &positive {
            basis.push(matrix_unit(m, r.j, r.i));
        }
        let dim = basis.len();
        let mut gram = QMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                gram.set(a, b, trace(&basis[a].mul(&basis[b])));
            }
        }
        let partial = ReductiveAlgebra {
            kind,
            m,
            basis: basis.clone(),
            positive,
            lie: LieData::new(vec![vec![zero_vec(dim); dim]; dim], gram.clone())?,
        };
        let mut brackets = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let c = basis[a].mul(&basis[b]).sub(&basis[b].mul(&basis[a]));
                brackets[a][b] = partial.coords(&c)?;
            }
        }
        Ok(ReductiveAlgebra {
            lie: LieData::new(brackets, gram)?,
            ..partial
        })
    }

    pub fn kind(&self) -> AlgebraType {
        self.kind
    }

    /// Matrix size `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn name(&self) -> String {
        format!("{}({})", self.kind.name(), self.m)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn lie(&self) -> &LieData {
        &self.lie
    }

    pub fn cartan_dim(&self) -> usize {
        match self.kind {
            AlgebraType::Gl => self.m,
            AlgebraType::Sl => self.m - 1,
        }
    }

    /// Number of simple roots.
    pub fn num_simple(&self) -> usize {
        self.m - 1
    }

    pub fn positive_roots(&self) -> &[PositiveRoot] {
        &self.positive
    }

    pub fn root_index(&self, root: PositiveRoot) -> Option<usize> {
        self.positive.iter().position(|&r| r == root)
    }

    /// Basis position of `e_α`.
    pub fn pos_index(&self, root: usize) -> usize {
        self.cartan_dim() + root
    }

    /// Basis position of `e_{-α}`.
    pub fn neg_index(&self, root: usize) -> usize {
        self.cartan_dim() + self.positive.len() + root
    }

    pub fn basis_matrix(&self, a: usize) -> &QMatrix {
        &self.basis[a]
    }

    pub fn basis_label(&self, a: usize) -> String {
        let c = self.cartan_dim();
        let n = self.positive.len();
        if a < c {
            match self.kind {
                AlgebraType::Gl => format!("E{}{}", a + 1, a + 1),
                AlgebraType::Sl => format!("h_a{}", a + 1),
            }
        } else if a < c + n {
            format!("e_{}", self.positive[a - c].label())
        } else {
            format!("e_-({})", self.positive[a - c - n].label())
        }
    }

    /// Coordinates of a matrix in the basis; fails if it is not in the algebra.
    pub fn coords(&self, x: &QMatrix) -> Result<QVec> {
        let m = self.m;
        if x.rows() != m || x.cols() != m {
            return Err(Error::Dimension(format!("expected a {m}x{m} matrix")));
        }
        let mut v = zero_vec(self.dim());
        let c = self.cartan_dim();
        for (idx, r) in self.positive.iter().enumerate() {
            v[c + idx] = x.get(r.i - 1, r.j - 1).clone();
            v[c + self.positive.len() + idx] = x.get(r.j - 1, r.i - 1).clone();
        }
        match self.kind {
            AlgebraType::Gl => {
                for k in 0..m {
                    v[k] = x.get(k, k).clone();
                }
            }
            AlgebraType::Sl => {
                if !trace(x).is_zero() {
                    return Err(Error::Precondition("matrix is not traceless".into()));
                }
                let mut acc = Q::zero();
                for k in 0..m - 1 {
                    acc += x.get(k, k);
                    v[k] = acc.clone();
                }
            }
        }
        Ok(v)
    }

    pub fn to_matrix(&self, v: &[Q]) -> QMatrix {
        let mut out = QMatrix::zeros(self.m, self.m);
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.basis[a].scale(c));
            }
        }
        out
    }

    /// `h_α = [e_α, e_{-α}]` for the positive root with index `root`, in
    /// full coordinates.
    pub fn coroot(&self, root: usize) -> QVec {
        let e = |i| crate::bd::qmatrix::unit_vec(self.dim(), i);
        self.lie.bracket(&e(self.pos_index(root)), &e(self.neg_index(root)))
    }

    /// `h_{α_k}` restricted to Cartan coordinates (`k` is 1-based).
    pub fn simple_coroot_cartan(&self, k: usize) -> QVec {
        let root = self
            .root_index(PositiveRoot { i: k, j: k + 1 })
            .expect("simple root exists");
        self.coroot(root)[..self.cartan_dim()].to_vec()
    }

    /// `(α_a, α_b)` for simple roots (1-based).
    pub fn simple_inner(&self, a: usize, b: usize) -> i64 {
        if a == b {
            2
        } else if a.abs_diff(b) == 1 {
            -1
        } else {
            0
        }
    }

    /// Gram matrix of the form restricted to the Cartan part.
    pub fn cartan_gram(&self) -> QMatrix {
        let c = self.cartan_dim();
        let mut g = QMatrix::zeros(c, c);
        for a in 0..c {
            for b in 0..c {
                g.set(a, b, self.lie.gram().get(a, b).clone());
            }
        }
        g
    }

    /// Renders a vector with basis labels, for witnesses.
    pub fn show(&self, v: &[Q]) -> String {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(a, x)| format!("{x}*{}", self.basis_label(a)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
