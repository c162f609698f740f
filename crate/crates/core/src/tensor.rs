//! Sparse operators on `V^{⊗k}` with Laurent polynomial entries.
//!
//! Indices are 1-based multi-indices `(i_1, ..., i_k)` with `1 <= i_j <= n`.
//! They flatten row-major: `(i_1, ..., i_k) ↦ Σ (i_j - 1) n^{k-j}`; the public
//! 1-based flat index adds one to that.
//!
//! For a 2-leg operator the entry at `(row = (k, l), column = (i, j))` is the
//! coefficient `R_{ij}^{kl}`, i.e. `R(e_i ⊗ e_j) = Σ R_{ij}^{kl} e_k ⊗ e_l`.
//! Entries are stored column-major.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};

pub type MultiIndex = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOperator {
    n: usize,
    legs: usize,
    vars: Vars,
    /// flat column -> flat row -> nonzero entry (both 0-based)
    cols: BTreeMap<usize, BTreeMap<usize, LaurentPoly>>,
}

/// First entry where two operators differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryWitness {
    pub row: MultiIndex,
    pub col: MultiIndex,
    pub difference: LaurentPoly,
}

impl EntryWitness {
    pub fn location(&self) -> String {
        format!("row {:?} col {:?}", self.row, self.col)
    }
}

impl SparseOperator {
    pub fn zero(n: usize, legs: usize, vars: &Vars) -> Self {
        assert!(n >= 1, "base dimension must be positive");
        SparseOperator {
            n,
            legs,
            vars: vars.clone(),
            cols: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, legs: usize, vars: &Vars) -> Self {
        Self::scalar(n, legs, &LaurentPoly::one(vars))
    }

    pub fn scalar(n: usize, legs: usize, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(n, legs, c.vars());
        if !c.is_zero() {
            for idx in 0..n.pow(legs as u32) {
                out.cols.entry(idx).or_default().insert(idx, c.clone());
            }
        }
        out
    }

    /// The flip `P(e_i ⊗ e_j) = e_j ⊗ e_i`.
    pub fn flip(n: usize, vars: &Vars) -> Self {
        let mut out = Self::zero(n, 2, vars);
        for i in 1..=n {
            for j in 1..=n {
                out.set(&[j, i], &[i, j], LaurentPoly::one(vars))
                    .expect("indices in range");
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Dimension of `V^{⊗legs}`.
    pub fn dim(&self) -> usize {
        self.n.pow(self.legs as u32)
    }

    pub fn nnz(&self) -> usize {
        self.cols.values().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn flatten(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.legs {
            return Err(Error::Index(format!(
                "multi-index {idx:?} has length {}, expected {}",
                idx.len(),
                self.legs
            )));
        }
        let mut flat = 0usize;
        for &i in idx {
            if i == 0 || i > self.n {
                return Err(Error::Index(format!(
                    "component {i} of {idx:?} outside 1..={}",
                    self.n
                )));
            }
            flat = flat * self.n + (i - 1);
        }
        Ok(flat)
    }

    pub fn unflatten(&self, mut flat: usize) -> MultiIndex {
        let mut out = vec![0; self.legs];
        for slot in out.iter_mut().rev() {
            *slot = flat % self.n + 1;
            flat /= self.n;
        }
        out
    }

    /// Entry at `(row, col)`; zero when absent.
    pub fn get(&self, row: &[usize], col: &[usize]) -> Result<LaurentPoly> {
        let r = self.flatten(row)?;
        let c = self.flatten(col)?;
        Ok(self.get_flat(r, c))
    }

    pub fn get_flat(&self, row: usize, col: usize) -> LaurentPoly {
        self.cols
            .get(&col)
            .and_then(|c| c.get(&row))
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(&self.vars))
    }

    /// Overwrites the entry at `(row, col)`; a zero value removes it.
    pub fn set(&mut self, row: &[usize], col: &[usize], value: LaurentPoly) -> Result<()> {
        if value.vars() != &self.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: value.vars().names().to_vec(),
            });
        }
        let r = self.flatten(row)?;
        let c = self.flatten(col)?;
        self.set_flat(r, c, value);
        Ok(())
    }

    fn set_flat(&mut self, r: usize, c: usize, value: LaurentPoly) {
        if value.is_zero() {
            if let Some(column) = self.cols.get_mut(&c) {
                column.remove(&r);
                if column.is_empty() {
                    self.cols.remove(&c);
                }
            }
        } else {
            self.cols.entry(c).or_default().insert(r, value);
        }
    }

    /// All nonzero entries as `(row, col, value)`, sorted by column then row.
    pub fn entries(&self) -> impl Iterator<Item = (MultiIndex, MultiIndex, &LaurentPoly)> + '_ {
        self.cols.iter().flat_map(move |(&c, column)| {
            column
                .iter()
                .map(move |(&r, v)| (self.unflatten(r), self.unflatten(c), v))
        })
    }

    /// Column `col` as a sparse vector `row -> value`.
    pub fn apply_basis(&self, col: &[usize]) -> Result<Vec<(MultiIndex, LaurentPoly)>> {
        let c = self.flatten(col)?;
        Ok(self
            .cols
            .get(&c)
            .map(|column| {
                column
                    .iter()
                    .map(|(&r, v)| (self.unflatten(r), v.clone()))
                    .collect()
            })
            .unwrap_or_default())
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.n != other.n || self.legs != other.legs {
            return Err(Error::Dimension(format!(
                "{what}: (n={}, legs={}) vs (n={}, legs={})",
                self.n, self.legs, other.n, other.legs
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

    /// The operator product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "compose")?;
        let cols: Vec<(usize, BTreeMap<usize, LaurentPoly>)> = other
            .cols
            .par_iter()
            .filter_map(|(&c, bcol)| {
                let mut acc: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
                for (&m, b) in bcol {
                    if let Some(acol) = self.cols.get(&m) {
                        for (&r, a) in acol {
                            acc.entry(r)
                                .or_insert_with(|| LaurentPoly::zero(&self.vars))
                                .add_product(a, b);
                        }
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                (!acc.is_empty()).then_some((c, acc))
            })
            .collect();
        Ok(SparseOperator {
            n: self.n,
            legs: self.legs,
            vars: self.vars.clone(),
            cols: cols.into_iter().collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let mut out = self.clone();
        for (&c, column) in &other.cols {
            for (&r, v) in column {
                let cur = out.get_flat(r, c);
                out.set_flat(r, c, &cur + v);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|v| -v)
    }

    /// Multiplies every entry by a scalar polynomial.
    pub fn scale(&self, c: &LaurentPoly) -> Result<Self> {
        if c.vars() != &self.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: c.vars().names().to_vec(),
            });
        }
        Ok(self.map_entries(|v| v * c))
    }

    /// Applies `f` to every stored entry, dropping zeros.
    pub fn map_entries<F>(&self, f: F) -> Self
    where
        F: Fn(&LaurentPoly) -> LaurentPoly,
    {
        let mut out = Self::zero(self.n, self.legs, &self.vars);
        for (&c, column) in &self.cols {
            for (&r, v) in column {
                let w = f(v);
                if !w.is_zero() {
                    out.cols.entry(c).or_default().insert(r, w);
                }
            }
        }
        out
    }

    /// Applies a ring map to every entry, landing in `target`.
    pub fn map_ring<F>(&self, target: &Vars, f: F) -> Result<Self>
    where
        F: Fn(&LaurentPoly) -> Result<LaurentPoly>,
    {
        let mut out = Self::zero(self.n, self.legs, target);
        for (&c, column) in &self.cols {
            for (&r, v) in column {
                let w = f(v)?;
                if w.vars() != target {
                    return Err(Error::VariableMismatch {
                        left: target.names().to_vec(),
                        right: w.vars().names().to_vec(),
                    });
                }
                if !w.is_zero() {
                    out.cols.entry(c).or_default().insert(r, w);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: legs add, entries multiply.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "kron of base dimensions {} and {}",
                self.n, other.n
            )));
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            });
        }
        let shift = other.dim();
        let mut out = Self::zero(self.n, self.legs + other.legs, &self.vars);
        for (&ca, acol) in &self.cols {
            for (&ra, a) in acol {
                for (&cb, bcol) in &other.cols {
                    for (&rb, b) in bcol {
                        out.cols
                            .entry(ca * shift + cb)
                            .or_default()
                            .insert(ra * shift + rb, a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Embeds a 2-leg operator on legs `positions` of a `total`-leg space.
    pub fn embed_leg(&self, positions: (usize, usize), total: usize) -> Result<Self> {
        if self.legs != 2 {
            return Err(Error::Dimension(format!(
                "embed_leg needs a 2-leg operator, got {} legs",
                self.legs
            )));
        }
        let (a, b) = positions;
        if a == b {
            return Err(Error::RepeatedLegs(positions));
        }
        if a == 0 || b == 0 || a > total || b > total {
            return Err(Error::Index(format!(
                "leg positions {positions:?} outside 1..={total}"
            )));
        }
        let mut out = Self::zero(self.n, total, &self.vars);
        let rest: Vec<usize> = (1..=total).filter(|&x| x != a && x != b).collect();
        let spectator_count = self.n.pow(rest.len() as u32);
        let mut row = vec![0usize; total];
        let mut col = vec![0usize; total];
        for (r2, c2, v) in self.entries() {
            for s in 0..spectator_count {
                let mut rem = s;
                for &leg in rest.iter().rev() {
                    let val = rem % self.n + 1;
                    rem /= self.n;
                    row[leg - 1] = val;
                    col[leg - 1] = val;
                }
                row[a - 1] = r2[0];
                row[b - 1] = r2[1];
                col[a - 1] = c2[0];
                col[b - 1] = c2[1];
                let rf = out.flatten(&row)?;
                let cf = out.flatten(&col)?;
                out.cols.entry(cf).or_default().insert(rf, v.clone());
            }
        }
        Ok(out)
    }

    /// Inverse of a diagonal operator whose diagonal entries are all units.
    pub fn diagonal_inverse(&self) -> Result<Self> {
        let mut out = Self::zero(self.n, self.legs, &self.vars);
        for idx in 0..self.dim() {
            let v = self.get_flat(idx, idx);
            if v.is_zero() {
                return Err(Error::Precondition(format!(
                    "diagonal entry at {:?} is zero",
                    self.unflatten(idx)
                )));
            }
            out.set_flat(idx, idx, v.inverse_unit()?);
        }
        if self.nnz() != self.dim() {
            return Err(Error::Precondition("operator is not diagonal".into()));
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.n, self.legs, &self.vars)
    }

    /// The lexicographically first `(column, row)` entry where `self` and
    /// `other` differ, with the difference `self - other`.
    pub fn first_difference(&self, other: &Self) -> Result<Option<EntryWitness>> {
        let diff = self.sub(other)?;
        Ok(diff.cols.iter().next().map(|(&c, column)| {
            let (&r, v) = column.iter().next().expect("stored columns are nonempty");
            EntryWitness {
                row: diff.unflatten(r),
                col: diff.unflatten(c),
                difference: v.clone(),
            }
        }))
    }

    /// Text dump: header `n legs`, then one line per entry with the row
    /// multi-index, the column multi-index and the coefficient rows as
    /// compact JSON, sorted by column then row.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.legs);
        for (row, col, v) in self.entries() {
            for x in row.iter().chain(&col) {
                write!(out, "{x} ").expect("write to string");
            }
            out.push_str(&serde_json::to_string(&v.to_rows()).expect("rows serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_dump(text: &str, vars: &Vars) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty matrix dump".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [n, legs] = dims[..] else {
            return Err(Error::Format(format!("bad header {header:?}")));
        };
        if n == 0 {
            return Err(Error::Format("base dimension must be positive".into()));
        }
        let mut out = Self::zero(n, legs, vars);
        for line in lines {
            let mut parts = line.splitn(2 * legs + 1, ' ');
            let mut idx = Vec::with_capacity(2 * legs);
            for _ in 0..2 * legs {
                let tok = parts
                    .next()
                    .ok_or_else(|| Error::Format(format!("short line {line:?}")))?;
                idx.push(
                    tok.parse::<usize>()
                        .map_err(|_| Error::Format(format!("bad index {tok:?}")))?,
                );
            }
            let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(
                parts
                    .next()
                    .ok_or_else(|| Error::Format(format!("missing coefficient in {line:?}")))?,
            )?;
            let v = LaurentPoly::from_rows(vars, &rows)?;
            if v.is_zero() {
                return Err(Error::Format(format!("explicit zero entry in {line:?}")));
            }
            let r = out.flatten(&idx[..legs])?;
            let c = out.flatten(&idx[legs..])?;
            if out.cols.get(&c).is_some_and(|col| col.contains_key(&r)) {
                return Err(Error::Format(format!("duplicate entry in {line:?}")));
            }
            out.set_flat(r, c, v);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Vars;

    fn vars() -> Vars {
        Vars::qp()
    }

    fn mono(a: i64, b: i64) -> LaurentPoly {
        LaurentPoly::unit(&vars(), vec![a, b])
    }

    /// A generic 2-leg operator with distinct unit entries.
    fn sample(n: usize) -> SparseOperator {
        let mut a = SparseOperator::zero(n, 2, &vars());
        for i in 1..=n {
            for j in 1..=n {
                let k = (i * 7 + j * 3) % n + 1;
                a.set(&[k, i], &[i, j], mono(i as i64, j as i64 - 2)).unwrap();
            }
        }
        a
    }

    #[test]
    fn identity_kron_identity() {
        let i1 = SparseOperator::identity(3, 1, &vars());
        assert!(i1.kron(&i1).unwrap().is_identity());
    }

    #[test]
    fn kron_of_single_entries() {
        let mut a = SparseOperator::zero(2, 1, &vars());
        a.set(&[2], &[1], mono(1, 0)).unwrap();
        let mut b = SparseOperator::zero(2, 1, &vars());
        b.set(&[1], &[2], mono(0, 3)).unwrap();
        let ab = a.kron(&b).unwrap();
        assert_eq!(ab.nnz(), 1);
        assert_eq!(ab.get(&[2, 1], &[1, 2]).unwrap(), mono(1, 3));
    }

    #[test]
    fn kron_swaps_under_flip_conjugation() {
        let n = 3;
        let mut a = SparseOperator::zero(n, 1, &vars());
        a.set(&[1], &[2], mono(1, 0)).unwrap();
        a.set(&[3], &[3], mono(0, 2)).unwrap();
        let id = SparseOperator::identity(n, 1, &vars());
        let p = SparseOperator::flip(n, &vars());
        let left = a.kron(&id).unwrap();
        let right = id.kron(&a).unwrap();
        assert_eq!(p.compose(&left).unwrap().compose(&p).unwrap(), right);
    }

    #[test]
    fn kron_dimension_mismatch() {
        let a = SparseOperator::identity(2, 1, &vars());
        let b = SparseOperator::identity(3, 1, &vars());
        assert!(matches!(a.kron(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn embed_identity_is_identity() {
        let id2 = SparseOperator::identity(3, 2, &vars());
        assert!(id2.embed_leg((1, 3), 3).unwrap().is_identity());
    }

    #[test]
    fn embedded_flips_permute_legs() {
        let p = SparseOperator::flip(3, &vars());
        let p12 = p.embed_leg((1, 2), 3).unwrap();
        assert_eq!(p12.apply_basis(&[1, 2, 3]).unwrap(), vec![(vec![2, 1, 3], mono(0, 0))]);
        let p13 = p.embed_leg((1, 3), 3).unwrap();
        assert_eq!(p13.apply_basis(&[1, 2, 3]).unwrap(), vec![(vec![3, 2, 1], mono(0, 0))]);
    }

    #[test]
    fn embed_12_is_kron_with_identity() {
        let a = sample(3);
        let id = SparseOperator::identity(3, 1, &vars());
        assert_eq!(a.embed_leg((1, 2), 3).unwrap(), a.kron(&id).unwrap());
        assert_eq!(a.embed_leg((2, 3), 3).unwrap(), id.kron(&a).unwrap());
    }

    #[test]
    fn embed_rejects_repeated_legs() {
        let a = sample(2);
        assert!(matches!(a.embed_leg((2, 2), 3), Err(Error::RepeatedLegs(_))));
    }

    #[test]
    fn flip_is_an_involution() {
        for n in 1..=5 {
            let p = SparseOperator::flip(n, &vars());
            assert!(p.compose(&p).unwrap().is_identity());
        }
    }

    #[test]
    fn compose_with_identity_and_associativity() {
        let a = sample(3);
        let b = sample(3).map_entries(|v| v * &mono(-1, 1));
        let id = SparseOperator::identity(3, 2, &vars());
        assert_eq!(a.compose(&id).unwrap(), a);
        let p = SparseOperator::flip(3, &vars());
        let lhs = a.compose(&b).unwrap().compose(&p).unwrap();
        let rhs = a.compose(&b.compose(&p).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedding_commutes_with_composition() {
        let a = sample(2);
        let b = SparseOperator::flip(2, &vars()).compose(&sample(2)).unwrap();
        for pos in [(1, 2), (1, 3), (2, 3), (3, 1)] {
            let lhs = a.compose(&b).unwrap().embed_leg(pos, 3).unwrap();
            let rhs = a
                .embed_leg(pos, 3)
                .unwrap()
                .compose(&b.embed_leg(pos, 3).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "positions {pos:?}");
        }
    }

    #[test]
    fn kron_is_associative() {
        let a = sample(2);
        let mut b = SparseOperator::zero(2, 1, &vars());
        b.set(&[1], &[2], mono(2, 1)).unwrap();
        b.set(&[2], &[2], mono(0, -1)).unwrap();
        let lhs = a.kron(&b).unwrap().kron(&a).unwrap();
        let rhs = a.kron(&b.kron(&a).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn flattening_is_row_major() {
        let op = SparseOperator::zero(3, 2, &vars());
        assert_eq!(op.flatten(&[1, 1]).unwrap(), 0);
        assert_eq!(op.flatten(&[1, 3]).unwrap(), 2);
        assert_eq!(op.flatten(&[2, 1]).unwrap(), 3);
        assert_eq!(op.unflatten(7), vec![3, 2]);
        assert!(op.flatten(&[0, 1]).is_err());
        assert!(op.flatten(&[1, 4]).is_err());
    }

    #[test]
    fn dump_round_trip() {
        let a = sample(3);
        let text = a.to_dump();
        assert!(text.starts_with("3 2\n"));
        assert_eq!(SparseOperator::from_dump(&text, &vars()).unwrap(), a);
        assert!(SparseOperator::from_dump("3\n", &vars()).is_err());
    }

    #[test]
    fn witness_reports_first_difference() {
        let a = sample(2);
        let mut b = a.clone();
        b.set(&[2, 2], &[2, 1], mono(5, 5)).unwrap();
        let w = a.first_difference(&b).unwrap().unwrap();
        assert_eq!(w.col, vec![2, 1]);
        assert!(!w.difference.is_zero());
        assert!(a.first_difference(&a).unwrap().is_none());
    }
}
