//! Quadratic presentations of `A(R)`, `S(R)` and `Λ(R)`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};
use crate::qalg::ncpoly::{Alphabet, NCPolynomial};
use crate::rmatrix::Scalars;
use crate::tensor::SparseOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticPresentation {
    alphabet: Alphabet,
    vars: Vars,
    relations: Vec<NCPolynomial>,
}

impl QuadraticPresentation {
    pub fn new(alphabet: Alphabet, vars: &Vars, relations: Vec<NCPolynomial>) -> Result<Self> {
        for r in &relations {
            if r.alphabet() != alphabet {
                return Err(Error::Alphabet("relation over a different alphabet".into()));
            }
            if r.vars() != vars {
                return Err(Error::VariableMismatch {
                    left: vars.names().to_vec(),
                    right: r.vars().names().to_vec(),
                });
            }
            if !r.is_zero() && r.degree() != Some(2) {
                return Err(Error::Precondition(format!(
                    "relation is not homogeneous of degree 2: {r}"
                )));
            }
        }
        Ok(QuadraticPresentation {
            alphabet,
            vars: vars.clone(),
            relations,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn relations(&self) -> &[NCPolynomial] {
        &self.relations
    }

    /// True when every relation is homogeneous for [`Alphabet::grade`].
    pub fn is_graded(&self) -> bool {
        self.relations.iter().all(|r| {
            let mut grades = r.terms().map(|(w, _)| self.alphabet.grade(w));
            match grades.next() {
                None => true,
                Some(g) => grades.all(|h| h == g),
            }
        })
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            alphabet: self.alphabet.names(),
            vars: self.vars.names().to_vec(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms()
                        .map(|(w, c)| PresentationTerm {
                            word: w.iter().map(|&l| self.alphabet.name(l)).collect(),
                            coeff: c.to_rows(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Serialized presentation: alphabet list plus relations as word/coefficient
/// rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub alphabet: Vec<String>,
    pub vars: Vec<String>,
    pub relations: Vec<Vec<PresentationTerm>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationTerm {
    pub word: Vec<String>,
    pub coeff: Vec<Vec<Value>>,
}

impl PresentationFile {
    pub fn to_presentation(&self) -> Result<QuadraticPresentation> {
        let alphabet = infer_alphabet(&self.alphabet)?;
        let vars = Vars::new(&self.vars);
        let relations = self
            .relations
            .iter()
            .map(|terms| {
                let mut r = NCPolynomial::zero(alphabet, &vars);
                for t in terms {
                    let word = t
                        .word
                        .iter()
                        .map(|name| alphabet.parse_name(name))
                        .collect::<Result<Vec<_>>>()?;
                    r.add_term(word, LaurentPoly::from_rows(&vars, &t.coeff)?);
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        QuadraticPresentation::new(alphabet, &vars, relations)
    }
}

fn infer_alphabet(names: &[String]) -> Result<Alphabet> {
    let size = names.len();
    let root = (size as f64).sqrt().round() as usize;
    let candidates = [Alphabet::X(size), Alphabet::T(root.max(1))];
    candidates
        .into_iter()
        .find(|a| a.size() == size && a.names() == names)
        .ok_or_else(|| Error::Format("alphabet is neither x_1..x_n nor T_i^k".into()))
}

fn require_two_legs(r: &SparseOperator) -> Result<()> {
    if r.legs() != 2 {
        return Err(Error::Dimension("presentations need a 2-leg R".into()));
    }
    Ok(())
}

/// The FRT relations
/// `Σ_{u,v} R_{ji}^{uv} T_u^k T_v^l - Σ_{u,v} T_i^u T_j^v R_{vu}^{kl}`,
/// one for each `(i, j, k, l)`, in lexicographic order.
pub fn frt_relations(r: &SparseOperator) -> Result<QuadraticPresentation> {
    require_two_legs(r)?;
    let n = r.n();
    let alphabet = Alphabet::T(n);
    let vars = r.vars();
    let mut relations = Vec::with_capacity(n.pow(4));
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    let mut rel = NCPolynomial::zero(alphabet, vars);
                    for (out, c) in r.apply_basis(&[j, i])? {
                        let (u, v) = (out[0], out[1]);
                        rel.add_term(vec![alphabet.t(u, k), alphabet.t(v, l)], c);
                    }
                    for u in 1..=n {
                        for v in 1..=n {
                            let c = r.get(&[k, l], &[v, u])?;
                            rel.add_term(vec![alphabet.t(i, u), alphabet.t(j, v)], -c);
                        }
                    }
                    relations.push(rel);
                }
            }
        }
    }
    QuadraticPresentation::new(alphabet, vars, relations)
}

fn xx_relations(r: &SparseOperator, swap_coeff: LaurentPoly, r_coeff: LaurentPoly) -> Result<QuadraticPresentation> {
    require_two_legs(r)?;
    let n = r.n();
    let alphabet = Alphabet::X(n);
    let vars = r.vars();
    let mut relations = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let mut rel = NCPolynomial::zero(alphabet, vars);
            rel.add_term(vec![alphabet.x(j), alphabet.x(i)], swap_coeff.clone());
            for (out, c) in r.apply_basis(&[i, j])? {
                rel.add_term(vec![alphabet.x(out[0]), alphabet.x(out[1])], &r_coeff * &c);
            }
            relations.push(rel);
        }
    }
    QuadraticPresentation::new(alphabet, vars, relations)
}

/// `S(R)`: relations `q x_j x_i - p R_{ij}^{kl} x_k x_l`.
pub fn symmetric_relations(r: &SparseOperator) -> Result<QuadraticPresentation> {
    let s = Scalars::of(r.vars(), r.n())?;
    xx_relations(r, s.q.clone(), -s.p.clone())
}

/// `Λ(R)`: relations `q^{-1} x_j x_i + p R_{ij}^{kl} x_k x_l`.
pub fn exterior_relations(r: &SparseOperator) -> Result<QuadraticPresentation> {
    let s = Scalars::of(r.vars(), r.n())?;
    xx_relations(r, s.q.inverse_unit()?, s.p.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{build_cg, CgParams};

    #[test]
    fn frt_counts_and_grading() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let pres = frt_relations(&r).unwrap();
        assert_eq!(pres.relations().len(), 16);
        assert!(pres.is_graded());
        let r3 = build_cg(CgParams::new(3)).unwrap();
        assert!(frt_relations(&r3).unwrap().is_graded());
        assert!(exterior_relations(&r3).unwrap().is_graded());
        assert!(symmetric_relations(&r3).unwrap().is_graded());
    }

    #[test]
    fn identity_r_gives_commutators() {
        let id = SparseOperator::identity(2, 2, &Vars::qp());
        let pres = frt_relations(&id).unwrap();
        let a = pres.alphabet();
        // (i,j,k,l) = (1,2,1,2): T_2^1 T_1^2 - T_1^2 T_2^1
        let rel = &pres.relations()[0b0101];
        assert_eq!(rel.num_terms(), 2);
        assert!(rel.coeff(&[a.t(2, 1), a.t(1, 2)]).is_one());
        assert_eq!(rel.coeff(&[a.t(1, 2), a.t(2, 1)]), LaurentPoly::from_int(&Vars::qp(), -1));
    }

    #[test]
    fn presentation_file_round_trip() {
        let r = build_cg(CgParams::new(2)).unwrap();
        for pres in [
            frt_relations(&r).unwrap(),
            exterior_relations(&r).unwrap(),
            symmetric_relations(&r).unwrap(),
        ] {
            let file = pres.to_file();
            let text = serde_json::to_string(&file).unwrap();
            let back: PresentationFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_presentation().unwrap(), pres);
        }
    }
}
