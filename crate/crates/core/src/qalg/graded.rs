//! Graded pieces of quadratic algebras: dimensions and ideal membership.
//!
//! The degree-`d` part of the two-sided ideal generated by quadratic
//! relations is spanned by the padded relations `m₁·r·m₂` with `m₁`, `m₂`
//! words. Because every relation is homogeneous for [`Alphabet::grade`], this
//! span splits into independent blocks, one per grade, which are reduced
//! separately.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Vars};
use crate::modp::PrimeField;
use crate::qalg::linalg::{ExactEchelon, ModEchelon};
use crate::qalg::ncpoly::{Alphabet, NCPolynomial, Word};
use crate::qalg::presentation::QuadraticPresentation;

pub const DEFAULT_DEGREE_BOUND: usize = 4;
pub const DEFAULT_TRIALS: usize = 3;

type Grade = (usize, usize);

/// How linear algebra over `Q(q, p)` is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Fraction-free elimination over the Laurent ring.
    Exact,
    /// Elimination modulo `modulus` at `trials` random points, drawn from
    /// seeds `seed, seed + 1, ...`.
    Specialized { modulus: u64, seed: u64, trials: usize },
}

/// Outcome of [`graded_dimension`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDimension {
    pub degree: usize,
    /// Number of words of this degree.
    pub words: usize,
    /// Quotient dimension observed at each trial.
    pub per_trial: Vec<usize>,
    /// Minimum over trials; rank can only drop under specialization, so this
    /// is the best upper bound on the generic dimension.
    pub dimension: usize,
    pub unanimous: bool,
}

/// Words of degree `d` grouped by grade, each block in lexicographic order.
fn word_blocks(alphabet: Alphabet, d: usize) -> BTreeMap<Grade, Vec<Word>> {
    let mut blocks: BTreeMap<Grade, Vec<Word>> = BTreeMap::new();
    for w in alphabet.words(d) {
        blocks.entry(alphabet.grade(&w)).or_default().push(w);
    }
    blocks
}

/// A padded relation `m₁·r·m₂`, recorded by relation index and pads.
struct Padded<'a> {
    relation: usize,
    left: &'a [u16],
    right: &'a [u16],
}

/// Padded relations of total degree `d` whose grade lies in `wanted`
/// (or all of them when `wanted` is `None`), grouped by grade.
fn padded_relations<'a>(
    pres: &QuadraticPresentation,
    pads: &'a [Vec<Word>],
    d: usize,
    wanted: Option<&BTreeSet<Grade>>,
) -> BTreeMap<Grade, Vec<Padded<'a>>> {
    let alphabet = pres.alphabet();
    let mut out: BTreeMap<Grade, Vec<Padded<'a>>> = BTreeMap::new();
    if d < 2 {
        return out;
    }
    for (ri, rel) in pres.relations().iter().enumerate() {
        let Some((w0, _)) = rel.terms().next() else {
            continue;
        };
        let g = alphabet.grade(w0);
        for a in 0..=d - 2 {
            for left in &pads[a] {
                let gl = alphabet.grade(left);
                for right in &pads[d - 2 - a] {
                    let gr = alphabet.grade(right);
                    let grade = (g.0 + gl.0 + gr.0, g.1 + gl.1 + gr.1);
                    if wanted.map_or(true, |w| w.contains(&grade)) {
                        out.entry(grade).or_default().push(Padded {
                            relation: ri,
                            left,
                            right,
                        });
                    }
                }
            }
        }
    }
    out
}

fn all_pads(alphabet: Alphabet, d: usize) -> Vec<Vec<Word>> {
    (0..=d.saturating_sub(2)).map(|a| alphabet.words(a)).collect()
}

fn padded_word(left: &[u16], mid: &[u16], right: &[u16]) -> Word {
    let mut w = Vec::with_capacity(left.len() + mid.len() + right.len());
    w.extend_from_slice(left);
    w.extend_from_slice(mid);
    w.extend_from_slice(right);
    w
}

fn random_point(vars: &Vars, field: &PrimeField, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..vars.len()).map(|_| rng.gen_range(1..field.modulus())).collect()
}

/// Relation coefficients evaluated at a point, in relation order.
fn specialize(pres: &QuadraticPresentation, point: &[u64], field: &PrimeField) -> Result<Vec<Vec<(Word, u64)>>> {
    pres.relations()
        .iter()
        .map(|r| {
            r.terms()
                .map(|(w, c)| Ok((w.clone(), c.evaluate_mod(point, field)?)))
                .collect()
        })
        .collect()
}

fn column_index(words: &[Word]) -> BTreeMap<&[u16], usize> {
    words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect()
}

fn mod_block(
    words: &[Word],
    gens: &[Padded<'_>],
    rels: &[Vec<(Word, u64)>],
    field: PrimeField,
) -> ModEchelon {
    let index = column_index(words);
    let mut span = ModEchelon::new(field, words.len());
    for g in gens {
        if span.is_full() {
            break;
        }
        let mut row = vec![0u64; words.len()];
        for (w, c) in &rels[g.relation] {
            let col = index[padded_word(g.left, w, g.right).as_slice()];
            row[col] = field.add(row[col], *c);
        }
        span.insert(row);
    }
    span
}

fn exact_block(words: &[Word], gens: &[Padded<'_>], pres: &QuadraticPresentation) -> ExactEchelon {
    let index = column_index(words);
    let zero = LaurentPoly::zero(pres.vars());
    let mut span = ExactEchelon::new(words.len());
    for g in gens {
        let mut row = vec![zero.clone(); words.len()];
        for (w, c) in pres.relations()[g.relation].terms() {
            let col = index[padded_word(g.left, w, g.right).as_slice()];
            row[col] = &row[col] + c;
        }
        span.insert(row);
    }
    span
}

/// Dimension of the degree-`degree` part of the quotient by the presentation,
/// at `trials` random specializations modulo `modulus`.
pub fn graded_dimension(
    pres: &QuadraticPresentation,
    degree: usize,
    modulus: u64,
    seed: u64,
    trials: usize,
) -> Result<GradedDimension> {
    let field = PrimeField::for_checks(modulus)?;
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let alphabet = pres.alphabet();
    let blocks = word_blocks(alphabet, degree);
    let pads = all_pads(alphabet, degree);
    let gens = padded_relations(pres, &pads, degree, None);
    let words = alphabet.size().pow(degree as u32);
    let mut per_trial = Vec::with_capacity(trials);
    for t in 0..trials {
        let point = random_point(pres.vars(), &field, seed.wrapping_add(t as u64));
        let rels = specialize(pres, &point, &field)?;
        let rank: usize = blocks
            .par_iter()
            .map(|(g, ws)| gens.get(g).map_or(0, |gs| mod_block(ws, gs, &rels, field).rank()))
            .sum();
        per_trial.push(words - rank);
    }
    let dimension = *per_trial.iter().min().expect("nonempty");
    Ok(GradedDimension {
        degree,
        words,
        unanimous: per_trial.iter().all(|&x| x == dimension),
        per_trial,
        dimension,
    })
}

/// Whether `elem` lies in the ideal generated by the relations, with the
/// default degree bound.
pub fn ideal_membership(elem: &NCPolynomial, pres: &QuadraticPresentation, mode: Mode) -> Result<bool> {
    ideal_membership_bounded(elem, pres, mode, DEFAULT_DEGREE_BOUND)
}

/// Whether `elem` lies in the ideal generated by the relations. In
/// specialized mode the answer is the conjunction over all trials.
pub fn ideal_membership_bounded(
    elem: &NCPolynomial,
    pres: &QuadraticPresentation,
    mode: Mode,
    bound: usize,
) -> Result<bool> {
    if elem.alphabet() != pres.alphabet() {
        return Err(Error::Alphabet("element and presentation use different alphabets".into()));
    }
    if elem.vars() != pres.vars() {
        return Err(Error::VariableMismatch {
            left: elem.vars().names().to_vec(),
            right: pres.vars().names().to_vec(),
        });
    }
    if !elem.is_homogeneous() {
        return Err(Error::Inhomogeneous);
    }
    let Some(d) = elem.degree() else {
        return Ok(true);
    };
    if d > bound {
        return Err(Error::DegreeBound { degree: d, bound });
    }
    if d < 2 {
        return Ok(false);
    }
    let alphabet = pres.alphabet();
    // project onto grade blocks; each must lie in its own block of the span
    let mut parts: BTreeMap<Grade, Vec<(&Word, &LaurentPoly)>> = BTreeMap::new();
    for (w, c) in elem.terms() {
        parts.entry(alphabet.grade(w)).or_default().push((w, c));
    }
    let wanted: BTreeSet<Grade> = parts.keys().copied().collect();
    let blocks = word_blocks(alphabet, d);
    let pads = all_pads(alphabet, d);
    let gens = padded_relations(pres, &pads, d, Some(&wanted));
    let no_gens = Vec::new();
    match mode {
        Mode::Exact => parts.par_iter().try_fold(
            || true,
            |acc, (g, terms)| {
                if !acc {
                    return Ok(false);
                }
                let words = &blocks[g];
                let span = exact_block(words, gens.get(g).unwrap_or(&no_gens), pres);
                let index = column_index(words);
                let mut row = vec![LaurentPoly::zero(pres.vars()); words.len()];
                for (w, c) in terms {
                    row[index[w.as_slice()]] = (*c).clone();
                }
                Ok::<bool, Error>(span.contains(row))
            },
        )
        .try_reduce(|| true, |a, b| Ok(a && b)),
        Mode::Specialized { modulus, seed, trials } => {
            let field = PrimeField::for_checks(modulus)?;
            if trials == 0 {
                return Err(Error::Precondition("at least one trial is required".into()));
            }
            for t in 0..trials {
                let point = random_point(pres.vars(), &field, seed.wrapping_add(t as u64));
                let rels = specialize(pres, &point, &field)?;
                let ok = parts
                    .par_iter()
                    .map(|(g, terms)| {
                        let words = &blocks[g];
                        let span = mod_block(words, gens.get(g).unwrap_or(&no_gens), &rels, field);
                        let index = column_index(words);
                        let mut row = vec![0u64; words.len()];
                        for (w, c) in terms {
                            row[index[w.as_slice()]] = c.evaluate_mod(&point, &field)?;
                        }
                        Ok(span.contains(row))
                    })
                    .collect::<Result<Vec<bool>>>()?;
                if !ok.iter().all(|&b| b) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::DEFAULT_MODULUS;
    use crate::qalg::presentation::{exterior_relations, frt_relations, symmetric_relations};
    use crate::rmatrix::{build_cg, CgParams};
    use crate::tensor::SparseOperator;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn dim(pres: &QuadraticPresentation, d: usize) -> usize {
        let g = graded_dimension(pres, d, DEFAULT_MODULUS, 7, 2).unwrap();
        assert!(g.unanimous, "{g:?}");
        g.dimension
    }

    #[test]
    fn low_degrees_of_a2() {
        let r = build_cg(CgParams::new(2)).unwrap();
        let a = frt_relations(&r).unwrap();
        assert_eq!(dim(&a, 0), 1);
        assert_eq!(dim(&a, 1), 4);
        assert_eq!(dim(&a, 2), 10);
        assert_eq!(dim(&exterior_relations(&r).unwrap(), 2), 1);
        assert_eq!(dim(&symmetric_relations(&r).unwrap(), 2), 3);
    }

    #[test]
    fn exterior_and_symmetric_hilbert_series() {
        for n in 2..=4 {
            let r = build_cg(CgParams::new(n)).unwrap();
            let lam = exterior_relations(&r).unwrap();
            let sym = symmetric_relations(&r).unwrap();
            for d in 0..=n {
                assert_eq!(dim(&lam, d), binom(n, d), "Λ n={n} d={d}");
            }
            assert_eq!(dim(&lam, n + 1), 0);
            for d in 0..=4 {
                assert_eq!(dim(&sym, d), binom(n + d - 1, d), "S n={n} d={d}");
            }
        }
    }

    #[test]
    fn frt_hilbert_series() {
        for n in 2..=3 {
            let a = frt_relations(&build_cg(CgParams::new(n)).unwrap()).unwrap();
            for d in 0..=3 {
                assert_eq!(dim(&a, d), binom(n * n + d - 1, d), "A n={n} d={d}");
            }
        }
    }

    #[test]
    fn identity_r_gives_commutative_algebra() {
        let id = SparseOperator::identity(2, 2, &Vars::qp());
        assert_eq!(dim(&frt_relations(&id).unwrap(), 2), 10);
    }

    #[test]
    fn rejects_small_modulus_and_zero_trials() {
        let a = frt_relations(&build_cg(CgParams::new(2)).unwrap()).unwrap();
        assert!(matches!(graded_dimension(&a, 2, 1_000_003, 0, 1), Err(Error::ModulusTooSmall(_))));
        assert!(graded_dimension(&a, 2, DEFAULT_MODULUS, 0, 0).is_err());
    }

    #[test]
    fn membership_basics() {
        let a = frt_relations(&build_cg(CgParams::new(2)).unwrap()).unwrap();
        let alphabet = a.alphabet();
        let spec = Mode::Specialized {
            modulus: DEFAULT_MODULUS,
            seed: 1,
            trials: 3,
        };
        for rel in a.relations().iter().take(5) {
            assert!(ideal_membership(rel, &a, Mode::Exact).unwrap());
            assert!(ideal_membership(rel, &a, spec).unwrap());
        }
        let t11 = NCPolynomial::letter(alphabet, a.vars(), alphabet.t(1, 1));
        assert!(!ideal_membership(&t11, &a, Mode::Exact).unwrap());
        let sq = t11.mul(&t11).unwrap();
        assert!(!ideal_membership(&sq, &a, Mode::Exact).unwrap());
        assert!(!ideal_membership(&sq, &a, spec).unwrap());
        // padded relation in degree 3
        let padded = t11.mul(&a.relations()[6]).unwrap();
        assert!(ideal_membership(&padded, &a, Mode::Exact).unwrap());
        assert!(ideal_membership(&padded, &a, spec).unwrap());
    }

    #[test]
    fn membership_errors() {
        let a = frt_relations(&build_cg(CgParams::new(2)).unwrap()).unwrap();
        let alphabet = a.alphabet();
        let t = NCPolynomial::letter(alphabet, a.vars(), alphabet.t(1, 2));
        let inhom = t.add(&t.mul(&t).unwrap()).unwrap();
        assert!(matches!(ideal_membership(&inhom, &a, Mode::Exact), Err(Error::Inhomogeneous)));
        let t5 = (0..4).fold(t.clone(), |acc, _| acc.mul(&t).unwrap());
        assert!(matches!(
            ideal_membership(&t5, &a, Mode::Exact),
            Err(Error::DegreeBound { degree: 5, bound: 4 })
        ));
    }
}
