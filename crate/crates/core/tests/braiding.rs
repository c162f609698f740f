use cgkit_core::qalg::{frt_relations, ideal_membership, Alphabet, FunctionalEngine, Mode, NCPolynomial};
use cgkit_core::{build_cg, CgParams, LaurentPoly, Vars};
use proptest::prelude::*;

fn engine(n: usize) -> FunctionalEngine {
    FunctionalEngine::new(&build_cg(CgParams::new(n)).unwrap()).unwrap()
}

fn word(n: usize, letters: &[u16]) -> NCPolynomial {
    NCPolynomial::term(Alphabet::T(n), letters.to_vec(), LaurentPoly::one(&Vars::qp()))
}

/// `Δ` of a word as a list of `(first, second)` tensor factors.
fn coproduct(n: usize, letters: &[u16]) -> Vec<(Vec<u16>, Vec<u16>)> {
    let a = Alphabet::T(n);
    let mut out = vec![(Vec::new(), Vec::new())];
    for &l in letters {
        let (i, k) = a.t_indices(l);
        out = out
            .into_iter()
            .flat_map(|(x, y)| {
                (1..=n).map(move |j| {
                    let mut x = x.clone();
                    let mut y = y.clone();
                    x.push(a.t(i, j));
                    y.push(a.t(j, k));
                    (x, y)
                })
            })
            .collect();
    }
    out
}

fn letters(size: u16, max_len: usize) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0..size, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `⟨ab | c⟩ = Σ ⟨b | c_(1)⟩ ⟨a | c_(2)⟩`.
    #[test]
    fn product_in_first_argument(n in 2usize..=3, a in letters(9, 2), b in letters(9, 2), c in letters(9, 3)) {
        let size = (n * n) as u16;
        let restrict = |w: Vec<u16>| -> Vec<u16> { w.into_iter().map(|x| x % size).collect() };
        let (a, b, c) = (restrict(a), restrict(b), restrict(c));
        let e = engine(n);
        let ab: Vec<u16> = a.iter().chain(&b).copied().collect();
        let lhs = e.braiding_pair(&word(n, &ab), &word(n, &c)).unwrap();
        let mut rhs = LaurentPoly::zero(&Vars::qp());
        for (c1, c2) in coproduct(n, &c) {
            let x = e.braiding_pair(&word(n, &b), &word(n, &c1)).unwrap();
            let y = e.braiding_pair(&word(n, &a), &word(n, &c2)).unwrap();
            rhs.add_product(&x, &y);
        }
        prop_assert_eq!(lhs, rhs);
    }

    /// `⟨a | bc⟩ = Σ ⟨a_(1) | b⟩ ⟨a_(2) | c⟩`.
    #[test]
    fn product_in_second_argument(a in letters(4, 2), b in letters(4, 2), c in letters(4, 2)) {
        let n = 2;
        let e = engine(n);
        let bc: Vec<u16> = b.iter().chain(&c).copied().collect();
        let lhs = e.braiding_pair(&word(n, &a), &word(n, &bc)).unwrap();
        let mut rhs = LaurentPoly::zero(&Vars::qp());
        for (a1, a2) in coproduct(n, &a) {
            let x = e.braiding_pair(&word(n, &a1), &word(n, &b)).unwrap();
            let y = e.braiding_pair(&word(n, &a2), &word(n, &c)).unwrap();
            rhs.add_product(&x, &y);
        }
        prop_assert_eq!(lhs, rhs);
    }
}

/// `Σ ⟨a_(1) | b_(1)⟩ b_(2) a_(2) - Σ a_(1) b_(1) ⟨a_(2) | b_(2)⟩` lies in the
/// relation ideal for every pair of generators.
#[test]
fn generators_satisfy_the_commutation_axiom() {
    let n = 2;
    let e = engine(n);
    let alphabet = Alphabet::T(n);
    let vars = Vars::qp();
    let pres = frt_relations(e.r()).unwrap();
    for i in 1..=n {
        for k in 1..=n {
            for j in 1..=n {
                for l in 1..=n {
                    let mut elem = NCPolynomial::zero(alphabet, &vars);
                    for u in 1..=n {
                        for v in 1..=n {
                            let first = e
                                .braiding_pair(&word(n, &[alphabet.t(i, u)]), &word(n, &[alphabet.t(j, v)]))
                                .unwrap();
                            elem.add_term(vec![alphabet.t(v, l), alphabet.t(u, k)], first);
                            let second = e
                                .braiding_pair(&word(n, &[alphabet.t(u, k)]), &word(n, &[alphabet.t(v, l)]))
                                .unwrap();
                            elem.add_term(vec![alphabet.t(i, u), alphabet.t(j, v)], -second);
                        }
                    }
                    assert!(
                        ideal_membership(&elem, &pres, Mode::Exact).unwrap(),
                        "(i,k,j,l) = ({i},{k},{j},{l})"
                    );
                }
            }
        }
    }
}
