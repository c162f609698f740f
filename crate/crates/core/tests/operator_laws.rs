use proptest::prelude::*;

use cgkit_core::laurent::ratio;
use cgkit_core::{LaurentPoly, SparseOperator, Vars};

fn entry() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), (-3i64..=3, 1i64..=3)), 1..3).prop_map(|terms| {
        LaurentPoly::from_terms(&Vars::qp(), terms.into_iter().map(|((a, b), (n, d))| (vec![a, b], ratio(n, d))))
    })
}

/// A random operator with `legs` legs on `(C^n)^{⊗legs}`.
fn operator(n: usize, legs: usize) -> impl Strategy<Value = SparseOperator> {
    let dim = n.pow(legs as u32);
    prop::collection::vec((0..dim, 0..dim, entry()), 0..8).prop_map(move |entries| {
        let mut op = SparseOperator::zero(n, legs, &Vars::qp());
        for (r, c, v) in entries {
            let (row, col) = (op.unflatten(r), op.unflatten(c));
            op.set(&row, &col, v).unwrap();
        }
        op
    })
}

fn pair_of(legs: usize) -> impl Strategy<Value = (SparseOperator, SparseOperator)> {
    (1usize..=3).prop_flat_map(move |n| (operator(n, legs), operator(n, legs)))
}

fn triple_of(legs: usize) -> impl Strategy<Value = (SparseOperator, SparseOperator, SparseOperator)> {
    (1usize..=2).prop_flat_map(move |n| (operator(n, legs), operator(n, legs), operator(n, legs)))
}

const POSITIONS: [(usize, usize); 6] = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

proptest! {
    #[test]
    fn flip_squares_to_identity(n in 1usize..=5) {
        let p = SparseOperator::flip(n, &Vars::qp());
        prop_assert_eq!(p.compose(&p).unwrap(), SparseOperator::identity(n, 2, &Vars::qp()));
    }

    #[test]
    fn embedding_commutes_with_composition((a, b) in pair_of(2), pos in 0usize..6) {
        let at = POSITIONS[pos];
        let lhs = a.compose(&b).unwrap().embed_leg(at, 3).unwrap();
        let rhs = a.embed_leg(at, 3).unwrap().compose(&b.embed_leg(at, 3).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_is_associative((a, b, c) in triple_of(1)) {
        let left = a.kron(&b).unwrap().kron(&c).unwrap();
        let right = a.kron(&b.kron(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_of_two_leg_operators_is_associative((a, b, c) in triple_of(2)) {
        let left = a.kron(&b).unwrap().kron(&c).unwrap();
        let right = a.kron(&b.kron(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_is_compatible_with_composition((a, b) in pair_of(1), (c, d) in pair_of(1)) {
        prop_assume!(a.n() == c.n());
        let lhs = a.kron(&c).unwrap().compose(&b.kron(&d).unwrap()).unwrap();
        let rhs = a.compose(&b).unwrap().kron(&c.compose(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dump_round_trips(a in (1usize..=3).prop_flat_map(|n| operator(n, 2))) {
        let text = a.to_dump();
        prop_assert_eq!(SparseOperator::from_dump(&text, &Vars::qp()).unwrap(), a);
    }
}
