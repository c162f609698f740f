use proptest::prelude::*;

use cgkit_core::laurent::rat;
use cgkit_core::rmatrix::{build_cg, build_twist_q, check_yang_baxter, semiclassical_limit, twist, CgParams};
use cgkit_core::{SparseOperator, Vars};

/// Applies `q ↦ q^a p^b`, `p ↦ q^c p^d` entrywise.
fn specialize(r: &SparseOperator, images: &[Vec<i64>]) -> SparseOperator {
    let vars = Vars::qp();
    r.map_ring(&vars, |v| v.substitute_monomials(&vars, images)).unwrap()
}

fn monomial_map() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twisting_preserves_yang_baxter_under_specialization(n in 2usize..=3, images in monomial_map()) {
        let r = specialize(&build_cg(CgParams::new(n)).unwrap(), &images);
        let q = specialize(&build_twist_q(n).unwrap(), &images);
        prop_assert!(check_yang_baxter(&r).unwrap().all_pass());
        let twisted = twist(&r, &q).unwrap();
        prop_assert!(check_yang_baxter(&twisted).unwrap().all_pass());
    }

    #[test]
    fn classical_limit_solves_cybe_in_every_direction(n in 2usize..=3, uq in -4i64..=4, up in -4i64..=4) {
        let lim = semiclassical_limit(&build_cg(CgParams::new(n)).unwrap(), &[rat(uq), rat(up)]).unwrap();
        prop_assert!(lim.cybe.passed(), "{:?}", lim.cybe.witness);
    }
}
