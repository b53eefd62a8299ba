use ekchain::symnat::{f_pow, BitFn, BlockPerm, SymElem};
use proptest::prelude::*;

fn arb_bitfn() -> impl Strategy<Value = BitFn> {
    (
        prop::collection::vec(any::<bool>(), 0..6),
        prop::collection::vec(any::<bool>(), 1..5),
    )
        .prop_map(|(p, b)| BitFn::new(p, b).unwrap())
}

fn arb_blockperm() -> impl Strategy<Value = BlockPerm> {
    prop::collection::vec((0u64..10, 0u64..10), 0..4).prop_map(|swaps| {
        swaps
            .into_iter()
            .fold(BlockPerm::identity(), |acc, (a, b)| acc.compose(&BlockPerm::swap(a, b)))
    })
}

fn arb_elem() -> impl Strategy<Value = SymElem> {
    (arb_bitfn(), arb_blockperm(), -4i64..=4).prop_map(|(b, s, m)| SymElem::new(b, s, m))
}

// Direct point action of B(b) P(σ) F^m, factor by factor.
fn apply_naive(e: &SymElem, x: u64) -> u64 {
    let (blk, low) = (x / 2, x & 1);
    let blk = f_pow(blk, e.m);
    let blk = e.sigma.apply(blk);
    2 * blk + (low ^ e.bits.at(blk) as u64)
}

proptest! {
    #[test]
    fn action_is_a_homomorphism(a in arb_elem(), b in arb_elem()) {
        let ab = a.mul(&b);
        let ai = a.inverse();
        for x in 0..300u64 {
            prop_assert_eq!(ab.apply(x), a.apply(b.apply(x)));
            prop_assert_eq!(ai.apply(a.apply(x)), x);
            prop_assert_eq!(a.apply(x), apply_naive(&a, x));
        }
    }

    #[test]
    fn multiplication_is_associative(a in arb_elem(), b in arb_elem(), c in arb_elem()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(SymElem::commutator(&a, &a).is_identity());
        prop_assert!(a.mul(&a.inverse()).is_identity());
    }

    #[test]
    fn block_involutions_commute(p in arb_bitfn(), q in arb_bitfn()) {
        let c = SymElem::commutator(&SymElem::from_bits(p), &SymElem::from_bits(q));
        prop_assert!(c.is_identity());
    }
}
