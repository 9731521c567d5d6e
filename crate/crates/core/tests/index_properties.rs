use gmebound::{enumerate_bipartitions, pair_is_fixed, permute_pair, Bipartition, IndexPair, MultiIndex, Space};
use proptest::prelude::*;

fn setup() -> impl Strategy<Value = (Space, MultiIndex, MultiIndex, Bipartition)> {
    (2usize..=5, 2usize..=4).prop_flat_map(|(n, d)| {
        let space = Space::new(n, d).unwrap();
        let bips = enumerate_bipartitions(n).unwrap();
        (0..space.dim(), 0..space.dim(), 0..bips.len()).prop_map(move |(a, b, g)| {
            (space, MultiIndex::from_rank(a, space), MultiIndex::from_rank(b, space), bips[g].clone())
        })
    })
}

proptest! {
    #[test]
    fn permutation_is_an_involution((_, a, b, gamma) in setup()) {
        let (x, y) = permute_pair(&gamma, (&a, &b)).unwrap();
        let (u, v) = permute_pair(&gamma, (&x, &y)).unwrap();
        prop_assert_eq!((u, v), (a, b));
    }

    #[test]
    fn complement_swaps_the_image((space, a, b, gamma) in setup()) {
        // P over the complement equals P over γ followed by exchanging the pair;
        // compare digit by digit since the complement is not canonical.
        let (x, y) = permute_pair(&gamma, (&a, &b)).unwrap();
        let comp = gamma.complement();
        let mut u = a.digits().to_vec();
        let mut v = b.digits().to_vec();
        for p in comp {
            std::mem::swap(&mut u[p - 1], &mut v[p - 1]);
        }
        prop_assert_eq!(MultiIndex::new(u, space.d).unwrap(), y);
        prop_assert_eq!(MultiIndex::new(v, space.d).unwrap(), x);
    }

    #[test]
    fn fixed_pairs_map_onto_themselves((_, a, b, gamma) in setup()) {
        prop_assume!(a != b);
        let pair = IndexPair::new(a.clone(), b.clone()).unwrap();
        let (x, y) = permute_pair(&gamma, (&a, &b)).unwrap();
        let same = (x == a && y == b) || (x == b && y == a);
        prop_assert_eq!(pair_is_fixed(&gamma, &pair).unwrap(), same);
    }

    #[test]
    fn ranks_round_trip(n in 1usize..=6, d in 2usize..=5, seed in 0usize..1_000_000) {
        let space = Space::new(n, d).unwrap();
        let r = seed % space.dim();
        let eta = MultiIndex::from_rank(r, space);
        prop_assert_eq!(eta.rank(), r);
        prop_assert_eq!(MultiIndex::parse(&eta.to_string(), space).unwrap(), eta);
    }
}

#[test]
fn bipartition_counts_and_distinct_classes() {
    for n in 2..=8 {
        let bips = enumerate_bipartitions(n).unwrap();
        assert_eq!(bips.len(), (1 << (n - 1)) - 1);
        let mut seen = std::collections::BTreeSet::new();
        for b in &bips {
            assert!(b.contains(1));
            assert!(seen.insert(b.parties().to_vec()));
        }
    }
}
