//! Cross-module invariants checked on random inputs.

use hamming_equitable::construct::{alphabet_lift, construct_a, AlphabetBlocks, LiftBlocks};
use hamming_equitable::eigen::{classify_u0u1, ClassifiedForm, TernaryFunction};
use hamming_equitable::partition::{
    distance_partition_check, eigenvalue_indices, equitable_check, essential_coordinates, extend,
    orthogonal_array_check, reduce, second_eigenvalue_index, spectral_check, DistanceVerdict, Equitability, OaVerdict,
};
use hamming_equitable::search::{
    are_isomorphic, backtracking_enumerate, brute_force_enumerate, canonical_form, EnumConstraints,
};
use hamming_equitable::{Automorphism, Bitset, GraphParams, RPartition, TwoPartition};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(n: usize, q: usize) -> GraphParams {
    GraphParams::new(n, q).unwrap()
}

fn small_params() -> impl Strategy<Value = GraphParams> {
    prop_oneof![Just(params(2, 2)), Just(params(2, 3)), Just(params(3, 2)), Just(params(1, 4)), Just(params(3, 3))]
}

fn random_partition(g: &GraphParams, seed: u64) -> Option<TwoPartition> {
    let nv = g.vertex_count();
    let mut x = seed | 1;
    let cell = Bitset::from_indices(
        nv,
        (0..nv).filter(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            x & 1 == 1
        }),
    )
    .unwrap();
    TwoPartition::new(g.clone(), cell).ok()
}

/// All equitable 2-partitions of the small graphs, computed once.
fn equitable_pool() -> &'static Vec<TwoPartition> {
    static POOL: std::sync::OnceLock<Vec<TwoPartition>> = std::sync::OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for g in [params(2, 2), params(2, 3), params(3, 2), params(4, 2), params(2, 4)] {
            out.extend(brute_force_enumerate(&g, &EnumConstraints::default()).unwrap());
        }
        out
    })
}

#[test]
fn equitable_iff_spectral_on_all_enumerated() {
    for p in equitable_pool() {
        let s = equitable_check(p).quotient().unwrap().clone();
        assert!(spectral_check(p, s.get(0, 0) - s.get(1, 0)).passed());
    }
    // converse: a cell whose indicator is a shifted eigenvector is equitable
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for g in [params(2, 3), params(3, 2)] {
        for _ in 0..200 {
            let a = Automorphism::random(&g, &mut rng);
            let seed = rand::Rng::gen::<u64>(&mut rng);
            let Some(p) = random_partition(&g, seed) else { continue };
            let p = p.apply_automorphism(&a).unwrap();
            let spectral = (-(g.degree() as i64)..=g.degree() as i64).any(|l| spectral_check(&p, l).passed());
            assert_eq!(spectral, equitable_check(&p).is_equitable());
        }
    }
}

#[test]
fn second_eigenvalue_partitions_pass_fiber_check() {
    for p in equitable_pool() {
        let s = equitable_check(p).quotient().unwrap().clone();
        if second_eigenvalue_index(&s, p.params()).unwrap() == Some(2) {
            assert!(matches!(orthogonal_array_check(p, &s).unwrap(), OaVerdict::Pass { .. }));
        }
    }
}

#[test]
fn backtracking_matches_brute_force_on_quotients() {
    for g in [params(2, 3), params(3, 2), params(4, 2)] {
        let all = brute_force_enumerate(&g, &EnumConstraints::default()).unwrap();
        let mut quotients: Vec<_> = all.iter().map(|p| equitable_check(p).quotient().unwrap().clone()).collect();
        quotients.sort();
        quotients.dedup();
        for s in quotients {
            let c = EnumConstraints::with_quotient(s);
            assert_eq!(backtracking_enumerate(&g, &c).unwrap(), brute_force_enumerate(&g, &c).unwrap());
        }
    }
}

#[test]
fn completely_regular_codes_give_equitable_distance_partitions() {
    let g = params(3, 2);
    match distance_partition_check(&g, &[0, 7]).unwrap() {
        DistanceVerdict::CompletelyRegular(s) => assert_eq!(s.size(), 2),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equitability_is_automorphism_invariant(g in small_params(), seed in any::<u64>(), aseed in any::<u64>()) {
        let Some(p) = random_partition(&g, seed) else { return Ok(()) };
        let a = Automorphism::random(&g, &mut ChaCha8Rng::seed_from_u64(aseed));
        let image = p.apply_automorphism(&a).unwrap();
        match (equitable_check(&p), equitable_check(&image)) {
            (Equitability::Equitable(s), Equitability::Equitable(t)) => prop_assert_eq!(s, t),
            (Equitability::NotEquitable { .. }, Equitability::NotEquitable { .. }) => {}
            other => prop_assert!(false, "{:?}", other),
        }
        prop_assert_eq!(essential_coordinates(&p).len(), essential_coordinates(&image).len());
        prop_assert_eq!(canonical_form(&p).unwrap(), canonical_form(&image).unwrap());
        prop_assert!(are_isomorphic(&p, &image).unwrap());
    }

    #[test]
    fn extend_then_reduce_round_trips(idx in 0usize..1000, d in 1usize..3) {
        let pool = equitable_pool();
        let p = &pool[idx % pool.len()];
        prop_assume!(p.params().n() + d <= 4);
        let (core, _) = reduce(p).unwrap();
        let big = extend(&core, d).unwrap();
        prop_assert_eq!(essential_coordinates(&big).len(), essential_coordinates(&core).len());
        let (again, removed) = reduce(&big).unwrap();
        prop_assert_eq!(again, core.clone());
        prop_assert_eq!(removed.len(), d);
        let s = equitable_check(&core).quotient().unwrap().clone();
        let t = equitable_check(&big).quotient().unwrap().clone();
        // each new coordinate adds q - 1 neighbours inside the own cell
        let shift = (d * (p.params().q() - 1)) as i64;
        prop_assert_eq!(t, s.shift_diagonal(shift));
    }

    #[test]
    fn lifting_preserves_eigenvalue_indices(idx in 0usize..1000, m in 1usize..3) {
        let pool = equitable_pool();
        let p = &pool[idx % pool.len()];
        prop_assume!(p.params().n() <= 2 && p.params().q() * m <= 6);
        let q = p.params().q() * m;
        let blocks = (0..p.params().q()).map(|b| (b * m..(b + 1) * m).collect()).collect();
        let lift = LiftBlocks::new(q, blocks).unwrap();
        let out = alphabet_lift(&RPartition::from(p), &lift).unwrap();
        let s = equitable_check(p).quotient().unwrap().clone();
        let t = equitable_check(&out).quotient().unwrap().clone();
        prop_assert_eq!(eigenvalue_indices(&s, p.params()), eigenvalue_indices(&t, out.params()));
        prop_assert_eq!(out.cell_size(0), p.size() * m.pow(p.params().n() as u32));
    }

    #[test]
    fn classification_is_equivariant(g in small_params(), index in any::<u64>(), aseed in any::<u64>()) {
        prop_assume!(g.vertex_count() <= 9);
        let count = 3u64.pow(g.vertex_count() as u32);
        let f = TernaryFunction::from_index(&g, index % count);
        let a = Automorphism::random(&g, &mut ChaCha8Rng::seed_from_u64(aseed));
        let image = TernaryFunction::new(f.as_int().apply_automorphism(&a).unwrap()).unwrap();
        let (x, y) = (classify_u0u1(&f).unwrap(), classify_u0u1(&image).unwrap());
        prop_assert_eq!(x == ClassifiedForm::NotMember, y == ClassifiedForm::NotMember);
        if let Some(h) = x.reconstruct(&g).unwrap() {
            prop_assert_eq!(h.values(), f.values());
        }
    }

    #[test]
    fn switched_outputs_keep_the_extended_quotient(shift in 0usize..4) {
        // parity bases on H(2,4) with a symbol shift in the second coordinate
        let base = TwoPartition::from_predicate(params(2, 4), |x| (x[0] + x[1] + shift) % 2 == 0).unwrap();
        let blocks = AlphabetBlocks::parse(4, "0,1|2,3").unwrap();
        let out = construct_a(&blocks, &base).unwrap();
        let plus = extend(&base, 1).unwrap();
        prop_assert_eq!(equitable_check(&out), equitable_check(&plus));
    }
}
