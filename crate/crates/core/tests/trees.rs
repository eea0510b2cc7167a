//! Tree construction counts, family generators, target patterns and the
//! parity table, checked against brute force and explicit commutators.

use latcomm::lattice::{enumerate_histories, EdgeSequence, EnumerationCaps, Edge, Site};
use latcomm::pauli::{sequence_operator, AlphaIndex, AlphaString};
use latcomm::trees::{
    family_weight_product, generate_family, target_string, toy_unfolded_tree, toy_weight_chain, tree_catalog,
    validate_even_separation, verify_table, FamilyMode, FamilyParams, RootedTree,
};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

/// Grow a random tree at the origin by attaching `n` random new sites.
fn random_tree(seed: u64, n: usize) -> RootedTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites = vec![Site::xy(0, 0)];
    let mut edges = vec![];
    while edges.len() < n {
        let v = sites[rng.random_range(0..sites.len())];
        let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.random_range(0..4)];
        let u = Site::xy(v.coord(0) + dx, v.coord(1) + dy);
        if !sites.contains(&u) {
            sites.push(u);
            edges.push(Edge::new(v, u).unwrap());
        }
    }
    RootedTree::from_edges(Site::xy(0, 0), edges).unwrap()
}

/// Random construction: repeatedly pick one of the edges that can come next.
fn random_construction(t: &RootedTree, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    let mut built = vec![t.root()];
    let mut left: Vec<Edge> = t.edges().iter().copied().collect();
    let mut out = vec![];
    while !left.is_empty() {
        let ready: Vec<usize> = (0..left.len()).filter(|&i| built.contains(&t.parent(&far(t, &left[i])).unwrap())).collect();
        let i = ready[rng.random_range(0..ready.len())];
        let e = left.swap_remove(i);
        built.push(far(t, &e));
        out.push(e);
    }
    out
}

fn far(t: &RootedTree, e: &Edge) -> Site {
    if t.parent(&e.b()) == Some(e.a()) {
        e.b()
    } else {
        e.a()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weight_product_divides_factorial(seed in any::<u64>(), n in 1usize..40) {
        let t = random_tree(seed, n);
        let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
        prop_assert!((&fact % t.weight_product()).is_zero());
        let ln = t.log_construction_count();
        let exact = t.construction_count().to_string().parse::<f64>().unwrap().ln();
        prop_assert!((ln - exact).abs() < 1e-9 * exact.abs().max(1.0));
    }

    #[test]
    fn kupin_on_random_trees(seed in any::<u64>(), n in 1usize..=8) {
        let t = random_tree(seed, n);
        prop_assert_eq!(BigUint::from(t.brute_force_constructions().unwrap()), t.construction_count());
    }

    #[test]
    fn tree_json_roundtrip(seed in any::<u64>(), n in 0usize..12) {
        let t = random_tree(seed, n);
        prop_assert_eq!(RootedTree::from_json(&t.to_json()).unwrap(), t);
    }
}

#[test]
fn kupin_on_catalog_up_to_six_edges() {
    for (n, trees) in tree_catalog(6, 2).unwrap().iter().enumerate() {
        let bad = trees.par_iter().filter(|t| BigUint::from(t.brute_force_constructions().unwrap()) != t.construction_count()).count();
        assert_eq!(bad, 0, "{n} edges");
    }
}

#[test]
fn histories_are_constructions() {
    // Every history adds a new site with each edge, so it is a construction of
    // the tree formed by its edges; grouping histories by edge set must give
    // n!/∏w for every tree in the catalog.
    let catalog = tree_catalog(6, 2).unwrap();
    for n in 1..=6 {
        let mut by_tree: FxHashMap<Vec<Edge>, u64> = FxHashMap::default();
        enumerate_histories(n, 2, &EnumerationCaps::default(), |edges| {
            let mut key = edges.to_vec();
            key.sort();
            *by_tree.entry(key).or_default() += 1;
        })
        .unwrap();
        assert_eq!(by_tree.len(), catalog[n].len(), "n={n}");
        for t in &catalog[n] {
            let key: Vec<Edge> = t.edges().iter().copied().collect();
            assert_eq!(BigUint::from(by_tree[&key]), t.construction_count());
        }
    }
}

fn assert_constructions_give_target(t: &RootedTree, orderings: impl IntoIterator<Item = Vec<Edge>>) -> usize {
    let target = target_string(t).unwrap().to_alpha_string();
    assert!(target.coeff() > &BigInt::zero());
    let a = AlphaString::single(Site::xy(0, 0), AlphaIndex::A2);
    let mut seen = 0;
    for order in orderings {
        let seq = EdgeSequence::new(2, order).unwrap();
        let op = sequence_operator(&seq, &a).unwrap().expect("construction has a nonzero operator");
        assert_eq!(op, target);
        seen += 1;
    }
    seen
}

#[test]
fn every_construction_of_the_toy_tree_gives_the_target() {
    let t = toy_unfolded_tree();
    let edges: Vec<Edge> = t.edges().iter().copied().collect();
    // All 720 orderings, filtered to constructions independently of the library.
    let mut orders = vec![];
    let mut perm: Vec<usize> = (0..edges.len()).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut built = vec![Site::xy(0, 0)];
        for &i in p.iter() {
            let e = edges[i];
            match (built.contains(&e.a()), built.contains(&e.b())) {
                (true, false) => built.push(e.b()),
                (false, true) => built.push(e.a()),
                _ => return,
            }
        }
        orders.push(p.iter().map(|&i| edges[i]).collect::<Vec<_>>());
    });
    assert_eq!(BigUint::from(orders.len()), t.construction_count());
    assert_eq!(assert_constructions_give_target(&t, orders), 6);
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[test]
fn random_constructions_of_unfolded_family_give_the_target() {
    let t = generate_family(&FamilyParams::toy(1, FamilyMode::Unfolded).unwrap()).unwrap();
    assert!(validate_even_separation(&t));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let orders: Vec<Vec<Edge>> = (0..200).map(|_| random_construction(&t, &mut rng)).collect();
    assert_eq!(assert_constructions_give_target(&t, orders), 200);
}

#[test]
fn folded_family_turns_left() {
    let t = generate_family(&FamilyParams::toy(2, FamilyMode::Folded).unwrap()).unwrap();
    assert!(t.vertices().any(|v| v.coord(0) < 0 || v.coord(1) > 0));
}

#[test]
fn toy_weight_product_against_chain() {
    for k in 1..=2 {
        let p = FamilyParams::toy(k, FamilyMode::Folded).unwrap();
        let t = generate_family(&p).unwrap();
        let exact = t.ln_weight_product();
        let closed = family_weight_product(&p).unwrap();
        assert_eq!(closed, t.weight_product());
        let chain = toy_weight_chain(&p.e).unwrap();
        // The first-level estimate assumes n beyond 4^(4^10); with two
        // levels the chain is already an upper bound (3337.9 ≤ 4485.6).
        if k == 2 {
            assert!(exact <= chain, "{exact} > {chain}");
        }
    }
}

#[test]
fn parity_table_against_commutators() {
    let rows = verify_table();
    assert_eq!(rows.len(), 32);
    for r in &rows {
        assert!(r.witness_horizontal.is_some() && r.witness_vertical.is_some(), "row {}", r.row);
        assert!(r.rule_holds, "row {}", r.row);
        if r.row == 2 {
            // Printed 𝟙 at x₂; a single use of a leaves α₂ there.
            assert_eq!(r.mismatches, ["horizontal x2 before", "vertical x2 before"]);
            assert_eq!(r.horizontal.unwrap().x2, AlphaIndex::A2);
        } else {
            assert!(r.pass, "row {}: {:?}", r.row, r.mismatches);
        }
    }
}
