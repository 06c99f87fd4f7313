//! Randomized invariants over small permutation groups.

use kclosure::action::{
    faithful_actions, realize, totally_k_closed_bounded, universal_embedding, EnumerationBounds, Homomorphism, Verdict,
};
use kclosure::campaign::{verify_group, CampaignConfig, Expectation, TheoremReport};
use kclosure::closure::{k_closure, k_closure_bruteforce, SearchLimits};
use kclosure::coloring::{orbit_coloring, DEFAULT_TUPLE_CAP};
use kclosure::group::direct_product;
use kclosure::structure::{abelian_invariants, is_nilpotent, prime_divisors};
use kclosure::subgroups::SubgroupLattice;
use kclosure::{compose, construct, format_cycles, parse_cycles, KTuple, Perm, PermGroup, DEFAULT_ORDER_CAP};
use proptest::prelude::*;

fn perm(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Perm::from_usize_images(&v).unwrap())
}

fn group(max_degree: usize) -> impl Strategy<Value = PermGroup> {
    (2..=max_degree).prop_flat_map(|n| {
        prop::collection::vec(perm(n), 1..=3)
            .prop_map(move |gens| PermGroup::generate(n, &gens, DEFAULT_ORDER_CAP).unwrap())
    })
}

/// A group together with one of its subgroups.
fn group_and_subgroup() -> impl Strategy<Value = (PermGroup, PermGroup)> {
    (group(5), any::<prop::sample::Index>()).prop_map(|(g, i)| {
        let lattice = SubgroupLattice::new(&g, 512, 10_000).unwrap();
        let h = lattice.to_group(&g, i.index(lattice.len()));
        (g, h)
    })
}

const CATALOG_SMALL: [&str; 6] = ["cyclic:4", "cyclic:9", "abelian:3,3", "q8", "sym:3", "heisenberg:3"];

fn catalog_group() -> impl Strategy<Value = (&'static str, PermGroup)> {
    prop::sample::select(CATALOG_SMALL.to_vec()).prop_map(|name| (name, construct(name).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_cycle_notation_round_trips(p in (1usize..10).prop_flat_map(perm)) {
        prop_assert_eq!(parse_cycles(&format_cycles(&p), p.degree()).unwrap(), p);
    }

    #[test]
    fn tuple_action_is_compatible(
        (g, h, t) in (2usize..8).prop_flat_map(|n| (perm(n), perm(n), prop::collection::vec(0..n, 1..4)))
    ) {
        let t = KTuple::new(t);
        let gh = compose(&g, &h).unwrap();
        prop_assert_eq!(gh.apply_tuple(&t).unwrap(), h.apply_tuple(&g.apply_tuple(&t).unwrap()).unwrap());
    }

    #[test]
    fn composition_is_associative((a, b, c) in (1usize..9).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
    }

    #[test]
    fn lagrange_and_coset_kernel((g, h) in group_and_subgroup()) {
        prop_assert_eq!(g.order() % h.order(), 0);
        let (image, _) = g.coset_action(&h).unwrap();
        prop_assert_eq!(g.order() / image.order(), g.core(&h).unwrap().order());
    }

    #[test]
    fn enumeration_is_idempotent(g in group(6)) {
        let again = PermGroup::generate(g.degree(), g.elements(), DEFAULT_ORDER_CAP).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn orbit_stabilizer(g in group(7)) {
        for a in 0..g.degree() {
            let stab = g.point_stabilizer(&KTuple::new(vec![a])).unwrap();
            prop_assert_eq!(g.orbit_of(a).len() * stab.order(), g.order());
        }
    }

    #[test]
    fn p_by_q_products_are_nilpotent(pi in 0usize..3, qi in 0usize..3) {
        let ps = ["cyclic:4", "q8", "abelian:2,2"];
        let qs = ["cyclic:3", "heisenberg:3", "abelian:5"];
        let g = direct_product(&construct(ps[pi]).unwrap(), &construct(qs[qi]).unwrap(), DEFAULT_ORDER_CAP).unwrap();
        prop_assert!(is_nilpotent(&g));
    }

    #[test]
    fn invariant_count_is_max_elementary_rank(ds in prop::collection::vec(prop::sample::select(vec![2usize, 3, 4, 5, 9]), 1..4)) {
        let g = kclosure::catalog::abelian(&ds, DEFAULT_ORDER_CAP).unwrap();
        let n_g = abelian_invariants(&g).unwrap().count();
        let rank = prime_divisors(g.order() as u64)
            .into_iter()
            .map(|p| {
                let omega = g.elements().iter().filter(|x| x.pow(p as i64).is_identity()).count();
                (omega as f64).log(p as f64).round() as usize
            })
            .max()
            .unwrap_or(0);
        prop_assert_eq!(n_g, rank);
    }

    #[test]
    fn closure_matches_bruteforce_and_keeps_orbits(g in group(6), k in 1usize..=3) {
        let fast = k_closure(&g, k).unwrap();
        let slow = k_closure_bruteforce(&g, k).unwrap();
        prop_assert!(fast.same_group(&slow));
        let closure = fast.group.clone().unwrap();
        prop_assert!(g.is_subgroup_of(&closure));
        let before = orbit_coloring(&g, k, DEFAULT_TUPLE_CAP).unwrap();
        let after = orbit_coloring(&closure, k, DEFAULT_TUPLE_CAP).unwrap();
        prop_assert!(before.same_partition(&after));
        // closing again changes nothing
        let twice = k_closure(&closure, k).unwrap();
        prop_assert!(twice.same_group(&fast) && !twice.strict);
    }

    #[test]
    fn closures_shrink_with_arity(g in group(7)) {
        let chain = kclosure::closure::closure_chain(&g, 3, &SearchLimits::default()).unwrap();
        for w in chain.windows(2) {
            prop_assert!(w[1].is_subgroup_of(&w[0]));
        }
    }

    #[test]
    fn one_closure_is_product_of_orbit_symmetric_groups(g in group(7)) {
        let c = k_closure(&g, 1).unwrap();
        let expected: u64 = g.orbits().iter().map(|o| (1..=o.len() as u64).product::<u64>()).product();
        prop_assert_eq!(c.order_u64(), Some(expected));
    }

    #[test]
    fn commuting_groups_have_commuting_closures(g in group(6), k in 2usize..=3) {
        let cg = k_closure(&g, k).unwrap();
        let sym = PermGroup::symmetric(g.degree(), DEFAULT_ORDER_CAP).unwrap();
        // Z(G) and the full centralizer of G in Sym(n) both commute with G
        for a in [g.center(), sym.centralizer(g.generators()).unwrap()] {
            let ca = k_closure(&a, k).unwrap();
            for x in &ca.generators {
                for y in &cg.generators {
                    prop_assert!(x.commutes_with(y), "{} vs {}", x, y);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn faithful_specs_realize_at_full_order((_, g) in catalog_group(), max_degree in 4usize..=12) {
        let bounds = EnumerationBounds { max_degree, max_components: 3, ..Default::default() };
        for spec in faithful_actions(&g, &bounds).unwrap().specs {
            prop_assert!(spec.faithful);
            let r = realize(&g, &spec).unwrap();
            prop_assert_eq!(r.group.order(), g.order());
            prop_assert_eq!(r.group.degree(), spec.degree);
        }
    }

    #[test]
    fn embedding_restricts_to_delta((_, g) in catalog_group(), i in any::<prop::sample::Index>()) {
        let lattice = SubgroupLattice::new(&g, 512, 10_000).unwrap();
        let normal: Vec<PermGroup> = (0..lattice.len())
            .map(|j| lattice.to_group(&g, j))
            .filter(|k| k.order() > 1 && g.is_normal(k).unwrap())
            .collect();
        let k = &normal[i.index(normal.len())];
        // K acting on its own support as the Delta-action
        let delta = Homomorphism::from_fn(k, |x| Ok(x.clone())).unwrap();
        let emb = universal_embedding(&g, k, &delta).unwrap();
        prop_assert_eq!(emb.degree(), g.degree() * g.order() / k.order());
        prop_assert_eq!(emb.group.order(), g.order());
        for x in k.elements() {
            let image = emb.image(x).unwrap();
            for d in 0..g.degree() {
                prop_assert_eq!(image.apply(emb.point(d, 0)), emb.point(x.apply(d), 0));
            }
        }
    }

    #[test]
    fn bounded_verdicts_are_monotone((_, g) in catalog_group(), d in 3usize..=9, extra in 0usize..=6, comps in 1usize..=2, k in 2usize..=3) {
        let small = EnumerationBounds { max_degree: d, max_components: comps, ..Default::default() };
        let large = EnumerationBounds { max_degree: d + extra, max_components: comps + 1, ..Default::default() };
        let limits = SearchLimits::default();
        let a = totally_k_closed_bounded(&g, k, &small, &limits).unwrap();
        let b = totally_k_closed_bounded(&g, k, &large, &limits).unwrap();
        if a.verdict == Verdict::Witness {
            prop_assert_eq!(b.verdict, Verdict::Witness);
        }
    }

    #[test]
    fn reports_are_consistent_and_round_trip(picks in prop::sample::subsequence(CATALOG_SMALL.to_vec(), 1..=3)) {
        let config = CampaignConfig {
            k_max: 2,
            bounds: EnumerationBounds { max_degree: 9, max_components: 2, ..Default::default() },
            ..Default::default()
        };
        let rows = picks.iter().map(|n| verify_group(n, &construct(n).unwrap(), &config).unwrap()).collect();
        let report = TheoremReport { rows };
        for row in &report.rows {
            for cell in &row.cells {
                let contradiction = cell.observed == Verdict::Falsified
                    || (cell.expected == Expectation::TotallyClosed && cell.observed == Verdict::Witness)
                    || (cell.expected == Expectation::NotTotallyClosed && cell.observed == Verdict::ConfirmedUpToBound);
                prop_assert!(!contradiction || row.falsified, "{} k = {}", row.group, cell.k);
            }
        }
        prop_assert_eq!(TheoremReport::from_jsonl(&report.to_jsonl()).unwrap(), report);
    }
}

/// At arity 1 closures need not commute: both factors of a regular Z3 close to S3.
#[test]
fn commuting_closures_fail_at_arity_one() {
    let z3 = construct("cyclic:3").unwrap();
    let c = k_closure(&z3, 1).unwrap();
    assert_eq!(c.order_u64(), Some(6));
    let all_commute = c.generators.iter().all(|x| c.generators.iter().all(|y| x.commutes_with(y)));
    assert!(!all_commute);
}
