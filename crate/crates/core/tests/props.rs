//! Randomized invariants over generated matroids and market instances:
//! exchange machinery against exhaustive enumeration, responsiveness of
//! generated preferences, the stability hierarchy, and core cross-checks.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matroid_markets::core::{
    coalition_blocks, core_membership, enumerate_matchings, find_blocking_coalition, BlockMode,
    CoreOptions,
};
use matroid_markets::harness::{generate, GenConfig, MatroidKind};
use matroid_markets::market::{Instance, ResponsiveReport};
use matroid_markets::matroid::{AxiomReport, GroundSet, Matroid, MatroidError};
use matroid_markets::matroid_impls::{make_laminar, make_uniform};
use matroid_markets::sets::{subsets_of, ElemSet};
use matroid_markets::stability::{
    blocks_on_doctor, blocks_on_hospital, classify_edge, stability_class, BlockKind, SideBlock,
};

fn kind_strategy() -> impl Strategy<Value = MatroidKind> {
    prop_oneof![
        Just(MatroidKind::Uniform),
        Just(MatroidKind::Laminar),
        Just(MatroidKind::Mixed),
    ]
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (1usize..=4, 1usize..=3, 0.1f64..=1.0, 0.0f64..=1.0, kind_strategy(), any::<u64>())
        .prop_map(|(n_doctors, n_hospitals, edge_probability, tie_intensity, matroid_kind, seed)| {
            generate(&GenConfig {
                n_doctors,
                n_hospitals,
                edge_probability,
                tie_intensity,
                matroid_kind,
                seed,
            })
            .expect("valid config")
        })
        .prop_filter("instance within the enumeration envelope", |inst| inst.n_edges() <= 9)
}

fn random_laminar_sets(rng: &mut ChaCha8Rng, elems: &[usize], out: &mut Vec<(ElemSet, usize)>) {
    out.push((elems.iter().copied().collect(), rng.gen_range(1..=elems.len())));
    if elems.len() >= 2 && rng.gen_bool(0.5) {
        let split = rng.gen_range(1..elems.len());
        random_laminar_sets(rng, &elems[..split], out);
        random_laminar_sets(rng, &elems[split..], out);
    }
}

fn matroid_strategy() -> impl Strategy<Value = Matroid> {
    let uniform = (1usize..=7).prop_flat_map(|n| {
        (Just(n), 1usize..=n)
            .prop_map(|(n, cap)| make_uniform(GroundSet::range(n), cap).unwrap())
    });
    let laminar = (2usize..=7, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let elems: Vec<usize> = (0..n).collect();
        let mut sets = Vec::new();
        random_laminar_sets(&mut rng, &elems, &mut sets);
        make_laminar(GroundSet::range(n), sets).unwrap()
    });
    prop_oneof![uniform, laminar]
}

fn independent_sets(m: &Matroid) -> Vec<ElemSet> {
    subsets_of(m.ground().mask()).filter(|&s| m.is_independent(s)).collect()
}

proptest! {
    #[test]
    fn fundamental_circuit_is_the_unique_enumerated_circuit(m in matroid_strategy()) {
        let circuits = m.circuits(12).unwrap();
        for i in independent_sets(&m) {
            for e in m.ground().iter().filter(|&e| !i.contains(e)) {
                let extended = i.with(e);
                let inside: Vec<ElemSet> = circuits
                    .iter()
                    .map(|c| c.members())
                    .filter(|c| c.is_subset_of(extended))
                    .collect();
                if m.is_independent(extended) {
                    prop_assert!(inside.is_empty());
                    let no_circuit_error = matches!(
                        m.fundamental_circuit(e, i),
                        Err(MatroidError::NoFundamentalCircuit { .. })
                    );
                    prop_assert!(no_circuit_error);
                } else {
                    prop_assert_eq!(inside.len(), 1, "circuit in {} not unique", extended);
                    prop_assert_eq!(m.fundamental_circuit(e, i).unwrap().members(), inside[0]);
                }
            }
        }
    }

    #[test]
    fn d_set_lists_exactly_the_droppable_members(m in matroid_strategy()) {
        for i in independent_sets(&m) {
            for e in m.ground().iter().filter(|&e| !i.contains(e)) {
                if m.is_independent(i.with(e)) {
                    continue;
                }
                let d = m.d_set(e, i).unwrap();
                prop_assert!(d.is_subset_of(i));
                for f in i.iter() {
                    prop_assert_eq!(
                        d.contains(f),
                        m.is_independent(i.with(e).without(f)),
                        "f={} i={} e={}", f, i, e
                    );
                }
            }
        }
    }

    #[test]
    fn bases_all_have_rank_size_and_extension_reaches_one(m in matroid_strategy()) {
        let rank = m.rank();
        let bases = m.bases(12).unwrap();
        prop_assert!(!bases.is_empty());
        for &b in &bases {
            prop_assert_eq!(b.len(), rank);
            prop_assert!(m.is_base(b));
        }
        for i in independent_sets(&m) {
            let b = m.extend_to_base(i).unwrap();
            prop_assert!(i.is_subset_of(b));
            prop_assert!(m.is_base(b));
        }
    }

    #[test]
    fn exchange_ordering_walks_through_bases(m in matroid_strategy()) {
        let bases = m.bases(12).unwrap();
        let mut pairs = 0;
        'outer: for &b in &bases {
            for &b2 in &bases {
                if b == b2 {
                    continue;
                }
                if pairs >= 30 {
                    break 'outer;
                }
                pairs += 1;

                let ord = m.exchange_ordering(b, b2).unwrap();
                let mut removed_sorted = ord.removed.clone();
                removed_sorted.sort_unstable();
                let mut inserted_sorted = ord.inserted.clone();
                inserted_sorted.sort_unstable();
                let diff_b: Vec<usize> = b.minus(b2).iter().collect();
                let diff_b2: Vec<usize> = b2.minus(b).iter().collect();
                prop_assert_eq!(&removed_sorted, &diff_b);
                prop_assert_eq!(&inserted_sorted, &diff_b2);

                let mut current = b2;
                for (&x, &y) in ord.removed.iter().zip(ord.inserted.iter()) {
                    prop_assert!(m.is_independent(b.with(y).without(x)));
                    current = current.without(y).with(x);
                    prop_assert!(m.is_base(current), "intermediate {} not a base", current);
                }
                prop_assert_eq!(current, b);
            }
        }
    }

    #[test]
    fn brualdi_partner_swaps_both_ways(m in matroid_strategy()) {
        let bases = m.bases(12).unwrap();
        let mut pairs = 0;
        'outer: for &b in &bases {
            for &b2 in &bases {
                if b == b2 {
                    continue;
                }
                if pairs >= 30 {
                    break 'outer;
                }
                pairs += 1;
                for e in b.minus(b2).iter() {
                    let f = m.brualdi_exchange(b, b2, e).unwrap();
                    prop_assert!(b2.minus(b).contains(f));
                    prop_assert!(m.is_independent(b.with(f).without(e)));
                    prop_assert!(m.is_independent(b2.with(e).without(f)));
                }
            }
        }
    }

    #[test]
    fn restriction_preserves_axioms_and_independence(
        m in matroid_strategy(),
        raw in any::<u64>(),
    ) {
        let subset = ElemSet::from_bits(raw).intersect(m.ground().mask());
        let r = m.restrict(subset);
        prop_assert_eq!(r.check_axioms(12).unwrap(), AxiomReport::Pass);
        for s in subsets_of(subset) {
            prop_assert_eq!(r.is_independent(s), m.is_independent(s));
        }
    }

    #[test]
    fn generated_hospitals_are_responsive(inst in instance_strategy()) {
        for h in 0..inst.n_hospitals() {
            prop_assert_eq!(inst.check_responsive(h, 12).unwrap(), ResponsiveReport::Pass);
        }
    }

    #[test]
    fn swap_comparison_reduces_to_edge_utilities(inst in instance_strategy()) {
        for h in 0..inst.n_hospitals() {
            let m = inst.matroid(h);
            for i in subsets_of(inst.hospital_edges(h)).filter(|&s| m.is_independent(s)) {
                for e in inst.hospital_edges(h).minus(i).iter() {
                    for f in i.iter() {
                        let swapped = i.with(e).without(f);
                        if !m.is_independent(swapped) {
                            continue;
                        }
                        prop_assert_eq!(
                            inst.hospital_compare_sets(h, swapped, i).unwrap(),
                            inst.utility(e).cmp(&inst.utility(f)),
                            "h={} i={} e={} f={}", h, i, e, f
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn edge_classification_agrees_with_its_sides(inst in instance_strategy()) {
        for mu in enumerate_matchings(&inst, 12).unwrap() {
            let class = stability_class(&inst, mu).unwrap();
            prop_assert!(!class.super_stable || class.strongly_stable);
            prop_assert!(!class.strongly_stable || class.weakly_stable);

            let mut strongest = BlockKind::None;
            for e in inst.all_edges().minus(mu).iter() {
                let report = classify_edge(&inst, mu, e).unwrap();
                let d = blocks_on_doctor(&inst, mu, e).unwrap();
                let (h, _) = blocks_on_hospital(&inst, mu, e).unwrap();
                prop_assert_eq!(report.blocks_on_d, d);
                prop_assert_eq!(report.blocks_on_h, h);
                let expected = match (d, h) {
                    (SideBlock::Strong, SideBlock::Strong) => BlockKind::Strong,
                    (SideBlock::Strong, SideBlock::Weak) | (SideBlock::Weak, SideBlock::Strong) => {
                        BlockKind::Weak
                    }
                    (SideBlock::Weak, SideBlock::Weak) => BlockKind::SuperWeak,
                    _ => BlockKind::None,
                };
                prop_assert_eq!(report.overall, expected);
                strongest = strongest.max(report.overall);
            }
            prop_assert_eq!(class.weakly_stable, strongest < BlockKind::Strong);
            prop_assert_eq!(class.strongly_stable, strongest < BlockKind::Weak);
            prop_assert_eq!(class.super_stable, strongest < BlockKind::SuperWeak);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn core_membership_is_prune_invariant_and_nested(
        inst in instance_strategy(),
        pick in any::<usize>(),
    ) {
        let matchings = enumerate_matchings(&inst, 12).unwrap();
        let mu = matchings[pick % matchings.len()];

        let pruned = CoreOptions::default();
        let full = CoreOptions { prune_hospital_free: false, ..pruned };
        let a = core_membership(&inst, mu, &pruned).unwrap();
        let b = core_membership(&inst, mu, &full).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(!a.in_super_core || a.in_strong_core);
        prop_assert!(!a.in_strong_core || a.in_weak_core);
    }

    #[test]
    fn blocking_coalitions_contain_a_hospital_and_certify(
        inst in instance_strategy(),
        pick in any::<usize>(),
    ) {
        let matchings = enumerate_matchings(&inst, 12).unwrap();
        let mu = matchings[pick % matchings.len()];
        let full = CoreOptions { prune_hospital_free: false, ..CoreOptions::default() };
        let membership = core_membership(&inst, mu, &full).unwrap();

        for (mode, member) in [
            (BlockMode::Strong, membership.in_weak_core),
            (BlockMode::Weak, membership.in_strong_core),
            (BlockMode::SuperWeak, membership.in_super_core),
        ] {
            let found = find_blocking_coalition(&inst, mu, mode, &full).unwrap();
            prop_assert_eq!(found.is_none(), member);
            if let Some(report) = found {
                prop_assert!(!report.coalition.hospitals().is_empty());
                let sigma = report.witness_sigma;
                prop_assert!(sigma.is_subset_of(report.coalition.edges_within(&inst)));
                inst.require_matching(sigma).unwrap();
                let again =
                    coalition_blocks(&inst, mu, &report.coalition, mode, full.edge_bound).unwrap();
                prop_assert_eq!(again.map(|r| r.witness_sigma), Some(sigma));
            }
        }
    }
}
