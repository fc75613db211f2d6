//! Dimension-layer properties: strong inclusion implies containment, the
//! finite-union rule, the regrouping step of the dimension lemma on
//! randomized valid inputs, and agreement of the optimized brute-force
//! dimension with a fully naive oracle.

use proxim_core::dimension::{
    brute_delta_dim, multiplicity, reindex_refinement, validate_covering, DimBound,
};
use proxim_core::germs::Limits;
use proxim_core::regions::FiniteSubset;
use proxim_core::sampling;
use proxim_core::spaces::{ProximityKind, Space, SpaceSet};
use proxim_core::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn real_kinds() -> Vec<Space> {
    [
        ProximityKind::Discrete,
        ProximityKind::Metric,
        ProximityKind::Standard,
        ProximityKind::Aleksandroff,
        ProximityKind::StoneCech,
    ]
    .into_iter()
    .map(|k| Space::real(k).unwrap())
    .collect()
}

#[test]
fn strong_inclusion_implies_containment_across_kinds() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for space in real_kinds() {
        for _ in 0..300 {
            let a = sampling::random_set(&mut rng, &space);
            let b = sampling::random_set(&mut rng, &space);
            if space.strong_inclusion(&b, &a).unwrap() {
                assert!(space.is_subset_of(&b, &a).unwrap());
            }
        }
    }
}

/// Shrunken sets are strongly included, and strong inclusion is closed
/// under finite unions.
#[test]
fn finite_union_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let eps = Rational::new(1.into(), 4.into());
    for space in real_kinds() {
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 150 && attempts < 10_000 {
            attempts += 1;
            let a1 = sampling::random_set(&mut rng, &space);
            let a2 = sampling::random_set(&mut rng, &space);
            // Candidate strongly-included parts: strip an eps-collar.
            let shrink = |a: &SpaceSet| -> SpaceSet {
                let r = a.as_region().unwrap();
                let collar = r.complement().halo(&eps, false);
                SpaceSet::Region(r.difference(&collar))
            };
            let b1 = shrink(&a1);
            let b2 = shrink(&a2);
            if !space.strong_inclusion(&b1, &a1).unwrap()
                || !space.strong_inclusion(&b2, &a2).unwrap()
            {
                continue;
            }
            checked += 1;
            let b = space.union_of(&b1, &b2).unwrap();
            let a = space.union_of(&a1, &a2).unwrap();
            assert!(space.strong_inclusion(&b, &a).unwrap(), "union rule failed");
        }
        assert!(checked >= 150);
    }
}

#[test]
fn reindex_refinement_randomized_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let limits = Limits::default();
    for i in 0..120 {
        let r = if i % 2 == 0 {
            sampling::random_region_refinement(&mut rng)
        } else {
            sampling::random_finite_refinement(&mut rng)
        };
        let out = reindex_refinement(&r).unwrap();
        let report = validate_covering(&out);
        assert!(report.is_valid(), "reindexed covering invalid: {:?}", report.violations);
        let space = &out.space;
        for (i, (a, _)) in out.pairs.iter().enumerate() {
            assert!(space.is_subset_of(a, &r.targets()[i]).unwrap(), "refines the targets");
        }
        let out_a: Vec<SpaceSet> = out.a_sets().cloned().collect();
        let in_a: Vec<SpaceSet> = r.refinement().a_sets().cloned().collect();
        assert!(
            multiplicity(space, &out_a, &limits).unwrap()
                <= multiplicity(space, &in_a, &limits).unwrap(),
            "regrouping never raises multiplicity"
        );
    }
}

/// Fully naive proximity dimension: quantifies over every covering family
/// (not only minimal ones) and every refinement subfamily, with witnesses
/// found by direct strong-inclusion enumeration.
fn naive_delta_dim(space: &Space, n: u32) -> u32 {
    let full: u32 = (1 << n) - 1;
    let subset = |bits: u32| SpaceSet::Finite(FiniteSubset::from_bits(n, bits as u64));
    let max_witness: Vec<u32> = (0..=full)
        .map(|a| {
            let mut out = 0u32;
            for b in 0..=full {
                if space.strong_inclusion(&subset(b), &subset(a)).unwrap() {
                    out |= b;
                }
            }
            out
        })
        .collect();
    let is_covering = |members: &[u32]| {
        members.iter().fold(0u32, |acc, m| acc | max_witness[*m as usize]) == full
    };
    let mut worst = 1u32;
    for fam in 1u32..1 << full {
        let members: Vec<u32> = (1..=full).filter(|m| fam >> (m - 1) & 1 == 1).collect();
        if !is_covering(&members) {
            continue;
        }
        let candidates: Vec<u32> =
            (1..=full).filter(|v| members.iter().any(|m| v & !m == 0)).collect();
        let mut best = u32::MAX;
        for sel in 1u32..1 << candidates.len() {
            let chosen: Vec<u32> = candidates
                .iter()
                .enumerate()
                .filter(|(k, _)| sel >> k & 1 == 1)
                .map(|(_, v)| *v)
                .collect();
            if !is_covering(&chosen) {
                continue;
            }
            let mult = (0..n)
                .map(|x| chosen.iter().filter(|v| *v >> x & 1 == 1).count() as u32)
                .max()
                .unwrap();
            best = best.min(mult);
        }
        worst = worst.max(best);
    }
    worst - 1
}

#[test]
fn brute_dim_agrees_with_naive_oracle_up_to_three_points() {
    for n in 1..=3u32 {
        for rel in sampling::all_reflexive_symmetric(n) {
            let space = Space::finite(
                proxim_core::spaces::FiniteGround::new(sampling::default_labels(n)).unwrap(),
                ProximityKind::FiniteRelation(rel),
            )
            .unwrap();
            let naive = naive_delta_dim(&space, n);
            assert_eq!(brute_delta_dim(&space, 8).unwrap(), DimBound::Exact(naive));
        }
    }
}

/// A delta-covering of a finite coproduct restricts to a delta-covering of
/// each component.
#[test]
fn coverings_restrict_componentwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..40 {
        let sizes: Vec<u32> = (0..2).map(|_| rng.random_range(1..=3)).collect();
        let components: Vec<Space> = sizes
            .iter()
            .map(|n| {
                Space::finite(
                    proxim_core::spaces::FiniteGround::new(sampling::default_labels(*n)).unwrap(),
                    ProximityKind::FiniteRelation(sampling::random_equivalence(&mut rng, *n)),
                )
                .unwrap()
            })
            .collect();
        let co = Space::coproduct(components.clone()).unwrap();
        let h = co.as_coproduct().unwrap().clone();
        // Per-component class covers assembled as coproduct pairs, plus a
        // random cross-component union to make restriction nontrivial.
        let mut pairs = Vec::new();
        for (k, comp) in components.iter().enumerate() {
            let (g, rel) = proxim_core::spaces::effective_relation(comp).unwrap();
            let mut seen = 0u64;
            for p in 0..g.len() {
                if seen >> p & 1 == 1 {
                    continue;
                }
                let class = rel.neighborhood(1 << p);
                seen |= class;
                let set = SpaceSet::Coproduct(
                    h.inject(
                        (k + 1) as u32,
                        proxim_core::coproduct::ComponentSet::Finite(FiniteSubset::from_bits(
                            g.len(),
                            class,
                        )),
                    )
                    .unwrap(),
                );
                pairs.push((set.clone(), set));
            }
        }
        let extra = co.union_of(&pairs[0].0, &pairs[pairs.len() - 1].0).unwrap();
        pairs.push((extra.clone(), extra));
        let covering = proxim_core::dimension::DeltaCovering { space: co.clone(), pairs };
        assert!(validate_covering(&covering).is_valid());

        for (k, comp) in components.iter().enumerate() {
            let restricted = proxim_core::dimension::DeltaCovering {
                space: comp.clone(),
                pairs: covering
                    .pairs
                    .iter()
                    .map(|(a, b)| {
                        let slice = |s: &SpaceSet| -> SpaceSet {
                            let cs = h.set_at(s.as_coproduct().unwrap(), (k + 1) as u32).unwrap();
                            cs.into()
                        };
                        (slice(a), slice(b))
                    })
                    .collect(),
            };
            let report = validate_covering(&restricted);
            assert!(report.is_valid(), "component {k}: {:?}", report.violations);
        }
    }
}

/// Every valid finite proximity space has proximity dimension zero.
#[test]
fn equivalence_relations_have_dimension_zero() {
    for n in 1..=4u32 {
        for rel in sampling::all_reflexive_symmetric(n) {
            if !rel.is_equivalence() {
                continue;
            }
            let space = Space::finite(
                proxim_core::spaces::FiniteGround::new(sampling::default_labels(n)).unwrap(),
                ProximityKind::FiniteRelation(rel),
            )
            .unwrap();
            assert_eq!(brute_delta_dim(&space, 4).unwrap(), DimBound::Exact(0));
        }
    }
}
