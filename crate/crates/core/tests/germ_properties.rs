//! Germ-layer properties: the naive-oracle equivalence, point-germ
//! soundness, coproduct additivity of germ counts, the template surplus
//! germ, and support disjointness of coproduct germs.

use proxim_core::germs::{
    classify_germ, enumerate_germs, extend_germ, point_germ, star_close, star_close_exhaustive,
    Germ, GermClass, GermMode, Limits, Subalgebra,
};
use proxim_core::sampling;
use proxim_core::spaces::{Point, ProximityKind, Space, SpaceSet};
use proxim_core::text::parse_region;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rset(s: &str) -> SpaceSet {
    SpaceSet::Region(parse_region(s).unwrap())
}

/// Independent enumeration: filter every nonempty atom subset by a direct
/// pairwise double loop against the space oracle.
fn naive_germ_masks(alg: &Subalgebra) -> Vec<u32> {
    let n = alg.atom_count();
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                    ok &= alg.space().close(&alg.atoms()[i], &alg.atoms()[j]).unwrap();
                }
            }
        }
        if ok {
            out.push(mask);
        }
    }
    out
}

fn small_test_algebras() -> Vec<Subalgebra> {
    let limits = Limits::default();
    let mut out = Vec::new();
    // Metric line with two rays.
    out.push(
        Subalgebra::new(
            Space::real(ProximityKind::Metric).unwrap(),
            vec![rset("(-inf,0]"), rset("[1,inf)")],
            &limits,
        )
        .unwrap(),
    );
    // Standard line with overlapping generators.
    out.push(
        Subalgebra::new(
            Space::real(ProximityKind::Standard).unwrap(),
            vec![rset("(-inf,1)"), rset("(0,inf)")],
            &limits,
        )
        .unwrap(),
    );
    // Discrete finite ground.
    let discrete = Space::finite_relation(vec!["a".into(), "b".into()], &[]).unwrap();
    let single = |bits: u64| SpaceSet::Finite(proxim_core::regions::FiniteSubset::from_bits(2, bits));
    out.push(Subalgebra::new(discrete, vec![single(0b01), single(0b10)], &limits).unwrap());
    // A partition space.
    let partition = Space::finite_relation(
        vec!["a".into(), "b".into(), "c".into()],
        &[("a".into(), "b".into())],
    )
    .unwrap();
    let sub3 = |bits: u64| SpaceSet::Finite(proxim_core::regions::FiniteSubset::from_bits(3, bits));
    out.push(Subalgebra::new(partition, vec![sub3(0b001), sub3(0b010)], &limits).unwrap());
    // A two-component coproduct with carriers as generators.
    let co = Space::coproduct(vec![
        Space::real(ProximityKind::Standard).unwrap(),
        Space::real(ProximityKind::Metric).unwrap(),
    ])
    .unwrap();
    let h = co.as_coproduct().unwrap();
    let gens = vec![
        SpaceSet::Coproduct(h.carrier_of(1).unwrap()),
        SpaceSet::Coproduct(h.carrier_of(2).unwrap()),
    ];
    out.push(Subalgebra::new(co, gens, &limits).unwrap());
    out
}

#[test]
fn enumeration_matches_the_naive_filter() {
    for alg in small_test_algebras() {
        assert!(alg.atom_count() <= 4);
        let got: Vec<u32> = enumerate_germs(&alg, GermMode::All)
            .iter()
            .map(|g| g.support_mask())
            .collect();
        assert_eq!(got, naive_germ_masks(&alg));
    }
}

#[test]
fn discrete_two_point_space_has_two_singleton_germs() {
    let alg = &small_test_algebras()[2];
    let germs = enumerate_germs(alg, GermMode::All);
    assert_eq!(germs.len(), 2);
    assert!(germs.iter().all(|g| g.support_mask().count_ones() == 1));
}

#[test]
fn star_close_reduction_agrees_with_exhaustive_quantification() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for alg in small_test_algebras() {
        let germs = enumerate_germs(&alg, GermMode::All);
        for _ in 0..30 {
            let pick = |rng: &mut ChaCha8Rng| -> Vec<Germ> {
                let k = rng.random_range(1..=2.min(germs.len()));
                (0..k).map(|_| germs[rng.random_range(0..germs.len())]).collect()
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            assert_eq!(
                star_close(&alg, &a, &b).unwrap(),
                star_close_exhaustive(&alg, &a, &b).unwrap()
            );
        }
    }
}

/// Point soundness: the point germ is a valid germ and its trace contains
/// every algebra element whose closure contains the point.
#[test]
fn point_germs_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for kind in [ProximityKind::Metric, ProximityKind::Standard, ProximityKind::StoneCech] {
        let alg = Subalgebra::new(
            Space::real(kind).unwrap(),
            vec![rset("(-inf,0]"), rset("[1,inf)"), rset("(2,3)")],
            &Limits::default(),
        )
        .unwrap();
        for _ in 0..150 {
            let q = sampling::random_rational(&mut rng, -10, 10, 4);
            let germ = point_germ(&alg, &Point::Real(q.clone())).unwrap();
            for mask in 1u32..1 << alg.atom_count() {
                let element = alg.element(mask);
                let closure = alg.space().closure_of(&element).unwrap();
                if let SpaceSet::Region(r) = &closure {
                    if r.contains(&q) {
                        assert!(
                            germ.in_trace(mask),
                            "element whose closure holds the point is in the trace"
                        );
                    }
                }
            }
        }
    }
}

fn random_partition_space<R: Rng>(rng: &mut R, max_points: u32) -> Space {
    let n = rng.random_range(1..=max_points);
    Space::finite(
        proxim_core::spaces::FiniteGround::new(sampling::default_labels(n)).unwrap(),
        ProximityKind::FiniteRelation(sampling::random_equivalence(rng, n)),
    )
    .unwrap()
}

/// Builds the coproduct algebra whose generators are every component
/// carrier plus the injected copies of each component's generators, and
/// returns it with the component algebras.
fn coproduct_algebra_with_carriers(
    components: Vec<(Space, Vec<SpaceSet>)>,
) -> (Subalgebra, Vec<Subalgebra>) {
    let limits = Limits { max_generators: 16, max_atoms: 24 };
    let spaces: Vec<Space> = components.iter().map(|(s, _)| s.clone()).collect();
    let co = Space::coproduct(spaces).unwrap();
    let h = co.as_coproduct().unwrap().clone();
    let mut gens: Vec<SpaceSet> = Vec::new();
    for index in 1..=components.len() as u32 {
        gens.push(SpaceSet::Coproduct(h.carrier_of(index).unwrap()));
    }
    for (k, (_, component_gens)) in components.iter().enumerate() {
        for g in component_gens {
            let c = proxim_core::coproduct::ComponentSet::try_from(g.clone()).unwrap();
            gens.push(SpaceSet::Coproduct(h.inject((k + 1) as u32, c).unwrap()));
        }
    }
    let coproduct_alg = Subalgebra::new(co, gens, &limits).unwrap();
    let component_algs = components
        .into_iter()
        .map(|(s, g)| Subalgebra::new(s, g, &limits).unwrap())
        .collect();
    (coproduct_alg, component_algs)
}

/// Finite coproducts: germ counts add up, extension is injective, and its
/// image is exactly the non-tail germs (here: all of them).
#[test]
fn finite_coproduct_germ_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..25 {
        let k = rng.random_range(2..=3usize);
        let components: Vec<(Space, Vec<SpaceSet>)> = (0..k)
            .map(|_| {
                let space = random_partition_space(&mut rng, 3);
                let gens = (0..rng.random_range(0..=1))
                    .map(|_| sampling::random_set(&mut rng, &space))
                    .collect();
                (space, gens)
            })
            .collect();
        let (coproduct_alg, component_algs) = coproduct_algebra_with_carriers(components);
        let component_germs: Vec<Vec<Germ>> = component_algs
            .iter()
            .map(|alg| enumerate_germs(alg, GermMode::All))
            .collect();
        let coproduct_germs = enumerate_germs(&coproduct_alg, GermMode::All);
        let total: usize = component_germs.iter().map(|g| g.len()).sum();
        assert_eq!(coproduct_germs.len(), total, "germ count is componentwise additive");

        let mut extended = Vec::new();
        for (k, (alg, germs)) in component_algs.iter().zip(&component_germs).enumerate() {
            for g in germs {
                extended.push(extend_germ(alg, g, &coproduct_alg, (k + 1) as u32).unwrap());
            }
        }
        let mut unique: Vec<u32> = extended.iter().map(|g| g.support_mask()).collect();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), extended.len(), "extension is injective");
        let mut all: Vec<u32> = coproduct_germs.iter().map(|g| g.support_mask()).collect();
        all.sort_unstable();
        assert_eq!(unique, all, "extension hits every non-tail germ");
        for g in &coproduct_germs {
            assert!(matches!(
                classify_germ(&coproduct_alg, g).unwrap(),
                GermClass::ComponentSupported(_)
            ));
        }
    }
}

/// Template coproducts gain exactly one extra germ: the tail.
#[test]
fn template_surplus_germ() {
    for k in 1..=6u32 {
        let base = Space::finite_relation(vec!["p".into()], &[]).unwrap();
        let co = Space::template(base).unwrap();
        let h = co.as_coproduct().unwrap().clone();
        let gens: Vec<SpaceSet> = (1..=k)
            .map(|i| SpaceSet::Coproduct(h.carrier_of(i).unwrap()))
            .collect();
        let alg = Subalgebra::new(co, gens, &Limits::default()).unwrap();
        let germs = enumerate_germs(&alg, GermMode::All);
        assert_eq!(germs.len(), k as usize + 1);
        let tails: Vec<&Germ> = germs
            .iter()
            .filter(|g| classify_germ(&alg, g).unwrap() == GermClass::Tail)
            .collect();
        assert_eq!(tails.len(), 1, "exactly one tail germ");
        // No extension of a component germ reaches the tail germ.
        let base_alg = Subalgebra::new(
            Space::finite_relation(vec!["p".into()], &[]).unwrap(),
            vec![],
            &Limits::default(),
        )
        .unwrap();
        for (alpha, _) in (1..=k).enumerate() {
            for g in enumerate_germs(&base_alg, GermMode::All) {
                let ext = extend_germ(&base_alg, &g, &alg, (alpha + 1) as u32).unwrap();
                assert_ne!(ext.support_mask(), tails[0].support_mask());
            }
        }
    }
}

/// Support classes partition the non-tail germs and no germ touches two
/// components.
#[test]
fn support_disjointness() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..10 {
        let k = rng.random_range(2..=3usize);
        let components: Vec<(Space, Vec<SpaceSet>)> =
            (0..k).map(|_| (random_partition_space(&mut rng, 3), vec![])).collect();
        let (alg, _) = coproduct_algebra_with_carriers(components);
        for germ in enumerate_germs(&alg, GermMode::All) {
            let mut touched: Vec<u32> = Vec::new();
            for i in germ.atom_indices() {
                let atom = alg.atoms()[i].as_coproduct().unwrap();
                assert_eq!(atom.explicit().len(), 1, "finite-coproduct atoms live in one component");
                touched.push(*atom.explicit().keys().next().unwrap());
            }
            touched.sort_unstable();
            touched.dedup();
            assert_eq!(touched.len(), 1, "a germ is supported at one component only");
        }
    }
}

/// The extension's trace is the supersets-of-trace family.
#[test]
fn extension_trace_is_superset_semantics() {
    let base_space = Space::real(ProximityKind::Metric).unwrap();
    let base_gens = vec![rset("(-inf,0]")];
    let base_alg =
        Subalgebra::new(base_space.clone(), base_gens.clone(), &Limits::default()).unwrap();

    let co = Space::coproduct(vec![base_space, Space::real(ProximityKind::Metric).unwrap()])
        .unwrap();
    let h = co.as_coproduct().unwrap().clone();
    let mut gens = vec![
        SpaceSet::Coproduct(h.carrier_of(1).unwrap()),
        SpaceSet::Coproduct(h.carrier_of(2).unwrap()),
    ];
    for g in &base_gens {
        let c = proxim_core::coproduct::ComponentSet::try_from(g.clone()).unwrap();
        gens.push(SpaceSet::Coproduct(h.inject(1, c).unwrap()));
    }
    let co_alg = Subalgebra::new(co.clone(), gens, &Limits::default()).unwrap();

    for germ in enumerate_germs(&base_alg, GermMode::All) {
        let ext = extend_germ(&base_alg, &germ, &co_alg, 1).unwrap();
        for mask in 0u32..1 << co_alg.atom_count() {
            let in_trace = ext.in_trace(mask);
            // Superset semantics: the element contains the injected copy of
            // some component element of the germ's trace.
            let mut superset = false;
            for cmask in 1u32..1 << base_alg.atom_count() {
                if !germ.in_trace(cmask) {
                    continue;
                }
                let injected = SpaceSet::Coproduct(
                    h.inject(
                        1,
                        proxim_core::coproduct::ComponentSet::try_from(base_alg.element(cmask))
                            .unwrap(),
                    )
                    .unwrap(),
                );
                if co.is_subset_of(&injected, &co_alg.element(mask)).unwrap() {
                    superset = true;
                    break;
                }
            }
            assert_eq!(in_trace, superset);
        }
    }
}
