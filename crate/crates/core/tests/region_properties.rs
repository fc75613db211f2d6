//! Property tests for the region engine: boolean algebra laws on normal
//! forms, closure/distance interplay, and membership-oracle agreement.

use proptest::prelude::*;
use proxim_core::regions::{Distance, Ext, Interval, Region};
use proxim_core::{RealRegion, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

fn interval_strategy() -> impl Strategy<Value = Interval<Rational>> {
    (-48i64..48, 0i64..24, any::<bool>(), any::<bool>(), 0u8..12).prop_map(
        |(a, len, lc, uc, shape)| {
            let lo = rational(a, 4);
            let hi = rational(a + len, 4);
            match shape {
                0 => Interval::new(Ext::NegInf, false, Ext::Fin(hi), uc).unwrap(),
                1 => Interval::new(Ext::Fin(lo), lc, Ext::PosInf, false).unwrap(),
                _ if len == 0 => Interval::point(lo),
                _ => Interval::new(Ext::Fin(lo), lc, Ext::Fin(hi), uc).unwrap(),
            }
        },
    )
}

fn region_strategy() -> impl Strategy<Value = RealRegion> {
    proptest::collection::vec(interval_strategy(), 0..4).prop_map(Region::normalize)
}

fn probe_strategy() -> impl Strategy<Value = Rational> {
    (-260i64..260, 1i64..8).prop_map(|(n, d)| rational(n, d))
}

proptest! {
    #[test]
    fn normal_form_is_idempotent(a in region_strategy()) {
        prop_assert_eq!(Region::normalize(a.intervals().to_vec()), a);
    }

    #[test]
    fn boolean_algebra_laws(a in region_strategy(), b in region_strategy(), c in region_strategy()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.union(&b.intersect(&c)), a.union(&b).intersect(&a.union(&c)));
        // De Morgan.
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert_eq!(a.union(&a.complement()), Region::full());
        prop_assert!(a.intersect(&a.complement()).is_empty());
    }

    #[test]
    fn membership_agrees_with_boolean_ops(
        a in region_strategy(),
        b in region_strategy(),
        q in probe_strategy(),
    ) {
        prop_assert_eq!(a.union(&b).contains(&q), a.contains(&q) || b.contains(&q));
        prop_assert_eq!(a.intersect(&b).contains(&q), a.contains(&q) && b.contains(&q));
        prop_assert_eq!(a.complement().contains(&q), !a.contains(&q));
        prop_assert_eq!(a.difference(&b).contains(&q), a.contains(&q) && !b.contains(&q));
    }

    #[test]
    fn closure_properties(a in region_strategy()) {
        let cl = a.closure();
        prop_assert!(a.is_subset(&cl));
        prop_assert_eq!(cl.closure(), cl.clone());
        prop_assert!(cl.is_closed());
    }

    #[test]
    fn distance_properties(a in region_strategy(), b in region_strategy()) {
        prop_assert_eq!(a.distance(&b), b.distance(&a));
        prop_assert_eq!(a.distance(&b), a.closure().distance(&b.closure()));
        if a.is_empty() || b.is_empty() {
            prop_assert_eq!(a.distance(&b), Distance::Infinite);
        } else {
            // Model fact: zero distance iff the closures intersect.
            let zero = a.distance(&b).is_zero();
            let meet = !a.closure().intersect(&b.closure()).is_empty();
            prop_assert_eq!(zero, meet);
        }
    }

    #[test]
    fn compactness_is_closed_and_bounded(a in region_strategy()) {
        prop_assert_eq!(a.is_compact(), a.is_closed() && a.is_bounded());
    }
}

/// Membership oracle agreement at a fixed budget: one thousand random
/// rational probes per run.
#[test]
fn membership_oracle_thousand_probes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for _ in 0..20 {
        let a = proxim_core::sampling::random_region(&mut rng);
        let b = proxim_core::sampling::random_region(&mut rng);
        let union = a.union(&b);
        let meet = a.intersect(&b);
        let diff = a.difference(&b);
        let co = a.complement();
        for _ in 0..50 {
            let q = proxim_core::sampling::random_rational(&mut rng, -40, 40, 6);
            assert_eq!(union.contains(&q), a.contains(&q) || b.contains(&q));
            assert_eq!(meet.contains(&q), a.contains(&q) && b.contains(&q));
            assert_eq!(diff.contains(&q), a.contains(&q) && !b.contains(&q));
            assert_eq!(co.contains(&q), !a.contains(&q));
        }
    }
}

/// Distance is the infimum: no probe pair beats it, and probe pairs get
/// within any fixed grid resolution of it on closures.
#[test]
fn distance_is_a_lower_bound_on_probe_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for _ in 0..200 {
        let a = proxim_core::sampling::random_region(&mut rng);
        let b = proxim_core::sampling::random_region(&mut rng);
        let Distance::Finite(d) = a.distance(&b) else { continue };
        for _ in 0..20 {
            let x = proxim_core::sampling::random_rational(&mut rng, -20, 20, 4);
            let y = proxim_core::sampling::random_rational(&mut rng, -20, 20, 4);
            if a.contains(&x) && b.contains(&y) {
                let gap = if x > y { x.clone() - y.clone() } else { y.clone() - x.clone() };
                assert!(gap >= d, "probe pair beats the computed distance");
            }
        }
    }
}

#[test]
fn distance_zero_iff_closures_meet_on_interval_families() {
    // Exhaustive over a small family of endpoint/flag combinations.
    let bounds = [rational(0, 1), rational(1, 1), rational(2, 1)];
    let mut members = vec![];
    for lo in &bounds {
        for hi in &bounds {
            if lo > hi {
                continue;
            }
            for lc in [false, true] {
                for uc in [false, true] {
                    if let Ok(iv) =
                        Interval::new(Ext::Fin(lo.clone()), lc, Ext::Fin(hi.clone()), uc)
                    {
                        members.push(Region::interval(iv));
                    }
                }
            }
        }
    }
    for a in &members {
        for b in &members {
            let zero = a.distance(b).is_zero();
            let meet = !a.closure().intersect(&b.closure()).is_empty();
            assert_eq!(zero, meet, "a={a}, b={b}");
        }
    }
}
