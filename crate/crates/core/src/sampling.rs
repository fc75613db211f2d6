//! Seeded random generation of regions, subsets, and relations.
//!
//! Everything here is driven by a caller-supplied RNG so that suites and
//! property tests are reproducible from a recorded seed.

use crate::coproduct::{ComponentSet, CoproductHandle, Tail};
use crate::dimension::{DeltaCovering, RefinementAssignment};
use crate::regions::{Ext, FiniteSubset, Interval, Region};
use crate::spaces::{FiniteGround, Ground, PointRelation, ProximityKind, Space, SpaceSet};
use crate::{RealRegion, Rational};
use rand::Rng;
use std::collections::BTreeMap;

pub fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Rational {
    let den = rng.random_range(1..=max_den);
    let num = rng.random_range(lo * den..=hi * den);
    Rational::new(num.into(), den.into())
}

fn random_interval<R: Rng>(rng: &mut R) -> Interval<Rational> {
    use crate::regions::Ext;
    let unbounded_left = rng.random_range(0..10) == 0;
    let unbounded_right = rng.random_range(0..10) == 0;
    let mut a = random_rational(rng, -16, 16, 4);
    let mut b = random_rational(rng, -16, 16, 4);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let (lower, lower_closed) = if unbounded_left {
        (Ext::NegInf, false)
    } else {
        (Ext::Fin(a.clone()), rng.random_bool(0.5))
    };
    let (upper, upper_closed) = if unbounded_right {
        (Ext::PosInf, false)
    } else {
        (Ext::Fin(b.clone()), rng.random_bool(0.5))
    };
    // Degenerate equal endpoints must be closed on both sides.
    if let (Ext::Fin(l), Ext::Fin(u)) = (&lower, &upper) {
        if l == u {
            return Interval::point(l.clone());
        }
    }
    Interval::new(lower, lower_closed, upper, upper_closed).expect("sampled interval is valid")
}

/// A small random region: up to three intervals, occasionally empty or
/// unbounded.
pub fn random_region<R: Rng>(rng: &mut R) -> RealRegion {
    let n = rng.random_range(0..=3);
    Region::normalize((0..n).map(|_| random_interval(rng)).collect())
}

pub fn random_finite_subset<R: Rng>(rng: &mut R, size: u32) -> FiniteSubset {
    let bits = rng.random::<u64>() & if size == 64 { u64::MAX } else { (1 << size) - 1 };
    FiniteSubset::from_bits(size, bits)
}

fn random_component_set<R: Rng>(rng: &mut R, space: &Space) -> ComponentSet {
    match random_set(rng, space) {
        SpaceSet::Region(r) => ComponentSet::Region(r),
        SpaceSet::Finite(s) => ComponentSet::Finite(s),
        SpaceSet::Coproduct(_) => unreachable!("components are not coproducts"),
    }
}

fn random_coproduct_set<R: Rng>(rng: &mut R, handle: &CoproductHandle) -> SpaceSet {
    let mut entries = BTreeMap::new();
    match handle.component_count() {
        Some(n) => {
            for index in 1..=n as u32 {
                if rng.random_bool(0.7) {
                    entries.insert(index, random_component_set(rng, handle.component(index).unwrap()));
                }
            }
            SpaceSet::Coproduct(handle.make_set(entries, Tail::Empty).expect("sampled set is valid"))
        }
        None => {
            let k = rng.random_range(0..=3);
            for _ in 0..k {
                let index = rng.random_range(1..=6u32);
                entries.insert(index, random_component_set(rng, handle.component(index).unwrap()));
            }
            let tail = if rng.random_bool(0.5) { Tail::Full } else { Tail::Empty };
            SpaceSet::Coproduct(handle.make_set(entries, tail).expect("sampled set is valid"))
        }
    }
}

/// A random set of the given space.
pub fn random_set<R: Rng>(rng: &mut R, space: &Space) -> SpaceSet {
    match space {
        Space::Primitive { ground: Ground::RealLine, .. } => SpaceSet::Region(random_region(rng)),
        Space::Primitive { ground: Ground::Finite(g), .. } => {
            SpaceSet::Finite(random_finite_subset(rng, g.len()))
        }
        Space::Coproduct(h) => random_coproduct_set(rng, h),
        Space::Subspace { parent, carrier } => {
            let raw = random_set(rng, parent);
            parent
                .intersect_of(&raw, carrier)
                .expect("intersection with the carrier is a subspace set")
        }
    }
}

/// A random equivalence relation (uniform over class assignments).
pub fn random_equivalence<R: Rng>(rng: &mut R, n: u32) -> PointRelation {
    let classes: Vec<u32> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if classes[i as usize] == classes[j as usize] {
                pairs.push((i, j));
            }
        }
    }
    PointRelation::from_pairs(n, &pairs).expect("indices in range")
}

/// Every reflexive symmetric relation on `n` points, by off-diagonal
/// bitmask. `n` must stay tiny: there are `2^(n(n-1)/2)` of them.
pub fn all_reflexive_symmetric(n: u32) -> Vec<PointRelation> {
    let mut off_diagonal = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            off_diagonal.push((i, j));
        }
    }
    let m = off_diagonal.len();
    assert!(m <= 16, "too many off-diagonal pairs");
    (0..1u32 << m)
        .map(|choice| {
            let pairs: Vec<(u32, u32)> = off_diagonal
                .iter()
                .enumerate()
                .filter(|(k, _)| choice >> k & 1 == 1)
                .map(|(_, p)| *p)
                .collect();
            PointRelation::from_pairs(n, &pairs).expect("indices in range")
        })
        .collect()
}

/// Labels `p1.. pn` for generated finite grounds.
pub fn default_labels(n: u32) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A random valid refinement assignment on the line: overlapping open
/// windows around increasing cut points, closed witnesses strictly inside
/// them, and targets formed as unions of randomly grouped windows.
pub fn random_region_refinement<R: Rng>(rng: &mut R) -> RefinementAssignment {
    let kind = if rng.random_bool(0.5) { ProximityKind::Standard } else { ProximityKind::Metric };
    let space = Space::real(kind).unwrap();
    let m = rng.random_range(2..=5usize);
    let mut cuts = Vec::with_capacity(m - 1);
    let mut x = rng.random_range(-8..=-4i64);
    for _ in 0..m - 1 {
        x += rng.random_range(1..=4i64);
        cuts.push(rat(x, 1));
    }
    let quarter = rat(1, 4);
    let eighth = rat(1, 8);
    let mut pairs = Vec::with_capacity(m);
    for j in 0..m {
        let lower = if j == 0 { None } else { Some(cuts[j - 1].clone()) };
        let upper = if j == m - 1 { None } else { Some(cuts[j].clone()) };
        let (v_lo, b_lo, b_lo_closed) = match &lower {
            None => (Ext::NegInf, Ext::NegInf, false),
            Some(c) => (
                Ext::Fin(c.clone() - quarter.clone()),
                Ext::Fin(c.clone() - eighth.clone()),
                true,
            ),
        };
        let (v_hi, b_hi, b_hi_closed) = match &upper {
            None => (Ext::PosInf, Ext::PosInf, false),
            Some(c) => (
                Ext::Fin(c.clone() + quarter.clone()),
                Ext::Fin(c.clone() + eighth.clone()),
                true,
            ),
        };
        let v = Interval::new(v_lo, false, v_hi, false).unwrap();
        let b = Interval::new(b_lo, b_lo_closed, b_hi, b_hi_closed).unwrap();
        pairs.push((SpaceSet::Region(Region::interval(v)), SpaceSet::Region(Region::interval(b))));
    }
    let refinement = DeltaCovering { space: space.clone(), pairs };
    group_into_targets(rng, refinement)
}

/// A random valid refinement assignment on a finite partition space: the
/// refinement elements are unions of classes which double as their own
/// witnesses.
pub fn random_finite_refinement<R: Rng>(rng: &mut R) -> RefinementAssignment {
    let n = rng.random_range(2..=5u32);
    let rel = random_equivalence(rng, n);
    let space = Space::finite(
        FiniteGround::new(default_labels(n)).unwrap(),
        ProximityKind::FiniteRelation(rel.clone()),
    )
    .unwrap();
    let mut class_of = vec![u32::MAX; n as usize];
    let mut classes: Vec<u64> = Vec::new();
    for p in 0..n {
        if class_of[p as usize] == u32::MAX {
            let members = rel.neighborhood(1 << p);
            for q in 0..n {
                if members >> q & 1 == 1 {
                    class_of[q as usize] = classes.len() as u32;
                }
            }
            classes.push(members);
        }
    }
    let m = rng.random_range(classes.len()..=classes.len() + 2);
    let mut element_bits = vec![0u64; m];
    for (k, class) in classes.iter().enumerate() {
        // Every class lives in at least one refinement element.
        element_bits[k % m] |= class;
    }
    for bits in element_bits.iter_mut() {
        for class in &classes {
            if rng.random_bool(0.3) {
                *bits |= class;
            }
        }
    }
    let pairs = element_bits
        .into_iter()
        .filter(|bits| *bits != 0)
        .map(|bits| {
            let s = SpaceSet::Finite(FiniteSubset::from_bits(n, bits));
            (s.clone(), s)
        })
        .collect();
    let refinement = DeltaCovering { space, pairs };
    group_into_targets(rng, refinement)
}

fn group_into_targets<R: Rng>(rng: &mut R, refinement: DeltaCovering) -> RefinementAssignment {
    let m = refinement.pairs.len();
    let t = rng.random_range(1..=m);
    let assign: Vec<usize> = (0..m).map(|_| rng.random_range(0..t)).collect();
    let space = refinement.space.clone();
    let mut targets = vec![space.empty_set(); t];
    for (j, &i) in assign.iter().enumerate() {
        targets[i] = space.union_of(&targets[i], &refinement.pairs[j].0).unwrap();
    }
    RefinementAssignment::new(refinement, targets, assign).expect("constructed assignment is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            assert_eq!(random_region(&mut a), random_region(&mut b));
        }
    }

    #[test]
    fn relation_census_on_three_points() {
        let all = all_reflexive_symmetric(3);
        assert_eq!(all.len(), 8);
        let equivalences = all.iter().filter(|r| r.is_equivalence()).count();
        // Partitions of a 3-element set.
        assert_eq!(equivalences, 5);
    }
}
