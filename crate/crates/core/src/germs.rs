//! Finite-subalgebra atoms and atom germs.
//!
//! A germ is a nonempty pairwise-close set of atoms of a finite
//! subalgebra: the finite trace a Smirnov-compactification cluster leaves
//! on the subalgebra. Germs are stored by support atoms; the full trace is
//! the up-set of algebra elements meeting the support, which cluster
//! union-splitting plus upward closure reconstructs losslessly.
//!
//! Germs deliberately relax cluster maximality: relativizing maximality to
//! the finite algebra would reject genuine point traces. Soundness (every
//! true cluster trace is a germ) is the tested direction.

use crate::error::{Error, Result};
use crate::spaces::{Point, Space, SpaceSet};
use serde::Serialize;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

/// Enumeration bounds. The defaults keep exhaustive quantifications cheap.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_generators: usize,
    pub max_atoms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_generators: 12, max_atoms: 16 }
    }
}

/// The finite boolean subalgebra generated by a list of sets: its atoms
/// are the nonempty signed intersections of the generators, they partition
/// the carrier, and every generator is a union of atoms.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    space: Space,
    generators: Vec<SpaceSet>,
    atoms: Vec<SpaceSet>,
    atom_signs: Vec<u32>,
    adjacency: Vec<u32>,
    fingerprint: u64,
}

impl Subalgebra {
    /// Computes the atoms of the subalgebra generated by `generators`,
    /// ordered by generator sign mask, together with their pairwise
    /// closeness table.
    pub fn new(space: Space, generators: Vec<SpaceSet>, limits: &Limits) -> Result<Self> {
        // Atom masks are u32 and germ enumeration walks 2^atoms, so the
        // configurable bounds are capped.
        if limits.max_atoms > 24 || limits.max_generators > 24 {
            return Err(Error::BoundExceeded {
                what: "configured subalgebra limit",
                actual: limits.max_atoms.max(limits.max_generators),
                limit: 24,
            });
        }
        if generators.len() > limits.max_generators {
            return Err(Error::BoundExceeded {
                what: "generators",
                actual: generators.len(),
                limit: limits.max_generators,
            });
        }
        for g in &generators {
            space.validate_set(g)?;
        }
        let k = generators.len();
        let mut atoms = Vec::new();
        let mut atom_signs = Vec::new();
        for signs in 0..1u32 << k {
            let mut atom = space.carrier();
            for (i, g) in generators.iter().enumerate() {
                let part = if signs >> i & 1 == 1 {
                    g.clone()
                } else {
                    space.complement_of(g)?
                };
                atom = space.intersect_of(&atom, &part)?;
                if atom.is_empty() {
                    break;
                }
            }
            if !atom.is_empty() {
                atoms.push(atom);
                atom_signs.push(signs);
            }
        }
        if atoms.len() > limits.max_atoms {
            return Err(Error::BoundExceeded {
                what: "atoms",
                actual: atoms.len(),
                limit: limits.max_atoms,
            });
        }
        let n = atoms.len();
        let mut adjacency = vec![0u32; n];
        for i in 0..n {
            for j in i..n {
                if space.close(&atoms[i], &atoms[j])? {
                    adjacency[i] |= 1 << j;
                    adjacency[j] |= 1 << i;
                }
            }
        }
        let mut hasher = DefaultHasher::new();
        space.hash(&mut hasher);
        generators.hash(&mut hasher);
        let fingerprint = hasher.finish();
        Ok(Subalgebra { space, generators, atoms, atom_signs, adjacency, fingerprint })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn generators(&self) -> &[SpaceSet] {
        &self.generators
    }

    pub fn atoms(&self) -> &[SpaceSet] {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Sign mask of an atom: bit `i` set iff the atom lies inside
    /// generator `i`.
    pub fn atom_signs(&self, atom: usize) -> u32 {
        self.atom_signs[atom]
    }

    pub fn close_atoms(&self, i: usize, j: usize) -> bool {
        self.adjacency[i] >> j & 1 == 1
    }

    pub(crate) fn adjacency_row(&self, i: usize) -> u32 {
        self.adjacency[i]
    }

    /// The algebra element with the given atom mask.
    pub fn element(&self, mask: u32) -> SpaceSet {
        let mut out = self.space.empty_set();
        for (i, atom) in self.atoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out = self.space.union_of(&out, atom).expect("atoms share the space");
            }
        }
        out
    }

    /// Atom mask of an algebra element; errors when the set is not a union
    /// of atoms.
    pub fn atom_mask_of(&self, set: &SpaceSet) -> Result<u32> {
        self.space.validate_set(set)?;
        let mut mask = 0u32;
        for (i, atom) in self.atoms.iter().enumerate() {
            if self.space.is_subset_of(atom, set)? {
                mask |= 1 << i;
            }
        }
        if self.element(mask) == *set {
            Ok(mask)
        } else {
            Err(Error::NotAtomUnion)
        }
    }

    fn check_germ(&self, germ: &Germ) -> Result<()> {
        if germ.algebra_fp != self.fingerprint {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }
}

/// A nonempty pairwise-close set of atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    algebra_fp: u64,
    support: u32,
}

impl Germ {
    /// Validates the cluster trace property: the support is nonempty, in
    /// range, and pairwise close.
    pub fn new(alg: &Subalgebra, support: u32) -> Result<Germ> {
        let n = alg.atom_count();
        if support == 0 {
            return Err(Error::InvalidInput("a germ needs a nonempty support".into()));
        }
        if u64::from(support) >= 1u64 << n {
            return Err(Error::InvalidInput("support mask out of range".into()));
        }
        for i in 0..n {
            if support >> i & 1 == 0 {
                continue;
            }
            if alg.adjacency_row(i) & support != support {
                return Err(Error::InvalidInput(format!(
                    "support atoms {i} and {} are not close",
                    (0..n).find(|j| support >> j & 1 == 1 && !alg.close_atoms(i, *j)).unwrap()
                )));
            }
        }
        Ok(Germ { algebra_fp: alg.fingerprint, support })
    }

    pub fn support_mask(&self) -> u32 {
        self.support
    }

    pub fn atom_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(|i| self.support >> i & 1 == 1).map(|i| i as usize)
    }

    /// Trace membership: an algebra element is in the trace iff it meets
    /// the support.
    pub fn in_trace(&self, element_mask: u32) -> bool {
        self.support & element_mask != 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GermMode {
    All,
    Maximal,
}

/// All germs of the subalgebra, in support-mask order: every nonempty
/// pairwise-close atom subset, or only the inclusion-maximal ones.
pub fn enumerate_germs(alg: &Subalgebra, mode: GermMode) -> Vec<Germ> {
    let n = alg.atom_count();
    let total = 1usize << n;
    let mut pairwise = vec![false; total];
    let mut out = Vec::new();
    for mask in 1..total as u32 {
        let top = 31 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let good = rest == 0
            || (pairwise[rest as usize] && alg.adjacency_row(top as usize) & rest == rest);
        pairwise[mask as usize] = good;
        if !good {
            continue;
        }
        if mode == GermMode::Maximal {
            let extensible = (0..n as u32)
                .any(|j| mask >> j & 1 == 0 && alg.adjacency_row(j as usize) & mask == mask);
            if extensible {
                continue;
            }
        }
        out.push(Germ { algebra_fp: alg.fingerprint, support: mask });
    }
    out
}

/// The trace of the point cluster at `x`: all atoms close to `{x}`.
pub fn point_germ(alg: &Subalgebra, x: &Point) -> Result<Germ> {
    let singleton = alg.space().point_set(x)?;
    let mut support = 0u32;
    for (i, atom) in alg.atoms().iter().enumerate() {
        if alg.space().close(atom, &singleton)? {
            support |= 1 << i;
        }
    }
    Germ::new(alg, support)
}

/// Whether `set` (an algebra element) lies in the trace of every germ in
/// the collection.
pub fn absorbs(alg: &Subalgebra, set: &SpaceSet, germs: &[Germ]) -> Result<bool> {
    let mask = alg.atom_mask_of(set)?;
    for g in germs {
        alg.check_germ(g)?;
        if !g.in_trace(mask) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn minimal_absorber_masks(alg: &Subalgebra, germs: &[Germ]) -> Vec<u32> {
    let n = alg.atom_count();
    let hits = |mask: u32| germs.iter().all(|g| g.in_trace(mask));
    let mut out = Vec::new();
    for mask in 1..1u32 << n {
        if !hits(mask) {
            continue;
        }
        let minimal =
            (0..n as u32).all(|b| mask >> b & 1 == 0 || !hits(mask & !(1 << b)));
        if minimal {
            out.push(mask);
        }
    }
    out
}

/// The cluster-space proximity relativized to the algebra: two germ
/// collections are star-close iff every pair of algebra elements absorbing
/// them respectively is close.
///
/// Closeness is monotone in each argument (axiom 4), and absorbers form an
/// up-set, so quantifying over inclusion-minimal absorbers decides the
/// full quantification.
pub fn star_close(alg: &Subalgebra, a: &[Germ], b: &[Germ]) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("star_close needs nonempty germ collections".into()));
    }
    for g in a.iter().chain(b) {
        alg.check_germ(g)?;
    }
    let min_a = minimal_absorber_masks(alg, a);
    let min_b = minimal_absorber_masks(alg, b);
    let mut elements: HashMap<u32, SpaceSet> = HashMap::new();
    for &ma in &min_a {
        for &mb in &min_b {
            let ea = elements.entry(ma).or_insert_with(|| alg.element(ma)).clone();
            let eb = elements.entry(mb).or_insert_with(|| alg.element(mb)).clone();
            if !alg.space().close(&ea, &eb)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Fully exhaustive version of [`star_close`]: quantifies over every
/// absorbing pair of algebra elements. Exponentially slower; kept as the
/// independent oracle for small algebras.
pub fn star_close_exhaustive(alg: &Subalgebra, a: &[Germ], b: &[Germ]) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("star_close needs nonempty germ collections".into()));
    }
    let n = alg.atom_count();
    for ma in 1..1u32 << n {
        if !a.iter().all(|g| g.in_trace(ma)) {
            continue;
        }
        for mb in 1..1u32 << n {
            if !b.iter().all(|g| g.in_trace(mb)) {
                continue;
            }
            if !alg.space().close(&alg.element(ma), &alg.element(mb))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Extends a germ of one component to the coproduct algebra: the support
/// becomes the injected copies of the component support atoms. The
/// coproduct algebra's generators must include the injected component
/// generators (so the injected copies really are atoms) and the component
/// carrier.
pub fn extend_germ(
    component_alg: &Subalgebra,
    germ: &Germ,
    coproduct_alg: &Subalgebra,
    index: u32,
) -> Result<Germ> {
    component_alg.check_germ(germ)?;
    let handle = match coproduct_alg.space() {
        Space::Coproduct(h) => h,
        _ => return Err(Error::GroundMismatch("extension target must be a coproduct algebra".into())),
    };
    let mut support = 0u32;
    for i in germ.atom_indices() {
        let atom = component_alg.atoms()[i].clone();
        let injected =
            SpaceSet::Coproduct(handle.inject(index, crate::coproduct::ComponentSet::try_from(atom)?)?);
        let j = coproduct_alg
            .atoms()
            .iter()
            .position(|a| *a == injected)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "injected copy of support atom {i} is not an atom of the coproduct algebra"
                ))
            })?;
        support |= 1 << j;
    }
    Germ::new(coproduct_alg, support)
}

/// Classification of a coproduct germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GermClass {
    /// Some support atom lies inside the component with this index.
    ComponentSupported(u32),
    /// No support atom lies inside any single component: the finite
    /// witness of a cluster containing the cofinite filter.
    Tail,
}

/// Classifies a germ of a coproduct algebra by where its support lives. A
/// support atom lies inside component `a` exactly when its normal form has
/// a single explicit entry at `a` and an empty tail.
pub fn classify_germ(coproduct_alg: &Subalgebra, germ: &Germ) -> Result<GermClass> {
    coproduct_alg.check_germ(germ)?;
    if !matches!(coproduct_alg.space(), Space::Coproduct(_)) {
        return Err(Error::GroundMismatch("classification needs a coproduct algebra".into()));
    }
    let mut found: Option<u32> = None;
    for i in germ.atom_indices() {
        let atom = coproduct_alg.atoms()[i].as_coproduct()?;
        if atom.tail() == crate::coproduct::Tail::Empty && atom.explicit().len() == 1 {
            let alpha = *atom.explicit().keys().next().unwrap();
            debug_assert!(found.is_none() || found == Some(alpha), "support crosses components");
            found = Some(alpha);
        }
    }
    Ok(match found {
        Some(alpha) => GermClass::ComponentSupported(alpha),
        None => GermClass::Tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::ProximityKind;
    use crate::text::parse_region;
    use crate::Rational;

    fn rset(s: &str) -> SpaceSet {
        SpaceSet::Region(parse_region(s).unwrap())
    }

    /// The three-atom algebra on the metric line used throughout: atoms
    /// (-inf,0], (0,1), [1,inf) with closeness left~mid, mid~right.
    fn metric_three_atoms() -> Subalgebra {
        let space = Space::real(ProximityKind::Metric).unwrap();
        Subalgebra::new(
            space,
            vec![rset("(-inf,0]"), rset("[1,inf)")],
            &Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn atoms_of_two_rays() {
        let alg = metric_three_atoms();
        assert_eq!(alg.atom_count(), 3);
        let rendered: Vec<String> =
            alg.atoms().iter().map(|a| alg.space().format_set(a)).collect();
        assert_eq!(rendered, vec!["(0,1)", "(-inf,0]", "[1,inf)"]);
        assert!(alg.close_atoms(0, 1));
        assert!(alg.close_atoms(0, 2));
        assert!(!alg.close_atoms(1, 2));
    }

    #[test]
    fn single_full_generator_gives_one_atom() {
        let space = Space::real(ProximityKind::Metric).unwrap();
        let alg = Subalgebra::new(space, vec![rset("(-inf,inf)")], &Limits::default()).unwrap();
        assert_eq!(alg.atom_count(), 1);
    }

    #[test]
    fn germ_enumeration_matches_hand_count() {
        let alg = metric_three_atoms();
        let germs = enumerate_germs(&alg, GermMode::All);
        // Atoms: 0 = (0,1) [mid], 1 = (-inf,0] [left], 2 = [1,inf) [right].
        // Pairwise-close nonempty subsets: the three singletons, {mid,left},
        // {mid,right}.
        assert_eq!(germs.len(), 5);
        let supports: Vec<u32> = germs.iter().map(|g| g.support_mask()).collect();
        assert_eq!(supports, vec![0b001, 0b010, 0b011, 0b100, 0b101]);
        let maximal = enumerate_germs(&alg, GermMode::Maximal);
        assert_eq!(
            maximal.iter().map(|g| g.support_mask()).collect::<Vec<_>>(),
            vec![0b011, 0b101]
        );
    }

    #[test]
    fn germ_enumeration_matches_naive_filter() {
        let alg = metric_three_atoms();
        let germs = enumerate_germs(&alg, GermMode::All);
        // Independent naive double loop straight against the space oracle.
        let mut expected = Vec::new();
        let n = alg.atom_count();
        for mask in 1u32..1 << n {
            let mut ok = true;
            for i in 0..n {
                for j in 0..n {
                    if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                        ok &= alg
                            .space()
                            .close(&alg.atoms()[i], &alg.atoms()[j])
                            .unwrap();
                    }
                }
            }
            if ok {
                expected.push(mask);
            }
        }
        assert_eq!(
            germs.iter().map(|g| g.support_mask()).collect::<Vec<_>>(),
            expected
        );
    }

    #[test]
    fn point_germ_examples() {
        let alg = metric_three_atoms();
        let q = |s: &str| crate::text::parse_rational(s).unwrap();
        let at = |v: Rational| point_germ(&alg, &Point::Real(v)).unwrap();
        // Atom order: 0 = (0,1), 1 = (-inf,0], 2 = [1,inf).
        assert_eq!(at(q("1/2")).support_mask(), 0b001);
        assert_eq!(at(q("0")).support_mask(), 0b011);
        assert_eq!(at(q("-5")).support_mask(), 0b010);
    }

    #[test]
    fn absorption_examples() {
        let alg = metric_three_atoms();
        let germs = enumerate_germs(&alg, GermMode::All);
        let left_germ = Germ::new(&alg, 0b010).unwrap();
        let mid_germ = Germ::new(&alg, 0b001).unwrap();
        let carrier = alg.space().carrier();
        assert!(absorbs(&alg, &carrier, &germs).unwrap());
        assert!(absorbs(&alg, &rset("(-inf,0]"), &[left_germ]).unwrap());
        assert!(!absorbs(&alg, &rset("(-inf,0]"), &[mid_germ]).unwrap());
        assert!(!absorbs(&alg, &alg.space().empty_set(), &[left_germ]).unwrap());
        // Not a union of atoms:
        assert!(matches!(absorbs(&alg, &rset("[0,1/2]"), &[left_germ]), Err(Error::NotAtomUnion)));
    }

    #[test]
    fn star_close_examples() {
        let alg = metric_three_atoms();
        let left = Germ::new(&alg, 0b010).unwrap();
        let mid = Germ::new(&alg, 0b001).unwrap();
        let right = Germ::new(&alg, 0b100).unwrap();
        let left_mid = Germ::new(&alg, 0b011).unwrap();
        assert!(star_close(&alg, &[mid], &[mid]).unwrap());
        assert!(!star_close(&alg, &[left], &[right]).unwrap());
        assert!(star_close(&alg, &[left], &[left_mid]).unwrap());
    }

    #[test]
    fn star_close_agrees_with_exhaustive_oracle() {
        let alg = metric_three_atoms();
        let germs = enumerate_germs(&alg, GermMode::All);
        for a in &germs {
            for b in &germs {
                assert_eq!(
                    star_close(&alg, &[*a], &[*b]).unwrap(),
                    star_close_exhaustive(&alg, &[*a], &[*b]).unwrap(),
                );
            }
        }
    }

    #[test]
    fn trace_dichotomy_and_union_splitting() {
        let alg = metric_three_atoms();
        let n = alg.atom_count();
        let full = (1u32 << n) - 1;
        for germ in enumerate_germs(&alg, GermMode::All) {
            for mask in 0..=full {
                // Dichotomy: A or its complement is in the trace.
                assert!(germ.in_trace(mask) || germ.in_trace(full & !mask));
                // Upward closure.
                if germ.in_trace(mask) {
                    assert!(germ.in_trace(mask | 0b010));
                }
                // Union splitting.
                for other in 0..=full {
                    if germ.in_trace(mask | other) {
                        assert!(germ.in_trace(mask) || germ.in_trace(other));
                    }
                }
            }
        }
    }

    #[test]
    fn germs_reject_non_close_supports() {
        let alg = metric_three_atoms();
        assert!(Germ::new(&alg, 0b110).is_err());
        assert!(Germ::new(&alg, 0).is_err());
    }

    #[test]
    fn operations_reject_foreign_germs() {
        let alg = metric_three_atoms();
        let other = Subalgebra::new(
            Space::real(ProximityKind::Metric).unwrap(),
            vec![rset("[0,5]")],
            &Limits::default(),
        )
        .unwrap();
        let foreign = Germ::new(&other, 0b01).unwrap();
        assert!(matches!(star_close(&alg, &[foreign], &[foreign]), Err(Error::AlgebraMismatch)));
        assert!(matches!(
            absorbs(&alg, &alg.space().carrier(), &[foreign]),
            Err(Error::AlgebraMismatch)
        ));
        assert!(matches!(extend_germ(&alg, &foreign, &other, 1), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn oversized_limits_are_rejected() {
        let space = Space::real(ProximityKind::Metric).unwrap();
        let limits = Limits { max_generators: 12, max_atoms: 40 };
        assert!(matches!(
            Subalgebra::new(space, vec![], &limits),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn generator_and_atom_bounds_are_enforced() {
        let space = Space::real(ProximityKind::Metric).unwrap();
        let tight = Limits { max_generators: 1, max_atoms: 16 };
        assert!(matches!(
            Subalgebra::new(space.clone(), vec![rset("[0,1]"), rset("[2,3]")], &tight),
            Err(Error::BoundExceeded { what: "generators", .. })
        ));
        let narrow = Limits { max_generators: 12, max_atoms: 2 };
        assert!(matches!(
            Subalgebra::new(space, vec![rset("(-inf,0]"), rset("[1,inf)")], &narrow),
            Err(Error::BoundExceeded { what: "atoms", .. })
        ));
    }
}
