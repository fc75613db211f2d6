//! Coproducts of proximity spaces over finite index lists and countably
//! infinite template families.
//!
//! A set of a coproduct is finitely presented: finitely many explicit
//! per-component sets plus a tail flag. The binary tail (`Empty | Full`) is
//! the smallest family closed under complement and finite boolean
//! operations that can express cofinite data such as "contains all but
//! finitely many components".

use crate::error::{Error, Result};
use crate::regions::FiniteSubset;
use crate::spaces::{Ground, Point, Space, SpaceSet};
use crate::{RealRegion, Rational};
use num_traits::Signed;
use std::collections::{BTreeMap, BTreeSet};

/// Tail value of a coproduct set: what the set looks like at every index
/// without an explicit entry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Tail {
    #[default]
    Empty,
    Full,
}

/// A set of a single (non-coproduct) component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComponentSet {
    Region(RealRegion),
    Finite(FiniteSubset),
}

impl ComponentSet {
    pub fn is_empty(&self) -> bool {
        match self {
            ComponentSet::Region(r) => r.is_empty(),
            ComponentSet::Finite(s) => s.is_empty(),
        }
    }
}

impl From<ComponentSet> for SpaceSet {
    fn from(c: ComponentSet) -> SpaceSet {
        match c {
            ComponentSet::Region(r) => SpaceSet::Region(r),
            ComponentSet::Finite(s) => SpaceSet::Finite(s),
        }
    }
}

impl TryFrom<SpaceSet> for ComponentSet {
    type Error = Error;

    fn try_from(s: SpaceSet) -> Result<ComponentSet> {
        match s {
            SpaceSet::Region(r) => Ok(ComponentSet::Region(r)),
            SpaceSet::Finite(f) => Ok(ComponentSet::Finite(f)),
            SpaceSet::Coproduct(_) => {
                Err(Error::GroundMismatch("coproduct sets cannot nest".into()))
            }
        }
    }
}

/// A subset of a coproduct, in normal form: explicit entries differing from
/// the tail's implied value, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoproductSet {
    explicit: BTreeMap<u32, ComponentSet>,
    tail: Tail,
}

impl CoproductSet {
    pub fn explicit(&self) -> &BTreeMap<u32, ComponentSet> {
        &self.explicit
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn is_empty(&self) -> bool {
        self.tail == Tail::Empty && self.explicit.values().all(|c| c.is_empty())
    }
}

/// Components of a coproduct: a finite ordered list, or one base space
/// repeated over every natural index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Components {
    Finite(Vec<Space>),
    Template(Box<Space>),
}

/// A coproduct presentation. Closeness is componentwise-existential.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoproductHandle {
    components: Components,
}

impl CoproductHandle {
    /// Builds a finite coproduct. Nested finite coproducts are flattened;
    /// template components cannot be spliced into a finite list.
    pub fn finite(components: Vec<Space>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("a coproduct needs at least one component".into()));
        }
        let mut flat = Vec::with_capacity(components.len());
        for c in components {
            match c {
                Space::Coproduct(h) => match h.components {
                    Components::Finite(inner) => flat.extend(inner),
                    Components::Template(_) => {
                        return Err(Error::InvalidInput(
                            "a template coproduct cannot be a component of a finite coproduct".into(),
                        ))
                    }
                },
                other => flat.push(other),
            }
        }
        Ok(CoproductHandle { components: Components::Finite(flat) })
    }

    /// Builds a template coproduct: one copy of `base` for every natural
    /// index. The base must not itself be a coproduct.
    pub fn template(base: Space) -> Result<Self> {
        if matches!(base, Space::Coproduct(_)) {
            return Err(Error::InvalidInput("template base may not be a coproduct".into()));
        }
        Ok(CoproductHandle { components: Components::Template(Box::new(base)) })
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    pub fn is_template(&self) -> bool {
        matches!(self.components, Components::Template(_))
    }

    /// Number of components of a finite handle; `None` for templates.
    pub fn component_count(&self) -> Option<usize> {
        match &self.components {
            Components::Finite(v) => Some(v.len()),
            Components::Template(_) => None,
        }
    }

    /// The component at a 1-based index.
    pub fn component(&self, index: u32) -> Result<&Space> {
        if index == 0 {
            return Err(Error::InvalidIndex { index, reason: "indices are 1-based".into() });
        }
        match &self.components {
            Components::Finite(v) => v.get(index as usize - 1).ok_or(Error::InvalidIndex {
                index,
                reason: format!("coproduct has {} components", v.len()),
            }),
            Components::Template(base) => Ok(base),
        }
    }

    /// Iterates each distinct component space once.
    pub fn distinct_components(&self) -> impl Iterator<Item = &Space> {
        match &self.components {
            Components::Finite(v) => v.iter(),
            Components::Template(base) => std::slice::from_ref(base.as_ref()).iter(),
        }
    }

    fn component_empty(&self, index: u32) -> Result<ComponentSet> {
        ComponentSet::try_from(self.component(index)?.empty_set())
    }

    fn component_carrier(&self, index: u32) -> Result<ComponentSet> {
        ComponentSet::try_from(self.component(index)?.carrier())
    }

    fn implied(&self, tail: Tail, index: u32) -> Result<ComponentSet> {
        match tail {
            Tail::Empty => self.component_empty(index),
            Tail::Full => self.component_carrier(index),
        }
    }

    /// The set's value at an index, materializing the tail when implicit.
    pub fn set_at(&self, set: &CoproductSet, index: u32) -> Result<ComponentSet> {
        match set.explicit.get(&index) {
            Some(c) => Ok(c.clone()),
            None => self.implied(set.tail, index),
        }
    }

    /// Builds a coproduct set in normal form.
    pub fn make_set(&self, entries: BTreeMap<u32, ComponentSet>, tail: Tail) -> Result<CoproductSet> {
        if tail == Tail::Full && !self.is_template() {
            return Err(Error::GroundMismatch(
                "finite coproduct sets carry an Empty tail; list every component explicitly".into(),
            ));
        }
        let mut explicit = BTreeMap::new();
        for (index, set) in entries {
            let comp = self.component(index)?;
            comp.validate_set(&set.clone().into())?;
            if set != self.implied(tail, index)? {
                explicit.insert(index, set);
            }
        }
        Ok(CoproductSet { explicit, tail })
    }

    pub fn empty_set(&self) -> CoproductSet {
        CoproductSet { explicit: BTreeMap::new(), tail: Tail::Empty }
    }

    /// The full carrier as a set.
    pub fn full_set(&self) -> CoproductSet {
        match &self.components {
            Components::Finite(v) => {
                let explicit = (1..=v.len() as u32)
                    .map(|i| (i, self.component_carrier(i).expect("index in range")))
                    .collect();
                CoproductSet { explicit, tail: Tail::Empty }
            }
            Components::Template(_) => CoproductSet { explicit: BTreeMap::new(), tail: Tail::Full },
        }
    }

    pub fn validate_set(&self, set: &CoproductSet) -> Result<()> {
        if set.tail == Tail::Full && !self.is_template() {
            return Err(Error::GroundMismatch("finite coproduct sets carry an Empty tail".into()));
        }
        for (index, comp_set) in &set.explicit {
            let comp = self.component(*index)?;
            comp.validate_set(&comp_set.clone().into())?;
        }
        Ok(())
    }

    /// The canonical injection of a component set at an index.
    pub fn inject(&self, index: u32, set: ComponentSet) -> Result<CoproductSet> {
        self.make_set(BTreeMap::from([(index, set)]), Tail::Empty)
    }

    fn touched_indices(&self, sets: &[&CoproductSet]) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for s in sets {
            out.extend(s.explicit.keys().copied());
        }
        out
    }

    /// Componentwise-existential closeness: some shared index has close
    /// parts. Tails contribute one extra case: two Full tails are close
    /// (the base carrier is close to itself), anything else is not.
    pub fn close(&self, a: &CoproductSet, b: &CoproductSet) -> Result<bool> {
        for index in self.touched_indices(&[a, b]) {
            let xa = self.set_at(a, index)?;
            let xb = self.set_at(b, index)?;
            if self.component(index)?.close(&xa.into(), &xb.into())? {
                return Ok(true);
            }
        }
        Ok(a.tail == Tail::Full && b.tail == Tail::Full)
    }

    fn zip_sets<F>(&self, a: &CoproductSet, b: &CoproductSet, tail: Tail, op: F) -> Result<CoproductSet>
    where
        F: Fn(&Space, &ComponentSet, &ComponentSet) -> Result<ComponentSet>,
    {
        let mut entries = BTreeMap::new();
        for index in self.touched_indices(&[a, b]) {
            let xa = self.set_at(a, index)?;
            let xb = self.set_at(b, index)?;
            entries.insert(index, op(self.component(index)?, &xa, &xb)?);
        }
        self.make_set(entries, tail)
    }

    pub fn set_union(&self, a: &CoproductSet, b: &CoproductSet) -> Result<CoproductSet> {
        let tail = if a.tail == Tail::Full || b.tail == Tail::Full { Tail::Full } else { Tail::Empty };
        self.zip_sets(a, b, tail, |space, x, y| {
            ComponentSet::try_from(space.union_of(&x.clone().into(), &y.clone().into())?)
        })
    }

    pub fn set_intersect(&self, a: &CoproductSet, b: &CoproductSet) -> Result<CoproductSet> {
        let tail = if a.tail == Tail::Full && b.tail == Tail::Full { Tail::Full } else { Tail::Empty };
        self.zip_sets(a, b, tail, |space, x, y| {
            ComponentSet::try_from(space.intersect_of(&x.clone().into(), &y.clone().into())?)
        })
    }

    pub fn set_difference(&self, a: &CoproductSet, b: &CoproductSet) -> Result<CoproductSet> {
        let tail = if a.tail == Tail::Full && b.tail == Tail::Empty { Tail::Full } else { Tail::Empty };
        self.zip_sets(a, b, tail, |space, x, y| {
            ComponentSet::try_from(space.difference_of(&x.clone().into(), &y.clone().into())?)
        })
    }

    /// Complement flips the tail and complements every explicit entry.
    pub fn set_complement(&self, a: &CoproductSet) -> Result<CoproductSet> {
        let tail = match (a.tail, self.is_template()) {
            (Tail::Empty, true) => Tail::Full,
            (Tail::Full, _) => Tail::Empty,
            (Tail::Empty, false) => Tail::Empty,
        };
        let mut entries = BTreeMap::new();
        match &self.components {
            Components::Finite(v) => {
                // Every component is explicit in the complement of a
                // finite-handle set unless it normalizes away.
                for index in 1..=v.len() as u32 {
                    let x = self.set_at(a, index)?;
                    let co = self.component(index)?.complement_of(&x.into())?;
                    entries.insert(index, ComponentSet::try_from(co)?);
                }
            }
            Components::Template(base) => {
                for (index, x) in &a.explicit {
                    let co = base.complement_of(&x.clone().into())?;
                    entries.insert(*index, ComponentSet::try_from(co)?);
                }
            }
        }
        self.make_set(entries, tail)
    }

    /// Componentwise closure in the induced (disjoint-union) topology. The
    /// tail is preserved.
    pub fn set_closure(&self, a: &CoproductSet) -> Result<CoproductSet> {
        let mut entries = BTreeMap::new();
        for (index, x) in &a.explicit {
            let cl = self.component(*index)?.closure_of(&x.clone().into())?;
            entries.insert(*index, ComponentSet::try_from(cl)?);
        }
        self.make_set(entries, a.tail)
    }

    /// Axiom-5 witness assembled componentwise as the union of component
    /// witnesses.
    pub fn axiom5_witness(&self, a: &CoproductSet, b: &CoproductSet) -> Result<Option<SpaceSet>> {
        let mut entries = BTreeMap::new();
        for index in self.touched_indices(&[a, b]) {
            let xa: SpaceSet = self.set_at(a, index)?.into();
            let xb: SpaceSet = self.set_at(b, index)?.into();
            match self.component(index)?.axiom5_witness(&xa, &xb)? {
                Some(e) => {
                    entries.insert(index, ComponentSet::try_from(e)?);
                }
                None => return Ok(None),
            }
        }
        // Tail indices hold (empty, empty), (full, empty) or (empty, full)
        // pairs; the componentwise witnesses are empty, empty and full.
        let tail = match (a.tail, b.tail) {
            (Tail::Empty, Tail::Full) => Tail::Full,
            _ => Tail::Empty,
        };
        Ok(Some(SpaceSet::Coproduct(self.make_set(entries, tail)?)))
    }

    pub fn format_set(&self, set: &CoproductSet) -> String {
        let mut parts: Vec<String> = set
            .explicit
            .iter()
            .map(|(index, c)| {
                let comp = self.component(*index).expect("normal form has valid indices");
                format!("X{index}={}", comp.format_set(&c.clone().into()))
            })
            .collect();
        if self.is_template() {
            parts.push(format!(
                "tail={}",
                match set.tail {
                    Tail::Empty => "empty",
                    Tail::Full => "full",
                }
            ));
        }
        format!("{{{}}}", parts.join(", "))
    }
}

/// A point of a coproduct: a component index plus a point of that component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductPoint {
    pub index: u32,
    pub point: Point,
}

impl CoproductPoint {
    pub fn new(index: u32, point: Point) -> Self {
        CoproductPoint { index, point }
    }
}

fn component_point_distance(space: &Space, p: &Point, q: &Point) -> Result<Rational> {
    match space {
        Space::Primitive { ground: Ground::RealLine, .. } => match (p, q) {
            (Point::Real(x), Point::Real(y)) => Ok((x.clone() - y.clone()).abs()),
            _ => Err(Error::GroundMismatch("expected real points".into())),
        },
        Space::Primitive { ground: Ground::Finite(g), .. } => match (p, q) {
            (Point::Label(x), Point::Label(y)) => {
                g.index_of(x)?;
                g.index_of(y)?;
                Ok(if x == y { Rational::from_integer(0.into()) } else { Rational::from_integer(1.into()) })
            }
            _ => Err(Error::GroundMismatch("expected labeled points".into())),
        },
        Space::Subspace { parent, .. } => {
            space.point_set(p)?;
            space.point_set(q)?;
            component_point_distance(parent, p, q)
        }
        Space::Coproduct(_) => Err(Error::GroundMismatch("expected a component space".into())),
    }
}

/// The coproduct metric: component distance within a component, and
/// `d(x, base_a) + d(base_b, y) + 1` across components.
pub fn coproduct_metric(
    handle: &CoproductHandle,
    x: &CoproductPoint,
    y: &CoproductPoint,
    basepoints: &BTreeMap<u32, Point>,
) -> Result<Rational> {
    let cx = handle.component(x.index)?;
    let cy = handle.component(y.index)?;
    if x.index == y.index {
        return component_point_distance(cx, &x.point, &y.point);
    }
    let bx = basepoints.get(&x.index).ok_or(Error::MissingBasepoint(x.index))?;
    let by = basepoints.get(&y.index).ok_or(Error::MissingBasepoint(y.index))?;
    let dx = component_point_distance(cx, &x.point, bx)?;
    let dy = component_point_distance(cy, by, &y.point)?;
    Ok(dx + dy + Rational::from_integer(1.into()))
}

/// Report of the coproduct universal-property check on finite
/// presentations.
#[derive(Debug, Clone, serde::Serialize)]
pub struct UniversalReport {
    /// h agrees with every f_a through the canonical injections.
    pub pointwise_agrees: bool,
    /// The induced map h is a proximity map.
    pub induced_is_proximity_map: bool,
    /// Componentwise: f_a is a proximity map.
    pub component_is_proximity_map: Vec<bool>,
    /// h is a proximity map iff every f_a is.
    pub equivalence_holds: bool,
}

/// Builds the induced map out of a finite coproduct and verifies the
/// universal property on the instance: `h . i_a = f_a`, and `h` is a
/// proximity map iff every `f_a` is.
pub fn universal_property_check(
    components: &[Space],
    target: &Space,
    maps: &[BTreeMap<String, String>],
) -> Result<UniversalReport> {
    if components.len() != maps.len() {
        return Err(Error::InvalidInput(format!(
            "{} components but {} maps",
            components.len(),
            maps.len()
        )));
    }
    let (tg, trel) = crate::spaces::effective_relation(target)?;
    let mut grounds = Vec::new();
    let mut relations = Vec::new();
    let mut images: Vec<Vec<u32>> = Vec::new();
    for (space, f) in components.iter().zip(maps) {
        let (g, rel) = crate::spaces::effective_relation(space)?;
        let mut image = Vec::with_capacity(g.len() as usize);
        for label in g.labels() {
            let out = f.get(label).ok_or_else(|| Error::MapNotTotal(label.clone()))?;
            image.push(tg.index_of(out)?);
        }
        grounds.push(g);
        relations.push(rel);
        images.push(image);
    }

    let component_is_proximity_map: Vec<bool> = (0..components.len())
        .map(|k| {
            let rel = &relations[k];
            let image = &images[k];
            (0..rel.size()).all(|i| {
                (0..rel.size()).all(|j| {
                    !rel.related(i, j) || trel.related(image[i as usize], image[j as usize])
                })
            })
        })
        .collect();

    // h on the disjoint union: (k, i) -> images[k][i]. Points in different
    // components are never close, so h is a proximity map iff every
    // componentwise pair check passes.
    let induced_is_proximity_map = component_is_proximity_map.iter().all(|ok| *ok);

    // h . i_a = f_a holds by construction; verify pointwise anyway.
    let pointwise_agrees = (0..components.len()).all(|k| {
        grounds[k]
            .labels()
            .iter()
            .enumerate()
            .all(|(i, label)| {
                maps[k]
                    .get(label)
                    .and_then(|out| tg.index_of(out).ok())
                    .is_some_and(|t| t == images[k][i])
            })
    });

    let equivalence_holds =
        induced_is_proximity_map == component_is_proximity_map.iter().all(|ok| *ok);

    Ok(UniversalReport {
        pointwise_agrees,
        induced_is_proximity_map,
        component_is_proximity_map,
        equivalence_holds,
    })
}

/// Convenience constructors used across suites and tests.
impl CoproductHandle {
    /// Injects a region into a real-line component.
    pub fn inject_region(&self, index: u32, region: RealRegion) -> Result<CoproductSet> {
        self.inject(index, ComponentSet::Region(region))
    }

    /// The full carrier of one component as a coproduct set.
    pub fn carrier_of(&self, index: u32) -> Result<CoproductSet> {
        let c = self.component_carrier(index)?;
        self.inject(index, c)
    }
}
