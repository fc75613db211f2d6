//! Proximity-space presentations and their decidable closeness oracles.
//!
//! A [`Space`] is either a primitive presentation (a ground model plus a
//! proximity kind), a coproduct of such presentations, or a subspace of
//! another space. Every oracle is a pure function of the presentation.

use crate::coproduct::{ComponentSet, CoproductHandle, CoproductSet};
use crate::error::{Error, Result};
use crate::regions::{Distance, FiniteSubset, Region};
use crate::scalar::half;
use crate::{RealRegion, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Ground model of a primitive space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ground {
    RealLine,
    Finite(FiniteGround),
}

/// A finite labeled ground set. At most 64 points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGround {
    labels: Vec<String>,
}

impl FiniteGround {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyGround);
        }
        if labels.len() > 64 {
            return Err(Error::GroundTooLarge { actual: labels.len(), limit: 64 });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteGround { labels })
    }

    pub fn len(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<u32> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u32)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn label(&self, index: u32) -> &str {
        &self.labels[index as usize]
    }
}

/// A reflexive symmetric relation on the points of a finite ground,
/// presenting closeness of singletons. Closeness of finite sets decomposes
/// to point pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointRelation {
    rows: Vec<u64>,
}

impl PointRelation {
    pub fn identity(n: u32) -> Self {
        PointRelation { rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    /// Builds the relation from unordered pairs. Reflexive pairs are
    /// implicit and symmetry is implied.
    pub fn from_pairs(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut rel = PointRelation::identity(n);
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "relation pair ({i},{j}) out of range for {n} points"
                )));
            }
            rel.rows[i as usize] |= 1 << j;
            rel.rows[j as usize] |= 1 << i;
        }
        Ok(rel)
    }

    pub fn size(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn related(&self, i: u32, j: u32) -> bool {
        self.rows[i as usize] >> j & 1 == 1
    }

    /// All points related to some point of `bits`.
    pub fn neighborhood(&self, bits: u64) -> u64 {
        let mut out = 0;
        for (i, row) in self.rows.iter().enumerate() {
            if bits >> i & 1 == 1 {
                out |= row;
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| *row == 1 << i)
    }

    /// Reflexive symmetric relations are proximities exactly when they are
    /// equivalence relations, so transitivity is the interesting test.
    pub fn is_equivalence(&self) -> bool {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                if self.related(i, j) && self.rows[j as usize] & !self.rows[i as usize] != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// The named closeness rules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProximityKind {
    Discrete,
    Metric,
    Standard,
    Aleksandroff,
    StoneCech,
    FiniteRelation(PointRelation),
}

impl ProximityKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProximityKind::Discrete => "discrete",
            ProximityKind::Metric => "metric",
            ProximityKind::Standard => "standard",
            ProximityKind::Aleksandroff => "aleksandroff",
            ProximityKind::StoneCech => "stonecech",
            ProximityKind::FiniteRelation(_) => "finite-relation",
        }
    }
}

/// A set of a space: a region of the line, a subset of a finite ground, or
/// a coproduct set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpaceSet {
    Region(RealRegion),
    Finite(FiniteSubset),
    Coproduct(CoproductSet),
}

impl SpaceSet {
    pub fn is_empty(&self) -> bool {
        match self {
            SpaceSet::Region(r) => r.is_empty(),
            SpaceSet::Finite(s) => s.is_empty(),
            SpaceSet::Coproduct(c) => c.is_empty(),
        }
    }

    pub fn as_region(&self) -> Result<&RealRegion> {
        match self {
            SpaceSet::Region(r) => Ok(r),
            _ => Err(Error::GroundMismatch("expected a region of the real line".into())),
        }
    }

    pub fn as_finite(&self) -> Result<&FiniteSubset> {
        match self {
            SpaceSet::Finite(s) => Ok(s),
            _ => Err(Error::GroundMismatch("expected a finite subset".into())),
        }
    }

    pub fn as_coproduct(&self) -> Result<&CoproductSet> {
        match self {
            SpaceSet::Coproduct(c) => Ok(c),
            _ => Err(Error::GroundMismatch("expected a coproduct set".into())),
        }
    }
}

impl From<RealRegion> for SpaceSet {
    fn from(r: RealRegion) -> Self {
        SpaceSet::Region(r)
    }
}

impl From<FiniteSubset> for SpaceSet {
    fn from(s: FiniteSubset) -> Self {
        SpaceSet::Finite(s)
    }
}

impl From<CoproductSet> for SpaceSet {
    fn from(c: CoproductSet) -> Self {
        SpaceSet::Coproduct(c)
    }
}

/// A point of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Point {
    Real(Rational),
    Label(String),
    Component { index: u32, inner: Box<Point> },
}

impl Point {
    pub fn real(q: Rational) -> Point {
        Point::Real(q)
    }

    pub fn label(l: impl Into<String>) -> Point {
        Point::Label(l.into())
    }

    pub fn component(index: u32, inner: Point) -> Point {
        Point::Component { index, inner: Box::new(inner) }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(q) => write!(f, "{q}"),
            Point::Label(l) => write!(f, "{l}"),
            Point::Component { index, inner } => write!(f, "X{index}:{inner}"),
        }
    }
}

/// A proximity-space presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    Primitive { ground: Ground, kind: ProximityKind },
    Coproduct(CoproductHandle),
    Subspace { parent: Box<Space>, carrier: Box<SpaceSet> },
}

impl Space {
    /// A built-in kind on the real line.
    pub fn real(kind: ProximityKind) -> Result<Space> {
        if matches!(kind, ProximityKind::FiniteRelation(_)) {
            return Err(Error::InvalidInput(
                "finite-relation requires a finite ground".into(),
            ));
        }
        Ok(Space::Primitive { ground: Ground::RealLine, kind })
    }

    /// A kind on a finite labeled ground. The Aleksandroff kind is only
    /// defined on the real-line model.
    pub fn finite(ground: FiniteGround, kind: ProximityKind) -> Result<Space> {
        match &kind {
            ProximityKind::Aleksandroff => {
                return Err(Error::InvalidInput(
                    "aleksandroff is only available on the real line".into(),
                ))
            }
            ProximityKind::FiniteRelation(rel) if rel.size() != ground.len() => {
                return Err(Error::InvalidInput(format!(
                    "relation on {} points does not match ground of {} labels",
                    rel.size(),
                    ground.len()
                )))
            }
            _ => {}
        }
        Ok(Space::Primitive { ground: Ground::Finite(ground), kind })
    }

    pub fn finite_relation(labels: Vec<String>, pairs: &[(String, String)]) -> Result<Space> {
        let ground = FiniteGround::new(labels)?;
        let idx_pairs = pairs
            .iter()
            .map(|(a, b)| Ok((ground.index_of(a)?, ground.index_of(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let rel = PointRelation::from_pairs(ground.len(), &idx_pairs)?;
        Space::finite(ground, ProximityKind::FiniteRelation(rel))
    }

    pub fn coproduct(components: Vec<Space>) -> Result<Space> {
        Ok(Space::Coproduct(CoproductHandle::finite(components)?))
    }

    pub fn template(base: Space) -> Result<Space> {
        Ok(Space::Coproduct(CoproductHandle::template(base)?))
    }

    pub fn as_coproduct(&self) -> Result<&CoproductHandle> {
        match self {
            Space::Coproduct(h) => Ok(h),
            _ => Err(Error::GroundMismatch("expected a coproduct space".into())),
        }
    }

    /// The full carrier as a set.
    pub fn carrier(&self) -> SpaceSet {
        match self {
            Space::Primitive { ground: Ground::RealLine, .. } => SpaceSet::Region(Region::full()),
            Space::Primitive { ground: Ground::Finite(g), .. } => {
                SpaceSet::Finite(FiniteSubset::full(g.len()))
            }
            Space::Coproduct(h) => SpaceSet::Coproduct(h.full_set()),
            Space::Subspace { carrier, .. } => (**carrier).clone(),
        }
    }

    pub fn empty_set(&self) -> SpaceSet {
        match self.underlying() {
            Space::Primitive { ground: Ground::RealLine, .. } => SpaceSet::Region(Region::empty()),
            Space::Primitive { ground: Ground::Finite(g), .. } => {
                SpaceSet::Finite(FiniteSubset::empty(g.len()))
            }
            Space::Coproduct(h) => SpaceSet::Coproduct(h.empty_set()),
            Space::Subspace { .. } => unreachable!(),
        }
    }

    /// The primitive or coproduct space a subspace chain bottoms out in.
    fn underlying(&self) -> &Space {
        match self {
            Space::Subspace { parent, .. } => parent.underlying(),
            other => other,
        }
    }

    pub fn validate_set(&self, set: &SpaceSet) -> Result<()> {
        match (self, set) {
            (Space::Primitive { ground: Ground::RealLine, .. }, SpaceSet::Region(_)) => Ok(()),
            (Space::Primitive { ground: Ground::Finite(g), .. }, SpaceSet::Finite(s)) => {
                if s.size() == g.len() {
                    Ok(())
                } else {
                    Err(Error::GroundMismatch(format!(
                        "subset over {} points used on a ground of {} labels",
                        s.size(),
                        g.len()
                    )))
                }
            }
            (Space::Coproduct(h), SpaceSet::Coproduct(c)) => h.validate_set(c),
            (Space::Subspace { parent, carrier }, s) => {
                parent.validate_set(s)?;
                if parent.is_subset_of(s, carrier)? {
                    Ok(())
                } else {
                    Err(Error::GroundMismatch("set is not contained in the subspace carrier".into()))
                }
            }
            _ => Err(Error::GroundMismatch("set shape does not match the space's ground".into())),
        }
    }

    /// The closeness oracle.
    pub fn close(&self, a: &SpaceSet, b: &SpaceSet) -> Result<bool> {
        self.validate_set(a)?;
        self.validate_set(b)?;
        self.close_unchecked(a, b)
    }

    pub(crate) fn close_unchecked(&self, a: &SpaceSet, b: &SpaceSet) -> Result<bool> {
        match self {
            Space::Primitive { ground: Ground::RealLine, kind } => {
                let (x, y) = (a.as_region()?, b.as_region()?);
                Ok(match kind {
                    ProximityKind::Discrete => !x.intersect(y).is_empty(),
                    ProximityKind::Metric => x.distance(y).is_zero(),
                    ProximityKind::Standard | ProximityKind::StoneCech => {
                        !x.closure().intersect(&y.closure()).is_empty()
                    }
                    // Non-compactness is relative compactness of the closure;
                    // for a region that is exactly unboundedness.
                    ProximityKind::Aleksandroff => {
                        (!x.is_bounded() && !y.is_bounded())
                            || !x.closure().intersect(&y.closure()).is_empty()
                    }
                    ProximityKind::FiniteRelation(_) => unreachable!(),
                })
            }
            Space::Primitive { ground: Ground::Finite(_), kind } => {
                let (x, y) = (a.as_finite()?, b.as_finite()?);
                Ok(match kind {
                    ProximityKind::FiniteRelation(rel) => {
                        rel.neighborhood(x.bits()) & y.bits() != 0
                    }
                    // All other kinds reduce to intersection on a finite
                    // discrete ground.
                    _ => !x.intersect(y).is_empty(),
                })
            }
            Space::Coproduct(h) => h.close(a.as_coproduct()?, b.as_coproduct()?),
            Space::Subspace { parent, .. } => parent.close_unchecked(a, b),
        }
    }

    /// Strong inclusion `b << a`: b is not close to the complement of a.
    pub fn strong_inclusion(&self, b: &SpaceSet, a: &SpaceSet) -> Result<bool> {
        let outside = self.complement_of(a)?;
        Ok(!self.close(b, &outside)?)
    }

    /// Complement relative to this space's carrier.
    pub fn complement_of(&self, set: &SpaceSet) -> Result<SpaceSet> {
        self.validate_set(set)?;
        match self {
            Space::Primitive { ground: Ground::RealLine, .. } => {
                Ok(SpaceSet::Region(set.as_region()?.complement()))
            }
            Space::Primitive { ground: Ground::Finite(_), .. } => {
                Ok(SpaceSet::Finite(set.as_finite()?.complement()))
            }
            Space::Coproduct(h) => Ok(SpaceSet::Coproduct(h.set_complement(set.as_coproduct()?)?)),
            Space::Subspace { parent, carrier } => parent.difference_of(carrier, set),
        }
    }

    pub fn union_of(&self, a: &SpaceSet, b: &SpaceSet) -> Result<SpaceSet> {
        match (a, b) {
            (SpaceSet::Region(x), SpaceSet::Region(y)) => Ok(SpaceSet::Region(x.union(y))),
            (SpaceSet::Finite(x), SpaceSet::Finite(y)) => Ok(SpaceSet::Finite(x.union(y))),
            (SpaceSet::Coproduct(x), SpaceSet::Coproduct(y)) => {
                let h = self.underlying().as_coproduct()?;
                Ok(SpaceSet::Coproduct(h.set_union(x, y)?))
            }
            _ => Err(Error::GroundMismatch("mismatched set shapes".into())),
        }
    }

    pub fn intersect_of(&self, a: &SpaceSet, b: &SpaceSet) -> Result<SpaceSet> {
        match (a, b) {
            (SpaceSet::Region(x), SpaceSet::Region(y)) => Ok(SpaceSet::Region(x.intersect(y))),
            (SpaceSet::Finite(x), SpaceSet::Finite(y)) => Ok(SpaceSet::Finite(x.intersect(y))),
            (SpaceSet::Coproduct(x), SpaceSet::Coproduct(y)) => {
                let h = self.underlying().as_coproduct()?;
                Ok(SpaceSet::Coproduct(h.set_intersect(x, y)?))
            }
            _ => Err(Error::GroundMismatch("mismatched set shapes".into())),
        }
    }

    pub fn difference_of(&self, a: &SpaceSet, b: &SpaceSet) -> Result<SpaceSet> {
        match (a, b) {
            (SpaceSet::Region(x), SpaceSet::Region(y)) => Ok(SpaceSet::Region(x.difference(y))),
            (SpaceSet::Finite(x), SpaceSet::Finite(y)) => Ok(SpaceSet::Finite(x.difference(y))),
            (SpaceSet::Coproduct(x), SpaceSet::Coproduct(y)) => {
                let h = self.underlying().as_coproduct()?;
                Ok(SpaceSet::Coproduct(h.set_difference(x, y)?))
            }
            _ => Err(Error::GroundMismatch("mismatched set shapes".into())),
        }
    }

    pub fn is_subset_of(&self, a: &SpaceSet, b: &SpaceSet) -> Result<bool> {
        Ok(self.difference_of(a, b)?.is_empty())
    }

    /// Closure in the topology induced by the proximity.
    pub fn closure_of(&self, set: &SpaceSet) -> Result<SpaceSet> {
        self.validate_set(set)?;
        match self {
            Space::Primitive { ground: Ground::RealLine, kind } => {
                let r = set.as_region()?;
                Ok(SpaceSet::Region(match kind {
                    // The discrete proximity induces the discrete topology.
                    ProximityKind::Discrete => r.clone(),
                    _ => r.closure(),
                }))
            }
            Space::Primitive { ground: Ground::Finite(_), kind } => {
                let s = set.as_finite()?;
                Ok(SpaceSet::Finite(match kind {
                    ProximityKind::FiniteRelation(rel) => {
                        // Fixpoint of the neighborhood map: the smallest
                        // closed superset.
                        let mut bits = s.bits();
                        loop {
                            let next = rel.neighborhood(bits);
                            if next == bits {
                                break;
                            }
                            bits = next;
                        }
                        FiniteSubset::from_bits(s.size(), bits)
                    }
                    _ => *s,
                }))
            }
            Space::Coproduct(h) => Ok(SpaceSet::Coproduct(h.set_closure(set.as_coproduct()?)?)),
            Space::Subspace { parent, carrier } => {
                let cl = parent.closure_of(set)?;
                parent.intersect_of(&cl, carrier)
            }
        }
    }

    /// Subspace presentation on a nonempty carrier; closeness delegates to
    /// this space.
    pub fn subspace(&self, carrier: SpaceSet) -> Result<Space> {
        if carrier.is_empty() {
            return Err(Error::InvalidInput("subspace carrier may not be empty".into()));
        }
        self.validate_set(&carrier)?;
        Ok(Space::Subspace { parent: Box::new(self.clone()), carrier: Box::new(carrier) })
    }

    /// The singleton set at a point.
    pub fn point_set(&self, p: &Point) -> Result<SpaceSet> {
        let set = match (self.underlying(), p) {
            (Space::Primitive { ground: Ground::RealLine, .. }, Point::Real(q)) => {
                SpaceSet::Region(Region::point(q.clone()))
            }
            (Space::Primitive { ground: Ground::Finite(g), .. }, Point::Label(l)) => {
                SpaceSet::Finite(FiniteSubset::singleton(g.len(), g.index_of(l)?))
            }
            (Space::Coproduct(h), Point::Component { index, inner }) => {
                let comp = h.component(*index)?;
                let inner_set = comp.point_set(inner)?;
                SpaceSet::Coproduct(h.inject(*index, ComponentSet::try_from(inner_set)?)?)
            }
            _ => return Err(Error::GroundMismatch("point shape does not match the space".into())),
        };
        self.validate_set(&set)?;
        Ok(set)
    }

    /// Renders a set for reports: region grammar on the line, labels on
    /// finite grounds, indexed components on coproducts.
    pub fn format_set(&self, set: &SpaceSet) -> String {
        match (self.underlying(), set) {
            (_, SpaceSet::Region(r)) => format!("{r}"),
            (Space::Primitive { ground: Ground::Finite(g), .. }, SpaceSet::Finite(s)) => {
                let names: Vec<&str> = s.indices().map(|i| g.label(i)).collect();
                format!("{{{}}}", names.join(","))
            }
            (_, SpaceSet::Finite(s)) => {
                let names: Vec<String> = s.indices().map(|i| i.to_string()).collect();
                format!("{{{}}}", names.join(","))
            }
            (Space::Coproduct(h), SpaceSet::Coproduct(c)) => h.format_set(c),
            (_, SpaceSet::Coproduct(c)) => format!("{c:?}"),
        }
    }

    pub fn is_separated(&self) -> SeparatedVerdict {
        match self {
            Space::Primitive { ground: Ground::RealLine, .. } => SeparatedVerdict {
                separated: true,
                rationale: "singleton closeness reduces to point equality in every built-in real-line kind".into(),
            },
            Space::Primitive { ground: Ground::Finite(g), kind } => match kind {
                ProximityKind::FiniteRelation(rel) => {
                    if rel.is_identity() {
                        SeparatedVerdict {
                            separated: true,
                            rationale: "relation restricted to singletons is the identity".into(),
                        }
                    } else {
                        let (i, j) = first_offdiagonal(rel);
                        SeparatedVerdict {
                            separated: false,
                            rationale: format!(
                                "distinct points {} and {} are close",
                                g.label(i),
                                g.label(j)
                            ),
                        }
                    }
                }
                _ => SeparatedVerdict {
                    separated: true,
                    rationale: "singletons of a finite ground are close iff they intersect".into(),
                },
            },
            Space::Coproduct(h) => {
                let verdicts: Vec<SeparatedVerdict> =
                    h.distinct_components().map(|c| c.is_separated()).collect();
                let separated = verdicts.iter().all(|v| v.separated);
                SeparatedVerdict {
                    separated,
                    rationale: "a coproduct is separated iff every component is separated".into(),
                }
            }
            Space::Subspace { parent, carrier } => {
                let pv = parent.is_separated();
                if pv.separated {
                    SeparatedVerdict {
                        separated: true,
                        rationale: "subspace of a separated space".into(),
                    }
                } else if let (Space::Primitive { ground: Ground::Finite(g), kind: ProximityKind::FiniteRelation(rel) }, SpaceSet::Finite(s)) =
                    (parent.underlying(), carrier.as_ref())
                {
                    let _ = g;
                    let sep = s
                        .indices()
                        .all(|i| s.indices().all(|j| i == j || !rel.related(i, j)));
                    SeparatedVerdict {
                        separated: sep,
                        rationale: "relation restricted to the carrier's singletons".into(),
                    }
                } else {
                    pv
                }
            }
        }
    }

    /// Checks axioms (1)-(4) on set triples and axiom (5) with validated
    /// constructive witnesses. Exhaustive on finite grounds of at most 5
    /// points, randomized elsewhere.
    pub fn verify_axioms(&self, budget: &AxiomBudget, seed: u64) -> AxiomReport {
        match self.underlying() {
            Space::Primitive { ground: Ground::Finite(g), .. } if g.len() <= 5 => {
                self.verify_axioms_exhaustive()
            }
            _ => self.verify_axioms_sampled(budget, seed),
        }
    }

    fn verify_axioms_exhaustive(&self) -> AxiomReport {
        let n = match self.underlying() {
            Space::Primitive { ground: Ground::Finite(g), .. } => g.len(),
            _ => unreachable!(),
        };
        let all: Vec<SpaceSet> = (0..1u64 << n)
            .map(|bits| SpaceSet::Finite(FiniteSubset::from_bits(n, bits)))
            .collect();
        let mut report = AxiomReport::new(true);
        for a in &all {
            for b in &all {
                report.check_pair_axioms(self, a, b);
                if !self.close(a, b).unwrap_or(false) {
                    let witness = self.axiom5_witness(a, b).unwrap_or(None);
                    report.check_axiom5(self, a, b, witness);
                }
                for c in &all {
                    report.check_axiom4(self, a, b, c);
                }
            }
        }
        report
    }

    fn verify_axioms_sampled(&self, budget: &AxiomBudget, seed: u64) -> AxiomReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = AxiomReport::new(false);
        for _ in 0..budget.triples {
            let a = crate::sampling::random_set(&mut rng, self);
            let b = crate::sampling::random_set(&mut rng, self);
            let c = crate::sampling::random_set(&mut rng, self);
            report.check_pair_axioms(self, &a, &b);
            report.check_axiom4(self, &a, &b, &c);
        }
        let mut attempts = 0usize;
        let max_attempts = budget.axiom5_pairs.saturating_mul(50).max(1000);
        while report.axiom5_pairs_validated < budget.axiom5_pairs && attempts < max_attempts {
            attempts += 1;
            let a = crate::sampling::random_set(&mut rng, self);
            let b = crate::sampling::random_set(&mut rng, self);
            match self.close(&a, &b) {
                Ok(false) => {
                    let witness = self.axiom5_witness(&a, &b).unwrap_or(None);
                    report.check_axiom5(self, &a, &b, witness);
                }
                _ => continue,
            }
        }
        report
    }

    /// Produces a witness set `E` for axiom (5) on a non-close pair:
    /// `A` is not close to `E` and the complement of `E` is not close to
    /// `B`. Returns `None` when the bounded search finds none (on finite
    /// relations, exhaustively: none exists). Witnesses are validated by
    /// the caller, never trusted.
    pub fn axiom5_witness(&self, a: &SpaceSet, b: &SpaceSet) -> Result<Option<SpaceSet>> {
        self.validate_set(a)?;
        self.validate_set(b)?;
        if a.is_empty() {
            return Ok(Some(self.carrier()));
        }
        if b.is_empty() {
            return Ok(Some(self.empty_set()));
        }
        match self {
            Space::Primitive { ground: Ground::RealLine, kind } => {
                let (x, y) = (a.as_region()?, b.as_region()?);
                Ok(match kind {
                    ProximityKind::Discrete => Some(b.clone()),
                    ProximityKind::Metric | ProximityKind::Standard | ProximityKind::StoneCech => {
                        halo_witness(x, y).map(SpaceSet::Region)
                    }
                    ProximityKind::Aleksandroff => {
                        let gap = match x.distance(y) {
                            Distance::Finite(g) if g > Rational::from_integer(0.into()) => g,
                            _ => return Ok(None),
                        };
                        let r = half(gap);
                        if x.is_bounded() {
                            Some(SpaceSet::Region(x.halo(&r, false).complement()))
                        } else if y.is_bounded() {
                            Some(SpaceSet::Region(y.halo(&r, true)))
                        } else {
                            None
                        }
                    }
                    ProximityKind::FiniteRelation(_) => unreachable!(),
                })
            }
            Space::Primitive { ground: Ground::Finite(g), kind } => match kind {
                ProximityKind::FiniteRelation(_) => {
                    let n = g.len();
                    if n > 20 {
                        return Err(Error::BoundExceeded {
                            what: "axiom-5 exhaustive witness search ground",
                            actual: n as usize,
                            limit: 20,
                        });
                    }
                    for bits in 0..1u64 << n {
                        let e = SpaceSet::Finite(FiniteSubset::from_bits(n, bits));
                        let co_e = self.complement_of(&e)?;
                        if !self.close(a, &e)? && !self.close(&co_e, b)? {
                            return Ok(Some(e));
                        }
                    }
                    Ok(None)
                }
                _ => Ok(Some(b.clone())),
            },
            Space::Coproduct(h) => h.axiom5_witness(a.as_coproduct()?, b.as_coproduct()?),
            Space::Subspace { parent, carrier } => {
                match parent.axiom5_witness(a, b)? {
                    Some(e) => Ok(Some(parent.intersect_of(&e, carrier)?)),
                    None => Ok(None),
                }
            }
        }
    }
}

/// Open-halo witness for the metric and standard kinds: the complement of
/// the open `gap/2` neighborhood of `a`.
fn halo_witness(a: &RealRegion, b: &RealRegion) -> Option<RealRegion> {
    match a.distance(b) {
        Distance::Finite(g) if g > Rational::from_integer(0.into()) => {
            Some(a.halo(&half(g), false).complement())
        }
        _ => None,
    }
}

fn first_offdiagonal(rel: &PointRelation) -> (u32, u32) {
    let n = rel.size();
    for i in 0..n {
        for j in 0..n {
            if i != j && rel.related(i, j) {
                return (i, j);
            }
        }
    }
    unreachable!("called only on non-identity relations")
}

/// Sampling budget for randomized axiom verification.
#[derive(Debug, Clone)]
pub struct AxiomBudget {
    pub triples: usize,
    pub axiom5_pairs: usize,
}

impl Default for AxiomBudget {
    fn default() -> Self {
        AxiomBudget { triples: 2000, axiom5_pairs: 400 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomFailure {
    pub axiom: u8,
    pub detail: String,
}

/// Outcome of `verify_axioms`. Failures are report entries, not errors.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub exhaustive: bool,
    pub triples_checked: usize,
    pub pairs_checked: usize,
    pub axiom5_pairs_validated: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    fn new(exhaustive: bool) -> Self {
        AxiomReport {
            exhaustive,
            triples_checked: 0,
            pairs_checked: 0,
            axiom5_pairs_validated: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, axiom: u8, detail: String) {
        if self.failures.len() < 32 {
            self.failures.push(AxiomFailure { axiom, detail });
        }
    }

    fn check_pair_axioms(&mut self, space: &Space, a: &SpaceSet, b: &SpaceSet) {
        self.pairs_checked += 1;
        let ab = space.close(a, b).unwrap_or(false);
        let ba = space.close(b, a).unwrap_or(false);
        if ab != ba {
            self.fail(1, format!(
                "symmetry broken for A={}, B={}",
                space.format_set(a),
                space.format_set(b)
            ));
        }
        if ab && (a.is_empty() || b.is_empty()) {
            self.fail(2, format!(
                "close pair with an empty side: A={}, B={}",
                space.format_set(a),
                space.format_set(b)
            ));
        }
        if let Ok(meet) = space.intersect_of(a, b) {
            if !meet.is_empty() && !ab {
                self.fail(3, format!(
                    "intersecting but not close: A={}, B={}",
                    space.format_set(a),
                    space.format_set(b)
                ));
            }
        }
    }

    fn check_axiom4(&mut self, space: &Space, a: &SpaceSet, b: &SpaceSet, c: &SpaceSet) {
        self.triples_checked += 1;
        let Ok(bc) = space.union_of(b, c) else { return };
        let lhs = space.close(a, &bc).unwrap_or(false);
        let rhs = space.close(a, b).unwrap_or(false) || space.close(a, c).unwrap_or(false);
        if lhs != rhs {
            self.fail(4, format!(
                "union axiom broken for A={}, B={}, C={}",
                space.format_set(a),
                space.format_set(b),
                space.format_set(c)
            ));
        }
    }

    fn check_axiom5(&mut self, space: &Space, a: &SpaceSet, b: &SpaceSet, witness: Option<SpaceSet>) {
        match witness {
            None => self.fail(5, format!(
                "no witness set for non-close pair A={}, B={}",
                space.format_set(a),
                space.format_set(b)
            )),
            Some(e) => {
                let ok = (|| -> Result<bool> {
                    let co_e = space.complement_of(&e)?;
                    Ok(!space.close(a, &e)? && !space.close(&co_e, b)?)
                })()
                .unwrap_or(false);
                if ok {
                    self.axiom5_pairs_validated += 1;
                } else {
                    self.fail(5, format!(
                        "witness E={} failed validation for A={}, B={}",
                        space.format_set(&e),
                        space.format_set(a),
                        space.format_set(b)
                    ));
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparatedVerdict {
    pub separated: bool,
    pub rationale: String,
}

/// Effective point relation of a finite-ground presentation: the declared
/// relation, or the identity for the intersection-based kinds.
pub fn effective_relation(space: &Space) -> Result<(FiniteGround, PointRelation)> {
    match space {
        Space::Primitive { ground: Ground::Finite(g), kind } => {
            let rel = match kind {
                ProximityKind::FiniteRelation(rel) => rel.clone(),
                _ => PointRelation::identity(g.len()),
            };
            Ok((g.clone(), rel))
        }
        _ => Err(Error::GroundMismatch("expected a finite-ground presentation".into())),
    }
}

/// Checks that `f` (a total map on the source ground) is a proximity map
/// between two finite presentations: related points map to related points.
pub fn proximity_map_check(
    f: &BTreeMap<String, String>,
    source: &Space,
    target: &Space,
) -> Result<bool> {
    let (sg, srel) = effective_relation(source)?;
    let (tg, trel) = effective_relation(target)?;
    let mut image = Vec::with_capacity(sg.len() as usize);
    for label in sg.labels() {
        let out = f.get(label).ok_or_else(|| Error::MapNotTotal(label.clone()))?;
        image.push(tg.index_of(out)?);
    }
    for i in 0..sg.len() {
        for j in 0..sg.len() {
            if srel.related(i, j) && !trel.related(image[i as usize], image[j as usize]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
