//! Delta-coverings, multiplicity, the constructive refinement step of the
//! dimension lemma, brute-force proximity dimension for finite spaces, and
//! checkable dimension certificates.
//!
//! A delta-covering carries its witnesses explicitly: a bare A-family is
//! not accepted, so certificates are checkable in one pass. Lower bounds on
//! the dimension of infinite models are never claimed; a failed search is
//! evidence only.

use crate::error::{Error, Result};
use crate::germs::{Limits, Subalgebra};
use crate::spaces::{effective_relation, FiniteGround, Ground, PointRelation, ProximityKind, Space, SpaceSet};
use serde::Serialize;

/// A delta-covering: pairs `(A_i, B_i)` with the `B_i` covering the
/// carrier and `B_i << A_i` (strong inclusion) for every `i`.
#[derive(Debug, Clone)]
pub struct DeltaCovering {
    pub space: Space,
    pub pairs: Vec<(SpaceSet, SpaceSet)>,
}

impl DeltaCovering {
    pub fn a_sets(&self) -> impl Iterator<Item = &SpaceSet> {
        self.pairs.iter().map(|(a, _)| a)
    }

    pub fn b_sets(&self) -> impl Iterator<Item = &SpaceSet> {
        self.pairs.iter().map(|(_, b)| b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum CoveringViolation {
    /// The witnesses fail to cover; the missing part is reported in the
    /// region grammar.
    CoverageGap { missing: String },
    /// `B_i` is close to the complement of `A_i`.
    NotStronglyIncluded { index: usize },
    InvalidSet { index: usize, message: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub violations: Vec<CoveringViolation>,
}

impl CoveringReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks carrier coverage of the witnesses exactly and strong inclusion
/// of every pair. Violations are report entries, not errors.
pub fn validate_covering(c: &DeltaCovering) -> CoveringReport {
    let mut violations = Vec::new();
    let mut union = c.space.empty_set();
    for (i, (a, b)) in c.pairs.iter().enumerate() {
        if let Err(e) = c.space.validate_set(a).and_then(|_| c.space.validate_set(b)) {
            violations.push(CoveringViolation::InvalidSet { index: i, message: e.to_string() });
            continue;
        }
        match c.space.strong_inclusion(b, a) {
            Ok(true) => {}
            Ok(false) => violations.push(CoveringViolation::NotStronglyIncluded { index: i }),
            Err(e) => {
                violations.push(CoveringViolation::InvalidSet { index: i, message: e.to_string() })
            }
        }
        union = c.space.union_of(&union, b).expect("validated sets share the space");
    }
    match c.space.difference_of(&c.space.carrier(), &union) {
        Ok(missing) if missing.is_empty() => {}
        Ok(missing) => violations.push(CoveringViolation::CoverageGap {
            missing: c.space.format_set(&missing),
        }),
        Err(e) => violations.push(CoveringViolation::InvalidSet { index: 0, message: e.to_string() }),
    }
    CoveringReport { violations }
}

/// The largest number of listed sets containing a common point. Duplicates
/// count. Exact: on finite grounds it is a per-point maximum, elsewhere it
/// is the per-atom maximum over the subalgebra the sets generate.
pub fn multiplicity(space: &Space, sets: &[SpaceSet], limits: &Limits) -> Result<u32> {
    if sets.is_empty() {
        return Err(Error::InvalidInput("multiplicity of an empty family".into()));
    }
    for s in sets {
        space.validate_set(s)?;
    }
    if let Space::Primitive { ground: Ground::Finite(g), .. } = space {
        let mut best = 0u32;
        for p in 0..g.len() {
            let count = sets
                .iter()
                .map(|s| s.as_finite().expect("validated finite set"))
                .filter(|s| s.contains(p))
                .count() as u32;
            best = best.max(count);
        }
        return Ok(best);
    }
    let alg = Subalgebra::new(
        space.clone(),
        sets.to_vec(),
        &Limits { max_generators: limits.max_generators, max_atoms: 24 },
    )?;
    Ok((0..alg.atom_count())
        .map(|i| alg.atom_signs(i).count_ones())
        .max()
        .unwrap_or(0))
}

/// A refinement `(V_j, B_j)` of targets `U_i`, with a total assignment
/// `j -> i` witnessing `V_j` inside `U_{assign(j)}`.
#[derive(Debug, Clone)]
pub struct RefinementAssignment {
    refinement: DeltaCovering,
    targets: Vec<SpaceSet>,
    assign: Vec<usize>,
}

impl RefinementAssignment {
    pub fn new(
        refinement: DeltaCovering,
        targets: Vec<SpaceSet>,
        assign: Vec<usize>,
    ) -> Result<Self> {
        if assign.len() != refinement.pairs.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} refinement elements but {} assignments",
                refinement.pairs.len(),
                assign.len()
            )));
        }
        for (j, &i) in assign.iter().enumerate() {
            if i >= targets.len() {
                return Err(Error::InvalidAssignment(format!(
                    "element {j} assigned to missing target {i}"
                )));
            }
            if !refinement.space.is_subset_of(&refinement.pairs[j].0, &targets[i])? {
                return Err(Error::InvalidAssignment(format!(
                    "element {j} is not contained in target {i}"
                )));
            }
        }
        let report = validate_covering(&refinement);
        if !report.is_valid() {
            return Err(Error::InvalidAssignment(
                "refinement is not a valid delta-covering".into(),
            ));
        }
        Ok(RefinementAssignment { refinement, targets, assign })
    }

    pub fn refinement(&self) -> &DeltaCovering {
        &self.refinement
    }

    pub fn targets(&self) -> &[SpaceSet] {
        &self.targets
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }
}

/// Assigns each refinement element to the first target containing it, as
/// in the lemma's inductive construction.
pub fn assign_first_fit(
    refinement: DeltaCovering,
    targets: Vec<SpaceSet>,
) -> Result<RefinementAssignment> {
    let mut assign = Vec::with_capacity(refinement.pairs.len());
    for (j, (v, _)) in refinement.pairs.iter().enumerate() {
        let i = targets
            .iter()
            .enumerate()
            .find_map(|(i, u)| {
                refinement.space.is_subset_of(v, u).ok().filter(|ok| *ok).map(|_| i)
            })
            .ok_or_else(|| {
                Error::InvalidAssignment(format!("no target contains refinement element {j}"))
            })?;
        assign.push(i);
    }
    RefinementAssignment::new(refinement, targets, assign)
}

/// The lemma's regrouping step: unions the assigned `V_j` (and their
/// witnesses) per target index. The output is indexed like the targets,
/// possibly with empty entries; it is again a delta-covering, refines the
/// targets, and its multiplicity never exceeds the input refinement's.
pub fn reindex_refinement(r: &RefinementAssignment) -> Result<DeltaCovering> {
    let space = &r.refinement.space;
    let mut pairs: Vec<(SpaceSet, SpaceSet)> = r
        .targets
        .iter()
        .map(|_| (space.empty_set(), space.empty_set()))
        .collect();
    for (j, &i) in r.assign.iter().enumerate() {
        pairs[i].0 = space.union_of(&pairs[i].0, &r.refinement.pairs[j].0)?;
        pairs[i].1 = space.union_of(&pairs[i].1, &r.refinement.pairs[j].1)?;
    }
    Ok(DeltaCovering { space: space.clone(), pairs })
}

/// A checkable dimension certificate: a covering, a refinement of its
/// A-sets, and a claimed multiplicity bound.
#[derive(Debug, Clone)]
pub struct DimensionCertificate {
    pub space: Space,
    pub covering: DeltaCovering,
    pub refinement: DeltaCovering,
    pub claimed_multiplicity: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub violations: Vec<String>,
    pub refinement_multiplicity: Option<u32>,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-checks everything a certificate claims.
pub fn validate_certificate(cert: &DimensionCertificate, limits: &Limits) -> CertificateReport {
    let mut violations = Vec::new();
    let covering = validate_covering(&cert.covering);
    for v in covering.violations {
        violations.push(format!("covering: {v:?}"));
    }
    let refinement = validate_covering(&cert.refinement);
    for v in refinement.violations {
        violations.push(format!("refinement: {v:?}"));
    }
    for (j, (v, _)) in cert.refinement.pairs.iter().enumerate() {
        let contained = cert.covering.a_sets().any(|a| {
            cert.space.is_subset_of(v, a).unwrap_or(false)
        });
        // Empty refinement entries refine vacuously.
        if !contained && !v.is_empty() {
            violations.push(format!("refinement element {j} is not inside any covering set"));
        }
    }
    let a_sets: Vec<SpaceSet> = cert.refinement.a_sets().cloned().collect();
    let refinement_multiplicity = match multiplicity(&cert.space, &a_sets, limits) {
        Ok(m) => {
            if m > cert.claimed_multiplicity {
                violations.push(format!(
                    "refinement multiplicity {m} exceeds claimed {}",
                    cert.claimed_multiplicity
                ));
            }
            Some(m)
        }
        Err(e) => {
            violations.push(format!("multiplicity: {e}"));
            None
        }
    };
    CertificateReport { violations, refinement_multiplicity }
}

/// Exact or lower-bounded dimension value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DimBound {
    Exact(u32),
    AtLeast(u32),
}

/// Presents a finite space (or finite coproduct of finite spaces) as a
/// single finite-relation space with per-component labels `k:label`.
pub fn flatten_finite_coproduct(space: &Space) -> Result<Space> {
    match space {
        Space::Primitive { ground: Ground::Finite(_), .. } => Ok(space.clone()),
        Space::Coproduct(h) => {
            let n = h.component_count().ok_or_else(|| {
                Error::Unsupported("template coproducts cannot be flattened".into())
            })?;
            let mut labels = Vec::new();
            let mut pairs = Vec::new();
            let mut offset = 0u32;
            for index in 1..=n as u32 {
                let (g, rel) = effective_relation(h.component(index)?)?;
                for l in g.labels() {
                    labels.push(format!("{index}:{l}"));
                }
                for i in 0..g.len() {
                    for j in (i + 1)..g.len() {
                        if rel.related(i, j) {
                            pairs.push((offset + i, offset + j));
                        }
                    }
                }
                offset += g.len();
            }
            let ground = FiniteGround::new(labels)?;
            let rel = PointRelation::from_pairs(ground.len(), &pairs)?;
            Space::finite(ground, ProximityKind::FiniteRelation(rel))
        }
        _ => Err(Error::Unsupported("only finite presentations can be flattened".into())),
    }
}

/// Exhaustive proximity dimension of a finite space: enumerates every
/// deduplicated delta-covering family over the power set and, for each,
/// searches refinements for the least achievable multiplicity.
///
/// A refinement of a subfamily refines the family, so the quantification
/// runs over inclusion-minimal covering families; minimal multiplicity is
/// attained on irredundant covers found by a first-uncovered-point search.
pub fn brute_delta_dim(space: &Space, cap: u32) -> Result<DimBound> {
    let flat = flatten_finite_coproduct(space)?;
    let (g, rel) = effective_relation(&flat)?;
    let n = g.len();
    if n > 4 {
        return Err(Error::BoundExceeded {
            what: "exhaustive dimension ground",
            actual: n as usize,
            limit: 4,
        });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let subsets = full as usize; // nonempty subsets 1..=full
    // core(A): points whose whole neighborhood stays inside A; the largest
    // B with B << A.
    let core = |a: u32| -> u32 {
        let mut out = 0u32;
        for x in 0..n {
            if rel.neighborhood(1u64 << x) as u32 & !a == 0 {
                out |= 1 << x;
            }
        }
        out
    };
    let cores: Vec<u32> = (0..=full).map(core).collect();

    let mut worst: u32 = 1; // minimum possible multiplicity of any covering
    for fam_bits in 1u64..1u64 << subsets {
        let members: Vec<u32> = (1..=full).filter(|m| fam_bits >> (m - 1) & 1 == 1).collect();
        let covered = members.iter().fold(0u32, |acc, m| acc | cores[*m as usize]);
        if covered != full {
            continue;
        }
        let minimal = members.iter().all(|m| {
            members
                .iter()
                .filter(|o| *o != m)
                .fold(0u32, |acc, o| acc | cores[*o as usize])
                != full
        });
        if !minimal {
            continue;
        }
        let best = min_refinement_multiplicity(n, full, &cores, &members);
        worst = worst.max(best);
        if worst > cap {
            return Ok(DimBound::AtLeast(cap));
        }
    }
    Ok(DimBound::Exact(worst - 1))
}

/// Least multiplicity over refinements of the family: depth-first search
/// over irredundant core-covers drawn from subsets contained in a member.
fn min_refinement_multiplicity(n: u32, full: u32, cores: &[u32], members: &[u32]) -> u32 {
    let candidates: Vec<u32> = (1..=full)
        .filter(|v| cores[*v as usize] != 0 && members.iter().any(|m| v & !m == 0))
        .collect();
    let mut best = u32::MAX;
    let mut chosen: Vec<u32> = Vec::new();
    fn dfs(
        n: u32,
        full: u32,
        cores: &[u32],
        candidates: &[u32],
        covered: u32,
        chosen: &mut Vec<u32>,
        best: &mut u32,
    ) {
        if covered == full {
            let mult = (0..n)
                .map(|x| chosen.iter().filter(|v| *v >> x & 1 == 1).count() as u32)
                .max()
                .unwrap_or(0);
            *best = (*best).min(mult);
            return;
        }
        let point = (!covered & full).trailing_zeros();
        for &v in candidates {
            if cores[v as usize] >> point & 1 == 1 {
                chosen.push(v);
                dfs(n, full, cores, candidates, covered | cores[v as usize], chosen, best);
                chosen.pop();
            }
        }
    }
    dfs(n, full, cores, &candidates, 0, &mut chosen, &mut best);
    debug_assert!(best < u32::MAX, "the family itself is always a refinement");
    best
}

/// Bounded search for a refinement of `covering` with multiplicity at most
/// `target`, drawing refinement elements from `pool` and witnesses from
/// unions of pool elements. A found certificate is re-validated; `None` is
/// evidence only, never a lower-bound proof.
pub fn search_refinement(
    space: &Space,
    covering: &DeltaCovering,
    pool: &[SpaceSet],
    target_multiplicity: u32,
    limits: &Limits,
) -> Result<Option<DimensionCertificate>> {
    for s in pool {
        space.validate_set(s)?;
    }
    // Candidate refinement elements: pool sets inside some covering set,
    // each paired with the largest pool-union witness below it. The
    // finite-union rule keeps that union strongly included.
    let mut candidates: Vec<(SpaceSet, SpaceSet)> = Vec::new();
    for v in pool {
        if v.is_empty() {
            continue;
        }
        let mut inside = false;
        for a in covering.a_sets() {
            if space.is_subset_of(v, a)? {
                inside = true;
                break;
            }
        }
        if !inside {
            continue;
        }
        let mut witness = space.empty_set();
        for b in pool {
            if space.strong_inclusion(b, v)? {
                witness = space.union_of(&witness, b)?;
            }
        }
        if !witness.is_empty() {
            candidates.push((v.clone(), witness));
        }
    }

    let carrier = space.carrier();
    let mut chosen: Vec<usize> = Vec::new();
    let mut budget: u32 = 200_000;
    let found = dfs_cover(space, &candidates, &carrier, 0, &mut chosen, &mut budget, &|sel: &[usize]| {
        let a_sets: Vec<SpaceSet> = sel.iter().map(|&i| candidates[i].0.clone()).collect();
        multiplicity(space, &a_sets, limits).map(|m| m <= target_multiplicity)
    })?;
    let Some(selection) = found else { return Ok(None) };
    let refinement = DeltaCovering {
        space: space.clone(),
        pairs: selection.iter().map(|&i| candidates[i].clone()).collect(),
    };
    let cert = DimensionCertificate {
        space: space.clone(),
        covering: covering.clone(),
        refinement,
        claimed_multiplicity: target_multiplicity,
    };
    let report = validate_certificate(&cert, limits);
    if !report.is_valid() {
        return Ok(None);
    }
    Ok(Some(cert))
}

fn dfs_cover(
    space: &Space,
    candidates: &[(SpaceSet, SpaceSet)],
    uncovered: &SpaceSet,
    start: usize,
    chosen: &mut Vec<usize>,
    budget: &mut u32,
    accept: &dyn Fn(&[usize]) -> Result<bool>,
) -> Result<Option<Vec<usize>>> {
    if *budget == 0 {
        return Ok(None);
    }
    *budget -= 1;
    if uncovered.is_empty() {
        return Ok(if accept(chosen)? { Some(chosen.clone()) } else { None });
    }
    for idx in start..candidates.len() {
        let contribution = space.intersect_of(&candidates[idx].1, uncovered)?;
        if contribution.is_empty() {
            continue;
        }
        chosen.push(idx);
        let rest = space.difference_of(uncovered, &candidates[idx].1)?;
        if let Some(hit) = dfs_cover(space, candidates, &rest, idx + 1, chosen, budget, accept)? {
            return Ok(Some(hit));
        }
        chosen.pop();
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct DimSupReport {
    pub component_dims: Vec<DimBound>,
    pub coproduct_dim: DimBound,
    pub sup_matches: bool,
}

/// Computes the brute-force dimension of each finite component and of
/// their coproduct, and checks that the coproduct value is the maximum of
/// the component values.
pub fn dim_sup_check(components: &[Space], cap: u32) -> Result<DimSupReport> {
    let component_dims: Vec<DimBound> = components
        .iter()
        .map(|c| brute_delta_dim(c, cap))
        .collect::<Result<_>>()?;
    let coproduct = Space::coproduct(components.to_vec())?;
    let coproduct_dim = brute_delta_dim(&coproduct, cap)?;
    let sup = component_dims.iter().try_fold(0u32, |acc, d| match d {
        DimBound::Exact(v) => Some(acc.max(*v)),
        DimBound::AtLeast(_) => None,
    });
    let sup_matches = match (sup, coproduct_dim) {
        (Some(sup), DimBound::Exact(v)) => sup == v,
        _ => false,
    };
    Ok(DimSupReport { component_dims, coproduct_dim, sup_matches })
}
