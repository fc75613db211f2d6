//! Theorem-instance suites. Each suite instantiates one headline result at
//! desk scale and reports one entry per assertion; failures carry a
//! replayable counterexample payload.

use crate::{fnv1a, CliError, CliResult};
use proxim_core::coproduct::ComponentSet;
use proxim_core::dimension::{
    brute_delta_dim, dim_sup_check, multiplicity, reindex_refinement, search_refinement,
    validate_certificate, validate_covering, DeltaCovering, DimBound, DimensionCertificate,
};
use proxim_core::germs::{
    classify_germ, enumerate_germs, extend_germ, Germ, GermClass, GermMode, Limits, Subalgebra,
};
use proxim_core::regions::FiniteSubset;
use proxim_core::sampling;
use proxim_core::spaces::{
    AxiomBudget, FiniteGround, Point, PointRelation, ProximityKind, Space, SpaceSet,
};
use proxim_core::text::parse_region;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const SUITE_IDS: &[&str] = &[
    "axioms",
    "finite-characterization",
    "coproduct-propositions",
    "coproduct-additivity",
    "template-surplus",
    "support-disjointness",
    "stonecech-iff",
    "discrete-set",
    "dimension-lemma",
    "dimension-sup",
    "germ-oracle",
];

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub tool_version: &'static str,
    pub input_digest: String,
    pub assertions: Vec<Assertion>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest: format!("{:016x}", fnv1a(format!("{suite}:{seed}").as_bytes())),
            assertions: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, counterexample: Option<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            counterexample: if pass { None } else { counterexample },
        });
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 2026 }
    }
}

pub fn run_suite(id: &str, opts: &SuiteOptions) -> CliResult<SuiteReport> {
    match id {
        "axioms" => Ok(suite_axioms(opts)),
        "finite-characterization" => Ok(suite_finite_characterization(opts)),
        "coproduct-propositions" => Ok(suite_coproduct_propositions(opts)),
        "coproduct-additivity" => Ok(suite_coproduct_additivity(opts)),
        "template-surplus" => Ok(suite_template_surplus(opts)),
        "support-disjointness" => Ok(suite_support_disjointness(opts)),
        "stonecech-iff" => Ok(suite_stonecech_iff(opts)),
        "discrete-set" => Ok(suite_discrete_set(opts)),
        "dimension-lemma" => Ok(suite_dimension_lemma(opts)),
        "dimension-sup" => Ok(suite_dimension_sup(opts)),
        "germ-oracle" => Ok(suite_germ_oracle(opts)),
        _ => Err(CliError::Input(format!(
            "unknown suite `{id}`; available: {}",
            SUITE_IDS.join(", ")
        ))),
    }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<SuiteReport> {
    SUITE_IDS.iter().map(|id| run_suite(id, opts).expect("known id")).collect()
}

fn rset(s: &str) -> SpaceSet {
    SpaceSet::Region(parse_region(s).unwrap())
}

/// All five built-in kinds on the line pass axioms (1)-(4) on ten thousand
/// randomized region triples each, and axiom (5) with a validated
/// constructive witness on a thousand non-close pairs each.
fn suite_axioms(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("axioms", opts.seed);
    let budget = AxiomBudget { triples: 10_000, axiom5_pairs: 1_000 };
    for (k, kind) in [
        ProximityKind::Discrete,
        ProximityKind::Metric,
        ProximityKind::Standard,
        ProximityKind::Aleksandroff,
        ProximityKind::StoneCech,
    ]
    .into_iter()
    .enumerate()
    {
        let name = kind.name();
        let space = Space::real(kind).unwrap();
        let r = space.verify_axioms(&budget, opts.seed.wrapping_add(k as u64));
        let low_axiom_failure = r.failures.iter().find(|f| f.axiom <= 4);
        report.check(
            format!("axioms-1-to-4-{name}"),
            low_axiom_failure.is_none() && r.triples_checked >= 10_000,
            low_axiom_failure.map(|f| format!("axiom {}: {}", f.axiom, f.detail)),
        );
        let witness_failure = r.failures.iter().find(|f| f.axiom == 5);
        report.check(
            format!("axiom-5-witnesses-{name}"),
            r.axiom5_pairs_validated >= 1_000 && witness_failure.is_none(),
            Some(match witness_failure {
                Some(f) => f.detail.clone(),
                None => format!("validated {} of 1000", r.axiom5_pairs_validated),
            }),
        );
    }
    report
}

/// Over every reflexive symmetric relation on up to 4 points, the
/// exhaustive axiom verifier accepts exactly the equivalence relations.
fn suite_finite_characterization(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("finite-characterization", opts.seed);
    for n in 1..=4u32 {
        let mut mismatch = None;
        let mut equivalences = 0usize;
        let relations = sampling::all_reflexive_symmetric(n);
        let total = relations.len();
        for rel in relations {
            let is_equivalence = rel.is_equivalence();
            equivalences += usize::from(is_equivalence);
            let space = Space::finite(
                FiniteGround::new(sampling::default_labels(n)).unwrap(),
                ProximityKind::FiniteRelation(rel.clone()),
            )
            .unwrap();
            let r = space.verify_axioms(&AxiomBudget::default(), 0);
            if r.passed() != is_equivalence && mismatch.is_none() {
                mismatch = Some(format!("relation {rel:?}: axioms={}, equivalence={}", r.passed(), is_equivalence));
            }
        }
        report.check(
            format!("axioms-iff-equivalence-n{n} ({total} relations, {equivalences} equivalences)"),
            mismatch.is_none(),
            mismatch,
        );
    }
    report
}

/// Flattened presentation of a finite coproduct of finite-relation spaces,
/// used to make the exhaustive instance checks cheap. Componentwise
/// closeness equals block-diagonal singleton closeness; a sampled subset
/// of the checks is replayed through the public oracles.
struct FlatInstance {
    space: Space,
    components: Vec<(Space, PointRelation, u32)>,
    offsets: Vec<u32>,
    total: u32,
    rows: Vec<u64>,
    /// Per component: witness table indexed by (a_bits, b_bits), `u64::MAX`
    /// marking close pairs.
    witness_tables: Vec<Vec<u64>>,
}

impl FlatInstance {
    fn new(components: Vec<(Space, PointRelation, u32)>) -> Self {
        let space =
            Space::coproduct(components.iter().map(|(s, _, _)| s.clone()).collect()).unwrap();
        let mut offsets = Vec::new();
        let mut total = 0u32;
        for (_, _, n) in &components {
            offsets.push(total);
            total += n;
        }
        let mut rows = vec![0u64; total as usize];
        for ((_, rel, n), offset) in components.iter().zip(&offsets) {
            for i in 0..*n {
                for j in 0..*n {
                    if rel.related(i, j) {
                        rows[(offset + i) as usize] |= 1 << (offset + j);
                    }
                }
            }
        }
        let witness_tables = components
            .iter()
            .map(|(_, rel, n)| {
                let full = (1u64 << n) - 1;
                let mut table = vec![u64::MAX; 1 << (2 * n)];
                for a in 0..=full {
                    for b in 0..=full {
                        if rel.neighborhood(a) & b != 0 {
                            continue; // close pair, no witness needed
                        }
                        for e in 0..=full {
                            if rel.neighborhood(a) & e == 0 && rel.neighborhood(!e & full) & b == 0
                            {
                                table[(a << n | b) as usize] = e;
                                break;
                            }
                        }
                    }
                }
                table
            })
            .collect();
        FlatInstance { space, components, offsets, total, rows, witness_tables }
    }

    fn neighborhood(&self, bits: u64) -> u64 {
        let mut out = 0;
        for (i, row) in self.rows.iter().enumerate() {
            if bits >> i & 1 == 1 {
                out |= row;
            }
        }
        out
    }

    fn close(&self, a: u64, b: u64) -> bool {
        self.neighborhood(a) & b != 0
    }

    fn component_bits(&self, bits: u64, k: usize) -> u64 {
        let n = self.components[k].2;
        bits >> self.offsets[k] & ((1 << n) - 1)
    }

    /// Componentwise axiom-5 witness `E` as the union of the per-component
    /// table entries; `None` when some component has no witness.
    fn witness(&self, a: u64, b: u64) -> Option<u64> {
        let mut e = 0u64;
        for k in 0..self.components.len() {
            let n = self.components[k].2;
            let (ca, cb) = (self.component_bits(a, k), self.component_bits(b, k));
            let w = self.witness_tables[k][(ca << n | cb) as usize];
            if w == u64::MAX {
                return None;
            }
            e |= w << self.offsets[k];
        }
        Some(e)
    }

    fn full(&self) -> u64 {
        if self.total == 64 {
            u64::MAX
        } else {
            (1 << self.total) - 1
        }
    }

    fn as_set(&self, bits: u64) -> SpaceSet {
        let h = self.space.as_coproduct().unwrap();
        let entries = (0..self.components.len())
            .map(|k| {
                let n = self.components[k].2;
                let cs = ComponentSet::Finite(FiniteSubset::from_bits(n, self.component_bits(bits, k)));
                ((k + 1) as u32, cs)
            })
            .collect();
        SpaceSet::Coproduct(h.make_set(entries, proxim_core::coproduct::Tail::Empty).unwrap())
    }
}

fn equivalence_bases(max_points: u32) -> Vec<(Space, PointRelation, u32)> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        for rel in sampling::all_reflexive_symmetric(n) {
            if !rel.is_equivalence() {
                continue;
            }
            let space = Space::finite(
                FiniteGround::new(sampling::default_labels(n)).unwrap(),
                ProximityKind::FiniteRelation(rel.clone()),
            )
            .unwrap();
            out.push((space, rel, n));
        }
    }
    out
}

/// Coproduct propositions, exhaustive over every coproduct of at most 3
/// components drawn (as a multiset) from the valid proximities on at most
/// 3 points: subspace recovery, separated-iff-componentwise, axiom 5 via
/// the componentwise witness union, and disjoint-union closure.
fn suite_coproduct_propositions(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("coproduct-propositions", opts.seed);
    let bases = equivalence_bases(3);
    let mut instances: Vec<Vec<usize>> = Vec::new();
    for i in 0..bases.len() {
        instances.push(vec![i]);
        for j in i..bases.len() {
            instances.push(vec![i, j]);
            for k in j..bases.len() {
                instances.push(vec![i, j, k]);
            }
        }
    }
    let count = instances.len();
    let mut recovery_fail = None;
    let mut separated_fail = None;
    let mut axiom5_fail = None;
    let mut closure_fail = None;
    let mut crosscheck_fail = None;

    for choice in &instances {
        let components: Vec<(Space, PointRelation, u32)> =
            choice.iter().map(|&i| bases[i].clone()).collect();
        let flat = FlatInstance::new(components.clone());
        let h = flat.space.as_coproduct().unwrap().clone();

        // Subspace recovery: injections preserve and reflect closeness.
        'recovery: for (k, (comp, _, n)) in components.iter().enumerate() {
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    let ia = SpaceSet::Coproduct(
                        h.inject((k + 1) as u32, ComponentSet::Finite(FiniteSubset::from_bits(*n, a)))
                            .unwrap(),
                    );
                    let ib = SpaceSet::Coproduct(
                        h.inject((k + 1) as u32, ComponentSet::Finite(FiniteSubset::from_bits(*n, b)))
                            .unwrap(),
                    );
                    let inner = comp
                        .close(
                            &SpaceSet::Finite(FiniteSubset::from_bits(*n, a)),
                            &SpaceSet::Finite(FiniteSubset::from_bits(*n, b)),
                        )
                        .unwrap();
                    if flat.space.close(&ia, &ib).unwrap() != inner && recovery_fail.is_none() {
                        recovery_fail = Some(format!("component {k}, a={a:b}, b={b:b}"));
                        break 'recovery;
                    }
                }
            }
        }

        // Separatedness is the componentwise conjunction.
        let expect = components.iter().all(|(c, _, _)| c.is_separated().separated);
        if flat.space.is_separated().separated != expect && separated_fail.is_none() {
            separated_fail = Some(format!("{} components", components.len()));
        }

        // Axiom 5 with the assembled componentwise witness, exhaustive over
        // all subset pairs; every 97th pair is replayed through the public
        // oracle to pin the flat harness to the engine.
        let full = flat.full();
        let mut pair_index = 0u64;
        for a in 0..=full {
            for b in 0..=full {
                pair_index += 1;
                let close = flat.close(a, b);
                if pair_index.is_multiple_of(97) {
                    let pa = flat.as_set(a);
                    let pb = flat.as_set(b);
                    if flat.space.close(&pa, &pb).unwrap() != close && crosscheck_fail.is_none() {
                        crosscheck_fail = Some(format!("flat close disagrees at a={a:b}, b={b:b}"));
                    }
                }
                if close {
                    continue;
                }
                match flat.witness(a, b) {
                    None => {
                        if axiom5_fail.is_none() {
                            axiom5_fail = Some(format!("no witness for a={a:b}, b={b:b}"));
                        }
                    }
                    Some(e) => {
                        let ok = !flat.close(a, e) && !flat.close(!e & full, b);
                        if !ok && axiom5_fail.is_none() {
                            axiom5_fail = Some(format!("invalid witness for a={a:b}, b={b:b}"));
                        } else if pair_index.is_multiple_of(97) {
                            let pa = flat.as_set(a);
                            let pb = flat.as_set(b);
                            let pe = flat.space.axiom5_witness(&pa, &pb).unwrap();
                            match pe {
                                Some(pe) => {
                                    let co = flat.space.complement_of(&pe).unwrap();
                                    let ok = !flat.space.close(&pa, &pe).unwrap()
                                        && !flat.space.close(&co, &pb).unwrap();
                                    if !ok && crosscheck_fail.is_none() {
                                        crosscheck_fail =
                                            Some(format!("public witness invalid at a={a:b}, b={b:b}"));
                                    }
                                }
                                None => {
                                    if crosscheck_fail.is_none() {
                                        crosscheck_fail =
                                            Some(format!("public witness missing at a={a:b}, b={b:b}"));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }

        // Disjoint-union closure: the proximity-induced closure (all points
        // close to the set) equals the componentwise closure.
        for bits in 0..=full {
            let set = flat.as_set(bits);
            let expected_bits = flat.neighborhood(bits);
            let via_engine = flat.space.closure_of(&set).unwrap();
            if via_engine != flat.as_set(expected_bits) && closure_fail.is_none() {
                closure_fail = Some(format!("closure of {bits:b}"));
            }
        }
    }

    report.check(
        format!("subspace-recovery ({count} instances)"),
        recovery_fail.is_none(),
        recovery_fail,
    );
    report.check("separated-iff-componentwise", separated_fail.is_none(), separated_fail);
    report.check("axiom-5-componentwise-witness", axiom5_fail.is_none(), axiom5_fail);
    report.check("disjoint-union-closure", closure_fail.is_none(), closure_fail);
    report.check("flat-harness-crosscheck", crosscheck_fail.is_none(), crosscheck_fail);
    report
}

/// A generated component: a space plus algebra generators for it.
type GeneratedComponent = (Space, Vec<SpaceSet>);

fn random_component(rng: &mut ChaCha8Rng) -> GeneratedComponent {
    if rng.random_bool(0.3) {
        let kind = if rng.random_bool(0.5) { ProximityKind::Metric } else { ProximityKind::Standard };
        let space = Space::real(kind).unwrap();
        let gens = vec![SpaceSet::Region(sampling::random_region(rng))];
        (space, gens)
    } else {
        let n = rng.random_range(1..=3u32);
        let space = Space::finite(
            FiniteGround::new(sampling::default_labels(n)).unwrap(),
            ProximityKind::FiniteRelation(sampling::random_equivalence(rng, n)),
        )
        .unwrap();
        let gens = (0..rng.random_range(0..=1))
            .map(|_| SpaceSet::Finite(sampling::random_finite_subset(rng, n)))
            .collect();
        (space, gens)
    }
}

/// Coproduct algebra over the given components whose generators are every
/// component carrier plus the injected component generators.
fn coproduct_algebra(components: &[GeneratedComponent]) -> (Subalgebra, Vec<Subalgebra>) {
    let limits = Limits { max_generators: 16, max_atoms: 24 };
    let co = Space::coproduct(components.iter().map(|(s, _)| s.clone()).collect()).unwrap();
    let h = co.as_coproduct().unwrap().clone();
    let mut gens: Vec<SpaceSet> = Vec::new();
    for index in 1..=components.len() as u32 {
        gens.push(SpaceSet::Coproduct(h.carrier_of(index).unwrap()));
    }
    for (k, (_, component_gens)) in components.iter().enumerate() {
        for g in component_gens {
            let c = ComponentSet::try_from(g.clone()).unwrap();
            gens.push(SpaceSet::Coproduct(h.inject((k + 1) as u32, c).unwrap()));
        }
    }
    let coproduct_alg = Subalgebra::new(co, gens, &limits).unwrap();
    let component_algs = components
        .iter()
        .map(|(s, g)| Subalgebra::new(s.clone(), g.clone(), &limits).unwrap())
        .collect();
    (coproduct_alg, component_algs)
}

/// Finite coproducts: the germ count is the sum of the component germ
/// counts, and germ extension is an injection onto the non-tail germs.
fn suite_coproduct_additivity(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("coproduct-additivity", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x04);
    let instances = 24;
    let mut additivity_fail = None;
    let mut injective_fail = None;
    let mut image_fail = None;
    for i in 0..instances {
        let k = rng.random_range(2..=3usize);
        let components: Vec<GeneratedComponent> =
            (0..k).map(|_| random_component(&mut rng)).collect();
        let (coproduct_alg, component_algs) = coproduct_algebra(&components);
        let component_germs: Vec<Vec<Germ>> =
            component_algs.iter().map(|a| enumerate_germs(a, GermMode::All)).collect();
        let coproduct_germs = enumerate_germs(&coproduct_alg, GermMode::All);
        let total: usize = component_germs.iter().map(|g| g.len()).sum();
        if coproduct_germs.len() != total && additivity_fail.is_none() {
            additivity_fail =
                Some(format!("instance {i}: {} != {}", coproduct_germs.len(), total));
        }
        let mut extended: Vec<u32> = Vec::new();
        for (k, (alg, germs)) in component_algs.iter().zip(&component_germs).enumerate() {
            for g in germs {
                match extend_germ(alg, g, &coproduct_alg, (k + 1) as u32) {
                    Ok(e) => extended.push(e.support_mask()),
                    Err(e) => {
                        if injective_fail.is_none() {
                            injective_fail = Some(format!("instance {i}: extension failed: {e}"));
                        }
                    }
                }
            }
        }
        let mut unique = extended.clone();
        unique.sort_unstable();
        unique.dedup();
        if unique.len() != extended.len() && injective_fail.is_none() {
            injective_fail = Some(format!("instance {i}: extensions collide"));
        }
        let mut non_tail: Vec<u32> = coproduct_germs
            .iter()
            .filter(|g| {
                classify_germ(&coproduct_alg, g)
                    .map(|c| c != GermClass::Tail)
                    .unwrap_or(false)
            })
            .map(|g| g.support_mask())
            .collect();
        non_tail.sort_unstable();
        if unique != non_tail && image_fail.is_none() {
            image_fail = Some(format!("instance {i}: image differs from non-tail germs"));
        }
    }
    report.check(
        format!("germ-count-additivity ({instances} coproducts)"),
        additivity_fail.is_none(),
        additivity_fail,
    );
    report.check("extension-injective", injective_fail.is_none(), injective_fail);
    report.check("extension-image-is-non-tail", image_fail.is_none(), image_fail);
    report
}

/// Template coproducts with k explicit carriers: exactly one surplus germ,
/// and it classifies as the tail.
fn suite_template_surplus(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("template-surplus", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x05);
    for k in 1..=6u32 {
        for (family, base, extra_gens) in [
            ("singleton", Space::finite_relation(vec!["p".into()], &[]).unwrap(), 0usize),
            ("metric-line", Space::real(ProximityKind::Metric).unwrap(), 1usize),
        ] {
            let co = Space::template(base.clone()).unwrap();
            let h = co.as_coproduct().unwrap().clone();
            let mut gens: Vec<SpaceSet> =
                (1..=k).map(|i| SpaceSet::Coproduct(h.carrier_of(i).unwrap())).collect();
            let mut component_gens: Vec<Vec<SpaceSet>> = vec![Vec::new(); k as usize];
            for alpha in 1..=k.min(2) {
                for _ in 0..extra_gens {
                    let g = SpaceSet::Region(sampling::random_region(&mut rng));
                    component_gens[(alpha - 1) as usize].push(g.clone());
                    let c = ComponentSet::try_from(g).unwrap();
                    gens.push(SpaceSet::Coproduct(h.inject(alpha, c).unwrap()));
                }
            }
            let limits = Limits { max_generators: 16, max_atoms: 24 };
            let alg = Subalgebra::new(co, gens, &limits).unwrap();
            let germs = enumerate_germs(&alg, GermMode::All);
            let component_total: usize = component_gens
                .iter()
                .map(|g| {
                    let comp_alg = Subalgebra::new(base.clone(), g.clone(), &limits).unwrap();
                    enumerate_germs(&comp_alg, GermMode::All).len()
                })
                .sum();
            let tails: Vec<&Germ> = germs
                .iter()
                .filter(|g| classify_germ(&alg, g).unwrap() == GermClass::Tail)
                .collect();
            report.check(
                format!("surplus-count-{family}-k{k}"),
                germs.len() == component_total + 1,
                Some(format!("{} germs, components total {}", germs.len(), component_total)),
            );
            report.check(
                format!("surplus-is-tail-{family}-k{k}"),
                tails.len() == 1,
                Some(format!("{} tail germs", tails.len())),
            );
        }
    }
    report
}

/// No coproduct germ is supported at two components; support classes
/// partition the non-tail germs. Runs over generated finite coproducts
/// and template algebras.
fn suite_support_disjointness(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("support-disjointness", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x06);
    let mut single_fail = None;
    let mut partition_fail = None;
    let mut germ_total = 0usize;

    let mut algebras: Vec<(usize, Subalgebra)> = Vec::new();
    for _ in 0..12 {
        let k = rng.random_range(2..=3usize);
        let components: Vec<GeneratedComponent> =
            (0..k).map(|_| random_component(&mut rng)).collect();
        let (alg, _) = coproduct_algebra(&components);
        algebras.push((k, alg));
    }
    for k in 1..=4u32 {
        let base = Space::finite_relation(vec!["p".into()], &[]).unwrap();
        let co = Space::template(base).unwrap();
        let h = co.as_coproduct().unwrap().clone();
        let gens: Vec<SpaceSet> =
            (1..=k).map(|i| SpaceSet::Coproduct(h.carrier_of(i).unwrap())).collect();
        let alg = Subalgebra::new(co, gens, &Limits::default()).unwrap();
        algebras.push((k as usize, alg));
    }

    for (k, alg) in &algebras {
        let germs = enumerate_germs(alg, GermMode::All);
        germ_total += germs.len();
        let mut per_class = vec![0usize; k + 1];
        let mut tails = 0usize;
        for germ in &germs {
            let mut touched: Vec<u32> = Vec::new();
            for i in germ.atom_indices() {
                let atom = alg.atoms()[i].as_coproduct().unwrap();
                if atom.tail() == proxim_core::coproduct::Tail::Empty
                    && atom.explicit().len() == 1
                {
                    touched.push(*atom.explicit().keys().next().unwrap());
                }
            }
            touched.sort_unstable();
            touched.dedup();
            if touched.len() > 1 && single_fail.is_none() {
                single_fail = Some(format!("germ {:b} touches {touched:?}", germ.support_mask()));
            }
            match classify_germ(alg, germ).unwrap() {
                GermClass::ComponentSupported(a) => per_class[a as usize] += 1,
                GermClass::Tail => tails += 1,
            }
        }
        // Tail germs carry index 0 in no class; the component classes must
        // account for every remaining germ exactly once.
        if per_class.iter().sum::<usize>() + tails != germs.len() && partition_fail.is_none() {
            partition_fail = Some("class counts do not partition the germ set".into());
        }
    }
    report.check(
        format!("single-component-support ({germ_total} germs checked)"),
        single_fail.is_none(),
        single_fail,
    );
    report.check("classes-partition-germs", partition_fail.is_none(), partition_fail);
    report
}

/// Equinormality both ways: with all components standard/Stone-Cech,
/// closeness is closure intersection on a thousand sampled pairs; one
/// Aleksandroff component breaks it with the two-ray witness.
fn suite_stonecech_iff(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("stonecech-iff", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x07);
    let all_standard = Space::coproduct(vec![
        Space::real(ProximityKind::Standard).unwrap(),
        Space::real(ProximityKind::StoneCech).unwrap(),
        Space::real(ProximityKind::Standard).unwrap(),
    ])
    .unwrap();
    let mut fail = None;
    for _ in 0..1000 {
        let a = sampling::random_set(&mut rng, &all_standard);
        let b = sampling::random_set(&mut rng, &all_standard);
        let close = all_standard.close(&a, &b).unwrap();
        let meet = !all_standard
            .intersect_of(
                &all_standard.closure_of(&a).unwrap(),
                &all_standard.closure_of(&b).unwrap(),
            )
            .unwrap()
            .is_empty();
        if close != meet && fail.is_none() {
            fail = Some(format!(
                "close={close} but closures-meet={meet} for a={}, b={}",
                all_standard.format_set(&a),
                all_standard.format_set(&b)
            ));
        }
    }
    report.check("equinormality-all-standard (1000 pairs)", fail.is_none(), fail);

    let with_aleksandroff = Space::coproduct(vec![
        Space::real(ProximityKind::Standard).unwrap(),
        Space::real(ProximityKind::Aleksandroff).unwrap(),
    ])
    .unwrap();
    let h = with_aleksandroff.as_coproduct().unwrap();
    let a = SpaceSet::Coproduct(h.inject_region(2, parse_region("[1,inf)").unwrap()).unwrap());
    let b = SpaceSet::Coproduct(h.inject_region(2, parse_region("(-inf,0]").unwrap()).unwrap());
    let close = with_aleksandroff.close(&a, &b).unwrap();
    let meet = !with_aleksandroff
        .intersect_of(
            &with_aleksandroff.closure_of(&a).unwrap(),
            &with_aleksandroff.closure_of(&b).unwrap(),
        )
        .unwrap()
        .is_empty();
    report.check(
        "aleksandroff-witness-pair",
        close && !meet,
        Some(format!("close={close}, closures-meet={meet}")),
    );
    report
}

/// The chosen-point set D over a template coproduct: disjoint finite
/// subsets of a 6-point D are never close, exhaustively.
fn suite_discrete_set(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("discrete-set", opts.seed);
    for (family, base, point_of) in [
        (
            "metric-line",
            Space::real(ProximityKind::Metric).unwrap(),
            (|k: u32| Point::real(proxim_core::rat(k as i64))) as fn(u32) -> Point,
        ),
        (
            "discrete-pair",
            Space::finite_relation(vec!["p".into(), "q".into()], &[]).unwrap(),
            (|_k: u32| Point::label("p")) as fn(u32) -> Point,
        ),
    ] {
        let co = Space::template(base).unwrap();
        let h = co.as_coproduct().unwrap().clone();
        // One chosen point per explicit component.
        let d_member = |k: u32| -> SpaceSet {
            co.point_set(&Point::component(k, point_of(k))).unwrap()
        };
        let subset_of_d = |bits: u32| -> SpaceSet {
            let mut out = SpaceSet::Coproduct(h.empty_set());
            for k in 1..=6u32 {
                if bits >> (k - 1) & 1 == 1 {
                    out = co.union_of(&out, &d_member(k)).unwrap();
                }
            }
            out
        };
        let mut fail = None;
        let mut pairs = 0;
        for s in 0..64u32 {
            for t in 0..64u32 {
                if s & t != 0 {
                    continue;
                }
                pairs += 1;
                if co.close(&subset_of_d(s), &subset_of_d(t)).unwrap() && fail.is_none() {
                    fail = Some(format!("disjoint S={s:06b}, T={t:06b} close"));
                }
            }
        }
        report.check(
            format!("disjoint-subsets-not-close-{family} ({pairs} pairs)"),
            fail.is_none(),
            fail,
        );
    }
    report
}

/// The regrouping step of the dimension lemma on randomized valid inputs:
/// the output is a delta-covering, refines the targets, and never raises
/// multiplicity.
fn suite_dimension_lemma(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("dimension-lemma", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x09);
    let limits = Limits::default();
    let instances = 120usize;
    let mut valid_fail = None;
    let mut refines_fail = None;
    let mut mult_fail = None;
    for i in 0..instances {
        let r = if i % 2 == 0 {
            sampling::random_region_refinement(&mut rng)
        } else {
            sampling::random_finite_refinement(&mut rng)
        };
        let out = reindex_refinement(&r).unwrap();
        let cov = validate_covering(&out);
        if !cov.is_valid() && valid_fail.is_none() {
            valid_fail = Some(format!("instance {i}: {:?}", cov.violations));
        }
        let space = &out.space;
        for (t, (a, _)) in out.pairs.iter().enumerate() {
            if !space.is_subset_of(a, &r.targets()[t]).unwrap() && refines_fail.is_none() {
                refines_fail = Some(format!("instance {i}: output {t} escapes its target"));
            }
        }
        let out_a: Vec<SpaceSet> = out.a_sets().cloned().collect();
        let in_a: Vec<SpaceSet> = r.refinement().a_sets().cloned().collect();
        let m_out = multiplicity(space, &out_a, &limits).unwrap();
        let m_in = multiplicity(space, &in_a, &limits).unwrap();
        if m_out > m_in && mult_fail.is_none() {
            mult_fail = Some(format!("instance {i}: multiplicity rose {m_in} -> {m_out}"));
        }
    }
    report.check(
        format!("reindexed-covering-valid ({instances} instances)"),
        valid_fail.is_none(),
        valid_fail,
    );
    report.check("reindexed-refines-targets", refines_fail.is_none(), refines_fail);
    report.check("multiplicity-never-rises", mult_fail.is_none(), mult_fail);
    report
}

/// Dimension theorem instances: every valid finite proximity on up to 4
/// points has dimension zero; the coproduct dimension is the supremum of
/// component dimensions; the two-ray covering of the line certifies at
/// multiplicity 2.
fn suite_dimension_sup(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("dimension-sup", opts.seed);
    let mut zero_fail = None;
    let mut spaces_checked = 0;
    for n in 1..=4u32 {
        for rel in sampling::all_reflexive_symmetric(n) {
            if !rel.is_equivalence() {
                continue;
            }
            spaces_checked += 1;
            let space = Space::finite(
                FiniteGround::new(sampling::default_labels(n)).unwrap(),
                ProximityKind::FiniteRelation(rel.clone()),
            )
            .unwrap();
            if brute_delta_dim(&space, 3).unwrap() != DimBound::Exact(0) && zero_fail.is_none() {
                zero_fail = Some(format!("nonzero dimension on {rel:?}"));
            }
        }
    }
    report.check(
        format!("finite-proximities-have-dimension-zero ({spaces_checked} spaces)"),
        zero_fail.is_none(),
        zero_fail,
    );

    let bases = equivalence_bases(3);
    let mut sup_fail = None;
    let mut coproducts_checked = 0;
    for (i, a) in bases.iter().enumerate() {
        for b in bases.iter().skip(i) {
            if a.2 + b.2 > 4 {
                continue;
            }
            coproducts_checked += 1;
            let r = dim_sup_check(&[a.0.clone(), b.0.clone()], 3).unwrap();
            if !r.sup_matches && sup_fail.is_none() {
                sup_fail = Some(format!("{:?} vs {:?}", r.component_dims, r.coproduct_dim));
            }
        }
    }
    // A few three-component instances.
    let one = || bases[0].0.clone();
    for extra in [
        vec![one(), one(), one()],
        vec![one(), one(), bases[1].0.clone()],
    ] {
        coproducts_checked += 1;
        let r = dim_sup_check(&extra, 3).unwrap();
        if !r.sup_matches && sup_fail.is_none() {
            sup_fail = Some(format!("{:?} vs {:?}", r.component_dims, r.coproduct_dim));
        }
    }
    report.check(
        format!("coproduct-dimension-is-sup ({coproducts_checked} coproducts)"),
        sup_fail.is_none(),
        sup_fail,
    );

    let space = Space::real(ProximityKind::Standard).unwrap();
    let covering = DeltaCovering {
        space: space.clone(),
        pairs: vec![
            (rset("(-inf,1)"), rset("(-inf,1/2]")),
            (rset("(0,inf)"), rset("[2/5,inf)")),
        ],
    };
    let cert = DimensionCertificate {
        space: space.clone(),
        covering: covering.clone(),
        refinement: covering.clone(),
        claimed_multiplicity: 2,
    };
    let limits = Limits::default();
    let direct = validate_certificate(&cert, &limits);
    report.check(
        "two-ray-certificate-multiplicity-2",
        direct.is_valid() && direct.refinement_multiplicity == Some(2),
        Some(format!("{:?}", direct.violations)),
    );
    let pool = vec![
        rset("(-inf,1)"),
        rset("(0,inf)"),
        rset("(-inf,1/2]"),
        rset("[2/5,inf)"),
        rset("(-inf,3/4)"),
        rset("(1/4,inf)"),
    ];
    let found = search_refinement(&space, &covering, &pool, 2, &limits).unwrap();
    let found_valid =
        found.as_ref().map(|c| validate_certificate(c, &limits).is_valid()).unwrap_or(false);
    report.check("searched-certificate-validates", found_valid, None);
    report
}

/// Independent germ oracle: on every algebra with at most 4 atoms used in
/// the suites, enumeration equals the naive pairwise filter run straight
/// against the closeness oracle.
fn suite_germ_oracle(opts: &SuiteOptions) -> SuiteReport {
    let mut report = SuiteReport::new("germ-oracle", opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0B);
    let limits = Limits::default();
    let mut algebras: Vec<(String, Subalgebra)> = Vec::new();
    algebras.push((
        "metric-two-rays".into(),
        Subalgebra::new(
            Space::real(ProximityKind::Metric).unwrap(),
            vec![rset("(-inf,0]"), rset("[1,inf)")],
            &limits,
        )
        .unwrap(),
    ));
    algebras.push((
        "standard-overlap".into(),
        Subalgebra::new(
            Space::real(ProximityKind::Standard).unwrap(),
            vec![rset("(-inf,1)"), rset("(0,inf)")],
            &limits,
        )
        .unwrap(),
    ));
    algebras.push((
        "partition-three-points".into(),
        Subalgebra::new(
            Space::finite_relation(
                vec!["a".into(), "b".into(), "c".into()],
                &[("a".into(), "b".into())],
            )
            .unwrap(),
            vec![
                SpaceSet::Finite(FiniteSubset::from_bits(3, 0b001)),
                SpaceSet::Finite(FiniteSubset::from_bits(3, 0b010)),
            ],
            &limits,
        )
        .unwrap(),
    ));
    let template = Space::template(Space::finite_relation(vec!["p".into()], &[]).unwrap()).unwrap();
    let th = template.as_coproduct().unwrap().clone();
    algebras.push((
        "template-three-carriers".into(),
        Subalgebra::new(
            template,
            (1..=3).map(|i| SpaceSet::Coproduct(th.carrier_of(i).unwrap())).collect(),
            &limits,
        )
        .unwrap(),
    ));
    // A couple of generated coproduct algebras, filtered to 4 atoms.
    for i in 0..6 {
        let components: Vec<GeneratedComponent> =
            (0..2).map(|_| random_component(&mut rng)).collect();
        let (alg, _) = coproduct_algebra(&components);
        if alg.atom_count() <= 4 {
            algebras.push((format!("generated-coproduct-{i}"), alg));
        }
    }

    for (name, alg) in &algebras {
        if alg.atom_count() > 4 {
            continue;
        }
        let got: Vec<u32> =
            enumerate_germs(alg, GermMode::All).iter().map(|g| g.support_mask()).collect();
        let mut expected = Vec::new();
        let n = alg.atom_count();
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
                expected.push(mask);
            }
        }
        report.check(
            format!("naive-filter-agrees-{name}"),
            got == expected,
            Some(format!("engine {got:?} vs naive {expected:?}")),
        );
    }
    report
}
