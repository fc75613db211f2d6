//! Library behind the `proxim` binary: workspace files, built-in space
//! names, query dispatch, and the theorem-instance suites.

pub mod suites;

use proxim_core::defs::{build_set, build_space, SetDef, SpaceDef};
use proxim_core::dimension::{
    brute_delta_dim, validate_certificate, DeltaCovering, DimBound, DimensionCertificate,
};
use proxim_core::germs::{classify_germ, enumerate_germs, star_close, GermMode, Limits, Subalgebra};
use proxim_core::spaces::{AxiomBudget, ProximityKind, Space, SpaceSet};
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: parse errors, unknown names, bound violations. Exit 2.
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<proxim_core::Error> for CliError {
    fn from(e: proxim_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Outcome of a query: the JSON payload plus whether every assertion the
/// query makes held (drives the exit code).
pub struct QueryOutcome {
    pub payload: Value,
    pub ok: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NamedSetDef {
    pub space: String,
    pub set: SetDef,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoveringDef {
    pub space: String,
    pub pairs: Vec<(SetDef, SetDef)>,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct WorkspaceDef {
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceDef>,
    #[serde(default)]
    pub sets: BTreeMap<String, NamedSetDef>,
    #[serde(default)]
    pub coverings: BTreeMap<String, CoveringDef>,
    #[serde(default)]
    pub suites: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SpaceRefDef {
    Name(String),
    Inline(SpaceDef),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CertificateDef {
    pub space: SpaceRefDef,
    pub covering: Vec<(SetDef, SetDef)>,
    pub refinement: Vec<(SetDef, SetDef)>,
    pub claimed_multiplicity: u32,
}

/// A loaded workspace: named definitions plus the digest of the raw bytes.
pub struct Workspace {
    def: WorkspaceDef,
    digest: u64,
}

impl Workspace {
    pub fn empty() -> Self {
        Workspace { def: WorkspaceDef::default(), digest: fnv1a(b"") }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let raw = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let def: WorkspaceDef = serde_json::from_slice(&raw).map_err(|e| {
            CliError::Input(format!(
                "{}: parse error at line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?;
        let ws = Workspace { def, digest: fnv1a(&raw) };
        ws.validate_references()?;
        Ok(ws)
    }

    fn validate_references(&self) -> CliResult<()> {
        for (name, set) in &self.def.sets {
            self.space(&set.space)
                .map_err(|e| CliError::Input(format!("set `{name}`: {e}")))?;
        }
        for (name, covering) in &self.def.coverings {
            self.space(&covering.space)
                .map_err(|e| CliError::Input(format!("covering `{name}`: {e}")))?;
        }
        for id in &self.def.suites {
            if !suites::SUITE_IDS.contains(&id.as_str()) {
                return Err(CliError::Input(format!("unknown suite `{id}`")));
            }
        }
        Ok(())
    }

    pub fn digest(&self) -> u64 {
        self.digest
    }

    pub fn suite_selection(&self) -> &[String] {
        &self.def.suites
    }

    /// Resolves a space by workspace name or built-in name.
    pub fn space(&self, name: &str) -> CliResult<Space> {
        if let Some(def) = self.def.spaces.get(name) {
            return Ok(build_space(def)?);
        }
        builtin_space(name).ok_or_else(|| {
            CliError::Input(format!(
                "unknown space `{name}` (not in the workspace file and not a built-in)"
            ))
        })
    }

    /// Resolves a set argument: a named workspace set (which must live on
    /// the queried space) or a literal in the space's grammar.
    pub fn set_arg(&self, space_name: &str, space: &Space, arg: &str) -> CliResult<SpaceSet> {
        if let Some(named) = self.def.sets.get(arg) {
            if named.space != space_name {
                return Err(CliError::Input(format!(
                    "set `{arg}` is declared on space `{}`, not `{space_name}`",
                    named.space
                )));
            }
            return Ok(build_set(space, &named.set)?);
        }
        let def = parse_set_literal(space, arg)?;
        Ok(build_set(space, &def)?)
    }

    pub fn covering(&self, name: &str) -> CliResult<(Space, DeltaCovering)> {
        let def = self
            .def
            .coverings
            .get(name)
            .ok_or_else(|| CliError::Input(format!("unknown covering `{name}`")))?;
        let space = self.space(&def.space)?;
        let pairs = def
            .pairs
            .iter()
            .map(|(a, b)| Ok((build_set(&space, a)?, build_set(&space, b)?)))
            .collect::<Result<Vec<_>, proxim_core::Error>>()?;
        Ok((space.clone(), DeltaCovering { space, pairs }))
    }
}

fn parse_set_literal(space: &Space, arg: &str) -> CliResult<SetDef> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        let def = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Input(format!("bad set literal `{trimmed}`: {e}")))?;
        return Ok(SetDef::Coproduct(def));
    }
    if trimmed.starts_with('[') && !matches!(space_shape(space), Shape::Real) {
        let labels: Vec<String> = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Input(format!("bad label list `{trimmed}`: {e}")))?;
        return Ok(SetDef::Members(labels));
    }
    Ok(SetDef::Literal(trimmed.to_string()))
}

enum Shape {
    Real,
    Finite,
    Coproduct,
}

fn space_shape(space: &Space) -> Shape {
    match space {
        Space::Primitive { ground: proxim_core::spaces::Ground::RealLine, .. } => Shape::Real,
        Space::Primitive { .. } => Shape::Finite,
        Space::Coproduct(_) => Shape::Coproduct,
        Space::Subspace { parent, .. } => space_shape(parent),
    }
}

/// Built-in space names usable without a workspace file.
pub fn builtin_space(name: &str) -> Option<Space> {
    let kind = match name {
        "discreteR" => ProximityKind::Discrete,
        "metricR" => ProximityKind::Metric,
        "standardR" => ProximityKind::Standard,
        "aleksandroffR" => ProximityKind::Aleksandroff,
        "stonecechR" => ProximityKind::StoneCech,
        "templateSingletons" => {
            let base = Space::finite_relation(vec!["p".into()], &[]).expect("one-point space");
            return Some(Space::template(base).expect("template of a one-point space"));
        }
        _ => return None,
    };
    Some(Space::real(kind).expect("built-in real kinds"))
}

pub fn builtin_names() -> &'static [&'static str] {
    &["discreteR", "metricR", "standardR", "aleksandroffR", "stonecechR", "templateSingletons"]
}

/// FNV-1a, used for input digests in reports.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn query_close(ws: &Workspace, space_name: &str, a: &str, b: &str) -> CliResult<QueryOutcome> {
    let space = ws.space(space_name)?;
    let a = ws.set_arg(space_name, &space, a)?;
    let b = ws.set_arg(space_name, &space, b)?;
    let close = space.close(&a, &b)?;
    Ok(QueryOutcome { payload: json!({ "close": close }), ok: true })
}

pub fn query_axioms(
    ws: &Workspace,
    space_name: &str,
    budget: &AxiomBudget,
    seed: u64,
) -> CliResult<QueryOutcome> {
    let space = ws.space(space_name)?;
    let report = space.verify_axioms(budget, seed);
    let separated = space.is_separated();
    let ok = report.passed();
    Ok(QueryOutcome {
        payload: json!({
            "space": space_name,
            "seed": seed,
            "report": report,
            "separated": separated,
        }),
        ok,
    })
}

pub fn query_separated(ws: &Workspace, space_name: &str) -> CliResult<QueryOutcome> {
    let space = ws.space(space_name)?;
    Ok(QueryOutcome { payload: json!(space.is_separated()), ok: true })
}

pub fn query_germs(
    ws: &Workspace,
    space_name: &str,
    generators: &[String],
    mode: GermMode,
    limits: &Limits,
) -> CliResult<QueryOutcome> {
    let space = ws.space(space_name)?;
    let gens = generators
        .iter()
        .map(|g| ws.set_arg(space_name, &space, g))
        .collect::<CliResult<Vec<_>>>()?;
    let alg = Subalgebra::new(space.clone(), gens, limits)?;
    let germs = enumerate_germs(&alg, mode);
    let is_coproduct = matches!(space, Space::Coproduct(_));
    let germ_entries: Vec<Value> = germs
        .iter()
        .map(|g| {
            let atoms: Vec<usize> = g.atom_indices().collect();
            let class = if is_coproduct {
                match classify_germ(&alg, g) {
                    Ok(proxim_core::germs::GermClass::ComponentSupported(k)) => {
                        Some(format!("component:{k}"))
                    }
                    Ok(proxim_core::germs::GermClass::Tail) => Some("tail".to_string()),
                    Err(_) => None,
                }
            } else {
                None
            };
            match class {
                Some(c) => json!({ "atoms": atoms, "class": c }),
                None => json!({ "atoms": atoms }),
            }
        })
        .collect();
    // The pairwise matrix is quadratic in the germ count; above the cap it
    // is omitted rather than letting `mode all` on a wide algebra stall
    // the report.
    let star: Value = if germs.len() <= 128 {
        json!(germs
            .iter()
            .map(|a| {
                germs
                    .iter()
                    .map(|b| star_close(&alg, &[*a], &[*b]).expect("same algebra"))
                    .collect::<Vec<bool>>()
            })
            .collect::<Vec<_>>())
    } else {
        json!(format!("omitted: {} germs exceed the 128-germ matrix cap", germs.len()))
    };
    Ok(QueryOutcome {
        payload: json!({
            "space": space_name,
            "generators": alg.generators().iter().map(|g| alg.space().format_set(g)).collect::<Vec<_>>(),
            "atoms": alg.atoms().iter().map(|a| alg.space().format_set(a)).collect::<Vec<_>>(),
            "germs": germ_entries,
            "star_close": star,
        }),
        ok: true,
    })
}

pub fn query_dim(ws: &Workspace, space_name: &str, cap: u32) -> CliResult<QueryOutcome> {
    let space = ws.space(space_name)?;
    let payload = match brute_delta_dim(&space, cap)? {
        DimBound::Exact(n) => json!({ "space": space_name, "delta_dim": n }),
        DimBound::AtLeast(n) => json!({ "space": space_name, "delta_dim_at_least": n }),
    };
    Ok(QueryOutcome { payload, ok: true })
}

pub fn query_verify_certificate(ws: &Workspace, path: &Path, limits: &Limits) -> CliResult<QueryOutcome> {
    let raw = std::fs::read(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let def: CertificateDef = serde_json::from_slice(&raw).map_err(|e| {
        CliError::Input(format!(
            "{}: parse error at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let space = match &def.space {
        SpaceRefDef::Name(name) => ws.space(name)?,
        SpaceRefDef::Inline(sdef) => build_space(sdef)?,
    };
    let build_pairs = |pairs: &[(SetDef, SetDef)]| -> Result<Vec<(SpaceSet, SpaceSet)>, proxim_core::Error> {
        pairs
            .iter()
            .map(|(a, b)| Ok((build_set(&space, a)?, build_set(&space, b)?)))
            .collect()
    };
    let cert = DimensionCertificate {
        space: space.clone(),
        covering: DeltaCovering { space: space.clone(), pairs: build_pairs(&def.covering)? },
        refinement: DeltaCovering { space: space.clone(), pairs: build_pairs(&def.refinement)? },
        claimed_multiplicity: def.claimed_multiplicity,
    };
    let report = validate_certificate(&cert, limits);
    let ok = report.is_valid();
    Ok(QueryOutcome {
        payload: json!({
            "file": path.display().to_string(),
            "input_digest": format!("{:016x}", fnv1a(&raw)),
            "valid": ok,
            "report": report,
        }),
        ok,
    })
}
