//! JSON definitions of spaces and sets.
//!
//! Space definitions look like `{"kind": "metric", "ground": "R"}` or
//! `{"kind": "finite-relation", "points": ["a","b","c"], "close_pairs":
//! [["a","b"]]}` (reflexive pairs implicit, symmetry implied). Coproducts
//! are `{"coproduct": [space, ...]}` or `{"coproduct_template": {"base":
//! space, "index": "N"}}`. Coproduct set literals are `{"explicit": {"1":
//! "[0,1)"}, "tail": "empty"}`.

use crate::coproduct::{ComponentSet, Tail};
use crate::error::{Error, Result};
use crate::regions::FiniteSubset;
use crate::spaces::{FiniteGround, Ground, ProximityKind, Space, SpaceSet};
use crate::text::parse_region;
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SpaceDef {
    Coproduct { coproduct: Vec<SpaceDef> },
    Template { coproduct_template: TemplateDef },
    Primitive(PrimitiveDef),
}

#[derive(Debug, Clone, Deserialize)]
pub struct TemplateDef {
    pub base: Box<SpaceDef>,
    #[serde(default)]
    pub index: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PrimitiveDef {
    pub kind: String,
    #[serde(default)]
    pub ground: Option<String>,
    #[serde(default)]
    pub points: Option<Vec<String>>,
    #[serde(default)]
    pub close_pairs: Option<Vec<(String, String)>>,
}

pub fn build_space(def: &SpaceDef) -> Result<Space> {
    match def {
        SpaceDef::Coproduct { coproduct } => {
            let components = coproduct.iter().map(build_space).collect::<Result<Vec<_>>>()?;
            Space::coproduct(components)
        }
        SpaceDef::Template { coproduct_template } => {
            if let Some(index) = &coproduct_template.index {
                if index != "N" {
                    return Err(Error::InvalidInput(format!(
                        "unsupported template index set `{index}`; only \"N\" is available"
                    )));
                }
            }
            Space::template(build_space(&coproduct_template.base)?)
        }
        SpaceDef::Primitive(prim) => build_primitive(prim),
    }
}

fn build_primitive(def: &PrimitiveDef) -> Result<Space> {
    let kind_name = def.kind.as_str();
    if kind_name == "finite-relation" {
        let points = def.points.clone().ok_or_else(|| {
            Error::InvalidInput("finite-relation needs a `points` list".into())
        })?;
        let pairs = def.close_pairs.clone().unwrap_or_default();
        return Space::finite_relation(points, &pairs);
    }
    let kind = match kind_name {
        "discrete" => ProximityKind::Discrete,
        "metric" => ProximityKind::Metric,
        "standard" => ProximityKind::Standard,
        "aleksandroff" => ProximityKind::Aleksandroff,
        "stonecech" => ProximityKind::StoneCech,
        other => return Err(Error::InvalidInput(format!("unknown proximity kind `{other}`"))),
    };
    match (&def.points, def.ground.as_deref()) {
        (Some(points), _) => Space::finite(FiniteGround::new(points.clone())?, kind),
        (None, Some("R") | None) => Space::real(kind),
        (None, Some(other)) => {
            Err(Error::InvalidInput(format!("unknown ground `{other}`; use \"R\" or `points`")))
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SetDef {
    Literal(String),
    Members(Vec<String>),
    Coproduct(CoproductSetDef),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoproductSetDef {
    #[serde(default)]
    pub explicit: BTreeMap<String, ComponentSetDef>,
    #[serde(default)]
    pub tail: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ComponentSetDef {
    Literal(String),
    Members(Vec<String>),
}

/// Builds a set literal against a space. Real-line literals use the region
/// grammar; finite-ground literals are label lists (or comma-joined
/// strings); coproduct literals use explicit/tail objects, with the
/// shorthands `empty`, `full`, and `Xk` (the k-th component carrier).
pub fn build_set(space: &Space, def: &SetDef) -> Result<SpaceSet> {
    let set = match (space, def) {
        (Space::Coproduct(h), SetDef::Literal(text)) => {
            let text = text.trim();
            if text == "empty" {
                SpaceSet::Coproduct(h.empty_set())
            } else if text == "full" {
                SpaceSet::Coproduct(h.full_set())
            } else if let Some(k) = parse_carrier_shorthand(text) {
                SpaceSet::Coproduct(h.carrier_of(k)?)
            } else {
                return Err(Error::InvalidInput(format!(
                    "cannot read `{text}` as a coproduct set; use empty, full, Xk, or an explicit/tail object"
                )));
            }
        }
        (Space::Coproduct(h), SetDef::Coproduct(cdef)) => {
            let tail = match cdef.tail.as_deref() {
                None | Some("empty") => Tail::Empty,
                Some("full") => Tail::Full,
                Some(other) => {
                    return Err(Error::InvalidInput(format!(
                        "unknown tail `{other}`; use \"empty\" or \"full\""
                    )))
                }
            };
            let mut entries = BTreeMap::new();
            for (key, inner) in &cdef.explicit {
                let index: u32 = key.parse().map_err(|_| {
                    Error::InvalidInput(format!("bad component index `{key}`"))
                })?;
                let component = h.component(index)?;
                let built = build_component_set(component, inner)?;
                entries.insert(index, built);
            }
            SpaceSet::Coproduct(h.make_set(entries, tail)?)
        }
        (_, SetDef::Literal(text)) => build_ground_literal(space, text)?,
        (_, SetDef::Members(labels)) => build_members(space, labels)?,
        (_, SetDef::Coproduct(_)) => {
            return Err(Error::GroundMismatch(
                "coproduct set literal used on a non-coproduct space".into(),
            ))
        }
    };
    space.validate_set(&set)?;
    Ok(set)
}

fn parse_carrier_shorthand(text: &str) -> Option<u32> {
    let rest = text.strip_prefix('X')?;
    rest.parse().ok().filter(|k| *k >= 1)
}

fn build_component_set(space: &Space, def: &ComponentSetDef) -> Result<ComponentSet> {
    let built = match def {
        ComponentSetDef::Literal(text) => build_ground_literal(space, text)?,
        ComponentSetDef::Members(labels) => build_members(space, labels)?,
    };
    ComponentSet::try_from(built)
}

fn build_ground_literal(space: &Space, text: &str) -> Result<SpaceSet> {
    match ground_of(space)? {
        Ground::RealLine => Ok(SpaceSet::Region(parse_region(text)?)),
        Ground::Finite(g) => {
            let trimmed = text.trim();
            if trimmed == "empty" || trimmed.is_empty() {
                return Ok(SpaceSet::Finite(FiniteSubset::empty(g.len())));
            }
            if trimmed == "full" {
                return Ok(SpaceSet::Finite(FiniteSubset::full(g.len())));
            }
            let labels: Vec<String> = trimmed.split(',').map(|s| s.trim().to_string()).collect();
            build_members(space, &labels)
        }
    }
}

fn build_members(space: &Space, labels: &[String]) -> Result<SpaceSet> {
    match ground_of(space)? {
        Ground::Finite(g) => {
            let mut set = FiniteSubset::empty(g.len());
            for label in labels {
                set = set.union(&FiniteSubset::singleton(g.len(), g.index_of(label)?));
            }
            Ok(SpaceSet::Finite(set))
        }
        Ground::RealLine => Err(Error::GroundMismatch(
            "label list used on a real-line space".into(),
        )),
    }
}

fn ground_of(space: &Space) -> Result<Ground> {
    match space {
        Space::Primitive { ground, .. } => Ok(ground.clone()),
        Space::Subspace { parent, .. } => ground_of(parent),
        Space::Coproduct(_) => Err(Error::GroundMismatch("expected a non-coproduct space".into())),
    }
}
