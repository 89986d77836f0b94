use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use super::{AttributePath, AttributeType, DataAttribute, DataEntity, PrimitiveType, SpecificationModel};

/// One join step: `entity.attribute` references `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hop {
    pub entity: String,
    pub attribute: String,
    pub target: String,
}

/// What an [`AttributePath`] denotes: an attribute of an entity, plus the
/// join path from the context's root entity to that entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedTarget {
    pub entity: String,
    pub attribute: String,
    pub hops: Vec<Hop>,
}

impl ResolvedTarget {
    /// Join alias for the target entity: hop attribute names joined by `__`,
    /// or `None` for the root entity itself.
    pub fn alias(&self) -> Option<String> {
        hops_alias(&self.hops)
    }
}

pub fn hops_alias(hops: &[Hop]) -> Option<String> {
    if hops.is_empty() {
        None
    } else {
        Some(hops.iter().map(|h| h.attribute.as_str()).collect::<Vec<_>>().join("__"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("unknown entity or cluster `{0}`")]
    UnknownContext(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("entity `{entity}` has no attribute `{attribute}`")]
    UnknownAttribute { entity: String, attribute: String },
    #[error("`{entity}.{attribute}` is not a dimension reference")]
    NotADimensionHop { entity: String, attribute: String },
    #[error("entity `{entity}` is not reachable from `{context}`")]
    NotReachable { entity: String, context: String },
    #[error("entity `{entity}` is reachable from `{context}` along more than one shortest join path")]
    AmbiguousJoin { entity: String, context: String },
}

impl ResolveError {
    /// The path segment (or context id) at which resolution failed.
    pub fn segment(&self) -> &str {
        match self {
            ResolveError::UnknownContext(s) | ResolveError::UnknownEntity(s) => s,
            ResolveError::UnknownAttribute { attribute, .. } => attribute,
            ResolveError::NotADimensionHop { attribute, .. } => attribute,
            ResolveError::NotReachable { entity, .. } | ResolveError::AmbiguousJoin { entity, .. } => entity,
        }
    }
}

struct Context<'m> {
    id: &'m str,
    root: &'m DataEntity,
    allowed: Option<BTreeSet<&'m str>>,
}

fn context<'m>(model: &'m SpecificationModel, id: &'m str) -> Result<Context<'m>, ResolveError> {
    if let Some(e) = model.entity(id) {
        return Ok(Context { id, root: e, allowed: None });
    }
    if let Some(c) = model.cluster(id) {
        let root = model.entity(&c.main).ok_or_else(|| ResolveError::UnknownEntity(c.main.clone()))?;
        return Ok(Context { id, root, allowed: Some(c.members().collect()) });
    }
    Err(ResolveError::UnknownContext(id.to_string()))
}

impl Context<'_> {
    fn admits(&self, entity: &str) -> bool {
        self.allowed.as_ref().is_none_or(|a| a.contains(entity))
    }
}

/// Join path from the root entity of `context` to `entity`.
///
/// Edges are dimension-reference attributes; the search is breadth-first and
/// the shortest path must be unique. When `context` is a cluster only its
/// members may be visited.
pub fn access_path(model: &SpecificationModel, context_id: &str, entity: &str) -> Result<Vec<Hop>, ResolveError> {
    let ctx = context(model, context_id)?;
    path_from(model, &ctx, entity)
}

fn path_from(model: &SpecificationModel, ctx: &Context<'_>, entity: &str) -> Result<Vec<Hop>, ResolveError> {
    if model.entity(entity).is_none() {
        return Err(ResolveError::UnknownEntity(entity.to_string()));
    }
    if ctx.root.id == entity {
        return Ok(Vec::new());
    }
    let not_reachable = || ResolveError::NotReachable { entity: entity.to_string(), context: ctx.id.to_string() };
    if !ctx.admits(entity) {
        return Err(not_reachable());
    }
    // dist, number of shortest paths (saturating at 2), predecessor hop
    let mut seen: HashMap<&str, (usize, u8, Option<Hop>)> = HashMap::new();
    seen.insert(ctx.root.id.as_str(), (0, 1, None));
    let mut queue = VecDeque::from([ctx.root]);
    while let Some(cur) = queue.pop_front() {
        let (d, paths, _) = seen[cur.id.as_str()].clone();
        for (attr, target) in cur.dimension_refs() {
            if !ctx.admits(target) {
                continue;
            }
            let Some(next) = model.entity(target) else { continue };
            match seen.get_mut(target) {
                None => {
                    let hop = Hop { entity: cur.id.clone(), attribute: attr.id.clone(), target: target.to_string() };
                    seen.insert(next.id.as_str(), (d + 1, paths, Some(hop)));
                    queue.push_back(next);
                }
                Some(entry) if entry.0 == d + 1 => entry.1 = entry.1.saturating_add(paths).min(2),
                Some(_) => {}
            }
        }
    }
    match seen.get(entity) {
        None => Err(not_reachable()),
        Some((_, n, _)) if *n > 1 => {
            Err(ResolveError::AmbiguousJoin { entity: entity.to_string(), context: ctx.id.to_string() })
        }
        Some(_) => {
            let mut hops = Vec::new();
            let mut cur = entity;
            while let Some((_, _, Some(hop))) = seen.get(cur) {
                cur = model.entity(&hop.entity).map(|e| e.id.as_str()).unwrap_or_default();
                hops.push(hop.clone());
            }
            hops.reverse();
            Ok(hops)
        }
    }
}

fn attribute_of<'m>(entity: &'m DataEntity, attr: &str) -> Result<&'m DataAttribute, ResolveError> {
    entity.attribute(attr).ok_or_else(|| ResolveError::UnknownAttribute {
        entity: entity.id.clone(),
        attribute: attr.to_string(),
    })
}

fn hop_through(model: &SpecificationModel, entity: &DataEntity, attr: &str) -> Result<Hop, ResolveError> {
    let a = attribute_of(entity, attr)?;
    match &a.attr_type {
        AttributeType::DimensionRef { entity: target } if model.entity(target).is_some() => {
            Ok(Hop { entity: entity.id.clone(), attribute: a.id.clone(), target: target.clone() })
        }
        AttributeType::DimensionRef { entity: target } => Err(ResolveError::UnknownEntity(target.clone())),
        _ => Err(ResolveError::NotADimensionHop { entity: entity.id.clone(), attribute: a.id.clone() }),
    }
}

/// Resolves `path` in `context` (an entity or cluster id).
///
/// * `a` is an attribute of the root entity;
/// * `E.a` is attribute `a` of entity `E`, or, when `E` is not an entity,
///   attribute `a` behind the root's dimension reference `E`;
/// * `E.r.a` hops from `E` through its dimension reference `r`.
pub fn resolve(model: &SpecificationModel, path: &AttributePath, context_id: &str) -> Result<ResolvedTarget, ResolveError> {
    let ctx = context(model, context_id)?;
    let seg = path.segments();
    let (mut hops, entity) = match seg.len() {
        1 => (Vec::new(), ctx.root),
        _ => match model.entity(&seg[0]) {
            Some(e) => (path_from(model, &ctx, &e.id)?, e),
            None if seg.len() == 2 => {
                if ctx.root.attribute(&seg[0]).is_none() {
                    return Err(ResolveError::UnknownEntity(seg[0].clone()));
                }
                let hop = hop_through(model, ctx.root, &seg[0])?;
                let target = model.entity(&hop.target).expect("checked by hop_through");
                (vec![hop], target)
            }
            None => return Err(ResolveError::UnknownEntity(seg[0].clone())),
        },
    };
    let entity = if seg.len() == 3 {
        let hop = hop_through(model, entity, &seg[1])?;
        if !ctx.admits(&hop.target) {
            return Err(ResolveError::NotReachable { entity: hop.target, context: ctx.id.to_string() });
        }
        let target = model.entity(&hop.target).expect("checked by hop_through");
        hops.push(hop);
        target
    } else {
        entity
    };
    let attr = attribute_of(entity, path.last())?;
    Ok(ResolvedTarget { entity: entity.id.clone(), attribute: attr.id.clone(), hops })
}

/// Every entity reachable from the context root (including the root).
pub fn reachable_entities(model: &SpecificationModel, context_id: &str) -> BTreeSet<String> {
    let Ok(ctx) = context(model, context_id) else { return BTreeSet::new() };
    let mut out = BTreeSet::from([ctx.root.id.clone()]);
    let mut queue = VecDeque::from([ctx.root]);
    while let Some(cur) = queue.pop_front() {
        for (_, target) in cur.dimension_refs() {
            if let Some(next) = model.entity(target) {
                if ctx.admits(target) && out.insert(next.id.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    out
}

pub fn primary_key(entity: &DataEntity) -> Option<&DataAttribute> {
    entity.attributes.iter().find(|a| a.is_primary_key())
}

/// Attribute used to label groups formed on a reference to `entity`:
/// `name` if present, else the first Date attribute, else the primary key.
pub fn label_attribute(entity: &DataEntity) -> Option<&DataAttribute> {
    entity
        .stored_attributes()
        .find(|a| a.id == "name" && !matches!(a.attr_type, AttributeType::DimensionRef { .. }))
        .or_else(|| entity.stored_attributes().find(|a| is_date(a)))
        .or_else(|| primary_key(entity))
}

fn is_date(a: &DataAttribute) -> bool {
    matches!(a.attr_type, AttributeType::Primitive { name: PrimitiveType::Date, .. })
}

/// The single Date attribute of `entity`; `Err(n)` with the number of
/// candidates when there is not exactly one.
pub fn date_attribute(entity: &DataEntity) -> Result<&DataAttribute, usize> {
    single(entity.stored_attributes().filter(|a| is_date(a)))
}

/// The single attribute of `entity` typed by enumeration `enumeration`.
pub fn enum_attribute<'e>(entity: &'e DataEntity, enumeration: &str) -> Result<&'e DataAttribute, usize> {
    single(entity.stored_attributes().filter(
        |a| matches!(&a.attr_type, AttributeType::EnumerationRef { enumeration: e } if e == enumeration),
    ))
}

fn single<'e>(mut it: impl Iterator<Item = &'e DataAttribute>) -> Result<&'e DataAttribute, usize> {
    match (it.next(), it.next()) {
        (Some(a), None) => Ok(a),
        (None, _) => Err(0),
        (Some(_), Some(_)) => Err(2 + it.count()),
    }
}
