use std::fmt;

use serde::Serialize;

use super::Sink;
use crate::diag::Diagnostic;
use crate::model::{key, Constraint, SourceMap, SpecificationModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemaShape {
    Star,
    Snowflake,
}

impl fmt::Display for SchemaShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemaShape::Star => "star",
            SchemaShape::Snowflake => "snowflake",
        })
    }
}

/// `Snowflake` as soon as one dimension references another dimension.
pub fn schema_shape(model: &SpecificationModel) -> SchemaShape {
    let snowflake = model
        .dimensions()
        .flat_map(|d| d.dimension_refs())
        .any(|(_, target)| model.entity(target).is_some_and(|t| t.is_dimension()));
    if snowflake {
        SchemaShape::Snowflake
    } else {
        SchemaShape::Star
    }
}

pub fn check_dimensional(model: &SpecificationModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut s = Sink::new(spans);
    for e in &model.entities {
        for (a, target) in e.dimension_refs() {
            if model.entity(target).is_some_and(|t| !t.is_dimension()) {
                s.error(
                    "SEM001",
                    format!("`{}.{}` refers to `{target}`, which is not a Dimension", e.id, a.id),
                    &[key::attribute_type(&e.id, &a.id), key::attribute(&e.id, &a.id)],
                );
            }
        }
        for a in &e.attributes {
            for c in &a.constraints {
                if let Constraint::ForeignKey(target) = c {
                    if model.entity(target).is_some_and(|t| !t.is_dimension()) {
                        s.error(
                            "SEM001",
                            format!("foreign key of `{}.{}` targets `{target}`, which is not a Dimension", e.id, a.id),
                            &[key::attribute(&e.id, &a.id)],
                        );
                    }
                }
            }
        }
        if e.is_fact() && e.dimension_refs().next().is_none() {
            s.warning("SEM002", format!("fact `{}` references no dimension", e.id), &[key::entity(&e.id)]);
        }
        let keys: Vec<_> = e.attributes.iter().filter(|a| a.is_primary_key()).collect();
        match keys.as_slice() {
            [_] => {}
            [] => s.error("SEM003", format!("entity `{}` has no primary key", e.id), &[key::entity(&e.id)]),
            [_, extra @ ..] => {
                for a in extra {
                    s.error(
                        "SEM003",
                        format!("entity `{}` has more than one primary key (`{}`)", e.id, a.id),
                        &[key::attribute(&e.id, &a.id), key::entity(&e.id)],
                    );
                }
            }
        }
    }
    for c in &model.clusters {
        if model.entity(&c.main).is_some_and(|m| !m.is_fact()) {
            s.error(
                "SEM001",
                format!("cluster `{}` has main entity `{}`, which is not a Fact", c.id, c.main),
                &[key::cluster_member(&c.id, &c.main), key::cluster(&c.id)],
            );
        }
        for u in &c.uses {
            if model.entity(u).is_some_and(|m| !m.is_dimension()) {
                s.error(
                    "SEM001",
                    format!("cluster `{}` uses `{u}`, which is not a Dimension", c.id),
                    &[key::cluster_member(&c.id, u), key::cluster(&c.id)],
                );
            }
        }
    }
    s.finish()
}
