use std::collections::HashSet;

use crate::diag::Diagnostic;
use crate::model::{
    date_attribute, enum_attribute, hops_alias, label_attribute, primary_key, resolve, AggArg, AggFn, ArithOp, AttributePath,
    AttributeType, DataAttribute, Hop, Literal, MeasureExpr, Operand, OperationBody, Predicate, SpecificationModel,
};

use super::{ident, string_literal};

const ROOT: &str = "f";

fn fail(message: impl Into<String>) -> Diagnostic {
    Diagnostic::error("GEN011", message, None)
}

/// SQL for one operation of a use case over its data source.
///
/// Slice and Dice give a one-row summary (`row_count` plus every measure of
/// the root entity) filtered by the operation's conditions; free parameters
/// become `:name` placeholders. Roll-up and Drill-down group by their path.
/// Pivot groups by the label attributes of both swapped dimensions, second
/// dimension first.
pub fn gen_olap_sql(model: &SpecificationModel, use_case: &str, operation: &str) -> Result<String, Diagnostic> {
    let uc = model.use_case(use_case).ok_or_else(|| fail(format!("unknown use case `{use_case}`")))?;
    let op = uc
        .operation(operation)
        .ok_or_else(|| fail(format!("use case `{use_case}` has no operation `{operation}`")))?;
    if op.is_underspecified() {
        return Err(Diagnostic::error(
            "GEN010",
            format!("{} `{}` of `{use_case}` names only the dimensions it touches; no SQL can be derived", op.kind, op.id),
            None,
        ));
    }
    let context = uc.data_source.as_deref().ok_or_else(|| fail(format!("use case `{use_case}` has no data source")))?;
    let root = if model.entity(context).is_some() {
        context
    } else {
        model.cluster(context).map(|c| c.main.as_str()).ok_or_else(|| fail(format!("unknown data source `{context}`")))?
    };
    let owner = model.entity(root).ok_or_else(|| fail(format!("unknown entity `{root}`")))?;
    let mut q = Query { model, context, root, joins: Vec::new(), params: Vec::new() };

    let mut summary = false;
    let mut group = Vec::new();
    let mut filters = Vec::new();
    match &op.body {
        OperationBody::Filter { predicates } => {
            summary = true;
            for p in predicates {
                filters.push(q.condition(p, true)?);
            }
        }
        OperationBody::GroupBy { path } => group.push((path.to_string(), q.group_column(path)?)),
        OperationBody::Swap { first, second } => {
            for d in [second, first] {
                let dim = model.entity(d).ok_or_else(|| fail(format!("unknown dimension `{d}`")))?;
                let label = label_attribute(dim).ok_or_else(|| fail(format!("`{d}` has no label attribute")))?;
                let path = AttributePath::new([dim.id.as_str(), label.id.as_str()]).map_err(|e| fail(e.to_string()))?;
                group.push((path.to_string(), q.group_column(&path)?));
            }
        }
        OperationBody::Underspecified { .. } => unreachable!("handled above"),
    }
    let mut measure_sql = Vec::new();
    for m in owner.measures() {
        let expr = m.measure.as_ref().expect("measure attribute has an expression");
        let sql = q.measure(expr, &mut HashSet::new())?;
        measure_sql.push(format!("{sql} AS {}", ident(&m.id)));
    }

    let mut out = format!("-- {use_case} / {} ({})\n", op.id, op.kind);
    if let OperationBody::Swap { first, second } = &op.body {
        out.push_str(&format!("-- Pivot: rows were {first}, columns were {second}; the axes are swapped below.\n"));
    }
    if !q.params.is_empty() {
        out.push_str(&format!("-- Parameters: {}\n", q.params.iter().map(|p| format!(":{p}")).collect::<Vec<_>>().join(", ")));
    }
    let columns: Vec<String> = group
        .iter()
        .map(|(name, column)| format!("{column} AS {}", ident(name)))
        .chain(summary.then(|| format!("COUNT(*) AS {}", ident("row_count"))))
        .chain(measure_sql)
        .collect();
    out.push_str("SELECT\n");
    out.push_str(&columns.iter().map(|c| format!("    {c}")).collect::<Vec<_>>().join(",\n"));
    out.push_str(&format!("\nFROM {} AS {}\n", ident(root), ident(ROOT)));
    for j in &q.joins {
        out.push_str(&format!(
            "LEFT JOIN {} AS {} ON {}.{} = {}.{}\n",
            ident(&j.table),
            ident(&j.alias),
            ident(&j.alias),
            ident(&j.key),
            ident(&j.parent),
            ident(&j.column)
        ));
    }
    if !filters.is_empty() {
        out.push_str(&format!("WHERE {}\n", filters.join("\n  AND ")));
    }
    if !group.is_empty() {
        let cols: Vec<&str> = group.iter().map(|(_, c)| c.as_str()).collect();
        out.push_str(&format!("GROUP BY {}\n", cols.join(", ")));
        out.push_str(&format!("ORDER BY {}\n", cols.join(", ")));
    }
    out.push_str(";\n");
    Ok(out)
}

struct Join {
    alias: String,
    table: String,
    key: String,
    parent: String,
    column: String,
}

struct Query<'m> {
    model: &'m SpecificationModel,
    context: &'m str,
    root: &'m str,
    joins: Vec<Join>,
    params: Vec<String>,
}

impl<'m> Query<'m> {
    /// Alias of the table reached through `hops`, adding joins as needed.
    fn join(&mut self, hops: &[Hop]) -> Result<String, Diagnostic> {
        let mut parent = ROOT.to_string();
        for i in 0..hops.len() {
            let alias = hops_alias(&hops[..=i]).expect("non-empty hops");
            if !self.joins.iter().any(|j| j.alias == alias) {
                let h = &hops[i];
                let target = self.model.entity(&h.target).ok_or_else(|| fail(format!("unknown entity `{}`", h.target)))?;
                let key = primary_key(target).ok_or_else(|| fail(format!("`{}` has no primary key", h.target)))?;
                self.joins.push(Join {
                    alias: alias.clone(),
                    table: h.target.clone(),
                    key: key.id.clone(),
                    parent: parent.clone(),
                    column: h.attribute.clone(),
                });
            }
            parent = alias;
        }
        Ok(parent)
    }

    /// Column for `path`, plus the attribute it names and the hops leading to it.
    fn column(&mut self, path: &AttributePath, context: &str) -> Result<(String, &'m DataAttribute, Vec<Hop>), Diagnostic> {
        let target = resolve(self.model, path, context).map_err(|e| fail(format!("`{path}`: {e}")))?;
        let alias = self.join(&target.hops)?;
        let attr = self
            .model
            .entity(&target.entity)
            .and_then(|e| e.attribute(&target.attribute))
            .expect("resolved attribute exists");
        Ok((format!("{}.{}", ident(&alias), ident(&attr.id)), attr, target.hops))
    }

    /// Follows the dimension reference `attr` (reached through `hops`) to
    /// attribute `next` of its target.
    fn through(&mut self, hops: &[Hop], attr: &DataAttribute, owner: &str, next: &str) -> Result<String, Diagnostic> {
        let AttributeType::DimensionRef { entity } = &attr.attr_type else { unreachable!("callers pass references") };
        let mut hops = hops.to_vec();
        hops.push(Hop { entity: owner.to_string(), attribute: attr.id.clone(), target: entity.clone() });
        let alias = self.join(&hops)?;
        Ok(format!("{}.{}", ident(&alias), ident(next)))
    }

    fn owner_of(&self, hops: &[Hop]) -> String {
        hops.last().map_or(self.root.to_string(), |h| h.target.clone())
    }

    fn group_column(&mut self, path: &AttributePath) -> Result<String, Diagnostic> {
        let (column, attr, hops) = self.column(path, self.context)?;
        if let AttributeType::DimensionRef { entity } = &attr.attr_type {
            let dim = self.model.entity(entity).ok_or_else(|| fail(format!("unknown entity `{entity}`")))?;
            let label = label_attribute(dim).ok_or_else(|| fail(format!("`{entity}` has no label attribute")))?;
            let owner = self.owner_of(&hops);
            return self.through(&hops, attr, &owner, &label.id);
        }
        Ok(column)
    }

    fn condition(&mut self, p: &Predicate, allow_params: bool) -> Result<String, Diagnostic> {
        let context = if allow_params { self.context } else { self.root };
        let (mut column, attr, hops) = self.column(&p.left, context)?;
        let right = match &p.right {
            Operand::Path(path) if enum_value(self.model, path).is_some() => {
                let (en, value) = enum_value(self.model, path).unwrap();
                if let AttributeType::DimensionRef { entity } = &attr.attr_type {
                    let dim = self.model.entity(entity).ok_or_else(|| fail(format!("unknown entity `{entity}`")))?;
                    let hop = enum_attribute(dim, en).map_err(|n| fail(format!("`{entity}` has {n} attributes of type `{en}`")))?;
                    let owner = self.owner_of(&hops);
                    column = self.through(&hops, attr, &owner, &hop.id)?;
                }
                string_literal(value)
            }
            Operand::Path(path) if allow_params => {
                let name = path.last().to_string();
                if !self.params.contains(&name) {
                    self.params.push(name.clone());
                }
                format!(":{name}")
            }
            Operand::Path(path) => return Err(fail(format!("`{path}` is not a literal"))),
            Operand::Literal(Literal::Number(n)) => Literal::Number(*n).to_string(),
            Operand::Literal(Literal::Bool(b)) => if *b { "TRUE" } else { "FALSE" }.to_string(),
            Operand::Literal(Literal::Text(s)) => string_literal(s),
        };
        Ok(format!("{column} = {right}"))
    }

    fn measure(&mut self, expr: &MeasureExpr, active: &mut HashSet<String>) -> Result<String, Diagnostic> {
        Ok(match expr {
            MeasureExpr::Literal { value } => Literal::Number(*value).to_string(),
            MeasureExpr::Opaque { .. } => "NULL".to_string(),
            MeasureExpr::MeasureRef { id } => {
                let owner = self.model.entity(self.root).expect("root exists");
                let Some(inner) = owner.attribute(id).and_then(|a| a.measure.as_ref()) else {
                    return Err(fail(format!("`{}` has no measure `{id}`", self.root)));
                };
                if !active.insert(id.clone()) {
                    return Err(fail(format!("measure `{id}` refers to itself")));
                }
                let sql = self.measure(inner, active)?;
                active.remove(id);
                sql
            }
            MeasureExpr::Arithmetic { op, left, right } => {
                let (l, r) = (self.measure(left, active)?, self.measure(right, active)?);
                match op {
                    ArithOp::Div => format!("(({l}) * 1.0 / NULLIF({r}, 0))"),
                    _ => format!("({l} {} {r})", op.symbol()),
                }
            }
            MeasureExpr::Aggregate { func: AggFn::Count, arg: AggArg::Predicate(p) } => {
                format!("COUNT(CASE WHEN {} THEN 1 END)", self.condition(p, false)?)
            }
            MeasureExpr::Aggregate { func, arg: AggArg::Predicate(_) } => {
                return Err(fail(format!("{} of a comparison", func.as_str())));
            }
            MeasureExpr::Aggregate { func, arg: AggArg::Path(path) } => {
                let root = self.root;
                let (mut column, attr, hops) = self.column(path, root)?;
                if let (AggFn::Min | AggFn::Max, AttributeType::DimensionRef { entity }) = (func, &attr.attr_type) {
                    let dim = self.model.entity(entity).ok_or_else(|| fail(format!("unknown entity `{entity}`")))?;
                    let date = date_attribute(dim)
                        .map_err(|n| fail(format!("`{entity}` has {n} Date attributes, exactly one is needed")))?;
                    let owner = self.owner_of(&hops);
                    column = self.through(&hops, attr, &owner, &date.id)?;
                }
                match func {
                    AggFn::Count => format!("COUNT({column})"),
                    AggFn::Sum => format!("COALESCE(SUM({column}), 0)"),
                    AggFn::Average => format!("AVG({column})"),
                    AggFn::Min => format!("MIN({column})"),
                    AggFn::Max => format!("MAX({column})"),
                }
            }
        })
    }
}

fn enum_value<'p>(model: &SpecificationModel, path: &'p AttributePath) -> Option<(&'p str, &'p str)> {
    match path.segments() {
        [e, v] if model.enumeration(e).is_some() => Some((e.as_str(), v.as_str())),
        _ => None,
    }
}
