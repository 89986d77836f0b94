use std::collections::HashSet;

use super::{Sink, Ty};
use crate::diag::Diagnostic;
use crate::model::{
    date_attribute, enum_attribute, key, resolve, AggArg, AggFn, ArithOp, AttributePath, Constraint, DataAttribute,
    DataEntity, DataEnumeration, Literal, MeasureExpr, Operand, Predicate, PrimitiveType, SourceMap,
    SpecificationModel,
};

/// Types every measure, compares the result with the declared type and
/// rejects measure reference cycles.
pub fn check_measures(model: &SpecificationModel, spans: &SourceMap) -> Vec<Diagnostic> {
    let mut s = Sink::new(spans);
    for e in &model.entities {
        for a in e.measures() {
            let at = [key::measure(&e.id, &a.id), key::attribute(&e.id, &a.id)];
            if a.constraints.iter().any(|c| matches!(c, Constraint::PrimaryKey | Constraint::ForeignKey(_))) {
                s.error("SEM011", format!("measure `{}.{}` cannot be a key", e.id, a.id), &at);
            }
            let expr = a.measure.as_ref().expect("measures() yields measures");
            let found = infer(model, e, expr, &mut s, &at);
            let declared = Ty::of_attribute(a);
            if !declared.accepts(&found) {
                s.error(
                    "SEM011",
                    format!("measure `{}.{}` is declared {declared} but computes {found}", e.id, a.id),
                    &[key::attribute_type(&e.id, &a.id), key::attribute(&e.id, &a.id)],
                );
            }
        }
        for a in e.measures() {
            if on_cycle(e, &a.id) {
                s.error(
                    "SEM010",
                    format!("measure `{}.{}` refers to itself through other measures", e.id, a.id),
                    &[key::measure(&e.id, &a.id), key::attribute(&e.id, &a.id)],
                );
            }
        }
    }
    s.finish()
}

/// Inferred type of the measure `entity.attribute`, or `None` when that is
/// not a measure.
pub fn measure_type(model: &SpecificationModel, entity: &str, attribute: &str) -> Option<Ty> {
    let e = model.entity(entity)?;
    let expr = e.attribute(attribute)?.measure.as_ref()?;
    let spans = SourceMap::new();
    Some(infer(model, e, expr, &mut Sink::new(&spans), &[]))
}

fn on_cycle(entity: &DataEntity, start: &str) -> bool {
    let refs = |id: &str| -> Vec<String> {
        entity
            .attribute(id)
            .and_then(|a| a.measure.as_ref())
            .map(|m| m.measure_refs().into_iter().map(str::to_string).collect())
            .unwrap_or_default()
    };
    let mut seen = HashSet::new();
    let mut stack = refs(start);
    while let Some(cur) = stack.pop() {
        if cur == start {
            return true;
        }
        if seen.insert(cur.clone()) {
            stack.extend(refs(&cur));
        }
    }
    false
}

fn infer(model: &SpecificationModel, e: &DataEntity, expr: &MeasureExpr, s: &mut Sink<'_>, at: &[String]) -> Ty {
    match expr {
        MeasureExpr::Literal { value } => Ty::of_literal(&Literal::Number(*value)),
        MeasureExpr::Opaque { .. } => Ty::Unknown,
        MeasureExpr::MeasureRef { id } => match e.attribute(id) {
            Some(a) if a.is_measure() => Ty::of_attribute(a),
            Some(_) => {
                s.error("SEM015", format!("`{id}` is a stored attribute of `{}`, not a measure", e.id), at);
                Ty::Unknown
            }
            None => {
                s.error("SEM015", format!("`{}` has no measure `{id}`", e.id), at);
                Ty::Unknown
            }
        },
        MeasureExpr::Arithmetic { op, left, right } => {
            let l = infer(model, e, left, s, at);
            let r = infer(model, e, right, s, at);
            for t in [&l, &r] {
                if t.is_known() && !t.is_numeric() {
                    s.error("SEM014", format!("arithmetic `{}` needs numeric operands, found {t}", op.symbol()), at);
                }
            }
            let int = Ty::Prim(PrimitiveType::Integer);
            match (op, &l, &r) {
                (ArithOp::Div, _, _) => Ty::Prim(PrimitiveType::Decimal),
                (_, Ty::Unknown, _) | (_, _, Ty::Unknown) => Ty::Unknown,
                _ if l == int && r == int => int,
                _ => Ty::Prim(PrimitiveType::Decimal),
            }
        }
        MeasureExpr::Aggregate { func, arg } => match arg {
            AggArg::Predicate(p) => {
                if *func != AggFn::Count {
                    s.error("SEM014", format!("{} takes an attribute, not a comparison", func.as_str()), at);
                }
                check_measure_predicate(model, e, p, s, at);
                Ty::Prim(PrimitiveType::Integer)
            }
            AggArg::Path(path) => aggregate(model, e, *func, path, s, at),
        },
    }
}

fn aggregate(
    model: &SpecificationModel,
    e: &DataEntity,
    func: AggFn,
    path: &AttributePath,
    s: &mut Sink<'_>,
    at: &[String],
) -> Ty {
    let target = match resolve(model, path, &e.id) {
        Ok(t) => t,
        Err(err) => {
            s.error("SEM015", format!("{} argument `{path}`: {err}", func.as_str()), at);
            return Ty::Unknown;
        }
    };
    let a = model.entity(&target.entity).and_then(|x| x.attribute(&target.attribute)).expect("resolved");
    if a.is_measure() {
        s.error("SEM014", format!("{} cannot aggregate the measure `{path}`", func.as_str()), at);
        return Ty::Unknown;
    }
    let arg = Ty::of_attribute(a);
    match func {
        AggFn::Count => Ty::Prim(PrimitiveType::Integer),
        AggFn::Sum | AggFn::Average => {
            if !arg.is_numeric() {
                s.error("SEM014", format!("{} needs a numeric attribute, `{path}` is {arg}", func.as_str()), at);
            }
            Ty::Prim(PrimitiveType::Decimal)
        }
        AggFn::Min | AggFn::Max => match arg {
            Ty::Dim(target) => match model.entity(&target).map(date_attribute) {
                Some(Ok(_)) => Ty::Prim(PrimitiveType::Date),
                Some(Err(n)) => {
                    s.error(
                        "SEM012",
                        format!(
                            "{}(`{path}`) is ambiguous: `{target}` has {n} Date attributes, exactly one is needed",
                            func.as_str()
                        ),
                        at,
                    );
                    Ty::Unknown
                }
                None => Ty::Unknown,
            },
            Ty::Prim(PrimitiveType::Boolean | PrimitiveType::Uuid) | Ty::Enum(_) => {
                s.error("SEM014", format!("{} needs an ordered attribute, `{path}` is {arg}", func.as_str()), at);
                Ty::Unknown
            }
            other => other,
        },
    }
}

fn check_measure_predicate(model: &SpecificationModel, e: &DataEntity, p: &Predicate, s: &mut Sink<'_>, at: &[String]) {
    let target = match resolve(model, &p.left, &e.id) {
        Ok(t) => t,
        Err(err) => {
            s.error("SEM015", format!("comparison `{p}`: {err}", ), at);
            return;
        }
    };
    let left = model.entity(&target.entity).and_then(|x| x.attribute(&target.attribute)).expect("resolved");
    let result = match &p.right {
        Operand::Path(path) if enum_literal(model, path).is_none() => {
            Err(format!("`{path}` is neither a literal nor an enumeration value"))
        }
        right => compare(model, left, right),
    };
    if let Err(msg) = result {
        s.error("SEM013", format!("comparison `{p}`: {msg}"), at);
    }
}

/// `E.V` where `E` is an enumeration: the enumeration and the value segment.
pub(super) fn enum_literal<'m>(model: &'m SpecificationModel, path: &'m AttributePath) -> Option<(&'m DataEnumeration, &'m str)> {
    match path.segments() {
        [e, v] => model.enumeration(e).map(|en| (en, v.as_str())),
        _ => None,
    }
}

/// Whether `left = right` is well typed. A right-hand path that is not an
/// enumeration value is left to the caller.
pub(super) fn compare(model: &SpecificationModel, left: &DataAttribute, right: &Operand) -> Result<(), String> {
    let lt = Ty::of_attribute(left);
    // A reference to a missing or non-dimension entity is reported elsewhere.
    if let Ty::Dim(x) = &lt {
        if !model.entity(x).is_some_and(DataEntity::is_dimension) {
            return Ok(());
        }
    }
    match right {
        Operand::Literal(lit) => match (&lt, lit) {
            (Ty::Dim(_), Literal::Text(_)) => Ok(()),
            (Ty::Enum(en), Literal::Text(v)) => match model.enumeration(en) {
                Some(d) if !d.values.contains(v) => Err(format!("`{v}` is not a value of `{en}`")),
                _ => Ok(()),
            },
            _ => {
                let rt = Ty::of_literal(lit);
                if lt.comparable(&rt) {
                    Ok(())
                } else {
                    Err(format!("cannot compare {lt} with {rt}"))
                }
            }
        },
        Operand::Path(path) => {
            let Some((en, value)) = enum_literal(model, path) else { return Ok(()) };
            if !en.values.iter().any(|v| v == value) {
                return Err(format!("`{value}` is not a value of `{}`", en.id));
            }
            match &lt {
                Ty::Enum(e) if *e == en.id => Ok(()),
                Ty::Dim(x) => match model.entity(x).map(|d| enum_attribute(d, &en.id)) {
                    Some(Ok(_)) => Ok(()),
                    Some(Err(n)) => Err(format!("`{x}` has {n} attributes of type `{}`, exactly one is needed", en.id)),
                    None => Ok(()),
                },
                other => Err(format!("cannot compare {other} with a value of `{}`", en.id)),
            }
        }
    }
}
