use std::collections::{BTreeMap, HashMap, HashSet};

use super::cube::{coerce, Cube};
use super::{EngineError, ResultTable, Value};
use crate::model::{
    date_attribute, enum_attribute, label_attribute, resolve, AggArg, AggFn, ArithOp, AttributePath, AttributeType,
    DataAttribute, MeasureExpr, Operand, OperationBody, Predicate, ResolvedTarget, SpecificationModel,
};

/// Values for free parameters, keyed by full path (`Time.year`) or by the
/// last path segment (`year`).
pub type Bindings = HashMap<String, String>;

/// Reads one value for a row of the root table by following join hops.
#[derive(Debug, Clone)]
struct Accessor {
    /// `(column holding the key, table the key points into)` per hop.
    hops: Vec<(usize, String)>,
    entity: String,
    column: usize,
}

impl Accessor {
    fn new(cube: &Cube, root: &str, target: &ResolvedTarget) -> Result<Self, EngineError> {
        let mut hops = Vec::new();
        let mut table = root.to_string();
        for h in &target.hops {
            hops.push((column(cube, &table, &h.attribute)?, h.target.clone()));
            table = h.target.clone();
        }
        let column = column(cube, &target.entity, &target.attribute)?;
        Ok(Accessor { hops, entity: target.entity.clone(), column })
    }

    /// Continues through the dimension reference this accessor reads, to
    /// attribute `attr` of `target`.
    fn then(mut self, cube: &Cube, target: &str, attr: &str) -> Result<Self, EngineError> {
        self.hops.push((self.column, target.to_string()));
        self.column = column(cube, target, attr)?;
        self.entity = target.to_string();
        Ok(self)
    }

    fn get<'c>(&self, cube: &'c Cube, root: &str, row: usize) -> &'c Value {
        let mut table = cube.table(root).expect("root table loaded");
        let mut row = row;
        for (col, target) in &self.hops {
            let key = &table.rows[row][*col];
            let next = cube.table(target).expect("joined table loaded");
            match next.row_by_key(key) {
                Some(r) => {
                    row = r;
                    table = next;
                }
                None => return &Value::Null,
            }
        }
        &table.rows[row][self.column]
    }
}

fn column(cube: &Cube, entity: &str, attr: &str) -> Result<usize, EngineError> {
    cube.table(entity)
        .and_then(|t| t.column(attr))
        .ok_or_else(|| EngineError::NotExecutable(format!("`{entity}.{attr}` is not a stored column")))
}

fn attribute<'m>(model: &'m SpecificationModel, entity: &str, attr: &str) -> &'m DataAttribute {
    model.entity(entity).and_then(|e| e.attribute(attr)).expect("resolved attribute exists")
}

fn resolve_in(model: &SpecificationModel, path: &AttributePath, context: &str) -> Result<ResolvedTarget, EngineError> {
    resolve(model, path, context).map_err(|e| EngineError::NotExecutable(format!("`{path}`: {e}")))
}

/// Root entity of an entity or cluster context.
pub fn root_entity<'m>(model: &'m SpecificationModel, context: &'m str) -> Result<&'m str, EngineError> {
    if model.entity(context).is_some() {
        Ok(context)
    } else if let Some(c) = model.cluster(context) {
        Ok(&c.main)
    } else {
        Err(EngineError::NotExecutable(format!("unknown data source `{context}`")))
    }
}

/// `left = right` compiled against a context.
#[derive(Debug, Clone)]
struct Condition {
    left: Accessor,
    right: Value,
}

impl Condition {
    fn compile(cube: &Cube, context: &str, p: &Predicate, bindings: Option<&Bindings>) -> Result<Self, EngineError> {
        let model = cube.model();
        let root = root_entity(model, context)?;
        let target = resolve_in(model, &p.left, context)?;
        let mut left = Accessor::new(cube, root, &target)?;
        let attr = attribute(model, &target.entity, &target.attribute);
        let right = match &p.right {
            Operand::Path(path) if enum_value(model, path).is_some() => {
                let (en, value) = enum_value(model, path).unwrap();
                if let AttributeType::DimensionRef { entity } = &attr.attr_type {
                    let dim = model.entity(entity).expect("checked reference");
                    let hop = enum_attribute(dim, en).map_err(|n| {
                        EngineError::NotExecutable(format!("`{entity}` has {n} attributes of type `{en}`"))
                    })?;
                    left = left.then(cube, entity, &hop.id)?;
                }
                Value::Text(value.to_string())
            }
            Operand::Path(path) => {
                let Some(bindings) = bindings else {
                    return Err(EngineError::NotExecutable(format!("`{path}` is not a literal")));
                };
                let raw = bindings
                    .get(&path.to_string())
                    .or_else(|| bindings.get(path.last()))
                    .ok_or_else(|| EngineError::UnboundParameter(path.to_string()))?;
                coerce(model, attr, raw).map_err(|message| EngineError::BadBinding {
                    name: path.to_string(),
                    message,
                })?
            }
            Operand::Literal(lit) => literal_value(model, attr, lit)?,
        };
        Ok(Condition { left, right })
    }

    fn holds(&self, cube: &Cube, root: &str, row: usize) -> bool {
        self.left.get(cube, root, row).sql_eq(&self.right)
    }
}

fn enum_value<'m>(model: &SpecificationModel, path: &'m AttributePath) -> Option<(&'m str, &'m str)> {
    match path.segments() {
        [e, v] if model.enumeration(e).is_some() => Some((e.as_str(), v.as_str())),
        _ => None,
    }
}

fn literal_value(model: &SpecificationModel, attr: &DataAttribute, lit: &crate::model::Literal) -> Result<Value, EngineError> {
    use crate::model::{Literal, PrimitiveType};
    Ok(match lit {
        Literal::Bool(b) => Value::Bool(*b),
        Literal::Number(n) => match attr.attr_type {
            AttributeType::Primitive { name: PrimitiveType::Decimal, .. } => Value::Dec(*n),
            _ if n.fract() == 0.0 && n.abs() < 9.0e15 => Value::Int(*n as i64),
            _ => Value::Dec(*n),
        },
        Literal::Text(s) => coerce(model, attr, s)
            .map_err(|message| EngineError::BadBinding { name: attr.id.clone(), message })?,
    })
}

/// A measure ready to evaluate over groups of root rows.
#[derive(Debug, Clone)]
enum Compiled {
    Count(Accessor),
    CountIf(Condition),
    Sum(Accessor),
    Average(Accessor),
    Min(Accessor),
    Max(Accessor),
    Arith(ArithOp, Box<Compiled>, Box<Compiled>),
    Literal(f64),
    Null,
}

fn compile_measure(cube: &Cube, owner: &str, expr: &MeasureExpr, active: &mut HashSet<String>) -> Result<Compiled, EngineError> {
    let model = cube.model();
    Ok(match expr {
        MeasureExpr::Literal { value } => Compiled::Literal(*value),
        MeasureExpr::Opaque { .. } => Compiled::Null,
        MeasureExpr::MeasureRef { id } => {
            let e = model.entity(owner).expect("owner exists");
            let Some(inner) = e.attribute(id).and_then(|a| a.measure.as_ref()) else {
                return Err(EngineError::NotExecutable(format!("`{owner}` has no measure `{id}`")));
            };
            if !active.insert(id.clone()) {
                return Err(EngineError::NotExecutable(format!("measure `{id}` refers to itself")));
            }
            let c = compile_measure(cube, owner, inner, active)?;
            active.remove(id);
            c
        }
        MeasureExpr::Arithmetic { op, left, right } => Compiled::Arith(
            *op,
            Box::new(compile_measure(cube, owner, left, active)?),
            Box::new(compile_measure(cube, owner, right, active)?),
        ),
        MeasureExpr::Aggregate { func, arg: AggArg::Predicate(p) } => match func {
            AggFn::Count => Compiled::CountIf(Condition::compile(cube, owner, p, None)?),
            _ => return Err(EngineError::NotExecutable(format!("{} of a comparison", func.as_str()))),
        },
        MeasureExpr::Aggregate { func, arg: AggArg::Path(path) } => {
            let target = resolve_in(model, path, owner)?;
            let mut acc = Accessor::new(cube, owner, &target)?;
            let attr = attribute(model, &target.entity, &target.attribute);
            if let (AggFn::Min | AggFn::Max, AttributeType::DimensionRef { entity }) = (func, &attr.attr_type) {
                let dim = model.entity(entity).expect("checked reference");
                let date = date_attribute(dim).map_err(|n| {
                    EngineError::NotExecutable(format!("`{entity}` has {n} Date attributes, exactly one is needed"))
                })?;
                acc = acc.then(cube, entity, &date.id)?;
            }
            match func {
                AggFn::Count => Compiled::Count(acc),
                AggFn::Sum => Compiled::Sum(acc),
                AggFn::Average => Compiled::Average(acc),
                AggFn::Min => Compiled::Min(acc),
                AggFn::Max => Compiled::Max(acc),
            }
        }
    })
}

impl Compiled {
    fn eval(&self, cube: &Cube, root: &str, rows: &[usize]) -> Value {
        let values = |a| non_null(a, cube, root, rows);
        match self {
            Compiled::Null => Value::Null,
            Compiled::Literal(v) if v.fract() == 0.0 && v.abs() < 9.0e15 => Value::Int(*v as i64),
            Compiled::Literal(v) => Value::Dec(*v),
            Compiled::Count(a) => Value::Int(values(a).count() as i64),
            Compiled::CountIf(c) => Value::Int(rows.iter().filter(|&&r| c.holds(cube, root, r)).count() as i64),
            Compiled::Sum(a) => Value::Dec(values(a).filter_map(Value::as_f64).fold(0.0, |s, x| s + x)),
            Compiled::Average(a) => {
                let (sum, n) = values(a).filter_map(Value::as_f64).fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
                if n == 0 {
                    Value::Null
                } else {
                    Value::Dec(sum / n as f64)
                }
            }
            Compiled::Min(a) => values(a).min().cloned().unwrap_or(Value::Null),
            Compiled::Max(a) => values(a).max().cloned().unwrap_or(Value::Null),
            Compiled::Arith(op, l, r) => arith(*op, l.eval(cube, root, rows), r.eval(cube, root, rows)),
        }
    }
}

fn non_null<'a>(a: &'a Accessor, cube: &'a Cube, root: &'a str, rows: &'a [usize]) -> impl Iterator<Item = &'a Value> + 'a {
    rows.iter().map(move |&r| a.get(cube, root, r)).filter(|v| !v.is_null())
}

/// `l op r`; null in, null out. Division always yields a decimal and
/// division by zero yields null.
pub fn arith(op: ArithOp, l: Value, r: Value) -> Value {
    let (Some(a), Some(b)) = (l.as_f64(), r.as_f64()) else { return Value::Null };
    if let (Value::Int(x), Value::Int(y), false) = (&l, &r, op == ArithOp::Div) {
        let exact = match op {
            ArithOp::Add => x.checked_add(*y),
            ArithOp::Sub => x.checked_sub(*y),
            _ => x.checked_mul(*y),
        };
        if let Some(v) = exact {
            return Value::Int(v);
        }
    }
    match op {
        ArithOp::Add => Value::Dec(a + b),
        ArithOp::Sub => Value::Dec(a - b),
        ArithOp::Mul => Value::Dec(a * b),
        ArithOp::Div if b == 0.0 => Value::Null,
        ArithOp::Div => Value::Dec(a / b),
    }
}

/// Rows of the context's root entity that satisfy every condition so far.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeView {
    pub context: String,
    pub root: String,
    pub rows: Vec<usize>,
    pub conditions: Vec<String>,
}

impl Cube {
    /// The unfiltered view of an entity or cluster.
    pub fn view(&self, context: &str) -> Result<CubeView, EngineError> {
        let root = root_entity(self.model(), context)?.to_string();
        let n = self.table(&root).map_or(0, |t| t.len());
        Ok(CubeView { context: context.to_string(), root, rows: (0..n).collect(), conditions: Vec::new() })
    }

    /// Measure value of the root entity's measure `measure` over `rows`.
    pub fn evaluate_measure(&self, view: &CubeView, measure: &str, rows: &[usize]) -> Result<Value, EngineError> {
        let expr = self
            .model()
            .entity(&view.root)
            .and_then(|e| e.attribute(measure))
            .and_then(|a| a.measure.as_ref())
            .ok_or_else(|| EngineError::NotExecutable(format!("`{}` has no measure `{measure}`", view.root)))?;
        self.evaluate_expr(&view.root, expr, rows)
    }

    /// Evaluates `expr`, owned by entity `owner`, over rows of `owner`.
    pub fn evaluate_expr(&self, owner: &str, expr: &MeasureExpr, rows: &[usize]) -> Result<Value, EngineError> {
        Ok(compile_measure(self, owner, expr, &mut HashSet::new())?.eval(self, owner, rows))
    }
}

pub fn slice(cube: &Cube, view: &CubeView, predicate: &Predicate, bindings: &Bindings) -> Result<CubeView, EngineError> {
    let cond = Condition::compile(cube, &view.context, predicate, Some(bindings))?;
    let rows = view.rows.iter().copied().filter(|&r| cond.holds(cube, &view.root, r)).collect();
    let mut conditions = view.conditions.clone();
    conditions.push(predicate.to_string());
    Ok(CubeView { rows, conditions, ..view.clone() })
}

pub fn dice(cube: &Cube, view: &CubeView, predicates: &[Predicate], bindings: &Bindings) -> Result<CubeView, EngineError> {
    predicates.iter().try_fold(view.clone(), |v, p| slice(cube, &v, p, bindings))
}

/// Groups the view by `group_by` and evaluates the root entity's measures
/// `measures` per group. A path ending in a dimension reference groups by
/// the referenced dimension's label attribute.
pub fn aggregate(cube: &Cube, view: &CubeView, group_by: &[AttributePath], measures: &[&str]) -> Result<ResultTable, EngineError> {
    let model = cube.model();
    let mut keys = Vec::new();
    for path in group_by {
        let target = resolve_in(model, path, &view.context)?;
        let mut acc = Accessor::new(cube, &view.root, &target)?;
        if let AttributeType::DimensionRef { entity } = &attribute(model, &target.entity, &target.attribute).attr_type {
            let dim = model.entity(entity).expect("checked reference");
            let label = label_attribute(dim)
                .ok_or_else(|| EngineError::NotExecutable(format!("`{entity}` has no label attribute")))?;
            acc = acc.then(cube, entity, &label.id)?;
        }
        keys.push(acc);
    }
    let owner = model.entity(&view.root).expect("root exists");
    let mut compiled = Vec::new();
    for m in measures {
        let expr = owner
            .attribute(m)
            .and_then(|a| a.measure.as_ref())
            .ok_or_else(|| EngineError::NotExecutable(format!("`{}` has no measure `{m}`", view.root)))?;
        compiled.push(compile_measure(cube, &view.root, expr, &mut HashSet::new())?);
    }
    let mut groups: BTreeMap<Vec<Value>, Vec<usize>> = BTreeMap::new();
    for &r in &view.rows {
        let key = keys.iter().map(|k| k.get(cube, &view.root, r).clone()).collect();
        groups.entry(key).or_default().push(r);
    }
    if keys.is_empty() && groups.is_empty() {
        groups.insert(Vec::new(), Vec::new());
    }
    let rows = groups
        .into_iter()
        .map(|(mut key, rows)| {
            key.extend(compiled.iter().map(|c| c.eval(cube, &view.root, &rows)));
            key
        })
        .collect();
    let group_keys: Vec<String> = group_by.iter().map(ToString::to_string).collect();
    let columns = group_keys.iter().cloned().chain(measures.iter().map(|m| m.to_string())).collect();
    let axis_order = (group_keys.len() == 2).then(|| (group_keys[0].clone(), group_keys[1].clone()));
    Ok(ResultTable { group_keys, columns, rows, axis_order })
}

/// Swaps the two axes of a two-key result and re-sorts its rows.
pub fn pivot(result: &ResultTable) -> Result<ResultTable, EngineError> {
    if result.group_keys.len() != 2 {
        return Err(EngineError::NotTwoDimensional(result.group_keys.len()));
    }
    let mut out = result.clone();
    out.group_keys.swap(0, 1);
    out.columns.swap(0, 1);
    for row in &mut out.rows {
        row.swap(0, 1);
    }
    out.rows.sort_by(|a, b| a[..2].cmp(&b[..2]));
    out.axis_order = out.axis_order.map(|(r, c)| (c, r));
    Ok(out)
}

/// Measure attributes of the root entity, in declaration order.
pub fn root_measures<'m>(cube: &'m Cube, view: &CubeView) -> Vec<&'m str> {
    cube.model()
        .entity(&view.root)
        .map(|e| e.measures().map(|a| a.id.as_str()).collect())
        .unwrap_or_default()
}

/// Row count plus every root measure over the whole view.
pub fn summarize(cube: &Cube, view: &CubeView) -> Result<ResultTable, EngineError> {
    let measures = root_measures(cube, view);
    let mut table = aggregate(cube, view, &[], &measures)?;
    table.columns.insert(0, "row_count".into());
    for row in &mut table.rows {
        row.insert(0, Value::Int(view.rows.len() as i64));
    }
    Ok(table)
}

/// Executes one operation of a use case over its data source.
pub fn run_use_case(cube: &Cube, use_case: &str, operation: &str, bindings: &Bindings) -> Result<ResultTable, EngineError> {
    let model = cube.model();
    let uc = model.use_case(use_case).ok_or_else(|| EngineError::UnknownUseCase(use_case.to_string()))?;
    let op = uc.operation(operation).ok_or_else(|| EngineError::UnknownOperation {
        use_case: use_case.to_string(),
        operation: operation.to_string(),
    })?;
    let source = uc
        .data_source
        .as_deref()
        .ok_or_else(|| EngineError::NotExecutable(format!("use case `{use_case}` has no data source")))?;
    let view = cube.view(source)?;
    match &op.body {
        OperationBody::Filter { predicates } => summarize(cube, &dice(cube, &view, predicates, bindings)?),
        OperationBody::GroupBy { path } => {
            let measures = root_measures(cube, &view);
            aggregate(cube, &view, std::slice::from_ref(path), &measures)
        }
        OperationBody::Swap { first, second } => {
            let mut paths = Vec::new();
            for d in [first, second] {
                let dim = model
                    .entity(d)
                    .ok_or_else(|| EngineError::NotExecutable(format!("unknown dimension `{d}`")))?;
                let label = label_attribute(dim)
                    .ok_or_else(|| EngineError::NotExecutable(format!("`{d}` has no label attribute")))?;
                paths.push(AttributePath::new([dim.id.as_str(), label.id.as_str()]).expect("identifiers"));
            }
            let measures = root_measures(cube, &view);
            pivot(&aggregate(cube, &view, &paths, &measures)?)
        }
        OperationBody::Underspecified { .. } => Err(EngineError::NotExecutable(format!(
            "{} `{}` carries no condition, grouping or swap",
            op.kind, op.id
        ))),
    }
}
