use crate::diag::Diagnostic;
use crate::model::vocab;
use crate::model::{
    quote, sorted, Actor, AttributeType, Constraint, ContainerType, DataAttribute, DataEntity, DataEntityCluster,
    DataEnumeration, OlapKind, OlapOperation, OperationBody, SpecificationModel, UiComponent, UiContainer, UseCase,
    VocabularyExtension,
};
use crate::syntax::expr::format_expr;

use super::parse::derived_part_id;
use super::{article, KEYWORDS, PART_CLAUSES};

const UNREPRESENTABLE: &str = "CNL020";

/// Canonical CNL-BI text for `model`. Declarations come in a fixed category
/// order and are sorted by id. Content that has no CNL-BI spelling is written
/// as `//` comments and reported as warnings.
pub fn emit_cnlbi(model: &SpecificationModel) -> (String, Vec<Diagnostic>) {
    let m = sorted(model);
    let mut e = Emitter { warnings: Vec::new() };
    let mut blocks: Vec<String> = Vec::new();
    blocks.extend(m.vocabulary_extensions.iter().map(|x| e.extension(x)));
    blocks.extend(m.enumerations.iter().map(|x| e.enumeration(x)));
    blocks.extend(m.entities.iter().map(|x| e.entity(x)));
    blocks.extend(m.clusters.iter().map(|x| e.cluster(x)));
    blocks.extend(m.actors.iter().map(|x| e.actor(x)));
    blocks.extend(m.use_cases.iter().map(|x| e.use_case(x)));
    blocks.extend(m.ui_containers.iter().map(|x| e.container(x)));
    let mut text = blocks.join("\n\n");
    if !text.is_empty() {
        text.push('\n');
    }
    (text, e.warnings)
}

struct Emitter {
    warnings: Vec<Diagnostic>,
}

/// `described as ...` with the text left bare when it reads back unchanged.
fn described(text: &str) -> String {
    let bare = !text.is_empty()
        && text.trim() == text
        && !text.contains(['\n', '\r', '"'])
        && !text.contains("/*")
        && !text.ends_with('.')
        && !text.ends_with(',');
    if bare {
        format!("described as {text}")
    } else {
        format!("described as {}", quote(text))
    }
}

fn with_name(id: &str, name: &str) -> String {
    if id == name {
        id.to_string()
    } else {
        format!("{id} {}", quote(name))
    }
}

fn is_a(word: &str) -> String {
    format!("is {} {word}", article(word))
}

impl Emitter {
    fn warn(&mut self, message: String) {
        self.warnings.push(Diagnostic::warning(UNREPRESENTABLE, message, None));
    }

    fn extension(&mut self, x: &VocabularyExtension) -> String {
        let mut s = format!("Vocabulary {} {}", x.category, x.id);
        if let Some(d) = &x.description {
            s.push(' ');
            s.push_str(&described(d));
        }
        s.push('.');
        s
    }

    fn enumeration(&mut self, x: &DataEnumeration) -> String {
        let values = match x.values.as_slice() {
            [] => String::new(),
            [only] => only.clone(),
            [init @ .., last] => format!("{} and {last}", init.join(", ")),
        };
        format!("Data enumeration {} with values {values}.", with_name(&x.id, &x.name))
    }

    fn entity(&mut self, x: &DataEntity) -> String {
        let mut head = format!("DataEntity {} {}", with_name(&x.id, &x.name), is_a(x.entity_type.as_str()));
        if let Some(st) = &x.sub_type {
            head.push(' ');
            head.push_str(st);
        }
        head.push_str(" with attributes");
        let mut lines = vec![head];
        let mut items: Vec<String> = Vec::new();
        for a in &x.attributes {
            items.push(self.attribute(&x.id, a));
        }
        if let Some(d) = &x.description {
            items.push(described(d));
        }
        let n = items.len();
        for (i, item) in items.into_iter().enumerate() {
            let sep = if i + 1 == n { "." } else { "," };
            lines.push(format!("  {item}{sep}"));
        }
        lines.join("\n")
    }

    fn attribute(&mut self, entity: &str, a: &DataAttribute) -> String {
        let mut s = with_name(&a.id, &a.name);
        match &a.attr_type {
            AttributeType::Primitive { name, length } => {
                if let Some(n) = length {
                    self.warn(format!("length {n} of `{entity}.{}` has no CNL-BI syntax and was dropped", a.id));
                }
                s.push(' ');
                s.push_str(&is_a(name.as_str()));
            }
            AttributeType::EnumerationRef { enumeration } => {
                s.push(' ');
                s.push_str(&is_a(enumeration));
            }
            AttributeType::Extension { name } => {
                s.push(' ');
                s.push_str(&is_a(name));
            }
            AttributeType::DimensionRef { entity: target } => {
                s.push_str(" refers to Dimension ");
                s.push_str(target);
            }
        }
        let mut props: Vec<String> = a
            .constraints
            .iter()
            .map(|c| match c {
                Constraint::PrimaryKey => "PrimaryKey".to_string(),
                Constraint::NotNull => "NotNull".to_string(),
                Constraint::Unique => "Unique".to_string(),
                Constraint::ForeignKey(t) => format!("ForeignKey({t})"),
            })
            .collect();
        if let Some(d) = &a.default_value {
            props.push(format!("default {d}"));
        }
        if let Some(m) = &a.measure {
            if m.is_opaque() {
                self.warn(format!("measure `{entity}.{}` could not be parsed and is kept verbatim", a.id));
            }
            props.push(format!("operation {}", format_expr(m)));
        }
        if !props.is_empty() {
            s.push_str(&format!(" ({})", props.join(", ")));
        }
        s
    }

    fn cluster(&mut self, x: &DataEntityCluster) -> String {
        let mut s = format!(
            "DataEntityCluster {} {} cluster with main {}",
            with_name(&x.id, &x.name),
            is_a(x.entity_type.as_str()),
            x.main
        );
        if !x.uses.is_empty() {
            s.push_str(" and uses ");
            s.push_str(&x.uses.join(", "));
        }
        if let Some(d) = &x.description {
            s.push_str(",\n  ");
            s.push_str(&described(d));
        }
        s.push('.');
        s
    }

    fn actor(&mut self, x: &Actor) -> String {
        let mut s = format!("Actor {} {}", with_name(&x.id, &x.name), is_a(x.actor_type.as_str()));
        if let Some(p) = &x.is_a {
            s.push_str(&format!(", extends {p}"));
        }
        if let Some(st) = &x.stakeholder {
            s.push_str(&format!(", with stakeholder {st}"));
        }
        if let Some(d) = &x.description {
            s.push(' ');
            s.push_str(&described(d));
        }
        s.push('.');
        s
    }

    fn use_case(&mut self, x: &UseCase) -> String {
        let mut out = vec![format!("UseCase {} {}", with_name(&x.id, &x.name), is_a(&x.uc_type))];
        for t in &x.tags {
            self.warn(format!("tag `{}` of use case `{}` has no CNL-BI syntax", t.name, x.id));
            out.push(format!("  // tag {} = {}", quote(&t.name), quote(&t.value)));
        }
        let mut clauses: Vec<String> = Vec::new();
        if let Some(s) = &x.stakeholder {
            clauses.push(format!("stakeholder {s}"));
        }
        if let Some(a) = &x.primary_actor {
            clauses.push(format!("actor {a}"));
        }
        for a in &x.supporting_actors {
            clauses.push(format!("support actor {a}"));
        }
        if let Some(d) = &x.data_source {
            clauses.push(format!("data source {d}"));
        }
        if !x.actions.is_empty() {
            let kinds: Vec<&str> = x.actions.iter().map(|k| kind_word(*k)).collect();
            clauses.push(format!("actions {}", kinds.join(", ")));
        }
        if let Some(d) = &x.description {
            clauses.push(described(d));
        }
        let mut ops: Vec<String> = Vec::new();
        for op in &x.operations {
            match self.operation(&x.id, op) {
                Ok(text) => ops.push(text),
                Err(comment) => out.push(comment),
            }
        }
        if !ops.is_empty() {
            clauses.push(format!("performs\n{}", ops.join(",\n")));
        }
        for (i, c) in clauses.iter().enumerate() {
            let sep = if i + 1 == clauses.len() { "." } else { "," };
            out.push(format!("  {c}{sep}"));
        }
        if clauses.is_empty() {
            let last = out.last_mut().expect("head line");
            last.push('.');
        }
        out.join("\n")
    }

    /// The operation text, or a comment line when it has no CNL-BI form.
    fn operation(&mut self, uc: &str, op: &OlapOperation) -> Result<String, String> {
        let body = match &op.body {
            OperationBody::Filter { predicates } => {
                let preds: Vec<String> = predicates.iter().map(ToString::to_string).collect();
                format!("where {}", preds.join(" and "))
            }
            OperationBody::GroupBy { path } => format!("group by {path}"),
            OperationBody::Swap { first, second } => format!("swap {first} with {second}"),
            OperationBody::Underspecified { dimensions } => {
                self.warn(format!(
                    "operation `{uc}.{}` only lists the dimensions it touches and has no CNL-BI syntax",
                    op.id
                ));
                return Err(format!(
                    "  // OLAP Operation {} is {} {} over {}",
                    op.id,
                    article(kind_word(op.kind)),
                    kind_word(op.kind),
                    dimensions.join(", ")
                ));
            }
        };
        let mut s = format!(
            "    OLAP Operation {} {}\n      {body}",
            with_name(&op.id, &op.name),
            is_a(kind_word(op.kind))
        );
        if let Some(d) = &op.description {
            s.push_str("\n      ");
            s.push_str(&described(d));
        }
        Ok(s)
    }

    fn container(&mut self, x: &UiContainer) -> String {
        let ty = match x.container_type {
            ContainerType::MainWindow => "Main Window",
            ContainerType::ModalWindow => "Modal Window",
            ContainerType::Window => "Window",
        };
        let mut head = format!("UIContainer {} {}", with_name(&x.id, &x.name), is_a(ty));
        if let Some(st) = &x.sub_type {
            head.push(' ');
            head.push_str(st);
        }
        let mut lines = vec![head, "that contains".to_string()];
        for ev in &x.events {
            self.warn(format!("event `{}` of container `{}` has no CNL-BI syntax", ev.id, x.id));
            lines.push(event_comment("  ", &ev.id, &ev.event_type, ev.flow_to.as_deref()));
        }
        let comps: Vec<String> = x.components.iter().map(|c| self.component(&x.id, c)).collect();
        let n = comps.len();
        for (i, c) in comps.into_iter().enumerate() {
            let sep = if i + 1 == n { "." } else { "," };
            lines.push(format!("{c}{sep}"));
        }
        if n == 0 {
            lines.last_mut().expect("head").push('.');
        }
        lines.join("\n")
    }

    fn component(&mut self, container: &str, x: &UiComponent) -> String {
        let type_words = match &x.sub_type {
            Some(st) if vocab::default_component_type(st) == Some(x.component_type.as_str()) => st.clone(),
            Some(st) => format!("{} {st}", x.component_type),
            None => x.component_type.clone(),
        };
        let mut lines = vec![format!("  UIComponent {} {}", with_name(&x.id, &x.name), is_a(&type_words))];
        let indent = "    ";
        for t in &x.tags {
            self.warn(format!("tag `{}` of component `{container}.{}` has no CNL-BI syntax", t.name, x.id));
            lines.push(format!("{indent}// tag {} = {}", quote(&t.name), quote(&t.value)));
        }
        for ev in &x.events {
            self.warn(format!("event `{}` of component `{container}.{}` has no CNL-BI syntax", ev.id, x.id));
            lines.push(event_comment(indent, &ev.id, &ev.event_type, ev.flow_to.as_deref()));
        }
        for a in &x.actions {
            if !a.event_type.is_empty() || a.flow_to.is_some() {
                self.warn(format!(
                    "event details of action `{}` on `{container}.{}` have no CNL-BI syntax",
                    a.kind, x.id
                ));
                lines.push(event_comment(indent, &a.kind, &a.event_type, a.flow_to.as_deref()));
            }
        }
        if let Some(n) = &x.navigates_to {
            lines.push(format!("{indent}that navigates to {n}"));
        }
        if let Some(b) = &x.data_binding {
            lines.push(format!("{indent}data binding to {b}"));
        }
        self.parts(container, x, indent, &mut lines);
        if !x.actions.is_empty() {
            let kinds: Vec<&str> = x.actions.iter().map(|a| a.kind.as_str()).collect();
            lines.push(format!("{indent}actions {}", kinds.join(", ")));
        }
        if let Some(d) = &x.description {
            lines.push(format!("{indent}{}", described(d)));
        }
        lines.join("\n")
    }

    fn parts(&mut self, container: &str, x: &UiComponent, indent: &str, lines: &mut Vec<String>) {
        let mut derived = Vec::new();
        let mut first = true;
        let mut open_columns: Option<usize> = None;
        for p in &x.parts {
            let expected = derived_part_id(&derived, p.binding.last());
            if p.id != expected || p.name != p.id {
                self.warn(format!(
                    "part `{}` (\"{}\") of `{container}.{}` is named after its binding in CNL-BI",
                    p.id, p.name, x.id
                ));
                lines.push(format!("{indent}// part {} {}", p.id, quote(&p.name)));
            }
            let mut derived_part = p.clone();
            derived_part.id = expected;
            derived.push(derived_part);

            let binding = p.binding.to_string();
            let continues_list = p.binding.len() > 1 || !KEYWORDS.contains(&binding.as_str());
            if p.kind == "Column" {
                if let (Some(i), true) = (open_columns, continues_list) {
                    lines[i].push_str(", ");
                    lines[i].push_str(&binding);
                    continue;
                }
            }
            let keyword = part_keyword(&p.kind);
            let lead = if first { "with " } else { "and " };
            first = false;
            lines.push(format!("{indent}{lead}{keyword} {binding}"));
            open_columns = (p.kind == "Column").then_some(lines.len() - 1);
        }
    }
}

/// The clause keyword that introduces a part of `kind`.
fn part_keyword(kind: &str) -> String {
    match kind {
        "Column" => "columns".to_string(),
        "Option" => "option".to_string(),
        other => PART_CLAUSES
            .iter()
            .find(|(_, k)| *k == other)
            .map_or_else(|| other.to_lowercase(), |(w, _)| (*w).to_string()),
    }
}

fn event_comment(indent: &str, id: &str, event_type: &[String], flow_to: Option<&str>) -> String {
    let mut s = format!("{indent}// event {id}");
    for t in event_type {
        s.push_str(" : ");
        s.push_str(t);
    }
    if let Some(f) = flow_to {
        s.push_str(&format!(" navigationFlowTo {f}"));
    }
    s
}

fn kind_word(kind: OlapKind) -> &'static str {
    match kind {
        OlapKind::Slice => "Slice",
        OlapKind::Dice => "Dice",
        OlapKind::RollUp => "Roll-up",
        OlapKind::DrillDown => "Drill-down",
        OlapKind::Pivot => "Pivot",
    }
}
