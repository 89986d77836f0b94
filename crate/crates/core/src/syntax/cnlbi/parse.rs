use std::collections::BTreeSet;

use crate::diag::{sort_diagnostics, Diagnostic, Span};
use crate::model::vocab::{self, VocabCategory};
use crate::model::{
    is_identifier, key, Actor, ActorType, AttributePath, AttributeType, ChartAction, Constraint, ContainerType,
    DataAttribute, DataEntity, DataEntityCluster, DataEnumeration, EntityType, OlapKind, OlapOperation,
    OperationBody, Predicate, PrimitiveType, SourceMap, SpecificationModel, UiComponent, UiContainer, UiPart, UseCase,
    VocabularyExtension,
};
use crate::syntax::cursor::{describe, Cursor};
use crate::syntax::expr::{self, ExprError};
use crate::syntax::lexer::{line_end, tokenize, Token, TokenKind};
use crate::syntax::{Parsed, CNL_LEX};

use super::{DECLARATION_KEYWORDS, PART_CLAUSES};

pub fn parse_cnlbi(source: &str) -> Parsed {
    parse_cnlbi_file(source, 0)
}

pub fn parse_cnlbi_file(source: &str, file: u32) -> Parsed {
    let (tokens, lex_diags) = tokenize(source, file, &CNL_LEX);
    let tokens: Vec<Token> = tokens.into_iter().filter(|t| t.kind != TokenKind::Comment).collect();
    let mut p = Parser {
        src: source,
        c: Cursor::new(&tokens),
        model: SpecificationModel::default(),
        spans: SourceMap::new(),
        diags: Vec::new(),
        raw: Vec::new(),
        extensions: prescan_vocabulary(&tokens),
    };
    p.document();
    let Parser { model, spans, mut diags, raw, .. } = p;
    let lex_diags = lex_diags.into_iter().filter(|d| {
        d.span.is_none_or(|s| !raw.iter().any(|&(start, end)| s.offset >= start && s.offset < end))
    });
    let mut diagnostics: Vec<Diagnostic> = lex_diags.collect();
    diagnostics.append(&mut diags);
    sort_diagnostics(&mut diagnostics);
    Parsed { model, diagnostics, spans }
}

/// `Vocabulary <Category> <id>` declarations, collected up front so that
/// terms may be used before they are declared.
fn prescan_vocabulary(tokens: &[Token]) -> BTreeSet<(VocabCategory, String)> {
    let mut out = BTreeSet::new();
    for w in tokens.windows(3) {
        if w[0].is_word("Vocabulary") {
            if let Some(cat) = VocabCategory::parse(&w[1].text) {
                if w[2].is_wordlike() {
                    out.insert((cat, w[2].text.clone()));
                }
            }
        }
    }
    out
}

struct PErr {
    code: &'static str,
    span: Span,
    message: String,
}

type PResult<T> = Result<T, PErr>;

fn err<T>(code: &'static str, span: Span, message: impl Into<String>) -> PResult<T> {
    Err(PErr { code, span, message: message.into() })
}

fn expr_err(code: &'static str, e: ExprError) -> PErr {
    PErr { code, span: e.span, message: e.message }
}

struct Parser<'t> {
    src: &'t str,
    c: Cursor<'t>,
    model: SpecificationModel,
    spans: SourceMap,
    diags: Vec<Diagnostic>,
    /// Byte ranges taken verbatim as description text.
    raw: Vec<(usize, usize)>,
    extensions: BTreeSet<(VocabCategory, String)>,
}

impl<'t> Parser<'t> {
    fn document(&mut self) {
        while !self.c.at_eof() {
            if self.c.eat_punct(".") || self.c.eat_punct(",") {
                continue;
            }
            let result = match self.c.peek().text.as_str() {
                "Data" if self.c.peek().is_wordlike() => self.enumeration(),
                "DataEntity" => self.entity(),
                "Actor" => self.actor(),
                "UseCase" => self.use_case(),
                "DataEntityCluster" => self.cluster(),
                "Vocabulary" => self.vocabulary(),
                "UIContainer" => self.container(),
                _ => {
                    let t = self.c.peek();
                    err("CNL010", t.span, format!("expected a declaration, found {}", describe(t)))
                }
            };
            if let Err(e) = result {
                self.diags.push(Diagnostic::error(e.code, e.message, Some(e.span)));
                self.recover();
            }
        }
    }

    /// Skips to the next declaration keyword that starts a line.
    fn recover(&mut self) {
        self.c.advance();
        while !self.c.at_eof() {
            let t = self.c.peek();
            let line_start = self.c.prev().is_none_or(|p| p.span.line < t.span.line);
            if line_start && DECLARATION_KEYWORDS.iter().any(|k| t.is_word(k)) {
                break;
            }
            self.c.advance();
        }
    }

    // ---- small helpers ----------------------------------------------------

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        let t = self.c.peek();
        if t.is_word(w) {
            self.c.advance();
            Ok(t.span)
        } else {
            err("CNL010", t.span, format!("expected `{w}`, found {}", describe(t)))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<&'t Token> {
        let t = self.c.peek();
        if t.is_wordlike() && is_identifier(&t.text) {
            self.c.advance();
            Ok(t)
        } else {
            err("CNL010", t.span, format!("expected {what}, found {}", describe(t)))
        }
    }

    /// A word in a type position (any keyword or identifier).
    fn word(&mut self, what: &str) -> PResult<&'t Token> {
        let t = self.c.peek();
        if t.is_wordlike() {
            self.c.advance();
            Ok(t)
        } else {
            err("CNL010", t.span, format!("expected {what}, found {}", describe(t)))
        }
    }

    fn display_name(&mut self) -> Option<String> {
        let t = self.c.peek();
        (t.kind == TokenKind::QuotedString).then(|| {
            self.c.advance();
            t.string_value()
        })
    }

    /// `is a` / `is an`.
    fn is_a(&mut self) -> PResult<()> {
        self.expect_word("is")?;
        if self.c.eat_word("a") || self.c.eat_word("an") {
            Ok(())
        } else {
            let t = self.c.peek();
            err("CNL010", t.span, format!("expected `a` or `an`, found {}", describe(t)))
        }
    }

    fn at_described(&self) -> bool {
        self.c.at_word("described") && self.c.peek_n(1).is_word("as")
    }

    /// `described as` followed by a quoted string or by the rest of the line.
    fn description(&mut self) -> PResult<String> {
        self.c.advance();
        let as_tok = self.c.advance();
        let next = self.c.peek();
        if next.kind == TokenKind::QuotedString && next.span.line == as_tok.span.line {
            self.c.advance();
            return Ok(next.string_value());
        }
        let start = as_tok.span.end();
        let end = line_end(self.src, start);
        let mut text = self.src[start..end].trim();
        if let Some(stripped) = text.strip_suffix('.').or_else(|| text.strip_suffix(',')) {
            text = stripped.trim_end();
        }
        if text.is_empty() {
            return err("CNL010", as_tok.span, "expected description text after `described as`");
        }
        self.raw.push((start, end));
        self.c.skip_to_offset(end);
        Ok(text.to_string())
    }

    fn path(&mut self, code: &'static str) -> PResult<(AttributePath, Span)> {
        self.c.path().map_err(|(span, message)| PErr { code, span, message })
    }

    fn eat_separators(&mut self) {
        while self.c.eat_punct(",") {}
    }

    fn knows(&self, category: VocabCategory, term: &str) -> bool {
        vocab::is_builtin(category, term) || self.extensions.contains(&(category, term.to_string()))
    }

    // ---- enumerations -----------------------------------------------------

    fn enumeration(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        self.expect_word("enumeration")?;
        let id = self.ident("an enumeration name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.expect_word("with")?;
        self.expect_word("values")?;
        let mut values = Vec::new();
        let mut value_spans = Vec::new();
        loop {
            let v = self.ident("an enumeration value")?;
            values.push(v.text.clone());
            value_spans.push(v.span);
            if self.c.eat_punct(",") {
                self.c.eat_word("and");
            } else if !self.c.eat_word("and") {
                break;
            }
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::enumeration(&id.text), start.to(end));
        for (v, s) in values.iter().zip(value_spans) {
            self.spans.insert(key::enum_value(&id.text, v), s);
        }
        self.model.enumerations.push(DataEnumeration { id: id.text.clone(), name, values });
        Ok(())
    }

    // ---- entities ---------------------------------------------------------

    fn entity(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("an entity name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.is_a()?;
        let ty = self.word("an entity type")?;
        let Some(entity_type) = EntityType::parse(&ty.text) else {
            return err(
                "CNL011",
                ty.span,
                format!("unknown entity type `{}`; expected Reference, Master or Transaction", ty.text),
            );
        };
        let mut sub_type = None;
        let next = self.c.peek();
        if next.is_wordlike() && !next.is_word("with") {
            self.c.advance();
            let canonical = vocab::normalize(VocabCategory::DataEntitySubType, &next.text);
            sub_type = Some(canonical.map_or_else(|| next.text.clone(), str::to_string));
        }
        self.eat_separators();
        self.expect_word("with")?;
        self.expect_word("attributes")?;
        let mut attributes = Vec::new();
        let mut description = None;
        loop {
            if self.at_described() {
                description = Some(self.description()?);
                break;
            }
            attributes.push(self.attribute(&id.text)?);
            if self.c.eat_punct(",") {
                let t = self.c.peek();
                if t.is_punct(".") || t.kind == TokenKind::Eof || self.at_declaration_start() {
                    break;
                }
                continue;
            }
            if self.at_described() {
                continue;
            }
            let t = self.c.peek();
            if t.is_punct(".") || t.kind == TokenKind::Eof || self.at_declaration_start() {
                break;
            }
            return err("CNL010", t.span, format!("expected `,` or `.` after an attribute, found {}", describe(t)));
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::entity(&id.text), start.to(end));
        self.model.entities.push(DataEntity {
            id: id.text.clone(),
            name,
            entity_type,
            sub_type,
            attributes,
            description,
        });
        Ok(())
    }

    fn at_declaration_start(&self) -> bool {
        DECLARATION_KEYWORDS.iter().any(|k| self.c.at_word(k))
    }

    fn attribute(&mut self, entity: &str) -> PResult<DataAttribute> {
        let t = self.c.peek();
        if t.kind == TokenKind::Eof {
            return err("CNL010", t.span, "expected an attribute, found end of input");
        }
        let id = self.ident("an attribute name")?;
        let name = self.display_name();
        let (attr_type, type_span) = if self.c.at_word("is") {
            self.is_a()?;
            let ty = self.word("an attribute type")?;
            let attr_type = if let Some(p) = PrimitiveType::parse(&ty.text) {
                AttributeType::primitive(p)
            } else if self.extensions.contains(&(VocabCategory::DataAttributeType, ty.text.clone())) {
                AttributeType::Extension { name: ty.text.clone() }
            } else if is_identifier(&ty.text) {
                AttributeType::EnumerationRef { enumeration: ty.text.clone() }
            } else {
                return err("CNL011", ty.span, format!("unknown attribute type `{}`", ty.text));
            };
            (attr_type, ty.span)
        } else if self.c.eat_word("refers") {
            self.expect_word("to")?;
            self.expect_word("Dimension")?;
            let target = self.ident("a dimension name")?;
            (AttributeType::DimensionRef { entity: target.text.clone() }, target.span)
        } else {
            let t = self.c.peek();
            return err("CNL010", t.span, format!("expected `is a` or `refers to Dimension`, found {}", describe(t)));
        };
        let mut attr = DataAttribute::new(id.text.clone(), attr_type);
        if let Some(name) = name {
            attr.name = name;
        }
        self.spans.insert(key::attribute(entity, &id.text), id.span);
        self.spans.insert(key::attribute_type(entity, &id.text), type_span);
        if self.c.at_punct("(") {
            self.properties(entity, &mut attr)?;
        }
        attr.normalize_constraints();
        Ok(attr)
    }

    /// `( PrimaryKey, NotNull, ForeignKey(E), operation EXPR, default LIT )`.
    fn properties(&mut self, entity: &str, attr: &mut DataAttribute) -> PResult<()> {
        let open = self.c.advance().span;
        loop {
            let t = self.c.peek();
            if self.c.eat_punct(")") {
                return Ok(());
            }
            if self.c.eat_punct(",") {
                continue;
            }
            let constraint = match t.text.as_str() {
                _ if !t.is_wordlike() => None,
                "PrimaryKey" => Some(Constraint::PrimaryKey),
                "NotNull" => Some(Constraint::NotNull),
                "Unique" => Some(Constraint::Unique),
                "ForeignKey" => {
                    self.c.advance();
                    if !self.c.eat_punct("(") {
                        let n = self.c.peek();
                        return err("CNL012", n.span, format!("expected `(` after ForeignKey, found {}", describe(n)));
                    }
                    let target = self.ident("an entity name").map_err(|e| PErr { code: "CNL012", ..e })?;
                    if !self.c.eat_punct(")") {
                        let n = self.c.peek();
                        return err("CNL012", n.span, format!("expected `)`, found {}", describe(n)));
                    }
                    self.spans.insert(key::constraint(entity, &attr.id, attr.constraints.len()), t.span.to(target.span));
                    attr.constraints.push(Constraint::ForeignKey(target.text.clone()));
                    continue;
                }
                "operation" => {
                    self.c.advance();
                    let start = self.c.peek().span;
                    let e = expr::parse_expr(&mut self.c).map_err(|e| expr_err("CNL013", e))?;
                    let end = self.c.prev().map_or(start, |t| t.span);
                    self.spans.insert(key::measure(entity, &attr.id), start.to(end));
                    if !self.c.at_punct(")") && !self.c.at_punct(",") {
                        let n = self.c.peek();
                        return err("CNL013", n.span, format!("unexpected {} in measure expression", describe(n)));
                    }
                    attr.measure = Some(e);
                    continue;
                }
                "default" => {
                    self.c.advance();
                    let lit = match expr::operand(&mut self.c) {
                        Ok(crate::model::Operand::Literal(l)) => l,
                        _ => {
                            return err("CNL012", self.c.peek().span, "expected a literal default value");
                        }
                    };
                    attr.default_value = Some(lit);
                    continue;
                }
                _ => None,
            };
            match constraint {
                Some(c) => {
                    self.c.advance();
                    self.spans.insert(key::constraint(entity, &attr.id, attr.constraints.len()), t.span);
                    attr.constraints.push(c);
                }
                None if t.kind == TokenKind::Eof => {
                    return err("CNL012", open, "unclosed constraint list");
                }
                None => {
                    return err("CNL012", t.span, format!("unknown constraint {}", describe(t)));
                }
            }
        }
    }

    // ---- actors -----------------------------------------------------------

    fn actor(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("an actor name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.is_a()?;
        let ty = self.word("an actor type")?;
        let Some(actor_type) = ActorType::parse(&ty.text) else {
            return err("CNL011", ty.span, format!("unknown actor type `{}`; expected User or ExternalSystem", ty.text));
        };
        let mut actor = Actor { id: id.text.clone(), name, actor_type, stakeholder: None, is_a: None, description: None };
        loop {
            self.eat_separators();
            if self.c.eat_word("extends") {
                let parent = self.ident("an actor name")?;
                self.spans.insert(key::actor_is_a(&id.text), parent.span);
                actor.is_a = Some(parent.text.clone());
            } else if self.c.at_word("stakeholder") || (self.c.at_word("with") && self.c.peek_n(1).is_word("stakeholder")) {
                self.c.eat_word("with");
                self.c.advance();
                actor.stakeholder = Some(self.ident("a stakeholder name")?.text.clone());
            } else if self.at_described() {
                actor.description = Some(self.description()?);
            } else {
                break;
            }
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::actor(&id.text), start.to(end));
        self.model.actors.push(actor);
        Ok(())
    }

    // ---- use cases --------------------------------------------------------

    fn use_case(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("a use case name")?;
        let uc_id = id.text.clone();
        let name = self.display_name().unwrap_or_else(|| uc_id.clone());
        self.is_a()?;
        let ty = self.word("a use case type")?;
        let uc_type = vocab::normalize(VocabCategory::UseCaseType, &ty.text).map_or_else(|| ty.text.clone(), str::to_string);
        self.spans.insert(key::use_case_type(&uc_id), ty.span);
        let mut uc = UseCase {
            id: uc_id.clone(),
            name,
            uc_type,
            stakeholder: None,
            primary_actor: None,
            supporting_actors: Vec::new(),
            data_source: None,
            actions: Vec::new(),
            operations: Vec::new(),
            tags: Vec::new(),
            description: None,
        };
        self.c.eat_word("with");
        loop {
            self.eat_separators();
            let t = self.c.peek();
            if self.c.eat_word("stakeholder") {
                uc.stakeholder = Some(self.ident("a stakeholder name")?.text.clone());
            } else if self.c.eat_word("actor") {
                let a = self.ident("an actor name")?;
                if uc.primary_actor.is_some() {
                    return err("CNL010", t.span, "a use case has one primary actor; use `support actor` for others");
                }
                self.spans.insert(key::use_case_actor(&uc_id, &a.text), a.span);
                uc.primary_actor = Some(a.text.clone());
            } else if (t.is_word("support") || t.is_word("supporting")) && self.c.peek_n(1).is_word("actor") {
                self.c.advance();
                self.c.advance();
                let a = self.ident("an actor name")?;
                self.spans.insert(key::use_case_actor(&uc_id, &a.text), a.span);
                uc.supporting_actors.push(a.text.clone());
            } else if t.is_word("data") && self.c.peek_n(1).is_word("source") {
                self.c.advance();
                self.c.advance();
                let d = self.ident("an entity or cluster name")?;
                self.spans.insert(key::data_source(&uc_id), d.span);
                uc.data_source = Some(d.text.clone());
            } else if self.c.eat_word("actions") {
                loop {
                    let k = self.c.peek();
                    let Some(kind) = olap_kind_word(&k.text).filter(|_| k.is_wordlike()) else {
                        return err("CNL011", k.span, format!("unknown OLAP operation kind {}", describe(k)));
                    };
                    self.c.advance();
                    uc.actions.push(kind);
                    if self.c.at_punct(",") && olap_kind_word(&self.c.peek_n(1).text).is_some() {
                        self.c.advance();
                    } else {
                        break;
                    }
                }
            } else if self.c.eat_word("performs") {
                self.operations(&mut uc)?;
            } else if self.at_described() {
                if uc.description.is_some() {
                    return err("CNL010", t.span, "the use case already has a description");
                }
                uc.description = Some(self.description()?);
            } else {
                break;
            }
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::use_case(&uc_id), start.to(end));
        self.model.use_cases.push(uc);
        Ok(())
    }

    fn at_operation_start(&self) -> bool {
        let t = self.c.peek();
        if (t.is_word("OLAP") || t.is_word("Olap")) && self.c.peek_n(1).is_word("Operation") {
            return true;
        }
        if olap_kind_word(&t.text).is_none() || !t.is_wordlike() || !self.c.peek_n(1).is_wordlike() {
            return false;
        }
        let after = if self.c.peek_n(2).kind == TokenKind::QuotedString { 3 } else { 2 };
        self.c.peek_n(after).is_word("is")
    }

    fn operations(&mut self, uc: &mut UseCase) -> PResult<()> {
        loop {
            self.eat_separators();
            if !self.at_operation_start() {
                return Ok(());
            }
            let op = self.operation(&uc.id)?;
            uc.operations.push(op);
        }
    }

    fn operation(&mut self, uc: &str) -> PResult<OlapOperation> {
        let start = self.c.peek().span;
        let (id, name, kind, kind_span) = if self.c.at_word("OLAP") || self.c.at_word("Olap") {
            self.c.advance();
            self.c.advance();
            let id = self.ident("an operation name")?;
            let name = self.display_name();
            self.is_a()?;
            let k = self.word("an OLAP operation kind")?;
            let Some(kind) = olap_kind_word(&k.text) else {
                return err("CNL011", k.span, format!("unknown OLAP operation kind `{}`", k.text));
            };
            (id, name, kind, k.span)
        } else {
            let k = self.c.advance();
            let kind = olap_kind_word(&k.text).expect("checked by at_operation_start");
            let id = self.ident("an operation name")?;
            let name = self.display_name();
            self.is_a()?;
            if !(self.c.eat_word("OLAP") || self.c.eat_word("Olap")) {
                let t = self.c.peek();
                return err("CNL010", t.span, format!("expected `OLAP operation`, found {}", describe(t)));
            }
            if !(self.c.eat_word("operation") || self.c.eat_word("Operation")) {
                let t = self.c.peek();
                return err("CNL010", t.span, format!("expected `operation`, found {}", describe(t)));
            }
            (id, name, kind, k.span)
        };
        let op_id = id.text.clone();
        let body_start = self.c.peek().span;
        let body = if self.c.eat_word("where") {
            let mut predicates = Vec::new();
            loop {
                let (left, left_span) = self.path("CNL014")?;
                if !self.c.eat_punct("=") {
                    let t = self.c.peek();
                    return err("CNL014", t.span, format!("expected `=` in where clause, found {}", describe(t)));
                }
                let right_start = self.c.peek().span;
                let right = expr::operand(&mut self.c).map_err(|e| expr_err("CNL014", e))?;
                let right_end = self.c.prev().map_or(right_start, |t| t.span);
                let i = predicates.len();
                self.spans.insert(key::predicate(uc, &op_id, i), left_span.to(right_end));
                self.spans.insert(key::predicate_right(uc, &op_id, i), right_start.to(right_end));
                predicates.push(Predicate { left, right });
                if !self.c.eat_word("and") {
                    break;
                }
            }
            OperationBody::Filter { predicates }
        } else if self.c.eat_word("group") {
            self.expect_word("by")?;
            let (path, span) = self.path("CNL010")?;
            self.spans.insert(key::group_by(uc, &op_id), span);
            OperationBody::GroupBy { path }
        } else if self.c.eat_word("swap") {
            let first = self.ident("a dimension name")?;
            self.expect_word("with")?;
            let second = self.ident("a dimension name")?;
            self.spans.insert(key::swap(uc, &op_id), first.span.to(second.span));
            OperationBody::Swap { first: first.text.clone(), second: second.text.clone() }
        } else {
            let t = self.c.peek();
            return err("CNL010", t.span, format!("expected `where`, `group by` or `swap`, found {}", describe(t)));
        };
        let mut op = OlapOperation::new(op_id.clone(), kind, body).map_err(|m| PErr {
            code: "CNL010",
            span: kind_span.to(body_start),
            message: m.to_string(),
        })?;
        if let Some(name) = name {
            op.name = name;
        }
        // An outdented `described as` belongs to the enclosing use case.
        if self.at_described() && self.c.peek().span.col >= start.col {
            op.description = Some(self.description()?);
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::operation(uc, &op_id), start.to(end));
        Ok(op)
    }

    // ---- clusters and vocabulary -----------------------------------------

    fn cluster(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("a cluster name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.is_a()?;
        let ty = self.word("an entity type")?;
        let Some(entity_type) = EntityType::parse(&ty.text) else {
            return err("CNL011", ty.span, format!("unknown entity type `{}`", ty.text));
        };
        self.c.eat_word("cluster");
        self.eat_separators();
        self.expect_word("with")?;
        self.expect_word("main")?;
        let main = self.ident("an entity name")?;
        self.spans.insert(key::cluster_member(&id.text, &main.text), main.span);
        let mut uses = Vec::new();
        self.eat_separators();
        self.c.eat_word("and");
        if self.c.eat_word("uses") {
            loop {
                let u = self.ident("an entity name")?;
                self.spans.insert(key::cluster_member(&id.text, &u.text), u.span);
                uses.push(u.text.clone());
                let next = self.c.peek_n(1);
                let continues = (self.c.at_punct(",") || self.c.at_word("and"))
                    && next.is_wordlike()
                    && !next.is_word("described");
                if !continues {
                    break;
                }
                self.c.advance();
            }
        }
        self.eat_separators();
        let description = if self.at_described() { Some(self.description()?) } else { None };
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::cluster(&id.text), start.to(end));
        self.model.clusters.push(DataEntityCluster {
            id: id.text.clone(),
            name,
            entity_type,
            main: main.text.clone(),
            uses,
            description,
        });
        Ok(())
    }

    fn vocabulary(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let cat = self.word("a vocabulary category")?;
        let Some(category) = VocabCategory::parse(&cat.text) else {
            return err("CNL011", cat.span, format!("unknown vocabulary category `{}`", cat.text));
        };
        let id = self.ident("a term")?;
        self.eat_separators();
        let description = if self.at_described() { Some(self.description()?) } else { None };
        self.spans.insert(key::extension(category.as_str(), &id.text), start.to(id.span));
        self.model.vocabulary_extensions.push(VocabularyExtension { category, id: id.text.clone(), description });
        Ok(())
    }

    // ---- user interface ---------------------------------------------------

    fn container(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("a container name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.is_a()?;
        let t = self.word("a container type")?;
        let container_type = match t.text.as_str() {
            "Main" => {
                self.expect_word("Window")?;
                ContainerType::MainWindow
            }
            "Modal" => {
                self.expect_word("Window")?;
                ContainerType::ModalWindow
            }
            other => match ContainerType::parse(other) {
                Some(ct) => ct,
                None => {
                    return err("CNL011", t.span, format!("unknown container type `{other}`; expected Main Window, Modal Window or Window"));
                }
            },
        };
        let mut sub_type = None;
        let next = self.c.peek();
        if next.is_wordlike() && !next.is_word("that") {
            self.c.advance();
            sub_type = Some(next.text.clone());
        }
        self.eat_separators();
        self.expect_word("that")?;
        self.expect_word("contains")?;
        let mut container = UiContainer {
            id: id.text.clone(),
            name,
            container_type,
            sub_type,
            components: Vec::new(),
            events: Vec::new(),
        };
        loop {
            self.eat_separators();
            if !self.c.at_word("UIComponent") {
                break;
            }
            let comp = self.component(&id.text)?;
            container.components.push(comp);
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::container(&id.text), start.to(end));
        self.model.ui_containers.push(container);
        Ok(())
    }

    fn component(&mut self, container: &str) -> PResult<UiComponent> {
        let start = self.c.advance().span;
        let id = self.ident("a component name")?;
        let cid = id.text.clone();
        let name = self.display_name();
        self.is_a()?;
        let w1 = self.word("a component type")?;
        let mut type_span = w1.span;
        let (component_type, sub_type) = if self.knows(VocabCategory::UIComponentType, &w1.text) {
            let next = self.c.peek();
            if next.is_wordlike() && self.knows(VocabCategory::UIComponentSubType, &next.text) {
                self.c.advance();
                type_span = type_span.to(next.span);
                (w1.text.clone(), Some(next.text.clone()))
            } else {
                (w1.text.clone(), None)
            }
        } else if let Some(ty) = vocab::default_component_type(&w1.text) {
            (ty.to_string(), Some(w1.text.clone()))
        } else {
            (w1.text.clone(), None)
        };
        let mut comp = UiComponent::new(cid.clone(), component_type);
        comp.sub_type = sub_type;
        if let Some(name) = name {
            comp.name = name;
        }
        self.spans.insert(key::component_type(container, &cid), type_span);
        loop {
            self.eat_separators();
            if self.c.at_word("and") && self.at_component_clause(1) {
                self.c.advance();
            }
            let t = self.c.peek();
            if t.is_word("that") && self.c.peek_n(1).is_word("navigates") {
                self.c.advance();
                self.c.advance();
                self.expect_word("to")?;
                let target = self.ident("a container name")?;
                self.spans.insert(key::navigation(container, &cid), target.span);
                comp.navigates_to = Some(target.text.clone());
            } else if t.is_word("data") && self.c.peek_n(1).is_word("binding") {
                self.c.advance();
                self.c.advance();
                self.expect_word("to")?;
                let target = self.ident("an entity or cluster name")?;
                self.spans.insert(key::binding(container, &cid), target.span);
                comp.data_binding = Some(target.text.clone());
            } else if self.c.eat_word("with") {
                continue;
            } else if let Some((kind, list)) = self.part_clause() {
                self.parts(container, &mut comp, kind, list)?;
            } else if self.c.eat_word("actions") {
                loop {
                    let a = self.word("a chart action")?;
                    let kind = vocab::chart_action(&a.text).map_or_else(|| a.text.clone(), str::to_string);
                    self.spans.insert(key::action(container, &cid, comp.actions.len()), a.span);
                    comp.actions.push(ChartAction::new(kind));
                    if self.c.at_punct(",") && self.c.peek_n(1).kind == TokenKind::Identifier {
                        self.c.advance();
                    } else {
                        break;
                    }
                }
            } else if self.at_described() {
                comp.description = Some(self.description()?);
            } else {
                break;
            }
        }
        let end = self.c.prev().map_or(start, |t| t.span);
        self.spans.insert(key::component(container, &cid), start.to(end));
        Ok(comp)
    }

    /// True if the token `n` ahead opens a component clause.
    fn at_component_clause(&self, n: usize) -> bool {
        let t = self.c.peek_n(n);
        let next = self.c.peek_n(n + 1);
        PART_CLAUSES.iter().any(|(w, _)| t.is_word(w))
            || (t.is_word("segments") && next.is_word("defined"))
            || ((t.is_word("starting") || t.is_word("ending")) && next.is_word("at"))
            || (t.is_word("that") && next.is_word("navigates"))
            || (t.is_word("data") && next.is_word("binding"))
            || t.is_word("actions")
            || t.is_word("with")
            || (t.is_word("described") && next.is_word("as"))
    }

    /// Consumes a part clause keyword; returns the part kind and whether the
    /// clause takes a comma-separated list.
    fn part_clause(&mut self) -> Option<(&'static str, bool)> {
        let t = self.c.peek();
        if !t.is_wordlike() {
            return None;
        }
        if let Some((_, kind)) = PART_CLAUSES.iter().find(|(w, _)| t.text == *w) {
            self.c.advance();
            return Some((kind, true));
        }
        let next = self.c.peek_n(1);
        if t.text == "segments" && next.is_word("defined") && self.c.peek_n(2).is_word("by") {
            self.c.advance();
            self.c.advance();
            self.c.advance();
            return Some(("Label", true));
        }
        if (t.text == "starting" || t.text == "ending") && next.is_word("at") {
            self.c.advance();
            self.c.advance();
            return Some(("Option", false));
        }
        None
    }

    fn parts(&mut self, container: &str, comp: &mut UiComponent, kind: &str, list: bool) -> PResult<()> {
        loop {
            let (binding, span) = self.path("CNL010")?;
            let id = derived_part_id(&comp.parts, binding.last());
            self.spans.insert(key::part(container, &comp.id, comp.parts.len()), span);
            comp.parts.push(UiPart { name: id.clone(), id, kind: kind.to_string(), binding });
            let continues = list
                && self.c.at_punct(",")
                && (self.c.peek_n(1).kind == TokenKind::Identifier || {
                    let mut probe = self.c.clone();
                    probe.advance();
                    probe.at_dotted_path()
                });
            if !continues {
                return Ok(());
            }
            self.c.advance();
        }
    }
}

/// Part ids are the last binding segment, suffixed `_2`, `_3`, ... when
/// that id is already taken in the component.
pub(crate) fn derived_part_id(existing: &[UiPart], base: &str) -> String {
    if !existing.iter().any(|p| p.id == base) {
        return base.to_string();
    }
    (2..).map(|n| format!("{base}_{n}")).find(|c| !existing.iter().any(|p| &p.id == c)).expect("unbounded")
}

/// OLAP kinds as spelled in CNL-BI sentences.
pub(crate) fn olap_kind_word(word: &str) -> Option<OlapKind> {
    match word {
        "DrillDown" => Some(OlapKind::DrillDown),
        other => vocab::olap_kind(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AggArg, AggFn, ArithOp, MeasureExpr, Operand};

    fn parse_ok(src: &str) -> SpecificationModel {
        let p = parse_cnlbi(src);
        assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
        p.model
    }

    const INSTITUTION: &str = "DataEntity Institution is a Master Dimension with attributes
id is a UUID (PrimaryKey),
code is a String (NotNull),
name is a String (NotNull),
latitude is a Decimal (NotNull),
longitude is a Decimal (NotNull),
city refers to Dimension City (NotNull),
type is an InstitutionTypes (NotNull),
described as this dimension represents the details of an institution.";

    #[test]
    fn institution_entity() {
        let m = parse_ok(INSTITUTION);
        let e = &m.entities[0];
        assert_eq!(e.id, "Institution");
        assert_eq!(e.name, "Institution");
        assert_eq!(e.entity_type, EntityType::Master);
        assert_eq!(e.sub_type.as_deref(), Some("Dimension"));
        assert_eq!(e.attributes.len(), 7);
        assert_eq!(e.description.as_deref(), Some("this dimension represents the details of an institution"));
        assert_eq!(e.attributes[5].attr_type, AttributeType::DimensionRef { entity: "City".into() });
        assert_eq!(e.attributes[6].attr_type, AttributeType::EnumerationRef { enumeration: "InstitutionTypes".into() });
        assert_eq!(e.attributes[0].constraints, vec![Constraint::PrimaryKey]);
    }

    #[test]
    fn measures_and_transactional_alias() {
        let m = parse_ok(
            "DataEntity F is a Transactional Fact with attributes
             id is a UUID (PrimaryKey),
             state refers to Dimension S (NotNull),
             Count is an Integer (operation COUNT(id)),
             Cancelled is an Integer (operation COUNT(state = States.Cancelled)),
             Rate is a Decimal (operation (Cancelled / Count)).",
        );
        let e = &m.entities[0];
        assert_eq!(e.entity_type, EntityType::Transaction);
        assert_eq!(e.measures().count(), 3);
        assert_eq!(
            e.attributes[4].measure,
            Some(MeasureExpr::arith(
                ArithOp::Div,
                MeasureExpr::MeasureRef { id: "Cancelled".into() },
                MeasureExpr::MeasureRef { id: "Count".into() }
            ))
        );
        let Some(MeasureExpr::Aggregate { func: AggFn::Count, arg: AggArg::Predicate(p) }) = &e.attributes[3].measure
        else {
            panic!()
        };
        assert_eq!(p.right, Operand::Path("States.Cancelled".parse().unwrap()));
    }

    #[test]
    fn enumeration_lists() {
        let m = parse_ok("Data enumeration Gender with values Male and Female.\nData enumeration S with values A, B and C");
        assert_eq!(m.enumerations[0].values, ["Male", "Female"]);
        assert_eq!(m.enumerations[1].values, ["A", "B", "C"]);
    }

    #[test]
    fn missing_attribute_list_reports_at_end_of_input() {
        let src = "DataEntity X is a Master Dimension with attributes";
        let p = parse_cnlbi(src);
        assert_eq!(p.diagnostics.len(), 1);
        assert_eq!(p.diagnostics[0].code, "CNL010");
        assert_eq!(p.diagnostics[0].span.unwrap().offset, src.len());
        assert!(p.model.entities.is_empty());
    }

    #[test]
    fn recovery_keeps_later_declarations() {
        let src = "Data enumeration A with values X.
DataEntity B is a Bogus Dimension with attributes
id is a UUID (PrimaryKey).
Actor C is a User.
Actor D is a User.";
        let p = parse_cnlbi(src);
        assert_eq!(p.diagnostics.len(), 1);
        assert_eq!(p.diagnostics[0].code, "CNL011");
        assert_eq!(p.diagnostics[0].span.unwrap().slice(src), Some("Bogus"));
        assert_eq!(p.model.enumerations.len(), 1);
        assert_eq!(p.model.actors.len(), 2);
    }

    #[test]
    fn use_case_with_both_operation_forms() {
        let m = parse_ok(
            "UseCase U is a BIAnalysis
  actor A,
  data source F,
  performs
    OLAP Operation S1 is a Slice
      where F.scheduled_date.year = Time.year
      described as one year,
    Dice D1 is an OLAP operation
      where Institution.city = City.id and F.scheduled_date.year = Time.year,
    OLAP Operation R is a Roll-up group by Institution.city,
    OLAP Operation P is a Pivot swap Time with Institution
  described as whole use case.",
        );
        let uc = &m.use_cases[0];
        assert_eq!(uc.uc_type, "BIAnalysis");
        assert_eq!(uc.primary_actor.as_deref(), Some("A"));
        assert_eq!(uc.operations.len(), 4);
        assert_eq!(uc.operations[0].description.as_deref(), Some("one year"));
        assert_eq!(uc.operations[1].kind, OlapKind::Dice);
        assert_eq!(uc.operations[1].predicates().len(), 2);
        assert_eq!(uc.operations[3].body, OperationBody::Swap { first: "Time".into(), second: "Institution".into() });
        assert_eq!(uc.description.as_deref(), Some("whole use case"));
    }

    #[test]
    fn kind_and_body_must_agree() {
        let p = parse_cnlbi("UseCase U is a BIAnalysis actor A, data source F, performs OLAP Operation S is a Slice group by F.x.");
        assert_eq!(p.diagnostics[0].code, "CNL010");
        assert!(p.diagnostics[0].message.contains("Slice"));
    }

    #[test]
    fn malformed_clauses_have_their_own_codes() {
        let p = parse_cnlbi("DataEntity X is a Master Dimension with attributes id is a UUID (PrimaryKey Bogus).");
        assert_eq!(p.diagnostics[0].code, "CNL012");
        let p = parse_cnlbi("DataEntity X is a Master Dimension with attributes id is a UUID (operation COUNT(id).");
        assert_eq!(p.diagnostics[0].code, "CNL013");
        let p = parse_cnlbi("UseCase U is a BIAnalysis performs OLAP Operation S is a Slice where a b.");
        assert_eq!(p.diagnostics[0].code, "CNL014");
    }

    #[test]
    fn ui_components_and_parts() {
        let m = parse_ok(
            "UIContainer Page is a Main Window
that contains
UIComponent Filter is a Form
data binding to F,
starting at F.MinDate
and ending at F.MaxDate,
UIComponent Map is an InteractiveGeographicalMap
data binding to F
with latitude I.latitude
longitude I.longitude,
and value F.Count,
actions ZoomAndPanUpdate, DrillDown, TooltipAndHoverDetails
UIComponent T is a Table
data binding to F
with columns I.id, I.name,
F.Count,
UIComponent Pie is an InteractivePieChart
with segments defined by P.gender,
and values F.Count,
UIComponent Nav is a Detail that navigates to Other.",
        );
        let c = &m.ui_containers[0];
        assert_eq!(c.container_type, ContainerType::MainWindow);
        assert_eq!(c.components.len(), 5);
        let f = &c.components[0];
        assert_eq!((f.component_type.as_str(), f.parts.len()), ("Form", 2));
        assert_eq!(f.parts[0].kind, "Option");
        let map = &c.components[1];
        assert_eq!(map.component_type, "InteractiveChart");
        assert_eq!(map.sub_type.as_deref(), Some("InteractiveGeographicalMap"));
        assert_eq!(map.parts.iter().map(|p| p.kind.as_str()).collect::<Vec<_>>(), ["Latitude", "Longitude", "Value"]);
        assert_eq!(map.actions.iter().map(|a| a.kind.as_str()).collect::<Vec<_>>(), ["ZoomAndPanUpdate", "DrillDown", "TooltipAndHoverDetail"]);
        let t = &c.components[2];
        assert_eq!((t.component_type.as_str(), t.sub_type.as_deref()), ("List", Some("Table")));
        assert_eq!(t.parts.len(), 3);
        assert_eq!(c.components[3].parts[0].kind, "Label");
        assert_eq!(c.components[4].navigates_to.as_deref(), Some("Other"));
    }

    #[test]
    fn raw_descriptions_tolerate_any_character() {
        let m = parse_ok("Actor A is a User described as the analyst’s view # 1.");
        assert_eq!(m.actors[0].description.as_deref(), Some("the analyst’s view # 1"));
    }
}
