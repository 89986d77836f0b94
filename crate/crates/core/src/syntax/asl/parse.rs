use std::collections::BTreeSet;

use crate::diag::{sort_diagnostics, Diagnostic, Span};
use crate::model::vocab::{self, VocabCategory};
use crate::model::{
    is_identifier, key, Actor, ActorType, AggArg, AggFn, AttributePath, AttributeType, ChartAction, Constraint,
    ContainerType, DataAttribute, DataEntity, DataEntityCluster, DataEnumeration, EntityType, MeasureExpr,
    OlapKind, OlapOperation, Operand, OperationBody, Predicate, PrimitiveType, SourceMap, SpecificationModel, Tag,
    UiComponent, UiContainer, UiEvent, UiPart, UseCase, VocabularyExtension,
};
use crate::syntax::cursor::{describe, Cursor};
use crate::syntax::expr;
use crate::syntax::lexer::{tokenize, Token, TokenKind};
use crate::syntax::{Parsed, ASL_LEX};

use super::{BI_ACTION_TAG, DECLARATION_KEYWORDS, EXPRESSION_TAG};

pub fn parse_asl(source: &str) -> Parsed {
    parse_asl_file(source, 0)
}

pub fn parse_asl_file(source: &str, file: u32) -> Parsed {
    let (tokens, mut diagnostics) = tokenize(source, file, &ASL_LEX);
    let tokens: Vec<Token> = tokens.into_iter().filter(|t| t.kind != TokenKind::Comment).collect();
    let (declared, extensions) = prescan_vocabulary(&tokens);
    let mut p = Parser {
        c: Cursor::new(&tokens),
        file,
        model: SpecificationModel::default(),
        spans: SourceMap::new(),
        diags: Vec::new(),
        declared,
        extensions,
        loose: Vec::new(),
        refs: Vec::new(),
    };
    p.document();
    p.place_components();
    let Parser { model, spans, mut diags, .. } = p;
    diagnostics.append(&mut diags);
    sort_diagnostics(&mut diagnostics);
    Parsed { model, diagnostics, spans }
}

type Declared = BTreeSet<(VocabCategory, String)>;

/// Type-extension declarations, collected up front so that terms may be used
/// before they are declared. Returns the canonical built-in terms that were
/// declared and the surface spellings of genuinely new terms.
fn prescan_vocabulary(tokens: &[Token]) -> (Declared, Declared) {
    let mut declared = BTreeSet::new();
    let mut extensions = BTreeSet::new();
    for w in tokens.windows(2) {
        let Some(cat) = VocabCategory::parse(&w[0].text).filter(|_| w[0].is_wordlike()) else {
            continue;
        };
        if !w[1].is_wordlike() {
            continue;
        }
        match vocab::normalize(cat, &w[1].text) {
            Some(canonical) => declared.insert((cat, canonical.to_string())),
            None => extensions.insert((cat, w[1].text.clone())),
        };
    }
    (declared, extensions)
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

/// Container key used while parsing a component declared at top level.
const LOOSE: &str = "#";

/// A `component X` reference inside a container, resolved once the whole
/// document has been read.
struct ComponentRef {
    container: usize,
    id: String,
    span: Span,
}

struct LooseComponent {
    component: UiComponent,
    spans: SourceMap,
    span: Span,
    used: bool,
}

struct Parser<'t> {
    c: Cursor<'t>,
    file: u32,
    model: SpecificationModel,
    spans: SourceMap,
    diags: Vec<Diagnostic>,
    declared: Declared,
    extensions: Declared,
    loose: Vec<LooseComponent>,
    refs: Vec<ComponentRef>,
}

impl<'t> Parser<'t> {
    fn document(&mut self) {
        while !self.c.at_eof() {
            let t = self.c.peek();
            if t.is_punct("]") {
                self.c.advance();
                self.diags.push(Diagnostic::error("ASL011", "unmatched `]`", Some(t.span)));
                continue;
            }
            let start = self.c.pos();
            let result = match t.text.as_str() {
                _ if !t.is_wordlike() => err("ASL010", t.span, format!("expected a declaration, found {}", describe(t))),
                "DataEnumeration" => self.enumeration(),
                "DataEntity" => self.entity(),
                "DataEntityCluster" => self.cluster(),
                "Actor" => self.actor(),
                "UseCase" => self.use_case(),
                "UIContainer" => self.container(),
                "component" => self.loose_component(),
                w if VocabCategory::parse(w).is_some() => self.type_extension(),
                _ => err("ASL010", t.span, format!("expected a declaration, found {}", describe(t))),
            };
            if let Err(e) = result {
                self.diags.push(Diagnostic::error(e.code, e.message, Some(e.span)));
                self.recover(start);
            }
        }
    }

    /// Skips past the failed declaration: to the point where every bracket
    /// opened since `start` is closed and a declaration keyword follows, or to
    /// a top-level keyword in the first column.
    fn recover(&mut self, start: usize) {
        let mut probe = self.c.clone();
        probe.reset(start);
        let mut depth = 0i32;
        while probe.pos() < self.c.pos() {
            let t = probe.advance();
            depth += bracket_delta(t);
        }
        if self.c.pos() == start {
            self.c.advance();
        }
        while !self.c.at_eof() {
            let t = self.c.peek();
            let keyword = DECLARATION_KEYWORDS.iter().any(|k| t.is_word(k));
            if keyword && (depth <= 0 || (t.span.col == 1 && !t.is_word("component"))) {
                break;
            }
            depth += bracket_delta(t);
            self.c.advance();
            if depth == 0 && t.is_punct("]") {
                break;
            }
        }
    }

    // ---- small helpers ----------------------------------------------------

    fn unexpected<T>(&self, what: &str) -> PResult<T> {
        let t = self.c.peek();
        err("ASL010", t.span, format!("expected {what}, found {}", describe(t)))
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        let t = self.c.peek();
        if t.is_word(w) {
            self.c.advance();
            Ok(t.span)
        } else {
            self.unexpected(&format!("`{w}`"))
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<Span> {
        let t = self.c.peek();
        if t.is_punct(p) {
            self.c.advance();
            Ok(t.span)
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<&'t Token> {
        let t = self.c.peek();
        if t.is_wordlike() && is_identifier(&t.text) {
            self.c.advance();
            Ok(t)
        } else {
            self.unexpected(what)
        }
    }

    fn word(&mut self, what: &str) -> PResult<&'t Token> {
        let t = self.c.peek();
        if t.is_wordlike() {
            self.c.advance();
            Ok(t)
        } else {
            self.unexpected(what)
        }
    }

    fn string(&mut self, what: &str) -> PResult<(String, Span)> {
        let t = self.c.peek();
        if t.kind == TokenKind::QuotedString {
            self.c.advance();
            Ok((t.string_value(), t.span))
        } else {
            self.unexpected(what)
        }
    }

    fn display_name(&mut self) -> Option<String> {
        let t = self.c.peek();
        (t.kind == TokenKind::QuotedString).then(|| {
            self.c.advance();
            t.string_value()
        })
    }

    fn ident_list(&mut self, what: &str) -> PResult<Vec<&'t Token>> {
        let mut out = vec![self.ident(what)?];
        while self.c.at_punct(",") {
            self.c.advance();
            out.push(self.ident(what)?);
        }
        Ok(out)
    }

    /// Opens a `[`; returns its span.
    fn open(&mut self) -> PResult<Span> {
        self.expect_punct("[")
    }

    /// True at the closing `]`. Fails with ASL011 when the bracket opened at
    /// `open` can no longer be closed.
    fn at_close(&self, open: Span) -> PResult<bool> {
        let t = self.c.peek();
        if t.is_punct("]") {
            return Ok(true);
        }
        let top_level = t.span.col == 1 && DECLARATION_KEYWORDS.iter().any(|k| t.is_word(k)) && !t.is_word("component");
        if t.kind == TokenKind::Eof || top_level {
            return err("ASL011", open, "`[` is never closed");
        }
        Ok(false)
    }

    fn end_span(&self, start: Span) -> Span {
        self.c.prev().map_or(start, |t| start.to(t.span))
    }

    /// Resolves a vocabulary term to its canonical spelling, reporting ASL020
    /// when the base language does not know it and it was never declared.
    fn term(&mut self, category: VocabCategory, t: &Token) -> String {
        self.term_text(category, &t.text, t.span)
    }

    fn term_text(&mut self, category: VocabCategory, surface: &str, span: Span) -> String {
        let canonical = vocab::normalize(category, surface).map_or_else(|| surface.to_string(), str::to_string);
        let known = vocab::asl_base_term(category, &canonical)
            || self.declared.contains(&(category, canonical.clone()))
            || self.extensions.contains(&(category, surface.to_string()));
        if !known {
            self.diags.push(Diagnostic::error(
                "ASL020",
                format!("unknown {category} `{surface}`; declare it with `{category} {surface}`"),
                Some(span),
            ));
        }
        canonical
    }

    fn olap_kind(&mut self, t: &Token) -> PResult<OlapKind> {
        let canonical = self.term(VocabCategory::ActionType, t);
        match OlapKind::ALL.into_iter().find(|k| k.as_str() == canonical) {
            Some(k) => Ok(k),
            None => err("ASL010", t.span, format!("`{}` is not an OLAP operation kind", t.text)),
        }
    }

    /// `tag (name "N" value "V")`, with the `tag` keyword already consumed.
    fn tag(&mut self) -> PResult<(Tag, Span, Span)> {
        let open = self.c.peek().span;
        let malformed = |t: &Token| PErr {
            code: "ASL021",
            span: t.span,
            message: format!("malformed tag: expected `(name \"...\" value \"...\")`, found {}", describe(t)),
        };
        if !self.c.eat_punct("(") {
            return Err(malformed(self.c.peek()));
        }
        if !self.c.eat_word("name") {
            return Err(malformed(self.c.peek()));
        }
        let name_tok = self.c.peek();
        if name_tok.kind != TokenKind::QuotedString {
            return Err(malformed(name_tok));
        }
        self.c.advance();
        if !self.c.eat_word("value") {
            return Err(malformed(self.c.peek()));
        }
        let value_tok = self.c.peek();
        if value_tok.kind != TokenKind::QuotedString {
            return Err(malformed(value_tok));
        }
        self.c.advance();
        if !self.c.eat_punct(")") {
            return Err(malformed(self.c.peek()));
        }
        let tag = Tag { name: name_tok.string_value(), value: value_tok.string_value() };
        Ok((tag, open.to(self.c.prev().map_or(open, |t| t.span)), value_tok.span))
    }

    // ---- vocabulary and enumerations ----------------------------------------

    fn type_extension(&mut self) -> PResult<()> {
        let start = self.c.advance();
        let category = VocabCategory::parse(&start.text).expect("dispatched on category keyword");
        let term = self.word("a term")?;
        let mut description = None;
        if self.c.at_punct("[") {
            let open = self.open()?;
            while !self.at_close(open)? {
                if self.c.eat_word("description") {
                    description = Some(self.string("a description")?.0);
                } else {
                    return self.unexpected("`description` or `]`");
                }
            }
            self.c.advance();
        }
        if vocab::normalize(category, &term.text).is_none() {
            if !is_identifier(&term.text) {
                return err("ASL010", term.span, format!("`{}` is not a valid term", term.text));
            }
            self.spans.insert(key::extension(category.as_str(), &term.text), start.span.to(term.span));
            self.model.vocabulary_extensions.push(VocabularyExtension {
                category,
                id: term.text.clone(),
                description,
            });
        }
        Ok(())
    }

    fn enumeration(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("an enumeration name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.expect_word("values")?;
        self.expect_punct("(")?;
        let mut values = Vec::new();
        while !self.c.at_punct(")") {
            let v = self.ident("an enumeration value")?;
            self.spans.insert(key::enum_value(&id.text, &v.text), v.span);
            values.push(v.text.clone());
            if !self.c.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        self.spans.insert(key::enumeration(&id.text), self.end_span(start));
        self.model.enumerations.push(DataEnumeration { id: id.text.clone(), name, values });
        Ok(())
    }

    // ---- entities ------------------------------------------------------------

    fn entity_type(&mut self) -> PResult<EntityType> {
        let t = self.word("an entity type")?;
        EntityType::parse(&t.text).map_or_else(
            || err("ASL010", t.span, format!("unknown entity type `{}`; expected Reference, Master or Transaction", t.text)),
            Ok,
        )
    }

    fn entity(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("an entity name")?;
        let eid = id.text.clone();
        let name = self.display_name().unwrap_or_else(|| eid.clone());
        self.expect_punct(":")?;
        let entity_type = self.entity_type()?;
        let mut sub_type = None;
        if self.c.eat_punct(":") {
            let t = self.word("an entity subtype")?;
            sub_type = Some(self.term(VocabCategory::DataEntitySubType, t));
        }
        let mut entity = DataEntity { id: eid.clone(), name, entity_type, sub_type, attributes: Vec::new(), description: None };
        let open = self.open()?;
        while !self.at_close(open)? {
            if self.c.eat_word("attribute") {
                let attr = self.attribute(&eid)?;
                entity.attributes.push(attr);
            } else if self.c.eat_word("description") {
                entity.description = Some(self.string("a description")?.0);
            } else {
                return self.unexpected("`attribute`, `description` or `]`");
            }
        }
        self.c.advance();
        count_entity_as_primary_key(&mut entity);
        self.spans.insert(key::entity(&eid), self.end_span(start));
        self.model.entities.push(entity);
        Ok(())
    }

    fn attribute(&mut self, entity: &str) -> PResult<DataAttribute> {
        let id = self.ident("an attribute name")?;
        let name = self.display_name();
        self.expect_punct(":")?;
        let ty = self.word("an attribute type")?;
        let mut type_span = ty.span;
        let mut dimension = false;
        let mut attr_type = if ty.is_word("DataEnumeration") {
            let e = self.ident("an enumeration name")?;
            type_span = type_span.to(e.span);
            AttributeType::EnumerationRef { enumeration: e.text.clone() }
        } else {
            let canonical = self.term(VocabCategory::DataAttributeType, ty);
            if let Some(p) = PrimitiveType::parse(&canonical) {
                let mut length = None;
                if self.c.at_punct("(") && self.c.peek_n(1).kind == TokenKind::Number && self.c.peek_n(2).is_punct(")") {
                    let n = self.c.peek_n(1);
                    length = Some(n.text.parse::<u32>().map_err(|_| PErr {
                        code: "ASL010",
                        span: n.span,
                        message: format!("invalid length `{}`", n.text),
                    })?);
                    self.c.advance();
                    self.c.advance();
                    type_span = type_span.to(self.c.advance().span);
                }
                AttributeType::Primitive { name: p, length }
            } else if canonical == vocab::DIMENSION_REF_TYPE {
                dimension = true;
                AttributeType::DimensionRef { entity: String::new() }
            } else {
                AttributeType::Extension { name: ty.text.clone() }
            }
        };
        let mut attr = DataAttribute::new(id.text.clone(), attr_type.clone());
        if let Some(name) = name {
            attr.name = name;
        }
        self.spans.insert(key::attribute(entity, &id.text), id.span);
        self.spans.insert(key::attribute_type(entity, &id.text), type_span);
        if self.c.at_punct("[") {
            let open = self.open()?;
            while !self.at_close(open)? {
                self.attribute_item(entity, &mut attr)?;
            }
            self.c.advance();
        }
        if dimension {
            let fk = attr.constraints.iter().rposition(|c| matches!(c, Constraint::ForeignKey(_)));
            let Some(i) = fk else {
                return err(
                    "ASL010",
                    type_span,
                    format!("`{}` attribute `{}` needs a ForeignKey constraint naming the dimension", vocab::DIMENSION_REF_TYPE, id.text),
                );
            };
            let Constraint::ForeignKey(target) = attr.constraints.remove(i) else { unreachable!() };
            attr_type = AttributeType::DimensionRef { entity: target };
            attr.attr_type = attr_type;
        }
        attr.normalize_constraints();
        Ok(attr)
    }

    fn attribute_item(&mut self, entity: &str, attr: &mut DataAttribute) -> PResult<()> {
        let t = self.c.peek();
        if self.c.eat_word("constraints") {
            self.constraints(entity, attr)
        } else if self.c.eat_word("formula") {
            let form = self.word("`details` or `arithmetic`")?;
            if form.is_word("details") {
                self.c.eat_punct(":");
            } else if !form.is_word("arithmetic") {
                return err("ASL010", form.span, format!("expected `details` or `arithmetic`, found {}", describe(form)));
            }
            let start = self.c.peek().span;
            let e = expr::parse_expr(&mut self.c).map_err(|e| PErr { code: "ASL010", span: e.span, message: e.message })?;
            self.spans.insert(key::measure(entity, &attr.id), self.end_span(start));
            attr.measure = Some(e);
            Ok(())
        } else if self.c.eat_word("tag") {
            let (tag, span, value_span) = self.tag()?;
            if tag.name == EXPRESSION_TAG {
                attr.measure = Some(self.tag_expression(&tag.value, value_span));
                self.spans.insert(key::measure(entity, &attr.id), value_span);
            } else {
                self.diags.push(Diagnostic::warning(
                    "ASL025",
                    format!("tag `{}` on an attribute has no meaning and is dropped", tag.name),
                    Some(span),
                ));
            }
            Ok(())
        } else if self.c.eat_word("defaultValue") {
            let lit = match expr::operand(&mut self.c) {
                Ok(Operand::Literal(l)) => l,
                _ => return err("ASL010", t.span.to(self.c.peek().span), "expected a literal default value"),
            };
            attr.default_value = Some(lit);
            Ok(())
        } else {
            self.unexpected("`constraints`, `formula`, `tag`, `defaultValue` or `]`")
        }
    }

    /// `( PrimaryKey NotNull ForeignKey(E) )`, separated by spaces or commas.
    fn constraints(&mut self, entity: &str, attr: &mut DataAttribute) -> PResult<()> {
        self.expect_punct("(")?;
        loop {
            let t = self.c.peek();
            if self.c.eat_punct(")") {
                return Ok(());
            }
            if self.c.eat_punct(",") {
                continue;
            }
            let c = match t.text.as_str() {
                _ if !t.is_wordlike() => return self.unexpected("a constraint or `)`"),
                "PrimaryKey" => Constraint::PrimaryKey,
                "NotNull" => Constraint::NotNull,
                "Unique" => Constraint::Unique,
                "ForeignKey" => {
                    self.c.advance();
                    self.expect_punct("(")?;
                    let target = self.ident("an entity name")?;
                    self.expect_punct(")")?;
                    self.spans.insert(key::constraint(entity, &attr.id, attr.constraints.len()), t.span.to(target.span));
                    attr.constraints.push(Constraint::ForeignKey(target.text.clone()));
                    continue;
                }
                _ => return err("ASL010", t.span, format!("unknown constraint {}", describe(t))),
            };
            self.c.advance();
            self.spans.insert(key::constraint(entity, &attr.id, attr.constraints.len()), t.span);
            attr.constraints.push(c);
        }
    }

    /// Parses a measure carried in a tag string. Unparseable text is kept
    /// verbatim as an opaque measure with an ASL022 warning.
    fn tag_expression(&mut self, text: &str, span: Span) -> MeasureExpr {
        let (tokens, lex) = tokenize(text, self.file, &ASL_LEX);
        let tokens: Vec<Token> = tokens.into_iter().filter(|t| t.kind != TokenKind::Comment).collect();
        let mut c = Cursor::new(&tokens);
        let problem = match expr::parse_expr(&mut c) {
            _ if !lex.is_empty() => Some(lex[0].message.clone()),
            Ok(e) if c.at_eof() => return e,
            Ok(_) => Some(format!("unexpected {} after the expression", describe(c.peek()))),
            Err(e) => Some(e.message),
        };
        self.diags.push(Diagnostic::warning(
            "ASL022",
            format!("cannot parse expression \"{text}\": {}; the measure is kept but cannot be evaluated", problem.unwrap_or_default()),
            Some(span),
        ));
        MeasureExpr::Opaque { text: text.to_string() }
    }

    // ---- clusters and actors -------------------------------------------------

    fn cluster(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("a cluster name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.expect_punct(":")?;
        let entity_type = self.entity_type()?;
        let mut main = None;
        let mut uses = Vec::new();
        let mut description = None;
        let open = self.open()?;
        while !self.at_close(open)? {
            if self.c.eat_word("main") {
                let m = self.ident("an entity name")?;
                self.spans.insert(key::cluster_member(&id.text, &m.text), m.span);
                main = Some(m.text.clone());
            } else if self.c.eat_word("uses") {
                for u in self.ident_list("an entity name")? {
                    self.spans.insert(key::cluster_member(&id.text, &u.text), u.span);
                    uses.push(u.text.clone());
                }
            } else if self.c.eat_word("description") {
                description = Some(self.string("a description")?.0);
            } else {
                return self.unexpected("`main`, `uses`, `description` or `]`");
            }
        }
        let close = self.c.advance().span;
        let Some(main) = main else {
            return err("ASL010", close, format!("cluster `{}` has no `main` entity", id.text));
        };
        self.spans.insert(key::cluster(&id.text), self.end_span(start));
        self.model.clusters.push(DataEntityCluster { id: id.text.clone(), name, entity_type, main, uses, description });
        Ok(())
    }

    fn actor(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("an actor name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.expect_punct(":")?;
        let ty = self.word("an actor type")?;
        let Some(actor_type) = ActorType::parse(&ty.text) else {
            return err("ASL010", ty.span, format!("unknown actor type `{}`; expected User or ExternalSystem", ty.text));
        };
        let mut actor = Actor { id: id.text.clone(), name, actor_type, stakeholder: None, is_a: None, description: None };
        if self.c.at_punct("[") {
            let open = self.open()?;
            while !self.at_close(open)? {
                if self.c.eat_word("isA") {
                    let parent = self.ident("an actor name")?;
                    self.spans.insert(key::actor_is_a(&id.text), parent.span);
                    actor.is_a = Some(parent.text.clone());
                } else if self.c.eat_word("stakeholder") {
                    actor.stakeholder = Some(self.ident("a stakeholder name")?.text.clone());
                } else if self.c.eat_word("description") {
                    actor.description = Some(self.string("a description")?.0);
                } else {
                    return self.unexpected("`isA`, `stakeholder`, `description` or `]`");
                }
            }
            self.c.advance();
        }
        self.spans.insert(key::actor(&id.text), self.end_span(start));
        self.model.actors.push(actor);
        Ok(())
    }

    // ---- use cases -----------------------------------------------------------

    fn use_case(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("a use case name")?;
        let uc_id = id.text.clone();
        let name = self.display_name().unwrap_or_else(|| uc_id.clone());
        self.expect_punct(":")?;
        let ty = self.word("a use case type")?;
        let uc_type = self.term(VocabCategory::UseCaseType, ty);
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
        let open = self.open()?;
        while !self.at_close(open)? {
            let t = self.c.peek();
            if self.c.eat_word("actorInitiates") {
                let a = self.ident("an actor name")?;
                if uc.primary_actor.is_some() {
                    return err("ASL010", t.span, "a use case has one initiating actor; use `supportingActors` for others");
                }
                self.spans.insert(key::use_case_actor(&uc_id, &a.text), a.span);
                uc.primary_actor = Some(a.text.clone());
            } else if self.c.eat_word("supportingActors") {
                for a in self.ident_list("an actor name")? {
                    self.spans.insert(key::use_case_actor(&uc_id, &a.text), a.span);
                    uc.supporting_actors.push(a.text.clone());
                }
            } else if self.c.eat_word("stakeholder") {
                uc.stakeholder = Some(self.ident("a stakeholder name")?.text.clone());
            } else if self.c.eat_word("dataEntity") {
                let d = self.ident("an entity or cluster name")?;
                self.spans.insert(key::data_source(&uc_id), d.span);
                uc.data_source = Some(d.text.clone());
            } else if self.c.eat_word("actions") || self.c.eat_word("action") {
                loop {
                    let k = self.word("an OLAP operation kind")?;
                    let kind = self.olap_kind(k)?;
                    uc.actions.push(kind);
                    if !self.c.eat_punct(",") {
                        break;
                    }
                }
            } else if self.c.eat_word("operation") {
                let op = self.operation(&uc_id)?;
                uc.operations.push(op);
            } else if self.c.eat_word("tag") {
                let (tag, span, _) = self.tag()?;
                if tag.name == BI_ACTION_TAG || tag.name.starts_with(&format!("{BI_ACTION_TAG}:")) {
                    let op = self.bi_action(&tag, span)?;
                    self.spans.insert(key::operation(&uc_id, &op.id), span);
                    uc.operations.push(op);
                } else {
                    uc.tags.push(tag);
                }
            } else if self.c.eat_word("description") {
                uc.description = Some(self.string("a description")?.0);
            } else {
                return self.unexpected("a use case item or `]`");
            }
        }
        self.c.advance();
        self.spans.insert(key::use_case(&uc_id), self.end_span(start));
        self.model.use_cases.push(uc);
        Ok(())
    }

    /// `operation Id "name"? : Kind [ where P and P | groupBy path | swap A with B | dimensions A, B ]`.
    fn operation(&mut self, uc: &str) -> PResult<OlapOperation> {
        let start = self.c.prev().map_or(self.c.peek().span, |t| t.span);
        let id = self.ident("an operation name")?;
        let op_id = id.text.clone();
        let name = self.display_name();
        self.expect_punct(":")?;
        let k = self.word("an OLAP operation kind")?;
        let kind = self.olap_kind(k)?;
        let mut body = None;
        let mut description = None;
        let open = self.open()?;
        let body_start = self.c.peek().span;
        while !self.at_close(open)? {
            let t = self.c.peek();
            if t.is_word("description") {
                self.c.advance();
                description = Some(self.string("a description")?.0);
                continue;
            }
            if body.is_some() {
                return self.unexpected("`description` or `]`");
            }
            body = Some(if self.c.eat_word("where") {
                let mut predicates = Vec::new();
                loop {
                    let (left, left_span) = self.c.path().map_err(|(span, message)| PErr { code: "ASL010", span, message })?;
                    self.expect_punct("=")?;
                    let right_start = self.c.peek().span;
                    let right = expr::operand(&mut self.c).map_err(|e| PErr { code: "ASL010", span: e.span, message: e.message })?;
                    let right_span = self.end_span(right_start);
                    let i = predicates.len();
                    self.spans.insert(key::predicate(uc, &op_id, i), left_span.to(right_span));
                    self.spans.insert(key::predicate_right(uc, &op_id, i), right_span);
                    predicates.push(Predicate { left, right });
                    if !self.c.eat_word("and") {
                        break;
                    }
                }
                OperationBody::Filter { predicates }
            } else if self.c.eat_word("groupBy") {
                let (path, span) = self.c.path().map_err(|(span, message)| PErr { code: "ASL010", span, message })?;
                self.spans.insert(key::group_by(uc, &op_id), span);
                OperationBody::GroupBy { path }
            } else if self.c.eat_word("swap") {
                let first = self.ident("a dimension name")?;
                self.expect_word("with")?;
                let second = self.ident("a dimension name")?;
                self.spans.insert(key::swap(uc, &op_id), first.span.to(second.span));
                OperationBody::Swap { first: first.text.clone(), second: second.text.clone() }
            } else if self.c.eat_word("dimensions") {
                let dims = self.ident_list("a dimension name")?;
                OperationBody::Underspecified { dimensions: dims.iter().map(|d| d.text.clone()).collect() }
            } else {
                return self.unexpected("`where`, `groupBy`, `swap`, `dimensions`, `description` or `]`");
            });
        }
        self.c.advance();
        let body = body.unwrap_or(OperationBody::Underspecified { dimensions: Vec::new() });
        let mut op = OlapOperation::new(op_id.clone(), kind, body)
            .map_err(|m| PErr { code: "ASL010", span: k.span.to(body_start), message: m.to_string() })?;
        if let Some(name) = name {
            op.name = name;
        }
        op.description = description;
        self.spans.insert(key::operation(uc, &op_id), self.end_span(start));
        Ok(op)
    }

    /// Decodes `tag (name "BI-Action:<Kind>:<OpId>" value "Dimensions:'A, B'")`.
    fn bi_action(&mut self, tag: &Tag, span: Span) -> PResult<OlapOperation> {
        let malformed = |why: &str| PErr { code: "ASL021", span, message: format!("malformed {BI_ACTION_TAG} tag: {why}") };
        let parts: Vec<&str> = tag.name.split(':').collect();
        let [_, kind_text, op_id] = parts[..] else {
            return Err(malformed("expected a name of the form `BI-Action:<kind>:<operation id>`"));
        };
        if !is_identifier(op_id) {
            return Err(malformed(&format!("`{op_id}` is not a valid operation id")));
        }
        let canonical = self.term_text(VocabCategory::ActionType, kind_text, span);
        let Some(kind) = OlapKind::ALL.into_iter().find(|k| k.as_str() == canonical) else {
            return Err(malformed(&format!("`{kind_text}` is not an OLAP operation kind")));
        };
        let dims = tag
            .value
            .strip_prefix("Dimensions:")
            .map(|v| v.trim().trim_matches('\'').trim())
            .ok_or_else(|| malformed("expected a value of the form `Dimensions:'A, B'`"))?;
        let dimensions: Vec<String> = if dims.is_empty() {
            Vec::new()
        } else {
            dims.split(',').map(|d| d.trim().to_string()).collect()
        };
        if let Some(bad) = dimensions.iter().find(|d| !is_identifier(d)) {
            return Err(malformed(&format!("`{bad}` is not a dimension name")));
        }
        Ok(OlapOperation::new(op_id, kind, OperationBody::Underspecified { dimensions }).expect("any kind may be underspecified"))
    }

    // ---- user interface ------------------------------------------------------

    fn container(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let id = self.ident("a container name")?;
        let cid = id.text.clone();
        let name = self.display_name().unwrap_or_else(|| cid.clone());
        self.expect_punct(":")?;
        let ty = self.word("a container type")?;
        let Some(container_type) = ContainerType::parse(&ty.text) else {
            return err("ASL010", ty.span, format!("unknown container type `{}`; expected Window, MainWindow or ModalWindow", ty.text));
        };
        let mut sub_type = None;
        if self.c.eat_punct(":") {
            let s = self.word("a container subtype")?;
            sub_type = Some(self.term(VocabCategory::UIContainerSubType, s));
        }
        let mut container = UiContainer { id: cid.clone(), name, container_type, sub_type, components: Vec::new(), events: Vec::new() };
        let index = self.model.ui_containers.len();
        let mut refs = Vec::new();
        let open = self.open()?;
        while !self.at_close(open)? {
            if self.c.eat_word("component") {
                let next = self.c.peek_n(1);
                let inline = next.kind == TokenKind::QuotedString || next.is_punct(":");
                if inline {
                    let comp = self.component(&cid)?;
                    container.components.push(comp);
                } else {
                    let r = self.ident("a component name")?;
                    refs.push(ComponentRef { container: index, id: r.text.clone(), span: r.span });
                    container.components.push(UiComponent::new(r.text.clone(), String::new()));
                }
            } else if self.c.eat_word("event") {
                let (mut event, span) = self.event()?;
                if event.name.is_empty() {
                    event.name = event.id.clone();
                }
                self.spans.insert(key::container_event(&cid, &event.id), span);
                container.events.push(event);
            } else {
                return self.unexpected("`component`, `event` or `]`");
            }
        }
        self.c.advance();
        self.spans.insert(key::container(&cid), self.end_span(start));
        self.model.ui_containers.push(container);
        self.refs.extend(refs);
        Ok(())
    }

    fn loose_component(&mut self) -> PResult<()> {
        let start = self.c.advance().span;
        let outer = std::mem::take(&mut self.spans);
        let result = self.component(LOOSE);
        let spans = std::mem::replace(&mut self.spans, outer);
        let component = result?;
        self.loose.push(LooseComponent { component, spans, span: self.end_span(start), used: false });
        Ok(())
    }

    /// `Id "name"? : Type (: SubType)? [ items ]`, with `component` consumed.
    fn component(&mut self, container: &str) -> PResult<UiComponent> {
        let start = self.c.prev().map_or(self.c.peek().span, |t| t.span);
        let id = self.ident("a component name")?;
        let cid = id.text.clone();
        let name = self.display_name();
        self.expect_punct(":")?;
        let w1 = self.word("a component type")?;
        let mut type_span = w1.span;
        let is_type = vocab::is_builtin(VocabCategory::UIComponentType, &w1.text)
            || self.extensions.contains(&(VocabCategory::UIComponentType, w1.text.clone()));
        let (component_type, mut sub_type) = match vocab::default_component_type(&w1.text) {
            Some(ty) if !is_type => (ty.to_string(), Some(self.term(VocabCategory::UIComponentSubType, w1))),
            _ => (self.term(VocabCategory::UIComponentType, w1), None),
        };
        if sub_type.is_none() && self.c.eat_punct(":") {
            let s = self.word("a component subtype")?;
            type_span = type_span.to(s.span);
            sub_type = Some(self.term(VocabCategory::UIComponentSubType, s));
        }
        let mut comp = UiComponent::new(cid.clone(), component_type);
        comp.sub_type = sub_type;
        if let Some(name) = name {
            comp.name = name;
        }
        self.spans.insert(key::component_type(container, &cid), type_span);
        let open = self.open()?;
        while !self.at_close(open)? {
            if self.c.eat_word("dataBinding") {
                let b = self.ident("an entity or cluster name")?;
                self.spans.insert(key::binding(container, &cid), b.span);
                comp.data_binding = Some(b.text.clone());
            } else if self.c.eat_word("part") {
                let (part, span) = self.part()?;
                self.spans.insert(key::part(container, &cid, comp.parts.len()), span);
                comp.parts.push(part);
            } else if self.c.eat_word("event") {
                let (event, span) = self.event()?;
                let is_action = vocab::chart_action(&event.id).is_some() && event.tags.is_empty() && event.name.is_empty();
                if is_action {
                    self.spans.insert(key::action(container, &cid, comp.actions.len()), span);
                    let mut action = ChartAction::new(vocab::chart_action(&event.id).expect("checked"));
                    action.event_type = event.event_type;
                    action.flow_to = event.flow_to;
                    comp.actions.push(action);
                } else {
                    let mut event = event;
                    if event.name.is_empty() {
                        event.name = event.id.clone();
                    }
                    self.spans.insert(key::component_event(container, &cid, &event.id), span);
                    comp.events.push(event);
                }
            } else if self.c.eat_word("navigationFlowTo") {
                let t = self.ident("a container name")?;
                self.spans.insert(key::navigation(container, &cid), t.span);
                comp.navigates_to = Some(t.text.clone());
            } else if self.c.eat_word("tag") {
                comp.tags.push(self.tag()?.0);
            } else if self.c.eat_word("description") {
                comp.description = Some(self.string("a description")?.0);
            } else {
                return self.unexpected("a component item or `]`");
            }
        }
        self.c.advance();
        self.spans.insert(key::component(container, &cid), self.end_span(start));
        Ok(comp)
    }

    /// `Id "name"? : Field : Kind [dataAttributeBinding path]`, with `part` consumed.
    fn part(&mut self) -> PResult<(UiPart, Span)> {
        let id = self.ident("a part name")?;
        let name = self.display_name().unwrap_or_else(|| id.text.clone());
        self.expect_punct(":")?;
        let mut k = self.word("a part kind")?;
        if self.c.eat_punct(":") {
            k = self.word("a part kind")?;
        }
        let kind = self.term(VocabCategory::UIComponentPartSubType, k);
        let open = self.open()?;
        self.expect_word("dataAttributeBinding")?;
        let (binding, span) = self.c.path().map_err(|(span, message)| PErr { code: "ASL010", span, message })?;
        if !self.at_close(open)? {
            return self.unexpected("`]`");
        }
        self.c.advance();
        Ok((UiPart { id: id.text.clone(), name, kind, binding }, span))
    }

    /// `Id "name"? (: Type)* ( [ navigationFlowTo X tag(...)* ] )?`, with
    /// `event` consumed. The name is left empty when not written.
    fn event(&mut self) -> PResult<(UiEvent, Span)> {
        let id = self.ident("an event name")?;
        let name = self.display_name().unwrap_or_default();
        let mut event = UiEvent { id: id.text.clone(), name, event_type: Vec::new(), flow_to: None, tags: Vec::new() };
        while self.c.eat_punct(":") {
            event.event_type.push(self.word("an event type")?.text.clone());
        }
        if self.c.at_punct("[") {
            let open = self.open()?;
            while !self.at_close(open)? {
                if self.c.eat_word("navigationFlowTo") {
                    event.flow_to = Some(self.ident("a navigation target")?.text.clone());
                } else if self.c.eat_word("tag") {
                    event.tags.push(self.tag()?.0);
                } else {
                    return self.unexpected("`navigationFlowTo`, `tag` or `]`");
                }
            }
            self.c.advance();
        }
        Ok((event, self.end_span(id.span)))
    }

    /// Moves top-level components into the containers that reference them.
    fn place_components(&mut self) {
        for r in std::mem::take(&mut self.refs) {
            let Some(loose) = self.loose.iter_mut().find(|l| l.component.id == r.id) else {
                self.diags.push(Diagnostic::error(
                    "ASL024",
                    format!("component `{}` is not declared", r.id),
                    Some(r.span),
                ));
                continue;
            };
            loose.used = true;
            let container = &mut self.model.ui_containers[r.container];
            let cid = container.id.clone();
            if let Some(slot) = container.components.iter_mut().find(|c| c.id == r.id && c.component_type.is_empty()) {
                *slot = loose.component.clone();
            }
            let from = key::component(LOOSE, &r.id);
            let to = key::component(&cid, &r.id);
            for (k, spans) in loose.spans.iter() {
                if let Some(rest) = k.strip_prefix(&from).filter(|rest| rest.is_empty() || rest.starts_with('/')) {
                    for s in spans {
                        self.spans.insert(format!("{to}{rest}"), *s);
                    }
                }
            }
        }
        for c in &mut self.model.ui_containers {
            c.components.retain(|c| !c.component_type.is_empty());
        }
        for l in &self.loose {
            if !l.used {
                self.diags.push(Diagnostic::warning(
                    "ASL023",
                    format!("component `{}` is not placed in any container and is dropped", l.component.id),
                    Some(l.span),
                ));
            }
        }
    }
}

fn bracket_delta(t: &Token) -> i32 {
    if t.is_punct("[") {
        1
    } else if t.is_punct("]") {
        -1
    } else {
        0
    }
}

/// `count(E)` over the entity itself counts its rows, which is `COUNT(pk)`.
fn count_entity_as_primary_key(entity: &mut DataEntity) {
    let Some(pk) = entity.attributes.iter().find(|a| a.is_primary_key()).map(|a| a.id.clone()) else {
        return;
    };
    let eid = entity.id.clone();
    for attr in &mut entity.attributes {
        if let Some(m) = &mut attr.measure {
            rewrite_count(m, &eid, &pk);
        }
    }
}

fn rewrite_count(e: &mut MeasureExpr, entity: &str, pk: &str) {
    match e {
        MeasureExpr::Aggregate { func: AggFn::Count, arg: AggArg::Path(p) } if p.len() == 1 && p.first() == entity => {
            *p = AttributePath::new([pk]).expect("attribute ids are identifiers");
        }
        MeasureExpr::Arithmetic { left, right, .. } => {
            rewrite_count(left, entity, pk);
            rewrite_count(right, entity, pk);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(p: &Parsed) -> Vec<&str> {
        p.diagnostics.iter().map(|d| d.code.as_str()).collect()
    }

    const PRELUDE: &str = "DataEntitySubType BI_Dimension\nDataEntitySubType BI_Fact\nDataAttributeType UUID\nDataAttributeType _Dimension\n";

    #[test]
    fn institution_with_lengths_and_display_names() {
        let src = format!(
            "{PRELUDE}DataEntity Institution \"Institution\" : Master : BI_Dimension [
  attribute id \"UUID\" : UUID [constraints (PrimaryKey NotNull Unique)]
  attribute Code \"Code\" : String(50) [constraints (NotNull)]
  attribute city : _Dimension [constraints (NotNull ForeignKey(City))]
  description \"details of an institution\" ]"
        );
        let p = parse_asl(&src);
        assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
        let e = &p.model.entities[0];
        assert_eq!(e.sub_type.as_deref(), Some("Dimension"));
        assert_eq!(e.attributes[0].name, "UUID");
        assert_eq!(e.attributes[0].constraints, vec![Constraint::PrimaryKey]);
        assert_eq!(e.attributes[1].attr_type, AttributeType::Primitive { name: PrimitiveType::String, length: Some(50) });
        assert_eq!(e.attributes[2].attr_type, AttributeType::DimensionRef { entity: "City".into() });
        assert_eq!(e.attributes[2].constraints, vec![Constraint::NotNull]);
    }

    #[test]
    fn use_case_type_needs_its_declaration() {
        let body = "UseCase u : BI_Analysis [ description \"d\" ]";
        let declared = parse_asl(&format!("UseCaseType BI_Analysis [ description \"x\" ]\n{body}"));
        assert!(declared.diagnostics.is_empty(), "{:#?}", declared.diagnostics);
        assert_eq!(declared.model.use_cases[0].uc_type, "BIAnalysis");
        assert!(declared.model.vocabulary_extensions.is_empty());

        let bare = parse_asl(body);
        assert_eq!(codes(&bare), ["ASL020"]);
        assert_eq!(bare.diagnostics[0].span.unwrap().slice(body), Some("BI_Analysis"));
    }

    #[test]
    fn new_terms_become_extensions() {
        let p = parse_asl("UIComponentType Gauge [description \"a dial\"]\nUIContainer w : Window [ component g : Gauge [ ] ]");
        assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
        assert_eq!(p.model.vocabulary_extensions.len(), 1);
        assert_eq!(p.model.vocabulary_extensions[0].description.as_deref(), Some("a dial"));
        assert_eq!(p.model.ui_containers[0].components[0].component_type, "Gauge");
    }

    #[test]
    fn three_measure_spellings() {
        let src = format!(
            "{PRELUDE}DataEntity F : Transaction : BI_Fact [
  attribute id : UUID [constraints (PrimaryKey)]
  attribute a : Integer
  attribute n : Integer [formula details: count (F)]
  attribute r : Decimal [formula arithmetic (n / 2)]
  attribute m : Decimal [tag (name \"expression\" value \"average(a)\")]
  attribute bad : Decimal [tag (name \"expression\" value \"count(if(x = True))\")] ]"
        );
        let p = parse_asl(&src);
        assert_eq!(codes(&p), ["ASL022"]);
        assert!(!p.diagnostics[0].is_error());
        let f = &p.model.entities[0];
        let count = f.attribute("n").unwrap().measure.as_ref().unwrap();
        assert_eq!(count, &MeasureExpr::Aggregate { func: AggFn::Count, arg: AggArg::Path("id".parse().unwrap()) });
        assert!(matches!(f.attribute("r").unwrap().measure, Some(MeasureExpr::Arithmetic { .. })));
        assert!(matches!(f.attribute("m").unwrap().measure, Some(MeasureExpr::Aggregate { func: AggFn::Average, .. })));
        assert!(matches!(&f.attribute("bad").unwrap().measure, Some(MeasureExpr::Opaque { text }) if text == "count(if(x = True))"));
    }

    #[test]
    fn bi_action_tags_become_underspecified_operations() {
        let src = "ActionType BI_Slice\nActionType BI_Rollup\nUseCaseType BI_Analysis
UseCase u : BI_Analysis [
  actions BI_Slice, BI_Rollup
  tag (name \"BI-Action:BI_Slice:Year\" value \"Dimensions:'Time'\")
  tag (name \"BI-Action:BI_RollUp:ByCity\" value \"Dimensions:'Institution, City'\")
  tag (name \"note\" value \"kept\") ]";
        let p = parse_asl(src);
        assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
        let uc = &p.model.use_cases[0];
        assert_eq!(uc.actions, [OlapKind::Slice, OlapKind::RollUp]);
        assert_eq!(uc.operations.len(), 2);
        assert_eq!(uc.operations[1].kind, OlapKind::RollUp);
        assert_eq!(
            uc.operations[1].body,
            OperationBody::Underspecified { dimensions: vec!["Institution".into(), "City".into()] }
        );
        assert_eq!(uc.tags, [Tag { name: "note".into(), value: "kept".into() }]);
    }

    #[test]
    fn malformed_tags_are_asl021() {
        let p = parse_asl("ActionType BI_Slice\nUseCaseType BI_Analysis\nUseCase u : BI_Analysis [ tag (name \"BI-Action:BI_Slice\" value \"x\") ]\nActor a : User");
        assert_eq!(codes(&p), ["ASL021"]);
        assert_eq!(p.model.actors.len(), 1);
        let p = parse_asl("UseCaseType BI_Analysis\nUseCase u : BI_Analysis [ tag (value \"x\") ]");
        assert_eq!(codes(&p), ["ASL021"]);
    }

    #[test]
    fn structured_operations() {
        let src = "ActionType BI_Dice\nActionType BI_Pivot\nUseCaseType BI_Analysis
UseCase u : BI_Analysis [
  operation D \"Dice it\" : BI_Dice [where Institution.city = City.id and F.d.year = 2023 description \"d\"]
  operation P : BI_Pivot [swap Time with Institution] ]";
        let p = parse_asl(src);
        assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
        let ops = &p.model.use_cases[0].operations;
        assert_eq!(ops[0].name, "Dice it");
        assert_eq!(ops[0].predicates().len(), 2);
        assert_eq!(ops[0].predicates()[1].right, Operand::Literal(crate::model::Literal::Number(2023.0)));
        assert_eq!(ops[1].body, OperationBody::Swap { first: "Time".into(), second: "Institution".into() });
    }

    #[test]
    fn unclosed_bracket_is_asl011_and_parsing_resumes() {
        let src = "DataEnumeration G values (A)\nActor a : User [ description \"x\"\nActor b : User";
        let p = parse_asl(src);
        assert_eq!(codes(&p), ["ASL011"]);
        assert_eq!(p.diagnostics[0].span.unwrap().slice(src), Some("["));
        assert_eq!(p.model.actors.len(), 1);
        assert_eq!(p.model.actors[0].id, "b");
        assert_eq!(codes(&parse_asl("Actor a : User ]")), ["ASL011"]);
    }

    #[test]
    fn unexpected_tokens_are_asl010() {
        let p = parse_asl("Actor a : User [ bogus ]\nActor b : User");
        assert_eq!(codes(&p), ["ASL010"]);
        assert_eq!(p.model.actors.len(), 1);
    }

    #[test]
    fn top_level_components_are_placed_by_reference() {
        let src = "UIComponentType Filter\nUIComponentSubType Range\nUIComponentPartSubType Option
component f \"F\" : Filter : Range [
  part lo : Field : Option [dataAttributeBinding E.lo]
  event e_Apply : Submit [tag (name \"t\" value \"v\")] ]
component stray : Form [ ]
UIContainer p1 : Window [ component f  component missing ]
UIContainer p2 : Window [ component f  event ev : Submit : Submit_Back [navigationFlowTo p1] ]";
        let p = parse_asl(src);
        assert_eq!(codes(&p), ["ASL023", "ASL024"]);
        let [p1, p2] = &p.model.ui_containers[..] else { panic!() };
        assert_eq!(p1.components.len(), 1);
        assert_eq!(p1.components[0], p2.components[0]);
        assert_eq!(p1.components[0].events[0].tags.len(), 1);
        assert_eq!(p2.events[0].flow_to.as_deref(), Some("p1"));
        assert!(p.spans.get(&key::part("p2", "f", 0)).is_some());
        assert!(p.spans.get(&key::component(LOOSE, "f")).is_none());
    }

    #[test]
    fn chart_events_become_actions() {
        let src = "UIComponentType InteractiveChart\nUIComponentSubType InteractiveLineChart
UIContainer w : Window [ component c : InteractiveChart : InteractiveLineChart [
  event DrillDown : Submit : Submit_Update [navigationFlowTo c]
  event TooltipAndHoverDetails : Other
  event Custom : Other ] ]";
        let p = parse_asl(src);
        assert!(p.diagnostics.is_empty(), "{:#?}", p.diagnostics);
        let c = &p.model.ui_containers[0].components[0];
        assert_eq!(c.chart_subtype(), Some("InteractiveLineChart"));
        assert_eq!(c.actions.len(), 2);
        assert_eq!(c.actions[0].event_type, ["Submit", "Submit_Update"]);
        assert_eq!(c.actions[1].kind, "TooltipAndHoverDetail");
        assert_eq!(c.events.len(), 1);
    }

    #[test]
    fn dimension_attribute_needs_a_foreign_key() {
        let p = parse_asl(&format!("{PRELUDE}DataEntity F : Transaction [ attribute t : _Dimension ]"));
        assert_eq!(codes(&p), ["ASL010"]);
    }
}
