//! Measure expressions, shared by both styles.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := NUMBER | '-' NUMBER | '(' expr ')' | AGG '(' path ('=' operand)? ')' | IDENT
//! operand := path | NUMBER | '-' NUMBER | STRING | true | false
//! ```
//!
//! A bare identifier is a reference to another measure. Aggregate names are
//! case-insensitive so that the DAX-like upper-case spelling and the
//! lower-case tag spelling read the same.

use crate::diag::Span;
use crate::model::{AggArg, AggFn, ArithOp, Literal, MeasureExpr, Operand, Predicate};

use super::cursor::{describe, Cursor};
use super::lexer::TokenKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub span: Span,
    pub message: String,
}

impl From<(Span, String)> for ExprError {
    fn from((span, message): (Span, String)) -> Self {
        ExprError { span, message }
    }
}

/// Parses one expression starting at the cursor. Stops before the first
/// token that cannot continue the expression.
pub fn parse_expr(c: &mut Cursor<'_>) -> Result<MeasureExpr, ExprError> {
    let mut left = term(c)?;
    loop {
        let op = if c.at_punct("+") {
            ArithOp::Add
        } else if c.at_punct("-") {
            ArithOp::Sub
        } else {
            return Ok(left);
        };
        c.advance();
        let right = term(c)?;
        left = MeasureExpr::arith(op, left, right);
    }
}

fn term(c: &mut Cursor<'_>) -> Result<MeasureExpr, ExprError> {
    let mut left = factor(c)?;
    loop {
        let op = if c.at_punct("*") {
            ArithOp::Mul
        } else if c.at_punct("/") {
            ArithOp::Div
        } else {
            return Ok(left);
        };
        c.advance();
        let right = factor(c)?;
        left = MeasureExpr::arith(op, left, right);
    }
}

fn factor(c: &mut Cursor<'_>) -> Result<MeasureExpr, ExprError> {
    let t = c.peek();
    if let Some(value) = number(c)? {
        return Ok(MeasureExpr::Literal { value });
    }
    if c.eat_punct("(") {
        let inner = parse_expr(c)?;
        expect_close(c)?;
        return Ok(inner);
    }
    if !t.is_wordlike() {
        return Err(ExprError { span: t.span, message: format!("expected a measure expression, found {}", describe(t)) });
    }
    if let Some(func) = AggFn::parse(&t.text).filter(|_| c.peek_n(1).is_punct("(")) {
        c.advance();
        c.advance();
        let (path, path_span) = c.path()?;
        let arg = if c.eat_punct("=") {
            if func != AggFn::Count {
                return Err(ExprError {
                    span: path_span,
                    message: format!("only COUNT accepts a predicate, not {}", func.as_str()),
                });
            }
            AggArg::Predicate(Predicate { left: path, right: operand(c)? })
        } else {
            AggArg::Path(path)
        };
        expect_close(c)?;
        return Ok(MeasureExpr::Aggregate { func, arg });
    }
    if t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword {
        if c.peek_n(1).is_punct(".") && c.adjacent(1) {
            return Err(ExprError {
                span: t.span,
                message: "a dotted path may only appear inside an aggregate".to_string(),
            });
        }
        c.advance();
        if !crate::model::is_identifier(&t.text) {
            return Err(ExprError { span: t.span, message: format!("`{}` is not a measure name", t.text) });
        }
        return Ok(MeasureExpr::MeasureRef { id: t.text.clone() });
    }
    Err(ExprError { span: t.span, message: format!("expected a measure expression, found {}", describe(t)) })
}

/// `NUMBER` or `-NUMBER`; `None` if the cursor is not at a number.
fn number(c: &mut Cursor<'_>) -> Result<Option<f64>, ExprError> {
    let negative = c.at_punct("-") && c.peek_n(1).kind == TokenKind::Number && c.adjacent(1);
    let t = if negative { c.peek_n(1) } else { c.peek() };
    if t.kind != TokenKind::Number {
        return Ok(None);
    }
    let value: f64 = t
        .text
        .parse()
        .map_err(|_| ExprError { span: t.span, message: format!("invalid number `{}`", t.text) })?;
    c.advance();
    if negative {
        c.advance();
    }
    Ok(Some(if negative { -value } else { value }))
}

/// Right-hand side of a predicate.
pub fn operand(c: &mut Cursor<'_>) -> Result<Operand, ExprError> {
    if let Some(n) = number(c)? {
        return Ok(Operand::Literal(Literal::Number(n)));
    }
    let t = c.peek();
    if t.kind == TokenKind::QuotedString {
        c.advance();
        return Ok(Operand::Literal(Literal::Text(t.string_value())));
    }
    if !c.at_dotted_path() {
        match t.text.as_str() {
            "true" | "True" if t.is_wordlike() => {
                c.advance();
                return Ok(Operand::Literal(Literal::Bool(true)));
            }
            "false" | "False" if t.is_wordlike() => {
                c.advance();
                return Ok(Operand::Literal(Literal::Bool(false)));
            }
            _ => {}
        }
    }
    let (path, _) = c.path()?;
    Ok(Operand::Path(path))
}

fn expect_close(c: &mut Cursor<'_>) -> Result<(), ExprError> {
    if c.eat_punct(")") {
        Ok(())
    } else {
        let t = c.peek();
        Err(ExprError { span: t.span, message: format!("expected `)`, found {}", describe(t)) })
    }
}

/// Prints an expression in the upper-case DAX-like spelling with the fewest
/// parentheses that preserve its structure.
pub fn format_expr(e: &MeasureExpr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0, false);
    out
}

fn write_expr(out: &mut String, e: &MeasureExpr, parent_prec: u8, right_side: bool) {
    match e {
        MeasureExpr::Aggregate { func, arg } => {
            out.push_str(func.as_str());
            out.push('(');
            match arg {
                AggArg::Path(p) => out.push_str(&p.to_string()),
                AggArg::Predicate(p) => out.push_str(&p.to_string()),
            }
            out.push(')');
        }
        MeasureExpr::MeasureRef { id } => out.push_str(id),
        MeasureExpr::Literal { value } => out.push_str(&Literal::Number(*value).to_string()),
        MeasureExpr::Opaque { text } => out.push_str(text),
        MeasureExpr::Arithmetic { op, left, right } => {
            let prec = op.precedence();
            let paren = prec < parent_prec || (right_side && prec == parent_prec);
            if paren {
                out.push('(');
            }
            write_expr(out, left, prec, false);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, right, prec, true);
            if paren {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::lexer::tokenize;
    use crate::syntax::CNL_LEX;

    fn parse(src: &str) -> Result<MeasureExpr, ExprError> {
        let (tokens, diags) = tokenize(src, 0, &CNL_LEX);
        assert!(diags.is_empty());
        let mut c = Cursor::new(&tokens);
        let e = parse_expr(&mut c)?;
        assert!(c.at_eof(), "trailing input in {src}");
        Ok(e)
    }

    #[test]
    fn ratio_of_measure_refs() {
        let e = parse("(CountCancelledAppointments / CountAppointments)").unwrap();
        assert_eq!(
            e,
            MeasureExpr::arith(
                ArithOp::Div,
                MeasureExpr::MeasureRef { id: "CountCancelledAppointments".into() },
                MeasureExpr::MeasureRef { id: "CountAppointments".into() },
            )
        );
        assert_eq!(format_expr(&e), "CountCancelledAppointments / CountAppointments");
    }

    #[test]
    fn count_with_predicate() {
        let e = parse("COUNT(state = States.Cancelled)").unwrap();
        let MeasureExpr::Aggregate { func: AggFn::Count, arg: AggArg::Predicate(p) } = &e else {
            panic!("{e:?}")
        };
        assert_eq!(p.left.to_string(), "state");
        assert_eq!(p.right, Operand::Path("States.Cancelled".parse().unwrap()));
    }

    #[test]
    fn lower_case_aggregates_and_spacing() {
        assert_eq!(parse("average(actual_response_time)").unwrap(), parse("AVERAGE (actual_response_time)").unwrap());
    }

    #[test]
    fn only_count_takes_a_predicate() {
        let err = parse("SUM(a = 1)").unwrap_err();
        assert!(err.message.contains("only COUNT"));
    }

    #[test]
    fn precedence_and_associativity_survive_printing() {
        for src in ["a - (b - c)", "(a - b) - c", "a * (b + c)", "a + b * c", "a / (b / c)", "1 - -2.5", "COUNT(x) * 100"] {
            let e = parse(src).unwrap();
            let printed = format_expr(&e);
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
        assert_eq!(format_expr(&parse("(a - b) - c").unwrap()), "a - b - c");
    }

    #[test]
    fn errors_point_at_the_offending_token() {
        let src = "COUNT(id";
        let err = parse(src).unwrap_err();
        assert_eq!(err.span.offset, src.len());
        let err = parse("a + ,").unwrap_err();
        assert_eq!(err.span.offset, 4);
    }
}
