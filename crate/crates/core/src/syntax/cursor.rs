use crate::diag::Span;
use crate::model::AttributePath;

use super::lexer::{Token, TokenKind};

/// Position in a comment-free token stream. The last token is always `Eof`.
#[derive(Debug, Clone)]
pub struct Cursor<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Cursor<'t> {
    pub fn new(tokens: &'t [Token]) -> Self {
        debug_assert!(tokens.last().is_some_and(|t| t.kind == TokenKind::Eof));
        Cursor { tokens, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, pos: usize) {
        self.pos = pos.min(self.tokens.len() - 1);
    }

    pub fn peek(&self) -> &'t Token {
        self.peek_n(0)
    }

    pub fn peek_n(&self, n: usize) -> &'t Token {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    pub fn prev(&self) -> Option<&'t Token> {
        self.pos.checked_sub(1).map(|i| &self.tokens[i])
    }

    pub fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    pub fn advance(&mut self) -> &'t Token {
        let t = self.peek();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    pub fn at_word(&self, w: &str) -> bool {
        self.peek().is_word(w)
    }

    pub fn at_punct(&self, p: &str) -> bool {
        self.peek().is_punct(p)
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.at_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Skips tokens that start before byte `offset`.
    pub fn skip_to_offset(&mut self, offset: usize) {
        while !self.at_eof() && self.peek().span.offset < offset {
            self.pos += 1;
        }
    }

    /// True if the token at `n` directly follows the previous one with no
    /// whitespace in between.
    pub fn adjacent(&self, n: usize) -> bool {
        let i = self.pos + n;
        i > 0 && i < self.tokens.len() && self.tokens[i - 1].span.end() == self.tokens[i].span.offset
    }

    /// True if the next tokens spell a dotted path with at least two segments.
    pub fn at_dotted_path(&self) -> bool {
        self.peek().is_wordlike() && self.peek_n(1).is_punct(".") && self.adjacent(1) && self.adjacent(2)
            && self.peek_n(2).is_wordlike()
    }

    /// Parses `seg(.seg)*` where the dots are written without surrounding spaces.
    pub fn path(&mut self) -> Result<(AttributePath, Span), (Span, String)> {
        let first = self.peek();
        if !first.is_wordlike() {
            return Err((first.span, format!("expected an attribute path, found {}", describe(first))));
        }
        self.advance();
        let mut segments = vec![first.text.clone()];
        let mut span = first.span;
        while self.at_punct(".") && self.adjacent(0) && self.adjacent(1) && self.peek_n(1).is_wordlike() {
            self.advance();
            let seg = self.advance();
            segments.push(seg.text.clone());
            span = span.to(seg.span);
        }
        AttributePath::new(segments).map(|p| (p, span)).map_err(|e| (span, e.to_string()))
    }
}

/// Human-readable token description for diagnostics.
pub fn describe(t: &Token) -> String {
    match t.kind {
        TokenKind::Eof => "end of input".to_string(),
        TokenKind::QuotedString => "a string".to_string(),
        _ => format!("`{}`", t.text),
    }
}
