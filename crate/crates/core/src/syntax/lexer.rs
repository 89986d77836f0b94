//! A small hand-written lexer shared by both linguistic styles.
//!
//! The two styles differ only in their keyword lists, the hyphenated words
//! they treat as one token, and the diagnostic code prefix.

use crate::diag::{Diagnostic, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Identifier,
    QuotedString,
    Number,
    Punct,
    Comment,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Raw source text of the token (quotes and escapes included for strings).
    pub text: String,
    pub span: Span,
}

impl Token {
    /// True for keywords and identifiers spelled `word`.
    pub fn is_word(&self, word: &str) -> bool {
        matches!(self.kind, TokenKind::Keyword | TokenKind::Identifier) && self.text == word
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.text == p
    }

    pub fn is_wordlike(&self) -> bool {
        matches!(self.kind, TokenKind::Keyword | TokenKind::Identifier)
    }

    /// Content of a quoted string with escapes resolved.
    pub fn string_value(&self) -> String {
        let inner = self.text.strip_prefix('"').unwrap_or(&self.text);
        let inner = inner.strip_suffix('"').unwrap_or(inner);
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                match chars.next() {
                    Some('n') => out.push('\n'),
                    Some(other) => out.push(other),
                    None => out.push('\\'),
                }
            } else {
                out.push(c);
            }
        }
        out
    }
}

/// Per-style lexer settings.
#[derive(Debug, Clone, Copy)]
pub struct LexConfig {
    pub keywords: &'static [&'static str],
    pub hyphen_words: &'static [&'static str],
    pub unterminated_code: &'static str,
    pub invalid_char_code: &'static str,
}

const PUNCT: &str = ".,()[]:=+-*/;'!?<>";

/// Splits `source` into tokens. Whitespace is dropped; comments are kept as
/// [`TokenKind::Comment`] tokens. The result always ends with one `Eof`.
pub fn tokenize(source: &str, file: u32, config: &LexConfig) -> (Vec<Token>, Vec<Diagnostic>) {
    Lexer { src: source, file, config, pos: 0, line: 1, col: 1, tokens: Vec::new(), diags: Vec::new() }.run()
}

struct Lexer<'a> {
    src: &'a str,
    file: u32,
    config: &'a LexConfig,
    pos: usize,
    line: u32,
    col: u32,
    tokens: Vec<Token>,
    diags: Vec<Diagnostic>,
}

impl Lexer<'_> {
    fn run(mut self) -> (Vec<Token>, Vec<Diagnostic>) {
        while let Some(c) = self.peek() {
            let start = self.mark();
            if c.is_whitespace() {
                self.bump();
            } else if c == '/' && self.peek_at(1) == Some('/') {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
                self.push(TokenKind::Comment, start);
            } else if c == '/' && self.peek_at(1) == Some('*') {
                self.block_comment(start);
            } else if c == '"' {
                self.string(start);
            } else if c.is_ascii_digit() {
                self.number(start);
            } else if c.is_alphabetic() || c == '_' {
                self.word(start);
            } else if PUNCT.contains(c) {
                self.bump();
                self.push(TokenKind::Punct, start);
            } else {
                self.bump();
                let span = self.span_from(start);
                self.diags.push(Diagnostic::error(
                    self.config.invalid_char_code,
                    format!("invalid character `{}`", c.escape_debug()),
                    Some(span),
                ));
            }
        }
        let eof = self.mark();
        self.push(TokenKind::Eof, eof);
        (self.tokens, self.diags)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, (offset, line, col): (usize, u32, u32)) -> Span {
        Span { file: self.file, offset, len: self.pos - offset, line, col }
    }

    fn push(&mut self, kind: TokenKind, start: (usize, u32, u32)) {
        let span = self.span_from(start);
        self.tokens.push(Token { kind, text: self.src[span.offset..span.end()].to_string(), span });
    }

    fn block_comment(&mut self, start: (usize, u32, u32)) {
        self.bump();
        self.bump();
        loop {
            match self.peek() {
                None => {
                    let span = self.span_from(start);
                    self.diags.push(Diagnostic::error(
                        self.config.unterminated_code,
                        "unterminated block comment",
                        Some(span),
                    ));
                    break;
                }
                Some('*') if self.peek_at(1) == Some('/') => {
                    self.bump();
                    self.bump();
                    break;
                }
                Some(_) => self.bump(),
            }
        }
        self.push(TokenKind::Comment, start);
    }

    fn string(&mut self, start: (usize, u32, u32)) {
        self.bump();
        loop {
            match self.peek() {
                None | Some('\n') => {
                    let span = self.span_from(start);
                    self.diags.push(Diagnostic::error(
                        self.config.unterminated_code,
                        "unterminated string literal",
                        Some(span),
                    ));
                    break;
                }
                Some('\\') => {
                    self.bump();
                    if self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some(_) => self.bump(),
            }
        }
        self.push(TokenKind::QuotedString, start);
    }

    fn number(&mut self, start: (usize, u32, u32)) {
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
        }
        self.push(TokenKind::Number, start);
    }

    fn word(&mut self, start: (usize, u32, u32)) {
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.bump();
        }
        if self.peek() == Some('-') {
            let rest = &self.src[start.0..];
            if let Some(hw) = self.config.hyphen_words.iter().find(|hw| {
                rest.starts_with(**hw)
                    && !rest[hw.len()..].chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_')
            }) {
                let target = start.0 + hw.len();
                while self.pos < target {
                    self.bump();
                }
            }
        }
        let text = &self.src[start.0..self.pos];
        let kind = if self.config.keywords.contains(&text) { TokenKind::Keyword } else { TokenKind::Identifier };
        self.push(kind, start);
    }
}

/// The byte offset of the end of the line containing `offset` (the newline
/// itself is excluded).
pub fn line_end(source: &str, offset: usize) -> usize {
    source[offset..].find('\n').map_or(source.len(), |i| offset + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: LexConfig = LexConfig {
        keywords: &["DataEntity", "is", "a", "Master", "Dimension", "String", "NotNull"],
        hyphen_words: &["Roll-up", "x-axis"],
        unterminated_code: "T001",
        invalid_char_code: "T002",
    };

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src, 0, &CONFIG).0.into_iter().map(|t| (t.kind, t.text)).collect()
    }

    #[test]
    fn empty_input_is_just_eof() {
        let (tokens, diags) = tokenize("", 0, &CONFIG);
        assert_eq!(tokens.len(), 1);
        assert_eq!(tokens[0].kind, TokenKind::Eof);
        assert!(diags.is_empty());
    }

    #[test]
    fn keywords_and_identifiers() {
        use TokenKind::*;
        assert_eq!(
            kinds("DataEntity Patient is a Master Dimension"),
            vec![
                (Keyword, "DataEntity".into()),
                (Identifier, "Patient".into()),
                (Keyword, "is".into()),
                (Keyword, "a".into()),
                (Keyword, "Master".into()),
                (Keyword, "Dimension".into()),
                (Eof, "".into()),
            ]
        );
    }

    #[test]
    fn punctuation_and_constraints() {
        use TokenKind::*;
        let toks = kinds("name is a String (NotNull),");
        let expected = [
            (Identifier, "name"),
            (Keyword, "is"),
            (Keyword, "a"),
            (Keyword, "String"),
            (Punct, "("),
            (Keyword, "NotNull"),
            (Punct, ")"),
            (Punct, ","),
            (Eof, ""),
        ];
        assert_eq!(toks.len(), expected.len());
        for ((k, t), (ek, et)) in toks.iter().zip(expected) {
            assert_eq!((*k, t.as_str()), (ek, et));
        }
    }

    #[test]
    fn hyphen_words_are_single_tokens() {
        let toks = kinds("Roll-up x-axis a-b Roll-ups");
        let texts: Vec<_> = toks.iter().map(|(_, t)| t.as_str()).collect();
        assert_eq!(texts, ["Roll-up", "x-axis", "a", "-", "b", "Roll", "-", "ups", ""]);
    }

    #[test]
    fn comments_strings_and_numbers() {
        let (toks, diags) = tokenize("// c\n\"a \\\"q\\\"\" 12.5 /* b\n */ x", 0, &CONFIG);
        assert!(diags.is_empty());
        assert_eq!(toks[0].kind, TokenKind::Comment);
        assert_eq!(toks[1].kind, TokenKind::QuotedString);
        assert_eq!(toks[1].string_value(), "a \"q\"");
        assert_eq!(toks[2].text, "12.5");
        assert_eq!(toks[3].kind, TokenKind::Comment);
        assert_eq!(toks[4].text, "x");
        assert_eq!((toks[4].span.line, toks[4].span.col), (3, 5));
    }

    #[test]
    fn errors_carry_spans() {
        let src = "a \"open\nb # c";
        let (toks, diags) = tokenize(src, 0, &CONFIG);
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[0].code, "T001");
        assert_eq!(diags[0].span.unwrap().slice(src), Some("\"open"));
        assert_eq!(diags[1].code, "T002");
        assert_eq!(diags[1].span.unwrap().slice(src), Some("#"));
        assert!(toks.iter().any(|t| t.text == "c"));
    }

    #[test]
    fn columns_count_characters() {
        let (toks, _) = tokenize("é x", 0, &CONFIG);
        assert_eq!(toks[1].span.col, 3);
        assert_eq!(toks[1].span.offset, 3);
    }
}
