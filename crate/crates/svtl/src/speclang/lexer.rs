//! Tokenizer. `;` starts a comment running to end of line; the language has
//! no statement terminator. A `'` immediately following an identifier is the
//! post-event marker (`X_1'`); anywhere else it must immediately precede an
//! identifier and quotes it as a symbol (`'red`).

use super::ast::Span;
use super::Diagnostic;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    /// `'name`
    Quote(String),
    /// Postfix `'`
    Prime,
    /// `_`
    Wild,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Assign,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Arrow,
    DotDot,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Quote(s) => write!(f, "`'{s}`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::Wild => f.write_str("`_`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::Ne => f.write_str("`!=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`<=`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DotDot => f.write_str("`..`"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.chars().peekable();
    // Column just past the previous token, for prime/quote adjacency.
    let mut prev_end: Option<(u32, u32)> = None;

    macro_rules! push {
        ($tok:expr, $span:expr, $len:expr) => {{
            out.push(Token {
                tok: $tok,
                span: $span,
            });
            prev_end = Some(($span.line, $span.col + $len));
        }};
    }

    while let Some(c) = chars.next() {
        let span = Span::new(line, col);
        let advance = |n: u32, col: &mut u32| *col += n;
        match c {
            '\n' => {
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut col);
                continue;
            }
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
                line += 1;
                col = 1;
                continue;
            }
            '(' => {
                push!(Tok::LParen, span, 1);
                advance(1, &mut col);
            }
            ')' => {
                push!(Tok::RParen, span, 1);
                advance(1, &mut col);
            }
            '{' => {
                push!(Tok::LBrace, span, 1);
                advance(1, &mut col);
            }
            '}' => {
                push!(Tok::RBrace, span, 1);
                advance(1, &mut col);
            }
            ',' => {
                push!(Tok::Comma, span, 1);
                advance(1, &mut col);
            }
            ':' => {
                push!(Tok::Colon, span, 1);
                advance(1, &mut col);
            }
            '=' => {
                push!(Tok::Assign, span, 1);
                advance(1, &mut col);
            }
            '+' => {
                push!(Tok::Plus, span, 1);
                advance(1, &mut col);
            }
            '*' => {
                push!(Tok::Star, span, 1);
                advance(1, &mut col);
            }
            '/' => {
                push!(Tok::Slash, span, 1);
                advance(1, &mut col);
            }
            '-' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    push!(Tok::Arrow, span, 2);
                    advance(2, &mut col);
                } else {
                    push!(Tok::Minus, span, 1);
                    advance(1, &mut col);
                }
            }
            '!' => {
                if chars.peek() == Some(&'=') {
                    chars.next();
                    push!(Tok::Ne, span, 2);
                    advance(2, &mut col);
                } else {
                    return Err(Diagnostic::new(span, "expected `=` after `!`"));
                }
            }
            '<' => {
                if chars.peek() == Some(&'=') {
                    chars.next();
                    push!(Tok::Le, span, 2);
                    advance(2, &mut col);
                } else {
                    push!(Tok::Lt, span, 1);
                    advance(1, &mut col);
                }
            }
            '>' => {
                if chars.peek() == Some(&'=') {
                    chars.next();
                    push!(Tok::Ge, span, 2);
                    advance(2, &mut col);
                } else {
                    push!(Tok::Gt, span, 1);
                    advance(1, &mut col);
                }
            }
            '.' => {
                if chars.peek() == Some(&'.') {
                    chars.next();
                    push!(Tok::DotDot, span, 2);
                    advance(2, &mut col);
                } else {
                    return Err(Diagnostic::new(span, "expected `..`"));
                }
            }
            '\'' => {
                let adjacent = prev_end == Some((line, col));
                let after_name = matches!(
                    out.last().map(|t| &t.tok),
                    Some(Tok::Ident(_)) | Some(Tok::RParen)
                );
                if adjacent && after_name {
                    push!(Tok::Prime, span, 1);
                    advance(1, &mut col);
                } else if chars.peek().copied().is_some_and(is_ident_start) {
                    let mut name = String::new();
                    while chars.peek().copied().is_some_and(is_ident_char) {
                        name.push(chars.next().unwrap());
                    }
                    if name == "true" || name == "false" {
                        return Err(Diagnostic::new(
                            span,
                            format!("`'{name}` collides with the boolean literal `{name}`"),
                        ));
                    }
                    let len = 1 + name.len() as u32;
                    push!(Tok::Quote(name), span, len);
                    advance(len, &mut col);
                } else {
                    return Err(Diagnostic::new(
                        span,
                        "stray `'`: write `name'` for a post-event value or `'name` for a symbol",
                    ));
                }
            }
            c if c.is_ascii_digit() => {
                let mut text = String::from(c);
                while chars.peek().copied().is_some_and(|d| d.is_ascii_digit()) {
                    text.push(chars.next().unwrap());
                }
                if chars.peek().copied().is_some_and(is_ident_start) {
                    return Err(Diagnostic::new(span, "number runs into a name"));
                }
                let n: i64 = text
                    .parse()
                    .map_err(|_| Diagnostic::new(span, format!("integer `{text}` is too large")))?;
                let len = text.len() as u32;
                push!(Tok::Int(n), span, len);
                advance(len, &mut col);
            }
            c if is_ident_start(c) => {
                let mut name = String::from(c);
                while chars.peek().copied().is_some_and(is_ident_char) {
                    name.push(chars.next().unwrap());
                }
                let len = name.len() as u32;
                let tok = if name == "_" { Tok::Wild } else { Tok::Ident(name) };
                push!(tok, span, len);
                advance(len, &mut col);
            }
            other => {
                return Err(Diagnostic::new(
                    span,
                    format!("unexpected character `{}`", other.escape_default()),
                ));
            }
        }
    }
    Ok(out)
}
