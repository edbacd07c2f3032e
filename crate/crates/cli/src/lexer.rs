//! Tokenizer for the document language.

use crate::ast::Span;
use crate::diagnostic::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u128),
    Semi,
    Comma,
    Colon,
    Dot,
    Star,
    Eq,
    Minus,
    Arrow,
    Swap,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Lt,
    Gt,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Star => "*",
            Tok::Eq => "=",
            Tok::Minus => "-",
            Tok::Arrow => "->",
            Tok::Swap => "<->",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits source text into tokens; `#` starts a comment running to the end of the line.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |i: &mut usize, col: &mut u32, k: usize| {
            *i += k;
            *col += k as u32;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || matches!(chars[i], '_' | '\'')) {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            out.push(Token { tok: Tok::Ident(text), span });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let n = text
                .parse::<u128>()
                .map_err(|_| Diagnostic::error(span, format!("integer literal `{text}` is too large")))?;
            out.push(Token { tok: Tok::Int(n), span });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::Swap, 3),
            (';', _) => (Tok::Semi, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('.', _) => (Tok::Dot, 1),
            ('*', _) => (Tok::Star, 1),
            ('=', _) => (Tok::Eq, 1),
            ('-', _) => (Tok::Minus, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            _ => return Err(Diagnostic::error(span, format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, span });
        advance(&mut i, &mut col, len);
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn symbols_and_comments() {
        assert_eq!(
            toks("a <-> b -> c # note\n<g0,g1>"),
            vec![
                Tok::Ident("a".into()),
                Tok::Swap,
                Tok::Ident("b".into()),
                Tok::Arrow,
                Tok::Ident("c".into()),
                Tok::Lt,
                Tok::Ident("g0".into()),
                Tok::Comma,
                Tok::Ident("g1".into()),
                Tok::Gt,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let t = lex("base\n  zmod 5;").unwrap();
        assert_eq!((t[1].span.line, t[1].span.col), (2, 3));
        assert_eq!((t[2].span.line, t[2].span.col), (2, 8));
    }

    #[test]
    fn primes_belong_to_identifiers() {
        assert_eq!(toks("L'"), vec![Tok::Ident("L'".into()), Tok::Eof]);
    }

    #[test]
    fn stray_characters_are_reported() {
        let e = lex("base $").unwrap_err();
        assert_eq!((e.span.line, e.span.col), (1, 6));
    }
}
