//! SMT-LIB 2.6 tokens.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Location, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    Symbol(String),
    /// A finite field literal such as `ff-1.1`, kept verbatim.
    FfLiteral(String),
    Numeral(BigUint),
    Decimal(String),
    /// `#x…`, `#b…` and other `#`-prefixed constants, kept verbatim.
    Hash(String),
    Keyword(String),
    Str(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub loc: Location,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::LParen => write!(f, "("),
            TokenKind::RParen => write!(f, ")"),
            TokenKind::Symbol(s) => write!(f, "{}", quote_symbol(s)),
            TokenKind::FfLiteral(s) | TokenKind::Decimal(s) | TokenKind::Hash(s) => {
                write!(f, "{s}")
            }
            TokenKind::Numeral(n) => write!(f, "{n}"),
            TokenKind::Keyword(k) => write!(f, ":{k}"),
            TokenKind::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
        }
    }
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c)
}

/// Whether `s` has the shape of a finite field literal: `ff`, then one or
/// more dot-separated integers, each with an optional leading `-`.
pub fn is_ff_literal(s: &str) -> bool {
    let Some(body) = s.strip_prefix("ff") else { return false };
    !body.is_empty()
        && body.split('.').all(|part| {
            let digits = part.strip_prefix('-').unwrap_or(part);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        })
}

/// Prints a symbol, adding `|…|` quotes when it is not a simple symbol.
pub fn quote_symbol(s: &str) -> String {
    let simple = !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(is_symbol_char);
    if simple {
        s.to_string()
    } else {
        format!("|{s}|")
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn loc(&self) -> Location {
        Location::new(self.line, self.col)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
        out
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let loc = cur.loc();
        let lex_err = |msg: String| Error::Lex { loc, msg };
        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            ';' => {
                cur.take_while(|c| c != '\n');
                continue;
            }
            '(' => {
                cur.bump();
                TokenKind::LParen
            }
            ')' => {
                cur.bump();
                TokenKind::RParen
            }
            '"' => {
                cur.bump();
                let mut s = String::new();
                loop {
                    match cur.bump() {
                        None => return Err(lex_err("unterminated string literal".into())),
                        Some('"') if cur.peek() == Some('"') => {
                            cur.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                    }
                }
                TokenKind::Str(s)
            }
            '|' => {
                cur.bump();
                let s = cur.take_while(|c| c != '|' && c != '\\');
                match cur.bump() {
                    Some('|') => TokenKind::Symbol(s),
                    _ => return Err(lex_err("unterminated quoted symbol".into())),
                }
            }
            ':' => {
                cur.bump();
                let k = cur.take_while(is_symbol_char);
                if k.is_empty() {
                    return Err(lex_err("empty keyword".into()));
                }
                TokenKind::Keyword(k)
            }
            '#' => {
                cur.bump();
                let body = cur.take_while(|c| c.is_ascii_alphanumeric());
                if body.len() < 2 {
                    return Err(lex_err(format!("malformed constant #{body}")));
                }
                TokenKind::Hash(format!("#{body}"))
            }
            c if c.is_ascii_digit() => {
                let digits = cur.take_while(|c| c.is_ascii_digit());
                if cur.peek() == Some('.') {
                    cur.bump();
                    let frac = cur.take_while(|c| c.is_ascii_digit());
                    TokenKind::Decimal(format!("{digits}.{frac}"))
                } else {
                    if cur.peek().is_some_and(is_symbol_char) {
                        return Err(lex_err(format!(
                            "symbol may not start with a digit: {digits}{}",
                            cur.peek().unwrap()
                        )));
                    }
                    TokenKind::Numeral(digits.parse().expect("ascii digits"))
                }
            }
            c if is_symbol_char(c) => {
                let s = cur.take_while(is_symbol_char);
                if is_ff_literal(&s) {
                    TokenKind::FfLiteral(s)
                } else {
                    TokenKind::Symbol(s)
                }
            }
            other => return Err(lex_err(format!("illegal character {other:?}"))),
        };
        tokens.push(Token { kind, loc });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        tokenize(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    fn sym(s: &str) -> TokenKind {
        TokenKind::Symbol(s.into())
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            kinds("(assert true)"),
            vec![TokenKind::LParen, sym("assert"), sym("true"), TokenKind::RParen]
        );
    }

    #[test]
    fn ff_literals_are_single_tokens() {
        assert_eq!(kinds("ff-1.-1"), vec![TokenKind::FfLiteral("ff-1.-1".into())]);
        assert_eq!(
            kinds("(_ ff1 3 2)"),
            vec![
                TokenKind::LParen,
                sym("_"),
                TokenKind::FfLiteral("ff1".into()),
                TokenKind::Numeral(3u32.into()),
                TokenKind::Numeral(2u32.into()),
                TokenKind::RParen
            ]
        );
        assert_eq!(kinds("ff.add"), vec![sym("ff.add")]);
        assert_eq!(kinds("ff1."), vec![sym("ff1.")]);
        assert_eq!(kinds("ffx"), vec![sym("ffx")]);
    }

    #[test]
    fn comments_strings_keywords() {
        assert_eq!(
            kinds("; hi\n(set-info :status \"a \"\"b\"\"\")"),
            vec![
                TokenKind::LParen,
                sym("set-info"),
                TokenKind::Keyword("status".into()),
                TokenKind::Str("a \"b\"".into()),
                TokenKind::RParen
            ]
        );
        assert_eq!(kinds("|x y|"), vec![sym("x y")]);
        assert_eq!(kinds("#f3m5"), vec![TokenKind::Hash("#f3m5".into())]);
    }

    #[test]
    fn locations() {
        let toks = tokenize("(a\n  bb)").unwrap();
        assert_eq!(toks[1].loc, Location::new(1, 2));
        assert_eq!(toks[2].loc, Location::new(2, 3));
        let err = tokenize("(a\n  {)").unwrap_err();
        assert_eq!(err.location(), Some(Location::new(2, 3)));
        assert!(tokenize("\"abc").is_err());
        assert!(tokenize("|abc").is_err());
        assert!(tokenize("12ab").is_err());
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_symbol("x0"), "x0");
        assert_eq!(quote_symbol("x y"), "|x y|");
        assert_eq!(quote_symbol("0x"), "|0x|");
    }
}
