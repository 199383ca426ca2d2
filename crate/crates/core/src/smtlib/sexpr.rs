use std::fmt;

use crate::error::{Error, Location, Result};

use super::lexer::{Token, TokenKind};

/// A parsed S-expression. Equality ignores source locations.
#[derive(Debug, Clone)]
pub struct SExpr {
    pub kind: SExprKind,
    pub loc: Location,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExprKind {
    Atom(TokenKind),
    List(Vec<SExpr>),
}

impl PartialEq for SExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for SExpr {}

impl SExpr {
    pub fn symbol(&self) -> Option<&str> {
        match &self.kind {
            SExprKind::Atom(TokenKind::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match &self.kind {
            SExprKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn atom(&self) -> Option<&TokenKind> {
        match &self.kind {
            SExprKind::Atom(t) => Some(t),
            _ => None,
        }
    }

    /// The leading symbol of a list such as `(assert …)`.
    pub fn head(&self) -> Option<&str> {
        self.list()?.first()?.symbol()
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SExprKind::Atom(t) => write!(f, "{t}"),
            SExprKind::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Groups a token stream into top-level S-expressions.
pub fn read_all(tokens: &[Token]) -> Result<Vec<SExpr>> {
    let mut stack: Vec<(Location, Vec<SExpr>)> = Vec::new();
    let mut top = Vec::new();
    for tok in tokens {
        match &tok.kind {
            TokenKind::LParen => stack.push((tok.loc, Vec::new())),
            TokenKind::RParen => {
                let (loc, items) = stack.pop().ok_or_else(|| Error::Parse {
                    loc: tok.loc,
                    msg: "unbalanced ')'".into(),
                })?;
                let e = SExpr { kind: SExprKind::List(items), loc };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(e),
                    None => top.push(e),
                }
            }
            kind => {
                let e = SExpr { kind: SExprKind::Atom(kind.clone()), loc: tok.loc };
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(e),
                    None => top.push(e),
                }
            }
        }
    }
    if let Some((loc, _)) = stack.pop() {
        return Err(Error::Parse { loc, msg: "unclosed '('".into() });
    }
    Ok(top)
}
