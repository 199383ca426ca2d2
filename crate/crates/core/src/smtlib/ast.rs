//! Typed `QF_FFA` terms and scripts, with SMT-LIB printing.

use std::fmt;

use crate::ext::{Field, FieldElement};
use crate::normalize::print_literal;

use super::lexer::quote_symbol;
use super::sexpr::SExpr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Field(Field),
}

impl Sort {
    pub fn field(&self) -> Option<&Field> {
        match self {
            Sort::Field(f) => Some(f),
            Sort::Bool => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Field(field) => write!(f, "{}", field.sort()),
        }
    }
}

/// The six finite field operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FfOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Recip,
}

impl FfOp {
    pub const ALL: [FfOp; 6] = [FfOp::Add, FfOp::Sub, FfOp::Mul, FfOp::Div, FfOp::Neg, FfOp::Recip];

    pub fn symbol(self) -> &'static str {
        match self {
            FfOp::Add => "ff.add",
            FfOp::Sub => "ff.sub",
            FfOp::Mul => "ff.mul",
            FfOp::Div => "ff.div",
            FfOp::Neg => "ff.neg",
            FfOp::Recip => "ff.recip",
        }
    }

    pub fn from_symbol(s: &str) -> Option<FfOp> {
        FfOp::ALL.into_iter().find(|op| op.symbol() == s)
    }

    /// Whether the operator accepts more than two arguments, grouped to the left.
    pub fn is_left_assoc(self) -> bool {
        matches!(self, FfOp::Add | FfOp::Mul)
    }

    pub fn is_unary(self) -> bool {
        matches!(self, FfOp::Neg | FfOp::Recip)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    Not,
    And,
    Or,
    Xor,
    Implies,
}

impl Connective {
    pub const ALL: [Connective; 5] =
        [Connective::Not, Connective::And, Connective::Or, Connective::Xor, Connective::Implies];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Not => "not",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Xor => "xor",
            Connective::Implies => "=>",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Connective> {
        Connective::ALL.into_iter().find(|c| c.symbol() == s)
    }
}

/// A sort-checked term.
///
/// `ff.add`/`ff.mul` applications are binary; longer argument lists are
/// nested to the left while checking. Chained `=` and `distinct` are expanded
/// into conjunctions of binary equalities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Literal(FieldElement),
    Const { name: String, field: Field },
    /// A `let`-bound variable.
    Var { name: String, sort: Sort },
    Apply { op: FfOp, args: Vec<Term> },
    Bool(bool),
    Connective { kind: Connective, args: Vec<Term> },
    Eq(Box<Term>, Box<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    Let { bindings: Vec<(String, Term)>, body: Box<Term> },
}

impl Term {
    pub fn sort(&self) -> Sort {
        match self {
            Term::Literal(e) => Sort::Field(e.field().clone()),
            Term::Const { field, .. } => Sort::Field(field.clone()),
            Term::Var { sort, .. } => sort.clone(),
            Term::Apply { args, .. } => args[0].sort(),
            Term::Bool(_) | Term::Connective { .. } | Term::Eq(..) => Sort::Bool,
            Term::Ite(_, then, _) => then.sort(),
            Term::Let { body, .. } => body.sort(),
        }
    }

    pub fn constant(name: impl Into<String>, field: &Field) -> Term {
        Term::Const { name: name.into(), field: field.clone() }
    }

    pub fn apply(op: FfOp, args: Vec<Term>) -> Term {
        Term::Apply { op, args }
    }

    pub fn eq(a: Term, b: Term) -> Term {
        Term::Eq(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Term) -> Term {
        Term::Connective { kind: Connective::Not, args: vec![a] }
    }

    pub fn and(args: Vec<Term>) -> Term {
        Term::Connective { kind: Connective::And, args }
    }

    pub fn or(args: Vec<Term>) -> Term {
        Term::Connective { kind: Connective::Or, args }
    }

    /// Calls `f` on every subterm, parents before children.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        match self {
            Term::Apply { args, .. } | Term::Connective { args, .. } => {
                args.iter().for_each(|a| a.visit(f))
            }
            Term::Eq(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Ite(c, t, e) => {
                c.visit(f);
                t.visit(f);
                e.visit(f);
            }
            Term::Let { bindings, body } => {
                bindings.iter().for_each(|(_, t)| t.visit(f));
                body.visit(f);
            }
            Term::Literal(_) | Term::Const { .. } | Term::Var { .. } | Term::Bool(_) => {}
        }
    }

    /// Names of the declared constants occurring in the term.
    pub fn constants(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.visit(&mut |t| {
            if let Term::Const { name, .. } = t {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
        });
        out
    }
}

fn write_app(f: &mut fmt::Formatter<'_>, head: &str, args: &[Term]) -> fmt::Result {
    write!(f, "({head}")?;
    for a in args {
        write!(f, " {a}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Literal(e) => write!(f, "{}", print_literal(e)),
            Term::Const { name, .. } | Term::Var { name, .. } => write!(f, "{}", quote_symbol(name)),
            Term::Apply { op, args } => write_app(f, op.symbol(), args),
            Term::Bool(b) => write!(f, "{b}"),
            Term::Connective { kind, args } => write_app(f, kind.symbol(), args),
            Term::Eq(a, b) => write!(f, "(= {a} {b})"),
            Term::Ite(c, t, e) => write!(f, "(ite {c} {t} {e})"),
            Term::Let { bindings, body } => {
                write!(f, "(let (")?;
                for (i, (name, t)) in bindings.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "({} {t})", quote_symbol(name))?;
                }
                write!(f, ") {body})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command<T> {
    SetLogic(String),
    SetInfo(String, Option<SExpr>),
    SetOption(String, Option<SExpr>),
    /// A zero-arity `declare-fun` (or `declare-const`) of field sort.
    DeclareFun { name: String, field: Field },
    /// A zero-parameter `define-sort` alias.
    DefineSort { name: String, field: Field },
    Assert(T),
    CheckSat,
    GetModel,
    GetValue(Vec<T>),
    Exit,
}

/// A command sequence. `Script<SExpr>` is the parsed form with raw term
/// bodies; [`TypedScript`] holds sort-checked terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script<T = SExpr> {
    pub commands: Vec<Command<T>>,
}

pub type TypedScript = Script<Term>;

impl<T> Default for Script<T> {
    fn default() -> Self {
        Self { commands: Vec::new() }
    }
}

impl<T> Script<T> {
    pub fn logic(&self) -> Option<&str> {
        self.commands.iter().find_map(|c| match c {
            Command::SetLogic(l) => Some(l.as_str()),
            _ => None,
        })
    }

    /// Declared constants in declaration order.
    pub fn declarations(&self) -> Vec<(&str, &Field)> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::DeclareFun { name, field } => Some((name.as_str(), field)),
                _ => None,
            })
            .collect()
    }

    pub fn sort_aliases(&self) -> Vec<(&str, &Field)> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::DefineSort { name, field } => Some((name.as_str(), field)),
                _ => None,
            })
            .collect()
    }

    pub fn assertions(&self) -> Vec<&T> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::Assert(t) => Some(t),
                _ => None,
            })
            .collect()
    }
}

impl<T: fmt::Display> fmt::Display for Command<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let attr = |f: &mut fmt::Formatter<'_>, cmd: &str, key: &str, v: &Option<SExpr>| match v {
            Some(v) => write!(f, "({cmd} :{key} {v})"),
            None => write!(f, "({cmd} :{key})"),
        };
        match self {
            Command::SetLogic(l) => write!(f, "(set-logic {})", quote_symbol(l)),
            Command::SetInfo(k, v) => attr(f, "set-info", k, v),
            Command::SetOption(k, v) => attr(f, "set-option", k, v),
            Command::DeclareFun { name, field } => {
                write!(f, "(declare-fun {} () {})", quote_symbol(name), field.sort())
            }
            Command::DefineSort { name, field } => {
                write!(f, "(define-sort {} () {})", quote_symbol(name), field.sort())
            }
            Command::Assert(t) => write!(f, "(assert {t})"),
            Command::CheckSat => write!(f, "(check-sat)"),
            Command::GetModel => write!(f, "(get-model)"),
            Command::GetValue(ts) => {
                write!(f, "(get-value (")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "))")
            }
            Command::Exit => write!(f, "(exit)"),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Script<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
