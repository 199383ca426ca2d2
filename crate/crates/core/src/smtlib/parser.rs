//! Command parsing and sort checking for `QF_FFA` scripts.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};

use crate::conway::ConwayCache;
use crate::error::{Error, Location, Result};
use crate::ext::{Field, FieldElement, FieldSort};
use crate::normalize::normalize_literal;

use super::ast::{Command, Connective, FfOp, Script, Sort, Term, TypedScript};
use super::lexer::{is_ff_literal, tokenize, Token, TokenKind};
use super::sexpr::{read_all, SExpr, SExprKind};

/// The only logic accepted by [`parse_script`].
pub const LOGIC: &str = "QF_FFA";

const THEORY_SYMBOLS: &[&str] = &[
    "true", "false", "not", "and", "or", "xor", "=>", "=", "distinct", "ite", "let", "as", "_",
    "!", "forall", "exists", "Bool", "FiniteField", "ff.add", "ff.sub", "ff.mul", "ff.div",
    "ff.neg", "ff.recip",
];

/// Known SMT-LIB commands outside the supported subset.
const UNSUPPORTED_COMMANDS: &[&str] = &[
    "push", "pop", "reset", "reset-assertions", "declare-sort", "declare-datatype",
    "declare-datatypes", "define-fun", "define-fun-rec", "define-funs-rec", "check-sat-assuming",
    "get-assertions", "get-assignment", "get-info", "get-option", "get-proof",
    "get-unsat-assumptions", "get-unsat-core", "echo",
];

/// Whether a user symbol would collide with a theory symbol or an `ff…` literal.
pub fn is_reserved_name(name: &str) -> bool {
    is_ff_literal(name) || THEORY_SYMBOLS.contains(&name)
}

fn parse_err(loc: Location, msg: impl Into<String>) -> Error {
    Error::Parse { loc, msg: msg.into() }
}

fn sort_err(loc: Location, msg: impl Into<String>) -> Error {
    Error::Sort { loc, msg: msg.into() }
}

fn unsupported(loc: Location, msg: impl Into<String>) -> Error {
    Error::Unsupported { loc, msg: msg.into() }
}

/// Integer coefficients of an `ff…` literal token, lowest degree first.
pub fn literal_coefficients(token: &str) -> Result<Vec<BigInt>> {
    if !is_ff_literal(token) {
        return Err(Error::InvalidInput(format!("{token} is not a finite field literal")));
    }
    token[2..]
        .split('.')
        .map(|part| {
            part.parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("malformed numeral {part} in {token}")))
        })
        .collect()
}

/// Parses and normalizes an `ff…` literal at a known field.
pub fn parse_literal(token: &str, field: &Field) -> Result<FieldElement> {
    normalize_literal(&literal_coefficients(token)?, field)
}

fn numeral(e: &SExpr) -> Result<BigUint> {
    match e.atom() {
        Some(TokenKind::Numeral(n)) => Ok(n.clone()),
        _ => Err(parse_err(e.loc, format!("expected a numeral, found {e}"))),
    }
}

fn symbol(e: &SExpr) -> Result<&str> {
    e.symbol().ok_or_else(|| parse_err(e.loc, format!("expected a symbol, found {e}")))
}

fn field_for(cache: &ConwayCache, sort: FieldSort, loc: Location) -> Result<Field> {
    cache.field(&sort).map_err(|e| e.at(loc))
}

/// Resolves a sort expression: an alias, `Bool`, or `(_ FiniteField p [n])`.
pub(crate) fn resolve_sort(
    e: &SExpr,
    aliases: &HashMap<String, Field>,
    cache: &ConwayCache,
) -> Result<Sort> {
    if let Some(name) = e.symbol() {
        if name == "Bool" {
            return Ok(Sort::Bool);
        }
        return aliases
            .get(name)
            .map(|f| Sort::Field(f.clone()))
            .ok_or_else(|| sort_err(e.loc, format!("unknown sort {name}")));
    }
    let items = e.list().ok_or_else(|| sort_err(e.loc, format!("expected a sort, found {e}")))?;
    match items {
        [us, ff, rest @ ..] if us.symbol() == Some("_") && ff.symbol() == Some("FiniteField") => {
            let sort = match rest {
                [p] => FieldSort::new(numeral(p)?, 1),
                [p, n] => {
                    let degree = numeral(n)?;
                    let degree: u32 = degree
                        .try_into()
                        .ok()
                        .filter(|&d| d >= 2)
                        .ok_or_else(|| {
                            sort_err(n.loc, "extension field degree must be a numeral >= 2")
                        })?;
                    FieldSort::new(numeral(p)?, degree)
                }
                _ => return Err(sort_err(e.loc, "FiniteField takes one or two indices")),
            };
            Ok(Sort::Field(field_for(cache, sort, rest[0].loc)?))
        }
        _ => Err(sort_err(e.loc, format!("unknown sort {e}"))),
    }
}

fn resolve_field_sort(
    e: &SExpr,
    aliases: &HashMap<String, Field>,
    cache: &ConwayCache,
) -> Result<Field> {
    match resolve_sort(e, aliases, cache)? {
        Sort::Field(f) => Ok(f),
        Sort::Bool => Err(sort_err(e.loc, "a finite field sort is required here")),
    }
}

/// How a literal was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralForm {
    Indexed,
    Annotated,
}

/// A sorted literal term `(_ ff… p [n])` or `(as ff… S)`, with the verbatim
/// `ff…` token. Returns `Ok(None)` when `e` is not of either shape.
pub(crate) fn sorted_literal(
    e: &SExpr,
    aliases: &HashMap<String, Field>,
    cache: &ConwayCache,
) -> Result<Option<(FieldElement, String, LiteralForm)>> {
    let Some(items) = e.list() else { return Ok(None) };
    let (form, lit, field) = match items {
        [us, lit, idx @ ..] if us.symbol() == Some("_") => {
            let Some(TokenKind::FfLiteral(text)) = lit.atom() else { return Ok(None) };
            let sort = match idx {
                [p] => FieldSort::new(numeral(p)?, 1),
                [p, n] => {
                    let degree: u32 = numeral(n)?
                        .try_into()
                        .ok()
                        .filter(|&d| d >= 2)
                        .ok_or_else(|| {
                            sort_err(n.loc, "extension field degree must be a numeral >= 2")
                        })?;
                    FieldSort::new(numeral(p)?, degree)
                }
                _ => return Err(sort_err(e.loc, "a literal takes one or two indices")),
            };
            (LiteralForm::Indexed, (text, lit.loc), field_for(cache, sort, idx[0].loc)?)
        }
        [as_, lit, sort] if as_.symbol() == Some("as") => {
            let Some(TokenKind::FfLiteral(text)) = lit.atom() else {
                return Err(unsupported(lit.loc, "`as` annotations are only supported on ff literals"));
            };
            (LiteralForm::Annotated, (text, lit.loc), resolve_field_sort(sort, aliases, cache)?)
        }
        _ => return Ok(None),
    };
    let (text, loc) = lit;
    let value = parse_literal(text, &field).map_err(|err| sort_err(loc, err.to_string()))?;
    Ok(Some((value, text.clone(), form)))
}

fn reject_quantifiers(e: &SExpr) -> Result<()> {
    if let Some(items) = e.list() {
        if let Some(h @ ("forall" | "exists")) = e.head() {
            return Err(unsupported(items[0].loc, format!("quantifier {h} is outside QF_FFA")));
        }
        items.iter().try_for_each(reject_quantifiers)?;
    }
    Ok(())
}

fn check_declared_name(e: &SExpr) -> Result<String> {
    let name = match e.atom() {
        Some(TokenKind::FfLiteral(s)) => s.as_str(),
        _ => symbol(e)?,
    };
    if is_reserved_name(name) {
        return Err(sort_err(e.loc, format!("{name} is reserved by the finite field theory")));
    }
    Ok(name.to_string())
}

fn attribute(items: &[SExpr], loc: Location) -> Result<(String, Option<SExpr>)> {
    match items {
        [k, rest @ ..] if rest.len() <= 1 => match k.atom() {
            Some(TokenKind::Keyword(key)) => Ok((key.clone(), rest.first().cloned())),
            _ => Err(parse_err(k.loc, "expected a keyword")),
        },
        _ => Err(parse_err(loc, "expected a keyword and an optional value")),
    }
}

/// Builds the command sequence: checks the logic, resolves sorts (and with
/// them the primality gate), and rejects reserved declarations and
/// quantifiers. Term bodies stay as S-expressions for [`sort_check`].
pub fn parse_script(tokens: &[Token], cache: &ConwayCache) -> Result<Script> {
    let mut commands = Vec::new();
    let mut aliases: HashMap<String, Field> = HashMap::new();
    let mut declared: HashMap<String, ()> = HashMap::new();
    let mut logic_seen = false;

    for e in read_all(tokens)? {
        let items = e
            .list()
            .filter(|i| !i.is_empty())
            .ok_or_else(|| parse_err(e.loc, format!("expected a command, found {e}")))?;
        let head = symbol(&items[0])?;
        let args = &items[1..];
        let need_logic = |name: &str| {
            if logic_seen {
                Ok(())
            } else {
                Err(parse_err(e.loc, format!("{name} before set-logic")))
            }
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(parse_err(e.loc, format!("{head} expects {n} arguments")))
            }
        };
        let cmd = match head {
            "set-logic" => {
                arity(1)?;
                if logic_seen {
                    return Err(parse_err(e.loc, "set-logic may appear only once"));
                }
                if !commands.iter().all(|c| {
                    matches!(c, Command::SetInfo(..) | Command::SetOption(..))
                }) {
                    return Err(parse_err(e.loc, "set-logic must precede other commands"));
                }
                let logic = symbol(&args[0])?;
                match logic {
                    LOGIC => {}
                    "FFA" => {
                        return Err(unsupported(
                            args[0].loc,
                            "the quantified logic FFA is not supported; use QF_FFA",
                        ))
                    }
                    other => return Err(unsupported(args[0].loc, format!("logic {other}"))),
                }
                logic_seen = true;
                Command::SetLogic(logic.to_string())
            }
            "set-info" => {
                let (k, v) = attribute(args, e.loc)?;
                Command::SetInfo(k, v)
            }
            "set-option" => {
                let (k, v) = attribute(args, e.loc)?;
                Command::SetOption(k, v)
            }
            "declare-fun" | "declare-const" => {
                need_logic(head)?;
                let (name_e, sort_e) = match (head, args) {
                    ("declare-fun", [n, params, s]) => {
                        match params.list() {
                            Some([]) => {}
                            Some(_) => {
                                return Err(unsupported(
                                    params.loc,
                                    "uninterpreted functions of positive arity",
                                ))
                            }
                            None => return Err(parse_err(params.loc, "expected a parameter list")),
                        }
                        (n, s)
                    }
                    ("declare-const", [n, s]) => (n, s),
                    _ => return Err(parse_err(e.loc, format!("malformed {head}"))),
                };
                let name = check_declared_name(name_e)?;
                if declared.insert(name.clone(), ()).is_some() {
                    return Err(sort_err(name_e.loc, format!("{name} is already declared")));
                }
                let field = resolve_field_sort(sort_e, &aliases, cache)?;
                Command::DeclareFun { name, field }
            }
            "define-sort" => {
                need_logic(head)?;
                arity(3)?;
                let name = symbol(&args[0])?.to_string();
                match args[1].list() {
                    Some([]) => {}
                    Some(_) => return Err(unsupported(args[1].loc, "parametric define-sort")),
                    None => return Err(parse_err(args[1].loc, "expected a parameter list")),
                }
                if aliases.contains_key(&name) || name == "Bool" {
                    return Err(sort_err(args[0].loc, format!("sort {name} is already defined")));
                }
                let field = resolve_field_sort(&args[2], &aliases, cache)?;
                aliases.insert(name.clone(), field.clone());
                Command::DefineSort { name, field }
            }
            "assert" => {
                need_logic(head)?;
                arity(1)?;
                reject_quantifiers(&args[0])?;
                Command::Assert(args[0].clone())
            }
            "check-sat" => {
                need_logic(head)?;
                arity(0)?;
                Command::CheckSat
            }
            "get-model" => {
                need_logic(head)?;
                arity(0)?;
                Command::GetModel
            }
            "get-value" => {
                need_logic(head)?;
                arity(1)?;
                let terms = args[0]
                    .list()
                    .filter(|t| !t.is_empty())
                    .ok_or_else(|| parse_err(args[0].loc, "get-value expects a term list"))?;
                terms.iter().try_for_each(reject_quantifiers)?;
                Command::GetValue(terms.to_vec())
            }
            "exit" => {
                arity(0)?;
                Command::Exit
            }
            other if UNSUPPORTED_COMMANDS.contains(&other) => {
                return Err(unsupported(items[0].loc, format!("command {other}")))
            }
            other => return Err(parse_err(items[0].loc, format!("unknown command {other}"))),
        };
        commands.push(cmd);
    }
    Ok(Script { commands })
}

/// Scope for sort checking: aliases, declared constants, `let` frames.
struct Checker<'a> {
    cache: &'a ConwayCache,
    aliases: HashMap<String, Field>,
    constants: HashMap<String, Field>,
    frames: Vec<Vec<(String, Sort)>>,
}

impl Checker<'_> {
    fn lookup_var(&self, name: &str) -> Option<Sort> {
        self.frames
            .iter()
            .rev()
            .find_map(|f| f.iter().find(|(n, _)| n == name).map(|(_, s)| s.clone()))
    }

    fn field_arg(&self, e: &SExpr, t: &Term) -> Result<Field> {
        t.sort()
            .field()
            .cloned()
            .ok_or_else(|| sort_err(e.loc, format!("{e} is Bool, expected a finite field term")))
    }

    fn bool_arg(&self, e: &SExpr, t: &Term) -> Result<()> {
        match t.sort() {
            Sort::Bool => Ok(()),
            s => Err(sort_err(e.loc, format!("{e} has sort {s}, expected Bool"))),
        }
    }

    fn term(&mut self, e: &SExpr) -> Result<Term> {
        match &e.kind {
            SExprKind::Atom(TokenKind::Symbol(s)) => {
                if let Some(sort) = self.lookup_var(s) {
                    return Ok(Term::Var { name: s.clone(), sort });
                }
                match s.as_str() {
                    "true" => return Ok(Term::Bool(true)),
                    "false" => return Ok(Term::Bool(false)),
                    _ => {}
                }
                match self.constants.get(s) {
                    Some(field) => Ok(Term::constant(s.clone(), field)),
                    None => Err(sort_err(e.loc, format!("unbound symbol {s}"))),
                }
            }
            SExprKind::Atom(TokenKind::FfLiteral(s)) => Err(sort_err(
                e.loc,
                format!("literal {s} has no sort; write (_ {s} p) or (as {s} SORT)"),
            )),
            SExprKind::Atom(other) => {
                Err(sort_err(e.loc, format!("{other} is not a QF_FFA term")))
            }
            SExprKind::List(items) => self.application(e, items),
        }
    }

    fn application(&mut self, e: &SExpr, items: &[SExpr]) -> Result<Term> {
        if let Some((value, _, _)) = sorted_literal(e, &self.aliases, self.cache)? {
            return Ok(Term::Literal(value));
        }
        let Some((head_e, args)) = items.split_first() else {
            return Err(parse_err(e.loc, "empty application"));
        };
        let head = head_e
            .symbol()
            .ok_or_else(|| parse_err(head_e.loc, format!("unsupported term head {head_e}")))?;
        let count = |lo: usize, hi: Option<usize>| -> Result<()> {
            if args.len() < lo || hi.is_some_and(|h| args.len() > h) {
                let want = match hi {
                    Some(h) if h == lo => format!("exactly {lo}"),
                    _ => format!("at least {lo}"),
                };
                return Err(sort_err(
                    head_e.loc,
                    format!("{head} takes {want} arguments, got {}", args.len()),
                ));
            }
            Ok(())
        };

        if head == "let" {
            return self.let_term(e, args);
        }
        if let Some(op) = FfOp::from_symbol(head) {
            match op {
                _ if op.is_unary() => count(1, Some(1))?,
                _ if op.is_left_assoc() => count(2, None)?,
                _ => count(2, Some(2))?,
            }
            let typed = self.same_sorted(args)?;
            self.field_arg(&args[0], &typed[0])?;
            let mut iter = typed.into_iter();
            if op.is_left_assoc() {
                let first = iter.next().expect("checked arity");
                return Ok(iter.fold(first, |acc, t| Term::apply(op, vec![acc, t])));
            }
            return Ok(Term::apply(op, iter.collect()));
        }
        if let Some(kind) = Connective::from_symbol(head) {
            match kind {
                Connective::Not => count(1, Some(1))?,
                Connective::And | Connective::Or => count(1, None)?,
                Connective::Xor | Connective::Implies => count(2, None)?,
            }
            let mut typed = Vec::with_capacity(args.len());
            for a in args {
                let t = self.term(a)?;
                self.bool_arg(a, &t)?;
                typed.push(t);
            }
            return Ok(Term::Connective { kind, args: typed });
        }
        match head {
            "=" => {
                count(2, None)?;
                let typed = self.same_sorted(args)?;
                let mut pairs: Vec<Term> = typed
                    .windows(2)
                    .map(|w| Term::eq(w[0].clone(), w[1].clone()))
                    .collect();
                Ok(if pairs.len() == 1 { pairs.pop().unwrap() } else { Term::and(pairs) })
            }
            "distinct" => {
                count(2, None)?;
                let typed = self.same_sorted(args)?;
                let mut diseqs = Vec::new();
                for i in 0..typed.len() {
                    for j in i + 1..typed.len() {
                        diseqs.push(Term::not(Term::eq(typed[i].clone(), typed[j].clone())));
                    }
                }
                Ok(if diseqs.len() == 1 { diseqs.pop().unwrap() } else { Term::and(diseqs) })
            }
            "ite" => {
                count(3, Some(3))?;
                let c = self.term(&args[0])?;
                self.bool_arg(&args[0], &c)?;
                let branches = self.same_sorted(&args[1..])?;
                let [t, f]: [Term; 2] = branches.try_into().expect("two branches");
                Ok(Term::Ite(Box::new(c), Box::new(t), Box::new(f)))
            }
            "forall" | "exists" => {
                Err(unsupported(head_e.loc, format!("quantifier {head} is outside QF_FFA")))
            }
            "_" | "as" => Err(sort_err(e.loc, format!("{e} is not a finite field literal"))),
            other if self.constants.contains_key(other) || self.lookup_var(other).is_some() => {
                Err(sort_err(head_e.loc, format!("{other} is a constant and takes no arguments")))
            }
            other => Err(sort_err(head_e.loc, format!("unknown function {other}"))),
        }
    }

    fn same_sorted(&mut self, args: &[SExpr]) -> Result<Vec<Term>> {
        let mut typed: Vec<Term> = Vec::with_capacity(args.len());
        for a in args {
            let t = self.term(a)?;
            if let Some(first) = typed.first() {
                let (want, got) = (first.sort(), t.sort());
                if want != got {
                    return Err(sort_err(a.loc, format!("{a} has sort {got}, expected {want}")));
                }
            }
            typed.push(t);
        }
        Ok(typed)
    }

    fn let_term(&mut self, e: &SExpr, args: &[SExpr]) -> Result<Term> {
        let [bindings_e, body_e] = args else {
            return Err(parse_err(e.loc, "let expects a binding list and a body"));
        };
        let binding_items = bindings_e
            .list()
            .filter(|b| !b.is_empty())
            .ok_or_else(|| parse_err(bindings_e.loc, "let expects a non-empty binding list"))?;
        let mut bindings = Vec::new();
        let mut frame = Vec::new();
        for b in binding_items {
            let [name_e, value_e] = b
                .list()
                .ok_or_else(|| parse_err(b.loc, "malformed let binding"))?
            else {
                return Err(parse_err(b.loc, "malformed let binding"));
            };
            let name = check_declared_name(name_e)?;
            if frame.iter().any(|(n, _): &(String, Sort)| *n == name) {
                return Err(sort_err(name_e.loc, format!("{name} bound twice in one let")));
            }
            let value = self.term(value_e)?;
            frame.push((name.clone(), value.sort()));
            bindings.push((name, value));
        }
        self.frames.push(frame);
        let body = self.term(body_e);
        self.frames.pop();
        Ok(Term::Let { bindings, body: Box::new(body?) })
    }
}

/// Sort-checks every term of a parsed script.
pub fn sort_check(script: &Script, cache: &ConwayCache) -> Result<TypedScript> {
    let mut checker = Checker {
        cache,
        aliases: HashMap::new(),
        constants: HashMap::new(),
        frames: Vec::new(),
    };
    let mut commands = Vec::with_capacity(script.commands.len());
    for cmd in &script.commands {
        let typed = match cmd {
            Command::SetLogic(l) => Command::SetLogic(l.clone()),
            Command::SetInfo(k, v) => Command::SetInfo(k.clone(), v.clone()),
            Command::SetOption(k, v) => Command::SetOption(k.clone(), v.clone()),
            Command::DeclareFun { name, field } => {
                checker.constants.insert(name.clone(), field.clone());
                Command::DeclareFun { name: name.clone(), field: field.clone() }
            }
            Command::DefineSort { name, field } => {
                checker.aliases.insert(name.clone(), field.clone());
                Command::DefineSort { name: name.clone(), field: field.clone() }
            }
            Command::Assert(e) => {
                let t = checker.term(e)?;
                checker.bool_arg(e, &t)?;
                Command::Assert(t)
            }
            Command::GetValue(es) => {
                let mut ts = Vec::with_capacity(es.len());
                for e in es {
                    let t = checker.term(e)?;
                    checker.field_arg(e, &t)?;
                    ts.push(t);
                }
                Command::GetValue(ts)
            }
            Command::CheckSat => Command::CheckSat,
            Command::GetModel => Command::GetModel,
            Command::Exit => Command::Exit,
        };
        commands.push(typed);
    }
    Ok(Script { commands })
}

/// Tokenizes, parses and sort-checks a script.
pub fn parse_typed(text: &str, cache: &ConwayCache) -> Result<TypedScript> {
    let tokens = tokenize(text)?;
    let script = parse_script(&tokens, cache)?;
    sort_check(&script, cache)
}
