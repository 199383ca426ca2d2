//! Desk-scale decision procedure for `QF_FFA`.
//!
//! Division and reciprocal are first eliminated by [`preprocess`]; the
//! remaining equational problem is decided by depth-first enumeration of
//! field assignments, pruning a branch as soon as an assertion whose
//! constants are all assigned evaluates to false.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ext::{Field, FieldElement};
use crate::normalize::{print_literal, print_model, Model};
use crate::smtlib::{Command, Connective, FfOp, Script, Term, TypedScript};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Values for (some of) the declared constants.
pub type Assignment = HashMap<String, FieldElement>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Field(FieldElement),
    Bool(bool),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Field(_) => None,
        }
    }

    pub fn as_field(&self) -> Option<&FieldElement> {
        match self {
            Value::Field(e) => Some(e),
            Value::Bool(_) => None,
        }
    }
}

fn ill_sorted(t: &Term) -> Error {
    Error::SortMismatch(format!("ill-sorted term {t}"))
}

struct Evaluator<'a> {
    assignment: &'a Assignment,
    frames: Vec<Vec<(&'a str, Value)>>,
}

impl<'a> Evaluator<'a> {
    fn field(&mut self, t: &'a Term) -> Result<FieldElement> {
        match self.eval(t)? {
            Value::Field(e) => Ok(e),
            Value::Bool(_) => Err(ill_sorted(t)),
        }
    }

    fn boolean(&mut self, t: &'a Term) -> Result<bool> {
        match self.eval(t)? {
            Value::Bool(b) => Ok(b),
            Value::Field(_) => Err(ill_sorted(t)),
        }
    }

    fn eval(&mut self, t: &'a Term) -> Result<Value> {
        Ok(match t {
            Term::Literal(e) => Value::Field(e.clone()),
            Term::Const { name, .. } => Value::Field(
                self.assignment
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("constant {name} is unassigned")))?,
            ),
            Term::Var { name, .. } => self
                .frames
                .iter()
                .rev()
                .find_map(|f| f.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone()))
                .ok_or_else(|| Error::InvalidInput(format!("unbound variable {name}")))?,
            Term::Apply { op, args } => {
                let first = self.field(args.first().ok_or_else(|| ill_sorted(t))?)?;
                let v = match op {
                    FfOp::Neg => first.neg(),
                    FfOp::Recip => first.recip(),
                    _ => {
                        let mut acc = first;
                        for a in &args[1..] {
                            let b = self.field(a)?;
                            acc = match op {
                                FfOp::Add => acc.add(&b)?,
                                FfOp::Sub => acc.sub(&b)?,
                                FfOp::Mul => acc.mul(&b)?,
                                FfOp::Div => acc.div(&b)?,
                                FfOp::Neg | FfOp::Recip => unreachable!(),
                            };
                        }
                        acc
                    }
                };
                Value::Field(v)
            }
            Term::Bool(b) => Value::Bool(*b),
            Term::Connective { kind, args } => Value::Bool(match kind {
                Connective::Not => !self.boolean(&args[0])?,
                Connective::And => {
                    for a in args {
                        if !self.boolean(a)? {
                            return Ok(Value::Bool(false));
                        }
                    }
                    true
                }
                Connective::Or => {
                    for a in args {
                        if self.boolean(a)? {
                            return Ok(Value::Bool(true));
                        }
                    }
                    false
                }
                Connective::Xor => {
                    let mut acc = false;
                    for a in args {
                        acc ^= self.boolean(a)?;
                    }
                    acc
                }
                // right associative: a1 => (a2 => (... => an))
                Connective::Implies => {
                    let (last, premises) = args.split_last().ok_or_else(|| ill_sorted(t))?;
                    for a in premises {
                        if !self.boolean(a)? {
                            return Ok(Value::Bool(true));
                        }
                    }
                    self.boolean(last)?
                }
            }),
            Term::Eq(a, b) => Value::Bool(self.eval(a)? == self.eval(b)?),
            Term::Ite(c, then, other) => {
                if self.boolean(c)? {
                    self.eval(then)?
                } else {
                    self.eval(other)?
                }
            }
            Term::Let { bindings, body } => {
                let mut frame = Vec::with_capacity(bindings.len());
                for (name, value) in bindings {
                    frame.push((name.as_str(), self.eval(value)?));
                }
                self.frames.push(frame);
                let v = self.eval(body);
                self.frames.pop();
                v?
            }
        })
    }
}

/// Evaluates a term bottom-up. Division and reciprocal follow the zero
/// convention, so un-preprocessed terms evaluate too.
pub fn eval_term(t: &Term, a: &Assignment) -> Result<Value> {
    Evaluator { assignment: a, frames: Vec::new() }.eval(t)
}

/// Whether every assertion of `script` holds under `a`.
pub fn satisfies(script: &TypedScript, a: &Assignment) -> Result<bool> {
    for t in script.assertions() {
        if eval_term(t, a)?.as_bool() != Some(true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces `let` variables by their bound terms.
pub fn expand_lets(t: &Term) -> Term {
    fn go(t: &Term, env: &mut Vec<(String, Term)>) -> Term {
        let map = |args: &[Term], env: &mut Vec<(String, Term)>| -> Vec<Term> {
            args.iter().map(|a| go(a, env)).collect()
        };
        match t {
            Term::Var { name, .. } => env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| t.clone()),
            Term::Apply { op, args } => Term::Apply { op: *op, args: map(args, env) },
            Term::Connective { kind, args } => Term::Connective { kind: *kind, args: map(args, env) },
            Term::Eq(a, b) => Term::eq(go(a, env), go(b, env)),
            Term::Ite(c, x, y) => {
                Term::Ite(Box::new(go(c, env)), Box::new(go(x, env)), Box::new(go(y, env)))
            }
            Term::Let { bindings, body } => {
                let values: Vec<(String, Term)> =
                    bindings.iter().map(|(n, v)| (n.clone(), go(v, env))).collect();
                let depth = env.len();
                env.extend(values);
                let out = go(body, env);
                env.truncate(depth);
                out
            }
            Term::Literal(_) | Term::Const { .. } | Term::Bool(_) => t.clone(),
        }
    }
    go(t, &mut Vec::new())
}

/// The reciprocal constraint on a fresh `z` standing for `recip(x)`:
/// `z·z·x = z ∧ z·x·x = x`. It holds exactly when `z = recip(x)`, including
/// `z = 0` for `x = 0`, and needs no disjunction.
pub fn recip_constraint(z: &Term, x: &Term) -> Term {
    let mul = |a: Term, b: Term| Term::apply(FfOp::Mul, vec![a, b]);
    Term::and(vec![
        Term::eq(mul(mul(z.clone(), z.clone()), x.clone()), z.clone()),
        Term::eq(mul(mul(z.clone(), x.clone()), x.clone()), x.clone()),
    ])
}

/// The disjunctive form of the same relation:
/// `(x ≠ 0 ∧ x·z = 1) ∨ (x = 0 ∧ z = 0)`.
pub fn recip_constraint_disjunctive(z: &Term, x: &Term, field: &Field) -> Term {
    let zero = Term::Literal(field.zero());
    let one = Term::Literal(field.one());
    Term::or(vec![
        Term::and(vec![
            Term::not(Term::eq(x.clone(), zero.clone())),
            Term::eq(Term::apply(FfOp::Mul, vec![x.clone(), z.clone()]), one),
        ]),
        Term::and(vec![Term::eq(x.clone(), zero.clone()), Term::eq(z.clone(), zero)]),
    ])
}

/// A script with division and reciprocal eliminated.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub script: TypedScript,
    /// Constants introduced for reciprocals, in creation order.
    pub fresh: Vec<(String, Field)>,
}

struct Rewriter {
    taken: HashSet<String>,
    memo: HashMap<Term, Term>,
    fresh: Vec<(String, Field)>,
    pending: Vec<Command<Term>>,
    counter: usize,
}

impl Rewriter {
    fn reciprocal_of(&mut self, x: Term) -> Term {
        if let Some(z) = self.memo.get(&x) {
            return z.clone();
        }
        let field = x.sort().field().cloned().expect("reciprocal of a field term");
        let name = loop {
            let candidate = format!("recip!{}", self.counter);
            self.counter += 1;
            if self.taken.insert(candidate.clone()) {
                break candidate;
            }
        };
        let z = Term::constant(name.clone(), &field);
        self.fresh.push((name.clone(), field.clone()));
        self.pending.push(Command::DeclareFun { name, field });
        self.pending.push(Command::Assert(recip_constraint(&z, &x)));
        self.memo.insert(x, z.clone());
        z
    }

    fn rewrite(&mut self, t: &Term) -> Term {
        match t {
            Term::Apply { op, args } => {
                let args: Vec<Term> = args.iter().map(|a| self.rewrite(a)).collect();
                match op {
                    FfOp::Recip => {
                        let x = args.into_iter().next().expect("unary");
                        self.reciprocal_of(x)
                    }
                    FfOp::Div => {
                        let mut it = args.into_iter();
                        let (a, b) = (it.next().expect("binary"), it.next().expect("binary"));
                        let rb = self.reciprocal_of(b);
                        Term::apply(FfOp::Mul, vec![a, rb])
                    }
                    _ => Term::Apply { op: *op, args },
                }
            }
            Term::Connective { kind, args } => Term::Connective {
                kind: *kind,
                args: args.iter().map(|a| self.rewrite(a)).collect(),
            },
            Term::Eq(a, b) => Term::eq(self.rewrite(a), self.rewrite(b)),
            Term::Ite(c, x, y) => Term::Ite(
                Box::new(self.rewrite(c)),
                Box::new(self.rewrite(x)),
                Box::new(self.rewrite(y)),
            ),
            Term::Let { .. } => {
                let expanded = expand_lets(t);
                self.rewrite(&expanded)
            }
            Term::Literal(_) | Term::Const { .. } | Term::Var { .. } | Term::Bool(_) => t.clone(),
        }
    }
}

fn mentions_division(t: &Term) -> bool {
    let mut found = false;
    t.visit(&mut |s| {
        if matches!(s, Term::Apply { op: FfOp::Div | FfOp::Recip, .. }) {
            found = true;
        }
    });
    found
}

/// Eliminates `ff.div` and `ff.recip` from the assertions.
///
/// Each distinct reciprocal argument `x` gets one fresh constant `z`,
/// declared and constrained by [`recip_constraint`] right after the
/// assertion that first needs it; `ff.div a b` becomes `ff.mul a z_b`.
/// Scripts without division or reciprocal come back unchanged.
pub fn preprocess(script: &TypedScript) -> Preprocessed {
    let mut rw = Rewriter {
        taken: script.declarations().iter().map(|(n, _)| n.to_string()).collect(),
        memo: HashMap::new(),
        fresh: Vec::new(),
        pending: Vec::new(),
        counter: 0,
    };
    let mut commands = Vec::with_capacity(script.commands.len());
    for cmd in &script.commands {
        match cmd {
            Command::Assert(t) if mentions_division(t) => {
                let t = rw.rewrite(t);
                let pending = std::mem::take(&mut rw.pending);
                let (decls, constraints): (Vec<_>, Vec<_>) = pending
                    .into_iter()
                    .partition(|c| matches!(c, Command::DeclareFun { .. }));
                commands.extend(decls);
                commands.push(Command::Assert(t));
                commands.extend(constraints);
            }
            other => commands.push(other.clone()),
        }
    }
    Preprocessed { script: Script { commands }, fresh: rw.fresh }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "sat",
            Verdict::Unsat => "unsat",
            Verdict::Unknown => "unknown",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sat" => Ok(Verdict::Sat),
            "unsat" => Ok(Verdict::Unsat),
            "unknown" => Ok(Verdict::Unknown),
            other => Err(Error::InvalidInput(format!("not a verdict: {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnknownReason {
    /// The search space exceeds the enumeration budget.
    Budget { space: BigUint, budget: u64 },
    Unsupported(String),
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::Budget { space, budget } => {
                write!(f, "search space {space} exceeds budget {budget}")
            }
            UnknownReason::Unsupported(why) => write!(f, "unsupported: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub verdict: Verdict,
    /// Present iff the verdict is `sat`.
    pub model: Option<Model>,
    /// Present iff the verdict is `unknown`.
    pub reason: Option<UnknownReason>,
}

impl SolveResult {
    fn sat(model: Model) -> Self {
        Self { verdict: Verdict::Sat, model: Some(model), reason: None }
    }

    fn unsat() -> Self {
        Self { verdict: Verdict::Unsat, model: None, reason: None }
    }

    fn unknown(reason: UnknownReason) -> Self {
        Self { verdict: Verdict::Unknown, model: None, reason: Some(reason) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of total assignments the search may cover.
    pub budget: u64,
    /// Shuffles the enumeration order of constants with this seed.
    pub order_seed: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, order_seed: None }
    }
}

fn space_size<'a>(fields: impl Iterator<Item = &'a Field>) -> BigUint {
    fields.fold(BigUint::one(), |acc, f| acc * f.order())
}

fn over_budget(space: &BigUint, budget: u64) -> bool {
    space.to_u64().is_none_or(|s| s > budget)
}

/// Builds the reported model: every declared constant, in declaration order,
/// with unconstrained constants set to zero.
fn model_for(script: &TypedScript, a: &Assignment) -> Model {
    let mut m = Model::new();
    for (name, field) in script.declarations() {
        m.insert(name, a.get(name).cloned().unwrap_or_else(|| field.zero()));
    }
    m
}

fn model_assignment(m: &Model) -> Assignment {
    m.iter().map(|(n, v)| (n.to_string(), v.clone())).collect()
}

/// Decides the conjunction of the script's assertions.
///
/// Division and reciprocal are eliminated first. Only constants that occur
/// in an assertion are enumerated; if the product of their field orders
/// exceeds the budget the verdict is `unknown`.
pub fn check_sat(script: &TypedScript, config: &SolverConfig) -> SolveResult {
    let pre = preprocess(script);
    let assertions: Vec<&Term> = pre.script.assertions();

    let mut order: Vec<(String, Field)> = Vec::new();
    for (name, field) in pre.script.declarations() {
        if assertions.iter().any(|t| t.constants().contains(&name)) {
            order.push((name.to_string(), field.clone()));
        }
    }
    if let Some(seed) = config.order_seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let space = space_size(order.iter().map(|(_, f)| f));
    if over_budget(&space, config.budget) {
        return SolveResult::unknown(UnknownReason::Budget { space, budget: config.budget });
    }

    // each assertion is checked as soon as its last constant is assigned
    let position: HashMap<&str, usize> =
        order.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
    let mut ground = Vec::new();
    let mut by_level: Vec<Vec<&Term>> = vec![Vec::new(); order.len()];
    for t in &assertions {
        match t.constants().iter().map(|c| position[c]).max() {
            Some(level) => by_level[level].push(t),
            None => ground.push(*t),
        }
    }

    let mut assignment = Assignment::new();
    let holds = |t: &Term, a: &Assignment| matches!(eval_term(t, a), Ok(Value::Bool(true)));
    if !ground.iter().all(|t| holds(t, &assignment)) {
        return SolveResult::unsat();
    }

    let domains: Vec<Vec<FieldElement>> =
        order.iter().map(|(_, f)| f.elements().collect()).collect();
    let mut cursor = vec![0usize; order.len()];
    let mut level = 0usize;
    if order.is_empty() {
        return SolveResult::sat(model_for(script, &assignment));
    }
    loop {
        if cursor[level] == domains[level].len() {
            // exhausted this level; backtrack
            cursor[level] = 0;
            assignment.remove(&order[level].0);
            if level == 0 {
                return SolveResult::unsat();
            }
            level -= 1;
            cursor[level] += 1;
            continue;
        }
        assignment.insert(order[level].0.clone(), domains[level][cursor[level]].clone());
        if by_level[level].iter().all(|t| holds(t, &assignment)) {
            if level + 1 == order.len() {
                let model = model_for(script, &assignment);
                debug_assert!(satisfies(script, &model_assignment(&model)).unwrap_or(false));
                return SolveResult::sat(model);
            }
            level += 1;
        } else {
            cursor[level] += 1;
        }
    }
}

/// Reference procedure: no preprocessing and no pruning. Enumerates every
/// assignment to the constants occurring in the assertions and evaluates
/// the original assertions under the zero convention.
pub fn naive_check_sat(script: &TypedScript, budget: u64) -> SolveResult {
    let assertions = script.assertions();
    let used: Vec<(String, Field)> = script
        .declarations()
        .into_iter()
        .filter(|(n, _)| assertions.iter().any(|t| t.constants().contains(n)))
        .map(|(n, f)| (n.to_string(), f.clone()))
        .collect();
    let space = space_size(used.iter().map(|(_, f)| f));
    if over_budget(&space, budget) {
        return SolveResult::unknown(UnknownReason::Budget { space, budget });
    }
    let domains: Vec<Vec<FieldElement>> = used.iter().map(|(_, f)| f.elements().collect()).collect();
    let total = space.to_u64().expect("checked against the budget");
    for mut index in 0..total {
        let mut a = Assignment::new();
        for ((name, _), dom) in used.iter().zip(&domains) {
            let len = dom.len() as u64;
            a.insert(name.clone(), dom[(index % len) as usize].clone());
            index /= len;
        }
        if satisfies(script, &a).unwrap_or(false) {
            return SolveResult::sat(model_for(script, &a));
        }
    }
    SolveResult::unsat()
}

/// Evaluates each term under the model.
pub fn get_value(terms: &[Term], model: &Model) -> Result<Vec<(Term, FieldElement)>> {
    let a = model_assignment(model);
    terms
        .iter()
        .map(|t| match eval_term(t, &a)? {
            Value::Field(e) => Ok((t.clone(), e)),
            Value::Bool(_) => Err(Error::Command(format!("get-value of Boolean term {t}"))),
        })
        .collect()
}

/// Executes a script command by command, keeping the assertion stack and the
/// result of the most recent `check-sat`.
pub struct Session {
    config: SolverConfig,
    script: TypedScript,
    last: Option<SolveResult>,
    exited: bool,
}

impl Session {
    pub fn new(config: SolverConfig) -> Self {
        Self { config, script: Script::default(), last: None, exited: false }
    }

    pub fn exited(&self) -> bool {
        self.exited
    }

    pub fn last_result(&self) -> Option<&SolveResult> {
        self.last.as_ref()
    }

    /// Runs one command and returns its printed response, if any.
    pub fn execute(&mut self, cmd: &Command<Term>) -> Result<Option<String>> {
        match cmd {
            Command::CheckSat => {
                let result = check_sat(&self.script, &self.config);
                let verdict = result.verdict;
                self.last = Some(result);
                Ok(Some(verdict.to_string()))
            }
            Command::GetModel => {
                let model = self.current_model()?;
                Ok(Some(print_model(model)))
            }
            Command::GetValue(terms) => {
                let pairs = get_value(terms, self.current_model()?)?;
                let body: Vec<String> = pairs
                    .iter()
                    .map(|(t, v)| format!("({t} {})", print_literal(v)))
                    .collect();
                Ok(Some(format!("({})", body.join(" "))))
            }
            Command::Exit => {
                self.exited = true;
                Ok(None)
            }
            Command::Assert(_) | Command::DeclareFun { .. } => {
                self.last = None;
                self.script.commands.push(cmd.clone());
                Ok(None)
            }
            other => {
                self.script.commands.push(other.clone());
                Ok(None)
            }
        }
    }

    fn current_model(&self) -> Result<&Model> {
        match &self.last {
            Some(SolveResult { model: Some(m), .. }) => Ok(m),
            Some(r) => Err(Error::Command(format!(
                "model is not available after a {} check-sat",
                r.verdict
            ))),
            None => Err(Error::Command("model is not available; run check-sat first".into())),
        }
    }
}

/// Summary of [`run_script`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub verdicts: Vec<Verdict>,
    pub command_errors: usize,
}

/// Runs a whole script, writing responses (and `(error "…")` lines for
/// failed commands) to `out`. Stops at `exit`.
pub fn run_script(
    script: &TypedScript,
    config: &SolverConfig,
    out: &mut dyn Write,
) -> Result<RunSummary> {
    let mut session = Session::new(config.clone());
    let mut summary = RunSummary::default();
    for cmd in &script.commands {
        match session.execute(cmd) {
            Ok(Some(text)) => writeln!(out, "{text}")?,
            Ok(None) => {}
            Err(e) => {
                summary.command_errors += 1;
                writeln!(out, "(error \"{}\")", e.to_string().replace('"', "\"\""))?;
            }
        }
        if matches!(cmd, Command::CheckSat) {
            if let Some(r) = session.last_result() {
                summary.verdicts.push(r.verdict);
            }
        }
        if session.exited() {
            break;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conway::ConwayCache;
    use crate::smtlib::parse_typed;

    const EXAMPLE: &str = "(set-logic QF_FFA)
(define-sort FF5 () (_ FiniteField 5))
(define-sort FF9 () (_ FiniteField 3 2))
(declare-fun x0 () FF5)
(declare-fun x1 () FF5)
(declare-fun x2 () FF5)
(assert (= (ff.mul x1 x2) (ff.add x1 x2)))
(assert (= (ff.recip x1) x0))
(assert (= (ff.sub x2 x0) (as ff1 FF5)))
";

    fn parse(text: &str) -> TypedScript {
        parse_typed(text, &ConwayCache::default()).unwrap()
    }

    #[test]
    fn example_system_is_unsat() {
        let s = parse(EXAMPLE);
        assert_eq!(check_sat(&s, &SolverConfig::default()).verdict, Verdict::Unsat);
        assert_eq!(naive_check_sat(&s, DEFAULT_BUDGET).verdict, Verdict::Unsat);
    }

    #[test]
    fn double_equals_one() {
        let s = parse(
            "(set-logic QF_FFA)(declare-fun x () (_ FiniteField 5))
             (assert (= (ff.add x x) (_ ff1 5)))",
        );
        let r = check_sat(&s, &SolverConfig::default());
        assert_eq!(r.verdict, Verdict::Sat);
        let m = r.model.unwrap();
        assert_eq!(print_model(&m), "((define-fun x () (_ FiniteField 5) (_ ff-2 5)))");
    }

    #[test]
    fn empty_assertions_are_sat() {
        let s = parse("(set-logic QF_FFA)(declare-fun x () (_ FiniteField 3 2))");
        let r = check_sat(&s, &SolverConfig::default());
        assert_eq!(r.verdict, Verdict::Sat);
        assert!(r.model.unwrap().get("x").unwrap().is_zero());
    }

    #[test]
    fn preprocessing_shapes() {
        let s = parse(EXAMPLE);
        let pre = preprocess(&s);
        assert_eq!(pre.fresh.len(), 1);
        let text = pre.script.to_string();
        assert!(!text.contains("ff.recip") && !text.contains("ff.div"));
        assert!(text.contains("(assert (= recip!0 x0))"));
        assert!(text.contains(
            "(assert (and (= (ff.mul (ff.mul recip!0 recip!0) x1) recip!0) \
             (= (ff.mul (ff.mul recip!0 x1) x1) x1)))"
        ));

        let plain = parse("(set-logic QF_FFA)(declare-fun x () (_ FiniteField 5))(assert (= x x))");
        assert_eq!(preprocess(&plain).script, plain);
    }

    #[test]
    fn nested_reciprocal() {
        let s = parse(
            "(set-logic QF_FFA)(declare-fun x () (_ FiniteField 5))
             (assert (not (= (ff.recip (ff.recip x)) x)))",
        );
        let pre = preprocess(&s);
        assert_eq!(pre.fresh.len(), 2);
        assert_eq!(check_sat(&s, &SolverConfig::default()).verdict, Verdict::Unsat);
    }

    #[test]
    fn fresh_names_avoid_user_names() {
        let s = parse(
            "(set-logic QF_FFA)(declare-fun |recip!0| () (_ FiniteField 5))
             (assert (= (ff.recip |recip!0|) (_ ff2 5)))",
        );
        let pre = preprocess(&s);
        assert_eq!(pre.fresh[0].0, "recip!1");
        let r = check_sat(&s, &SolverConfig::default());
        assert_eq!(r.verdict, Verdict::Sat);
        let m = r.model.unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.get("recip!0").unwrap(), &m.get("recip!0").unwrap().field().from_int(-2));
    }

    #[test]
    fn evaluation_examples() {
        let cache = ConwayCache::default();
        let f5 = cache.field(&crate::ext::FieldSort::prime(5u32)).unwrap();
        let lit = |v: i64| Term::Literal(f5.from_int(v));
        let t = Term::apply(
            FfOp::Mul,
            vec![Term::apply(FfOp::Add, vec![lit(2), lit(1)]), lit(2)],
        );
        assert_eq!(eval_term(&t, &Assignment::new()).unwrap(), Value::Field(f5.one()));
        let d = Term::apply(FfOp::Div, vec![lit(1), lit(0)]);
        assert_eq!(eval_term(&d, &Assignment::new()).unwrap(), Value::Field(f5.zero()));
        let x = Term::constant("x", &f5);
        assert!(eval_term(&Term::eq(x.clone(), x.clone()), &Assignment::new()).is_err());
        let a: Assignment = [("x".to_string(), f5.from_int(2))].into();
        assert_eq!(eval_term(&Term::eq(x.clone(), x), &a).unwrap(), Value::Bool(true));
    }

    #[test]
    fn budget_gives_unknown() {
        let s = parse(EXAMPLE);
        let r = check_sat(&s, &SolverConfig { budget: 100, order_seed: None });
        assert_eq!(r.verdict, Verdict::Unknown);
        assert!(matches!(r.reason, Some(UnknownReason::Budget { .. })));
        assert!(r.model.is_none());
    }

    #[test]
    fn session_output() {
        let s = parse(
            "(set-logic QF_FFA)(declare-fun x () (_ FiniteField 5))
             (get-model)
             (assert (= x (_ ff2 5)))(check-sat)(get-model)
             (get-value (x (ff.neg x) (ff.recip (ff.sub x x))))
             (assert (= x (_ ff1 5)))(check-sat)(get-model)(exit)(check-sat)",
        );
        let mut out = Vec::new();
        let summary = run_script(&s, &SolverConfig::default(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("(error"));
        assert_eq!(lines[1], "sat");
        assert_eq!(lines[2], "((define-fun x () (_ FiniteField 5) (_ ff2 5)))");
        assert_eq!(
            lines[3],
            "((x (_ ff2 5)) ((ff.neg x) (_ ff-2 5)) ((ff.recip (ff.sub x x)) (_ ff0 5)))"
        );
        assert_eq!(lines[4], "unsat");
        assert!(lines[5].starts_with("(error"));
        assert_eq!(lines.len(), 6);
        assert_eq!(summary.verdicts, vec![Verdict::Sat, Verdict::Unsat]);
        assert_eq!(summary.command_errors, 2);
    }
}
