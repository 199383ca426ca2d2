//! External solver client and differential-testing harness.
//!
//! Scripts (seeded fuzz output or a corpus directory) are decided by the
//! internal solver and by each configured external solver; verdicts are
//! compared and external `sat` models are re-checked with the internal
//! evaluator only.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write as _};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::process::{Command as Process, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, RandBigInt};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conway::ConwayCache;
use crate::error::{Error, Result};
use crate::ext::{Field, FieldElement, FieldSort};
use crate::normalize::{literal_symbol, print_model};
use crate::smtlib::parser::{resolve_sort, sorted_literal};
use crate::smtlib::sexpr::read_all;
use crate::smtlib::{parse_script, parse_typed, tokenize, Command, SExpr, Sort, TokenKind, TypedScript};
use crate::solver::{check_sat, eval_term, naive_check_sat, Assignment, SolveResult, SolverConfig, Value, Verdict};

pub const FILE_PLACEHOLDER: &str = "{file}";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// How to invoke one external solver on a script file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolverConfig {
    pub label: String,
    /// Executable followed by its arguments; exactly one argument contains `{file}`.
    pub command: Vec<String>,
    pub timeout: Duration,
}

impl ExternalSolverConfig {
    pub fn new(label: impl Into<String>, command: Vec<String>, timeout: Duration) -> Result<Self> {
        let label = label.into();
        if command.is_empty() {
            return Err(Error::InvalidInput(format!("solver {label}: empty command")));
        }
        let holes: usize = command.iter().map(|a| a.matches(FILE_PLACEHOLDER).count()).sum();
        if holes != 1 {
            return Err(Error::InvalidInput(format!(
                "solver {label}: command must contain exactly one {FILE_PLACEHOLDER} placeholder, found {holes}"
            )));
        }
        Ok(Self { label, command, timeout })
    }

    /// Parses `LABEL=CMD ARG…`. A command without `{file}` gets it appended
    /// as the last argument.
    pub fn parse(arg: &str, timeout: Duration) -> Result<Self> {
        let (label, cmd) = arg
            .split_once('=')
            .filter(|(l, _)| !l.trim().is_empty())
            .ok_or_else(|| Error::InvalidInput(format!("expected LABEL=CMD, found {arg:?}")))?;
        let mut command: Vec<String> = cmd.split_whitespace().map(str::to_string).collect();
        if !cmd.contains(FILE_PLACEHOLDER) {
            command.push(FILE_PLACEHOLDER.into());
        }
        Self::new(label.trim(), command, timeout)
    }

    pub fn cvc5(timeout: Duration) -> Self {
        let command = ["cvc5", "--lang=smt2", FILE_PLACEHOLDER];
        Self::new("cvc5", command.map(String::from).to_vec(), timeout).expect("valid template")
    }

    pub fn yices(timeout: Duration) -> Self {
        let command = ["yices-smt2", FILE_PLACEHOLDER];
        Self::new("yices", command.map(String::from).to_vec(), timeout).expect("valid template")
    }

    /// The known solvers whose executables are on `PATH`.
    pub fn detect(timeout: Duration) -> Vec<Self> {
        [Self::cvc5(timeout), Self::yices(timeout)]
            .into_iter()
            .filter(Self::is_available)
            .collect()
    }

    pub fn executable(&self) -> Option<PathBuf> {
        resolve_executable(&self.command[0])
    }

    pub fn is_available(&self) -> bool {
        self.executable().is_some()
    }

    fn argv(&self, file: &Path) -> Vec<String> {
        let file = file.to_string_lossy();
        self.command.iter().map(|a| a.replace(FILE_PLACEHOLDER, &file)).collect()
    }
}

fn resolve_executable(program: &str) -> Option<PathBuf> {
    let direct = Path::new(program);
    if program.contains(std::path::MAIN_SEPARATOR) {
        return direct.is_file().then(|| direct.to_path_buf());
    }
    std::env::var_os("PATH").and_then(|paths| {
        std::env::split_paths(&paths).map(|d| d.join(program)).find(|c| c.is_file())
    })
}

/// Result of one external run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExternalOutcome {
    Answer { verdict: Verdict, model: Option<String> },
    SpawnFailed(String),
    Timeout,
    Unparseable(String),
}

/// Splits solver output into the first verdict line and the text after it.
pub fn parse_solver_output(stdout: &str) -> Option<(Verdict, Option<String>)> {
    let mut lines = stdout.lines();
    let verdict = lines.by_ref().find_map(|l| l.trim().parse::<Verdict>().ok())?;
    let rest: Vec<&str> = lines.collect();
    let rest = rest.join("\n");
    let rest = rest.trim();
    Some((verdict, (!rest.is_empty()).then(|| rest.to_string())))
}

fn drain(mut pipe: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = pipe.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

/// Runs the solver on `file`, killing it once the timeout elapses.
pub fn run_external(file: &Path, cfg: &ExternalSolverConfig) -> ExternalOutcome {
    let argv = cfg.argv(file);
    let mut child = match Process::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return ExternalOutcome::SpawnFailed(format!("{}: {e}", argv[0])),
    };
    let out = drain(child.stdout.take().expect("piped"));
    let err = drain(child.stderr.take().expect("piped"));
    let start = Instant::now();
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if start.elapsed() >= cfg.timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return ExternalOutcome::Timeout;
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => return ExternalOutcome::SpawnFailed(e.to_string()),
        }
    }
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    match parse_solver_output(&stdout) {
        Some((verdict, model)) => ExternalOutcome::Answer { verdict, model },
        None => {
            let shown = if stdout.trim().is_empty() { stderr } else { stdout };
            let first = shown.lines().next().unwrap_or("no output").to_string();
            ExternalOutcome::Unparseable(first)
        }
    }
}

/// Outcome of re-checking an external model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelCheck {
    /// Every assertion holds and every value is a normalized indexed literal.
    Valid,
    /// Every assertion holds but these constants were printed in another form.
    NotNormalized(Vec<String>),
    Invalid(String),
}

impl ModelCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, ModelCheck::Valid)
    }
}

fn legacy_literal(e: &SExpr, field: &Field) -> Option<FieldElement> {
    // `#f<value>m<modulus>`, as printed by some solvers
    let Some(TokenKind::Hash(text)) = e.atom() else { return None };
    let (value, modulus) = text.strip_prefix("#f")?.split_once('m')?;
    let value: BigInt = value.parse().ok()?;
    let modulus: BigUint = modulus.parse().ok()?;
    (field.degree() == 1 && modulus == field.sort().p).then(|| field.from_int(value))
}

fn model_value(
    e: &SExpr,
    field: &Field,
    aliases: &HashMap<String, Field>,
    cache: &ConwayCache,
) -> Result<(FieldElement, bool)> {
    if let Some(v) = legacy_literal(e, field) {
        return Ok((v, false));
    }
    let (value, text, form) = sorted_literal(e, aliases, cache)?
        .ok_or_else(|| Error::InvalidInput(format!("value {e} is not a field literal")))?;
    if value.field() != field {
        return Err(Error::InvalidInput(format!("value {e} is not in {}", field.sort())));
    }
    let normalized = form == crate::smtlib::LiteralForm::Indexed && text == literal_symbol(&value);
    Ok((value, normalized))
}

/// Parses a `(define-fun …)` model block and re-evaluates every assertion of
/// `script` under it with [`eval_term`].
pub fn validate_external_model(
    model_text: &str,
    script: &TypedScript,
    cache: &ConwayCache,
) -> ModelCheck {
    match check_model(model_text, script, cache) {
        Ok(check) => check,
        Err(e) => ModelCheck::Invalid(e.to_string()),
    }
}

fn check_model(model_text: &str, script: &TypedScript, cache: &ConwayCache) -> Result<ModelCheck> {
    let invalid = |m: String| Error::InvalidInput(m);
    let exprs = read_all(&tokenize(model_text)?)?;
    let block = exprs.first().ok_or_else(|| invalid("empty model".into()))?;
    let mut entries = block.list().ok_or_else(|| invalid(format!("expected a model, found {block}")))?;
    if let [head, rest @ ..] = entries {
        if head.symbol() == Some("model") {
            entries = rest;
        } else if head.symbol() == Some("error") {
            return Err(invalid(format!("solver reported {block}")));
        }
    }
    let aliases: HashMap<String, Field> =
        script.sort_aliases().into_iter().map(|(n, f)| (n.to_string(), f.clone())).collect();
    let declared: HashMap<&str, &Field> = script.declarations().into_iter().collect();

    let mut assignment = Assignment::new();
    let mut unnormalized = Vec::new();
    for entry in entries {
        let Some([kw, name, params, sort, value]) = entry.list() else {
            return Err(invalid(format!("malformed model entry {entry}")));
        };
        if kw.symbol() != Some("define-fun") || params.list().is_none_or(|p| !p.is_empty()) {
            return Err(invalid(format!("malformed model entry {entry}")));
        }
        let name = match name.atom() {
            Some(TokenKind::Symbol(s) | TokenKind::FfLiteral(s)) => s.clone(),
            _ => return Err(invalid(format!("malformed model entry {entry}"))),
        };
        let Some(field) = declared.get(name.as_str()) else { continue };
        match resolve_sort(sort, &aliases, cache)? {
            Sort::Field(f) if &f == *field => {}
            other => return Err(invalid(format!("{name} has sort {other}, expected {}", field.sort()))),
        }
        let (v, normalized) = model_value(value, field, &aliases, cache)?;
        if !normalized {
            unnormalized.push(name.clone());
        }
        assignment.insert(name, v);
    }
    for name in declared.keys() {
        if !assignment.contains_key(*name) {
            return Err(invalid(format!("model omits declared constant {name}")));
        }
    }
    for (i, t) in script.assertions().into_iter().enumerate() {
        if eval_term(t, &assignment)? != Value::Bool(true) {
            return Err(invalid(format!("assertion {} is false under the model", i + 1)));
        }
    }
    Ok(if unnormalized.is_empty() {
        ModelCheck::Valid
    } else {
        ModelCheck::NotNormalized(unnormalized)
    })
}

/// Rewrites a script for an external solver: models enabled, the query
/// commands replaced by a single `check-sat` and `get-model`. Literals keep
/// their original spelling.
pub fn external_script_text(text: &str, cache: &ConwayCache) -> Result<String> {
    let script = parse_script(&tokenize(text)?, cache)?;
    let mut out = String::from("(set-option :produce-models true)\n");
    for cmd in &script.commands {
        match cmd {
            Command::CheckSat | Command::GetModel | Command::GetValue(_) | Command::Exit => {}
            Command::SetOption(key, _) if key == "produce-models" => {}
            other => out.push_str(&format!("{other}\n")),
        }
    }
    out.push_str("(check-sat)\n(get-model)\n");
    Ok(out)
}

/// Shape of generated scripts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzParams {
    pub max_constants: usize,
    pub max_depth: usize,
    pub max_assertions: usize,
    pub sort_pool: Vec<FieldSort>,
}

impl Default for FuzzParams {
    fn default() -> Self {
        Self {
            max_constants: 3,
            max_depth: 2,
            max_assertions: 3,
            sort_pool: vec![FieldSort::prime(3u32), FieldSort::prime(5u32)],
        }
    }
}

impl FuzzParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("fuzz parameters: {m}")));
        if !(1..=16).contains(&self.max_constants) {
            return bad("max constants must be in 1..=16");
        }
        if self.max_depth > 8 {
            return bad("max depth must be at most 8");
        }
        if !(1..=16).contains(&self.max_assertions) {
            return bad("max assertions must be in 1..=16");
        }
        if self.sort_pool.is_empty() {
            return bad("sort pool is empty");
        }
        Ok(())
    }
}

struct Fuzzer<'a> {
    rng: ChaCha8Rng,
    params: &'a FuzzParams,
    // (name, index into sort pool)
    constants: Vec<(String, usize)>,
    sort_names: Vec<String>,
}

impl Fuzzer<'_> {
    fn literal(&mut self, sort: usize) -> String {
        let s = &self.params.sort_pool[sort];
        let bound = BigInt::from(s.p.clone()) * 2;
        let count = if s.n == 1 { 1 } else { self.rng.gen_range(1..=s.n as usize) };
        let coeffs: Vec<String> = (0..count)
            .map(|_| self.rng.gen_bigint_range(&-&bound, &(&bound + 1)).to_string())
            .collect();
        let symbol = format!("ff{}", coeffs.join("."));
        if self.rng.gen_bool(0.5) {
            let idx = if s.n == 1 { s.p.to_string() } else { format!("{} {}", s.p, s.n) };
            format!("(_ {symbol} {idx})")
        } else {
            format!("(as {symbol} {})", self.sort_names[sort])
        }
    }

    fn leaf(&mut self, sort: usize) -> String {
        let names: Vec<&String> =
            self.constants.iter().filter(|(_, s)| *s == sort).map(|(n, _)| n).collect();
        if !names.is_empty() && self.rng.gen_bool(0.7) {
            names[self.rng.gen_range(0..names.len())].clone()
        } else {
            self.literal(sort)
        }
    }

    fn term(&mut self, sort: usize, depth: usize) -> String {
        if depth == 0 {
            return self.leaf(sort);
        }
        // weights: leaf 2, add 2, sub 1, mul 2, neg 1, div 2, recip 2, ite 1
        let pick = self.rng.gen_range(0..13);
        let d = depth - 1;
        match pick {
            0..=1 => self.leaf(sort),
            2..=3 | 5..=6 => {
                let op = if pick <= 3 { "ff.add" } else { "ff.mul" };
                let n = self.rng.gen_range(2..=3);
                let args: Vec<String> = (0..n).map(|_| self.term(sort, d)).collect();
                format!("({op} {})", args.join(" "))
            }
            4 => format!("(ff.sub {} {})", self.term(sort, d), self.term(sort, d)),
            7 => format!("(ff.neg {})", self.term(sort, d)),
            8..=9 => format!("(ff.div {} {})", self.term(sort, d), self.term(sort, d)),
            10..=11 => format!("(ff.recip {})", self.term(sort, d)),
            _ => format!(
                "(ite {} {} {})",
                self.atom(d),
                self.term(sort, d),
                self.term(sort, d)
            ),
        }
    }

    fn atom(&mut self, depth: usize) -> String {
        let sort = self.constants[self.rng.gen_range(0..self.constants.len())].1;
        let (a, b) = (self.term(sort, depth), self.term(sort, depth));
        if self.rng.gen_bool(0.8) {
            format!("(= {a} {b})")
        } else {
            format!("(distinct {a} {b})")
        }
    }

    fn formula(&mut self, depth: usize) -> String {
        if depth == 0 || self.rng.gen_bool(0.5) {
            return self.atom(depth);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => format!("(not {})", self.formula(d)),
            k => {
                let op = ["and", "or", "xor", "=>"][k - 1];
                let n = self.rng.gen_range(2..=3);
                let args: Vec<String> = (0..n).map(|_| self.formula(d)).collect();
                format!("({op} {})", args.join(" "))
            }
        }
    }
}

/// Deterministic well-sorted script for `seed`: random terms over the six
/// field operators with at least a quarter of operator choices being
/// division or reciprocal, equality atoms under Boolean connectives, and
/// literals drawn from twice the field characteristic on either side so
/// that most need normalization.
pub fn fuzz_generate(seed: u64, params: &FuzzParams) -> Result<String> {
    params.validate()?;
    let mut f = Fuzzer {
        rng: ChaCha8Rng::seed_from_u64(seed),
        params,
        constants: Vec::new(),
        sort_names: Vec::new(),
    };
    let mut out = String::from("(set-logic QF_FFA)\n");
    let aliased = f.rng.gen_bool(0.5);
    for (i, s) in params.sort_pool.iter().enumerate() {
        let name = if aliased {
            let alias = format!("F{i}");
            out.push_str(&format!("(define-sort {alias} () {s})\n"));
            alias
        } else {
            s.to_string()
        };
        f.sort_names.push(name);
    }
    let count = f.rng.gen_range(1..=params.max_constants);
    for i in 0..count {
        let sort = f.rng.gen_range(0..params.sort_pool.len());
        out.push_str(&format!("(declare-fun x{i} () {})\n", f.sort_names[sort]));
        f.constants.push((format!("x{i}"), sort));
    }
    for _ in 0..f.rng.gen_range(1..=params.max_assertions) {
        let formula = f.formula(params.max_depth);
        out.push_str(&format!("(assert {formula})\n"));
    }
    out.push_str("(check-sat)\n");
    Ok(out)
}

/// One script to compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffItem {
    pub label: String,
    pub path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub text: String,
}

pub fn fuzz_corpus(seeds: Range<u64>, params: &FuzzParams) -> Result<Vec<DiffItem>> {
    seeds
        .map(|seed| {
            Ok(DiffItem {
                label: format!("seed-{seed}"),
                path: None,
                seed: Some(seed),
                text: fuzz_generate(seed, params)?,
            })
        })
        .collect()
}

/// All `*.smt2` files of a directory, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<DiffItem>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "smt2"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            Ok(DiffItem {
                label: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
                text: std::fs::read_to_string(&path)?,
                seed: None,
                path: Some(path),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffClass {
    Agree,
    AgreeVacuous,
    VerdictMismatch,
    ModelInvalid,
    NormalizationWarning,
    ExternalError,
    Timeout,
    Skipped,
}

impl DiffClass {
    pub const ALL: [DiffClass; 8] = [
        DiffClass::Agree,
        DiffClass::AgreeVacuous,
        DiffClass::VerdictMismatch,
        DiffClass::ModelInvalid,
        DiffClass::NormalizationWarning,
        DiffClass::ExternalError,
        DiffClass::Timeout,
        DiffClass::Skipped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiffClass::Agree => "agree",
            DiffClass::AgreeVacuous => "agree-vacuous",
            DiffClass::VerdictMismatch => "verdict-mismatch",
            DiffClass::ModelInvalid => "model-invalid",
            DiffClass::NormalizationWarning => "normalization-warning",
            DiffClass::ExternalError => "external-error",
            DiffClass::Timeout => "timeout",
            DiffClass::Skipped => "skipped",
        }
    }
}

impl fmt::Display for DiffClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One (script, solver) comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffRecord {
    pub script: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub solver: String,
    pub internal: Option<Verdict>,
    pub external: Option<Verdict>,
    pub class: DiffClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl DiffRecord {
    pub fn line(&self) -> String {
        let v = |v: Option<Verdict>| v.map_or("none".to_string(), |v| v.to_string());
        format!(
            "{}:{}  internal={} external={} class={}",
            self.solver,
            self.script,
            v(self.internal),
            v(self.external),
            self.class
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub records: Vec<DiffRecord>,
}

impl DiffReport {
    pub fn count(&self, class: DiffClass) -> usize {
        self.records.iter().filter(|r| r.class == class).count()
    }

    pub fn has_mismatch(&self) -> bool {
        self.count(DiffClass::VerdictMismatch) > 0
    }

    /// Per-record lines followed by the summary block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.line());
            out.push('\n');
        }
        out.push_str(&format!("total {}\n", self.records.len()));
        for class in DiffClass::ALL {
            out.push_str(&format!("{class} {}\n", self.count(class)));
        }
        out
    }

    /// One JSON object per record.
    pub fn to_json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct DiffOptions {
    pub solvers: Vec<ExternalSolverConfig>,
    /// Compare the pruned solver against the naive oracle instead.
    pub internal_only: bool,
    pub solver: SolverConfig,
    pub jobs: usize,
}

impl Default for DiffOptions {
    fn default() -> Self {
        Self { solvers: Vec::new(), internal_only: false, solver: SolverConfig::default(), jobs: 4 }
    }
}

pub const ORACLE_LABEL: &str = "naive";

fn compare(
    script: &TypedScript,
    internal: &SolveResult,
    external: Verdict,
    model: Option<&str>,
    cache: &ConwayCache,
) -> (DiffClass, Option<String>) {
    use Verdict::*;
    match (internal.verdict, external) {
        (Unknown, _) | (_, Unknown) => (DiffClass::AgreeVacuous, None),
        (a, b) if a != b => (DiffClass::VerdictMismatch, None),
        (Unsat, Unsat) => (DiffClass::Agree, None),
        _ => match model.map(|m| validate_external_model(m, script, cache)) {
            Some(ModelCheck::Valid) => (DiffClass::Agree, None),
            Some(ModelCheck::NotNormalized(names)) => (
                DiffClass::NormalizationWarning,
                Some(format!("non-normalized values for {}", names.join(", "))),
            ),
            Some(ModelCheck::Invalid(why)) => (DiffClass::ModelInvalid, Some(why)),
            None => (DiffClass::ModelInvalid, Some("no model printed".into())),
        },
    }
}

fn record(item: &DiffItem, solver: &str) -> DiffRecord {
    DiffRecord {
        script: item.label.clone(),
        path: item.path.as_ref().map(|p| p.display().to_string()),
        seed: item.seed,
        solver: solver.to_string(),
        internal: None,
        external: None,
        class: DiffClass::Skipped,
        detail: None,
    }
}

fn run_oracle(item: &DiffItem, script: &TypedScript, internal: &SolveResult, opts: &DiffOptions, cache: &ConwayCache) -> DiffRecord {
    let mut r = record(item, ORACLE_LABEL);
    r.internal = Some(internal.verdict);
    let oracle = naive_check_sat(script, opts.solver.budget);
    r.external = Some(oracle.verdict);
    // the internal model goes through the same printed-model check an
    // external solver would face
    let printed = internal.model.as_ref().map(print_model);
    let (class, detail) = compare(script, &oracle, internal.verdict, printed.as_deref(), cache);
    r.class = class;
    r.detail = detail;
    r
}

fn run_solver(
    item: &DiffItem,
    script: &TypedScript,
    internal: &SolveResult,
    cfg: &ExternalSolverConfig,
    cache: &ConwayCache,
) -> DiffRecord {
    let mut r = record(item, &cfg.label);
    r.internal = Some(internal.verdict);
    if !cfg.is_available() {
        r.detail = Some(format!("{} not found", cfg.command[0]));
        return r;
    }
    let file = external_script_text(&item.text, cache).and_then(|text| {
        let mut file = tempfile::Builder::new().prefix("ffa-diff-").suffix(".smt2").tempfile()?;
        file.write_all(text.as_bytes())?;
        file.flush()?;
        Ok(file)
    });
    let file = match file {
        Ok(f) => f,
        Err(e) => {
            r.class = DiffClass::ExternalError;
            r.detail = Some(e.to_string());
            return r;
        }
    };
    match run_external(file.path(), cfg) {
        ExternalOutcome::Answer { verdict, model } => {
            r.external = Some(verdict);
            let (class, detail) = compare(script, internal, verdict, model.as_deref(), cache);
            r.class = class;
            r.detail = detail;
        }
        ExternalOutcome::SpawnFailed(why) => {
            r.class = DiffClass::ExternalError;
            r.detail = Some(format!("spawn failed: {why}"));
        }
        ExternalOutcome::Unparseable(first) => {
            r.class = DiffClass::ExternalError;
            r.detail = Some(format!("unparseable output: {first}"));
        }
        ExternalOutcome::Timeout => r.class = DiffClass::Timeout,
    }
    r
}

fn diff_item(item: &DiffItem, opts: &DiffOptions, cache: &ConwayCache) -> Vec<DiffRecord> {
    let labels: Vec<&str> = if opts.internal_only {
        vec![ORACLE_LABEL]
    } else {
        opts.solvers.iter().map(|s| s.label.as_str()).collect()
    };
    let script = match parse_typed(&item.text, cache) {
        Ok(s) => s,
        Err(e) => {
            return labels
                .into_iter()
                .map(|l| DiffRecord { detail: Some(format!("input error: {e}")), ..record(item, l) })
                .collect()
        }
    };
    let internal = check_sat(&script, &opts.solver);
    if opts.internal_only {
        return vec![run_oracle(item, &script, &internal, opts, cache)];
    }
    opts.solvers.iter().map(|cfg| run_solver(item, &script, &internal, cfg, cache)).collect()
}

/// Compares every item against every configured solver (or the naive
/// oracle), running up to `opts.jobs` items at a time. Records come back in
/// input order.
pub fn run_diff(items: &[DiffItem], opts: &DiffOptions, cache: &ConwayCache) -> DiffReport {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Vec<DiffRecord>>>> = Mutex::new(vec![None; items.len()]);
    let jobs = opts.jobs.clamp(1, items.len().max(1));
    thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let recs = diff_item(item, opts, cache);
                results.lock().expect("no poisoned workers")[i] = Some(recs);
            });
        }
    });
    let records = results
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .flat_map(Option::unwrap_or_default)
        .collect();
    DiffReport { records }
}
