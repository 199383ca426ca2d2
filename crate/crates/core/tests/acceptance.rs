//! Acceptance suite: one PASS / FAIL / SKIP line per criterion.

use std::time::{Duration, Instant};

use ffa::conway::ConwayCache;
use ffa::ext::{Field, FieldSort};
use ffa::field::{is_probable_prime, PrimeModulus};
use ffa::interop::{
    fuzz_corpus, fuzz_generate, run_diff, validate_external_model, DiffClass, DiffOptions,
    ExternalSolverConfig, FuzzParams, ModelCheck,
};
use ffa::normalize::{print_literal, print_model};
use ffa::poly::Polynomial;
use ffa::smtlib::{parse_literal, parse_typed, Term};
use ffa::solver::{
    check_sat, eval_term, naive_check_sat, recip_constraint, recip_constraint_disjunctive,
    satisfies, Assignment, SolverConfig, Value, Verdict,
};
use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod support;

enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

type Check = Result<Outcome, String>;

type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn field(cache: &ConwayCache, p: u32, n: u32) -> Result<Field, String> {
    cache.field(&FieldSort::new(p, n)).map_err(err)
}

fn arithmetic_golden() -> Check {
    let cache = ConwayCache::default();
    let f5 = field(&cache, 5, 1)?;
    let e = |v: i64| f5.from_int(v);
    ensure!(e(2).add(&e(1)).map_err(err)? == e(-2), "2 + 1 != -2");
    ensure!(e(2).mul(&e(-1)).map_err(err)? == e(-2), "2 * -1 != -2");
    ensure!(e(2).add(&e(1)).and_then(|s| s.mul(&e(2))).map_err(err)? == e(1), "(2 + 1) * 2 != 1");
    let f9 = field(&cache, 3, 2)?;
    let a = f9.element_i64(&[0, 1]).map_err(err)?;
    let a1 = f9.element_i64(&[1, 1]).map_err(err)?;
    ensure!(a1.mul(&a).map_err(err)? == f9.element_i64(&[1, -1]).map_err(err)?, "(a + 1) * a != -a + 1");
    Ok(Outcome::Pass)
}

fn normalization_golden() -> Check {
    let cache = ConwayCache::default();
    let f5 = field(&cache, 5, 1)?;
    let f9 = field(&cache, 3, 2)?;
    let f729 = field(&cache, 3, 6)?;
    for (lit, f, want) in [
        ("ff4", &f5, "(_ ff-1 5)"),
        ("ff10", &f5, "(_ ff0 5)"),
        ("ff2.1", &f9, "(_ ff-1.1 3 2)"),
        ("ff1.0", &f9, "(_ ff1 3 2)"),
    ] {
        let got = print_literal(&parse_literal(lit, f).map_err(err)?);
        ensure!(got == want, "{lit} normalized to {got}, expected {want}");
    }
    let long = parse_literal("ff1.0.-1.0.0", &f729).map_err(err)?;
    ensure!(long == parse_literal("ff1.0.-1", &f729).map_err(err)?, "trailing zeros changed the value");
    ensure!(parse_literal("ff1.2", &f5).is_err(), "ff1.2 accepted over F_5");
    ensure!(parse_literal("ff1.2.0", &f9).is_err(), "ff1.2.0 accepted over F_9");
    Ok(Outcome::Pass)
}

fn conway_conformance() -> Check {
    let cache = ConwayCache::default();
    let m3 = PrimeModulus::from_u64(3).map_err(err)?;
    let c32 = cache.conway_polynomial(&m3, 2).map_err(err)?;
    ensure!(c32 == Polynomial::from_i64(&[-1, -1, 1], &m3), "C_3,2 = {c32}");
    for (p, n) in [(2u64, 2u32), (3, 2), (2, 3), (5, 2)] {
        let got = cache.conway_polynomial(&PrimeModulus::from_u64(p).map_err(err)?, n).map_err(err)?;
        let got: Vec<u64> = got
            .coeffs()
            .iter()
            .map(|c| i64::try_from(c).map(|c| c.rem_euclid(p as i64) as u64))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let want = support::conway(p, n);
        ensure!(got == want, "C_{p},{n}: got {got:?}, enumeration says {want:?}");
    }
    Ok(Outcome::Pass)
}

fn division_by_zero() -> Check {
    let cache = ConwayCache::default();
    for (p, n) in [(5, 1), (7, 1), (3, 2)] {
        let f = field(&cache, p, n)?;
        ensure!(f.zero().recip().is_zero(), "recip(0) != 0 in {}", f.sort());
        for a in f.elements() {
            ensure!(a.div(&f.zero()).map_err(err)?.is_zero(), "{a:?} / 0 != 0");
        }
    }
    let empty = Assignment::new();
    for (p, n) in [(2, 1), (3, 1), (5, 1), (7, 1), (3, 2)] {
        let f = field(&cache, p, n)?;
        for x in f.elements() {
            for z in f.elements() {
                let (tx, tz) = (Term::Literal(x.clone()), Term::Literal(z.clone()));
                let want = Value::Bool(z == x.recip());
                let plain = eval_term(&recip_constraint(&tz, &tx), &empty).map_err(err)?;
                let disj = eval_term(&recip_constraint_disjunctive(&tz, &tx, &f), &empty).map_err(err)?;
                ensure!(plain == want && disj == want, "encodings differ at x={x:?} z={z:?}");
            }
        }
    }
    Ok(Outcome::Pass)
}

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

fn end_to_end() -> Check {
    let cache = ConwayCache::default();
    let script = parse_typed(EXAMPLE, &cache).map_err(err)?;
    let config = SolverConfig::default();
    ensure!(check_sat(&script, &config).verdict == Verdict::Unsat, "example not unsat");
    // independent oracle: all 125 assignments
    let f5 = field(&cache, 5, 1)?;
    let mut satisfying = 0;
    for a in f5.elements() {
        for b in f5.elements() {
            for c in f5.elements() {
                let env: Assignment = [("x0".into(), a.clone()), ("x1".into(), b.clone()), ("x2".into(), c)].into();
                satisfying += satisfies(&script, &env).map_err(err)? as u32;
            }
        }
    }
    ensure!(satisfying == 0, "oracle found {satisfying} models");
    ensure!(naive_check_sat(&script, config.budget).verdict == Verdict::Unsat, "naive oracle not unsat");

    let modified = parse_typed(&EXAMPLE.replace("(as ff1 FF5)", "(as ff2 FF5)"), &cache).map_err(err)?;
    let r = check_sat(&modified, &config);
    ensure!(r.verdict == Verdict::Sat, "modified example not sat");
    let model = r.model.ok_or("no model")?;
    let env: Assignment = model.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
    ensure!(satisfies(&modified, &env).map_err(err)?, "model does not satisfy the assertions");
    let printed = print_model(&model);
    ensure!(
        validate_external_model(&printed, &modified, &cache) == ModelCheck::Valid,
        "printed model is not normalized: {printed}"
    );
    Ok(Outcome::Pass)
}

fn field_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut primes = Vec::new();
    while primes.len() < 8 {
        let mut c = rng.gen_biguint(256);
        c.set_bit(255, true);
        c.set_bit(0, true);
        if is_probable_prime(&c, 40).map_err(err)? {
            primes.push(PrimeModulus::new(c).map_err(err)?);
        }
    }
    let cache = ConwayCache::default();
    let f125 = field(&cache, 5, 3)?;
    let prime_fields: Vec<Field> = primes.into_iter().map(Field::prime).collect();
    for case in 0..1000 {
        for f in [&prime_fields[case % prime_fields.len()], &f125] {
            let [a, b, c] = [0; 3].map(|_| f.random_element(&mut rng));
            let (ab, bc) = (a.add(&b).map_err(err)?, b.add(&c).map_err(err)?);
            ensure!(ab.add(&c).map_err(err)? == a.add(&bc).map_err(err)?, "additive associativity");
            let (ab, bc) = (a.mul(&b).map_err(err)?, b.mul(&c).map_err(err)?);
            ensure!(ab.mul(&c).map_err(err)? == a.mul(&bc).map_err(err)?, "multiplicative associativity");
            ensure!(a.add(&b).map_err(err)? == b.add(&a).map_err(err)?, "additive commutativity");
            ensure!(a.mul(&b).map_err(err)? == b.mul(&a).map_err(err)?, "multiplicative commutativity");
            let lhs = a.mul(&b.add(&c).map_err(err)?).map_err(err)?;
            let rhs = a.mul(&b).and_then(|x| x.add(&a.mul(&c)?)).map_err(err)?;
            ensure!(lhs == rhs, "distributivity");
            ensure!(a.add(&a.neg()).map_err(err)?.is_zero(), "additive inverse");
            ensure!(a.is_zero() || a.mul(&a.recip()).map_err(err)?.is_one(), "multiplicative inverse");
        }
    }
    Ok(Outcome::Pass)
}

fn front_end() -> Check {
    let cache = ConwayCache::default();
    let params = FuzzParams {
        sort_pool: vec![FieldSort::prime(5u32), FieldSort::new(3u32, 2), FieldSort::prime(1_000_003u32)],
        max_depth: 3,
        ..FuzzParams::default()
    };
    for seed in 0..1000 {
        let text = fuzz_generate(seed, &params).map_err(err)?;
        let script = parse_typed(&text, &cache).map_err(|e| format!("seed {seed}: {e}"))?;
        let again = parse_typed(&script.to_string(), &cache).map_err(err)?;
        ensure!(again == script, "round trip changed seed {seed}");
    }
    for name in ["ff3", "ff-1", "ff2.1"] {
        let text = format!("(set-logic QF_FFA)(declare-fun {name} () (_ FiniteField 5))");
        ensure!(parse_typed(&text, &cache).is_err(), "declaration of {name} accepted");
    }
    let text = "(set-logic QF_FFA)(define-sort FF5 () (_ FiniteField 5))(assert (= (_ ff1 5) (as ff1 FF5)))";
    let script = parse_typed(text, &cache).map_err(err)?;
    match script.assertions().as_slice() {
        [Term::Eq(a, b)] => ensure!(a == b, "(_ ff1 5) differs from (as ff1 FF5)"),
        _ => return Err("unexpected assertion shape".into()),
    }
    Ok(Outcome::Pass)
}

fn primality_gate() -> Check {
    let cache = ConwayCache::default();
    let text = "(set-logic QF_FFA)(declare-fun x () (_ FiniteField 4))";
    ensure!(parse_typed(text, &cache).is_err(), "(_ FiniteField 4) accepted");
    let table = support::sieve(10_000);
    for (n, &prime) in table.iter().enumerate().skip(2) {
        let got = is_probable_prime(&BigUint::from(n), 40).map_err(err)?;
        ensure!(got == prime, "Miller-Rabin says {got} for {n}");
    }
    Ok(Outcome::Pass)
}

fn differential() -> Check {
    let solvers = ExternalSolverConfig::detect(Duration::from_secs(10));
    if solvers.is_empty() {
        return Ok(Outcome::Skip("no cvc5 or yices-smt2 on PATH".into()));
    }
    let cache = ConwayCache::default();
    let items = fuzz_corpus(0..200, &FuzzParams::default()).map_err(err)?;
    let report = run_diff(&items, &DiffOptions { solvers, ..DiffOptions::default() }, &cache);
    let mismatches = report.count(DiffClass::VerdictMismatch);
    let invalid = report.count(DiffClass::ModelInvalid);
    if mismatches + invalid > 0 {
        let first = report
            .records
            .iter()
            .find(|r| matches!(r.class, DiffClass::VerdictMismatch | DiffClass::ModelInvalid))
            .map(|r| r.line())
            .unwrap_or_default();
        return Ok(Outcome::Fail(format!("{mismatches} mismatches, {invalid} invalid models; first: {first}")));
    }
    Ok(Outcome::Pass)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("arithmetic golden values", arithmetic_golden, Duration::from_secs(1)),
        ("literal normalization", normalization_golden, Duration::from_secs(1)),
        ("Conway polynomial conformance", conway_conformance, Duration::from_secs(10)),
        ("division by zero semantics", division_by_zero, Duration::from_secs(1)),
        ("end-to-end solving", end_to_end, Duration::from_secs(1)),
        ("field axioms", field_axioms, Duration::from_secs(30)),
        ("front-end round trip", front_end, Duration::from_secs(30)),
        ("primality gate", primality_gate, Duration::from_secs(5)),
        ("differential harness", differential, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(Outcome::Fail);
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Outcome::Pass if elapsed > limit => {
                Outcome::Fail(format!("took {elapsed:?}, limit {limit:?}"))
            }
            o => o,
        };
        match outcome {
            Outcome::Pass => println!("PASS  {name} ({} ms)", elapsed.as_millis()),
            Outcome::Skip(why) => println!("SKIP  {name}: {why}"),
            Outcome::Fail(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
