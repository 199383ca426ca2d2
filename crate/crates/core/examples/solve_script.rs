// Parsing and solving `QF_FFA` scripts.

use ffa::conway::ConwayCache;
use ffa::smtlib::parse_typed;
use ffa::solver::{check_sat, naive_check_sat, preprocess, run_script, SolverConfig, Verdict};

const UNSAT: &str = "(set-logic QF_FFA)
(define-sort FF5 () (_ FiniteField 5))
(declare-fun x0 () FF5)
(declare-fun x1 () FF5)
(declare-fun x2 () FF5)
(assert (= (ff.mul x1 x2) (ff.add x1 x2)))
(assert (= (ff.recip x1) x0))
(assert (= (ff.sub x2 x0) (as ff1 FF5)))
(check-sat)
";

const SAT: &str = "(set-logic QF_FFA)
(define-sort FF9 () (_ FiniteField 3 2))
(declare-fun a () FF9)
(declare-fun b () FF9)
(assert (= (ff.mul a b) (_ ff1 3 2)))
(assert (distinct a (as ff1 FF9) (as ff-1 FF9)))
(assert (= (ff.div (_ ff1 3 2) a) (ff.add b (_ ff3 3 2))))
(check-sat)
(get-model)
(get-value ((ff.mul a a) (ff.recip (ff.sub a a))))
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cache = ConwayCache::default();
    let config = SolverConfig::default();

    let script = parse_typed(UNSAT, &cache)?;
    println!("after preprocessing:\n{}", preprocess(&script).script);
    let result = check_sat(&script, &config);
    assert_eq!(result.verdict, Verdict::Unsat);
    assert_eq!(naive_check_sat(&script, config.budget).verdict, Verdict::Unsat);

    let script = parse_typed(SAT, &cache)?;
    let mut out = Vec::new();
    let summary = run_script(&script, &config, &mut out)?;
    print!("{}", String::from_utf8(out)?);
    assert_eq!(summary.verdicts, vec![Verdict::Sat]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
