//! Literal normalization invariants.

use ffa::conway::ConwayCache;
use ffa::ext::FieldSort;
use ffa::normalize::{literal_symbol, normalize_literal, print_literal};
use ffa::smtlib::{literal_coefficients, parse_literal};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn worked_examples() {
    let cache = ConwayCache::default();
    let f5 = cache.field(&FieldSort::prime(5u32)).unwrap();
    let f9 = cache.field(&FieldSort::new(3u32, 2)).unwrap();
    let f729 = cache.field(&FieldSort::new(3u32, 6)).unwrap();
    let show = |lit: &str, f| print_literal(&parse_literal(lit, f).unwrap());
    assert_eq!(show("ff4", &f5), "(_ ff-1 5)");
    assert_eq!(show("ff10", &f5), "(_ ff0 5)");
    assert_eq!(show("ff2.1", &f9), "(_ ff-1.1 3 2)");
    assert_eq!(show("ff1.0", &f9), "(_ ff1 3 2)");
    assert_eq!(parse_literal("ff1.0.-1.0.0", &f729).unwrap(), parse_literal("ff1.0.-1", &f729).unwrap());
    assert!(parse_literal("ff1.2", &f5).is_err());
}

fn sorts() -> impl Strategy<Value = FieldSort> {
    prop_oneof![
        Just(FieldSort::prime(2u32)),
        Just(FieldSort::prime(3u32)),
        Just(FieldSort::prime(7u32)),
        Just(FieldSort::prime(65_537u32)),
        Just(FieldSort::new(3u32, 2)),
        Just(FieldSort::new(2u32, 4)),
        Just(FieldSort::new(5u32, 3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normalization_is_canonical(sort in sorts(), raw in prop::collection::vec(-1_000_000i64..1_000_000, 1..5), shift in prop::collection::vec(-50i64..50, 5)) {
        let cache = ConwayCache::default();
        let f = cache.field(&sort).unwrap();
        let raw: Vec<BigInt> = raw.into_iter().take(f.degree()).map(BigInt::from).collect();
        let e = normalize_literal(&raw, &f)?;

        // idempotent
        prop_assert_eq!(&normalize_literal(e.coeffs(), &f)?, &e);
        // congruent coefficients give the same element
        let p = BigInt::from(sort.p.clone());
        let moved: Vec<BigInt> = raw.iter().zip(&shift).map(|(c, k)| c + &p * k).collect();
        prop_assert_eq!(&normalize_literal(&moved, &f)?, &e);
        // the printed symbol parses back and is in the signed range without trailing zeros
        let sym = literal_symbol(&e);
        prop_assert_eq!(&parse_literal(&sym, &f)?, &e);
        let coeffs = literal_coefficients(&sym)?;
        let (lo, hi) = f.modulus().signed_bounds();
        prop_assert!(coeffs.iter().all(|c| &lo <= c && c <= &hi));
        prop_assert!(coeffs.len() == 1 || coeffs.last() != Some(&BigInt::from(0)));
    }
}
