//! Prime and extension field arithmetic against independent u64 oracles.

use ffa::conway::ConwayCache;
use ffa::ext::FieldSort;
use ffa::field::{is_probable_prime, PrimeModulus, Residue};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

mod support;

fn signed(v: u64, p: u64) -> i64 {
    let v = (v % p) as i64;
    let p = p as i64;
    // the signed range is {-floor((p-1)/2), ..., floor(p/2)}
    if v > p / 2 {
        v - p
    } else {
        v
    }
}

fn brute_inverse(a: u64, p: u64) -> u64 {
    (0..p).find(|&z| a * z % p == 1).unwrap_or(0)
}

fn value(r: &Residue) -> i64 {
    r.value().try_into().unwrap()
}

#[test]
fn full_operation_tables() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let m = PrimeModulus::from_u64(p).unwrap();
        for a in 0..p {
            let ra = m.residue(a);
            assert_eq!(value(&ra), signed(a, p));
            assert_eq!(value(&ra.neg()), signed(p - a, p), "p={p} a={a}");
            assert_eq!(value(&ra.recip()), signed(brute_inverse(a, p), p));
            for b in 0..p {
                let rb = m.residue(b);
                assert_eq!(value(&ra.add(&rb).unwrap()), signed(a + b, p));
                assert_eq!(value(&ra.sub(&rb).unwrap()), signed(a + p - b, p));
                assert_eq!(value(&ra.mul(&rb).unwrap()), signed(a * b, p));
                let q = a * brute_inverse(b, p);
                assert_eq!(value(&ra.div(&rb).unwrap()), signed(q, p), "p={p} {a}/{b}");
            }
        }
    }
}

#[test]
fn signed_range_of_two() {
    let m = PrimeModulus::from_u64(2).unwrap();
    let vals: Vec<i64> = (-5..5).map(|z| value(&m.residue(z))).collect();
    assert!(vals.iter().all(|v| *v == 0 || *v == 1));
}

#[test]
fn division_by_zero_in_f5_f7_f9() {
    let cache = ConwayCache::default();
    for sort in [FieldSort::prime(5u32), FieldSort::prime(7u32), FieldSort::new(3u32, 2)] {
        let f = cache.field(&sort).unwrap();
        assert!(f.zero().recip().is_zero());
        for a in f.elements() {
            assert!(a.div(&f.zero()).unwrap().is_zero());
        }
    }
}

#[test]
fn miller_rabin_matches_sieve_below_ten_thousand() {
    let table = support::sieve(10_000);
    for (n, &prime) in table.iter().enumerate().skip(2) {
        assert_eq!(is_probable_prime(&BigUint::from(n), 40).unwrap(), prime, "n = {n}");
    }
}

#[test]
fn carmichael_numbers_are_composite() {
    for n in [561u32, 1105, 1729, 2465, 2821, 6601, 8911, 75361, 101101] {
        assert!(!is_probable_prime(&BigUint::from(n), 40).unwrap());
    }
}

// F_9 = F_3[a]/(a^2 - a - 1): a^2 = a + 1. Elements are (c0, c1) with c0 + c1·a.
fn f9_mul(x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
    let c0 = x.0 * y.0;
    let c1 = x.0 * y.1 + x.1 * y.0;
    let c2 = x.1 * y.1;
    let r = |v: i64| signed(v.rem_euclid(3) as u64, 3);
    (r(c0 + c2), r(c1 + c2))
}

#[test]
fn f9_multiplication_table() {
    let cache = ConwayCache::default();
    let f9 = cache.field(&FieldSort::new(3u32, 2)).unwrap();
    let all: Vec<(i64, i64)> = (-1..=1).flat_map(|a| (-1..=1).map(move |b| (a, b))).collect();
    for &x in &all {
        for &y in &all {
            let ex = f9.element_i64(&[x.0, x.1]).unwrap();
            let ey = f9.element_i64(&[y.0, y.1]).unwrap();
            let (c0, c1) = f9_mul(x, y);
            assert_eq!(ex.mul(&ey).unwrap(), f9.element_i64(&[c0, c1]).unwrap());
        }
    }
    // (a + 1)·a = -a + 1
    let prod = f9.element_i64(&[1, 1]).unwrap().mul(&f9.element_i64(&[0, 1]).unwrap()).unwrap();
    assert_eq!(prod, f9.element_i64(&[1, -1]).unwrap());
}

fn random_prime(bits: u64, seed: u64) -> BigUint {
    use num_bigint::RandBigInt;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut c = rng.gen_biguint(bits);
        c.set_bit(bits - 1, true);
        c.set_bit(0, true);
        if is_probable_prime(&c, 40).unwrap() {
            return c;
        }
    }
}

fn big_primes() -> &'static [PrimeModulus] {
    static PRIMES: std::sync::OnceLock<Vec<PrimeModulus>> = std::sync::OnceLock::new();
    PRIMES.get_or_init(|| (0..6).map(|s| PrimeModulus::new(random_prime(256, s)).unwrap()).collect())
}

fn big_residues() -> impl Strategy<Value = (Residue, Residue, Residue)> {
    (0..6usize, any::<[u8; 40]>(), any::<[u8; 40]>(), any::<[u8; 40]>()).prop_map(|(i, a, b, c)| {
        let m = &big_primes()[i];
        let r = |bytes: [u8; 40]| m.residue(BigInt::from_signed_bytes_le(&bytes));
        (r(a), r(b), r(c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn big_prime_field_axioms((a, b, c) in big_residues()) {
        prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
        prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
        prop_assert_eq!(a.add(&b)?, b.add(&a)?);
        prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
        prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        prop_assert!(a.add(&a.neg())?.is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.recip())?.value().clone(), BigInt::from(1));
        }
        let (lo, hi) = a.modulus().signed_bounds();
        prop_assert!(&lo <= a.mul(&b)?.value() && a.mul(&b)?.value() <= &hi);
    }

    #[test]
    fn f125_field_axioms(a in prop::array::uniform3(-2i64..=2), b in prop::array::uniform3(-2i64..=2), c in prop::array::uniform3(-2i64..=2)) {
        let cache = ConwayCache::default();
        let f = cache.field(&FieldSort::new(5u32, 3)).unwrap();
        let (a, b, c) = (f.element_i64(&a)?, f.element_i64(&b)?, f.element_i64(&c)?);
        prop_assert_eq!(a.add(&b)?.add(&c)?, a.add(&b.add(&c)?)?);
        prop_assert_eq!(a.mul(&b)?.mul(&c)?, a.mul(&b.mul(&c)?)?);
        prop_assert_eq!(a.add(&b)?, b.add(&a)?);
        prop_assert_eq!(a.mul(&b)?, b.mul(&a)?);
        prop_assert_eq!(a.mul(&b.add(&c)?)?, a.mul(&b)?.add(&a.mul(&c)?)?);
        prop_assert!(a.add(&a.neg())?.is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.recip())?.is_one());
        }
    }
}
