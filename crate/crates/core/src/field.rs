//! Prime-field arithmetic in the signed representation.
//!
//! Elements of `F_p` are the integers `-(p-1)/2 ..= p/2` (floor division).
//! Every operation is the plain integer operation followed by [`smod`].

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Miller-Rabin repetitions used when no other count is configured.
pub const DEFAULT_MR_ROUNDS: u32 = 40;

/// Inputs below this bound are decided exactly by trial division.
const EXACT_LIMIT: u64 = 1 << 16;

const WITNESS_SEED: u64 = 0x6666_615f_6d72_0001;

/// Maps `z` to the unique member of the signed range congruent to it modulo `p`.
///
/// `p` must be positive.
pub fn smod(z: &BigInt, p: &BigInt) -> BigInt {
    debug_assert!(p.is_positive());
    let r = z.mod_floor(p);
    // r in [0, p); anything above floor(p/2) wraps to the negative side
    if &r + &r > *p {
        r - p
    } else {
        r
    }
}

/// Probabilistic primality test.
///
/// Values below 2^16 are decided exactly. Larger values get a quick trial
/// division by small primes and then `rounds` Miller-Rabin rounds with
/// witnesses drawn from a fixed-seed generator, so answers are reproducible.
/// `false` always means composite.
pub fn is_probable_prime(p: &BigUint, rounds: u32) -> Result<bool> {
    if rounds == 0 {
        return Err(Error::InvalidInput(
            "Miller-Rabin needs at least one round".into(),
        ));
    }
    if *p < BigUint::from(2u32) {
        return Err(Error::InvalidInput(format!(
            "primality is undefined for {p}"
        )));
    }
    if let Some(small) = p.to_u64().filter(|&v| v < EXACT_LIMIT) {
        return Ok(is_prime_trial(small));
    }
    for q in SMALL_PRIMES {
        if (p % q).is_zero() {
            return Ok(false);
        }
    }
    Ok(miller_rabin(p, rounds))
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn miller_rabin(n: &BigUint, rounds: u32) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
            if x == one {
                return false;
            }
        }
        return false;
    }
    true
}

struct ModulusInner {
    p: BigInt,
    p_unsigned: BigUint,
}

/// A prime modulus that has passed the primality gate.
///
/// Cloning shares the underlying integer; equality compares values.
#[derive(Clone)]
pub struct PrimeModulus(Arc<ModulusInner>);

impl PrimeModulus {
    /// Checks `p` with [`DEFAULT_MR_ROUNDS`] Miller-Rabin rounds.
    pub fn new(p: BigUint) -> Result<Self> {
        Self::with_rounds(p, DEFAULT_MR_ROUNDS)
    }

    pub fn with_rounds(p: BigUint, rounds: u32) -> Result<Self> {
        if !is_probable_prime(&p, rounds)? {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::assume_prime(p))
    }

    pub(crate) fn assume_prime(p: BigUint) -> Self {
        PrimeModulus(Arc::new(ModulusInner {
            p: BigInt::from_biguint(Sign::Plus, p.clone()),
            p_unsigned: p,
        }))
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p))
    }

    pub fn value(&self) -> &BigInt {
        &self.0.p
    }

    pub fn value_unsigned(&self) -> &BigUint {
        &self.0.p_unsigned
    }

    /// The signed reduction of `z`.
    pub fn smod(&self, z: &BigInt) -> Residue {
        Residue {
            value: smod(z, &self.0.p),
            modulus: self.clone(),
        }
    }

    pub fn residue(&self, z: impl Into<BigInt>) -> Residue {
        self.smod(&z.into())
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }

    /// Smallest and largest members of the signed range.
    pub fn signed_bounds(&self) -> (BigInt, BigInt) {
        let p = &self.0.p;
        let lo = -((p - 1u32) / 2u32);
        let hi = p / 2u32;
        (lo, hi)
    }

    pub(crate) fn reduce(&self, z: &BigInt) -> BigInt {
        smod(z, &self.0.p)
    }

    pub(crate) fn is_normalized(&self, z: &BigInt) -> bool {
        let (lo, hi) = self.signed_bounds();
        *z >= lo && *z <= hi
    }

    /// Multiplicative inverse of an already-reduced integer, zero for zero.
    pub(crate) fn inverse_of(&self, z: &BigInt) -> BigInt {
        if z.is_zero() {
            return BigInt::zero();
        }
        let egcd = z.extended_gcd(&self.0.p);
        debug_assert!(egcd.gcd.is_one());
        self.reduce(&egcd.x)
    }
}

impl PartialEq for PrimeModulus {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.p == other.0.p
    }
}

impl Eq for PrimeModulus {}

impl Hash for PrimeModulus {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
    }
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeModulus({})", self.0.p)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.p)
    }
}

/// An element of `F_p` in the signed range.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    value: BigInt,
    modulus: PrimeModulus,
}

impl Residue {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::SortMismatch(format!(
                "residues modulo {} and {}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    fn wrap(&self, z: BigInt) -> Residue {
        self.modulus.smod(&z)
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.wrap(&self.value + &other.value))
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.wrap(&self.value - &other.value))
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        Ok(self.wrap(&self.value * &other.value))
    }

    /// `self * recip(other)`; zero whenever `other` is zero.
    pub fn div(&self, other: &Residue) -> Result<Residue> {
        self.check(other)?;
        self.mul(&other.recip())
    }

    pub fn neg(&self) -> Residue {
        self.wrap(-&self.value)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm; `recip(0) = 0`.
    pub fn recip(&self) -> Residue {
        Residue {
            value: self.modulus.inverse_of(&self.value),
            modulus: self.modulus.clone(),
        }
    }

    /// Square-and-multiply exponentiation; `a^0 = 1` for every `a`.
    pub fn pow(&self, e: &BigUint) -> Residue {
        let p = self.modulus.value_unsigned();
        let base = self
            .value
            .mod_floor(self.modulus.value())
            .to_biguint()
            .expect("mod_floor of a positive modulus is non-negative");
        let r = base.modpow(e, p);
        self.wrap(BigInt::from(r))
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
