//! Dense univariate polynomials over a prime field.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;

/// A polynomial in `α` over `F_p`; `coeffs[i]` is the coefficient of `α^i`.
///
/// Coefficients are kept in the signed range and the leading coefficient is
/// nonzero. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
    modulus: PrimeModulus,
}

impl Polynomial {
    pub fn new(coeffs: Vec<BigInt>, modulus: PrimeModulus) -> Self {
        let coeffs = coeffs.iter().map(|c| modulus.reduce(c)).collect();
        Self::from_reduced(coeffs, modulus)
    }

    pub fn from_i64(coeffs: &[i64], modulus: &PrimeModulus) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), modulus.clone())
    }

    pub(crate) fn from_reduced(mut coeffs: Vec<BigInt>, modulus: PrimeModulus) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs, modulus }
    }

    pub fn zero(modulus: &PrimeModulus) -> Self {
        Self { coeffs: Vec::new(), modulus: modulus.clone() }
    }

    pub fn one(modulus: &PrimeModulus) -> Self {
        Self::constant(BigInt::one(), modulus)
    }

    pub fn constant(c: BigInt, modulus: &PrimeModulus) -> Self {
        Self::new(vec![c], modulus.clone())
    }

    /// The monomial `α^k`.
    pub fn monomial(k: usize, modulus: &PrimeModulus) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs, modulus: modulus.clone() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::SortMismatch(format!(
                "polynomials over F_{} and F_{}",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.modulus.reduce(&(self.coeff(i) + other.coeff(i))))
            .collect();
        Ok(Self::from_reduced(coeffs, self.modulus.clone()))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|c| self.modulus.reduce(&-c)).collect();
        Self::from_reduced(coeffs, self.modulus.clone())
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|a| self.modulus.reduce(&(a * c))).collect();
        Self::from_reduced(coeffs, self.modulus.clone())
    }

    /// Schoolbook product; no reduction by any modulus polynomial.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.modulus));
        }
        let mut acc = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a * b;
            }
        }
        Ok(Self::new(acc, self.modulus.clone()))
    }

    /// Long division: returns `(q, r)` with `self = q * divisor + r` and
    /// `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check(divisor)?;
        let d = divisor
            .degree()
            .ok_or_else(|| Error::InvalidInput("polynomial division by zero".into()))?;
        let m = &self.modulus;
        let lead_inv = m.inverse_of(divisor.leading().expect("nonzero divisor"));

        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(m), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + d];
            if top.is_zero() {
                continue;
            }
            let c = m.reduce(&(top * &lead_inv));
            for (j, g) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = m.reduce(&(&rem[k + j] - &c * g));
            }
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Self::from_reduced(quot, m.clone()), Self::from_reduced(rem, m.clone())))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    /// Scales to leading coefficient 1; the zero polynomial stays zero.
    pub fn to_monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&self.modulus.inverse_of(l)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.to_monic())
    }

    pub fn mul_mod(&self, other: &Polynomial, m: &Polynomial) -> Result<Polynomial> {
        self.mul(other)?.rem(m)
    }

    /// `self^e mod m` by repeated squaring.
    pub fn pow_mod(&self, e: &BigUint, m: &Polynomial) -> Result<Polynomial> {
        let mut result = Self::one(&self.modulus).rem(m)?;
        let base = self.rem(m)?;
        for i in (0..e.bits()).rev() {
            result = result.mul_mod(&result, m)?;
            if e.bit(i) {
                result = result.mul_mod(&base, m)?;
            }
        }
        Ok(result)
    }

    /// Inverse of `self` modulo `m` by the extended Euclidean algorithm.
    ///
    /// Zero maps to zero. Fails if `self` and `m` share a nontrivial factor.
    pub fn inverse_mod(&self, m: &Polynomial) -> Result<Polynomial> {
        let f = self.rem(m)?;
        if f.is_zero() {
            return Ok(f);
        }
        // invariant: s_i * f ≡ r_i (mod m)
        let (mut r0, mut r1) = (m.clone(), f);
        let (mut s0, mut s1) = (Self::zero(&self.modulus), Self::one(&self.modulus));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1)?)?;
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return Err(Error::InvalidInput(format!(
                "{self} is not invertible modulo {m}"
            )));
        }
        let c = self.modulus.inverse_of(&r0.coeffs[0]);
        s0.scale(&c).rem(m)
    }

    /// Evaluates `self` at `point` in `F_p[α]/m` (Horner's rule).
    pub fn eval_mod(&self, point: &Polynomial, m: &Polynomial) -> Result<Polynomial> {
        let mut acc = Self::zero(&self.modulus);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_mod(point, m)?.add(&Self::constant(c.clone(), &self.modulus))?;
        }
        acc.rem(m)
    }

    /// Irreducibility over `F_p`.
    ///
    /// A polynomial of degree `d` is irreducible iff
    /// `gcd(f, α^(p^k) - α) = 1` for every `1 <= k <= d/2`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidInput(
                    "irreducibility is undefined for constant polynomials".into(),
                ))
            }
        };
        let f = self.to_monic();
        let x = Self::monomial(1, &self.modulus);
        let p = self.modulus.value_unsigned();
        let mut frob = x.rem(&f)?;
        for _ in 1..=d / 2 {
            frob = frob.pow_mod(p, &f)?;
            if !f.gcd(&frob.sub(&x)?)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "a")?,
                _ => write!(f, "a^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}](F_{})", self, self.modulus)
    }
}
