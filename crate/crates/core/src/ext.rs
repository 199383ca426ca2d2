//! Field sorts and elements of `F_p` and `F_{p^n}`.
//!
//! An extension field `F_{p^n}` is `F_p[α]/C_{p,n}` where `C_{p,n}` is the
//! Conway polynomial. Prime fields use the same element type with `n = 1`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Pow, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{PrimeModulus, Residue};
use crate::poly::Polynomial;

/// The identity of a finite field: characteristic `p` and degree `n`.
///
/// Purely syntactic; primality is enforced when a [`Field`] is built from it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSort {
    pub p: BigUint,
    pub n: u32,
}

impl FieldSort {
    pub fn new(p: impl Into<BigUint>, n: u32) -> Self {
        Self { p: p.into(), n }
    }

    pub fn prime(p: impl Into<BigUint>) -> Self {
        Self::new(p, 1)
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    /// `p^n`.
    pub fn order(&self) -> BigUint {
        Pow::pow(&self.p, self.n)
    }
}

/// Indexed SMT-LIB spelling: `(_ FiniteField p)` or `(_ FiniteField p n)`.
impl fmt::Display for FieldSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "(_ FiniteField {})", self.p)
        } else {
            write!(f, "(_ FiniteField {} {})", self.p, self.n)
        }
    }
}

struct FieldInner {
    sort: FieldSort,
    modulus: PrimeModulus,
    reduction: Option<Polynomial>,
}

/// Arithmetic context for one field sort. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl Field {
    pub fn prime(modulus: PrimeModulus) -> Self {
        Field(Arc::new(FieldInner {
            sort: FieldSort::prime(modulus.value_unsigned().clone()),
            modulus,
            reduction: None,
        }))
    }

    /// Extension field modulo `reduction`, which must be monic and irreducible
    /// of degree at least 2. Public construction goes through
    /// [`crate::conway::ConwayCache::field`], which supplies the Conway polynomial.
    pub(crate) fn with_reduction(reduction: Polynomial) -> Result<Self> {
        let n = reduction.degree().unwrap_or(0);
        if n < 2 || !reduction.is_monic() {
            return Err(Error::InvalidInput(format!(
                "{reduction} is not a monic polynomial of degree >= 2"
            )));
        }
        let modulus = reduction.modulus().clone();
        Ok(Field(Arc::new(FieldInner {
            sort: FieldSort::new(modulus.value_unsigned().clone(), n as u32),
            modulus,
            reduction: Some(reduction),
        })))
    }

    pub fn sort(&self) -> &FieldSort {
        &self.0.sort
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.0.modulus
    }

    pub fn degree(&self) -> usize {
        self.0.sort.n as usize
    }

    pub fn order(&self) -> BigUint {
        self.0.sort.order()
    }

    /// The reduction polynomial, `None` for prime fields.
    pub fn reduction(&self) -> Option<&Polynomial> {
        self.0.reduction.as_ref()
    }

    /// Builds an element from arbitrary integer coefficients (lowest degree
    /// first), reducing each with `smod` and dropping trailing zeros.
    pub fn element(&self, coeffs: &[BigInt]) -> Result<FieldElement> {
        if coeffs.len() > self.degree().max(1) {
            return Err(Error::SortMismatch(format!(
                "{} coefficients given for a field of degree {}",
                coeffs.len(),
                self.degree()
            )));
        }
        let reduced = coeffs.iter().map(|c| self.0.modulus.reduce(c)).collect();
        Ok(self.reduced_element(reduced))
    }

    pub fn element_i64(&self, coeffs: &[i64]) -> Result<FieldElement> {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        self.element(&big)
    }

    pub fn from_int(&self, z: impl Into<BigInt>) -> FieldElement {
        self.reduced_element(vec![self.0.modulus.reduce(&z.into())])
    }

    fn reduced_element(&self, mut coeffs: Vec<BigInt>) -> FieldElement {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        FieldElement { field: self.clone(), coeffs }
    }

    fn poly_element(&self, poly: Polynomial) -> FieldElement {
        self.reduced_element(poly.coeffs().to_vec())
    }

    pub fn zero(&self) -> FieldElement {
        self.reduced_element(Vec::new())
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Embeds a residue of the prime subfield.
    pub fn lift(&self, r: &Residue) -> Result<FieldElement> {
        if r.modulus() != self.modulus() {
            return Err(Error::SortMismatch(format!(
                "residue modulo {} lifted into {}",
                r.modulus(),
                self.sort()
            )));
        }
        Ok(self.from_int(r.value().clone()))
    }

    /// Every element, in increasing little-endian signed-digit order.
    pub fn elements(&self) -> Elements {
        let (lo, hi) = self.0.modulus.signed_bounds();
        Elements {
            field: self.clone(),
            digits: Some(vec![lo.clone(); self.degree()]),
            lo,
            hi,
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let (lo, hi) = self.0.modulus.signed_bounds();
        let hi = hi + 1;
        let coeffs = (0..self.degree()).map(|_| rng.gen_bigint_range(&lo, &hi)).collect();
        self.reduced_element(coeffs)
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.field.sort() != self.sort() {
            return Err(Error::SortMismatch(format!(
                "element of {} used in {}",
                a.field.sort(),
                self.sort()
            )));
        }
        Ok(())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.sort == other.0.sort
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.sort.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduction() {
            None => write!(f, "Field(F_{})", self.0.sort.p),
            Some(r) => write!(f, "Field(F_{}^{} mod {})", self.0.sort.p, self.0.sort.n, r),
        }
    }
}

/// Iterator over all elements of a field. See [`Field::elements`].
pub struct Elements {
    field: Field,
    digits: Option<Vec<BigInt>>,
    lo: BigInt,
    hi: BigInt,
}

impl Iterator for Elements {
    type Item = FieldElement;

    fn next(&mut self) -> Option<FieldElement> {
        let digits = self.digits.as_mut()?;
        let out = self.field.reduced_element(digits.clone());
        let mut i = 0;
        loop {
            if i == digits.len() {
                self.digits = None;
                break;
            }
            if digits[i] < self.hi {
                digits[i] += 1;
                break;
            }
            digits[i] = self.lo.clone();
            i += 1;
        }
        Some(out)
    }
}

/// A normalized field element.
///
/// `coeffs()` are signed residues, lowest degree first, with trailing zeros
/// removed; zero has no coefficients and has at most `n` coefficients.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<BigInt>,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn sort(&self) -> &FieldSort {
        self.field.sort()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The prime-subfield residue, if this element lies in `F_p`.
    pub fn to_residue(&self) -> Option<Residue> {
        match self.coeffs.as_slice() {
            [] => Some(self.field.modulus().zero()),
            [c] => Some(self.field.modulus().residue(c.clone())),
            _ => None,
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_reduced(self.coeffs.clone(), self.field.modulus().clone())
    }

    fn prime_residue(&self) -> Residue {
        self.to_residue().expect("prime field elements have at most one coefficient")
    }

    fn reduce_poly(&self, poly: Polynomial) -> FieldElement {
        match self.field.reduction() {
            None => self.field.poly_element(poly),
            Some(m) => self
                .field
                .poly_element(poly.rem(m).expect("reduction polynomial is nonzero")),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check(other)?;
        if self.field.degree() == 1 {
            let r = self.prime_residue().add(&other.prime_residue())?;
            return self.field.lift(&r);
        }
        Ok(self.field.poly_element(self.to_polynomial().add(&other.to_polynomial())?))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check(other)?;
        if self.field.degree() == 1 {
            let r = self.prime_residue().sub(&other.prime_residue())?;
            return self.field.lift(&r);
        }
        Ok(self.field.poly_element(self.to_polynomial().sub(&other.to_polynomial())?))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check(other)?;
        if self.field.degree() == 1 {
            let r = self.prime_residue().mul(&other.prime_residue())?;
            return self.field.lift(&r);
        }
        Ok(self.reduce_poly(self.to_polynomial().mul(&other.to_polynomial())?))
    }

    /// `self * other^-1`, zero when `other` is zero.
    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check(other)?;
        self.mul(&other.recip())
    }

    pub fn neg(&self) -> FieldElement {
        if self.field.degree() == 1 {
            return self.field.from_int(self.prime_residue().neg().value().clone());
        }
        self.field.poly_element(self.to_polynomial().neg())
    }

    /// Multiplicative inverse; the reciprocal of zero is zero.
    pub fn recip(&self) -> FieldElement {
        match self.field.reduction() {
            None => self.field.from_int(self.prime_residue().recip().value().clone()),
            Some(m) => self.field.poly_element(
                self.to_polynomial()
                    .inverse_mod(m)
                    .expect("the Conway polynomial is irreducible"),
            ),
        }
    }

    pub fn pow(&self, e: &BigUint) -> FieldElement {
        match self.field.reduction() {
            None => self.field.from_int(self.prime_residue().pow(e).value().clone()),
            Some(m) => self.field.poly_element(
                self.to_polynomial()
                    .pow_mod(e, m)
                    .expect("operands share one prime modulus"),
            ),
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.sort().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.to_polynomial(), self.field.sort())
    }
}
