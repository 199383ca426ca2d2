//! Conway polynomials: search, verification, and a persistent cache.
//!
//! `C_{p,n}` is the least monic primitive polynomial of degree `n` over `F_p`,
//! in the order given by [`alt_sign_key`], whose root `α` satisfies
//! `C_{p,m}(α^r) = 0` with `r = (p^n - 1)/(p^m - 1)` for every proper divisor
//! `m` of `n`.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ext::{Field, FieldSort};
use crate::field::{is_probable_prime, PrimeModulus, DEFAULT_MR_ROUNDS};
use crate::poly::Polynomial;

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConwayConfig {
    /// Trial-division bound used when factoring `p^n - 1`.
    pub trial_bound: u64,
    /// Maximum number of candidates examined per search.
    pub search_budget: u64,
    /// Miller-Rabin rounds for primality checks.
    pub mr_rounds: u32,
}

impl Default for ConwayConfig {
    fn default() -> Self {
        Self {
            trial_bound: DEFAULT_TRIAL_BOUND,
            search_budget: DEFAULT_SEARCH_BUDGET,
            mr_rounds: DEFAULT_MR_ROUNDS,
        }
    }
}

/// The alternating-sign key `(c_d, ..., c_0)` of a monic polynomial.
///
/// Writing `f = Σ_i (-1)^i c_{d-i} α^{d-i}` with `c_j ∈ {0, ..., p-1}`,
/// candidates are ordered lexicographically by this tuple. This is the only
/// place the ordering is defined; the search enumerates keys directly.
pub fn alt_sign_key(f: &Polynomial) -> Result<Vec<BigUint>> {
    if !f.is_monic() {
        return Err(Error::InvalidInput(format!("{f} is not monic")));
    }
    let d = f.degree().expect("monic polynomials are nonzero");
    let p = f.modulus().value();
    Ok((0..=d)
        .rev()
        .map(|j| {
            let a = f.coeff(j);
            let signed = if (d - j).is_multiple_of(2) { a } else { -a };
            signed.mod_floor(p).to_biguint().expect("non-negative")
        })
        .collect())
}

/// Inverse of [`alt_sign_key`]: the monic polynomial with key `(1, c_{d-1}, ..., c_0)`.
pub fn from_alt_sign_key(key: &[BigUint], modulus: &PrimeModulus) -> Polynomial {
    let d = key.len().saturating_sub(1);
    let coeffs = (0..=d)
        .map(|j| {
            let c = BigInt::from(key[d - j].clone());
            if (d - j).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .collect();
    Polynomial::new(coeffs, modulus.clone())
}

/// Distinct prime divisors of `n`.
///
/// Trial division up to `trial_bound`; a leftover cofactor must then be a
/// probable prime, otherwise the factorization is reported as out of budget.
pub fn prime_divisors(n: &BigUint, trial_bound: u64, rounds: u32) -> Result<Vec<BigUint>> {
    let mut out = Vec::new();
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let mut rest = n.clone();
    let mut d: u64 = 2;
    while d <= trial_bound {
        if let Some(small) = rest.to_u64() {
            if d.saturating_mul(d) > small {
                break;
            }
        }
        if (&rest % d).is_zero() {
            out.push(BigUint::from(d));
            while (&rest % d).is_zero() {
                rest /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok(out);
    }
    let exhausted = d > trial_bound;
    if !exhausted || is_probable_prime(&rest, rounds)? {
        out.push(rest);
        return Ok(out);
    }
    Err(Error::Resource(format!(
        "could not factor {n}: cofactor {rest} survives trial division to {trial_bound}"
    )))
}

/// Whether `α` generates the multiplicative group of `F_p[α]/f`.
///
/// Checks `α^(q-1) = 1` and `α^((q-1)/ℓ) ≠ 1` for every prime `ℓ | q-1`, where
/// `q = p^deg f`. A reducible `f` never passes, since its residue ring has
/// fewer than `q - 1` units.
pub fn is_primitive(f: &Polynomial, trial_bound: u64) -> Result<bool> {
    let n = match f.degree() {
        Some(n) if n >= 1 && f.is_monic() => n,
        _ => return Err(Error::InvalidInput(format!("{f} is not monic of positive degree"))),
    };
    let q_minus_one: BigUint = Pow::pow(f.modulus().value_unsigned(), n) - 1u32;
    let factors = prime_divisors(&q_minus_one, trial_bound, DEFAULT_MR_ROUNDS)?;
    primitive_with(f, &q_minus_one, &factors)
}

fn primitive_with(f: &Polynomial, q_minus_one: &BigUint, factors: &[BigUint]) -> Result<bool> {
    if f.coeff(0).is_zero() {
        return Ok(false);
    }
    let x = Polynomial::monomial(1, f.modulus());
    if !x.pow_mod(q_minus_one, f)?.is_one() {
        return Ok(false);
    }
    for l in factors {
        if x.pow_mod(&(q_minus_one / l), f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|m| n.is_multiple_of(*m)).collect()
}

/// Memoizing store of Conway polynomials and the fields built on them.
///
/// Reads are concurrent. Searches run without holding locks; results are
/// inserted under the write lock and the first insertion wins. File writes
/// are serialized.
pub struct ConwayCache {
    config: ConwayConfig,
    path: Option<PathBuf>,
    entries: RwLock<BTreeMap<(BigUint, u32), Polynomial>>,
    fields: RwLock<HashMap<FieldSort, Field>>,
    writer: Mutex<()>,
}

impl Default for ConwayCache {
    fn default() -> Self {
        Self::new(ConwayConfig::default())
    }
}

impl ConwayCache {
    /// An in-memory cache.
    pub fn new(config: ConwayConfig) -> Self {
        Self {
            config,
            path: None,
            entries: RwLock::new(BTreeMap::new()),
            fields: RwLock::new(HashMap::new()),
            writer: Mutex::new(()),
        }
    }

    /// Opens a file-backed cache, loading and verifying the file if it exists.
    ///
    /// Any malformed or unverifiable entry fails the whole load.
    pub fn open(path: impl AsRef<Path>, config: ConwayConfig) -> Result<Self> {
        let mut cache = Self::new(config);
        let path = path.as_ref().to_path_buf();
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            cache.load_text(&text)?;
        }
        cache.path = Some(path);
        Ok(cache)
    }

    pub fn config(&self) -> &ConwayConfig {
        &self.config
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    fn load_text(&self, text: &str) -> Result<()> {
        let mut parsed = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let corrupt = |why: &str| {
                Error::InvalidInput(format!("conway cache line {}: {why}", lineno + 1))
            };
            let mut fields = line.split_whitespace();
            let p: BigUint = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| corrupt("bad prime"))?;
            let n: u32 = fields
                .next()
                .and_then(|s| s.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| corrupt("bad degree"))?;
            let coeffs: Vec<BigInt> = fields
                .map(|s| s.parse::<BigInt>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| corrupt("bad coefficient"))?;
            if coeffs.len() != n as usize + 1 {
                return Err(corrupt("wrong number of coefficients"));
            }
            let modulus = PrimeModulus::with_rounds(p.clone(), self.config.mr_rounds)
                .map_err(|_| corrupt("modulus is not prime"))?;
            if !coeffs.iter().all(|c| modulus.is_normalized(c)) {
                return Err(corrupt("coefficient outside the signed range"));
            }
            parsed.push((n, Polynomial::new(coeffs, modulus), lineno + 1));
        }
        // divisors first, so verification finds them in the cache
        parsed.sort_by_key(|(n, _, _)| *n);
        for (n, poly, lineno) in parsed {
            if !self.verify(&poly, n) {
                return Err(Error::InvalidInput(format!(
                    "conway cache line {lineno}: {poly} is not a valid C_{{{},{n}}}",
                    poly.modulus()
                )));
            }
            self.insert(poly.modulus().value_unsigned().clone(), n, poly);
        }
        Ok(())
    }

    fn insert(&self, p: BigUint, n: u32, poly: Polynomial) -> Polynomial {
        let mut entries = self.entries.write().expect("cache lock poisoned");
        entries.entry((p, n)).or_insert(poly).clone()
    }

    pub fn get(&self, p: &BigUint, n: u32) -> Option<Polynomial> {
        let entries = self.entries.read().expect("cache lock poisoned");
        entries.get(&(p.clone(), n)).cloned()
    }

    /// All cached entries, ordered by `(p, n)`.
    pub fn entries(&self) -> Vec<Polynomial> {
        let entries = self.entries.read().expect("cache lock poisoned");
        entries.values().cloned().collect()
    }

    /// `C_{p,n}`, computing and memoizing it (and every `C_{p,m}` with `m | n`).
    pub fn conway_polynomial(&self, modulus: &PrimeModulus, n: u32) -> Result<Polynomial> {
        if n == 0 {
            return Err(Error::InvalidInput("Conway polynomials need degree >= 1".into()));
        }
        let p = modulus.value_unsigned();
        if let Some(hit) = self.get(p, n) {
            return Ok(hit);
        }
        for m in divisors(n).into_iter().filter(|&m| m < n) {
            self.conway_polynomial(modulus, m)?;
        }
        let found = self.search(modulus, n)?;
        Ok(self.insert(p.clone(), n, found))
    }

    fn search(&self, modulus: &PrimeModulus, n: u32) -> Result<Polynomial> {
        let p = modulus.value_unsigned();
        let q_minus_one: BigUint = Pow::pow(p, n) - 1u32;
        let factors = prime_divisors(&q_minus_one, self.config.trial_bound, self.config.mr_rounds)?;
        let sub: Vec<(u32, Polynomial)> = divisors(n)
            .into_iter()
            .filter(|&m| m < n)
            .map(|m| Ok((m, self.conway_polynomial(modulus, m)?)))
            .collect::<Result<_>>()?;

        // key = (1, c_{n-1}, ..., c_0), enumerated in lexicographic order
        let mut key = vec![BigUint::zero(); n as usize + 1];
        key[0] = BigUint::one();
        let mut examined: u64 = 0;
        loop {
            examined += 1;
            if examined > self.config.search_budget {
                return Err(Error::Resource(format!(
                    "Conway search for C_{{{p},{n}}} exceeded {} candidates",
                    self.config.search_budget
                )));
            }
            let f = from_alt_sign_key(&key, modulus);
            if primitive_with(&f, &q_minus_one, &factors)?
                && sub.iter().all(|(m, c)| compatible_with(&f, *m, c).unwrap_or(false))
            {
                return Ok(f);
            }
            if !increment(&mut key[1..], p) {
                return Err(Error::InvalidInput(format!(
                    "no Conway polynomial C_{{{p},{n}}} exists"
                )));
            }
        }
    }

    /// Whether the root class of `f` maps onto a root of `C_{p,m}` under
    /// `x ↦ x^r` with `r = (p^n - 1)/(p^m - 1)`, `n = deg f`.
    pub fn is_compatible(&self, f: &Polynomial, m: u32) -> Result<bool> {
        let n = f.degree().unwrap_or(0) as u32;
        if m == 0 || n == 0 || !n.is_multiple_of(m) {
            return Err(Error::InvalidInput(format!(
                "{m} does not divide the degree {n} of {f}"
            )));
        }
        let target = self.conway_polynomial(f.modulus(), m)?;
        compatible_with(f, m, &target)
    }

    /// Re-checks a claimed `C_{p,n}`: degree, monicity, irreducibility,
    /// primitivity, and compatibility with every `C_{p,m}`, `m | n`, `m < n`.
    /// Minimality is not checked. Any internal failure counts as `false`.
    pub fn verify(&self, f: &Polynomial, n: u32) -> bool {
        let ok = || -> Result<bool> {
            if f.degree() != Some(n as usize) || !f.is_monic() || !f.is_irreducible()? {
                return Ok(false);
            }
            let q_minus_one: BigUint = Pow::pow(f.modulus().value_unsigned(), n) - 1u32;
            let factors =
                prime_divisors(&q_minus_one, self.config.trial_bound, self.config.mr_rounds)?;
            if !primitive_with(f, &q_minus_one, &factors)? {
                return Ok(false);
            }
            for m in divisors(n).into_iter().filter(|&m| m < n) {
                if !self.is_compatible(f, m)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        ok().unwrap_or(false)
    }

    /// The arithmetic context for `sort`, checking primality of `p` and, for
    /// extension sorts, obtaining the Conway polynomial.
    pub fn field(&self, sort: &FieldSort) -> Result<Field> {
        if let Some(f) = self.fields.read().expect("cache lock poisoned").get(sort) {
            return Ok(f.clone());
        }
        if sort.n == 0 {
            return Err(Error::InvalidInput("field degree must be at least 1".into()));
        }
        let modulus = PrimeModulus::with_rounds(sort.p.clone(), self.config.mr_rounds)?;
        let field = if sort.n == 1 {
            Field::prime(modulus)
        } else {
            Field::with_reduction(self.conway_polynomial(&modulus, sort.n)?)?
        };
        let mut fields = self.fields.write().expect("cache lock poisoned");
        Ok(fields.entry(sort.clone()).or_insert(field).clone())
    }

    /// Renders the cache in its text format.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# p n c0 c1 ... cn\n");
        for poly in self.entries() {
            out.push_str(&format_entry(&poly));
            out.push('\n');
        }
        out
    }

    /// Writes the cache to its backing file (temp file, then rename).
    /// A no-op for in-memory caches.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        let _guard = self.writer.lock().expect("cache writer poisoned");
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut file = fs::File::create(&tmp)?;
            file.write_all(self.to_text().as_bytes())?;
            file.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// One cache line: `p n c0 c1 ... cn`.
pub fn format_entry(poly: &Polynomial) -> String {
    let n = poly.degree().unwrap_or(0);
    let mut parts = vec![poly.modulus().to_string(), n.to_string()];
    parts.extend((0..=n).map(|i| poly.coeff(i).to_string()));
    parts.join(" ")
}

fn compatible_with(f: &Polynomial, m: u32, target: &Polynomial) -> Result<bool> {
    let n = f.degree().unwrap_or(0) as u32;
    let p = f.modulus().value_unsigned();
    let r: BigUint = (Pow::pow(p, n) - 1u32) / (Pow::pow(p, m) - 1u32);
    let image = Polynomial::monomial(1, f.modulus()).pow_mod(&r, f)?;
    Ok(target.eval_mod(&image, f)?.is_zero())
}

/// Lexicographic successor over digits in `0..p`; false on wrap-around.
fn increment(digits: &mut [BigUint], p: &BigUint) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1u32;
        if &*d < p {
            return true;
        }
        d.set_zero();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64) -> PrimeModulus {
        PrimeModulus::from_u64(p).unwrap()
    }

    fn key(f: &Polynomial) -> Vec<u64> {
        alt_sign_key(f).unwrap().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn alt_sign_key_examples() {
        let f3 = m(3);
        assert_eq!(key(&Polynomial::from_i64(&[-1, -1, 1], &f3)), vec![1, 1, 2]);
        assert_eq!(key(&Polynomial::from_i64(&[0, 1], &m(7))), vec![1, 0]);
        assert_eq!(key(&Polynomial::one(&f3)), vec![1]);
        assert!(alt_sign_key(&Polynomial::from_i64(&[1, -1], &f3)).is_err());
        let f = Polynomial::from_i64(&[2, 0, -1, 1], &m(5));
        assert_eq!(from_alt_sign_key(&alt_sign_key(&f).unwrap(), &m(5)), f);
    }

    #[test]
    fn primitivity_examples() {
        let f3 = m(3);
        assert!(is_primitive(&Polynomial::from_i64(&[-1, -1, 1], &f3), 1000).unwrap());
        assert!(!is_primitive(&Polynomial::from_i64(&[1, 0, 1], &f3), 1000).unwrap());
        assert!(!is_primitive(&Polynomial::from_i64(&[-1, 1], &m(5)), 1000).unwrap());
        assert!(is_primitive(&Polynomial::from_i64(&[-2, 1], &m(5)), 1000).unwrap());
    }

    #[test]
    fn conway_examples() {
        let cache = ConwayCache::default();
        let c32 = cache.conway_polynomial(&m(3), 2).unwrap();
        assert_eq!(c32, Polynomial::from_i64(&[-1, -1, 1], &m(3)));
        assert_eq!(
            cache.conway_polynomial(&m(2), 1).unwrap(),
            Polynomial::from_i64(&[1, 1], &m(2))
        );
        assert_eq!(
            cache.conway_polynomial(&m(5), 1).unwrap(),
            Polynomial::from_i64(&[-2, 1], &m(5))
        );
        // computing C_{3,2} populated C_{3,1}
        assert!(cache.get(&BigUint::from(3u32), 1).is_some());
    }

    #[test]
    fn compatibility_examples() {
        let cache = ConwayCache::default();
        let c32 = Polynomial::from_i64(&[-1, -1, 1], &m(3));
        assert!(cache.is_compatible(&c32, 1).unwrap());
        assert!(cache.is_compatible(&c32, 2).unwrap());
        assert!(cache.is_compatible(&c32, 3).is_err());
        // over F_5, C_{5,1} = a - 2; a primitive quadratic whose root has norm
        // -2 (the other primitive root) cannot be compatible with it
        let f5 = m(5);
        let mut found = 0;
        for a1 in -2..=2 {
            let f = Polynomial::from_i64(&[-2, a1, 1], &f5);
            if is_primitive(&f, 1000).unwrap() {
                found += 1;
                assert!(!cache.is_compatible(&f, 1).unwrap());
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn verify_examples() {
        let cache = ConwayCache::default();
        let f3 = m(3);
        assert!(cache.verify(&Polynomial::from_i64(&[-1, -1, 1], &f3), 2));
        assert!(!cache.verify(&Polynomial::from_i64(&[0, 0, 1], &f3), 2));
        assert!(!cache.verify(&Polynomial::from_i64(&[1, 0, 1], &f3), 2));
        assert!(!cache.verify(&Polynomial::from_i64(&[-1, -1, 1], &f3), 3));
    }

    #[test]
    fn factorization() {
        let ps = |n: u64, bound| {
            prime_divisors(&BigUint::from(n), bound, 40)
                .map(|v| v.iter().map(|x| x.to_u64().unwrap()).collect::<Vec<_>>())
        };
        assert_eq!(ps(8, 100).unwrap(), vec![2]);
        assert_eq!(ps(3 * 3 * 5 * 101, 100).unwrap(), vec![3, 5, 101]);
        assert_eq!(ps(1_000_003 * 2, 10).unwrap(), vec![2, 1_000_003]);
        assert!(matches!(ps(1_000_003 * 1_000_033, 10), Err(Error::Resource(_))));
    }

    #[test]
    fn budget_exhaustion_is_a_resource_error() {
        let cache = ConwayCache::new(ConwayConfig { search_budget: 1, ..Default::default() });
        let err = cache.conway_polynomial(&m(5), 1).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn cache_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("conway.txt");
        let cache = ConwayCache::open(&path, ConwayConfig::default()).unwrap();
        cache.conway_polynomial(&m(2), 4).unwrap();
        cache.save().unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("2 4 1 1 0 0 1"));
        let reopened = ConwayCache::open(&path, ConwayConfig::default()).unwrap();
        assert_eq!(reopened.entries(), cache.entries());
    }

    #[test]
    fn corrupt_cache_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("conway.txt");
        fs::write(&path, "3 2 1 0 1\n").unwrap();
        assert!(ConwayCache::open(&path, ConwayConfig::default()).is_err());
        fs::write(&path, "3 2 2 -1 1\n").unwrap();
        assert!(ConwayCache::open(&path, ConwayConfig::default()).is_err());
        fs::write(&path, "# comment\n3 2 -1 -1 1\n").unwrap();
        assert!(ConwayCache::open(&path, ConwayConfig::default()).is_ok());
    }
}
