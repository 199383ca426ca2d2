//! Independent oracles shared by the test targets.

#![allow(dead_code)]

use std::collections::HashMap;

pub type Poly = Vec<u64>; // lowest degree first

fn trim(mut a: Poly) -> Poly {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn mul_mod(a: &Poly, b: &Poly, f: &Poly, p: u64) -> Poly {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    reduce(prod, f, p)
}

// f monic
fn reduce(mut a: Poly, f: &Poly, p: u64) -> Poly {
    let d = f.len() - 1;
    while a.len() > d {
        let lead = a.pop().unwrap();
        let shift = a.len() - d;
        for (i, c) in f[..d].iter().enumerate() {
            a[shift + i] = (a[shift + i] + (p - c) * lead % p) % p;
        }
    }
    trim(a)
}

fn is_one(a: &Poly) -> bool {
    trim(a.clone()) == vec![1]
}

fn root_order(f: &Poly, p: u64) -> u64 {
    let x = reduce(vec![0, 1], f, p);
    let mut acc = x.clone();
    for k in 1..=p.pow(f.len() as u32 - 1) {
        if is_one(&acc) {
            return k;
        }
        if trim(acc.clone()) == vec![0] {
            return 0;
        }
        acc = mul_mod(&acc, &x, f, p);
    }
    0
}

fn pow_mod(a: &Poly, mut e: u64, f: &Poly, p: u64) -> Poly {
    let mut base = a.clone();
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, f, p);
        }
        base = mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

// g(x^r) mod f, by Horner
fn eval_at_power(g: &Poly, r: u64, f: &Poly, p: u64) -> Poly {
    let point = pow_mod(&vec![0, 1], r, f, p);
    let mut acc = vec![0];
    for c in g.iter().rev() {
        acc = mul_mod(&acc, &point, f, p);
        acc[0] = (acc[0] + c) % p;
        acc = trim(acc);
    }
    acc
}

pub fn key(f: &Poly, p: u64) -> Vec<u64> {
    let d = f.len() - 1;
    (0..=d)
        .rev()
        .map(|j| if (d - j).is_multiple_of(2) { f[j] } else { (p - f[j]) % p })
        .collect()
}

fn oracle(p: u64, n: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    if let Some(f) = memo.get(&n) {
        return f.clone();
    }
    let q = p.pow(n);
    let divisors: Vec<u32> = (1..n).filter(|m| n.is_multiple_of(*m)).collect();
    let subs: Vec<(u32, Poly)> = divisors.iter().map(|&m| (m, oracle(p, m, memo))).collect();
    let mut best: Option<Poly> = None;
    for code in 0..p.pow(n) {
        let mut f: Poly = (0..n).map(|i| code / p.pow(i) % p).collect();
        f.push(1);
        if root_order(&f, p) != q - 1 {
            continue;
        }
        let compatible = subs.iter().all(|(m, g)| {
            let r = (q - 1) / (p.pow(*m) - 1);
            trim(eval_at_power(g, r, &f, p)) == vec![0]
        });
        if compatible && best.as_ref().is_none_or(|b| key(&f, p) < key(b, p)) {
            best = Some(f);
        }
    }
    let f = best.expect("a Conway polynomial exists");
    memo.insert(n, f.clone());
    f
}

/// The Conway polynomial C_{p,n} by exhaustive enumeration of the
/// definition: monic, primitive (the root has order p^n - 1), compatible with
/// every C_{p,m} for m | n, and least in the alternating-sign order.
pub fn conway(p: u64, n: u32) -> Poly {
    oracle(p, n, &mut HashMap::new())
}

/// Primality table below `n` by the sieve of Eratosthenes.
pub fn sieve(n: usize) -> Vec<bool> {
    let mut is = vec![true; n];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i < n {
        if is[i] {
            for j in (i * i..n).step_by(i) {
                is[j] = false;
            }
        }
        i += 1;
    }
    is
}
