// Computing, checking, and caching Conway polynomials.

use ffa::conway::{alt_sign_key, format_entry, ConwayCache, ConwayConfig};
use ffa::field::PrimeModulus;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("conway.cache");
    let cache = ConwayCache::open(&path, ConwayConfig::default())?;

    for (p, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 6)] {
        let poly = cache.conway_polynomial(&PrimeModulus::from_u64(p)?, n)?;
        println!("C_{{{p},{n}}} = {poly:<24} cache line: {}", format_entry(&poly));
    }

    let c32 = cache.conway_polynomial(&PrimeModulus::from_u64(3)?, 2)?;
    assert_eq!(format_entry(&c32), "3 2 -1 -1 1");
    println!("ordering key of C_{{3,2}}: {:?}", alt_sign_key(&c32)?);

    // C_{2,4} must be compatible with C_{2,2} and C_{2,1}
    let c24 = cache.conway_polynomial(&PrimeModulus::from_u64(2)?, 4)?;
    assert!(cache.is_compatible(&c24, 2)? && cache.is_compatible(&c24, 1)?);

    cache.save()?;
    let reopened = ConwayCache::open(&path, ConwayConfig::default())?;
    assert_eq!(reopened.entries().len(), cache.entries().len());
    println!("{} entries saved and re-verified", reopened.entries().len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
