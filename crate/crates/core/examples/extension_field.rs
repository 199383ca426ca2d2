// Arithmetic in F_9 = F_3[a]/(a^2 - a - 1).

use ffa::conway::ConwayCache;
use ffa::ext::FieldSort;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cache = ConwayCache::default();
    let f9 = cache.field(&FieldSort::new(3u32, 2))?;
    println!("F_9 is reduced modulo {}", f9.reduction().expect("extension field"));

    // coefficients lowest degree first: [1, 1] is a + 1
    let a = f9.element_i64(&[0, 1])?;
    let a1 = f9.element_i64(&[1, 1])?;
    let prod = a1.mul(&a)?;
    println!("(a + 1) * a = {:?}", prod.coeffs());
    assert_eq!(prod, f9.element_i64(&[1, -1])?);

    // a generates the multiplicative group
    let mut seen = Vec::new();
    let mut x = f9.one();
    for _ in 0..8 {
        seen.push(x.clone());
        x = x.mul(&a)?;
    }
    assert!(x.is_one());
    assert_eq!(seen.iter().collect::<std::collections::HashSet<_>>().len(), 8);
    println!("a has order 8");

    for e in f9.elements() {
        assert!(e.is_zero() || e.mul(&e.recip())?.is_one());
    }
    assert!(f9.zero().recip().is_zero());

    let f125 = cache.field(&FieldSort::new(5u32, 3))?;
    let y = f125.element_i64(&[2, -1, 1])?;
    println!("in F_125, y^124 = 1: {}", y.pow(&124u32.into()).is_one());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
