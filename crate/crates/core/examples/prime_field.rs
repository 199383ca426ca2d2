// Signed-residue arithmetic in prime fields.

use ffa::field::{is_probable_prime, PrimeModulus};
use num_bigint::BigUint;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f5 = PrimeModulus::from_u64(5)?;
    let (one, two) = (f5.residue(1), f5.residue(2));

    // residues live in {-2, ..., 2}
    let sum = two.add(&one)?;
    let prod = two.mul(&f5.residue(-1))?;
    let mixed = sum.mul(&two)?;
    println!("2 + 1 = {sum}, 2 * -1 = {prod}, (2 + 1) * 2 = {mixed}");
    assert_eq!(sum, f5.residue(-2));
    assert_eq!(prod, f5.residue(-2));
    assert_eq!(mixed, f5.residue(1));

    // division by zero is total
    println!("recip(0) = {}, 2 / 0 = {}", f5.zero().recip(), two.div(&f5.zero())?);
    println!("recip(2) = {}", two.recip());

    let big: BigUint = "115792089237316195423570985008687907853269984665640564039457584007908834671663"
        .parse()?;
    let p = PrimeModulus::new(big)?;
    let x = p.residue(-3);
    assert!(x.mul(&x.recip())?.value() == p.one().value());
    println!("secp256k1 field: -3 * (-3)^-1 = 1");

    for n in [561u32, 7919] {
        println!("{n}: probable prime = {}", is_probable_prime(&BigUint::from(n), 40)?);
    }
    assert!(PrimeModulus::from_u64(4).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
