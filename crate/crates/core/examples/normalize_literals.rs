// Literal normalization and model printing.

use ffa::conway::ConwayCache;
use ffa::ext::FieldSort;
use ffa::normalize::{print_literal, print_model, Model};
use ffa::smtlib::parse_literal;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cache = ConwayCache::default();
    let f5 = cache.field(&FieldSort::prime(5u32))?;
    let f9 = cache.field(&FieldSort::new(3u32, 2))?;
    let f729 = cache.field(&FieldSort::new(3u32, 6))?;

    for (lit, field) in [("ff4", &f5), ("ff10", &f5), ("ff-7", &f5), ("ff2.1", &f9), ("ff1.0", &f9)] {
        let v = parse_literal(lit, field)?;
        println!("{lit:>8} over {} => {}", field.sort(), print_literal(&v));
    }

    // trailing zero coefficients do not matter
    assert_eq!(parse_literal("ff1.0.-1.0.0", &f729)?, parse_literal("ff1.0.-1", &f729)?);
    // more coefficients than the degree is an error
    assert!(parse_literal("ff1.2", &f5).is_err());

    let mut model = Model::new();
    model.insert("x", parse_literal("ff4", &f5)?);
    model.insert("y", parse_literal("ff5.4", &f9)?);
    println!("{}", print_model(&model));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
