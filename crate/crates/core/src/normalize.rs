//! Canonical literal normalization and model printing.
//!
//! Output always uses the indexed literal form `(_ ffc0.c1.… p [n])` with
//! signed coefficients and no trailing zeros.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ext::{Field, FieldElement, FieldSort};
use crate::smtlib::lexer::quote_symbol;

/// Maps raw literal coefficients (lowest degree first) to the normalized element.
///
/// Fails only when more coefficients are given than the field degree allows.
pub fn normalize_literal(coeffs: &[BigInt], field: &Field) -> Result<FieldElement> {
    let max = field.degree();
    if coeffs.len() > max {
        return Err(Error::SortMismatch(format!(
            "literal has {} coefficients but {} admits at most {max}",
            coeffs.len(),
            field.sort()
        )));
    }
    field.element(coeffs)
}

/// The `ff…` symbol of a normalized element; zero is `ff0`.
pub fn literal_symbol(e: &FieldElement) -> String {
    if e.is_zero() {
        return "ff0".into();
    }
    let parts: Vec<String> = e.coeffs().iter().map(BigInt::to_string).collect();
    format!("ff{}", parts.join("."))
}

/// Indexed form of a normalized element, e.g. `(_ ff-1.1 3 2)`.
pub fn print_literal(e: &FieldElement) -> String {
    let sort = e.sort();
    index_literal(&literal_symbol(e), sort)
}

fn index_literal(symbol: &str, sort: &FieldSort) -> String {
    if sort.n == 1 {
        format!("(_ {symbol} {})", sort.p)
    } else {
        format!("(_ {symbol} {} {})", sort.p, sort.n)
    }
}

/// Values of the declared constants, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    entries: Vec<(String, FieldElement)>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces a binding, keeping the original position on replace.
    pub fn insert(&mut self, name: impl Into<String>, value: FieldElement) {
        let name = name.into();
        match self.entries.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.entries.push((name, value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<&FieldElement> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FieldElement)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), v))
    }
}

/// `((define-fun x () (_ FiniteField 5) (_ ff0 5)) …)`.
pub fn print_model(m: &Model) -> String {
    let mut out = String::from("(");
    for (i, (name, value)) in m.iter().enumerate() {
        if i > 0 {
            out.push_str("\n ");
        }
        write!(
            out,
            "(define-fun {} () {} {})",
            quote_symbol(name),
            value.sort(),
            print_literal(value)
        )
        .expect("writing to a String");
    }
    out.push(')');
    out
}
