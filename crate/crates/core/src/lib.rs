//! SMT-LIB finite field arithmetic: prime and Conway-polynomial extension
//! fields, a `QF_FFA` front end with literal normalization, an enumeration
//! solver, and a differential-testing harness for external solvers.

pub mod cli;
pub mod conway;
pub mod error;
pub mod ext;
pub mod field;
pub mod interop;
pub mod normalize;
pub mod poly;
pub mod smtlib;
pub mod solver;

pub use error::{Error, Location, Result};
