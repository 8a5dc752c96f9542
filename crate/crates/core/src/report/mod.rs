//! Published reference values, table assembly and verification suites.

pub mod reference;
pub mod tables;
pub mod verify;
