//! Algebraic model counting for 2-SAT and 3-SAT.
//!
//! A CNF formula is relaxed so that every literal occurrence is its own
//! variable, encoded as a product over `{-1, 1}`-valued variables, and its
//! model count is read off the constant term of that product. The counter
//! obtains the constant term by summing the formula over a lattice of roots
//! of unity; exact oracles (enumeration and symbolic expansion) check it.

pub mod algebra;
pub mod cnf;
pub mod counter;
pub mod oracle;
pub mod relaxation;
pub mod report;
pub mod spectrum;
