//! Exact computational tools for knot concordance: free-group Fox calculus,
//! recursive commutator tuple families, Seifert-matrix invariants,
//! Levine–Tristram signature profiles with the abelian rho-invariant, and a
//! planner for infection-knot families.

pub mod certified;
pub mod error;
pub mod family;
pub mod fox;
pub mod knot;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod rho;
pub mod tuples;
pub mod words;

pub use error::{Error, Result};
