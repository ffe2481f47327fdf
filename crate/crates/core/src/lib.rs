//! Finite skew braces: Cayley-table groups, brace axioms and derived
//! identities, explicit constructions, Yang–Baxter solutions, exhaustive
//! enumeration of small braces, and a registry of checkable claims.

pub mod brace;
pub mod catalog;
pub mod constructions;
pub mod enumeration;
pub mod exec;
pub mod group;
pub mod harness;
pub mod ybe;

pub use brace::{BraceError, BraceReport, SkewBrace};
pub use exec::Strategy;
pub use group::{ElementSet, FiniteGroup, GroupError, Permutation};
