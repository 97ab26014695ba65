//! Finite ai-semirings: tables, terms, satisfaction, enumeration up to
//! isomorphism, finitely generated varieties and equational proofs.

pub mod algebra;
pub mod catalog;
pub mod derive;
pub mod enumerate;
pub mod error;
pub mod satisfaction;
pub mod term;
pub mod variety;

pub use algebra::{are_isomorphic, canonical_form, CanonicalForm, FiniteAlgebra};
pub use error::{Error, Result};
pub use term::{Identity, Substitution, Term, Var, Word};
