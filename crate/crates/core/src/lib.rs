//! Finite, truncated computational algebraic topology.
//!
//! The crate works with compact presentations of truncated simplicial sets
//! (non-degenerate generators plus face tables), diagrams of such objects
//! indexed by a finite category, Kan fibrations between them, minimal model
//! extraction over EI-categories, and twisted cartesian products together
//! with their classification by maps into a bar construction.
//!
//! Every search routine is budgeted and distinguishes a definite refutation
//! from budget exhaustion, and every verdict is certified by data that can be
//! re-checked independently of the search that produced it.

pub mod budget;
pub mod bundle;
pub mod category;
pub mod diagram;
pub mod io;
pub mod lifting;
pub mod minimal;
pub mod simplicial;

pub use budget::{Budget, BudgetExhausted, SearchOutcome};
