//! Simplicial groups, actions, twisting functions, twisted cartesian
//! products, fibre-bundle atlases, the classifying complex, and desk-scale
//! classification of bundles over a constant base.
//!
//! Everything here is finite and truncated: groups are multiplication
//! tables, actions are permutation tables, and every classification claim
//! is settled by exhaustive enumeration under an explicit budget.

mod atlas;
mod classify;
mod group;
mod tcp;
mod twisting;
mod wbar;

pub use atlas::{
    normalize_atlas, regularize, tautological_atlas, transformation_elements, Atlas,
    TransformationElements,
};
pub use classify::{classify, ClassifyReport};
pub use group::{two_point_swap, GroupAction, GroupTable, SimplicialGroup};
pub use tcp::{associated, build_tcp, left_translation, principal_tcp, Tcp};
pub use twisting::{
    enumerate_twistings, twisting_classes, twisting_equivalent, TwistingEquivalence,
    TwistingFunction,
};
pub use wbar::{classifying_map, wbar, WbarComplex};

use crate::budget::BudgetExhausted;
use crate::simplicial::LevelwiseError;

/// Errors raised while building or validating bundle data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("group table is not a group: {0}")]
    Group(String),
    #[error("operator tables are malformed at dim {dim}: {what}")]
    Operator { dim: usize, what: String },
    #[error(transparent)]
    Levelwise(#[from] LevelwiseError),
    #[error("action table violates {what}")]
    Action { what: String },
    #[error("dimension data truncated at {have} but {need} is required")]
    Truncation { need: usize, have: usize },
    #[error("the two sides use different groups or bases")]
    Mismatch,
    #[error("twisting identity {family} fails at {simplex}")]
    Twisting { family: &'static str, simplex: String },
    #[error("map fails to be simplicial: {0}")]
    NotSimplicial(String),
    #[error("atlas is invalid: {0}")]
    Atlas(String),
    #[error("no unique chart preimage at object {object} dim {dim}: {what}")]
    ChartSolve { object: usize, dim: usize, what: String },
    #[error("transformation element at {simplex}, face {face} lies outside the designated group")]
    NotGAtlas { simplex: String, face: usize },
    #[error("no regularizing element exists over {simplex}")]
    NotRegularizable { simplex: String },
    #[error("quotient construction disagrees with the twisted product: {0}")]
    Quotient(String),
    #[error("input too large for exhaustive classification: {0}")]
    TooLarge(String),
    #[error("search budget exhausted")]
    Budget,
}

impl From<BudgetExhausted> for BundleError {
    fn from(_: BudgetExhausted) -> Self {
        BundleError::Budget
    }
}
