//! Step budgets for backtracking searches.
//!
//! Every potentially expensive search in this crate charges one unit per
//! explored node against a [`Budget`]. Running out of budget is a distinct
//! outcome from a definite refutation, and callers are expected to keep the
//! two apart when reporting verdicts.

use serde::{Deserialize, Serialize};

/// Error raised when a search exceeds its step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search budget exhausted")]
pub struct BudgetExhausted;

/// A mutable step counter with an optional cap.
#[derive(Debug, Clone)]
pub struct Budget {
    used: u64,
    cap: Option<u64>,
}

impl Budget {
    /// Budget capped at `cap` steps.
    pub fn limited(cap: u64) -> Self {
        Budget { used: 0, cap: Some(cap) }
    }

    /// Budget that never exhausts.
    pub fn unlimited() -> Self {
        Budget { used: 0, cap: None }
    }

    /// Charge one step. Fails once the cap is passed.
    pub fn tick(&mut self) -> Result<(), BudgetExhausted> {
        self.used += 1;
        match self.cap {
            Some(cap) if self.used > cap => Err(BudgetExhausted),
            _ => Ok(()),
        }
    }

    /// Steps consumed so far.
    pub fn used(&self) -> u64 {
        self.used
    }

    /// Remaining steps, if capped.
    pub fn remaining(&self) -> Option<u64> {
        self.cap.map(|c| c.saturating_sub(self.used))
    }
}

/// Three-valued result of a budgeted search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchOutcome<T> {
    /// A witness was found.
    Found(T),
    /// The full search space was exhausted without a witness.
    Refuted,
    /// The budget ran out before the search space did.
    Exhausted,
}

impl<T> SearchOutcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SearchOutcome<U> {
        match self {
            SearchOutcome::Found(t) => SearchOutcome::Found(f(t)),
            SearchOutcome::Refuted => SearchOutcome::Refuted,
            SearchOutcome::Exhausted => SearchOutcome::Exhausted,
        }
    }
}
