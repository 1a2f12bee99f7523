//! Resource limits for the exponential constructions.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on the number of states an automaton may have before it is
/// complemented.
pub const DEFAULT_COMPLEMENT_CAP: usize = 12;

/// Default bound on the number of states a construction may explore.
pub const DEFAULT_STATE_BUDGET: usize = 200_000;

/// Hard ceiling for the cap: complement states track subsets as 64-bit masks.
pub const MAX_COMPLEMENT_CAP: usize = 64;

/// Cooperative cancellation flag. Long-running constructions poll it and
/// bail out with [`Error::Cancelled`]; nothing is preempted.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> CancelToken {
        CancelToken::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    pub fn reset(&self) {
        self.0.store(false, Ordering::SeqCst);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone)]
pub struct Limits {
    pub complement_cap: usize,
    /// Explored states (or inclusion summaries) allowed per construction.
    pub state_budget: usize,
    pub cancel: Option<CancelToken>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            complement_cap: DEFAULT_COMPLEMENT_CAP,
            state_budget: DEFAULT_STATE_BUDGET,
            cancel: None,
        }
    }
}

impl Limits {
    pub fn with_cap(cap: usize) -> Limits {
        Limits {
            complement_cap: cap,
            ..Limits::default()
        }
    }

    pub fn with_cancel(mut self, token: CancelToken) -> Limits {
        self.cancel = Some(token);
        self
    }

    pub fn with_state_budget(mut self, budget: usize) -> Limits {
        self.state_budget = budget;
        self
    }

    pub fn check_budget(&self, used: usize) -> Result<()> {
        if used > self.state_budget {
            Err(Error::StateBudgetExceeded {
                budget: self.state_budget,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_cancelled(&self) -> Result<()> {
        match &self.cancel {
            Some(t) if t.is_cancelled() => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }
}
