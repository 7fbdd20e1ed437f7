use std::cell::Cell;

use thiserror::Error;

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_NODE_LIMIT`].
pub const NODE_LIMIT_ENV: &str = "BOOLNET_NODE_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search node limit of {0} exceeded")]
pub struct SearchBudgetExceeded(pub u64);

/// Node limit from the environment, falling back to the default.
pub fn node_limit_from_env() -> u64 {
    std::env::var(NODE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_LIMIT)
}

/// Counts search nodes against a hard cap.
#[derive(Debug)]
pub struct NodeBudget {
    used: Cell<u64>,
    limit: u64,
}

impl NodeBudget {
    pub fn new(limit: u64) -> Self {
        NodeBudget {
            used: Cell::new(0),
            limit,
        }
    }

    pub fn unlimited() -> Self {
        NodeBudget::new(u64::MAX)
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn tick(&self) -> Result<(), SearchBudgetExceeded> {
        let n = self.used.get() + 1;
        self.used.set(n);
        if n > self.limit {
            Err(SearchBudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}
