use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Default number of work units granted to enumerating operations.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("work budget of {limit} units exceeded")]
pub struct BudgetExceeded {
    pub limit: u64,
}

/// A shared counter of work units.
///
/// Every enumerating operation charges the budget before doing work and
/// fails with [`BudgetExceeded`] instead of truncating its search.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used())
    }

    pub fn spend(&self, units: u64) -> Result<(), BudgetExceeded> {
        let before = self.used.fetch_add(units, Ordering::Relaxed);
        if before.saturating_add(units) > self.limit {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Fails without charging when `units` would not fit in what is left.
    pub fn check(&self, units: u64) -> Result<(), BudgetExceeded> {
        if units > self.remaining() {
            Err(BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spend_fails_past_limit() {
        let b = Budget::new(10);
        assert!(b.spend(4).is_ok());
        assert!(b.spend(6).is_ok());
        assert_eq!(b.spend(1), Err(BudgetExceeded { limit: 10 }));
    }

    #[test]
    fn check_does_not_charge() {
        let b = Budget::new(3);
        assert!(b.check(3).is_ok());
        assert!(b.check(4).is_err());
        assert_eq!(b.used(), 0);
    }
}
