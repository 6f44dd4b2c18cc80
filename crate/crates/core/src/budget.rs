use std::time::{Duration, Instant};

/// Wall-clock limit shared by the exponential searches.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { deadline: None }
    }

    pub fn with_timeout(limit: Duration) -> Self {
        Budget { deadline: Instant::now().checked_add(limit) }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

/// Amortizes clock reads: `tick` consults the clock every 1024 calls.
pub(crate) struct Ticker {
    budget: Budget,
    count: u32,
    expired: bool,
}

impl Ticker {
    pub(crate) fn new(budget: Budget) -> Self {
        Ticker { budget, count: 0, expired: false }
    }

    pub(crate) fn tick(&mut self) -> bool {
        if !self.expired {
            self.count = self.count.wrapping_add(1);
            if self.count.is_multiple_of(1024) && self.budget.expired() {
                self.expired = true;
            }
        }
        self.expired
    }

    pub(crate) fn is_expired(&self) -> bool {
        self.expired
    }
}
