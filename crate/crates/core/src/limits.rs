//! Cooperative resource limits polled by the long-running fixpoints.

use std::time::{Duration, Instant};

use thiserror::Error;

/// Raised when a [`Budget`] runs out.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("resource limit reached")]
pub struct Exhausted;

/// Which limit of a [`Budget`] ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Deadline,
    Steps,
    Space,
}

/// Wall-clock deadline, step cap and space cap. Work loops call
/// [`Budget::tick`] once per unit of work and [`Budget::charge`] for every
/// item they keep.
#[derive(Clone, Debug, Default)]
pub struct Budget {
    deadline: Option<Instant>,
    max_steps: Option<u64>,
    max_space: Option<u64>,
    steps: u64,
    space: u64,
    tripped: Option<Limit>,
}

const CLOCK_EVERY: u64 = 64;

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + timeout),
            ..Budget::default()
        }
    }

    pub fn deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn max_steps(mut self, max_steps: Option<u64>) -> Self {
        self.max_steps = max_steps;
        self
    }

    /// Caps the number of stored items (rules, P-automaton transitions).
    pub fn max_space(mut self, max_space: Option<u64>) -> Self {
        self.max_space = max_space;
        self
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn space(&self) -> u64 {
        self.space
    }

    /// The limit that caused the last [`Exhausted`].
    pub fn tripped(&self) -> Option<Limit> {
        self.tripped
    }

    #[inline]
    pub fn tick(&mut self) -> Result<(), Exhausted> {
        self.steps += 1;
        if let Some(max) = self.max_steps {
            if self.steps > max {
                return self.trip(Limit::Steps);
            }
        }
        if self.steps.is_multiple_of(CLOCK_EVERY) {
            self.check_clock()?;
        }
        Ok(())
    }

    #[inline]
    pub fn charge(&mut self, items: u64) -> Result<(), Exhausted> {
        self.space += items;
        match self.max_space {
            Some(max) if self.space > max => self.trip(Limit::Space),
            _ => Ok(()),
        }
    }

    pub fn check_clock(&mut self) -> Result<(), Exhausted> {
        match self.deadline {
            Some(d) if Instant::now() >= d => self.trip(Limit::Deadline),
            _ => Ok(()),
        }
    }

    fn trip(&mut self, limit: Limit) -> Result<(), Exhausted> {
        self.tripped = Some(limit);
        Err(Exhausted)
    }
}
