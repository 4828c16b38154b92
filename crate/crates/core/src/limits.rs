//! Caps on the exponential (2^N) operations.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Default cap on the universe size for table-backed and 2^N operations.
pub const DEFAULT_MAX_AGENTS: usize = 20;

/// No override may push the 2^N cap above this.
pub const HARD_MAX_AGENTS: usize = 30;

/// The subset-sum Shapley oracle never runs on more agents than this.
pub const SHAPLEY_ORACLE_MAX_AGENTS: usize = 10;

/// Dual balanced-vector enumeration never runs on more agents than this.
pub const VERTEX_ENUMERATION_MAX_AGENTS: usize = 4;

static MAX_AGENTS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_AGENTS);

pub fn max_agents() -> usize {
    MAX_AGENTS.load(Ordering::Relaxed)
}

/// Overrides the 2^N cap for the whole process; clamped to [`HARD_MAX_AGENTS`].
pub fn set_max_agents(cap: usize) -> usize {
    let cap = cap.min(HARD_MAX_AGENTS);
    MAX_AGENTS.store(cap, Ordering::Relaxed);
    cap
}

pub(crate) fn ensure_cap(operation: &'static str, agents: usize) -> Result<()> {
    ensure_within(operation, agents, max_agents())
}

pub(crate) fn ensure_within(operation: &'static str, agents: usize, cap: usize) -> Result<()> {
    if agents > cap {
        Err(Error::CapExceeded { operation, agents, cap })
    } else {
        Ok(())
    }
}
