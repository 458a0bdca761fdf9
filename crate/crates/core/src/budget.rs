//! Process-wide cooperative deadline.
//!
//! Long-running loops call [`check`]; the CLI installs a deadline before
//! dispatching. Library users that never call [`set_deadline`] are never
//! interrupted.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

static EPOCH: OnceLock<Instant> = OnceLock::new();
/// Milliseconds after `EPOCH`; 0 means no deadline.
static DEADLINE_MS: AtomicU64 = AtomicU64::new(0);

fn epoch() -> Instant {
    *EPOCH.get_or_init(Instant::now)
}

pub fn set_deadline(budget: Duration) {
    let ms = (Instant::now() + budget).duration_since(epoch()).as_millis() as u64;
    DEADLINE_MS.store(ms.max(1), Ordering::SeqCst);
}

pub fn clear_deadline() {
    DEADLINE_MS.store(0, Ordering::SeqCst);
}

pub fn check() -> Result<()> {
    let deadline = DEADLINE_MS.load(Ordering::Relaxed);
    if deadline == 0 {
        return Ok(());
    }
    if Instant::now().duration_since(epoch()).as_millis() as u64 >= deadline {
        return Err(Error::BudgetExhausted);
    }
    Ok(())
}
