//! Per-thread term budget for polynomial products.
//!
//! Products that would exceed the budget abort with a [`BudgetExceeded`]
//! panic payload. [`with_budget`] converts that payload back into a value,
//! so callers never see the unwind.

use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Once;

/// Default cap on the number of terms in any intermediate product.
pub const DEFAULT_MAX_TERMS: usize = 2_000_000;

thread_local! {
    static MAX_TERMS: Cell<usize> = const { Cell::new(usize::MAX) };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub terms: usize,
    pub budget: usize,
}

pub(crate) fn max_terms() -> usize {
    MAX_TERMS.with(|c| c.get())
}

pub(crate) fn check(terms: usize, budget: usize) {
    if terms > budget {
        panic::panic_any(BudgetExceeded { terms, budget });
    }
}

/// Keeps the default panic message off stderr for budget aborts.
fn quiet_budget_panics() {
    static HOOK: Once = Once::new();
    HOOK.call_once(|| {
        let previous = panic::take_hook();
        panic::set_hook(Box::new(move |info| {
            if info.payload().downcast_ref::<BudgetExceeded>().is_none() {
                previous(info);
            }
        }));
    });
}

struct Restore(usize);

impl Drop for Restore {
    fn drop(&mut self) {
        MAX_TERMS.with(|c| c.set(self.0));
    }
}

/// Runs `f` with the term budget set to `budget` on the current thread.
///
/// Any other panic is propagated unchanged.
pub fn with_budget<T>(budget: usize, f: impl FnOnce() -> T) -> Result<T, BudgetExceeded> {
    quiet_budget_panics();
    let _restore = Restore(max_terms());
    MAX_TERMS.with(|c| c.set(budget));
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => Ok(v),
        Err(payload) => match payload.downcast::<BudgetExceeded>() {
            Ok(b) => Err(*b),
            Err(other) => panic::resume_unwind(other),
        },
    }
}
