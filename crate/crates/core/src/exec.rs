//! Data-parallel mapping with a sequential fallback.

use serde::Serialize;

/// How independent checks are scheduled. Results are always returned in
/// input order, so the choice never changes output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    /// Rayon work stealing; identical to `Sequential` when the `parallel`
    /// feature is disabled.
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work actually runs on a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map<T, R, F>(execution: Execution, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = execution;
    items.into_iter().map(f).collect()
}
