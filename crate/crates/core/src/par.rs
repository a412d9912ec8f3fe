//! Execution strategy switch shared by the data-parallel kernels.

use std::ops::Range;

use serde::{Deserialize, Serialize};

/// How a kernel distributes work. `Parallel` silently runs sequentially when
/// the crate is built without the `parallel` feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Splits `range` into chunks of at most `chunk` elements, evaluates `f` on
/// each and folds the results with `combine`.
pub fn reduce_chunks<R, F, C>(exec: Execution, range: Range<u64>, chunk: u64, identity: R, f: F, combine: C) -> R
where
    R: Send + Sync + Clone,
    F: Fn(Range<u64>) -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    let pieces: Vec<Range<u64>> = (range.start..range.end)
        .step_by(chunk as usize)
        .map(|s| s..(s + chunk).min(range.end))
        .collect();
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return pieces.into_par_iter().map(&f).reduce(|| identity.clone(), &combine);
    }
    let _ = exec;
    pieces.into_iter().map(f).fold(identity, combine)
}
