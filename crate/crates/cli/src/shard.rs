//! Order-preserving sharded execution over a boxed parameter list.
//!
//! Workers are pure functions on disjoint contiguous chunks, chunks come
//! back in box order, and the merge folds them in that order, so the
//! merged report cannot depend on how many threads ran the chunks or how
//! the box was split. That property is what the runner's self-test mode
//! re-checks end to end against a single-shard rerun.

use rayon::prelude::*;
use sievelab_core::{Error, Result};

/// A partial report that can absorb the next shard's output.
///
/// `absorb` is always called in shard order, so implementations only need
/// associativity (extending a row list is fine), not commutativity.
pub trait Merge: Sized {
    fn empty() -> Self;
    fn absorb(&mut self, other: Self);
}

/// Splits `items` into `shard_count` contiguous chunks, runs `worker` on
/// each in parallel, and folds the partial reports in chunk order.
///
/// An empty box yields `R::empty()` without invoking the worker; a single
/// shard degenerates to one worker call over the whole box.
pub fn shard_and_merge<T, R, W>(items: &[T], shard_count: usize, worker: W) -> Result<R>
where
    T: Sync,
    R: Merge + Send,
    W: Fn(&[T]) -> Result<R> + Sync,
{
    if shard_count == 0 {
        return Err(Error::Domain("shard count must be at least 1".into()));
    }
    if items.is_empty() {
        return Ok(R::empty());
    }
    let chunk = items.len().div_ceil(shard_count);
    let parts: Vec<R> = items
        .par_chunks(chunk)
        .map(|c| worker(c))
        .collect::<Result<Vec<R>>>()?;
    let mut merged = R::empty();
    for part in parts {
        merged.absorb(part);
    }
    Ok(merged)
}
