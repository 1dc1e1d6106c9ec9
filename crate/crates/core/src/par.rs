//! Deterministic parallel reductions.
//!
//! Work is cut into fixed-size chunks that do not depend on the thread count;
//! each chunk folds its items in order and chunk results are merged in chunk
//! order. Floating-point sums are therefore bit-identical for any pool size.

use rayon::prelude::*;

/// Items per chunk.
pub(crate) const CHUNK: usize = 32;
/// Chunks materialized at once; bounds memory to `WINDOW` accumulators.
const WINDOW: usize = 64;

pub(crate) fn ordered_reduce<T, S, A, FS, FI, FF, FM>(
    items: &[T],
    scratch: FS,
    init: FI,
    fold: FF,
    mut merge: FM,
) -> A
where
    T: Sync,
    A: Send,
    FS: Fn() -> S + Sync + Send,
    FI: Fn() -> A + Sync + Send,
    FF: Fn(&mut S, &mut A, &T) + Sync + Send,
    FM: FnMut(&mut A, A),
{
    let mut total = init();
    let chunks: Vec<&[T]> = items.chunks(CHUNK).collect();
    for window in chunks.chunks(WINDOW) {
        let partials: Vec<A> = window
            .par_iter()
            .map_init(&scratch, |s, chunk| {
                let mut acc = init();
                for item in chunk.iter() {
                    fold(s, &mut acc, item);
                }
                acc
            })
            .collect();
        for p in partials {
            merge(&mut total, p);
        }
    }
    total
}

/// Order-preserving parallel map with per-worker scratch.
pub(crate) fn ordered_map<T, S, R, FS, FM>(items: &[T], scratch: FS, f: FM) -> Vec<R>
where
    T: Sync,
    R: Send,
    FS: Fn() -> S + Sync + Send,
    FM: Fn(&mut S, &T) -> R + Sync + Send,
{
    items.par_iter().map_init(scratch, f).collect()
}
