//! Degree-preserving randomization by repeated double-edge swaps.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::network::{NodeId, TransitNetwork};

/// Default swaps per edge.
pub const DEFAULT_SWAP_MULTIPLIER: f64 = 10.0;
pub const DEFAULT_MAX_ATTEMPTS_PER_SWAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RewireConfig {
    pub n_swaps: usize,
    pub seed: u64,
    pub max_attempts_per_swap: usize,
}

impl RewireConfig {
    /// `multiplier · m` swaps.
    pub fn for_network(g: &TransitNetwork, multiplier: f64, seed: u64) -> Self {
        RewireConfig {
            n_swaps: (multiplier * g.edge_count() as f64).round() as usize,
            seed,
            max_attempts_per_swap: DEFAULT_MAX_ATTEMPTS_PER_SWAP,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RewireStats {
    pub accepted: usize,
    pub attempts: usize,
    /// The chain stopped early because a swap could not be found within the attempt budget.
    pub exhausted: bool,
}

#[inline]
fn key(u: NodeId, v: NodeId) -> u64 {
    (u as u64) << 32 | v as u64
}

/// Swaps `(a,b),(c,d) -> (a,d),(c,b)` on an edge list in place, rejecting
/// swaps that would create a self-loop or a duplicate edge.
pub fn rewire_pairs(pairs: &mut [(NodeId, NodeId)], cfg: &RewireConfig) -> RewireStats {
    let mut stats = RewireStats::default();
    let m = pairs.len();
    if m < 2 || cfg.n_swaps == 0 {
        return stats;
    }
    let mut present: HashSet<u64> = pairs.iter().map(|&(u, v)| key(u, v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = cfg.max_attempts_per_swap.max(1);
    'swaps: while stats.accepted < cfg.n_swaps {
        let mut tries = 0;
        loop {
            if tries == budget {
                log::warn!(
                    "degree-preserving rewiring stopped after {} of {} swaps: no legal swap in {} attempts",
                    stats.accepted,
                    cfg.n_swaps,
                    budget
                );
                stats.exhausted = true;
                break 'swaps;
            }
            tries += 1;
            stats.attempts += 1;
            let i = rng.gen_range(0..m);
            let j = rng.gen_range(0..m);
            if i == j {
                continue;
            }
            let (a, b) = pairs[i];
            let (c, d) = pairs[j];
            if a == c || b == d || a == d || c == b {
                continue;
            }
            if present.contains(&key(a, d)) || present.contains(&key(c, b)) {
                continue;
            }
            present.remove(&key(a, b));
            present.remove(&key(c, d));
            present.insert(key(a, d));
            present.insert(key(c, b));
            pairs[i] = (a, d);
            pairs[j] = (c, b);
            stats.accepted += 1;
            break;
        }
    }
    stats
}

/// Randomized counterpart of `g` with every node's in- and out-degree intact.
pub fn rewire_degree_preserving(g: &TransitNetwork, cfg: &RewireConfig) -> Result<TransitNetwork> {
    Ok(rewire_with_stats(g, cfg)?.0)
}

pub fn rewire_with_stats(g: &TransitNetwork, cfg: &RewireConfig) -> Result<(TransitNetwork, RewireStats)> {
    let mut pairs = g.edge_pairs();
    let stats = rewire_pairs(&mut pairs, cfg);
    Ok((g.with_edge_pairs(&pairs)?, stats))
}
