//! Small graph generators shared by tests, benchmarks, and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{NodeId, TransitNetwork};

pub fn directed_cycle(n: usize) -> TransitNetwork {
    let pairs: Vec<(NodeId, NodeId)> = (0..n).map(|i| (i as NodeId, ((i + 1) % n) as NodeId)).collect();
    TransitNetwork::from_edge_list(n, &pairs).expect("cycle is simple")
}

pub fn directed_path(n: usize) -> TransitNetwork {
    let pairs: Vec<(NodeId, NodeId)> = (1..n).map(|i| ((i - 1) as NodeId, i as NodeId)).collect();
    TransitNetwork::from_edge_list(n, &pairs).expect("path is simple")
}

/// Erdős–Rényi digraph: each ordered pair independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> TransitNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_digraph_with(&mut rng, n, p)
}

pub fn random_digraph_with<R: Rng>(rng: &mut R, n: usize, p: f64) -> TransitNetwork {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                pairs.push((u as NodeId, v as NodeId));
            }
        }
    }
    TransitNetwork::from_edge_list(n, &pairs).expect("generated pairs are simple")
}

/// Digraph with exactly `m` distinct edges chosen uniformly.
pub fn random_digraph_m(n: usize, m: usize, seed: u64) -> TransitNetwork {
    assert!(m <= n * (n - 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut pairs = Vec::with_capacity(m);
    while pairs.len() < m {
        let u = rng.gen_range(0..n) as NodeId;
        let v = rng.gen_range(0..n) as NodeId;
        if u != v && seen.insert((u, v)) {
            pairs.push((u, v));
        }
    }
    TransitNetwork::from_edge_list(n, &pairs).expect("generated pairs are simple")
}

/// Undirected cliques as reciprocal digraph edges, plus extra reciprocal links.
pub fn cliques(sizes: &[usize], links: &[(NodeId, NodeId)]) -> TransitNetwork {
    let n: usize = sizes.iter().sum();
    let mut pairs = Vec::new();
    let mut base = 0;
    for &s in sizes {
        for i in base..base + s {
            for j in base..base + s {
                if i != j {
                    pairs.push((i as NodeId, j as NodeId));
                }
            }
        }
        base += s;
    }
    for &(u, v) in links {
        pairs.push((u, v));
        pairs.push((v, u));
    }
    TransitNetwork::from_edge_list(n, &pairs).expect("clique pairs are simple")
}
