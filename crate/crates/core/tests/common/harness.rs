//! Monte-Carlo comparisons shared by the epidemics tests and the acceptance run.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use railnet::epidemics::{si_step, SpreadGraph, Spread};
use railnet::TransitNetwork;

use super::si_markov;

/// Digraphs on `n` nodes, one per isomorphism class of graphs rooted at node 0.
pub fn rooted_digraph_classes(n: usize) -> Vec<Vec<(usize, usize)>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let slot_of: HashMap<(usize, usize), usize> = slots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut perms = vec![vec![0usize]];
    for k in 1..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (1..=p.len()).map(move |pos| {
                let mut q = p.clone();
                q.insert(pos.max(1), k);
                q
            }))
            .collect();
    }
    let mut classes = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let canonical = perms
            .iter()
            .map(|p| {
                slots.iter().enumerate().filter(|&(i, _)| mask & (1 << i) != 0).fold(0u32, |acc, (_, &(u, v))| {
                    acc | 1 << slot_of[&(p[u], p[v])]
                })
            })
            .min()
            .unwrap();
        if canonical == mask {
            classes.push(slots.iter().enumerate().filter(|&(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e).collect());
        }
    }
    classes
}

#[derive(Debug, Default)]
pub struct SiAgreement {
    pub graphs: usize,
    /// (graph, t, state) probabilities strictly between 0 and 1.
    pub comparisons: usize,
    pub beyond_3se: usize,
    pub max_z: f64,
    /// Empirical states the exact chain gives probability 0, or missed certain states.
    pub impossible: usize,
}

impl SiAgreement {
    /// Excursions a correct sampler produces: 0.27% of comparisons, plus
    /// three Poisson standard deviations of slack.
    pub fn allowed_excursions(&self) -> usize {
        let expected = 0.0027 * self.comparisons as f64;
        (expected + 3.0 * expected.sqrt()).ceil() as usize
    }

    pub fn passes(&self) -> bool {
        self.impossible == 0 && self.beyond_3se <= self.allowed_excursions() && self.max_z < 5.0
    }
}

/// Runs `trials` SI chains of `steps` steps from node 0 on every rooted digraph
/// class with at most `max_n` nodes and compares state frequencies with the
/// exact chain.
pub fn si_markov_agreement(max_n: usize, trials: usize, steps: usize, lambda: f64, seed: u64) -> SiAgreement {
    let mut out = SiAgreement::default();
    for n in 1..=max_n {
        for edges in rooted_digraph_classes(n) {
            let pairs: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (u as u32, v as u32)).collect();
            let g = TransitNetwork::from_edge_list(n, &pairs).unwrap();
            let sg = SpreadGraph::new(&g, Spread::Directed);
            let exact = si_markov(n, &edges, 1, lambda, steps);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 40) ^ out.graphs as u64);
            let mut seen: Vec<HashMap<u32, usize>> = vec![HashMap::new(); steps + 1];
            for _ in 0..trials {
                let mut state = vec![false; n];
                state[0] = true;
                for counts in seen.iter_mut().skip(1) {
                    state = si_step(&sg, &state, lambda, &mut rng);
                    let mask = state.iter().enumerate().fold(0u32, |m, (i, &b)| if b { m | 1 << i } else { m });
                    *counts.entry(mask).or_insert(0) += 1;
                }
            }
            for t in 1..=steps {
                for (&mask, &count) in &seen[t] {
                    if exact[t].get(&mask).copied().unwrap_or(0.0) <= 0.0 {
                        out.impossible += count;
                    }
                }
                for (&mask, &p) in &exact[t] {
                    let hat = seen[t].get(&mask).copied().unwrap_or(0) as f64 / trials as f64;
                    if p >= 1.0 - 1e-12 {
                        if hat != 1.0 {
                            out.impossible += 1;
                        }
                        continue;
                    }
                    let se = (p * (1.0 - p) / trials as f64).sqrt();
                    let z = (hat - p).abs() / se;
                    out.comparisons += 1;
                    out.max_z = out.max_z.max(z);
                    if z > 3.0 {
                        out.beyond_3se += 1;
                    }
                }
            }
            out.graphs += 1;
        }
    }
    out
}
