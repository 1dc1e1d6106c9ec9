//! Brute-force reference implementations. Nothing here calls into the library
//! beyond reading a graph's edge list, so a bug in the crate cannot leak into
//! the expected values. `harness` runs the library against these oracles.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod harness;

use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use railnet::TransitNetwork;

pub type Edges = Vec<(usize, usize)>;

pub fn edges_of(g: &TransitNetwork) -> Edges {
    g.edges().iter().map(|e| (e.source as usize, e.target as usize)).collect()
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u][v] = true;
    }
    a
}

/// Hop distances from `s` in an adjacency matrix; `None` when unreachable.
pub fn bfs_matrix(a: &[Vec<bool>], s: usize) -> Vec<Option<usize>> {
    let n = a.len();
    let mut d = vec![None; n];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in 0..n {
            if a[u][v] && d[v].is_none() {
                d[v] = Some(d[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    d
}

pub fn all_pairs(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let a = adjacency(n, edges);
    (0..n).map(|s| bfs_matrix(&a, s)).collect()
}

/// Betweenness by listing every simple path and keeping the shortest ones per
/// ordered pair.
pub fn betweenness_by_enumeration(n: usize, edges: &[(usize, usize)]) -> Vec<Ratio<i128>> {
    let a = adjacency(n, edges);
    let mut score = vec![Ratio::from_integer(0i128); n];
    for s in 0..n {
        let mut paths: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
        let mut stack = vec![vec![s]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if path.len() > 1 {
                paths.entry(last).or_default().push(path.clone());
            }
            for v in 0..n {
                if a[last][v] && !path.contains(&v) {
                    let mut p = path.clone();
                    p.push(v);
                    stack.push(p);
                }
            }
        }
        for (t, ps) in paths {
            let best = ps.iter().map(Vec::len).min().unwrap();
            let shortest: Vec<&Vec<usize>> = ps.iter().filter(|p| p.len() == best).collect();
            let total = shortest.len() as i128;
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = shortest.iter().filter(|p| p.contains(&v)).count() as i128;
                if through > 0 {
                    score[v] += Ratio::new(through, total);
                }
            }
        }
    }
    score
}

/// (3 × triangles, connected triples) of the undirected projection, by
/// looking at every node triple.
pub fn transitivity_counts(n: usize, edges: &[(usize, usize)]) -> (u64, u64) {
    let mut a = vec![vec![false; n]; n];
    for &(u, v) in edges {
        a[u][v] = true;
        a[v][u] = true;
    }
    let mut closed = 0;
    let mut triples = 0;
    for center in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                if x != center && y != center && a[center][x] && a[center][y] {
                    triples += 1;
                    if a[x][y] {
                        closed += 1;
                    }
                }
            }
        }
    }
    (closed, triples)
}

/// Sample Pearson correlation of (out-degree of source, in-degree of target)
/// over edges.
pub fn pearson_assortativity(n: usize, edges: &[(usize, usize)]) -> Option<f64> {
    let mut outd = vec![0f64; n];
    let mut ind = vec![0f64; n];
    for &(u, v) in edges {
        outd[u] += 1.0;
        ind[v] += 1.0;
    }
    let xs: Vec<f64> = edges.iter().map(|&(u, _)| outd[u]).collect();
    let ys: Vec<f64> = edges.iter().map(|&(_, v)| ind[v]).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Distance from u to v once the edge (u, v) is gone.
pub fn bridge_by_deletion(n: usize, edges: &[(usize, usize)], e: (usize, usize)) -> Option<usize> {
    let kept: Edges = edges.iter().copied().filter(|&x| x != e).collect();
    bfs_matrix(&adjacency(n, &kept), e.0)[e.1]
}

/// Undirected modularity as the textbook double sum over node pairs.
pub fn modularity_double_sum(n: usize, edges: &[(usize, usize)], assignment: &[u32]) -> f64 {
    let mut a = vec![vec![0f64; n]; n];
    for &(u, v) in edges {
        if u != v {
            a[u][v] = 1.0;
            a[v][u] = 1.0;
        }
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Best modularity over every partition of `n ≤ 12` nodes (restricted growth strings).
pub fn best_partition(n: usize, edges: &[(usize, usize)]) -> (f64, Vec<u32>) {
    let mut labels = vec![0u32; n];
    let mut best = (f64::NEG_INFINITY, labels.clone());
    fn rec(i: usize, max: u32, labels: &mut Vec<u32>, n: usize, edges: &[(usize, usize)], best: &mut (f64, Vec<u32>)) {
        if i == n {
            let q = modularity_double_sum(n, edges, labels);
            if q > best.0 + 1e-12 {
                *best = (q, labels.clone());
            }
            return;
        }
        for c in 0..=max + 1 {
            labels[i] = c;
            rec(i + 1, max.max(c), labels, n, edges, best);
        }
    }
    if n > 0 {
        rec(1, 0, &mut labels, n, edges, &mut best);
    }
    best
}

/// Exact distribution over infected sets (bitmasks) after each of `steps`
/// SI steps, following edge direction.
pub fn si_markov(n: usize, edges: &[(usize, usize)], seeds: u32, lambda: f64, steps: usize) -> Vec<HashMap<u32, f64>> {
    let mut dist = HashMap::from([(seeds, 1.0)]);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(dist.clone());
    for _ in 0..steps {
        let mut next: HashMap<u32, f64> = HashMap::new();
        for (&state, &p) in &dist {
            // Infection probability of each susceptible node.
            let probs: Vec<(usize, f64)> = (0..n)
                .filter(|&v| state & (1 << v) == 0)
                .map(|v| {
                    let k = edges.iter().filter(|&&(u, w)| w == v && state & (1 << u) != 0).count();
                    (v, 1.0 - (1.0 - lambda).powi(k as i32))
                })
                .collect();
            for outcome in 0u32..(1 << probs.len()) {
                let mut q = p;
                let mut s = state;
                for (bit, &(v, pv)) in probs.iter().enumerate() {
                    if outcome & (1 << bit) != 0 {
                        q *= pv;
                        s |= 1 << v;
                    } else {
                        q *= 1.0 - pv;
                    }
                }
                if q > 0.0 {
                    *next.entry(s).or_insert(0.0) += q;
                }
            }
        }
        dist = next;
        out.push(dist.clone());
    }
    out
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos, g = 7.
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + 7.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn t_pdf(x: f64, df: f64) -> f64 {
    let ln_c = ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    (ln_c - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp()
}

/// Two-sided Student-t p-value by Simpson integration of the density over [0, |t|].
pub fn two_sided_p(t: f64, df: f64) -> f64 {
    let steps = 20_000;
    let h = t.abs() / steps as f64;
    let mut s = t_pdf(0.0, df) + t_pdf(t.abs(), df);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * t_pdf(i as f64 * h, df);
    }
    let half_area = s * h / 3.0;
    1.0 - 2.0 * half_area
}

/// Welch statistic and Welch–Satterthwaite degrees of freedom, straight from the definitions.
pub fn welch(a: &[f64], b: &[f64]) -> (f64, f64) {
    let stats = |x: &[f64]| {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|y| (y - m).powi(2)).sum::<f64>() / (n - 1.0);
        (n, m, v)
    };
    let (na, ma, va) = stats(a);
    let (nb, mb, vb) = stats(b);
    let (sa, sb) = (va / na, vb / nb);
    let t = (ma - mb) / (sa + sb).sqrt();
    let df = (sa + sb).powi(2) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    (t, df)
}
