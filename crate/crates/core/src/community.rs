//! Greedy agglomerative modularity maximization (Clauset–Newman–Moore) on the
//! undirected projection, inter-community distances, and the per-community
//! distance reduction attributable to rail stations.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::bfs::{BfsScratch, Orientation};
use crate::error::{Error, Result};
use crate::network::{NodeId, TransitNetwork};
use crate::par::ordered_reduce;
use crate::projection::UndirectedProjection;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityPartition {
    /// Community of each node; ids are dense and numbered by first appearance in node order.
    pub assignment: Vec<u32>,
    pub n_communities: usize,
    pub modularity: f64,
}

impl CommunityPartition {
    pub fn members(&self, c: u32) -> Vec<NodeId> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == c)
            .map(|(v, _)| v as NodeId)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_communities];
        for &c in &self.assignment {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

/// One agglomeration step. Communities are named by their smallest node index
/// at the time of the merge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MergeStep {
    pub a: NodeId,
    pub b: NodeId,
    pub delta_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnmOutcome {
    pub partition: CommunityPartition,
    pub merges: Vec<MergeStep>,
}

/// Relabels arbitrary labels densely in order of first appearance.
pub fn dense_labels(labels: &[u32]) -> (Vec<u32>, usize) {
    let mut map = std::collections::HashMap::new();
    let dense = labels
        .iter()
        .map(|l| {
            let next = map.len() as u32;
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (dense, map.len())
}

/// Q = Σ_c [m_c/m − (d_c/2m)²] on the undirected projection; 0 for an edgeless graph.
pub fn modularity(g: &TransitNetwork, assignment: &[u32]) -> Result<f64> {
    if assignment.len() != g.node_count() {
        return Err(Error::domain(format!(
            "partition covers {} nodes but the network has {}",
            assignment.len(),
            g.node_count()
        )));
    }
    let proj = UndirectedProjection::new(g);
    Ok(projection_modularity(&proj, assignment))
}

fn projection_modularity(proj: &UndirectedProjection, assignment: &[u32]) -> f64 {
    let m = proj.edge_count();
    if m == 0 {
        return 0.0;
    }
    let mut internal: BTreeMap<u32, u64> = BTreeMap::new();
    let mut degree: BTreeMap<u32, u64> = BTreeMap::new();
    for v in 0..proj.node_count() as NodeId {
        *degree.entry(assignment[v as usize]).or_insert(0) += proj.degree(v) as u64;
    }
    for (u, v) in proj.edges() {
        if assignment[u as usize] == assignment[v as usize] {
            *internal.entry(assignment[u as usize]).or_insert(0) += 1;
        }
    }
    let m = m as f64;
    degree
        .iter()
        .map(|(c, &d)| {
            let mc = internal.get(c).copied().unwrap_or(0) as f64;
            mc / m - (d as f64 / (2.0 * m)).powi(2)
        })
        .sum()
}

struct Community {
    degree: u64,
    /// Neighbor community -> number of undirected edges between them.
    links: BTreeMap<u32, u64>,
}

/// Greedy modularity maximization. Each step merges the connected pair with
/// the largest ΔQ, ties going to the lexicographically smallest pair; stops
/// when no merge has ΔQ > 0.
pub fn detect_communities_cnm(g: &TransitNetwork) -> Result<CnmOutcome> {
    if g.is_empty() {
        return Err(Error::domain("network has no nodes"));
    }
    let proj = UndirectedProjection::new(g);
    let n = proj.node_count();
    let m = proj.edge_count() as i128;
    let mut comms: Vec<Option<Community>> = (0..n as NodeId)
        .map(|v| {
            Some(Community {
                degree: proj.degree(v) as u64,
                links: proj.neighbors(v).iter().map(|&u| (u, 1)).collect(),
            })
        })
        .collect();
    let mut members: Vec<Vec<NodeId>> = (0..n as NodeId).map(|v| vec![v]).collect();
    let mut merges = Vec::new();

    // ΔQ(i, j) = 2(e_ij − a_i a_j) = (2m·w_ij − d_i d_j) / (2m²); the integer
    // numerator orders candidates exactly.
    let gain = |w: u64, di: u64, dj: u64| 2 * m * w as i128 - di as i128 * dj as i128;
    let mut heap: BinaryHeap<(i128, Reverse<u32>, Reverse<u32>)> = BinaryHeap::new();
    for (u, v) in proj.edges() {
        let (du, dv) = (proj.degree(u) as u64, proj.degree(v) as u64);
        heap.push((gain(1, du, dv), Reverse(u), Reverse(v)));
    }

    while let Some((num, Reverse(i), Reverse(j))) = heap.pop() {
        if num <= 0 {
            break;
        }
        let current = match (&comms[i as usize], &comms[j as usize]) {
            (Some(ci), Some(cj)) => ci.links.get(&j).map(|&w| gain(w, ci.degree, cj.degree)),
            _ => None,
        };
        if current != Some(num) {
            continue; // stale
        }
        merges.push(MergeStep {
            a: i,
            b: j,
            delta_q: num as f64 / (2.0 * (m * m) as f64),
        });
        // Merge j into i (i < j, so i keeps the smaller label).
        let cj = comms[j as usize].take().unwrap();
        let mut ci = comms[i as usize].take().unwrap();
        ci.degree += cj.degree;
        ci.links.remove(&j);
        for (k, w) in cj.links {
            if k == i {
                continue;
            }
            *ci.links.entry(k).or_insert(0) += w;
            let ck = comms[k as usize].as_mut().unwrap();
            ck.links.remove(&j);
            *ck.links.entry(i).or_insert(0) += w;
        }
        for (&k, &w) in &ci.links {
            let dk = comms[k as usize].as_ref().unwrap().degree;
            let (a, b) = if i < k { (i, k) } else { (k, i) };
            heap.push((gain(w, ci.degree, dk), Reverse(a), Reverse(b)));
        }
        comms[i as usize] = Some(ci);
        let moved = std::mem::take(&mut members[j as usize]);
        members[i as usize].extend(moved);
    }

    let mut label = vec![0u32; n];
    for (c, ms) in members.iter().enumerate() {
        for &v in ms {
            label[v as usize] = c as u32;
        }
    }

    let (assignment, n_communities) = dense_labels(&label);
    let q = projection_modularity(&proj, &assignment);
    Ok(CnmOutcome {
        partition: CommunityPartition {
            assignment,
            n_communities,
            modularity: q,
        },
        merges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommunityDistance {
    pub mean: f64,
    pub pairs: u64,
    /// No ordered pairs exist (a singleton community to itself); `mean` is 0.
    pub vacuous: bool,
}

/// Mean BFS distance over ordered pairs (u ∈ from, v ∈ to, u ≠ v); an
/// unreachable pair contributes the node count.
pub fn community_distance(g: &TransitNetwork, partition: &CommunityPartition, from: u32, to: u32) -> Result<CommunityDistance> {
    if partition.assignment.len() != g.node_count() {
        return Err(Error::domain("partition does not cover the network"));
    }
    let src = partition.members(from);
    let dst = partition.members(to);
    if src.is_empty() || dst.is_empty() {
        return Err(Error::domain(format!("community {from} or {to} is empty")));
    }
    let n = g.node_count() as u64;
    let mut scratch = BfsScratch::new(g.node_count());
    let (mut sum, mut pairs) = (0u64, 0u64);
    for &u in &src {
        scratch.sweep(g, u, Orientation::Out);
        for &v in &dst {
            if u != v {
                sum += scratch.distance(v).map_or(n, u64::from);
                pairs += 1;
            }
        }
    }
    Ok(if pairs == 0 {
        CommunityDistance { mean: 0.0, pairs, vacuous: true }
    } else {
        CommunityDistance {
            mean: sum as f64 / pairs as f64,
            pairs,
            vacuous: false,
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenefitRow {
    pub community: u32,
    pub size: usize,
    /// Mean distance to nodes outside the community without rail.
    pub d_norail: f64,
    /// Same pairs, distances measured in the full network.
    pub d_full: f64,
    pub benefit: f64,
    /// 1 = largest benefit.
    pub rank: usize,
    pub pairs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenefitReport {
    /// In rank order.
    pub rows: Vec<BenefitRow>,
    /// Distance used for unreachable pairs (node count of the full network).
    pub unreachable_distance: u64,
}

/// Per-community reduction in mean distance to the rest of the network when
/// rail stations are available as intermediate hops. Destinations range over
/// nodes of `g_norail` outside the community; unreachable pairs count as the
/// full network's node count in both networks.
pub fn community_benefit(g_full: &TransitNetwork, g_norail: &TransitNetwork, partition: &CommunityPartition) -> Result<BenefitReport> {
    if partition.assignment.len() != g_norail.node_count() {
        return Err(Error::domain("partition does not cover the rail-free network"));
    }
    let to_full: Vec<NodeId> = g_norail
        .stations()
        .iter()
        .map(|s| {
            g_full
                .node_of(&s.id)
                .ok_or_else(|| Error::domain(format!("station {} missing from the full network", s.id)))
        })
        .collect::<Result<_>>()?;
    let n_full = g_full.node_count() as u64;
    let n2 = g_norail.node_count();
    let k = partition.n_communities;
    let sizes = partition.sizes();
    let sources: Vec<NodeId> = g_norail.nodes().collect();

    // Per community: (Σ d_norail, Σ d_full).
    let sums = ordered_reduce(
        &sources,
        || (BfsScratch::new(n2), BfsScratch::new(g_full.node_count())),
        || vec![(0u64, 0u64); k],
        |(s2, s1), acc, &u| {
            s2.sweep(g_norail, u, Orientation::Out);
            s1.sweep(g_full, to_full[u as usize], Orientation::Out);
            let cu = partition.assignment[u as usize];
            let (mut a, mut b) = (0u64, 0u64);
            for v in 0..n2 as NodeId {
                if partition.assignment[v as usize] == cu {
                    continue;
                }
                a += s2.distance(v).map_or(n_full, u64::from);
                b += s1.distance(to_full[v as usize]).map_or(n_full, u64::from);
            }
            acc[cu as usize].0 += a;
            acc[cu as usize].1 += b;
        },
        |total, part| {
            for (t, p) in total.iter_mut().zip(part) {
                t.0 += p.0;
                t.1 += p.1;
            }
        },
    );

    let mut rows: Vec<BenefitRow> = (0..k)
        .map(|c| {
            let pairs = sizes[c] as u64 * (n2 - sizes[c]) as u64;
            let (s2, s1) = sums[c];
            let (d2, d1, benefit) = if pairs == 0 {
                (0.0, 0.0, 0.0)
            } else {
                let p = pairs as f64;
                (s2 as f64 / p, s1 as f64 / p, (s2 as i128 - s1 as i128) as f64 / p)
            };
            BenefitRow {
                community: c as u32,
                size: sizes[c],
                d_norail: d2,
                d_full: d1,
                benefit,
                rank: 0,
                pairs,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.benefit.total_cmp(&a.benefit).then(a.community.cmp(&b.community)));
    for (i, r) in rows.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(BenefitReport {
        rows,
        unreachable_distance: n_full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::cliques;

    #[test]
    fn two_cliques_with_bridge() {
        let g = cliques(&[5, 5], &[(4, 5)]);
        let out = detect_communities_cnm(&g).unwrap();
        let p = &out.partition;
        assert_eq!(p.n_communities, 2);
        assert_eq!(p.assignment, vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1]);
        assert!(out.merges.iter().all(|m| m.delta_q > 0.0));
        assert_eq!(out.merges.len(), 8);
    }

    #[test]
    fn edgeless_graph_is_singletons() {
        let g = TransitNetwork::from_edge_list(4, &[]).unwrap();
        let p = detect_communities_cnm(&g).unwrap().partition;
        assert_eq!(p.n_communities, 4);
        assert_eq!(p.modularity, 0.0);
    }

    #[test]
    fn disjoint_cliques_stay_apart() {
        let g = cliques(&[3, 4, 5], &[]);
        let p = detect_communities_cnm(&g).unwrap().partition;
        assert_eq!(p.n_communities, 3);
        assert_eq!(p.sizes(), vec![3, 4, 5]);
    }

    #[test]
    fn modularity_closed_forms() {
        let g = cliques(&[4, 4], &[]);
        assert_eq!(modularity(&g, &[0; 8]).unwrap(), 0.0);
        assert!((modularity(&g, &[0, 0, 0, 0, 1, 1, 1, 1]).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(modularity(&g, &[0; 3]), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_between_singletons() {
        let g = TransitNetwork::from_edge_list(2, &[(0, 1)]).unwrap();
        let p = CommunityPartition { assignment: vec![0, 1], n_communities: 2, modularity: 0.0 };
        assert_eq!(community_distance(&g, &p, 0, 1).unwrap().mean, 1.0);
        assert_eq!(community_distance(&g, &p, 1, 0).unwrap().mean, 2.0);
        let same = community_distance(&g, &p, 0, 0).unwrap();
        assert!(same.vacuous);
        assert_eq!(same.mean, 0.0);
    }

    #[test]
    fn identical_networks_have_zero_benefit() {
        let g = cliques(&[3, 3], &[(0, 3)]);
        let p = detect_communities_cnm(&g).unwrap().partition;
        let r = community_benefit(&g, &g, &p).unwrap();
        assert!(r.rows.iter().all(|row| row.benefit == 0.0));
    }
}
