//! Breadth-first search with reusable scratch space.

use crate::network::{NodeId, TransitNetwork};

/// Which adjacency a sweep follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Along edge direction: distances d(source, v).
    Out,
    /// Against edge direction: distances d(v, source).
    In,
}

/// Per-worker BFS buffers. Visited marks are epoch-stamped so a truncated
/// sweep costs only what it touches.
#[derive(Debug, Clone)]
pub struct BfsScratch {
    mark: Vec<u32>,
    epoch: u32,
    dist: Vec<u32>,
    order: Vec<NodeId>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            mark: vec![0; n],
            epoch: 0,
            dist: vec![0; n],
            order: Vec::with_capacity(n),
        }
    }

    fn next_epoch(&mut self) {
        if self.epoch == u32::MAX {
            self.mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.order.clear();
    }

    #[inline]
    fn visit(&mut self, v: NodeId, d: u32) {
        self.mark[v as usize] = self.epoch;
        self.dist[v as usize] = d;
        self.order.push(v);
    }

    #[inline]
    pub fn reached(&self, v: NodeId) -> bool {
        self.mark[v as usize] == self.epoch
    }

    /// Distance to `v` from the last sweep's source, if reached.
    #[inline]
    pub fn distance(&self, v: NodeId) -> Option<u32> {
        self.reached(v).then(|| self.dist[v as usize])
    }

    /// Nodes reached by the last sweep in nondecreasing distance order.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Full sweep from `source`.
    pub fn sweep(&mut self, g: &TransitNetwork, source: NodeId, orientation: Orientation) {
        self.next_epoch();
        self.visit(source, 0);
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            let du = self.dist[u as usize];
            let nbrs = match orientation {
                Orientation::Out => g.out_neighbors(u),
                Orientation::In => g.in_neighbors(u),
            };
            for &w in nbrs {
                if self.mark[w as usize] != self.epoch {
                    self.visit(w, du + 1);
                }
            }
        }
    }

    /// Hop distance from `source` to `target` ignoring the single edge
    /// `source -> target`; stops as soon as `target` is discovered.
    pub fn distance_without_edge(&mut self, g: &TransitNetwork, source: NodeId, target: NodeId) -> Option<u32> {
        self.next_epoch();
        self.visit(source, 0);
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            let du = self.dist[u as usize];
            for &w in g.out_neighbors(u) {
                if u == source && w == target {
                    continue;
                }
                if self.mark[w as usize] != self.epoch {
                    if w == target {
                        return Some(du + 1);
                    }
                    self.visit(w, du + 1);
                }
            }
        }
        None
    }
}
