use std::collections::HashMap;

use crate::ring::{QuadInt, RingParams};

/// Pairwise D(n) compatibility: `a ~ b` iff `ab + n` is a square in `O_K`.
#[derive(Debug, Clone)]
pub struct CompatGraph {
    ring: Option<RingParams>,
    n: QuadInt,
    vertices: Vec<QuadInt>,
    adj: Vec<Vec<usize>>,
}

impl CompatGraph {
    pub fn ring(&self) -> Option<RingParams> {
        self.ring
    }

    pub fn shift(&self) -> &QuadInt {
        &self.n
    }

    pub fn vertices(&self) -> &[QuadInt] {
        &self.vertices
    }

    /// Sorted neighbour indices of vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }
}

/// Builds the compatibility graph on `elements` (sorted canonically, zero and
/// duplicates dropped). Square tests are memoized on the value of `ab + n`.
pub fn build_graph(elements: &[QuadInt], n: &QuadInt) -> CompatGraph {
    let mut vertices: Vec<QuadInt> = elements.iter().filter(|e| !e.is_zero()).cloned().collect();
    vertices.sort();
    vertices.dedup();
    let ring = vertices.first().map(QuadInt::ring);
    let count = vertices.len();
    let mut adj = vec![Vec::new(); count];
    let mut memo: HashMap<QuadInt, bool> = HashMap::new();
    for i in 0..count {
        for j in i + 1..count {
            let value = &(&vertices[i] * &vertices[j]) + n;
            let square = match memo.get(&value) {
                Some(&s) => s,
                None => {
                    let s = value.sqrt_exact().is_some();
                    memo.insert(value, s);
                    s
                }
            };
            if square {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    CompatGraph { ring, n: n.clone(), vertices, adj }
}
