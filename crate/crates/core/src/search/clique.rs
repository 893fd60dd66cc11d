//! k-clique enumeration on a [`CompatGraph`] plus the brute-force oracle.

use std::collections::{BTreeSet, HashMap};

use crate::ring::QuadInt;
use crate::search::graph::CompatGraph;
use crate::tuples::{pair_witness, verify_tuple, DioTuple};

/// All k-cliques, each as ascending vertex indices, in lexicographic order.
pub fn find_cliques(g: &CompatGraph, k: usize) -> Vec<Vec<usize>> {
    let roots: Vec<usize> = (0..g.vertex_count()).collect();
    let mut out = enumerate(g, k, &roots, &roots);
    out.sort();
    out
}

/// k-cliques up to the symmetries `{±1}` (plus conjugation when the shift is
/// rational), expanded back to the full list. Equal as a set to
/// [`find_cliques`]; only cliques whose least vertex is the least member of
/// its vertex orbit are searched directly.
pub fn find_cliques_symmetric(g: &CompatGraph, k: usize) -> Vec<Vec<usize>> {
    let index: HashMap<&QuadInt, usize> = g.vertices().iter().enumerate().map(|(i, v)| (v, i)).collect();
    let with_conj = g.shift().is_rational();
    let orbit = |v: &QuadInt| -> Vec<QuadInt> {
        let mut o = vec![v.clone(), -v];
        if with_conj {
            let c = v.conj();
            o.push(-&c);
            o.push(c);
        }
        o
    };
    // Vertex orbits must stay inside the vertex set; otherwise fall back.
    let closed = g.vertices().iter().all(|v| orbit(v).iter().all(|w| index.contains_key(w)));
    if !closed {
        return find_cliques(g, k);
    }

    // Root order: (norm, orbit minimum, x, y). Orbit classes are contiguous,
    // and the first member of each class is a valid representative root.
    let orbit_min: Vec<(_, _)> = g
        .vertices()
        .iter()
        .map(|v| {
            let m = orbit(v).into_iter().map(|w| (w.x().clone(), w.y().clone())).min().expect("nonempty orbit");
            (v.norm(), m)
        })
        .collect();
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by(|&a, &b| {
        orbit_min[a]
            .cmp(&orbit_min[b])
            .then_with(|| g.vertices()[a].x().cmp(g.vertices()[b].x()))
            .then_with(|| g.vertices()[a].y().cmp(g.vertices()[b].y()))
    });
    let roots: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&v| {
            let key = &orbit_min[v].1;
            (g.vertices()[v].x(), g.vertices()[v].y()) == (&key.0, &key.1)
        })
        .collect();

    let mut all = BTreeSet::new();
    for clique in enumerate(g, k, &order, &roots) {
        let members: Vec<Vec<QuadInt>> = clique.iter().map(|&v| orbit(&g.vertices()[v])).collect();
        for s in 0..members[0].len() {
            let mut image: Vec<usize> = members.iter().map(|m| index[&m[s]]).collect();
            image.sort_unstable();
            all.insert(image);
        }
    }
    all.into_iter().collect()
}

/// Ordered k-clique enumeration: every clique is produced once, from its
/// first vertex in `order`, and only from vertices listed in `roots`.
fn enumerate(g: &CompatGraph, k: usize, order: &[usize], roots: &[usize]) -> Vec<Vec<usize>> {
    let count = g.vertex_count();
    let mut out = Vec::new();
    if k == 0 || k > count {
        return out;
    }
    let mut rank = vec![0usize; count];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    // Forward neighbours, listed by rank.
    let forward: Vec<Vec<usize>> = (0..count)
        .map(|v| {
            let mut f: Vec<usize> = g.neighbors(v).iter().map(|&w| rank[w]).filter(|&rw| rw > rank[v]).collect();
            f.sort_unstable();
            f
        })
        .collect();
    let forward_by_rank: Vec<&Vec<usize>> = order.iter().map(|&v| &forward[v]).collect();

    let mut stack = Vec::with_capacity(k);
    for &root in roots {
        let r = rank[root];
        stack.push(r);
        extend(&forward_by_rank, k, forward_by_rank[r], &mut stack, &mut |clique| {
            let mut c: Vec<usize> = clique.iter().map(|&r| order[r]).collect();
            c.sort_unstable();
            out.push(c);
        });
        stack.pop();
    }
    out
}

fn extend(
    forward: &[&Vec<usize>],
    k: usize,
    candidates: &[usize],
    stack: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if stack.len() == k {
        emit(stack);
        return;
    }
    if stack.len() + candidates.len() < k {
        return;
    }
    for (i, &w) in candidates.iter().enumerate() {
        if stack.len() + candidates.len() - i < k {
            break;
        }
        let next = intersect_sorted(&candidates[i + 1..], forward[w]);
        stack.push(w);
        extend(forward, k, &next, stack, emit);
        stack.pop();
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Oracle for [`find_cliques`]: walks k-subsets of `elements` in
/// lexicographic order, abandoning a prefix as soon as one of its pairs has
/// no witness, and passes every complete subset through `verify_tuple`.
/// Uses neither the graph nor any memoization.
pub fn brute_force_tuples(elements: &[QuadInt], k: usize, n: &QuadInt) -> Vec<Vec<QuadInt>> {
    let mut elems: Vec<QuadInt> = elements.iter().filter(|e| !e.is_zero()).cloned().collect();
    elems.sort();
    elems.dedup();
    let mut out = Vec::new();
    if k == 0 || k > elems.len() {
        return out;
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    walk(&elems, k, n, 0, &mut chosen, &mut out);
    out
}

fn walk(elems: &[QuadInt], k: usize, n: &QuadInt, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<QuadInt>>) {
    if chosen.len() == k {
        let subset: Vec<QuadInt> = chosen.iter().map(|&i| elems[i].clone()).collect();
        let t = DioTuple::new(n.ring(), n.clone(), subset.clone()).expect("distinct nonzero elements");
        if verify_tuple(&t).pass {
            out.push(subset);
        }
        return;
    }
    for i in start..elems.len() {
        if elems.len() - i < k - chosen.len() {
            break;
        }
        let ok = chosen
            .iter()
            .all(|&j| pair_witness(&elems[j], &elems[i], n).expect("same ring").is_some());
        if ok {
            chosen.push(i);
            walk(elems, k, n, i + 1, chosen, out);
            chosen.pop();
        }
    }
}
