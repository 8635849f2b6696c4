//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting) over
//! bitset adjacency rows.

use crate::ElemSet;

/// Enumerates every maximal clique of the graph whose adjacency rows are
/// `adj`. Self-loops in `adj` are ignored. Cliques come back sorted by their
/// smallest members, so the output order is deterministic.
pub fn maximal_cliques(adj: &[ElemSet]) -> Vec<ElemSet> {
    let n = adj.len();
    let rows: Vec<ElemSet> = adj
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.grow(n);
            r.set(i, false);
            r
        })
        .collect();
    let mut out = Vec::new();
    let r = ElemSet::with_capacity(n);
    let mut p = ElemSet::with_capacity(n);
    p.insert_range(..);
    let x = ElemSet::with_capacity(n);
    expand(&rows, r, p, x, &mut out);
    out.sort_by(|a, b| a.ones().cmp(b.ones()));
    out
}

fn expand(rows: &[ElemSet], r: ElemSet, mut p: ElemSet, mut x: ElemSet, out: &mut Vec<ElemSet>) {
    if p.is_clear() {
        if x.is_clear() {
            out.push(r);
        }
        return;
    }
    // pivot maximizing |P ∩ N(u)| over u ∈ P ∪ X
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| p.intersection_count(&rows[u]))
        .expect("P is non-empty");
    let mut candidates = p.clone();
    candidates.difference_with(&rows[pivot]);
    for v in candidates.ones() {
        let mut r2 = r.clone();
        r2.insert(v);
        let mut p2 = p.clone();
        p2.intersect_with(&rows[v]);
        let mut x2 = x.clone();
        x2.intersect_with(&rows[v]);
        expand(rows, r2, p2, x2, out);
        p.set(v, false);
        x.insert(v);
    }
}
