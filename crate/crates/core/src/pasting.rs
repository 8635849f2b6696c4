//! Pasting Boolean blocks along shared atoms (Greechie-style input).

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::pba::{PartialBooleanAlgebra, PbaBuilder};

/// Atoms and the atom sets of the maximal Boolean blocks to paste.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockHypergraph {
    pub atoms: Vec<String>,
    /// Each block lists atom indices in ascending order.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockHypergraph {
    /// Checks every hypergraph invariant: blocks of at least two distinct
    /// atoms, no block inside another, pairwise intersections of at most one
    /// atom, every atom used.
    pub fn new(atoms: Vec<String>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let h = Self::loose(atoms, blocks)?;
        for (i, b) in h.blocks.iter().enumerate() {
            for (j, c) in h.blocks.iter().enumerate().skip(i + 1) {
                let shared = b.iter().filter(|x| c.contains(x)).count();
                if shared > 1 {
                    return Err(Error::domain(format!("blocks {i} and {j} share {shared} atoms")));
                }
            }
        }
        Ok(h)
    }

    /// Like [`BlockHypergraph::new`] but allows blocks to share several atoms.
    pub fn loose(atoms: Vec<String>, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = atoms.len();
        let mut used = vec![false; n];
        for (i, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            b.dedup();
            if b.len() < 2 {
                return Err(Error::domain(format!("block {i} has fewer than two atoms")));
            }
            if let Some(&x) = b.iter().find(|&&x| x >= n) {
                return Err(Error::domain(format!("block {i} names unknown atom {x}")));
            }
            for &x in b.iter() {
                used[x] = true;
            }
        }
        if let Some(x) = used.iter().position(|u| !u) {
            return Err(Error::domain(format!("atom {} occurs in no block", atoms[x])));
        }
        for (i, b) in blocks.iter().enumerate() {
            for (j, c) in blocks.iter().enumerate() {
                if i != j && b.iter().all(|x| c.contains(x)) && (b.len() < c.len() || i < j) {
                    return Err(Error::domain(format!("block {i} is contained in block {j}")));
                }
            }
        }
        Ok(Self { atoms, blocks })
    }

    /// Builds from blocks of atom labels; atoms are numbered by first
    /// appearance.
    pub fn from_labels<S: AsRef<str>>(blocks: &[Vec<S>]) -> Result<Self> {
        let mut atoms: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        let mut out = Vec::new();
        for b in blocks {
            let mut ids = Vec::new();
            for l in b {
                let l = l.as_ref();
                let id = *index.entry(l.to_string()).or_insert_with(|| {
                    atoms.push(l.to_string());
                    atoms.len() - 1
                });
                ids.push(id);
            }
            out.push(ids);
        }
        Self::new(atoms, out)
    }
}

pub(crate) struct UnionFind(pub(crate) Vec<usize>);

impl UnionFind {
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
        true
    }
}

/// Pastes the blocks of `h` into a partial Boolean algebra.
///
/// Elements are the classes of pairs (block, proper nonempty atom subset)
/// under the least equivalence that identifies equal atom sets and is closed
/// under complementation within blocks, plus a global 0 and 1. The result is
/// validated; an invalid pasting is rejected with the validation witnesses.
pub fn from_blocks(h: &BlockHypergraph) -> Result<PartialBooleanAlgebra> {
    // node = (block, mask over the block's local atom positions)
    let mut nodes: Vec<(usize, u64)> = Vec::new();
    let mut node_of: Vec<HashMap<u64, usize>> = Vec::new();
    for (bi, b) in h.blocks.iter().enumerate() {
        if b.len() >= 32 {
            return Err(Error::domain(format!("block {bi} has too many atoms")));
        }
        let full = (1u64 << b.len()) - 1;
        let mut local = HashMap::new();
        for m in 1..full {
            local.insert(m, nodes.len());
            nodes.push((bi, m));
        }
        node_of.push(local);
    }
    let global = |bi: usize, m: u64| -> Vec<usize> {
        let b = &h.blocks[bi];
        (0..b.len()).filter(|&i| m >> i & 1 == 1).map(|i| b[i]).collect()
    };
    let complement = |(bi, m): (usize, u64)| -> (usize, u64) { (bi, ((1u64 << h.blocks[bi].len()) - 1) & !m) };

    let mut uf = UnionFind((0..nodes.len()).collect());
    let mut by_atoms: HashMap<Vec<usize>, usize> = HashMap::new();
    for (id, &(bi, m)) in nodes.iter().enumerate() {
        match by_atoms.entry(global(bi, m)) {
            std::collections::hash_map::Entry::Occupied(e) => {
                uf.union(*e.get(), id);
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(id);
            }
        }
    }
    loop {
        let mut changed = false;
        let mut first_in_class: HashMap<usize, usize> = HashMap::new();
        for id in 0..nodes.len() {
            let r = uf.find(id);
            let first = *first_in_class.entry(r).or_insert(id);
            if first != id {
                let (cb, cm) = complement(nodes[first]);
                let (db, dm) = complement(nodes[id]);
                changed |= uf.union(node_of[cb][&cm], node_of[db][&dm]);
            }
        }
        if !changed {
            break;
        }
    }

    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for id in 0..nodes.len() {
        classes.entry(uf.find(id)).or_default().push(id);
    }
    // label each class by its smallest representative
    let label_of = |bi: usize, m: u64| -> String {
        global(bi, m).iter().map(|&a| h.atoms[a].as_str()).collect::<Vec<_>>().join("+")
    };
    let mut named: Vec<(usize, String, Vec<usize>)> = classes
        .into_values()
        .map(|members| {
            let singleton = members.iter().find(|&&id| nodes[id].1.count_ones() == 1);
            let co_singleton = members.iter().find(|&&id| complement(nodes[id]).1.count_ones() == 1);
            let (rank, label) = match (singleton, co_singleton) {
                (Some(&id), _) => (1, label_of(nodes[id].0, nodes[id].1)),
                (None, Some(&id)) => {
                    let (cb, cm) = complement(nodes[id]);
                    (2, format!("~{}", label_of(cb, cm)))
                }
                _ => {
                    let &id = members
                        .iter()
                        .min_by_key(|&&id| (nodes[id].1.count_ones(), label_of(nodes[id].0, nodes[id].1)))
                        .expect("class is non-empty");
                    (3, label_of(nodes[id].0, nodes[id].1))
                }
            };
            (rank, label, members)
        })
        .collect();
    named.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let n = named.len() + 2;
    let (zero, one) = (0, n - 1);
    let mut elem_of_node = vec![0; nodes.len()];
    for (k, (_, _, members)) in named.iter().enumerate() {
        for &id in members {
            elem_of_node[id] = k + 1;
        }
    }
    let mut labels = vec!["0".to_string()];
    labels.extend(named.iter().map(|(_, l, _)| l.clone()));
    labels.push("1".to_string());

    // per block: local mask -> element, rejecting blocks whose elements merge
    let mut block_elems: Vec<HashMap<u64, usize>> = Vec::new();
    for (bi, b) in h.blocks.iter().enumerate() {
        let full = (1u64 << b.len()) - 1;
        let mut map = HashMap::new();
        let mut seen: HashMap<usize, u64> = HashMap::new();
        map.insert(0, zero);
        map.insert(full, one);
        for m in 1..full {
            let e = elem_of_node[node_of[bi][&m]];
            if let Some(prev) = seen.insert(e, m) {
                return Err(Error::domain(format!(
                    "pasting identifies {} and {} inside block {bi}",
                    label_of(bi, prev),
                    label_of(bi, m)
                )));
            }
            map.insert(m, e);
        }
        block_elems.push(map);
    }

    let mut builder = PbaBuilder::new(n);
    builder.labels(labels.clone()).zero(zero).one(one).complement(zero, one);
    for (bi, map) in block_elems.iter().enumerate() {
        let full = (1u64 << h.blocks[bi].len()) - 1;
        for (&m, &x) in map {
            builder.neg(x, map[&(full & !m)]);
            for (&k, &y) in map {
                builder.comm(x, y);
                let conflict = |op: &str| {
                    Error::domain(format!(
                        "pasting gives two values for {op}({}, {}) (block {bi})",
                        labels[x], labels[y]
                    ))
                };
                builder.meet(x, y, map[&(m & k)]).map_err(|_| conflict("meet"))?;
                builder.join(x, y, map[&(m | k)]).map_err(|_| conflict("join"))?;
            }
        }
    }
    let a = builder.build()?;
    a.validate().into_result()?;
    Ok(a)
}

/// The blocks of a valid algebra read back as a hypergraph over its atoms of
/// maximal cliques. Atoms are labelled by element label.
pub fn blocks_of(a: &PartialBooleanAlgebra) -> Result<BlockHypergraph> {
    let mut atom_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut blocks = Vec::new();
    for clique in a.maximal_cliques() {
        let view = a.boolean_view(&clique).map_err(Error::domain)?;
        if view.atoms.len() < 2 {
            continue;
        }
        blocks.push(view.atoms.clone());
        for &x in &view.atoms {
            atom_ids.insert(x, 0);
        }
    }
    let order: Vec<usize> = atom_ids.keys().copied().collect();
    for (i, x) in order.iter().enumerate() {
        atom_ids.insert(*x, i);
    }
    let blocks = blocks
        .into_iter()
        .map(|b| b.into_iter().map(|x| atom_ids[&x]).collect())
        .collect();
    BlockHypergraph::loose(order.iter().map(|&x| a.label(x).to_string()).collect(), blocks)
}
