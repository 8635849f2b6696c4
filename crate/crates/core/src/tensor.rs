//! The tensor product `A ⊗ B`, the colimit of the Boolean coproducts `C + D`
//! over `C ∈ C(A)`, `D ∈ C(B)`, and factorization of cotuples through it.
//!
//! The colimit is built as an amalgam: the disjoint union of all the `C + D`
//! modulo the equivalence generated by the diagram inclusions, closed so that
//! the operations are well defined on classes. Two classes are commeasurable
//! when they meet a common `C + D`. The result is validated.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::PbaMorphism;
use crate::pasting::UnionFind;
use crate::pba::{PartialBooleanAlgebra, PbaBuilder};
use crate::stone::Spectra;

/// Largest number of atom pairs in one `C + D`.
pub const MAX_PAIR_ATOMS: usize = 15;

#[derive(Clone, Debug)]
struct Node {
    c: usize,
    d: usize,
    k: usize,
    l: usize,
    base: usize,
}

impl Node {
    fn size(&self) -> usize {
        1 << (self.k * self.l)
    }

    fn full(&self) -> usize {
        self.size() - 1
    }
}

/// `A ⊗ B` with its canonical morphisms and the data needed to map out of it.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub algebra: PartialBooleanAlgebra,
    pub kappa_a: PbaMorphism,
    pub kappa_b: PbaMorphism,
    sp_a: Spectra,
    sp_b: Spectra,
    nodes: Vec<Node>,
    class_of: Vec<usize>,
}

fn atom_images(sp: &Spectra, lower: usize, upper: usize) -> Vec<Vec<usize>> {
    let map = sp.restriction_map(upper, lower).expect("comparable members");
    let mut out = vec![Vec::new(); sp.points[lower].len()];
    for (q, &p) in map.iter().enumerate() {
        out[p].push(q);
    }
    out
}

/// Image masks of every element of `from` in `to` along the inclusion, given
/// the images of each atom pair.
fn mask_images(pair_images: &[usize], size: usize) -> Vec<usize> {
    let mut img = vec![0usize; size];
    for m in 1..size {
        img[m] = img[m & (m - 1)] | pair_images[m.trailing_zeros() as usize];
    }
    img
}

impl Tensor {
    pub fn new(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> Result<Self> {
        let sp_a = Spectra::of(a)?;
        let sp_b = Spectra::of(b)?;
        let mut nodes = Vec::new();
        let mut node_at = HashMap::new();
        let mut total = 0;
        for c in 0..sp_a.poset.len() {
            for d in 0..sp_b.poset.len() {
                let (k, l) = (sp_a.points[c].len(), sp_b.points[d].len());
                if k * l > MAX_PAIR_ATOMS {
                    return Err(Error::SearchTooLarge {
                        what: "atom pairs in a Boolean coproduct",
                        limit: MAX_PAIR_ATOMS,
                    });
                }
                node_at.insert((c, d), nodes.len());
                let node = Node { c, d, k, l, base: total };
                total += node.size();
                nodes.push(node);
            }
        }
        let mut uf = UnionFind((0..total).collect());

        // identify along the covering inclusions of either factor
        let mut edges = Vec::new();
        for (lo, hi) in sp_a.poset.hasse_edges() {
            for d in 0..sp_b.poset.len() {
                edges.push((node_at[&(lo, d)], node_at[&(hi, d)]));
            }
        }
        for (lo, hi) in sp_b.poset.hasse_edges() {
            for c in 0..sp_a.poset.len() {
                edges.push((node_at[&(c, lo)], node_at[&(c, hi)]));
            }
        }
        for (from, to) in edges {
            let (n, m) = (&nodes[from], &nodes[to]);
            let up_c = if n.c == m.c {
                (0..n.k).map(|i| vec![i]).collect()
            } else {
                atom_images(&sp_a, n.c, m.c)
            };
            let up_d = if n.d == m.d {
                (0..n.l).map(|j| vec![j]).collect()
            } else {
                atom_images(&sp_b, n.d, m.d)
            };
            let mut pair_images = vec![0usize; n.k * n.l];
            for i in 0..n.k {
                for j in 0..n.l {
                    for &i2 in &up_c[i] {
                        for &j2 in &up_d[j] {
                            pair_images[i * n.l + j] |= 1 << (i2 * m.l + j2);
                        }
                    }
                }
            }
            for (x, y) in mask_images(&pair_images, n.size()).into_iter().enumerate() {
                uf.union(n.base + x, m.base + y);
            }
        }

        // close under well-definedness of the operations on classes
        loop {
            let mut changed = false;
            let mut table: HashMap<(u8, usize, usize), usize> = HashMap::new();
            for n in &nodes {
                for x in 0..n.size() {
                    let rx = uf.find(n.base + x);
                    let nx = n.base + (n.full() ^ x);
                    match table.get(&(0, rx, rx)) {
                        Some(&r) => changed |= uf.union(r, nx),
                        None => {
                            let r = uf.find(nx);
                            table.insert((0, rx, rx), r);
                        }
                    }
                    for y in x + 1..n.size() {
                        let ry = uf.find(n.base + y);
                        let key = (rx.min(ry), rx.max(ry));
                        for (op, res) in [(1u8, x & y), (2u8, x | y)] {
                            let item = n.base + res;
                            match table.get(&(op, key.0, key.1)) {
                                Some(&r) => changed |= uf.union(r, item),
                                None => {
                                    let r = uf.find(item);
                                    table.insert((op, key.0, key.1), r);
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        // classes, ordered by first item, with 1 last
        let bottom = &nodes[node_at[&(0, 0)]];
        let (zero_root, one_root) = (uf.find(bottom.base), uf.find(bottom.base + bottom.full()));
        let mut class_index: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        for item in 0..total {
            let r = uf.find(item);
            if r != one_root || zero_root == one_root {
                class_index.entry(r).or_insert_with(|| {
                    reps.push(item);
                    reps.len() - 1
                });
            }
        }
        if zero_root != one_root {
            class_index.insert(one_root, reps.len());
            reps.push(bottom.base + bottom.full());
        }
        let class_of: Vec<usize> = (0..total).map(|item| class_index[&uf.find(item)]).collect();
        let count = reps.len();

        let node_of_item = |item: usize| -> (usize, usize) {
            let pos = nodes.partition_point(|n| n.base <= item) - 1;
            (pos, item - nodes[pos].base)
        };
        let labels = Self::labels(a, b, &sp_a, &sp_b, &nodes, &reps, node_of_item);

        let mut builder = PbaBuilder::new(count);
        builder
            .labels(labels)
            .zero(class_of[bottom.base])
            .one(class_of[bottom.base + bottom.full()]);
        for n in &nodes {
            for x in 0..n.size() {
                let cx = class_of[n.base + x];
                builder.neg(cx, class_of[n.base + (n.full() ^ x)]);
                for y in x..n.size() {
                    let cy = class_of[n.base + y];
                    builder.comm(cx, cy);
                    builder.meet(cx, cy, class_of[n.base + (x & y)])?;
                    builder.join(cx, cy, class_of[n.base + (x | y)])?;
                }
            }
        }
        let algebra = builder.build()?;
        algebra.validate().into_result()?;

        let kappa = |sp: &Spectra, x: usize, a: &PartialBooleanAlgebra, first: bool| -> usize {
            let i = sp.poset.principal(a, x);
            let below: Vec<usize> = (0..sp.points[i].len()).filter(|&p| a.leq(sp.points[i][p], x)).collect();
            let (key, stride) = if first { ((i, 0), 1) } else { ((0, i), 0) };
            let n = &nodes[node_at[&key]];
            let mask = below.iter().fold(0usize, |m, &p| {
                if stride == 1 {
                    // C = ⟨x⟩, D = bottom of B with `l` atoms
                    m | (((1 << n.l) - 1) << (p * n.l))
                } else {
                    (0..n.k).fold(m, |m, r| m | (1 << (r * n.l + p)))
                }
            });
            class_of[n.base + mask]
        };
        let kappa_a = PbaMorphism::new((0..a.len()).map(|x| kappa(&sp_a, x, a, true)).collect());
        let kappa_b = PbaMorphism::new((0..b.len()).map(|y| kappa(&sp_b, y, b, false)).collect());

        Ok(Self {
            algebra,
            kappa_a,
            kappa_b,
            sp_a,
            sp_b,
            nodes,
            class_of,
        })
    }

    /// `x*1` for elements of `A`, `1*y` for elements of `B`, and otherwise
    /// the join of atom pairs `p*q`.
    fn labels(
        a: &PartialBooleanAlgebra,
        b: &PartialBooleanAlgebra,
        sp_a: &Spectra,
        sp_b: &Spectra,
        nodes: &[Node],
        reps: &[usize],
        node_of_item: impl Fn(usize) -> (usize, usize),
    ) -> Vec<String> {
        let count = reps.len();
        let mut seen: HashMap<String, usize> = HashMap::new();
        reps.iter()
            .enumerate()
            .map(|(idx, &item)| {
                let (ni, mask) = node_of_item(item);
                let n = &nodes[ni];
                let label = if idx == 0 {
                    "0".to_string()
                } else if idx + 1 == count {
                    "1".to_string()
                } else {
                    let row = |i: usize| (mask >> (i * n.l)) & ((1 << n.l) - 1);
                    let col = |j: usize| (0..n.k).all(|i| mask >> (i * n.l + j) & 1 == 1);
                    let pure_a = (0..n.k).all(|i| row(i) == 0 || row(i) == (1 << n.l) - 1);
                    let pure_b = (0..n.k).all(|i| row(i) == row(0));
                    let join_of = |pts: &[usize], alg: &PartialBooleanAlgebra, chosen: &dyn Fn(usize) -> bool| {
                        let items: Vec<usize> = (0..pts.len()).filter(|&p| chosen(p)).map(|p| pts[p]).collect();
                        alg.big_join_ordered(&items).map(|x| alg.label(x).to_string()).unwrap_or_default()
                    };
                    if pure_a {
                        format!("{}*1", join_of(&sp_a.points[n.c], a, &|i| row(i) != 0))
                    } else if pure_b {
                        format!("1*{}", join_of(&sp_b.points[n.d], b, &col))
                    } else {
                        (0..n.k * n.l)
                            .filter(|&t| mask >> t & 1 == 1)
                            .map(|t| {
                                let (i, j) = (t / n.l, t % n.l);
                                format!("{}*{}", a.label(sp_a.points[n.c][i]), b.label(sp_b.points[n.d][j]))
                            })
                            .collect::<Vec<_>>()
                            .join("+")
                    }
                };
                let k = seen.entry(label.clone()).or_insert(0);
                *k += 1;
                if *k == 1 {
                    label
                } else {
                    format!("{label}#{k}")
                }
            })
            .collect()
    }
}

/// `A ⊗ B` with `κ_A`, `κ_B`.
pub fn tensor(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> Result<Tensor> {
    Tensor::new(a, b)
}

/// Whether `[f, g] : A + B → Z` factors through `A ⊗ B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Factorization {
    /// The unique `h : A ⊗ B → Z` with `h ∘ κ_A = f` and `h ∘ κ_B = g`.
    Through(PbaMorphism),
    /// `f(a)` and `g(b)` are not commeasurable.
    Refused { a: usize, b: usize },
}

/// Factors `[f, g]` through `t` when every `f(a)` is commeasurable with
/// every `g(b)`, sending an element of `C + D` to `⋁ f(c) ∧ g(d)` over its
/// atom pairs; otherwise returns the first non-commeasurable pair.
pub fn tensor_factorization(
    t: &Tensor,
    a: &PartialBooleanAlgebra,
    b: &PartialBooleanAlgebra,
    z: &PartialBooleanAlgebra,
    f: &PbaMorphism,
    g: &PbaMorphism,
) -> Result<Factorization> {
    f.check(a, z).map_err(|v| Error::domain(format!("f is not a morphism: {v}")))?;
    g.check(b, z).map_err(|v| Error::domain(format!("g is not a morphism: {v}")))?;
    for x in 0..a.len() {
        for y in 0..b.len() {
            if !z.comm(f.apply(x), g.apply(y)) {
                return Ok(Factorization::Refused { a: x, b: y });
            }
        }
    }
    let mut h = vec![usize::MAX; t.algebra.len()];
    for n in &t.nodes {
        let pa = &t.sp_a.points[n.c];
        let pb = &t.sp_b.points[n.d];
        let pair_value: Vec<usize> = (0..n.k * n.l)
            .map(|p| z.meet(f.apply(pa[p / n.l]), g.apply(pb[p % n.l])))
            .collect();
        for mask in 0..n.size() {
            let terms: Vec<usize> = (0..n.k * n.l).filter(|&p| mask >> p & 1 == 1).map(|p| pair_value[p]).collect();
            let v = z.big_join_ordered(&terms)?;
            let cls = t.class_of[n.base + mask];
            match h[cls] {
                usize::MAX => h[cls] = v,
                w if w != v => {
                    return Err(Error::domain(format!(
                        "cotuple is not constant on class {}",
                        t.algebra.label(cls)
                    )))
                }
                _ => {}
            }
        }
    }
    let h = PbaMorphism::new(h);
    h.check(&t.algebra, z)
        .map_err(|v| Error::domain(format!("induced map is not a morphism: {v}")))?;
    if t.kappa_a.then(&h) != *f || t.kappa_b.then(&h) != *g {
        return Err(Error::domain("induced map does not restrict to f and g"));
    }
    Ok(Factorization::Through(h))
}
