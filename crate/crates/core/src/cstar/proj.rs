//! The projection partial Boolean algebra of the fragment generated by a
//! matrix seed.
//!
//! Matrix algebras have infinitely many commutative subalgebras, so
//! everything here works on the enumerated fragment: projections occurring
//! in the commutative subalgebras generated by commuting sets of the seed's
//! spectral projections, closed under complements and products of
//! commuting pairs.

use std::collections::HashSet;

use super::matrix::{CMatrix, MatrixSeed, EPS_DERIVED};
use super::spectral::gen_comm_subalg;
use crate::cliques::maximal_cliques;
use crate::error::{Error, Result};
use crate::pba::{PartialBooleanAlgebra, PbaBuilder};
use crate::poset::boolean_subalgebras;
use crate::ElemSet;

/// Default cap on fragment projections.
pub const DEFAULT_PROJECTION_LIMIT: usize = 512;

/// A projection algebra together with the matrices behind its elements.
#[derive(Clone, Debug)]
pub struct ProjAlgebra {
    pub algebra: PartialBooleanAlgebra,
    pub projections: Vec<CMatrix>,
    pub tolerance: f64,
}

/// Deduplicating store of projections, clustered by norm distance.
struct Store {
    items: Vec<CMatrix>,
    eps: f64,
}

impl Store {
    /// Inserts unless present; returns the index and whether it was new.
    fn insert(&mut self, p: CMatrix) -> Result<(usize, bool)> {
        let mut hit = None;
        for (i, q) in self.items.iter().enumerate() {
            let d = q.dist(&p);
            if d <= self.eps {
                hit.get_or_insert(i);
            } else {
                if d <= 10.0 * self.eps {
                    return Err(Error::Degenerate(format!(
                        "two projections differ by {d:.3e}, within ten times the tolerance {:.1e}",
                        self.eps
                    )));
                }
            }
        }
        if let Some(i) = hit {
            return Ok((i, false));
        }
        self.items.push(p);
        Ok((self.items.len() - 1, true))
    }
}

fn spectral_projections(seed: &MatrixSeed) -> Result<Vec<CMatrix>> {
    let mut out = Vec::new();
    for g in &seed.generators {
        let c = gen_comm_subalg(seed.dim, std::slice::from_ref(g), EPS_DERIVED)?;
        out.extend(c.minimal_projections);
    }
    Ok(out)
}

fn commute(p: &CMatrix, q: &CMatrix, eps: f64) -> bool {
    p.commutator(q).norm() <= eps
}

/// Builds `Proj` of the fragment generated by the seed.
///
/// `¬p = 1 − p` and, on commuting pairs, `p ∧ q = pq` and
/// `p ∨ q = p + q − pq`. The result is validated.
pub fn proj_functor(seed: &MatrixSeed, limit: usize) -> Result<ProjAlgebra> {
    let eps = seed.tolerance.max(EPS_DERIVED);
    let n = seed.dim;
    let id = CMatrix::identity(n);
    let mut store = Store {
        items: Vec::new(),
        eps,
    };
    store.insert(CMatrix::zeros(n))?;
    store.insert(id.clone())?;

    let basic = spectral_projections(seed)?;
    let adj: Vec<ElemSet> = basic
        .iter()
        .map(|p| crate::elem_set(basic.len(), (0..basic.len()).filter(|&j| commute(p, &basic[j], eps))))
        .collect();
    for clique in maximal_cliques(&adj) {
        let gens: Vec<CMatrix> = clique.ones().map(|i| basic[i].clone()).collect();
        let c = gen_comm_subalg(n, &gens, EPS_DERIVED)?;
        for p in c.projections()? {
            store.insert(p)?;
        }
    }
    // close under complements and products of commuting pairs
    let mut queue: Vec<usize> = (0..store.items.len()).collect();
    while let Some(i) = queue.pop() {
        let mut new_items = vec![&id - &store.items[i]];
        for j in 0..store.items.len() {
            let (p, q) = (&store.items[i], &store.items[j]);
            if commute(p, q, eps) {
                new_items.push(p * q);
            }
        }
        for p in new_items {
            let (k, fresh) = store.insert(p)?;
            if fresh {
                if store.items.len() > limit {
                    return Err(Error::SearchTooLarge {
                        what: "projection fragment",
                        limit,
                    });
                }
                queue.push(k);
            }
        }
    }

    let items = store.items;
    let m = items.len();
    let lookup = |p: &CMatrix| -> Result<usize> {
        items
            .iter()
            .position(|q| q.dist(p) <= eps)
            .ok_or_else(|| Error::domain("projection fragment is not closed"))
    };
    let mut b = PbaBuilder::new(m);
    b.labels(projection_labels(&items)).zero(0).one(1);
    for i in 0..m {
        b.neg(i, lookup(&(&id - &items[i]))?);
        for j in i..m {
            if commute(&items[i], &items[j], eps) {
                let meet = &items[i] * &items[j];
                let join = &(&items[i] + &items[j]) - &meet;
                b.comm(i, j);
                b.meet(i, j, lookup(&meet)?)?;
                b.join(i, j, lookup(&join)?)?;
            }
        }
    }
    let algebra = b.build()?;
    algebra.validate().into_result()?;
    Ok(ProjAlgebra {
        algebra,
        projections: items,
        tolerance: eps,
    })
}

fn projection_labels(items: &[CMatrix]) -> Vec<String> {
    items
        .iter()
        .enumerate()
        .map(|(i, p)| match i {
            0 => "0".to_string(),
            1 => "1".to_string(),
            _ => format!("p{}r{}", i - 1, p.trace().re.round() as i64),
        })
        .collect()
}

/// Compares the projection algebras of the commutative subalgebras in the
/// fragment with the Boolean subalgebras of [`proj_functor`].
///
/// The commutative side is enumerated numerically: starting from the
/// scalars, a subalgebra is extended by any fragment projection commuting
/// with it and regenerated with [`gen_comm_subalg`]; its projections are
/// located among the fragment's elements.
pub fn proj_c_commute_check(seed: &MatrixSeed, limit: usize) -> Result<bool> {
    let pa = proj_functor(seed, limit)?;
    let n = seed.dim;
    let eps = pa.tolerance;
    let locate = |ps: &[CMatrix]| -> Option<ElemSet> {
        let mut s = ElemSet::with_capacity(pa.projections.len());
        for p in ps {
            s.insert(pa.projections.iter().position(|q| q.dist(p) <= eps)?);
        }
        Some(s)
    };
    let scalars = gen_comm_subalg(n, &[], EPS_DERIVED)?;
    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut frontier = vec![scalars];
    while let Some(c) = frontier.pop() {
        let Some(set) = locate(&c.projections()?) else {
            return Ok(false);
        };
        if !seen.insert(set.clone()) {
            continue;
        }
        if seen.len() > limit {
            return Err(Error::SearchTooLarge {
                what: "commutative subalgebras of the fragment",
                limit,
            });
        }
        for (k, p) in pa.projections.iter().enumerate() {
            if set.contains(k) || !c.minimal_projections.iter().all(|q| commute(p, q, eps)) {
                continue;
            }
            let mut gens = c.minimal_projections.clone();
            gens.push(p.clone());
            frontier.push(gen_comm_subalg(n, &gens, EPS_DERIVED)?);
        }
    }
    let poset = boolean_subalgebras(&pa.algebra, limit)?;
    let combinatorial: HashSet<ElemSet> = poset.members.into_iter().collect();
    Ok(seen == combinatorial)
}
