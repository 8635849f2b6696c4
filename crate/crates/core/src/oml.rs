//! Finite orthomodular lattices and their partial Boolean algebras.

use crate::error::{Error, Result};
use crate::pba::{PartialBooleanAlgebra, PbaBuilder};

/// A finite ortholattice given by its order relation and orthocomplement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmlSpec {
    /// `leq[a][b]` iff `a ≤ b`.
    pub leq: Vec<Vec<bool>>,
    pub ortho: Vec<usize>,
    pub labels: Vec<String>,
}

/// A validated orthomodular lattice with its total meet and join tables.
#[derive(Clone, Debug)]
pub struct Oml {
    spec: OmlSpec,
    bottom: usize,
    top: usize,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl Oml {
    /// Checks the lattice, orthocomplement and orthomodular laws.
    pub fn new(spec: OmlSpec) -> Result<Self> {
        let n = spec.ortho.len();
        if n == 0 || spec.leq.len() != n || spec.leq.iter().any(|r| r.len() != n) {
            return Err(Error::domain("order table and orthocomplement sizes disagree"));
        }
        if !spec.labels.is_empty() && spec.labels.len() != n {
            return Err(Error::domain("label count disagrees with element count"));
        }
        let le = |a: usize, b: usize| spec.leq[a][b];
        for a in 0..n {
            if !le(a, a) {
                return Err(Error::domain(format!("order is not reflexive at {a}")));
            }
            if spec.ortho[a] >= n {
                return Err(Error::domain(format!("orthocomplement of {a} out of range")));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::domain(format!("order is not antisymmetric at ({a}, {b})")));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(Error::domain(format!("order is not transitive at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| le(b, x)))
            .ok_or_else(|| Error::domain("no least element"))?;
        let top = (0..n)
            .find(|&t| (0..n).all(|x| le(x, t)))
            .ok_or_else(|| Error::domain("no greatest element"))?;
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&x| le(x, a) && le(x, b)).collect();
                meet[a][b] = *lower
                    .iter()
                    .find(|&&x| lower.iter().all(|&y| le(y, x)))
                    .ok_or_else(|| Error::domain(format!("no meet of ({a}, {b})")))?;
                let upper: Vec<usize> = (0..n).filter(|&x| le(a, x) && le(b, x)).collect();
                join[a][b] = *upper
                    .iter()
                    .find(|&&x| upper.iter().all(|&y| le(x, y)))
                    .ok_or_else(|| Error::domain(format!("no join of ({a}, {b})")))?;
            }
        }
        let o = &spec.ortho;
        for a in 0..n {
            if o[o[a]] != a {
                return Err(Error::domain(format!("orthocomplement is not involutive at {a}")));
            }
            if meet[a][o[a]] != bottom || join[a][o[a]] != top {
                return Err(Error::domain(format!("{a} and its orthocomplement are not complements")));
            }
            for b in 0..n {
                if le(a, b) && !le(o[b], o[a]) {
                    return Err(Error::domain(format!("orthocomplement does not reverse ({a}, {b})")));
                }
                if le(a, b) && b != join[a][meet[b][o[a]]] {
                    return Err(Error::domain(format!("orthomodular law fails at ({a}, {b})")));
                }
            }
        }
        Ok(Self {
            spec,
            bottom,
            top,
            meet,
            join,
        })
    }

    pub fn len(&self) -> usize {
        self.spec.ortho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn ortho(&self, a: usize) -> usize {
        self.spec.ortho[a]
    }

    /// `a = (a ∧ b) ∨ (a ∧ b⊥)`.
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        a == self.join(self.meet(a, b), self.meet(a, self.ortho(b)))
    }

    pub fn spec(&self) -> &OmlSpec {
        &self.spec
    }
}

/// The partial Boolean algebra of an orthomodular lattice: commeasurability
/// is the commutation relation and the operations are restricted to it.
pub fn from_oml(spec: &OmlSpec) -> Result<PartialBooleanAlgebra> {
    let l = Oml::new(spec.clone())?;
    Ok(pba_of(&l))
}

/// [`from_oml`] for an already validated lattice.
pub fn pba_of(l: &Oml) -> PartialBooleanAlgebra {
    let n = l.len();
    let mut b = PbaBuilder::new(n);
    if !l.spec.labels.is_empty() {
        b.labels(l.spec.labels.clone());
    }
    b.zero(l.bottom()).one(l.top());
    for a in 0..n {
        b.neg(a, l.ortho(a));
        for c in 0..n {
            if l.commutes(a, c) {
                b.comm(a, c);
                b.meet(a, c, l.meet(a, c)).expect("lattice meet is a function");
                b.join(a, c, l.join(a, c)).expect("lattice join is a function");
            }
        }
    }
    b.build().expect("tables are well-shaped")
}

/// `MOₙ`: `0`, `1` and `n` incomparable complementary pairs `xᵢ, xᵢ'`.
/// Labels are `0`, `1`, `x1`, `x1'`, ...; element order is `0, x1, x1', ..., 1`.
pub fn mo_spec(n: usize) -> OmlSpec {
    let size = 2 * n + 2;
    let (bot, top) = (0, size - 1);
    let mut leq = vec![vec![false; size]; size];
    for x in 0..size {
        leq[x][x] = true;
        leq[bot][x] = true;
        leq[x][top] = true;
    }
    let mut ortho = vec![0; size];
    ortho[bot] = top;
    ortho[top] = bot;
    let mut labels = vec!["0".to_string()];
    for i in 0..n {
        let (x, y) = (1 + 2 * i, 2 + 2 * i);
        ortho[x] = y;
        ortho[y] = x;
        labels.push(format!("x{}", i + 1));
        labels.push(format!("x{}'", i + 1));
    }
    labels.push("1".to_string());
    OmlSpec { leq, ortho, labels }
}

/// The Boolean lattice on `k` atoms as an ortholattice; element `m` is the
/// atom bitmask `m`.
pub fn boolean_spec(k: usize) -> OmlSpec {
    let size = 1usize << k;
    let full = size - 1;
    let leq = (0..size).map(|a| (0..size).map(|b| a & !b == 0).collect()).collect();
    let ortho = (0..size).map(|a| full & !a).collect();
    OmlSpec {
        leq,
        ortho,
        labels: Vec::new(),
    }
}
