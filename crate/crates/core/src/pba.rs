//! The finite partial Boolean algebra type, its validator, and the
//! element-level operations: generated subalgebras, joins of commeasurable
//! sets, and restriction to subalgebras.
//!
//! The zero element is commeasurable with everything: the extension clause
//! applied to `{a}` yields a pairwise-commeasurable Boolean `T ∋ a`, and `T`
//! contains `0` and `1`. The validator therefore checks it as an invariant
//! rather than taking it as an axiom of its own.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::cliques::maximal_cliques;
use crate::error::{Error, Result};
use crate::{elem_set, ElemSet};

/// Sentinel for an undefined entry of a partial operation table.
pub const UNDEF: u32 = u32::MAX;

/// A finite partial Boolean algebra over dense element indices `0..n`.
///
/// Values are immutable after construction. Tables are only shape-checked
/// on construction; [`PartialBooleanAlgebra::validate`] checks the algebraic
/// invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBooleanAlgebra {
    n: usize,
    zero: usize,
    one: usize,
    neg: Vec<usize>,
    comm: Vec<ElemSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    labels: Vec<String>,
}

/// Raw tables, used to build algebras that may not satisfy the invariants
/// (for example to exercise the validator).
#[derive(Clone, Debug)]
pub struct RawTables {
    pub zero: usize,
    pub one: usize,
    pub neg: Vec<usize>,
    /// Row-major `n × n` relation.
    pub comm: Vec<Vec<bool>>,
    /// Row-major `n × n`, `None` where undefined.
    pub meet: Vec<Vec<Option<usize>>>,
    pub join: Vec<Vec<Option<usize>>>,
    pub labels: Vec<String>,
}

impl PartialBooleanAlgebra {
    /// Builds an algebra from raw tables, checking only shapes and index
    /// ranges.
    pub fn from_tables(t: RawTables) -> Result<Self> {
        let n = t.neg.len();
        if n == 0 {
            return Err(structure("neg", 0, "an algebra needs at least one element"));
        }
        if t.zero >= n {
            return Err(structure("zero", t.zero, "index out of range"));
        }
        if t.one >= n {
            return Err(structure("one", t.one, "index out of range"));
        }
        for (i, &v) in t.neg.iter().enumerate() {
            if v >= n {
                return Err(structure("neg", i, format!("value {v} out of range")));
            }
        }
        let labels = if t.labels.is_empty() {
            default_labels(n, t.zero, t.one)
        } else if t.labels.len() != n {
            return Err(structure("labels", t.labels.len(), format!("expected {n} labels")));
        } else {
            t.labels
        };
        if t.comm.len() != n {
            return Err(structure("comm", t.comm.len(), format!("expected {n} rows")));
        }
        let mut comm = vec![ElemSet::with_capacity(n); n];
        for (i, row) in t.comm.iter().enumerate() {
            if row.len() != n {
                return Err(structure("comm", i, format!("row has {} entries", row.len())));
            }
            for (j, &c) in row.iter().enumerate() {
                comm[i].set(j, c);
            }
        }
        let meet = flatten_op("meet", &t.meet, n)?;
        let join = flatten_op("join", &t.join, n)?;
        Ok(Self {
            n,
            zero: t.zero,
            one: t.one,
            neg: t.neg,
            comm,
            meet,
            join,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn comm(&self, a: usize, b: usize) -> bool {
        self.comm[a].contains(b)
    }

    /// The commeasurability row of `a`.
    pub fn comm_row(&self, a: usize) -> &ElemSet {
        &self.comm[a]
    }

    pub fn comm_rows(&self) -> &[ElemSet] {
        &self.comm
    }

    /// Meet of a commeasurable pair.
    ///
    /// # Panics
    ///
    /// Reading an undefined entry is a contract violation.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.try_meet(a, b)
            .unwrap_or_else(|| panic!("meet undefined on ({}, {})", self.labels[a], self.labels[b]))
    }

    /// Join of a commeasurable pair; panics on an undefined entry.
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.try_join(a, b)
            .unwrap_or_else(|| panic!("join undefined on ({}, {})", self.labels[a], self.labels[b]))
    }

    pub fn try_meet(&self, a: usize, b: usize) -> Option<usize> {
        let v = self.meet[a * self.n + b];
        (v != UNDEF).then_some(v as usize)
    }

    pub fn try_join(&self, a: usize, b: usize) -> Option<usize> {
        let v = self.join[a * self.n + b];
        (v != UNDEF).then_some(v as usize)
    }

    /// `a ≤ b`, meaningful for commeasurable pairs; false otherwise.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.comm(a, b) && self.try_meet(a, b) == Some(a)
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Looks up several labels at once; panics on an unknown label. Intended
    /// for tests and fixed corpus code.
    pub fn indices(&self, labels: &[&str]) -> Vec<usize> {
        labels
            .iter()
            .map(|l| self.index_of(l).unwrap_or_else(|| panic!("no element labelled {l}")))
            .collect()
    }

    /// Returns a copy with new labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(structure("labels", labels.len(), format!("expected {} labels", self.n)));
        }
        self.labels = labels;
        Ok(self)
    }

    /// The empty set sized for this algebra.
    pub fn empty_set(&self) -> ElemSet {
        ElemSet::with_capacity(self.n)
    }

    pub fn full_set(&self) -> ElemSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_of(&self, items: impl IntoIterator<Item = usize>) -> ElemSet {
        elem_set(self.n, items)
    }

    /// True when the commeasurability relation is total.
    pub fn is_total(&self) -> bool {
        self.comm.iter().all(|row| row.count_ones(..) == self.n)
    }

    /// A total algebra passing validation is a Boolean algebra.
    pub fn is_boolean(&self) -> bool {
        self.is_total() && self.validate().is_pass()
    }

    /// Maximal pairwise-commeasurable sets (the blocks of a valid algebra).
    pub fn maximal_cliques(&self) -> Vec<ElemSet> {
        maximal_cliques(&self.comm)
    }

    /// True when every pair drawn from `set` is commeasurable; otherwise the
    /// first offending pair.
    pub fn pairwise_comm(&self, set: &ElemSet) -> std::result::Result<(), (usize, usize)> {
        for a in set.ones() {
            let mut missing = set.clone();
            missing.difference_with(&self.comm[a]);
            if let Some(b) = missing.ones().next() {
                return Err((a.min(b), a.max(b)));
            }
        }
        Ok(())
    }

    /// Checks every invariant of a partial Boolean algebra and reports each
    /// violation with its witnesses.
    ///
    /// The extension clause is checked on maximal cliques of the
    /// commeasurability relation: every pairwise-commeasurable set lies in
    /// one, so it suffices that each maximal clique is closed under the
    /// operations and Boolean.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.n;
        if self.neg[self.zero] != self.one {
            v.push(Violation::NegZeroNotOne);
        }
        for a in 0..n {
            if self.neg[self.neg[a]] != a {
                v.push(Violation::NegNotInvolutive { a });
            }
            if !self.comm(a, a) {
                v.push(Violation::CommNotReflexive { a });
            }
            if !self.comm(self.zero, a) || !self.comm(a, self.zero) {
                v.push(Violation::ZeroNotCommeasurable { a });
            }
            if !self.comm(self.one, a) || !self.comm(a, self.one) {
                v.push(Violation::OneNotCommeasurable { a });
            }
            if !self.comm(a, self.neg[a]) {
                v.push(Violation::NegNotCommeasurable { a });
            }
        }
        let mut symmetric = true;
        for a in 0..n {
            for b in 0..n {
                let c = self.comm(a, b);
                if b > a && c != self.comm(b, a) {
                    symmetric = false;
                    v.push(Violation::CommNotSymmetric { a, b });
                }
                for (op, table) in [(Op::Meet, &self.meet), (Op::Join, &self.join)] {
                    let defined = table[a * n + b] != UNDEF;
                    if defined != c {
                        v.push(Violation::DefinednessMismatch { op, a, b, defined });
                    } else if defined && b > a && table[a * n + b] != table[b * n + a] {
                        v.push(Violation::NotCommutative { op, a, b });
                    }
                }
            }
        }
        // Clique checks rely on a symmetric adjacency and defined tables.
        if symmetric && v.is_empty() {
            for clique in self.maximal_cliques() {
                if let Some(w) = self.clique_violation(&clique) {
                    v.push(w);
                }
            }
        }
        ValidationReport { violations: v }
    }

    fn clique_violation(&self, clique: &ElemSet) -> Option<Violation> {
        let members = crate::elems(clique);
        for &a in &members {
            if !clique.contains(self.neg[a]) {
                return Some(Violation::CliqueNotClosed {
                    clique: members,
                    op: Op::Neg,
                    a,
                    b: a,
                    result: self.neg[a],
                });
            }
            for &b in &members {
                for op in [Op::Meet, Op::Join] {
                    let r = match op {
                        Op::Meet => self.meet(a, b),
                        _ => self.join(a, b),
                    };
                    if !clique.contains(r) {
                        return Some(Violation::CliqueNotClosed {
                            clique: members,
                            op,
                            a,
                            b,
                            result: r,
                        });
                    }
                }
            }
        }
        self.boolean_view(clique)
            .err()
            .map(|reason| Violation::CliqueNotBoolean {
                clique: members,
                reason,
            })
    }

    /// Certifies that a pairwise-commeasurable `set` is an operation-closed
    /// Boolean algebra by exhibiting an isomorphism onto the powerset of its
    /// atoms, and returns that representation.
    pub fn boolean_view(&self, set: &ElemSet) -> std::result::Result<BooleanView, String> {
        let members = crate::elems(set);
        if let Err((a, b)) = self.pairwise_comm(set) {
            return Err(format!("{} and {} are not commeasurable", self.label(a), self.label(b)));
        }
        if !set.contains(self.zero) || !set.contains(self.one) {
            return Err("missing 0 or 1".into());
        }
        for &a in &members {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return Err(format!("{} is not idempotent", self.label(a)));
            }
        }
        let atoms: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&a| a != self.zero)
            .filter(|&a| {
                members
                    .iter()
                    .all(|&b| b == a || b == self.zero || !self.leq(b, a))
            })
            .collect();
        if atoms.len() >= 64 || members.len() != 1usize << atoms.len() {
            return Err(format!(
                "{} elements cannot be the powerset of {} atoms",
                members.len(),
                atoms.len()
            ));
        }
        let full: u64 = if atoms.is_empty() { 0 } else { u64::MAX >> (64 - atoms.len()) };
        let mut mask = HashMap::with_capacity(members.len());
        let mut seen = std::collections::HashSet::with_capacity(members.len());
        for &a in &members {
            let m = atoms
                .iter()
                .enumerate()
                .filter(|&(_, &p)| self.leq(p, a))
                .fold(0u64, |m, (i, _)| m | (1 << i));
            if !seen.insert(m) {
                return Err(format!("{} shares its atom set with another element", self.label(a)));
            }
            mask.insert(a, m);
        }
        if mask[&self.zero] != 0 || mask[&self.one] != full {
            return Err("0 or 1 does not map to the empty or full atom set".into());
        }
        let of = |x: usize| mask.get(&x).copied().ok_or_else(|| format!("not closed at {}", self.label(x)));
        for &a in &members {
            if of(self.neg[a])? != full & !mask[&a] {
                return Err(format!("complement of {} is not its atom complement", self.label(a)));
            }
            for &b in &members {
                if of(self.meet(a, b))? != mask[&a] & mask[&b] {
                    return Err(format!("meet of {} and {} is not intersection", self.label(a), self.label(b)));
                }
                if of(self.join(a, b))? != mask[&a] | mask[&b] {
                    return Err(format!("join of {} and {} is not union", self.label(a), self.label(b)));
                }
            }
        }
        let by_mask = mask.iter().map(|(&e, &m)| (m, e)).collect();
        Ok(BooleanView { atoms, mask, by_mask })
    }

    /// The least operation-closed superset of `s ∪ {0, 1}`.
    pub fn generated_subalgebra(&self, s: &ElemSet) -> Result<ElemSet> {
        if let Err((a, b)) = self.pairwise_comm(s) {
            return Err(Error::NotCommeasurable(a, b));
        }
        let mut set = self.empty_set();
        let mut order = Vec::new();
        let push = |x: usize, set: &mut ElemSet, order: &mut Vec<usize>| {
            if !set.put(x) {
                order.push(x);
            }
        };
        push(self.zero, &mut set, &mut order);
        push(self.one, &mut set, &mut order);
        for x in s.ones() {
            push(x, &mut set, &mut order);
        }
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            push(self.neg[x], &mut set, &mut order);
            let mut j = 0;
            while j <= i {
                let y = order[j];
                if !self.comm(x, y) {
                    return Err(Error::NotCommeasurable(x.min(y), x.max(y)));
                }
                let m = self.try_meet(x, y).ok_or_else(|| undefined("meet", x, y))?;
                let jn = self.try_join(x, y).ok_or_else(|| undefined("join", x, y))?;
                push(m, &mut set, &mut order);
                push(jn, &mut set, &mut order);
                j += 1;
            }
            i += 1;
        }
        Ok(set)
    }

    /// `⟨a⟩`, the subalgebra generated by one element.
    pub fn principal(&self, a: usize) -> ElemSet {
        self.generated_subalgebra(&self.set_of([a]))
            .expect("a single element is pairwise commeasurable")
    }

    /// Join of a pairwise-commeasurable set, folded in ascending index order.
    pub fn big_join(&self, s: &ElemSet) -> Result<usize> {
        self.big_join_ordered(&crate::elems(s))
    }

    /// Join of the listed elements folded in the given order.
    pub fn big_join_ordered(&self, items: &[usize]) -> Result<usize> {
        let set = self.set_of(items.iter().copied());
        if let Err((a, b)) = self.pairwise_comm(&set) {
            return Err(Error::NotCommeasurable(a, b));
        }
        items.iter().try_fold(self.zero, |acc, &x| {
            if !self.comm(acc, x) {
                return Err(Error::NotCommeasurable(acc.min(x), acc.max(x)));
            }
            self.try_join(acc, x).ok_or_else(|| undefined("join", acc, x))
        })
    }

    /// The sub-algebra carried by `set`, with inherited commeasurability and
    /// operations, together with the embedding of its indices into `self`.
    /// `set` must contain `0`, `1` and be closed under the operations on its
    /// commeasurable pairs.
    pub fn restrict(&self, set: &ElemSet) -> Result<(PartialBooleanAlgebra, Vec<usize>)> {
        let emb = crate::elems(set);
        let mut pos = vec![usize::MAX; self.n];
        for (i, &e) in emb.iter().enumerate() {
            pos[e] = i;
        }
        let at = |x: usize, what: &'static str| -> Result<usize> {
            match pos[x] {
                usize::MAX => Err(structure(what, x, "result leaves the subset")),
                p => Ok(p),
            }
        };
        let k = emb.len();
        let zero = at(self.zero, "zero")?;
        let one = at(self.one, "one")?;
        let mut neg = Vec::with_capacity(k);
        for &e in &emb {
            neg.push(at(self.neg[e], "neg")?);
        }
        let mut comm = vec![ElemSet::with_capacity(k); k];
        let mut meet = vec![UNDEF; k * k];
        let mut join = vec![UNDEF; k * k];
        for (i, &a) in emb.iter().enumerate() {
            for (j, &b) in emb.iter().enumerate() {
                if self.comm(a, b) {
                    comm[i].insert(j);
                    if let Some(m) = self.try_meet(a, b) {
                        meet[i * k + j] = at(m, "meet")? as u32;
                    }
                    if let Some(m) = self.try_join(a, b) {
                        join[i * k + j] = at(m, "join")? as u32;
                    }
                }
            }
        }
        let labels = emb.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((
            Self {
                n: k,
                zero,
                one,
                neg,
                comm,
                meet,
                join,
                labels,
            },
            emb,
        ))
    }

    /// Row-major snapshot of the tables, the inverse of
    /// [`PartialBooleanAlgebra::from_tables`].
    pub fn to_tables(&self) -> RawTables {
        let n = self.n;
        let op = |t: &Vec<u32>| -> Vec<Vec<Option<usize>>> {
            (0..n)
                .map(|a| (0..n).map(|b| (t[a * n + b] != UNDEF).then(|| t[a * n + b] as usize)).collect())
                .collect()
        };
        RawTables {
            zero: self.zero,
            one: self.one,
            neg: self.neg.clone(),
            comm: (0..n).map(|a| (0..n).map(|b| self.comm(a, b)).collect()).collect(),
            meet: op(&self.meet),
            join: op(&self.join),
            labels: self.labels.clone(),
        }
    }
}

/// A Boolean subset of an algebra presented as the powerset of its atoms.
#[derive(Clone, Debug)]
pub struct BooleanView {
    /// Atoms in ascending element order.
    pub atoms: Vec<usize>,
    /// Element ↦ bitmask of the atoms below it.
    pub mask: HashMap<usize, u64>,
    pub by_mask: HashMap<u64, usize>,
}

impl BooleanView {
    pub fn element(&self, mask: u64) -> usize {
        self.by_mask[&mask]
    }
}

/// Incremental construction of a well-shaped algebra. Commeasurability and
/// operation entries are recorded symmetrically.
#[derive(Clone, Debug)]
pub struct PbaBuilder {
    n: usize,
    zero: Option<usize>,
    one: Option<usize>,
    neg: Vec<Option<usize>>,
    comm: Vec<Vec<bool>>,
    meet: Vec<Vec<Option<usize>>>,
    join: Vec<Vec<Option<usize>>>,
    labels: Vec<String>,
}

impl PbaBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            zero: None,
            one: None,
            neg: vec![None; n],
            comm: vec![vec![false; n]; n],
            meet: vec![vec![None; n]; n],
            join: vec![vec![None; n]; n],
            labels: Vec::new(),
        }
    }

    pub fn labels<S: Into<String>>(&mut self, labels: impl IntoIterator<Item = S>) -> &mut Self {
        self.labels = labels.into_iter().map(Into::into).collect();
        self
    }

    pub fn zero(&mut self, z: usize) -> &mut Self {
        self.zero = Some(z);
        self
    }

    pub fn one(&mut self, o: usize) -> &mut Self {
        self.one = Some(o);
        self
    }

    /// Sets `¬a = b` and `¬b = a`.
    pub fn complement(&mut self, a: usize, b: usize) -> &mut Self {
        self.neg[a] = Some(b);
        self.neg[b] = Some(a);
        self
    }

    pub fn neg(&mut self, a: usize, b: usize) -> &mut Self {
        self.neg[a] = Some(b);
        self
    }

    pub fn comm(&mut self, a: usize, b: usize) -> &mut Self {
        self.comm[a][b] = true;
        self.comm[b][a] = true;
        self
    }

    /// Makes the relation reflexive.
    pub fn comm_reflexive(&mut self) -> &mut Self {
        for a in 0..self.n {
            self.comm[a][a] = true;
        }
        self
    }

    pub fn is_comm(&self, a: usize, b: usize) -> bool {
        self.comm[a][b]
    }

    pub fn meet(&mut self, a: usize, b: usize, c: usize) -> Result<&mut Self> {
        set_sym(&mut self.meet, "meet", a, b, c)?;
        Ok(self)
    }

    pub fn join(&mut self, a: usize, b: usize, c: usize) -> Result<&mut Self> {
        set_sym(&mut self.join, "join", a, b, c)?;
        Ok(self)
    }

    pub fn has_meet(&self, a: usize, b: usize) -> bool {
        self.meet[a][b].is_some()
    }

    pub fn build(&self) -> Result<PartialBooleanAlgebra> {
        let zero = self.zero.ok_or_else(|| structure("zero", 0, "zero not set"))?;
        let one = self.one.ok_or_else(|| structure("one", 0, "one not set"))?;
        let neg = self
            .neg
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| structure("neg", i, "complement not set")))
            .collect::<Result<Vec<_>>>()?;
        PartialBooleanAlgebra::from_tables(RawTables {
            zero,
            one,
            neg,
            comm: self.comm.clone(),
            meet: self.meet.clone(),
            join: self.join.clone(),
            labels: self.labels.clone(),
        })
    }
}

fn set_sym(t: &mut [Vec<Option<usize>>], table: &'static str, a: usize, b: usize, c: usize) -> Result<()> {
    let n = t.len();
    if a >= n || b >= n || c >= n {
        return Err(structure(table, a.max(b).max(c), "index out of range"));
    }
    for (x, y) in [(a, b), (b, a)] {
        match t[x][y] {
            Some(prev) if prev != c => {
                return Err(structure(table, x * n + y, format!("conflicting values {prev} and {c}")))
            }
            _ => t[x][y] = Some(c),
        }
    }
    Ok(())
}

fn flatten_op(table: &'static str, rows: &[Vec<Option<usize>>], n: usize) -> Result<Vec<u32>> {
    if rows.len() != n {
        return Err(structure(table, rows.len(), format!("expected {n} rows")));
    }
    let mut out = vec![UNDEF; n * n];
    for (a, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(structure(table, a, format!("row has {} entries", row.len())));
        }
        for (b, v) in row.iter().enumerate() {
            if let Some(v) = *v {
                if v >= n {
                    return Err(structure(table, a * n + b, format!("value {v} out of range")));
                }
                out[a * n + b] = v as u32;
            }
        }
    }
    Ok(out)
}

fn default_labels(n: usize, zero: usize, one: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            _ if i == zero => "0".to_string(),
            _ if i == one => "1".to_string(),
            _ => format!("x{i}"),
        })
        .collect()
}

pub(crate) fn structure(table: &'static str, index: usize, detail: impl Into<String>) -> Error {
    Error::Structure {
        table,
        index,
        detail: detail.into(),
    }
}

fn undefined(table: &'static str, a: usize, b: usize) -> Error {
    structure(table, a, format!("undefined on commeasurable pair ({a}, {b})"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Neg,
    Meet,
    Join,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Neg => "neg",
            Op::Meet => "meet",
            Op::Join => "join",
        })
    }
}

/// One violated invariant with the elements witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NegZeroNotOne,
    NegNotInvolutive { a: usize },
    CommNotReflexive { a: usize },
    CommNotSymmetric { a: usize, b: usize },
    ZeroNotCommeasurable { a: usize },
    OneNotCommeasurable { a: usize },
    NegNotCommeasurable { a: usize },
    /// An operation is defined on a non-commeasurable pair or undefined on a
    /// commeasurable one.
    DefinednessMismatch { op: Op, a: usize, b: usize, defined: bool },
    NotCommutative { op: Op, a: usize, b: usize },
    CliqueNotClosed { clique: Vec<usize>, op: Op, a: usize, b: usize, result: usize },
    CliqueNotBoolean { clique: Vec<usize>, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NegZeroNotOne => write!(f, "neg(0) is not 1"),
            NegNotInvolutive { a } => write!(f, "neg is not involutive at {a}"),
            CommNotReflexive { a } => write!(f, "{a} is not commeasurable with itself"),
            CommNotSymmetric { a, b } => write!(f, "commeasurability of ({a}, {b}) is not symmetric"),
            ZeroNotCommeasurable { a } => write!(f, "0 is not commeasurable with {a}"),
            OneNotCommeasurable { a } => write!(f, "1 is not commeasurable with {a}"),
            NegNotCommeasurable { a } => write!(f, "{a} is not commeasurable with its complement"),
            DefinednessMismatch { op, a, b, defined } => {
                if *defined {
                    write!(f, "{op} defined on non-commeasurable pair ({a}, {b})")
                } else {
                    write!(f, "{op} undefined on commeasurable pair ({a}, {b})")
                }
            }
            NotCommutative { op, a, b } => write!(f, "{op} not commutative on ({a}, {b})"),
            CliqueNotClosed { clique, op, a, b, result } => {
                write!(f, "clique {clique:?} not closed: {op}({a}, {b}) = {result}")
            }
            CliqueNotBoolean { clique, reason } => write!(f, "clique {clique:?} is not Boolean: {reason}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_pass() {
            Ok(())
        } else {
            Err(Error::Invalid(Box::new(self)))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return f.write_str("pass");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in self.violations.iter().take(8) {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}
