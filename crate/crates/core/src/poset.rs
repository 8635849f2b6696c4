//! The poset `C(A)` of Boolean subalgebras of a partial Boolean algebra.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pba::PartialBooleanAlgebra;
use crate::ElemSet;

/// Default cap on the number of subalgebras enumerated.
pub const DEFAULT_SUBALGEBRA_LIMIT: usize = 20_000;

/// All Boolean subalgebras of an algebra ordered by inclusion.
#[derive(Clone, Debug)]
pub struct SubalgebraPoset {
    /// Canonically ordered: by size, then by sorted element list.
    pub members: Vec<ElemSet>,
    /// `order[i]` holds every `j` with `members[i] ⊆ members[j]`.
    pub order: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
}

/// Enumerates every Boolean subalgebra of `a`.
///
/// Starting from `{0, 1}`, each member is extended by one element
/// commeasurable with all of it and closed again; every finite Boolean
/// subalgebra is reached by such a chain.
pub fn boolean_subalgebras(a: &PartialBooleanAlgebra, limit: usize) -> Result<SubalgebraPoset> {
    let bottom = a.generated_subalgebra(&a.empty_set())?;
    let mut seen: HashSet<ElemSet> = HashSet::from([bottom.clone()]);
    let mut frontier = vec![bottom];
    let mut found = Vec::new();
    while let Some(s) = frontier.pop() {
        let mut common = a.full_set();
        for x in s.ones() {
            common.intersect_with(a.comm_row(x));
        }
        common.difference_with(&s);
        for x in common.ones() {
            let mut gens = s.clone();
            gens.insert(x);
            let t = a.generated_subalgebra(&gens)?;
            if seen.insert(t.clone()) {
                if seen.len() > limit {
                    return Err(Error::SearchTooLarge {
                        what: "subalgebra enumeration",
                        limit,
                    });
                }
                frontier.push(t);
            }
        }
        found.push(s);
    }
    found.sort_by(|x, y| {
        x.count_ones(..)
            .cmp(&y.count_ones(..))
            .then_with(|| x.ones().cmp(y.ones()))
    });
    Ok(SubalgebraPoset::from_members(found))
}

/// Summary of the shape of `C(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub least: usize,
    /// Members covering the least member.
    pub atoms: Vec<usize>,
    /// Every pair of members has an upper bound.
    pub is_filtered: bool,
    pub maximum: Option<usize>,
}

impl SubalgebraPoset {
    pub fn from_members(members: Vec<ElemSet>) -> Self {
        let order = members
            .iter()
            .map(|m| {
                let mut row = ElemSet::with_capacity(members.len());
                for (j, other) in members.iter().enumerate() {
                    if m.is_subset(other) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let index = members.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self { members, order, index }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order[i].contains(j)
    }

    pub fn position(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Index of `⟨x⟩`.
    pub fn principal(&self, a: &PartialBooleanAlgebra, x: usize) -> usize {
        self.position(&a.principal(x)).expect("principal subalgebras are members")
    }

    /// Members strictly below `i` with nothing strictly between.
    pub fn lower_covers(&self, i: usize) -> Vec<usize> {
        let below: Vec<usize> = (0..self.len()).filter(|&j| j != i && self.leq(j, i)).collect();
        below
            .iter()
            .copied()
            .filter(|&j| !below.iter().any(|&k| k != j && self.leq(j, k)))
            .collect()
    }

    /// Covering pairs `(lower, upper)`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.lower_covers(i).into_iter().map(move |j| (j, i)))
            .collect()
    }

    pub fn structure_report(&self) -> StructureReport {
        let n = self.len();
        let least = (0..n)
            .find(|&i| self.order[i].count_ones(..) == n)
            .expect("{0,1} lies below every member");
        let atoms = (0..n).filter(|&i| self.lower_covers(i) == [least]).collect();
        let is_filtered = (0..n).all(|i| {
            (i..n).all(|j| {
                let mut up = self.order[i].clone();
                up.intersect_with(&self.order[j]);
                !up.is_clear()
            })
        });
        let maximum = (0..n).find(|&i| (0..n).all(|j| self.leq(j, i)));
        StructureReport {
            least,
            atoms,
            is_filtered,
            maximum,
        }
    }

    /// Whether `↓x` is dually isomorphic to the lattice of partitions of the
    /// atoms of member `x`.
    pub fn downset_partition_check(&self, a: &PartialBooleanAlgebra, x: usize) -> bool {
        let down: Vec<usize> = (0..self.len()).filter(|&j| self.leq(j, x)).collect();
        let k = match a.boolean_view(&self.members[x]) {
            Ok(v) => v.atoms.len(),
            Err(_) => return false,
        };
        let partitions = set_partitions(k);
        if partitions.len() != down.len() {
            return false;
        }
        let down_le: Vec<Vec<bool>> = down
            .iter()
            .map(|&i| down.iter().map(|&j| self.leq(i, j)).collect())
            .collect();
        // dual order: coarser partitions sit below finer ones
        let part_le: Vec<Vec<bool>> = partitions
            .iter()
            .map(|p| partitions.iter().map(|q| refines(q, p)).collect())
            .collect();
        posets_isomorphic(&down_le, &part_le)
    }
}

/// All partitions of `{0..k}` as block labels (restricted growth strings).
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; k];
    fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            go(i + 1, max.max(b), cur, out);
        }
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    go(1, 0, &mut cur, &mut out);
    out
}

/// `p` refines `q`: every block of `p` lies inside a block of `q`.
pub fn refines(p: &[usize], q: &[usize]) -> bool {
    (0..p.len()).all(|i| (0..p.len()).all(|j| p[i] != p[j] || q[i] == q[j]))
}

/// Order isomorphism search between two finite posets given as `≤` tables.
pub fn posets_isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let sig = |t: &[Vec<bool>], i: usize| {
        let up = (0..t.len()).filter(|&j| t[i][j]).count();
        let down = (0..t.len()).filter(|&j| t[j][i]).count();
        (up, down)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let (mut x, mut y) = (sa.clone(), sb.clone());
    x.sort_unstable();
    y.sort_unstable();
    if x != y {
        return false;
    }
    fn go(i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, a: &[Vec<bool>], b: &[Vec<bool>], sa: &[(usize, usize)], sb: &[(usize, usize)]) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            if (0..i).all(|k| a[i][k] == b[j][map[k]] && a[k][i] == b[map[k]][j]) {
                used[j] = true;
                map.push(j);
                if go(i + 1, map, used, a, b, sa, sb) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    go(0, &mut Vec::new(), &mut vec![false; n], a, b, &sa, &sb)
}
