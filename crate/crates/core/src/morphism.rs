//! Morphisms of partial Boolean algebras: checking, enumeration, composition
//! and image factorization.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pba::{structure, PartialBooleanAlgebra, UNDEF};
use crate::search::HomSearch;
use crate::ElemSet;

/// A total map between carriers. The algebras are passed alongside when
/// checking; the map itself carries no references.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PbaMorphism {
    pub map: Vec<usize>,
}

/// The morphism clause a map fails, with the elements witnessing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum MorphismViolation {
    Shape { expected: usize, found: usize },
    OutOfRange { a: usize, image: usize },
    PreservesZero,
    PreservesOne,
    PreservesNeg { a: usize },
    PreservesComm { a: usize, b: usize },
    PreservesMeet { a: usize, b: usize },
    PreservesJoin { a: usize, b: usize },
}

impl MorphismViolation {
    /// Short clause name used in reports.
    pub fn clause(&self) -> &'static str {
        match self {
            Self::Shape { .. } | Self::OutOfRange { .. } => "total map",
            Self::PreservesZero => "preserves 0",
            Self::PreservesOne => "preserves 1",
            Self::PreservesNeg { .. } => "preserves neg",
            Self::PreservesComm { .. } => "preserves commeasurability",
            Self::PreservesMeet { .. } => "preserves meet",
            Self::PreservesJoin { .. } => "preserves join",
        }
    }
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape { expected, found } => write!(f, "map has {found} entries, expected {expected}"),
            Self::OutOfRange { a, image } => write!(f, "image {image} of {a} is out of range"),
            Self::PreservesNeg { a } => write!(f, "{} fails at {a}", self.clause()),
            Self::PreservesComm { a, b } | Self::PreservesMeet { a, b } | Self::PreservesJoin { a, b } => {
                write!(f, "{} fails at ({a}, {b})", self.clause())
            }
            _ => f.write_str(self.clause()),
        }
    }
}

/// Checks every morphism clause for `map: a → b`, returning the first
/// violation in clause order (shape, 0, 1, neg, comm, meet, join).
pub fn check_map(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra, map: &[usize]) -> Result<(), MorphismViolation> {
    if map.len() != a.len() {
        return Err(MorphismViolation::Shape {
            expected: a.len(),
            found: map.len(),
        });
    }
    if let Some((x, &y)) = map.iter().enumerate().find(|&(_, &y)| y >= b.len()) {
        return Err(MorphismViolation::OutOfRange { a: x, image: y });
    }
    if map[a.zero()] != b.zero() {
        return Err(MorphismViolation::PreservesZero);
    }
    if map[a.one()] != b.one() {
        return Err(MorphismViolation::PreservesOne);
    }
    for x in 0..a.len() {
        if map[a.neg(x)] != b.neg(map[x]) {
            return Err(MorphismViolation::PreservesNeg { a: x });
        }
    }
    for x in 0..a.len() {
        for y in a.comm_row(x).ones() {
            if !b.comm(map[x], map[y]) {
                return Err(MorphismViolation::PreservesComm { a: x, b: y });
            }
        }
    }
    for x in 0..a.len() {
        for y in a.comm_row(x).ones() {
            if map[a.meet(x, y)] != b.meet(map[x], map[y]) {
                return Err(MorphismViolation::PreservesMeet { a: x, b: y });
            }
        }
    }
    for x in 0..a.len() {
        for y in a.comm_row(x).ones() {
            if map[a.join(x, y)] != b.join(map[x], map[y]) {
                return Err(MorphismViolation::PreservesJoin { a: x, b: y });
            }
        }
    }
    Ok(())
}

impl PbaMorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn identity(a: &PartialBooleanAlgebra) -> Self {
        Self::new((0..a.len()).collect())
    }

    /// The inclusion of a subset given by its sorted element list.
    pub fn inclusion(emb: &[usize]) -> Self {
        Self::new(emb.to_vec())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn check(&self, dom: &PartialBooleanAlgebra, cod: &PartialBooleanAlgebra) -> Result<(), MorphismViolation> {
        check_map(dom, cod, &self.map)
    }

    pub fn is_morphism(&self, dom: &PartialBooleanAlgebra, cod: &PartialBooleanAlgebra) -> bool {
        self.check(dom, cod).is_ok()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PbaMorphism) -> PbaMorphism {
        PbaMorphism::new(self.map.iter().map(|&y| g.map[y]).collect())
    }

    /// Image of a set of domain elements.
    pub fn image_of(&self, cod_len: usize, s: &ElemSet) -> ElemSet {
        let mut out = ElemSet::with_capacity(cod_len);
        for x in s.ones() {
            out.insert(self.map[x]);
        }
        out
    }

    pub fn is_injective(&self, cod_len: usize) -> bool {
        let mut seen = ElemSet::with_capacity(cod_len);
        self.map.iter().all(|&y| !seen.put(y))
    }
}

/// Every morphism `a → b` in lexicographic order of maps.
pub fn enumerate_morphisms(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra, limit: usize) -> Result<Vec<PbaMorphism>> {
    Ok(HomSearch::new(a, b)
        .limit(limit)
        .all()?
        .into_iter()
        .map(PbaMorphism::new)
        .collect())
}

/// Default cap on enumerated morphisms.
pub const DEFAULT_MORPHISM_LIMIT: usize = 100_000;

/// `f = inclusion ∘ surjection` through the set-theoretic image of `f`.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    /// The image, with commeasurability the image of the domain's relation
    /// and operations from the codomain.
    pub image: PartialBooleanAlgebra,
    /// Domain → image.
    pub surjection: PbaMorphism,
    /// Image → codomain.
    pub inclusion: PbaMorphism,
}

/// Factors a morphism through its image. The image relation is the image of
/// the domain's commeasurability; the result is validated and an invalid
/// image is reported as an error.
pub fn image_factorization(
    dom: &PartialBooleanAlgebra,
    cod: &PartialBooleanAlgebra,
    f: &PbaMorphism,
) -> Result<ImageFactorization> {
    if let Err(v) = f.check(dom, cod) {
        return Err(Error::domain(format!("not a morphism: {v}")));
    }
    let image_set = f.image_of(cod.len(), &dom.full_set());
    let emb = crate::elems(&image_set);
    let mut pos = vec![UNDEF as usize; cod.len()];
    for (i, &e) in emb.iter().enumerate() {
        pos[e] = i;
    }
    let k = emb.len();
    let mut comm = vec![vec![false; k]; k];
    for x in 0..dom.len() {
        for y in dom.comm_row(x).ones() {
            comm[pos[f.map[x]]][pos[f.map[y]]] = true;
        }
    }
    let mut meet = vec![vec![None; k]; k];
    let mut join = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            if comm[i][j] {
                let (m, jn) = (cod.meet(emb[i], emb[j]), cod.join(emb[i], emb[j]));
                if pos[m] == UNDEF as usize || pos[jn] == UNDEF as usize {
                    return Err(structure("meet", i, "image not closed under codomain operations"));
                }
                meet[i][j] = Some(pos[m]);
                join[i][j] = Some(pos[jn]);
            }
        }
    }
    let image = PartialBooleanAlgebra::from_tables(crate::pba::RawTables {
        zero: pos[cod.zero()],
        one: pos[cod.one()],
        neg: emb.iter().map(|&e| pos[cod.neg(e)]).collect(),
        comm,
        meet,
        join,
        labels: emb.iter().map(|&e| cod.label(e).to_string()).collect(),
    })?;
    image.validate().into_result()?;
    let surjection = PbaMorphism::new(f.map.iter().map(|&y| pos[y]).collect());
    let inclusion = PbaMorphism::inclusion(&emb);
    Ok(ImageFactorization {
        image,
        surjection,
        inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn paper_m_is_a_morphism() {
        let (a, b, m) = corpus::paper_m();
        assert!(m.is_morphism(&a, &b));
    }

    #[test]
    fn zero_to_one_fails_with_zero_clause() {
        let a = corpus::boolean(1);
        let f = PbaMorphism::new(vec![a.one(), a.one()]);
        let err = f.check(&a, &a).unwrap_err();
        assert_eq!(err, MorphismViolation::PreservesZero);
        assert_eq!(err.clause(), "preserves 0");
    }

    #[test]
    fn enumeration_counts() {
        let two = corpus::boolean(1);
        assert_eq!(enumerate_morphisms(&corpus::paper_six(), &two, 100).unwrap().len(), 4);
        assert_eq!(enumerate_morphisms(&two, &two, 100).unwrap().len(), 1);
        assert_eq!(enumerate_morphisms(&corpus::boolean(2), &two, 100).unwrap().len(), 2);
    }

    #[test]
    fn image_of_paper_m_is_all_of_target() {
        let (a, b, m) = corpus::paper_m();
        let fac = image_factorization(&a, &b, &m).unwrap();
        assert_eq!(fac.image.len(), 4);
        assert_eq!(fac.surjection.then(&fac.inclusion), m);
    }

    #[test]
    fn image_of_collapse_is_two() {
        let a = corpus::paper_six();
        let two = corpus::boolean(1);
        let f = enumerate_morphisms(&a, &two, 10).unwrap().remove(0);
        let fac = image_factorization(&a, &two, &f).unwrap();
        assert_eq!(fac.image.len(), 2);
    }

    #[test]
    fn image_of_subalgebra_inclusion_is_itself() {
        let a = corpus::paper_six();
        let x = a.index_of("a").unwrap();
        let (sub, emb) = a.restrict(&a.principal(x)).unwrap();
        let inc = PbaMorphism::inclusion(&emb);
        let fac = image_factorization(&sub, &a, &inc).unwrap();
        assert_eq!(fac.surjection, PbaMorphism::identity(&sub));
        assert_eq!(fac.inclusion, inc);
    }
}
