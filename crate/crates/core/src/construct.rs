//! Coproducts, products, equalizers and Boolean free products.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::morphism::PbaMorphism;
use crate::pba::{PartialBooleanAlgebra, PbaBuilder};

/// The algebra `{0, 1}`, initial among partial Boolean algebras.
pub fn initial() -> PartialBooleanAlgebra {
    boolean_on(&["1"])
}

/// The one-element algebra `0 = 1`, terminal among partial Boolean algebras.
pub fn terminal() -> PartialBooleanAlgebra {
    let mut b = PbaBuilder::new(1);
    b.labels(["0"]).zero(0).one(0).neg(0, 0).comm(0, 0);
    b.meet(0, 0, 0).and_then(|b| b.join(0, 0, 0)).expect("single entry");
    b.build().expect("well-shaped")
}

/// The Boolean algebra on the given atoms. Element `m` is the atom bitmask
/// `m`; labels join atom labels with `+`, with `0` and `1` for the extremes.
pub fn boolean_on<S: AsRef<str>>(atoms: &[S]) -> PartialBooleanAlgebra {
    let k = atoms.len();
    assert!(k < 16, "boolean algebra on {k} atoms is too large");
    let size = 1usize << k;
    let full = size - 1;
    let labels = (0..size).map(|m| match m {
        0 => "0".to_string(),
        _ if m == full => "1".to_string(),
        _ => (0..k)
            .filter(|i| m >> i & 1 == 1)
            .map(|i| atoms[i].as_ref())
            .collect::<Vec<_>>()
            .join("+"),
    });
    let mut b = PbaBuilder::new(size);
    b.labels(labels.collect::<Vec<_>>()).zero(0).one(full);
    for x in 0..size {
        b.neg(x, full & !x);
        for y in 0..size {
            b.comm(x, y);
            b.meet(x, y, x & y).expect("consistent");
            b.join(x, y, x | y).expect("consistent");
        }
    }
    b.build().expect("well-shaped")
}

/// Coproduct: disjoint union with all zeros identified and all ones
/// identified. Elements of different summands are never commeasurable. A
/// terminal summand collapses the coproduct to the terminal algebra; the
/// empty coproduct is `{0, 1}`.
pub fn coproduct(parts: &[&PartialBooleanAlgebra]) -> Result<(PartialBooleanAlgebra, Vec<PbaMorphism>)> {
    if parts.iter().any(|p| p.zero() == p.one()) {
        let t = terminal();
        let inj = parts.iter().map(|p| PbaMorphism::new(vec![0; p.len()])).collect();
        return Ok((t, inj));
    }
    let mut label_count: HashMap<&str, usize> = HashMap::new();
    for p in parts {
        for x in (0..p.len()).filter(|&x| x != p.zero() && x != p.one()) {
            *label_count.entry(p.label(x)).or_default() += 1;
        }
    }
    let mut labels = vec!["0".to_string()];
    let mut injections = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let mut map = vec![0; p.len()];
        for x in 0..p.len() {
            if x == p.zero() {
                continue;
            }
            if x == p.one() {
                map[x] = usize::MAX;
                continue;
            }
            map[x] = labels.len();
            let l = p.label(x);
            labels.push(if label_count[l] > 1 { format!("{l}@{i}") } else { l.to_string() });
        }
        injections.push(map);
    }
    let n = labels.len() + 1;
    labels.push("1".to_string());
    for map in &mut injections {
        for v in map.iter_mut().filter(|v| **v == usize::MAX) {
            *v = n - 1;
        }
    }
    let mut b = PbaBuilder::new(n);
    b.labels(labels).zero(0).one(n - 1).complement(0, n - 1);
    for (p, map) in parts.iter().zip(&injections) {
        for x in 0..p.len() {
            b.neg(map[x], map[p.neg(x)]);
            for y in p.comm_row(x).ones() {
                b.comm(map[x], map[y]);
                b.meet(map[x], map[y], map[p.meet(x, y)])?;
                b.join(map[x], map[y], map[p.join(x, y)])?;
            }
        }
    }
    if parts.is_empty() {
        for (x, y) in [(0, 0), (0, 1), (1, 1)] {
            b.comm(x, y);
            b.meet(x, y, x.min(y))?;
            b.join(x, y, x.max(y))?;
        }
    }
    let a = b.build()?;
    Ok((a, injections.into_iter().map(PbaMorphism::new).collect()))
}

/// Product: cartesian product with componentwise structure. The empty
/// product is the terminal algebra. Element indices are mixed-radix with the
/// first factor most significant.
pub fn product(parts: &[&PartialBooleanAlgebra]) -> Result<(PartialBooleanAlgebra, Vec<PbaMorphism>)> {
    let n: usize = parts
        .iter()
        .try_fold(1usize, |acc, p| acc.checked_mul(p.len()).filter(|&v| v <= 1 << 16))
        .ok_or(Error::SearchTooLarge {
            what: "product carrier",
            limit: 1 << 16,
        })?;
    let decode = |mut i: usize| -> Vec<usize> {
        let mut c = vec![0; parts.len()];
        for (k, p) in parts.iter().enumerate().rev() {
            c[k] = i % p.len();
            i /= p.len();
        }
        c
    };
    let encode = |c: &[usize]| -> usize { parts.iter().zip(c).fold(0, |acc, (p, &x)| acc * p.len() + x) };
    let comps: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let labels: Vec<String> = comps
        .iter()
        .map(|c| {
            let inner: Vec<&str> = parts.iter().zip(c).map(|(p, &x)| p.label(x)).collect();
            format!("({})", inner.join(","))
        })
        .collect();
    let zero = encode(&parts.iter().map(|p| p.zero()).collect::<Vec<_>>());
    let one = encode(&parts.iter().map(|p| p.one()).collect::<Vec<_>>());
    let mut b = PbaBuilder::new(n);
    b.labels(labels).zero(zero).one(one);
    for (i, c) in comps.iter().enumerate() {
        let negc: Vec<usize> = parts.iter().zip(c).map(|(p, &x)| p.neg(x)).collect();
        b.neg(i, encode(&negc));
        for (j, d) in comps.iter().enumerate().skip(i) {
            if parts.iter().zip(c.iter().zip(d)).all(|(p, (&x, &y))| p.comm(x, y)) {
                b.comm(i, j);
                let m: Vec<usize> = parts.iter().zip(c.iter().zip(d)).map(|(p, (&x, &y))| p.meet(x, y)).collect();
                let jn: Vec<usize> = parts.iter().zip(c.iter().zip(d)).map(|(p, (&x, &y))| p.join(x, y)).collect();
                b.meet(i, j, encode(&m))?;
                b.join(i, j, encode(&jn))?;
            }
        }
    }
    let a = b.build()?;
    let projections = (0..parts.len())
        .map(|k| PbaMorphism::new(comps.iter().map(|c| c[k]).collect()))
        .collect();
    Ok((a, projections))
}

/// Equalizer of parallel morphisms `f, g: dom → cod`: the subalgebra
/// `{a : f(a) = g(a)}` and its inclusion.
pub fn equalizer(
    dom: &PartialBooleanAlgebra,
    cod: &PartialBooleanAlgebra,
    f: &PbaMorphism,
    g: &PbaMorphism,
) -> Result<(PartialBooleanAlgebra, PbaMorphism)> {
    for (name, h) in [("first", f), ("second", g)] {
        if let Err(v) = h.check(dom, cod) {
            return Err(Error::domain(format!("{name} map is not a morphism: {v}")));
        }
    }
    let set = dom.set_of((0..dom.len()).filter(|&x| f.map[x] == g.map[x]));
    let (sub, emb) = dom.restrict(&set)?;
    Ok((sub, PbaMorphism::inclusion(&emb)))
}

/// The coproduct of two Boolean algebras in the category of Boolean
/// algebras: atoms are pairs of atoms, and each injection sends an element
/// to the set of pairs whose component lies below it.
pub fn boolean_coproduct(
    c: &PartialBooleanAlgebra,
    d: &PartialBooleanAlgebra,
) -> Result<(PartialBooleanAlgebra, PbaMorphism, PbaMorphism)> {
    let view = |a: &PartialBooleanAlgebra, name: &str| {
        if !a.is_total() {
            return Err(Error::domain(format!("{name} factor is not total")));
        }
        a.boolean_view(&a.full_set())
            .map_err(|r| Error::domain(format!("{name} factor is not Boolean: {r}")))
    };
    let (vc, vd) = (view(c, "first")?, view(d, "second")?);
    let (k, l) = (vc.atoms.len(), vd.atoms.len());
    if k * l >= 16 {
        return Err(Error::SearchTooLarge {
            what: "Boolean coproduct atoms",
            limit: 15,
        });
    }
    let atoms: Vec<String> = vc
        .atoms
        .iter()
        .flat_map(|&p| vd.atoms.iter().map(move |&q| (p, q)))
        .map(|(p, q)| format!("{}*{}", c.label(p), d.label(q)))
        .collect();
    let sum = boolean_on(&atoms);
    let inj_c = (0..c.len())
        .map(|x| {
            let m = vc.mask[&x];
            (0..k).filter(|i| m >> i & 1 == 1).fold(0usize, |acc, i| acc | ((1 << l) - 1) << (i * l))
        })
        .collect();
    let inj_d = (0..d.len())
        .map(|y| {
            let m = vd.mask[&y] as usize;
            (0..k).fold(0usize, |acc, i| acc | m << (i * l))
        })
        .collect();
    Ok((sum, PbaMorphism::new(inj_c), PbaMorphism::new(inj_d)))
}
