//! Named algebras and seeded generators used by tests, the acceptance suite
//! and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{boolean_on, coproduct, product};
use crate::cstar::rays::{rays_to_pba, Ray};
use crate::iso::are_isomorphic;
use crate::morphism::PbaMorphism;
use crate::pasting::{from_blocks, BlockHypergraph};
use crate::pba::PartialBooleanAlgebra;

/// The Boolean algebra with `k` atoms `e1..ek`; element `m` is the atom
/// bitmask `m`. `boolean(0)` is the terminal algebra, `boolean(1)` is `{0,1}`.
pub fn boolean(k: usize) -> PartialBooleanAlgebra {
    let atoms: Vec<String> = (1..=k).map(|i| format!("e{i}")).collect();
    boolean_on(&atoms)
}

pub fn terminal() -> PartialBooleanAlgebra {
    crate::construct::terminal()
}

/// `MOₙ`: `n` four-element blocks `{0, xᵢ, xᵢ', 1}` glued at `0` and `1`.
pub fn mo(n: usize) -> PartialBooleanAlgebra {
    if n == 0 {
        return boolean(1);
    }
    let blocks: Vec<Vec<String>> = (1..=n).map(|i| vec![format!("x{i}"), format!("x{i}'")]).collect();
    pasted(&blocks)
}

/// Pastes blocks given by atom labels; panics on invalid input, so only for
/// fixed corpus entries.
pub fn pasted<S: AsRef<str>>(blocks: &[Vec<S>]) -> PartialBooleanAlgebra {
    let h = BlockHypergraph::from_labels(blocks).expect("valid hypergraph");
    from_blocks(&h).expect("valid pasting")
}

/// The six-element algebra `{0, a, a', b, b', 1}` with `a` and `b` not
/// commeasurable.
pub fn paper_six() -> PartialBooleanAlgebra {
    pasted(&[vec!["a", "a'"], vec!["b", "b'"]])
}

/// `2²` labelled `0, c, c', 1`.
pub fn square_c() -> PartialBooleanAlgebra {
    boolean_on(&["c", "c'"])
}

/// The morphism `m` from [`paper_six`] onto [`square_c`] with
/// `m(a) = m(b) = c`.
pub fn paper_m() -> (PartialBooleanAlgebra, PartialBooleanAlgebra, PbaMorphism) {
    let a = paper_six();
    let b = square_c();
    let map = a
        .labels()
        .iter()
        .map(|l| {
            let target = match l.as_str() {
                "a" | "b" => "c",
                "a'" | "b'" => "c'",
                other => other,
            };
            b.index_of(target).expect("target label")
        })
        .collect();
    (a, b, PbaMorphism::new(map))
}

/// Algebras with at most eight elements: terminal, 2, 2², 2³, MO2, MO3.
pub fn small_corpus() -> Vec<(String, PartialBooleanAlgebra)> {
    vec![
        ("terminal".into(), terminal()),
        ("bool1".into(), boolean(1)),
        ("bool2".into(), boolean(2)),
        ("bool3".into(), boolean(3)),
        ("mo2".into(), paper_six()),
        ("mo3".into(), mo(3)),
    ]
}

/// Random valid pastings of two- and three-atom blocks with pairwise
/// intersections of at most one atom, at most `max_elems` elements each,
/// pairwise non-isomorphic and not isomorphic to anything in `avoid`.
pub fn random_pastings(
    seed: u64,
    count: usize,
    max_elems: usize,
    avoid: &[PartialBooleanAlgebra],
) -> Vec<PartialBooleanAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PartialBooleanAlgebra> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 200_000 {
        attempts += 1;
        let atoms = rng.random_range(3..=10);
        let nblocks = rng.random_range(2..=6);
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for _ in 0..nblocks {
            let size = rng.random_range(2..=atoms.min(4));
            let mut b: Vec<usize> = Vec::new();
            while b.len() < size {
                let x = rng.random_range(0..atoms);
                if !b.contains(&x) {
                    b.push(x);
                }
            }
            b.sort_unstable();
            blocks.push(b);
        }
        // drop unused atoms by renumbering
        let mut used: Vec<usize> = blocks.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let blocks: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| b.iter().map(|x| used.binary_search(x).expect("used")).collect())
            .collect();
        let labels = used.iter().map(|&x| ((b'p' + (x as u8 % 10)) as char).to_string() + &(x / 10).to_string()).collect();
        let Ok(h) = BlockHypergraph::loose(labels, blocks) else {
            continue;
        };
        let Ok(a) = from_blocks(&h) else {
            continue;
        };
        if a.len() > max_elems {
            continue;
        }
        if out.iter().chain(avoid).any(|b| are_isomorphic(&a, b)) {
            continue;
        }
        out.push(a);
    }
    out
}

/// At least fifty pairwise non-isomorphic algebras of at most 24 elements:
/// Boolean algebras, `MOₙ`, fixed pastings, products, coproducts and seeded
/// random pastings.
pub fn standard_corpus() -> Vec<(String, PartialBooleanAlgebra)> {
    let mut out: Vec<(String, PartialBooleanAlgebra)> = Vec::new();
    for k in 0..=4 {
        out.push((format!("bool{k}"), boolean(k)));
    }
    for n in 2..=11 {
        out.push((format!("mo{n}"), mo(n)));
    }
    let fixed: [(&str, Vec<Vec<&str>>); 6] = [
        ("chain2x3", vec![vec!["a", "b", "c"], vec!["c", "d", "e"]]),
        ("star3x3", vec![vec!["a", "b", "c"], vec!["a", "d", "e"], vec!["a", "f", "g"]]),
        ("path2x3x3", vec![vec!["a", "b"], vec!["b", "c", "d"]]),
        ("square", vec![vec!["a", "b", "c"], vec!["c", "d", "e"], vec!["e", "f", "g"], vec!["g", "h", "a"]]),
        ("pair3x3", vec![vec!["a", "b", "c"], vec!["d", "e", "f"]]),
        ("mixed", vec![vec!["a", "b"], vec!["c", "d", "e"]]),
    ];
    for (name, blocks) in fixed {
        out.push((name.to_string(), pasted(&blocks)));
    }
    let (b1, b2, m2) = (boolean(1), boolean(2), paper_six());
    let built = [
        ("bool1xmo2", product(&[&b1, &m2])),
        ("bool2+bool3", coproduct(&[&b2, &boolean(3)])),
        ("mo2+bool3", coproduct(&[&m2, &boolean(3)])),
        ("bool3+bool3+bool2", coproduct(&[&boolean(3), &boolean(3), &b2])),
        ("bool2xmo2", product(&[&b2, &mo(2)])),
    ];
    for (name, r) in built {
        let (a, _) = r.expect("small construction");
        out.push((name.to_string(), a));
    }
    let existing: Vec<PartialBooleanAlgebra> = out.iter().map(|(_, a)| a.clone()).collect();
    let unique: Vec<(String, PartialBooleanAlgebra)> = dedupe(out);
    let needed = 52usize.saturating_sub(unique.len());
    let mut out = unique;
    for (i, a) in random_pastings(0x5eed, needed, 24, &existing).into_iter().enumerate() {
        out.push((format!("paste{i:02}"), a));
    }
    out
}

fn dedupe(items: Vec<(String, PartialBooleanAlgebra)>) -> Vec<(String, PartialBooleanAlgebra)> {
    let mut out: Vec<(String, PartialBooleanAlgebra)> = Vec::new();
    for (name, a) in items {
        if !out.iter().any(|(_, b)| are_isomorphic(&a, b)) {
            out.push((name, a));
        }
    }
    out
}

fn ray(v: &[f64]) -> Ray {
    v.iter().map(|&x| num_complex::Complex64::new(x, 0.0)).collect()
}

/// Eighteen rays in four dimensions forming nine orthogonal bases, each ray
/// in exactly two bases.
pub fn cabello18_rays() -> Vec<Ray> {
    const R: [[f64; 4]; 18] = [
        [0., 0., 0., 1.],
        [0., 0., 1., 0.],
        [1., 1., 0., 0.],
        [1., -1., 0., 0.],
        [0., 1., 0., 0.],
        [1., 0., 1., 0.],
        [1., 0., -1., 0.],
        [1., -1., 1., -1.],
        [1., -1., -1., 1.],
        [0., 0., 1., 1.],
        [1., 1., 1., 1.],
        [0., 1., 0., -1.],
        [1., 0., 0., 1.],
        [1., 0., 0., -1.],
        [0., 1., -1., 0.],
        [1., 1., -1., 1.],
        [1., 1., 1., -1.],
        [-1., 1., 1., 1.],
    ];
    R.iter().map(|r| ray(r)).collect()
}

/// Thirty-three rays in three dimensions: all sign and coordinate
/// permutations of `(0,0,1)`, `(0,1,1)`, `(0,1,√2)` and `(1,1,√2)` up to
/// overall sign.
pub fn peres33_rays() -> Vec<Ray> {
    let s = std::f64::consts::SQRT_2;
    let bases: [[f64; 3]; 4] = [[0., 0., 1.], [0., 1., 1.], [0., 1., s], [1., 1., s]];
    let mut out: Vec<Vec<f64>> = Vec::new();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for b in bases {
        for p in perms {
            for signs in 0..8 {
                let v: Vec<f64> = (0..3)
                    .map(|i| {
                        let x = b[p[i]];
                        if signs >> i & 1 == 1 {
                            -x
                        } else {
                            x
                        }
                    })
                    .collect();
                // canonical sign: first nonzero coordinate positive
                let first = v.iter().copied().find(|x| *x != 0.0).expect("nonzero");
                let sign = if first < 0.0 { -1.0 } else { 1.0 };
                let v: Vec<f64> = v.iter().map(|x| sign * x + 0.0).collect();
                if !out.iter().any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12)) {
                    out.push(v);
                }
            }
        }
    }
    out.iter().map(|v| ray(v)).collect()
}

/// The algebra pasted from the bases among [`cabello18_rays`].
pub fn cabello18() -> PartialBooleanAlgebra {
    rays_to_pba(&cabello18_rays(), 4, 1e-9).expect("bundled ray set")
}
