//! Text formats.
//!
//! `.pba` lists elements and their tables:
//!
//! ```text
//! pba 1
//! elements 0 a ~a 1
//! zero 0
//! one 1
//! neg a ~a
//! comm x y
//! meet x y z
//! join x y z
//! ```
//!
//! Entries are symmetric. Entries that every algebra has are implied and may
//! be omitted: commeasurability is reflexive, `0`, `1` and `¬x` are
//! commeasurable with `x`, `x ∧ x = x`, `x ∧ 0 = 0`, `x ∧ 1 = x`,
//! `x ∧ ¬x = 0` and dually for joins. `#` starts a comment.
//!
//! `.blocks` lists atoms and maximal Boolean blocks, `.rays` lists vectors
//! one per line, and matrix seeds are JSON.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cstar::matrix::{CMatrix, MatrixSeed, C64};
use crate::cstar::rays::{rays_to_pba, Ray};
use crate::error::{Error, Result};
use crate::pasting::{from_blocks, BlockHypergraph};
use crate::pba::{PartialBooleanAlgebra, PbaBuilder};

#[derive(Clone, Debug)]
struct Token<'s> {
    text: &'s str,
    line: usize,
    column: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty lines split into tokens with 1-based positions; comments
/// removed.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start: Option<usize> = None;
        for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (true, Some(s)) => {
                    toks.push(Token {
                        text: &body[s..i],
                        line: ln + 1,
                        column: body[..s].chars().count() + 1,
                    });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    lines
}

fn expect_header(lines: &[Vec<Token<'_>>], magic: &str) -> Result<()> {
    let Some(first) = lines.first() else {
        return Err(parse_err(1, 1, format!("empty input, expected `{magic} 1`")));
    };
    if first[0].text != magic {
        return Err(parse_err(first[0].line, first[0].column, format!("expected header `{magic} 1`")));
    }
    match first.get(1) {
        Some(t) if t.text == "1" && first.len() == 2 => Ok(()),
        Some(t) => Err(parse_err(t.line, t.column, format!("unsupported {magic} version `{}`", t.text))),
        None => Err(parse_err(first[0].line, first[0].column, "missing format version")),
    }
}

fn arity(line: &[Token<'_>], n: usize) -> Result<()> {
    if line.len() != n + 1 {
        let at = line.get(n + 1).unwrap_or(&line[line.len() - 1]);
        return Err(parse_err(
            at.line,
            at.column,
            format!("`{}` takes {n} arguments, found {}", line[0].text, line.len() - 1),
        ));
    }
    Ok(())
}

fn is_implied(a: &PartialBooleanAlgebra, x: usize, y: usize) -> bool {
    let fixed = [a.zero(), a.one()];
    x == y || fixed.contains(&x) || fixed.contains(&y) || a.neg(x) == y
}

/// Parses and validates a `.pba` algebra.
pub fn parse_pba(text: &str) -> Result<PartialBooleanAlgebra> {
    let lines = tokenize(text);
    expect_header(&lines, "pba")?;
    let mut labels: Vec<String> = Vec::new();
    let mut decl: Vec<(usize, usize)> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for line in &lines[1..] {
        if line[0].text == "elements" {
            for t in &line[1..] {
                if index.insert(t.text, labels.len()).is_some() {
                    return Err(parse_err(t.line, t.column, format!("duplicate element `{}`", t.text)));
                }
                labels.push(t.text.to_string());
                decl.push((t.line, t.column));
            }
        }
    }
    if labels.is_empty() {
        return Err(parse_err(lines[0][0].line, 1, "no `elements` declared"));
    }
    let n = labels.len();
    let lookup = |t: &Token<'_>| -> Result<usize> {
        index
            .get(t.text)
            .copied()
            .ok_or_else(|| parse_err(t.line, t.column, format!("unknown element `{}`", t.text)))
    };

    let mut zero = None;
    let mut one = None;
    let mut neg: Vec<Option<usize>> = vec![None; n];
    let mut comm = vec![vec![false; n]; n];
    let mut ops: Vec<(bool, usize, usize, usize, &Token<'_>)> = Vec::new();
    for line in &lines[1..] {
        let head = &line[0];
        match head.text {
            "elements" => {}
            "zero" | "one" => {
                arity(line, 1)?;
                let slot = if head.text == "zero" { &mut zero } else { &mut one };
                if slot.replace(lookup(&line[1])?).is_some() {
                    return Err(parse_err(head.line, head.column, format!("`{}` declared twice", head.text)));
                }
            }
            "neg" => {
                arity(line, 2)?;
                let (x, y) = (lookup(&line[1])?, lookup(&line[2])?);
                for (p, q) in [(x, y), (y, x)] {
                    match neg[p] {
                        Some(prev) if prev != q => {
                            return Err(parse_err(
                                head.line,
                                head.column,
                                format!("conflicting complements for `{}`", labels[p]),
                            ))
                        }
                        _ => neg[p] = Some(q),
                    }
                }
            }
            "comm" => {
                arity(line, 2)?;
                let (x, y) = (lookup(&line[1])?, lookup(&line[2])?);
                comm[x][y] = true;
                comm[y][x] = true;
            }
            "meet" | "join" => {
                arity(line, 3)?;
                let (x, y, z) = (lookup(&line[1])?, lookup(&line[2])?, lookup(&line[3])?);
                ops.push((head.text == "meet", x, y, z, head));
            }
            other => return Err(parse_err(head.line, head.column, format!("unknown directive `{other}`"))),
        }
    }
    let first = &lines[0][0];
    let zero = zero.ok_or_else(|| parse_err(first.line, 1, "no `zero` declared"))?;
    let one = one.ok_or_else(|| parse_err(first.line, 1, "no `one` declared"))?;
    for (p, q) in [(zero, one), (one, zero)] {
        match neg[p] {
            Some(prev) if prev != q => {
                return Err(parse_err(first.line, 1, "zero and one must be complements"));
            }
            _ => neg[p] = Some(q),
        }
    }

    let mut b = PbaBuilder::new(n);
    b.labels(labels.clone()).zero(zero).one(one).comm_reflexive();
    for x in 0..n {
        let nx = neg[x].ok_or_else(|| {
            let (l, c) = decl[x];
            parse_err(l, c, format!("no complement declared for `{}`", labels[x]))
        })?;
        b.neg(x, nx);
        for y in [zero, one, nx] {
            b.comm(x, y);
        }
        for y in 0..n {
            if comm[x][y] {
                b.comm(x, y);
            }
        }
    }
    let implied = |b: &mut PbaBuilder| -> Result<()> {
        for x in 0..n {
            let nx = neg[x].expect("checked above");
            b.meet(x, x, x)?.join(x, x, x)?;
            b.meet(x, zero, zero)?.join(x, zero, x)?;
            b.meet(x, one, x)?.join(x, one, one)?;
            b.meet(x, nx, zero)?.join(x, nx, one)?;
        }
        Ok(())
    };
    for &(is_meet, x, y, z, head) in &ops {
        if !b.is_comm(x, y) {
            return Err(parse_err(
                head.line,
                head.column,
                format!("`{}` on non-commeasurable pair `{}`, `{}`", head.text, labels[x], labels[y]),
            ));
        }
        let r = if is_meet { b.meet(x, y, z) } else { b.join(x, y, z) };
        r.map_err(|e| parse_err(head.line, head.column, e.to_string()))?;
    }
    implied(&mut b).map_err(|e| parse_err(first.line, 1, format!("explicit entry contradicts an implied one: {e}")))?;
    let a = b.build().map_err(|e| parse_err(first.line, 1, e.to_string()))?;
    a.validate().into_result()?;
    Ok(a)
}

fn check_label(l: &str) -> Result<()> {
    if l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == '#') {
        return Err(Error::domain(format!("label `{l}` cannot be written")));
    }
    Ok(())
}

/// Canonical `.pba` text: elements in index order, then every non-implied
/// entry with `x < y`.
pub fn write_pba(a: &PartialBooleanAlgebra) -> Result<String> {
    let mut seen = HashMap::new();
    for l in a.labels() {
        check_label(l)?;
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(Error::domain(format!("duplicate label `{l}`")));
        }
    }
    let n = a.len();
    let l = |x: usize| a.label(x);
    let mut out = String::from("pba 1\n");
    let _ = writeln!(out, "elements {}", a.labels().join(" "));
    let _ = writeln!(out, "zero {}", l(a.zero()));
    let _ = writeln!(out, "one {}", l(a.one()));
    for x in 0..n {
        let y = a.neg(x);
        if x < y && !(x == a.zero() && y == a.one()) && !(x == a.one() && y == a.zero()) {
            let _ = writeln!(out, "neg {} {}", l(x), l(y));
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if a.comm(x, y) && !is_implied(a, x, y) {
                let _ = writeln!(out, "comm {} {}", l(x), l(y));
            }
        }
    }
    for (name, op) in [("meet", PartialBooleanAlgebra::meet as fn(&_, _, _) -> _), ("join", PartialBooleanAlgebra::join)] {
        for x in 0..n {
            for y in x + 1..n {
                if a.comm(x, y) && !is_implied(a, x, y) {
                    let _ = writeln!(out, "{name} {} {} {}", l(x), l(y), l(op(a, x, y)));
                }
            }
        }
    }
    Ok(out)
}

/// Parses a `.blocks` hypergraph: `blocks 1`, an `atoms` line and one
/// `block` line per maximal Boolean block.
pub fn parse_blocks(text: &str) -> Result<BlockHypergraph> {
    let lines = tokenize(text);
    expect_header(&lines, "blocks")?;
    let mut atoms: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut blocks = Vec::new();
    for line in &lines[1..] {
        let head = &line[0];
        match head.text {
            "atoms" => {
                for t in &line[1..] {
                    check_label(t.text).map_err(|e| parse_err(t.line, t.column, e.to_string()))?;
                    if index.insert(t.text, atoms.len()).is_some() {
                        return Err(parse_err(t.line, t.column, format!("duplicate atom `{}`", t.text)));
                    }
                    atoms.push(t.text.to_string());
                }
            }
            "block" => {
                let b = line[1..]
                    .iter()
                    .map(|t| {
                        index
                            .get(t.text)
                            .copied()
                            .ok_or_else(|| parse_err(t.line, t.column, format!("unknown atom `{}`", t.text)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                blocks.push((b, head.line));
            }
            other => return Err(parse_err(head.line, head.column, format!("unknown directive `{other}`"))),
        }
    }
    let lines_of: Vec<usize> = blocks.iter().map(|(_, l)| *l).collect();
    BlockHypergraph::loose(atoms, blocks.into_iter().map(|(b, _)| b).collect()).map_err(|e| {
        let line = e
            .to_string()
            .split_whitespace()
            .find_map(|w| w.parse::<usize>().ok())
            .and_then(|i| lines_of.get(i).copied())
            .unwrap_or(1);
        parse_err(line, 1, e.to_string())
    })
}

pub fn write_blocks(h: &BlockHypergraph) -> Result<String> {
    for l in &h.atoms {
        check_label(l)?;
    }
    let mut out = String::from("blocks 1\n");
    let _ = writeln!(out, "atoms {}", h.atoms.join(" "));
    for b in &h.blocks {
        let names: Vec<&str> = b.iter().map(|&i| h.atoms[i].as_str()).collect();
        let _ = writeln!(out, "block {}", names.join(" "));
    }
    Ok(out)
}

/// A ray file: `rays 1`, `dim N`, then one vector per line.
#[derive(Clone, Debug)]
pub struct RaySet {
    pub dim: usize,
    pub rays: Vec<Ray>,
}

fn parse_real(s: &str) -> Option<f64> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        let v: f64 = inner.parse().ok()?;
        return (v >= 0.0).then(|| sign * v.sqrt());
    }
    let v: f64 = body.parse().ok()?;
    v.is_finite().then_some(sign * v)
}

/// A coordinate: a real number, `sqrt(x)`, `-sqrt(x)` or `(re,im)`.
fn parse_coordinate(s: &str) -> Option<C64> {
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',')?;
        return Some(C64::new(parse_real(re.trim())?, parse_real(im.trim())?));
    }
    parse_real(s).map(|re| C64::new(re, 0.0))
}

pub fn parse_rays(text: &str) -> Result<RaySet> {
    let lines = tokenize(text);
    expect_header(&lines, "rays")?;
    let dim_line = lines
        .get(1)
        .ok_or_else(|| parse_err(lines[0][0].line + 1, 1, "missing `dim` line"))?;
    if dim_line[0].text != "dim" {
        return Err(parse_err(dim_line[0].line, dim_line[0].column, "expected `dim N`"));
    }
    arity(dim_line, 1)?;
    let dim: usize = dim_line[1]
        .text
        .parse()
        .ok()
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_err(dim_line[1].line, dim_line[1].column, "dimension must be a positive integer"))?;
    let mut rays = Vec::new();
    for line in &lines[2..] {
        if line.len() != dim {
            return Err(parse_err(
                line[0].line,
                line[0].column,
                format!("expected {dim} coordinates, found {}", line.len()),
            ));
        }
        let ray = line
            .iter()
            .map(|t| {
                parse_coordinate(t.text)
                    .ok_or_else(|| parse_err(t.line, t.column, format!("bad coordinate `{}`", t.text)))
            })
            .collect::<Result<Ray>>()?;
        rays.push(ray);
    }
    Ok(RaySet { dim, rays })
}

fn write_coordinate(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("({},{})", z.re, z.im)
    }
}

pub fn write_rays(set: &RaySet) -> String {
    let mut out = format!("rays 1\ndim {}\n", set.dim);
    for r in &set.rays {
        let coords: Vec<String> = r.iter().map(|&z| write_coordinate(z)).collect();
        let _ = writeln!(out, "{}", coords.join(" "));
    }
    out
}

/// JSON form of a matrix seed; each generator is its row-major entries as
/// `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub dim: usize,
    pub tolerance: f64,
    pub generators: Vec<Vec<[f64; 2]>>,
}

pub fn parse_seed(text: &str) -> Result<MatrixSeed> {
    let file: SeedFile = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    let gens = file
        .generators
        .iter()
        .map(|g| CMatrix::from_pairs(file.dim, &g.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    MatrixSeed::new(file.dim, gens, file.tolerance)
}

pub fn write_seed(seed: &MatrixSeed) -> String {
    let file = SeedFile {
        dim: seed.dim,
        tolerance: seed.tolerance,
        generators: seed
            .generators
            .iter()
            .map(|g| g.entries().iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("seed serializes") + "\n"
}

/// Input kinds, recognised by extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    Pba,
    Blocks,
    Rays,
    Seed,
}

impl InputKind {
    pub fn of_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "pba" => Some(Self::Pba),
            "blocks" => Some(Self::Blocks),
            "rays" => Some(Self::Rays),
            "json" => Some(Self::Seed),
            _ => None,
        }
    }
}

/// Reads an algebra from `.pba`, `.blocks` or `.rays` text; `eps` is the
/// orthogonality tolerance for rays.
pub fn algebra_from_text(kind: InputKind, text: &str, eps: f64) -> Result<PartialBooleanAlgebra> {
    let a = match kind {
        InputKind::Pba => return parse_pba(text),
        InputKind::Blocks => from_blocks(&parse_blocks(text)?)?,
        InputKind::Rays => {
            let set = parse_rays(text)?;
            rays_to_pba(&set.rays, set.dim, eps)?
        }
        InputKind::Seed => return Err(Error::domain("a matrix seed is not an algebra file")),
    };
    a.validate().into_result()?;
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::iso::are_isomorphic;

    const MO2: &str = "pba 1
# the pasting of two squares
elements 0 a ~a b ~b 1
zero 0
one 1
neg a ~a
neg b ~b
";

    #[test]
    fn hand_written_pasting() {
        let a = parse_pba(MO2).unwrap();
        assert_eq!(a.len(), 6);
        assert!(are_isomorphic(&a, &corpus::paper_six()));
        assert!(!a.comm(a.index_of("a").unwrap(), a.index_of("b").unwrap()));
    }

    #[test]
    fn round_trip_is_exact_and_idempotent() {
        for (_, a) in corpus::standard_corpus() {
            let text = write_pba(&a).unwrap();
            let b = parse_pba(&text).unwrap();
            assert_eq!(b, a);
            assert_eq!(write_pba(&b).unwrap(), text);
        }
    }

    #[test]
    fn diagnostics_carry_positions() {
        let dangling = format!("{MO2}meet a\n");
        match parse_pba(&dangling).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (8, 6)),
            e => panic!("unexpected {e}"),
        }
        let unknown = format!("{MO2}comm a  zz\n");
        match parse_pba(&unknown).unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (8, 9)),
            e => panic!("unexpected {e}"),
        }
        let noncomm = format!("{MO2}meet a b 0\n");
        assert!(matches!(parse_pba(&noncomm).unwrap_err(), Error::Parse { line: 8, .. }));
        assert!(matches!(parse_pba("pba 2\n").unwrap_err(), Error::Parse { line: 1, column: 5, .. }));
    }

    #[test]
    fn invalid_algebra_is_a_validation_error() {
        // a and b commeasurable with no meet
        let text = format!("{MO2}comm a b\n");
        assert!(matches!(parse_pba(&text).unwrap_err(), Error::Invalid(_)));
    }

    #[test]
    fn blocks_and_rays() {
        let h = parse_blocks("blocks 1\natoms p q r s\nblock p q\nblock r s\n").unwrap();
        assert_eq!(write_blocks(&h).unwrap(), "blocks 1\natoms p q r s\nblock p q\nblock r s\n");
        let a = algebra_from_text(InputKind::Blocks, &write_blocks(&h).unwrap(), 1e-9).unwrap();
        assert!(are_isomorphic(&a, &corpus::paper_six()));

        let set = parse_rays("rays 1\ndim 2\n1 0\n0 1\nsqrt(2) -sqrt(2)\n(1,1) (1,-1)\n").unwrap();
        assert_eq!(set.rays.len(), 4);
        assert!((set.rays[2][1].re + 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(set.rays[3][0], C64::new(1.0, 1.0));
        let again = parse_rays(&write_rays(&set)).unwrap();
        assert_eq!(again.rays, set.rays);
        assert!(matches!(
            parse_rays("rays 1\ndim 2\n1 x\n").unwrap_err(),
            Error::Parse { line: 3, column: 3, .. }
        ));
    }

    #[test]
    fn seeds_round_trip() {
        let seed = MatrixSeed::new(2, vec![CMatrix::sigma_z(), CMatrix::sigma_x()], 1e-9).unwrap();
        let text = write_seed(&seed);
        let back = parse_seed(&text).unwrap();
        for (x, y) in back.generators.iter().zip(&seed.generators) {
            assert_eq!(x.entries(), y.entries());
        }
        assert_eq!(write_seed(&back), text);
        assert!(matches!(parse_seed("{\"dim\": 2,").unwrap_err(), Error::Parse { .. }));
    }
}
