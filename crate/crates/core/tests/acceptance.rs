//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use partial_algebra::bohr::{
    admissibility_violation, check_frame_laws, enumerate_frame, frame_morphism_report, lemma_condition_a,
    reflects_commeasurability, BohrElement, PushForward, DEFAULT_MAX_FRAME,
};
use partial_algebra::colimit::{default_apexes, verify_colimit, ColimitOptions, UniquenessMethod};
use partial_algebra::construct::initial;
use partial_algebra::corpus;
use partial_algebra::cstar::matrix::{CMatrix, MatrixSeed, C64, EPS_STRUCTURAL};
use partial_algebra::cstar::mediating::{mediating_cstar, mediating_residual, Conjugation};
use partial_algebra::cstar::proj::{proj_c_commute_check, proj_functor, DEFAULT_PROJECTION_LIMIT};
use partial_algebra::cstar::rays::ray_blocks;
use partial_algebra::cstar::spectral::{annihilator_check, gen_comm_subalg, rp};
use partial_algebra::iso::are_isomorphic;
use partial_algebra::morphism::enumerate_morphisms;
use partial_algebra::oml::{Oml, OmlSpec};
use partial_algebra::poset::{boolean_subalgebras, DEFAULT_SUBALGEBRA_LIMIT};
use partial_algebra::search::HomSearch;
use partial_algebra::stone::{coproduct_ideal_check, is_kochen_specker, k_on_morphism, limit_k, Spectra};
use partial_algebra::tensor::{tensor, tensor_factorization, Factorization};
use partial_algebra::{PartialBooleanAlgebra, PbaMorphism};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
}

fn small() -> Vec<(String, PartialBooleanAlgebra)> {
    corpus::small_corpus()
}

fn homs(a: &PartialBooleanAlgebra, b: &PartialBooleanAlgebra) -> Vec<PbaMorphism> {
    enumerate_morphisms(a, b, 100_000).expect("small hom-set")
}

fn colimit_theorem() -> Outcome {
    let start = Instant::now();
    let corpus = corpus::standard_corpus();
    ensure(corpus.len() >= 50, || format!("corpus has {} algebras", corpus.len()))?;
    let apexes: Vec<_> = default_apexes().into_iter().filter(|(_, x)| x.len() <= 16).collect();
    let opts = ColimitOptions::default();
    let (mut cocones, mut exhaustive) = (0, 0);
    for (name, a) in &corpus {
        ensure(a.len() <= 24, || format!("{name} has {} elements", a.len()))?;
        let poset = boolean_subalgebras(a, DEFAULT_SUBALGEBRA_LIMIT).map_err(|e| format!("{name}: {e}"))?;
        let r = verify_colimit(a, &poset, &apexes, &opts).map_err(|e| format!("{name}: {e}"))?;
        for o in &r.outcomes {
            ensure(o.passed, || format!("{name} into {}: {:?}", o.apex, o.failure))?;
            ensure(o.alternatives == 1, || format!("{name}: {} mediating maps", o.alternatives))?;
            exhaustive += usize::from(o.uniqueness == Some(UniquenessMethod::Exhaustive));
        }
        cocones += r.outcomes.len();
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{} algebras, {cocones} cocones, unique: {exhaustive} by full Hom enumeration, {} by leg-constrained search",
        corpus.len(),
        cocones - exhaustive
    ))
}

fn poset_structure() -> Outcome {
    let corpus = corpus::standard_corpus();
    for (name, a) in &corpus {
        let poset = boolean_subalgebras(a, DEFAULT_SUBALGEBRA_LIMIT).map_err(|e| e.to_string())?;
        let s = poset.structure_report();
        let least: HashSet<usize> = [a.zero(), a.one()].into();
        let got: HashSet<usize> = poset.members[s.least].ones().collect();
        ensure(got == least, || format!("{name}: least member is not {{0,1}}"))?;
        // {0, x, ¬x, 1} for each x outside {0, 1}
        let mut expected: Vec<Vec<usize>> = (0..a.len())
            .filter(|x| !least.contains(x))
            .map(|x| {
                let mut v = vec![a.zero(), x, a.neg(x), a.one()];
                v.sort_unstable();
                v
            })
            .collect();
        expected.sort();
        expected.dedup();
        let mut atoms: Vec<Vec<usize>> = s.atoms.iter().map(|&i| poset.members[i].ones().collect()).collect();
        atoms.sort();
        ensure(atoms == expected, || format!("{name}: atoms of C(A) differ"))?;
        ensure(s.is_filtered == a.is_boolean(), || format!("{name}: filtered != Boolean"))?;
    }
    Ok(format!("{} algebras", corpus.len()))
}

fn mo2_oml() -> Oml {
    let labels = ["0", "a", "a'", "b", "b'", "1"];
    let leq = (0..6)
        .map(|i| (0..6).map(|j| i == j || i == 0 || j == 5).collect())
        .collect();
    Oml::new(OmlSpec {
        leq,
        ortho: vec![5, 2, 1, 4, 3, 0],
        labels: labels.iter().map(|s| s.to_string()).collect(),
    })
    .expect("MO2 is orthomodular")
}

fn square_oml() -> Oml {
    let labels = ["0", "c", "c'", "1"];
    let leq = (0..4)
        .map(|i| (0..4).map(|j| i == j || i == 0 || j == 3).collect())
        .collect();
    Oml::new(OmlSpec {
        leq,
        ortho: vec![3, 2, 1, 0],
        labels: labels.iter().map(|s| s.to_string()).collect(),
    })
    .expect("2^2 is orthomodular")
}

fn paper_counterexample() -> Outcome {
    let (a, b, m) = corpus::paper_m();
    m.check(&a, &b).map_err(|v| format!("m is not a morphism: {v}"))?;
    let (l, sq) = (mo2_oml(), square_oml());
    let lat = |alg: &PartialBooleanAlgebra, o: &Oml, x: usize| -> usize {
        o.spec().labels.iter().position(|s| s == alg.label(x)).expect("same labels")
    };
    let (xa, xb) = (a.index_of("a").unwrap(), a.index_of("b").unwrap());
    let meet_ab = l.meet(lat(&a, &l, xa), lat(&a, &l, xb));
    let image_of_meet = b.label(m.apply(a.index_of(&l.spec().labels[meet_ab]).unwrap()));
    ensure(image_of_meet == "0", || format!("m(a ∧ b) = {image_of_meet}"))?;
    let meet_images = sq.meet(lat(&b, &sq, m.apply(xa)), lat(&b, &sq, m.apply(xb)));
    ensure(sq.spec().labels[meet_images] == "c", || "m(a) ∧ m(b) is not c".into())?;
    let poset = boolean_subalgebras(&a, DEFAULT_SUBALGEBRA_LIMIT).map_err(|e| e.to_string())?;
    let members: HashSet<Vec<usize>> = poset.members.iter().map(|s| s.ones().collect()).collect();
    let expected: HashSet<Vec<usize>> = [
        vec![a.zero(), a.one()],
        a.principal(xa).ones().collect(),
        a.principal(xb).ones().collect(),
    ]
    .into();
    ensure(members == expected, || format!("C(A) has {} members", members.len()))?;
    Ok("m(a∧b) = 0, m(a)∧m(b) = c, C(A) = {⟨0⟩, ⟨a⟩, ⟨b⟩}".into())
}

fn stone_extension() -> Outcome {
    for k in 0..=4 {
        let a = corpus::boolean(k);
        let sp = Spectra::of(&a).map_err(|e| e.to_string())?;
        let points = limit_k(&a, &sp).map_err(|e| e.to_string())?;
        let atoms: Vec<usize> = (0..a.len())
            .filter(|&p| p != a.zero() && (0..a.len()).all(|y| y == a.zero() || y == p || !a.leq(y, p)))
            .collect();
        let mut hit = HashSet::new();
        for f in &points {
            let v = f.valuation(&a, &sp);
            let p = atoms
                .iter()
                .copied()
                .find(|&p| (0..a.len()).all(|x| v.map[x] == usize::from(a.leq(p, x))))
                .ok_or_else(|| format!("2^{k}: a point of K is not evaluation at an atom"))?;
            ensure(hit.insert(p), || format!("2^{k}: two points of K hit one atom"))?;
        }
        ensure(hit.len() == atoms.len(), || format!("2^{k}: |K| = {}, |Σ| = {}", points.len(), atoms.len()))?;
    }
    Ok("K(2^k) ≅ Σ(2^k) for k ≤ 4".into())
}

fn kochen_specker() -> Outcome {
    let start = Instant::now();
    let cabello = corpus::cabello18();
    let ks = is_kochen_specker(&cabello).map_err(|e| e.to_string())?;
    let sp = Spectra::of(&cabello).map_err(|e| e.to_string())?;
    let k = limit_k(&cabello, &sp).map_err(|e| e.to_string())?;
    ensure(ks && k.is_empty(), || "18-ray algebra has a two-valued morphism".into())?;
    within(Duration::from_secs(10), start)?;
    let cabello_secs = start.elapsed().as_secs_f64();

    // naive filter over atom assignments of the nine raw bases
    let raw = ray_blocks(&corpus::cabello18_rays(), 4, 1e-9).map_err(|e| e.to_string())?;
    ensure(raw.blocks.len() == 9 && raw.atoms.len() == 18, || "raw hypergraph is not 18 rays, 9 bases".into())?;
    let masks: Vec<u32> = raw.blocks.iter().map(|b| b.iter().fold(0, |m, &i| m | 1 << i)).collect();
    let colorings = (0u32..1 << 18).filter(|x| masks.iter().all(|m| (x & m).count_ones() == 1)).count();
    ensure(colorings == 0, || format!("{colorings} raw colorings"))?;

    let six = corpus::paper_six();
    let k6 = limit_k(&six, &Spectra::of(&six).unwrap()).map_err(|e| e.to_string())?;
    ensure(k6.len() == 4, || format!("|K(MO2)| = {}", k6.len()))?;
    let partners = [corpus::boolean(1), corpus::boolean(2), corpus::boolean(3), corpus::paper_six(), corpus::mo(3)];
    for (i, b) in partners.iter().enumerate() {
        ensure(coproduct_ideal_check(&cabello, b).map_err(|e| e.to_string())?, || format!("partner {i}"))?;
    }
    Ok(format!("K = ∅ in {cabello_secs:.2}s, raw filter 0 of 2^18, |K(MO2)| = 4, 5 coproducts KS"))
}

fn tensor_criterion() -> Outcome {
    let two = initial();
    for (name, a) in corpus::standard_corpus().iter().filter(|(_, a)| a.len() <= 24) {
        let t = tensor(&two, a).map_err(|e| format!("{name}: {e}"))?;
        ensure(are_isomorphic(&t.algebra, a), || format!("2 ⊗ {name} ≇ {name}"))?;
    }
    let b2 = corpus::boolean(2);
    let t = tensor(&b2, &b2).map_err(|e| e.to_string())?;
    ensure(are_isomorphic(&t.algebra, &corpus::boolean(4)), || "2² ⊗ 2² ≇ 2⁴".into())?;

    let algebras = small();
    let (mut through, mut refused) = (0, 0);
    for (na, a) in &algebras {
        for (nb, b) in &algebras {
            let t = tensor(a, b).map_err(|e| format!("{na} ⊗ {nb}: {e}"))?;
            for (nz, z) in &algebras {
                let (fs, gs) = (homs(a, z), homs(b, z));
                for f in &fs {
                    for g in &gs {
                        let commute = (0..a.len()).all(|x| (0..b.len()).all(|y| z.comm(f.apply(x), g.apply(y))));
                        let pins = (0..a.len())
                            .map(|x| (t.kappa_a.apply(x), f.apply(x)))
                            .chain((0..b.len()).map(|y| (t.kappa_b.apply(y), g.apply(y))));
                        let oracle = HomSearch::new(&t.algebra, z).pins(pins).limit(2).all().map_err(|e| e.to_string())?;
                        let got = tensor_factorization(&t, a, b, z, f, g).map_err(|e| e.to_string())?;
                        let ctx = || format!("{na} ⊗ {nb} → {nz}, f = {:?}, g = {:?}", f.map, g.map);
                        match got {
                            Factorization::Through(h) => {
                                ensure(commute && oracle == vec![h.map.clone()], ctx)?;
                                through += 1;
                            }
                            Factorization::Refused { a: x, b: y } => {
                                ensure(!commute && oracle.is_empty(), ctx)?;
                                ensure(!z.comm(f.apply(x), g.apply(y)), ctx)?;
                                refused += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("unit law on corpus, 2²⊗2² ≅ 2⁴, {through} factorizations and {refused} refusals agree with search"))
}

fn brute_force_frame(sp: &Spectra) -> Vec<BohrElement> {
    let sizes: Vec<usize> = sp.points.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().sum();
    let mut out = Vec::new();
    for code in 0u64..1 << total {
        let mut shift = 0;
        let opens = sizes
            .iter()
            .map(|&s| {
                let m = (code >> shift) & ((1u64 << s) - 1);
                shift += s;
                m
            })
            .collect();
        let x = BohrElement { opens };
        if admissibility_violation(sp, &x).is_none() {
            out.push(x);
        }
    }
    out.sort();
    out
}

fn bohrification() -> Outcome {
    let start = Instant::now();
    let six = corpus::paper_six();
    let sp6 = Spectra::of(&six).unwrap();
    let frame6 = enumerate_frame(&sp6, DEFAULT_MAX_FRAME).map_err(|e| e.to_string())?;
    let brute = brute_force_frame(&sp6);
    ensure(frame6.len() == 17 && brute == frame6, || format!("|S(MO2)| = {} / {}", frame6.len(), brute.len()))?;

    let algebras = small();
    let mut frames = Vec::new();
    for (name, a) in &algebras {
        let sp = Spectra::of(a).unwrap();
        let frame = enumerate_frame(&sp, DEFAULT_MAX_FRAME).map_err(|e| e.to_string())?;
        check_frame_laws(&sp, &frame).map_err(|e| format!("{name}: {e}"))?;
        frames.push((sp, frame));
    }
    let (mut maps, mut rc_maps, mut unexplained) = (0, 0, 0);
    for (i, (na, a)) in algebras.iter().enumerate() {
        for (j, (nb, b)) in algebras.iter().enumerate() {
            let (sp_a, frame) = &frames[i];
            let sp_b = &frames[j].0;
            for f in homs(a, b) {
                let pf = PushForward::new(a, sp_a, b, sp_b, &f).map_err(|e| e.to_string())?;
                let r = frame_morphism_report(sp_a, &pf, frame);
                let ctx = || format!("{na} → {nb}, f = {:?}: {r:?}", f.map);
                ensure(r.preserves_top && r.preserves_all_joins() && r.images_admissible, ctx)?;
                if reflects_commeasurability(a, b, &f) {
                    ensure(r.preserves_binary_meets, ctx)?;
                    rc_maps += 1;
                } else if r.preserves_binary_meets {
                    unexplained += 1;
                }
                maps += 1;
            }
        }
    }
    let (a, b, m) = corpus::paper_m();
    let (sp_a, sp_b) = (Spectra::of(&a).unwrap(), Spectra::of(&b).unwrap());
    let pf = PushForward::new(&a, &sp_a, &b, &sp_b, &m).map_err(|e| e.to_string())?;
    let r = frame_morphism_report(&sp_a, &pf, &frame6);
    let w = r.meet_witness.clone().ok_or("no meet witness for m")?;
    let lhs = pf.apply(&frame6[w.f].meet(&frame6[w.g]));
    let rhs = pf.apply(&frame6[w.f]).meet(&pf.apply(&frame6[w.g]));
    ensure(lhs.opens[w.member] != rhs.opens[w.member], || "witness does not re-check".into())?;
    within(Duration::from_secs(120), start)?;
    Ok(format!(
        "|S(MO2)| = 17 twice, {maps} maps ({rc_maps} reflecting), m has a meet witness, {unexplained} non-reflecting maps preserve meets"
    ))
}

fn lemma_conditions() -> Outcome {
    let algebras = small();
    let mut n = 0;
    for (na, a) in &algebras {
        let sp_a = Spectra::of(a).unwrap();
        for (nb, b) in &algebras {
            let sp_b = Spectra::of(b).unwrap();
            for f in homs(a, b) {
                let (ca, cb) = (lemma_condition_a(&sp_a, &sp_b, &f), reflects_commeasurability(a, b, &f));
                ensure(ca == cb, || format!("{na} → {nb}, f = {:?}: (a) = {ca}, (b) = {cb}", f.map))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} morphisms"))
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| random_c(rng));
    CMatrix::new(m.qr().q()).expect("square")
}

fn conj(u: &CMatrix, a: &CMatrix) -> CMatrix {
    &(u * a) * &u.adjoint()
}

fn matrix_bridge() -> Outcome {
    let pauli = MatrixSeed::new(2, vec![CMatrix::sigma_z(), CMatrix::sigma_x()], EPS_STRUCTURAL).unwrap();
    let pa = proj_functor(&pauli, DEFAULT_PROJECTION_LIMIT).map_err(|e| e.to_string())?;
    ensure(are_isomorphic(&pa.algebra, &corpus::paper_six()), || "Proj{σz, σx} ≇ MO2".into())?;

    let i2 = CMatrix::identity(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let seeds: Vec<Vec<CMatrix>> = vec![
        vec![CMatrix::sigma_z(), CMatrix::sigma_x()],
        vec![CMatrix::sigma_z()],
        vec![CMatrix::sigma_x(), CMatrix::sigma_y()],
        vec![CMatrix::sigma_x(), CMatrix::sigma_y(), CMatrix::sigma_z()],
        vec![CMatrix::real_diag(&[1., 2., 3.])],
        vec![CMatrix::real_diag(&[1., 2., 3.]), CMatrix::real_diag(&[0., 0., 5.])],
        vec![CMatrix::sigma_z().kron(&i2), i2.kron(&CMatrix::sigma_x())],
        vec![CMatrix::sigma_z().kron(&CMatrix::sigma_z()), CMatrix::sigma_x().kron(&CMatrix::sigma_x())],
        vec![CMatrix::real_diag(&[1., 1., 2.]), CMatrix::from_real_rows(&[&[0., 1., 0.], &[1., 0., 0.], &[0., 0., 1.]])],
        vec![CMatrix::from_real_rows(&[&[h, h], &[h, -h]]), CMatrix::sigma_z()],
    ];
    for (i, gens) in seeds.into_iter().enumerate() {
        let dim = gens[0].dim();
        let seed = MatrixSeed::new(dim, gens, 1e-8).map_err(|e| format!("seed {i}: {e}"))?;
        let ok = proj_c_commute_check(&seed, DEFAULT_PROJECTION_LIMIT).map_err(|e| format!("seed {i}: {e}"))?;
        ensure(ok, || format!("Proj∘C ≠ C∘Proj on seed {i}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in 0..100 {
        let n = rng.random_range(1..=6);
        let u = random_unitary(&mut rng, n);
        let eig: Vec<C64> = (0..n)
            .map(|_| if rng.random_bool(0.4) { C64::new(0.0, 0.0) } else { random_c(&mut rng) + C64::new(0.5, 0.0) })
            .collect();
        // keep nonzero eigenvalues well away from zero
        let eig: Vec<C64> = eig.into_iter().map(|z| if z.norm() > 0.0 && z.norm() < 0.1 { C64::new(0.5, 0.5) } else { z }).collect();
        let a = conj(&u, &CMatrix::diag(&eig));
        let support: Vec<C64> = eig.iter().map(|z| C64::new(f64::from(u8::from(z.norm() > 0.0)), 0.0)).collect();
        let expected = conj(&u, &CMatrix::diag(&support));
        let r = rp(&a, 1e-8).map_err(|e| format!("matrix {t}: {e}"))?;
        ensure(r.projection.dist(&expected) <= 1e-8, || format!("matrix {t}: RP differs from the support"))?;
        let c = gen_comm_subalg(n, std::slice::from_ref(&a), 1e-8).map_err(|e| e.to_string())?;
        ensure(annihilator_check(&a, &r, &c, 1e-8), || format!("matrix {t}: annihilator check fails"))?;
    }

    let mut worst: f64 = 0.0;
    for t in 0..20 {
        let n = rng.random_range(2..=5);
        let u = random_unitary(&mut rng, n);
        let w = random_unitary(&mut rng, n);
        let d: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let g1 = CMatrix::real_diag(&d);
        let g2 = conj(&w, &CMatrix::real_diag(&d.iter().map(|x| x * x - 1.0).collect::<Vec<_>>()));
        let seed = MatrixSeed::new(n, vec![g1, g2], 1e-8).map_err(|e| e.to_string())?;
        let cocone = Conjugation { u: u.clone() };
        let m = mediating_cstar(&seed, &cocone, 1e-10).map_err(|e| format!("unitary {t}: {e}"))?;
        worst = worst.max(mediating_residual(&seed, &m).map_err(|e| e.to_string())?);
        let v = random_unitary(&mut rng, n);
        let sample = conj(&v, &CMatrix::diag(&(0..n).map(|_| random_c(&mut rng)).collect::<Vec<_>>()));
        worst = worst.max(m.apply(&sample).map_err(|e| e.to_string())?.dist(&conj(&u, &sample)));
    }
    ensure(worst <= 1e-10, || format!("conjugation reproduced only to {worst:.2e}"))?;
    Ok(format!("Proj{{σz,σx}} ≅ MO2, 10 seeds commute, 100 RP checks, conjugation to {worst:.1e}"))
}

fn functoriality() -> Outcome {
    let algebras = [corpus::boolean(2), corpus::paper_six(), corpus::boolean(3), corpus::mo(3), corpus::boolean(1)];
    let spectra: Vec<Spectra> = algebras.iter().map(|a| Spectra::of(a).unwrap()).collect();
    let frames: Vec<Vec<BohrElement>> = spectra.iter().map(|s| enumerate_frame(s, DEFAULT_MAX_FRAME).unwrap()).collect();
    for (i, a) in algebras.iter().enumerate() {
        let id = PbaMorphism::identity(a);
        let pf = PushForward::new(a, &spectra[i], a, &spectra[i], &id).map_err(|e| e.to_string())?;
        ensure(frames[i].iter().all(|x| pf.apply(x) == *x), || format!("S(id) ≠ id on algebra {i}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut pairs = 0;
    let mut seen = HashSet::new();
    while pairs < 20 {
        let (i, j, k) = (rng.random_range(0..5), rng.random_range(0..5), rng.random_range(0..5));
        let (fs, gs) = (homs(&algebras[i], &algebras[j]), homs(&algebras[j], &algebras[k]));
        if fs.is_empty() || gs.is_empty() {
            continue;
        }
        let (fi, gi) = (rng.random_range(0..fs.len()), rng.random_range(0..gs.len()));
        if !seen.insert((i, j, k, fi, gi)) {
            continue;
        }
        let (f, g) = (&fs[fi], &gs[gi]);
        let gf = f.then(g);
        let (a, b, c) = (&algebras[i], &algebras[j], &algebras[k]);
        let (sa, sb, sc) = (&spectra[i], &spectra[j], &spectra[k]);
        let sf = PushForward::new(a, sa, b, sb, f).map_err(|e| e.to_string())?;
        let sg = PushForward::new(b, sb, c, sc, g).map_err(|e| e.to_string())?;
        let sgf = PushForward::new(a, sa, c, sc, &gf).map_err(|e| e.to_string())?;
        for x in &frames[i] {
            ensure(sgf.apply(x) == sg.apply(&sf.apply(x)), || format!("S(g∘f) ≠ Sg∘Sf on pair {pairs}"))?;
        }
        let points = limit_k(c, sc).map_err(|e| e.to_string())?;
        let two = initial();
        for p in &points {
            let v = p.valuation(c, sc);
            let direct = k_on_morphism(&gf, &v);
            let staged = k_on_morphism(f, &k_on_morphism(g, &v));
            ensure(direct == staged, || format!("K(g∘f) ≠ K(f)∘K(g) on pair {pairs}"))?;
            ensure(direct.is_morphism(a, &two), || format!("K(g∘f) leaves K(A) on pair {pairs}"))?;
        }
        pairs += 1;
    }
    Ok("S(id) = id on 5 frames, 20 composable pairs for S and K".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("colimit of Boolean subalgebras", colimit_theorem),
        ("structure of C(A)", poset_structure),
        ("six-element counterexample", paper_counterexample),
        ("Stone extension", stone_extension),
        ("Kochen-Specker", kochen_specker),
        ("tensor product", tensor_criterion),
        ("Bohrification", bohrification),
        ("reflecting commeasurability", lemma_conditions),
        ("matrix bridge", matrix_bridge),
        ("functoriality", functoriality),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
