//! The `palg` command line: each verb reads input files, runs one pipeline
//! and emits a [`Report`].
//!
//! Exit codes: 0 when every check passes, 1 when a property fails, 2 for
//! usage and parse errors, 3 when a search hits its cutoff.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use partial_algebra::bohr::{
    enumerate_frame, frame_morphism_report, join_irreducibles, reflects_commeasurability, three_families,
    two_dim_nontriviality, PushForward,
};
use partial_algebra::colimit::{default_apexes, verify_colimit, ColimitOptions};
use partial_algebra::construct::{coproduct, product};
use partial_algebra::cstar::proj::{proj_c_commute_check, proj_functor, DEFAULT_PROJECTION_LIMIT};
use partial_algebra::cstar::rays::{orthogonal_completion, ray_blocks};
use partial_algebra::format::{algebra_from_text, parse_rays, parse_seed, write_pba, InputKind};
use partial_algebra::morphism::enumerate_morphisms;
use partial_algebra::poset::boolean_subalgebras;
use partial_algebra::report::{InputDigest, Report, ReportFormat};
use partial_algebra::stone::{is_kochen_specker, limit_k, reflection_l, Spectra};
use partial_algebra::tensor::tensor;
use partial_algebra::{elems, Error, PartialBooleanAlgebra};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CUTOFF: i32 = 3;

/// Largest number of morphisms inspected by `bohrify A B`.
const MORPHISM_CAP: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "palg", version, about = "Finite partial Boolean algebras and their spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Verb,
    /// Numerical tolerance for rays and matrices.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Largest apex for exhaustive uniqueness checks.
    #[arg(long, global = true, default_value_t = 16)]
    pub max_apex: usize,
    /// Largest Bohrification frame enumerated.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_frame: usize,
    /// Seed for randomized cocones.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `json` or `text`.
    #[arg(long, global = true, default_value = "json")]
    pub format: String,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Check the axioms.
    Validate { input: PathBuf },
    /// List the Boolean subalgebras and their order.
    Subalgebras { input: PathBuf },
    /// Check that A is the colimit of its Boolean subalgebras.
    ColimitCheck { input: PathBuf },
    /// Coproduct of two algebras, glued at 0 and 1.
    Coproduct { a: PathBuf, b: PathBuf },
    /// Componentwise product.
    Product { a: PathBuf, b: PathBuf },
    /// Tensor product with its two coprojections.
    Tensor { a: PathBuf, b: PathBuf },
    /// Stone spectra of the Boolean subalgebras.
    Spectrum { input: PathBuf },
    /// Two-valued morphisms, i.e. points of the limit of spectra.
    KsSearch { input: PathBuf },
    /// The Boolean reflection.
    Reflect { input: PathBuf },
    /// The Bohrification frame, and with a second algebra the action of
    /// every morphism between them.
    Bohrify { input: PathBuf, target: Option<PathBuf> },
    /// Read a matrix seed and emit its projection algebra.
    MatrixImport { input: PathBuf },
    /// Build the projection algebra of a seed and compare with the
    /// commutative subalgebras.
    Proj { input: PathBuf },
    /// Orthogonal bases of a ray set and the Kochen-Specker property.
    KsRays { input: PathBuf },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Validate { .. } => "validate",
            Verb::Subalgebras { .. } => "subalgebras",
            Verb::ColimitCheck { .. } => "colimit-check",
            Verb::Coproduct { .. } => "coproduct",
            Verb::Product { .. } => "product",
            Verb::Tensor { .. } => "tensor",
            Verb::Spectrum { .. } => "spectrum",
            Verb::KsSearch { .. } => "ks-search",
            Verb::Reflect { .. } => "reflect",
            Verb::Bohrify { .. } => "bohrify",
            Verb::MatrixImport { .. } => "matrix-import",
            Verb::Proj { .. } => "proj",
            Verb::KsRays { .. } => "ks-rays",
        }
    }
}

/// What a run prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<(InputKind, String), Failure> {
        let kind = InputKind::of_path(path)
            .ok_or_else(|| Failure::Usage(format!("{}: unrecognised extension", path.display())))?;
        let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.digests.push(InputDigest::of(path.display().to_string(), &bytes));
        let text = String::from_utf8(bytes).map_err(|_| Failure::Usage(format!("{}: not UTF-8", path.display())))?;
        Ok((kind, text))
    }

    fn algebra(&mut self, path: &Path, eps: f64) -> Result<PartialBooleanAlgebra, Failure> {
        let (kind, text) = self.read(path)?;
        Ok(algebra_from_text(kind, &text, eps)?)
    }
}

fn member_labels(a: &PartialBooleanAlgebra, set: &partial_algebra::ElemSet) -> Vec<String> {
    elems(set).into_iter().map(|x| a.label(x).to_string()).collect()
}

fn algebra_summary(a: &PartialBooleanAlgebra) -> Result<Value, Error> {
    Ok(json!({
        "elements": a.len(),
        "is_boolean": a.is_boolean(),
        "pba": write_pba(a)?,
    }))
}

/// Results, pass flag and one-line summary of a verb.
fn execute(cli: &Cli, inputs: &mut Inputs) -> Result<(Value, bool, String), Failure> {
    let eps = cli.tolerance;
    match &cli.command {
        Verb::Validate { input } => {
            let (kind, text) = inputs.read(input)?;
            match algebra_from_text(kind, &text, eps) {
                Ok(a) => Ok((
                    json!({"elements": a.len(), "valid": true, "is_boolean": a.is_boolean()}),
                    true,
                    format!("valid, {} elements", a.len()),
                )),
                Err(Error::Invalid(r)) => Ok((
                    json!({"valid": false, "violations": serde_json::to_value(&r).unwrap_or(Value::Null)}),
                    false,
                    "validation failed".into(),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Verb::Subalgebras { input } => {
            let a = inputs.algebra(input, eps)?;
            let poset = boolean_subalgebras(&a, partial_algebra::poset::DEFAULT_SUBALGEBRA_LIMIT)?;
            let members: Vec<Vec<String>> = poset.members.iter().map(|m| member_labels(&a, m)).collect();
            let structure = poset.structure_report();
            let results = json!({
                "count": poset.len(),
                "members": members,
                "covers": poset.hasse_edges(),
                "structure": structure,
                "maximal": (0..poset.len()).filter(|&i| (0..poset.len()).all(|j| j == i || !poset.leq(i, j))).collect::<Vec<_>>(),
            });
            Ok((results, true, format!("{} Boolean subalgebras", poset.len())))
        }
        Verb::ColimitCheck { input } => {
            let a = inputs.algebra(input, eps)?;
            let poset = boolean_subalgebras(&a, partial_algebra::poset::DEFAULT_SUBALGEBRA_LIMIT)?;
            let apexes: Vec<_> = default_apexes().into_iter().filter(|(_, x)| x.len() <= cli.max_apex).collect();
            let opts = ColimitOptions {
                max_apex: cli.max_apex,
                seed: cli.seed,
                ..ColimitOptions::default()
            };
            let report = verify_colimit(&a, &poset, &apexes, &opts)?;
            let checked = report.outcomes.len();
            let failures = report.outcomes.iter().filter(|o| !o.passed).count();
            let summary = format!("{checked} cocones checked, {failures} failures");
            Ok((serde_json::to_value(&report).expect("report serializes"), report.passed, summary))
        }
        Verb::Coproduct { a, b } | Verb::Product { a, b } => {
            let (x, y) = (inputs.algebra(a, eps)?, inputs.algebra(b, eps)?);
            let is_coproduct = matches!(cli.command, Verb::Coproduct { .. });
            let (s, maps) = if is_coproduct { coproduct(&[&x, &y])? } else { product(&[&x, &y])? };
            let mut results = algebra_summary(&s)?;
            results["maps"] = json!(maps.iter().map(|m| &m.map).collect::<Vec<_>>());
            let valid = s.validate().is_pass();
            Ok((results, valid, format!("{} elements", s.len())))
        }
        Verb::Tensor { a, b } => {
            let (x, y) = (inputs.algebra(a, eps)?, inputs.algebra(b, eps)?);
            let t = tensor(&x, &y)?;
            let mut results = algebra_summary(&t.algebra)?;
            results["kappa_a"] = json!(t.kappa_a.map);
            results["kappa_b"] = json!(t.kappa_b.map);
            Ok((results, true, format!("{} elements", t.algebra.len())))
        }
        Verb::Spectrum { input } => {
            let a = inputs.algebra(input, eps)?;
            let sp = Spectra::of(&a)?;
            let members: Vec<Value> = (0..sp.poset.len())
                .map(|i| {
                    json!({
                        "elements": member_labels(&a, &sp.poset.members[i]),
                        "points": sp.points[i].iter().map(|&p| a.label(p)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok((json!({"members": members}), true, format!("{} spectra", sp.poset.len())))
        }
        Verb::KsSearch { input } => {
            let a = inputs.algebra(input, eps)?;
            let sp = Spectra::of(&a)?;
            let points = limit_k(&a, &sp)?;
            let valuations: Vec<Vec<&str>> = points
                .iter()
                .map(|p| {
                    let v = p.valuation(&a, &sp);
                    (0..a.len())
                        .filter(|&x| v.map[x] == 1 && (0..a.len()).all(|y| y == x || !a.leq(y, x) || v.map[y] == 0))
                        .map(|x| a.label(x))
                        .collect()
                })
                .collect();
            let results = json!({
                "k_count": points.len(),
                "is_kochen_specker": points.is_empty(),
                "true_minimal_elements": valuations,
            });
            Ok((results, true, format!("|K| = {}", points.len())))
        }
        Verb::Reflect { input } => {
            let a = inputs.algebra(input, eps)?;
            let r = reflection_l(&a)?;
            let results = json!({
                "points": r.points.len(),
                "elements": r.algebra.len(),
                "unit": r.unit.map,
                "is_kochen_specker": r.points.is_empty(),
            });
            Ok((results, true, format!("reflection has {} elements", r.algebra.len())))
        }
        Verb::Bohrify { input, target } => {
            let a = inputs.algebra(input, eps)?;
            let sp = Spectra::of(&a)?;
            let frame = enumerate_frame(&sp, cli.max_frame)?;
            let gens = join_irreducibles(&sp, &frame);
            let mut results = json!({
                "frame_size": frame.len(),
                "join_irreducibles": gens,
                "two_dim_nontrivial": two_dim_nontriviality(&a)?,
            });
            let mut passed = true;
            if let Some(t) = target {
                let b = inputs.algebra(t, eps)?;
                let sp_b = Spectra::of(&b)?;
                let mut reports = Vec::new();
                for f in enumerate_morphisms(&a, &b, MORPHISM_CAP)? {
                    let pf = PushForward::new(&a, &sp, &b, &sp_b, &f)?;
                    let r = frame_morphism_report(&sp, &pf, &frame);
                    let rc = reflects_commeasurability(&a, &b, &f);
                    passed &= r.preserves_top && r.preserves_all_joins() && r.images_admissible;
                    passed &= !rc || r.preserves_binary_meets;
                    reports.push(json!({"map": f.map, "reflects_commeasurability": rc, "report": r}));
                }
                results["morphisms"] = json!(reports);
            }
            let summary = format!("frame has {} elements", frame.len());
            Ok((results, passed, summary))
        }
        Verb::MatrixImport { input } | Verb::Proj { input } => {
            let (kind, text) = inputs.read(input)?;
            if kind != InputKind::Seed {
                return Err(Failure::Usage(format!("{}: expected a JSON matrix seed", input.display())));
            }
            let mut seed = parse_seed(&text)?;
            seed.tolerance = seed.tolerance.max(eps);
            let pa = proj_functor(&seed, DEFAULT_PROJECTION_LIMIT)?;
            let mut results = algebra_summary(&pa.algebra)?;
            let mut passed = true;
            if matches!(cli.command, Verb::Proj { .. }) {
                let commutes = proj_c_commute_check(&seed, DEFAULT_PROJECTION_LIMIT)?;
                results["proj_c_commute"] = json!(commutes);
                passed = commutes;
            }
            Ok((results, passed, format!("{} projections", pa.algebra.len())))
        }
        Verb::KsRays { input } => {
            let (kind, text) = inputs.read(input)?;
            if kind != InputKind::Rays {
                return Err(Failure::Usage(format!("{}: expected a ray file", input.display())));
            }
            let set = parse_rays(&text)?;
            let raw = ray_blocks(&set.rays, set.dim, eps)?;
            let completed = orthogonal_completion(&set.rays, set.dim, eps)?;
            let a = algebra_from_text(InputKind::Rays, &text, eps)?;
            let ks = is_kochen_specker(&a)?;
            let results = json!({
                "dim": set.dim,
                "rays": set.rays.len(),
                "bases": raw.blocks.len(),
                "completed_rays": completed.len(),
                "completed_bases": ray_blocks(&completed, set.dim, eps)?.blocks.len(),
                "elements": a.len(),
                "is_kochen_specker": ks,
                "nontrivial_frame_witnesses": three_families(&Spectra::of(&a)?)?.len(),
            });
            Ok((results, true, format!("Kochen-Specker: {ks}")))
        }
    }
}

fn options_value(cli: &Cli) -> Value {
    json!({
        "tolerance": cli.tolerance,
        "max_apex": cli.max_apex,
        "max_frame": cli.max_frame,
        "seed": cli.seed,
    })
}

/// Parses arguments (including the program name) and runs the verb.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code }
            } else {
                Outcome { stdout: text, stderr: String::new(), code }
            };
        }
    };
    let format: ReportFormat = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code: EXIT_USAGE,
            }
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs { digests: Vec::new() };
    let mut cutoff = false;
    let (results, passed, summary) = match execute(&cli, &mut inputs) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
                code: EXIT_USAGE,
            }
        }
        Err(Failure::Core(e)) => {
            let code = match &e {
                e if e.is_cutoff() => EXIT_CUTOFF,
                Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            };
            if code == EXIT_USAGE {
                return Outcome {
                    stdout: String::new(),
                    stderr: format!("error: {e}\n"),
                    code,
                };
            }
            cutoff = code == EXIT_CUTOFF;
            (json!({"error": e.to_string()}), false, e.to_string())
        }
    };
    let report = Report {
        verb: cli.command.name().to_string(),
        inputs: inputs.digests,
        options: options_value(&cli),
        results,
        passed,
        summary,
        wall_time_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
    };
    let text = report.emit(format);
    let code = match (cutoff, passed) {
        (true, _) => EXIT_CUTOFF,
        (false, true) => EXIT_PASS,
        (false, false) => EXIT_FAIL,
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                stdout: String::new(),
                stderr: String::new(),
                code,
            },
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", path.display()),
                code: EXIT_USAGE,
            },
        },
        None => Outcome {
            stdout: text,
            stderr: String::new(),
            code,
        },
    }
}
