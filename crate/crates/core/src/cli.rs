//! The `fibercheck` command line: parse a document, run one check, emit a
//! text or JSON report. Exit codes: 0 normal, 2 input error, 3 violation.

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complex::{BoundedComplex, FiberProfile};
use crate::criteria::{
    bad_primes, check_isom_criterion, check_main_theorem_with, check_map_criterion, checked_primes,
    ext_flatness_criterion, is_universally_exact_with, per_prime, tor_flatness_criterion, CheckOptions,
    FlatnessCriterionReport, Verdict,
};
use crate::document::Document;
use crate::error::{Error, Result};
use crate::homotopy::null_homotopy;
use crate::koszul::{koszul, koszul_selfduality};
use crate::linalg::snf;
use crate::matrix::ExactMatrix;
use crate::module::{critical_primes, is_flat, prime_filtration, InvariantFactors};
use crate::random::{random_complex, ComplexShape, Population};
use crate::resolution::{free_resolution, repeated_syzygy};
use crate::ring::{parse_rational, BaseRing, Prime};
use crate::towers::{gallery, FinitenessVerdict, GalleryParams, TowerBounds, DEFAULT_MAX_STAGE, DEFAULT_WINDOW};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "fibercheck", version, about = "Exact fiberwise acyclicity and flatness checks")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized inputs; embedded in reports.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Evaluate per-prime checks concurrently.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Document path, or `-` for stdin.
    pub input: Option<String>,
    /// Document given inline.
    #[arg(long, conflicts_with = "input")]
    pub inline: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ComplexInput {
    #[command(flatten)]
    pub doc: Input,
    /// Generate a random complex over Z from `--seed` instead of reading one.
    #[arg(long, value_enum, conflicts_with_all = ["input", "inline"])]
    pub random: Option<RandomKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Split,
    Acyclic,
    Homology,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smith normal form of a matrix.
    Snf(Input),
    /// Homology of a complex in every degree.
    Homology(ComplexInput),
    /// Fiber homology (complex) or fiber dimension (module) at primes.
    Fibers {
        #[command(flatten)]
        input: ComplexInput,
        /// Primes such as `(0)`, `2`, `(7)`; default: generic point and bad primes.
        #[arg(long = "prime")]
        primes: Vec<Prime>,
    },
    /// Bad primes of a complex.
    Badprimes(ComplexInput),
    /// Fiberwise acyclicity hypothesis against its conclusions.
    CheckTheorem(ComplexInput),
    /// Injective with flat cokernel, pure, and fiberwise injective.
    CheckMap(Input),
    /// Three computations of universal exactness.
    CheckUniversal(ComplexInput),
    /// Tor against residue fields and the flatness criterion.
    Tor {
        #[command(flatten)]
        input: Input,
        /// Highest Tor degree computed.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Ext into residue fields and the flatness criterion.
    Ext {
        #[command(flatten)]
        input: Input,
        /// Highest Ext degree computed.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Koszul complex on ring elements, with its verified self-duality.
    Koszul {
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Elements, e.g. `2 3 5`.
        #[arg(required = true, allow_negative_numbers = true)]
        elements: Vec<String>,
    },
    /// Null-homotopy certificate of a free complex, or NONE.
    Nullhomotopy(ComplexInput),
    /// Prime filtration of a module.
    Filtration(Input),
    /// Towers with known colimits.
    Gallery {
        /// sum-inverse-primes, injective-hull or dvr-fraction-field.
        name: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        max_prime: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STAGE)]
        max_stage: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
    },
}

/// A rendered report plus the exit code it calls for.
struct Report {
    text: String,
    json: Value,
    exit: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, exit: EXIT_OK }
    }
}

/// Run with explicit arguments and streams. `args[0]` is the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
            };
            let _ = out.write_all(body.as_bytes());
            report.exit
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_fatal() {
                EXIT_VIOLATION
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn read_document(input: &Input, stdin: &mut dyn Read) -> Result<Document> {
    let text = match (&input.inline, input.input.as_deref()) {
        (Some(s), _) => s.clone(),
        (None, Some("-")) | (None, None) => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            s
        }
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?,
    };
    Document::parse(&text)
}

/// The complex to work on and the seed it came from, if random.
fn read_complex(cli: &Cli, input: &ComplexInput, stdin: &mut dyn Read) -> Result<(BoundedComplex, Option<u64>)> {
    match input.random {
        Some(kind) => {
            let seed = cli.seed.unwrap_or(0);
            let pop = match kind {
                RandomKind::Split => Population::SplitExact,
                RandomKind::Acyclic => Population::Acyclic,
                RandomKind::Homology => Population::WithHomology,
            };
            Ok((random_complex(BaseRing::INTEGERS, seed, pop, ComplexShape::default())?, Some(seed)))
        }
        None => Ok((read_document(&input.doc, stdin)?.complex()?, None)),
    }
}

fn rows_json(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

fn prime_list(ps: &[Prime]) -> String {
    ps.iter().map(Prime::to_string).collect::<Vec<_>>().join(", ")
}

fn module_text(inv: &InvariantFactors) -> String {
    inv.to_string()
}

fn with_seed(mut v: Value, seed: Option<u64>, c: &BoundedComplex) -> Value {
    if let Some(s) = seed {
        v["seed"] = json!(s);
        v["input"] = serde_json::to_value(Document::from_complex(c)).expect("json");
    }
    v
}

fn seed_line(seed: Option<u64>) -> String {
    seed.map(|s| format!("seed: {s}\n")).unwrap_or_default()
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Report> {
    let opts = CheckOptions { parallel: cli.parallel };
    match &cli.command {
        Command::Snf(input) => {
            let a = read_document(input, stdin)?.matrix()?;
            let s = snf(&a);
            s.verify(&a)?;
            let divisors: Vec<String> = s.elementary_divisors.iter().map(|d| d.to_string()).collect();
            let text = format!(
                "ring: {}\nelementary divisors: [{}]\nU = {}\nD = {}\nV = {}\nverified: A = U D V\n",
                a.ring(),
                divisors.join(", "),
                s.u,
                s.d,
                s.v
            );
            let json = json!({
                "command": "snf", "ring": a.ring(), "elementary_divisors": divisors,
                "U": rows_json(&s.u), "D": rows_json(&s.d), "V": rows_json(&s.v), "verified": true,
            });
            Ok(Report::ok(text, json))
        }
        Command::Homology(input) => {
            let (c, seed) = read_complex(cli, input, stdin)?;
            let mut text = seed_line(seed);
            let mut items = Vec::new();
            for i in c.degrees().rev() {
                let h = c.homology(i)?.invariant_factors();
                let _ = writeln!(text, "H_{i} = {}", module_text(&h));
                items.push(json!({"degree": i, "module": h}));
            }
            let json = with_seed(json!({"command": "homology", "ring": c.ring(), "homology": items}), seed, &c);
            Ok(Report::ok(text, json))
        }
        Command::Fibers { input, primes } => {
            if input.random.is_none() {
                let doc = read_document(&input.doc, stdin)?;
                if let crate::document::Payload::Module(_) = doc.payload {
                    return module_fibers(&doc, primes, opts);
                }
                return complex_fibers(&doc.complex()?, None, primes, opts);
            }
            let (c, seed) = read_complex(cli, input, stdin)?;
            complex_fibers(&c, seed, primes, opts)
        }
        Command::Badprimes(input) => {
            let (c, seed) = read_complex(cli, input, stdin)?;
            let b = bad_primes(&c)?;
            let mut text = seed_line(seed);
            let _ = writeln!(text, "bad primes: {}", if b.primes.is_empty() { "none".into() } else { prime_list(&b.primes) });
            for (p, degs) in &b.witness {
                let _ = writeln!(text, "  {p}: boundaries {degs:?}");
            }
            let json = with_seed(json!({"command": "badprimes", "ring": c.ring(), "bad_primes": b}), seed, &c);
            Ok(Report::ok(text, json))
        }
        Command::CheckTheorem(input) => {
            let (c, seed) = read_complex(cli, input, stdin)?;
            let r = check_main_theorem_with(&c, None, opts)?;
            let mut text = seed_line(seed);
            let _ = writeln!(text, "checked primes: {}", prime_list(&r.checked_primes));
            for p in &r.fiber_profiles {
                let _ = writeln!(text, "  {}: {}", p.prime, profile_text(p));
            }
            let _ = writeln!(text, "hypothesis (fibers acyclic): {}", r.hypothesis_holds);
            let _ = writeln!(text, "acyclic over R: {}", r.conclusion_acyclic);
            let _ = writeln!(text, "H_0 = {} (flat: {})", r.h0, r.conclusion_h0_flat);
            for (name, ok) in &r.tensor_acyclic {
                let _ = writeln!(text, "  {name} (x) C acyclic: {ok}");
            }
            let verdict = match r.verdict {
                Verdict::Consistent => "consistent",
                Verdict::Violation => "VIOLATION",
            };
            let _ = writeln!(text, "verdict: {verdict}");
            let json = with_seed(json!({"command": "check-theorem", "ring": c.ring(), "report": r}), seed, &c);
            let exit = if r.verdict == Verdict::Violation { EXIT_VIOLATION } else { EXIT_OK };
            Ok(Report { text, json, exit })
        }
        Command::CheckMap(input) => {
            let f = read_document(input, stdin)?.map()?;
            let r = check_map_criterion(&f)?;
            let iso = check_isom_criterion(&f)?;
            let text = format!(
                "checked primes: {}\ninjective with flat cokernel: {}\npure: {}\nfiberwise injective: {}\nfiberwise isomorphism: {} (injective: {}, surjective: {})\n",
                prime_list(&r.checked_primes),
                r.injective_flat_coker,
                r.pure,
                r.fiberwise_injective,
                iso.fiberwise_isomorphism,
                iso.injective,
                iso.surjective
            );
            let json = json!({"command": "check-map", "ring": f.ring(), "purity": r, "isomorphism": iso});
            Ok(Report::ok(text, json))
        }
        Command::CheckUniversal(input) => {
            let (c, seed) = read_complex(cli, input, stdin)?;
            let r = is_universally_exact_with(&c, opts)?;
            let text = format!(
                "{}checked primes: {}\nexact with flat images: {}\nfiberwise exact: {}\nsampled total tensors exact: {} ({})\nuniversally exact: {}\n",
                seed_line(seed),
                prime_list(&r.checked_primes),
                r.exact_with_flat_images,
                r.fiberwise_exact,
                r.sampled_tensor_exact,
                r.samples.join(", "),
                r.value()
            );
            let json = with_seed(json!({"command": "check-universal", "ring": c.ring(), "report": r}), seed, &c);
            Ok(Report::ok(text, json))
        }
        Command::Tor { input, depth } => derived(read_document(input, stdin)?, *depth, "tor"),
        Command::Ext { input, depth } => derived(read_document(input, stdin)?, *depth, "ext"),
        Command::Koszul { ring, elements } => {
            let ring: BaseRing = ring.parse()?;
            let xs = elements.iter().map(|e| parse_rational(e)).collect::<Result<Vec<_>>>()?;
            let k = koszul(ring, &xs)?;
            let phi = koszul_selfduality(&k, xs.len())?;
            let mut text = format!("ring: {ring}\nranks (top first): {:?}\n", k.ranks().iter().rev().collect::<Vec<_>>());
            let mut hom = Vec::new();
            for i in k.degrees().rev() {
                let h = k.homology(i)?.invariant_factors();
                let _ = writeln!(text, "H_{i} = {h}");
                hom.push(json!({"degree": i, "module": h}));
            }
            let _ = writeln!(text, "self-duality K* = K[-{}]: verified", xs.len());
            let components: Vec<Value> = phi
                .source()
                .degrees()
                .rev()
                .map(|i| json!({"degree": i, "matrix": rows_json(&phi.component(i))}))
                .collect();
            let json = json!({
                "command": "koszul", "ring": ring, "complex": Document::from_complex(&k),
                "homology": hom, "selfduality": {"verified": true, "components": components},
            });
            Ok(Report::ok(text, json))
        }
        Command::Nullhomotopy(input) => {
            let (c, seed) = read_complex(cli, input, stdin)?;
            let mut text = seed_line(seed);
            let json = match null_homotopy(&c)? {
                Some(cert) => {
                    cert.verify(&c)?;
                    let _ = writeln!(text, "certificate (verified d h + h d = 1):");
                    let mut maps = Vec::new();
                    for i in c.degrees().rev() {
                        let h = cert.h(&c, i);
                        let _ = writeln!(text, "  h_{i} = {h}");
                        maps.push(json!({"degree": i, "matrix": rows_json(&h)}));
                    }
                    json!({"command": "nullhomotopy", "ring": c.ring(), "certificate": maps, "verified": true})
                }
                None => {
                    let _ = writeln!(text, "NONE");
                    json!({"command": "nullhomotopy", "ring": c.ring(), "certificate": Value::Null})
                }
            };
            Ok(Report::ok(text, with_seed(json, seed, &c)))
        }
        Command::Filtration(input) => {
            let m = read_document(input, stdin)?.module()?;
            let f = prime_filtration(&m)?;
            f.verify(&m)?;
            let mut text = format!("module: {m}\n");
            let mut steps = Vec::new();
            for (k, q) in f.quotient_primes.iter().enumerate() {
                let stage = f.stages[k + 1].invariant_factors();
                let _ = writeln!(text, "  M_{} = {stage}  (M_{}/M_{} = R/{q})", k + 1, k + 1, k);
                steps.push(json!({"stage": k + 1, "module": stage, "quotient_prime": q}));
            }
            let _ = writeln!(text, "verified");
            let json = json!({"command": "filtration", "ring": m.ring(), "steps": steps, "verified": true});
            Ok(Report::ok(text, json))
        }
        Command::Gallery { name, p, max_prime, max_stage, window } => {
            let params = GalleryParams {
                p: *p,
                max_prime: *max_prime,
                bounds: TowerBounds { max_stage: *max_stage, window: *window },
            };
            let g = gallery(name, params)?;
            let mut text = format!("gallery: {} over {}\n", g.name, g.ring);
            for l in &g.lines {
                let mark = if l.matches { "ok" } else { "MISMATCH" };
                let _ = writeln!(text, "  {} at {}: expected {}, {} [{mark}]", l.quantity, l.prime, l.expected, l.status);
            }
            match &g.finiteness {
                Some(FinitenessVerdict::NotFinitelyGenerated { definitive, stages_checked }) => {
                    let _ = writeln!(
                        text,
                        "colimit is not finitely generated ({}, {stages_checked} stages checked)",
                        if *definitive { "definitive" } else { "up to the checked stage" }
                    );
                }
                Some(FinitenessVerdict::NoVerdict { reason }) => {
                    let _ = writeln!(text, "no finiteness verdict: {reason}");
                }
                None => {}
            }
            let json = json!({"command": "gallery", "report": g, "all_match": g.all_match()});
            Ok(Report::ok(text, json))
        }
    }
}

fn profile_text(p: &FiberProfile) -> String {
    p.dims.iter().rev().map(|(i, d)| format!("h_{i}={d}")).collect::<Vec<_>>().join(" ")
}

fn complex_fibers(c: &BoundedComplex, seed: Option<u64>, primes: &[Prime], opts: CheckOptions) -> Result<Report> {
    let mut primes = if primes.is_empty() { checked_primes(c)? } else { primes.to_vec() };
    primes.sort();
    primes.dedup();
    let profiles = per_prime(&primes, opts.parallel, |q| {
        let p = c.fiber_profile(q)?;
        // Independent recomputation through the fiber complex.
        let f = c.fiber_complex(q)?;
        for i in c.degrees() {
            if f.homology(i)?.invariant_factors().free_rank != p.dim(i) {
                return Err(Error::Violation(format!("fiber homology disagreement at {q}, degree {i}")));
            }
        }
        Ok(p)
    })?;
    let mut text = seed_line(seed);
    for p in &profiles {
        let _ = writeln!(text, "{}: {}", p.prime, profile_text(p));
    }
    let json = with_seed(json!({"command": "fibers", "ring": c.ring(), "profiles": profiles}), seed, c);
    Ok(Report::ok(text, json))
}

fn module_fibers(doc: &Document, primes: &[Prime], opts: CheckOptions) -> Result<Report> {
    let m = doc.module()?;
    let mut primes =
        if primes.is_empty() { critical_primes(m.ring(), &[m.relations()])? } else { primes.to_vec() };
    primes.sort();
    primes.dedup();
    let dims = per_prime(&primes, opts.parallel, |q| m.fiber_dimension(q))?;
    let mut text = format!("module: {m}\n");
    let mut items = Vec::new();
    for (q, d) in primes.iter().zip(&dims) {
        let _ = writeln!(text, "{q}: dim {d}");
        items.push(json!({"prime": q, "dim": d}));
    }
    Ok(Report::ok(text, json!({"command": "fibers", "ring": m.ring(), "fibers": items})))
}

fn derived(doc: Document, depth: usize, functor: &str) -> Result<Report> {
    let m = doc.module()?;
    let r: FlatnessCriterionReport =
        if functor == "tor" { tor_flatness_criterion(&m, depth)? } else { ext_flatness_criterion(&m, depth)? };
    let res = free_resolution(&m, depth + 1)?;
    let repeat = repeated_syzygy(&res);
    let label = if functor == "tor" { "Tor" } else { "Ext" };
    let mut text = format!("module: {m}\ndepth: {} ({})\n", r.depth, r.qualifier());
    for (k, q) in r.checked_primes.iter().enumerate() {
        let dims: Vec<String> = (0..=r.depth).rev().map(|i| format!("{label}_{i}={}", r.dims[i][k])).collect();
        let _ = writeln!(text, "{q}: {}", dims.join(" "));
    }
    if let Some((start, period)) = repeat {
        let _ = writeln!(text, "syzygies repeat from degree {start} with period {period}");
    }
    let _ = writeln!(text, "positive degrees vanish: {} -> flat: {}", r.positive_degrees_vanish, r.flat);
    let _ = writeln!(text, "all degrees vanish: {} -> zero: {}", r.all_degrees_vanish, r.zero);
    debug_assert_eq!(r.flat, is_flat(&m));
    let json = json!({
        "command": functor, "ring": m.ring(), "report": r, "qualifier": r.qualifier(),
        "syzygy_repeat": repeat.map(|(s, p)| json!({"from_degree": s, "period": p})),
    });
    Ok(Report::ok(text, json))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("fibercheck").chain(args.iter().copied()), &mut std::io::empty(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn primes_parse_as_flags() {
        let cli = Cli::try_parse_from(["fibercheck", "fibers", "x.json", "--prime", "(0)", "--prime", "7"]).unwrap();
        let Command::Fibers { primes, .. } = cli.command else { panic!("wrong command") };
        assert_eq!(primes, [Prime::Generic, Prime::At(7)]);
    }

    #[test]
    fn negative_koszul_elements() {
        let (code, text) = run_str(&["koszul", "-2", "3"]);
        assert_eq!(code, EXIT_OK, "{text}");
        assert!(text.contains("verified"));
    }

    #[test]
    fn help_is_not_an_error() {
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
        assert_eq!(run_str(&[]).0, EXIT_INPUT);
    }
}
