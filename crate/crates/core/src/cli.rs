//! Command-line front end.
//!
//! Model arguments are file paths in the model text format, or generator
//! specs of the form `square:<cat>`, `sphere:<n>` or `sphere-product:<cat>:<n>`.
//! A `<cat>` is a sum (`+`, disjoint union) of products (`*`) of the atoms
//! `Z<n>`, `klein`, `ind<n>`, `interval` and `trivial`.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::colimits::{self, vk::status_name, DEFAULT_BUDGET};
use crate::double::{DoubleGC, ModelError};
use crate::format::{parse_model, parse_morphism, write_model};
use crate::models::{self, FiniteCategory};
use crate::pastings::{self, replay::derivation_harness, Env};
use crate::report::Report;
use crate::shells::{self, sample_cube, Cube3, HarnessConfig};
use crate::thin;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest model, in squares, whose cubes are enumerated exhaustively.
    #[arg(long, global = true, default_value_t = shells::harness::EXHAUSTIVE_LIMIT, value_parser = positive)]
    pub cube_cap: usize,
    /// Live edges plus squares allowed during saturation.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = positive)]
    pub coeq_budget: usize,
    /// Candidate cubes examined per thin-equivalence query.
    #[arg(long, global = true, default_value_t = thin::DEFAULT_EQUIVALENCE_BUDGET, value_parser = positive)]
    pub thin_budget: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "cubal", version, about = "Checks and colimits for finite double groupoids with connections")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct Sampling {
    /// Enumerate every cube regardless of model size.
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    /// Number of sampled cubes or pairs.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every axiom on a model.
    Validate { model: String },
    /// Check the thin-structure axioms, optionally with the rigidity check.
    Thin {
        model: String,
        #[arg(long)]
        rigidity: bool,
    },
    /// Compare the two forms of the cube commutativity condition.
    Hcl {
        model: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Check that commutative cubes compose to commutative cubes.
    Theorem25 {
        model: String,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Evaluate every step of a script.
    Eval { model: String, script: String },
    /// Check that consecutive steps of a script are equal. Without a script,
    /// replays the built-in derivations on every composable pair of
    /// commutative cubes.
    Replay {
        model: String,
        script: Option<String>,
        /// Pairs per direction for the built-in derivations.
        #[arg(long, default_value_t = usize::MAX)]
        max_pairs: usize,
    },
    /// Coequaliser of two morphisms `A ⇉ B`.
    Coeq {
        a: String,
        b: String,
        morph_a: String,
        morph_b: String,
        /// Write the quotient here in model format.
        #[arg(long)]
        out: Option<String>,
    },
    /// Pushout of `B ← A → C`.
    Pushout {
        a: String,
        b: String,
        c: String,
        morph_f: String,
        morph_g: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Glue `⊡C` from a cover of its objects and compare with `⊡C`.
    Vk {
        /// Category spec, for example `ind4`.
        groupoid: String,
        /// Object indices of one cover member, comma separated; repeat.
        #[arg(long, required = true)]
        cover: Vec<String>,
    },
    /// Print a generated model.
    Gen {
        /// One of `square`, `sphere`, `sphere-product`.
        generator: String,
        params: Vec<String>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Model { path: String, source: ModelError },
    #[error("bad spec `{0}`")]
    Spec(String),
    #[error(transparent)]
    Pasting(#[from] pastings::PastingError),
    #[error(transparent)]
    Shell(#[from] shells::ShellError),
    #[error(transparent)]
    Colimit(#[from] colimits::ColimitError),
    #[error(transparent)]
    Morphism(#[from] colimits::MorphismError),
}

fn atom(s: &str) -> Result<FiniteCategory, CliError> {
    let num = |p: &str| s.strip_prefix(p).and_then(|n| n.parse::<usize>().ok()).filter(|&n| n > 0);
    if let Some(n) = num("Z") {
        return Ok(models::cyclic_group(n));
    }
    if let Some(n) = num("ind") {
        return Ok(models::indiscrete_groupoid(n));
    }
    match s {
        "klein" => Ok(models::klein_group()),
        "interval" => Ok(models::interval_groupoid()),
        "trivial" => Ok(models::trivial_category()),
        _ => Err(CliError::Spec(s.to_owned())),
    }
}

/// Parses a category spec such as `Z2*Z2+ind3`.
pub fn parse_catspec(s: &str) -> Result<FiniteCategory, CliError> {
    let mut sum: Option<FiniteCategory> = None;
    for term in s.split('+') {
        let mut prod: Option<FiniteCategory> = None;
        for a in term.split('*') {
            let c = atom(a.trim())?;
            prod = Some(match prod {
                None => c,
                Some(p) => models::product(&p, &c),
            });
        }
        let p = prod.ok_or_else(|| CliError::Spec(s.to_owned()))?;
        sum = Some(match sum {
            None => p,
            Some(q) => models::disjoint_union(&q, &p),
        });
    }
    sum.ok_or_else(|| CliError::Spec(s.to_owned()))
}

/// Builds a model from generator name and parameters.
pub fn generate(generator: &str, params: &[&str]) -> Result<DoubleGC, CliError> {
    let bad = || CliError::Spec(format!("{generator}:{}", params.join(":")));
    let n = |p: &str| p.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(bad);
    match (generator, params) {
        ("square", [c]) => Ok(models::square_model(&parse_catspec(c)?)),
        ("sphere", [k]) => Ok(models::sphere_model(n(k)?)),
        ("sphere-product", [c, k]) => {
            Ok(models::product_double(&models::square_model(&parse_catspec(c)?), &models::sphere_model(n(k)?)))
        }
        _ => Err(bad()),
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_owned(), message: e.to_string() })
}

/// Loads a model from a file, or from a generator spec when no such file exists.
pub fn load_model(arg: &str) -> Result<Arc<DoubleGC>, CliError> {
    if !Path::new(arg).exists() {
        let mut parts = arg.split(':');
        let g = parts.next().unwrap_or("");
        if matches!(g, "square" | "sphere" | "sphere-product") {
            let params: Vec<&str> = parts.collect();
            return Ok(Arc::new(generate(g, &params)?));
        }
    }
    let text = read(arg)?;
    parse_model(&text).map(Arc::new).map_err(|source| CliError::Model { path: arg.to_owned(), source })
}

fn load_morphism(path: &str, s: &Arc<DoubleGC>, t: &Arc<DoubleGC>) -> Result<colimits::DoubleMorphism, CliError> {
    let text = read(path)?;
    parse_morphism(&text, s, t).map_err(|source| CliError::Model { path: path.to_owned(), source })
}

fn harness_config(cfg: &RunConfig, s: &Sampling) -> HarnessConfig {
    HarnessConfig {
        exhaustive: if s.exhaustive {
            Some(true)
        } else if s.samples.is_some() {
            Some(false)
        } else {
            None
        },
        samples: s.samples.unwrap_or(10_000),
        seed: cfg.seed,
    }
}

fn quotient_report(title: &str, q: &colimits::QuotientResult, out: Option<&str>) -> Result<Report, CliError> {
    let mut r = Report::new(title);
    r.set("status", status_name(q.status));
    r.set("generators_added", q.generators_added);
    r.set("rounds", q.rounds);
    r.set("live_edges", q.live_edges);
    r.set("live_squares", q.live_squares);
    if let (Some(obj), Some(p)) = (&q.object, &q.projection) {
        r.set("objects", obj.num_objects());
        r.set("edges", obj.num_edges());
        r.set("squares", obj.num_squares());
        let (a, b) = q.pair();
        let ok = a.then(p)?.same_maps(&b.then(p)?);
        r.record("projection-coequalises", ok, Vec::new);
        r.absorb("projection", colimits::validate_morphism(p));
        r.absorb("quotient", crate::validate::validate(obj).to_report("quotient"));
        if let Some(path) = out {
            std::fs::write(path, write_model(obj)).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })?;
        }
    }
    Ok(r)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<Report, CliError> {
    let cfg = &cli.config;
    let report = match &cli.command {
        Command::Validate { model } => crate::validate::validate(&*load_model(model)?).to_report("validate"),
        Command::Thin { model, rigidity } => {
            let d = load_model(model)?;
            let mut r = thin::check_thin_axioms(&d);
            if *rigidity {
                r.absorb("rigidity", thin::rigidity_check(&d, cfg.thin_budget));
            }
            r
        }
        Command::Hcl { model, sampling } => {
            let d = load_model(model)?;
            let h = harness_config(cfg, sampling);
            let exhaustive = h.exhaustive.unwrap_or(d.num_squares() <= cfg.cube_cap);
            let cubes: Vec<Cube3> = if exhaustive {
                shells::all_cubes(&d)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                (0..h.samples).filter_map(|_| sample_cube(&d, [None; 6], &mut rng)).collect()
            };
            let mut r = shells::hcl_agreement(&d, &cubes)?;
            r.set("mode", if exhaustive { "exhaustive" } else { "sampled" });
            r
        }
        Command::Theorem25 { model, sampling } => {
            let d = load_model(model)?;
            let mut h = harness_config(cfg, sampling);
            if h.exhaustive.is_none() {
                h.exhaustive = Some(d.num_squares() <= cfg.cube_cap);
            }
            shells::theorem25_harness(&d, &h)?
        }
        Command::Eval { model, script } => {
            let d = load_model(model)?;
            let s = pastings::parse_script(&read(script)?)?;
            let values = pastings::run_script(&d, &Env::new(), &s)?;
            let mut r = Report::new("eval");
            for (k, chain) in values.iter().enumerate() {
                for (i, v) in chain.iter().enumerate() {
                    r.set(&format!("derivation.{}.step.{}", k + 1, i + 1), d.sq_name(*v));
                }
            }
            r.set("derivations", values.len());
            r
        }
        Command::Replay { model, script, max_pairs } => {
            let d = load_model(model)?;
            match script {
                Some(path) => pastings::replay(&d, &Env::new(), &pastings::parse_script(&read(path)?)?)?,
                None => derivation_harness(&d, &[1, 2, 3], *max_pairs)?,
            }
        }
        Command::Coeq { a, b, morph_a, morph_b, out: dest } => {
            let (sa, sb) = (load_model(a)?, load_model(b)?);
            let fa = load_morphism(morph_a, &sa, &sb)?;
            let fb = load_morphism(morph_b, &sa, &sb)?;
            let mut r = quotient_report("coeq", &colimits::coequalise(&fa, &fb, cfg.coeq_budget)?, dest.as_deref())?;
            r.absorb("input.a", colimits::validate_morphism(&fa));
            r.absorb("input.b", colimits::validate_morphism(&fb));
            r
        }
        Command::Pushout { a, b, c, morph_f, morph_g, out: dest } => {
            let (sa, sb, sc) = (load_model(a)?, load_model(b)?, load_model(c)?);
            let f = load_morphism(morph_f, &sa, &sb)?;
            let g = load_morphism(morph_g, &sa, &sc)?;
            let p = colimits::pushout(&f, &g, cfg.coeq_budget)?;
            let mut r = quotient_report("pushout", &p.quotient, dest.as_deref())?;
            r.absorb("input.f", colimits::validate_morphism(&f));
            r.absorb("input.g", colimits::validate_morphism(&g));
            r
        }
        Command::Vk { groupoid, cover } => {
            let c = parse_catspec(groupoid)?;
            let sets = cover
                .iter()
                .map(|s| {
                    s.split(',')
                        .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::Spec(s.clone())))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            colimits::vk_harness(&c, &sets, cfg.coeq_budget)?.report
        }
        Command::Gen { generator, params } => {
            let params: Vec<&str> = params.iter().map(String::as_str).collect();
            let d = generate(generator, &params)?;
            let _ = out.write_all(write_model(&d).as_bytes());
            return Ok(Report::new("gen"));
        }
    };
    Ok(report)
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(report) => {
            if matches!(cli.command, Command::Gen { .. }) {
                return 0;
            }
            let text = match cli.config.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            if report.is_ok() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run(args: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let args: Vec<String> = std::iter::once("cubal").chain(args.iter().copied()).map(String::from).collect();
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(&args, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn catspec() {
        assert_eq!(parse_catspec("Z2*Z2").unwrap().num_arrows(), 4);
        assert_eq!(parse_catspec("Z2+Z3").unwrap().num_objects(), 2);
        assert_eq!(parse_catspec("ind3").unwrap().num_arrows(), 9);
        assert!(parse_catspec("Q8").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["validate", "square:Z2"]).0, 0);
        let (code, _, err) = run_str(&["validate", "/nonexistent/missing.dgc"]);
        assert_eq!(code, 2);
        assert!(err.contains("missing.dgc"));
        assert_eq!(run_str(&["frobnicate"]).0, 2);
    }

    #[test]
    fn json_output_parses() {
        let (code, out, _) = run_str(&["thin", "square:Z2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "PASS");
    }

    #[test]
    fn gen_output_round_trips() {
        let (code, out, _) = run_str(&["gen", "square", "Z3"]);
        assert_eq!(code, 0);
        assert_eq!(parse_model(&out).unwrap().num_squares(), 27);
    }
}
