//! The `kh` command line: argument parsing, input loading, the four
//! commands and the exit-code contract.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{dg_reduce, ChainComplex, ComplexDoc};
use crate::diagonal::{coherent_diagonality, diagonality, CoherenceVerdict, DiagonalityVerdict};
use crate::error::Error;
use crate::homology::{homology_table, two_line_check, HomologyTable};
use crate::ring::{GroundRing, Ring};
use crate::tangle::{
    assign_gravity, crossing_complex, cube_oracle, is_alternating, kh, parse_pd, random_alternating_tangle, CrossingSign,
    TangleDiagram,
};
use crate::{Q, Z};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ORACLE_MISMATCH: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

/// Diagrams with more crossings skip the cube oracle.
pub const ORACLE_MAX_CROSSINGS: usize = 10;

#[derive(Parser, Debug, Clone)]
#[command(name = "kh", version, about = "Khovanov homology of tangles and links by local reduction")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Coefficient ring.
    #[arg(long, global = true, default_value = "z")]
    pub ring: GroundRing,
    /// Cross-check against the cube-of-resolutions oracle.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Also check every partial closure (check-diagonal).
    #[arg(long, global = true)]
    pub coherent: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the randomized parts of selftest.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Extra progress output on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Homology table of a closed diagram.
    Compute { input: String },
    /// Reduced complex of a diagram or of a serialized complex, as JSON.
    Reduce { input: String },
    /// Diagonality verdict for a diagram or a serialized complex.
    CheckDiagonal { input: String },
    /// Run the built-in checks over the corpus and random instances.
    Selftest,
}

/// What an input argument turned out to be.
#[derive(Clone, Debug)]
pub enum Input {
    Diagram { name: String, diagram: TangleDiagram, alternating: Option<bool> },
    Complex { name: String, doc: ComplexDoc },
}

impl Input {
    pub fn name(&self) -> &str {
        match self {
            Input::Diagram { name, .. } | Input::Complex { name, .. } => name,
        }
    }
}

/// `KH_CORPUS_DIR`, or the corpus shipped with the crate.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os("KH_CORPUS_DIR") {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

/// Ground-truth label from a `# alternating: yes|no` line or an
/// `"alternating"` JSON field.
fn alternation_label(text: &str) -> Option<bool> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).ok()?;
        return v.get("alternating")?.as_bool();
    }
    text.lines().find_map(|l| {
        let rest = l.trim().strip_prefix('#')?.trim().strip_prefix("alternating:")?;
        match rest.trim() {
            "yes" | "true" => Some(true),
            "no" | "false" => Some(false),
            _ => None,
        }
    })
}

/// Parse file contents: a complex document or a diagram.
pub fn parse_input(name: &str, text: &str) -> Result<Input, Error> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("format").and_then(|f| f.as_str()) == Some("kh-complex") {
            let doc: ComplexDoc = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            return Ok(Input::Complex { name: name.to_string(), doc });
        }
    }
    Ok(Input::Diagram { name: name.to_string(), diagram: parse_pd(text)?, alternating: alternation_label(text) })
}

/// A path, a corpus entry name (with or without extension), or inline PD.
pub fn load_input(arg: &str) -> Result<Input, String> {
    let path = Path::new(arg);
    let found = if path.is_file() {
        Some(path.to_path_buf())
    } else {
        let dir = corpus_dir();
        [arg.to_string(), format!("{arg}.pd"), format!("{arg}.json")].into_iter().map(|n| dir.join(n)).find(|p| p.is_file())
    };
    match found {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            let name = p.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
            parse_input(&name, &text).map_err(|e| format!("{}: {e}", p.display()))
        }
        None => {
            let t = arg.trim_start();
            if t.starts_with('X') || t.starts_with('O') || t.starts_with('{') || t.starts_with("PD") {
                parse_input("inline", arg).map_err(|e| e.to_string())
            } else {
                Err(format!("{arg}: no such file or corpus entry"))
            }
        }
    }
}

/// Every `.pd` and `.json` file of a corpus directory, sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<Input>, String> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("pd" | "json")))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            parse_input(&name, &text).map_err(|e| format!("{}: {e}", p.display()))
        })
        .collect()
}

/// Parse `args` (including the program name) and run.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            }
        }
    }
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let arg = match &cfg.command {
        Command::Compute { input } | Command::Reduce { input } | Command::CheckDiagonal { input } => Some(input),
        Command::Selftest => None,
    };
    let input = match arg.map(|a| load_input(a)) {
        Some(Err(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INPUT;
        }
        Some(Ok(i)) => Some(i),
        None => None,
    };
    let result = match (&cfg.command, input.as_ref()) {
        (Command::Compute { .. }, Some(i)) => match cfg.ring {
            GroundRing::Integers => cmd_compute::<Z>(cfg, i, out, err),
            GroundRing::Rationals => cmd_compute::<Q>(cfg, i, out, err),
        },
        (Command::Reduce { .. }, Some(i)) => match cfg.ring {
            GroundRing::Integers => cmd_reduce::<Z>(cfg, i, out),
            GroundRing::Rationals => cmd_reduce::<Q>(cfg, i, out),
        },
        (Command::CheckDiagonal { .. }, Some(i)) => match cfg.ring {
            GroundRing::Integers => cmd_check_diagonal::<Z>(cfg, i, out),
            GroundRing::Rationals => cmd_check_diagonal::<Q>(cfg, i, out),
        },
        _ => cmd_selftest(cfg, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn complex_of<R: Ring>(input: &Input) -> Result<ChainComplex<R>, Error> {
    match input {
        Input::Diagram { diagram, .. } => kh::<R>(diagram),
        Input::Complex { doc, .. } => Ok(dg_reduce(&doc.to_complex::<R>()?)?.0),
    }
}

/// Oracle outcome for a closed diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleCheck {
    Agree,
    Mismatch,
    Skipped,
}

pub fn oracle_check<R: Ring>(t: &TangleDiagram, table: &HomologyTable) -> Result<OracleCheck, Error> {
    if t.n_crossings() > ORACLE_MAX_CROSSINGS {
        return Ok(OracleCheck::Skipped);
    }
    let o = cube_oracle::<R>(t)?;
    Ok(if o.same_groups(table) { OracleCheck::Agree } else { OracleCheck::Mismatch })
}

fn cmd_compute<R: Ring>(cfg: &RunConfig, input: &Input, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let Input::Diagram { name, diagram, .. } = input else {
        let c = complex_of::<R>(input)?;
        let table = homology_table(&c)?;
        return print_table(cfg, input.name(), None, &table, None, out);
    };
    if !diagram.is_closed() {
        let _ = writeln!(err, "error: {name} has open edges; compute needs a link (try reduce)");
        return Ok(EXIT_INPUT);
    }
    let start = std::time::Instant::now();
    let c = kh::<R>(diagram)?;
    let table = homology_table(&c)?;
    if cfg.verbose {
        let _ = writeln!(err, "{name}: reduced in {:?}", start.elapsed());
    }
    let oracle = if cfg.oracle { Some(oracle_check::<R>(diagram, &table)?) } else { None };
    print_table(cfg, name, Some(diagram.n_crossings()), &table, oracle, out)
}

fn print_table(
    cfg: &RunConfig,
    name: &str,
    crossings: Option<usize>,
    table: &HomologyTable,
    oracle: Option<OracleCheck>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let k = two_line_check(table);
    let oracle_word = oracle.map(|o| match o {
        OracleCheck::Agree => "agree",
        OracleCheck::Mismatch => "mismatch",
        OracleCheck::Skipped => "skipped",
    });
    if cfg.json {
        json_line(
            out,
            &serde_json::json!({
                "input": name,
                "crossings": crossings,
                "ring": table.ring.name(),
                "homology": table.to_json(),
                "two_line": k,
                "oracle": oracle_word,
            }),
        );
    } else {
        let _ = writeln!(out, "{name}: ring {}", table.ring.name());
        let _ = write!(out, "{}", table.to_text());
        match k {
            Some(k) => {
                let _ = writeln!(out, "two-line: K = {k}");
            }
            None => {
                let _ = writeln!(out, "two-line: no");
            }
        }
        if let Some(w) = oracle_word {
            let _ = writeln!(out, "oracle: {w}");
        }
    }
    Ok(if oracle == Some(OracleCheck::Mismatch) { EXIT_ORACLE_MISMATCH } else { EXIT_OK })
}

fn cmd_reduce<R: Ring>(cfg: &RunConfig, input: &Input, out: &mut dyn Write) -> Result<i32, Error> {
    let c = complex_of::<R>(input)?;
    let doc = ComplexDoc::from_complex(&c);
    if cfg.json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        let _ = writeln!(out, "{}: {} objects over {} points", input.name(), c.n_objects(), c.arity);
        for o in &doc.objects {
            let arcs: Vec<String> = o.arcs.iter().map(|[t, h]| format!("{t}>{h}")).collect();
            let _ = writeln!(out, "  r={:<3} [{}]{{{}}}  R={}", o.degree, arcs.join(" "), o.q_shift, o.rotation);
        }
        let _ = writeln!(out, "  {} nonzero differential entries", doc.differentials.len());
    }
    Ok(EXIT_OK)
}

fn cmd_check_diagonal<R: Ring>(cfg: &RunConfig, input: &Input, out: &mut dyn Write) -> Result<i32, Error> {
    let c = match input {
        Input::Diagram { diagram, .. } => kh::<R>(diagram)?,
        Input::Complex { doc, .. } => doc.to_complex::<R>()?,
    };
    let (ok, json, text) = if cfg.coherent {
        let v = coherent_diagonality(&c)?;
        (matches!(v, CoherenceVerdict::Coherent(_)), v.to_json(), v.to_string())
    } else {
        let v = diagonality(&c)?;
        (matches!(v, DiagonalityVerdict::Diagonal(_)), v.to_json(), v.to_string())
    };
    if cfg.json {
        json_line(out, &serde_json::json!({"input": input.name(), "coherent": cfg.coherent, "verdict": json}));
    } else {
        let _ = writeln!(out, "{}: {text}", input.name());
    }
    Ok(if ok { EXIT_OK } else { EXIT_PROPERTY })
}

/// One selftest line.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, r: Result<String, String>) -> Check {
    match r {
        Ok(detail) => Check { name: name.into(), passed: true, detail },
        Err(detail) => Check { name: name.into(), passed: false, detail },
    }
}

/// The selftest suite over a corpus and `seed`.
pub fn selftest(corpus: &[Input], seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(check("crossing complexes are coherently diagonal", (|| {
        let n = coherent_diagonality(&crossing_complex::<Z>(CrossingSign::Negative)).map_err(|e| e.to_string())?;
        let p = coherent_diagonality(&crossing_complex::<Z>(CrossingSign::Positive)).map_err(|e| e.to_string())?;
        match (n, p) {
            (CoherenceVerdict::Coherent(-1), CoherenceVerdict::Coherent(c)) => Ok(format!("C = -1 and {c}")),
            (n, p) => Err(format!("negative: {n}; positive: {p}")),
        }
    })()));
    let diagrams: Vec<(&str, &TangleDiagram, Option<bool>)> = corpus
        .iter()
        .filter_map(|i| match i {
            Input::Diagram { name, diagram, alternating } => Some((name.as_str(), diagram, *alternating)),
            _ => None,
        })
        .collect();
    checks.push(check("corpus links agree with the oracle", (|| {
        let mut n = 0;
        for (name, t, _) in &diagrams {
            if !t.is_closed() || t.n_crossings() > 8 {
                continue;
            }
            let z = homology_table(&kh::<Z>(t).map_err(|e| format!("{name}: {e}"))?).map_err(|e| format!("{name}: {e}"))?;
            let q = homology_table(&kh::<Q>(t).map_err(|e| format!("{name}: {e}"))?).map_err(|e| format!("{name}: {e}"))?;
            if oracle_check::<Z>(t, &z) != Ok(OracleCheck::Agree) || oracle_check::<Q>(t, &q) != Ok(OracleCheck::Agree) {
                return Err(format!("{name}: tables differ"));
            }
            n += 1;
        }
        Ok(format!("{n} links"))
    })()));
    checks.push(check("corpus alternation labels", (|| {
        let mut n = 0;
        for (name, t, label) in &diagrams {
            if let Some(l) = label {
                if is_alternating(t) != *l {
                    return Err(format!("{name}: labelled {l}"));
                }
                if *l && !t.is_split() && assign_gravity(t).is_err() {
                    return Err(format!("{name}: no gravity assignment"));
                }
                n += 1;
            }
        }
        Ok(format!("{n} labelled diagrams"))
    })()));
    checks.push(check("alternating corpus diagrams are diagonal", (|| {
        let mut n = 0;
        for (name, t, _) in &diagrams {
            if !is_alternating(t) || t.is_split() {
                continue;
            }
            let c = kh::<Z>(t).map_err(|e| format!("{name}: {e}"))?;
            if t.is_closed() {
                let table = homology_table(&c).map_err(|e| e.to_string())?;
                if two_line_check(&table).is_none() {
                    return Err(format!("{name}: homology off two lines"));
                }
            } else if diagonality(&c).map_err(|e| e.to_string())?.constant().is_none() {
                return Err(format!("{name}: not diagonal"));
            }
            n += 1;
        }
        Ok(format!("{n} diagrams"))
    })()));
    checks.push(check("random alternating tangles are diagonal", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let s = rng.gen();
            let g = random_alternating_tangle(s, rng.gen_range(1..=6), 8, true);
            let c = kh::<Z>(&g.diagram).map_err(|e| e.to_string())?;
            let v = diagonality(&c).map_err(|e| e.to_string())?;
            if v.constant().is_none() {
                return Err(format!("{}: {v}", g.diagram.to_pd_text()));
            }
        }
        Ok(format!("100 tangles, seed {seed}"))
    })()));
    checks
}

fn cmd_selftest(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let dir = corpus_dir();
    let corpus = match load_corpus(&dir) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return Ok(EXIT_INPUT);
        }
    };
    let checks = selftest(&corpus, cfg.seed);
    let ok = checks.iter().all(|c| c.passed);
    if cfg.json {
        let v: Vec<serde_json::Value> = checks
            .iter()
            .map(|c| serde_json::json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
            .collect();
        json_line(out, &serde_json::json!({"corpus": dir.display().to_string(), "seed": cfg.seed, "checks": v}));
    } else {
        for c in &checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_PROPERTY })
}
