//! The `kmx` command line: argv parsing, dispatch, and JSON or text output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartan::{Gcm, RootDatum, Subset};
use crate::catalog;
use crate::error::{Error, Result};
use crate::exact::{fmt_rat, parse_rat, Rat};
use crate::ghat::{bruhat_cell, default_probes, probe_equal, weights_and_mults, ModuleSlice, Word};
use crate::toric::{LatticeMonoid, MonoidSpec};
use crate::verify;
use crate::weyl::{parse_word, Dominance, DOMINANT_STEP_CAP};

pub const DEFAULT_DEPTH: usize = 4;

/// Every verb, in the order of the usage text.
pub const VERBS: [&str; 24] = [
    "validate",
    "classify",
    "special",
    "expose",
    "realize",
    "weyl-reduce",
    "dominant",
    "face-normalize",
    "face-include",
    "face-intersect",
    "face-of-point",
    "wmon-mul",
    "wmon-inv",
    "that-mul",
    "nhat-mul",
    "toric-saturate",
    "toric-faces",
    "module-weights",
    "module-basis",
    "ghat-eval",
    "ghat-theta",
    "ghat-equal",
    "ghat-cell",
    "verify",
];

#[derive(Parser, Debug)]
#[command(name = "kmx", version, about = "Exact computations for Kac-Moody monoids")]
struct Cli {
    /// Render aligned text tables instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug)]
struct Matrix {
    /// GCM file `{"A": [[...], ...]}`.
    #[arg(short = 'i', long = "input")]
    input: Option<PathBuf>,
    /// Inline GCM JSON.
    #[arg(long, conflicts_with_all = ["input", "named"])]
    gcm: Option<String>,
    /// A built-in matrix: A2, B2, A1~, A1~+A1, hyp, H25.
    #[arg(long, conflicts_with = "input")]
    named: Option<String>,
}

#[derive(Args, Debug)]
struct Pair {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
}

#[derive(Args, Debug)]
struct Monoid {
    /// Monoid file `{"rank": r, "generators": [[...], ...]}`.
    #[arg(short = 'i', long = "input")]
    input: Option<PathBuf>,
    /// Inline monoid JSON.
    #[arg(long, conflicts_with = "input")]
    monoid: Option<String>,
}

#[derive(Args, Debug)]
struct Slice {
    /// Highest weight as `Λ(h_1),...`; missing trailing entries are 0.
    #[arg(long)]
    lambda: String,
    /// Truncation depth; defaults to KMX_DEPTH or 4.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check that the matrix is a symmetrizable GCM.
    Validate(Matrix),
    /// Indecomposable components and their types.
    Classify {
        #[command(flatten)]
        m: Matrix,
        /// Restrict to a subset such as `1,2`.
        #[arg(long)]
        set: Option<String>,
    },
    /// All special subsets.
    Special(Matrix),
    /// Exposing functional of a special set.
    Expose {
        #[command(flatten)]
        m: Matrix,
        #[arg(long)]
        theta: String,
    },
    /// The optimal realization.
    Realize(Matrix),
    /// Canonical reduced word of a Weyl group element.
    WeylReduce {
        #[command(flatten)]
        m: Matrix,
        #[arg(long)]
        word: String,
    },
    /// Dominant representative of a weight.
    Dominant {
        #[command(flatten)]
        m: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// Normal form of `w R(Θ)`.
    FaceNormalize {
        #[command(flatten)]
        m: Matrix,
        #[arg(long)]
        face: String,
    },
    /// Whether `left ⊇ right`.
    FaceInclude {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        p: Pair,
    },
    FaceIntersect {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        p: Pair,
    },
    /// Smallest face containing a weight.
    FaceOfPoint {
        #[command(flatten)]
        m: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    WmonMul {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        p: Pair,
    },
    WmonInv {
        #[command(flatten)]
        m: Matrix,
        #[arg(long)]
        elt: String,
    },
    ThatMul {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        p: Pair,
    },
    NhatMul {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        p: Pair,
    },
    /// Saturation (Hilbert basis) of a lattice monoid.
    ToricSaturate(Monoid),
    /// Face lattice of a lattice monoid.
    ToricFaces(Monoid),
    /// Freudenthal weight multiplicities.
    ModuleWeights {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        s: Slice,
    },
    /// Weight-space bases and Gram matrices.
    ModuleBasis {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        s: Slice,
    },
    /// Operator matrix of a word on a slice.
    GhatEval {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        s: Slice,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// `θ_Λ` of a word.
    GhatTheta {
        #[command(flatten)]
        m: Matrix,
        #[command(flatten)]
        s: Slice,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Compare two words on probe slices (default: `L(Λ_i)` and `L(ρ)`).
    GhatEqual {
        #[command(flatten)]
        m: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Bruhat cell of a factored word.
    GhatCell {
        #[command(flatten)]
        m: Matrix,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Run the seeded property suites.
    Verify {
        /// Run one suite only.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        suite: Option<u8>,
    },
}

/// What a run prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// `face intersect` is accepted for `face-intersect`, and so on.
fn normalize_argv(mut args: Vec<String>) -> Vec<String> {
    if args.len() >= 3 {
        let joined = format!("{}-{}", args[1], args[2]);
        if VERBS.contains(&joined.as_str()) {
            args.splice(1..3, [joined]);
        }
    }
    args
}

pub fn run(args: Vec<String>) -> Outcome {
    let args = normalize_argv(args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli.verb) {
        Ok((value, ok)) => {
            let stdout = if cli.text { render_text(&value) } else { format!("{value}\n") };
            Outcome { stdout, stderr: String::new(), code: if ok { 0 } else { 1 } }
        }
        Err(e) => {
            let value = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            Outcome { stdout: format!("{value}\n"), stderr: String::new(), code: e.exit_code() }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn datum(m: &Matrix) -> Result<RootDatum> {
    if let Some(name) = &m.named {
        return catalog::by_name(name).ok_or_else(|| Error::Parse(format!("unknown matrix '{name}'")));
    }
    let text = match (&m.input, &m.gcm) {
        (Some(p), _) => read(p)?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(Error::Parse("a matrix is required (-i, --gcm or --named)".into())),
    };
    RootDatum::new(Gcm::from_json(&text)?)
}

fn monoid(m: &Monoid) -> Result<LatticeMonoid> {
    let text = match (&m.input, &m.monoid) {
        (Some(p), _) => read(p)?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(Error::Parse("a monoid is required (-i or --monoid)".into())),
    };
    let spec: MonoidSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    LatticeMonoid::from_spec(&spec)
}

fn subset(s: &str, n: usize) -> Result<Subset> {
    Ok(Subset::from_indices(parse_word(s, n)?))
}

fn rats(s: &str) -> Result<Vec<Rat>> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| parse_rat(x.trim_matches('"')))
        .collect()
}

fn weight(d: &RootDatum, s: &str) -> Result<Vec<Rat>> {
    let v = rats(s)?;
    if v.len() != d.dim() {
        return Err(Error::RankMismatch { expected: d.dim(), got: v.len() });
    }
    Ok(v)
}

fn highest(d: &RootDatum, s: &str) -> Result<Vec<i64>> {
    let v: Vec<i64> = rats(s)?
        .iter()
        .map(|r| crate::exact::rat_to_i64(r).ok_or_else(|| Error::Parse(format!("'{}' is not an integer", fmt_rat(r)))))
        .collect::<Result<_>>()?;
    if v.len() > d.dim() {
        return Err(Error::RankMismatch { expected: d.dim(), got: v.len() });
    }
    let mut out = vec![0; d.dim()];
    out[..v.len()].copy_from_slice(&v);
    Ok(out)
}

fn depth(flag: Option<usize>) -> Result<usize> {
    if let Some(d) = flag {
        return Ok(d);
    }
    match std::env::var("KMX_DEPTH") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("KMX_DEPTH='{s}' is not a depth"))),
        Err(_) => Ok(DEFAULT_DEPTH),
    }
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

/// The JSON report and whether the verb succeeded.
fn execute(verb: &Verb) -> Result<(Value, bool)> {
    let v = match verb {
        Verb::Validate(m) => {
            let d = datum(m)?;
            json!({
                "valid": true,
                "n": d.n(),
                "rank": d.l(),
                "dim": d.dim(),
                "eps": strs(&d.sym().eps),
            })
        }
        Verb::Classify { m, set } => {
            let d = datum(m)?;
            let s = match set {
                Some(s) => subset(s, d.n())?,
                None => d.all(),
            };
            let comps: Vec<Value> =
                d.classify(s).iter().map(|c| json!({"set": c.set.one_based(), "type": c.kind.to_string()})).collect();
            json!({ "components": comps })
        }
        Verb::Special(m) => {
            let d = datum(m)?;
            to_value(&d.special_sets().iter().map(|s| s.one_based()).collect::<Vec<_>>())
        }
        Verb::Expose { m, theta } => {
            let d = datum(m)?;
            let t = subset(theta, d.n())?;
            json!({"theta": t.one_based(), "functional": d.exposing_functional(t)?})
        }
        Verb::Realize(m) => {
            let d = datum(m)?;
            let alpha: Vec<&[i64]> = (0..d.n()).map(|i| d.alpha(i)).collect();
            let fundamental: Vec<Vec<i64>> = (0..d.n()).map(|i| d.fundamental(i)).collect();
            let form: Vec<Vec<String>> = d.gram_h().to_rows().iter().map(|r| strs(r)).collect();
            json!({
                "n": d.n(),
                "l": d.l(),
                "dim": d.dim(),
                "alpha": alpha,
                "complement": d.complement().iter().map(|i| i + 1).collect::<Vec<_>>(),
                "fundamental": fundamental,
                "form_h": form,
            })
        }
        Verb::WeylReduce { m, word } => {
            let d = datum(m)?;
            let w = d.weyl().parse(word)?;
            json!({"word": w.word_string(), "length": w.length()})
        }
        Verb::Dominant { m, weight: s } => {
            let d = datum(m)?;
            let lam = weight(&d, s)?;
            match d.weyl().dominant_rep(&lam, DOMINANT_STEP_CAP) {
                Dominance::Dominant { w, lambda_plus, facet } => json!({
                    "verdict": "dominant",
                    "w": w.word_string(),
                    "dominant": strs(&lambda_plus),
                    "facet": facet.one_based(),
                }),
                Dominance::NotInTitsCone { theta, u } => json!({
                    "verdict": "not-in-tits-cone",
                    "theta": theta.one_based(),
                    "u": u.word_string(),
                }),
                Dominance::Undecided { steps } => return Err(Error::Undecided(steps)),
            }
        }
        Verb::FaceNormalize { m, face } => {
            let d = datum(m)?;
            to_value(&d.faces().parse(face)?.record())
        }
        Verb::FaceInclude { m, p } => {
            let d = datum(m)?;
            let f = d.faces();
            json!({"includes": f.includes(&f.parse(&p.left)?, &f.parse(&p.right)?)})
        }
        Verb::FaceIntersect { m, p } => {
            let d = datum(m)?;
            let f = d.faces();
            to_value(&f.intersect(&f.parse(&p.left)?, &f.parse(&p.right)?)?.record())
        }
        Verb::FaceOfPoint { m, weight: s } => {
            let d = datum(m)?;
            to_value(&d.faces().face_of_point(&weight(&d, s)?)?.record())
        }
        Verb::WmonMul { m, p } => {
            let d = datum(m)?;
            let w = d.wmon();
            to_value(&w.mul(&w.parse_wmon(&p.left)?, &w.parse_wmon(&p.right)?).record())
        }
        Verb::WmonInv { m, elt } => {
            let d = datum(m)?;
            let w = d.wmon();
            to_value(&w.inverse(&w.parse_wmon(elt)?).record())
        }
        Verb::ThatMul { m, p } => {
            let d = datum(m)?;
            let w = d.wmon();
            to_value(&w.that_mul(&w.parse_that(&p.left)?, &w.parse_that(&p.right)?).record())
        }
        Verb::NhatMul { m, p } => {
            let d = datum(m)?;
            let w = d.wmon();
            let x = w.nhat_mul(&w.parse_nhat(&p.left)?, &w.parse_nhat(&p.right)?);
            json!({"product": to_value(&x.record()), "kappa": to_value(&w.kappa(&x).record())})
        }
        Verb::ToricSaturate(m) => {
            let mon = monoid(m)?;
            let sat = mon.saturation()?;
            json!({
                "saturated": mon.saturated,
                "witness": mon.witness,
                "hilbert_basis": sat.generators,
            })
        }
        Verb::ToricFaces(m) => {
            let mon = monoid(m)?;
            let faces: Vec<Value> = mon
                .faces()
                .iter()
                .map(|f| {
                    json!({
                        "dim": f.dim,
                        "generators": f.gens.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "hull_basis": mon.hull_basis(f),
                    })
                })
                .collect();
            json!({
                "inequalities": mon.inequalities,
                "equations": mon.equations,
                "saturated": mon.saturated,
                "faces": faces,
            })
        }
        Verb::ModuleWeights { m, s } => {
            let d = datum(m)?;
            let lam = highest(&d, &s.lambda)?;
            to_value(&weights_and_mults(&d, &lam, depth(s.depth)?)?)
        }
        Verb::ModuleBasis { m, s } => {
            let d = datum(m)?;
            let lam = highest(&d, &s.lambda)?;
            let slice = ModuleSlice::new(&d, &lam, depth(s.depth)?)?;
            let spaces: Vec<Value> = slice
                .spaces()
                .iter()
                .map(|sp| {
                    json!({
                        "beta": sp.beta,
                        "weight": sp.weight,
                        "basis": (sp.offset..sp.offset + sp.dim()).map(|k| slice.label(k)).collect::<Vec<_>>(),
                        "gram": sp.gram.to_rows().iter().map(|r| strs(r)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({ "spaces": spaces })
        }
        Verb::GhatEval { m, s, word } => {
            let d = datum(m)?;
            let lam = highest(&d, &s.lambda)?;
            let slice = ModuleSlice::new(&d, &lam, depth(s.depth)?)?;
            let op = slice.evaluate(&Word::parse(&d, word)?)?;
            json!({
                "depth": slice.depth(),
                "domain": op.domain,
                "basis": (0..slice.dim()).map(|k| slice.label(k)).collect::<Vec<_>>(),
                "matrix": op.to_strings(),
            })
        }
        Verb::GhatTheta { m, s, word } => {
            let d = datum(m)?;
            let lam = highest(&d, &s.lambda)?;
            let slice = ModuleSlice::new(&d, &lam, depth(s.depth)?)?;
            json!({"theta": fmt_rat(&slice.theta(&Word::parse(&d, word)?)?)})
        }
        Verb::GhatEqual { m, left, right, lambda, depth: dep } => {
            let d = datum(m)?;
            let k = depth(*dep)?;
            let probes = match lambda {
                Some(l) => vec![(highest(&d, l)?, k)],
                None => default_probes(&d, k),
            };
            to_value(&probe_equal(&d, &Word::parse(&d, left)?, &Word::parse(&d, right)?, &probes)?)
        }
        Verb::GhatCell { m, word } => {
            let d = datum(m)?;
            let c = bruhat_cell(&d, &Word::parse(&d, word)?)?;
            json!({
                "lower": c.lower.to_string(),
                "middle": c.middle.to_string(),
                "upper": c.upper.to_string(),
                "nhat": to_value(&c.nhat.record()),
                "cell": to_value(&c.cell.record()),
            })
        }
        Verb::Verify { suite } => {
            let reports = match suite {
                Some(k) => vec![verify::run_suite(*k)],
                None => verify::run_all(),
            };
            let pass = reports.iter().all(|r| r.pass);
            return Ok((json!({"suites": reports, "pass": pass}), pass));
        }
    };
    Ok((v, true))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            format!("[{}]", a.iter().map(cell).collect::<Vec<_>>().join(" "))
        }
        other => other.to_string(),
    }
}

fn table(rows: &[Value]) -> String {
    let mut keys: Vec<String> = Vec::new();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
    }
    let grid: Vec<Vec<String>> = std::iter::once(keys.clone())
        .chain(rows.iter().map(|r| keys.iter().map(|k| r.get(k).map_or(String::new(), cell)).collect()))
        .collect();
    align(&grid)
}

fn align(grid: &[Vec<String>]) -> String {
    let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let width: Vec<usize> =
        (0..cols).map(|c| grid.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in grid {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = width[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Objects become `key: value` lines, arrays of objects become tables and
/// arrays of arrays become aligned matrices.
pub fn render_text(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let mut out = String::new();
            for (k, x) in m {
                match x {
                    Value::Array(a) if a.iter().any(|e| e.is_object() || e.is_array()) => {
                        out.push_str(&format!("{k}:\n"));
                        out.push_str(&render_text(x));
                    }
                    Value::Object(_) => {
                        out.push_str(&format!("{k}:\n"));
                        for line in render_text(x).lines() {
                            out.push_str(&format!("  {line}\n"));
                        }
                    }
                    _ => out.push_str(&format!("{k}: {}\n", cell(x))),
                }
            }
            out
        }
        Value::Array(a) if a.iter().all(Value::is_object) && !a.is_empty() => table(a),
        Value::Array(a) if a.iter().all(Value::is_array) && !a.is_empty() => {
            let grid: Vec<Vec<String>> =
                a.iter().map(|r| r.as_array().map_or(vec![], |r| r.iter().map(cell).collect())).collect();
            align(&grid)
        }
        other => format!("{}\n", cell(other)),
    }
}
