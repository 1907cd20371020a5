//! The `problogic` command line. [`run`] does all the work and returns the
//! output instead of printing it, so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 UNSAT or a failed check, 2 input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use problogic::constraint::{parse_constraints, parse_weight_term, BoundOutcome, Reasoner, Sense, WeightConstraint};
use problogic::document::{parse_structure, structure_to_json};
use problogic::plp::{find_model, parse_program, translate_rule};
use problogic::rational::{format_approx, format_exact, zero};
use problogic::{parse_formula, Alphabet, Error, NilssonStructure, Rational};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const WORLD_CAP_VAR: &str = "PROBLOGIC_WORLD_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "problogic", version, about = "Exact probabilistic logic workbench")]
struct Cli {
    /// Output style; `structured` is JSON with rationals as "a/b" strings.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Many-valued value of a formula: its world set and probability.
    Eval(FormulaArgs),
    /// Probability of a formula under a structure.
    Weight(FormulaArgs),
    /// Decide whether some measure satisfies a constraint file.
    Psat(PsatArgs),
    /// Optimise a weight term subject to a constraint file.
    Bound(BoundArgs),
    /// Print the intensional form of an annotated program.
    Translate(ProgramArgs),
    /// Find a measure satisfying every rule of an annotated program.
    SolvePlp(ProgramArgs),
    /// Run the law suites on random formulas over a structure.
    CheckLaws(CheckArgs),
}

#[derive(Debug, Args)]
struct FormulaArgs {
    /// Structure document (JSON).
    #[arg(long)]
    structure: Option<PathBuf>,
    #[arg(long)]
    formula: String,
}

#[derive(Debug, Args)]
struct PsatArgs {
    /// Comma-separated propositions; defaults to those in the constraints.
    #[arg(long, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
    #[arg(long)]
    constraints: PathBuf,
    /// Also write the witness structure to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SenseArg {
    Min,
    Max,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
    #[arg(long)]
    constraints: PathBuf,
    /// Linear weight term such as `w(p & q)` or `w(p) - 2*w(q)`.
    #[arg(long)]
    objective: String,
    #[arg(long, value_enum)]
    sense: SenseArg,
}

#[derive(Debug, Args)]
struct ProgramArgs {
    #[arg(long)]
    program: PathBuf,
    /// Also write the witness structure to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    structure: PathBuf,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// An input error; always exit code 2.
struct Failure {
    kind: &'static str,
    message: String,
    location: Option<String>,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            kind: "input",
            message: message.into(),
            location: None,
        }
    }

    /// Attaches `line:column` and a caret excerpt when `e` is positional.
    fn from_error(e: Error, source: Option<(&str, &str)>) -> Self {
        let kind = match &e {
            Error::Syntax { .. } | Error::NonGround { .. } => "syntax",
            Error::AlphabetTooLarge { .. } => "cap",
            Error::Document(_) => "document",
            _ => "input",
        };
        let offset = match &e {
            Error::Syntax { offset, .. } | Error::NonGround { offset, .. } => Some(*offset),
            _ => None,
        };
        let location = match (offset, source) {
            (Some(off), Some((name, text))) => Some(locate(name, text, off)),
            _ => None,
        };
        Failure {
            kind,
            message: e.to_string(),
            location,
        }
    }
}

fn locate(name: &str, text: &str, offset: usize) -> String {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let column = text[line_start..offset].chars().count() + 1;
    let line_text = text[line_start..].lines().next().unwrap_or("");
    format!("{name}:{line}:{column}\n  {line_text}\n  {}^", " ".repeat(column - 1))
}

type Outcome = Result<(u8, Value, String), Failure>;

pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if e.use_stderr() {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = reasoner().and_then(|r| match &cli.command {
        Command::Eval(a) => eval(a, &r),
        Command::Weight(a) => weight(a, &r),
        Command::Psat(a) => psat(a, &r),
        Command::Bound(a) => bound(a, &r),
        Command::Translate(a) => translate(a),
        Command::SolvePlp(a) => solve_plp(a, &r),
        Command::CheckLaws(a) => check_laws(a, &r),
    });
    match (result, cli.format) {
        (Ok((code, _, text)), Format::Text) => Output {
            code,
            stdout: text,
            stderr: String::new(),
        },
        (Ok((code, doc, _)), Format::Structured) => Output {
            code,
            stdout: render(&doc),
            stderr: String::new(),
        },
        (Err(f), Format::Text) => {
            let mut stderr = format!("error: {}\n", f.message);
            if let Some(l) = &f.location {
                stderr.push_str(&format!("  --> {l}\n"));
            }
            Output {
                code: 2,
                stdout: String::new(),
                stderr,
            }
        }
        (Err(f), Format::Structured) => {
            let mut err = json!({ "kind": f.kind, "message": f.message });
            if let Some(l) = f.location {
                err["location"] = Value::String(l);
            }
            Output {
                code: 2,
                stdout: render(&json!({ "error": err })),
                stderr: String::new(),
            }
        }
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// The default cap, or `PROBLOGIC_WORLD_CAP` when set.
fn reasoner() -> Result<Reasoner, Failure> {
    match std::env::var(WORLD_CAP_VAR) {
        Err(_) => Ok(Reasoner::default()),
        Ok(v) => v
            .trim()
            .parse()
            .map(Reasoner::with_cap)
            .map_err(|_| Failure::input(format!("{WORLD_CAP_VAR} must be a natural number, found `{v}`"))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn load_structure(path: &Path, cap: usize) -> Result<NilssonStructure, Failure> {
    let text = read(path)?;
    let n = parse_structure(&text).map_err(|e| Failure::from_error(e, None))?;
    n.alphabet().check_cap(cap).map_err(|e| Failure::from_error(e, None))?;
    Ok(n)
}

/// Exact value with a marked approximation when it is not an integer.
fn show(q: &Rational) -> String {
    if q.is_integer() {
        format_exact(q)
    } else {
        format!("{} (≈ {})", format_exact(q), format_approx(q))
    }
}

fn formula_and_structure(a: &FormulaArgs, r: &Reasoner) -> Result<(problogic::Formula, NilssonStructure), Failure> {
    let f = parse_formula(&a.formula).map_err(|e| Failure::from_error(e, Some(("--formula", &a.formula))))?;
    let path = a
        .structure
        .as_ref()
        .ok_or_else(|| Failure::input("--structure is required"))?;
    let n = load_structure(path, r.world_cap)?;
    Ok((f, n))
}

fn eval(a: &FormulaArgs, r: &Reasoner) -> Outcome {
    let (f, n) = formula_and_structure(a, r)?;
    let v = n.mv_eval(&f).map_err(|e| Failure::from_error(e, None))?;
    let width = n.alphabet().len();
    let worlds: Vec<String> = v.indicator.iter().map(|w| w.key(width)).collect();
    let designated = n.is_designated(&v);
    let doc = json!({
        "formula": f.to_string(),
        "props": n.alphabet().props(),
        "worlds": worlds,
        "prob": format_exact(&v.prob),
        "designated": designated,
    });
    let text = format!(
        "formula: {f}\nworlds: {{{}}}\nprob: {}\ndesignated: {designated}\n",
        worlds.join(", "),
        show(&v.prob)
    );
    Ok((0, doc, text))
}

fn weight(a: &FormulaArgs, r: &Reasoner) -> Outcome {
    let (f, n) = formula_and_structure(a, r)?;
    let w = n.weight(&f).map_err(|e| Failure::from_error(e, None))?;
    let doc = json!({ "formula": f.to_string(), "weight": format_exact(&w) });
    Ok((0, doc, format!("{}\n", show(&w))))
}

fn load_constraints(path: &Path) -> Result<Vec<WeightConstraint>, Failure> {
    let text = read(path)?;
    parse_constraints(&text).map_err(|e| Failure::from_error(e, Some((&path.display().to_string(), &text))))
}

fn alphabet_for(
    explicit: &Option<Vec<String>>,
    cs: &[WeightConstraint],
    extra: &[&problogic::Formula],
) -> Result<Alphabet, Failure> {
    let fail = |e| Failure::from_error(e, None);
    match explicit {
        Some(props) => {
            let a = Alphabet::new(props.iter().map(|p| p.trim().to_string())).map_err(fail)?;
            for f in cs.iter().flat_map(|c| c.formulas()).chain(extra.iter().copied()) {
                for p in f.props() {
                    if !a.contains(p) {
                        return Err(fail(Error::UnknownProposition(p.to_string())));
                    }
                }
            }
            Ok(a)
        }
        None => {
            let formulas: Vec<&problogic::Formula> = cs
                .iter()
                .flat_map(|c| c.formulas())
                .chain(extra.iter().copied())
                .collect();
            Alphabet::covering(formulas).map_err(fail)
        }
    }
}

fn witness_text(n: &NilssonStructure) -> String {
    let width = n.alphabet().len();
    let mut s = format!("props: {}\n", n.alphabet().props().join(", "));
    for w in n.alphabet().worlds() {
        let m = n.mass(w);
        if *m != zero() {
            s.push_str(&format!("  {}: {}\n", w.key(width), show(m)));
        }
    }
    s
}

fn psat(a: &PsatArgs, r: &Reasoner) -> Outcome {
    let cs = load_constraints(&a.constraints)?;
    let alphabet = alphabet_for(&a.alphabet, &cs, &[])?;
    let result = r
        .satisfiable(&alphabet, &cs)
        .map_err(|e| Failure::from_error(e, None))?;
    Ok(match result.witness {
        Some(n) => {
            if let Some(path) = &a.witness {
                write(path, &render(&structure_to_json(&n)))?;
            }
            let doc = json!({ "status": "SAT", "witness": structure_to_json(&n) });
            (0, doc, format!("SAT\n{}", witness_text(&n)))
        }
        None => (1, json!({ "status": "UNSAT" }), "UNSAT\n".to_string()),
    })
}

fn bound(a: &BoundArgs, r: &Reasoner) -> Outcome {
    let cs = load_constraints(&a.constraints)?;
    let objective =
        parse_weight_term(&a.objective).map_err(|e| Failure::from_error(e, Some(("--objective", &a.objective))))?;
    let obj_formulas: Vec<&problogic::Formula> = objective.formulas().collect();
    let alphabet = alphabet_for(&a.alphabet, &cs, &obj_formulas)?;
    let (sense, name) = match a.sense {
        SenseArg::Min => (Sense::Min, "min"),
        SenseArg::Max => (Sense::Max, "max"),
    };
    let outcome = r
        .bound(&alphabet, &cs, &objective, sense)
        .map_err(|e| Failure::from_error(e, None))?;
    Ok(match outcome {
        BoundOutcome::Optimal { value, witness } => {
            let doc = json!({
                "status": "OPTIMAL",
                "objective": objective.to_string(),
                "sense": name,
                "value": format_exact(&value),
                "witness": structure_to_json(&witness),
            });
            let text = format!("{name} {objective} = {}\n{}", show(&value), witness_text(&witness));
            (0, doc, text)
        }
        BoundOutcome::Unsat => (1, json!({ "status": "UNSAT" }), "UNSAT\n".to_string()),
        BoundOutcome::Unbounded => (1, json!({ "status": "UNBOUNDED" }), "UNBOUNDED\n".to_string()),
    })
}

fn load_program(path: &Path) -> Result<problogic::plp::GroundProgram, Failure> {
    let text = read(path)?;
    parse_program(&text).map_err(|e| Failure::from_error(e, Some((&path.display().to_string(), &text))))
}

fn translate(a: &ProgramArgs) -> Outcome {
    let p = load_program(&a.program)?;
    let rules: Vec<Value> = p
        .rules
        .iter()
        .map(|r| {
            let ir = translate_rule(r);
            json!({
                "source": r.to_string(),
                "head": ir.head.to_string(),
                "body": ir.body.iter().map(ToString::to_string).collect::<Vec<_>>(),
            })
        })
        .collect();
    let text: String = p.rules.iter().map(|r| format!("{}\n", translate_rule(r))).collect();
    Ok((0, json!({ "alphabet": p.alphabet.props(), "rules": rules }), text))
}

fn solve_plp(a: &ProgramArgs, r: &Reasoner) -> Outcome {
    let p = load_program(&a.program)?;
    let found = find_model(&p, r).map_err(|e| Failure::from_error(e, None))?;
    Ok(match found {
        Some(n) => {
            if let Some(path) = &a.witness {
                write(path, &render(&structure_to_json(&n)))?;
            }
            let doc = json!({ "status": "SAT", "witness": structure_to_json(&n) });
            (0, doc, format!("SAT\n{}", witness_text(&n)))
        }
        None => (1, json!({ "status": "UNSAT" }), "UNSAT\n".to_string()),
    })
}

fn check_laws(a: &CheckArgs, r: &Reasoner) -> Outcome {
    let n = load_structure(&a.structure, r.world_cap)?;
    let mut rng = problogic_testkit::rng(a.seed);
    let suites = problogic_testkit::laws::check_structure(&mut rng, &n, a.samples);
    let all_ok = suites.iter().all(|(_, t)| t.ok());
    let mut text = String::new();
    let mut docs = Vec::new();
    for (name, t) in &suites {
        text.push_str(&format!("{name}: {} passed, {} failed\n", t.passed, t.failed));
        if let Some(f) = &t.first_failure {
            text.push_str(&format!("  first failure: {f}\n"));
        }
        docs.push(json!({
            "suite": name,
            "passed": t.passed,
            "failed": t.failed,
            "first_failure": t.first_failure,
        }));
    }
    let doc = json!({ "samples": a.samples, "seed": a.seed, "suites": docs });
    Ok((if all_ok { 0 } else { 1 }, doc, text))
}
