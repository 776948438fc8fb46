//! The `shuffle` command: one verb per invocation over shuffle documents.

use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shuffle_core::address::{self, Address};
use shuffle_core::algebra::{self, I1Element};
use shuffle_core::canonical::{self, TransferDirection};
use shuffle_core::enumerate::verify;
use shuffle_core::fixtures::FIXTURES;
use shuffle_core::ordinal::Orientation;
use shuffle_core::shuffle::{Component, Shuffle, Table, TableTail, ValueMap};

#[derive(Debug, Parser)]
#[command(name = "shuffle", version, about = "Orders on the naturals presented as shuffles")]
struct Cli {
    /// Dovetail steps allowed per search.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Range bound for verification, inversion and table materialization.
    #[arg(long, global = true, default_value_t = 1000)]
    upto: u64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Graphviz output for `diagram`.
    #[arg(long, global = true)]
    dot: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

impl From<SignArg> for Orientation {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => Orientation::Plus,
            SignArg::Minus => Orientation::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    LadderToSnake,
    SnakeToLadder,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Check that every value up to --upto appears exactly once.
    Verify { file: PathBuf },
    /// Address of a natural.
    Address { file: PathBuf, x: u64 },
    /// Value at an address such as "(1,-3,-4)".
    Value { file: PathBuf, address: String },
    /// Compare two naturals in the induced order.
    Compare { file: PathBuf, x: u64, y: u64 },
    /// Sort naturals by the induced order.
    Sort {
        file: PathBuf,
        #[arg(required = true)]
        xs: Vec<u64>,
    },
    /// Order type of the induced order.
    Ordertype { file: PathBuf },
    /// Next value along the segment containing x.
    Successor { file: PathBuf, x: u64 },
    /// Index negation, reversing the order.
    Involute { file: PathBuf },
    /// Substitute the second shuffle into each innermost segment of the first.
    Compose { outer: PathBuf, inner: PathBuf },
    /// The identity element of the given sign.
    Identity {
        #[arg(long, value_enum, default_value = "+")]
        sign: SignArg,
    },
    /// Table-backed inverse of a single-segment element.
    Invert { file: PathBuf },
    /// Embed a finite permutation, given as comma-separated images.
    Permute {
        perm: String,
        #[arg(long, value_enum, default_value = "+")]
        sign: SignArg,
    },
    /// Check the group laws on single-segment elements.
    GroupCheck {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Canonical part sequence, or a transfer across a snake-ladder boundary.
    Canonical {
        file: PathBuf,
        /// Component index of the snake in a snake-ladder pair.
        #[arg(long, requires = "count")]
        transfer: Option<usize>,
        /// Number of elements to move.
        #[arg(long)]
        count: Option<u64>,
        #[arg(long, value_enum, default_value = "ladder-to-snake")]
        direction: DirectionArg,
    },
    /// Block diagram of the canonical partition.
    Diagram { file: PathBuf },
    /// Write the bundled fixtures into a directory.
    Examples { dir: PathBuf },
}

enum Failure {
    /// Malformed input or invocation.
    Usage(String),
    /// Well-formed input on which the operation fails.
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

/// Text for humans and a value for `--json`. A report of a failed check
/// still goes to stdout, with exit code 1.
struct Output {
    text: String,
    value: Value,
    failed: bool,
}

fn out(text: impl Into<String>, value: Value) -> Result<Output, Failure> {
    Ok(Output { text: text.into(), value, failed: false })
}

fn report(text: String, value: Value, passed: bool) -> Result<Output, Failure> {
    Ok(Output { text, value, failed: !passed })
}

fn load(path: &Path) -> Result<Shuffle, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Shuffle::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn element(path: &Path) -> Result<I1Element, Failure> {
    I1Element::new(load(path)?).map_err(domain)
}

/// Replaces a composed single-segment value by its first `upto + 1` entries.
fn materialize(s: Shuffle, upto: u64) -> Result<Shuffle, Failure> {
    let [c] = s.components() else { return Ok(s) };
    let (ValueMap::Composed(_), [d]) = (c.value(), c.domains()) else { return Ok(s) };
    let Some(sign) = d.orientation().filter(|_| d.anchor() == 0 && s.family().is_none()) else { return Ok(s) };
    let values = (0..=upto as i64)
        .map(|k| {
            let v = c.eval(0, &[sign.factor() * k]).map_err(domain)?;
            u64::try_from(v).map_err(|_| Failure::Domain(format!("value {v} is not a natural number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table = Component::table(Table { values, tail: TableTail::None, sign }).map_err(domain)?;
    Ok(Shuffle::single(s.label().to_string(), table))
}

fn shuffle_output(s: Shuffle, upto: u64) -> Result<Output, Failure> {
    let doc = materialize(s, upto)?.to_doc().map_err(domain)?;
    let value = serde_json::to_value(&doc).map_err(domain)?;
    let text = serde_json::to_string_pretty(&value).map_err(domain)?;
    out(text, value)
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let (budget, upto) = (cli.budget, cli.upto);
    match &cli.verb {
        Verb::Verify { file } => {
            let r = verify(&load(file)?, upto, budget);
            let duplicates: Vec<Value> = r
                .duplicates
                .iter()
                .map(|(v, a, b)| json!({"value": v, "first": a.to_string(), "second": b.to_string()}))
                .collect();
            let value = json!({
                "upto": upto,
                "member": r.is_member(),
                "missing": r.missing,
                "duplicates": duplicates,
                "budget_used": r.budget_used,
                "exhausted": r.exhausted,
                "invalid": r.invalid,
            });
            let mut text = if r.is_member() {
                format!("every value up to {upto} appears exactly once")
            } else {
                format!("not a shuffle up to {upto}")
            };
            if !r.missing.is_empty() {
                let shown: Vec<String> = r.missing.iter().take(20).map(u64::to_string).collect();
                let more = if r.missing.len() > 20 { ", ..." } else { "" };
                text.push_str(&format!("\nmissing: {}{more}", shown.join(", ")));
            }
            for (v, a, b) in r.duplicates.iter().take(20) {
                text.push_str(&format!("\nduplicate: {v} at {a} and {b}"));
            }
            if !r.exhausted && !r.missing.is_empty() {
                text.push_str(&format!("\nsearch stopped after {} steps", r.budget_used));
            }
            report(text, value, r.is_member())
        }
        Verb::Address { file, x } => {
            let a = address::address_of(&load(file)?, *x, budget).map_err(domain)?;
            out(a.to_string(), json!({"value": x, "address": a.to_string()}))
        }
        Verb::Value { file, address: text } => {
            let a: Address = text.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            let v = address::value_at(&load(file)?, &a).map_err(domain)?;
            out(v.to_string(), json!({"address": a.to_string(), "value": v}))
        }
        Verb::Compare { file, x, y } => {
            let symbol = match address::compare(&load(file)?, *x, *y, budget).map_err(domain)? {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            };
            out(format!("{x} {symbol} {y}"), json!({"x": x, "y": y, "ordering": symbol}))
        }
        Verb::Sort { file, xs } => {
            let sorted = address::sort_prefix(&load(file)?, xs, budget).map_err(domain)?;
            let text: Vec<String> = sorted.iter().map(u64::to_string).collect();
            out(text.join(" "), json!({"sorted": sorted}))
        }
        Verb::Ordertype { file } => {
            let ot = load(file)?.order_type().map_err(domain)?;
            out(ot.to_string(), json!({"order_type": ot.to_string()}))
        }
        Verb::Successor { file, x } => match address::segment_successor(&load(file)?, *x, budget).map_err(domain)? {
            Some(y) => out(y.to_string(), json!({"value": x, "successor": y})),
            None => out("none", json!({"value": x, "successor": null})),
        },
        Verb::Involute { file } => shuffle_output(algebra::involution(&load(file)?).map_err(domain)?, upto),
        Verb::Compose { outer, inner } => {
            shuffle_output(algebra::compose(&load(outer)?, &load(inner)?).map_err(domain)?, upto)
        }
        Verb::Identity { sign } => shuffle_output(algebra::identity_element((*sign).into()).into_shuffle(), upto),
        Verb::Invert { file } => {
            let inv = algebra::invert_i1(&element(file)?, upto, budget).map_err(domain)?;
            shuffle_output(inv.into_shuffle(), upto)
        }
        Verb::Permute { perm, sign } => {
            let images = perm
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(format!("permutation `{perm}`: {e}")))?;
            let e = algebra::from_finite_permutation(&images, (*sign).into()).map_err(domain)?;
            shuffle_output(e.into_shuffle(), upto)
        }
        Verb::GroupCheck { files } => {
            let elements = files.iter().map(|f| element(f)).collect::<Result<Vec<_>, _>>()?;
            let r = algebra::group_check(&elements, upto, budget);
            let value = json!({
                "upto": upto,
                "passed": r.passed(),
                "elements": r.elements,
                "closure": r.closure,
                "associativity": r.associativity,
                "identity": r.identity,
                "inverse": r.inverse,
            });
            let mut lines = Vec::new();
            for (law, found) in [
                ("elements", &r.elements),
                ("closure", &r.closure),
                ("associativity", &r.associativity),
                ("identity", &r.identity),
                ("inverse", &r.inverse),
            ] {
                lines.push(format!("{law}: {}", if found.is_empty() { "ok" } else { "FAILED" }));
                lines.extend(found.iter().take(5).map(|w| format!("  {w}")));
            }
            report(lines.join("\n"), value, r.passed())
        }
        Verb::Canonical { file, transfer, count, direction } => {
            let s = load(file)?;
            if let (Some(pair), Some(n)) = (transfer, count) {
                let direction = match direction {
                    DirectionArg::LadderToSnake => TransferDirection::LadderToSnake,
                    DirectionArg::SnakeToLadder => TransferDirection::SnakeToLadder,
                };
                let moved = canonical::transfer(&s, *pair, *n, direction, upto, budget).map_err(domain)?;
                return shuffle_output(moved, upto);
            }
            let parts = canonical::part_type_sequence(&s);
            let (canon, unique) = canonical::canonicalize(&parts);
            let text = format!("{canon}\n{}", if unique { "unique" } else { "not unique" });
            out(text, json!({"parts": parts.to_string(), "canonical": canon.to_string(), "unique": unique}))
        }
        Verb::Diagram { file } => {
            let s = load(file)?;
            let text = if cli.dot { canonical::diagram_dot(&s) } else { canonical::diagram(&s) };
            let text = text.trim_end().to_string();
            out(text.clone(), json!({"diagram": text}))
        }
        Verb::Examples { dir } => {
            fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for (name, text) in FIXTURES {
                let path = dir.join(name);
                fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                written.push(path.display().to_string());
            }
            out(written.join("\n"), json!({"written": written}))
        }
    }
}

/// Runs one invocation. Returns the exit code with stdout and stderr text.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let text = if cli.json { o.value.to_string() } else { o.text };
            (i32::from(o.failed), format!("{text}\n"), String::new())
        }
        Err(f) if cli.json => {
            let kind = if f.code() == 2 { "usage" } else { "domain" };
            (f.code(), String::new(), format!("{}\n", json!({"error": kind, "message": f.message()})))
        }
        Err(f) => (f.code(), String::new(), format!("error: {}\n", f.message())),
    }
}
