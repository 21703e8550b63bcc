use std::io::{IsTerminal, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use weilcalc::bench::{bench, BenchMode};
use weilcalc::jetcalc::{simplicial_jet, taylor};
use weilcalc::verify::{run, Status, VerifyConfig};
use weilcalc::weil::parse_algebra_spec;
use weilcalc::{AlgebraicMap, ExprError, ExprMap, Ring, Scalar, WeilAlgebra, WeilElement};

#[derive(Parser)]
#[command(name = "weilcalc", about = "Exact jets, Weil algebras and difference calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a Weil algebra given by a preset expression.
    Algebra {
        spec: String,
        #[arg(long, default_value = "rat")]
        ring: String,
        /// Include the full multiplication table.
        #[arg(long)]
        table: bool,
    },
    /// Taylor polynomial and jet of an expression at a point.
    Jet {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "rat")]
        ring: String,
        /// Comma-separated point; read as a JSON array from stdin when absent.
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Also push forward over this algebra; the nilpotent argument is read from stdin.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Run randomized property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "rat")]
        ring: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = 2)]
        vars: usize,
    },
    /// Time extension over jet and iterated tangent algebras.
    Bench {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "rat")]
        ring: String,
        #[arg(long, default_value = "both")]
        mode: String,
        #[arg(long, default_value = "1..4")]
        orders: String,
        #[arg(long, default_value_t = 100)]
        repeat: usize,
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

/// A failure with its exit code.
struct Exit(u8, String);

impl Exit {
    fn usage(msg: impl ToString) -> Exit {
        Exit(2, msg.to_string())
    }
}

impl From<ExprError> for Exit {
    fn from(e: ExprError) -> Exit {
        Exit(if e.is_domain() { 3 } else { 2 }, e.to_string())
    }
}

fn parse_ring(s: &str) -> Result<Ring, Exit> {
    s.parse().map_err(Exit::usage)
}

fn parse_point(text: &str, ring: &Ring) -> Result<Vec<Scalar>, Exit> {
    text.split(',').map(|c| ring.parse_scalar(c).map_err(Exit::usage)).collect()
}

fn json_point(v: &Value, ring: &Ring) -> Result<Vec<Scalar>, Exit> {
    let items = v.as_array().ok_or_else(|| Exit::usage(format!("expected a JSON array, got {v}")))?;
    items.iter().map(|c| ring.parse_json(c).map_err(Exit::usage)).collect()
}

fn read_stdin() -> Result<Option<Value>, Exit> {
    let mut stdin = std::io::stdin();
    if stdin.is_terminal() {
        return Ok(None);
    }
    let mut text = String::new();
    stdin.read_to_string(&mut text).map_err(Exit::usage)?;
    if text.trim().is_empty() {
        return Ok(None);
    }
    serde_json::from_str(&text).map(Some).map_err(Exit::usage)
}

fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn cmd_algebra(spec: &str, ring: &str, table: bool) -> Result<String, Exit> {
    let ring = parse_ring(ring)?;
    let alg = parse_algebra_spec(spec, &ring).map_err(Exit::usage)?;
    let mut v = alg.to_json();
    if table {
        v["table"] = alg.table_json();
    }
    Ok(v.to_string())
}

/// Default nilpotent argument: the sum of the algebra's generators in every slot.
fn default_nilpotent(alg: &WeilAlgebra, m: usize) -> Vec<WeilElement> {
    let nvars = alg.presentation().map_or(0, |p| p.nvars());
    let sum = (0..nvars).fold(alg.element_from_ints(&vec![0; alg.dim()]), |acc, v| {
        acc.add(&alg.variable(v)).expect("same algebra")
    });
    vec![sum; m]
}

fn cmd_jet(expr: &str, ring: &str, at: Option<&str>, order: u32, algebra: Option<&str>) -> Result<String, Exit> {
    let ring = parse_ring(ring)?;
    let f = ExprMap::parse(expr)?;
    // Without --at, stdin holds the point, or an object with "at" and "nilpotent".
    let input = if at.is_none() || algebra.is_some() { read_stdin()? } else { None };
    let (point_json, nil_json) = match (at, input) {
        (Some(_), nil) => (None, nil),
        (None, Some(Value::Object(o))) => (o.get("at").cloned(), o.get("nilpotent").cloned()),
        (None, other) => (other, None),
    };
    let x = match (at, point_json) {
        (Some(a), _) => parse_point(a, &ring)?,
        (None, Some(v)) => json_point(&v, &ring)?,
        (None, None) => return Err(Exit::usage("no point: pass --at or a JSON array on stdin")),
    };
    let f = if f.arity() < x.len() { f.with_arity(x.len())? } else { f };
    if x.len() != f.arity() {
        return Err(Exit::usage(format!("point has {} coordinates, expression needs {}", x.len(), f.arity())));
    }
    let value = f.eval_scalars(&ring, &x).map_err(ExprError::from)?;
    let tay = taylor(&f, &ring, &x, order)?;
    let ones = vec![ring.one(); x.len()];
    let coefficients: Vec<Value> = (1..=order)
        .map(|i| tay.part(i).eval_over(&ring, &ones).map(|c| scalars(&c)).map_err(ExprError::from))
        .collect::<Result<_, _>>()?;
    let mut vs = vec![x.clone()];
    vs.extend((0..order).map(|_| ones.clone()));
    let jet = simplicial_jet(&f, &ring, &vs)?;
    let mut out = json!({
        "expr": f.to_string(),
        "ring": ring.to_string(),
        "at": scalars(&x),
        "value": scalars(&value),
        "taylor": tay.to_json(),
        "coefficients": coefficients,
        "jet": jet.to_json(),
    });
    if let Some(spec) = algebra {
        let alg = parse_algebra_spec(spec, &ring).map_err(Exit::usage)?;
        let nu = match nil_json {
            Some(v) => {
                let rows = v.as_array().ok_or_else(|| Exit::usage("nilpotent argument must be a JSON array"))?;
                rows.iter()
                    .map(|r| alg.element(json_point(r, &ring)?).map_err(Exit::usage))
                    .collect::<Result<Vec<_>, _>>()?
            }
            None => default_nilpotent(&alg, f.arity()),
        };
        let pf = f.pushforward(&alg, &x, &nu)?;
        out["pushforward"] = json!({
            "algebra": alg.to_json(),
            "nilpotent": nu.iter().map(WeilElement::to_json).collect::<Vec<_>>(),
            "base": scalars(&pf.base),
            "fiber": pf.fiber.iter().map(WeilElement::to_json).collect::<Vec<_>>(),
        });
    }
    Ok(out.to_string())
}

fn cmd_verify(cfg: VerifyConfig, suite: &str) -> Result<String, Exit> {
    let reports = run(suite, &cfg).map_err(Exit::usage)?;
    let mut failed = false;
    for r in &reports {
        eprintln!("{} {} ({} passed, {} skipped of {})", r.status().as_str(), r.suite, r.passed, r.skipped, r.trials);
        if let Some(reason) = &r.skip_reason {
            eprintln!("  skipped: {reason}");
        }
        for f in &r.failures {
            eprintln!("  {} seed={} max_degree={}", f.label, f.seed, f.max_degree);
            eprintln!("    inputs:   {}", f.failure.inputs);
            eprintln!("    expected: {}", f.failure.expected);
            eprintln!("    actual:   {}", f.failure.actual);
        }
        failed |= r.status() == Status::Fail;
    }
    let json = Value::Array(reports.iter().map(|r| r.to_json(true)).collect()).to_string();
    if failed {
        println!("{json}");
        return Err(Exit(1, "verification failed".into()));
    }
    Ok(json)
}

fn parse_orders(s: &str) -> Result<std::ops::RangeInclusive<u32>, Exit> {
    let bad = || Exit::usage(format!("orders must look like a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn cmd_bench(expr: &str, ring: &str, mode: &str, orders: &str, repeat: usize, format: &str) -> Result<String, Exit> {
    let ring = parse_ring(ring)?;
    let f = ExprMap::parse(expr)?;
    let mode = BenchMode::parse(mode).ok_or_else(|| Exit::usage(format!("unknown mode {mode:?}")))?;
    let orders = parse_orders(orders)?;
    if !matches!(format, "csv" | "json") {
        return Err(Exit::usage(format!("unknown format {format:?}")));
    }
    let rep = bench(&f, &ring, mode, orders, repeat).map_err(|e| Exit(2, e.to_string()))?;
    Ok(if format == "csv" { rep.to_csv().trim_end().to_string() } else { rep.to_json().to_string() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Algebra { spec, ring, table } => cmd_algebra(&spec, &ring, table),
        Command::Jet { expr, ring, at, order, algebra } => cmd_jet(&expr, &ring, at.as_deref(), order, algebra.as_deref()),
        Command::Verify { suite, ring, trials, seed, max_degree, vars } => parse_ring(&ring)
            .and_then(|ring| cmd_verify(VerifyConfig { ring, trials, seed, max_degree, vars }, &suite)),
        Command::Bench { expr, ring, mode, orders, repeat, format } => {
            cmd_bench(&expr, &ring, &mode, &orders, repeat, &format)
        }
    };
    match result {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
