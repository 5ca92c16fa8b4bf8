use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use dmf_core::algebra::text::{parse_poly, parse_rat};
use dmf_core::algebra::{FieldSpec, Fq, PrimePi, RatK, USeries};
use dmf_core::expr::parse_form;
use dmf_core::forms::{Level, SeriesForm};
use dmf_core::operators::{partial_series, proof_trace, theta, trace_level_one, u_operator, v_operator, OldPoly};
use dmf_core::structure::{filtration, IsobarTerm};
use dmf_core::verify::{run_suite, SuiteConfig, SuiteResult};
use dmf_core::Error;

#[derive(Parser)]
#[command(name = "dmf")]
#[command(about = "Exact u-expansions, operators and weight filtrations of Drinfeld modular forms")]
#[command(version)]
struct Cli {
    /// Field size q = p^r (p an odd prime), or the prime p when --r is given
    #[arg(long, global = true, default_value_t = 3)]
    q: u32,

    /// Extension degree r over F_p; with a prime power --q it must match
    #[arg(long, global = true)]
    r: Option<u32>,

    /// Defining polynomial of F_q over F_p in the variable z (r > 1 only)
    #[arg(long, global = true)]
    modulus: Option<String>,

    /// Monic irreducible π ∈ F_q[T]
    #[arg(long, global = true, default_value = "T")]
    pi: String,

    /// Precision N: results are known modulo u^N [default: 365 for q = 3,
    /// 130 for q = 5, max(4q², 100) otherwise]
    #[arg(long, global = true)]
    prec: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Theta,
    Partial,
    U,
    V,
    W,
    Trace,
}

#[derive(Subcommand)]
enum Command {
    /// Print the u-expansion of a form expression
    Expand {
        /// Form expression, e.g. delta, g1^2*h, estar, plus(delta)
        #[arg(long)]
        form: String,
    },
    /// Weight filtration modulo π of a level-one form
    Filtration {
        /// Form expression, or a file holding an expression or `expand` JSON
        #[arg(long)]
        form: String,
    },
    /// Apply an operator to a form expression
    Op {
        #[arg(value_enum)]
        op: Op,
        /// Form expression
        #[arg(long = "in")]
        input: String,
    },
    /// Run verification suites (all, congruences, counterexample,
    /// filtration, operators, or a single check A1..A14)
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Replay the filtration argument for eigenforms f and g = Θf (mod π)
    ProofTrace {
        #[arg(long, default_value = "plus(delta)")]
        f: String,
        #[arg(long, default_value = "estar*minus(delta)")]
        g: String,
    },
}

/// A finished command: rendered text plus whether every check passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, passed: true }
    }
}

fn default_prec(q: u32) -> usize {
    match q {
        3 => 365,
        5 => 130,
        _ => (4 * q as usize * q as usize).max(100),
    }
}

fn field_spec(cli: &Cli) -> anyhow::Result<FieldSpec> {
    let mut spec = FieldSpec::from_q(cli.q)?;
    match cli.r {
        Some(r) if spec.r == 1 && r > 1 => {
            let q = cli.q.checked_pow(r).ok_or_else(|| Error::InvalidField(format!("{}^{r} is too large", cli.q)))?;
            spec = FieldSpec::from_q(q)?;
        }
        Some(r) if r != spec.r => {
            bail!(Error::InvalidField(format!("--r {r} disagrees with --q {} = {}^{}", cli.q, spec.p, spec.r)));
        }
        _ => {}
    }
    if let Some(m) = &cli.modulus {
        if spec.r == 1 {
            bail!(Error::InvalidField("--modulus only applies to r > 1".into()));
        }
        let base = Fq::prime(spec.p)?;
        let poly = parse_poly(&base, &m.replace('z', "T"))?;
        spec.modulus = Some(poly.coeffs().to_vec());
    }
    Ok(spec)
}

struct Setup {
    field: Fq,
    pi: PrimePi,
    n: usize,
    spec: FieldSpec,
}

fn setup(cli: &Cli) -> anyhow::Result<Setup> {
    let spec = field_spec(cli)?;
    let field = Fq::new(&spec)?;
    let pi = PrimePi::new(parse_poly(&field, &cli.pi)?)?;
    let n = cli.prec.unwrap_or_else(|| default_prec(field.q()));
    if n == 0 {
        bail!(Error::InvalidArgument("--prec must be positive".into()));
    }
    Ok(Setup { field, pi, n, spec })
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    q: u32,
    pi: String,
    form: &'a str,
    weight: usize,
    #[serde(rename = "type")]
    typ: usize,
    prec: usize,
    coeffs: Vec<String>,
}

fn coeff_texts(s: &USeries) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

fn render_series(fmt: Format, s: &Setup, label: &str, weight: usize, typ: usize, series: &USeries) -> String {
    match fmt {
        Format::Json => to_json(&SeriesJson {
            q: s.field.q(),
            pi: s.pi.to_string(),
            form: label,
            weight,
            typ,
            prec: series.prec(),
            coeffs: coeff_texts(series),
        }),
        Format::Table => {
            let mut out = format!(
                "form {label}  q={}  pi={}  weight={weight}  type={typ}  prec={}\n",
                s.field.q(),
                s.pi,
                series.prec()
            );
            for i in series.support() {
                out.push_str(&format!("u^{i}\t{}\n", series.coeff(i)));
            }
            out
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_expand(cli: &Cli, form: &str) -> anyhow::Result<Output> {
    let s = setup(cli)?;
    let f = parse_form(&s.pi, form)?;
    let series = f.flatten(s.n)?;
    Ok(Output::ok(render_series(cli.format, &s, form, f.weight(), f.typ(), &series)))
}

/// A level-one form from an expression, a file with an expression, or a
/// file with `expand` JSON output.
fn load_level_one(s: &Setup, form: &str) -> anyhow::Result<SeriesForm> {
    let path = Path::new(form);
    let text = if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    } else {
        form.to_string()
    };
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        if v.is_object() {
            return series_from_json(s, &v);
        }
    }
    let f = parse_form(&s.pi, text.trim())?;
    if !f.is_level_one() {
        bail!(Error::InvalidArgument(format!("'{}' is not a level-one form", text.trim())));
    }
    Ok(SeriesForm::new(f.flatten(s.n)?, f.weight(), f.typ(), Level::One)?)
}

fn series_from_json(s: &Setup, v: &Value) -> anyhow::Result<SeriesForm> {
    let field_usize = |k: &str| {
        v.get(k)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Error::Parse(format!("JSON input lacks integer field '{k}'")))
    };
    let weight = field_usize("weight")?;
    let typ = field_usize("type")?;
    if let Some(q) = v.get("q").and_then(Value::as_u64) {
        if q != s.field.q() as u64 {
            bail!(Error::InvalidArgument(format!("input was computed for q = {q}, not {}", s.field.q())));
        }
    }
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("JSON input lacks 'coeffs'".into()))?;
    let rats: Vec<RatK> = coeffs
        .iter()
        .map(|c| {
            let t = c.as_str().ok_or_else(|| Error::Parse("coefficients must be strings".into()))?;
            parse_rat(&s.field, t)
        })
        .collect::<Result<_, Error>>()?;
    let series = USeries::from_rats(&s.field, &rats, rats.len());
    Ok(SeriesForm::new(series, weight, typ, Level::One)?)
}

#[derive(Serialize)]
struct FiltrationJson {
    q: u32,
    pi: String,
    weight: usize,
    #[serde(rename = "type")]
    typ: usize,
    filtration: dmf_core::structure::Filtration,
    isobaric: Vec<IsobarTerm>,
}

fn cmd_filtration(cli: &Cli, form: &str) -> anyhow::Result<Output> {
    let s = setup(cli)?;
    let f = load_level_one(&s, form)?;
    let rep = filtration(&f, &s.pi)?;
    let out = FiltrationJson {
        q: s.field.q(),
        pi: s.pi.to_string(),
        weight: f.weight,
        typ: f.typ,
        filtration: rep.filtration,
        isobaric: rep.isobaric.to_terms(),
    };
    Ok(Output::ok(match cli.format {
        Format::Json => to_json(&out),
        Format::Table => {
            let mut t = format!(
                "weight {}  type {}  filtration mod {}: {}\n",
                out.weight, out.typ, out.pi, out.filtration
            );
            for IsobarTerm(i, j, c) in &out.isobaric {
                t.push_str(&format!("  ({c}) * g1^{i} * h^{j}\n"));
            }
            t
        }
    }))
}

#[derive(Serialize)]
struct SymbolicJson {
    q: u32,
    pi: String,
    op: &'static str,
    input: String,
    result: String,
    eigenvalue: Option<i8>,
    weight: usize,
    #[serde(rename = "type")]
    typ: usize,
    prec: usize,
    coeffs: Vec<String>,
}

fn cmd_op(cli: &Cli, op: Op, input: &str) -> anyhow::Result<Output> {
    let s = setup(cli)?;
    let f = parse_form(&s.pi, input)?;
    let (k, l) = (f.weight(), f.typ());
    let m = s.field.q() as usize - 1;
    let (name, weight, typ, series) = match op {
        Op::Theta => ("theta", k + 2, (l + 1) % m, theta(&f.flatten(s.n)?)),
        Op::Partial => ("partial", k + 2, (l + 1) % m, partial_series(&f.flatten(s.n)?, k)?),
        Op::U => ("u", k, l, u_operator(&f.flatten(s.n)?, &s.pi)),
        Op::V => ("v", k, l, v_operator(&f.flatten(s.n)?, &s.pi)?),
        Op::Trace => ("trace", k, l, trace_level_one(&f, s.n)?.series),
        Op::W => {
            let w = f.w_action()?;
            let flat = w.flatten(s.n)?;
            let out = SymbolicJson {
                q: s.field.q(),
                pi: s.pi.to_string(),
                op: "w",
                input: input.to_string(),
                result: w.to_string(),
                eigenvalue: f.eigenvalue()?,
                weight: k,
                typ: l,
                prec: flat.prec(),
                coeffs: coeff_texts(&flat),
            };
            return Ok(Output::ok(match cli.format {
                Format::Json => to_json(&out),
                Format::Table => {
                    let ev = out.eigenvalue.map_or("none".to_string(), |e| format!("{e:+}"));
                    let mut t = format!("W({input}) = {}\neigenvalue: {ev}\n", out.result);
                    t.push_str(&render_series(Format::Table, &s, &format!("W({input})"), k, l, &flat));
                    t
                }
            }));
        }
    };
    let label = format!("{name}({input})");
    Ok(Output::ok(render_series(cli.format, &s, &label, weight, typ, &series)))
}

fn render_suite(r: &SuiteResult) -> String {
    let mut t = format!("suite {}  q={}  pi={}  N={}\n", r.suite, r.q, r.pi, r.prec);
    for c in &r.checks {
        t.push_str(&format!("{} {:<4} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title));
        for i in &c.items {
            t.push_str(&format!("    [{}] {}: {}\n", if i.passed { "ok" } else { "!!" }, i.label, i.detail));
        }
    }
    t.push_str(&format!("hash {}\nwall time {:.2?}\n", r.hash, r.wall_time));
    t
}

fn cmd_verify(cli: &Cli, suite: &str) -> anyhow::Result<Output> {
    let s = setup(cli)?;
    let cfg = SuiteConfig { field: s.spec.clone(), pi: cli.pi.clone(), prec: s.n };
    let r = run_suite(suite, &cfg)?;
    let text = match cli.format {
        Format::Json => to_json(&r),
        Format::Table => render_suite(&r),
    };
    Ok(Output { text, passed: r.passed })
}

fn cmd_proof_trace(cli: &Cli, f: &str, g: &str) -> anyhow::Result<Output> {
    let s = setup(cli)?;
    let fp: OldPoly = parse_form(&s.pi, f)?;
    let gp: OldPoly = parse_form(&s.pi, g)?;
    let tr = proof_trace(&fp, &gp, s.n)?;
    let passed = tr.chain_holds();
    let text = match cli.format {
        Format::Json => to_json(&tr),
        Format::Table => {
            let yn = |b: bool| if b { "holds" } else { "FAILS" };
            let mut t = format!("proof trace for f = {f}, g = {g} (mod {})\n", tr.pi);
            t.push_str(&format!("  k = {}, α = {:+}, β = {:+}\n", tr.k, tr.alpha, tr.beta));
            if tr.k_divisible_by_p {
                t.push_str("  note: p divides k, so F ≡ kf ≡ 0\n");
            }
            t.push_str(&format!("  Θf ≡ g: {}\n", yn(tr.premise.verdict)));
            t.push_str(&format!("  h = (g − ∂f + kE*f)/π integral: {} (v = {})\n", yn(tr.h_integral), tr.h_valuation));
            t.push_str(&format!("  W(g − ∂f + kE*f) = βg − α∂f: {}\n", yn(tr.w_relation)));
            t.push_str(&format!("  F ≡ kf: {}\n", yn(tr.f_congruence.verdict)));
            t.push_str(&format!("  H ≡ −kE*f: {}\n", yn(tr.h_congruence.verdict)));
            t.push_str(&format!("  H ≡ ∂(g_d)F: {}\n", yn(tr.h_vs_dgd_f.verdict)));
            t.push_str(&format!(
                "  w(F) = {} (hypothesis value {}), w(H) = {} (bound {})\n",
                tr.filtration_f, tr.hypothesis_weight, tr.filtration_h, tr.filtration_h_bound
            ));
            t.push_str(&format!("  outcome: {}\n", serde_json::to_value(tr.outcome).expect("enum").as_str().unwrap_or("")));
            t
        }
    };
    Ok(Output { text, passed })
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Expand { form } => cmd_expand(cli, form),
        Command::Filtration { form } => cmd_filtration(cli, form),
        Command::Op { op, input } => cmd_op(cli, *op, input),
        Command::Verify { suite } => cmd_verify(cli, suite),
        Command::ProofTrace { f, g } => cmd_proof_trace(cli, f, g),
    }
}

/// 2 for usage and configuration problems, 1 for mathematical failures.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::NotInSpan(_)
            | Error::NotPiIntegral(_)
            | Error::PremiseViolated(_)
            | Error::NonUnitSeries(_)
            | Error::RootObstruction(_)
            | Error::CompositionNotSupported(_),
        ) => 1,
        _ => 2,
    }
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli).and_then(|o| emit(&cli, &o.text).map(|_| o.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
