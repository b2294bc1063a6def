use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use witt_parshin::asw_reduce::{reduce, verify, CanonicalASW, Reduction};
use witt_parshin::context::KWitt;
use witt_parshin::milnor::CanonicalK2;
use witt_parshin::parse::{symbol_from_text_with, witt_from_text};
use witt_parshin::ramification::{ell, in_level, phi_map, ram_profile, u_membership, RamVector};
use witt_parshin::selftest::{self, Options};
use witt_parshin::series::{PrecisionWindow, SeriesDisplay};
use witt_parshin::symbol::{pair_closed_form, pair_parshin, pair_theorem1};
use witt_parshin::{Context, Error, Ring};

const WINDOW_ENV: &str = "WITT_PARSHIN_WINDOW";
const MAX_WIDENINGS: usize = 6;

#[derive(Parser)]
#[command(name = "witt-parshin", version, about = "Artin-Schreier-Witt symbols over k((S))((T))")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the symbol [x, y).
    Pair {
        #[command(flatten)]
        field: FieldArgs,
        /// Witt vector, `[x0, x1, ...]` or a single coordinate.
        #[arg(long)]
        x: String,
        /// Product of symbols, e.g. `{1+S*T, S}^2 * {S, T}`.
        #[arg(long)]
        y: String,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
    },
    /// Canonical representative of x modulo wp, with a witness.
    Reduce {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        x: String,
    },
    /// Canonical form of a product of symbols.
    Normalize {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        y: String,
        /// Keep generators (i, j) with |i| <= bound and j <= bound.
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// Ramification exponents, profile, membership and phi.
    Ram {
        #[command(flatten)]
        field: FieldArgs,
        /// `r1,r2`.
        #[arg(long, value_parser = parse_pair)]
        r: (i64, i64),
        /// `m1,m2`: print ell(r, (m1, m2)).
        #[arg(long, value_parser = parse_pair)]
        index: Option<(i64, i64)>,
        /// Symbol to test for membership and map by phi.
        #[arg(long)]
        y: Option<String>,
        /// Indices run over [0, bound]^2.
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// Run the consistency suite.
    Selftest {
        #[arg(long, default_value_t = Options::default().seed)]
        seed: u64,
        /// Divide every case count by this.
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: u64,
    /// Residue field is F_{p^d}.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Witt length.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Monic modulus, coefficients low degree first, e.g. `1,1,1`.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Theorem1,
    Parshin,
    Closed,
    All,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated integers, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

enum Failure {
    /// Exit 1.
    Mismatch(String),
    /// Exit 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::WindowTooSmall(_) | Error::Divisibility { .. } => {
                Failure::Mismatch(format!("computation failed: {e}"))
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(String, Value), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = match cli.cmd {
        Command::Pair { field, x, y, method } => (field.format, cmd_pair(&field, &x, &y, method)),
        Command::Reduce { field, x } => (field.format, cmd_reduce(&field, &x)),
        Command::Normalize { field, y, bound } => (field.format, cmd_normalize(&field, &y, bound)),
        Command::Ram { field, r, index, y, bound } => (field.format, cmd_ram(&field, r, index, y.as_deref(), bound)),
        Command::Selftest { seed, scale, format } => (format, cmd_selftest(seed, scale)),
    };
    match result {
        Ok((text, value)) => {
            emit(format, &text, &value);
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(format: Format, text: &str, value: &Value) {
    let out = match format {
        Format::Text => text.to_string(),
        Format::Json => serde_json::to_string_pretty(value).expect("json") + "\n",
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn context(f: &FieldArgs) -> Result<Context, Failure> {
    Ok(Context::new(f.p, f.d, f.modulus.clone(), f.m)?)
}

/// Window for evaluating input series: `WITT_PARSHIN_WINDOW=weight,cap`.
fn input_window() -> Result<PrecisionWindow, Failure> {
    match std::env::var(WINDOW_ENV) {
        Ok(s) => {
            let (w, cap) = parse_pair(&s).map_err(|e| Failure::Input(format!("{WINDOW_ENV}: {e}")))?;
            if w < 1 || cap < 1 {
                return Err(Failure::Input(format!("{WINDOW_ENV}: weight and cap must be positive")));
            }
            Ok(PrecisionWindow::new(w, cap))
        }
        Err(_) => Ok(PrecisionWindow::new(16, 256)),
    }
}

/// Normalize `src`, keeping generators `(i, j)` with `|i| <= ibound` and
/// `j <= jbound`; widens on `WindowTooSmall`.
fn normalize_bounded(
    ctx: &Context,
    src: &str,
    ibound: i64,
    jbound: i64,
    trace: &mut Vec<String>,
) -> Result<CanonicalK2, Failure> {
    let ks = ctx.k_series(input_window()?);
    let mut weight = ibound.max(0) + 2;
    for _ in 0..=MAX_WIDENINGS {
        let fw = PrecisionWindow::new(weight, weight * (jbound.max(0) + 1) + 1);
        match symbol_from_text_with(ctx, &ks, &ctx.k_series(fw), src) {
            Err(Error::WindowTooSmall(msg)) => {
                trace.push(format!("window weight {weight}: {msg}; widening"));
                weight *= 2;
            }
            other => {
                let mut y = other?;
                y.gens.retain(|g| g.i.abs() <= ibound && g.j <= jbound);
                return Ok(y);
            }
        }
    }
    Err(Failure::Mismatch(format!("symbol normalization did not converge: {}", trace.join("; "))))
}

fn parse_x(ctx: &Context, src: &str) -> Result<KWitt, Failure> {
    Ok(witt_from_text(ctx, &ctx.k_series(input_window()?), src)?)
}

fn canonical_json(x: &CanonicalASW) -> Value {
    let terms: Vec<Value> =
        x.terms.iter().map(|(e, c)| json!({ "i": e.s, "j": e.t, "coeff": c.to_string() })).collect();
    json!({ "c": x.c, "terms": terms })
}

fn k2_json(y: &CanonicalK2) -> Value {
    let gens: Vec<Value> = y
        .gens
        .iter()
        .map(|g| json!({ "kind": g.kind.var(), "i": g.i, "j": g.j, "a": g.a.to_string(), "n": g.n }))
        .collect();
    json!({ "e": y.e, "gens": gens })
}

fn field_json(ctx: &Context) -> Value {
    json!({ "p": ctx.p(), "d": ctx.d(), "m": ctx.m, "modulus": ctx.tower.params.modulus })
}

fn cmd_pair(f: &FieldArgs, x: &str, y: &str, method: Method) -> Outcome {
    let ctx = context(f)?;
    let xw = parse_x(&ctx, x)?;
    let red = reduce(&ctx, &xw)?;
    let (ib, jb) = red.canonical.terms.keys().fold((0, 0), |(a, b), e| (a.max(e.s.abs()), b.max(e.t)));
    let mut trace = Vec::new();
    let yc = normalize_bounded(&ctx, y, ib, jb, &mut trace)?;

    let mut values: Vec<(&str, u64)> = Vec::new();
    if matches!(method, Method::Theorem1 | Method::All) {
        values.push(("theorem1", pair_theorem1(&ctx, &red.canonical, &yc)?.v));
    }
    if matches!(method, Method::Parshin | Method::All) {
        values.push(("parshin", pair_parshin(&ctx, &xw, &yc)?.v));
    }
    if matches!(method, Method::Closed | Method::All) {
        values.push(("closed", pair_closed_form(&ctx, &red.canonical, &yc).v));
    }
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    let listing: Vec<String> = values.iter().map(|(n, v)| format!("{n} = {v}")).collect();
    if !agree {
        return Err(Failure::Mismatch(format!("methods disagree: {}", listing.join(", "))));
    }
    let v = values[0].1;
    let mut text = format!("{v} (mod {})\n", ctx.pm());
    if values.len() > 1 {
        text += &format!("methods agree: {}\n", listing.join(", "));
    }
    for t in &trace {
        text += &format!("note: {t}\n");
    }
    let by_method: serde_json::Map<String, Value> = values.iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
    let value = json!({
        "field": field_json(&ctx),
        "x": canonical_json(&red.canonical),
        "y": k2_json(&yc),
        "value": v,
        "modulus": ctx.pm(),
        "methods": by_method,
        "agree": agree,
    });
    Ok((text, value))
}

fn witness_text(red: &Reduction) -> Vec<String> {
    red.witness.coords.iter().map(|c| SeriesDisplay(c).to_string()).collect()
}

fn cmd_reduce(f: &FieldArgs, x: &str) -> Outcome {
    let ctx = context(f)?;
    let xw = parse_x(&ctx, x)?;
    let red = reduce(&ctx, &xw)?;
    let check = verify(&ctx, &xw, &red);
    let Some(bound) = check else {
        return Err(Failure::Mismatch(format!("witness check failed for canonical form {}", red.canonical)));
    };
    let bound_text =
        bound.map_or("exactly".to_string(), |b| format!("below degree {b} (weight {})", red.window.weight));
    let wit = witness_text(&red);
    let mut text = format!("canonical: {}\n", red.canonical);
    for (h, w) in wit.iter().enumerate() {
        text += &format!("witness[{h}]: {w}\n");
    }
    text += &format!("verified: x = embed(canonical) + wp(witness) {bound_text}\n");
    let value = json!({
        "field": field_json(&ctx),
        "canonical": canonical_json(&red.canonical),
        "canonical_text": red.canonical.to_string(),
        "witness": wit,
        "verified": true,
        "exact_below": bound,
        "weight": red.window.weight,
    });
    Ok((text, value))
}

fn cmd_normalize(f: &FieldArgs, y: &str, bound: i64) -> Outcome {
    let ctx = context(f)?;
    let mut trace = Vec::new();
    let yc = normalize_bounded(&ctx, y, bound, bound, &mut trace)?;
    let mut text = format!("{yc}\n");
    for t in &trace {
        text += &format!("note: {t}\n");
    }
    let value = json!({ "field": field_json(&ctx), "symbol": k2_json(&yc), "text": yc.to_string(), "bound": bound });
    Ok((text, value))
}

fn cmd_ram(f: &FieldArgs, r: (i64, i64), index: Option<(i64, i64)>, y: Option<&str>, bound: i64) -> Outcome {
    let ctx = context(f)?;
    let p = ctx.p();
    let rv = RamVector::new(r.0, r.1)?;
    let mut text = String::new();
    let mut value = json!({ "field": field_json(&ctx), "r": [rv.r1, rv.r2] });
    if let Some((m1, m2)) = index {
        let l = ell(p, rv, m1, m2)?;
        let shown = l.map_or("infinity".to_string(), |l| l.to_string());
        text += &format!("ell({rv}, ({m1}, {m2})) = {shown}\n");
        value["ell"] = json!(l);
    }
    let prof = ram_profile(p, rv, ctx.m, bound);
    text += &format!("profile of G^{rv} at level {} on [0, {bound}]^2:\n{prof}", ctx.m);
    value["profile"] = prof.exps.iter().map(|(e, l)| json!({ "m1": e.s, "m2": e.t, "exp": l })).collect();
    if let Some(src) = y {
        let mut trace = Vec::new();
        let yc = normalize_bounded(&ctx, src, bound, bound, &mut trace)?;
        let member = u_membership(&ctx, &yc, rv);
        let phi = phi_map(&ctx, &yc, bound);
        text += &format!("y = {yc}\nin U^{rv}: {member}\nphi(y):\n");
        for (e, v) in phi.iter().filter(|(_, v)| !ctx.zq().is_zero(v)) {
            text += &format!("({}, {}): {v}\n", e.s, e.t);
        }
        let image = phi.iter().all(|(e, v)| in_level(&ctx, v, prof.exps[e]));
        if image != member {
            return Err(Failure::Mismatch(format!("membership {member} but phi image test {image}")));
        }
        value["y"] = k2_json(&yc);
        value["member"] = json!(member);
        value["phi"] = phi.iter().map(|(e, v)| json!({ "m1": e.s, "m2": e.t, "value": v.to_string() })).collect();
    }
    Ok((text, value))
}

fn cmd_selftest(seed: u64, scale: usize) -> Outcome {
    let reports = selftest::run_all(&Options { seed, scale });
    let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
    let value = json!({ "seed": seed, "scale": scale, "criteria": reports });
    if reports.iter().all(|r| r.passed()) {
        Ok((text, value))
    } else {
        emit(Format::Text, &text, &value);
        Err(Failure::Mismatch("self-test failed".into()))
    }
}
