//! The `sl2` command line. [`run`] does all the work and returns the exit
//! code with both output streams, so the binary is a two-line shim and
//! tests can drive the full interface in-process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::census::{
    census_report, default_sweep, format_census, format_claims, replay, run_claims, ClaimStatus,
    ClaimVerdict, Counterexample, Scope,
};
use crate::decomp::{decompose, decompose_hu, requires_unipotent, FactorOrder};
use crate::error::{Error, Result};
use crate::fields::{
    hilbert_symbol, parse_elem, parse_field_ambient, relevant_places, ExtensionMode, Field,
    FieldKind, Place,
};
use crate::involution::{
    in_borel, in_torus, in_unipotent, involution_from_matrix, make_involution, make_tau0,
    parse_involution, Involution,
};
use crate::mat2::{is_semisimple, parse_mat};
use crate::symspace::witness_in_q;
use crate::verdict::MembershipVerdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_REFUTED: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    #[default]
    Text,
}

/// A parsed invocation. Serializes to JSON and back without loss, and the
/// JSON output of every command embeds it under `"request"`.
#[derive(Clone, Debug, PartialEq, Eq, Parser, Serialize, Deserialize)]
#[command(name = "sl2", version, about = "Generalized Cartan decompositions of SL2")]
pub struct CliRequest {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Factor g as h q u (or another order)
    Decompose {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, allow_hyphen_values = true)]
        mat: String,
        #[arg(long, default_value = "HQU")]
        order: String,
    },
    /// Membership of g in H, Q~, U, T, B, and whether g lies in H Q~
    Membership {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, allow_hyphen_values = true)]
        mat: String,
    },
    /// Find g with q = g tau(g)^-1
    Witness {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, allow_hyphen_values = true)]
        mat: String,
    },
    /// Normal form tau_m of Inn(A), or the class of a given tau_m
    Classify {
        #[command(flatten)]
        ctx: Context,
        #[arg(long, allow_hyphen_values = true)]
        mat: Option<String>,
    },
    /// Square-class representative of x
    SquareClass {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Hilbert symbol (a,b)_v over Q
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// A prime, or `inf`; every relevant place when omitted
        #[arg(long)]
        place: Option<String>,
    },
    /// Group sizes, intersection counts and torus orbits over a finite field
    Census {
        #[command(flatten)]
        ctx: Context,
    },
    /// Run the claim registry on one scope, a list of fields, or the default sweep
    VerifyClaims {
        #[arg(long)]
        field: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        /// Comma-separated field orders; both square classes of m each
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        /// Comma-separated claim ids, e.g. C1,C12
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        /// Replay one serialized counterexample instead
        #[arg(long)]
        counterexample: Option<String>,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Args, Serialize, Deserialize)]
pub struct Context {
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// `tau(m)` or `tau0`
    #[arg(long)]
    pub inv: Option<String>,
    /// Shorthand for `--inv "tau(m)"`
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// p-adic precision, overriding the field spec
    #[arg(long)]
    pub precision: Option<u32>,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `argv` (including the program name) and execute.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let req = match CliRequest::try_parse_from(argv) {
        Ok(r) => r,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    execute(&req)
}

pub fn execute(req: &CliRequest) -> Outcome {
    match dispatch(req) {
        Ok((body, text, code)) => {
            let stdout = match req.format {
                Format::Json => {
                    let doc = json!({ "request": req, "result": body });
                    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
                }
                Format::Text => text,
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("usage error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: EXIT_DOMAIN,
            stdout: String::new(),
            stderr: format!("{}: {e}\n", e.name()),
        },
    }
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidField(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

type Dispatched = std::result::Result<(Json, String, i32), Failure>;

fn field_of(spec: &str, precision: Option<u32>) -> Result<(Field, Option<ExtensionMode>)> {
    let (f, amb) = parse_field_ambient(spec)?;
    match (precision, f.kind()) {
        (None, _) => Ok((f, amb)),
        (Some(n), FieldKind::PAdic { .. }) => Ok((Field::padic(f.padic_prime().unwrap(), n)?, amb)),
        (Some(_), _) => Err(Error::BadParameter("--precision applies to p-adic fields only".into())),
    }
}

fn involution_of(ctx: &Context, f: &Field) -> std::result::Result<Involution, Failure> {
    match (&ctx.inv, &ctx.m) {
        (Some(_), Some(_)) => Err(Failure::Usage("give --inv or --m, not both".into())),
        (Some(t), None) => Ok(parse_involution(f, t)?),
        (None, Some(m)) => Ok(make_involution(f, &parse_elem(f, m)?)?),
        (None, None) if f.characteristic() == 2 && f.is_finite() => Ok(make_tau0(f)?),
        (None, None) => Err(Failure::Usage("an involution is required (--inv or --m)".into())),
    }
}

fn verdict_text<W>(v: &MembershipVerdict<W>, show: impl Fn(&W) -> String) -> String {
    match v {
        MembershipVerdict::Yes(w) => format!("Yes {}", show(w)),
        MembershipVerdict::No(c) => format!("No ({c})"),
        MembershipVerdict::Undecided(r) => format!("Undecided ({r})"),
    }
}

fn dispatch(req: &CliRequest) -> Dispatched {
    match &req.command {
        Command::Decompose { ctx, mat, order } => cmd_decompose(ctx, mat, order),
        Command::Membership { ctx, mat } => cmd_membership(ctx, mat),
        Command::Witness { ctx, mat } => cmd_witness(ctx, mat),
        Command::Classify { ctx, mat } => cmd_classify(ctx, mat.as_deref()),
        Command::SquareClass { field, precision, x } => cmd_square_class(field, *precision, x),
        Command::Hilbert { a, b, place } => cmd_hilbert(a, b, place.as_deref()),
        Command::Census { ctx } => cmd_census(ctx),
        Command::VerifyClaims { field, m, q, claims, counterexample, strict } => {
            if let Some(cx) = counterexample {
                return cmd_replay(cx);
            }
            cmd_verify(field.as_deref(), m.as_deref(), q, claims, *strict)
        }
    }
}

fn cmd_decompose(ctx: &Context, mat: &str, order: &str) -> Dispatched {
    let (f, _) = field_of(&ctx.field, ctx.precision)?;
    let inv = involution_of(ctx, &f)?;
    let g = parse_mat(&f, mat)?;
    let order: FactorOrder = order.parse()?;
    let v = decompose(&g, &inv, order)?;
    let text = match &v {
        MembershipVerdict::Yes(r) => {
            let mut s = format!("g = {g}\nbranch = {:?}\norder = {}\n", r.branch, r.order);
            for (name, m) in [("h", &r.h), ("w", &r.w), ("q", &r.q), ("u", &r.u)] {
                s.push_str(&format!("{name} = {m}\n"));
            }
            s
        }
        other => format!("{}\n", verdict_text(other, |_| String::new())),
    };
    let body = json!({ "g": g, "involution": inv.to_string(), "decomposition": v });
    Ok((body, text, EXIT_OK))
}

fn cmd_membership(ctx: &Context, mat: &str) -> Dispatched {
    let (f, _) = field_of(&ctx.field, ctx.precision)?;
    let inv = involution_of(ctx, &f)?;
    let g = parse_mat(&f, mat)?;
    g.require_sl2()?;
    let preds = [
        ("H", inv.in_fixed_group(&g)),
        ("Q~", inv.in_extended_symmetric(&g)),
        ("U", in_unipotent(&g)),
        ("T", in_torus(&g)),
        ("B", in_borel(&g)),
        ("semisimple", is_semisimple(&g)?),
    ];
    let hq = if f.characteristic() == 2 { None } else { Some(requires_unipotent(&g, &inv)?) };
    let hu = if f.characteristic() == 2 { None } else { Some(decompose_hu(&g, &inv)?) };
    let mut text = format!("g = {g}\n");
    let mut members = serde_json::Map::new();
    for (k, v) in preds {
        text.push_str(&format!("{k}: {v}\n"));
        members.insert(k.to_string(), Json::Bool(v));
    }
    if let Some(v) = &hq {
        text.push_str(&format!("requires unipotent: {}\n", verdict_text(v, |w| w.to_string())));
    }
    if let Some(v) = &hu {
        text.push_str(&format!("in H U: {}\n", verdict_text(v, |(h, u)| format!("h = {h}, u = {u}"))));
    }
    let body = json!({
        "g": g,
        "involution": inv.to_string(),
        "members": members,
        "requires_unipotent": hq,
        "in_hu": hu,
    });
    Ok((body, text, EXIT_OK))
}

fn cmd_witness(ctx: &Context, mat: &str) -> Dispatched {
    let (f, amb) = field_of(&ctx.field, ctx.precision)?;
    let inv = involution_of(ctx, &f)?;
    let q = parse_mat(&f, mat)?;
    let r = witness_in_q(&q, &inv, amb)?;
    let mut text = format!(
        "q = {q}\nroute = {:?}\nwitness field = {}\n{}\n",
        r.route,
        r.witness_field,
        verdict_text(&r.verdict, |w| w.to_string())
    );
    if let Some(c) = &r.certificate {
        text.push_str(&format!("certificate: {c}\n"));
    }
    let body = json!({ "q": q, "involution": inv.to_string(), "witness": r });
    Ok((body, text, EXIT_OK))
}

fn cmd_classify(ctx: &Context, mat: Option<&str>) -> Dispatched {
    let (f, _) = field_of(&ctx.field, ctx.precision)?;
    let (inv, conjugator) = match mat {
        Some(a) => {
            let nf = involution_from_matrix(&parse_mat(&f, a)?)?;
            (nf.involution, Some(nf.conjugator))
        }
        None => {
            let given = involution_of(ctx, &f)?;
            let inv = match given.m() {
                Some(m) => make_involution(&f, &f.square_class(m)?.rep)?,
                None => given,
            };
            (inv, None)
        }
    };
    let label = inv.square_class().and_then(|c| c.label.as_ref()).map(|l| l.to_string());
    let mut text = format!("normal form = {inv}\n");
    if let Some(l) = &label {
        text.push_str(&format!("class = {l}\n"));
    }
    if let Some(c) = &conjugator {
        text.push_str(&format!("conjugator = {c}\n"));
    }
    let body = json!({
        "normal_form": inv.to_string(),
        "m": inv.m().map(|m| m.to_string()),
        "class": label,
        "conjugator": conjugator,
    });
    Ok((body, text, EXIT_OK))
}

fn cmd_square_class(field: &str, precision: Option<u32>, x: &str) -> Dispatched {
    let (f, _) = field_of(field, precision)?;
    let x = parse_elem(&f, x)?;
    let c = f.square_class(&x)?;
    let square = x.is_square()?;
    let label = c.label.as_ref().map(|l| l.to_string());
    // p-adic reps are small integers; show them that way alongside the digits
    let short = if f.is_padic() { c.rep.small_rational().map(|r| r.to_string()) } else { None };
    let mut text = match &short {
        Some(r) => format!("{r} = {} (square: {square})", c.rep),
        None => format!("{} (square: {square})", c.rep),
    };
    if let Some(l) = &label {
        text.push_str(&format!(" class {l}"));
    }
    text.push('\n');
    let body = json!({
        "x": x.to_string(),
        "rep": c.rep.to_string(),
        "rep_rational": short,
        "class": label,
        "is_square": square,
    });
    Ok((body, text, EXIT_OK))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let e = parse_elem(&Field::rationals(), s)?;
    Ok(e.as_rational().cloned().expect("rational field"))
}

fn parse_place(s: &str) -> Result<Place> {
    match s.trim() {
        "inf" | "oo" | "infinity" | "R" => Ok(Place::Infinity),
        p => p
            .parse()
            .map(Place::Prime)
            .map_err(|_| Error::Parse(format!("expected a prime or inf, got {p:?}"))),
    }
}

fn sign(s: i32) -> &'static str {
    if s > 0 {
        "+1"
    } else {
        "-1"
    }
}

fn cmd_hilbert(a: &str, b: &str, place: Option<&str>) -> Dispatched {
    let (a, b) = (parse_rational(a)?, parse_rational(b)?);
    if let Some(p) = place {
        let v = parse_place(p)?;
        let s = hilbert_symbol(&a, &b, &v)?;
        let body = json!({ "a": a.to_string(), "b": b.to_string(), "place": v.to_string(), "symbol": s });
        return Ok((body, format!("{}\n", sign(s)), EXIT_OK));
    }
    let mut text = String::new();
    let mut symbols = serde_json::Map::new();
    for v in relevant_places(&a, &b)? {
        let s = hilbert_symbol(&a, &b, &v)?;
        text.push_str(&format!("{v}\t{}\n", sign(s)));
        symbols.insert(v.to_string(), json!(s));
    }
    let body = json!({ "a": a.to_string(), "b": b.to_string(), "symbols": symbols });
    Ok((body, text, EXIT_OK))
}

fn cmd_census(ctx: &Context) -> Dispatched {
    let (f, _) = field_of(&ctx.field, ctx.precision)?;
    if !f.is_finite() {
        return Err(Failure::Domain(Error::Unsupported("census needs a finite field".into())));
    }
    let inv = involution_of(ctx, &f)?;
    let c = census_report(&inv)?;
    let text = format_census(&c);
    Ok((serde_json::to_value(&c).expect("json"), text, EXIT_OK))
}

#[derive(Serialize)]
struct Checked<'a> {
    #[serde(flatten)]
    status: &'a ClaimStatus,
    /// For Refuted verdicts: whether the counterexample re-verified.
    #[serde(skip_serializing_if = "Option::is_none")]
    replayed: Option<bool>,
}

fn cmd_verify(field: Option<&str>, m: Option<&str>, qs: &[u64], claims: &[String], strict: bool) -> Dispatched {
    let scopes = match (field, qs.is_empty()) {
        (Some(_), false) => return Err(Failure::Usage("give --field or --q, not both".into())),
        (Some(spec), true) => {
            let (f, _) = field_of(spec, None)?;
            let m = m.map(|m| parse_elem(&f, m)).transpose()?;
            vec![Scope::new(&f, m.as_ref())?]
        }
        (None, false) => {
            if m.is_some() {
                return Err(Failure::Usage("--m needs --field".into()));
            }
            let mut out = Vec::new();
            for &q in qs {
                let f = Field::finite(q)?;
                out.push(Scope::new(&f, Some(&f.one()))?);
                if let Some(n) = f.least_non_square() {
                    out.push(Scope::new(&f, Some(&n))?);
                }
            }
            out
        }
        (None, true) => default_sweep()?,
    };
    let filter: Vec<String> = claims.iter().map(|c| c.trim().to_uppercase()).collect();
    let statuses = run_claims(&scopes, if filter.is_empty() { None } else { Some(&filter) });
    let mut checked = Vec::new();
    let mut replay_text = String::new();
    let mut any_refuted = false;
    for s in &statuses {
        let replayed = match &s.verdict {
            ClaimVerdict::Refuted { counterexample } => {
                any_refuted = true;
                let ok = replay(counterexample)?;
                if !ok {
                    replay_text.push_str(&format!("replay failed: {} {}\n", s.claim_id, s.scope));
                }
                Some(ok)
            }
            _ => None,
        };
        checked.push(Checked { status: s, replayed });
    }
    let text = format!("{}{replay_text}", format_claims(&statuses));
    let code = if strict && any_refuted { EXIT_REFUTED } else { EXIT_OK };
    Ok((serde_json::to_value(&checked).expect("json"), text, code))
}

fn cmd_replay(cx: &str) -> Dispatched {
    let c: Counterexample = serde_json::from_str(cx)
        .map_err(|e| Failure::Usage(format!("counterexample is not valid JSON: {e}")))?;
    let ok = replay(&c)?;
    let body = json!({ "counterexample": c, "replayed": ok });
    Ok((body, format!("replayed: {ok}\n"), EXIT_OK))
}
