//! Command-line front end. Every command builds a [`Report`] that renders either as
//! `key: value` text or, with `--structured`, as JSON with the same fields in the
//! same order.

use std::io::Write;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::bisequence::{lambda_at, limsup_lambda, sup_lambda, BiSeq, SupStatus};
use crate::certify::{
    audit_not_attained, certify_forbidden, certify_pattern_necessity, word_string, BoundCertificate, CertifyError,
    Constraints, Pattern,
};
use crate::cfrac::{cf_expand, Expansion, Quotient};
use crate::constructions::{build_a0, build_alpha0_prefix, surgery, Variant};
use crate::quadfield::{QuadExt, QuadSum};
use crate::syntax::{parse_biseq, parse_expression, parse_word, parse_word_list, Expression};

const LAMBDA0: &str = "[3;3,3,2,1,(1,2)]+[0;2,1,(1,2)]";

#[derive(Parser, Debug)]
#[command(
    name = "lagrange",
    version,
    about = "Exact continued fractions, lambda values and forbidden-pattern certificates"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    structured: bool,
    /// Decimal places in approximate renderings.
    #[arg(long, global = true, default_value_t = 7)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact value of an expression such as "[3;3,3,2,1,(1,2)]+[0;2,1,(1,2)]".
    Eval { expr: String },
    /// Continued fraction expansion of a number in one quadratic field.
    Expand {
        value: String,
        #[arg(long, default_value_t = 10_000)]
        max_terms: usize,
    },
    /// lambda_i of a bi-infinite sequence such as "<(2,1) | 1,2,3,3*,3,2,1 | (1,2)>".
    Lambda {
        biseq: String,
        #[arg(long, allow_negative_numbers = true)]
        index: i64,
    },
    /// Supremum of lambda_i with an attainment certificate.
    Sup {
        biseq: String,
        #[arg(long, default_value_t = 16)]
        max_window: usize,
    },
    /// limsup of lambda_i as i grows.
    Limsup { biseq: String },
    /// Certify that a pattern forces lambda above a threshold.
    CertifyPattern {
        pattern: String,
        #[arg(long)]
        site: usize,
        #[arg(long, default_value = LAMBDA0)]
        threshold: String,
        #[arg(long, default_value_t = 3)]
        alphabet_max: Quotient,
        /// Forbidden factors, e.g. "(1,3),(3,1)".
        #[arg(long, default_value = "")]
        forbid: String,
        #[arg(long, default_value_t = 25)]
        depth: usize,
    },
    /// Sweep all windows under the full ban list for lambda at the center.
    Necessity {
        #[arg(long, default_value = "3691/1000")]
        threshold: String,
        #[arg(long, default_value_t = 15)]
        window: usize,
        #[arg(long, default_value_t = 25)]
        depth: usize,
    },
    /// Check lambda_n < lambda_0 along a prefix of alpha_0.
    AuditAlpha0 {
        #[arg(long, default_value_t = 8)]
        blocks: usize,
        #[arg(long, default_value_t = 12)]
        start: usize,
    },
    /// Delete or duplicate the block between two same-parity positions (1-based).
    Surgery {
        word: String,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
    },
    /// Print one of the explicit sequences.
    Construct {
        #[command(subcommand)]
        which: Construct,
    },
}

#[derive(Subcommand, Debug)]
enum Construct {
    A0,
    Alpha0 {
        #[arg(long, default_value_t = 8)]
        blocks: usize,
    },
}

/// Ordered fields; values are JSON so both renderings share one source.
struct Report {
    fields: Map<String, Value>,
    /// 0 when everything was certified, 2 when the run finished without a verdict.
    code: i32,
}

impl Report {
    fn new() -> Self {
        Report {
            fields: Map::new(),
            code: 0,
        }
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), v.into());
        self
    }

    fn text(&self) -> String {
        if let [(_, v)] = self.fields.iter().collect::<Vec<_>>().as_slice() {
            return format!("{}\n", inline(v));
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            match v {
                Value::Array(items) if items.iter().any(Value::is_object) => {
                    out.push_str(&format!("{k}:\n"));
                    for item in items {
                        out.push_str(&format!("  - {}\n", inline(item)));
                    }
                }
                _ => out.push_str(&format!("{k}: {}\n", inline(v))),
            }
        }
        out
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(m) if m.contains_key("exact") && m.len() == 2 => {
            format!("{} ≈ {}", inline(&m["exact"]), inline(&m["decimal"]))
        }
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {}", inline(v))).collect();
            parts.join(", ")
        }
        other => other.to_string(),
    }
}

fn exact(v: &QuadSum, digits: usize) -> Value {
    json!({ "exact": v.to_string(), "decimal": v.approx(digits) })
}

fn exact_rational(r: &BigRational, digits: usize) -> Value {
    exact(&QuadSum::from_rational(r), digits)
}

fn word_value(w: &[Quotient]) -> Value {
    Value::String(word_string(w))
}

#[derive(Debug)]
struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

fn numeric(text: &str) -> Result<QuadSum, CliError> {
    match parse_expression(text)? {
        Expression::BiSeq(_) => Err(CliError(format!("expected a number, got a sequence: {text}"))),
        e => Ok(e.value().expect("numeric expression")),
    }
}

fn rational(text: &str) -> Result<BigRational, CliError> {
    let v = numeric(text)?;
    v.as_ext()
        .and_then(QuadExt::to_rational)
        .ok_or_else(|| CliError(format!("expected a rational number, got {v}")))
}

fn certificate_report(r: &mut Report, cert: &BoundCertificate, threshold: &QuadSum, digits: usize) {
    r.put("pattern", word_value(&cert.pattern.word))
        .put("site", cert.pattern.site)
        .put("constraints", cert.constraints.to_string())
        .put("depth", cert.depth)
        .put("threshold", exact(threshold, digits))
        .put("lower", exact_rational(&cert.lower, digits))
        .put("upper", exact_rational(&cert.upper, digits));
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let digits = cli.digits;
    let mut r = Report::new();
    match &cli.command {
        Command::Eval { expr } => {
            r.put("value", exact(&numeric(expr)?, digits));
        }
        Command::Expand { value, max_terms } => {
            let v = numeric(value)?;
            let u = v
                .as_ext()
                .ok_or_else(|| CliError(format!("{v} does not lie in a single quadratic field")))?;
            r.put("value", exact(&v, digits));
            match cf_expand(u, *max_terms)? {
                Expansion::Finite(f) => {
                    r.put("kind", "finite").put("cf", f.to_string()).put("length", f.len());
                }
                Expansion::Periodic(e) => {
                    r.put("kind", "periodic")
                        .put("cf", e.to_string())
                        .put("preperiod_length", e.preperiod.len())
                        .put("period_length", e.period.len());
                }
            }
        }
        Command::Lambda { biseq, index } => {
            let seq = parse_biseq(biseq)?;
            r.put("value", exact(&lambda_at(&seq, *index).value, digits));
        }
        Command::Sup { biseq, max_window } => {
            let seq = parse_biseq(biseq)?;
            let cert = sup_lambda(&seq, *max_window);
            let certified = cert.status == SupStatus::Certified;
            r.put("status", if certified { "certified" } else { "inconclusive" })
                .put("sup", exact(&cert.sup, digits))
                .put("attained", cert.attained)
                .put("attaining_indices", cert.attaining_indices.clone())
                .put("attained_beyond_window", cert.attained_beyond_window)
                .put("window", vec![cert.window.0, cert.window.1])
                .put("envelope", exact(&cert.envelope, digits))
                .put(
                    "margin",
                    cert.margin.as_ref().map_or(Value::Null, |m| exact_rational(m, digits)),
                );
            if !certified {
                r.code = 2;
            }
        }
        Command::Limsup { biseq } => {
            let seq = parse_biseq(biseq)?;
            r.put("value", exact(&limsup_lambda(&seq), digits));
        }
        Command::CertifyPattern {
            pattern,
            site,
            threshold,
            alphabet_max,
            forbid,
            depth,
        } => {
            let p = Pattern::new(parse_word(pattern)?, *site)?;
            let c = Constraints::new(*alphabet_max, parse_word_list(forbid)?)?;
            let t = numeric(threshold)?;
            match certify_forbidden(&p, &t, &c, *depth) {
                Ok(cert) => {
                    r.put("status", "certified");
                    certificate_report(&mut r, &cert, &t, digits);
                }
                Err(CertifyError::NotSeparated(cert)) => {
                    r.put("status", "not separated");
                    certificate_report(&mut r, &cert, &t, digits);
                    r.code = 2;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Necessity {
            threshold,
            window,
            depth,
        } => {
            let t = rational(threshold)?;
            let report = certify_pattern_necessity(&t, &Constraints::full_ban(), *window, *depth)?;
            let exceptions: Vec<Value> = report
                .exceptions
                .iter()
                .map(|e| json!({ "window": word_string(&e.window), "upper": exact_rational(&e.upper, digits) }))
                .collect();
            r.put(
                "status",
                if exceptions.is_empty() {
                    "certified"
                } else {
                    "exceptions found"
                },
            )
            .put("scope", format!("truncated: all admissible windows of length {window}"))
            .put("threshold", exact_rational(&report.threshold, digits))
            .put("constraints", report.constraints.to_string())
            .put("window_length", report.window_len)
            .put("center", report.center)
            .put("depth", report.depth)
            .put("windows", report.windows)
            .put("bounded", report.bounded)
            .put("on_pattern", report.on_pattern)
            .put("dead", report.dead)
            .put("exceptions", exceptions);
            if !report.exceptions.is_empty() {
                r.code = 2;
            }
        }
        Command::AuditAlpha0 { blocks, start } => {
            let prefix = build_alpha0_prefix(*blocks)?;
            let target = numeric(LAMBDA0)?;
            let audit = audit_not_attained(&prefix, &target, *start)?;
            r.put("status", if audit.flags.is_empty() { "no flags" } else { "flagged" })
                .put("scope", format!("truncated: prefix through C^{blocks}"))
                .put("prefix_length", prefix.len())
                .put("target", exact(&target, digits))
                .put("range", vec![audit.range.0, audit.range.1])
                .put("guard", audit.guard)
                .put("flags", audit.flags.clone())
                .put("max_upper", exact_rational(&audit.max_upper, digits))
                .put("max_upper_index", audit.max_upper_index)
                .put("truncated", audit.truncated);
            if !audit.flags.is_empty() {
                r.code = 2;
            }
        }
        Command::Surgery { word, n1, n2 } => {
            let w = parse_word(word)?;
            let res = surgery(&w, *n1, *n2)?;
            let chosen = match res.chosen {
                Variant::First => "first",
                Variant::Second => "second",
            };
            r.put("word", word_value(&w))
                .put("n1", *n1)
                .put("n2", *n2)
                .put("witness_index", res.witness_index)
                .put("c1", word_value(&res.c1))
                .put("c2", word_value(&res.c2))
                .put("chosen", chosen)
                .put("chosen_word", word_value(res.chosen_word()));
        }
        Command::Construct { which } => match which {
            Construct::A0 => {
                let a0: BiSeq = build_a0();
                r.put("sequence", a0.to_string());
            }
            Construct::Alpha0 { blocks } => {
                let prefix = build_alpha0_prefix(*blocks)?;
                r.put("blocks", *blocks)
                    .put("length", prefix.len())
                    .put("prefix", prefix.to_string());
            }
        },
    }
    Ok(r)
}

/// Runs one command line (including the program name) and returns the exit code:
/// 0 certified or done, 2 finished without a verdict, 1 bad input.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = !e.use_stderr();
            let target: &mut dyn Write = if informational { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if informational { 0 } else { 1 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let rendered = if cli.structured {
                let mut s = serde_json::to_string_pretty(&Value::Object(report.fields.clone())).expect("json");
                s.push('\n');
                s
            } else {
                report.text()
            };
            if out.write_all(rendered.as_bytes()).is_err() {
                return 1;
            }
            report.code
        }
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}
