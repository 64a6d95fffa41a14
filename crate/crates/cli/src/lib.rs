//! Subcommand implementations behind the `redei` binary.
//!
//! Each command returns a [`Report`] holding both the JSON document and the
//! plain-text rendering, so the binary only has to pick one and map failures
//! to exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use redei::approx;
use redei::arith::{self, Rational};
use redei::contfrac;
use redei::padic::{self, PadicSqrtContext, RootChoice};
use redei::redei::{self as rd, RedeiParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Largest index accepted without `--unsafe-large`.
pub const MAX_INDEX: u64 = 1 << 30;
/// Largest digit or precision count accepted without `--unsafe-large`.
pub const MAX_PRECISION: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Invalid(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<redei::Error> for Failure {
    fn from(e: redei::Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

pub type CmdResult = Result<Report, Failure>;

/// One result object: `{command, params, values, certificates, timings}`.
/// Exact integers and rationals are always serialized as strings.
#[derive(Debug, Clone, Serialize)]
pub struct Output {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub values: Value,
    pub certificates: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub output: Output,
    pub text: String,
}

impl Report {
    /// Any certificate that came out false.
    pub fn failed_certificates(&self) -> Vec<&str> {
        self.output
            .certificates
            .iter()
            .filter(|(_, ok)| !**ok)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub unsafe_large: bool,
}

impl Limits {
    fn index(&self, name: &str, n: u64) -> Result<(), Failure> {
        if !self.unsafe_large && n > MAX_INDEX {
            return Err(Failure::Invalid(format!(
                "--{name} {n} exceeds 2^30; pass --unsafe-large to override"
            )));
        }
        Ok(())
    }

    fn precision(&self, name: &str, n: usize) -> Result<(), Failure> {
        if !self.unsafe_large && n > MAX_PRECISION {
            return Err(Failure::Invalid(format!(
                "--{name} {n} exceeds {MAX_PRECISION}; pass --unsafe-large to override"
            )));
        }
        Ok(())
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn param_map(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn certs(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Invalid(msg.into()))
    }
}

/// Evaluator selected by `--method`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Binomial,
    Recurrence,
    Matrix,
}

impl Method {
    pub fn parse(name: &str) -> Result<Self, Failure> {
        match name {
            "binomial" => Ok(Method::Binomial),
            "recurrence" => Ok(Method::Recurrence),
            "matrix" => Ok(Method::Matrix),
            other => Err(Failure::Invalid(format!(
                "unknown method {other:?}; expected binomial, recurrence or matrix"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Binomial => "binomial",
            Method::Recurrence => "recurrence",
            Method::Matrix => "matrix",
        }
    }

    fn evaluate(self, params: &RedeiParams) -> Result<rd::RedeiPair, Failure> {
        Ok(match self {
            Method::Binomial => rd::redei_binomial(params),
            Method::Recurrence => {
                let count = usize::try_from(params.n + 1)
                    .map_err(|_| Failure::Invalid("index too large".into()))?;
                rd::redei_sequence(&params.d, &params.z, count)?.pop().expect("count ≥ 1")
            }
            Method::Matrix => rd::redei_matrix_pow(params),
        })
    }
}

/// Cross-checking every evaluator is quadratic in `n`; above this it is skipped.
pub const CROSS_CHECK_LIMIT: u64 = 5_000;

pub fn cmd_eval(d: &BigInt, z: &BigInt, n: u64, method: Method, limits: Limits) -> CmdResult {
    limits.index("n", n)?;
    let params = RedeiParams::new(d.clone(), z.clone(), n)?;
    let pair = method.evaluate(&params)?;
    let norm = rd::norm_check(&pair)?;
    let q = if n >= 1 { pair.q().ok() } else { None };

    let agreement = if n <= CROSS_CHECK_LIMIT {
        let mut all = true;
        for other in [Method::Binomial, Method::Recurrence, Method::Matrix] {
            all &= other.evaluate(&params)? == pair;
        }
        if !all {
            return Err(Failure::Internal(format!(
                "evaluators disagree at d={d} z={z} n={n}"
            )));
        }
        Some(true)
    } else {
        None
    };

    let mut text = String::new();
    writeln!(text, "N_{n}({d},{z}) = {}", pair.numer).unwrap();
    writeln!(text, "D_{n}({d},{z}) = {}", pair.denom).unwrap();
    match &q {
        Some(q) => writeln!(text, "Q = {q}").unwrap(),
        None => writeln!(text, "Q = undefined").unwrap(),
    }
    writeln!(text, "N^2 - d D^2 = {norm} = (z^2 - d)^{n}").unwrap();
    match agreement {
        Some(_) => writeln!(text, "methods agree: binomial = recurrence = matrix").unwrap(),
        None => writeln!(text, "methods agree: skipped (n > {CROSS_CHECK_LIMIT})").unwrap(),
    }

    let mut certificates = certs(&[("norm_identity", true)]);
    if let Some(ok) = agreement {
        certificates.insert("methods_agree".into(), ok);
    }
    Ok(Report {
        output: Output {
            command: "eval".into(),
            params: param_map(&[("d", s(d)), ("z", s(z)), ("n", json!(n)), ("method", json!(method.label()))]),
            values: json!({
                "N": pair.numer.to_string(),
                "D": pair.denom.to_string(),
                "Q": q.map(|q| q.to_string()),
                "norm": norm.to_string(),
            }),
            certificates,
            timings: None,
        },
        text,
    })
}

pub fn cmd_cf(d: &BigInt, z: &BigInt, terms: usize, limits: Limits) -> CmdResult {
    limits.index("terms", terms as u64)?;
    require(terms >= 1, "--terms must be at least 1")?;
    let cf = contfrac::sqrt_cf(d, z)?;
    let direct = contfrac::convergents_direct(&cf, terms)?;
    let lemma = contfrac::convergents_lemma(&cf, terms)?;
    let tracks_agree = direct.iter().zip(&lemma).all(|(x, r)| *x == r.value);
    let matches_redei = contfrac::cf_equals_redei(d, z, terms)?;

    let dq = Rational::from_integer(d.clone());
    let mut text = format!("{cf}\n");
    let mut rows = Vec::new();
    for (i, c) in direct.iter().enumerate() {
        let err = (c * c - &dq).abs();
        writeln!(text, "c_{i} = Q_{} = {c}    |c^2 - d| = {err}", i + 1).unwrap();
        rows.push(json!({"index": i, "redei_index": i + 1, "value": c.to_string(), "error": err.to_string()}));
    }
    writeln!(text, "integer tracks agree: {tracks_agree}").unwrap();
    writeln!(text, "convergents are Q_1..Q_{terms}: {matches_redei}").unwrap();
    Ok(Report {
        output: Output {
            command: "cf".into(),
            params: param_map(&[("d", s(d)), ("z", s(z)), ("terms", json!(terms))]),
            values: json!({
                "cf": cf.to_string(),
                "partial_quotients": cf.terms.iter().map(|t| json!({"a": t.a.to_string(), "b": t.b.to_string()})).collect::<Vec<_>>(),
                "period_start": cf.period_start,
                "convergents": rows,
            }),
            certificates: certs(&[("tracks_agree", tracks_agree), ("convergents_are_redei", matches_redei)]),
            timings: None,
        },
        text,
    })
}

pub fn cmd_newton(d: &BigInt, z: &BigInt, iters: usize, limits: Limits) -> CmdResult {
    limits.index("iters", 1u64.checked_shl(iters as u32).unwrap_or(u64::MAX))?;
    let xs = approx::newton_sqrt(d, z, iters)?;
    let direct = approx::newton_direct(d, z, iters as u32)?;
    let matches = approx::newton_matches_redei(d, z, iters)?;
    let direct_ok = xs.last() == Some(&direct);

    let mut text = String::new();
    for (n, x) in xs.iter().enumerate() {
        writeln!(text, "x_{n} = Q_{} = {x}", 1u64 << n).unwrap();
    }
    let ok = |b: bool| if b { "OK" } else { "FAILED" };
    writeln!(text, "certificate x_n = Q_(2^n): {}", ok(matches)).unwrap();
    writeln!(text, "direct doubling chain matches x_{iters}: {}", ok(direct_ok)).unwrap();
    Ok(Report {
        output: Output {
            command: "newton".into(),
            params: param_map(&[("d", s(d)), ("z", s(z)), ("iters", json!(iters))]),
            values: json!({
                "iterates": xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "direct": direct.to_string(),
            }),
            certificates: certs(&[("newton_is_redei", matches), ("direct_matches", direct_ok)]),
            timings: None,
        },
        text,
    })
}

pub fn cmd_pade(z: &BigInt, order: u64) -> CmdResult {
    require(order <= 31, "--order must be at most 31 (series order cap 64)")?;
    let n = 2 * order + 1;
    let contact = approx::pade_contact_order(z, n)?;
    let (num, den) = approx::redei_polys_in_t(z, n);
    let mut text = String::new();
    writeln!(text, "Q_{n}(z^2 + t, {z}) = P(t) / R(t)").unwrap();
    writeln!(text, "P = {}", poly(&num)).unwrap();
    writeln!(text, "R = {}", poly(&den)).unwrap();
    writeln!(text, "contact {} with sqrt(z^2 + t) at t = 0", contact.contact).unwrap();
    writeln!(text, "degrees ({}, {})", contact.numer_degree, contact.denom_degree).unwrap();
    writeln!(text, "generic [r/r] contact 2r = {}: {}", 2 * order, contact.is_generic()).unwrap();
    Ok(Report {
        output: Output {
            command: "pade".into(),
            params: param_map(&[("z", s(z)), ("order", json!(order)), ("n", json!(n))]),
            values: json!({
                "contact": contact.contact,
                "degrees": [contact.numer_degree, contact.denom_degree],
                "numerator": num.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "denominator": den.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            }),
            certificates: certs(&[
                ("contact_at_least_2r", contact.contact as u64 >= 2 * order),
                ("degrees_equal_r", contact.numer_degree as u64 == order && contact.denom_degree as u64 == order),
                ("contact_exactly_2r", contact.is_generic()),
            ]),
            timings: None,
        },
        text,
    })
}

fn poly(coeffs: &[BigInt]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| match i {
            0 => c.to_string(),
            1 => format!("{c} t"),
            _ => format!("{c} t^{i}"),
        })
        .collect();
    terms.join(" + ")
}

pub fn cmd_digits(d: &BigInt, z: &BigInt, count: usize, limits: Limits) -> CmdResult {
    limits.precision("count", count)?;
    let digits = if limits.unsafe_large {
        approx::decimal_digits_uncapped(d, z, count)?
    } else {
        approx::decimal_digits(d, z, count)?
    };
    Ok(Report {
        output: Output {
            command: "digits".into(),
            params: param_map(&[("d", s(d)), ("z", s(z)), ("count", json!(count))]),
            values: json!({ "digits": digits }),
            certificates: certs(&[("truncation_certified", true)]),
            timings: None,
        },
        text: format!("{digits}\n"),
    })
}

pub fn parse_root(name: &str) -> Result<RootChoice, Failure> {
    match name {
        "smaller" => Ok(RootChoice::Smaller),
        "larger" => Ok(RootChoice::Larger),
        other => other
            .parse::<BigInt>()
            .map(RootChoice::Value)
            .map_err(|_| Failure::Invalid(format!("--root must be smaller, larger or an integer, got {other:?}"))),
    }
}

/// Newton congruences grow `Q_{2^n}` doubly exponentially; cap the check depth.
pub const NEWTON_CHECK_DEPTH: usize = 12;

fn root_label(root: &RootChoice) -> String {
    match root {
        RootChoice::Smaller => "smaller".into(),
        RootChoice::Larger => "larger".into(),
        RootChoice::Value(z) => z.to_string(),
    }
}

pub fn cmd_padic(
    d: &BigInt,
    p: u64,
    prec: usize,
    root: &RootChoice,
    simultaneous: bool,
    limits: Limits,
) -> CmdResult {
    limits.precision("prec", prec)?;
    require(prec >= 1, "--prec must be at least 1")?;
    let ctx = PadicSqrtContext::new(d, p, root, prec)?;
    let cf = contfrac::sqrt_cf(d, &ctx.z)?;
    let newton_depth = (prec - 1).min(NEWTON_CHECK_DEPTH);
    let newton_ok = padic::check_newton_padic(&ctx, newton_depth)?;
    let linear_ok = padic::check_linear_padic(&ctx, prec - 1)?;
    let report = padic::root_report(&ctx, prec as u64)?;
    let law = report.padic_law_holds();

    let mut text = String::new();
    writeln!(text, "sqrt({d}) in Q_{p}: z = {}", ctx.z).unwrap();
    let digits: Vec<String> = ctx.expansion.digits.iter().map(|b| b.to_string()).collect();
    writeln!(text, "digits = [{}]", digits.join(", ")).unwrap();
    writeln!(text, "cf = {cf}").unwrap();
    if simultaneous {
        writeln!(text, "{:>4}  {:>6}  {}", "n", "v_p", "|Q_n^2 - d|").unwrap();
    } else {
        writeln!(text, "{:>4}  {:>6}", "n", "v_p").unwrap();
    }
    let mut rows = Vec::new();
    for row in &report.rows {
        if simultaneous {
            writeln!(text, "{:>4}  {:>6}  {}", row.n, row.padic_order, approx_decimal(&row.real_error)).unwrap();
        } else {
            writeln!(text, "{:>4}  {:>6}", row.n, row.padic_order).unwrap();
        }
        let mut r = json!({"n": row.n, "q": row.q.to_string(), "padic_order": row.padic_order});
        if simultaneous {
            r["real_error"] = s(&row.real_error);
        }
        rows.push(r);
    }
    writeln!(text, "a_n = Q_(2^n) mod p^(n+1), n <= {newton_depth}: {newton_ok}").unwrap();
    writeln!(text, "a_n = Q_(n+1) mod p^(n+1), n <= {}: {linear_ok}", prec - 1).unwrap();
    writeln!(text, "v_p(Q_n^2 - d) = n * {}: {law}", report.base_valuation).unwrap();
    if simultaneous {
        match report.real_decreasing_from {
            Some(n0) => writeln!(text, "real error decreasing from n = {n0}").unwrap(),
            None => writeln!(text, "real error not yet decreasing").unwrap(),
        }
    }

    let mut values = json!({
        "z": ctx.z.to_string(),
        "digits": digits,
        "cf": cf.to_string(),
        "base_valuation": report.base_valuation,
        "table": rows,
    });
    if simultaneous {
        values["real_decreasing_from"] = json!(report.real_decreasing_from);
    }
    Ok(Report {
        output: Output {
            command: "padic".into(),
            params: param_map(&[
                ("d", s(d)),
                ("p", json!(p)),
                ("prec", json!(prec)),
                ("root", json!(root_label(root))),
                ("simultaneous", json!(simultaneous)),
            ]),
            values,
            certificates: certs(&[
                ("newton_congruence", newton_ok),
                ("linear_congruence", linear_ok),
                ("valuation_law", law),
            ]),
            timings: None,
        },
        text,
    })
}

/// Short scientific rendering of a nonnegative rational for tables; the
/// exact value is in the JSON output.
pub fn approx_decimal(x: &Rational) -> String {
    if x.numer().bits() == 0 {
        return "0".into();
    }
    // exponent e with 10^e <= x < 10^(e+1), then 4 significant digits
    let ten = BigInt::from(10);
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let pow = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(ten.pow(e as u32))
        } else {
            Rational::new(BigInt::one(), ten.pow((-e) as u32))
        }
    };
    while *x < pow(e) {
        e -= 1;
    }
    while *x >= pow(e + 1) {
        e += 1;
    }
    let mantissa = (x / pow(e) * Rational::from_integer(BigInt::from(1000)))
        .floor()
        .to_integer()
        .to_u64()
        .unwrap_or(0);
    format!("{}.{:03}e{e}", mantissa / 1000, mantissa % 1000)
}

/// One timed evaluation of `Q_{2^e}(d, z)`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BenchResult {
    pub method: String,
    pub exponent: u32,
    /// `2^e`, as a string.
    pub n: String,
    pub median_ns: u128,
    pub reps: usize,
    pub numer_bits: u64,
    pub denom_bits: u64,
    pub checksum: String,
}

pub const SEQUENTIAL: &str = "newton-sequential";
pub const DOUBLING: &str = "newton-direct";

/// SHA-256 of the reduced rational written as `num/den`.
pub fn checksum(q: &Rational) -> String {
    let text = format!("{}/{}", q.numer(), q.denom());
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn time_median<F: FnMut() -> Rational>(reps: usize, mut f: F) -> (Duration, Rational) {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let q = f();
        times.push(start.elapsed());
        last = Some(q);
    }
    times.sort();
    (times[times.len() / 2], last.expect("reps ≥ 1"))
}

/// Times `e` sequential Newton steps against one `e`-step doubling chain.
/// Rows come back sorted by method, then exponent.
pub fn run_bench(d: &BigInt, z: &BigInt, exps: &[u32], reps: usize) -> Result<Vec<BenchResult>, Failure> {
    require(!exps.is_empty(), "--exps needs at least one exponent")?;
    require(reps >= 1, "--reps must be at least 1")?;
    require(exps.iter().all(|&e| e <= 30), "exponents above 30 are not supported")?;
    arith::require_nonsquare(d)?;
    require(z.is_positive(), "z must be positive")?;

    let mut rows = Vec::new();
    for &e in exps {
        let (seq_time, seq) = time_median(reps, || {
            approx::newton_sqrt(d, z, e as usize)
                .expect("validated")
                .pop()
                .expect("k + 1 iterates")
        });
        let (dbl_time, dbl) = time_median(reps, || {
            approx::newton_direct(d, z, e).expect("validated")
        });
        let (seq_sum, dbl_sum) = (checksum(&seq), checksum(&dbl));
        if seq_sum != dbl_sum {
            return Err(Failure::Internal(format!(
                "checksum mismatch at e = {e}: {seq_sum} vs {dbl_sum}"
            )));
        }
        for (method, time, q, sum) in [(SEQUENTIAL, seq_time, &seq, seq_sum), (DOUBLING, dbl_time, &dbl, dbl_sum)] {
            rows.push(BenchResult {
                method: method.into(),
                exponent: e,
                n: (BigInt::one() << e).to_string(),
                median_ns: time.as_nanos(),
                reps,
                numer_bits: q.numer().bits(),
                denom_bits: q.denom().bits(),
                checksum: sum,
            });
        }
    }
    rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.exponent.cmp(&b.exponent)));
    Ok(rows)
}

pub const DEFAULT_EXPS: [u32; 3] = [10, 14, 18];

pub fn cmd_bench(d: &BigInt, z: &BigInt, exps: &[u32], reps: usize) -> CmdResult {
    let rows = run_bench(d, z, exps, reps)?;
    let mut text = format!(
        "{:<18} {:>3} {:>14} {:>12} {:>12}  {}\n",
        "method", "e", "median", "num bits", "den bits", "checksum"
    );
    for r in &rows {
        writeln!(
            text,
            "{:<18} {:>3} {:>14} {:>12} {:>12}  {}",
            r.method,
            r.exponent,
            format!("{:.3?}", Duration::from_nanos(r.median_ns as u64)),
            r.numer_bits,
            r.denom_bits,
            &r.checksum[..16]
        )
        .unwrap();
    }
    let agree = exps.iter().all(|&e| {
        let sums: Vec<_> = rows.iter().filter(|r| r.exponent == e).map(|r| &r.checksum).collect();
        sums.windows(2).all(|w| w[0] == w[1])
    });
    writeln!(text, "checksums agree: {agree}").unwrap();
    Ok(Report {
        output: Output {
            command: "bench".into(),
            params: param_map(&[("d", s(d)), ("z", s(z)), ("exps", json!(exps)), ("reps", json!(reps))]),
            values: json!({ "rows": rows.iter().map(|r| json!({
                "method": r.method,
                "exponent": r.exponent,
                "n": r.n,
                "numer_bits": r.numer_bits,
                "denom_bits": r.denom_bits,
                "checksum": r.checksum,
            })).collect::<Vec<_>>() }),
            certificates: certs(&[("checksums_agree", agree)]),
            timings: Some(json!(rows.iter().map(|r| json!({
                "method": r.method,
                "exponent": r.exponent,
                "median_ns": r.median_ns.to_string(),
                "reps": r.reps,
            })).collect::<Vec<_>>())),
        },
        text,
    })
}

/// Slope of `log2(bits)` against the exponent between consecutive rows of one
/// method; 1.0 means the size doubles per exponent step.
pub fn bit_growth_slopes(rows: &[BenchResult], method: &str) -> Vec<f64> {
    let mine: Vec<_> = rows.iter().filter(|r| r.method == method).collect();
    mine.windows(2)
        .map(|w| {
            let ratio = w[1].numer_bits as f64 / w[0].numer_bits as f64;
            ratio.log2() / (w[1].exponent - w[0].exponent) as f64
        })
        .collect()
}
