//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every exported function takes decimal strings for integer inputs and
//! returns a JSON document; the `*_json` functions underneath are plain Rust
//! so they can be tested natively.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use redei::approx;
use redei::padic::{self, PadicSqrtContext, RootChoice};
use redei::redei::{self as rd, RedeiParams};
use redei::Rational;

const MAX_ROWS: u64 = 400;
const MAX_NEWTON: usize = 16;
const MAX_PADE_R: u64 = 31;
/// Exact values longer than this are shown only approximately.
const EXACT_CHARS: usize = 80;

fn parse_int(name: &str, s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{name} must be an integer, got {s:?}"))
}

fn parse_root(s: &str) -> Result<RootChoice, String> {
    match s.trim() {
        "smaller" | "" => Ok(RootChoice::Smaller),
        "larger" => Ok(RootChoice::Larger),
        other => Ok(RootChoice::Value(parse_int("root", other)?)),
    }
}

/// Scientific notation with four significant digits, exact for any size.
fn sci(x: &Rational) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let (n, d) = (x.numer().abs(), x.denom().clone());
    let mut e = n.to_string().len() as i64 - d.to_string().len() as i64;
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> BigInt {
        let k = 3 - e;
        if k >= 0 {
            &n * ten.pow(k as u32) / &d
        } else {
            &n / (&d * ten.pow((-k) as u32))
        }
    };
    let mut m = scaled(e);
    if m < BigInt::from(1000) {
        e -= 1;
        m = scaled(e);
    }
    let digits = m.to_string();
    format!("{sign}{}.{}e{e}", &digits[..1], &digits[1..4])
}

fn short(x: &Rational) -> Value {
    let exact = x.to_string();
    if exact.len() <= EXACT_CHARS {
        json!(exact)
    } else {
        json!(format!("≈ {} ({} digits)", sci(x), exact.len()))
    }
}

/// Real error and p-adic order of `Q_n` side by side, `n = 1..rows`.
pub fn convergence_json(d: &str, p: u64, root: &str, rows: u64) -> Result<Value, String> {
    if rows == 0 || rows > MAX_ROWS {
        return Err(format!("rows must be in 1..={MAX_ROWS}"));
    }
    let d = parse_int("d", d)?;
    let ctx = PadicSqrtContext::new(&d, p, &parse_root(root)?, 1).map_err(|e| e.to_string())?;
    let report = padic::root_report(&ctx, rows).map_err(|e| e.to_string())?;
    let table: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "q": short(&r.q),
                "real_error": sci(&r.real_error),
                "padic_order": r.padic_order,
            })
        })
        .collect();
    Ok(json!({
        "z": report.z.to_string(),
        "cf": report.cf.to_string(),
        "base_valuation": report.base_valuation,
        "real_decreasing_from": report.real_decreasing_from,
        "padic_law_holds": report.padic_law_holds(),
        "rows": table,
    }))
}

/// Newton iterates `x_k` for `√d` from `z`, each checked against `Q_(2^k)`.
pub fn newton_json(d: &str, z: &str, iters: usize) -> Result<Value, String> {
    if iters > MAX_NEWTON {
        return Err(format!("iters must be at most {MAX_NEWTON}"));
    }
    let (d, z) = (parse_int("d", d)?, parse_int("z", z)?);
    let xs = approx::newton_sqrt(&d, &z, iters).map_err(|e| e.to_string())?;
    let base = RedeiParams::new(d.clone(), z.clone(), 1).map_err(|e| e.to_string())?;
    let mut rows = Vec::with_capacity(xs.len());
    for (k, x) in xs.iter().enumerate() {
        let q = rd::q(&base.with_index(1 << k)).map_err(|e| e.to_string())?;
        let err = (x * x - Rational::from_integer(d.clone())).abs();
        rows.push(json!({
            "k": k,
            "index": 1u64 << k,
            "x": short(x),
            "error": sci(&err),
            "equals_redei": *x == q,
        }));
    }
    Ok(json!({ "d": d.to_string(), "z": z.to_string(), "rows": rows }))
}

/// `Q_(2r+1)(z² + t, z)` as a ratio of polynomials in `t` and its contact
/// order with `√(z² + t)`.
pub fn pade_json(z: &str, r: u64) -> Result<Value, String> {
    if r > MAX_PADE_R {
        return Err(format!("r must be at most {MAX_PADE_R}"));
    }
    let z = parse_int("z", z)?;
    let n = 2 * r + 1;
    let contact = approx::pade_contact_order(&z, n).map_err(|e| e.to_string())?;
    let (num, den) = approx::redei_polys_in_t(&z, n);
    let strs = |v: &[BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    Ok(json!({
        "n": n,
        "numerator": strs(&num),
        "denominator": strs(&den),
        "contact": contact.contact,
        "degrees": [contact.numer_degree, contact.denom_degree],
        "generic": contact.is_generic(),
    }))
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result
        .map(|v| v.to_string())
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn convergence(d: &str, p: u32, root: &str, rows: u32) -> Result<String, JsValue> {
    to_js(convergence_json(d, p as u64, root, rows as u64))
}

#[wasm_bindgen]
pub fn newton(d: &str, z: &str, iters: u32) -> Result<String, JsValue> {
    to_js(newton_json(d, z, iters as usize))
}

#[wasm_bindgen]
pub fn pade(z: &str, r: u32) -> Result<String, JsValue> {
    to_js(pade_json(z, r as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use redei::arith::rat;

    #[test]
    fn sci_formatting() {
        assert_eq!(sci(&rat(1, 3)), "3.333e-1");
        assert_eq!(sci(&rat(-12345, 1)), "-1.234e4");
        assert_eq!(sci(&rat(1, 1000)), "1.000e-3");
        assert_eq!(sci(&rat(8, 1)), "8.000e0");
        let tiny = Rational::new(BigInt::from(7), BigInt::from(10).pow(500));
        assert_eq!(sci(&tiny), "7.000e-500");
    }

    #[test]
    fn convergence_table() {
        let v = convergence_json("26", 229, "smaller", 20).unwrap();
        assert_eq!(v["z"], "22");
        assert_eq!(v["cf"], "[22; period(-22/229, 44)]");
        assert_eq!(v["padic_law_holds"], true);
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 20);
        assert_eq!(rows[0]["q"], "22");
        assert_eq!(rows[19]["padic_order"], 20);
    }

    #[test]
    fn newton_rows() {
        let v = newton_json("2", "1", 3).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows[3]["x"], "577/408");
        assert!(rows.iter().all(|r| r["equals_redei"] == true));
        assert!(newton_json("2", "1", 12).unwrap()["rows"][12]["x"]
            .as_str()
            .unwrap()
            .starts_with('≈'));
    }

    #[test]
    fn pade_polynomials() {
        let v = pade_json("2", 3).unwrap();
        assert_eq!(v["n"], 7);
        assert_eq!(v["contact"], 6);
        assert_eq!(v["numerator"][3], "14");
        assert_eq!(v["denominator"][3], "1");
    }

    #[test]
    fn bad_input() {
        assert!(convergence_json("5", 7, "smaller", 5).is_err());
        assert!(convergence_json("x", 7, "smaller", 5).is_err());
        assert!(newton_json("4", "1", 3).is_err());
        assert!(pade_json("2", 40).is_err());
    }
}
