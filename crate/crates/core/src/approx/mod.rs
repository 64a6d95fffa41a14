//! Real-side approximation: exact Newton iteration and its coincidence with
//! `Q_{2^n}`, Padé contact checked against truncated power series, exact
//! error terms and certified decimal digits of `√d`.

mod series;

pub use series::TruncatedSeries;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::redei::{self, RedeiParams};

/// Highest series order any operation here will build.
pub const MAX_SERIES_ORDER: usize = 64;

/// Newton's method for a root of `b x² - a x - c`:
/// `x_n = (b x_{n-1}² + c) / (2 b x_{n-1} - a)`. Returns `x_0 ..= x_k`.
pub fn newton_general(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    x0: Rational,
    k: usize,
) -> Result<Vec<Rational>> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("leading coefficient b must be nonzero".into()));
    }
    let a = Rational::from_integer(a.clone());
    let b = Rational::from_integer(b.clone());
    let c = Rational::from_integer(c.clone());
    let mut xs = Vec::with_capacity(k + 1);
    xs.push(x0);
    for step in 1..=k {
        let x = &xs[step - 1];
        let slope = &b * x * BigInt::from(2) - &a;
        if slope.is_zero() {
            return Err(Error::DerivativeVanishes(step));
        }
        let next = (&b * x * x + &c) / slope;
        xs.push(next);
    }
    Ok(xs)
}

fn require_real(d: &BigInt, z: &BigInt) -> Result<()> {
    redei::validate(d, z)?;
    redei::require_positive_z(z)
}

/// Newton iterates for `√d` from `x_0 = z`.
pub fn newton_sqrt(d: &BigInt, z: &BigInt, k: usize) -> Result<Vec<Rational>> {
    require_real(d, z)?;
    newton_general(
        &BigInt::zero(),
        &BigInt::one(),
        d,
        Rational::from_integer(z.clone()),
        k,
    )
}

/// `x_n = Q_{2^n}(d, z)` for every iterate up to `k`.
pub fn newton_matches_redei(d: &BigInt, z: &BigInt, k: usize) -> Result<bool> {
    let xs = newton_sqrt(d, z, k)?;
    let base = RedeiParams::new(d.clone(), z.clone(), 1)?;
    for (n, x) in xs.iter().enumerate() {
        if *x != redei::q(&base.with_index(1u64 << n))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(N_{2^n}, D_{2^n})` by `n` squarings in `ℤ[√d]`, unreduced.
pub fn newton_direct_pair(d: &BigInt, z: &BigInt, n: u32) -> (BigInt, BigInt) {
    let mut num = z.clone();
    let mut den = BigInt::one();
    for _ in 0..n {
        let next = &num * &num + d * &den * &den;
        den = (&num * &den) << 1;
        num = next;
    }
    (num, den)
}

/// `Q_{2^n}(d, z)`: the `n`-th Newton iterate without the intermediate steps.
pub fn newton_direct(d: &BigInt, z: &BigInt, n: u32) -> Result<Rational> {
    require_real(d, z)?;
    let (num, den) = newton_direct_pair(d, z, n);
    Ok(Rational::new(num, den))
}

/// `√(z² + t) = z Σ C(1/2, k) (t / z²)^k` through `t^m`.
pub fn sqrt_series(z: &BigInt, m: usize) -> Result<TruncatedSeries> {
    redei::require_positive_z(z)?;
    let half = arith::rat(1, 2);
    let z2 = Rational::from_integer(z * z);
    let mut coeffs = Vec::with_capacity(m + 1);
    // running C(1/2, k) / z^(2k)
    let mut c = Rational::one();
    for k in 0..=m {
        coeffs.push(&c * z);
        let k = Rational::from_integer(BigInt::from(k));
        c = c * (&half - &k) / ((&k + Rational::one()) * &z2);
    }
    TruncatedSeries::new(coeffs, m)
}

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = row.last().unwrap() * (n - k) / (k + 1);
        row.push(next);
    }
    row
}

/// Coefficients in `t` of `N_n(z² + t, z)` and `D_n(z² + t, z)`.
pub fn redei_polys_in_t(z: &BigInt, n: u64) -> (Vec<BigInt>, Vec<BigInt>) {
    let row = binomial_row(n);
    let half = (n / 2) as usize;
    let mut numer = vec![BigInt::zero(); half + 1];
    let mut denom = vec![BigInt::zero(); half + 1];
    for (k, c) in row.iter().enumerate() {
        // C(n,k) d^i z^(n-k) with d = z² + t and i = k / 2
        let i = k / 2;
        let target = if k % 2 == 0 { &mut numer } else { &mut denom };
        let inner = binomial_row(i as u64);
        for (j, cj) in inner.iter().enumerate() {
            let zpow = (n as usize - k) + 2 * (i - j);
            target[j] += c * cj * z.pow(zpow as u32);
        }
    }
    while denom.len() > 1 && denom.last().is_some_and(|c| c.is_zero()) {
        denom.pop();
    }
    (numer, denom)
}

/// Series of `Q_n(z² + t, z)` through `t^m`.
pub fn redei_series(z: &BigInt, n: u64, m: usize) -> Result<TruncatedSeries> {
    redei::require_positive_z(z)?;
    if n == 0 {
        return Err(Error::RedeiUndefined(0));
    }
    let (numer, denom) = redei_polys_in_t(z, n);
    let numer = TruncatedSeries::from_integers(&numer, m)?;
    let denom = TruncatedSeries::from_integers(&denom, m)?;
    numer.div(&denom)
}

/// How closely `Q_{2r+1}(z² + t, z)` osculates `√(z² + t)` at `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadeContact {
    pub r: u64,
    /// Largest `m` with the first `m + 1` coefficients equal.
    pub contact: usize,
    pub numer_degree: usize,
    pub denom_degree: usize,
}

impl PadeContact {
    /// `contact == 2r`, the generic `[r/r]` case.
    pub fn is_generic(&self) -> bool {
        self.contact as u64 == 2 * self.r
    }
}

fn degree(poly: &[BigInt]) -> usize {
    poly.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

pub fn pade_contact_order(z: &BigInt, n: u64) -> Result<PadeContact> {
    redei::require_positive_z(z)?;
    if n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("index {n} must be odd")));
    }
    let r = (n - 1) / 2;
    let (numer, denom) = redei_polys_in_t(z, n);
    let (numer_degree, denom_degree) = (degree(&numer), degree(&denom));
    if numer_degree as u64 != r || denom_degree as u64 != r {
        return Err(Error::Consistency(format!(
            "Q_{n} has t-degrees ({numer_degree}, {denom_degree}), expected ({r}, {r})"
        )));
    }
    let mut order = (2 * r as usize + 1).min(MAX_SERIES_ORDER);
    loop {
        let ours = redei_series(z, n, order)?;
        let reference = sqrt_series(z, order)?;
        let contact = ours.agreement(&reference).ok_or_else(|| {
            Error::Consistency("constant terms of the two series differ".into())
        })?;
        if contact < order {
            if (contact as u64) < 2 * r {
                return Err(Error::Consistency(format!(
                    "Q_{n} contact order {contact} below 2r = {}",
                    2 * r
                )));
            }
            return Ok(PadeContact {
                r,
                contact,
                numer_degree,
                denom_degree,
            });
        }
        if order == MAX_SERIES_ORDER {
            return Err(Error::SeriesOrder(order + 1));
        }
        order = (order * 2).min(MAX_SERIES_ORDER);
    }
}

/// `|Q_n² - d| = |z² - d|^n / D_n²`.
pub fn error_exact(d: &BigInt, z: &BigInt, n: u64) -> Result<Rational> {
    require_real(d, z)?;
    if n == 0 {
        return Err(Error::RedeiUndefined(0));
    }
    let pair = redei::redei_matrix_pow(&RedeiParams::new(d.clone(), z.clone(), n)?);
    let norm = (z * z - d).abs().pow(n as u32);
    Ok(Rational::new(norm, &pair.denom * &pair.denom))
}

/// Largest digit count [`decimal_digits`] accepts.
pub const MAX_DIGITS: usize = 10_000;

/// `√d` truncated to `t` decimals, taken from `Q_n(d, z)` for the first
/// `n = 1, 2, 4, …` whose error interval fits inside a single decimal cell.
pub fn decimal_digits(d: &BigInt, z: &BigInt, t: usize) -> Result<String> {
    if t > MAX_DIGITS {
        return Err(Error::InvalidArgument(format!("at most {MAX_DIGITS} digits")));
    }
    decimal_digits_uncapped(d, z, t)
}

/// [`decimal_digits`] without the [`MAX_DIGITS`] cap.
pub fn decimal_digits_uncapped(d: &BigInt, z: &BigInt, t: usize) -> Result<String> {
    require_real(d, z)?;
    let scale = BigInt::from(10u32).pow(t as u32);
    let mut n: u64 = 1;
    let floor_scaled = loop {
        let (num, den) = redei::pair_pow(d, z, &BigInt::one(), n);
        if num.is_positive() {
            // |Q - √d| = |Q² - d| / (Q + √d) < |Q² - d| / Q = |N² - dD²| / (N D)
            let q = Rational::new(num.clone(), den.clone());
            let radius = Rational::new((&num * &num - d * &den * &den).abs(), &num * &den);
            let lo = ((&q - &radius) * &scale).floor();
            let hi = ((&q + &radius) * &scale).floor();
            if lo == hi {
                break lo.to_integer();
            }
        }
        n = n.checked_mul(2).ok_or_else(|| {
            Error::Consistency("decimal expansion did not converge".into())
        })?;
    };
    let int_part = &floor_scaled / &scale;
    if t == 0 {
        return Ok(int_part.to_string());
    }
    let frac = (&floor_scaled % &scale).to_string();
    Ok(format!("{int_part}.{frac:0>t$}"))
}
