//! Exact integer and rational substrate, plus the modular and p-adic
//! primitives the rest of the crate builds on: valuations, congruences of
//! rationals, square roots modulo an odd prime and digit-by-digit Hensel
//! lifting.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `p`, `a` not divisible by `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let odd = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    require_prime(p)
}

/// `x mod p` as a value in `[0, p)`.
pub fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn int_valuation(x: &BigInt, p: &BigInt) -> i64 {
    let mut x = x.clone();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        x = q;
        e += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn vp(x: &Rational, p: u64) -> Result<i64> {
    require_prime(p)?;
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let p = BigInt::from(p);
    Ok(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

/// `x ≡ y (mod p^k)` for rationals whose denominators are p-adic units.
pub fn rat_congruent(x: &Rational, y: &Rational, p: u64, k: u32) -> Result<bool> {
    require_prime(p)?;
    let pb = BigInt::from(p);
    for r in [x, y] {
        if r.denom().is_multiple_of(&pb) {
            return Err(Error::NotPadicInteger(p));
        }
    }
    let diff = x - y;
    if diff.is_zero() {
        return Ok(true);
    }
    // The denominator of the difference is a unit, so only the numerator counts.
    Ok(diff.numer().is_multiple_of(&pb.pow(k)))
}

/// Outcome of a square root modulo an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtModP {
    /// The two roots, smaller first; they sum to `p`.
    Roots(u64, u64),
    NonResidue,
}

impl SqrtModP {
    pub fn roots(self) -> Option<(u64, u64)> {
        match self {
            SqrtModP::Roots(a, b) => Some((a, b)),
            SqrtModP::NonResidue => None,
        }
    }
}

/// Euler's criterion: `a^((p-1)/2) mod p`, `a` a unit.
pub fn legendre(a: u64, p: u64) -> i32 {
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        0 => 0,
        _ => -1,
    }
}

/// Square roots of `d` modulo an odd prime by Tonelli–Shanks.
pub fn sqrt_mod_p(d: &BigInt, p: u64) -> Result<SqrtModP> {
    require_odd_prime(p)?;
    let a = residue(d, p);
    if a == 0 {
        return Err(Error::Ramified { d: d.clone(), p });
    }
    if legendre(a, p) != 1 {
        return Ok(SqrtModP::NonResidue);
    }
    let r = tonelli_shanks(a, p);
    debug_assert_eq!(mul_mod(r, r, p), a);
    let other = p - r;
    Ok(SqrtModP::Roots(r.min(other), r.max(other)))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    if s == 1 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let mut nonresidue = 2;
    while legendre(nonresidue, p) != -1 {
        nonresidue += 1;
    }
    let mut m = s;
    let mut c = pow_mod(nonresidue, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        // least i with t^(2^i) = 1
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Truncated p-adic expansion `b_0 + b_1 p + b_2 p^2 + …` of a square root of `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicExpansion {
    pub p: u64,
    pub d: BigInt,
    pub digits: Vec<u64>,
}

impl PadicExpansion {
    pub fn prec(&self) -> usize {
        self.digits.len()
    }

    /// `a_n = Σ_{i≤n} b_i p^i`.
    pub fn truncation(&self, n: usize) -> BigInt {
        let p = BigInt::from(self.p);
        self.digits[..=n]
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &b| acc * &p + b)
    }

    /// All truncations `a_0, …, a_{prec-1}`.
    pub fn truncations(&self) -> Vec<BigInt> {
        let p = BigInt::from(self.p);
        let mut scale = BigInt::one();
        let mut acc = BigInt::zero();
        self.digits
            .iter()
            .map(|&b| {
                acc += &scale * b;
                scale *= &p;
                acc.clone()
            })
            .collect()
    }
}

/// Lifts the root `b0` of `x² ≡ d (mod p)` one digit at a time.
///
/// From `a_n = a_{n-1} + b_n p^n` and `a_n² ≡ a_{n-1}² + 2 a_{n-1} b_n p^n (mod p^{n+1})`
/// the next digit solves `2 b_0 b_n ≡ (d - a_{n-1}²) / p^n (mod p)`.
pub fn hensel_digits(d: &BigInt, p: u64, b0: u64, prec: usize) -> Result<PadicExpansion> {
    require_odd_prime(p)?;
    if residue(d, p) == 0 {
        return Err(Error::Ramified { d: d.clone(), p });
    }
    if prec == 0 {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    if b0 == 0 || b0 >= p || mul_mod(b0, b0, p) != residue(d, p) {
        return Err(Error::NotStartingRoot { d: d.clone(), p, b0 });
    }
    let pb = BigInt::from(p);
    let inv_two_b0 = inv_mod(mul_mod(2, b0, p), p);
    let mut digits = vec![b0];
    let mut a = BigInt::from(b0);
    let mut scale = pb.clone();
    for _ in 1..prec {
        let gap = d - &a * &a;
        let (quot, rem) = gap.div_rem(&scale);
        if !rem.is_zero() {
            return Err(Error::Consistency(format!(
                "Hensel step lost divisibility by p^{}",
                digits.len()
            )));
        }
        let b = mul_mod(residue(&quot, p), inv_two_b0, p);
        a += &scale * b;
        scale *= &pb;
        digits.push(b);
    }
    Ok(PadicExpansion { p, d: d.clone(), digits })
}

pub fn is_square(d: &BigInt) -> bool {
    if d.sign() == Sign::Minus {
        return false;
    }
    let r = d.sqrt();
    &r * &r == *d
}

/// Validates `d ≥ 2`, nonsquare.
pub fn require_nonsquare(d: &BigInt) -> Result<()> {
    if *d < BigInt::from(2) || is_square(d) {
        Err(Error::SquareOrSmall(d.clone()))
    } else {
        Ok(())
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&int(458), 229).unwrap(), 1);
        assert_eq!(vp(&rat(1, 229), 229).unwrap(), -1);
        assert_eq!(vp(&int(8), 2).unwrap(), 3);
        assert_eq!(vp(&int(0), 3), Err(Error::ValuationOfZero));
        assert_eq!(vp(&int(9), 6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn congruence_examples() {
        // 19/6 - 3 = 1/6 has 7-adic valuation 0
        assert!(!rat_congruent(&rat(19, 6), &int(3), 7, 1).unwrap());
        let x = rat(5, 3);
        assert!(rat_congruent(&x, &x, 11, 40).unwrap());
        assert!(rat_congruent(&int(22), &int(251), 229, 1).unwrap());
        assert!(!rat_congruent(&int(22), &int(251), 229, 2).unwrap());
        assert_eq!(
            rat_congruent(&rat(1, 7), &int(1), 7, 1),
            Err(Error::NotPadicInteger(7))
        );
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod_p(&b(26), 229).unwrap(), SqrtModP::Roots(22, 207));
        assert_eq!(sqrt_mod_p(&b(4), 7).unwrap(), SqrtModP::Roots(2, 5));
        assert_eq!(sqrt_mod_p(&b(2), 5).unwrap(), SqrtModP::NonResidue);
        assert!(matches!(sqrt_mod_p(&b(458), 229), Err(Error::Ramified { .. })));
        assert_eq!(sqrt_mod_p(&b(3), 2), Err(Error::EvenPrime));
        assert_eq!(sqrt_mod_p(&b(3), 9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn tonelli_shanks_with_high_two_adicity() {
        // p - 1 = 2^6 * 3 * 5 * ... exercises the loop
        for p in [97u64, 193, 257, 65537, 998_244_353] {
            for a in (1..200u64).filter(|a| a % p != 0) {
                if let SqrtModP::Roots(r, s) = sqrt_mod_p(&b(a as i64), p).unwrap() {
                    assert_eq!(r + s, p);
                    assert_eq!(mul_mod(r, r, p), a % p);
                }
            }
        }
    }

    #[test]
    fn shortcut_agrees_for_three_mod_four() {
        for p in [7u64, 11, 19, 23, 43, 227, 10007] {
            for a in 1..p.min(300) {
                if let SqrtModP::Roots(r, s) = sqrt_mod_p(&b(a as i64), p).unwrap() {
                    let w = pow_mod(a, (p + 1) / 4, p);
                    assert!(w == r || w == s);
                }
            }
        }
    }

    #[test]
    fn hensel_examples() {
        assert_eq!(hensel_digits(&b(26), 229, 22, 2).unwrap().digits, vec![22, 52]);
        assert_eq!(hensel_digits(&b(4), 7, 2, 3).unwrap().digits, vec![2, 0, 0]);
        assert_eq!(hensel_digits(&b(26), 229, 207, 1).unwrap().digits, vec![207]);
        assert!(matches!(
            hensel_digits(&b(26), 229, 21, 3),
            Err(Error::NotStartingRoot { .. })
        ));
    }

    #[test]
    fn hensel_truncations_are_roots() {
        let e = hensel_digits(&b(26), 229, 22, 12).unwrap();
        let p = b(229);
        for (n, a) in e.truncations().iter().enumerate() {
            assert_eq!(a, &e.truncation(n));
            let m = p.pow(n as u32 + 1);
            assert!((a * a - b(26)).is_multiple_of(&m));
        }
    }

    #[test]
    fn squares() {
        assert!(!is_square(&b(26)));
        assert!(is_square(&b(25)));
        assert!(is_square(&b(0)));
        assert!(!is_square(&b(-4)));
        assert!(require_nonsquare(&b(1)).is_err());
        assert!(require_nonsquare(&b(2)).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }
}
