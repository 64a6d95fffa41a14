//! Rédei polynomials `N_n(d,z)`, `D_n(d,z)` and the rational functions
//! `Q_n(d,z) = N_n / D_n`, defined by `(z + √d)^n = N_n + D_n √d`.
//!
//! Three evaluators are provided and kept independent of one another: the
//! explicit binomial sums, the order-2 linear recurrence with characteristic
//! polynomial `t² - 2z t + (z² - d)`, and square-and-multiply in `ℤ[√d]`
//! (equivalently, powers of the matrix `[[z, d], [1, z]]`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RedeiParams {
    pub d: BigInt,
    pub z: BigInt,
    pub n: u64,
}

impl RedeiParams {
    pub fn new(d: impl Into<BigInt>, z: impl Into<BigInt>, n: u64) -> Result<Self> {
        let (d, z) = (d.into(), z.into());
        validate(&d, &z)?;
        Ok(RedeiParams { d, z, n })
    }

    pub fn with_index(&self, n: u64) -> Self {
        RedeiParams { n, ..self.clone() }
    }

    /// `z² - d`, the determinant of the companion matrix.
    pub fn norm_base(&self) -> BigInt {
        &self.z * &self.z - &self.d
    }
}

pub(crate) fn validate(d: &BigInt, z: &BigInt) -> Result<()> {
    arith::require_nonsquare(d)?;
    if z.is_zero() {
        return Err(Error::ZeroZ);
    }
    Ok(())
}

/// `(N_n, D_n)` together with the parameters that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedeiPair {
    pub params: RedeiParams,
    pub numer: BigInt,
    pub denom: BigInt,
}

impl RedeiPair {
    pub fn q(&self) -> Result<Rational> {
        if self.denom.is_zero() {
            return Err(Error::RedeiUndefined(self.params.n));
        }
        Ok(Rational::new(self.numer.clone(), self.denom.clone()))
    }

    /// `N² - d D²`.
    pub fn norm(&self) -> BigInt {
        &self.numer * &self.numer - &self.params.d * &self.denom * &self.denom
    }
}

/// Binomial sums; the reference evaluator.
pub fn redei_binomial(params: &RedeiParams) -> RedeiPair {
    let RedeiParams { d, z, n } = params;
    let n = *n;
    let mut numer = BigInt::zero();
    let mut denom = BigInt::zero();
    // C(n, k) for k = 0..=n, walked in order
    let mut binom = BigInt::one();
    for k in 0..=n {
        let i = (k / 2) as u32;
        let term = &binom * d.pow(i) * z.pow((n - k) as u32);
        if k % 2 == 0 {
            numer += term;
        } else {
            denom += term;
        }
        binom = binom * (n - k) / (k + 1);
    }
    RedeiPair {
        params: params.clone(),
        numer,
        denom,
    }
}

/// Pairs for `n = 0..count` via `c_n = 2z c_{n-1} - (z² - d) c_{n-2}`.
pub fn redei_sequence(d: &BigInt, z: &BigInt, count: usize) -> Result<Vec<RedeiPair>> {
    validate(d, z)?;
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let trace = z + z;
    let det = z * z - d;
    let base = RedeiParams {
        d: d.clone(),
        z: z.clone(),
        n: 0,
    };
    let mut out = Vec::with_capacity(count);
    let (mut n0, mut n1) = (BigInt::one(), z.clone());
    let (mut d0, mut d1) = (BigInt::zero(), BigInt::one());
    for n in 0..count as u64 {
        out.push(RedeiPair {
            params: base.with_index(n),
            numer: n0.clone(),
            denom: d0.clone(),
        });
        let n2 = &trace * &n1 - &det * &n0;
        let d2 = &trace * &d1 - &det * &d0;
        n0 = std::mem::replace(&mut n1, n2);
        d0 = std::mem::replace(&mut d1, d2);
    }
    Ok(out)
}

/// `(z + √d)^n` by left-to-right square-and-multiply in `ℤ[√d]`.
pub fn redei_matrix_pow(params: &RedeiParams) -> RedeiPair {
    let (numer, denom) = pair_pow(&params.d, &params.z, &BigInt::one(), params.n);
    RedeiPair {
        params: params.clone(),
        numer,
        denom,
    }
}

/// `(u + v√d)^n` as `(A, B)` with `A + B√d`.
pub(crate) fn pair_pow(d: &BigInt, u: &BigInt, v: &BigInt, n: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::one();
    let mut b = BigInt::zero();
    if n == 0 {
        return (a, b);
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        let sq_a = &a * &a + d * &b * &b;
        b = (&a * &b) << 1;
        a = sq_a;
        if (n >> bit) & 1 == 1 {
            let next_a = u * &a + d * v * &b;
            b = v * &a + u * &b;
            a = next_a;
        }
    }
    (a, b)
}

/// `Q_n(d, z)` as a reduced rational.
pub fn q(params: &RedeiParams) -> Result<Rational> {
    if params.n == 0 {
        return Err(Error::RedeiUndefined(0));
    }
    redei_matrix_pow(params).q()
}

/// Returns `N² - d D²` after checking it equals `(z² - d)^n`.
pub fn norm_check(pair: &RedeiPair) -> Result<BigInt> {
    let norm = pair.norm();
    let expected = pair.params.norm_base().pow(pair.params.n as u32);
    if norm != expected {
        return Err(Error::Consistency(format!(
            "norm identity violated at n = {}: {} != {}",
            pair.params.n, norm, expected
        )));
    }
    Ok(norm)
}

/// `Q_n(d, x)` for a rational `x = u/v`, from the binomial sums cleared of
/// denominators: `N_n(d,x) v^n = Σ C(n,2i) d^i u^{n-2i} v^{2i}` and
/// `D_n(d,x) v^n = Σ C(n,2i+1) d^i u^{n-2i-1} v^{2i+1}`.
pub fn q_rational(d: &BigInt, x: &Rational, n: u64) -> Result<Rational> {
    arith::require_nonsquare(d)?;
    if n == 0 {
        return Err(Error::RedeiUndefined(0));
    }
    let (u, v) = (x.numer(), x.denom());
    let mut numer = BigInt::zero();
    let mut denom = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        let term = &binom * d.pow((k / 2) as u32) * u.pow((n - k) as u32) * v.pow(k as u32);
        if k % 2 == 0 {
            numer += term;
        } else {
            denom += term;
        }
        binom = binom * (n - k) / (k + 1);
    }
    if denom.is_zero() {
        return Err(Error::RedeiUndefined(n));
    }
    Ok(Rational::new(numer, denom))
}

/// A point of the projective line over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectivePoint {
    Finite(u64),
    Infinity,
}

fn pair_pow_mod(d: u64, z: u64, n: u64, p: u64) -> (u64, u64) {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let (mut a, mut b) = (1 % p, 0u64);
    if n == 0 {
        return (a, b);
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        let sq_a = (mul(a, a) + mul(d, mul(b, b))) % p;
        b = mul(2, mul(a, b));
        a = sq_a;
        if (n >> bit) & 1 == 1 {
            let next_a = (mul(z, a) + mul(d, b)) % p;
            b = (a + mul(z, b)) % p;
            a = next_a;
        }
    }
    (a, b)
}

/// `z ↦ Q_n(d, z)` on `P¹(F_p)`; poles map to infinity and infinity is fixed
/// (`deg N_n = n > deg D_n`).
pub fn eval_projective(p: u64, d: u64, n: u64, z: ProjectivePoint) -> ProjectivePoint {
    match z {
        ProjectivePoint::Infinity => ProjectivePoint::Infinity,
        ProjectivePoint::Finite(z) => {
            let (num, den) = pair_pow_mod(d % p, z % p, n, p);
            if den == 0 {
                ProjectivePoint::Infinity
            } else {
                ProjectivePoint::Finite(
                    ((num as u128 * arith::inv_mod(den, p) as u128) % p as u128) as u64,
                )
            }
        }
    }
}

fn require_field_nonresidue(p: u64, d: &BigInt) -> Result<u64> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let dm = arith::residue(d, p);
    if dm == 0 || arith::legendre(dm, p) == 1 {
        return Err(Error::ResidueInField { d: d.clone(), p });
    }
    Ok(dm)
}

/// Exhaustively decides whether `Q_n(d, ·)` permutes `P¹(F_p)`.
pub fn permutation_exhaustive(p: u64, d: &BigInt, n: u64) -> Result<bool> {
    let dm = require_field_nonresidue(p, d)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut seen = vec![false; p as usize + 1];
    let points = (0..p)
        .map(ProjectivePoint::Finite)
        .chain(std::iter::once(ProjectivePoint::Infinity));
    for z in points {
        let slot = match eval_projective(p, dm, n, z) {
            ProjectivePoint::Finite(v) => v as usize,
            ProjectivePoint::Infinity => p as usize,
        };
        if std::mem::replace(&mut seen[slot], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Permutation test that also checks the outcome against `gcd(n, p + 1) = 1`.
pub fn permutation_check(p: u64, d: &BigInt, n: u64) -> Result<bool> {
    let observed = permutation_exhaustive(p, d, n)?;
    let predicted = n.gcd(&(p + 1)) == 1;
    if observed != predicted {
        return Err(Error::Consistency(format!(
            "Q_{n}(d={d}, ·) over P¹(F_{p}): bijective = {observed}, gcd rule says {predicted}"
        )));
    }
    Ok(observed)
}

/// `Q_n(d,z) → sign(z)·√d` only when `z > 0` gives the positive root.
pub(crate) fn require_positive_z(z: &BigInt) -> Result<()> {
    if z.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveZ(z.clone()))
    }
}
