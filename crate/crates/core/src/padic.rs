//! p-adic behaviour of `Q_n(d, z)` when `z² ≡ d (mod p)`.
//!
//! The norm identity `N_n² - d D_n² = (z² - d)^n` gives
//! `v_p(Q_n² - d) = n · v_p(z² - d)` as long as `D_n` is a p-adic unit, which
//! holds when `p ∤ 2z` because `D_n ≡ n z^{n-1} … ≡ (2z)^{n-1} (mod p)`.
//! Only odd primes not dividing `d` are handled.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::{self, PadicExpansion, Rational, SqrtModP};
use crate::contfrac::{self, RationalCF};
use crate::error::{Error, Result};
use crate::redei::{self, RedeiParams};

/// Which square root of `d` modulo `p` to follow.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum RootChoice {
    #[default]
    Smaller,
    Larger,
    /// A specific positive integer `z` with `z² ≡ d (mod p)`, possibly a
    /// higher lift.
    Value(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicSqrtContext {
    pub d: BigInt,
    pub p: u64,
    pub z: BigInt,
    pub expansion: PadicExpansion,
}

impl PadicSqrtContext {
    pub fn new(d: &BigInt, p: u64, root: &RootChoice, prec: usize) -> Result<Self> {
        arith::require_nonsquare(d)?;
        let (small, large) = match arith::sqrt_mod_p(d, p)? {
            SqrtModP::Roots(a, b) => (a, b),
            SqrtModP::NonResidue => return Err(Error::NonResidue { d: d.clone(), p }),
        };
        let z = match root {
            RootChoice::Smaller => BigInt::from(small),
            RootChoice::Larger => BigInt::from(large),
            RootChoice::Value(z) => {
                if !z.is_positive() {
                    return Err(Error::NonPositiveZ(z.clone()));
                }
                let r = arith::residue(z, p);
                if r != small && r != large {
                    return Err(Error::NotStartingRoot {
                        d: d.clone(),
                        p,
                        b0: r,
                    });
                }
                z.clone()
            }
        };
        let expansion = arith::hensel_digits(d, p, arith::residue(&z, p), prec.max(1))?;
        Ok(PadicSqrtContext {
            d: d.clone(),
            p,
            z,
            expansion,
        })
    }

    /// `v_p(z² - d) ≥ 1`.
    pub fn base_valuation(&self) -> i64 {
        let gap = &self.z * &self.z - &self.d;
        arith::vp(&Rational::from_integer(gap), self.p).expect("z² - d is nonzero")
    }

    fn params(&self, n: u64) -> RedeiParams {
        RedeiParams {
            d: self.d.clone(),
            z: self.z.clone(),
            n,
        }
    }

    /// Hensel truncations `a_0 ..= a_k`, extending the stored expansion if needed.
    pub fn truncations(&self, k: usize) -> Result<Vec<BigInt>> {
        if self.expansion.prec() > k {
            let mut all = self.expansion.truncations();
            all.truncate(k + 1);
            return Ok(all);
        }
        let b0 = self.expansion.digits[0];
        Ok(arith::hensel_digits(&self.d, self.p, b0, k + 1)?.truncations())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicOrder {
    /// `v_p(N_n² - d D_n²)`.
    pub norm: i64,
    /// `v_p(Q_n² - d)`.
    pub q: i64,
}

/// Valuations of `N_n² - d D_n²` and `Q_n² - d`, checked against `n · v_p(z² - d)`.
pub fn padic_order(ctx: &PadicSqrtContext, n: u64) -> Result<PadicOrder> {
    if n == 0 {
        return Err(Error::InvalidArgument("index must be at least 1".into()));
    }
    let pair = redei::redei_matrix_pow(&ctx.params(n));
    order_of_pair(ctx, n, &pair.numer, &pair.denom)
}

fn order_of_pair(ctx: &PadicSqrtContext, n: u64, num: &BigInt, den: &BigInt) -> Result<PadicOrder> {
    let p = ctx.p;
    let den_val = arith::vp(&Rational::from_integer(den.clone()), p)?;
    if den_val != 0 {
        return Err(Error::Consistency(format!(
            "denominator not a p-adic unit: v_{p}(D_{n}) = {den_val}"
        )));
    }
    let norm = num * num - &ctx.d * den * den;
    let norm_val = arith::vp(&Rational::from_integer(norm), p)?;
    let expected = n as i64 * ctx.base_valuation();
    if norm_val != expected {
        return Err(Error::Consistency(format!(
            "v_{p}(N_{n}² - d D_{n}²) = {norm_val}, expected {expected}"
        )));
    }
    Ok(PadicOrder {
        norm: norm_val,
        q: norm_val - 2 * den_val,
    })
}

/// `a_n ≡ Q_{2^n}(d, z) (mod p^{n+1})` for `0 ≤ n ≤ k`.
pub fn check_newton_padic(ctx: &PadicSqrtContext, k: usize) -> Result<bool> {
    let truncations = ctx.truncations(k)?;
    let mut num = ctx.z.clone();
    let mut den = BigInt::one();
    for (n, a) in truncations.iter().enumerate() {
        let q = Rational::new(num.clone(), den.clone());
        if !arith::rat_congruent(&Rational::from_integer(a.clone()), &q, ctx.p, n as u32 + 1)? {
            return Ok(false);
        }
        let next = &num * &num + &ctx.d * &den * &den;
        den = (&num * &den) << 1;
        num = next;
    }
    Ok(true)
}

/// `a_n ≡ Q_{n+1}(d, z) (mod p^{n+1})` for `0 ≤ n ≤ k`.
pub fn check_linear_padic(ctx: &PadicSqrtContext, k: usize) -> Result<bool> {
    let truncations = ctx.truncations(k)?;
    let pairs = redei::redei_sequence(&ctx.d, &ctx.z, k + 2)?;
    for (n, a) in truncations.iter().enumerate() {
        let q = pairs[n + 1].q()?;
        if !arith::rat_congruent(&Rational::from_integer(a.clone()), &q, ctx.p, n as u32 + 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The periodic continued fraction `[z; period(2z/(d - z²), 2z)]` for the
/// chosen p-adic root.
pub fn padic_cf(d: &BigInt, p: u64, root: &RootChoice) -> Result<RationalCF> {
    let ctx = PadicSqrtContext::new(d, p, root, 1)?;
    contfrac::sqrt_cf(d, &ctx.z)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub n: u64,
    pub q: Rational,
    /// `|Q_n² - d|`.
    pub real_error: Rational,
    /// `v_p(Q_n² - d)`.
    pub padic_order: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub z: BigInt,
    pub cf: RationalCF,
    pub base_valuation: i64,
    pub rows: Vec<ReportRow>,
    /// Smallest `n` from which the real error decreases strictly to the end
    /// of the table.
    pub real_decreasing_from: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneousReport {
    pub d: BigInt,
    pub p: u64,
    pub roots: Vec<RootReport>,
}

/// Tabulates `Q_1 … Q_k` for both roots with real error and p-adic order side by side.
pub fn simultaneous_report(d: &BigInt, p: u64, k: u64) -> Result<SimultaneousReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one row".into()));
    }
    let mut roots = Vec::with_capacity(2);
    for choice in [RootChoice::Smaller, RootChoice::Larger] {
        let ctx = PadicSqrtContext::new(d, p, &choice, 1)?;
        roots.push(root_report(&ctx, k)?);
    }
    Ok(SimultaneousReport {
        d: d.clone(),
        p,
        roots,
    })
}

pub fn root_report(ctx: &PadicSqrtContext, k: u64) -> Result<RootReport> {
    let pairs = redei::redei_sequence(&ctx.d, &ctx.z, k as usize + 1)?;
    let mut rows = Vec::with_capacity(k as usize);
    for pair in &pairs[1..] {
        let n = pair.params.n;
        let order = order_of_pair(ctx, n, &pair.numer, &pair.denom)?;
        let norm = redei::norm_check(pair)?;
        rows.push(ReportRow {
            n,
            q: pair.q()?,
            real_error: Rational::new(norm.abs(), &pair.denom * &pair.denom),
            padic_order: order.q,
        });
    }
    let mut from = rows.len();
    while from > 1 && rows[from - 1].real_error < rows[from - 2].real_error {
        from -= 1;
    }
    let real_decreasing_from = (rows.len() > 1 && from < rows.len()).then(|| rows[from - 1].n);
    Ok(RootReport {
        z: ctx.z.clone(),
        cf: contfrac::sqrt_cf(&ctx.d, &ctx.z)?,
        base_valuation: ctx.base_valuation(),
        rows,
        real_decreasing_from,
    })
}

impl RootReport {
    pub fn padic_law_holds(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.padic_order == r.n as i64 * self.base_valuation)
    }

    pub fn final_error(&self) -> &Rational {
        &self.rows.last().expect("report has rows").real_error
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn ctx(d: i64, p: u64, prec: usize) -> PadicSqrtContext {
        PadicSqrtContext::new(&d.into(), p, &RootChoice::Smaller, prec).unwrap()
    }

    #[test]
    fn order_examples() {
        let c = ctx(26, 229, 1);
        assert_eq!(c.z, BigInt::from(22));
        assert_eq!(padic_order(&c, 3).unwrap(), PadicOrder { norm: 3, q: 3 });
        assert_eq!(padic_order(&c, 1).unwrap().norm, c.base_valuation());
        assert_eq!(padic_order(&c, 10).unwrap().q, 10);
    }

    #[test]
    fn lifted_root_has_higher_base_valuation() {
        // 22 + 52·229 is a root mod 229²
        let z = BigInt::from(22 + 52 * 229);
        let c = PadicSqrtContext::new(&26.into(), 229, &RootChoice::Value(z), 3).unwrap();
        assert_eq!(c.base_valuation(), 2);
        assert_eq!(padic_order(&c, 5).unwrap().q, 10);
        assert!(check_linear_padic(&c, 10).unwrap());
    }

    #[test]
    fn congruence_examples() {
        let c = ctx(26, 229, 6);
        assert!(check_newton_padic(&c, 5).unwrap());
        assert!(check_newton_padic(&c, 0).unwrap());
        assert!(check_linear_padic(&c, 20).unwrap());
        assert!(check_linear_padic(&c, 0).unwrap());
        let c = ctx(7, 3, 1);
        assert_eq!(c.z, BigInt::one());
        assert!(check_newton_padic(&c, 4).unwrap());
        assert!(check_linear_padic(&c, 20).unwrap());
    }

    #[test]
    fn cf_examples() {
        let cf = padic_cf(&26.into(), 229, &RootChoice::Smaller).unwrap();
        assert_eq!(cf.to_string(), "[22; period(-22/229, 44)]");
        let cf = padic_cf(&26.into(), 229, &RootChoice::Larger).unwrap();
        assert_eq!(cf.terms[1].a, BigInt::from(414));
        assert_eq!(cf.terms[1].b, BigInt::from(26 - 207 * 207));
        assert_eq!(cf.terms[2].a, BigInt::from(414));
        assert!(matches!(
            padic_cf(&2.into(), 5, &RootChoice::Smaller),
            Err(Error::NonResidue { .. })
        ));
    }

    #[test]
    fn rejected_inputs() {
        assert!(matches!(
            PadicSqrtContext::new(&4.into(), 7, &RootChoice::Smaller, 1),
            Err(Error::SquareOrSmall(_))
        ));
        assert!(matches!(
            PadicSqrtContext::new(&21.into(), 7, &RootChoice::Smaller, 1),
            Err(Error::Ramified { .. })
        ));
        assert!(matches!(
            PadicSqrtContext::new(&26.into(), 229, &RootChoice::Value(23.into()), 1),
            Err(Error::NotStartingRoot { .. })
        ));
    }

    #[test]
    fn report_examples() {
        let r = simultaneous_report(&26.into(), 229, 10).unwrap();
        assert_eq!(r.roots.len(), 2);
        let small = &r.roots[0];
        assert!(small.padic_law_holds());
        assert_eq!(small.real_decreasing_from, Some(1));
        for row in &small.rows {
            assert_eq!(row.padic_order, row.n as i64);
        }

        let r = simultaneous_report(&26.into(), 229, 1).unwrap();
        assert_eq!(r.roots[0].rows.len(), 1);
        assert_eq!(r.roots[0].rows[0].padic_order, 1);

        let r = simultaneous_report(&7.into(), 3, 8).unwrap();
        let z1 = &r.roots[0];
        assert_eq!(z1.z, BigInt::one());
        // |1 - 7| = 6, then 9 at n = 2: not shrinking at first
        assert!(z1.rows[1].real_error > z1.rows[0].real_error);
        assert_eq!(z1.real_decreasing_from, Some(2));
        assert!(z1.padic_law_holds());
    }

    #[test]
    fn conjugate_roots_cancel() {
        for (d, p) in [(26i64, 229u64), (7, 3), (2, 7), (10, 13)] {
            let a = PadicSqrtContext::new(&d.into(), p, &RootChoice::Smaller, 12).unwrap();
            let b = PadicSqrtContext::new(&d.into(), p, &RootChoice::Larger, 12).unwrap();
            let pb = BigInt::from(p);
            for (n, (x, y)) in a.truncations(11).unwrap().iter().zip(b.truncations(11).unwrap()).enumerate() {
                assert!((x + y).is_multiple_of(&pb.pow(n as u32 + 1)));
            }
        }
    }
}
