//! Continued fractions whose partial quotients are rationals `a_i / b_i`.
//!
//! Convergents are produced two ways: the usual three-term recurrence run
//! over exact rationals, and a purely integer recurrence on `(s_n, t_n, u_n)`
//! with `p_n = s_n / (b_0 u_n)` and `q_n = t_n / u_n`.
//!
//! Convergent `n` of [`sqrt_cf`] is `Q_{n+1}(d, z)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::redei;

/// Partial quotient `a / b`, kept unreduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialQuotient {
    pub a: BigInt,
    pub b: BigInt,
}

impl PartialQuotient {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        let b = b.into();
        if b.is_zero() {
            return Err(Error::InvalidArgument("partial quotient with zero denominator".into()));
        }
        Ok(PartialQuotient { a: a.into(), b })
    }

    pub fn integer(a: impl Into<BigInt>) -> Self {
        PartialQuotient {
            a: a.into(),
            b: BigInt::one(),
        }
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.a.clone(), self.b.clone())
    }
}

impl fmt::Display for PartialQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `[c_0; c_1, …]`, optionally repeating `terms[start..]` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCF {
    pub terms: Vec<PartialQuotient>,
    pub period_start: Option<usize>,
}

impl RationalCF {
    pub fn finite(terms: Vec<PartialQuotient>) -> Result<Self> {
        Self::build(terms, None)
    }

    pub fn periodic(terms: Vec<PartialQuotient>, period_start: usize) -> Result<Self> {
        Self::build(terms, Some(period_start))
    }

    fn build(terms: Vec<PartialQuotient>, period_start: Option<usize>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("continued fraction needs a term".into()));
        }
        if terms.iter().any(|t| t.b.is_zero()) {
            return Err(Error::InvalidArgument("partial quotient with zero denominator".into()));
        }
        if matches!(period_start, Some(s) if s >= terms.len()) {
            return Err(Error::InvalidArgument("period start past the last term".into()));
        }
        Ok(RationalCF { terms, period_start })
    }

    /// Number of terms available; `None` when periodic.
    pub fn len(&self) -> Option<usize> {
        match self.period_start {
            Some(_) => None,
            None => Some(self.terms.len()),
        }
    }

    pub fn term(&self, i: usize) -> Option<&PartialQuotient> {
        match self.period_start {
            Some(start) if i >= self.terms.len() => {
                let period = self.terms.len() - start;
                Some(&self.terms[start + (i - start) % period])
            }
            _ => self.terms.get(i),
        }
    }

    fn take(&self, k: usize) -> Result<Vec<&PartialQuotient>> {
        if k == 0 {
            return Err(Error::InvalidArgument("need at least one convergent".into()));
        }
        (0..k)
            .map(|i| {
                self.term(i).ok_or_else(|| {
                    Error::InvalidArgument(format!("only {} terms available", self.terms.len()))
                })
            })
            .collect()
    }
}

impl fmt::Display for RationalCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.terms[0])?;
        let mut sep = "; ";
        for (i, t) in self.terms.iter().enumerate().skip(1) {
            if self.period_start == Some(i) {
                write!(f, "{sep}period(")?;
                sep = "";
            }
            write!(f, "{sep}{t}")?;
            sep = ", ";
        }
        if self.period_start.is_some() {
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

/// First `k` convergents by `x_n = c_n x_{n-1} + x_{n-2}` over rationals.
pub fn convergents_direct(cf: &RationalCF, k: usize) -> Result<Vec<Rational>> {
    let terms = cf.take(k)?;
    let (mut p_prev, mut p) = (Rational::one(), terms[0].value());
    let (mut q_prev, mut q) = (Rational::zero(), Rational::one());
    let mut out = vec![p.clone()];
    for (n, term) in terms.iter().enumerate().skip(1) {
        let c = term.value();
        let p_next = &c * &p + &p_prev;
        let q_next = &c * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        if q.is_zero() {
            return Err(Error::ConvergentUndefined(n));
        }
        out.push(&p / &q);
    }
    Ok(out)
}

/// Integer-track state behind one convergent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentRecord {
    pub index: usize,
    pub s: BigInt,
    pub t: BigInt,
    pub u: BigInt,
    /// `(s / (b_0 u)) / (t / u)`.
    pub value: Rational,
}

/// Convergents from the integer recurrences
/// `s_n = a_n s_{n-1} + b_n b_{n-1} s_{n-2}`, same for `t`, and `u_n = b_n u_{n-1}`,
/// seeded with `s_0 = a_0`, `s_1 = a_0 a_1 + b_0 b_1`, `t_0 = 1`, `t_1 = a_1`,
/// `u_0 = 1`, `u_1 = b_1`.
pub fn convergents_lemma(cf: &RationalCF, k: usize) -> Result<Vec<ConvergentRecord>> {
    let terms = cf.take(k)?;
    let b0 = &terms[0].b;
    let record = |index: usize, s: &BigInt, t: &BigInt, u: &BigInt| -> Result<ConvergentRecord> {
        if t.is_zero() {
            return Err(Error::ConvergentUndefined(index));
        }
        Ok(ConvergentRecord {
            index,
            s: s.clone(),
            t: t.clone(),
            u: u.clone(),
            value: Rational::new(s.clone(), b0 * t),
        })
    };

    let (s0, t0, u0) = (terms[0].a.clone(), BigInt::one(), BigInt::one());
    let mut out = vec![record(0, &s0, &t0, &u0)?];
    if k == 1 {
        return Ok(out);
    }
    let (a1, b1) = (&terms[1].a, &terms[1].b);
    let s1 = &terms[0].a * a1 + b0 * b1;
    let t1 = a1.clone();
    let u1 = b1.clone();
    out.push(record(1, &s1, &t1, &u1)?);

    let (mut s_prev, mut s) = (s0, s1);
    let (mut t_prev, mut t) = (t0, t1);
    let mut u = u1;
    for n in 2..k {
        let (an, bn, b_prev) = (&terms[n].a, &terms[n].b, &terms[n - 1].b);
        let bb = bn * b_prev;
        let s_next = an * &s + &bb * &s_prev;
        let t_next = an * &t + &bb * &t_prev;
        s_prev = std::mem::replace(&mut s, s_next);
        t_prev = std::mem::replace(&mut t, t_next);
        u *= bn;
        out.push(record(n, &s, &t, &u)?);
    }
    Ok(out)
}

/// `√d = [z; period(2z/(d - z²), 2z)]`, with the first quotient stored as the
/// unreduced pair `(2z, d - z²)`.
pub fn sqrt_cf(d: &BigInt, z: &BigInt) -> Result<RationalCF> {
    redei::validate(d, z)?;
    redei::require_positive_z(z)?;
    let two_z = z + z;
    RationalCF::periodic(
        vec![
            PartialQuotient::integer(z.clone()),
            PartialQuotient::new(two_z.clone(), d - z * z)?,
            PartialQuotient::integer(two_z),
        ],
        1,
    )
}

/// Checks that convergents `0..k` of [`sqrt_cf`] are `Q_1 … Q_k`.
pub fn cf_equals_redei(d: &BigInt, z: &BigInt, k: usize) -> Result<bool> {
    let cf = sqrt_cf(d, z)?;
    let convergents = convergents_direct(&cf, k)?;
    let qs = redei::redei_sequence(d, z, k + 1)?;
    for (c, pair) in convergents.iter().zip(&qs[1..]) {
        if *c != pair.q()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Regular continued fraction of `√d`: `[a_0; period]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSqrtCF {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

impl IntegerSqrtCF {
    pub fn to_rational_cf(&self) -> RationalCF {
        let mut terms = vec![PartialQuotient::integer(self.a0.clone())];
        terms.extend(self.period.iter().cloned().map(PartialQuotient::integer));
        RationalCF {
            terms,
            period_start: Some(1),
        }
    }
}

impl fmt::Display for IntegerSqrtCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let period: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}; period({})]", self.a0, period.join(", "))
    }
}

/// Surd algorithm on `(P + √d) / Q`, stopping at the first `a_k = 2 a_0`.
pub fn classical_sqrt_cf(d: &BigInt) -> Result<IntegerSqrtCF> {
    arith::require_nonsquare(d)?;
    let a0: BigInt = d.sqrt();
    let two_a0 = &a0 + &a0;
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let mut period = Vec::new();
    loop {
        m = &a * &q - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        period.push(a.clone());
        if a == two_a0 {
            return Ok(IntegerSqrtCF { a0, period });
        }
    }
}
