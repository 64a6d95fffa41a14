use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::MAX_SERIES_ORDER;
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Power series in `t` with exact rational coefficients, truncated after `t^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Result<Self> {
        if order > MAX_SERIES_ORDER {
            return Err(Error::SeriesOrder(order));
        }
        coeffs.resize(order + 1, Rational::zero());
        Ok(TruncatedSeries { coeffs })
    }

    /// Polynomial with integer coefficients, truncated to `order`.
    pub fn from_integers(poly: &[BigInt], order: usize) -> Result<Self> {
        let coeffs = poly
            .iter()
            .take(order + 1)
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        Self::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.common_order(other);
        TruncatedSeries {
            coeffs: (0..=m).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.common_order(other);
        let coeffs = (0..=m)
            .map(|k| {
                (0..=k).fold(Rational::zero(), |acc, i| {
                    acc + &self.coeffs[i] * &other.coeffs[k - i]
                })
            })
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `self / other`; `other` must have a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let lead = &other.coeffs[0];
        if lead.is_zero() {
            return Err(Error::SeriesNotUnit);
        }
        let m = self.common_order(other);
        let mut q: Vec<Rational> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let acc = (1..=k).fold(self.coeffs[k].clone(), |acc, i| {
                acc - &other.coeffs[i] * &q[k - i]
            });
            q.push(acc / lead);
        }
        Ok(TruncatedSeries { coeffs: q })
    }

    /// Largest `m` with coefficients `0..=m` equal, `None` if the constant
    /// terms already differ, capped at the common order.
    pub fn agreement(&self, other: &Self) -> Option<usize> {
        let m = self.common_order(other);
        (0..=m)
            .take_while(|&i| self.coeffs[i] == other.coeffs[i])
            .last()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            write!(f, "{sign}")?;
            let show_mag = i == 0 || !mag.is_one();
            match (i, show_mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "({mag})")?,
                _ => {}
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}
