//! Exact arithmetic on Rédei rational functions `Q_n(d, z) = N_n / D_n`,
//! where `(z + √d)^n = N_n + D_n √d`.
//!
//! The same sequence of rationals serves as
//! - convergents of the periodic continued fraction `[z; period(2z/(d - z²), 2z)]`,
//! - Newton iterates (`Q_{2^n}`) and Padé approximants (`Q_{2r+1}`) of `√d`,
//! - p-adic approximations of `√d` whenever `z² ≡ d (mod p)`.
//!
//! Everything is computed with arbitrary-precision integers and reduced
//! rationals; no floating point is involved.

pub mod approx;
pub mod arith;
pub mod contfrac;
mod error;
pub mod padic;
pub mod redei;

pub use arith::{PadicExpansion, Rational, SqrtModP};
pub use contfrac::{ConvergentRecord, PartialQuotient, RationalCF};
pub use error::{Error, Result};
pub use padic::{PadicSqrtContext, RootChoice};
pub use redei::{RedeiPair, RedeiParams};
