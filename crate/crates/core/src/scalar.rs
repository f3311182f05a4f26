//! Arbitrary-precision rational scalars and their canonical string form.
//!
//! All geometry and all polynomial coefficients in this crate are exact
//! rationals. Serialization uses the canonical `"p/q"` form (`"p"` when the
//! denominator is 1, sign on the numerator) so JSON documents are lossless.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar: always in lowest terms with positive denominator.
pub type ExactScalar = BigRational;

/// Rational from an integer pair.
pub fn rat(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(num))
}

/// `(-1)^e` as a rational.
pub fn sign_pow(e: usize) -> ExactScalar {
    if e % 2 == 0 {
        ExactScalar::one()
    } else {
        -ExactScalar::one()
    }
}

/// Integer power with negative exponents allowed; errors on `0^negative`.
pub fn pow_i64(base: &ExactScalar, exp: i64) -> Result<ExactScalar> {
    if base.is_zero() && exp < 0 {
        return Err(Error::DivisionByZero("0 raised to a negative power".into()));
    }
    Ok(base.pow(exp as i32))
}

/// Canonical string form: `"p"` or `"p/q"` with q > 1 and sign on p.
pub fn format_rat(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse the canonical `"p"` / `"p/q"` form.
pub fn parse_rat(s: &str) -> Result<ExactScalar> {
    let bad = || Error::DegenerateInput(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// True iff `x` is an exact e-th power in Q; returns the root when it exists.
/// For even `e` a negative `x` has no rational root.
pub fn nth_root(x: &ExactScalar, e: u32) -> Option<ExactScalar> {
    if e == 0 {
        return None;
    }
    if x.is_zero() {
        return Some(ExactScalar::zero());
    }
    if x.is_negative() && e % 2 == 0 {
        return None;
    }
    let rn = x.numer().abs().nth_root(e);
    let rd = x.denom().nth_root(e);
    let ok = num_traits::pow::pow(rn.clone(), e as usize) == x.numer().abs()
        && num_traits::pow::pow(rd.clone(), e as usize) == *x.denom();
    if !ok {
        return None;
    }
    let root = BigRational::new(rn, rd);
    Some(if x.is_negative() { -root } else { root })
}
