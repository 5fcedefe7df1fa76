//! Arbitrary-precision real values and elliptic moduli.
//!
//! [`BigReal`] wraps an MPFR float and tags it with a working precision in
//! bits. Binary operations produce results at the *minimum* precision of
//! their operands, so precision never silently inflates; unary operations
//! preserve precision. Every numeric kernel in the crate is parameterized
//! by these values — there is no global precision state.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Smallest precision a [`BigReal`] may carry.
pub const MIN_PREC: u32 = 64;

/// An arbitrary-precision real number tagged with its working precision.
#[derive(Clone, PartialEq)]
pub struct BigReal {
    f: Float,
}

impl BigReal {
    fn wrap(f: Float) -> Self {
        debug_assert!(f.prec() >= MIN_PREC);
        BigReal { f }
    }

    /// Working precision in bits (always at least [`MIN_PREC`]).
    pub fn prec(&self) -> u32 {
        self.f.prec()
    }

    pub fn zero(prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), 0))
    }

    pub fn one(prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), 1))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), v))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), v))
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), v))
    }

    /// Exact power of two `2^e`, useful for tolerances.
    pub fn pow2(e: i64, prec: u32) -> Self {
        let mut f = Float::with_val(prec.max(MIN_PREC), 1);
        f <<= e as i32;
        Self::wrap(f)
    }

    /// pi at the requested precision.
    pub fn pi(prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), Constant::Pi))
    }

    /// Parse a decimal string (integer, fraction `p/q`, or decimal point /
    /// scientific form) at the requested precision.
    pub fn parse_decimal(s: &str, prec: u32) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n = num
                .trim()
                .parse::<Integer>()
                .map_err(|e| Error::domain(format!("bad numerator `{num}`: {e}")))?;
            let d = den
                .trim()
                .parse::<Integer>()
                .map_err(|e| Error::domain(format!("bad denominator `{den}`: {e}")))?;
            if d == 0 {
                return Err(Error::domain("zero denominator"));
            }
            let q = Rational::from((n, d));
            return Ok(Self::from_rational(&q, prec));
        }
        let parsed = Float::parse(s).map_err(|e| Error::domain(format!("bad number `{s}`: {e}")))?;
        Ok(Self::wrap(Float::with_val(prec.max(MIN_PREC), parsed)))
    }

    /// Round (a copy of) the value to a new precision.
    pub fn rounded_to(&self, prec: u32) -> Self {
        Self::wrap(Float::with_val(prec.max(MIN_PREC), &self.f))
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.f.is_sign_positive() && !self.f.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.f.is_sign_negative() && !self.f.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite()
    }

    /// Sign as -1 / 0 / +1.
    pub fn signum_i(&self) -> i32 {
        match self.f.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    /// Exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        self.f.get_exp().map(|e| e as i64)
    }

    /// True when `|self| < 2^e`.
    pub fn abs_below_pow2(&self, e: i64) -> bool {
        match self.exponent() {
            None => true,
            Some(ex) => ex <= e,
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(Float::with_val(self.prec(), self.f.abs_ref()))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::domain("sqrt of negative value"));
        }
        Ok(Self::wrap(Float::with_val(self.prec(), self.f.sqrt_ref())))
    }

    pub fn cbrt(&self) -> Self {
        Self::wrap(Float::with_val(self.prec(), self.f.cbrt_ref()))
    }

    /// k-th root for k >= 1 (odd k accepts negative arguments).
    pub fn nth_root(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("0th root"));
        }
        if self.is_negative() && k % 2 == 0 {
            return Err(Error::domain("even root of negative value"));
        }
        Ok(Self::wrap(Float::with_val(self.prec(), self.f.root_ref(k))))
    }

    pub fn square(&self) -> Self {
        Self::wrap(Float::with_val(self.prec(), self.f.square_ref()))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero"));
        }
        Ok(Self::wrap(Float::with_val(self.prec(), self.f.recip_ref())))
    }

    pub fn exp(&self) -> Self {
        Self::wrap(Float::with_val(self.prec(), self.f.exp_ref()))
    }

    /// Integer power (negative exponents allowed for nonzero values).
    pub fn powi(&self, e: i32) -> Result<Self> {
        if self.is_zero() && e < 0 {
            return Err(Error::domain("zero to a negative power"));
        }
        Ok(Self::wrap(Float::with_val(self.prec(), (&self.f).pow(e))))
    }

    /// Multiply by 2^e in place-free form (exact).
    pub fn mul_pow2(&self, e: i64) -> Self {
        let mut f = self.f.clone();
        f <<= e as i32;
        Self::wrap(f)
    }

    pub fn mul_u64(&self, v: u64) -> Self {
        Self::wrap(Float::with_val(self.prec(), &self.f * v))
    }

    pub fn div_u64(&self, v: u64) -> Result<Self> {
        if v == 0 {
            return Err(Error::domain("division by zero"));
        }
        Ok(Self::wrap(Float::with_val(self.prec(), &self.f / v)))
    }

    /// |self - other| as a fresh value at the smaller precision.
    pub fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }

    /// True when |self - other| < 2^e.
    pub fn agrees_within_pow2(&self, other: &Self, e: i64) -> bool {
        self.abs_diff(other).abs_below_pow2(e)
    }

    /// Nearest integer (ties away from zero), as a rug Integer.
    pub fn round_to_integer(&self) -> Option<Integer> {
        let r = Float::with_val(self.prec(), self.f.round_ref());
        r.to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.f.to_f64()
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let s = self.f.to_string_radix(10, Some(digits.max(2)));
        normalize_decimal(&s)
    }

    /// Access the raw MPFR float (read-only).
    pub fn as_float(&self) -> &Float {
        &self.f
    }

    pub(crate) fn from_float(f: Float) -> Self {
        assert!(f.prec() >= MIN_PREC, "precision below MIN_PREC");
        Self::wrap(f)
    }
}

/// MPFR renders e.g. "4.2500e-2"; keep that but trim redundant trailing
/// zeros in the mantissa so reports stay readable and stable.
fn normalize_decimal(s: &str) -> String {
    match s.split_once('e') {
        Some((mant, exp)) => {
            let mant = trim_mantissa(mant);
            format!("{mant}e{exp}")
        }
        None => trim_mantissa(s).to_string(),
    }
}

fn trim_mantissa(m: &str) -> &str {
    if m.contains('.') {
        let t = m.trim_end_matches('0');
        t.strip_suffix('.').unwrap_or(t)
    } else {
        m
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({} @{})", self.to_decimal(20), self.prec())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(self.prec() as usize / 3))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.f.partial_cmp(&other.f)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let prec = self.prec().min(rhs.prec());
                BigReal::wrap(Float::with_val(prec, (&self.f).$method(&rhs.f)))
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(Float::with_val(self.prec(), (&self.f).neg()))
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

/// An elliptic modulus k in (0, 1) together with its complementary modulus
/// k' = sqrt(1 - k^2). Both components are stored so that passing to the
/// complementary modulus is an exact swap, never a recomputation.
#[derive(Clone, Debug)]
pub struct Modulus {
    k: BigReal,
    k_prime: BigReal,
}

impl Modulus {
    /// Build from k, computing k' = sqrt((1-k)(1+k)).
    pub fn new(k: BigReal) -> Result<Self> {
        let prec = k.prec();
        if !k.is_positive() || k >= BigReal::one(prec) {
            return Err(Error::domain(format!(
                "modulus must lie in (0, 1), got {}",
                k.to_decimal(12)
            )));
        }
        let one = BigReal::one(prec);
        let diff = &one - &k;
        if diff.is_zero() || diff.exponent().unwrap_or(0) < -(prec as i64) + 4 {
            return Err(Error::precision(
                "modulus indistinguishable from 1 at this precision",
            ));
        }
        let k_prime = (&diff * &(&one + &k)).sqrt()?;
        Ok(Modulus { k, k_prime })
    }

    /// Build from both components, verifying k^2 + k'^2 = 1 to within
    /// 2^-(prec-8).
    pub fn from_parts(k: BigReal, k_prime: BigReal) -> Result<Self> {
        let prec = k.prec().min(k_prime.prec());
        if !k.is_positive() || !k_prime.is_positive() {
            return Err(Error::domain("modulus components must be positive"));
        }
        let sum = &k.square() + &k_prime.square();
        let resid = (&sum - &BigReal::one(prec)).abs();
        if !resid.abs_below_pow2(-(prec as i64) + 8) {
            return Err(Error::domain(format!(
                "k^2 + k'^2 differs from 1 by {}",
                resid.to_decimal(8)
            )));
        }
        Ok(Modulus { k, k_prime })
    }

    /// Re-tag an already-validated modulus at a different working precision
    /// without re-running the consistency check (raising precision adds no
    /// information, so the check could only fail spuriously).
    pub(crate) fn retagged(&self, prec: u32) -> Modulus {
        Modulus {
            k: self.k.rounded_to(prec),
            k_prime: self.k_prime.rounded_to(prec),
        }
    }

    pub fn k(&self) -> &BigReal {
        &self.k
    }

    pub fn k_prime(&self) -> &BigReal {
        &self.k_prime
    }

    /// The complementary modulus (exact component swap).
    pub fn complement(&self) -> Modulus {
        Modulus {
            k: self.k_prime.clone(),
            k_prime: self.k.clone(),
        }
    }

    pub fn prec(&self) -> u32 {
        self.k.prec().min(self.k_prime.prec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_precision_rule() {
        let a = BigReal::from_u64(3, 256);
        let b = BigReal::from_u64(5, 128);
        assert_eq!((&a + &b).prec(), 128);
        assert_eq!((&a * &b).prec(), 128);
        assert_eq!((&a - &b).prec(), 128);
        assert_eq!((&a / &b).prec(), 128);
    }

    #[test]
    fn floor_precision_is_enforced() {
        let a = BigReal::from_u64(1, 10);
        assert_eq!(a.prec(), MIN_PREC);
    }

    #[test]
    fn pow2_and_exponent() {
        let t = BigReal::pow2(-100, 64);
        assert_eq!(t.exponent(), Some(-99));
        assert!(t.abs_below_pow2(-99));
        assert!(!t.abs_below_pow2(-101));
    }

    #[test]
    fn parse_fraction_and_decimal() {
        let q = BigReal::parse_decimal("-9/16", 128).unwrap();
        assert_eq!(q.to_f64(), -0.5625);
        let d = BigReal::parse_decimal("1.5e2", 128).unwrap();
        assert_eq!(d.to_f64(), 150.0);
        assert!(BigReal::parse_decimal("1/0", 128).is_err());
    }

    #[test]
    fn modulus_complement_is_exact_swap() {
        let k = BigReal::parse_decimal("0.1", 256).unwrap();
        let m = Modulus::new(k).unwrap();
        let c = m.complement();
        assert_eq!(c.k(), m.k_prime());
        assert_eq!(c.k_prime(), m.k());
        let resid = (&m.k().square() + &m.k_prime().square()) - BigReal::one(256);
        assert!(resid.abs_below_pow2(-250));
    }

    #[test]
    fn modulus_rejects_out_of_range() {
        assert!(Modulus::new(BigReal::zero(128)).is_err());
        assert!(Modulus::new(BigReal::from_u64(1, 128)).is_err());
        assert!(Modulus::new(BigReal::from_i64(-1, 128)).is_err());
        assert!(Modulus::new(BigReal::from_u64(2, 128)).is_err());
    }

    #[test]
    fn decimal_rendering_round_trips() {
        let x = BigReal::parse_decimal("0.125", 128).unwrap();
        let s = x.to_decimal(10);
        let y = BigReal::parse_decimal(&s, 128).unwrap();
        assert_eq!(x.to_f64(), y.to_f64());
    }
}
