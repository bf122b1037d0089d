use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Runtime-configurable binary floating-point contract.
///
/// Two backends implement this: hardware binary64 (`f64`) and the softfloat
/// [`crate::arith::MpFloat`] whose precision is set per thread at program
/// start. Precision is global per run and never mixed; machine epsilon of a
/// `p`-bit context is `2^(1-p)`. Rounding is round-to-nearest for basic
/// operations; transcendentals are faithfully rounded in the software backend.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn from_usize(v: usize) -> Self;
    /// Parse a decimal literal, rounded once to the active precision.
    fn parse_decimal(s: &str) -> Result<Self>;
    fn zero() -> Self;
    fn one() -> Self;
    fn pi() -> Self;
    /// Precision p of the active context in mantissa bits.
    fn mantissa_bits() -> u32;
    /// 2^(1-p) for the active context.
    fn epsilon() -> Self;
    fn to_f64(&self) -> f64;
    /// Decimal rendering with enough digits to round-trip bit-for-bit
    /// at the active precision.
    fn to_decimal_string(&self) -> String;
    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn floor(&self) -> Self;
    /// Round to nearest integer, ties away from zero.
    fn round_nearest(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn exp(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn sqrt(&self) -> Result<Self>;
    fn ln(&self) -> Result<Self>;
    fn div_checked(&self, d: &Self) -> Result<Self>;
    /// self += a*b; the hot-loop primitive of the series recurrences.
    fn mul_acc(&mut self, a: &Self, b: &Self);
    fn max_with(&self, o: &Self) -> Self;
    fn min_with(&self, o: &Self) -> Self;

    fn two_pi() -> Self {
        Self::from_f64(2.0) * Self::pi()
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_usize(v: usize) -> Self {
        v as f64
    }
    fn parse_decimal(s: &str) -> Result<Self> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn mantissa_bits() -> u32 {
        53
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_decimal_string(&self) -> String {
        format!("{self:.17e}")
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn round_nearest(&self) -> Self {
        f64::round(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::domain("sqrt", format!("negative argument {self}")));
        }
        Ok(f64::sqrt(*self))
    }
    fn ln(&self) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::domain("ln", format!("non-positive argument {self}")));
        }
        Ok(f64::ln(*self))
    }
    fn div_checked(&self, d: &Self) -> Result<Self> {
        if *d == 0.0 {
            return Err(Error::domain("div", "division by zero"));
        }
        Ok(self / d)
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn max_with(&self, o: &Self) -> Self {
        f64::max(*self, *o)
    }
    fn min_with(&self, o: &Self) -> Self {
        f64::min(*self, *o)
    }
}

/// Precision descriptor for one run. Rounding is fixed to round-to-nearest;
/// only the mantissa width varies. 53 bits selects the hardware backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarContext {
    bits: u32,
}

impl ScalarContext {
    pub const HARDWARE_BITS: u32 = 53;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < 2 || bits > 16_000_000 {
            return Err(Error::Precision(bits));
        }
        Ok(ScalarContext { bits })
    }

    pub fn mantissa_bits(&self) -> u32 {
        self.bits
    }

    pub fn is_hardware(&self) -> bool {
        self.bits == Self::HARDWARE_BITS
    }

    /// Make this context the active one on the calling thread.
    pub fn activate(&self) {
        super::mp::set_thread_precision(self.bits);
    }

    /// Significant decimal digits needed for bit-exact round trips.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_rounding_example() {
        let s = 0.1f64 + 0.2;
        assert_ne!(s, 0.3);
        assert!((s - 0.3).abs() <= 2f64.powi(-52));
    }

    #[test]
    fn trig_identities_at_zero() {
        let (s, c) = 0.0f64.sin_cos();
        assert_eq!(s, 0.0);
        assert_eq!(c, 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(Scalar::sqrt(&-1.0f64).is_err());
        assert!(Scalar::ln(&0.0f64).is_err());
        assert!(Scalar::ln(&-3.0f64).is_err());
        assert!(1.0f64.div_checked(&0.0).is_err());
        assert!(1.0f64.div_checked(&2.0).is_ok());
    }

    #[test]
    fn decimal_round_trip_is_exact() {
        for v in [0.1, std::f64::consts::PI, 1.0 / 3.0, 6.02e23, -4.9e-324] {
            let s = v.to_decimal_string();
            assert_eq!(f64::parse_decimal(&s).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn context_decimal_digits() {
        assert_eq!(ScalarContext::new(53).unwrap().decimal_digits(), 18);
        assert_eq!(ScalarContext::new(449).unwrap().decimal_digits(), 138);
        assert!(ScalarContext::new(1).is_err());
    }
}
