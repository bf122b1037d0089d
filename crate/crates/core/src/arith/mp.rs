use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use super::scalar::Scalar;

thread_local! {
    static PREC: Cell<u32> = const { Cell::new(53) };
}

/// Set the working precision (mantissa bits) for MpFloat values created on
/// the calling thread. Worker threads must call this before first use; the
/// batch helpers in `arith::parallel` do it automatically.
pub fn set_thread_precision(bits: u32) {
    PREC.with(|p| p.set(bits.max(2)));
}

pub fn thread_precision() -> u32 {
    PREC.with(|p| p.get())
}

/// Run `f` with the thread precision temporarily set to `bits`.
pub fn with_precision<R>(bits: u32, f: impl FnOnce() -> R) -> R {
    let old = thread_precision();
    set_thread_precision(bits);
    let out = f();
    set_thread_precision(old);
    out
}

fn prec() -> u32 {
    thread_precision()
}

/// Arbitrary-precision binary float backed by MPFR, with the mantissa width
/// taken from the per-thread context at construction time.
#[derive(Debug, Clone)]
pub struct MpFloat(pub(crate) Float);

impl MpFloat {
    pub fn from_float(f: Float) -> Self {
        MpFloat(f)
    }
    pub fn as_float(&self) -> &Float {
        &self.0
    }
    pub fn prec_bits(&self) -> u32 {
        self.0.prec()
    }
}

impl fmt::Display for MpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl PartialEq for MpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for MpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for MpFloat {
    type Output = MpFloat;
    fn add(self, rhs: MpFloat) -> MpFloat {
        MpFloat(Float::with_val(prec(), &self.0 + &rhs.0))
    }
}

impl Sub for MpFloat {
    type Output = MpFloat;
    fn sub(self, rhs: MpFloat) -> MpFloat {
        MpFloat(Float::with_val(prec(), &self.0 - &rhs.0))
    }
}

impl Mul for MpFloat {
    type Output = MpFloat;
    fn mul(self, rhs: MpFloat) -> MpFloat {
        MpFloat(Float::with_val(prec(), &self.0 * &rhs.0))
    }
}

impl Div for MpFloat {
    type Output = MpFloat;
    fn div(self, rhs: MpFloat) -> MpFloat {
        MpFloat(Float::with_val(prec(), &self.0 / &rhs.0))
    }
}

impl Neg for MpFloat {
    type Output = MpFloat;
    fn neg(self) -> MpFloat {
        MpFloat(-self.0)
    }
}

impl Scalar for MpFloat {
    fn from_f64(v: f64) -> Self {
        MpFloat(Float::with_val(prec(), v))
    }
    fn from_usize(v: usize) -> Self {
        MpFloat(Float::with_val(prec(), v as u64))
    }
    fn parse_decimal(s: &str) -> Result<Self> {
        let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        Ok(MpFloat(Float::with_val(prec(), parsed)))
    }
    fn zero() -> Self {
        MpFloat(Float::new(prec()))
    }
    fn one() -> Self {
        MpFloat(Float::with_val(prec(), 1u32))
    }
    fn pi() -> Self {
        MpFloat(Float::with_val(prec(), Constant::Pi))
    }
    fn mantissa_bits() -> u32 {
        prec()
    }
    fn epsilon() -> Self {
        let p = prec();
        MpFloat(Float::with_val(p, 1u32) >> (p - 1))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn to_decimal_string(&self) -> String {
        let digits = (self.0.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
        format!("{:.*e}", digits - 1, self.0)
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn abs(&self) -> Self {
        MpFloat(self.0.clone().abs())
    }
    fn floor(&self) -> Self {
        MpFloat(self.0.clone().floor())
    }
    fn round_nearest(&self) -> Self {
        MpFloat(self.0.clone().round())
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(prec()));
        (MpFloat(s), MpFloat(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        MpFloat(self.0.clone().atan2(&x.0))
    }
    fn exp(&self) -> Self {
        MpFloat(self.0.clone().exp())
    }
    fn powi(&self, n: i32) -> Self {
        MpFloat(self.0.clone().pow(n))
    }
    fn sqrt(&self) -> Result<Self> {
        if self.0.is_sign_negative() && !self.0.is_zero() {
            return Err(Error::domain("sqrt", format!("negative argument {}", self.0)));
        }
        Ok(MpFloat(self.0.clone().sqrt()))
    }
    fn ln(&self) -> Result<Self> {
        if self.0.is_zero() || self.0.is_sign_negative() {
            return Err(Error::domain("ln", format!("non-positive argument {}", self.0)));
        }
        Ok(MpFloat(self.0.clone().ln()))
    }
    fn div_checked(&self, d: &Self) -> Result<Self> {
        if d.0.is_zero() {
            return Err(Error::domain("div", "division by zero"));
        }
        Ok(MpFloat(Float::with_val(prec(), &self.0 / &d.0)))
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        self.0 = a.0.clone().mul_add(&b.0, &self.0);
    }
    fn max_with(&self, o: &Self) -> Self {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }
    fn min_with(&self, o: &Self) -> Self {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }
}
