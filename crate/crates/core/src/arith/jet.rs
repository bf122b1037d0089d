use std::array;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use super::scalar::Scalar;

/// Truncated first-order jet: a value plus partial derivatives with respect
/// to `NV` declared independent directions (here up to three: β₀, γ₀, e).
/// Constants have `d ≡ 0`; all jets combined in one expression must share
/// `NV` and the active scalar context.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S, const NV: usize> {
    pub val: S,
    pub d: [S; NV],
}

impl<S: Scalar, const NV: usize> Jet<S, NV> {
    pub fn constant(val: S) -> Self {
        Jet { val, d: array::from_fn(|_| S::zero()) }
    }

    /// Jet of the `i`-th independent variable evaluated at `val`.
    pub fn variable(val: S, i: usize) -> Self {
        let mut d: [S; NV] = array::from_fn(|_| S::zero());
        d[i] = S::one();
        Jet { val, d }
    }

    pub fn scale(&self, s: &S) -> Self {
        Jet {
            val: self.val.clone() * s.clone(),
            d: array::from_fn(|i| self.d[i].clone() * s.clone()),
        }
    }

    pub fn div_checked(&self, rhs: &Self) -> Result<Self> {
        if rhs.val.is_zero() {
            return Err(Error::domain("jet div", "quotient with zero value part"));
        }
        Ok(self.clone() / rhs.clone())
    }

    pub fn sqrt(&self) -> Result<Self> {
        let r = self.val.sqrt()?;
        if r.is_zero() {
            return Err(Error::domain("jet sqrt", "derivative singular at zero"));
        }
        let half_inv = S::from_f64(0.5) / r.clone();
        Ok(Jet {
            val: r,
            d: array::from_fn(|i| self.d[i].clone() * half_inv.clone()),
        })
    }

    pub fn powi(&self, n: i32) -> Self {
        let p = self.val.powi(n);
        let chain = self.val.powi(n - 1) * S::from_f64(n as f64);
        Jet {
            val: p,
            d: array::from_fn(|i| self.d[i].clone() * chain.clone()),
        }
    }
}

impl<S: Scalar, const NV: usize> Add for Jet<S, NV> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Jet {
            val: self.val + rhs.val,
            d: array::from_fn(|i| self.d[i].clone() + rhs.d[i].clone()),
        }
    }
}

impl<S: Scalar, const NV: usize> Sub for Jet<S, NV> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Jet {
            val: self.val - rhs.val,
            d: array::from_fn(|i| self.d[i].clone() - rhs.d[i].clone()),
        }
    }
}

impl<S: Scalar, const NV: usize> Mul for Jet<S, NV> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // (ab).d_i = a.val·b.d_i + a.d_i·b.val
        Jet {
            val: self.val.clone() * rhs.val.clone(),
            d: array::from_fn(|i| {
                self.val.clone() * rhs.d[i].clone() + self.d[i].clone() * rhs.val.clone()
            }),
        }
    }
}

impl<S: Scalar, const NV: usize> Div for Jet<S, NV> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q = self.val.clone() / rhs.val.clone();
        Jet {
            val: q.clone(),
            d: array::from_fn(|i| {
                (self.d[i].clone() - q.clone() * rhs.d[i].clone()) / rhs.val.clone()
            }),
        }
    }
}

impl<S: Scalar, const NV: usize> Neg for Jet<S, NV> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet { val: -self.val, d: self.d.map(|x| -x) }
    }
}

/// Common interface over plain scalars and jets, so the vector fields and
/// Taylor recurrences are written once and run either as point evaluations
/// or as variational (jet-transport) evaluations.
pub trait Element<S: Scalar>:
    Clone + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_scalar(s: S) -> Self;
    fn val(&self) -> &S;
    fn scale_s(&self, s: &S) -> Self;
    /// self += a*b
    fn mul_acc(&mut self, a: &Self, b: &Self);
    /// self += e*s with scalar s
    fn scale_acc(&mut self, e: &Self, s: &S);
    fn recip(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Result<Self>;
    /// Max of |value| and all |partials|; used by integrator step control.
    fn max_abs(&self) -> S;
    fn is_finite(&self) -> bool;
}

impl<S: Scalar> Element<S> for S {
    fn zero() -> Self {
        S::zero()
    }
    fn one() -> Self {
        S::one()
    }
    fn from_scalar(s: S) -> Self {
        s
    }
    fn val(&self) -> &S {
        self
    }
    fn scale_s(&self, s: &S) -> Self {
        self.clone() * s.clone()
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        Scalar::mul_acc(self, a, b);
    }
    fn scale_acc(&mut self, e: &Self, s: &S) {
        Scalar::mul_acc(self, e, s);
    }
    fn recip(&self) -> Self {
        S::one() / self.clone()
    }
    fn sin_cos(&self) -> (Self, Self) {
        Scalar::sin_cos(self)
    }
    fn exp(&self) -> Self {
        Scalar::exp(self)
    }
    fn sqrt(&self) -> Result<Self> {
        Scalar::sqrt(self)
    }
    fn max_abs(&self) -> S {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        Scalar::is_finite(self)
    }
}

impl<S: Scalar, const NV: usize> Element<S> for Jet<S, NV> {
    fn zero() -> Self {
        Jet::constant(S::zero())
    }
    fn one() -> Self {
        Jet::constant(S::one())
    }
    fn from_scalar(s: S) -> Self {
        Jet::constant(s)
    }
    fn val(&self) -> &S {
        &self.val
    }
    fn scale_s(&self, s: &S) -> Self {
        self.scale(s)
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        self.val.mul_acc(&a.val, &b.val);
        for i in 0..NV {
            self.d[i].mul_acc(&a.val, &b.d[i]);
            self.d[i].mul_acc(&a.d[i], &b.val);
        }
    }
    fn scale_acc(&mut self, e: &Self, s: &S) {
        self.val.mul_acc(&e.val, s);
        for i in 0..NV {
            self.d[i].mul_acc(&e.d[i], s);
        }
    }
    fn recip(&self) -> Self {
        let r = S::one() / self.val.clone();
        let m = -(r.clone() * r.clone());
        Jet {
            val: r,
            d: array::from_fn(|i| self.d[i].clone() * m.clone()),
        }
    }
    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = Scalar::sin_cos(&self.val);
        let sj = Jet {
            val: s.clone(),
            d: array::from_fn(|i| self.d[i].clone() * c.clone()),
        };
        let cj = Jet {
            val: c,
            d: array::from_fn(|i| -(self.d[i].clone() * s.clone())),
        };
        (sj, cj)
    }
    fn exp(&self) -> Self {
        let e = Scalar::exp(&self.val);
        Jet {
            val: e.clone(),
            d: array::from_fn(|i| self.d[i].clone() * e.clone()),
        }
    }
    fn sqrt(&self) -> Result<Self> {
        Jet::sqrt(self)
    }
    fn max_abs(&self) -> S {
        let mut m = self.val.abs();
        for i in 0..NV {
            m = m.max_with(&self.d[i].abs());
        }
        m
    }
    fn is_finite(&self) -> bool {
        Scalar::is_finite(&self.val) && self.d.iter().all(|x| Scalar::is_finite(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type J3 = Jet<f64, 3>;
    type J1 = Jet<f64, 1>;

    #[test]
    fn product_rule() {
        let a = J3 { val: 2.0, d: [1.0, 0.0, 0.0] };
        let b = J3 { val: 3.0, d: [0.0, 1.0, 0.0] };
        let p = a * b;
        assert_eq!(p.val, 6.0);
        assert_eq!(p.d, [3.0, 2.0, 0.0]);
    }

    #[test]
    fn self_quotient_is_one() {
        let a = J1 { val: 1.7, d: [1.0] };
        let q = a.clone() / a;
        assert_eq!(q.val, 1.0);
        assert_eq!(q.d, [0.0]);
    }

    #[test]
    fn quotient_matches_finite_differences() {
        // f(x, e) = x/e at x=1.5, e=0.5; oracle: central differences, h=1e-6.
        let a = J3 { val: 1.5, d: [1.0, 0.0, 0.0] };
        let b = J3 { val: 0.5, d: [0.0, 0.0, 1.0] };
        let q = a / b;
        assert_eq!(q.val, 3.0);
        let h = 1e-6;
        let dx = ((1.5 + h) / 0.5 - (1.5 - h) / 0.5) / (2.0 * h);
        let de = (1.5 / (0.5 + h) - 1.5 / (0.5 - h)) / (2.0 * h);
        assert!((q.d[0] - dx).abs() < 1e-9);
        assert!((q.d[1]).abs() == 0.0);
        assert!((q.d[2] - de).abs() < 1e-4 * de.abs());
        assert!((q.d[2] - (-6.0)).abs() < 1e-9);
    }

    #[test]
    fn elementary_chain_rules() {
        let (s, c) = Element::<f64>::sin_cos(&J1 { val: 0.0, d: [1.0] });
        assert_eq!((s.val, s.d), (0.0, [1.0]));
        assert_eq!((c.val, c.d), (1.0, [0.0]));

        let e = Element::<f64>::exp(&J1 { val: 0.0, d: [2.0] });
        assert_eq!((e.val, e.d), (1.0, [2.0]));

        let r = J1 { val: 4.0, d: [1.0] }.sqrt().unwrap();
        assert_eq!((r.val, r.d), (2.0, [0.25]));
    }

    #[test]
    fn division_by_zero_value_part() {
        let a = J1 { val: 1.0, d: [0.0] };
        let b = J1 { val: 0.0, d: [1.0] };
        assert!(a.div_checked(&b).is_err());
    }

    #[test]
    fn constant_jets_reproduce_scalar_arithmetic() {
        let xs = [0.3, -1.7, 2.25, 9.5e-3];
        for &x in &xs {
            for &y in &xs {
                let (a, b) = (J3::constant(x), J3::constant(y));
                assert_eq!((a.clone() * b.clone()).val, x * y);
                assert_eq!((a.clone() + b.clone()).val, x + y);
                assert_eq!((a.clone() - b.clone()).val, x - y);
                assert_eq!((a / b).val, x / y);
            }
        }
    }
}
