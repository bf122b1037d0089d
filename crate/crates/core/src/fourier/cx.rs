use crate::arith::Scalar;
use std::ops::{Add, Mul, Neg, Sub};

/// Complex number over any [`Scalar`] backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Cx<S> {
    pub fn new(re: S, im: S) -> Self {
        Cx { re, im }
    }

    pub fn zero() -> Self {
        Cx { re: S::zero(), im: S::zero() }
    }

    pub fn from_re(re: S) -> Self {
        Cx { re, im: S::zero() }
    }

    /// e^{iθ}
    pub fn expi(theta: &S) -> Self {
        let (s, c) = theta.sin_cos();
        Cx { re: c, im: s }
    }

    pub fn conj(&self) -> Self {
        Cx { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Cx { re: self.re.clone() * s.clone(), im: self.im.clone() * s.clone() }
    }

    pub fn norm_sqr(&self) -> S {
        let mut acc = self.re.clone() * self.re.clone();
        acc.mul_acc(&self.im, &self.im);
        acc
    }

    pub fn abs(&self) -> S {
        self.norm_sqr().sqrt().expect("norm_sqr is nonnegative")
    }
}

impl<S: Scalar> Add for Cx<S> {
    type Output = Cx<S>;
    fn add(self, rhs: Cx<S>) -> Cx<S> {
        Cx { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<S: Scalar> Sub for Cx<S> {
    type Output = Cx<S>;
    fn sub(self, rhs: Cx<S>) -> Cx<S> {
        Cx { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<S: Scalar> Mul for Cx<S> {
    type Output = Cx<S>;
    fn mul(self, rhs: Cx<S>) -> Cx<S> {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let mut im = self.re * rhs.im;
        im.mul_acc(&self.im, &rhs.re);
        Cx { re, im }
    }
}

impl<S: Scalar> Neg for Cx<S> {
    type Output = Cx<S>;
    fn neg(self) -> Cx<S> {
        Cx { re: -self.re, im: -self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_matches_hand_expansion() {
        let a = Cx::new(1.0f64, 2.0);
        let b = Cx::new(3.0f64, -4.0);
        let p = a * b;
        assert_eq!((p.re, p.im), (11.0, 2.0));
    }

    #[test]
    fn expi_lies_on_unit_circle() {
        let z = Cx::expi(&0.7f64);
        assert!((z.norm_sqr() - 1.0).abs() < 4.0 * f64::EPSILON);
        assert!((z.re - 0.7f64.cos()).abs() < f64::EPSILON);
    }

    #[test]
    fn conjugate_product_is_norm() {
        let a = Cx::new(0.3f64, -1.1);
        let p = a.clone() * a.conj();
        assert!((p.re - a.norm_sqr()).abs() < 4.0 * f64::EPSILON);
        assert!(p.im.abs() < 4.0 * f64::EPSILON);
    }
}
