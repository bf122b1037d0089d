//! Per-order Taylor-series recurrences over [`Element`] coefficients.
//!
//! Each helper produces coefficient k of a derived series given all earlier
//! coefficients; the field implementations grow every auxiliary series in
//! lockstep, one order at a time.

use crate::arith::{Element, Scalar};

/// Coefficient k of the Cauchy product a·b.
pub fn conv_coeff<S: Scalar, E: Element<S>>(a: &[E], b: &[E], k: usize) -> E {
    let mut acc = E::zero();
    for j in 0..=k {
        acc.mul_acc(&a[j], &b[k - j]);
    }
    acc
}

/// Coefficient k ≥ 1 of (sin g, cos g) given the argument series g and the
/// lower-order sine/cosine coefficients:
///   s_k = (1/k) Σ_{j=1..k} j·g_j·c_{k−j},  c_k = −(1/k) Σ_{j=1..k} j·g_j·s_{k−j}.
pub fn sincos_coeff<S: Scalar, E: Element<S>>(g: &[E], s: &[E], c: &[E], k: usize) -> (E, E) {
    let mut sa = E::zero();
    let mut ca = E::zero();
    for j in 1..=k {
        let w = g[j].scale_s(&S::from_usize(j));
        sa.mul_acc(&w, &c[k - j]);
        ca.mul_acc(&w, &s[k - j]);
    }
    let invk = S::one() / S::from_usize(k);
    (sa.scale_s(&invk), -ca.scale_s(&invk))
}

/// Coefficient k ≥ 1 of a = 1/d given a[0] = 1/d[0]:
///   a_k = −a₀ Σ_{j=1..k} d_j·a_{k−j}.
pub fn recip_coeff<S: Scalar, E: Element<S>>(d: &[E], a: &[E], k: usize) -> E {
    let mut acc = E::zero();
    for j in 1..=k {
        acc.mul_acc(&d[j], &a[k - j]);
    }
    -(acc * a[0].clone())
}

/// Coefficient k ≥ 1 of exp g:  E_k = (1/k) Σ_{j=1..k} j·g_j·E_{k−j}.
pub fn exp_coeff<S: Scalar, E: Element<S>>(g: &[E], ex: &[E], k: usize) -> E {
    let mut acc = E::zero();
    for j in 1..=k {
        acc.mul_acc(&g[j].scale_s(&S::from_usize(j)), &ex[k - j]);
    }
    acc.scale_s(&(S::one() / S::from_usize(k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_matches_polynomial_product() {
        // (1 + 2t + 3t²)(4 + 5t) = 4 + 13t + 22t² + 15t³
        let a = [1.0f64, 2.0, 3.0, 0.0];
        let b = [4.0f64, 5.0, 0.0, 0.0];
        let expect = [4.0, 13.0, 22.0, 15.0];
        for k in 0..4 {
            assert_eq!(conv_coeff(&a, &b, k), expect[k]);
        }
    }

    #[test]
    fn sincos_series_of_affine_argument() {
        // g(t) = 0.4 + 1.3t: sin g has coefficients 1.3^k·sin^{(k)}(0.4)/k!
        let g = [0.4f64, 1.3, 0.0, 0.0, 0.0, 0.0];
        let mut s = vec![0.4f64.sin()];
        let mut c = vec![0.4f64.cos()];
        for k in 1..6 {
            let (sk, ck) = sincos_coeff(&g, &s, &c, k);
            s.push(sk);
            c.push(ck);
        }
        let mut fact = 1.0;
        for k in 0..6 {
            if k > 0 {
                fact *= k as f64;
            }
            let pw = 1.3f64.powi(k as i32) / fact;
            let (ds, dc) = match k % 4 {
                0 => (0.4f64.sin(), 0.4f64.cos()),
                1 => (0.4f64.cos(), -0.4f64.sin()),
                2 => (-0.4f64.sin(), -0.4f64.cos()),
                _ => (-0.4f64.cos(), 0.4f64.sin()),
            };
            assert!((s[k] - pw * ds).abs() < 1e-14);
            assert!((c[k] - pw * dc).abs() < 1e-14);
        }
    }

    #[test]
    fn reciprocal_series_of_two_plus_t() {
        // 1/(2+t) = Σ (−1)^k t^k / 2^{k+1}
        let d = [2.0f64, 1.0, 0.0, 0.0, 0.0];
        let mut a = vec![0.5f64];
        for k in 1..5 {
            let ak = recip_coeff(&d, &a, k);
            a.push(ak);
        }
        for (k, v) in a.iter().enumerate() {
            let expect = if k % 2 == 0 { 1.0 } else { -1.0 } / 2f64.powi(k as i32 + 1);
            assert!((v - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn exponential_series_of_affine_argument() {
        // exp(0.3 + t): coefficients e^{0.3}/k!
        let g = [0.3f64, 1.0, 0.0, 0.0, 0.0];
        let mut ex = vec![0.3f64.exp()];
        for k in 1..5 {
            let ek = exp_coeff(&g, &ex, k);
            ex.push(ek);
        }
        let mut fact = 1.0;
        for (k, v) in ex.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((v - 0.3f64.exp() / fact).abs() < 1e-14);
        }
    }

    #[test]
    fn recurrences_work_on_jets() {
        use crate::arith::Jet;
        // d/dx of the series product must equal product-rule combination
        let a = [Jet::<f64, 1>::variable(2.0, 0), Jet::constant(1.0)];
        let b = [Jet::<f64, 1>::variable(2.0, 0), Jet::constant(-3.0)];
        // (x + t)(x − 3t) at order 1: coefficient = x·(−3) + 1·x = −2x → d/dx = −2
        let c1 = conv_coeff(&a, &b, 1);
        assert_eq!(c1.val, -4.0);
        assert_eq!(c1.d[0], -2.0);
    }
}
