//! Taylor-series recurrences for the two spin-orbit vector fields.  Each
//! implementation grows its auxiliary series order by order; all scratch
//! quantities are [`Element`]s, so the same code propagates plain scalars or
//! first-order jets in (β₀, γ₀, e).

use super::series::{conv_coeff, recip_coeff, sincos_coeff};
use super::taylor::SeriesField;
use crate::arith::{Element, Scalar};
use crate::error::Result;
use crate::model::{kepler_solve_el, nbar_lbar};
use std::marker::PhantomData;

/// Full dissipative model in the eccentric anomaly (state β, γ):
///   β' = γ,  γ' = γ·a·e sin u − ε·a·s(β;u,e) − η·a⁵(γ − a√(1−e²)),
/// a = 1/(1 − e cos u).
pub struct FullField<S, E> {
    pub eps: S,
    pub eta: S,
    pub ecc: E,
    _ph: PhantomData<S>,
}

impl<S: Scalar, E: Element<S>> FullField<S, E> {
    pub fn new(eps: S, eta: S, ecc: E) -> Self {
        FullField { eps, eta, ecc, _ph: PhantomData }
    }
}

impl<S: Scalar, E: Element<S>> SeriesField<S, E> for FullField<S, E> {
    fn dim(&self) -> usize {
        2
    }

    fn series(&self, u0: &S, z0: &[E], order: usize) -> Result<Vec<Vec<E>>> {
        let n = order;
        let kappa = (E::one() - self.ecc.clone() * self.ecc.clone()).sqrt()?;
        let eps_on = !self.eps.is_zero();
        let eta_on = !self.eta.is_zero();
        let two = S::from_f64(2.0);

        let (su0, cu0) = Scalar::sin_cos(u0);
        let mut su = vec![E::from_scalar(su0)];
        let mut cu = vec![E::from_scalar(cu0)];
        let mut beta = vec![z0[0].clone()];
        let mut gamma = vec![z0[1].clone()];
        let (mut dser, mut a, mut a2, mut a4, mut a5) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let (mut b2, mut s2b, mut c2b) = (Vec::new(), Vec::new(), Vec::new());
        let (mut cme, mut cf, mut sf) = (Vec::new(), Vec::new(), Vec::new());
        let (mut qc, mut qs, mut sfun) = (Vec::new(), Vec::new(), Vec::new());
        let (mut ga, mut drag) = (Vec::new(), Vec::new());

        for k in 0..=n {
            if k > 0 {
                // independent-variable sine/cosine: s' = c, c' = −s
                let invk = S::one() / S::from_usize(k);
                su.push(cu[k - 1].scale_s(&invk));
                cu.push(-su[k - 1].scale_s(&invk));
            }
            let delta0 = if k == 0 { E::one() } else { E::zero() };
            dser.push(delta0.clone() - self.ecc.clone() * cu[k].clone());
            a.push(if k == 0 { dser[0].recip() } else { recip_coeff(&dser, &a, k) });
            ga.push(conv_coeff(&gamma, &a, k));
            if eta_on {
                a2.push(conv_coeff(&a, &a, k));
                a4.push(conv_coeff(&a2, &a2, k));
                a5.push(conv_coeff(&a4, &a, k));
                drag.push(gamma[k].clone() - kappa.clone() * a[k].clone());
            }
            if eps_on {
                b2.push(beta[k].scale_s(&two));
                if k == 0 {
                    let (s0, c0) = b2[0].sin_cos();
                    s2b.push(s0);
                    c2b.push(c0);
                } else {
                    let (sk, ck) = sincos_coeff(&b2, &s2b, &c2b, k);
                    s2b.push(sk);
                    c2b.push(ck);
                }
                cme.push(if k == 0 { cu[0].clone() - self.ecc.clone() } else { cu[k].clone() });
                cf.push(conv_coeff(&cme, &a, k));
                sf.push(conv_coeff(&su, &a, k) * kappa.clone());
                qc.push(conv_coeff(&cf, &cf, k).scale_s(&two) - delta0);
                qs.push(conv_coeff(&cf, &sf, k).scale_s(&two));
                sfun.push(conv_coeff(&s2b, &qc, k) - conv_coeff(&c2b, &qs, k));
            }

            if k < n {
                let mut rhs = conv_coeff(&ga, &su, k) * self.ecc.clone();
                if eps_on {
                    rhs = rhs - conv_coeff(&a, &sfun, k).scale_s(&self.eps);
                }
                if eta_on {
                    rhs = rhs - conv_coeff(&a5, &drag, k).scale_s(&self.eta);
                }
                let inv = S::one() / S::from_usize(k + 1);
                beta.push(gamma[k].scale_s(&inv));
                gamma.push(rhs.scale_s(&inv));
            }
        }
        Ok(vec![beta, gamma])
    }
}

/// Averaged dissipative model in physical time (state x, y):
///   ẋ = y,  ẏ = −ε(a/r(t))³ s(x; u(t), e) − η(L̄y − N̄),
/// with the eccentric anomaly carried as an auxiliary series U(t) solving
/// U' = a = 1/(1 − e cos U), seeded by a Kepler solve at each step.
pub struct AveragedField<S, E> {
    pub eps: S,
    pub eta: S,
    pub ecc: E,
    _ph: PhantomData<S>,
}

impl<S: Scalar, E: Element<S>> AveragedField<S, E> {
    pub fn new(eps: S, eta: S, ecc: E) -> Self {
        AveragedField { eps, eta, ecc, _ph: PhantomData }
    }
}

impl<S: Scalar, E: Element<S>> SeriesField<S, E> for AveragedField<S, E> {
    fn dim(&self) -> usize {
        2
    }

    fn series(&self, t0: &S, z0: &[E], order: usize) -> Result<Vec<Vec<E>>> {
        let n = order;
        let kappa = (E::one() - self.ecc.clone() * self.ecc.clone()).sqrt()?;
        let (nbar, lbar) = nbar_lbar(&self.ecc)?;
        let eps_on = !self.eps.is_zero();
        let eta_on = !self.eta.is_zero();
        let two = S::from_f64(2.0);

        let mut uu = vec![kepler_solve_el(t0, &self.ecc)?];
        let mut x = vec![z0[0].clone()];
        let mut y = vec![z0[1].clone()];
        let (mut su, mut cu) = (Vec::new(), Vec::new());
        let (mut dser, mut a, mut a2, mut a3) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let (mut x2, mut s2x, mut c2x) = (Vec::new(), Vec::new(), Vec::new());
        let (mut cme, mut cf, mut sf) = (Vec::new(), Vec::new(), Vec::new());
        let (mut qc, mut qs, mut sfun) = (Vec::new(), Vec::new(), Vec::new());

        for k in 0..=n {
            if k == 0 {
                let (s0, c0) = uu[0].sin_cos();
                su.push(s0);
                cu.push(c0);
            } else {
                // dependent-variable sine/cosine driven by the U series
                let (sk, ck) = sincos_coeff(&uu, &su, &cu, k);
                su.push(sk);
                cu.push(ck);
            }
            let delta0 = if k == 0 { E::one() } else { E::zero() };
            dser.push(delta0.clone() - self.ecc.clone() * cu[k].clone());
            a.push(if k == 0 { dser[0].recip() } else { recip_coeff(&dser, &a, k) });
            // U' = a keeps the anomaly series one order ahead of its users
            uu.push(a[k].scale_s(&(S::one() / S::from_usize(k + 1))));

            if eps_on {
                a2.push(conv_coeff(&a, &a, k));
                a3.push(conv_coeff(&a2, &a, k));
                x2.push(x[k].scale_s(&two));
                if k == 0 {
                    let (s0, c0) = x2[0].sin_cos();
                    s2x.push(s0);
                    c2x.push(c0);
                } else {
                    let (sk, ck) = sincos_coeff(&x2, &s2x, &c2x, k);
                    s2x.push(sk);
                    c2x.push(ck);
                }
                cme.push(if k == 0 { cu[0].clone() - self.ecc.clone() } else { cu[k].clone() });
                cf.push(conv_coeff(&cme, &a, k));
                sf.push(conv_coeff(&su, &a, k) * kappa.clone());
                qc.push(conv_coeff(&cf, &cf, k).scale_s(&two) - delta0);
                qs.push(conv_coeff(&cf, &sf, k).scale_s(&two));
                sfun.push(conv_coeff(&s2x, &qc, k) - conv_coeff(&c2x, &qs, k));
            }

            if k < n {
                let mut rhs = E::zero();
                if eps_on {
                    rhs = rhs - conv_coeff(&a3, &sfun, k).scale_s(&self.eps);
                }
                if eta_on {
                    let mut diss = y[k].clone() * lbar.clone();
                    if k == 0 {
                        diss = diss - nbar.clone();
                    }
                    rhs = rhs - diss.scale_s(&self.eta);
                }
                let inv = S::one() / S::from_usize(k + 1);
                x.push(y[k].scale_s(&inv));
                y.push(rhs.scale_s(&inv));
            }
        }
        Ok(vec![x, y])
    }
}
