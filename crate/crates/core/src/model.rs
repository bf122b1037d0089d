//! Closed-form spin-orbit formulas: Kepler geometry, the two vector fields
//! (full model in the eccentric anomaly, averaged model in time), the
//! averaged-torque coefficients, the analytic conformal factor, and the
//! Hamiltonian diagnostic.
//!
//! Units: semimajor axis a = 1 and mean motion n = 1, so the orbital period
//! is 2π and frequencies are revolutions per orbital period.

use crate::arith::{Element, Scalar};
use crate::error::{Error, Result};

/// One problem instance: ẍ + ε(a/r)³ sin(2x−2f) = −η((a/r)⁶ẋ − (a/r)⁶ḟ)
/// with Keplerian r(t), f(t) of eccentricity `ecc`, and target frequency
/// `omega` for the attractor.
#[derive(Debug, Clone)]
pub struct ModelParams<S> {
    pub eps: S,
    pub eta: S,
    pub ecc: S,
    pub omega: S,
}

impl<S: Scalar> ModelParams<S> {
    pub fn new(eps: S, eta: S, ecc: S, omega: S) -> Result<Self> {
        let p = ModelParams { eps, eta, ecc, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ecc < S::zero() || self.ecc >= S::one() {
            return Err(Error::domain("ModelParams", format!("ecc {} outside [0,1)", self.ecc)));
        }
        if self.eps < S::zero() {
            return Err(Error::domain("ModelParams", "eps must be nonnegative"));
        }
        if self.eta < S::zero() {
            return Err(Error::domain("ModelParams", "eta must be nonnegative"));
        }
        Ok(())
    }

    pub fn with_ecc(&self, ecc: S) -> Self {
        ModelParams { ecc, ..self.clone() }
    }

    pub fn with_eps(&self, eps: S) -> Self {
        ModelParams { eps, ..self.clone() }
    }
}

/// Kepler angles at one instant: t = u − e sin u, plus the true-anomaly
/// cosine/sine and the radius ratio r/a = 1 − e cos u.
#[derive(Debug, Clone)]
pub struct KeplerState<S> {
    pub u: S,
    pub t: S,
    pub cosf: S,
    pub sinf: S,
    pub r_over_a: S,
}

fn check_ecc<S: Scalar>(e: &S) -> Result<()> {
    if *e < S::zero() || *e >= S::one() {
        return Err(Error::domain("kepler", format!("eccentricity {e} outside [0,1)")));
    }
    Ok(())
}

/// Solve Kepler's equation t = u − e sin u for the eccentric anomaly.
///
/// Safeguarded Newton iteration seeded with u₀ = t + e sin t and bracketed by
/// [t−e, t+e]; bisection takes over whenever a Newton step leaves the bracket.
/// Continuous in t with u(t+2π) = u(t) + 2π.
pub fn kepler_solve<S: Scalar>(t: &S, e: &S) -> Result<S> {
    check_ecc(e)?;
    let two_pi = S::two_pi();
    // reduce to tr ∈ [−π, π); the integer multiple is restored at the end
    let k = ((t.clone() + S::pi()) / two_pi.clone()).floor();
    let tr = t.clone() - k.clone() * two_pi.clone();

    let mut lo = tr.clone() - e.clone();
    let mut hi = tr.clone() + e.clone();
    let (st, _) = tr.sin_cos();
    let mut u = tr.clone() + e.clone() * st;
    if u < lo || u > hi {
        u = (lo.clone() + hi.clone()) * S::from_f64(0.5);
    }
    let tol = S::epsilon() * (S::one() + tr.abs() + e.clone());
    let half = S::from_f64(0.5);
    for _ in 0..100 {
        let (su, cu) = u.sin_cos();
        let g = u.clone() - e.clone() * su - tr.clone();
        if g.abs() <= tol {
            break;
        }
        if g > S::zero() {
            hi = u.clone();
        } else {
            lo = u.clone();
        }
        let dg = S::one() - e.clone() * cu;
        let un = u.clone() - g / dg;
        u = if un < lo || un > hi {
            (lo.clone() + hi.clone()) * half.clone()
        } else {
            un
        };
    }
    Ok(u + k * two_pi)
}

/// Kepler solve lifted to jet arguments in the eccentricity:
/// du/de = sin u / (1 − e cos u) at fixed t.
pub fn kepler_solve_el<S: Scalar, E: Element<S>>(t: &S, ecc: &E) -> Result<E> {
    let u0 = kepler_solve(t, ecc.val())?;
    let (su, cu) = Scalar::sin_cos(&u0);
    let slope = su / (S::one() - ecc.val().clone() * cu);
    let de = ecc.clone() - E::from_scalar(ecc.val().clone());
    Ok(E::from_scalar(u0) + de.scale_s(&slope))
}

pub fn kepler_state<S: Scalar>(t: &S, e: &S) -> Result<KeplerState<S>> {
    let u = kepler_solve(t, e)?;
    let (cosf, sinf, r_over_a) = true_anomaly_terms(&u, e)?;
    Ok(KeplerState { u, t: t.clone(), cosf, sinf, r_over_a })
}

/// cos f, sin f, r/a from the eccentric anomaly:
/// cos f = (cos u − e)/(1 − e cos u), sin f = √(1−e²) sin u/(1 − e cos u).
pub fn true_anomaly_terms<S: Scalar, E: Element<S>>(u: &E, e: &E) -> Result<(E, E, E)> {
    check_ecc(e.val())?;
    let (su, cu) = u.sin_cos();
    let r_over_a = E::one() - e.clone() * cu.clone();
    let a = r_over_a.recip();
    let kappa = (E::one() - e.clone() * e.clone()).sqrt()?;
    let cosf = (cu - e.clone()) * a.clone();
    let sinf = kappa * su * a;
    Ok((cosf, sinf, r_over_a))
}

/// The torque angle functions
///   s = sin 2x (2cos²f − 1) − cos 2x · 2 cos f sin f = sin(2x − 2f),
///   c = cos 2x (2cos²f − 1) + sin 2x · 2 cos f sin f = cos(2x − 2f),
/// written without evaluating f itself, so they stay polynomial in the
/// Kepler terms; ∂s/∂x = 2c, ∂c/∂x = −2s.
pub fn sc_functions<S: Scalar, E: Element<S>>(x: &E, u: &E, e: &E) -> Result<(E, E)> {
    let (cosf, sinf, _) = true_anomaly_terms(u, e)?;
    let two = S::from_f64(2.0);
    let (s2x, c2x) = x.scale_s(&two).sin_cos();
    let qc = cosf.clone().scale_s(&two) * cosf.clone() - E::one();
    let qs = cosf.scale_s(&two) * sinf;
    let s = s2x.clone() * qc.clone() - c2x.clone() * qs.clone();
    let c = c2x * qc + s2x * qs;
    Ok((s, c))
}

/// Full dissipative model in the eccentric anomaly u (a = 1/(1 − e cos u)):
///   β' = γ,
///   γ' = γ·a·e sin u − ε·a·s(β;u,e) − η·a⁵(γ − a√(1−e²)).
/// Jets are accepted in every state/parameter slot via `Element`.
pub fn field_full_u<S: Scalar, E: Element<S>>(
    u: &E,
    beta: &E,
    gamma: &E,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(E, E)> {
    let (su, cu) = u.sin_cos();
    let a = (E::one() - ecc.clone() * cu).recip();
    let (s, _) = sc_functions(beta, u, ecc)?;
    let kappa = (E::one() - ecc.clone() * ecc.clone()).sqrt()?;
    let a2 = a.clone() * a.clone();
    let a5 = a2.clone() * a2 * a.clone();
    let drag = a5 * (gamma.clone() - a.clone() * kappa);
    let dgamma = gamma.clone() * a.clone() * ecc.clone() * su
        - (a * s).scale_s(eps)
        - drag.scale_s(eta);
    Ok((gamma.clone(), dgamma))
}

/// Averaged dissipative model in physical time t:
///   ẋ = y,
///   ẏ = −ε(a/r(t))³ sin(2x − 2f(t)) − η(L̄(e)·y − N̄(e)),
/// with r(t), f(t) through a Kepler solve at each evaluation.
pub fn field_averaged_t<S: Scalar, E: Element<S>>(
    t: &S,
    x: &E,
    y: &E,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(E, E)> {
    let u = kepler_solve_el(t, ecc)?;
    let (_, cu) = u.sin_cos();
    let a = (E::one() - ecc.clone() * cu).recip();
    let a3 = a.clone() * a.clone() * a;
    let (s, _) = sc_functions(x, &u, ecc)?;
    let (nbar, lbar) = nbar_lbar(ecc)?;
    let dy = -(a3 * s).scale_s(eps) - (y.clone() * lbar - nbar).scale_s(eta);
    Ok((y.clone(), dy))
}

/// Averaged-torque coefficients:
///   L̄(e) = (1 + 3e² + 3e⁴/8)/(1−e²)^{9/2},
///   N̄(e) = (1 + 15e²/2 + 45e⁴/8 + 5e⁶/16)/(1−e²)⁶.
pub fn nbar_lbar<S: Scalar, E: Element<S>>(e: &E) -> Result<(E, E)> {
    check_ecc(e.val())?;
    let e2 = e.clone() * e.clone();
    let e4 = e2.clone() * e2.clone();
    let e6 = e4.clone() * e2.clone();
    let om = E::one() - e2.clone();
    let om2 = om.clone() * om.clone();
    let om4 = om2.clone() * om2;
    let root = om.clone().sqrt()?;
    let lnum = E::one() + e2.clone().scale_s(&S::from_f64(3.0)) + e4.clone().scale_s(&S::from_f64(0.375));
    let lbar = lnum * (om4.clone() * root).recip();
    let nnum = E::one()
        + e2.scale_s(&S::from_f64(7.5))
        + e4.scale_s(&S::from_f64(5.625))
        + e6.scale_s(&S::from_f64(0.3125));
    let nbar = nnum * (om4 * om.clone() * om).recip();
    Ok((nbar, lbar))
}

/// ∫₀^{2π} (1 − e cos u)⁻⁵ du = π(3e⁴ + 24e² + 8)/(4(1−e²)^{9/2}),
/// closed form by residues.
pub fn a5_integral<S: Scalar>(e: &S) -> Result<S> {
    check_ecc(e)?;
    let e2 = e.clone() * e.clone();
    let e4 = e2.clone() * e2.clone();
    let om = S::one() - e2.clone();
    let om2 = om.clone() * om.clone();
    let om4 = om2.clone() * om2;
    let den = om4 * om.sqrt()? * S::from_f64(4.0);
    let num = (e4 * S::from_f64(3.0) + e2 * S::from_f64(24.0) + S::from_f64(8.0)) * S::pi();
    Ok(num / den)
}

/// Same integral by adaptive doubling of the periodic trapezoid rule;
/// cross-check oracle for [`a5_integral`].
pub fn a5_integral_quadrature<S: Scalar>(e: &S, rel_tol: f64) -> Result<S> {
    check_ecc(e)?;
    let f = |u: &S| {
        let (_, cu) = u.sin_cos();
        (S::one() - e.clone() * cu).powi(-5)
    };
    Ok(periodic_mean(f, rel_tol, 1 << 20) * S::two_pi())
}

/// Mean of a smooth 2π-periodic function by trapezoid sums with doubling n;
/// geometric convergence makes this an adaptive quadrature for this class.
pub fn periodic_mean<S: Scalar>(f: impl Fn(&S) -> S, rel_tol: f64, max_n: usize) -> S {
    let two_pi = S::two_pi();
    let tol = S::from_f64(rel_tol);
    let mut n = 32usize;
    let mut prev: Option<S> = None;
    loop {
        let mut acc = S::zero();
        for j in 0..n {
            let u = two_pi.clone() * S::from_usize(j) / S::from_usize(n);
            acc = acc + f(&u);
        }
        let mean = acc / S::from_usize(n);
        if let Some(p) = prev {
            if (mean.clone() - p).abs() <= tol.clone() * (mean.abs() + S::one()) || n >= max_n {
                return mean;
            }
        }
        prev = Some(mean);
        n *= 2;
    }
}

/// Conformal factor of the 2π return map (both models):
/// λ = exp(−η ∫₀^{2π} (1 − e cos u)⁻⁵ du) ∈ (0, 1], with λ = 1 iff η = 0.
pub fn conformal_factor<S: Scalar>(ecc: &S, eta: &S) -> Result<S> {
    if *eta < S::zero() {
        return Err(Error::domain("conformal_factor", "eta must be nonnegative"));
    }
    Ok((-(eta.clone() * a5_integral(ecc)?)).exp())
}

/// Diagnostic Hamiltonian H = y²/2 − (ε/2)(a/r(t))³ cos(2x − 2f(t)).
pub fn hamiltonian<S: Scalar>(y: &S, x: &S, t: &S, params: &ModelParams<S>) -> Result<S> {
    let ks = kepler_state(t, &params.ecc)?;
    let a = S::one() / ks.r_over_a;
    let a3 = a.clone() * a.clone() * a;
    let (_, c) = sc_functions(x, &ks.u, &params.ecc)?;
    let half = S::from_f64(0.5);
    Ok(y.clone() * y.clone() * half.clone() - params.eps.clone() * half * a3 * c)
}
