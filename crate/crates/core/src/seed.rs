//! Initial guesses for the Newton solver: the drift from the frequency in
//! the integrable limit, transient iteration onto the attractor, weighted
//! Birkhoff rotation numbers, and the interpolation of an orbit into a
//! torus embedding.

use crate::arith::{Element, Jet, Scalar};
use crate::error::{Error, Result};
use crate::flow::{flow_to, map_g, AveragedField, Model, TaylorPolicy};
use crate::fourier::{LiftedCurve, Periodic};
use crate::model::{nbar_lbar, ModelParams};

/// Fast-convergence threshold for [`rotation_number`]: below it the orbit is
/// taken as lying on a smooth rotational circle.
pub const QUALITY_THRESHOLD: f64 = 1e-8;

/// A stretch of an orbit of the 2π return map, after the transient.
#[derive(Debug, Clone)]
pub struct OrbitSample<S> {
    /// (β mod 2π, γ) along the orbit.
    pub points: Vec<(S, S)>,
    /// Unreduced angle lift β_k, for rotation numbers.
    pub lift: Vec<S>,
    pub params: ModelParams<S>,
    /// Iterates discarded before the first stored point.
    pub transient_len: usize,
}

/// Default transient length ⌈5/η⌉, capped at 10⁷ iterates.
pub fn default_transient<S: Scalar>(eta: &S) -> usize {
    let t = (5.0 / eta.to_f64()).ceil();
    if !(t < 1e7) {
        10_000_000
    } else {
        t as usize
    }
}

/// Drift with N̄(e)/L̄(e) = ω: bracketed bisection refined by Newton, so the
/// result is accurate well past the 10⁻¹⁴ relative contract at any
/// precision.
pub fn drift_from_frequency<S: Scalar>(omega: &S) -> Result<S> {
    let one = S::one();
    if *omega < one {
        return Err(Error::NoSolution(format!(
            "frequency {omega} below the range of N̄/L̄ ≥ 1"
        )));
    }
    if *omega == one {
        return Ok(S::zero());
    }
    let ratio = |e: &S| -> Result<S> {
        let (nb, lb) = nbar_lbar(e)?;
        nb.div_checked(&lb)
    };
    let mut lo = S::zero();
    let mut hi = S::from_f64(0.5);
    while ratio(&hi)? < *omega {
        hi = (hi + one.clone()) * S::from_f64(0.5);
        if one.clone() - hi.clone() < S::from_f64(1e-12) {
            return Err(Error::NoSolution(format!("frequency {omega} beyond reach of the drift")));
        }
    }
    for _ in 0..60 {
        let mid = (lo.clone() + hi.clone()) * S::from_f64(0.5);
        if ratio(&mid)? > *omega {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut e = (lo + hi) * S::from_f64(0.5);
    for _ in 0..4 {
        let ej: Jet<S, 1> = Jet::variable(e.clone(), 0);
        let (nb, lb) = nbar_lbar(&ej)?;
        let r = nb * lb.recip();
        let f = r.val.clone() - omega.clone();
        match f.div_checked(&r.d[0]) {
            Ok(step) => {
                let next = e.clone() - step;
                if next > S::zero() && next < one {
                    e = next;
                }
            }
            Err(_) => break,
        }
    }
    Ok(e)
}

fn reduce_two_pi<S: Scalar>(beta: &S) -> S {
    let two_pi = S::two_pi();
    let k = (beta.clone() / two_pi.clone()).floor();
    beta.clone() - two_pi * k
}

/// Iterate the return map from the integrable-limit attractor point,
/// discard `n_transient` iterates, keep `n_keep`.  The angle is reduced mod
/// 2π between iterates (the dynamics is 2π-periodic, and this keeps the
/// trigonometric arguments small); the lift accumulates the increments.
pub fn transient_orbit<S: Scalar>(
    model: Model,
    params: &ModelParams<S>,
    policy: &TaylorPolicy<S>,
    n_transient: usize,
    n_keep: usize,
) -> Result<OrbitSample<S>> {
    params.validate()?;
    if !(params.eta > S::zero()) {
        return Err(Error::domain("transient_orbit", "eta must be positive"));
    }
    if n_keep == 0 {
        return Err(Error::domain("transient_orbit", "n_keep must be positive"));
    }
    let (nb, lb) = nbar_lbar(&params.ecc)?;
    let y0 = nb.div_checked(&lb)?;
    // the ε=0 averaged attractor in the model's own variables: γ = (1−e)y
    // at the section u = 0 for the full model, y itself for the averaged one
    let mut gamma = match model {
        Model::Full => (S::one() - params.ecc.clone()) * y0.clone(),
        Model::Averaged => y0.clone(),
    };
    let mut beta = S::zero();
    let mut lift_val = S::zero();
    let bound = (y0.abs() + S::one()) * S::from_f64(50.0);
    let mut points = Vec::with_capacity(n_keep);
    let mut lift = Vec::with_capacity(n_keep);
    let two_pi = S::two_pi();
    for it in 0..(n_transient + n_keep) {
        if it >= n_transient {
            points.push((beta.clone(), gamma.clone()));
            lift.push(lift_val.clone());
        }
        let (bn, gn) = match model {
            Model::Full => {
                map_g(&beta, &gamma, policy, &params.eps, &params.eta, &params.ecc)?
            }
            Model::Averaged => {
                let field = AveragedField::new(
                    params.eps.clone(),
                    params.eta.clone(),
                    params.ecc.clone(),
                );
                let z = flow_to(
                    &field,
                    &S::zero(),
                    &[beta.clone(), gamma.clone()],
                    &two_pi,
                    policy,
                )?;
                (z[0].clone(), z[1].clone())
            }
        };
        if !(bn.is_finite() && gn.is_finite()) || gn.abs() > bound {
            return Err(Error::NonRotational(format!(
                "orbit escaped at iterate {it}: beta {bn}, gamma {gn}"
            )));
        }
        lift_val = lift_val + (bn.clone() - beta.clone());
        beta = reduce_two_pi(&bn);
        gamma = gn;
    }
    Ok(OrbitSample { points, lift, params: params.clone(), transient_len: n_transient })
}

/// Weighted average of a sequence with the bump w(s) = exp(−1/(s(1−s))).
fn bump_average<S: Scalar>(vals: &[S]) -> S {
    let n = vals.len();
    let mut num = S::zero();
    let mut den = S::zero();
    for (k, v) in vals.iter().enumerate() {
        let s = S::from_usize(k + 1) / S::from_usize(n + 1);
        let q = s.clone() * (S::one() - s);
        let w = (-S::one() / q).exp();
        num.mul_acc(&w, v);
        den = den + w;
    }
    num / den
}

/// Weighted Birkhoff estimate of the rotation number (in map units, ω ≈
/// lift advance / 2π) together with the convergence quality, the difference
/// between the full-sample and half-sample estimates.
pub fn rotation_number_estimate<S: Scalar>(orbit: &OrbitSample<S>) -> Result<(S, S)> {
    let n = orbit.lift.len();
    if n < (1 << 10) {
        return Err(Error::domain(
            "rotation_number",
            format!("need at least 1024 orbit points, got {n}"),
        ));
    }
    let incr: Vec<S> =
        orbit.lift.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
    let full = bump_average(&incr);
    let half = bump_average(&incr[..incr.len() / 2]);
    let two_pi = S::two_pi();
    let omega_hat = full.clone() / two_pi.clone();
    let quality = (full - half).abs() / two_pi;
    Ok((omega_hat, quality))
}

/// [`rotation_number_estimate`] gated on fast convergence: super-polynomial
/// decay of the quality is the working evidence of a smooth rotational
/// circle, so a quality above [`QUALITY_THRESHOLD`] is reported as failure.
pub fn rotation_number<S: Scalar>(orbit: &OrbitSample<S>) -> Result<(S, S)> {
    let (omega_hat, quality) = rotation_number_estimate(orbit)?;
    if !(quality <= S::from_f64(QUALITY_THRESHOLD)) {
        return Err(Error::NoRotationNumber(format!(
            "estimate {omega_hat} has quality {quality} above {QUALITY_THRESHOLD:e}"
        )));
    }
    Ok((omega_hat, quality))
}

fn lagrange_eval<S: Scalar>(xs: &[S], ys: &[S], x: &S) -> Result<S> {
    let m = xs.len();
    let mut acc = S::zero();
    for i in 0..m {
        let mut term = ys[i].clone();
        for l in 0..m {
            if l != i {
                let num = x.clone() - xs[l].clone();
                let den = xs[i].clone() - xs[l].clone();
                term = term * num.div_checked(&den)?;
            }
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// First index whose angle exceeds `x` in the sorted sample list.
fn upper_bound<S: Scalar>(sorted: &[(S, S)], x: &S) -> usize {
    let (mut lo, mut hi) = (0usize, sorted.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if sorted[mid].0 <= *x {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Interpolate an orbit into an embedding: sort by β, build the uniform
/// mesh β̄_k = 2πk/n_θ, take the 2j samples around each mesh point (indices
/// mod n, with ±2π on the abscissae across the seam) through Lagrange
/// interpolation, and convert the table by Ψ_e⁻¹.
pub fn build_embedding<S: Scalar>(
    orbit: &OrbitSample<S>,
    n_theta: usize,
    j: usize,
) -> Result<LiftedCurve<S>> {
    let np = orbit.points.len();
    if j == 0 || 2 * j > np {
        return Err(Error::domain(
            "build_embedding",
            format!("stencil 2j = {} needs at most the {np} samples", 2 * j),
        ));
    }
    let mut sorted = orbit.points.clone();
    for attempt in 0..3 {
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite angles"));
        let mut dup = false;
        for i in 1..np {
            if sorted[i].0 == sorted[i - 1].0 {
                dup = true;
                // nudge the duplicate by a few ulps; the sample stays on the
                // curve to the same order
                let kick = S::epsilon()
                    * (S::one() + sorted[i].0.abs())
                    * S::from_usize(4 * (attempt + 1));
                sorted[i].0 = sorted[i].0.clone() + kick;
            }
        }
        if !dup {
            break;
        }
        if attempt == 2 {
            return Err(Error::NonGraph("duplicate angles persist after perturbation".into()));
        }
    }

    // fold test: points interleaving two branches blow up the total
    // variation of γ along the β-sorted order relative to its range
    let mut gmin = sorted[0].1.clone();
    let mut gmax = sorted[0].1.clone();
    let mut tv = S::zero();
    for i in 1..np {
        gmin = gmin.min_with(&sorted[i].1);
        gmax = gmax.max_with(&sorted[i].1);
        tv = tv + (sorted[i].1.clone() - sorted[i - 1].1.clone()).abs();
    }
    let range = gmax.clone() - gmin;
    let floor = S::from_f64(1e-6) * (S::one() + gmax.abs());
    if range > floor && tv > S::from_f64(25.0) * range.clone() {
        return Err(Error::NonGraph(format!(
            "total variation {tv} vs range {range}: orbit is not a graph over the angle"
        )));
    }

    let two_pi = S::two_pi();
    let e = &orbit.params.ecc;
    let chart = two_pi.clone() * (S::one() - e.clone());
    let mut yhat = Vec::with_capacity(n_theta);
    let mut xs = vec![S::zero(); 2 * j];
    let mut ys = vec![S::zero(); 2 * j];
    for k in 0..n_theta {
        let bbar = two_pi.clone() * S::from_usize(k) / S::from_usize(n_theta);
        let i0 = upper_bound(&sorted, &bbar);
        for (t, slot) in (0..2 * j).enumerate() {
            let idx = i0 as isize - j as isize + t as isize;
            let wrapped = idx.rem_euclid(np as isize) as usize;
            let mut x = sorted[wrapped].0.clone();
            if idx < 0 {
                x = x - two_pi.clone();
            } else if idx >= np as isize {
                x = x + two_pi.clone();
            }
            xs[slot] = x;
            ys[slot] = sorted[wrapped].1.clone();
        }
        let gbar = lagrange_eval(&xs, &ys, &bbar)?;
        yhat.push(gbar.div_checked(&chart)?);
    }
    LiftedCurve::graph(Periodic::zero(n_theta)?, Periodic::from_grid(yhat)?)
}
