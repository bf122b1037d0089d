//! The Taylor-method stepper: a vector field exposes its solution's Taylor
//! coefficients to arbitrary order; the stepper picks h from the last two
//! coefficient norms and sums the series by Horner evaluation.

use crate::arith::{Element, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TaylorPolicy<S> {
    pub order: usize,
    pub abs_tol: S,
    pub rel_tol: S,
    pub max_step: S,
    pub min_step: S,
    pub safety: S,
}

impl<S: Scalar> TaylorPolicy<S> {
    /// Series order ⌈−ln(tol)/2⌉ clamped to [8, 40], both tolerances = tol.
    pub fn from_tol(tol: S) -> Result<Self> {
        let t = tol.to_f64();
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::domain("TaylorPolicy", format!("tolerance {tol} outside (0,1)")));
        }
        let order = ((-t.ln() / 2.0).ceil() as usize).clamp(8, 40);
        let p = TaylorPolicy {
            order,
            abs_tol: tol.clone(),
            rel_tol: tol,
            max_step: S::one(),
            min_step: S::from_f64(1e-14),
            safety: S::from_f64(0.9),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 4 {
            return Err(Error::domain("TaylorPolicy", format!("order {} < 4", self.order)));
        }
        if !(self.abs_tol > S::zero() && self.rel_tol > S::zero()) {
            return Err(Error::domain("TaylorPolicy", "tolerances must be positive"));
        }
        if !(self.safety > S::zero() && self.safety <= S::one()) {
            return Err(Error::domain("TaylorPolicy", "safety must be in (0,1]"));
        }
        if !(self.max_step > S::zero()) || self.min_step < S::zero() {
            return Err(Error::domain("TaylorPolicy", "bad step bounds"));
        }
        Ok(())
    }
}

/// A vector field whose flow is integrated by Taylor series: `series`
/// returns the solution coefficients z^{[k]}, k = 0..=order, through
/// (t0, z0), one Vec per state dimension.
pub trait SeriesField<S: Scalar, E: Element<S>>: Sync {
    fn dim(&self) -> usize;
    fn series(&self, t0: &S, z0: &[E], order: usize) -> Result<Vec<Vec<E>>>;
}

fn coeff_norm<S: Scalar, E: Element<S>>(series: &[Vec<E>], k: usize) -> S {
    let mut m = S::zero();
    for comp in series {
        m = m.max_with(&comp[k].max_abs());
    }
    m
}

fn nth_root<S: Scalar>(x: &S, m: usize) -> Result<S> {
    Ok((x.ln()? / S::from_usize(m)).exp())
}

fn horner<S: Scalar, E: Element<S>>(series: &[Vec<E>], h: &S) -> Vec<E> {
    series
        .iter()
        .map(|cs| {
            let mut acc = cs[cs.len() - 1].clone();
            for k in (0..cs.len() - 1).rev() {
                acc = acc.scale_s(h) + cs[k].clone();
            }
            acc
        })
        .collect()
}

/// One Taylor step toward `t_target`.  Returns (t1, z1, h_used, reached);
/// `reached` is set when the step lands exactly on the target.
pub fn taylor_step<S: Scalar, E: Element<S>, F: SeriesField<S, E> + ?Sized>(
    field: &F,
    t0: &S,
    z0: &[E],
    t_target: &S,
    policy: &TaylorPolicy<S>,
) -> Result<(S, Vec<E>, S, bool)> {
    let n = policy.order;
    let series = field.series(t0, z0, n)?;

    let mut scale = S::zero();
    for z in z0 {
        scale = scale.max_with(&z.max_abs());
    }
    let tol = policy.abs_tol.max_with(&(policy.rel_tol.clone() * scale));

    let mut h = policy.max_step.clone();
    let c_last = coeff_norm(&series, n);
    let c_prev = coeff_norm(&series, n - 1);
    if !c_prev.is_zero() {
        h = h.min_with(&nth_root(&(tol.clone() / c_prev), n - 1)?);
    }
    if !c_last.is_zero() {
        h = h.min_with(&nth_root(&(tol / c_last), n)?);
    }
    h = h * policy.safety.clone();

    let remaining = t_target.clone() - t0.clone();
    let (h_signed, reached) = if remaining.abs() <= h {
        (remaining, true)
    } else {
        if h < policy.min_step {
            return Err(Error::Integration(format!(
                "step size {h} underflowed min_step {} at t = {t0}",
                policy.min_step
            )));
        }
        let s = if remaining < S::zero() { -h } else { h };
        (s, false)
    };

    let z1 = horner(&series, &h_signed);
    for z in &z1 {
        if !z.is_finite() {
            return Err(Error::Integration(format!("state became non-finite at t = {t0}")));
        }
    }
    let t1 = if reached { t_target.clone() } else { t0.clone() + h_signed.clone() };
    Ok((t1, z1, h_signed, reached))
}

/// Integrate from t0 to t_target (either direction).
pub fn flow_to<S: Scalar, E: Element<S>, F: SeriesField<S, E> + ?Sized>(
    field: &F,
    t0: &S,
    z0: &[E],
    t_target: &S,
    policy: &TaylorPolicy<S>,
) -> Result<Vec<E>> {
    policy.validate()?;
    if z0.len() != field.dim() {
        return Err(Error::domain("flow_to", "state dimension mismatch"));
    }
    let mut t = t0.clone();
    let mut z = z0.to_vec();
    if t == *t_target {
        return Ok(z);
    }
    const MAX_STEPS: usize = 2_000_000;
    for _ in 0..MAX_STEPS {
        let (t1, z1, _h, reached) = taylor_step(field, &t, &z, t_target, policy)?;
        t = t1;
        z = z1;
        if reached {
            return Ok(z);
        }
    }
    Err(Error::Integration(format!("step limit exceeded flowing from {t0} to {t_target}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Decay;

    impl SeriesField<f64, f64> for Decay {
        fn dim(&self) -> usize {
            1
        }
        // z' = −z: z_{k+1} = −z_k/(k+1)
        fn series(&self, _t0: &f64, z0: &[f64], order: usize) -> Result<Vec<Vec<f64>>> {
            let mut c = vec![z0[0]];
            for k in 0..order {
                c.push(-c[k] / (k + 1) as f64);
            }
            Ok(vec![c])
        }
    }

    struct Cubic;

    impl SeriesField<f64, f64> for Cubic {
        fn dim(&self) -> usize {
            1
        }
        // z' = 3t²: z(t) = z0 + t³ − t0³ (explicit time dependence)
        fn series(&self, t0: &f64, z0: &[f64], order: usize) -> Result<Vec<Vec<f64>>> {
            let mut c = vec![z0[0], 3.0 * t0 * t0, 3.0 * t0, 1.0];
            c.resize(order + 1, 0.0);
            Ok(vec![c])
        }
    }

    #[test]
    fn policy_order_rule() {
        assert_eq!(TaylorPolicy::from_tol(1e-16f64).unwrap().order, 19);
        assert_eq!(TaylorPolicy::from_tol(1e-35f64).unwrap().order, 41_usize.clamp(8, 40));
        assert_eq!(TaylorPolicy::from_tol(1e-4f64).unwrap().order, 8);
        assert!(TaylorPolicy::from_tol(2.0f64).is_err());
        let mut p = TaylorPolicy::from_tol(1e-10f64).unwrap();
        p.order = 3;
        assert!(p.validate().is_err());
    }

    #[test]
    fn exponential_decay_to_tolerance() {
        let policy = TaylorPolicy::from_tol(1e-14f64).unwrap();
        let z = flow_to(&Decay, &0.0, &[1.0], &3.0, &policy).unwrap();
        assert!((z[0] - (-3.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn backward_flow_returns_to_start() {
        let policy = TaylorPolicy::from_tol(1e-14f64).unwrap();
        let fwd = flow_to(&Decay, &0.0, &[1.0], &2.5, &policy).unwrap();
        let back = flow_to(&Decay, &2.5, &fwd, &0.0, &policy).unwrap();
        assert!((back[0] - 1.0).abs() < 50.0 * 1e-14);
    }

    #[test]
    fn polynomial_flow_is_exact_in_one_step() {
        let policy = TaylorPolicy::from_tol(1e-14f64).unwrap();
        let (t1, z1, h, reached) = taylor_step(&Cubic, &0.25, &[0.5], &0.75, &policy).unwrap();
        assert!(reached);
        assert_eq!(t1, 0.75);
        assert_eq!(h, 0.5);
        let expect = 0.5 + 0.75f64.powi(3) - 0.25f64.powi(3);
        assert!((z1[0] - expect).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn min_step_underflow_reported() {
        let mut policy = TaylorPolicy::from_tol(1e-14f64).unwrap();
        policy.min_step = 10.0;
        policy.max_step = 20.0;
        match flow_to(&Decay, &0.0, &[1.0], &100.0, &policy) {
            Err(Error::Integration(_)) => {}
            other => panic!("expected integration failure, got {other:?}"),
        }
    }
}
