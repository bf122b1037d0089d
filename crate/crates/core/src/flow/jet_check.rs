//! Goodness test for first-order jet transport: integrate once with jets at
//! x₀, once through the perturbed point x₀ + hv, and measure how far the
//! linear prediction falls from the true image.  Halving h must scale that
//! defect by 2^{N+1} = 4 for first-order jets.

use super::maps::{map_g, FlowState};
use super::taylor::TaylorPolicy;
use crate::arith::{Jet, Scalar};
use crate::error::Result;
use crate::model::ModelParams;

#[derive(Debug, Clone)]
pub struct JetGoodness<S> {
    pub c_h: S,
    pub c_half: S,
    /// log₂(c_h / c_{h/2}); ≈ 2 for healthy first-order transport.
    pub ratio_log2: Option<f64>,
    /// both defects at rounding level: the jet is exact for this flow
    pub degenerate: bool,
    /// c_{h/2} below 100·ε_mach: h is under the precision floor
    pub precision_warning: bool,
}

fn defect<S: Scalar>(
    x0: &FlowState<S, S>,
    v: &[S; 2],
    h: &S,
    policy: &TaylorPolicy<S>,
    params: &ModelParams<S>,
) -> Result<S> {
    let bj: Jet<S, 2> = Jet::variable(x0.beta.clone(), 0);
    let gj: Jet<S, 2> = Jet::variable(x0.gamma.clone(), 1);
    let ej: Jet<S, 2> = Jet::constant(params.ecc.clone());
    let (bo, go) = map_g(&bj, &gj, policy, &params.eps, &params.eta, &ej)?;

    let predict = |out: &Jet<S, 2>| {
        out.val.clone()
            + h.clone() * (out.d[0].clone() * v[0].clone() + out.d[1].clone() * v[1].clone())
    };
    let bp = predict(&bo);
    let gp = predict(&go);

    let b1 = x0.beta.clone() + h.clone() * v[0].clone();
    let g1 = x0.gamma.clone() + h.clone() * v[1].clone();
    let (bt, gt) = map_g(&b1, &g1, policy, &params.eps, &params.eta, &params.ecc)?;
    Ok((bt - bp).abs().max_with(&(gt - gp).abs()))
}

pub fn jet_goodness_test<S: Scalar>(
    x0: &FlowState<S, S>,
    v: &[S; 2],
    h: &S,
    policy: &TaylorPolicy<S>,
    params: &ModelParams<S>,
) -> Result<JetGoodness<S>> {
    let half = S::from_f64(0.5) * h.clone();
    let c_h = defect(x0, v, h, policy, params)?;
    let c_half = defect(x0, v, &half, policy, params)?;

    let floor = S::from_f64(100.0) * S::epsilon();
    let degenerate = c_h <= floor && c_half <= floor;
    let precision_warning = !degenerate && c_half < floor;
    let ratio_log2 = if degenerate || c_half.is_zero() {
        None
    } else {
        Some((c_h.to_f64() / c_half.to_f64()).log2())
    };
    Ok(JetGoodness { c_h, c_half, ratio_log2, degenerate, precision_warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_dir() -> [f64; 2] {
        let inv = 1.0 / 5f64.sqrt();
        [2.0 * inv, 1.0 * inv]
    }

    #[test]
    fn linear_flow_is_degenerate() {
        let params = ModelParams::new(0.0f64, 0.0, 0.0, 1.5).unwrap();
        let policy = TaylorPolicy::from_tol(1e-14f64).unwrap();
        let x0 = FlowState::new(0.0f64, 0.3, 1.2);
        let g = jet_goodness_test(&x0, &unit_dir(), &1e-7, &policy, &params).unwrap();
        assert!(g.degenerate);
        assert!(g.ratio_log2.is_none());
    }

    #[test]
    fn full_model_ratio_is_two() {
        let params = ModelParams::new(1e-3f64, 1e-3, 0.25, 1.5).unwrap();
        let policy = TaylorPolicy::from_tol(1e-15f64).unwrap();
        let x0 = FlowState::new(0.0f64, 0.4, 1.5);
        let g = jet_goodness_test(&x0, &unit_dir(), &1e-4, &policy, &params).unwrap();
        let r = g.ratio_log2.expect("not degenerate");
        assert!((r - 2.0).abs() <= 0.1, "ratio_log2 {r}");
        assert!(!g.precision_warning);
    }

    #[test]
    fn tiny_h_triggers_precision_warning() {
        let params = ModelParams::new(1e-3f64, 1e-3, 0.25, 1.5).unwrap();
        let policy = TaylorPolicy::from_tol(1e-15f64).unwrap();
        let x0 = FlowState::new(0.0f64, 0.4, 1.5);
        let h = f64::EPSILON.powf(0.6);
        let g = jet_goodness_test(&x0, &unit_dir(), &h, &policy, &params).unwrap();
        assert!(g.precision_warning || g.degenerate);
    }
}
