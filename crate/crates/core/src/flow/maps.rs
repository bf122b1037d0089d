//! The 2π return maps.  G_e is the flow of the full model over one period of
//! the eccentric anomaly; P_e is its conjugate on the scaled torus chart
//! Ψ_e = 2π·diag(1, 1−e), i.e. (β, γ) = (2π x̂, 2π(1−e) ŷ).  The averaged
//! model gets the same chart with its time-2π flow.  Jets in (x̂₀, ŷ₀, e)
//! ride through every formula, so DP_e and ∂P_e/∂e come from the same path
//! as the values.

use super::fields::{AveragedField, FullField};
use super::taylor::{flow_to, taylor_step, TaylorPolicy};
use crate::arith::{parallel_map, Element, Jet, Scalar};
use crate::error::Result;
use crate::model::ModelParams;

/// Integration state of the full model in the eccentric anomaly.
#[derive(Debug, Clone)]
pub struct FlowState<S, E> {
    pub u: S,
    pub beta: E,
    pub gamma: E,
}

impl<S: Scalar, E: Element<S>> FlowState<S, E> {
    pub fn new(u: S, beta: E, gamma: E) -> Self {
        FlowState { u, beta, gamma }
    }
}

/// Which return map a torus computation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Full,
    Averaged,
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::Full => "full",
            Model::Averaged => "averaged",
        }
    }
}

/// One Taylor step of the full model from `state` toward `u_target`.
pub fn taylor_step_full<S: Scalar, E: Element<S>>(
    state: &FlowState<S, E>,
    u_target: &S,
    policy: &TaylorPolicy<S>,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(FlowState<S, E>, S)> {
    let field = FullField::new(eps.clone(), eta.clone(), ecc.clone());
    let z0 = [state.beta.clone(), state.gamma.clone()];
    let (u1, z1, h, _) = taylor_step(&field, &state.u, &z0, u_target, policy)?;
    let mut it = z1.into_iter();
    Ok((FlowState::new(u1, it.next().unwrap(), it.next().unwrap()), h))
}

/// Flow of the full model from `state.u` to `u_target`.
pub fn flow_u<S: Scalar, E: Element<S>>(
    state: &FlowState<S, E>,
    u_target: &S,
    policy: &TaylorPolicy<S>,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<FlowState<S, E>> {
    let field = FullField::new(eps.clone(), eta.clone(), ecc.clone());
    let z0 = [state.beta.clone(), state.gamma.clone()];
    let z = flow_to(&field, &state.u, &z0, u_target, policy)?;
    let mut it = z.into_iter();
    Ok(FlowState::new(u_target.clone(), it.next().unwrap(), it.next().unwrap()))
}

/// G_e: the u-time-2π flow acting on (β₀, γ₀) at u₀ = 0.
pub fn map_g<S: Scalar, E: Element<S>>(
    beta0: &E,
    gamma0: &E,
    policy: &TaylorPolicy<S>,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(E, E)> {
    let state = FlowState::new(S::zero(), beta0.clone(), gamma0.clone());
    let out = flow_u(&state, &S::two_pi(), policy, eps, eta, ecc)?;
    Ok((out.beta, out.gamma))
}

/// P_e = Ψ_e⁻¹ ∘ G_e ∘ Ψ_e on (x̂, ŷ); the first component is reduced to
/// [−½, ½) by subtracting the nearest integer of its value slot.
pub fn map_p<S: Scalar, E: Element<S>>(
    xhat: &E,
    yhat: &E,
    policy: &TaylorPolicy<S>,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(E, E)> {
    let two_pi = S::two_pi();
    let beta0 = xhat.scale_s(&two_pi);
    let scale = (E::one() - ecc.clone()).scale_s(&two_pi);
    let gamma0 = yhat.clone() * scale.clone();
    let (beta, gamma) = map_g(&beta0, &gamma0, policy, eps, eta, ecc)?;
    let xh = beta.scale_s(&(S::one() / two_pi));
    let xh = reduce_mod1(&xh);
    let yh = gamma * scale.recip();
    Ok((xh, yh))
}

/// Averaged-model counterpart of [`map_p`]: time-2π flow in the same chart.
pub fn map_p_averaged<S: Scalar, E: Element<S>>(
    xhat: &E,
    yhat: &E,
    policy: &TaylorPolicy<S>,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(E, E)> {
    let two_pi = S::two_pi();
    let x0 = xhat.scale_s(&two_pi);
    let scale = (E::one() - ecc.clone()).scale_s(&two_pi);
    let y0 = yhat.clone() * scale.clone();
    let field = AveragedField::new(eps.clone(), eta.clone(), ecc.clone());
    let z = flow_to(&field, &S::zero(), &[x0, y0], &two_pi, policy)?;
    let xh = z[0].scale_s(&(S::one() / two_pi));
    let xh = reduce_mod1(&xh);
    let yh = z[1].clone() * scale.recip();
    Ok((xh, yh))
}

/// Dispatch on the model choice.
pub fn return_map<S: Scalar, E: Element<S>>(
    model: Model,
    xhat: &E,
    yhat: &E,
    policy: &TaylorPolicy<S>,
    eps: &S,
    eta: &S,
    ecc: &E,
) -> Result<(E, E)> {
    match model {
        Model::Full => map_p(xhat, yhat, policy, eps, eta, ecc),
        Model::Averaged => map_p_averaged(xhat, yhat, policy, eps, eta, ecc),
    }
}

fn reduce_mod1<S: Scalar, E: Element<S>>(x: &E) -> E {
    x.clone() - E::from_scalar(x.val().round_nearest())
}

/// Values plus first partials of the return map at a point: columns of the
/// state Jacobian and the drift derivative, all from one jet pass.
#[derive(Debug, Clone)]
pub struct ReturnJets<S> {
    pub val: [S; 2],
    /// d(x̂', ŷ')/d(x̂₀, ŷ₀), row-major.
    pub d_state: [[S; 2]; 2],
    /// ∂(x̂', ŷ')/∂e at fixed chart point.
    pub d_ecc: [S; 2],
}

impl<S: Scalar> ReturnJets<S> {
    pub fn det(&self) -> S {
        self.d_state[0][0].clone() * self.d_state[1][1].clone()
            - self.d_state[0][1].clone() * self.d_state[1][0].clone()
    }
}

/// Full first-order jet of the selected return map over (x̂₀, ŷ₀, e).
pub fn return_map_jets<S: Scalar>(
    model: Model,
    xhat: &S,
    yhat: &S,
    policy: &TaylorPolicy<S>,
    params: &ModelParams<S>,
) -> Result<ReturnJets<S>> {
    let xj: Jet<S, 3> = Jet::variable(xhat.clone(), 0);
    let yj: Jet<S, 3> = Jet::variable(yhat.clone(), 1);
    let ej: Jet<S, 3> = Jet::variable(params.ecc.clone(), 2);
    let (xo, yo) = return_map(model, &xj, &yj, policy, &params.eps, &params.eta, &ej)?;
    Ok(ReturnJets {
        val: [xo.val.clone(), yo.val.clone()],
        d_state: [
            [xo.d[0].clone(), xo.d[1].clone()],
            [yo.d[0].clone(), yo.d[1].clone()],
        ],
        d_ecc: [xo.d[2].clone(), yo.d[2].clone()],
    })
}

/// Deterministic parallel batch of jet evaluations of the return map.
pub fn return_map_jets_batch<S: Scalar>(
    model: Model,
    points: &[(S, S)],
    policy: &TaylorPolicy<S>,
    params: &ModelParams<S>,
) -> Result<Vec<ReturnJets<S>>> {
    let out = parallel_map(points, |(x, y)| return_map_jets(model, x, y, policy, params));
    out.into_iter().collect()
}

/// Scalar parallel batch of the return map.
pub fn return_map_batch<S: Scalar>(
    model: Model,
    points: &[(S, S)],
    policy: &TaylorPolicy<S>,
    params: &ModelParams<S>,
) -> Result<Vec<(S, S)>> {
    let out = parallel_map(points, |(x, y)| {
        return_map(model, x, y, policy, &params.eps, &params.eta, &params.ecc)
    });
    out.into_iter().collect()
}

/// Convert variational data of the (β, γ) flow to the physical (x, y)
/// variables: x = β, y = γ/(1 − e cos u), with the initial condition held in
/// (x₀, y₀) at u₀.  `e_col` is ∂(β,γ)/∂e at fixed (β₀,γ₀); γ values at the
/// endpoints supply the e-chain terms through γ₀ = y₀(1 − e cos u₀).
#[allow(clippy::too_many_arguments)]
pub fn variational_convert<S: Scalar>(
    var_bg: &[[S; 2]; 2],
    e_col: &[S; 2],
    u0: &S,
    u: &S,
    gamma0: &S,
    gamma_end: &S,
    params: &ModelParams<S>,
) -> Result<([[S; 2]; 2], [S; 2])> {
    let e = &params.ecc;
    let (_, cu0) = u0.sin_cos();
    let (_, cuf) = u.sin_cos();
    let m0 = S::one() - e.clone() * cu0.clone();
    let mf = S::one() - e.clone() * cuf.clone();
    let y0 = gamma0.clone().div_checked(&m0)?;

    let var_xy = [
        [var_bg[0][0].clone(), var_bg[0][1].clone() * m0.clone()],
        [
            var_bg[1][0].clone().div_checked(&mf)?,
            var_bg[1][1].clone() * m0.clone() / mf.clone(),
        ],
    ];
    let ex = e_col[0].clone() - var_bg[0][1].clone() * y0.clone() * cu0.clone();
    let ey = (e_col[1].clone() - var_bg[1][1].clone() * y0 * cu0).div_checked(&mf)?
        + gamma_end.clone() * cuf / (mf.clone() * mf);
    Ok((var_xy, [ex, ey]))
}
