//! Newton iteration for rotational attractors of the return map: solve
//! P_e∘K − K∘T_ω = 0 for the embedding K and the drift e together.  Each
//! step conjugates the linearized equation by the frame built from DK, which
//! splits it into two scalar cohomology equations plus a 2×2 system for the
//! average correction and the drift; the conformal factor λ enters the
//! second equation analytically.

use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::flow::{return_map_batch, return_map_jets_batch, Model, TaylorPolicy};
use crate::fourier::{cohomology_lambda, cohomology_zero_avg, LiftedCurve, Periodic};
use crate::model::{conformal_factor, ModelParams};

/// Solver tolerance δ matched to the working precision: 10⁻¹¹ in double,
/// 10⁻³⁵ from 160 bits up, log-interpolated in between.
pub fn default_tolerance<S: Scalar>() -> S {
    default_tolerance_for_bits(S::mantissa_bits())
}

/// [`default_tolerance`] for an arbitrary mantissa width — e.g. the width a
/// stored solution was computed at, rather than the active one.
pub fn default_tolerance_for_bits<S: Scalar>(p: u32) -> S {
    let digits = if p >= 160 {
        35.0
    } else if p <= 53 {
        11.0
    } else {
        11.0 + (p - 53) as f64 * 24.0 / 107.0
    };
    S::from_f64(10f64.powf(-digits))
}

/// Per-step measurements of the quasi-Newton iteration.
#[derive(Debug, Clone)]
pub struct NewtonDiagnostics<S> {
    /// Sup norm of the invariance error at the input (K, e).
    pub e_sup: S,
    /// Drift correction applied by this step.
    pub sigma: S,
    /// Sup norm of the embedding correction MW.
    pub w_sup: S,
    /// Condition estimate of the 2×2 drift system, ∞-norm based.
    pub cond_2x2: S,
    /// Smallest divisor met across the cohomology solves.
    pub small_divisor_min: S,
}

/// A computed invariant attractor: embedding, drift, and the error
/// certificates on the solving mesh and the interlaced one.
#[derive(Debug, Clone)]
pub struct TorusSolution<S> {
    pub k: LiftedCurve<S>,
    pub ecc: S,
    pub omega: S,
    pub lambda: S,
    pub err_grid: S,
    pub err_interlaced: S,
    pub n: usize,
    pub params: ModelParams<S>,
    pub model: Model,
    pub iters: usize,
    pub converged: bool,
    /// Sup norm of the invariance error at each iterate, ending with the
    /// value re-measured at the returned K.
    pub history: Vec<f64>,
}

fn check_rotational<S: Scalar>(k: &LiftedCurve<S>) -> Result<()> {
    if k.linear != [true, false] {
        return Err(Error::domain(
            "kam",
            "K must wind once in the angle and be periodic in the action",
        ));
    }
    Ok(())
}

/// Component values of K on the mesh or on the interlaced mesh, linear part
/// included.
fn component_values<S: Scalar>(k: &LiftedCurve<S>, interlaced: bool) -> (Vec<S>, Vec<S>) {
    if !interlaced {
        return (k.grid_values(0), k.grid_values(1));
    }
    let n = k.n();
    let half = S::from_f64(0.5);
    let mk = |comp: usize| -> Vec<S> {
        k.p[comp]
            .interlaced_grid()
            .into_iter()
            .enumerate()
            .map(|(j, v)| {
                if k.linear[comp] {
                    v + (S::from_usize(j) + half.clone()) / S::from_usize(n)
                } else {
                    v
                }
            })
            .collect()
    };
    (mk(0), mk(1))
}

/// Nodewise P_e∘K − K∘T_ω with the angle difference wrapped to [−½, ½).
fn wrapped_error<S: Scalar>(vals: &[(S, S)], t0: &[S], t1: &[S]) -> (Vec<S>, Vec<S>, S) {
    let mut sup = S::zero();
    let mut e1 = Vec::with_capacity(vals.len());
    let mut e2 = Vec::with_capacity(vals.len());
    for (j, (x, y)) in vals.iter().enumerate() {
        let d1 = x.clone() - t0[j].clone();
        let d1 = d1.clone() - d1.round_nearest();
        let d2 = y.clone() - t1[j].clone();
        sup = sup.max_with(&d1.abs()).max_with(&d2.abs());
        e1.push(d1);
        e2.push(d2);
    }
    (e1, e2, sup)
}

/// The invariance error E = P_e∘K − K∘T_ω on the mesh and its sup norm over
/// both components.  The drift `ecc` overrides the one in `params`.
pub fn invariance_error<S: Scalar>(
    k: &LiftedCurve<S>,
    ecc: &S,
    model: Model,
    params: &ModelParams<S>,
    policy: &TaylorPolicy<S>,
) -> Result<([Periodic<S>; 2], S)> {
    check_rotational(k)?;
    let p = params.with_ecc(ecc.clone());
    p.validate()?;
    let (xs, ys) = component_values(k, false);
    let pts: Vec<(S, S)> = xs.into_iter().zip(ys).collect();
    let vals = return_map_batch(model, &pts, policy, &p)?;
    let ks = k.shift(&params.omega);
    let (t0, t1) = component_values(&ks, false);
    let (e1, e2, sup) = wrapped_error(&vals, &t0, &t1);
    Ok(([Periodic::from_grid(e1)?, Periodic::from_grid(e2)?], sup))
}

/// Sup norm of the invariance error sampled between the mesh points, at
/// θ_j + 1/(2n).
pub fn interlaced_error<S: Scalar>(
    k: &LiftedCurve<S>,
    ecc: &S,
    model: Model,
    params: &ModelParams<S>,
    policy: &TaylorPolicy<S>,
) -> Result<S> {
    check_rotational(k)?;
    let p = params.with_ecc(ecc.clone());
    p.validate()?;
    let (xs, ys) = component_values(k, true);
    let pts: Vec<(S, S)> = xs.into_iter().zip(ys).collect();
    let vals = return_map_batch(model, &pts, policy, &p)?;
    let ks = k.shift(&params.omega);
    let (t0, t1) = component_values(&ks, true);
    let (_, _, sup) = wrapped_error(&vals, &t0, &t1);
    Ok(sup)
}

fn mean_prod<S: Scalar>(a: &Periodic<S>, b: &Periodic<S>) -> S {
    let mut acc = S::zero();
    for (x, y) in a.grid().iter().zip(b.grid()) {
        acc.mul_acc(x, y);
    }
    acc / S::from_usize(a.n())
}

/// Direct 2×2 solve with partial pivoting; returns (x₁, x₂, cond) for the
/// system [[m11,m12],[m21,m22]]·x = (r1,r2).
fn solve_2x2<S: Scalar>(
    m11: &S,
    m12: &S,
    m21: &S,
    m22: &S,
    r1: &S,
    r2: &S,
) -> Result<(S, S, S)> {
    let prod_d = m11.clone() * m22.clone();
    let prod_o = m12.clone() * m21.clone();
    let det = prod_d.clone() - prod_o.clone();
    let scale = prod_d.abs() + prod_o.abs();
    if !(det.abs() > S::from_f64(1e3) * S::epsilon() * scale.clone()) {
        return Err(Error::Degenerate(format!(
            "drift system determinant {det} below 10³·ε·{scale}"
        )));
    }
    let swap = m21.abs() > m11.abs();
    let (p11, p12, pr1, q21, q22, qr2) = if swap {
        (m21, m22, r2, m11, m12, r1)
    } else {
        (m11, m12, r1, m21, m22, r2)
    };
    let f = q21.clone().div_checked(p11)?;
    let u22 = q22.clone() - f.clone() * p12.clone();
    let rr = qr2.clone() - f * pr1.clone();
    let x2 = rr.div_checked(&u22)?;
    let x1 = (pr1.clone() - p12.clone() * x2.clone()).div_checked(p11)?;
    let na = (m11.abs() + m12.abs()).max_with(&(m21.abs() + m22.abs()));
    let ni = (m22.abs() + m12.abs()).max_with(&(m21.abs() + m11.abs())).div_checked(&det.abs())?;
    Ok((x1, x2, na * ni))
}

/// One quasi-Newton step: error, frame, conjugated equations, drift system,
/// correction.  Returns the corrected (K, e) and the step diagnostics.
pub fn newton_step<S: Scalar>(
    k: &LiftedCurve<S>,
    ecc: &S,
    model: Model,
    params: &ModelParams<S>,
    policy: &TaylorPolicy<S>,
) -> Result<(LiftedCurve<S>, S, NewtonDiagnostics<S>)> {
    check_rotational(k)?;
    let p = params.with_ecc(ecc.clone());
    p.validate()?;
    let n = k.n();
    let omega = &params.omega;

    let (xs, ys) = component_values(k, false);
    let pts: Vec<(S, S)> = xs.into_iter().zip(ys).collect();
    let jets = return_map_jets_batch(model, &pts, policy, &p)?;

    let vals: Vec<(S, S)> = jets.iter().map(|j| (j.val[0].clone(), j.val[1].clone())).collect();
    let ks = k.shift(omega);
    let (t0, t1) = component_values(&ks, false);
    let (e1g, e2g, e_sup) = wrapped_error(&vals, &t0, &t1);

    // frame α = DK with normalization N = (αᵗα)⁻¹, on the mesh and shifted
    // to θ+ω; the shift is spectral, N is recomputed pointwise after it
    let d = k.derivative();
    let norm_inv = |g1: &[S], g2: &[S]| -> Result<Vec<S>> {
        g1.iter()
            .zip(g2)
            .map(|(x, y)| {
                let mut q = x.clone() * x.clone();
                q.mul_acc(y, y);
                S::one().div_checked(&q)
            })
            .collect()
    };
    let (a1g, a2g) = (d[0].grid(), d[1].grid());
    let ng = norm_inv(a1g, a2g)?;
    let a1sp = d[0].shift(omega);
    let a2sp = d[1].shift(omega);
    let (a1s, a2s) = (a1sp.grid(), a2sp.grid());
    let ns = norm_inv(a1s, a2s)?;

    // M = [α | J⁻¹αN] must be unimodular; checked, not assumed
    let tol_det = S::from_f64(1e3) * S::epsilon();
    for j in 0..n {
        let det = a1g[j].clone() * (a1g[j].clone() * ng[j].clone())
            + a2g[j].clone() * (a2g[j].clone() * ng[j].clone());
        let dev = (det - S::one()).abs();
        if !(dev <= tol_det) {
            return Err(Error::Degenerate(format!("det M − 1 = {dev} at node {j}")));
        }
    }

    // Ẽ = (M⁻¹∘T_ω)E with M⁻¹ = [[α₁N, α₂N], [−α₂, α₁]]
    let mut et1g = Vec::with_capacity(n);
    let mut et2g = Vec::with_capacity(n);
    for j in 0..n {
        let mut s1 = e1g[j].clone() * a1s[j].clone();
        s1.mul_acc(&e2g[j], &a2s[j]);
        et1g.push(s1 * ns[j].clone());
        et2g.push(e2g[j].clone() * a1s[j].clone() - e1g[j].clone() * a2s[j].clone());
    }
    let et1 = Periodic::from_grid(et1g)?;
    let et2 = Periodic::from_grid(et2g)?;

    let lambda = conformal_factor(ecc, &params.eta)?;

    // P = αN; S = (P∘T_ω)ᵗ · DP_e∘K · J⁻¹P; Ã = (M⁻¹∘T_ω) · D_eP_e∘K
    let mut sg = Vec::with_capacity(n);
    let mut at1g = Vec::with_capacity(n);
    let mut at2g = Vec::with_capacity(n);
    for j in 0..n {
        let p1 = a1g[j].clone() * ng[j].clone();
        let p2 = a2g[j].clone() * ng[j].clone();
        let p1s = a1s[j].clone() * ns[j].clone();
        let p2s = a2s[j].clone() * ns[j].clone();
        let ds = &jets[j].d_state;
        let v0 = ds[0][1].clone() * p1.clone() - ds[0][0].clone() * p2.clone();
        let v1 = ds[1][1].clone() * p1 - ds[1][0].clone() * p2;
        let mut s = v0 * p1s.clone();
        s.mul_acc(&v1, &p2s);
        sg.push(s);
        let de = &jets[j].d_ecc;
        let mut t = de[0].clone() * a1s[j].clone();
        t.mul_acc(&de[1], &a2s[j]);
        at1g.push(t * ns[j].clone());
        at2g.push(de[1].clone() * a1s[j].clone() - de[0].clone() * a2s[j].clone());
    }
    let s_fun = Periodic::from_grid(sg)?;
    let at1 = Periodic::from_grid(at1g)?;
    let at2 = Periodic::from_grid(at2g)?;

    // oscillating parts of W₂ from the λ-cohomology equations
    let (ba, div_a) = cohomology_lambda(&et2.project_zero_avg(), omega, &lambda)?;
    let (bb, div_b) = cohomology_lambda(&at2.project_zero_avg(), omega, &lambda)?;

    // the two averages the cohomology solves leave open close through a 2×2
    // system in (W̄₂, σ)
    let m11 = s_fun.mean();
    let m12 = mean_prod(&s_fun, &bb) + at1.mean();
    let m21 = lambda.clone() - S::one();
    let m22 = at2.mean();
    let r1 = -(et1.mean() + mean_prod(&s_fun, &ba));
    let r2 = -et2.mean();
    let (wbar2, sigma, cond) = solve_2x2(&m11, &m12, &m21, &m22, &r1, &r2)?;

    let w2 = (&ba + &bb.scale(&sigma)).plus_const(&wbar2);
    let sw2 = s_fun.mul_grid(&w2)?;
    let rhs1 = &(&sw2 + &et1) + &at1.scale(&sigma);
    let (w1, div_c) = cohomology_zero_avg(&rhs1.project_zero_avg(), omega)?;

    // K ← K + MW, e ← e + σ
    let mut mw1g = Vec::with_capacity(n);
    let mut mw2g = Vec::with_capacity(n);
    let mut w_sup = S::zero();
    for j in 0..n {
        let wn = ng[j].clone() * w2.grid()[j].clone();
        let c1 = a1g[j].clone() * w1.grid()[j].clone() - a2g[j].clone() * wn.clone();
        let c2 = a2g[j].clone() * w1.grid()[j].clone() + a1g[j].clone() * wn;
        w_sup = w_sup.max_with(&c1.abs()).max_with(&c2.abs());
        mw1g.push(c1);
        mw2g.push(c2);
    }
    let kp = LiftedCurve::new(
        k.linear,
        [&k.p[0] + &Periodic::from_grid(mw1g)?, &k.p[1] + &Periodic::from_grid(mw2g)?],
    )?;
    let ecc_new = ecc.clone() + sigma.clone();
    let small = div_a.min_with(&div_b).min_with(&div_c);
    Ok((
        kp,
        ecc_new,
        NewtonDiagnostics { e_sup, sigma, w_sup, cond_2x2: cond, small_divisor_min: small },
    ))
}

/// Iterate [`newton_step`] until the invariance error or the correction size
/// drops below `delta`, then re-center the angle origin, re-measure the
/// error, and certify between mesh points.  Divergence — the error growing
/// twice in a row, or `max_iter` exhausted — reports the error history.
pub fn newton_solve<S: Scalar>(
    k0: &LiftedCurve<S>,
    ecc0: &S,
    model: Model,
    params: &ModelParams<S>,
    policy: &TaylorPolicy<S>,
    delta: &S,
    max_iter: usize,
) -> Result<TorusSolution<S>> {
    let mut k = k0.clone();
    let mut ecc = ecc0.clone();
    let mut history: Vec<f64> = Vec::new();
    let mut best = f64::INFINITY;
    let mut grew = 0usize;
    let mut hit = false;
    let mut iters = 0usize;
    for _ in 0..max_iter {
        let (kn, en, diag) = newton_step(&k, &ecc, model, params, policy)?;
        iters += 1;
        let e_now = diag.e_sup.to_f64();
        if let Some(prev) = history.last() {
            if e_now > *prev {
                grew += 1;
            } else {
                grew = 0;
            }
        }
        history.push(e_now);
        best = best.min(e_now);
        if diag.e_sup <= *delta {
            hit = true;
            break;
        }
        if grew >= 2 {
            return Err(Error::NewtonDiverged { iters, best, history });
        }
        k = kn;
        ecc = en;
        if diag.w_sup.max_with(&diag.sigma.abs()) <= *delta {
            hit = true;
            break;
        }
    }
    if !hit {
        return Err(Error::NewtonDiverged { iters, best, history });
    }
    let (k, _) = normalize_curve(&k)?;
    let (_, err_grid) = invariance_error(&k, &ecc, model, params, policy)?;
    history.push(err_grid.to_f64());
    if !(err_grid <= *delta) {
        return Err(Error::NewtonDiverged { iters, best: best.min(err_grid.to_f64()), history });
    }
    let err_interlaced = interlaced_error(&k, &ecc, model, params, policy)?;
    let lambda = conformal_factor(&ecc, &params.eta)?;
    let p = params.with_ecc(ecc.clone());
    Ok(TorusSolution {
        n: k.n(),
        omega: params.omega.clone(),
        k,
        ecc,
        lambda,
        err_grid,
        err_interlaced,
        params: p,
        model,
        iters,
        converged: true,
        history,
    })
}

/// Re-measure the invariance error between mesh points; passes within a
/// factor 10 of `delta`.  A failure means the Fourier tail is undersampled:
/// double n and re-solve.
pub fn accuracy_check<S: Scalar>(
    sol: &TorusSolution<S>,
    policy: &TaylorPolicy<S>,
    delta: &S,
) -> Result<(S, bool)> {
    let err = interlaced_error(&sol.k, &sol.ecc, sol.model, &sol.params, policy)?;
    let pass = err <= S::from_f64(10.0) * delta.clone();
    Ok((err, pass))
}

/// Root-find the shift α with K₁(α) = 0 and return (K∘T_α, α).  Newton on
/// α + p₁(α), with a bisection fallback on the guaranteed bracket
/// |α| ≤ sup|p₁| + 1.
fn normalize_curve<S: Scalar>(k: &LiftedCurve<S>) -> Result<(LiftedCurve<S>, S)> {
    check_rotational(k)?;
    let p1 = &k.p[0];
    let dp1 = p1.derivative();
    let sup = p1.sup_norm();
    let tol = S::from_f64(100.0) * S::epsilon() * (S::one() + sup.clone());
    let f = |a: &S| a.clone() + p1.eval(a);
    let mut alpha = -p1.eval(&S::zero());
    let mut done = false;
    for _ in 0..80 {
        let fa = f(&alpha);
        if fa.abs() <= tol {
            done = true;
            break;
        }
        let fp = S::one() + dp1.eval(&alpha);
        match fa.div_checked(&fp) {
            Ok(step) => alpha = alpha - step,
            Err(_) => break,
        }
    }
    if !done {
        let mut lo = -(sup.clone() + S::one());
        let mut hi = sup + S::one();
        let steps = S::mantissa_bits() as usize + 8;
        for _ in 0..steps {
            let mid = (lo.clone() + hi.clone()) * S::from_f64(0.5);
            if f(&mid) > S::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        alpha = (lo + hi) * S::from_f64(0.5);
        if !(f(&alpha).abs() <= S::from_f64(10.0) * tol) {
            return Err(Error::domain("normalize_shift", "no zero of K₁ found"));
        }
    }
    Ok((k.shift(&alpha), alpha))
}

/// Re-center the angle parametrization so that K₁(0) = 0.  The torus is the
/// same point set — solutions come in a family under rotation of the
/// argument — and the invariance error moves only at roundoff level.
pub fn normalize_shift<S: Scalar>(sol: &TorusSolution<S>) -> Result<TorusSolution<S>> {
    let (k, _) = normalize_curve(&sol.k)?;
    Ok(TorusSolution { k, ..sol.clone() })
}
