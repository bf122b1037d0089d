//! Generic drivers behind the subcommands: every handler is parameterized
//! over the scalar backend so one code path serves hardware doubles and any
//! MPFR precision.  All real-valued flags arrive as strings and are parsed
//! only after the precision context is active.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinorbit_core::continuation::{
    compare_averaged, continue_in_eps, sweep_drift_vs_frequency, SweepOptions,
};
use spinorbit_core::flow::{jet_goodness_test, FlowState, Model};
use spinorbit_core::kam::{
    default_tolerance, default_tolerance_for_bits, interlaced_error, invariance_error, newton_solve,
};
use spinorbit_core::model::{a5_integral, conformal_factor, nbar_lbar};
use spinorbit_core::seed::{
    build_embedding, default_transient, drift_from_frequency, rotation_number_estimate,
    QUALITY_THRESHOLD,
};
use spinorbit_core::{
    ContinuationOptions, Error, LiftedCurve, ModelParams, Periodic, Result, Scalar,
    ScalarContext, TaylorPolicy, TorusSolution,
};

use crate::io;
use crate::{
    Cli, Cmd, CompareArgs, ComputeArgs, ConformalArgs, ContinueArgs, JetTestArgs, ModelArg,
    RotnumArgs, SeedArgs, SweepArgs, VerifyArgs,
};

pub fn dispatch<S: Scalar>(cli: &Cli, ctx: &ScalarContext) -> Result<()> {
    match &cli.cmd {
        Cmd::Compute(a) => compute::<S>(a, ctx),
        Cmd::Continue(a) => run_continue::<S>(a, ctx),
        Cmd::Seed(a) => seed::<S>(a),
        Cmd::Rotnum(a) => rotnum::<S>(a),
        Cmd::SweepDrift(a) => sweep::<S>(a),
        Cmd::CompareAveraged(a) => compare::<S>(a),
        Cmd::ConformalFactor(a) => conformal::<S>(a),
        Cmd::JetTest(a) => jet_test::<S>(a, cli.rng_seed),
        Cmd::Verify(a) => verify::<S>(a, ctx),
    }
}

impl ModelArg {
    fn to_model(self) -> Model {
        match self {
            ModelArg::Full => Model::Full,
            ModelArg::Averaged => Model::Averaged,
        }
    }
}

/// `golden` and `silver` name the two frequencies used throughout; anything
/// else is a decimal literal, parsed at working precision.
fn parse_omega<S: Scalar>(s: &str) -> Result<S> {
    let half = S::from_f64(0.5);
    let sqrt5 = S::from_f64(5.0).sqrt()?;
    match s {
        "golden" => Ok((sqrt5 + S::one()) * half),
        "silver" => {
            let inv_phi = (sqrt5 - S::one()) * half;
            Ok(S::one() + S::one() / (S::from_f64(2.0) + inv_phi))
        }
        _ => S::parse_decimal(s),
    }
}

fn policy<S: Scalar>(tol: &Option<String>) -> Result<TaylorPolicy<S>> {
    let t = match tol {
        Some(s) => S::parse_decimal(s)?,
        None => default_tolerance::<S>() * S::from_f64(1e-2),
    };
    TaylorPolicy::from_tol(t)
}

fn delta_or_default<S: Scalar>(d: &Option<String>) -> Result<S> {
    match d {
        Some(s) => S::parse_decimal(s),
        None => Ok(default_tolerance::<S>()),
    }
}

fn parse_list<S: Scalar>(s: &str) -> Result<Vec<S>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(S::parse_decimal)
        .collect()
}

/// `start:step:stop`, endpoint included up to half a step of slack.
fn parse_range<S: Scalar>(s: &str) -> Result<Vec<S>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("range {s:?} is not start:step:stop")));
    }
    let start = S::parse_decimal(parts[0])?;
    let step = S::parse_decimal(parts[1])?;
    let stop = S::parse_decimal(parts[2])?;
    if !(step > S::zero()) {
        return Err(Error::Parse("range step must be positive".into()));
    }
    let slack = stop + step.clone() * S::from_f64(0.5);
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start.clone() + step.clone() * S::from_usize(k);
        if v > slack || out.len() > 100_000 {
            break;
        }
        out.push(v);
        k += 1;
    }
    Ok(out)
}

fn warn_downcast<S: Scalar>(stored_bits: u32, path: &Path) {
    if stored_bits > S::mantissa_bits() {
        eprintln!(
            "warning: {} stores {stored_bits} bits but the run uses {}; coefficients are downcast",
            path.display(),
            S::mantissa_bits(),
        );
    }
}

fn flat_start<S: Scalar>(omega: &S, n: usize) -> Result<LiftedCurve<S>> {
    let yhat = omega.clone() / S::two_pi();
    LiftedCurve::graph(Periodic::zero(n)?, Periodic::constant(n, yhat)?)
}

fn compute<S: Scalar>(a: &ComputeArgs, _ctx: &ScalarContext) -> Result<()> {
    let omega = parse_omega::<S>(&a.omega)?;
    let eta = S::parse_decimal(&a.eta)?;
    let eps = S::parse_decimal(&a.eps)?;
    let pol = policy::<S>(&a.tol)?;
    let delta = delta_or_default::<S>(&a.delta)?;

    let (k0, ecc0) = match &a.from {
        Some(path) => {
            let stored = io::read_torus::<S>(path)?;
            warn_downcast::<S>(stored.bits, path);
            let mut k = stored.sol.k;
            if let Some(n) = a.n {
                if n != k.n() {
                    k = k.resample(n)?;
                }
            }
            let ecc = match &a.ecc {
                Some(s) => S::parse_decimal(s)?,
                None => stored.sol.ecc,
            };
            (k, ecc)
        }
        None => {
            let ecc = match &a.ecc {
                Some(s) => S::parse_decimal(s)?,
                None => drift_from_frequency(&omega)?,
            };
            (flat_start(&omega, a.n.unwrap_or(128))?, ecc)
        }
    };

    let params = ModelParams::new(eps, eta, ecc0.clone(), omega)?;
    let sol = newton_solve(&k0, &ecc0, Model::Full, &params, &pol, &delta, a.max_iter)?;
    io::write_torus(&a.out, &sol)?;
    if let Some(p) = &a.plot_curve {
        io::write_curve_csv(p, &sol)?;
    }
    println!(
        "eps={} e={} n={} E_sup={} err_interlaced={} iters={}",
        sol.params.eps.to_decimal_string(),
        sol.ecc.to_decimal_string(),
        sol.n,
        sol.err_grid.to_decimal_string(),
        sol.err_interlaced.to_decimal_string(),
        sol.iters,
    );
    Ok(())
}

fn run_continue<S: Scalar>(a: &ContinueArgs, _ctx: &ScalarContext) -> Result<()> {
    let stored = io::read_torus::<S>(&a.from)?;
    warn_downcast::<S>(stored.bits, &a.from);
    let target = S::parse_decimal(&a.eps_target)?;
    let pol = policy::<S>(&a.tol)?;
    let delta = a.delta.as_ref().map(|s| S::parse_decimal(s)).transpose()?;
    let targets = match &a.targets {
        Some(s) => parse_list::<S>(s)?,
        None => Vec::new(),
    };
    let opts = ContinuationOptions {
        delta,
        delta_eps0: S::parse_decimal(&a.delta_eps0)?,
        max_halvings: a.max_halvings,
        max_iter: a.max_iter,
        adapt_modes: a.adapt_modes,
        n_max: a.n_max,
        n0: stored.sol.n,
        targets,
        max_steps: a.max_steps,
    };
    fs::create_dir_all(&a.out_dir)?;
    let run = continue_in_eps(&stored.sol, &target, &pol, &opts)?;
    for (i, s) in run.family.iter().enumerate() {
        io::write_torus(&a.out_dir.join(format!("torus_{i:04}.txt")), s)?;
    }
    io::write_continuation_csv(&a.out_dir.join("continuation.csv"), &run)?;
    let last = run.family.last().expect("family holds at least the start");
    if let Some(b) = &run.breakdown {
        return Err(Error::domain(
            "continue",
            format!(
                "breakdown before eps target: last good eps={}, failed eps={}, {}",
                b.last_good_eps.to_decimal_string(),
                b.failed_eps.to_decimal_string(),
                b.reason,
            ),
        ));
    }
    println!(
        "final eps={} e={} n={} steps={}",
        last.params.eps.to_decimal_string(),
        last.ecc.to_decimal_string(),
        last.n,
        run.records.len(),
    );
    Ok(())
}

fn seed<S: Scalar>(a: &SeedArgs) -> Result<()> {
    let omega = parse_omega::<S>(&a.omega)?;
    let eta = S::parse_decimal(&a.eta)?;
    let eps = S::parse_decimal(&a.eps)?;
    let pol = policy::<S>(&a.tol)?;
    let ecc0 = match &a.ecc {
        Some(s) => S::parse_decimal(s)?,
        None => drift_from_frequency(&omega)?,
    };
    let params = ModelParams::new(eps, eta.clone(), ecc0.clone(), omega.clone())?;
    let n_tr = a.transient.unwrap_or_else(|| default_transient(&eta));
    let orbit = spinorbit_core::seed::transient_orbit(Model::Full, &params, &pol, n_tr, a.keep)?;
    let (omega_hat, quality) = rotation_number_estimate(&orbit)?;
    let k = build_embedding(&orbit, a.n_theta, a.stencil)?;
    let (_, err_grid) = invariance_error(&k, &ecc0, Model::Full, &params, &pol)?;
    let err_interlaced = interlaced_error(&k, &ecc0, Model::Full, &params, &pol)?;
    let sol = TorusSolution {
        n: k.n(),
        k,
        ecc: ecc0.clone(),
        omega: omega.clone(),
        lambda: conformal_factor(&ecc0, &eta)?,
        err_grid: err_grid.clone(),
        err_interlaced,
        params,
        model: Model::Full,
        iters: 0,
        converged: false,
        history: Vec::new(),
    };
    io::write_torus(&a.out, &sol)?;
    println!(
        "omega_hat={} quality={} reliable={} e0={} E_sup={}",
        omega_hat.to_decimal_string(),
        quality.to_decimal_string(),
        quality <= S::from_f64(QUALITY_THRESHOLD),
        ecc0.to_decimal_string(),
        err_grid.to_decimal_string(),
    );
    Ok(())
}

fn rotnum<S: Scalar>(a: &RotnumArgs) -> Result<()> {
    let eps = S::parse_decimal(&a.eps)?;
    let eta = S::parse_decimal(&a.eta)?;
    let ecc = S::parse_decimal(&a.ecc)?;
    let pol = policy::<S>(&a.tol)?;
    let params = ModelParams::new(eps, eta.clone(), ecc.clone(), S::one())?;
    let n_tr = a.transient.unwrap_or_else(|| default_transient(&eta));
    let orbit =
        spinorbit_core::seed::transient_orbit(a.model.to_model(), &params, &pol, n_tr, a.keep)?;
    let (omega_hat, quality) = rotation_number_estimate(&orbit)?;
    let (nb, lb) = nbar_lbar(&ecc)?;
    println!("omega_hat={}", omega_hat.to_decimal_string());
    println!("quality={}", quality.to_decimal_string());
    println!("drift_ratio={}", (nb / lb).to_decimal_string());
    println!("reliable={}", quality <= S::from_f64(QUALITY_THRESHOLD));
    Ok(())
}

fn sweep<S: Scalar>(a: &SweepArgs) -> Result<()> {
    let eta = S::parse_decimal(&a.eta)?;
    let eps = S::parse_decimal(&a.eps)?;
    let pol = policy::<S>(&a.tol)?;
    let grid = match (&a.e_list, &a.e_range) {
        (Some(l), None) => parse_list::<S>(l)?,
        (None, Some(r)) => parse_range::<S>(r)?,
        _ => return Err(Error::Parse("give exactly one of --e-list / --e-range".into())),
    };
    let opts = SweepOptions { n_transient: a.transient, n_keep: a.keep };
    let rows = sweep_drift_vs_frequency(a.model.to_model(), &eta, &eps, &grid, &pol, &opts)?;
    io::write_sweep_csv(&a.out, &rows)?;
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

fn compare<S: Scalar>(a: &CompareArgs) -> Result<()> {
    let omega = parse_omega::<S>(&a.omega)?;
    let eta = S::parse_decimal(&a.eta)?;
    let eps_list = parse_list::<S>(&a.eps_list)?;
    if eps_list.is_empty() {
        return Err(Error::Parse("--eps-list is empty".into()));
    }
    let pol = policy::<S>(&a.tol)?;
    let delta = a.delta.as_ref().map(|s| S::parse_decimal(s)).transpose()?;
    let opts = ContinuationOptions {
        delta,
        n0: a.n0,
        n_max: a.n_max,
        ..Default::default()
    };
    let rows = compare_averaged(&omega, &eta, &eps_list, &pol, &opts)?;
    io::write_compare_csv(&a.out, &rows)?;
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

fn conformal<S: Scalar>(a: &ConformalArgs) -> Result<()> {
    let ecc = S::parse_decimal(&a.ecc)?;
    let eta = S::parse_decimal(&a.eta)?;
    println!("lambda={}", conformal_factor(&ecc, &eta)?.to_decimal_string());
    println!("a5_integral={}", a5_integral(&ecc)?.to_decimal_string());
    Ok(())
}

fn jet_test<S: Scalar>(a: &JetTestArgs, rng_seed: u64) -> Result<()> {
    let eps = S::parse_decimal(&a.eps)?;
    let eta = S::parse_decimal(&a.eta)?;
    let ecc = S::parse_decimal(&a.ecc)?;
    let h = S::parse_decimal(&a.h)?;
    let pol = policy::<S>(&a.tol)?;
    let params = ModelParams::new(eps, eta, ecc.clone(), S::from_f64(1.5))?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut bad = 0usize;
    for i in 0..a.points {
        let beta = S::from_f64(rng.gen::<f64>()) * S::two_pi();
        let scale = (S::one() - ecc.clone()) * S::from_f64(1.4);
        let gamma = scale * S::from_f64(0.6 + 0.8 * rng.gen::<f64>());
        let ang = rng.gen::<f64>() * std::f64::consts::TAU;
        let v = [S::from_f64(ang.cos()), S::from_f64(ang.sin())];
        let x0 = FlowState::new(S::zero(), beta, gamma);
        let g = jet_goodness_test(&x0, &v, &h, &pol, &params)?;
        match g.ratio_log2 {
            Some(r) => {
                let ok = (r - 2.0).abs() <= 0.1;
                if !ok {
                    bad += 1;
                }
                println!(
                    "point {i}: c_h={} c_half={} log2_ratio={r:.4} {}",
                    g.c_h.to_decimal_string(),
                    g.c_half.to_decimal_string(),
                    if ok { "ok" } else { "BAD" },
                );
            }
            None => println!("point {i}: defect at rounding level (degenerate)"),
        }
        if g.precision_warning {
            println!("point {i}: c_half under the precision floor; raise --prec or --h");
        }
    }
    if bad > 0 {
        return Err(Error::domain(
            "jet-test",
            format!("{bad} of {} probe points outside log2 ratio 2±0.1", a.points),
        ));
    }
    Ok(())
}

fn verify<S: Scalar>(a: &VerifyArgs, _ctx: &ScalarContext) -> Result<()> {
    let stored = io::read_torus::<S>(&a.torus)?;
    warn_downcast::<S>(stored.bits, &a.torus);
    // certificates can only be as sharp as the precision that wrote them
    let bits_eff = stored.bits.min(S::mantissa_bits());
    let delta = match &a.delta {
        Some(s) => S::parse_decimal(s)?,
        None => default_tolerance_for_bits::<S>(bits_eff),
    };
    let pol = match &a.tol {
        Some(s) => TaylorPolicy::from_tol(S::parse_decimal(s)?)?,
        None => TaylorPolicy::from_tol(delta.clone() * S::from_f64(1e-2))?,
    };
    let sol = &stored.sol;
    let (_, e_grid) = invariance_error(&sol.k, &sol.ecc, sol.model, &sol.params, &pol)?;
    let e_int = interlaced_error(&sol.k, &sol.ecc, sol.model, &sol.params, &pol)?;
    let tol = S::from_f64(10.0) * delta;
    let ok_grid = (e_grid.clone() - sol.err_grid.clone()).abs() <= tol;
    let ok_int = (e_int.clone() - sol.err_interlaced.clone()).abs() <= tol;
    println!(
        "E_sup stored={} recomputed={} {}",
        sol.err_grid.to_decimal_string(),
        e_grid.to_decimal_string(),
        if ok_grid { "ok" } else { "MISMATCH" },
    );
    println!(
        "interlaced stored={} recomputed={} {}",
        sol.err_interlaced.to_decimal_string(),
        e_int.to_decimal_string(),
        if ok_int { "ok" } else { "MISMATCH" },
    );
    if let Some(p) = &a.plot_curve {
        io::write_curve_csv(p, sol)?;
    }
    if !(ok_grid && ok_int) {
        return Err(Error::domain("verify", "stored error certificates not reproduced"));
    }
    Ok(())
}
