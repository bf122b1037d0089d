//! Torus files and CSV emission.
//!
//! The torus format is text v1: a version line, nine `key=value` header
//! lines, then one line per Fourier mode `k re(K̂₁ₖ) im(K̂₁ₖ) re(K̂₂ₖ)
//! im(K̂₂ₖ)`.  Values carry ⌈p·log₁₀2⌉+2 significant digits, enough for a
//! bit-exact round trip at the precision that wrote them.

use std::fs;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use spinorbit_core::continuation::{CompareRow, ContinuationRun, SweepRow};
use spinorbit_core::flow::Model;
use spinorbit_core::fourier::Cx;
use spinorbit_core::{Error, LiftedCurve, ModelParams, Periodic, Result, Scalar, TorusSolution};

pub const MAGIC: &str = "spinorbit-torus v1";

/// A solution read back from disk, with the precision that produced it.
pub struct StoredTorus<S> {
    pub sol: TorusSolution<S>,
    pub bits: u32,
}

pub fn write_torus<S: Scalar>(path: &Path, sol: &TorusSolution<S>) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "{MAGIC}")?;
    writeln!(f, "omega={}", sol.omega.to_decimal_string())?;
    writeln!(f, "eps={}", sol.params.eps.to_decimal_string())?;
    writeln!(f, "eta={}", sol.params.eta.to_decimal_string())?;
    writeln!(f, "ecc={}", sol.ecc.to_decimal_string())?;
    writeln!(f, "lambda={}", sol.lambda.to_decimal_string())?;
    writeln!(f, "n={}", sol.n)?;
    writeln!(f, "prec_bits={}", S::mantissa_bits())?;
    writeln!(f, "err_grid={}", sol.err_grid.to_decimal_string())?;
    writeln!(f, "err_interlaced={}", sol.err_interlaced.to_decimal_string())?;
    let c1 = sol.k.p[0].coeffs();
    let c2 = sol.k.p[1].coeffs();
    for k in 0..sol.n {
        writeln!(
            f,
            "{k} {} {} {} {}",
            c1[k].re.to_decimal_string(),
            c1[k].im.to_decimal_string(),
            c2[k].re.to_decimal_string(),
            c2[k].im.to_decimal_string(),
        )?;
    }
    f.flush()?;
    Ok(())
}

pub fn read_torus<S: Scalar>(path: &Path) -> Result<StoredTorus<S>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| Error::Format("empty file".into()))?;
    if head.trim() != MAGIC {
        return Err(Error::Format(format!("version mismatch: {head:?}, want {MAGIC:?}")));
    }
    let mut field = |name: &str| -> Result<String> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Format(format!("truncated before `{name}=`")))?;
        match line.split_once('=') {
            Some((k, v)) if k == name => Ok(v.to_owned()),
            _ => Err(Error::Format(format!("expected `{name}=…`, found {line:?}"))),
        }
    };
    let omega = S::parse_decimal(&field("omega")?)?;
    let eps = S::parse_decimal(&field("eps")?)?;
    let eta = S::parse_decimal(&field("eta")?)?;
    let ecc = S::parse_decimal(&field("ecc")?)?;
    let lambda = S::parse_decimal(&field("lambda")?)?;
    let n: usize = field("n")?
        .trim()
        .parse()
        .map_err(|e| Error::Format(format!("bad n: {e}")))?;
    let bits: u32 = field("prec_bits")?
        .trim()
        .parse()
        .map_err(|e| Error::Format(format!("bad prec_bits: {e}")))?;
    let err_grid = S::parse_decimal(&field("err_grid")?)?;
    let err_interlaced = S::parse_decimal(&field("err_interlaced")?)?;

    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for k in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Format(format!("truncated at mode {k} of {n}")))?;
        let mut it = line.split_whitespace();
        let idx: usize = it
            .next()
            .ok_or_else(|| Error::Format(format!("empty mode line {k}")))?
            .parse()
            .map_err(|e| Error::Format(format!("bad mode index at line {k}: {e}")))?;
        if idx != k {
            return Err(Error::Format(format!("mode index {idx} out of order, expected {k}")));
        }
        let mut next = || -> Result<S> {
            let tok = it
                .next()
                .ok_or_else(|| Error::Format(format!("mode {k}: missing coefficient")))?;
            S::parse_decimal(tok)
        };
        c1.push(Cx::new(next()?, next()?));
        c2.push(Cx::new(next()?, next()?));
    }

    let p1 = Periodic::from_coeffs(c1)?;
    let p2 = Periodic::from_coeffs(c2)?;
    let k = LiftedCurve::new([true, false], [p1, p2])?;
    let params = ModelParams::new(eps, eta, ecc.clone(), omega.clone())?;
    let sol = TorusSolution {
        k,
        ecc,
        omega,
        lambda,
        err_grid,
        err_interlaced,
        n,
        params,
        model: Model::Full,
        iters: 0,
        converged: true,
        history: Vec::new(),
    };
    Ok(StoredTorus { sol, bits })
}

fn csv_note(note: &Option<String>) -> String {
    match note {
        None => String::new(),
        Some(s) => format!("\"{}\"", s.replace('"', "\"\"")),
    }
}

fn opt_dec<S: Scalar>(v: &Option<S>) -> String {
    v.as_ref().map(Scalar::to_decimal_string).unwrap_or_default()
}

pub fn write_continuation_csv<S: Scalar>(path: &Path, run: &ContinuationRun<S>) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "eps,e,n,E_sup,err_interlaced,iters,seconds")?;
    for r in &run.records {
        writeln!(
            f,
            "{},{},{},{},{},{},{:.6}",
            r.eps.to_decimal_string(),
            r.ecc.to_decimal_string(),
            r.n,
            r.err_grid.to_decimal_string(),
            r.err_interlaced.to_decimal_string(),
            r.iters,
            r.seconds,
        )?;
    }
    f.flush()?;
    Ok(())
}

pub fn write_compare_csv<S: Scalar>(path: &Path, rows: &[CompareRow<S>]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "eps,e_full,e_avg,diff,note")?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{}",
            r.eps.to_decimal_string(),
            opt_dec(&r.e_full),
            opt_dec(&r.e_avg),
            opt_dec(&r.diff),
            csv_note(&r.note),
        )?;
    }
    f.flush()?;
    Ok(())
}

pub fn write_sweep_csv<S: Scalar>(path: &Path, rows: &[SweepRow<S>]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "e,omega_hat,drift_ratio,quality,note")?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{}",
            r.ecc.to_decimal_string(),
            opt_dec(&r.omega_hat),
            r.drift_ratio.to_decimal_string(),
            opt_dec(&r.quality),
            csv_note(&r.note),
        )?;
    }
    f.flush()?;
    Ok(())
}

/// θ, x/π, y rows of the embedded curve: x = 2π·K₁(θ), y in the physical
/// velocity unit of the full model's section chart.
pub fn write_curve_csv<S: Scalar>(path: &Path, sol: &TorusSolution<S>) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "theta,x_over_pi,y")?;
    let xs = sol.k.grid_values(0);
    let ys = sol.k.grid_values(1);
    let n = sol.n;
    let two = S::from_f64(2.0);
    for j in 0..n {
        let theta = S::from_usize(j) / S::from_usize(n);
        let x_over_pi = two.clone() * xs[j].clone();
        let y = S::two_pi() * ys[j].clone();
        writeln!(
            f,
            "{},{},{}",
            theta.to_decimal_string(),
            x_over_pi.to_decimal_string(),
            y.to_decimal_string(),
        )?;
    }
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinorbit_core::model::conformal_factor;
    use spinorbit_core::{MpFloat, ScalarContext};

    fn sample_solution<S: Scalar>(n: usize) -> TorusSolution<S> {
        let third = S::one() / S::from_f64(3.0);
        let g1: Vec<S> = (0..n)
            .map(|j| {
                let t = S::two_pi() * S::from_usize(j) / S::from_usize(n);
                S::from_f64(0.013) * t.sin_cos().0 + third.clone() * S::from_f64(1e-3)
            })
            .collect();
        let g2: Vec<S> = (0..n)
            .map(|j| {
                let t = S::two_pi() * S::from_usize(j) / S::from_usize(n);
                S::from_f64(0.26) + S::from_f64(2e-4) * t.sin_cos().1
            })
            .collect();
        let k = LiftedCurve::graph(
            Periodic::from_grid(g1).unwrap(),
            Periodic::from_grid(g2).unwrap(),
        )
        .unwrap();
        let ecc = S::from_f64(2.0).sqrt().unwrap() - S::one();
        let eta = S::from_f64(1e-3);
        let omega = (S::from_f64(5.0).sqrt().unwrap() + S::one()) * S::from_f64(0.5);
        TorusSolution {
            n,
            lambda: conformal_factor(&ecc, &eta).unwrap(),
            ecc: ecc.clone(),
            omega: omega.clone(),
            err_grid: S::from_f64(3.25e-13),
            err_interlaced: S::from_f64(7.5e-13) * third,
            params: ModelParams::new(S::from_f64(2e-3), eta, ecc, omega).unwrap(),
            model: Model::Full,
            iters: 4,
            converged: true,
            k,
            history: Vec::new(),
        }
    }

    fn assert_round_trip<S: Scalar>(sol: &TorusSolution<S>) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        write_torus(&path, sol).unwrap();
        let back = read_torus::<S>(&path).unwrap();
        assert_eq!(back.bits, S::mantissa_bits());
        assert!(back.sol.omega == sol.omega);
        assert!(back.sol.ecc == sol.ecc);
        assert!(back.sol.lambda == sol.lambda);
        assert!(back.sol.err_grid == sol.err_grid);
        assert!(back.sol.err_interlaced == sol.err_interlaced);
        for c in 0..2 {
            let a = sol.k.p[c].coeffs();
            let b = back.sol.k.p[c].coeffs();
            for k in 0..sol.n {
                assert!(a[k].re == b[k].re && a[k].im == b[k].im, "mode {k} comp {c} drifted");
            }
        }
    }

    #[test]
    fn round_trip_is_identity_at_double() {
        assert_round_trip(&sample_solution::<f64>(32));
    }

    #[test]
    fn round_trip_is_identity_at_96_bits() {
        ScalarContext::new(96).unwrap().activate();
        assert_round_trip(&sample_solution::<MpFloat>(16));
    }

    #[test]
    fn version_and_truncation_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.txt");
        let sol = sample_solution::<f64>(16);
        write_torus(&path, &sol).unwrap();

        let good = fs::read_to_string(&path).unwrap();
        let bad = good.replacen("spinorbit-torus v1", "spinorbit-torus v2", 1);
        fs::write(&path, bad).unwrap();
        assert!(matches!(read_torus::<f64>(&path), Err(Error::Format(_))));

        let cut: String = good.lines().take(12).map(|l| format!("{l}\n")).collect();
        fs::write(&path, cut).unwrap();
        assert!(matches!(read_torus::<f64>(&path), Err(Error::Format(_))));

        let swapped = good.replacen("eps=", "esp=", 1);
        fs::write(&path, swapped).unwrap();
        assert!(matches!(read_torus::<f64>(&path), Err(Error::Format(_))));
    }

    #[test]
    fn curve_csv_has_header_and_physical_ranges() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let sol = sample_solution::<f64>(32);
        write_curve_csv(&path, &sol).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "theta,x_over_pi,y");
        let rows: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 32);
        assert!(rows.iter().all(|r| r[1] >= -0.1 && r[1] < 2.1));
        assert!(rows.iter().all(|r| (r[2] - 0.26 * 2.0 * std::f64::consts::PI).abs() < 0.01));
    }
}
