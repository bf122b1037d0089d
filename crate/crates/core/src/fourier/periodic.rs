//! Real periodic functions on T = R/Z, kept simultaneously as a value grid
//! over θ_j = j/n and as a Hermitian Fourier spectrum.  Every operation
//! refreshes both representations, so grid reads and coefficient reads are
//! always consistent to round-off.

use super::cx::Cx;
use super::fft::{check_power_of_two, forward, signed_freq, symmetrize, synthesize};
use crate::arith::Scalar;
use crate::error::{Error, Result};
use std::ops::{Add, Neg, Sub};

#[derive(Clone, Debug)]
pub struct Periodic<S> {
    n: usize,
    grid: Vec<S>,
    coeffs: Vec<Cx<S>>,
}

impl<S: Scalar> Periodic<S> {
    pub fn from_grid(grid: Vec<S>) -> Result<Self> {
        let coeffs = forward(&grid)?;
        Ok(Periodic { n: grid.len(), grid, coeffs })
    }

    pub fn from_coeffs(mut coeffs: Vec<Cx<S>>) -> Result<Self> {
        check_power_of_two(coeffs.len())?;
        symmetrize(&mut coeffs);
        let grid = synthesize(&coeffs)?;
        Ok(Periodic { n: coeffs.len(), grid, coeffs })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::constant(n, S::zero())
    }

    pub fn constant(n: usize, v: S) -> Result<Self> {
        check_power_of_two(n)?;
        let mut coeffs = vec![Cx::zero(); n];
        coeffs[0] = Cx::from_re(v.clone());
        Ok(Periodic { n, grid: vec![v; n], coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &[S] {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Cx<S>] {
        &self.coeffs
    }

    pub fn mean(&self) -> S {
        self.coeffs[0].re.clone()
    }

    pub fn sup_norm(&self) -> S {
        let mut m = S::zero();
        for v in &self.grid {
            m = m.max_with(&v.abs());
        }
        m
    }

    /// ℓ² norm in coefficient space: √(Σ_k |c_k|²).
    pub fn l2_norm(&self) -> S {
        let mut acc = S::zero();
        for c in &self.coeffs {
            acc = acc + c.norm_sqr();
        }
        acc.sqrt().expect("sum of squares is nonnegative")
    }

    /// Trigonometric-series evaluation at an arbitrary θ (any real lift).
    pub fn eval(&self, theta: &S) -> S {
        let two_pi_t = S::two_pi() * theta.clone();
        let two = S::from_f64(2.0);
        let mut acc = self.coeffs[0].re.clone();
        for k in 1..self.n / 2 {
            let (s, c) = (two_pi_t.clone() * S::from_usize(k)).sin_cos();
            let ck = &self.coeffs[k];
            acc = acc + two.clone() * (ck.re.clone() * c - ck.im.clone() * s);
        }
        let (_, cny) = (two_pi_t * S::from_usize(self.n / 2)).sin_cos();
        acc + self.coeffs[self.n / 2].re.clone() * cny
    }

    /// Composition with the rotation T_ω: coefficients gain e^{2πikω}.
    /// The unpaired Nyquist mode keeps only the real part of its phase
    /// factor, cos(πnω), so the result stays real.
    pub fn shift(&self, omega: &S) -> Self {
        let n = self.n;
        let base = S::two_pi() * omega.clone();
        let mut coeffs = self.coeffs.clone();
        for (k, c) in coeffs.iter_mut().enumerate() {
            let kf = signed_freq(k, n);
            if k == n / 2 {
                let (_, cny) = (base.clone() * S::from_usize(n / 2)).sin_cos();
                *c = c.scale(&cny);
            } else if kf != 0 {
                let ang = base.clone() * S::from_f64(kf as f64);
                *c = c.clone() * Cx::expi(&ang);
            }
        }
        let grid = synthesize(&coeffs).expect("size preserved");
        Periodic { n, grid, coeffs }
    }

    /// d/dθ: coefficient k gains 2πik; the unpaired Nyquist derivative is
    /// taken as 0 (symmetric choice between ±n/2).
    pub fn derivative(&self) -> Self {
        let n = self.n;
        let two_pi = S::two_pi();
        let mut coeffs = vec![Cx::zero(); n];
        for k in 1..n {
            if k == n / 2 {
                continue;
            }
            let kf = two_pi.clone() * S::from_f64(signed_freq(k, n) as f64);
            let c = &self.coeffs[k];
            coeffs[k] = Cx::new(-(c.im.clone() * kf.clone()), c.re.clone() * kf);
        }
        let grid = synthesize(&coeffs).expect("size preserved");
        Periodic { n, grid, coeffs }
    }

    pub fn project_zero_avg(&self) -> Self {
        let m = self.mean();
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = Cx::zero();
        let grid = self.grid.iter().map(|v| v.clone() - m.clone()).collect();
        Periodic { n: self.n, grid, coeffs }
    }

    pub fn plus_const(&self, v: &S) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0].re = coeffs[0].re.clone() + v.clone();
        let grid = self.grid.iter().map(|g| g.clone() + v.clone()).collect();
        Periodic { n: self.n, grid, coeffs }
    }

    pub fn scale(&self, s: &S) -> Self {
        Periodic {
            n: self.n,
            grid: self.grid.iter().map(|g| g.clone() * s.clone()).collect(),
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Pointwise product on the grid; the spectrum is recomputed, so callers
    /// are responsible for aliasing headroom.
    pub fn mul_grid(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::domain("mul_grid", format!("mesh mismatch {} vs {}", self.n, other.n)));
        }
        let grid: Vec<S> = self
            .grid
            .iter()
            .zip(&other.grid)
            .map(|(a, b)| a.clone() * b.clone())
            .collect();
        Self::from_grid(grid)
    }

    /// Spectral resampling to mesh size m: pad with zeros or truncate.
    /// The Nyquist coefficient splits in half on the way up and the ±m/2
    /// pair merges on the way down, so up-then-down is the identity.
    pub fn resample(&self, m: usize) -> Result<Self> {
        check_power_of_two(m)?;
        let n = self.n;
        if m == n {
            return Ok(self.clone());
        }
        let mut out = vec![Cx::zero(); m];
        if m > n {
            for k in 0..n {
                let kf = signed_freq(k, n);
                if k == n / 2 {
                    let half = self.coeffs[k].scale(&S::from_f64(0.5));
                    out[n / 2] = half.clone();
                    out[m - n / 2] = half;
                } else {
                    let idx = if kf >= 0 { kf as usize } else { (m as i64 + kf) as usize };
                    out[idx] = self.coeffs[k].clone();
                }
            }
        } else {
            for (idx, o) in out.iter_mut().enumerate() {
                let kf = signed_freq(idx, m);
                if idx == m / 2 {
                    let up = self.coeffs[m / 2].clone();
                    let dn = self.coeffs[n - m / 2].clone();
                    *o = up + dn;
                } else {
                    let src = if kf >= 0 { kf as usize } else { (n as i64 + kf) as usize };
                    *o = self.coeffs[src].clone();
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// Values on the interlaced mesh θ_j + 1/(2n): shift by half a spacing.
    pub fn interlaced_grid(&self) -> Vec<S> {
        let half_step = S::one() / S::from_usize(2 * self.n);
        self.shift(&half_step).grid.clone()
    }

    /// Max |c_k| over the top `fraction` of mode magnitudes |k|.
    pub fn tail_norm(&self, fraction: f64) -> S {
        let half = self.n / 2;
        let kmin = (((1.0 - fraction) * half as f64).ceil() as usize).clamp(1, half);
        let mut m = S::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if signed_freq(k, self.n).unsigned_abs() as usize >= kmin {
                m = m.max_with(&c.abs());
            }
        }
        m
    }
}

impl<S: Scalar> Add for &Periodic<S> {
    type Output = Periodic<S>;
    fn add(self, rhs: &Periodic<S>) -> Periodic<S> {
        assert_eq!(self.n, rhs.n, "mesh mismatch");
        Periodic {
            n: self.n,
            grid: self.grid.iter().zip(&rhs.grid).map(|(a, b)| a.clone() + b.clone()).collect(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Periodic<S> {
    type Output = Periodic<S>;
    fn sub(self, rhs: &Periodic<S>) -> Periodic<S> {
        assert_eq!(self.n, rhs.n, "mesh mismatch");
        Periodic {
            n: self.n,
            grid: self.grid.iter().zip(&rhs.grid).map(|(a, b)| a.clone() - b.clone()).collect(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Periodic<S> {
    type Output = Periodic<S>;
    fn neg(self) -> Periodic<S> {
        Periodic {
            n: self.n,
            grid: self.grid.iter().map(|a| -a.clone()).collect(),
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }
}

/// Solve φ∘T_ω − φ = rhs for zero-average rhs (Fourier-diagonal, φ₀ = 0).
/// Returns the solution and the smallest divisor |e^{2πikω} − 1| met.
pub fn cohomology_zero_avg<S: Scalar>(rhs: &Periodic<S>, omega: &S) -> Result<(Periodic<S>, S)> {
    let sup = rhs.sup_norm();
    let gate = S::from_f64(100.0) * S::epsilon() * sup.clone();
    if rhs.mean().abs() > gate {
        return Err(Error::NonZeroMean(format!(
            "cohomology rhs mean {} exceeds 100·ε·‖rhs‖ = {}",
            rhs.mean(),
            gate
        )));
    }
    let n = rhs.n();
    let base = S::two_pi() * omega.clone();
    let mut out = vec![Cx::zero(); n];
    let mut min_div: Option<S> = None;
    for k in 1..n {
        let div = if k == n / 2 {
            let (_, cny) = (base.clone() * S::from_usize(n / 2)).sin_cos();
            Cx::from_re(cny - S::one())
        } else {
            let ang = base.clone() * S::from_f64(signed_freq(k, n) as f64);
            Cx::expi(&ang) - Cx::from_re(S::one())
        };
        let d = div.abs();
        min_div = Some(match min_div {
            None => d.clone(),
            Some(m) => m.min_with(&d),
        });
        out[k] = cx_div(&rhs.coeffs()[k], &div)?;
    }
    Ok((Periodic::from_coeffs(out)?, min_div.unwrap_or_else(S::zero)))
}

/// Solve φ∘T_ω − λφ = rhs for λ ∈ [0,1); all modes are solvable since
/// |e^{2πikω} − λ| ≥ 1 − λ > 0.  λ = 1 is rejected unless rhs has zero mean
/// (that case belongs to [`cohomology_zero_avg`]).
pub fn cohomology_lambda<S: Scalar>(
    rhs: &Periodic<S>,
    omega: &S,
    lambda: &S,
) -> Result<(Periodic<S>, S)> {
    if *lambda < S::zero() || *lambda > S::one() {
        return Err(Error::domain("cohomology_lambda", format!("lambda {lambda} outside [0,1]")));
    }
    if *lambda == S::one() {
        return Err(Error::domain(
            "cohomology_lambda",
            "lambda = 1 reduces to the zero-average solver",
        ));
    }
    let n = rhs.n();
    let base = S::two_pi() * omega.clone();
    let mut out = vec![Cx::zero(); n];
    let mut min_div = S::one() - lambda.clone();
    out[0] = rhs.coeffs()[0].scale(&(S::one() / (S::one() - lambda.clone())));
    for k in 1..n {
        let div = if k == n / 2 {
            let (_, cny) = (base.clone() * S::from_usize(n / 2)).sin_cos();
            Cx::from_re(cny - lambda.clone())
        } else {
            let ang = base.clone() * S::from_f64(signed_freq(k, n) as f64);
            Cx::expi(&ang) - Cx::from_re(lambda.clone())
        };
        min_div = min_div.min_with(&div.abs());
        out[k] = cx_div(&rhs.coeffs()[k], &div)?;
    }
    Ok((Periodic::from_coeffs(out)?, min_div))
}

fn cx_div<S: Scalar>(a: &Cx<S>, b: &Cx<S>) -> Result<Cx<S>> {
    let nsq = b.norm_sqr();
    if nsq.is_zero() {
        return Err(Error::domain("cohomology", "vanishing divisor: resonant omega"));
    }
    let num = a.clone() * b.conj();
    Ok(Cx::new(num.re.div_checked(&nsq)?, num.im.div_checked(&nsq)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;
    const GOLDEN_FRAC: f64 = 0.618033988749894848; // (√5−1)/2 = ω₁ mod 1

    fn cos_curve(n: usize, amp: f64) -> Periodic<f64> {
        let grid: Vec<f64> = (0..n).map(|j| amp * (2.0 * PI * j as f64 / n as f64).cos()).collect();
        Periodic::from_grid(grid).unwrap()
    }

    fn band_limited(n: usize, seed: u64) -> Periodic<f64> {
        let mut state = seed;
        let mut coeffs = vec![Cx::zero(); n];
        for k in 1..n / 4 {
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let c = Cx::new(next(), next());
            coeffs[k] = c.clone();
            coeffs[n - k] = c.conj();
        }
        Periodic::from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn eval_matches_cosine() {
        let p = cos_curve(32, 1.0);
        for theta in [0.0, 0.13, 0.5, 0.77, 1.4, -0.3] {
            assert!((p.eval(&theta) - (2.0 * PI * theta).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn shift_zero_is_identity() {
        let p = band_limited(64, 1);
        let q = p.shift(&0.0);
        for (a, b) in p.grid().iter().zip(q.grid()) {
            assert!((a - b).abs() <= 10.0 * 64.0 * f64::EPSILON);
        }
    }

    #[test]
    fn half_shift_negates_fundamental() {
        let p = cos_curve(16, 1.0);
        let q = p.shift(&0.5);
        for (j, v) in q.grid().iter().enumerate() {
            let expect = -(2.0 * PI * j as f64 / 16.0).cos();
            assert!((v - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn shift_composes_to_identity() {
        let p = band_limited(64, 2);
        let q = p.shift(&GOLDEN_FRAC).shift(&-GOLDEN_FRAC);
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            assert!((a.clone() - b.clone()).abs() <= 20.0 * f64::EPSILON);
        }
        for (a, b) in p.grid().iter().zip(q.grid()) {
            assert!((a - b).abs() <= 20.0 * 64.0 * f64::EPSILON);
        }
    }

    #[test]
    fn shift_matches_pointwise_eval() {
        let p = band_limited(64, 3);
        let q = p.shift(&GOLDEN_FRAC);
        for j in [0usize, 5, 17, 40] {
            let theta = j as f64 / 64.0 + GOLDEN_FRAC;
            assert!((q.grid()[j] - p.eval(&theta)).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_is_unitary_without_nyquist() {
        for seed in 1..20u64 {
            let p = band_limited(32, seed);
            let omega = 0.05 * seed as f64;
            let q = p.shift(&omega);
            assert!((p.l2_norm() - q.l2_norm()).abs() <= 8.0 * f64::EPSILON * p.l2_norm());
        }
    }

    #[test]
    fn derivative_of_sine() {
        let n = 32;
        let grid: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).sin()).collect();
        let p = Periodic::from_grid(grid).unwrap();
        let d = p.derivative();
        for (j, v) in d.grid().iter().enumerate() {
            let expect = 2.0 * PI * (2.0 * PI * j as f64 / n as f64).cos();
            assert!((v - expect).abs() < 1e-12);
        }
        let z = Periodic::constant(8, 3.0).unwrap().derivative();
        assert_eq!(z.sup_norm(), 0.0);
    }

    #[test]
    fn derivative_parseval_at_256() {
        let p = band_limited(256, 4);
        let d = p.derivative();
        let lhs = d.l2_norm().powi(2);
        let mut rhs = 0.0;
        for (k, c) in p.coeffs().iter().enumerate() {
            if k == 128 {
                continue;
            }
            let kf = 2.0 * PI * signed_freq(k, 256) as f64;
            rhs += kf * kf * c.norm_sqr();
        }
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn cohomology_zero_avg_trivial_and_residual() {
        let z = Periodic::zero(32).unwrap();
        let (phi, _) = cohomology_zero_avg(&z, &GOLDEN_FRAC).unwrap();
        assert_eq!(phi.sup_norm(), 0.0);

        let rhs = cos_curve(64, 1.0);
        let (phi, min_div) = cohomology_zero_avg(&rhs, &GOLDEN_FRAC).unwrap();
        assert_eq!(phi.mean(), 0.0);
        assert!(min_div > 0.0);
        let res = &(&phi.shift(&GOLDEN_FRAC) - &phi) - &rhs;
        assert!(res.sup_norm() <= 1e-12);
    }

    #[test]
    fn cohomology_zero_avg_random_rhs_residual() {
        for seed in [5u64, 6, 7] {
            let rhs = band_limited(128, seed).project_zero_avg();
            let (phi, _) = cohomology_zero_avg(&rhs, &GOLDEN_FRAC).unwrap();
            let res = &(&phi.shift(&GOLDEN_FRAC) - &phi) - &rhs;
            let bound = (1e-12f64).max(100.0 * 128.0 * f64::EPSILON) * rhs.sup_norm();
            assert!(res.sup_norm() <= bound);
        }
    }

    #[test]
    fn cohomology_zero_avg_rejects_mean() {
        let rhs = cos_curve(32, 1.0).plus_const(&0.25);
        match cohomology_zero_avg(&rhs, &GOLDEN_FRAC) {
            Err(crate::error::Error::NonZeroMean(_)) => {}
            other => panic!("expected NonZeroMean, got {other:?}"),
        }
    }

    #[test]
    fn cohomology_single_mode_divisor_bound() {
        // golden mean: |kω − q| ≥ (√5+2)⁻¹/k, so |e^{2πikω}−1| ≥ 4·dist ≥ 0.9/k
        let n = 128;
        for k in [1usize, 2, 3, 5, 8, 13, 21, 34, 55] {
            let mut coeffs = vec![Cx::zero(); n];
            coeffs[k] = Cx::new(0.5, 0.0);
            coeffs[n - k] = Cx::new(0.5, 0.0);
            let rhs = Periodic::from_coeffs(coeffs).unwrap();
            let (phi, min_div) = cohomology_zero_avg(&rhs, &GOLDEN_FRAC).unwrap();
            let div = (Cx::expi(&(2.0 * PI * k as f64 * GOLDEN_FRAC)) - Cx::from_re(1.0)).abs();
            let expect = 0.5 / div;
            // relative: the divisor angle rounds differently across paths
            assert!((phi.coeffs()[k].abs() - expect).abs() < 5e-10 * (1.0 + expect));
            let dist = (k as f64 * GOLDEN_FRAC - (k as f64 * GOLDEN_FRAC).round()).abs();
            assert!(div >= 4.0 * dist - 1e-12);
            assert!(dist >= 1.0 / ((5f64.sqrt() + 2.0) * k as f64) - 1e-12);
            assert!(min_div <= div + 1e-15);
        }
    }

    #[test]
    fn cohomology_lambda_constant_and_shift_limit() {
        let rhs = Periodic::constant(16, 2.0).unwrap();
        let (phi, min_div) = cohomology_lambda(&rhs, &GOLDEN_FRAC, &0.75).unwrap();
        assert!((phi.mean() - 8.0).abs() < 1e-14);
        // the k=0 divisor is 1−λ; the Nyquist real-part divisor may be smaller
        assert!(min_div <= 0.25 + 1e-15 && min_div > 0.01);

        let rhs = band_limited(32, 9);
        let (phi, _) = cohomology_lambda(&rhs, &GOLDEN_FRAC, &0.0).unwrap();
        let direct = rhs.shift(&-GOLDEN_FRAC);
        assert!((&phi - &direct).sup_norm() <= 1e-13);
    }

    #[test]
    fn cohomology_lambda_residual() {
        let silver = 1.0 + 1.0 / (2.0 + (5f64.sqrt() - 1.0) / 2.0);
        let rhs = cos_curve(64, 1.0);
        let lam = 0.99;
        let (phi, _) = cohomology_lambda(&rhs, &silver, &lam).unwrap();
        let res = &(&phi.shift(&silver) - &phi.scale(&lam)) - &rhs;
        assert!(res.sup_norm() <= 1e-12);
    }

    #[test]
    fn cohomology_lambda_rejects_unit_lambda() {
        let rhs = Periodic::constant(16, 1.0).unwrap();
        assert!(cohomology_lambda(&rhs, &GOLDEN_FRAC, &1.0).is_err());
    }

    #[test]
    fn tail_norm_band_limited_and_noise() {
        let p = band_limited(64, 10);
        assert!(p.tail_norm(0.25) <= 10.0 * 64.0 * f64::EPSILON);

        let mut state = 42u64;
        let grid: Vec<f64> = (0..128)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let noise = Periodic::from_grid(grid).unwrap();
        assert!(noise.tail_norm(0.25) > 1e-3);
    }

    #[test]
    fn tail_norm_halves_in_log_for_analytic_curve() {
        // f = 1/(1.25 + cos 2πθ): geometric coefficients with ratio 1/2
        let curve = |n: usize| {
            let grid: Vec<f64> = (0..n)
                .map(|j| 1.0 / (1.25 + (2.0 * PI * j as f64 / n as f64).cos()))
                .collect();
            Periodic::from_grid(grid).unwrap()
        };
        let t32 = curve(32).tail_norm(0.25);
        let t64 = curve(64).tail_norm(0.25);
        let t128 = curve(128).tail_norm(0.25);
        assert!(t32 < 1.0 && t64 < t32 && t128 < t64);
        assert!(t64.ln() <= 1.7 * t32.ln());
        assert!(t128.ln() <= 1.7 * t64.ln());
    }

    #[test]
    fn resample_round_trip_and_band_limit() {
        let p = band_limited(32, 11);
        let up = p.resample(64).unwrap();
        for j in 0..32 {
            assert!((up.grid()[2 * j] - p.grid()[j]).abs() <= 10.0 * 64.0 * f64::EPSILON);
        }
        let back = up.resample(32).unwrap();
        for (a, b) in p.grid().iter().zip(back.grid()) {
            assert!((a - b).abs() <= 10.0 * 64.0 * f64::EPSILON);
        }
    }

    #[test]
    fn interlaced_grid_hits_midpoints() {
        let p = cos_curve(32, 1.0);
        let mid = p.interlaced_grid();
        for (j, v) in mid.iter().enumerate() {
            let theta = (j as f64 + 0.5) / 32.0;
            assert!((v - (2.0 * PI * theta).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn mul_grid_is_pointwise() {
        let a = cos_curve(32, 2.0);
        let b = cos_curve(32, 3.0);
        let p = a.mul_grid(&b).unwrap();
        for (j, v) in p.grid().iter().enumerate() {
            let c = (2.0 * PI * j as f64 / 32.0).cos();
            assert!((v - 6.0 * c * c).abs() < 1e-13);
        }
        // cos² = ½ + ½cos(4πθ): spectrum shows the mean
        assert!((p.mean() - 3.0).abs() < 1e-13);
    }
}
