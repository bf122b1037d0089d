//! Iterative radix-2 Cooley-Tukey transform, power-of-two sizes only.
//!
//! Analysis convention: `forward` maps a real grid f_j over θ_j = j/n to
//! coefficients c_k = (1/n) Σ_j f_j e^{−2πijk/n}, Hermitian-symmetrized so
//! that synthesis f_j = Σ_k c_k e^{2πijk/n} is exactly real.

use super::cx::Cx;
use crate::arith::Scalar;
use crate::error::{Error, Result};

pub fn check_power_of_two(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::domain("fft", format!("mesh size {n} is not a power of two ≥ 2")));
    }
    Ok(())
}

/// In-place transform; `inverse = false` uses the e^{−2πi…} kernel (no
/// normalization — callers scale), `inverse = true` uses e^{+2πi…}.
pub fn fft_in_place<S: Scalar>(data: &mut [Cx<S>], inverse: bool) -> Result<()> {
    let n = data.len();
    check_power_of_two(n)?;

    // bit-reversal permutation
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    // twiddle table w_j = e^{±2πij/n}, built fresh each call
    let sign = if inverse { S::one() } else { -S::one() };
    let base = sign * S::two_pi() / S::from_usize(n);
    let tw: Vec<Cx<S>> = (0..n / 2)
        .map(|j| Cx::expi(&(base.clone() * S::from_usize(j))))
        .collect();

    let mut len = 2;
    while len <= n {
        let stride = n / len;
        let half = len / 2;
        let mut start = 0;
        while start < n {
            for j in 0..half {
                let w = &tw[j * stride];
                let a = data[start + j].clone();
                let b = data[start + j + half].clone() * w.clone();
                data[start + j] = a.clone() + b.clone();
                data[start + j + half] = a - b;
            }
            start += len;
        }
        len <<= 1;
    }
    Ok(())
}

/// Real grid → Hermitian coefficient spectrum with the 1/n analysis factor.
pub fn forward<S: Scalar>(grid: &[S]) -> Result<Vec<Cx<S>>> {
    let n = grid.len();
    check_power_of_two(n)?;
    let mut data: Vec<Cx<S>> = grid.iter().map(|v| Cx::from_re(v.clone())).collect();
    fft_in_place(&mut data, false)?;
    let inv_n = S::one() / S::from_usize(n);
    for c in data.iter_mut() {
        *c = c.scale(&inv_n);
    }
    symmetrize(&mut data);
    Ok(data)
}

/// Coefficients → real grid (imaginary residue of the synthesis is dropped;
/// callers symmetrize first when the spectrum may be slightly off-Hermitian).
pub fn synthesize<S: Scalar>(coeffs: &[Cx<S>]) -> Result<Vec<S>> {
    let mut data = coeffs.to_vec();
    fft_in_place(&mut data, true)?;
    Ok(data.into_iter().map(|c| c.re).collect())
}

/// Enforce c_{n−k} = conj(c_k) exactly (real c₀ and Nyquist), averaging the
/// rounding noise of a real-input forward pass.
pub fn symmetrize<S: Scalar>(coeffs: &mut [Cx<S>]) {
    let n = coeffs.len();
    let half = S::from_f64(0.5);
    coeffs[0].im = S::zero();
    if n >= 2 {
        coeffs[n / 2].im = S::zero();
    }
    for k in 1..n / 2 {
        let a = coeffs[k].clone();
        let b = coeffs[n - k].clone();
        let avg = (a + b.conj()).scale(&half);
        coeffs[k] = avg.clone();
        coeffs[n - k] = avg.conj();
    }
}

/// Signed frequency of storage index k: k for k ≤ n/2, k − n above.
/// The Nyquist index n/2 reports +n/2; operations that depend on its sign
/// apply their own symmetric policy.
pub fn signed_freq(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::MpFloat;

    fn dft_naive<S: Scalar>(grid: &[S]) -> Vec<Cx<S>> {
        let n = grid.len();
        let inv_n = S::one() / S::from_usize(n);
        (0..n)
            .map(|k| {
                let mut acc = Cx::zero();
                for (j, f) in grid.iter().enumerate() {
                    let ang = -S::two_pi() * S::from_usize(j * k % n) / S::from_usize(n);
                    acc = acc + Cx::expi(&ang).scale(f);
                }
                acc.scale(&inv_n)
            })
            .collect()
    }

    fn lcg_grid(n: usize, mut state: u64) -> Vec<f64> {
        (0..n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect()
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(forward(&vec![0.0f64; 12]).is_err());
        assert!(forward(&vec![0.0f64; 1]).is_err());
    }

    #[test]
    fn constant_grid_transforms_to_delta() {
        let c = forward(&vec![2.5f64; 8]).unwrap();
        assert!((c[0].re - 2.5).abs() < 8.0 * f64::EPSILON);
        for k in 1..8 {
            assert!(c[k].abs() < 8.0 * f64::EPSILON);
        }
    }

    #[test]
    fn cosine_grid_splits_into_conjugate_pair() {
        let n = 16;
        let grid: Vec<f64> = (0..n)
            .map(|j| (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
            .collect();
        let c = forward(&grid).unwrap();
        assert!((c[1].re - 0.5).abs() < 1e-15);
        assert!((c[n - 1].re - 0.5).abs() < 1e-15);
        for (k, ck) in c.iter().enumerate() {
            if k != 1 && k != n - 1 {
                assert!(ck.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matches_naive_dft_f64() {
        let grid = lcg_grid(64, 7);
        let fast = forward(&grid).unwrap();
        let slow = dft_naive(&grid);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a.clone() - b.clone()).abs() < 64.0 * f64::EPSILON);
        }
    }

    #[test]
    fn matches_naive_dft_mp() {
        crate::arith::mp::set_thread_precision(160);
        let grid: Vec<MpFloat> =
            lcg_grid(32, 99).into_iter().map(MpFloat::from_f64).collect();
        let fast = forward(&grid).unwrap();
        let slow = dft_naive(&grid);
        let tol = MpFloat::from_f64(64.0) * MpFloat::epsilon();
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a.clone() - b.clone()).abs() < tol);
        }
    }

    #[test]
    fn round_trip_error_at_1024() {
        let grid = lcg_grid(1024, 3);
        let c = forward(&grid).unwrap();
        let back = synthesize(&c).unwrap();
        let bound = 10.0 * 1024.0 * f64::EPSILON;
        for (a, b) in grid.iter().zip(&back) {
            assert!((a - b).abs() <= bound);
        }
    }

    #[test]
    fn spectrum_is_hermitian() {
        let grid = lcg_grid(128, 11);
        let c = forward(&grid).unwrap();
        assert_eq!(c[0].im, 0.0);
        assert_eq!(c[64].im, 0.0);
        for k in 1..64 {
            assert_eq!(c[k].re, c[128 - k].re);
            assert_eq!(c[k].im, -c[128 - k].im);
        }
    }

    #[test]
    fn timing_slope_is_quasilinear() {
        // min-of-reps timing over n = 2⁶ … 2¹³; least-squares log-log slope
        use std::time::Instant;
        let sizes: Vec<usize> = (6..=13).map(|p| 1usize << p).collect();
        let mut pts = Vec::new();
        for &n in &sizes {
            let grid = lcg_grid(n, 5);
            let reps = (1 << 18) / n;
            let mut best = f64::INFINITY;
            for _ in 0..5 {
                let t0 = Instant::now();
                for _ in 0..reps {
                    let c = forward(&grid).unwrap();
                    std::hint::black_box(&c);
                }
                let dt = t0.elapsed().as_secs_f64() / reps as f64;
                best = best.min(dt);
            }
            pts.push(((n as f64).ln(), best.ln()));
        }
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        assert!(slope < 1.2, "log-log timing slope {slope}");
    }
}
