use super::periodic::Periodic;
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Embedding K: T → T × R stored as an optional linear part θ per component
/// plus two real periodic parts: K_i(θ) = linear_i·θ + p_i(θ), so that
/// K(θ+1) = K(θ) + (linear₁, linear₂).
#[derive(Clone, Debug)]
pub struct LiftedCurve<S> {
    pub linear: [bool; 2],
    pub p: [Periodic<S>; 2],
}

impl<S: Scalar> LiftedCurve<S> {
    pub fn new(linear: [bool; 2], p: [Periodic<S>; 2]) -> Result<Self> {
        if p[0].n() != p[1].n() {
            return Err(Error::domain(
                "LiftedCurve",
                format!("component meshes differ: {} vs {}", p[0].n(), p[1].n()),
            ));
        }
        Ok(LiftedCurve { linear, p })
    }

    /// The standard torus chart: K(θ) = (θ + p₁(θ), p₂(θ)).
    pub fn graph(p1: Periodic<S>, p2: Periodic<S>) -> Result<Self> {
        Self::new([true, false], [p1, p2])
    }

    pub fn n(&self) -> usize {
        self.p[0].n()
    }

    pub fn eval(&self, theta: &S) -> [S; 2] {
        let mut out = [self.p[0].eval(theta), self.p[1].eval(theta)];
        for i in 0..2 {
            if self.linear[i] {
                out[i] = out[i].clone() + theta.clone();
            }
        }
        out
    }

    /// Gridpoint values including the linear part, θ_j = j/n.
    pub fn grid_values(&self, comp: usize) -> Vec<S> {
        let n = self.n();
        self.p[comp]
            .grid()
            .iter()
            .enumerate()
            .map(|(j, v)| {
                if self.linear[comp] {
                    v.clone() + S::from_usize(j) / S::from_usize(n)
                } else {
                    v.clone()
                }
            })
            .collect()
    }

    /// K∘T_ω: periodic parts shifted; a linear component picks up the
    /// constant ω from (θ+ω) + p(θ+ω).
    pub fn shift(&self, omega: &S) -> Self {
        let mut p = [self.p[0].shift(omega), self.p[1].shift(omega)];
        for (i, comp) in p.iter_mut().enumerate() {
            if self.linear[i] {
                *comp = comp.plus_const(omega);
            }
        }
        LiftedCurve { linear: self.linear, p }
    }

    /// DK = (linear₁ + p₁′, linear₂ + p₂′): a pair of plain periodic
    /// functions.
    pub fn derivative(&self) -> [Periodic<S>; 2] {
        let mut d = [self.p[0].derivative(), self.p[1].derivative()];
        for (i, comp) in d.iter_mut().enumerate() {
            if self.linear[i] {
                *comp = comp.plus_const(&S::one());
            }
        }
        d
    }

    pub fn resample(&self, m: usize) -> Result<Self> {
        Ok(LiftedCurve {
            linear: self.linear,
            p: [self.p[0].resample(m)?, self.p[1].resample(m)?],
        })
    }

    /// Sup distance of the periodic parts (the linear parts must agree).
    pub fn sup_distance(&self, other: &Self) -> Result<S> {
        if self.linear != other.linear {
            return Err(Error::domain("sup_distance", "linear parts differ"));
        }
        if self.n() != other.n() {
            return Err(Error::domain("sup_distance", "mesh sizes differ"));
        }
        let d0 = (&self.p[0] - &other.p[0]).sup_norm();
        let d1 = (&self.p[1] - &other.p[1]).sup_norm();
        Ok(d0.max_with(&d1))
    }

    pub fn max_tail_norm(&self, fraction: f64) -> S {
        self.p[0].tail_norm(fraction).max_with(&self.p[1].tail_norm(fraction))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn sample_curve() -> LiftedCurve<f64> {
        let n = 32;
        let p1: Vec<f64> = (0..n).map(|j| 0.1 * (2.0 * PI * j as f64 / n as f64).sin()).collect();
        let p2: Vec<f64> =
            (0..n).map(|j| 1.4 + 0.2 * (2.0 * PI * j as f64 / n as f64).cos()).collect();
        LiftedCurve::graph(Periodic::from_grid(p1).unwrap(), Periodic::from_grid(p2).unwrap())
            .unwrap()
    }

    #[test]
    fn periodicity_offset() {
        let k = sample_curve();
        for theta in [0.1, 0.37, 0.9] {
            let a = k.eval(&theta);
            let b = k.eval(&(theta + 1.0));
            assert!((b[0] - a[0] - 1.0).abs() < 1e-12);
            assert!((b[1] - a[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_matches_shifted_eval() {
        let k = sample_curve();
        let omega = 0.618033988749895;
        let ks = k.shift(&omega);
        for theta in [0.0, 0.25, 0.6] {
            let a = ks.eval(&theta);
            let b = k.eval(&(theta + omega));
            assert!((a[0] - b[0]).abs() < 1e-12);
            assert!((a[1] - b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_mean_tracks_linear_part() {
        let k = sample_curve();
        let d = k.derivative();
        assert!((d[0].mean() - 1.0).abs() < 1e-14);
        assert!(d[1].mean().abs() < 1e-14);
        // dK₁/dθ at θ=0: 1 + 0.1·2π cos(0)
        assert!((d[0].grid()[0] - (1.0 + 0.2 * PI)).abs() < 1e-12);
    }

    #[test]
    fn grid_values_include_linear_ramp() {
        let k = sample_curve();
        let g = k.grid_values(0);
        for j in [0usize, 7, 31] {
            let theta = j as f64 / 32.0;
            assert!((g[j] - (theta + 0.1 * (2.0 * PI * theta).sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_preserves_eval() {
        let k = sample_curve();
        let up = k.resample(128).unwrap();
        for theta in [0.11, 0.52, 0.93] {
            let a = k.eval(&theta);
            let b = up.eval(&theta);
            assert!((a[0] - b[0]).abs() < 1e-11);
            assert!((a[1] - b[1]).abs() < 1e-11);
        }
    }
}
