//! Exponential radial grid r = r0(e^s − 1) with uniform steps in s.
//!
//! A reduced radial function p(r) (so that ‖u‖² = ∫ p² dr) is stored as
//! y_k = p(r_k) √w_k with w = dr/ds = r + r0. Then ⟨y, z⟩ = h Σ y_k z_k
//! and the kinetic energy ∫ p′² dr equals h fᵀKf with f = y/w and
//! K = −d²/ds² + ¼, discretized by a fourth-order five-point stencil with
//! an odd ghost value at s = 0 and a Dirichlet wall at rmax.

use serde::{Deserialize, Serialize};

use crate::atom::banded::SymBand5;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub points: usize,
    pub rmax: f64,
    pub r0: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points: 800,
            rmax: 2000.0,
            r0: 0.002,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    config: GridConfig,
    step: f64,
    r: Vec<f64>,
    w: Vec<f64>,
}

impl RadialGrid {
    pub fn new(config: GridConfig) -> Result<Self> {
        if config.points < 10 {
            return invalid("a radial grid needs at least 10 points");
        }
        if !(config.r0 > 0.0 && config.rmax > config.r0) {
            return invalid("grid requires 0 < r0 < rmax");
        }
        let n = config.points;
        let smax = (config.rmax / config.r0 + 1.0).ln();
        let step = smax / (n + 1) as f64;
        let r: Vec<f64> = (1..=n).map(|k| config.r0 * ((k as f64 * step).exp() - 1.0)).collect();
        let w = r.iter().map(|x| x + config.r0).collect();
        Ok(RadialGrid { config, step, r, w })
    }

    pub fn with_points(points: usize) -> Result<Self> {
        Self::new(GridConfig {
            points,
            ..GridConfig::default()
        })
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> &[f64] {
        &self.r
    }

    /// dr/ds at each point.
    pub fn jacobian(&self) -> &[f64] {
        &self.w
    }

    /// Quadrature weights for ∫ · dr.
    pub fn weights(&self) -> Vec<f64> {
        self.w.iter().map(|w| w * self.step).collect()
    }

    /// The same grid in coordinates scaled by 1/z.
    pub fn scaled(&self, z: f64) -> Result<Self> {
        if !(z > 0.0) {
            return invalid("scale factor must be positive");
        }
        Self::new(GridConfig {
            points: self.config.points,
            rmax: self.config.rmax / z,
            r0: self.config.r0 / z,
        })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.r
            .iter()
            .zip(&self.w)
            .map(|(&r, &w)| f(r) * w)
            .sum::<f64>()
            * self.step
    }

    /// y = p √w.
    pub fn from_reduced(&self, p: impl Fn(f64) -> f64) -> Vec<f64> {
        self.r.iter().zip(&self.w).map(|(&r, &w)| p(r) * w.sqrt()).collect()
    }

    /// p = y / √w.
    pub fn reduced(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.w).map(|(v, w)| v / w.sqrt()).collect()
    }

    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * self.step
    }

    pub fn norm_sq(&self, a: &[f64]) -> f64 {
        self.dot(a, a)
    }

    /// Kinetic stencil K on f-values (before the 1/w scaling).
    pub fn stencil(&self) -> SymBand5 {
        let n = self.len();
        let h2 = self.step * self.step;
        let mut diag = vec![2.5 / h2 + 0.25; n];
        // odd ghost f(−h) = −f(h) folds the far-left coefficient into row 0
        diag[0] -= 1.0 / (12.0 * h2);
        SymBand5 {
            diag,
            off1: vec![-4.0 / (3.0 * h2); n - 1],
            off2: vec![1.0 / (12.0 * h2); n - 2],
        }
    }

    /// Symmetric operator on y-vectors: W⁻¹KW⁻¹ + diag(v).
    pub fn operator(&self, v: &[f64]) -> SymBand5 {
        let k = self.stencil();
        let w = &self.w;
        let n = self.len();
        SymBand5 {
            diag: (0..n).map(|i| k.diag[i] / (w[i] * w[i]) + v[i]).collect(),
            off1: (0..n - 1).map(|i| k.off1[i] / (w[i] * w[i + 1])).collect(),
            off2: (0..n - 2).map(|i| k.off2[i] / (w[i] * w[i + 2])).collect(),
        }
    }

    /// ∫ p′² dr for the function stored as y.
    pub fn kinetic(&self, y: &[f64]) -> f64 {
        let f: Vec<f64> = y.iter().zip(&self.w).map(|(a, w)| a / w).collect();
        let kf = self.stencil().apply(&f);
        self.dot(&f, &kf)
    }

    /// ∫ p² v dr.
    pub fn potential(&self, y: &[f64], v: &[f64]) -> f64 {
        y.iter().zip(v).map(|(a, b)| a * a * b).sum::<f64>() * self.step
    }

    /// −1/r + ℓ(ℓ+1)/r².
    pub fn bare_potential(&self, l: usize) -> Vec<f64> {
        let c = (l * (l + 1)) as f64;
        self.r.iter().map(|r| -1.0 / r + c / (r * r)).collect()
    }

    /// Multipole potential V(r_i) = Σ_j m_j r_<^ℓ / r_>^{ℓ+1} of point masses
    /// m_j; the self term j = i counts as inner.
    pub fn multipole_potential(&self, mass: &[f64], l: usize) -> Vec<f64> {
        let n = self.len();
        let r = &self.r;
        let li = l as i32;
        let mut out = vec![0.0; n];
        let mut inner = 0.0;
        for i in 0..n {
            inner += mass[i] * r[i].powi(li);
            out[i] = inner / r[i].powi(li + 1);
        }
        let mut outer = 0.0;
        for i in (0..n).rev() {
            out[i] += outer * r[i].powi(li);
            outer += mass[i] / r[i].powi(li + 1);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = RadialGrid::with_points(800).unwrap();
        assert_eq!(g.len(), 800);
        assert!(g.points().windows(2).all(|p| p[0] < p[1]));
        assert!(g.points()[799] < 2000.0 && g.points()[0] > 0.0);
        assert!(RadialGrid::with_points(3).is_err());
    }

    #[test]
    fn quadrature_of_r2_weighted_polynomials() {
        let g = RadialGrid::with_points(800).unwrap();
        // ∫ r^k e^{-r} dr = k!
        for k in 2..=8 {
            let exact: f64 = (1..=k).map(|x| x as f64).product();
            let got = g.integrate(|r| r.powi(k) * (-r).exp());
            assert!((got - exact).abs() < 1e-10 * exact, "k={k}: {got} vs {exact}");
        }
    }

    #[test]
    fn hydrogen_kinetic_and_potential() {
        let g = RadialGrid::with_points(1200).unwrap();
        // p = 2 r e^{-r}/... normalized 1s of −Δ − 1/r has p = r e^{-r/2}/√2
        let y = g.from_reduced(|r| r * (-r / 2.0).exp() / 2f64.sqrt());
        assert!((g.norm_sq(&y) - 1.0).abs() < 1e-10);
        assert!((g.kinetic(&y) - 0.25).abs() < 1e-7);
        let v = g.bare_potential(0);
        assert!((g.potential(&y, &v) + 0.5).abs() < 1e-10);
    }

    #[test]
    fn multipole_matches_direct_sum() {
        let g = RadialGrid::new(GridConfig { points: 60, rmax: 50.0, r0: 0.01 }).unwrap();
        let m: Vec<f64> = g.points().iter().map(|r| (-r).exp()).collect();
        for l in 0..3 {
            let v = g.multipole_potential(&m, l);
            let r = g.points();
            for i in [0, 17, 59] {
                let direct: f64 = (0..60)
                    .map(|j| {
                        let (lo, hi) = if j <= i { (r[j], r[i]) } else { (r[i], r[j]) };
                        m[j] * lo.powi(l as i32) / hi.powi(l as i32 + 1)
                    })
                    .sum();
                assert!((v[i] - direct).abs() < 1e-12 * direct.abs().max(1.0));
            }
        }
    }

    #[test]
    fn scaled_grid() {
        let g = RadialGrid::with_points(100).unwrap();
        let s = g.scaled(4.0).unwrap();
        assert!((s.points()[10] * 4.0 - g.points()[10]).abs() < 1e-12);
        assert_eq!(s.step(), g.step());
    }
}
