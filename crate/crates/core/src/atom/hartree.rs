//! s-wave Hartree theory in the Z = 1 frame:
//! e(u) = ∫ p′² − ∫ p²/r + ½ ∬ p(r)² p(r′)² / max(r, r′).

use serde::{Deserialize, Serialize};

use crate::atom::grid::RadialGrid;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HartreeEnergy {
    pub kinetic: f64,
    pub nuclear: f64,
    pub interaction: f64,
    pub total: f64,
}

/// Hartree potential Σ_j m_j / max(r_i, r_j) of the density of y.
pub fn hartree_potential(grid: &RadialGrid, y: &[f64]) -> Vec<f64> {
    let mass: Vec<f64> = y.iter().map(|v| v * v * grid.step()).collect();
    grid.multipole_potential(&mass, 0)
}

pub fn hartree_energy(grid: &RadialGrid, y: &[f64]) -> HartreeEnergy {
    let kinetic = grid.kinetic(y);
    let nuclear = grid.potential(y, &grid.bare_potential(0));
    let interaction = 0.5 * grid.potential(y, &hartree_potential(grid, y));
    HartreeEnergy {
        kinetic,
        nuclear,
        interaction,
        total: kinetic + nuclear + interaction,
    }
}

/// The nuclear charge version: ∫ p′² − Z ∫ p²/r + ½ ∬ …
pub fn hartree_energy_z(grid: &RadialGrid, y: &[f64], z: f64) -> f64 {
    let e = hartree_energy(grid, y);
    e.kinetic + z * e.nuclear + e.interaction
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScfOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub mixing: f64,
    pub fallback_mixing: f64,
}

impl Default for ScfOptions {
    fn default() -> Self {
        ScfOptions {
            tol: 1e-10,
            max_iterations: 3000,
            mixing: 0.3,
            fallback_mixing: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HartreeSolution {
    pub t: f64,
    /// y-vector of φ_t with h Σ y² = t, nonnegative.
    pub phi: Vec<f64>,
    pub energy: f64,
    pub multiplier: f64,
    /// Second-lowest minus lowest s-wave mean-field eigenvalue.
    pub gap: f64,
    /// ∫|ρ_new − ρ| at the last iteration.
    pub residual: f64,
    /// ‖(H[φ] − e′)φ‖ / ‖φ‖ with the potential of the returned φ.
    pub equation_residual: f64,
    pub iterations: usize,
    pub mixing: f64,
}

impl HartreeSolution {
    pub fn normalized_phi(&self) -> Vec<f64> {
        let s = self.t.sqrt();
        self.phi.iter().map(|v| v / s).collect()
    }

    /// −Δ − 1/r + |φ_t|² ∗ 1/r − e′ restricted to channel ℓ, on y-vectors.
    pub fn mean_field(&self, grid: &RadialGrid, l: usize) -> crate::atom::banded::SymBand5 {
        let vh = hartree_potential(grid, &self.phi);
        let v: Vec<f64> = grid
            .bare_potential(l)
            .iter()
            .zip(&vh)
            .map(|(a, b)| a + b - self.multiplier)
            .collect();
        grid.operator(&v)
    }
}

fn lowest_pair(grid: &RadialGrid, y: Option<&[f64]>) -> Result<Vec<(f64, Vec<f64>)>> {
    let mut v = grid.bare_potential(0);
    if let Some(y) = y {
        for (a, b) in v.iter_mut().zip(hartree_potential(grid, y)) {
            *a += b;
        }
    }
    grid.operator(&v).lowest(2)
}

/// Euclidean unit vector → y-vector with h Σ y² = t and positive sign.
fn orbital(grid: &RadialGrid, v: &[f64], t: f64) -> Vec<f64> {
    let s = (t / grid.step()).sqrt();
    let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    v.iter().map(|a| (a * s * sign).max(0.0)).collect()
}

/// Self-consistent field solution at particle ratio t.
pub fn hartree_scf(t: f64, grid: &RadialGrid, opts: &ScfOptions) -> Result<HartreeSolution> {
    if !(t > 0.0 && t < 2.0) {
        return invalid(format!("t = {t} outside (0, 2)"));
    }
    let h = grid.step();
    let first = lowest_pair(grid, None)?;
    let mut density: Vec<f64> = first[0].1.iter().map(|a| t * a * a).collect();
    let mut mixing = opts.mixing;
    let mut history = Vec::new();
    let mut last_energy = f64::INFINITY;
    for it in 1..=opts.max_iterations {
        let y: Vec<f64> = density.iter().map(|d| (d / h).sqrt()).collect();
        let pairs = lowest_pair(grid, Some(&y))?;
        let new: Vec<f64> = pairs[0].1.iter().map(|a| t * a * a).collect();
        let res: f64 = new.iter().zip(&density).map(|(a, b)| (a - b).abs()).sum();
        history.push(res);
        let phi = orbital(grid, &pairs[0].1, t);
        let energy = hartree_energy(grid, &phi).total;
        if energy > last_energy + 1e-12 && mixing > opts.fallback_mixing {
            mixing = opts.fallback_mixing;
        }
        last_energy = energy;
        if res < opts.tol {
            let confirm = lowest_pair(grid, Some(&phi))?;
            let vh = hartree_potential(grid, &phi);
            let mut v = grid.bare_potential(0);
            for (a, b) in v.iter_mut().zip(&vh) {
                *a += b;
            }
            let op = grid.operator(&v);
            let lam = confirm[0].0;
            let hp = op.apply(&phi);
            let num: f64 = hp.iter().zip(&phi).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            let den: f64 = phi.iter().map(|a| a * a).sum::<f64>().sqrt();
            return Ok(HartreeSolution {
                t,
                energy: hartree_energy(grid, &phi).total,
                multiplier: lam,
                gap: confirm[1].0 - lam,
                residual: res,
                equation_residual: num / den,
                iterations: it,
                mixing,
                phi,
            });
        }
        for (d, n) in density.iter_mut().zip(&new) {
            *d = (1.0 - mixing) * *d + mixing * n;
        }
    }
    let residual = *history.last().unwrap_or(&f64::NAN);
    let tail = history.len().saturating_sub(50);
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        residual,
        history: history[tail..].to_vec(),
    })
}

/// Whether the SCF converges with a strictly negative multiplier.
pub fn is_bound(t: f64, grid: &RadialGrid, opts: &ScfOptions) -> (bool, Option<HartreeSolution>) {
    match hartree_scf(t, grid, opts) {
        Ok(s) => (s.multiplier < 0.0, Some(s)),
        Err(_) => (false, None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub t: f64,
    pub bound: bool,
    pub multiplier: Option<f64>,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRatio {
    pub t_c: f64,
    pub bracket: (f64, f64),
    pub trace: Vec<BisectionStep>,
}

/// Bisection on the binding predicate between `lo` (bound) and `hi`
/// (unbound) down to width `width`.
pub fn critical_t(grid: &RadialGrid, lo: f64, hi: f64, width: f64, opts: &ScfOptions) -> Result<CriticalRatio> {
    let mut trace = Vec::new();
    let probe = |t: f64, trace: &mut Vec<BisectionStep>| {
        let (b, s) = is_bound(t, grid, opts);
        trace.push(BisectionStep {
            t,
            bound: b,
            multiplier: s.as_ref().map(|s| s.multiplier),
            iterations: s.as_ref().map(|s| s.iterations),
        });
        b
    };
    if !probe(lo, &mut trace) {
        return Err(Error::Numerical(format!("no binding at the lower end t = {lo}")));
    }
    if probe(hi, &mut trace) {
        return Err(Error::Numerical(format!("still bound at the upper end t = {hi}")));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > width {
        let mid = 0.5 * (a + b);
        if probe(mid, &mut trace) {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(CriticalRatio {
        t_c: 0.5 * (a + b),
        bracket: (a, b),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_has_zero_energy() {
        let g = RadialGrid::with_points(200).unwrap();
        assert_eq!(hartree_energy(&g, &vec![0.0; 200]).total, 0.0);
    }

    #[test]
    fn small_t_is_hydrogenic() {
        let g = RadialGrid::with_points(800).unwrap();
        let s = hartree_scf(0.01, &g, &ScfOptions::default()).unwrap();
        assert!((s.energy / 0.01 + 0.25).abs() < 0.005, "e/t = {}", s.energy / 0.01);
        assert!((g.norm_sq(&s.phi) - 0.01).abs() < 1e-12);
        assert!(s.phi.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn energy_scales_with_charge() {
        let g = RadialGrid::with_points(400).unwrap();
        let y1 = g.from_reduced(|r| r * (-r / 2.0).exp() * 0.6);
        let z = 3.0;
        let gz = g.scaled(z).unwrap();
        // p_z(r) = z p_1(z r)
        let yz = gz.from_reduced(|r| z * (z * r) * (-(z * r) / 2.0).exp() * 0.6);
        let e1 = hartree_energy(&g, &y1).total;
        let ez = hartree_energy_z(&gz, &yz, z);
        assert!((ez - z.powi(3) * e1).abs() < 1e-8 * ez.abs());
    }

    #[test]
    fn mean_field_annihilates_the_minimizer() {
        let g = RadialGrid::with_points(600).unwrap();
        let opts = ScfOptions::default();
        let s = hartree_scf(1.0, &g, &opts).unwrap();
        assert!(s.equation_residual <= 10.0 * opts.tol);
        assert!(s.multiplier < 0.0 && s.gap > 0.0);
        let ht = s.mean_field(&g, 0);
        let pairs = ht.lowest(2).unwrap();
        assert!(pairs[0].0.abs() < 1e-9);
        assert!(pairs[1].0 >= -1e-8);
    }

    #[test]
    fn out_of_range_ratio_is_rejected() {
        let g = RadialGrid::with_points(100).unwrap();
        assert!(hartree_scf(0.0, &g, &ScfOptions::default()).is_err());
        assert!(hartree_scf(2.5, &g, &ScfOptions::default()).is_err());
    }
}

