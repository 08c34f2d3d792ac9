//! The bosonic-atom Bogoliubov functional on s-wave trial states.
//!
//! Trials are given in the Z = 1 frame. Scaling every orbital as
//! u ↦ Z^{3/2} u(Z ·) turns −Δ − Z/|x| into Z²(−Δ − 1/|x|) and the
//! Coulomb two-body coefficients into Z times their Z = 1 values, while a
//! condensate amplitude picks up √Z.

use nalgebra::DMatrix;

use crate::atom::grid::RadialGrid;
use crate::atom::hartree::{hartree_scf, HartreeSolution, ScfOptions};
use crate::atom::qform::{MuTilde, QtProblem};
use crate::coherent::{bogoliubov_energy, BogoliubovTrial, EnergyBreakdown, ManyBodyCoefficients};
use crate::error::{invalid, Result};
use crate::fock::Tensor4;
use crate::linalg::{real_matrix, CVec, C64};
use crate::onepdm::OnePdm;

/// γ = Σ γ_nm |u_n⟩⟨u_m|, α = Σ α_nm |u_n⟩⟨u_m| over orthonormal s-wave
/// modes, plus a condensate φ; all as y-vectors in the Z = 1 frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTrial {
    pub modes: Vec<Vec<f64>>,
    pub gamma: DMatrix<f64>,
    pub alpha: DMatrix<f64>,
    pub phi: Vec<f64>,
}

impl RadialTrial {
    pub fn condensate_only(phi: Vec<f64>) -> Self {
        RadialTrial {
            modes: Vec::new(),
            gamma: DMatrix::zeros(0, 0),
            alpha: DMatrix::zeros(0, 0),
            phi,
        }
    }

    /// Tr γ + Z‖φ‖².
    pub fn particle_number(&self, grid: &RadialGrid, z: f64) -> f64 {
        self.gamma.trace() + z * grid.norm_sq(&self.phi)
    }
}

/// Orthonormal basis spanning the modes and the condensate.
fn trial_basis(grid: &RadialGrid, trial: &RadialTrial) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let n = trial.modes.len();
    for i in 0..n {
        for j in i..n {
            let g = grid.dot(&trial.modes[i], &trial.modes[j]);
            let expect = if i == j { 1.0 } else { 0.0 };
            if (g - expect).abs() > 1e-8 {
                return invalid(format!("trial modes are not orthonormal (Gram defect {:e})", (g - expect).abs()));
            }
        }
    }
    let mut basis = trial.modes.clone();
    let mut rest = trial.phi.clone();
    let start = grid.norm_sq(&rest).sqrt();
    for _ in 0..2 {
        for u in &trial.modes {
            let c = grid.dot(u, &rest);
            for (a, b) in rest.iter_mut().zip(u) {
                *a -= c * b;
            }
        }
    }
    let r = grid.norm_sq(&rest).sqrt();
    if r > 1e-12 * start.max(1e-300) && start > 0.0 {
        basis.push(rest.iter().map(|a| a / r).collect());
    }
    let coeffs = basis.iter().map(|b| grid.dot(b, &trial.phi)).collect();
    Ok((basis, coeffs))
}

/// (b_i, (−Δ − 1/r) b_j) and W_mnpq = ∬ b_m b_p(r) b_n b_q(r′) / max(r, r′).
pub fn s_wave_coefficients(grid: &RadialGrid, basis: &[Vec<f64>]) -> (DMatrix<f64>, Tensor4) {
    let nb = basis.len();
    let op = grid.operator(&grid.bare_potential(0));
    let hb: Vec<Vec<f64>> = basis.iter().map(|b| op.apply(b)).collect();
    let h = DMatrix::from_fn(nb, nb, |i, j| grid.dot(&basis[i], &hb[j]));
    let h = (&h + h.transpose()) * 0.5;
    let n = grid.len();
    let step = grid.step();
    let pairs = nb * nb;
    let mut dens = DMatrix::<f64>::zeros(n, pairs);
    let mut pots = DMatrix::<f64>::zeros(n, pairs);
    for m in 0..nb {
        for p in 0..nb {
            let col = m * nb + p;
            let mass: Vec<f64> = basis[m].iter().zip(&basis[p]).map(|(a, b)| a * b * step).collect();
            let v = grid.multipole_potential(&mass, 0);
            for k in 0..n {
                dens[(k, col)] = mass[k];
                pots[(k, col)] = v[k];
            }
        }
    }
    // g[(mp), (nq)] = Σ_k V_mp(k) mass_nq(k)
    let g = pots.transpose() * dens;
    let w = Tensor4::from_fn(nb, |m, nn, p, q| {
        let a = g[(m * nb + p, nn * nb + q)];
        let b = g[(nn * nb + q, m * nb + p)];
        C64::new(0.5 * (a + b), 0.0)
    });
    (h, w)
}

/// E^B(γ, α, φ, Z) for an s-wave trial with particle budget N.
pub fn atom_energy_assembly(grid: &RadialGrid, n: f64, z: f64, trial: &RadialTrial) -> Result<EnergyBreakdown> {
    if !(z > 0.0) {
        return invalid("nuclear charge must be positive");
    }
    let budget = trial.particle_number(grid, z);
    if (budget - n).abs() > 1e-8 * n.max(1.0) {
        return invalid(format!("particle budget {budget} differs from N = {n}"));
    }
    let m = trial.modes.len();
    if trial.gamma.shape() != (m, m) || trial.alpha.shape() != (m, m) {
        return invalid("γ and α must match the number of modes");
    }
    let (basis, coeffs) = trial_basis(grid, trial)?;
    let nb = basis.len();
    let (h1, w1) = s_wave_coefficients(grid, &basis);
    let mut gamma = DMatrix::<f64>::zeros(nb, nb);
    let mut alpha = DMatrix::<f64>::zeros(nb, nb);
    gamma.view_mut((0, 0), (m, m)).copy_from(&trial.gamma);
    alpha.view_mut((0, 0), (m, m)).copy_from(&trial.alpha);
    let p = OnePdm::new(real_matrix(&gamma), real_matrix(&alpha))?;
    let phi = CVec::from_iterator(nb, coeffs.iter().map(|c| C64::new(c * z.sqrt(), 0.0)));
    let t = BogoliubovTrial::new(p, phi)?;
    let coef = ManyBodyCoefficients::new(real_matrix(&(h1 * (z * z))), w1.scale(z))?;
    bogoliubov_energy(&t, &coef)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomTrialResult {
    pub lambda0: f64,
    pub energy: f64,
    /// (E − Z³e(t)) / Z².
    pub excess: f64,
    pub condensate_t: f64,
}

/// The trial λ₀|φ̂⟩⟨φ̂| + γ′ (and the matching α) from the s-wave μ̃
/// minimizer, with condensate φ_{t − Tr γ/Z}, evaluated in the full
/// functional at charge Z.
pub fn upper_bound_trial(
    prob: &QtProblem,
    mu: &MuTilde,
    z: f64,
    lambda0: f64,
    opts: &ScfOptions,
) -> Result<AtomTrialResult> {
    let sol: &HartreeSolution = &prob.solution;
    let grid = &prob.grid;
    let (lams, modes) = mu
        .radial_modes(prob, 0)
        .ok_or_else(|| crate::error::Error::InvalidInput("the s-wave channel is required".into()))?;
    let mut vecs = vec![sol.normalized_phi()];
    vecs.extend(modes.into_iter().map(|m| m.y));
    let mut occ = vec![lambda0];
    occ.extend(lams);
    let k = vecs.len();
    let gamma = DMatrix::from_fn(k, k, |i, j| if i == j { occ[i] } else { 0.0 });
    let alpha = DMatrix::from_fn(k, k, |i, j| if i == j { -(occ[i] * (1.0 + occ[i])).sqrt() } else { 0.0 });
    let tr: f64 = occ.iter().sum();
    let t_cond = sol.t - tr / z;
    if !(t_cond > 0.0) {
        return invalid("the fluctuation trace exceeds the particle budget");
    }
    let cond = hartree_scf(t_cond, grid, opts)?;
    let trial = RadialTrial {
        modes: vecs,
        gamma,
        alpha,
        phi: cond.phi,
    };
    let n = sol.t * z;
    let e = atom_energy_assembly(grid, n, z, &trial)?;
    Ok(AtomTrialResult {
        lambda0,
        energy: e.total,
        excess: (e.total - z.powi(3) * sol.energy) / (z * z),
        condensate_t: t_cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::qform::{minimize_mu_tilde, BasisConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(points: usize) -> QtProblem {
        let g = RadialGrid::with_points(points).unwrap();
        let sol = hartree_scf(1.0, &g, &ScfOptions::default()).unwrap();
        QtProblem::new(&g, &sol, &[0], &BasisConfig { size: 12, beta: 0.5 }).unwrap()
    }

    #[test]
    fn scaled_condensate_reproduces_hartree_energy() {
        let prob = problem(400);
        let sol = &prob.solution;
        for z in [1.0, 7.0, 50.0] {
            let trial = RadialTrial::condensate_only(sol.phi.clone());
            let e = atom_energy_assembly(&prob.grid, sol.t * z, z, &trial).unwrap();
            let target = z.powi(3) * sol.energy;
            assert!((e.total - target).abs() < 1e-10 * target.abs(), "Z={z}: {} vs {target}", e.total);
        }
    }

    #[test]
    fn budget_violation_is_rejected() {
        let prob = problem(300);
        let trial = RadialTrial::condensate_only(prob.solution.phi.clone());
        assert!(atom_energy_assembly(&prob.grid, 2.0, 1.0, &trial).is_err());
        assert!(atom_energy_assembly(&prob.grid, 1.0, 0.0, &trial).is_err());
    }

    #[test]
    fn hydrogen_lower_bound_on_random_trials() {
        let prob = problem(400);
        let grid = &prob.grid;
        let basis = &prob.channel(0).unwrap().basis;
        let kin = grid.operator(&vec![0.0; grid.len()]);
        let kin_dot = |a: &[f64], b: &[f64]| grid.dot(a, &kin.apply(b));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let z: f64 = rng.random_range(1.0..30.0);
            let m = 3;
            let modes: Vec<Vec<f64>> = basis[..m].to_vec();
            let lam: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0)).collect();
            let c: f64 = rng.random_range(-1.0..1.0);
            let gamma = DMatrix::from_fn(m, m, |i, j| if i == j { lam[i] } else { 0.0 });
            let alpha = DMatrix::from_fn(m, m, |i, j| if i == j { c * (lam[i] * (1.0 + lam[i])).sqrt() } else { 0.0 });
            let amp: f64 = rng.random_range(0.0..1.0);
            let phi: Vec<f64> = prob.solution.phi.iter().zip(&basis[m]).map(|(a, b)| amp * a + 0.3 * b).collect();
            let trial = RadialTrial { modes: modes.clone(), gamma: gamma.clone(), alpha, phi: phi.clone() };
            let n = trial.particle_number(grid, z);
            let e = atom_energy_assembly(grid, n, z, &trial).unwrap().total;
            let kinetic: f64 = (0..m).map(|i| lam[i] * kin_dot(&modes[i], &modes[i])).sum::<f64>() + z * kin_dot(&phi, &phi);
            let bound = 0.5 * z * z * kinetic - z * z * n / 2.0;
            assert!(e >= bound - 1e-9 * bound.abs(), "{e} < {bound}");
        }
    }

    #[test]
    fn constructed_trial_approaches_the_s_wave_bound() {
        let prob = problem(400);
        let mu = minimize_mu_tilde(&prob, &Default::default()).unwrap();
        let bound = crate::atom::qform::mu_upper_bound(&prob, &mu).unwrap().bound;
        let opts = ScfOptions::default();
        let best = |z: f64, l0s: &[f64]| {
            l0s.iter()
                .map(|&l| upper_bound_trial(&prob, &mu, z, l, &opts).unwrap().excess)
                .fold(f64::INFINITY, f64::min)
        };
        let small = best(50.0, &[0.5, 1.0, 2.0]);
        let large = best(5e4, &[5.0, 10.0, 20.0]);
        assert!(small < 0.0 && large < small);
        assert!((large - bound).abs() < 0.05 * bound.abs(), "{large} vs {bound}");
    }
}
