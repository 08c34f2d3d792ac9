//! The quadratic form
//! q_t(γ, α) = Tr[h_t γ] + Re ∬ (γ + α)(x, y) φ_t(x) φ_t(y) / |x − y|
//! on real radial modes, and the finite-basis estimate of μ̃(t).
//!
//! A mode u(x) = p(r)/r · Y_ℓm(x̂) enters with all 2ℓ+1 magnetic copies.
//! For such a mode the Coulomb term is the multipole integral
//! k(u) = (2ℓ+1)⁻¹ ∬ p φ(r) p φ(r′) r_<^ℓ / r_>^{ℓ+1}.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::atom::grid::RadialGrid;
use crate::atom::hartree::HartreeSolution;
use crate::error::{invalid, Error, Result};
use crate::linalg::{real_matrix, C64};
use crate::quadratic::{ground_energy, QuadraticHamiltonian};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisConfig {
    pub size: usize,
    /// Exponent of x^{ℓ+1} e^{−x/2} L_k^{(2ℓ+2)}(x) with x = 2βr.
    pub beta: f64,
}

impl Default for BasisConfig {
    fn default() -> Self {
        BasisConfig { size: 30, beta: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub l: usize,
    /// Orthonormal y-vectors; in ℓ = 0 they are orthogonal to φ_t.
    pub basis: Vec<Vec<f64>>,
    /// (b_i, h_t b_j).
    pub h: DMatrix<f64>,
    /// k(b_i, b_j).
    pub k: DMatrix<f64>,
    /// Generating functions discarded as numerically dependent.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QtProblem {
    pub grid: RadialGrid,
    pub solution: HartreeSolution,
    pub channels: Vec<Channel>,
}

/// Laguerre functions evaluated on the grid as y-vectors.
pub fn laguerre_functions(grid: &RadialGrid, l: usize, cfg: &BasisConfig) -> Vec<Vec<f64>> {
    let a = (2 * l + 2) as f64;
    let mut out = vec![Vec::with_capacity(grid.len()); cfg.size];
    for (&r, &w) in grid.points().iter().zip(grid.jacobian()) {
        let x = 2.0 * cfg.beta * r;
        let env = x.powi(l as i32 + 1) * (-x / 2.0).exp() * w.sqrt();
        let (mut prev, mut cur) = (0.0, 1.0);
        for (k, col) in out.iter_mut().enumerate() {
            col.push(cur * env);
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
    }
    out
}

/// Gram–Schmidt (two passes) against `fixed` and the accepted vectors.
fn orthonormalize(grid: &RadialGrid, raw: Vec<Vec<f64>>, fixed: &[Vec<f64>]) -> (Vec<Vec<f64>>, usize) {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut dropped = 0;
    for mut v in raw {
        let start = grid.norm_sq(&v).sqrt();
        for _ in 0..2 {
            for u in fixed.iter().chain(basis.iter()) {
                let c = grid.dot(u, &v);
                for (a, b) in v.iter_mut().zip(u) {
                    *a -= c * b;
                }
            }
        }
        let n = grid.norm_sq(&v).sqrt();
        if !(n > 1e-8 * start) {
            dropped += 1;
            continue;
        }
        for a in v.iter_mut() {
            *a /= n;
        }
        basis.push(v);
    }
    (basis, dropped)
}

impl QtProblem {
    pub fn new(grid: &RadialGrid, solution: &HartreeSolution, channels: &[usize], cfg: &BasisConfig) -> Result<Self> {
        if solution.phi.len() != grid.len() {
            return invalid("Hartree solution lives on a different grid");
        }
        if cfg.size == 0 || !(cfg.beta > 0.0) {
            return invalid("basis needs a positive size and exponent");
        }
        let mut seen = std::collections::BTreeSet::new();
        if !channels.iter().all(|l| seen.insert(*l)) {
            return invalid("channels must be distinct");
        }
        let phi_hat = solution.normalized_phi();
        let mut out = Vec::new();
        for &l in channels {
            let fixed = if l == 0 { vec![phi_hat.clone()] } else { Vec::new() };
            let (basis, dropped) = orthonormalize(grid, laguerre_functions(grid, l, cfg), &fixed);
            let op = solution.mean_field(grid, l);
            let hb: Vec<Vec<f64>> = basis.iter().map(|b| op.apply(b)).collect();
            let nb = basis.len();
            let h = DMatrix::from_fn(nb, nb, |i, j| grid.dot(&basis[i], &hb[j]));
            let h = (&h + h.transpose()) * 0.5;
            let k = kernel_matrix(grid, &solution.phi, l, &basis);
            out.push(Channel { l, basis, h, k, dropped });
        }
        Ok(QtProblem {
            grid: grid.clone(),
            solution: solution.clone(),
            channels: out,
        })
    }

    pub fn channel(&self, l: usize) -> Option<&Channel> {
        self.channels.iter().find(|c| c.l == l)
    }
}

/// k(v_i, v_j) for a list of y-vectors in channel ℓ.
pub fn kernel_matrix(grid: &RadialGrid, phi: &[f64], l: usize, vs: &[Vec<f64>]) -> DMatrix<f64> {
    let h = grid.step();
    let masses: Vec<Vec<f64>> = vs
        .iter()
        .map(|v| v.iter().zip(phi).map(|(a, b)| a * b * h).collect())
        .collect();
    let pots: Vec<Vec<f64>> = masses.iter().map(|m| grid.multipole_potential(m, l)).collect();
    let nb = vs.len();
    let scale = 1.0 / (2 * l + 1) as f64;
    let k = DMatrix::from_fn(nb, nb, |i, j| {
        masses[i].iter().zip(&pots[j]).map(|(a, b)| a * b).sum::<f64>() * scale
    });
    (&k + k.transpose()) * 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialMode {
    pub l: usize,
    pub y: Vec<f64>,
}

/// Σ_n (2ℓ_n+1) [λ_n (u_n, h_t u_n) + (λ_n − √(λ_n(1+λ_n))) k(u_n)] for
/// γ = Σ λ_n |u_n⟩⟨u_n| and α = −Σ √(λ_n(1+λ_n)) |u_n⟩⟨u_n|.
pub fn qt_value(prob: &QtProblem, lambdas: &[f64], modes: &[RadialMode]) -> Result<f64> {
    if lambdas.len() != modes.len() {
        return invalid("one occupation per mode is required");
    }
    if lambdas.iter().any(|l| !(*l >= 0.0)) {
        return invalid("occupations must be non-negative");
    }
    let grid = &prob.grid;
    for (i, a) in modes.iter().enumerate() {
        for b in &modes[i..] {
            if a.l != b.l {
                continue;
            }
            let expect = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            let g = grid.dot(&a.y, &b.y);
            if (g - expect).abs() > 1e-8 {
                return invalid(format!("modes are not orthonormal (Gram defect {:e})", (g - expect).abs()));
            }
        }
    }
    let mut total = 0.0;
    for (lam, mode) in lambdas.iter().zip(modes) {
        if *lam == 0.0 {
            continue;
        }
        let op = prob.solution.mean_field(grid, mode.l);
        let hv = grid.dot(&mode.y, &op.apply(&mode.y));
        let kv = kernel_matrix(grid, &prob.solution.phi, mode.l, std::slice::from_ref(&mode.y))[(0, 0)];
        total += (2 * mode.l + 1) as f64 * single_mode_value(*lam, hv, kv);
    }
    Ok(total)
}

/// λ h + (λ − √(λ(1+λ))) k.
pub fn single_mode_value(lambda: f64, h: f64, k: f64) -> f64 {
    lambda * h + (lambda - (lambda * (1.0 + lambda)).sqrt()) * k
}

/// Minimizer of λ ↦ λ h + (λ − √(λ(1+λ))) k for h ≥ 0, k > 0:
/// λ* = (c/√(c² − 1) − 1)/2 with c = (h + k)/k.
pub fn optimal_occupation(h: f64, k: f64) -> f64 {
    if !(k > 0.0) {
        return 0.0;
    }
    let c = (h + k) / k;
    if c <= 1.0 {
        return f64::INFINITY;
    }
    let root = ((c - 1.0) * (c + 1.0)).sqrt();
    0.5 * (c / root - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions { tol: 1e-13, max_sweeps: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelMu {
    pub l: usize,
    pub basis_size: usize,
    /// Per magnetic copy.
    pub alternating: f64,
    pub exact: f64,
    pub lambdas: Vec<f64>,
    /// Mode coefficients in the channel basis, one column per mode.
    #[serde(skip)]
    pub modes: DMatrix<f64>,
    pub sweeps: usize,
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuTilde {
    /// Σ (2ℓ+1) × channel value from the alternating minimization.
    pub mu_tilde: f64,
    /// Same sum from the exact quadratic-Hamiltonian ground energy.
    pub exact: f64,
    pub channels: Vec<ChannelMu>,
}

impl MuTilde {
    pub fn channel(&self, l: usize) -> Option<&ChannelMu> {
        self.channels.iter().find(|c| c.l == l)
    }

    /// Modes (as y-vectors) and occupations of channel ℓ.
    pub fn radial_modes(&self, prob: &QtProblem, l: usize) -> Option<(Vec<f64>, Vec<RadialMode>)> {
        let c = self.channel(l)?;
        let ch = prob.channel(l)?;
        let n = prob.grid.len();
        let modes = (0..c.modes.ncols())
            .map(|j| {
                let mut y = vec![0.0; n];
                for (i, b) in ch.basis.iter().enumerate() {
                    let w = c.modes[(i, j)];
                    for (a, v) in y.iter_mut().zip(b) {
                        *a += w * v;
                    }
                }
                RadialMode { l, y }
            })
            .collect();
        Some((c.lambdas.clone(), modes))
    }
}

fn channel_objective(a: &DMatrix<f64>, b: &DMatrix<f64>, lam: &[f64]) -> f64 {
    lam.iter()
        .enumerate()
        .map(|(n, &l)| l * a[(n, n)] - (l * (1.0 + l)).sqrt() * b[(n, n)])
        .sum()
}

/// Alternating minimization over occupations and real orthonormal modes.
fn alternating(h: &DMatrix<f64>, k: &DMatrix<f64>, opts: &MuOptions) -> Result<(f64, Vec<f64>, DMatrix<f64>, usize, Vec<f64>)> {
    let nb = h.nrows();
    // start from the eigenvectors of k, strongest coupling first
    let eig = SymmetricEigen::new(k.clone());
    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut u = DMatrix::from_fn(nb, nb, |i, j| eig.eigenvectors[(i, order[j])]);
    let full_a = h + k;
    let mut a = u.transpose() * &full_a * &u;
    let mut b = u.transpose() * k * &u;
    let mut lam = vec![0.0; nb];
    let mut history = Vec::new();
    let mut prev = 0.0;
    let scale = full_a.norm().max(1.0);
    for sweep in 1..=opts.max_sweeps {
        for n in 0..nb {
            lam[n] = optimal_occupation(a[(n, n)] - b[(n, n)], b[(n, n)]);
            if !lam[n].is_finite() {
                return Err(Error::Numerical("unbounded occupation: h_t is not positive on the basis".into()));
            }
        }
        let after_lambda = channel_objective(&a, &b, &lam);
        if after_lambda > prev + 1e-12 * scale {
            return Err(Error::Numerical(format!("objective increased in occupation step: {prev} → {after_lambda}")));
        }
        let s: Vec<f64> = lam.iter().map(|l| (l * (1.0 + l)).sqrt()).collect();
        for p in 0..nb {
            for q in p + 1..nb {
                let dl = lam[p] - lam[q];
                let ds = s[p] - s[q];
                let amp = 0.5 * (dl * (a[(p, p)] - a[(q, q)]) - ds * (b[(p, p)] - b[(q, q)]));
                let rot = dl * a[(p, q)] - ds * b[(p, q)];
                let gain = amp + (amp * amp + rot * rot).sqrt();
                if gain <= 1e-15 * scale {
                    continue;
                }
                let theta = 0.5 * (-rot).atan2(-amp);
                let (sn, cs) = theta.sin_cos();
                rotate(&mut a, p, q, cs, sn);
                rotate(&mut b, p, q, cs, sn);
                for i in 0..nb {
                    let up = u[(i, p)];
                    let uq = u[(i, q)];
                    u[(i, p)] = cs * up + sn * uq;
                    u[(i, q)] = -sn * up + cs * uq;
                }
            }
        }
        let value = channel_objective(&a, &b, &lam);
        if value > after_lambda + 1e-12 * scale {
            return Err(Error::Numerical(format!("objective increased in mode step: {after_lambda} → {value}")));
        }
        history.push(value);
        if prev - value < opts.tol * scale && sweep > 1 {
            return Ok((value, lam, u, sweep, history));
        }
        prev = value;
    }
    let value = *history.last().unwrap_or(&0.0);
    Ok((value, lam, u, opts.max_sweeps, history))
}

/// M ← GᵀMG for the rotation of columns p, q.
fn rotate(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = m.nrows();
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = c * mp + s * mq;
        m[(i, q)] = -s * mp + c * mq;
    }
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = c * mp + s * mq;
        m[(q, j)] = -s * mp + c * mq;
    }
}

/// ½(Σ d − Tr a) for a = h + k, b = k: the infimum of q over all
/// quasi-free (γ, α) supported on the channel basis.
fn exact_channel(h: &DMatrix<f64>, k: &DMatrix<f64>) -> Result<f64> {
    let a = real_matrix(&(h + k));
    let q = QuadraticHamiltonian::new(a.clone(), real_matrix(k))?;
    let g = ground_energy(&q)?;
    let tr: C64 = a.trace();
    Ok(0.5 * (g.energy - tr.re))
}

pub fn minimize_mu_tilde(prob: &QtProblem, opts: &MuOptions) -> Result<MuTilde> {
    let mut channels = Vec::new();
    let mut total = 0.0;
    let mut exact_total = 0.0;
    for ch in &prob.channels {
        let (value, lambdas, modes, sweeps, history) = alternating(&ch.h, &ch.k, opts)?;
        let exact = exact_channel(&ch.h, &ch.k)?;
        let mult = (2 * ch.l + 1) as f64;
        total += mult * value;
        exact_total += mult * exact;
        channels.push(ChannelMu {
            l: ch.l,
            basis_size: ch.basis.len(),
            alternating: value,
            exact,
            lambdas,
            modes,
            sweeps,
            history,
        });
    }
    Ok(MuTilde {
        mu_tilde: total,
        exact: exact_total,
        channels,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuBound {
    /// t⁻¹e(t) − e′(t) + μ̃(t).
    pub bound: f64,
    /// t⁻¹e(t) − e′(t).
    pub product_coefficient: f64,
    pub mu_tilde: f64,
    /// (λ, q_t) on the trial family.
    pub trial: Vec<(f64, f64)>,
    /// |q_t(λ_max) − bound| / |bound|.
    pub relative_gap: f64,
}

pub const TRIAL_LAMBDAS: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];

/// Bound with the trial family λ|φ̂⟩⟨φ̂| + γ′, −√(λ(1+λ))|φ̂⟩⟨φ̂| + α′.
pub fn mu_upper_bound(prob: &QtProblem, mu: &MuTilde) -> Result<MuBound> {
    let sol = &prob.solution;
    let product = sol.energy / sol.t - sol.multiplier;
    let bound = product + mu.mu_tilde;
    let phi_hat = RadialMode { l: 0, y: sol.normalized_phi() };
    let mut trial = Vec::new();
    for &lam0 in &TRIAL_LAMBDAS {
        let mut value = 0.0;
        for ch in &mu.channels {
            let (lams, modes) = mu.radial_modes(prob, ch.l).expect("channel present");
            let (lams, modes) = if ch.l == 0 {
                let mut l2 = vec![lam0];
                l2.extend(lams);
                let mut m2 = vec![phi_hat.clone()];
                m2.extend(modes);
                (l2, m2)
            } else {
                (lams, modes)
            };
            value += qt_value(prob, &lams, &modes)?;
        }
        if mu.channel(0).is_none() {
            value += qt_value(prob, &[lam0], std::slice::from_ref(&phi_hat))?;
        }
        trial.push((lam0, value));
    }
    let last = trial.last().expect("non-empty").1;
    Ok(MuBound {
        bound,
        product_coefficient: product,
        mu_tilde: mu.mu_tilde,
        relative_gap: (last - bound).abs() / bound.abs(),
        trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_occupation_matches_scan() {
        for &(h, k) in &[(0.3, 0.5), (1.0, 0.1), (0.01, 2.0)] {
            let l = optimal_occupation(h, k);
            let f = |x: f64| single_mode_value(x, h, k);
            let (x, _) = crate::coherent::golden_section(f, 0.0, 10.0 * l + 1.0, 1e-12);
            assert!((x - l).abs() < 1e-6 * (1.0 + l), "{x} vs {l}");
            let min = f(l);
            assert!((min - 0.5 * (((h + k) * (h + k) - k * k).sqrt() - h - k)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_occupation_value() {
        assert_eq!(single_mode_value(0.0, 1.0, 1.0), 0.0);
        assert!(single_mode_value(1e-4, 1.0, 1.0) < 0.0);
    }

    #[test]
    fn alternating_reaches_exact_on_small_matrices() {
        let h = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 0.8, 0.1, 0.0, 0.1, 1.5]);
        let k = DMatrix::from_row_slice(3, 3, &[0.5, 0.1, 0.05, 0.1, 0.3, 0.0, 0.05, 0.0, 0.2]);
        let (v, lam, u, _, hist) = alternating(&h, &k, &MuOptions::default()).unwrap();
        let exact = exact_channel(&h, &k).unwrap();
        assert!(v >= exact - 1e-12);
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
        assert!(hist.windows(2).all(|w| w[1] <= w[0] + 1e-14));
        assert!((u.transpose() * &u - DMatrix::identity(3, 3)).norm() < 1e-12);
        assert!(lam.iter().all(|l| *l > 0.0));
    }

    #[test]
    fn kernel_matches_direct_double_sum() {
        let g = RadialGrid::new(crate::atom::grid::GridConfig { points: 150, rmax: 60.0, r0: 0.01 }).unwrap();
        let phi = g.from_reduced(|r| r * (-r / 2.0).exp());
        let u = g.from_reduced(|r| r * (1.0 - r / 3.0) * (-r / 3.0).exp());
        let r = g.points();
        let h = g.step();
        for l in 0..3usize {
            let got = kernel_matrix(&g, &phi, l, std::slice::from_ref(&u))[(0, 0)];
            let mut direct = 0.0;
            for i in 0..g.len() {
                for j in 0..g.len() {
                    let (lo, hi) = if i <= j { (r[i], r[j]) } else { (r[j], r[i]) };
                    direct += u[i] * phi[i] * u[j] * phi[j] * h * h * lo.powi(l as i32) / hi.powi(l as i32 + 1);
                }
            }
            direct /= (2 * l + 1) as f64;
            assert!((got - direct).abs() < 1e-12 * direct.abs(), "l={l}: {got} vs {direct}");
        }
    }

    #[test]
    fn non_orthonormal_modes_are_rejected() {
        let g = RadialGrid::with_points(300).unwrap();
        let sol = crate::atom::hartree::hartree_scf(0.5, &g, &Default::default()).unwrap();
        let prob = QtProblem::new(&g, &sol, &[0], &BasisConfig { size: 4, beta: 0.5 }).unwrap();
        let b = &prob.channel(0).unwrap().basis;
        let twice: Vec<f64> = b[0].iter().map(|v| 2.0 * v).collect();
        let modes = [RadialMode { l: 0, y: twice }];
        assert!(qt_value(&prob, &[0.1], &modes).is_err());
        let ok = [RadialMode { l: 0, y: b[0].clone() }];
        assert_eq!(qt_value(&prob, &[0.0], &ok).unwrap(), 0.0);
        assert!(qt_value(&prob, &[1e-6], &ok).unwrap() < 0.0);
    }
}
