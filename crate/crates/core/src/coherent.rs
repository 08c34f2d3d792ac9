//! Coherent displacements and the Bogoliubov energy functional.
//!
//! The displaced quasi-free state ρ_{γ,α,φ} satisfies
//! ⟨B(a, a*)⟩ = ⟨B(a + φ, a* + conj φ)⟩_{γ,α}.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fock::{assemble_hamiltonian, FockSpace, Ladder, ManyBodyOperator, State, Tensor4};
use crate::linalg::{hermitian_eigen, is_hermitian, CMat, CVec, C64, ONE, ZERO};
use crate::onepdm::{is_admissible, OnePdm};
use crate::quasifree::{build_density, wick_expectation, GenOp, QuasiFreeSpec};
use crate::symplectic::diagonalize_onepdm;

/// One-body block h and two-body array W of
/// H = Σ h_mn a_m* a_n + ½ Σ W_mnpq a_m* a_n* a_p a_q.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyBodyCoefficients {
    pub h: CMat,
    pub w: Tensor4,
}

impl ManyBodyCoefficients {
    pub fn new(h: CMat, w: Tensor4) -> Result<Self> {
        let m = h.nrows();
        if h.ncols() != m || w.m != m {
            return invalid("coefficient shapes do not match");
        }
        if !is_hermitian(&h, 1e-12) {
            return invalid("one-body block is not Hermitian");
        }
        let scale = w.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if w.symmetry_defect() > 1e-12 * scale {
            return invalid("two-body coefficients violate the required symmetries");
        }
        Ok(ManyBodyCoefficients { h, w })
    }

    /// M = 1, h = 0, W = 2: the Hamiltonian a*a*aa.
    pub fn toy() -> Self {
        ManyBodyCoefficients {
            h: CMat::zeros(1, 1),
            w: Tensor4::from_fn(1, |_, _, _, _| C64::new(2.0, 0.0)),
        }
    }

    pub fn modes(&self) -> usize {
        self.h.nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTrial {
    pub p: OnePdm,
    pub phi: CVec,
}

impl BogoliubovTrial {
    pub fn new(p: OnePdm, phi: CVec) -> Result<Self> {
        if phi.len() != p.modes() {
            return invalid("condensate and 1-pdm have different mode counts");
        }
        let adm = is_admissible(&p, 1e-9);
        if !adm.admissible {
            return invalid(format!(
                "1-pdm is not admissible (min eigenvalue {:e})",
                adm.min_eigenvalue()
            ));
        }
        Ok(BogoliubovTrial { p, phi })
    }

    /// Tr γ + ‖φ‖².
    pub fn particle_number(&self) -> f64 {
        self.p.gamma().trace().re + self.phi.norm_squared()
    }

    /// γ̃ = γ + |φ⟩⟨φ|.
    pub fn gamma_tilde(&self) -> CMat {
        self.p.gamma() + &self.phi * self.phi.adjoint()
    }
}

/// Scalar shift (F, Φ) of A(F) under the displacement, Φ = φ ⊕ conj φ.
fn shift(op: &GenOp, phi: &CVec) -> C64 {
    let m = phi.len();
    let mut s = ZERO;
    for k in 0..m {
        s += op.f[k].conj() * phi[k] + op.f[m + k].conj() * phi[k].conj();
    }
    s
}

/// Expectation of Π A(F_i) in the displaced quasi-free state, expanding
/// Π (A(F_i) + c_i) over subsets of kept operators.
pub fn displace_expectation(p: &OnePdm, phi: &CVec, ops: &[GenOp]) -> Result<C64> {
    if phi.len() != p.modes() {
        return invalid("condensate and 1-pdm have different mode counts");
    }
    let k = ops.len();
    if k > 20 {
        return invalid("products longer than 20 operators are not supported");
    }
    let shifts: Vec<C64> = ops.iter().map(|op| shift(op, phi)).collect();
    let mut acc = ZERO;
    for mask in 0u32..(1 << k) {
        let kept = mask.count_ones() as usize;
        if kept % 2 == 1 {
            continue;
        }
        let mut coef = ONE;
        let mut sub = Vec::with_capacity(kept);
        for (i, op) in ops.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sub.push(op.clone());
            } else {
                coef *= shifts[i];
            }
        }
        if coef != ZERO {
            acc += coef * wick_expectation(p, &sub)?;
        }
    }
    Ok(acc)
}

/// Contributions to the energy; `total` is their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Tr(h γ̃).
    pub one_body: f64,
    /// ½ Σ W_mnpq γ̃_pm γ̃_qn.
    pub direct: f64,
    /// ½ Σ W_mnpq γ_qm γ_pn.
    pub exchange: f64,
    /// ½ Σ W_mnpq conj(α_mn) α_pq.
    pub pairing: f64,
    /// ½ Σ W_mnpq (γ_qm conj φ_n φ_p + γ_pn conj φ_m φ_q).
    pub cross_gamma: f64,
    /// ½ Σ W_mnpq (conj(α_mn) φ_p φ_q + α_pq conj φ_m conj φ_n).
    pub cross_alpha: f64,
    pub total: f64,
    /// Imaginary part of the raw sum; zero up to rounding.
    pub imaginary: f64,
}

/// ρ_{γ,α,φ}(H) by explicit contraction.
pub fn bogoliubov_energy(t: &BogoliubovTrial, c: &ManyBodyCoefficients) -> Result<EnergyBreakdown> {
    let m = c.modes();
    if t.p.modes() != m {
        return invalid("trial and Hamiltonian have different mode counts");
    }
    let g = t.p.gamma();
    let a = t.p.alpha();
    let gt = t.gamma_tilde();
    let phi = &t.phi;
    let one_body = (&c.h * &gt).trace();
    let (mut direct, mut exchange, mut pairing, mut cross_g, mut cross_a) = (ZERO, ZERO, ZERO, ZERO, ZERO);
    for i in 0..m {
        for j in 0..m {
            for p in 0..m {
                for q in 0..m {
                    let w = c.w.get(i, j, p, q);
                    if w == ZERO {
                        continue;
                    }
                    direct += w * gt[(p, i)] * gt[(q, j)];
                    exchange += w * g[(q, i)] * g[(p, j)];
                    pairing += w * a[(i, j)].conj() * a[(p, q)];
                    cross_g += w
                        * (g[(q, i)] * phi[j].conj() * phi[p] + g[(p, j)] * phi[i].conj() * phi[q]);
                    cross_a += w
                        * (a[(i, j)].conj() * phi[p] * phi[q] + a[(p, q)] * phi[i].conj() * phi[j].conj());
                }
            }
        }
    }
    let half = 0.5;
    let parts = [one_body, direct * half, exchange * half, pairing * half, cross_g * half, cross_a * half];
    let sum: C64 = parts.iter().sum();
    Ok(EnergyBreakdown {
        one_body: parts[0].re,
        direct: parts[1].re,
        exchange: parts[2].re,
        pairing: parts[3].re,
        cross_gamma: parts[4].re,
        cross_alpha: parts[5].re,
        total: sum.re,
        imaginary: sum.im,
    })
}

/// Same value through the multilinear expansion of every Hamiltonian
/// term; slow, used as an internal cross-check.
pub fn bogoliubov_energy_by_expansion(t: &BogoliubovTrial, c: &ManyBodyCoefficients) -> Result<f64> {
    let m = c.modes();
    let op = |l: Ladder| GenOp::from_ladder(l, m);
    let mut acc = ZERO;
    for i in 0..m {
        for j in 0..m {
            let h = c.h[(i, j)];
            if h != ZERO {
                acc += h * displace_expectation(&t.p, &t.phi, &[op(Ladder::ad(i)), op(Ladder::a(j))])?;
            }
            for p in 0..m {
                for q in 0..m {
                    let w = c.w.get(i, j, p, q);
                    if w != ZERO {
                        let ops = [op(Ladder::ad(i)), op(Ladder::ad(j)), op(Ladder::a(p)), op(Ladder::a(q))];
                        acc += w * 0.5 * displace_expectation(&t.p, &t.phi, &ops)?;
                    }
                }
            }
        }
    }
    Ok(acc.re)
}

/// Result of evaluating the assembled Hamiltonian in a displaced state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEnergy {
    pub energy: f64,
    /// Probability mass of the displaced state above the working cutoff.
    pub tail_mass: f64,
}

/// Embeds a density on `small` into the larger space `big`.
fn embed(small: &FockSpace, big: &FockSpace, state: &State) -> CMat {
    let n = big.dimension();
    let mut rho = CMat::zeros(n, n);
    let map: Vec<usize> = (0..small.dimension())
        .map(|i| big.index_of(small.occupation(i)).expect("nested spaces"))
        .collect();
    match state {
        State::Pure(v) => {
            for (i, &bi) in map.iter().enumerate() {
                for (j, &bj) in map.iter().enumerate() {
                    rho[(bi, bj)] = v[i] * v[j].conj();
                }
            }
        }
        State::Mixed(m) => {
            for (i, &bi) in map.iter().enumerate() {
                for (j, &bj) in map.iter().enumerate() {
                    rho[(bi, bj)] = m[(i, j)];
                }
            }
        }
        State::Diagonal(p) => {
            for (i, &bi) in map.iter().enumerate() {
                rho[(bi, bi)] = C64::new(p[i], 0.0);
            }
        }
    }
    rho
}

/// D = exp(Σ φ_i a_i* − conj φ_i a_i) on a truncated space, through the
/// Hermitian generator i(φa* − conj φ a).
pub fn displacement_operator(space: &Arc<FockSpace>, phi: &CVec) -> Result<CMat> {
    let mut terms = Vec::new();
    let i = C64::new(0.0, 1.0);
    for (k, &z) in phi.iter().enumerate() {
        terms.push((i * z, vec![Ladder::ad(k)]));
        terms.push((-i * z.conj(), vec![Ladder::a(k)]));
    }
    let gen = ManyBodyOperator::from_terms(space.clone(), &terms)?.to_dense();
    let (vals, vecs) = hermitian_eigen(&gen);
    let phases = CMat::from_diagonal(&vals.map(|x| C64::new(0.0, -x).exp()));
    Ok(&vecs * phases * vecs.adjoint())
}

/// Oracle value of the assembled Hamiltonian in D ρ D*, where ρ is the
/// quasi-free state of the trial 1-pdm built at `cutoff` and D displaces
/// by φ. The Hamiltonian conserves particle number, so its restriction to
/// the enlarged space is exact on every sector present.
pub fn oracle_energy(t: &BogoliubovTrial, c: &ManyBodyCoefficients, cutoff: usize, pad: usize) -> Result<OracleEnergy> {
    let m = c.modes();
    if m > 2 {
        return invalid("the displaced-state oracle is limited to two modes");
    }
    let diag = diagonalize_onepdm(&t.p, 1e-9)?;
    let spec = QuasiFreeSpec::with_map(&diag.values, diag.map.clone());
    let small = FockSpace::new(m, cutoff)?;
    let density = build_density(&spec, &small)?;
    let work = Arc::new(FockSpace::new(m, cutoff + pad)?);
    let big = Arc::new(FockSpace::new(m, cutoff + 2 * pad)?);
    let rho = embed(&small, &big, &density.state);
    let d = displacement_operator(&big, &t.phi)?;
    let sigma_big = &d * rho * d.adjoint();
    let n = work.dimension();
    let mut sigma = CMat::zeros(n, n);
    let index: Vec<usize> = (0..n)
        .map(|i| big.index_of(work.occupation(i)).expect("nested spaces"))
        .collect();
    for (i, &bi) in index.iter().enumerate() {
        for (j, &bj) in index.iter().enumerate() {
            sigma[(i, j)] = sigma_big[(bi, bj)];
        }
    }
    let kept = sigma.trace().re;
    let h = assemble_hamiltonian(&work, &c.h, &c.w)?.to_dense();
    let energy = (h * &sigma).trace().re / kept;
    Ok(OracleEnergy {
        energy,
        tail_mass: (1.0 - kept).max(0.0),
    })
}

/// N² + 2N(λ − √(λ(1+λ))) + λ + 2λ√(λ(1+λ)).
pub fn toy_reduced(n: f64, lambda: f64) -> f64 {
    let s = (lambda * (1.0 + lambda)).sqrt();
    n * n + 2.0 * n * (lambda - s) + lambda + 2.0 * lambda * s
}

/// x² + x(4λ − 2√(λ(1+λ))) + 2λ² + λ(1+λ).
pub fn toy_unreduced(x: f64, lambda: f64) -> f64 {
    let s = (lambda * (1.0 + lambda)).sqrt();
    x * x + x * (4.0 * lambda - 2.0 * s) + 2.0 * lambda * lambda + lambda * (1.0 + lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToyResult {
    pub n: f64,
    pub energy: f64,
    pub lambda: f64,
    /// max over the scan of |reduced − unreduced(N − λ, λ)|.
    pub form_gap: f64,
}

impl ToyResult {
    /// (E − (N² − N)) / N^{2/3}.
    pub fn ratio(&self) -> f64 {
        if self.n == 0.0 {
            0.0
        } else {
            (self.energy - (self.n * self.n - self.n)) / self.n.powf(2.0 / 3.0)
        }
    }
}

const TOY_SCAN: usize = 10_000;

/// Minimizes the reduced toy expression over λ ∈ [0, N].
pub fn toy_bogoliubov_energy(n: f64) -> Result<ToyResult> {
    if !(n >= 0.0) || !n.is_finite() {
        return invalid("N must be finite and non-negative");
    }
    if n == 0.0 {
        return Ok(ToyResult { n, energy: 0.0, lambda: 0.0, form_gap: 0.0 });
    }
    // quadratic spacing resolves the steep region near λ = 0
    let grid: Vec<f64> = (0..=TOY_SCAN)
        .map(|k| n * (k as f64 / TOY_SCAN as f64).powi(2))
        .collect();
    let mut best = 0;
    let mut gap: f64 = 0.0;
    let mut best_val = f64::INFINITY;
    for (k, &l) in grid.iter().enumerate() {
        let v = toy_reduced(n, l);
        gap = gap.max((v - toy_unreduced(n - l, l)).abs() / v.abs().max(1.0));
        if v < best_val {
            best_val = v;
            best = k;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(TOY_SCAN)];
    let (lambda, energy) = golden_section(|l| toy_reduced(n, l), lo, hi, 1e-10);
    let (lambda, energy) = if energy <= best_val { (lambda, energy) } else { (grid[best], best_val) };
    gap = gap.max((energy - toy_unreduced(n - lambda, lambda)).abs() / energy.abs().max(1.0));
    Ok(ToyResult { n, energy, lambda, form_gap: gap })
}

/// Golden-section search for a minimum on [lo, hi] to width `tol`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn cvec(v: &[C64]) -> CVec {
        CVec::from_column_slice(v)
    }

    fn one_mode(g: f64, a: f64) -> OnePdm {
        OnePdm::new(CMat::from_element(1, 1, c(g)), CMat::from_element(1, 1, c(a))).unwrap()
    }

    #[test]
    fn coherent_moments() {
        let phi = cvec(&[C64::new(0.6, -0.3)]);
        let vac = OnePdm::vacuum(1);
        let a = GenOp::from_ladder(Ladder::a(0), 1);
        let ad = GenOp::from_ladder(Ladder::ad(0), 1);
        let v = displace_expectation(&vac, &phi, &[a.clone()]).unwrap();
        assert!((v - phi[0]).norm() < 1e-15);
        let n = displace_expectation(&vac, &phi, &[ad, a]).unwrap();
        assert!((n.re - phi[0].norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn zero_displacement_is_wick() {
        let p = one_mode(0.4, 0.2);
        let ops = crate::quasifree::ladders(&[Ladder::a(0), Ladder::ad(0), Ladder::a(0), Ladder::ad(0)], 1);
        let d = displace_expectation(&p, &CVec::zeros(1), &ops).unwrap();
        assert_eq!(d, wick_expectation(&p, &ops).unwrap());
    }

    #[test]
    fn condensate_only_is_hartree() {
        let h = CMat::from_row_slice(2, 2, &[c(1.0), C64::new(0.2, 0.1), C64::new(0.2, -0.1), c(-0.5)]);
        let w = Tensor4::from_fn(2, |a, b, p, q| if a == q && b == p { c(1.0 + (a + b) as f64) } else { ZERO });
        let coef = ManyBodyCoefficients::new(h.clone(), w.clone()).unwrap();
        let phi = cvec(&[C64::new(0.5, 0.2), C64::new(-0.3, 0.4)]);
        let t = BogoliubovTrial::new(OnePdm::vacuum(2), phi.clone()).unwrap();
        let e = bogoliubov_energy(&t, &coef).unwrap();
        let mut expect = (phi.adjoint() * &h * &phi)[(0, 0)];
        for a in 0..2 {
            for b in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        expect += w.get(a, b, p, q) * 0.5 * phi[a].conj() * phi[b].conj() * phi[p] * phi[q];
                    }
                }
            }
        }
        assert!((e.total - expect.re).abs() < 1e-14);
        assert_eq!(e.exchange, 0.0);
        assert_eq!(e.pairing, 0.0);
    }

    #[test]
    fn toy_form_matches_closed_expression() {
        for &(l, x) in &[(0.0f64, 1.0f64), (0.5, 2.0), (2.0, 0.3)] {
            let s = l * (1.0 + l);
            let t = BogoliubovTrial::new(one_mode(l, -s.sqrt()), cvec(&[c(x.sqrt())])).unwrap();
            let e = bogoliubov_energy(&t, &ManyBodyCoefficients::toy()).unwrap();
            assert!((e.total - toy_unreduced(x, l)).abs() < 1e-12);
            assert!((toy_reduced(x + l, l) - toy_unreduced(x, l)).abs() < 1e-10);
        }
    }

    #[test]
    fn contraction_matches_expansion() {
        let p = crate::quasifree::QuasiFreeSpec::with_map(&[0.3, 0.1], crate::symplectic::BogoliubovMap::squeezes(&[0.2, 0.4]))
            .onepdm()
            .unwrap();
        let w = Tensor4::from_fn(2, |a, b, p, q| {
            let base = C64::new(((a + 2 * b + p + 2 * q) % 3) as f64, 0.0);
            base
        });
        // symmetrize to W_mnpq = W_nmqp and conj(W_mnpq) = W_qpnm
        let w = Tensor4::from_fn(2, |a, b, p, q| {
            (w.get(a, b, p, q) + w.get(b, a, q, p) + w.get(q, p, b, a).conj() + w.get(p, q, a, b).conj()) * 0.25
        });
        let coef = ManyBodyCoefficients::new(CMat::identity(2, 2), w).unwrap();
        let t = BogoliubovTrial::new(p, cvec(&[C64::new(0.3, 0.1), c(-0.2)])).unwrap();
        let a = bogoliubov_energy(&t, &coef).unwrap();
        let b = bogoliubov_energy_by_expansion(&t, &coef).unwrap();
        assert!((a.total - b).abs() < 1e-12, "{} vs {}", a.total, b);
        assert!(a.imaginary.abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_one_mode() {
        let p = crate::quasifree::QuasiFreeSpec::with_map(&[0.2], crate::symplectic::BogoliubovMap::squeeze(0.2))
            .onepdm()
            .unwrap();
        let t = BogoliubovTrial::new(p, cvec(&[C64::new(0.5, 0.3)])).unwrap();
        let coef = ManyBodyCoefficients::new(CMat::from_element(1, 1, c(0.7)), Tensor4::from_fn(1, |_, _, _, _| c(1.3))).unwrap();
        let e = bogoliubov_energy(&t, &coef).unwrap();
        let o = oracle_energy(&t, &coef, 40, 30).unwrap();
        assert!((e.total - o.energy).abs() < 1e-6, "{} vs {}", e.total, o.energy);
    }

    #[test]
    fn toy_values() {
        assert_eq!(toy_bogoliubov_energy(0.0).unwrap().energy, 0.0);
        let r1 = toy_bogoliubov_energy(1.0).unwrap();
        assert!((r1.energy - 0.699_117_109_9).abs() < 1e-8);
        let r2 = toy_bogoliubov_energy(2.0).unwrap();
        assert!(r2.energy >= 2.0 && r2.form_gap < 1e-10);
        assert!(toy_bogoliubov_energy(-1.0).is_err());
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6 && (fx - 1.0).abs() < 1e-12);
    }
}
