//! Quadratic Hamiltonians H_A = Σ_ij A_ij b_i* b_j with
//! b = (a_1, …, a_M, a_1*, …, a_M*) and A = [[a, b], [conj(b), conj(a)]].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fock::{ground_state, FockSpace, Ladder, ManyBodyOperator, Sector};
use crate::linalg::{doubled, is_hermitian, is_psd, is_symmetric, max_abs, sign_matrix, CMat, C64, ZERO};
use crate::onepdm::{full_gamma, OnePdm};
use crate::symplectic::{diagonalize_quadratic, inverse, DiagonalizationResult};

const DIAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    a: CMat,
    b: CMat,
}

impl QuadraticHamiltonian {
    /// Requires a Hermitian and b symmetric.
    pub fn new(a: CMat, b: CMat) -> Result<Self> {
        let m = a.nrows();
        if a.ncols() != m || b.nrows() != m || b.ncols() != m {
            return invalid("a and b must be square blocks of equal size");
        }
        if !is_hermitian(&a, 1e-12) {
            return invalid("a is not Hermitian");
        }
        if !is_symmetric(&b, 1e-12) {
            return invalid("b is not symmetric");
        }
        Ok(QuadraticHamiltonian { a, b })
    }

    pub fn single_mode(eps: f64, kappa: f64) -> Self {
        QuadraticHamiltonian {
            a: CMat::from_element(1, 1, C64::new(eps, 0.0)),
            b: CMat::from_element(1, 1, C64::new(kappa, 0.0)),
        }
    }

    pub fn modes(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn doubled(&self) -> CMat {
        doubled(&self.a, &self.b)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        is_psd(&self.doubled(), tol).0
    }

    /// H_A written as ladder strings, normal-ordered exactly:
    /// the conj(a) block contributes Σ conj(a)_pq (a_q* a_p + δ_pq).
    pub fn fock_terms(&self) -> Vec<(C64, Vec<Ladder>)> {
        let m = self.modes();
        let mut terms = Vec::new();
        let mut constant = ZERO;
        for i in 0..m {
            for j in 0..m {
                let a = self.a[(i, j)];
                let b = self.b[(i, j)];
                // a_ij a_i* a_j + conj(a)_ji a_i* a_j = 2 a_ij a_i* a_j
                if a != ZERO {
                    terms.push((a + self.a[(j, i)].conj(), vec![Ladder::ad(i), Ladder::a(j)]));
                }
                if b != ZERO {
                    terms.push((b, vec![Ladder::ad(i), Ladder::ad(j)]));
                    terms.push((b.conj(), vec![Ladder::a(i), Ladder::a(j)]));
                }
            }
            constant += self.a[(i, i)].conj();
        }
        terms.push((constant, vec![]));
        terms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub energy: f64,
    pub imaginary: f64,
}

/// Tr(AΓ).
pub fn energy_of_onepdm(a: &QuadraticHamiltonian, p: &OnePdm) -> Result<EnergyValue> {
    if a.modes() != p.modes() {
        return invalid("mode counts differ");
    }
    let t = (a.doubled() * full_gamma(p)).trace();
    Ok(EnergyValue {
        energy: t.re,
        imaginary: t.im,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundEnergy {
    pub energy: f64,
    pub d: Vec<f64>,
    /// True when A has a kernel and the infimum may not be attained.
    pub degenerate: bool,
    pub diagonalization: DiagonalizationResult,
}

/// Σ d_n from the symplectic diagonalization.
pub fn ground_energy(a: &QuadraticHamiltonian) -> Result<GroundEnergy> {
    let diag = diagonalize_quadratic(a, DIAG_TOL)?;
    Ok(GroundEnergy {
        energy: diag.values.iter().sum(),
        d: diag.values.clone(),
        degenerate: diag.kernel_dimension > 0,
        diagonalization: diag,
    })
}

fn lower_projector(m: usize) -> CMat {
    CMat::from_fn(2 * m, 2 * m, |i, j| if i == j && i >= m { C64::new(1.0, 0.0) } else { ZERO })
}

/// Γ = V diag(0, 1) V* for the minimizing quasi-free pure state.
pub fn ground_onepdm(a: &QuadraticHamiltonian) -> Result<OnePdm> {
    let diag = diagonalize_quadratic(a, DIAG_TOL)?;
    let f = diag.map.full();
    let gamma = &f * lower_projector(a.modes()) * f.adjoint();
    OnePdm::from_full(&gamma)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFlag {
    pub projection: CMat,
    /// AS has eigenvalues within 1e-10 of zero; they are put in the
    /// non-negative part.
    pub degenerate: bool,
}

/// 1_{(−∞,0)}[AS] = (V*)⁻¹ diag(0, 1) V*, with (V*)⁻¹ = S V S.
pub fn spectral_flag(a: &QuadraticHamiltonian) -> Result<SpectralFlag> {
    let diag = diagonalize_quadratic(a, DIAG_TOL)?;
    let m = a.modes();
    let f = diag.map.full();
    let inv_adj = inverse(&diag.map).full().adjoint();
    let projection = inv_adj * lower_projector(m) * f.adjoint();
    Ok(SpectralFlag {
        projection,
        degenerate: diag.values.iter().any(|&d| d < 1e-10),
    })
}

/// ‖AΓ + AS·P‖ entrywise.
pub fn stationarity_defect(a: &QuadraticHamiltonian, p: &OnePdm, flag: &CMat) -> f64 {
    let am = a.doubled();
    let s = sign_matrix(a.modes());
    max_abs(&(&am * full_gamma(p) + &am * s * flag))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVerification {
    pub energy: f64,
    pub cutoffs: Vec<usize>,
    pub oracle_energies: Vec<f64>,
    pub gaps: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Lowest eigenvalue of the truncated H_A for each cutoff.
pub fn fock_verify_ground(a: &QuadraticHamiltonian, cutoffs: &[usize]) -> Result<FockVerification> {
    if a.modes() > 3 {
        return invalid("oracle check limited to at most 3 modes");
    }
    let energy = ground_energy(a)?.energy;
    let terms = a.fock_terms();
    let mut out = FockVerification {
        energy,
        cutoffs: cutoffs.to_vec(),
        oracle_energies: Vec::new(),
        gaps: Vec::new(),
        residuals: Vec::new(),
    };
    for &n in cutoffs {
        let space = Arc::new(FockSpace::new(a.modes(), n)?);
        let op = ManyBodyOperator::from_terms(space, &terms)?;
        let g = ground_state(&op, Sector::Full)?;
        out.oracle_energies.push(g.energy);
        out.gaps.push(g.energy - energy);
        out.residuals.push(g.residual);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::diagonal_of;
    use crate::linalg::{c, hermitian_eigenvalues, CVec};
    use crate::onepdm::purity_defect;

    #[test]
    fn vacuum_energy_is_trace_of_conj_a() {
        let a = QuadraticHamiltonian::new(
            CMat::from_row_slice(2, 2, &[c(2.0), C64::new(0.5, 0.5), C64::new(0.5, -0.5), c(3.0)]),
            CMat::zeros(2, 2),
        )
        .unwrap();
        let e = energy_of_onepdm(&a, &OnePdm::vacuum(2)).unwrap();
        assert!((e.energy - 5.0).abs() < 1e-14 && e.imaginary.abs() < 1e-14);
        let g = ground_energy(&a).unwrap();
        assert!((g.energy - 5.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_energy_of_thermal() {
        let a = QuadraticHamiltonian::single_mode(1.5, 0.0);
        let e = energy_of_onepdm(&a, &OnePdm::thermal(&[0.4])).unwrap();
        assert!((e.energy - (1.5 * 0.4 + 1.5 * 1.4)).abs() < 1e-14);
        let zero = QuadraticHamiltonian::new(CMat::zeros(1, 1), CMat::zeros(1, 1)).unwrap();
        assert_eq!(energy_of_onepdm(&zero, &OnePdm::thermal(&[0.4])).unwrap().energy, 0.0);
    }

    #[test]
    fn squeezed_minimizer_closed_form() {
        let a = QuadraticHamiltonian::single_mode(5.0, 3.0);
        let g = ground_energy(&a).unwrap();
        assert!((g.energy - 4.0).abs() < 1e-12);
        let p = ground_onepdm(&a).unwrap();
        let r = 0.5 * (3.0f64 / 5.0).atanh();
        assert!((p.gamma()[(0, 0)].re - r.sinh().powi(2)).abs() < 1e-12);
        assert!((p.alpha()[(0, 0)].re + r.cosh() * r.sinh()).abs() < 1e-12);
        assert!((energy_of_onepdm(&a, &p).unwrap().energy - 4.0).abs() < 1e-12);
        assert!(purity_defect(&p) < 1e-12);
    }

    #[test]
    fn flag_for_unsqueezed_hamiltonian() {
        let a = QuadraticHamiltonian::new(
            CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(2.0)])),
            CMat::zeros(2, 2),
        )
        .unwrap();
        let f = spectral_flag(&a).unwrap();
        assert!(max_abs(&(f.projection - lower_projector(2))) < 1e-14);
        assert_eq!(ground_onepdm(&a).unwrap(), OnePdm::vacuum(2));
    }

    #[test]
    fn flag_is_rank_one_projection() {
        let a = QuadraticHamiltonian::single_mode(5.0, 3.0);
        let p = spectral_flag(&a).unwrap().projection;
        assert!(max_abs(&(&p * &p - &p)) < 1e-10);
        assert!((p.trace().re - 1.0).abs() < 1e-12);
        let g = ground_onepdm(&a).unwrap();
        assert!(stationarity_defect(&a, &g, &p) < 1e-12);
    }

    #[test]
    fn fock_assembly_single_mode() {
        // 2ε a*a + ε + κ(a*² + a²)
        let a = QuadraticHamiltonian::single_mode(5.0, 3.0);
        let space = Arc::new(FockSpace::new(1, 4).unwrap());
        let op = ManyBodyOperator::from_terms(space, &a.fock_terms()).unwrap();
        assert_eq!(diagonal_of(&op), vec![5.0, 15.0, 25.0, 35.0, 45.0]);
        let d = op.to_dense();
        assert!((d[(2, 0)].re - 3.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((d[(0, 2)].re - 3.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(op.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn oracle_converges_for_single_mode() {
        let a = QuadraticHamiltonian::single_mode(5.0, 3.0);
        let v = fock_verify_ground(&a, &[20, 40, 60]).unwrap();
        assert!(v.gaps[2].abs() <= 1e-6, "{:?}", v.gaps);
        assert!(v.gaps[0] >= v.gaps[1] - 1e-12 && v.gaps[1] >= v.gaps[2] - 1e-12);
        let b0 = QuadraticHamiltonian::single_mode(2.0, 0.0);
        let v = fock_verify_ground(&b0, &[3, 7]).unwrap();
        assert!(v.gaps.iter().all(|g| g.abs() < 1e-12));
    }

    #[test]
    fn doubled_matrix_spectrum_is_symmetric_under_j() {
        let a = QuadraticHamiltonian::single_mode(5.0, 3.0);
        let ev = hermitian_eigenvalues(&a.doubled());
        assert!((ev[0] - 2.0).abs() < 1e-12 && (ev[1] - 8.0).abs() < 1e-12);
    }
}
