//! Seeded random generators for test inputs.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eigenvalues, sign_matrix, CMat, C64};
use crate::onepdm::OnePdm;
use crate::quadratic::QuadraticHamiltonian;
use crate::symplectic::{compose, BogoliubovMap};
use crate::quasifree::QuasiFreeSpec;

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) / 2f64.sqrt()
    })
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let qr = gaussian_matrix(rng, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let scaled = q.column(j) * phase;
        q.set_column(j, &scaled);
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n);
    (&g + g.adjoint()).scale(0.5)
}

pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian_matrix(rng, n);
    (&g + g.transpose()).scale(0.5)
}

/// U_1 · squeeze(r) · U_2 with r_i uniform in [0, max_squeeze).
pub fn random_bogoliubov<R: Rng + ?Sized>(rng: &mut R, m: usize, max_squeeze: f64) -> BogoliubovMap {
    let r: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * max_squeeze).collect();
    let u1 = BogoliubovMap::rotation(random_unitary(rng, m)).expect("unitary");
    let u2 = BogoliubovMap::rotation(random_unitary(rng, m)).expect("unitary");
    let left = compose(&u1, &BogoliubovMap::squeezes(&r)).expect("small squeeze");
    compose(&left, &u2).expect("small squeeze")
}

/// Random quasi-free data with occupations uniform in [0, max_lambda).
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, m: usize, max_lambda: f64, max_squeeze: f64) -> QuasiFreeSpec {
    let lambdas = (0..m).map(|_| rng.random::<f64>() * max_lambda).collect::<Vec<_>>();
    QuasiFreeSpec::with_map(&lambdas, random_bogoliubov(rng, m, max_squeeze))
}

pub fn random_admissible<R: Rng + ?Sized>(rng: &mut R, m: usize) -> OnePdm {
    random_spec(rng, m, 2.0, 0.8).onepdm().expect("valid spec")
}

pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, m: usize) -> OnePdm {
    let map = random_bogoliubov(rng, m, 0.8);
    QuasiFreeSpec::with_map(&vec![0.0; m], map).onepdm().expect("valid spec")
}

/// A = SVS diag(d, d) SV*S for given symplectic eigenvalues; the map V
/// then diagonalizes A exactly.
pub fn quadratic_with_spectrum(map: &BogoliubovMap, d: &[f64]) -> QuadraticHamiltonian {
    let m = map.modes();
    let s = sign_matrix(m);
    let w = &s * map.full() * &s;
    let diag = CMat::from_fn(2 * m, 2 * m, |i, j| {
        if i == j {
            C64::new(d[i % m], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let a = &w * diag * w.adjoint();
    let top = a.view((0, 0), (m, m)).into_owned();
    let off = a.view((0, m), (m, m)).into_owned();
    let top = (&top + top.adjoint()).scale(0.5);
    let off = (&off + off.transpose()).scale(0.5);
    QuadraticHamiltonian::new(top, off).expect("pattern holds by construction")
}

/// Random positive definite quadratic Hamiltonian with symplectic
/// eigenvalues in [d_min, d_min + 1).
pub fn random_positive_quadratic<R: Rng + ?Sized>(rng: &mut R, m: usize, d_min: f64, max_squeeze: f64) -> QuadraticHamiltonian {
    let d: Vec<f64> = (0..m).map(|_| d_min + rng.random::<f64>()).collect();
    quadratic_with_spectrum(&random_bogoliubov(rng, m, max_squeeze), &d)
}

/// Random a > 0 with ‖b‖ ≤ ratio · λ_min(a), which keeps the Fock
/// ground state well inside small cutoffs.
pub fn random_weakly_paired<R: Rng + ?Sized>(rng: &mut R, m: usize, ratio: f64) -> QuadraticHamiltonian {
    let h = random_hermitian(rng, m);
    let shift = 1.0 - hermitian_eigenvalues(&h).min();
    let a = h + CMat::identity(m, m).scale(shift + rng.random::<f64>());
    let lmin = hermitian_eigenvalues(&a).min();
    let b = random_symmetric(rng, m);
    let nb = crate::linalg::op_norm(&b);
    let b = if nb > 0.0 { b.scale(ratio * lmin / nb) } else { b };
    QuadraticHamiltonian::new(a, b).expect("pattern holds by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::onepdm::{is_admissible, purity_defect};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(&mut rng, 4);
        assert!(max_abs(&(u.adjoint() * &u - CMat::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn maps_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let v = random_bogoliubov(&mut rng, 3, 1.0);
            assert!(v.symplectic_defect() < 1e-10);
            assert!(v.j_defect() < 1e-12);
        }
    }

    #[test]
    fn states_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_admissible(&mut rng, 3);
        assert!(is_admissible(&p, 1e-9).admissible);
        let q = random_pure(&mut rng, 3);
        assert!(purity_defect(&q) < 1e-9);
    }

    #[test]
    fn quadratic_spectrum_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let map = random_bogoliubov(&mut rng, 2, 0.7);
        let a = quadratic_with_spectrum(&map, &[0.5, 1.5]);
        let r = crate::symplectic::diagonalize_quadratic(&a, 1e-10).unwrap();
        assert!((r.values[0] - 0.5).abs() < 1e-9 && (r.values[1] - 1.5).abs() < 1e-9);
        let w = random_weakly_paired(&mut rng, 3, 0.5);
        assert!(w.is_psd(0.0));
    }
}
