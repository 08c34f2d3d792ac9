//! One-particle density matrices on the doubled space h ⊕ h*.
//!
//! Conventions: γ_{mn} = ⟨a_n* a_m⟩, α_{mn} = ⟨a_n a_m⟩, and
//! Γ = [[γ, α], [conj(α), 1 + conj(γ)]]. J acts on coefficient vectors by
//! swapping the two halves and conjugating.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::json::MatrixJson;
use crate::linalg::{
    block, doubled, hermitian_eigenvalues, is_hermitian, is_symmetric, max_abs, min_eigenvalue,
    op_norm, sign_matrix, CMat, C64,
};

#[derive(Debug, Clone, PartialEq)]
pub struct OnePdm {
    gamma: CMat,
    alpha: CMat,
}

const SHAPE_TOL: f64 = 1e-12;

impl OnePdm {
    /// Checks shapes, hermiticity of γ and symmetry of α.
    pub fn new(gamma: CMat, alpha: CMat) -> Result<Self> {
        let m = gamma.nrows();
        if gamma.ncols() != m || alpha.nrows() != m || alpha.ncols() != m {
            return invalid("γ and α must be square blocks of equal size");
        }
        if !is_hermitian(&gamma, SHAPE_TOL) {
            return invalid("γ is not Hermitian");
        }
        if !is_symmetric(&alpha, SHAPE_TOL) {
            return invalid("α is not symmetric");
        }
        Ok(OnePdm { gamma, alpha })
    }

    pub fn vacuum(m: usize) -> Self {
        OnePdm {
            gamma: CMat::zeros(m, m),
            alpha: CMat::zeros(m, m),
        }
    }

    /// Diagonal occupations, no pairing.
    pub fn thermal(lambdas: &[f64]) -> Self {
        let m = lambdas.len();
        OnePdm {
            gamma: CMat::from_fn(m, m, |i, j| if i == j { C64::new(lambdas[i], 0.0) } else { C64::new(0.0, 0.0) }),
            alpha: CMat::zeros(m, m),
        }
    }

    /// Reads the blocks back from a doubled matrix.
    pub fn from_full(full: &CMat) -> Result<Self> {
        if full.nrows() != full.ncols() || full.nrows() % 2 != 0 {
            return invalid("doubled matrix must be square with even size");
        }
        let gamma = block(full, 0, 0);
        let alpha = block(full, 0, 1);
        let expect = full_matrix(&gamma, &alpha);
        if max_abs(&(&expect - full)) > 1e-9 * max_abs(full).max(1.0) {
            return invalid("doubled matrix lacks the 1-pdm block pattern");
        }
        let gamma = (&gamma + gamma.adjoint()).scale(0.5);
        let alpha = (&alpha + alpha.transpose()).scale(0.5);
        OnePdm::new(gamma, alpha)
    }

    pub fn modes(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn gamma(&self) -> &CMat {
        &self.gamma
    }

    pub fn alpha(&self) -> &CMat {
        &self.alpha
    }
}

fn full_matrix(gamma: &CMat, alpha: &CMat) -> CMat {
    let m = gamma.nrows();
    let mut g = doubled(gamma, alpha);
    for i in m..2 * m {
        g[(i, i)] += C64::new(1.0, 0.0);
    }
    g
}

/// Γ = [[γ, α], [conj(α), 1 + conj(γ)]].
pub fn full_gamma(p: &OnePdm) -> CMat {
    full_matrix(&p.gamma, &p.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Smallest eigenvalue of γ.
    pub gamma_min: f64,
    /// Smallest eigenvalue of γ − α conj(1+γ)⁻¹ α*.
    pub schur_min: f64,
}

impl Admissibility {
    /// Most negative eigenvalue found by either test.
    pub fn min_eigenvalue(&self) -> f64 {
        self.gamma_min.min(self.schur_min)
    }
}

/// γ ≥ 0 and γ ≥ α conj(1+γ)⁻¹ α*, both up to `tol`.
pub fn is_admissible(p: &OnePdm, tol: f64) -> Admissibility {
    let m = p.modes();
    let gamma_min = min_eigenvalue(&p.gamma);
    let one_plus = CMat::identity(m, m) + p.gamma.map(|z| z.conj());
    let inv = one_plus
        .try_inverse()
        .unwrap_or_else(|| CMat::identity(m, m));
    let schur = &p.gamma - &p.alpha * inv * p.alpha.adjoint();
    let schur_min = min_eigenvalue(&schur);
    Admissibility {
        admissible: gamma_min >= -tol && schur_min >= -tol,
        gamma_min,
        schur_min,
    }
}

/// Smallest eigenvalue of γ(1+γ) − αα*, the weaker relation whose
/// relationship with admissibility is left open.
pub fn weak_relation_min(p: &OnePdm) -> f64 {
    let m = p.modes();
    let lhs = &p.gamma * (CMat::identity(m, m) + &p.gamma) - &p.alpha * p.alpha.adjoint();
    min_eigenvalue(&lhs)
}

pub fn particle_number(p: &OnePdm) -> f64 {
    p.gamma.trace().re
}

/// ‖ΓSΓ + Γ‖ in operator norm.
pub fn purity_defect(p: &OnePdm) -> f64 {
    let g = full_gamma(p);
    let s = sign_matrix(p.modes());
    op_norm(&(&g * s * &g + &g))
}

/// ‖αα* − γ(1+γ)‖ in operator norm.
pub fn pure_relation_defect(p: &OnePdm) -> f64 {
    let m = p.modes();
    op_norm(&(&p.alpha * p.alpha.adjoint() - &p.gamma * (CMat::identity(m, m) + &p.gamma)))
}

/// ΓS(Γ+S) = ΓSΓ + Γ, which V* (·) V maps to diag(λ(λ+1), −λ(λ+1)).
pub fn gsgs(p: &OnePdm) -> CMat {
    let g = full_gamma(p);
    let s = sign_matrix(p.modes());
    &g * &s * (&g + &s)
}

/// Eigenvalues of S·ΓS(Γ+S), invariant under Bogoliubov congruence;
/// each λ_n(λ_n+1) appears twice.
pub fn gsgs_invariants(p: &OnePdm) -> Vec<f64> {
    let s = sign_matrix(p.modes());
    let eig = (s * gsgs(p)).eigenvalues().unwrap_or_else(|| crate::linalg::CVec::zeros(0));
    let mut v: Vec<f64> = eig.iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn doubled_eigenvalues(p: &OnePdm) -> Vec<f64> {
    hermitian_eigenvalues(&full_gamma(p)).iter().copied().collect()
}

#[derive(Serialize, Deserialize)]
struct OnePdmJson {
    #[serde(rename = "M")]
    m: usize,
    gamma: MatrixJson,
    alpha: MatrixJson,
}

impl Serialize for OnePdm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OnePdmJson {
            m: self.modes(),
            gamma: MatrixJson::from(&self.gamma),
            alpha: MatrixJson::from(&self.alpha),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OnePdm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = OnePdmJson::deserialize(d)?;
        let gamma = j.gamma.to_matrix().map_err(D::Error::custom)?;
        let alpha = j.alpha.to_matrix().map_err(D::Error::custom)?;
        if gamma.nrows() != j.m {
            return Err(D::Error::custom("M does not match the block size"));
        }
        OnePdm::new(gamma, alpha).map_err(D::Error::custom)
    }
}
