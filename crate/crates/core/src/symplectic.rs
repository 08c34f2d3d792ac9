//! Bogoliubov maps on h ⊕ h* and symplectic diagonalization.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::json::MatrixJson;
use crate::linalg::{
    block, doubled, hermitian_eigen, is_hermitian, j_sandwich, j_vec, max_abs, sign_matrix, CMat,
    CVec, C64, ZERO,
};
use crate::onepdm::{full_gamma, is_admissible, OnePdm};
use crate::quadratic::QuadraticHamiltonian;

/// The doubled map [[U, V], [conj(V), conj(U)]].
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovMap {
    u: CMat,
    v: CMat,
}

/// Drift allowed before a composed map is reported as broken.
const COMPOSE_TOL: f64 = 1e-8;

impl BogoliubovMap {
    /// Builds a map from its blocks, checking V*SV = S to `tol`.
    pub fn new(u: CMat, v: CMat, tol: f64) -> Result<Self> {
        let m = u.nrows();
        if u.ncols() != m || v.nrows() != m || v.ncols() != m {
            return invalid("U and V must be square blocks of equal size");
        }
        let map = BogoliubovMap { u, v };
        let d = map.symplectic_defect();
        if d > tol {
            return invalid(format!("blocks are not symplectic (defect {d:e})"));
        }
        Ok(map)
    }

    pub fn identity(m: usize) -> Self {
        BogoliubovMap {
            u: CMat::identity(m, m),
            v: CMat::zeros(m, m),
        }
    }

    /// Single-mode squeeze (U, V) = (cosh r, sinh r).
    pub fn squeeze(r: f64) -> Self {
        BogoliubovMap {
            u: CMat::from_element(1, 1, C64::new(r.cosh(), 0.0)),
            v: CMat::from_element(1, 1, C64::new(r.sinh(), 0.0)),
        }
    }

    /// Independent squeezes on each mode.
    pub fn squeezes(r: &[f64]) -> Self {
        let m = r.len();
        let diag = |f: fn(f64) -> f64| {
            CMat::from_fn(m, m, |i, j| if i == j { C64::new(f(r[i]), 0.0) } else { ZERO })
        };
        BogoliubovMap {
            u: diag(f64::cosh),
            v: diag(f64::sinh),
        }
    }

    /// Mode rotation by a unitary block.
    pub fn rotation(u: CMat) -> Result<Self> {
        let m = u.nrows();
        Self::new(u, CMat::zeros(m, m), 1e-10)
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn u(&self) -> &CMat {
        &self.u
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    pub fn full(&self) -> CMat {
        doubled(&self.u, &self.v)
    }

    fn from_full(full: &CMat) -> Self {
        BogoliubovMap {
            u: block(full, 0, 0),
            v: block(full, 0, 1),
        }
    }

    /// max(‖V*SV − S‖, ‖VSV* − S‖) entrywise.
    pub fn symplectic_defect(&self) -> f64 {
        let f = self.full();
        let s = sign_matrix(self.modes());
        let a = max_abs(&(f.adjoint() * &s * &f - &s));
        let b = max_abs(&(&f * &s * f.adjoint() - &s));
        a.max(b)
    }

    /// ‖JVJ − V‖ entrywise.
    pub fn j_defect(&self) -> f64 {
        let f = self.full();
        max_abs(&(j_sandwich(&f) - &f))
    }

    /// Image of a doubled-space coefficient vector.
    pub fn apply(&self, f: &CVec) -> CVec {
        self.full() * f
    }
}

pub fn compose(a: &BogoliubovMap, b: &BogoliubovMap) -> Result<BogoliubovMap> {
    if a.modes() != b.modes() {
        return invalid("maps act on different mode counts");
    }
    let c = BogoliubovMap::from_full(&(a.full() * b.full()));
    let d = c.symplectic_defect();
    if d > COMPOSE_TOL {
        return Err(Error::Numerical(format!(
            "composition drifted from the symplectic group (defect {d:e})"
        )));
    }
    Ok(c)
}

/// S V* S.
pub fn inverse(v: &BogoliubovMap) -> BogoliubovMap {
    let s = sign_matrix(v.modes());
    BogoliubovMap::from_full(&(&s * v.full().adjoint() * &s))
}

/// Tr(VV*) of the off-diagonal block.
pub fn shale_stinespring_norm(v: &BogoliubovMap) -> f64 {
    (&v.v * v.v.adjoint()).trace().re
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizationResult {
    pub map: BogoliubovMap,
    /// Ascending λ_n (1-pdms) or d_n (quadratic Hamiltonians).
    pub values: Vec<f64>,
    /// Off-diagonal Frobenius norm of the transformed matrix.
    pub residual: f64,
    /// Number of zero modes detected (quadratic Hamiltonians only).
    pub kernel_dimension: usize,
}

#[derive(Serialize)]
struct DiagonalizationJson<'a> {
    #[serde(rename = "U")]
    u: MatrixJson,
    #[serde(rename = "V")]
    v: MatrixJson,
    values: &'a [f64],
    residual: f64,
}

impl Serialize for DiagonalizationResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagonalizationJson {
            u: MatrixJson::from(&self.map.u),
            v: MatrixJson::from(&self.map.v),
            values: &self.values,
            residual: self.residual,
        }
        .serialize(s)
    }
}

/// Relative width of an eigenvalue cluster treated as degenerate.
const CLUSTER_GAP: f64 = 1e-9;

/// Diagonalizes a positive definite J-commuting K by a Bogoliubov map:
/// V*KV = diag(μ, μ) with μ ascending.
///
/// With C = K^{1/2} S K^{1/2} and Cφ = μφ (μ > 0), v = S K^{1/2} φ / √μ
/// solves SKv = μv with (v, Sv) = 1; its partner Jv has eigenvalue −μ.
fn diagonalize_positive(k: &CMat) -> Result<(BogoliubovMap, Vec<f64>)> {
    let n = k.nrows();
    let m = n / 2;
    let (kvals, kvecs) = hermitian_eigen(k);
    if kvals[0] <= 0.0 {
        return Err(Error::NotPositive {
            min_eigenvalue: kvals[0],
        });
    }
    let mut scaled = kvecs.clone();
    for (j, &v) in kvals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v.sqrt());
    }
    let root = &scaled * kvecs.adjoint();
    let s = sign_matrix(m);
    let cmat = &root * &s * &root;
    let (cvals, cvecs) = hermitian_eigen(&cmat);
    // C is congruent to S: exactly m positive eigenvalues.
    let mu: Vec<f64> = (m..n).map(|i| cvals[i]).collect();
    if mu[0] < 1e-12 || cvals[m - 1] > -1e-12 {
        return Err(Error::IllConditioned(format!(
            "symplectic eigenvalue {:e} too close to zero",
            mu[0]
        )));
    }
    let sr = &s * &root;
    let mut cols: Vec<CVec> = (0..m)
        .map(|i| (&sr * cvecs.column(m + i)).unscale(mu[i].sqrt()))
        .collect();

    let mut start = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && mu[end] - mu[end - 1] <= CLUSTER_GAP * mu[end].max(1.0) {
            end += 1;
        }
        if end - start > 1 {
            canonicalize_cluster(&mut cols[start..end], &s);
        }
        start = end;
    }
    for col in cols.iter_mut() {
        fix_phase(col);
    }

    let mut full = CMat::zeros(n, n);
    for (i, col) in cols.iter().enumerate() {
        full.set_column(i, col);
        full.set_column(m + i, &j_vec(col));
    }
    Ok((BogoliubovMap::from_full(&full), mu))
}

fn s_inner(x: &CVec, y: &CVec, s: &CMat) -> C64 {
    x.dotc(&(s * y))
}

/// Replaces an S-orthonormal basis of a degenerate eigenspace by the one
/// obtained from projected unit vectors, so that the result does not depend
/// on the eigensolver's arbitrary choice.
fn canonicalize_cluster(cols: &mut [CVec], s: &CMat) {
    let n = cols[0].len();
    let project = |e: &CVec, basis: &[CVec]| {
        let mut out = CVec::zeros(n);
        for b in basis {
            out.axpy(s_inner(b, e, s), b, C64::new(1.0, 0.0));
        }
        out
    };
    let original: Vec<CVec> = cols.to_vec();
    let candidates: Vec<CVec> = (0..n)
        .map(|k| project(&CVec::from_fn(n, |i, _| if i == k { C64::new(1.0, 0.0) } else { ZERO }), &original))
        .collect();
    let mut chosen: Vec<CVec> = Vec::with_capacity(cols.len());
    for _ in 0..cols.len() {
        let mut best: Option<(f64, CVec)> = None;
        for cand in &candidates {
            let mut r = cand.clone();
            for q in &chosen {
                let coef = s_inner(q, &r, s);
                r.axpy(-coef, q, C64::new(1.0, 0.0));
            }
            let w = s_inner(&r, &r, s).re;
            if best.as_ref().is_none_or(|(bw, _)| w > bw * (1.0 + 1e-12)) {
                best = Some((w, r));
            }
        }
        match best {
            Some((w, r)) if w > 1e-10 => chosen.push(r.unscale(w.sqrt())),
            _ => {
                // cluster has no usable projections: keep the eigensolver basis
                cols.clone_from_slice(&original);
                return;
            }
        }
    }
    cols.clone_from_slice(&chosen);
}

/// Makes the largest-magnitude entry real and positive.
fn fix_phase(col: &mut CVec) {
    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(z) = col.iter().find(|z| z.norm() >= max * (1.0 - 1e-10)).copied() {
        let phase = z.conj() / z.norm();
        for x in col.iter_mut() {
            *x *= phase;
        }
    }
}

fn off_diagonal_norm(t: &CMat) -> f64 {
    let mut acc = 0.0;
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            if i != j {
                acc += t[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// V*ΓV = diag(λ, 1 + λ) for an admissible 1-pdm.
pub fn diagonalize_onepdm(p: &OnePdm, tol: f64) -> Result<DiagonalizationResult> {
    let adm = is_admissible(p, tol);
    if !adm.admissible {
        return invalid(format!(
            "1-pdm is not admissible (min eigenvalue {:e})",
            adm.min_eigenvalue()
        ));
    }
    let m = p.modes();
    let gamma = full_gamma(p);
    let k = &gamma + sign_matrix(m).scale(0.5);
    let (map, mu) = diagonalize_positive(&k)?;
    let mut values = Vec::with_capacity(m);
    for &x in &mu {
        let l = x - 0.5;
        if l < -tol {
            return Err(Error::Numerical(format!("negative occupation {l:e}")));
        }
        values.push(l.max(0.0));
    }
    let f = map.full();
    let t = f.adjoint() * &gamma * &f;
    Ok(DiagonalizationResult {
        residual: off_diagonal_norm(&t),
        map,
        values,
        kernel_dimension: 0,
    })
}

/// V*AV = diag(d, d) for a PSD J-commuting coefficient matrix.
pub fn diagonalize_quadratic(a: &QuadraticHamiltonian, tol: f64) -> Result<DiagonalizationResult> {
    let full = a.doubled();
    if !is_hermitian(&full, 1e-12) {
        return invalid("coefficient matrix is not Hermitian");
    }
    let m = a.modes();
    let scale = max_abs(&full).max(1e-300);
    let (vals, _) = hermitian_eigen(&full);
    // each symplectic zero mode contributes two zero eigenvalues of A
    let zero_tol = tol.max(1e-9) * scale;
    if vals[0] < -zero_tol {
        return Err(Error::NotPositive {
            min_eigenvalue: vals[0],
        });
    }
    let zeros = vals.iter().filter(|&&v| v.abs() <= zero_tol).count();
    let kernel_dimension = zeros.div_ceil(2);
    let k = if zeros > 0 {
        let delta = 1e-10 * scale.max(1.0);
        &full + CMat::identity(2 * m, 2 * m).scale(delta)
    } else {
        full.clone()
    };
    let (map, mu) = diagonalize_positive(&k)?;
    // regularization lifts zero modes to O(√δ); report them as exact zeros
    let values: Vec<f64> = mu
        .iter()
        .enumerate()
        .map(|(i, &d)| if i < kernel_dimension { 0.0 } else { d })
        .collect();
    let f = map.full();
    let t = f.adjoint() * &full * &f;
    Ok(DiagonalizationResult {
        residual: off_diagonal_norm(&t),
        map,
        values,
        kernel_dimension,
    })
}

/// Diagonal pattern check: max deviation of V*XV from diag(top, bottom).
pub fn pattern_defect(map: &BogoliubovMap, x: &CMat, top: &[f64], bottom: &[f64]) -> f64 {
    let f = map.full();
    let t = f.adjoint() * x * &f;
    let m = top.len();
    let mut worst: f64 = 0.0;
    for i in 0..2 * m {
        for j in 0..2 * m {
            let expect = if i != j {
                0.0
            } else if i < m {
                top[i]
            } else {
                bottom[i - m]
            };
            worst = worst.max((t[(i, j)] - C64::new(expect, 0.0)).norm());
        }
    }
    worst
}
