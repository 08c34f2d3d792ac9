//! Truncated bosonic Fock space used as an exact oracle.
//!
//! The basis contains every occupation vector with total number at most the
//! cutoff, ordered by total number and then lexicographically. Ladder strings
//! act on occupation vectors without intermediate truncation; only the final
//! state has to lie inside the space.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, hermitian_eigen, is_hermitian, max_abs, CMat, CVec, C64, ZERO};
use crate::onepdm::OnePdm;

/// Default upper bound on the basis size.
pub const DEFAULT_MAX_DIMENSION: usize = 2_000_000;

/// Dimension at and below which eigenproblems are solved densely.
pub const DENSE_LIMIT: usize = 500;

#[derive(Debug, Clone)]
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    sector_offsets: Vec<usize>,
    // neighbour tables indexed by state * modes + mode; NONE when outside
    raise: Vec<u32>,
    lower: Vec<u32>,
}

const NONE: u32 = u32::MAX;

/// Number of occupation vectors of `m` modes with total at most `n`.
pub fn fock_dimension(m: usize, n: usize) -> u128 {
    // C(n + m, m)
    let mut acc: u128 = 1;
    for k in 1..=m as u128 {
        acc = acc * (n as u128 + k) / k;
    }
    acc
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        Self::with_limit(modes, cutoff, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_limit(modes: usize, cutoff: usize, max_dimension: usize) -> Result<Self> {
        if modes == 0 {
            return invalid("Fock space needs at least one mode");
        }
        let dim = fock_dimension(modes, cutoff);
        if dim > max_dimension as u128 {
            return invalid(format!(
                "Fock dimension {dim} exceeds the limit {max_dimension}"
            ));
        }
        let mut basis = Vec::with_capacity(dim as usize);
        let mut sector_offsets = Vec::with_capacity(cutoff + 2);
        for n in 0..=cutoff as u32 {
            sector_offsets.push(basis.len());
            compositions(n, modes, &mut Vec::with_capacity(modes), &mut basis);
        }
        sector_offsets.push(basis.len());
        let index: HashMap<Vec<u32>, usize> =
            basis.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut raise = vec![NONE; basis.len() * modes];
        let mut lower = vec![NONE; basis.len() * modes];
        for (j, occ) in basis.iter().enumerate() {
            let mut w = occ.clone();
            for k in 0..modes {
                w[k] += 1;
                if let Some(&i) = index.get(&w) {
                    raise[j * modes + k] = i as u32;
                }
                w[k] -= 1;
                if w[k] > 0 {
                    w[k] -= 1;
                    lower[j * modes + k] = index[&w] as u32;
                    w[k] += 1;
                }
            }
        }
        Ok(FockSpace {
            modes,
            cutoff,
            basis,
            index,
            sector_offsets,
            raise,
            lower,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn occupation(&self, i: usize) -> &[u32] {
        &self.basis[i]
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Index range of the fixed-number sector `n`.
    pub fn sector(&self, n: usize) -> std::ops::Range<usize> {
        if n > self.cutoff {
            return 0..0;
        }
        self.sector_offsets[n]..self.sector_offsets[n + 1]
    }

    pub fn total_number(&self, i: usize) -> usize {
        self.basis[i].iter().map(|&k| k as usize).sum()
    }

    pub fn vacuum(&self) -> CVec {
        let mut v = CVec::zeros(self.dimension());
        v[0] = c(1.0);
        v
    }

    /// Normalized basis vector for an occupation pattern.
    pub fn basis_vector(&self, occupation: &[u32]) -> Result<CVec> {
        let i = self
            .index_of(occupation)
            .ok_or_else(|| Error::InvalidInput(format!("occupation {occupation:?} not in space")))?;
        let mut v = CVec::zeros(self.dimension());
        v[i] = c(1.0);
        Ok(v)
    }

    /// Applies a ladder string (rightmost factor first) to basis state `j`.
    /// Returns the target index and coefficient, or `None` if the result
    /// vanishes or leaves the truncated space.
    pub fn apply_string(&self, ops: &[Ladder], j: usize) -> Option<(usize, f64)> {
        let m = self.modes;
        let mut state = j;
        let mut squared: f64 = 1.0;
        for op in ops.iter().rev() {
            let n = self.basis[state][op.mode];
            let next = if op.creation {
                squared *= (n + 1) as f64;
                self.raise[state * m + op.mode]
            } else {
                if n == 0 {
                    return None;
                }
                squared *= n as f64;
                self.lower[state * m + op.mode]
            };
            if next == NONE {
                // left the space in an intermediate step
                return self.apply_string_unbounded(ops, j);
            }
            state = next as usize;
        }
        Some((state, squared.sqrt()))
    }

    fn apply_string_unbounded(&self, ops: &[Ladder], j: usize) -> Option<(usize, f64)> {
        let mut occ = self.basis[j].clone();
        // product of the ladder factors n, so the result is one exact sqrt
        let mut squared: f64 = 1.0;
        for op in ops.iter().rev() {
            let n = &mut occ[op.mode];
            if op.creation {
                *n += 1;
                squared *= *n as f64;
            } else {
                if *n == 0 {
                    return None;
                }
                squared *= *n as f64;
                *n -= 1;
            }
        }
        self.index_of(&occ).map(|i| (i, squared.sqrt()))
    }
}

/// A single creation or annihilation operator on one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub mode: usize,
    pub creation: bool,
}

impl Ladder {
    pub fn a(mode: usize) -> Self {
        Ladder { mode, creation: false }
    }

    pub fn ad(mode: usize) -> Self {
        Ladder { mode, creation: true }
    }

    pub fn adjoint(self) -> Self {
        Ladder {
            mode: self.mode,
            creation: !self.creation,
        }
    }

    /// Parses labels like `a0` and `ad1`.
    pub fn parse(label: &str) -> Result<Self> {
        let (creation, rest) = if let Some(r) = label.strip_prefix("ad") {
            (true, r)
        } else if let Some(r) = label.strip_prefix('a') {
            (false, r)
        } else {
            return invalid(format!("bad ladder label {label:?}"));
        };
        let mode = rest
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad ladder label {label:?}")))?;
        Ok(Ladder { mode, creation })
    }

    pub fn label(&self) -> String {
        format!("{}{}", if self.creation { "ad" } else { "a" }, self.mode)
    }
}

pub fn string_label(ops: &[Ladder]) -> String {
    ops.iter().map(Ladder::label).collect::<Vec<_>>().join(" ")
}

/// Sparse operator on a truncated Fock space.
#[derive(Debug, Clone)]
pub struct ManyBodyOperator {
    space: Arc<FockSpace>,
    matrix: CsrMatrix<C64>,
    degree: usize,
}

impl ManyBodyOperator {
    /// P (Σ c_k B_k) P for ladder strings B_k, where P projects onto the space.
    pub fn from_terms(space: Arc<FockSpace>, terms: &[(C64, Vec<Ladder>)]) -> Result<Self> {
        let dim = space.dimension();
        let mut degree = 0;
        for (_, ops) in terms {
            if let Some(op) = ops.iter().find(|op| op.mode >= space.modes()) {
                return invalid(format!("mode {} out of range", op.mode));
            }
            let up = ops.iter().filter(|op| op.creation).count();
            degree = degree.max(up.abs_diff(ops.len() - up));
        }
        let mut coo = CooMatrix::new(dim, dim);
        for j in 0..dim {
            for (coef, ops) in terms {
                if *coef == ZERO {
                    continue;
                }
                if let Some((i, v)) = space.apply_string(ops, j) {
                    coo.push(i, j, coef * v);
                }
            }
        }
        Ok(ManyBodyOperator {
            space,
            matrix: CsrMatrix::from(&coo),
            degree,
        })
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CsrMatrix<C64> {
        &self.matrix
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        csr_apply(&self.matrix, v)
    }

    pub fn to_dense(&self) -> CMat {
        let n = self.dimension();
        let mut m = CMat::zeros(n, n);
        for (i, j, v) in self.matrix.triplet_iter() {
            m[(i, j)] += *v;
        }
        m
    }

    pub fn add(&self, other: &ManyBodyOperator) -> ManyBodyOperator {
        ManyBodyOperator {
            space: self.space.clone(),
            matrix: &self.matrix + &other.matrix,
            degree: self.degree.max(other.degree),
        }
    }

    pub fn mul(&self, other: &ManyBodyOperator) -> ManyBodyOperator {
        ManyBodyOperator {
            space: self.space.clone(),
            matrix: &self.matrix * &other.matrix,
            degree: self.degree + other.degree,
        }
    }

    pub fn scale(&self, s: C64) -> ManyBodyOperator {
        let mut matrix = self.matrix.clone();
        matrix.values_mut().iter_mut().for_each(|v| *v *= s);
        ManyBodyOperator {
            space: self.space.clone(),
            matrix,
            degree: self.degree,
        }
    }

    pub fn adjoint(&self) -> ManyBodyOperator {
        let t = self.matrix.transpose();
        let mut matrix = t;
        matrix.values_mut().iter_mut().for_each(|v| *v = v.conj());
        ManyBodyOperator {
            space: self.space.clone(),
            matrix,
            degree: self.degree,
        }
    }

    /// Largest entry coupling basis states of different total number.
    pub fn number_violation(&self) -> f64 {
        self.matrix
            .triplet_iter()
            .filter(|(i, j, _)| self.space.total_number(*i) != self.space.total_number(*j))
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.matrix - &self.adjoint().matrix;
        d.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Matrix restricted to a contiguous index range.
    fn restricted(&self, range: std::ops::Range<usize>) -> CsrMatrix<C64> {
        let n = range.len();
        let mut coo = CooMatrix::new(n, n);
        for (i, j, v) in self.matrix.triplet_iter() {
            if range.contains(&i) && range.contains(&j) {
                coo.push(i - range.start, j - range.start, *v);
            }
        }
        CsrMatrix::from(&coo)
    }
}

pub fn csr_apply(m: &CsrMatrix<C64>, v: &CVec) -> CVec {
    let mut out = CVec::zeros(m.nrows());
    for (i, row) in m.row_iter().enumerate() {
        let mut acc = ZERO;
        for (&j, x) in row.col_indices().iter().zip(row.values()) {
            acc += x * v[j];
        }
        out[i] = acc;
    }
    out
}

/// Annihilation and creation operator for every mode.
pub fn mode_operators(space: &Arc<FockSpace>) -> Vec<(ManyBodyOperator, ManyBodyOperator)> {
    (0..space.modes())
        .map(|i| {
            let a = ManyBodyOperator::from_terms(space.clone(), &[(c(1.0), vec![Ladder::a(i)])])
                .expect("mode in range");
            let ad = ManyBodyOperator::from_terms(space.clone(), &[(c(1.0), vec![Ladder::ad(i)])])
                .expect("mode in range");
            (a, ad)
        })
        .collect()
}

pub fn number_operator(space: &Arc<FockSpace>) -> ManyBodyOperator {
    let terms: Vec<_> = (0..space.modes())
        .map(|i| (c(1.0), vec![Ladder::ad(i), Ladder::a(i)]))
        .collect();
    ManyBodyOperator::from_terms(space.clone(), &terms).expect("modes in range")
}

/// Rank-4 coefficient array W_{mnpq}, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor4 {
    pub m: usize,
    pub data: Vec<C64>,
}

impl Tensor4 {
    pub fn zeros(m: usize) -> Self {
        Tensor4 {
            m,
            data: vec![ZERO; m.pow(4)],
        }
    }

    pub fn from_fn(m: usize, f: impl Fn(usize, usize, usize, usize) -> C64) -> Self {
        let mut t = Self::zeros(m);
        for a in 0..m {
            for b in 0..m {
                for p in 0..m {
                    for q in 0..m {
                        *t.get_mut(a, b, p, q) = f(a, b, p, q);
                    }
                }
            }
        }
        t
    }

    fn offset(&self, a: usize, b: usize, p: usize, q: usize) -> usize {
        ((a * self.m + b) * self.m + p) * self.m + q
    }

    pub fn get(&self, a: usize, b: usize, p: usize, q: usize) -> C64 {
        self.data[self.offset(a, b, p, q)]
    }

    pub fn get_mut(&mut self, a: usize, b: usize, p: usize, q: usize) -> &mut C64 {
        let o = self.offset(a, b, p, q);
        &mut self.data[o]
    }

    pub fn scale(&self, s: f64) -> Self {
        Tensor4 {
            m: self.m,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Largest violation of W_{mnpq} = W_{nmqp} and conj(W_{mnpq}) = W_{qpnm}.
    pub fn symmetry_defect(&self) -> f64 {
        let m = self.m;
        let mut worst: f64 = 0.0;
        for a in 0..m {
            for b in 0..m {
                for p in 0..m {
                    for q in 0..m {
                        let w = self.get(a, b, p, q);
                        worst = worst
                            .max((w - self.get(b, a, q, p)).norm())
                            .max((w.conj() - self.get(q, p, b, a)).norm());
                    }
                }
            }
        }
        worst
    }
}

/// H = Σ h_{mn} a_m* a_n + ½ Σ W_{mnpq} a_m* a_n* a_p a_q.
pub fn assemble_hamiltonian(space: &Arc<FockSpace>, h: &CMat, w: &Tensor4) -> Result<ManyBodyOperator> {
    let m = space.modes();
    if h.nrows() != m || h.ncols() != m || w.m != m {
        return invalid("coefficient shapes do not match the mode count");
    }
    if !is_hermitian(h, 1e-12) {
        return invalid("one-body block is not Hermitian");
    }
    let scale = w.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if w.symmetry_defect() > 1e-12 * scale {
        return invalid("two-body coefficients violate the required symmetries");
    }
    let mut terms = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if h[(a, b)] != ZERO {
                terms.push((h[(a, b)], vec![Ladder::ad(a), Ladder::a(b)]));
            }
            for p in 0..m {
                for q in 0..m {
                    let v = w.get(a, b, p, q);
                    if v != ZERO {
                        terms.push((
                            v * 0.5,
                            vec![Ladder::ad(a), Ladder::ad(b), Ladder::a(p), Ladder::a(q)],
                        ));
                    }
                }
            }
        }
    }
    ManyBodyOperator::from_terms(space.clone(), &terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    Fixed(usize),
    Full,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Normalized, in the coordinates of the full space.
    pub vector: CVec,
    pub residual: f64,
}

/// Serializable summary of a ground-state computation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub modes: usize,
    pub cutoff: usize,
    pub sector: Sector,
    pub energy: f64,
    pub residual: f64,
}

const EIGEN_TOL: f64 = 1e-10;

/// Lowest eigenpair of a Hermitian operator in a sector.
pub fn ground_state(op: &ManyBodyOperator, sector: Sector) -> Result<GroundState> {
    let space = op.space();
    let range = match sector {
        Sector::Full => 0..space.dimension(),
        Sector::Fixed(n) => {
            if n > space.cutoff() {
                return invalid(format!("sector {n} above cutoff {}", space.cutoff()));
            }
            space.sector(n)
        }
    };
    let sub = op.restricted(range.clone());
    let n = range.len();
    let (energy, local) = if n <= DENSE_LIMIT {
        let mut dense = CMat::zeros(n, n);
        for (i, j, v) in sub.triplet_iter() {
            dense[(i, j)] += *v;
        }
        let (vals, vecs) = hermitian_eigen(&dense);
        (vals[0], vecs.column(0).into_owned())
    } else {
        let (e, v) = lanczos_lowest(|x| csr_apply(&sub, x), n, EIGEN_TOL, 60)?;
        (e, v)
    };
    let r = csr_apply(&sub, &local) - local.scale(energy);
    let residual = r.norm();
    let mut vector = CVec::zeros(space.dimension());
    vector.rows_mut(range.start, n).copy_from(&local);
    Ok(GroundState {
        energy,
        vector,
        residual,
    })
}

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
pub fn lanczos_lowest(
    apply: impl Fn(&CVec) -> CVec,
    dim: usize,
    tol: f64,
    max_restarts: usize,
) -> Result<(f64, CVec)> {
    let krylov = dim.min(150);
    // deterministic, generic start vector
    let mut start = CVec::from_fn(dim, |i, _| {
        let x = ((i as u64).wrapping_mul(2654435761) % 1000) as f64 / 1000.0;
        C64::new(0.5 + x, 0.25 * (x - 0.5))
    });
    start.unscale_mut(start.norm());
    let mut history = Vec::new();
    for _ in 0..max_restarts {
        let mut q: Vec<CVec> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut best = (0.0, DVector::<f64>::zeros(1));
        for j in 0..krylov {
            let mut w = apply(&q[j]);
            let a = q[j].dotc(&w).re;
            alpha.push(a);
            for _ in 0..2 {
                for qi in &q {
                    let proj = qi.dotc(&w);
                    w.axpy(-proj, qi, c(1.0));
                }
            }
            let b = w.norm();
            best = tridiagonal_lowest(&alpha, &beta);
            let last = best.1[best.1.len() - 1].abs();
            if b * last <= tol * best.0.abs().max(1.0) * 0.1 || b < 1e-14 || j + 1 == krylov {
                break;
            }
            beta.push(b);
            q.push(w.unscale(b));
        }
        let (theta, y) = best;
        let mut x = CVec::zeros(dim);
        for (k, qk) in q.iter().enumerate().take(y.len()) {
            x.axpy(c(y[k]), qk, c(1.0));
        }
        x.unscale_mut(x.norm());
        let r = (apply(&x) - x.scale(theta)).norm();
        history.push(r);
        if r <= tol * theta.abs().max(1.0) {
            return Ok((theta, x));
        }
        start = x;
    }
    Err(Error::NoConvergence {
        iterations: max_restarts,
        residual: *history.last().unwrap_or(&f64::NAN),
        history,
    })
}

fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, DVector<f64>) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let (imin, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    (eig.eigenvalues[imin], eig.eigenvectors.column(imin).into_owned())
}

/// A state on a truncated Fock space.
#[derive(Debug, Clone)]
pub enum State {
    Pure(CVec),
    Mixed(CMat),
    /// Density diagonal in the occupation basis.
    Diagonal(Vec<f64>),
}

impl State {
    pub fn dimension(&self) -> usize {
        match self {
            State::Pure(v) => v.len(),
            State::Mixed(m) => m.nrows(),
            State::Diagonal(p) => p.len(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            State::Pure(v) => v.norm_squared(),
            State::Mixed(m) => m.trace().re,
            State::Diagonal(p) => p.iter().sum(),
        }
    }
}

/// Exact expectation of a ladder string in a state.
pub fn expectation(space: &FockSpace, state: &State, ops: &[Ladder]) -> Result<C64> {
    if state.dimension() != space.dimension() {
        return invalid("state dimension does not match the space");
    }
    if ops.iter().any(|op| op.mode >= space.modes()) {
        return invalid("ladder label references a missing mode");
    }
    let mut acc = ZERO;
    for j in 0..space.dimension() {
        if let Some((i, coef)) = space.apply_string(ops, j) {
            acc += match state {
                State::Pure(v) => v[i].conj() * v[j] * coef,
                State::Mixed(rho) => rho[(j, i)] * coef,
                State::Diagonal(p) => {
                    if i == j {
                        c(p[j] * coef)
                    } else {
                        ZERO
                    }
                }
            };
        }
    }
    Ok(acc)
}

/// γ_{mn} = ⟨a_n* a_m⟩ and α_{mn} = ⟨a_n a_m⟩.
pub fn onepdm_of_state(space: &FockSpace, state: &State) -> Result<OnePdm> {
    let m = space.modes();
    let mut gamma = CMat::zeros(m, m);
    let mut alpha = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            gamma[(i, j)] = expectation(space, state, &[Ladder::ad(j), Ladder::a(i)])?;
            alpha[(i, j)] = expectation(space, state, &[Ladder::a(j), Ladder::a(i)])?;
        }
    }
    // remove rounding asymmetry
    let gamma = (&gamma + gamma.adjoint()).scale(0.5);
    let alpha = (&alpha + alpha.transpose()).scale(0.5);
    OnePdm::new(gamma, alpha)
}

/// Max |([a_i, a_j*] - δ_ij) v| over basis vectors with total number ≤ cutoff − 1.
pub fn ccr_defect(space: &Arc<FockSpace>) -> f64 {
    let ops = mode_operators(space);
    let mut worst: f64 = 0.0;
    let safe: Vec<usize> = (0..space.dimension())
        .filter(|&k| space.total_number(k) < space.cutoff())
        .collect();
    for (i, (ai, _)) in ops.iter().enumerate() {
        for (j, (_, adj)) in ops.iter().enumerate() {
            let comm = ai.mul(adj).to_dense() - adj.mul(ai).to_dense();
            for &k in &safe {
                for r in 0..space.dimension() {
                    let expect = if r == k && i == j { 1.0 } else { 0.0 };
                    worst = worst.max((comm[(r, k)] - c(expect)).norm());
                }
            }
        }
    }
    worst
}

/// Dense real diagonal helper for tests and oracles.
pub fn diagonal_of(op: &ManyBodyOperator) -> Vec<f64> {
    let d = op.to_dense();
    (0..d.nrows()).map(|i| d[(i, i)].re).collect()
}

/// max |H - H*| of a dense matrix; used by oracle callers.
pub fn dense_hermiticity(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(m: usize, n: usize) -> Arc<FockSpace> {
        Arc::new(FockSpace::new(m, n).unwrap())
    }

    #[test]
    fn dimensions_match_stars_and_bars() {
        let s = FockSpace::new(1, 3).unwrap();
        assert_eq!(s.basis(), &[vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(FockSpace::new(2, 2).unwrap().dimension(), 6);
        assert_eq!(FockSpace::new(3, 4).unwrap().dimension(), 35);
        assert_eq!(fock_dimension(3, 4), 35);
    }

    #[test]
    fn exhaustive_count_agrees() {
        // brute force over the box [0, n]^m
        for m in 1..=3usize {
            for n in 0..=5usize {
                let mut count = 0;
                let total = (n + 1).pow(m as u32);
                for code in 0..total {
                    let mut x = code;
                    let mut s = 0;
                    for _ in 0..m {
                        s += x % (n + 1);
                        x /= n + 1;
                    }
                    if s <= n {
                        count += 1;
                    }
                }
                assert_eq!(FockSpace::new(m, n).unwrap().dimension(), count);
            }
        }
    }

    #[test]
    fn ordering_is_by_number_then_lexicographic() {
        let s = FockSpace::new(2, 2).unwrap();
        assert_eq!(
            s.basis(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(s.sector(1), 1..3);
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(FockSpace::new(0, 3).is_err());
        assert!(FockSpace::with_limit(4, 50, 1000).is_err());
    }

    #[test]
    fn number_operator_is_diagonal() {
        let s = space(1, 2);
        let n = number_operator(&s);
        assert_eq!(diagonal_of(&n), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn ccr_on_safe_subspace() {
        assert!(ccr_defect(&space(2, 4)) < 1e-14);
        assert!(ccr_defect(&space(3, 3)) < 1e-14);
    }

    #[test]
    fn vacuum_is_annihilated() {
        let s = space(3, 2);
        for (a, _) in mode_operators(&s) {
            assert!(a.apply(&s.vacuum()).norm() < 1e-15);
        }
    }

    #[test]
    fn toy_operator_spectrum() {
        let s = space(1, 6);
        let mut w = Tensor4::zeros(1);
        *w.get_mut(0, 0, 0, 0) = c(2.0);
        let h = assemble_hamiltonian(&s, &CMat::zeros(1, 1), &w).unwrap();
        assert_eq!(diagonal_of(&h), vec![0.0, 0.0, 2.0, 6.0, 12.0, 20.0, 30.0]);
        let g = ground_state(&h, Sector::Fixed(2)).unwrap();
        assert!((g.energy - 2.0).abs() < 1e-12);
        let g = ground_state(&h, Sector::Fixed(5)).unwrap();
        assert!((g.energy - 20.0).abs() < 1e-12);
        let g = ground_state(&h, Sector::Fixed(0)).unwrap();
        assert!(g.energy.abs() < 1e-12);
        assert!((g.vector[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_h_gives_number_operator() {
        let s = space(2, 3);
        let h = assemble_hamiltonian(&s, &CMat::identity(2, 2), &Tensor4::zeros(2)).unwrap();
        assert!(max_abs(&(h.to_dense() - number_operator(&s).to_dense())) < 1e-15);
    }

    #[test]
    fn asymmetric_two_body_rejected() {
        let s = space(2, 2);
        let mut w = Tensor4::zeros(2);
        *w.get_mut(0, 1, 0, 0) = c(1.0);
        assert!(assemble_hamiltonian(&s, &CMat::zeros(2, 2), &w).is_err());
    }

    #[test]
    fn expectations_of_simple_states() {
        let s = FockSpace::new(1, 4).unwrap();
        let vac = State::Pure(s.vacuum());
        let n = [Ladder::ad(0), Ladder::a(0)];
        assert_eq!(expectation(&s, &vac, &n).unwrap(), ZERO);
        let two = State::Pure(s.basis_vector(&[2]).unwrap());
        assert!((expectation(&s, &two, &n).unwrap().re - 2.0).abs() < 1e-14);
        let nn = [Ladder::ad(0), Ladder::ad(0), Ladder::a(0), Ladder::a(0)];
        assert!((expectation(&s, &two, &nn).unwrap().re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn onepdm_of_superposition() {
        let s = FockSpace::new(1, 4).unwrap();
        let mut v = CVec::zeros(5);
        v[0] = c(1.0 / 2f64.sqrt());
        v[2] = c(1.0 / 2f64.sqrt());
        let p = onepdm_of_state(&s, &State::Pure(v)).unwrap();
        assert!((p.gamma()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((p.alpha()[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-14);
        let one = onepdm_of_state(&s, &State::Pure(s.basis_vector(&[1]).unwrap())).unwrap();
        assert!((one.gamma()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert_eq!(one.alpha()[(0, 0)], ZERO);
    }

    #[test]
    fn lanczos_matches_dense() {
        let s = Arc::new(FockSpace::new(3, 13).unwrap());
        assert!(s.dimension() > DENSE_LIMIT);
        let h = CMat::from_fn(3, 3, |i, j| {
            if i == j {
                c(1.0 + i as f64)
            } else {
                C64::new(0.1 * (i + j) as f64, 0.05 * (i as f64 - j as f64))
            }
        });
        let w = Tensor4::from_fn(3, |a, b, p, q| {
            if (a == p && b == q) || (a == q && b == p) {
                c(0.3)
            } else {
                ZERO
            }
        });
        let op = assemble_hamiltonian(&s, &h, &w).unwrap();
        let gl = ground_state(&op, Sector::Full).unwrap();
        let dense = hermitian_eigen(&op.to_dense()).0[0];
        assert!((gl.energy - dense).abs() < 1e-9, "{} vs {}", gl.energy, dense);
        assert!(gl.residual < 1e-9);
    }

    #[test]
    fn label_round_trip() {
        for l in [Ladder::a(0), Ladder::ad(3)] {
            assert_eq!(Ladder::parse(&l.label()).unwrap(), l);
        }
        assert!(Ladder::parse("b1").is_err());
    }
}
