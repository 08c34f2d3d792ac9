//! Small dense helpers shared by the doubled-space modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (DVector<f64>, CMat) {
    let n = m.nrows();
    let h = hermitian_part(m);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> DVector<f64> {
    let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    DVector::from_vec(v)
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    hermitian_eigenvalues(m)[0]
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// V f(D) V* for Hermitian `m`.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let mut scaled = vecs.clone();
    for (k, &v) in vals.iter().enumerate() {
        let s = f(v);
        scaled.column_mut(k).scale_mut(s);
    }
    &scaled * vecs.adjoint()
}

/// Square root of a PSD matrix; tiny negative eigenvalues are clamped.
pub fn psd_sqrt(m: &CMat) -> CMat {
    hermitian_function(m, |v| v.max(0.0).sqrt())
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The sign matrix S = diag(1, ..., 1, -1, ..., -1) of size 2M.
pub fn sign_matrix(m: usize) -> CMat {
    CMat::from_diagonal(&CVec::from_fn(2 * m, |i, _| if i < m { ONE } else { -ONE }))
}

/// Assemble [[x, y], [conj(y), conj(x)]].
pub fn doubled(x: &CMat, y: &CMat) -> CMat {
    let m = x.nrows();
    let mut out = CMat::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(x);
    out.view_mut((0, m), (m, m)).copy_from(y);
    out.view_mut((m, 0), (m, m)).copy_from(&y.map(|z| z.conj()));
    out.view_mut((m, m), (m, m)).copy_from(&x.map(|z| z.conj()));
    out
}

pub fn block(m: &CMat, row: usize, col: usize) -> CMat {
    let h = m.nrows() / 2;
    m.view((row * h, col * h), (h, h)).into_owned()
}

/// J applied to a doubled-space vector: (x, y) -> (conj y, conj x).
pub fn j_vec(v: &CVec) -> CVec {
    let m = v.len() / 2;
    CVec::from_fn(2 * m, |i, _| if i < m { v[i + m].conj() } else { v[i - m].conj() })
}

/// J X J for a doubled-space matrix X.
pub fn j_sandwich(x: &CMat) -> CMat {
    let n = x.nrows();
    let m = n / 2;
    let sw = |i: usize| if i < m { i + m } else { i - m };
    CMat::from_fn(n, n, |i, j| x[(sw(i), sw(j))].conj())
}

/// Ad-hoc PSD check with tolerance scaled by the matrix norm.
pub fn is_psd(m: &CMat, tol: f64) -> (bool, f64) {
    let min = min_eigenvalue(m);
    let scale = max_abs(m).max(1.0);
    (min >= -tol * scale, min)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    max_abs(&(m - m.adjoint())) <= tol * max_abs(m).max(1.0)
}

pub fn is_symmetric(m: &CMat, tol: f64) -> bool {
    max_abs(&(m - m.transpose())) <= tol * max_abs(m).max(1.0)
}

pub fn real_matrix(m: &DMatrix<f64>) -> CMat {
    m.map(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_is_an_involution() {
        let v = CVec::from_vec(vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.3)]);
        assert_eq!(j_vec(&j_vec(&v)), v);
        let x = CMat::from_fn(4, 4, |i, j| C64::new(i as f64, j as f64 * 0.5));
        assert_eq!(j_sandwich(&j_sandwich(&x)), x);
    }

    #[test]
    fn doubled_blocks_commute_with_j() {
        let x = CMat::from_fn(2, 2, |i, j| C64::new(1.0 + i as f64, j as f64));
        let y = CMat::from_fn(2, 2, |i, j| C64::new(0.1 * (i + j) as f64, 0.2));
        let d = doubled(&x, &y);
        assert!(max_abs(&(j_sandwich(&d) - &d)) < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = CMat::from_fn(3, 3, |i, j| C64::new((i + j) as f64, i as f64 - j as f64));
        let p = a.adjoint() * &a + CMat::identity(3, 3);
        let r = psd_sqrt(&p);
        assert!(max_abs(&(&r * &r - &p)) < 1e-10);
    }
}
