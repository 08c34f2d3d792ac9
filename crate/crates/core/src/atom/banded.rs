//! Symmetric pentadiagonal matrices: Sturm counts, bisection and inverse
//! iteration for a few extreme eigenpairs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymBand5 {
    pub diag: Vec<f64>,
    pub off1: Vec<f64>,
    pub off2: Vec<f64>,
}

impl SymBand5 {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i >= 1 {
                s += self.off1[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off1[i] * x[i + 1];
            }
            if i >= 2 {
                s += self.off2[i - 2] * x[i - 2];
            }
            if i + 2 < n {
                s += self.off2[i] * x[i + 2];
            }
            y[i] = s;
        }
        y
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i >= 1 {
                rad += self.off1[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off1[i].abs();
            }
            if i >= 2 {
                rad += self.off2[i - 2].abs();
            }
            if i + 2 < n {
                rad += self.off2[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// Number of eigenvalues below σ, from the inertia of LDLᵀ = A − σ.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.len();
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut d = vec![0.0; n];
        // l1[i] = L[i][i-1], l2[i] = L[i][i-2]
        let mut l1 = vec![0.0; n];
        let mut count = 0;
        for i in 0..n {
            let mut di = self.diag[i] - sigma;
            let mut l2i = 0.0;
            if i >= 2 {
                l2i = self.off2[i - 2] / d[i - 2];
                di -= l2i * l2i * d[i - 2];
            }
            if i >= 1 {
                let mut a = self.off1[i - 1];
                if i >= 2 {
                    a -= l2i * d[i - 2] * l1[i - 1];
                }
                l1[i] = a / d[i - 1];
                di -= l1[i] * l1[i] * d[i - 1];
            }
            if di == 0.0 {
                di = -tiny;
            }
            if di < 0.0 {
                count += 1;
            }
            d[i] = di;
        }
        count
    }

    /// The k-th smallest eigenvalue (k = 0 is the lowest) by bisection.
    pub fn eigenvalue(&self, k: usize, rel_tol: f64) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= rel_tol * (1.0 + mid.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves (A − σ)x = b by banded elimination with partial pivoting.
    pub fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        // row i stores columns i-2 ..= i+4 (fill-in from pivoting)
        const W: usize = 7;
        let mut m = vec![[0.0f64; W]; n];
        let at = |i: usize, j: usize| -> f64 {
            let d = i.abs_diff(j);
            match d {
                0 => self.diag[i] - sigma,
                1 => self.off1[i.min(j)],
                2 => self.off2[i.min(j)],
                _ => 0.0,
            }
        };
        for (i, row) in m.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                let j = i as isize + c as isize - 2;
                if j >= 0 && (j as usize) < n {
                    *slot = at(i, j as usize);
                }
            }
        }
        let get = |m: &Vec<[f64; W]>, i: usize, j: usize| -> f64 {
            let c = j as isize - i as isize + 2;
            if (0..W as isize).contains(&c) {
                m[i][c as usize]
            } else {
                0.0
            }
        };
        let mut x = b.to_vec();
        let scale = self.bounds().1.abs().max(self.bounds().0.abs()).max(1.0);
        for k in 0..n {
            // pivot among rows k..k+2
            let mut p = k;
            let mut best = get(&m, k, k).abs();
            for i in k + 1..(k + 3).min(n) {
                let v = get(&m, i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                set(&mut m, k, k, 1e-14 * scale);
            }
            if p != k {
                // rows are stored relative to their own index; swap by value
                let lo = k;
                let hi = (k + 5).min(n);
                let rk: Vec<f64> = (lo..hi).map(|j| get(&m, k, j)).collect();
                let rp: Vec<f64> = (lo..hi).map(|j| get(&m, p, j)).collect();
                for (t, j) in (lo..hi).enumerate() {
                    set(&mut m, k, j, rp[t]);
                    set(&mut m, p, j, rk[t]);
                }
                x.swap(k, p);
            }
            let piv = get(&m, k, k);
            for i in k + 1..(k + 3).min(n) {
                let f = get(&m, i, k) / piv;
                if f == 0.0 {
                    continue;
                }
                for j in k..(k + 5).min(n) {
                    let v = get(&m, i, j) - f * get(&m, k, j);
                    set(&mut m, i, j, v);
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..(k + 5).min(n) {
                s -= get(&m, k, j) * x[j];
            }
            let piv = get(&m, k, k);
            let piv = if piv.abs() < 1e-14 * scale { (1e-14 * scale).copysign(piv) } else { piv };
            x[k] = s / piv;
        }
        Ok(x)
    }

    /// Lowest `count` eigenpairs with unit Euclidean eigenvectors.
    pub fn lowest(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>> {
        let n = self.len();
        let mut out: Vec<(f64, Vec<f64>)> = Vec::with_capacity(count);
        for k in 0..count.min(n) {
            let lam = self.eigenvalue(k, 1e-15);
            let nudge = 1e-12 * (1.0 + lam.abs());
            let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919 + k * 104729) % 97) as f64 * 1e-3).collect();
            let mut value = lam;
            for _ in 0..4 {
                for (_, prev) in &out {
                    let c: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
                    for (a, b) in v.iter_mut().zip(prev) {
                        *a -= c * b;
                    }
                }
                let mut next = self.solve_shifted(lam - nudge, &v)?;
                let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
                if !(norm.is_finite() && norm > 0.0) {
                    return Err(Error::Numerical("inverse iteration broke down".into()));
                }
                for a in next.iter_mut() {
                    *a /= norm;
                }
                v = next;
                let av = self.apply(&v);
                value = v.iter().zip(&av).map(|(a, b)| a * b).sum();
            }
            for (_, prev) in &out {
                let c: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
                for (a, b) in v.iter_mut().zip(prev) {
                    *a -= c * b;
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            for a in v.iter_mut() {
                *a /= norm;
            }
            out.push((value, v));
        }
        Ok(out)
    }
}

fn set(m: &mut [[f64; 7]], i: usize, j: usize, v: f64) {
    let c = j as isize - i as isize + 2;
    if (0..7).contains(&c) {
        m[i][c as usize] = v;
    } else if v != 0.0 {
        debug_assert!(v.abs() < 1e-300, "fill-in outside band");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    fn sample(n: usize) -> SymBand5 {
        SymBand5 {
            diag: (0..n).map(|i| ((i * 37) % 11) as f64 - 5.0 + 100.0 / (1.0 + i as f64)).collect(),
            off1: (0..n - 1).map(|i| ((i * 13) % 7) as f64 * 0.3 - 1.0).collect(),
            off2: (0..n - 2).map(|i| ((i * 5) % 3) as f64 * 0.2 + 0.1).collect(),
        }
    }

    fn dense(b: &SymBand5) -> DMatrix<f64> {
        let n = b.len();
        DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => b.diag[i],
            1 => b.off1[i.min(j)],
            2 => b.off2[i.min(j)],
            _ => 0.0,
        })
    }

    #[test]
    fn counts_and_eigenvalues_match_dense() {
        let b = sample(120);
        let mut ev: Vec<f64> = SymmetricEigen::new(dense(&b)).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for k in [0, 1, 5, 60, 119] {
            assert!((b.eigenvalue(k, 1e-15) - ev[k]).abs() < 1e-10);
        }
        assert_eq!(b.count_below(ev[3] + 1e-9), 4);
    }

    #[test]
    fn eigenvectors_satisfy_equation() {
        let b = sample(200);
        for (lam, v) in b.lowest(3).unwrap() {
            let av = b.apply(&v);
            let res: f64 = av.iter().zip(&v).map(|(a, x)| (a - lam * x).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-9, "residual {res}");
        }
    }

    #[test]
    fn shifted_solve_is_exact() {
        let b = sample(50);
        let x: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let ax = b.apply(&x);
        let rhs: Vec<f64> = ax.iter().zip(&x).map(|(a, v)| a - 0.7 * v).collect();
        let back = b.solve_shifted(0.7, &rhs).unwrap();
        for (u, v) in back.iter().zip(&x) {
            assert!((u - v).abs() < 1e-10);
        }
    }
}
