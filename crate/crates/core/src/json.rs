//! JSON encodings for complex matrices and vectors.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{CMat, CVec, C64};

/// Row-major complex matrix split into real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CMat> for MatrixJson {
    fn from(m: &CMat) -> Self {
        let mut re = Vec::with_capacity(m.len());
        let mut im = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            re,
            im,
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return invalid("matrix entry count does not match its shape");
        }
        Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let k = i * self.cols + j;
            C64::new(self.re[k], self.im[k])
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&CVec> for VectorJson {
    fn from(v: &CVec) -> Self {
        VectorJson {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
        }
    }
}

impl VectorJson {
    pub fn to_vector(&self) -> Result<CVec> {
        if self.re.len() != self.im.len() {
            return invalid("vector parts differ in length");
        }
        Ok(CVec::from_iterator(
            self.re.len(),
            self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = CMat::from_fn(2, 3, |i, j| C64::new(i as f64, -(j as f64)));
        let j = MatrixJson::from(&m);
        assert_eq!(j.re, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(j.to_matrix().unwrap(), m);
    }

    #[test]
    fn bad_shape_rejected() {
        let j = MatrixJson {
            rows: 2,
            cols: 2,
            re: vec![0.0; 3],
            im: vec![0.0; 4],
        };
        assert!(j.to_matrix().is_err());
    }
}
