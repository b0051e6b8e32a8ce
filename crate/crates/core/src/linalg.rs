//! Small numeric helpers shared across modules.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<C64>;
pub type RVec = DVector<f64>;
pub type CVec = DVector<C64>;

/// Largest entry magnitude; 0 for an empty matrix.
pub fn max_abs(m: &RMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_c(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec_c(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub fn to_complex_vec(v: &RVec) -> CVec {
    v.map(|x| C64::new(x, 0.0))
}

pub fn identity_c(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn commutator_c(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Entrywise maximum of |A - B|.
pub fn max_diff(a: &RMat, b: &RMat) -> f64 {
    max_abs(&(a - b))
}

pub fn max_diff_c(a: &CMat, b: &CMat) -> f64 {
    max_abs_c(&(a - b))
}
