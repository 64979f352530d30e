//! Small dense linear-algebra helpers shared by the state and channel code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest elementwise deviation of `m` from its adjoint.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest elementwise deviation of `u† u` from the identity.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let gram = u.adjoint() * u;
    max_abs_diff(&gram, &DMatrix::identity(u.ncols(), u.ncols()))
}

pub fn trace(m: &DMatrix<C64>) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn outer(v: &DVector<C64>) -> DMatrix<C64> {
    v * v.adjoint()
}

pub fn mixed_radix_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    digits
}

pub fn mixed_radix_index(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

/// `-Σ p log2 p` with entries below `1e-12` treated as zero.
pub fn entropy_bits<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let h: f64 = values
        .into_iter()
        .filter(|&p| p >= 1e-12)
        .map(|p| -p * p.log2())
        .sum();
    // -0.0 and round-off below zero both collapse to 0.
    h.max(0.0)
}
