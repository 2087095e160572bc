//! Dense complex vectors and operators on `C(F_p)`, indexed by residues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A function `F_p -> C`, stored as a length-`p` column.
pub type StateVector = DVector<Complex64>;

/// A `p x p` operator on `C(F_p)` in the delta basis.
pub type OperatorMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// The delta function at `j`.
pub fn delta(p: usize, j: usize) -> StateVector {
    let mut v = StateVector::zeros(p);
    v[j] = ONE;
    v
}

/// Hermitian product, linear in the first argument.
pub fn inner(f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(f: &[Complex64]) -> f64 {
    f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |A^* A - I|`.
pub fn unitarity_defect(a: &OperatorMatrix) -> f64 {
    let n = a.nrows();
    let g = a.adjoint() * a;
    max_abs_diff(g.as_slice(), OperatorMatrix::identity(n, n).as_slice())
}

/// `max |A^* - A|`.
pub fn hermiticity_defect(a: &OperatorMatrix) -> f64 {
    max_abs_diff(a.adjoint().as_slice(), a.as_slice())
}

pub fn determinant(a: &OperatorMatrix) -> Complex64 {
    a.clone().determinant()
}

/// Eigenvalues of a normal matrix `U` whose spectrum lies on the unit circle.
///
/// Diagonalizes the Hermitian `(U + U^*)/2 + alpha (U - U^*)/(2i)` and reads each
/// eigenvalue of `U` off as a Rayleigh quotient. Returns the values and the
/// largest residual `|U v - lambda v|`.
pub fn unitary_eigenvalues(u: &OperatorMatrix) -> (Vec<Complex64>, f64) {
    let alpha = std::f64::consts::FRAC_1_SQRT_2;
    let ua = u.adjoint();
    let h = (u + &ua) * Complex64::new(0.5, 0.0) + (u - &ua) * Complex64::new(0.0, -0.5 * alpha);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let mut worst = 0.0f64;
    let values = eig
        .eigenvectors
        .column_iter()
        .map(|v| {
            let uv = u * v;
            let lambda = v.dotc(&uv);
            worst = worst.max((uv - v * lambda).norm());
            lambda
        })
        .collect();
    (values, worst)
}

/// Snaps each value to the nearest fourth root of unity, returning counts for
/// `(1, -1, i, -i)` and the largest snap distance.
pub fn count_fourth_roots(values: &[Complex64]) -> ([usize; 4], f64) {
    let targets = [ONE, -ONE, I, -I];
    let mut counts = [0usize; 4];
    let mut worst = 0.0f64;
    for v in values {
        let (k, d) = targets
            .iter()
            .enumerate()
            .map(|(k, t)| (k, (v - t).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        counts[k] += 1;
        worst = worst.max(d);
    }
    (counts, worst)
}
