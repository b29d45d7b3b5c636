//! Dense complex linear algebra used across the crate.
//!
//! Everything is built on `nalgebra::DMatrix<Complex64>`. The dimensions that
//! occur here are small (tens, occasionally a hundred), so plain dense
//! routines are the right tool.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Frobenius norm.
#[inline]
pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// `‖a − b‖_F`; panics on shape mismatch.
pub fn distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in distance");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖M − M†‖_F`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    distance(m, &m.adjoint())
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// `‖M†M − 1‖_F`.
pub fn isometry_defect(m: &CMatrix) -> f64 {
    distance(&(m.adjoint() * m), &identity(m.ncols()))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Block-diagonal matrix with the given (not necessarily square) blocks.
pub fn block_diag<'a, I>(blocks: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    let blocks: Vec<&CMatrix> = blocks.into_iter().collect();
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut k) = (0, 0);
    for b in blocks {
        out.view_mut((r, k), b.shape()).copy_from(b);
        r += b.nrows();
        k += b.ncols();
    }
    out
}

/// Eigendecomposition of the Hermitian part of `m`; eigenvalues ascending,
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-slack, 0)` are clamped to zero. Anything more negative is
/// returned as `Err(min_eigenvalue)`.
pub fn psd_sqrt(m: &CMatrix, slack: f64) -> Result<CMatrix, f64> {
    let (values, vectors) = hermitian_eigen(m);
    if let Some(&lowest) = values.first() {
        if lowest < -slack {
            return Err(lowest);
        }
    }
    let roots = CVector::from_iterator(values.len(), values.iter().map(|&v| c(v.max(0.0).sqrt(), 0.0)));
    let scaled = &vectors * CMatrix::from_diagonal(&roots);
    Ok(scaled * vectors.adjoint())
}

/// Modified Gram–Schmidt (two passes) over the candidate vectors in order,
/// keeping those whose residual norm exceeds `tol`.
pub fn orthonormalize<I>(candidates: I, tol: f64) -> Vec<CVector>
where
    I: IntoIterator<Item = CVector>,
{
    let mut basis: Vec<CVector> = Vec::new();
    for mut v in candidates {
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > tol {
            basis.push(v / c(norm, 0.0));
        }
    }
    basis
}

pub fn columns_to_matrix(rows: usize, cols: &[CVector]) -> CMatrix {
    let mut m = zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

/// Orthonormal basis of the kernel of a Hermitian positive semidefinite matrix.
pub fn psd_kernel(gram: &CMatrix, tol: f64) -> Vec<CVector> {
    let (values, vectors) = hermitian_eigen(gram);
    values
        .iter()
        .enumerate()
        .take_while(|(_, &v)| v <= tol)
        .map(|(i, _)| vectors.column(i).into_owned())
        .collect()
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rank(m: &CMatrix, tol: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > tol).count()
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    random_isometry(n, n, rng)
}

/// `rows × cols` isometry (`cols ≤ rows`) with Haar-distributed range.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    if cols == 0 {
        return zeros(rows, 0);
    }
    let ginibre = CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    });
    let qr = ginibre.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the phase ambiguity of QR so the distribution is Haar.
    let mut out = q;
    for j in 0..cols {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let col = out.column(j) * ph;
        out.set_column(j, &col);
    }
    out
}

pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    random_isometry(n, 1, rng).column(0).into_owned()
}

/// Complex matrix as rows of `[re, im]` pairs.
pub fn to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}
