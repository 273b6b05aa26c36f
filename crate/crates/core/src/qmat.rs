//! Dense complex matrices: density operators, Hermitian spectral
//! decomposition, tensor products, partial traces and entropies.
//!
//! All entropies are in bits (base-2 logarithm). This matches the worked
//! values the library reproduces, e.g. the relative entropy of asymmetry of
//! `|+><+|` under a `sigma_z` dephasing is exactly 1 and that of the uniform
//! qudit superposition is `log2 d`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{QrfError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest Hermiticity correction accepted when symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_TOL, 0)` are round-off and clamp to zero.
pub const EIGEN_TOL: f64 = 1e-10;
/// Threshold below which a sigma eigenvalue counts as outside the support.
pub const SUPPORT_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Max-entry norm.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Kronecker product; row index of the result is `i_a * rows_b + i_b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    CMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let nb = b.len();
    CVector::from_fn(a.len() * nb, |i, _| a[i / nb] * b[i % nb])
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { c(0.0, 0.0) })
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

fn check_square(m: &CMatrix) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(QrfError::NotSquare { rows, cols });
    }
    Ok(rows)
}

fn check_dims(dims: &[usize], side: usize) -> Result<()> {
    if dims.is_empty() || dims.iter().product::<usize>() != side {
        return Err(QrfError::BadDims { dims: dims.to_vec(), side });
    }
    Ok(())
}

/// Replaces `m` by `(m + m^dag)/2`, failing if that moved any entry by more
/// than [`HERMITIAN_TOL`].
fn symmetrize(m: CMatrix) -> Result<CMatrix> {
    let h = (&m + m.adjoint()) * c(0.5, 0.0);
    let deviation = max_abs_diff(&m, &h);
    if deviation > HERMITIAN_TOL {
        return Err(QrfError::NotHermitian { deviation, tolerance: HERMITIAN_TOL });
    }
    Ok(h)
}

/// Hermitian matrix with declared subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let side = check_square(&matrix)?;
        check_dims(&dims, side)?;
        Ok(Self { matrix: symmetrize(matrix)?, dims })
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        Self { matrix: diag_real(values), dims: vec![values.len()] }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigh(&self) -> SpectralDecomposition {
        SpectralDecomposition::of_hermitian(&self.matrix)
    }
}

/// Positive, unit-trace Hermitian matrix with declared subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let side = check_square(&matrix)?;
        check_dims(&dims, side)?;
        let matrix = symmetrize(matrix)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(QrfError::BadTrace { trace: trace.re, tolerance: TRACE_TOL });
        }
        let spec = SpectralDecomposition::of_hermitian(&matrix);
        if let Some(&min) = spec.eigenvalues.first() {
            if min < -EIGEN_TOL {
                return Err(QrfError::NotPositive { value: min, tolerance: EIGEN_TOL });
            }
        }
        Ok(Self { matrix, dims })
    }

    /// Skips validation. Callers guarantee the result of a CPTP map applied
    /// to a valid state.
    pub(crate) fn from_map_output(matrix: CMatrix, dims: Vec<usize>) -> Self {
        let matrix = (&matrix + matrix.adjoint()) * c(0.5, 0.0);
        Self { matrix, dims }
    }

    /// `|v><v|` for a vector normalized here.
    pub fn pure(v: &CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, v.len())?;
        let norm = v.norm();
        if norm == 0.0 {
            return Err(QrfError::InvalidArgument("zero vector".into()));
        }
        let u = v / c(norm, 0.0);
        Ok(Self::from_map_output(outer(&u), dims))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = CMatrix::identity(dim, dim);
        m /= c(dim as f64, 0.0);
        Self { matrix: m, dims: vec![dim] }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `self ⊗ other`, concatenating subsystem lists.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator { matrix: kron(&self.matrix, &other.matrix), dims }
    }

    /// Same matrix, regrouped subsystem dimensions.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.dim())?;
        Ok(Self { matrix: self.matrix.clone(), dims })
    }

    pub fn conjugate_by(&self, u: &CMatrix) -> DensityOperator {
        Self::from_map_output(u * &self.matrix * u.adjoint(), self.dims.clone())
    }

    pub fn eigh(&self) -> SpectralDecomposition {
        SpectralDecomposition::of_hermitian(&self.matrix)
    }

    pub fn partial_trace(&self, keep: usize) -> Result<DensityOperator> {
        partial_trace(self, keep)
    }
}

/// Reduced state on subsystem `keep`, tracing out every other subsystem.
pub fn partial_trace(rho: &DensityOperator, keep: usize) -> Result<DensityOperator> {
    let dims = rho.dims();
    if dims.len() < 2 || keep >= dims.len() {
        return Err(QrfError::BadSubsystem { index: keep, count: dims.len() });
    }
    let left: usize = dims[..keep].iter().product();
    let dk = dims[keep];
    let right: usize = dims[keep + 1..].iter().product();
    let m = rho.matrix();
    let out = CMatrix::from_fn(dk, dk, |a, b| {
        let mut acc = c(0.0, 0.0);
        for l in 0..left {
            for r in 0..right {
                acc += m[((l * dk + a) * right + r, (l * dk + b) * right + r)];
            }
        }
        acc
    });
    Ok(DensityOperator::from_map_output(out, vec![dk]))
}

/// Eigenvalues ascending with the matching unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    fn of_hermitian(m: &CMatrix) -> Self {
        let n = m.nrows();
        if n == 0 {
            return Self { eigenvalues: vec![], eigenvectors: CMatrix::zeros(0, 0) };
        }
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
        Self { eigenvalues, eigenvectors }
    }

    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let d: Vec<f64> = self.eigenvalues.clone();
        v * diag_real(&d) * v.adjoint()
    }
}

/// Spectral decomposition of a Hermitian matrix.
pub fn eigh(h: &CMatrix) -> Result<SpectralDecomposition> {
    check_square(h)?;
    let deviation = max_abs_diff(h, &h.adjoint()) / 2.0;
    if deviation > HERMITIAN_TOL {
        return Err(QrfError::NotHermitian { deviation, tolerance: HERMITIAN_TOL });
    }
    Ok(SpectralDecomposition::of_hermitian(h))
}

/// `-sum p log2 p` over eigenvalues, clamping round-off negatives to zero.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -EIGEN_TOL {
            return Err(QrfError::NotPositive { value: l, tolerance: EIGEN_TOL });
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    entropy_of_spectrum(&rho.eigh().eigenvalues)
}

/// Entropy of an arbitrary Hermitian, positive, possibly subnormalized
/// matrix block (no trace check).
pub(crate) fn block_entropy(block: &CMatrix) -> Result<f64> {
    entropy_of_spectrum(&SpectralDecomposition::of_hermitian(block).eigenvalues)
}

/// `tr rho (log2 rho - log2 sigma)`.
///
/// Fails with [`QrfError::SupportViolation`] when `rho` has weight on an
/// eigenvector of `sigma` whose eigenvalue is below [`SUPPORT_TOL`].
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(QrfError::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let neg_entropy = -von_neumann_entropy(rho)?;
    let spec = sigma.eigh();
    let v = &spec.eigenvectors;
    let rotated = v.adjoint() * rho.matrix() * v;
    let mut cross = 0.0;
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let weight = rotated[(k, k)].re;
        if lambda < -EIGEN_TOL {
            return Err(QrfError::NotPositive { value: lambda, tolerance: EIGEN_TOL });
        }
        if lambda <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Err(QrfError::SupportViolation { residual: weight });
            }
            continue;
        }
        cross += weight * lambda.log2();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `-sum p log2 p` of a probability list.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(QrfError::BadDistribution("empty".into()));
    }
    if let Some(x) = p.iter().find(|x| **x < 0.0 || !x.is_finite()) {
        return Err(QrfError::BadDistribution(format!("entry {x} is not a probability")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > TRACE_TOL {
        return Err(QrfError::BadDistribution(format!("sums to {total}")));
    }
    Ok(p.iter().filter(|x| **x > 0.0).map(|x| -x * x.log2()).sum::<f64>().max(0.0))
}

/// Max-entry norm of `AB - BA`.
pub fn commutator_norm(a: &HermitianOperator, b: &CMatrix) -> Result<f64> {
    if b.shape() != (a.dim(), a.dim()) {
        return Err(QrfError::DimensionMismatch { expected: a.dim(), found: b.nrows() });
    }
    let am = a.matrix();
    Ok(max_abs(&(am * b - b * am)))
}

/// Seeded random states and unitaries for tests, examples and CLI demos.
pub mod random {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
        CVector::from_fn(dim, |_, _| {
            c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        })
    }

    /// Haar-random unit vector.
    pub fn pure_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
        let v = gaussian_vector(dim, rng);
        let n = v.norm();
        v / c(n, 0.0)
    }

    pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
        DensityOperator::pure(&pure_vector(dim, rng), vec![dim]).expect("nonzero gaussian vector")
    }

    /// Induced-measure mixed state: partial trace of a random pure state on
    /// `dim x rank`.
    pub fn mixed_state<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityOperator {
        let g = CMatrix::from_fn(dim, rank.max(1), |_, _| {
            c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let m = &g * g.adjoint();
        let t = m.trace().re;
        DensityOperator::from_map_output(m / c(t, 0.0), vec![dim])
    }

    /// Haar-random unitary from the QR decomposition of a Ginibre matrix.
    pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        // fix column phases so the distribution is Haar
        let phases = CMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                let d = r[(i, i)];
                if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) }
            } else {
                c(0.0, 0.0)
            }
        });
        q * phases
    }
}
