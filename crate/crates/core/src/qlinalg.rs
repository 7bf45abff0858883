//! Dense complex linear algebra for the handful of dimensions two- and
//! three-qubit problems need.
//!
//! Qubits map onto tensor factors left to right: in a three-qubit operator
//! qubit 0 is the most significant index bit. Basis order within a qubit is
//! `|↑⟩ = 0`, `|↓⟩ = 1`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use thiserror::Error;

use crate::real::Real;

/// Axis lengths a [`ComplexMatrix`] may have. Three is admitted for the real
/// 3×3 correlation products (`TᵀT`) that go through the Hermitian solver.
pub const ALLOWED_DIMS: [usize; 5] = [1, 2, 3, 4, 8];

/// Absolute tolerance on `max |H - H†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension {0} is not one of 1, 2, 3, 4, 8")]
    InvalidDimension(usize),
    #[error("shape mismatch: {op} of {lhs:?} with {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("invalid subsystem selector {keep:?} for {qubits} qubits")]
    InvalidSelector { keep: Vec<usize>, qubits: usize },
}

fn check_dim(n: usize) -> Result<(), LinalgError> {
    if ALLOWED_DIMS.contains(&n) {
        Ok(())
    } else {
        Err(LinalgError::InvalidDimension(n))
    }
}

/// Dense row-major complex matrix with each axis in [`ALLOWED_DIMS`].
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self, LinalgError> {
        check_dim(rows)?;
        check_dim(cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<Complex<T>>,
    ) -> Result<Self, LinalgError> {
        check_dim(rows)?;
        check_dim(cols)?;
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Result<Self, LinalgError> {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::from_row_major(rows, cols, data)
    }

    /// Column vector (ket).
    pub fn column(entries: &[Complex<T>]) -> Result<Self, LinalgError> {
        Self::from_row_major(entries.len(), 1, entries.to_vec())
    }

    pub fn diagonal_real(diag: &[T]) -> Result<Self, LinalgError> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(diag[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// Real matrix given as nested rows, e.g. a Gram matrix `TᵀT`.
    pub fn from_real_rows<const N: usize>(rows: &[[T; N]; N]) -> Result<Self, LinalgError> {
        Self::from_fn(N, N, |i, j| Complex::new(rows[i][j], T::zero()))
    }

    /// `|v⟩⟨w|` of two kets.
    pub fn outer(v: &Self, w: &Self) -> Result<Self, LinalgError> {
        if v.cols != 1 || w.cols != 1 {
            return Err(LinalgError::ShapeMismatch {
                op: "outer",
                lhs: v.shape(),
                rhs: w.shape(),
            });
        }
        Self::from_fn(v.rows, w.rows, |i, j| v.data[i] * w.data[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "product",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, rhs: &Self) -> Result<Self, LinalgError> {
        kron(self, rhs)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    fn zip(&self, rhs: &Self, op: &'static str, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "shape mismatch in {op}: {:?} vs {:?}",
            self.shape(),
            rhs.shape()
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> T {
        assert_eq!(self.shape(), rhs.shape());
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `max |H_ij - conj(H_ji)|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = &self.adjoint() * self;
        let id = Self::identity(self.rows).expect("square matrix of allowed size");
        gram.max_abs_diff(&id) <= tol
    }

    /// `⟨v|M|v⟩` for a ket `v`.
    pub fn expectation(&self, ket: &Self) -> Complex<T> {
        let mv = self * ket;
        ket.data
            .iter()
            .zip(&mv.data)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a.conj() * b)
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Complex<T> {
        assert!(self.cols == rhs.rows && self.rows == rhs.cols);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    /// Euclidean norm, treating the matrix as a flat vector.
    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on inner-dimension mismatch; use [`ComplexMatrix::try_matmul`] to
/// get an error instead.
impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_matmul(rhs).expect("matrix product shape")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        self.zip(rhs, "sum", |a, b| a + b)
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        self.zip(rhs, "difference", |a, b| a - b)
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = &self.data[i * self.cols + j];
                write!(f, "{:+.6?}{:+.6?}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    check_dim(rows)?;
    check_dim(cols)?;
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

/// Spectrum and eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    /// Sorted descending.
    pub eigenvalues: Vec<T>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let lambda = ComplexMatrix::diagonal_real(&self.eigenvalues).expect("allowed size");
        &(&self.eigenvectors * &lambda) * &self.eigenvectors.adjoint()
    }

    pub fn eigenvector(&self, k: usize) -> ComplexMatrix<T> {
        let n = self.eigenvectors.rows();
        ComplexMatrix::from_fn(n, 1, |i, _| self.eigenvectors[(i, k)]).expect("allowed size")
    }

    pub fn min_eigenvalue(&self) -> T {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Full eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eigen<T: Real>(h: &ComplexMatrix<T>) -> Result<HermitianEigen<T>, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare(h.rows, h.cols));
    }
    let defect = h.hermiticity_defect();
    if defect > T::tol(HERMITIAN_TOL) {
        return Err(LinalgError::NotHermitian {
            deviation: defect.to_f64_lossy(),
        });
    }
    let n = h.rows;
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(h[(i, i)].re, T::zero())
        } else {
            (h[(i, j)] + h[(j, i)].conj()).scale(T::lit(0.5))
        }
    })?;
    let mut v = ComplexMatrix::identity(n)?;
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let target = T::epsilon() * scale * T::lit(0.25);

    let off_norm = |a: &ComplexMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_JACOBI_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let c = a[(p, q)];
                let g = c.norm();
                if g <= T::min_positive_value() {
                    continue;
                }
                // Phase so that the rotated (p,q) element is real and positive.
                let phase = c / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (T::lit(2.0) * g);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // U = diag(1, conj(phase)) · [[cs, sn], [-sn, cs]] on (p, q).
                let u_pp = Complex::new(cs, T::zero());
                let u_pq = Complex::new(sn, T::zero());
                let u_qp = phase.conj() * (-sn);
                let u_qq = phase.conj() * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
        converged = off_norm(&a) <= target;
    }
    if !converged {
        // Rounding can stall just above the target; accept anything that is
        // still negligible at working precision.
        let residual = off_norm(&a);
        if residual > T::epsilon().sqrt() * T::epsilon() * scale * T::lit(64.0) {
            return Err(LinalgError::NoConvergence {
                sweeps,
                residual: residual.to_f64_lossy(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])])?;
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Number of qubits of a square operator of dimension `2^k`.
pub fn qubit_count<T: Real>(m: &ComplexMatrix<T>) -> Option<usize> {
    match (m.rows, m.cols) {
        (2, 2) => Some(1),
        (4, 4) => Some(2),
        (8, 8) => Some(3),
        _ => None,
    }
}

/// Partial trace keeping the qubits listed in `keep` (0-based, left to right).
///
/// The retained factors keep their relative order.
pub fn partial_trace<T: Real>(
    rho: &ComplexMatrix<T>,
    keep: &[usize],
) -> Result<ComplexMatrix<T>, LinalgError> {
    let qubits = match qubit_count(rho) {
        Some(q) if q >= 2 => q,
        _ => {
            return Err(LinalgError::InvalidSelector {
                keep: keep.to_vec(),
                qubits: qubit_count(rho).unwrap_or(0),
            })
        }
    };
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() != keep.len() || sorted.iter().any(|&q| q >= qubits) {
        return Err(LinalgError::InvalidSelector {
            keep: keep.to_vec(),
            qubits,
        });
    }
    let traced: Vec<usize> = (0..qubits).filter(|q| !sorted.contains(q)).collect();
    // Bit position of qubit q in a basis index (qubit 0 is most significant).
    let bit = |q: usize| qubits - 1 - q;
    let assemble = |kept_bits: usize, traced_bits: usize| {
        let mut idx = 0usize;
        for (pos, &q) in sorted.iter().enumerate() {
            let b = (kept_bits >> (sorted.len() - 1 - pos)) & 1;
            idx |= b << bit(q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let b = (traced_bits >> (traced.len() - 1 - pos)) & 1;
            idx |= b << bit(q);
        }
        idx
    };
    let dim_keep = 1 << sorted.len();
    let dim_trace = 1 << traced.len();
    ComplexMatrix::from_fn(dim_keep, dim_keep, |i, j| {
        (0..dim_trace).fold(Complex::new(T::zero(), T::zero()), |acc, t| {
            acc + rho[(assemble(i, t), assemble(j, t))]
        })
    })
}

/// Real 3-vectors and 3×3 matrices for Bloch vectors and correlation matrices.
pub mod real3 {
    use crate::real::Real;

    pub type Vec3<T> = [T; 3];
    pub type Mat3<T> = [[T; 3]; 3];

    pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> T {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn norm<T: Real>(a: &Vec3<T>) -> T {
        dot(a, a).sqrt()
    }

    pub fn add<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn sub<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn scale<T: Real>(a: &Vec3<T>, s: T) -> Vec3<T> {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    /// Unit vector along `a`, or `None` when `a` vanishes.
    pub fn normalized<T: Real>(a: &Vec3<T>) -> Option<Vec3<T>> {
        let n = norm(a);
        if n > T::min_positive_value() {
            Some(scale(a, T::one() / n))
        } else {
            None
        }
    }

    pub fn cross<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    /// `M v`.
    pub fn mat_vec<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
        [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
    }

    /// `Mᵀ v`.
    pub fn mat_t_vec<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
        let mut out = [T::zero(); 3];
        for (i, row) in m.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += row[j] * v[i];
            }
        }
        out
    }

    pub fn transpose<T: Real>(m: &Mat3<T>) -> Mat3<T> {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                out[j][i] = x;
            }
        }
        out
    }

    pub fn mat_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, o) in row.iter_mut().enumerate() {
                *o = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        out
    }

    pub fn diag<T: Real>(d: [T; 3]) -> Mat3<T> {
        let mut out = [[T::zero(); 3]; 3];
        for (i, &x) in d.iter().enumerate() {
            out[i][i] = x;
        }
        out
    }

    pub fn trace<T: Real>(m: &Mat3<T>) -> T {
        m[0][0] + m[1][1] + m[2][2]
    }

    pub fn max_abs_diff<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> T {
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((a[i][j] - b[i][j]).abs());
            }
        }
        worst
    }

    /// Unit vector from polar angle `theta` and azimuth `phi`.
    pub fn spherical<T: Real>(theta: T, phi: T) -> Vec3<T> {
        let st = theta.sin();
        [st * phi.cos(), st * phi.sin(), theta.cos()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sx() -> M {
        M::from_row_major(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
    }
    fn sy() -> M {
        M::from_row_major(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }
    fn sz() -> M {
        M::diagonal_real(&[1.0, -1.0]).unwrap()
    }

    fn matrix_from(n: usize, vals: &[f64]) -> M {
        M::from_fn(n, n, |i, j| c(vals[2 * (i * n + j)], vals[2 * (i * n + j) + 1])).unwrap()
    }

    fn hermitian_from(n: usize, vals: &[f64]) -> M {
        let a = matrix_from(n, vals);
        (&a + &a.adjoint()).scale_real(0.5)
    }

    #[test]
    fn kron_identities() {
        let i2 = M::identity(2).unwrap();
        assert_eq!(kron(&i2, &i2).unwrap(), M::identity(4).unwrap());
        let zz = kron(&sz(), &sz()).unwrap();
        assert_eq!(zz, M::diagonal_real(&[1., -1., -1., 1.]).unwrap());
    }

    #[test]
    fn kron_xy_on_up_up() {
        let xy = kron(&sx(), &sy()).unwrap();
        let upup = M::column(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let out = &xy * &upup;
        // σx|↑⟩ = |↓⟩, σy|↑⟩ = i|↓⟩  ⇒  i|↓↓⟩
        let expected = M::column(&[c(0., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn kron_rejects_overflow() {
        let m = M::identity(4).unwrap();
        assert_eq!(kron(&m, &m), Err(LinalgError::InvalidDimension(16)));
        assert!(matches!(
            M::zeros(5, 5),
            Err(LinalgError::InvalidDimension(5))
        ));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = M::from_row_major(1, 1, vec![c(f64::NAN, 0.)]).unwrap_err();
        assert_eq!(err, LinalgError::NonFinite { row: 0, col: 0 });
    }

    #[test]
    fn eigen_of_pauli_z() {
        let e = hermitian_eigen(&sz()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, -1.0]);
    }

    #[test]
    fn eigen_of_rank_one_projector() {
        let s = 0.5f64.sqrt();
        let phi = M::column(&[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap();
        let p = M::outer(&phi, &phi).unwrap();
        let e = hermitian_eigen(&p).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (got, want) in e.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-14, "{:?}", e.eigenvalues);
        }
        // Top eigenvector spans |Φ+⟩.
        let overlap = phi.adjoint().try_matmul(&e.eigenvector(0)).unwrap()[(0, 0)].norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_of_orthogonal_gram() {
        // T = diag(1,-1,1) ⇒ TᵀT = I₃.
        let gram = M::from_real_rows(&[[1.0, 0., 0.], [0., 1., 0.], [0., 0., 1.]]).unwrap();
        let e = hermitian_eigen(&gram).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = M::from_row_major(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(
            hermitian_eigen(&m),
            Err(LinalgError::NotHermitian { .. })
        ));
        let rect = M::zeros(2, 4).unwrap();
        assert!(matches!(hermitian_eigen(&rect), Err(LinalgError::NotSquare(2, 4))));
    }

    #[test]
    fn eigen_f32_works() {
        let m = ComplexMatrix::<f32>::from_real_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-5);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = 0.5f64.sqrt();
        let phi = M::column(&[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap();
        let rho = M::outer(&phi, &phi).unwrap();
        let half = M::identity(2).unwrap().scale_real(0.5);
        assert!(partial_trace(&rho, &[1]).unwrap().max_abs_diff(&half) < 1e-15);
        assert!(partial_trace(&rho, &[0]).unwrap().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let up = M::diagonal_real(&[1.0, 0.0]).unwrap();
        let down = M::diagonal_real(&[0.0, 1.0]).unwrap();
        let rho = kron(&up, &down).unwrap();
        assert_eq!(partial_trace(&rho, &[0]).unwrap(), up);
        assert_eq!(partial_trace(&rho, &[1]).unwrap(), down);
    }

    #[test]
    fn partial_trace_three_qubits_keeps_order() {
        let up = M::diagonal_real(&[1.0, 0.0]).unwrap();
        let down = M::diagonal_real(&[0.0, 1.0]).unwrap();
        let half = M::identity(2).unwrap().scale_real(0.5);
        let rho = kron(&kron(&up, &half).unwrap(), &down).unwrap();
        assert_eq!(partial_trace(&rho, &[2]).unwrap(), down);
        assert_eq!(partial_trace(&rho, &[0, 2]).unwrap(), kron(&up, &down).unwrap());
        assert_eq!(partial_trace(&rho, &[1]).unwrap(), half);
    }

    #[test]
    fn partial_trace_selector_errors() {
        let rho = M::identity(4).unwrap();
        for bad in [&[][..], &[2], &[0, 0]] {
            assert!(matches!(
                partial_trace(&rho, bad),
                Err(LinalgError::InvalidSelector { .. })
            ));
        }
        assert!(partial_trace(&M::identity(2).unwrap(), &[0]).is_err());
    }

    fn entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, 2 * n * n)
    }

    proptest! {
        #[test]
        fn kron_is_associative(a in entries(2), b in entries(2), c3 in entries(2)) {
            let (a, b, c3) = (matrix_from(2, &a), matrix_from(2, &b), matrix_from(2, &c3));
            let left = kron(&kron(&a, &b).unwrap(), &c3).unwrap();
            let right = kron(&a, &kron(&b, &c3).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) < 1e-12);
        }

        #[test]
        fn kron_is_bilinear(a in entries(2), b in entries(2), c3 in entries(2), s in -2.0f64..2.0) {
            let (a, b, c3) = (matrix_from(2, &a), matrix_from(2, &b), matrix_from(2, &c3));
            let lhs = kron(&(&a.scale_real(s) + &b), &c3).unwrap();
            let rhs = &kron(&a, &c3).unwrap().scale_real(s) + &kron(&b, &c3).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn eigen_reconstructs_and_preserves_trace(vals in entries(8)) {
            let h = hermitian_from(8, &vals);
            let e = hermitian_eigen(&h).unwrap();
            prop_assert!(e.reconstruct().max_abs_diff(&h) <= 1e-10);
            let vtv = &e.eigenvectors.adjoint() * &e.eigenvectors;
            prop_assert!(vtv.max_abs_diff(&M::identity(8).unwrap()) <= 1e-10);
            let sum: f64 = e.eigenvalues.iter().sum();
            prop_assert!((sum - h.trace().re).abs() <= 1e-10);
            prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn eigen_handles_four_dims(vals in entries(4)) {
            let h = hermitian_from(4, &vals);
            let e = hermitian_eigen(&h).unwrap();
            prop_assert!(e.reconstruct().max_abs_diff(&h) <= 1e-10);
        }

        #[test]
        fn partial_trace_of_kron(a in entries(2), b in entries(2)) {
            let (a, b) = (matrix_from(2, &a), matrix_from(2, &b));
            let ab = kron(&a, &b).unwrap();
            let kept = partial_trace(&ab, &[0]).unwrap();
            prop_assert!(kept.max_abs_diff(&a.scale(b.trace())) < 1e-12);
            prop_assert!((partial_trace(&ab, &[1]).unwrap().trace() - ab.trace()).norm() < 1e-12);
        }
    }
}
