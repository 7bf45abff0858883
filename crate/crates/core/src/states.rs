//! States and operators on the teleportation qubits.
//!
//! Qubit 1 carries the unknown state, qubits 2 (Alice) and 3 (Bob) form the
//! channel. A [`DensityOperator`] always describes the 2+3 channel, with
//! qubit 2 as the left tensor factor.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::qlinalg::real3::{self, Mat3, Vec3};
use crate::qlinalg::{hermitian_eigen, kron, ComplexMatrix, LinalgError, HERMITIAN_TOL};
use crate::real::Real;

pub mod spec;

pub use spec::{parse_state_spec, SpecError, StateSpec};

/// Unit trace tolerance.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest admitted eigenvalue of a density operator.
pub const PSD_TOL: f64 = -1e-9;
/// Norm tolerance for kets and spin directions.
pub const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("expected a {expected}x{expected} operator, got {rows}x{cols}")]
    WrongShape { expected: usize, rows: usize, cols: usize },
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotUnit(f64),
    #[error("operator is not positive semidefinite: minimum eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("direction has norm {0}, expected a unit vector")]
    NotUnit(f64),
    #[error("{name} = {value} outside [0, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("rank {0} not in 1..=4")]
    InvalidRank(usize),
}

fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Pauli matrix in the `|↑⟩, |↓⟩` basis.
pub fn pauli<T: Real>(axis: Axis) -> ComplexMatrix<T> {
    let (o, l, i) = (T::zero(), T::one(), T::one());
    let data = match axis {
        Axis::X => vec![cplx(o, o), cplx(l, o), cplx(l, o), cplx(o, o)],
        Axis::Y => vec![cplx(o, o), cplx(o, -i), cplx(o, i), cplx(o, o)],
        Axis::Z => vec![cplx(l, o), cplx(o, o), cplx(o, o), cplx(-l, o)],
    };
    ComplexMatrix::from_row_major(2, 2, data).expect("2x2")
}

pub fn identity2<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::identity(2).expect("2x2")
}

/// `n·σ` without the unit-norm check, for any real 3-vector.
pub fn sigma_dot<T: Real>(n: &Vec3<T>) -> ComplexMatrix<T> {
    let (x, y, z) = (n[0], n[1], n[2]);
    ComplexMatrix::from_row_major(
        2,
        2,
        vec![creal(z), cplx(x, -y), cplx(x, y), creal(-z)],
    )
    .expect("2x2")
}

/// Spin observable `n·σ` along a unit direction.
pub fn spin_component<T: Real>(n: &Vec3<T>) -> Result<ComplexMatrix<T>, StateError> {
    let len = real3::norm(n);
    if (len - T::one()).abs() > T::tol(UNIT_TOL) {
        return Err(StateError::NotUnit(len.to_f64_lossy()));
    }
    Ok(sigma_dot(n))
}

/// `(x₀, x)` with `m = x₀ I + x·σ` for a Hermitian 2×2 matrix.
pub fn pauli_decompose<T: Real>(m: &ComplexMatrix<T>) -> (T, Vec3<T>) {
    let half = T::lit(0.5);
    let x0 = (m[(0, 0)].re + m[(1, 1)].re) * half;
    let x = (m[(0, 1)].re + m[(1, 0)].re) * half;
    let y = (m[(1, 0)].im - m[(0, 1)].im) * half;
    let z = (m[(0, 0)].re - m[(1, 1)].re) * half;
    (x0, [x, y, z])
}

/// Normalised single-qubit ket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureQubitState<T> {
    amplitudes: [Complex<T>; 2],
}

impl<T: Real> PureQubitState<T> {
    pub fn new(up: Complex<T>, down: Complex<T>) -> Result<Self, StateError> {
        let norm = (up.norm_sqr() + down.norm_sqr()).sqrt();
        if (norm - T::one()).abs() > T::tol(UNIT_TOL) {
            return Err(StateError::NotUnit(norm.to_f64_lossy()));
        }
        Ok(Self {
            amplitudes: [up, down],
        })
    }

    /// Normalises `(up, down)`; `None` for the zero vector.
    pub fn normalized(up: Complex<T>, down: Complex<T>) -> Option<Self> {
        let norm = (up.norm_sqr() + down.norm_sqr()).sqrt();
        (norm > T::min_positive_value()).then(|| Self {
            amplitudes: [up / norm, down / norm],
        })
    }

    pub fn up() -> Self {
        Self {
            amplitudes: [creal(T::one()), creal(T::zero())],
        }
    }

    pub fn down() -> Self {
        Self {
            amplitudes: [creal(T::zero()), creal(T::one())],
        }
    }

    /// State with the given Bloch vector (must be a unit vector up to rounding).
    pub fn from_bloch(r: &Vec3<T>) -> Self {
        let z = r[2].max(-T::one()).min(T::one());
        let polar = z.acos();
        let azimuth = r[1].atan2(r[0]);
        let half = polar * T::lit(0.5);
        Self {
            amplitudes: [
                creal(half.cos()),
                Complex::from_polar(half.sin(), azimuth),
            ],
        }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        self.amplitudes
    }

    pub fn ket(&self) -> ComplexMatrix<T> {
        ComplexMatrix::column(&self.amplitudes).expect("2x1")
    }

    pub fn projector(&self) -> ComplexMatrix<T> {
        let k = self.ket();
        ComplexMatrix::outer(&k, &k).expect("2x2")
    }

    pub fn bloch_vector(&self) -> Vec3<T> {
        let [a, b] = self.amplitudes;
        let ab = a.conj() * b;
        let two = T::lit(2.0);
        [two * ab.re, two * ab.im, a.norm_sqr() - b.norm_sqr()]
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> T {
        let [a, b] = self.amplitudes;
        let [c, d] = other.amplitudes;
        (a.conj() * c + b.conj() * d).norm_sqr()
    }
}

/// `sin θ |↑⟩ + cos θ e^{iϑ} |↓⟩`.
pub fn unknown_state<T: Real>(theta: T, vartheta: T) -> PureQubitState<T> {
    PureQubitState {
        amplitudes: [creal(theta.sin()), Complex::from_polar(theta.cos(), vartheta)],
    }
}

/// The four Bell states of a qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Ordered by teleportation outcome index: n = 1 ↔ Ψ−, 2 ↔ Φ−, 3 ↔ Φ+, 4 ↔ Ψ+.
    pub const BY_OUTCOME: [BellState; 4] = [
        BellState::PsiMinus,
        BellState::PhiMinus,
        BellState::PhiPlus,
        BellState::PsiPlus,
    ];

    /// Outcome index `n ∈ 1..=4`.
    pub fn outcome(self) -> usize {
        match self {
            BellState::PsiMinus => 1,
            BellState::PhiMinus => 2,
            BellState::PhiPlus => 3,
            BellState::PsiPlus => 4,
        }
    }

    pub fn from_outcome(n: usize) -> Option<Self> {
        (1..=4).contains(&n).then(|| Self::BY_OUTCOME[n - 1])
    }

    /// `√2` times the amplitudes; every entry is 0 or ±1.
    pub fn scaled_amplitudes(self) -> [i8; 4] {
        match self {
            BellState::PhiPlus => [1, 0, 0, 1],
            BellState::PhiMinus => [1, 0, 0, -1],
            BellState::PsiPlus => [0, 1, 1, 0],
            BellState::PsiMinus => [0, 1, -1, 0],
        }
    }

    /// `Φ± = (|↑↑⟩ ± |↓↓⟩)/√2`, `Ψ± = (|↑↓⟩ ± |↓↑⟩)/√2`.
    pub fn amplitudes<T: Real>(self) -> [Complex<T>; 4] {
        let h = T::FRAC_1_SQRT_2();
        self.scaled_amplitudes().map(|s| creal(h * T::lit(f64::from(s))))
    }

    pub fn ket<T: Real>(self) -> ComplexMatrix<T> {
        ComplexMatrix::column(&self.amplitudes()).expect("4x1")
    }

    /// `√2 |B⟩`, exact in floating point.
    pub fn scaled_ket<T: Real>(self) -> ComplexMatrix<T> {
        ComplexMatrix::column(&self.scaled_amplitudes().map(|s| creal(T::lit(f64::from(s))))).expect("4x1")
    }

    /// Entries are 0 and ±1/2 exactly.
    pub fn projector<T: Real>(self) -> ComplexMatrix<T> {
        let k = self.scaled_ket();
        ComplexMatrix::outer(&k, &k).expect("4x4").scale_real(T::lit(0.5))
    }

    pub fn density<T: Real>(self) -> DensityOperator<T> {
        DensityOperator {
            matrix: self.projector(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "Phi+",
            BellState::PhiMinus => "Phi-",
            BellState::PsiPlus => "Psi+",
            BellState::PsiMinus => "Psi-",
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The Bell basis as kets, indexed by outcome (`vectors[n - 1]`).
#[derive(Clone, Debug)]
pub struct BellBasis<T> {
    pub vectors: [ComplexMatrix<T>; 4],
}

impl<T: Real> BellBasis<T> {
    pub fn new() -> Self {
        Self {
            vectors: BellState::BY_OUTCOME.map(|b| b.ket()),
        }
    }

    pub fn vector(&self, outcome: usize) -> &ComplexMatrix<T> {
        &self.vectors[outcome - 1]
    }
}

impl<T: Real> Default for BellBasis<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Density operator of the two channel qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self, StateError> {
        if matrix.shape() != (4, 4) {
            return Err(StateError::WrongShape {
                expected: 4,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > T::tol(HERMITIAN_TOL) {
            return Err(StateError::NotHermitian(defect.to_f64_lossy()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::tol(TRACE_TOL) || tr.im.abs() > T::tol(TRACE_TOL) {
            return Err(StateError::TraceNotUnit(tr.re.to_f64_lossy()));
        }
        let min = hermitian_eigen(&matrix)?.min_eigenvalue();
        if min < -T::tol(-PSD_TOL) {
            return Err(StateError::NotPositive(min.to_f64_lossy()));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a 4-dimensional ket, normalising it first.
    pub fn from_pure(ket: &ComplexMatrix<T>) -> Result<Self, StateError> {
        if ket.shape() != (4, 1) {
            return Err(StateError::WrongShape {
                expected: 4,
                rows: ket.rows(),
                cols: ket.cols(),
            });
        }
        let n = ket.frobenius_norm();
        if n <= T::min_positive_value() {
            return Err(StateError::NotUnit(0.0));
        }
        let k = ket.scale_real(T::one() / n);
        Ok(Self {
            matrix: ComplexMatrix::outer(&k, &k)?,
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: ComplexMatrix::identity(4).expect("4x4").scale_real(T::lit(0.25)),
        }
    }

    /// `p·a + (1 − p)·b` for `p ∈ [0, 1]`.
    pub fn mix(p: T, a: &Self, b: &Self) -> Result<Self, StateError> {
        if !(T::zero()..=T::one()).contains(&p) {
            return Err(StateError::ParameterOutOfRange {
                name: "p",
                value: p.to_f64_lossy(),
            });
        }
        Ok(Self {
            matrix: &a.matrix.scale_real(p) + &b.matrix.scale_real(T::one() - p),
        })
    }

    /// `(u ⊗ v) D (u ⊗ v)†` for single-qubit unitaries.
    pub fn conjugate_local(&self, u: &ComplexMatrix<T>, v: &ComplexMatrix<T>) -> Result<Self, StateError> {
        let uv = kron(u, v)?;
        Ok(Self {
            matrix: &(&uv * &self.matrix) * &uv.adjoint(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// `Tr[D (a ⊗ b)]`, real part.
    pub fn expect_local(&self, a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
        let ab = kron(a, b).expect("4x4");
        self.matrix.trace_product(&ab).re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigen(&self.matrix)
            .expect("validated Hermitian")
            .eigenvalues
    }

    pub fn purity(&self) -> T {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn rank(&self, tol: T) -> usize {
        self.eigenvalues().iter().filter(|&&l| l > tol).count()
    }
}

/// `(1 − 1/√2) I/4 + (1/√2) |Ψ−⟩⟨Ψ−|`.
pub fn werner_state<T: Real>() -> DensityOperator<T> {
    let w = T::FRAC_1_SQRT_2();
    let noise = ComplexMatrix::identity(4).expect("4x4").scale_real((T::one() - w) * T::lit(0.25));
    let singlet = BellState::PsiMinus.projector::<T>().scale_real(w);
    DensityOperator {
        matrix: &noise + &singlet,
    }
}

/// Werner-type mixture `(1 − p) I/4 + p |Ψ−⟩⟨Ψ−|`.
pub fn singlet_mixture<T: Real>(p: T) -> Result<DensityOperator<T>, StateError> {
    DensityOperator::mix(p, &BellState::PsiMinus.density(), &DensityOperator::maximally_mixed())
}

/// The kets `|+⟩, |−⟩` of the `D_{λ,α}` family, phases exactly as printed.
pub fn plus_minus_kets<T: Real>() -> (PureQubitState<T>, PureQubitState<T>) {
    let s3 = T::lit(3.0).sqrt();
    let two = T::lit(2.0);
    let norm_p = (two * (T::lit(3.0) + s3)).sqrt();
    let norm_m = (two * (T::lit(3.0) - s3)).sqrt();
    let plus = PureQubitState {
        amplitudes: [creal((T::one() + s3) / norm_p), cplx(T::one(), T::one()) / norm_p],
    };
    let minus = PureQubitState {
        amplitudes: [creal((T::one() - s3) / norm_m), cplx(T::one(), T::one()) / norm_m],
    };
    (plus, minus)
}

fn unit_interval<T: Real>(name: &'static str, x: T) -> Result<(), StateError> {
    if (T::zero()..=T::one()).contains(&x) {
        Ok(())
    } else {
        Err(StateError::ParameterOutOfRange {
            name,
            value: x.to_f64_lossy(),
        })
    }
}

/// `|ψ_α⟩ = α|+⟩|+⟩ + √(1 − α²)|−⟩|−⟩` as a 4×1 ket.
pub fn psi_alpha<T: Real>(alpha: T) -> Result<ComplexMatrix<T>, StateError> {
    unit_interval("alpha", alpha)?;
    let (plus, minus) = plus_minus_kets::<T>();
    let pp = kron(&plus.ket(), &plus.ket())?;
    let mm = kron(&minus.ket(), &minus.ket())?;
    let beta = (T::one() - alpha * alpha).max(T::zero()).sqrt();
    Ok(&pp.scale_real(alpha) + &mm.scale_real(beta))
}

/// `(1 − λ) I/4 + λ |ψ_α⟩⟨ψ_α|`.
pub fn d_lambda_alpha<T: Real>(lambda: T, alpha: T) -> Result<DensityOperator<T>, StateError> {
    unit_interval("lambda", lambda)?;
    let pure = DensityOperator::from_pure(&psi_alpha(alpha)?)?;
    DensityOperator::mix(lambda, &pure, &DensityOperator::maximally_mixed())
}

/// Correlation data `T_mn = Tr[D(σ_m ⊗ σ_n)]` plus both local Bloch vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationMatrix<T> {
    pub t: Mat3<T>,
    /// `Tr[D(σ_n ⊗ I)]`, qubit 2.
    pub bloch_a: Vec3<T>,
    /// `Tr[D(I ⊗ σ_n)]`, qubit 3.
    pub bloch_b: Vec3<T>,
}

impl<T: Real> CorrelationMatrix<T> {
    pub fn trace(&self) -> T {
        real3::trace(&self.t)
    }

    /// `TᵀT`.
    pub fn gram(&self) -> Mat3<T> {
        real3::mat_mul(&real3::transpose(&self.t), &self.t)
    }
}

pub fn correlation_matrix<T: Real>(d: &DensityOperator<T>) -> CorrelationMatrix<T> {
    let paulis = Axis::ALL.map(pauli::<T>);
    let id = identity2::<T>();
    let mut t = [[T::zero(); 3]; 3];
    for (m, sm) in paulis.iter().enumerate() {
        for (n, sn) in paulis.iter().enumerate() {
            t[m][n] = d.expect_local(sm, sn);
        }
    }
    let bloch_a = [0, 1, 2].map(|n| d.expect_local(&paulis[n], &id));
    let bloch_b = [0, 1, 2].map(|n| d.expect_local(&id, &paulis[n]));
    CorrelationMatrix { t, bloch_a, bloch_b }
}

/// The generator every seeded routine in the crate uses.
pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Draws `G G† / Tr(G G†)` for a complex Gaussian 4×rank matrix `G`.
pub fn random_density_with<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rank: usize,
) -> Result<DensityOperator<T>, StateError> {
    if !(1..=4).contains(&rank) {
        return Err(StateError::InvalidRank(rank));
    }
    let mut g = ComplexMatrix::<T>::zeros(4, 4)?;
    for i in 0..4 {
        for j in 0..rank {
            g[(i, j)] = cplx(gaussian(rng), gaussian(rng));
        }
    }
    let ggt = &g * &g.adjoint();
    let tr = ggt.trace().re;
    let mut m = ggt.scale_real(T::one() / tr);
    // Exact Hermitian symmetry on the stored matrix.
    for i in 0..4 {
        m[(i, i)] = creal(m[(i, i)].re);
        for j in (i + 1)..4 {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    Ok(DensityOperator { matrix: m })
}

/// Deterministic in `seed`.
pub fn random_density<T: Real>(seed: u64, rank: usize) -> Result<DensityOperator<T>, StateError> {
    random_density_with(&mut seeded_rng(seed), rank)
}

/// Haar-random single-qubit unitary (from a uniformly random unit quaternion).
pub fn random_qubit_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix<T> {
    let q: [T; 4] = [gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng)];
    let n = q.iter().map(|&x| x * x).sum::<T>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    ComplexMatrix::from_row_major(2, 2, vec![cplx(a, b), cplx(c, d), cplx(-c, d), cplx(a, -b)])
        .expect("2x2")
}

pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Vec3<T> {
    loop {
        let v: Vec3<T> = [gaussian(rng), gaussian(rng), gaussian(rng)];
        if let Some(u) = real3::normalized(&v) {
            return u;
        }
    }
}

pub fn random_pure_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PureQubitState<T> {
    PureQubitState::from_bloch(&random_unit_vector(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pauli_actions() {
        let up = PureQubitState::<f64>::up().ket();
        let down = PureQubitState::<f64>::down().ket();
        assert_eq!(&pauli::<f64>(Axis::Z) * &up, up);
        assert_eq!(&pauli::<f64>(Axis::X) * &up, down);
        assert_eq!(&pauli::<f64>(Axis::Y) * &up, down.scale(Complex::i()));
        for a in Axis::ALL {
            let p = pauli::<f64>(a);
            assert!(p.is_unitary(EPS) && p.is_hermitian(EPS) && p.trace().norm() == 0.0);
        }
    }

    #[test]
    fn spin_component_cases() {
        assert_eq!(spin_component(&[0.0, 0.0, 1.0]).unwrap(), pauli::<f64>(Axis::Z));
        // e^{-iπ/4}|↑⟩⟨↓| + e^{iπ/4}|↓⟩⟨↑|
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = spin_component(&[h, h, 0.0]).unwrap();
        let e = Complex::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        assert!((s[(0, 1)] - e).norm() < EPS);
        assert!((s[(1, 0)] - e.conj()).norm() < EPS);
        assert!(s[(0, 0)].norm() < EPS && s[(1, 1)].norm() < EPS);
        let ev = hermitian_eigen(&spin_component(&[0.6, 0.0, 0.8]).unwrap()).unwrap();
        assert!(approx(ev.eigenvalues[0], 1.0, EPS) && approx(ev.eigenvalues[1], -1.0, EPS));
        assert!(matches!(spin_component(&[1.0, 1.0, 0.0]), Err(StateError::NotUnit(_))));
    }

    #[test]
    fn pauli_decompose_roundtrip() {
        let m = &sigma_dot(&[0.3, -0.2, 0.5]) + &identity2::<f64>().scale_real(0.1);
        let (x0, x) = pauli_decompose(&m);
        assert!(approx(x0, 0.1, EPS));
        assert!(real3::max_abs_diff(&[x, [0.0; 3], [0.0; 3]], &[[0.3, -0.2, 0.5], [0.0; 3], [0.0; 3]]) < EPS);
    }

    #[test]
    fn unknown_state_examples() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p1 = unknown_state(FRAC_PI_4, 0.0).amplitudes();
        assert!((p1[0] - creal(h)).norm() < EPS && (p1[1] - creal(h)).norm() < EPS);
        let p2 = unknown_state(FRAC_PI_4, FRAC_PI_2).amplitudes();
        assert!((p2[0] - creal(h)).norm() < EPS && (p2[1] - cplx(0.0, h)).norm() < EPS);
        let p3 = unknown_state(FRAC_PI_2, 1.234).amplitudes();
        assert!((p3[0] - creal(1.0)).norm() < EPS && p3[1].norm() < EPS);
        // angles are taken mod 2π
        let wrapped = unknown_state(FRAC_PI_4 + 2.0 * std::f64::consts::PI, 0.0);
        assert!(wrapped.overlap(&unknown_state(FRAC_PI_4, 0.0)) > 1.0 - EPS);
    }

    #[test]
    fn bloch_roundtrip() {
        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            let r = random_unit_vector::<f64, _>(&mut rng);
            let back = PureQubitState::from_bloch(&r).bloch_vector();
            assert!(real3::norm(&real3::sub(&r, &back)) < 1e-12);
        }
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        let basis = BellBasis::<f64>::new();
        for i in 1..=4 {
            for j in 1..=4 {
                let ip = basis.vector(i).adjoint().try_matmul(basis.vector(j)).unwrap()[(0, 0)];
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - creal(want)).norm() < EPS);
            }
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for b in BellState::BY_OUTCOME {
            assert!(b.amplitudes::<f64>().iter().all(|z| z.im == 0.0 && [0.0, h, -h].contains(&z.re)));
            assert_eq!(BellState::from_outcome(b.outcome()), Some(b));
        }
        assert_eq!(BellState::from_outcome(0), None);
    }

    #[test]
    fn werner_properties() {
        let w = werner_state::<f64>();
        assert!(approx(w.matrix().trace().re, 1.0, EPS));
        let overlap = w.matrix().expectation(&BellState::PsiMinus.ket()).re;
        assert!(approx(overlap, (1.0 + 3.0 / 2f64.sqrt()) / 4.0, EPS));
        let c = correlation_matrix(&w);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(real3::max_abs_diff(&c.t, &real3::diag([-h, -h, -h])) < EPS);
        let ev = w.eigenvalues();
        let s2 = 2f64.sqrt();
        assert!(approx(ev[0], (2.0 + 3.0 * s2) / 8.0, EPS));
        for &l in &ev[1..] {
            assert!(approx(l, (2.0 - s2) / 8.0, EPS));
        }
        DensityOperator::new(w.into_matrix()).unwrap();
    }

    #[test]
    fn psi_alpha_reference_expectations() {
        let (plus, minus) = plus_minus_kets::<f64>();
        assert!(approx(plus.overlap(&plus), 1.0, EPS) && approx(minus.overlap(&minus), 1.0, EPS));
        assert!(plus.overlap(&minus) < EPS);
        let (sx, sy, sz, id) = (
            pauli::<f64>(Axis::X),
            pauli::<f64>(Axis::Y),
            pauli::<f64>(Axis::Z),
            identity2::<f64>(),
        );
        for alpha in [0.0, 0.2, 0.5, 0.8660254037844386, 1.0] {
            let d = DensityOperator::from_pure(&psi_alpha(alpha).unwrap()).unwrap();
            let b = (1.0f64 - alpha * alpha).sqrt();
            let local = (2.0 * alpha * alpha - 1.0) / 3f64.sqrt();
            let big = (1.0 + 4.0 * alpha * b) / 3.0;
            let small = (1.0 - 2.0 * alpha * b) / 3.0;
            for s in [&sx, &sy, &sz] {
                assert!(approx(d.expect_local(&id, s), local, EPS));
            }
            for (m, n) in [(&sx, &sy), (&sy, &sx), (&sz, &sz)] {
                assert!(approx(d.expect_local(m, n), big, EPS));
            }
            for m in [&sx, &sy] {
                assert!(approx(d.expect_local(m, m), small, EPS));
                assert!(approx(d.expect_local(m, &sz), small, EPS));
                assert!(approx(d.expect_local(&sz, m), small, EPS));
            }
        }
        assert!(matches!(psi_alpha(1.5), Err(StateError::ParameterOutOfRange { .. })));
    }

    #[test]
    fn d_lambda_alpha_cases() {
        let mixed = d_lambda_alpha(0.0, 0.3).unwrap();
        assert!(mixed.matrix().max_abs_diff(DensityOperator::<f64>::maximally_mixed().matrix()) < EPS);
        let prod = d_lambda_alpha(1.0, 1.0).unwrap();
        assert_eq!(prod.rank(1e-9), 1);
        assert!(approx(prod.purity(), 1.0, 1e-12));
        let (plus, _) = plus_minus_kets::<f64>();
        let want = kron(&plus.projector(), &plus.projector()).unwrap();
        assert!(prod.matrix().max_abs_diff(&want) < EPS);
        assert!(d_lambda_alpha(-0.1, 0.5).is_err());
        assert!(d_lambda_alpha(0.5, 1.1).is_err());
        DensityOperator::new(d_lambda_alpha(0.6f64.sqrt(), 0.75f64.sqrt()).unwrap().into_matrix()).unwrap();
    }

    #[test]
    fn d_lambda_alpha_scales_correlations() {
        for (lambda, alpha) in [(0.3, 0.1), (0.77, 0.87), (1.0, 0.5)] {
            let td = correlation_matrix(&d_lambda_alpha(lambda, alpha).unwrap());
            let tp = correlation_matrix(&DensityOperator::from_pure(&psi_alpha(alpha).unwrap()).unwrap());
            let scaled = tp.t.map(|row| row.map(|x| x * lambda));
            assert!(real3::max_abs_diff(&td.t, &scaled) < EPS);
            for n in 0..3 {
                assert!(approx(td.bloch_b[n], lambda * tp.bloch_b[n], EPS));
            }
        }
    }

    #[test]
    fn correlation_matrix_examples() {
        let c = correlation_matrix(&DensityOperator::<f64>::maximally_mixed());
        assert!(c.t.iter().flatten().all(|x| x.abs() < EPS));
        assert!(c.bloch_a.iter().chain(&c.bloch_b).all(|x| x.abs() < EPS));
        let c = correlation_matrix(&BellState::PhiPlus.density::<f64>());
        assert!(real3::max_abs_diff(&c.t, &real3::diag([1.0, -1.0, 1.0])) < EPS);
        let c = correlation_matrix(&BellState::PsiMinus.density::<f64>());
        assert!(real3::max_abs_diff(&c.t, &real3::diag([-1.0, -1.0, -1.0])) < EPS);
    }

    #[test]
    fn product_state_correlations_factorise() {
        let mut rng = seeded_rng(11);
        for _ in 0..10 {
            let a = random_pure_qubit::<f64, _>(&mut rng);
            let b = random_pure_qubit::<f64, _>(&mut rng);
            let ket = kron(&a.ket(), &b.ket()).unwrap();
            let c = correlation_matrix(&DensityOperator::from_pure(&ket).unwrap());
            let (ra, rb) = (a.bloch_vector(), b.bloch_vector());
            for m in 0..3 {
                assert!(approx(c.bloch_a[m], ra[m], EPS) && approx(c.bloch_b[m], rb[m], EPS));
                for n in 0..3 {
                    assert!(approx(c.t[m][n], ra[m] * rb[n], EPS));
                }
            }
        }
    }

    #[test]
    fn random_density_contract() {
        for seed in 0..40u64 {
            let rank = (seed % 4) as usize + 1;
            let d = random_density::<f64>(seed, rank).unwrap();
            let checked = DensityOperator::new(d.matrix().clone()).unwrap();
            assert_eq!(checked.rank(1e-9), rank);
            let c = correlation_matrix(&d);
            assert!(c.t.iter().flatten().chain(&c.bloch_a).chain(&c.bloch_b).all(|x| x.abs() <= 1.0 + EPS));
            if rank == 1 {
                assert!(approx(d.purity(), 1.0, 1e-10));
            }
        }
        let a = random_density::<f64>(42, 3).unwrap();
        let b = random_density::<f64>(42, 3).unwrap();
        assert!(a.matrix().entries().iter().zip(b.matrix().entries()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
        assert_eq!(random_density::<f64>(0, 0).unwrap_err(), StateError::InvalidRank(0));
        assert_eq!(random_density::<f64>(0, 5).unwrap_err(), StateError::InvalidRank(5));
    }

    #[test]
    fn density_validation_errors() {
        let not_herm = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == 0 && j == 1 { creal(0.3) } else if i == j { creal(0.25) } else { creal(0.0) }
        }).unwrap();
        assert!(matches!(DensityOperator::new(not_herm), Err(StateError::NotHermitian(_))));
        let bad_trace = ComplexMatrix::<f64>::identity(4).unwrap();
        assert!(matches!(DensityOperator::new(bad_trace), Err(StateError::TraceNotUnit(_))));
        let negative = ComplexMatrix::diagonal_real(&[0.6, 0.6, 0.1, -0.3]).unwrap();
        match DensityOperator::new(negative) {
            Err(StateError::NotPositive(min)) => assert!(approx(min, -0.3, 1e-12)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            DensityOperator::new(ComplexMatrix::<f64>::identity(2).unwrap()),
            Err(StateError::WrongShape { .. })
        ));
    }

    #[test]
    fn reduced_state_of_product_family_member() {
        use crate::qlinalg::partial_trace;
        let d = d_lambda_alpha(1.0, 1.0).unwrap();
        let reduced = partial_trace(d.matrix(), &[0]).unwrap();
        let (plus, _) = plus_minus_kets::<f64>();
        assert!(reduced.max_abs_diff(&plus.projector()) < EPS);
        let e = hermitian_eigen(&reduced).unwrap();
        assert!(approx(e.eigenvalues[0], 1.0, EPS) && e.eigenvalues[1].abs() < EPS);
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = seeded_rng(5);
        for _ in 0..10 {
            assert!(random_qubit_unitary::<f64, _>(&mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn single_precision_family() {
        let w = werner_state::<f32>();
        let c = correlation_matrix(&w);
        assert!((c.t[0][0] + std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-5);
        DensityOperator::new(d_lambda_alpha(0.5f32, 0.5f32).unwrap().into_matrix()).unwrap();
    }
}
