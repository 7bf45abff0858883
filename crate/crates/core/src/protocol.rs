//! The standard teleportation protocol: Alice's Bell measurement on qubits
//! 1+2, the two-bit message, and Bob's correcting unitary on qubit 3.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qlinalg::real3::{self, Mat3, Vec3};
use crate::qlinalg::{kron, ComplexMatrix};
use crate::real::Real;
use crate::states::{
    correlation_matrix, identity2, pauli, random_unit_vector, seeded_rng, Axis, BellState,
    DensityOperator, PureQubitState,
};

/// Outcomes with probability at or below this carry no post-measurement state.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-14;
/// Unitarity tolerance for strategy members.
pub const UNITARY_TOL: f64 = 1e-10;

/// Best fidelity reachable without a quantum channel.
pub fn classical_fidelity<T: Real>() -> T {
    T::lit(2.0) / T::lit(3.0)
}

/// `2/3 (1 + 1/(2√2)) = 2/3 + √2/6 ≈ 0.9024`; above this the Bell
/// teleportation inequality is necessarily violated.
pub fn fidelity_threshold<T: Real>() -> T {
    classical_fidelity::<T>() + T::SQRT_2() / T::lit(6.0)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("strategy unitary for outcome {outcome} is not a 2x2 unitary")]
    NotUnitary { outcome: usize },
}

/// Assignment of one correcting unitary to each outcome `n = 1..=4`.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy<T> {
    unitaries: [ComplexMatrix<T>; 4],
}

impl<T: Real> Strategy<T> {
    /// `unitaries[n - 1]` is applied on outcome `n`.
    pub fn new(unitaries: [ComplexMatrix<T>; 4]) -> Result<Self, ProtocolError> {
        for (k, u) in unitaries.iter().enumerate() {
            if u.shape() != (2, 2) || !u.is_unitary(T::tol(UNITARY_TOL)) {
                return Err(ProtocolError::NotUnitary { outcome: k + 1 });
            }
        }
        Ok(Self { unitaries })
    }

    /// `U₁ = I (Ψ−), U₂ = σx (Φ−), U₃ = σy (Φ+), U₄ = σz (Ψ+)`.
    pub fn standard() -> Self {
        Self {
            unitaries: [
                identity2(),
                pauli(Axis::X),
                pauli(Axis::Y),
                pauli(Axis::Z),
            ],
        }
    }

    pub fn unitary(&self, outcome: usize) -> &ComplexMatrix<T> {
        &self.unitaries[outcome - 1]
    }
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome<T> {
    /// Outcome index `1..=4`, see [`BellState::BY_OUTCOME`].
    pub outcome: usize,
    pub probability: T,
    /// Qubit-3 state before Bob's correction; `None` when the outcome has
    /// zero probability.
    pub post_state: Option<ComplexMatrix<T>>,
}

/// Unnormalised qubit-3 state `(⟨B|⊗I) (|φ⟩⟨φ| ⊗ D) (|B⟩⊗I)` for Bell state `B`.
fn conditional_state<T: Real>(joint: &ComplexMatrix<T>, bell: BellState) -> ComplexMatrix<T> {
    let k = kron(&bell.scaled_ket::<T>(), &identity2()).expect("8x2");
    (&(&k.adjoint() * joint) * &k).scale_real(T::lit(0.5))
}

fn joint_state<T: Real>(phi: &PureQubitState<T>, d: &DensityOperator<T>) -> ComplexMatrix<T> {
    kron(&phi.projector(), d.matrix()).expect("8x8")
}

/// Alice's Bell measurement on qubits 1+2 with qubit 1 in `phi` and the
/// channel in `d`.
pub fn bell_measure<T: Real>(phi: &PureQubitState<T>, d: &DensityOperator<T>) -> [MeasurementOutcome<T>; 4] {
    let joint = joint_state(phi, d);
    BellState::BY_OUTCOME.map(|bell| {
        let sigma = conditional_state(&joint, bell);
        let probability = sigma.trace().re;
        let post_state = (probability > T::tol(ZERO_PROBABILITY_TOL))
            .then(|| sigma.scale_real(T::one() / probability));
        MeasurementOutcome {
            outcome: bell.outcome(),
            probability,
            post_state,
        }
    })
}

/// `Σ_n p_n ⟨φ| U_n ρ_n U_n† |φ⟩`.
pub fn fidelity_for_state<T: Real>(phi: &PureQubitState<T>, d: &DensityOperator<T>, s: &Strategy<T>) -> T {
    let ket = phi.ket();
    bell_measure(phi, d)
        .iter()
        .filter_map(|o| {
            let post = o.post_state.as_ref()?;
            let u = s.unitary(o.outcome);
            let corrected = &(u * post) * &u.adjoint();
            Some(o.probability * corrected.expectation(&ket).re)
        })
        .sum()
}

/// How the Bloch-sphere average is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quadrature {
    /// Equal-weight Fibonacci-sphere points.
    FibonacciGrid { points: usize },
    /// Seeded uniform samples on the sphere.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::FibonacciGrid { points: 2048 }
    }
}

impl Quadrature {
    pub fn bloch_points<T: Real>(&self) -> Vec<Vec3<T>> {
        match *self {
            Quadrature::FibonacciGrid { points } => {
                let n = points.max(1);
                let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
                (0..n)
                    .map(|i| {
                        let z = T::one() - T::lit((2 * i + 1) as f64) / T::lit(n as f64);
                        let r = (T::one() - z * z).max(T::zero()).sqrt();
                        let phi = golden * T::lit(i as f64);
                        [r * phi.cos(), r * phi.sin(), z]
                    })
                    .collect()
            }
            Quadrature::MonteCarlo { samples, seed } => {
                let mut rng = seeded_rng(seed);
                (0..samples.max(1)).map(|_| random_unit_vector(&mut rng)).collect()
            }
        }
    }
}

/// Bloch-sphere-uniform average of [`fidelity_for_state`].
///
/// Points are evaluated in parallel and summed in grid order, so the result
/// does not depend on the worker count.
pub fn fidelity_average<T: Real>(d: &DensityOperator<T>, s: &Strategy<T>, quad: &Quadrature) -> T {
    let points = quad.bloch_points::<T>();
    let values: Vec<T> = points
        .par_iter()
        .map(|r| fidelity_for_state(&PureQubitState::from_bloch(r), d, s))
        .collect();
    let n = T::lit(values.len() as f64);
    values.into_iter().fold(T::zero(), |acc, v| acc + v) / n
}

/// `F_st(D) = 1/2 − (T_xx + T_yy + T_zz)/6`.
pub fn fidelity_standard_closed<T: Real>(d: &DensityOperator<T>) -> T {
    let c = correlation_matrix(d);
    T::lit(0.5) - c.trace() / T::lit(6.0)
}

/// Matrix `R` with `U (b·σ) U† = (R b)·σ`.
pub fn rotation_of_unitary<T: Real>(u: &ComplexMatrix<T>) -> Mat3<T> {
    let paulis = Axis::ALL.map(pauli::<T>);
    let ud = u.adjoint();
    let mut r = [[T::zero(); 3]; 3];
    for (j, sj) in paulis.iter().enumerate() {
        let rotated = &(u * sj) * &ud;
        for (i, si) in paulis.iter().enumerate() {
            r[i][j] = si.trace_product(&rotated).re * T::lit(0.5);
        }
    }
    r
}

/// Per-outcome diagonal matrices entering the rotation form of the standard
/// fidelity: `t[n-1]` is the correlation matrix of the outcome's Bell state and
/// `o[n-1]` satisfies `U_n (b·σ) U_n⁻¹ = (O_nᵀ b)·σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationTriple<T> {
    pub t: [Mat3<T>; 4],
    pub o: [Mat3<T>; 4],
}

impl<T: Real> RotationTriple<T> {
    pub fn standard() -> Self {
        let (p, m) = (T::one(), -T::one());
        Self {
            t: [
                real3::diag([m, m, m]),
                real3::diag([m, p, p]),
                real3::diag([p, m, p]),
                real3::diag([p, p, m]),
            ],
            o: [
                real3::diag([p, p, p]),
                real3::diag([p, m, m]),
                real3::diag([m, p, m]),
                real3::diag([m, m, p]),
            ],
        }
    }

    /// Derives both families from the Bell basis and a strategy.
    pub fn from_strategy(s: &Strategy<T>) -> Self {
        let mut t = [[[T::zero(); 3]; 3]; 4];
        let mut o = t;
        for (k, bell) in BellState::BY_OUTCOME.iter().enumerate() {
            t[k] = correlation_matrix(&bell.density::<T>()).t;
            o[k] = real3::transpose(&rotation_of_unitary(s.unitary(k + 1)));
        }
        Self { t, o }
    }
}

/// `1/8 Σ_n (1 + 1/3 Tr[T_nᵀ T(D) O_n])`.
pub fn fidelity_rotation_form<T: Real>(d: &DensityOperator<T>, triple: &RotationTriple<T>) -> T {
    let td = correlation_matrix(d).t;
    let third = T::one() / T::lit(3.0);
    let sum: T = (0..4)
        .map(|n| {
            let prod = real3::mat_mul(&real3::mat_mul(&real3::transpose(&triple.t[n]), &td), &triple.o[n]);
            T::one() + third * real3::trace(&prod)
        })
        .sum();
    sum / T::lit(8.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityClass {
    /// `f ≤ 2/3`.
    Classical,
    /// `2/3 < f ≤ 2/3 + √2/6`.
    Nonclassical,
    /// `f > 2/3 + √2/6`.
    AboveThreshold,
}

pub fn classify_fidelity<T: Real>(f: T) -> FidelityClass {
    if f <= classical_fidelity() {
        FidelityClass::Classical
    } else if f <= fidelity_threshold() {
        FidelityClass::Nonclassical
    } else {
        FidelityClass::AboveThreshold
    }
}
