//! Bell teleportation inequalities built from bivalent functions of the Bell operator.
//!
//! Alice pairs an unknown state `|φ_j⟩` on qubit 1 with a ±1 observable `A_j`
//! on qubits 1+2; Bob measures spin along `b_1` or `b_2` on qubit 3. The
//! expression
//!
//! `⟨A₁⊗σ₁⟩ + ⟨A₁⊗σ₂⟩ + ⟨A₂⊗σ₁⟩ − ⟨A₂⊗σ₂⟩`
//!
//! is bounded by 2 under local hidden variables. Contracting `A_j` against
//! `|φ_j⟩` leaves a qubit-2 observable `X_j`, so every quantity reduces to the
//! channel's correlation matrix.

mod assignment;
mod conditions;
mod contraction;
mod optimize;

use serde::{Deserialize, Serialize};

pub use assignment::{bivalent_observable, classify, AssignmentClass, BivalentAssignment, Sign, SignSplit};
pub use conditions::{
    condition_bell, condition_bell_exact, condition_class1, condition_class1_exact, condition_class23,
    condition_class23_exact, ConditionFlags, BOUNDARY_TOL,
};
pub use contraction::{contraction_coefficients, contraction_x, contraction_x_oracle, operator_norm};
pub use optimize::{assignment_pairs, tau_max, OptimizerConfig, TauResult};

use crate::protocol::{fidelity_standard_closed, fidelity_threshold};
use crate::qlinalg::real3::{self, Vec3};
use crate::qlinalg::ComplexMatrix;
use crate::real::Real;
use crate::states::{correlation_matrix, pauli_decompose, sigma_dot, unknown_state, CorrelationMatrix, DensityOperator};

/// One choice of everything the teleportation expression depends on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleSettings<T> {
    pub assignment_1: BivalentAssignment,
    pub assignment_2: BivalentAssignment,
    pub theta_1: T,
    pub vartheta_1: T,
    pub theta_2: T,
    pub vartheta_2: T,
    pub bob_1: Vec3<T>,
    pub bob_2: Vec3<T>,
}

impl<T: Real> TeleSettings<T> {
    /// The settings that reach `2√2` on `|Φ+⟩`: the two Żukowski observables
    /// with `|φ₁⟩ = |+x⟩`, `|φ₂⟩ = |+y⟩` and Bob at `(x ± y)/√2`.
    pub fn zukowski() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            assignment_1: BivalentAssignment::zukowski_first(),
            assignment_2: BivalentAssignment::zukowski_second(),
            theta_1: T::FRAC_PI_4(),
            vartheta_1: T::zero(),
            theta_2: T::FRAC_PI_4(),
            vartheta_2: T::FRAC_PI_2(),
            bob_1: [h, h, T::zero()],
            bob_2: [h, -h, T::zero()],
        }
    }

    /// All four angles reduced to `[0, 2π)`.
    pub fn normalized(mut self) -> Self {
        for a in [&mut self.theta_1, &mut self.vartheta_1, &mut self.theta_2, &mut self.vartheta_2] {
            *a = wrap_angle(*a);
        }
        self
    }

    pub fn class(&self) -> AssignmentClass {
        classify((self.assignment_1, self.assignment_2))
    }
}

pub(crate) fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let r = x % tau;
    let r = if r < T::zero() { r + tau } else { r };
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// `⟨A ⊗ σ_b⟩` on `|φ⟩⟨φ| ⊗ D`, computed in the full 8-dimensional space.
fn full_correlator<T: Real>(
    d: &DensityOperator<T>,
    a: &ComplexMatrix<T>,
    theta: T,
    vartheta: T,
    bob: &Vec3<T>,
) -> T {
    let rho = unknown_state(theta, vartheta)
        .projector()
        .kron(d.matrix())
        .expect("8x8");
    let op = a.kron(&sigma_dot(bob)).expect("8x8");
    rho.trace_product(&op).re
}

/// Absolute value of the four-term expression, from 8-dimensional expectations.
pub fn tele_value<T: Real>(d: &DensityOperator<T>, ts: &TeleSettings<T>) -> T {
    let a1 = bivalent_observable::<T>(&ts.assignment_1);
    let a2 = bivalent_observable::<T>(&ts.assignment_2);
    let e = |a: &ComplexMatrix<T>, th: T, vt: T, b: &Vec3<T>| full_correlator(d, a, th, vt, b);
    (e(&a1, ts.theta_1, ts.vartheta_1, &ts.bob_1) + e(&a1, ts.theta_1, ts.vartheta_1, &ts.bob_2)
        + e(&a2, ts.theta_2, ts.vartheta_2, &ts.bob_1)
        - e(&a2, ts.theta_2, ts.vartheta_2, &ts.bob_2))
    .abs()
}

/// `r_n = ⟨X ⊗ σ_n⟩_D = x₀ s_n + (Tᵀx)_n` for `X = x₀ I + x·σ`, with `s` Bob's Bloch vector.
pub fn bob_correlations<T: Real>(c: &CorrelationMatrix<T>, x0: T, x: &Vec3<T>) -> Vec3<T> {
    real3::add(&real3::scale(&c.bloch_b, x0), &real3::mat_t_vec(&c.t, x))
}

/// The same value as [`tele_value`], from the contractions and the correlation matrix.
pub fn tele_value_contracted<T: Real>(d: &DensityOperator<T>, ts: &TeleSettings<T>) -> T {
    let c = correlation_matrix(d);
    let (x01, x1) = contraction_coefficients(&ts.assignment_1, ts.theta_1, ts.vartheta_1);
    let (x02, x2) = contraction_coefficients(&ts.assignment_2, ts.theta_2, ts.vartheta_2);
    let r1 = bob_correlations(&c, x01, &x1);
    let r2 = bob_correlations(&c, x02, &x2);
    let sum = real3::add(&ts.bob_1, &ts.bob_2);
    let diff = real3::sub(&ts.bob_1, &ts.bob_2);
    (real3::dot(&r1, &sum) + real3::dot(&r2, &diff)).abs()
}

/// Best Bob directions for fixed contractions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerMax<T> {
    pub value: T,
    pub bob_1: Vec3<T>,
    pub bob_2: Vec3<T>,
}

/// `|r₁+r₂| + |r₁−r₂|`, attained at `b_1 ∥ r₁+r₂` and `b_2 ∥ r₁−r₂`.
pub(crate) fn inner_max_from_rows<T: Real>(r1: &Vec3<T>, r2: &Vec3<T>) -> InnerMax<T> {
    let sum = real3::add(r1, r2);
    let diff = real3::sub(r1, r2);
    let z = [T::zero(), T::zero(), T::one()];
    InnerMax {
        value: real3::norm(&sum) + real3::norm(&diff),
        bob_1: real3::normalized(&sum).unwrap_or(z),
        bob_2: real3::normalized(&diff).unwrap_or(z),
    }
}

/// Exact maximum of the expression over both Bob directions.
///
/// `x1` and `x2` are the qubit-2 contractions; only their Pauli components are used.
pub fn inner_max_over_bob<T: Real>(d: &DensityOperator<T>, x1: &ComplexMatrix<T>, x2: &ComplexMatrix<T>) -> InnerMax<T> {
    let c = correlation_matrix(d);
    let (x01, v1) = pauli_decompose(x1);
    let (x02, v2) = pauli_decompose(x2);
    inner_max_from_rows(&bob_correlations(&c, x01, &v1), &bob_correlations(&c, x02, &v2))
}

/// `√2 |T_xx + T_yy|`, reached with `X₁ = σx`, `X₂ = σy`.
pub fn tau_lower_bound<T: Real>(d: &DensityOperator<T>) -> T {
    let t = correlation_matrix(d).t;
    T::SQRT_2() * (t[0][0] + t[1][1]).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck<T> {
    pub f_st: T,
    /// `√2 |T_zz + 6 F_st − 3|`, which equals [`tau_lower_bound`].
    pub bound_value: T,
    /// `F_st > 2/3 + √2/6`, which forces `τ > 2`.
    pub implies_violation: bool,
}

pub fn threshold_check<T: Real>(d: &DensityOperator<T>) -> ThresholdCheck<T> {
    let f_st = fidelity_standard_closed(d);
    let tzz = correlation_matrix(d).t[2][2];
    ThresholdCheck {
        f_st,
        bound_value: T::SQRT_2() * (tzz + T::lit(6.0) * f_st - T::lit(3.0)).abs(),
        implies_violation: f_st > fidelity_threshold(),
    }
}
