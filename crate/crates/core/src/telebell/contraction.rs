//! Qubit-2 contractions `X` of a bivalent observable against the unknown state.
//!
//! `⟨v|X|w⟩ = ⟨φ|⟨v| A |φ⟩|w⟩` for all qubit-2 vectors `v, w`; `X` is
//! self-adjoint with `‖X‖ ≤ 1`.

use num_complex::Complex;

use super::assignment::{bivalent_observable, BivalentAssignment};
use crate::qlinalg::real3::{self, Vec3};
use crate::qlinalg::ComplexMatrix;
use crate::real::Real;
use crate::states::{identity2, sigma_dot, PureQubitState};

/// `(x₀, x)` with `X = x₀ I + x·σ` for the unknown state `sin θ|↑⟩ + cos θ e^{iϑ}|↓⟩`.
pub fn contraction_coefficients<T: Real>(s: &BivalentAssignment, theta: T, vartheta: T) -> (T, Vec3<T>) {
    let [a, b, c, d] = s.values::<T>();
    let quarter = T::lit(0.25);
    let (s2, c2) = (T::lit(2.0) * theta).sin_cos();
    let (sv, cv) = vartheta.sin_cos();
    (
        quarter * (a + b + c + d),
        [
            quarter * (a - b + c - d) * s2 * cv,
            quarter * (a + d - b - c) * s2 * sv,
            quarter * (a + b - c - d) * c2,
        ],
    )
}

/// The contraction in closed trigonometric form.
pub fn contraction_x<T: Real>(s: &BivalentAssignment, theta: T, vartheta: T) -> ComplexMatrix<T> {
    let (x0, x) = contraction_coefficients(s, theta, vartheta);
    &identity2::<T>().scale_real(x0) + &sigma_dot(&x)
}

/// The contraction from its defining matrix elements, `Σ_ij φ̄_i A_{(i,v),(j,w)} φ_j`.
pub fn contraction_x_oracle<T: Real>(s: &BivalentAssignment, phi: &PureQubitState<T>) -> ComplexMatrix<T> {
    let a = bivalent_observable::<T>(s);
    let amp = phi.amplitudes();
    ComplexMatrix::from_fn(2, 2, |v, w| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, ai) in amp.iter().enumerate() {
            for (j, aj) in amp.iter().enumerate() {
                acc += ai.conj() * a[(2 * i + v, 2 * j + w)] * aj;
            }
        }
        acc
    })
    .expect("2x2")
}

/// Operator norm of `x₀ I + x·σ`, i.e. `|x₀| + |x|`.
pub fn operator_norm<T: Real>(x0: T, x: &Vec3<T>) -> T {
    x0.abs() + real3::norm(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::hermitian_eigen;
    use crate::states::{pauli, random_pure_qubit, seeded_rng, unknown_state, Axis};
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const EPS: f64 = 1e-12;

    fn asg(s: [i8; 4]) -> BivalentAssignment {
        BivalentAssignment::from_signs(s).unwrap()
    }

    #[test]
    fn degenerate_contracts_to_identity() {
        let id = identity2::<f64>();
        let all_plus = asg([1, 1, 1, 1]);
        assert!(contraction_x(&all_plus, 0.3, 1.7).max_abs_diff(&id) < EPS);
        let mut rng = seeded_rng(1);
        let phi = random_pure_qubit::<f64, _>(&mut rng);
        assert!(contraction_x_oracle(&all_plus, &phi).max_abs_diff(&id) < EPS);
    }

    #[test]
    fn zukowski_first_on_first_state() {
        // a − b + c − d = −4 for the (−,+,−,+) labelling, hence −σx.
        let z = BivalentAssignment::zukowski_first();
        let minus_sx = pauli::<f64>(Axis::X).scale_real(-1.0);
        assert!(contraction_x(&z, FRAC_PI_4, 0.0).max_abs_diff(&minus_sx) < EPS);
        let phi1 = unknown_state(FRAC_PI_4, 0.0);
        assert!(contraction_x_oracle(&z, &phi1).max_abs_diff(&minus_sx) < EPS);
    }

    #[test]
    fn lower_bound_construction() {
        let first = asg([1, -1, 1, -1]);
        let second = asg([1, -1, -1, 1]);
        assert!(contraction_x(&first, FRAC_PI_4, 0.0).max_abs_diff(&pauli(Axis::X)) < EPS);
        assert!(contraction_x(&second, FRAC_PI_4, FRAC_PI_2).max_abs_diff(&pauli(Axis::Y)) < EPS);
        // At ϑ = π/4 the second contraction is only σy/√2.
        let shrunk = pauli::<f64>(Axis::Y).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        assert!(contraction_x(&second, FRAC_PI_4, FRAC_PI_4).max_abs_diff(&shrunk) < EPS);
    }

    #[test]
    fn trig_form_matches_oracle_everywhere() {
        let mut rng = seeded_rng(2);
        for s in BivalentAssignment::all() {
            for _ in 0..20 {
                let theta = rng.random_range(0.0..2.0 * PI);
                let vartheta = rng.random_range(0.0..2.0 * PI);
                let trig = contraction_x(&s, theta, vartheta);
                let oracle = contraction_x_oracle(&s, &unknown_state(theta, vartheta));
                assert!(trig.max_abs_diff(&oracle) < EPS);
            }
        }
    }

    #[test]
    fn contractions_are_self_adjoint_and_bounded() {
        let mut rng = seeded_rng(3);
        for k in 0..100 {
            let s = BivalentAssignment::from_index((k % 16) as u8);
            let phi = random_pure_qubit::<f64, _>(&mut rng);
            let x = contraction_x_oracle(&s, &phi);
            assert!(x.is_hermitian(EPS));
            let ev = hermitian_eigen(&x).unwrap().eigenvalues;
            assert!(ev.iter().all(|l| l.abs() <= 1.0 + EPS));
            let (x0, v) = crate::states::pauli_decompose(&x);
            assert!(operator_norm(x0, &v) <= 1.0 + EPS);
        }
    }

    #[test]
    fn negation_negates_contraction() {
        let s = asg([1, -1, -1, -1]);
        let x = contraction_x(&s, 0.4, 2.1);
        let y = contraction_x(&s.negated(), 0.4, 2.1);
        assert!((&x + &y).max_abs() < EPS);
    }
}
