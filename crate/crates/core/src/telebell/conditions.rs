//! Closed-form tests on the `D_{λ,α}` family.
//!
//! Each condition comes in a floating-point form taking `(λ, α)` and an exact
//! form taking `(λ², α²)` over any ordered field, e.g. `Ratio<i64>`.

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Slack for the floating-point comparisons, so that points like the
/// witness, where a condition holds with equality, classify the same way as
/// in exact arithmetic.
pub const BOUNDARY_TOL: f64 = 1e-12;

fn p_of<T: Real>(alpha: T) -> T {
    let a2 = alpha * alpha;
    a2 * (T::one() - a2)
}

/// `λ √(1 + 4α²(1−α²)) > 1`: the channel violates Bell-CHSH.
pub fn condition_bell<T: Real>(lambda: T, alpha: T) -> bool {
    let lhs = lambda * (T::one() + T::lit(4.0) * p_of(alpha)).sqrt();
    lhs > T::one() + T::tol(BOUNDARY_TOL)
}

/// `λ √(2/3 (1 + 8α²(1−α²))) ≤ 1`: no Class I pair violates.
pub fn condition_class1<T: Real>(lambda: T, alpha: T) -> bool {
    let lhs = lambda * (T::lit(2.0) / T::lit(3.0) * (T::one() + T::lit(8.0) * p_of(alpha))).sqrt();
    lhs <= T::one() + T::tol(BOUNDARY_TOL)
}

/// `λ (√(2(1 − 2α²(1−α²))) + √(1 + 4α²(1−α²))) ≤ 2`: no Class II or III pair violates.
pub fn condition_class23<T: Real>(lambda: T, alpha: T) -> bool {
    let p = p_of(alpha);
    let two = T::lit(2.0);
    let lhs = lambda * ((two * (T::one() - two * p)).sqrt() + (T::one() + T::lit(4.0) * p).sqrt());
    lhs <= two + T::tol(BOUNDARY_TOL)
}

fn p_exact<F: Num + Clone>(alpha_sq: &F) -> F {
    alpha_sq.clone() * (F::one() - alpha_sq.clone())
}

fn small<F: Num>(n: u8) -> F {
    (0..n).fold(F::zero(), |acc, _| acc + F::one())
}

/// Exact [`condition_bell`] for `λ ≥ 0`: `λ²(1 + 4p) > 1`.
pub fn condition_bell_exact<F: Num + PartialOrd + Clone>(lambda_sq: &F, alpha_sq: &F) -> bool {
    lambda_sq.clone() * (F::one() + small::<F>(4) * p_exact(alpha_sq)) > F::one()
}

/// Exact [`condition_class1`] for `λ ≥ 0`: `2λ²(1 + 8p) ≤ 3`.
pub fn condition_class1_exact<F: Num + PartialOrd + Clone>(lambda_sq: &F, alpha_sq: &F) -> bool {
    small::<F>(2) * lambda_sq.clone() * (F::one() + small::<F>(8) * p_exact(alpha_sq)) <= small(3)
}

/// Exact [`condition_class23`] for `λ ≥ 0`.
///
/// With `u = 2(1−2p)` and `v = 1+4p` (so `u + v = 3`), `λ(√u + √v) ≤ 2` is
/// equivalent to `3λ² ≤ 4` together with `4λ⁴uv ≤ (4 − 3λ²)²`.
pub fn condition_class23_exact<F: Num + PartialOrd + Clone>(lambda_sq: &F, alpha_sq: &F) -> bool {
    let p = p_exact(alpha_sq);
    let u = small::<F>(2) * (F::one() - small::<F>(2) * p.clone());
    let v = F::one() + small::<F>(4) * p;
    let slack = small::<F>(4) - small::<F>(3) * lambda_sq.clone();
    if slack < F::zero() {
        return false;
    }
    small::<F>(4) * lambda_sq.clone() * lambda_sq.clone() * u * v <= slack.clone() * slack
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    pub bell: bool,
    pub class1: bool,
    pub class23: bool,
}

impl ConditionFlags {
    pub fn evaluate<T: Real>(lambda: T, alpha: T) -> Self {
        Self {
            bell: condition_bell(lambda, alpha),
            class1: condition_class1(lambda, alpha),
            class23: condition_class23(lambda, alpha),
        }
    }

    pub fn evaluate_exact<F: Num + PartialOrd + Clone>(lambda_sq: &F, alpha_sq: &F) -> Self {
        Self {
            bell: condition_bell_exact(lambda_sq, alpha_sq),
            class1: condition_class1_exact(lambda_sq, alpha_sq),
            class23: condition_class23_exact(lambda_sq, alpha_sq),
        }
    }

    /// Bell-violating yet no bivalent pair can violate the teleportation inequality.
    pub fn in_paper_region(&self) -> bool {
        self.bell && self.class1 && self.class23
    }
}
