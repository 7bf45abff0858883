//! Bell-CHSH maximum of a channel state.
//!
//! For spin settings `a, a'` on qubit 2 and `b, b'` on qubit 3,
//! `⟨B⟩ = a·T(b + b') + a'·T(b − b')`. The maximum over all settings is
//! `2√(u₁ + u₂)` with `u₁ ≥ u₂` the two largest eigenvalues of `TᵀT`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qlinalg::real3::{self, Vec3};
use crate::qlinalg::{hermitian_eigen, ComplexMatrix};
use crate::real::Real;
use crate::states::{correlation_matrix, spin_component, DensityOperator, StateError};

/// `a, a'` act on qubit 2, `b, b'` on qubit 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings<T> {
    pub a: Vec3<T>,
    pub a_prime: Vec3<T>,
    pub b: Vec3<T>,
    pub b_prime: Vec3<T>,
}

impl<T: Real> ChshSettings<T> {
    pub fn new(a: Vec3<T>, a_prime: Vec3<T>, b: Vec3<T>, b_prime: Vec3<T>) -> Result<Self, StateError> {
        for v in [&a, &a_prime, &b, &b_prime] {
            spin_component(v)?;
        }
        Ok(Self { a, a_prime, b, b_prime })
    }

    /// `A⊗(B + B') + A'⊗(B − B')` as a 4×4 operator.
    pub fn operator(&self) -> ComplexMatrix<T> {
        use crate::states::sigma_dot;
        let (a, ap) = (sigma_dot(&self.a), sigma_dot(&self.a_prime));
        let (b, bp) = (sigma_dot(&self.b), sigma_dot(&self.b_prime));
        let left = a.kron(&(&b + &bp)).expect("4x4");
        let right = ap.kron(&(&b - &bp)).expect("4x4");
        &left + &right
    }
}

/// Signed expectation of the CHSH operator.
pub fn chsh_value<T: Real>(d: &DensityOperator<T>, s: &ChshSettings<T>) -> T {
    let t = correlation_matrix(d).t;
    let sum = real3::add(&s.b, &s.b_prime);
    let diff = real3::sub(&s.b, &s.b_prime);
    real3::dot(&s.a, &real3::mat_vec(&t, &sum)) + real3::dot(&s.a_prime, &real3::mat_vec(&t, &diff))
}

fn gram_spectrum<T: Real>(d: &DensityOperator<T>) -> (Vec<T>, [Vec3<T>; 3]) {
    let c = correlation_matrix(d);
    let gram = ComplexMatrix::from_real_rows(&c.gram()).expect("3x3");
    let e = hermitian_eigen(&gram).expect("Gram matrix is symmetric");
    let vecs = [0, 1, 2].map(|k| {
        let v = e.eigenvector(k);
        // For a real symmetric input the eigenvector is real up to a phase.
        let pivot = (0..3)
            .max_by(|&i, &j| v[(i, 0)].norm().partial_cmp(&v[(j, 0)].norm()).unwrap())
            .unwrap();
        let phase = v[(pivot, 0)].conj() / v[(pivot, 0)].norm();
        [0, 1, 2].map(|i| (v[(i, 0)] * phase).re)
    });
    (e.eigenvalues, vecs)
}

/// `β(D) = 2√(u₁ + u₂)`. Not clamped to `[2, 2√2]`: weakly correlated states
/// give values below 2.
pub fn beta_max<T: Real>(d: &DensityOperator<T>) -> T {
    let (u, _) = gram_spectrum(d);
    T::lit(2.0) * (u[0].max(T::zero()) + u[1].max(T::zero())).sqrt()
}

/// Settings attaining [`beta_max`].
pub fn optimal_settings<T: Real>(d: &DensityOperator<T>) -> ChshSettings<T> {
    let t = correlation_matrix(d).t;
    let (u, e) = gram_spectrum(d);
    let (u1, u2) = (u[0].max(T::zero()), u[1].max(T::zero()));
    let gamma = if u1 > T::zero() { (u2 / u1).sqrt().atan() } else { T::zero() };
    let (e1, e2) = (e[0], e[1]);
    let b = real3::add(&real3::scale(&e1, gamma.cos()), &real3::scale(&e2, gamma.sin()));
    let b_prime = real3::sub(&real3::scale(&e1, gamma.cos()), &real3::scale(&e2, gamma.sin()));
    let fallback = |v: Vec3<T>, alt: Vec3<T>| real3::normalized(&v).unwrap_or(alt);
    let a = fallback(real3::mat_vec(&t, &real3::add(&b, &b_prime)), e1);
    let a_prime = fallback(real3::mat_vec(&t, &real3::sub(&b, &b_prime)), e2);
    ChshSettings { a, a_prime, b, b_prime }
}

/// Alice's side maximised exactly for fixed Bob directions: `|T(b+b')| + |T(b−b')|`.
fn best_alice<T: Real>(t: &[[T; 3]; 3], b: &Vec3<T>, bp: &Vec3<T>) -> T {
    real3::norm(&real3::mat_vec(t, &real3::add(b, bp))) + real3::norm(&real3::mat_vec(t, &real3::sub(b, bp)))
}

/// Brute-force maximum of `|⟨B⟩|`, independent of the eigenvalue formula.
///
/// Bob's two directions range over a `resolution × resolution` polar/azimuth
/// grid each (Alice's optimal response is exact by Cauchy–Schwarz), and the
/// best grid point is refined by coordinate hill-climbing on the four angles.
pub fn beta_oracle<T: Real>(d: &DensityOperator<T>, resolution: usize) -> T {
    let res = resolution.max(8);
    let t = correlation_matrix(d).t;
    let angles: Vec<(T, T)> = (0..res)
        .flat_map(|i| {
            (0..res).map(move |j| {
                let polar = T::PI() * (T::lit(i as f64) + T::lit(0.5)) / T::lit(res as f64);
                let azimuth = T::lit(2.0) * T::PI() * T::lit(j as f64) / T::lit(res as f64);
                (polar, azimuth)
            })
        })
        .collect();
    let dirs: Vec<Vec3<T>> = angles.iter().map(|&(p, a)| real3::spherical(p, a)).collect();

    // Deterministic: per-row maxima in parallel, then a sequential strict-max scan.
    let row_best: Vec<(T, usize, usize)> = (0..dirs.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (T::neg_infinity(), i, 0);
            for (j, bp) in dirs.iter().enumerate() {
                let v = best_alice(&t, &dirs[i], bp);
                if v > best.0 {
                    best = (v, i, j);
                }
            }
            best
        })
        .collect();
    let (mut value, bi, bj) = row_best
        .into_iter()
        .fold((T::neg_infinity(), 0, 0), |acc, r| if r.0 > acc.0 { r } else { acc });

    let mut x = [angles[bi].0, angles[bi].1, angles[bj].0, angles[bj].1];
    let eval = |x: &[T; 4]| best_alice(&t, &real3::spherical(x[0], x[1]), &real3::spherical(x[2], x[3]));
    let mut step = T::PI() / T::lit(res as f64);
    let min_step = T::tol(1e-10);
    while step > min_step {
        let mut improved = false;
        for k in 0..4 {
            for dir in [T::one(), -T::one()] {
                let mut trial = x;
                trial[k] += dir * step;
                let v = eval(&trial);
                if v > value {
                    value = v;
                    x = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= T::lit(0.5);
        }
    }
    value.max(T::zero())
}
