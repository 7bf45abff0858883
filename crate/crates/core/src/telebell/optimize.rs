//! Maximization of the teleportation expression over assignments and unknown states.
//!
//! Bob's directions are eliminated exactly by [`super::inner_max_from_rows`], so
//! each assignment pair leaves a four-angle problem. Every pair gets a grid
//! floor followed by multistart compass search.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assignment::{classify, AssignmentClass, BivalentAssignment, Sign};
use super::contraction::contraction_coefficients;
use super::{bob_correlations, inner_max_from_rows, tau_lower_bound, wrap_angle, TeleSettings};
use crate::qlinalg::real3::Vec3;
use crate::real::Real;
use crate::states::{correlation_matrix, seeded_rng, CorrelationMatrix, DensityOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Quasi-random starts per assignment pair, in addition to the grid best.
    pub starts: usize,
    /// Compass-search sweeps allowed per start.
    pub max_iterations: usize,
    /// A start has converged once its step falls below this.
    pub step_tolerance: f64,
    /// Points per angle in the floor grid.
    pub grid_floor: usize,
    pub seed: u64,
    /// Search one representative per class of sign-equivalent pairs.
    pub symmetry_reduction: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            max_iterations: 400,
            step_tolerance: 1e-7,
            grid_floor: 24,
            seed: 0,
            symmetry_reduction: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauResult<T> {
    /// Maximum found, not clamped to 2.
    pub tau_raw: T,
    pub argmax: TeleSettings<T>,
    /// [`tau_lower_bound`] of the same state.
    pub lower_bound: T,
    pub per_class_max: BTreeMap<AssignmentClass, T>,
    /// Starts stopped by `max_iterations` before reaching `step_tolerance`.
    pub budget_exhausted: usize,
}

/// Non-degenerate assignment pairs to search.
///
/// Negating either assignment negates its row of Bob correlations and
/// swapping the two swaps the rows; `|r₁+r₂| + |r₁−r₂|` is blind to both. The
/// reduced list keeps assignments with `a = +1` and unordered pairs (28); the
/// full list has all 196 ordered pairs.
pub fn assignment_pairs(reduced: bool) -> Vec<(BivalentAssignment, BivalentAssignment)> {
    let singles: Vec<BivalentAssignment> = BivalentAssignment::all()
        .into_iter()
        .filter(|s| !s.is_degenerate() && (!reduced || s.a == Sign::Plus))
        .collect();
    let mut pairs = Vec::new();
    for (i, &s1) in singles.iter().enumerate() {
        for &s2 in singles.iter().skip(if reduced { i } else { 0 }) {
            pairs.push((s1, s2));
        }
    }
    pairs
}

/// Angles `[θ₁, ϑ₁, θ₂, ϑ₂]`.
type Angles<T> = [T; 4];

struct PairProblem<'a, T> {
    corr: &'a CorrelationMatrix<T>,
    s1: BivalentAssignment,
    s2: BivalentAssignment,
}

impl<T: Real> PairProblem<'_, T> {
    fn row(&self, s: &BivalentAssignment, theta: T, vartheta: T) -> Vec3<T> {
        let (x0, x) = contraction_coefficients(s, theta, vartheta);
        bob_correlations(self.corr, x0, &x)
    }

    fn value(&self, a: &Angles<T>) -> T {
        let r1 = self.row(&self.s1, a[0], a[1]);
        let r2 = self.row(&self.s2, a[2], a[3]);
        inner_max_from_rows(&r1, &r2).value
    }
}

struct PairOutcome<T> {
    value: T,
    angles: Angles<T>,
    exhausted: usize,
}

fn grid_angles<T: Real>(res: usize) -> Vec<(T, T)> {
    let n = T::lit(res as f64);
    (0..res)
        .flat_map(|i| {
            (0..res).map(move |j| (T::PI() * T::lit(i as f64) / n, T::TAU() * T::lit(j as f64) / n))
        })
        .collect()
}

fn grid_floor<T: Real>(p: &PairProblem<'_, T>, grid: &[(T, T)]) -> (T, Angles<T>) {
    let rows1: Vec<Vec3<T>> = grid.iter().map(|&(t, v)| p.row(&p.s1, t, v)).collect();
    let rows2: Vec<Vec3<T>> = grid.iter().map(|&(t, v)| p.row(&p.s2, t, v)).collect();
    let mut best = (T::neg_infinity(), 0, 0);
    for (i, r1) in rows1.iter().enumerate() {
        for (j, r2) in rows2.iter().enumerate() {
            let v = inner_max_from_rows(r1, r2).value;
            if v > best.0 {
                best = (v, i, j);
            }
        }
    }
    let (g1, g2) = (grid[best.1], grid[best.2]);
    (best.0, [g1.0, g1.1, g2.0, g2.1])
}

/// Compass search; returns the final value, point, and whether the budget ran out.
fn compass_search<T: Real>(p: &PairProblem<'_, T>, start: Angles<T>, cfg: &OptimizerConfig) -> (T, Angles<T>, bool) {
    let mut x = start;
    let mut value = p.value(&x);
    let mut step = T::PI() / T::lit(8.0);
    let tol = T::tol(cfg.step_tolerance);
    for _ in 0..cfg.max_iterations {
        if step < tol {
            return (value, x, false);
        }
        let mut improved = false;
        for k in 0..4 {
            for dir in [T::one(), -T::one()] {
                let mut trial = x;
                trial[k] += dir * step;
                let v = p.value(&trial);
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
    (value, x, step >= tol)
}

/// Additive recurrence on the plastic-number generalization in four dimensions.
fn quasi_random_starts<T: Real>(count: usize, seed: u64) -> Vec<Angles<T>> {
    const G: f64 = 1.167_303_978_261_418_7;
    let alpha = [1.0 / G, 1.0 / (G * G), 1.0 / (G * G * G), 1.0 / (G * G * G * G)];
    let mut rng = seeded_rng(seed);
    let offset: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
    let scale = [std::f64::consts::PI, std::f64::consts::TAU, std::f64::consts::PI, std::f64::consts::TAU];
    (1..=count)
        .map(|n| std::array::from_fn(|k| T::lit((offset[k] + n as f64 * alpha[k]).fract() * scale[k])))
        .collect()
}

fn solve_pair<T: Real>(
    p: &PairProblem<'_, T>,
    grid: &[(T, T)],
    starts: &[Angles<T>],
    cfg: &OptimizerConfig,
) -> PairOutcome<T> {
    let (mut value, mut angles) = grid_floor(p, grid);
    let mut exhausted = 0;
    // The σx/σy construction behind the lower bound, for grids that miss it.
    let construction = [T::FRAC_PI_4(), T::zero(), T::FRAC_PI_4(), T::FRAC_PI_2()];
    let seeds = std::iter::once(angles).chain(std::iter::once(construction)).chain(starts.iter().copied());
    for start in seeds.collect::<Vec<_>>() {
        let (v, x, out) = compass_search(p, start, cfg);
        exhausted += usize::from(out);
        if v > value {
            value = v;
            angles = x;
        }
    }
    PairOutcome { value, angles, exhausted }
}

/// `τ(D)`: the largest value of the teleportation expression over bivalent
/// assignment pairs, unknown states, and Bob directions.
pub fn tau_max<T: Real>(d: &DensityOperator<T>, cfg: &OptimizerConfig) -> TauResult<T> {
    let corr = correlation_matrix(d);
    let pairs = assignment_pairs(cfg.symmetry_reduction);
    let grid = grid_angles::<T>(cfg.grid_floor.max(1));
    let starts = quasi_random_starts::<T>(cfg.starts, cfg.seed);

    let outcomes: Vec<PairOutcome<T>> = pairs
        .par_iter()
        .map(|&(s1, s2)| solve_pair(&PairProblem { corr: &corr, s1, s2 }, &grid, &starts, cfg))
        .collect();

    let mut per_class_max = BTreeMap::new();
    let mut best = 0;
    for (k, (o, pair)) in outcomes.iter().zip(&pairs).enumerate() {
        let entry = per_class_max.entry(classify(*pair)).or_insert(T::neg_infinity());
        if o.value > *entry {
            *entry = o.value;
        }
        if o.value > outcomes[best].value {
            best = k;
        }
    }

    let (s1, s2) = pairs[best];
    let a = outcomes[best].angles.map(wrap_angle);
    let p = PairProblem { corr: &corr, s1, s2 };
    let inner = inner_max_from_rows(&p.row(&s1, a[0], a[1]), &p.row(&s2, a[2], a[3]));
    let argmax = TeleSettings {
        assignment_1: s1,
        assignment_2: s2,
        theta_1: a[0],
        vartheta_1: a[1],
        theta_2: a[2],
        vartheta_2: a[3],
        bob_1: inner.bob_1,
        bob_2: inner.bob_2,
    };
    TauResult {
        tau_raw: outcomes[best].value,
        argmax,
        lower_bound: tau_lower_bound(d),
        per_class_max,
        budget_exhausted: outcomes.iter().map(|o| o.exhausted).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::telebell::{tele_value, tele_value_contracted};
    use crate::states::{random_density, BellState, DensityOperator};
    use std::f64::consts::SQRT_2;

    #[test]
    fn pair_counts() {
        assert_eq!(assignment_pairs(true).len(), 28);
        assert_eq!(assignment_pairs(false).len(), 196);
        assert!(assignment_pairs(false).iter().all(|&p| classify(p) != AssignmentClass::Degenerate));
    }

    #[test]
    fn reduced_pairs_cover_every_class() {
        let classes: Vec<_> = assignment_pairs(true).into_iter().map(classify).collect();
        for c in AssignmentClass::NON_DEGENERATE {
            assert!(classes.contains(&c));
        }
    }

    #[test]
    fn phi_plus_reaches_two_root_two() {
        let r = tau_max(&BellState::PhiPlus.density::<f64>(), &OptimizerConfig::default());
        assert!((r.tau_raw - 2.0 * SQRT_2).abs() < 1e-4);
    }

    #[test]
    fn argmax_reproduces_the_value() {
        let d = random_density::<f64>(77, 2).unwrap();
        let r = tau_max(&d, &OptimizerConfig::default());
        assert!((tele_value(&d, &r.argmax) - r.tau_raw).abs() < 1e-10);
        assert!((tele_value_contracted(&d, &r.argmax) - r.tau_raw).abs() < 1e-12);
        for a in [r.argmax.theta_1, r.argmax.vartheta_1, r.argmax.theta_2, r.argmax.vartheta_2] {
            assert!((0.0..std::f64::consts::TAU).contains(&a));
        }
        assert!(r.tau_raw >= r.lower_bound - 1e-6);
    }

    #[test]
    fn maximally_mixed_is_zero() {
        let r = tau_max(&DensityOperator::<f64>::maximally_mixed(), &OptimizerConfig::default());
        assert!(r.tau_raw.abs() < 1e-14);
    }

    #[test]
    fn deterministic_across_runs() {
        let d = random_density::<f64>(3, 3).unwrap();
        let cfg = OptimizerConfig { seed: 9, ..OptimizerConfig::default() };
        assert_eq!(tau_max(&d, &cfg), tau_max(&d, &cfg));
    }

    #[test]
    fn f32_tracks_f64() {
        let d64 = random_density::<f64>(4, 4).unwrap();
        let d32 = DensityOperator::<f32>::new(crate::qlinalg::ComplexMatrix::from_fn(4, 4, |i, j| {
            let z = d64.matrix()[(i, j)];
            num_complex::Complex::new(z.re as f32, z.im as f32)
        }).unwrap()).unwrap();
        let r64 = tau_max(&d64, &OptimizerConfig::default());
        let r32 = tau_max(&d32, &OptimizerConfig::default());
        assert!((r64.tau_raw - r32.tau_raw as f64).abs() < 1e-4);
    }
}
