//! Verification suites run by `telebell verify`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use clap::ValueEnum;
use rand::Rng;
use telebell::bellchsh::beta_max;
use telebell::protocol::{
    fidelity_average, fidelity_for_state, fidelity_rotation_form, fidelity_standard_closed, fidelity_threshold,
    Quadrature, RotationTriple, Strategy,
};
use telebell::states::{
    correlation_matrix, d_lambda_alpha, psi_alpha, random_density, random_density_with, random_pure_qubit,
    seeded_rng, werner_state, BellState, DensityOperator,
};
use telebell::telebell::{
    condition_class1, condition_class23, tau_max, tele_value, AssignmentClass, ConditionFlags, OptimizerConfig,
    TeleSettings,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PaperNumbers,
    BetaGeTau,
    Threshold,
    ClassBounds,
    Protocol,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

fn line(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine { name: name.into(), passed, detail: detail.into() }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> CheckLine {
    line(name, (got - want).abs() <= tol, format!("{got:.12} (expected {want:.12} within {tol:e})"))
}

fn at_most(name: &str, got: f64, bound: f64) -> CheckLine {
    line(name, got <= bound, format!("{got:.12} (bound {bound})"))
}

pub fn run_suite(suite: Suite, seed: u64, trials: Option<usize>) -> Vec<CheckLine> {
    let cfg = OptimizerConfig { seed, ..OptimizerConfig::default() };
    match suite {
        Suite::PaperNumbers => paper_numbers(&cfg),
        Suite::BetaGeTau => beta_ge_tau(&cfg, seed, trials.unwrap_or(200)),
        Suite::Threshold => threshold(&cfg, seed, trials.unwrap_or(50)),
        Suite::ClassBounds => class_bounds(&cfg),
        Suite::Protocol => protocol(seed, trials.unwrap_or(50)),
    }
}

fn paper_numbers(cfg: &OptimizerConfig) -> Vec<CheckLine> {
    let phi_plus = BellState::PhiPlus.density::<f64>();
    let w = werner_state::<f64>();
    let (wl, wa) = ((3.0f64 / 5.0).sqrt(), 3.0f64.sqrt() / 2.0);
    let witness = d_lambda_alpha(wl, wa).expect("witness parameters are in range");
    let mut out = vec![
        close("zukowski tele_value on Phi+", tele_value(&phi_plus, &TeleSettings::zukowski()), 2.0 * SQRT_2, 1e-9),
        close("tau(Phi+)", tau_max(&phi_plus, cfg).tau_raw, 2.0 * SQRT_2, 1e-4),
    ];
    for k in [0, 3, 5, 7, 10] {
        let alpha = k as f64 / 10.0;
        let d = DensityOperator::from_pure(&psi_alpha(alpha).expect("alpha in range")).expect("pure state");
        let want = 2.0 * (1.0 + 4.0 * alpha * alpha * (1.0 - alpha * alpha)).sqrt();
        out.push(close(&format!("beta(psi_{alpha})"), beta_max(&d), want, 1e-9));
    }
    out.extend([
        close("beta(werner)", beta_max(&w), 2.0, 1e-9),
        at_most("tau(werner)", tau_max(&w, cfg).tau_raw, 2.0 + 1e-6),
        close("F_st(werner)", fidelity_standard_closed(&w), 2.0 / 3.0 * (1.0 + (3.0 * SQRT_2 - 2.0) / 8.0), 1e-12),
        close("beta(witness)", beta_max(&witness), 2.0 * (21.0f64 / 20.0).sqrt(), 1e-9),
        at_most("tau(witness)", tau_max(&witness, cfg).tau_raw, 2.0 + 1e-6),
        line(
            "witness inside the region",
            ConditionFlags::evaluate(wl, wa).in_paper_region(),
            format!("{:?}", ConditionFlags::evaluate(wl, wa)),
        ),
        line(
            "(1, 1/sqrt2) outside the region",
            !ConditionFlags::evaluate(1.0, FRAC_1_SQRT_2).in_paper_region(),
            format!("{:?}", ConditionFlags::evaluate(1.0, FRAC_1_SQRT_2)),
        ),
        close("fidelity threshold", fidelity_threshold(), 2.0 / 3.0 * (1.0 + 1.0 / (2.0 * SQRT_2)), 1e-15),
    ]);
    out
}

fn random_channel(seed: u64, k: usize) -> DensityOperator<f64> {
    random_density(seed.wrapping_mul(1_000_003).wrapping_add(k as u64), 1 + k % 4).expect("rank in 1..=4")
}

fn beta_ge_tau(cfg: &OptimizerConfig, seed: u64, trials: usize) -> Vec<CheckLine> {
    (0..trials)
        .map(|k| {
            let d = random_channel(seed, k);
            let (beta, tau) = (beta_max(&d), tau_max(&d, cfg).tau_raw);
            line(format!("trial {k}"), beta >= tau - 1e-6, format!("beta {beta:.9}, tau {tau:.9}"))
        })
        .collect()
}

fn threshold(cfg: &OptimizerConfig, seed: u64, trials: usize) -> Vec<CheckLine> {
    let mut rng = seeded_rng(seed);
    let singlet = BellState::PsiMinus.density::<f64>();
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let rank = rng.random_range(1..=4);
        let noise = random_density_with::<f64, _>(&mut rng, rank).expect("rank in 1..=4");
        let d = DensityOperator::mix(1.0 - rng.random_range(0.0..0.15), &singlet, &noise).expect("weight in range");
        let f = fidelity_standard_closed(&d);
        if f <= fidelity_threshold() {
            continue;
        }
        let tzz = correlation_matrix(&d).t[2][2];
        let bound = SQRT_2 * (tzz + 6.0 * f - 3.0).abs();
        let tau = tau_max(&d, cfg).tau_raw;
        out.push(line(
            format!("trial {}", out.len()),
            tau > 2.0 && tau >= bound - 1e-6,
            format!("F_st {f:.6}, tau {tau:.9}, bound {bound:.9}"),
        ));
    }
    out
}

fn class_bounds(cfg: &OptimizerConfig) -> Vec<CheckLine> {
    let mut out = Vec::new();
    for i in 0..=20 {
        for j in 0..=20 {
            let (lambda, alpha) = (i as f64 / 20.0, j as f64 / 20.0);
            let (c1, c23) = (condition_class1(lambda, alpha), condition_class23(lambda, alpha));
            if !(c1 || c23) {
                continue;
            }
            let r = tau_max(&d_lambda_alpha(lambda, alpha).expect("grid in range"), cfg);
            let mut checked = Vec::new();
            if c1 {
                checked.push(AssignmentClass::I);
            }
            if c23 {
                checked.extend([AssignmentClass::II, AssignmentClass::III]);
            }
            let worst = checked.iter().map(|c| r.per_class_max[c]).fold(f64::NEG_INFINITY, f64::max);
            let names: Vec<String> = checked.iter().map(|c| c.to_string()).collect();
            out.push(line(
                format!("({lambda:.2}, {alpha:.2})"),
                worst <= 2.0 + 1e-6,
                format!("classes {}: max {worst:.9}", names.join("/")),
            ));
        }
    }
    out
}

fn protocol(seed: u64, trials: usize) -> Vec<CheckLine> {
    let mut rng = seeded_rng(seed);
    let s = Strategy::standard();
    let singlet = BellState::PsiMinus.density::<f64>();
    let worst_singlet = (0..trials)
        .map(|_| (fidelity_for_state(&random_pure_qubit(&mut rng), &singlet, &s) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut worst_quad: f64 = 0.0;
    let mut worst_rot: f64 = 0.0;
    for k in 0..trials {
        let d = random_channel(seed ^ 0x5eed, k);
        let closed = fidelity_standard_closed(&d);
        worst_rot = worst_rot.max((fidelity_rotation_form(&d, &RotationTriple::standard()) - closed).abs());
        if k < 10 {
            worst_quad = worst_quad.max((fidelity_average(&d, &s, &Quadrature::default()) - closed).abs());
        }
    }
    let mixed = fidelity_standard_closed(&DensityOperator::<f64>::maximally_mixed());
    vec![
        line("singlet fidelity", worst_singlet <= 1e-12, format!("max |F - 1| = {worst_singlet:.1e} over {trials} states")),
        line("rotation form = closed form", worst_rot <= 1e-12, format!("max diff {worst_rot:.1e} over {trials} channels")),
        line("quadrature = closed form", worst_quad <= 2e-3, format!("max diff {worst_quad:.1e} over {} channels", trials.min(10))),
        line("maximally mixed channel", mixed == 0.5, format!("{mixed}")),
    ]
}
