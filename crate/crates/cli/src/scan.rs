//! Grid scans over the `D_{λ,α}` family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use telebell::bellchsh::beta_max;
use telebell::protocol::{classical_fidelity, fidelity_standard_closed};
use telebell::states::d_lambda_alpha;
use telebell::telebell::{tau_max, ConditionFlags, OptimizerConfig};

use crate::{format_float, CliError, VIOLATION_TOL};

pub const CSV_HEADER: &str =
    "lambda,alpha,beta,tau_raw,f_st,bell_violating,tele_violating,nonclassical_fidelity,in_paper_region";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub tau_raw: f64,
    pub f_st: f64,
    pub bell_violating: bool,
    pub tele_violating: bool,
    pub nonclassical_fidelity: bool,
    pub in_paper_region: bool,
}

impl ScanRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            format_float(self.lambda),
            format_float(self.alpha),
            format_float(self.beta),
            format_float(self.tau_raw),
            format_float(self.f_st),
            self.bell_violating,
            self.tele_violating,
            self.nonclassical_fidelity,
            self.in_paper_region
        )
    }
}

/// Parses `start:stop:step` into the points `start + k·step ≤ stop`, all in `[0, 1]`.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::BadRange(text.to_string());
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    let in_unit = |x: f64| (0.0..=1.0).contains(&x);
    if !(step > 0.0 && in_unit(start) && in_unit(stop) && start <= stop) {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| (start + k as f64 * step).min(1.0)).collect())
}

pub fn scan_point(lambda: f64, alpha: f64, cfg: &OptimizerConfig) -> Result<ScanRecord, CliError> {
    let d = d_lambda_alpha(lambda, alpha)?;
    let beta = beta_max(&d);
    let tau_raw = tau_max(&d, cfg).tau_raw;
    let f_st = fidelity_standard_closed(&d);
    Ok(ScanRecord {
        lambda,
        alpha,
        beta,
        tau_raw,
        f_st,
        bell_violating: beta > 2.0 + VIOLATION_TOL,
        tele_violating: tau_raw > 2.0 + VIOLATION_TOL,
        nonclassical_fidelity: f_st > classical_fidelity::<f64>() + VIOLATION_TOL,
        in_paper_region: ConditionFlags::evaluate(lambda, alpha).in_paper_region(),
    })
}

/// All grid points, λ-major, in grid order whatever the completion order.
pub fn scan(lambdas: &[f64], alphas: &[f64], cfg: &OptimizerConfig) -> Result<Vec<ScanRecord>, CliError> {
    let points: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| alphas.iter().map(move |&a| (l, a))).collect();
    points.par_iter().map(|&(l, a)| scan_point(l, a, cfg)).collect()
}

pub fn to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}
