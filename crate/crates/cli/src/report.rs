//! Single-state analysis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use telebell::bellchsh::beta_max;
use telebell::protocol::{classify_fidelity, fidelity_threshold, FidelityClass};
use telebell::telebell::{
    tau_max, threshold_check, AssignmentClass, ConditionFlags, OptimizerConfig, TeleSettings,
};

use crate::{CliError, LoadedState, VIOLATION_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    /// Spec string, e.g. `werner` or `d_lambda_alpha 0.5 0.5`; `matrix` for explicit matrices.
    pub state: String,
    pub state_file: Option<String>,
    pub beta: f64,
    pub tau_raw: f64,
    pub tau_lower_bound: f64,
    pub f_st: f64,
    pub fidelity_class: FidelityClass,
    pub fidelity_threshold: f64,
    /// `√2 |T_zz + 6 F_st − 3|`.
    pub threshold_bound: f64,
    pub bell_violating: bool,
    pub tele_violating: bool,
    /// Only for `d_lambda_alpha` states.
    pub conditions: Option<ConditionFlags>,
    pub argmax: TeleSettings<f64>,
    pub argmax_class: AssignmentClass,
    pub per_class_max: BTreeMap<AssignmentClass, f64>,
    pub optimizer: OptimizerConfig,
    pub budget_exhausted: usize,
}

pub fn analyze(state: &LoadedState, cfg: &OptimizerConfig) -> Result<AnalysisReport, CliError> {
    let d = state.spec.to_density::<f64>()?;
    let beta = beta_max(&d);
    let tau = tau_max(&d, cfg);
    let tc = threshold_check(&d);
    Ok(AnalysisReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        state: state.spec.to_string(),
        state_file: state.source.clone(),
        beta,
        tau_raw: tau.tau_raw,
        tau_lower_bound: tau.lower_bound,
        f_st: tc.f_st,
        fidelity_class: classify_fidelity(tc.f_st),
        fidelity_threshold: fidelity_threshold(),
        threshold_bound: tc.bound_value,
        bell_violating: beta > 2.0 + VIOLATION_TOL,
        tele_violating: tau.tau_raw > 2.0 + VIOLATION_TOL,
        conditions: state
            .spec
            .family_parameters()
            .map(|(lambda, alpha)| ConditionFlags::evaluate(lambda, alpha)),
        argmax_class: tau.argmax.class(),
        argmax: tau.argmax,
        per_class_max: tau.per_class_max,
        optimizer: cfg.clone(),
        budget_exhausted: tau.budget_exhausted,
    })
}

pub fn to_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::load_state;

    #[test]
    fn json_roundtrip_is_lossless() {
        let r = analyze(&load_state("d_lambda_alpha 0.3 0.8").unwrap(), &OptimizerConfig::default()).unwrap();
        let back: AnalysisReport = serde_json::from_str(&to_json(&r)).unwrap();
        assert_eq!(back, r);
        assert!(r.conditions.is_some());
    }

    #[test]
    fn conditions_only_for_the_family() {
        let r = analyze(&load_state("werner").unwrap(), &OptimizerConfig::default()).unwrap();
        assert!(r.conditions.is_none());
        assert!(r.beta >= r.tau_raw - 1e-6);
    }
}
