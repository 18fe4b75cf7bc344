//! Timestep-dependent semantic weight schedule.
//!
//! Four closed-form weights over normalized denoising progress `p` in [0, 1]
//! (p = 0 at the noisiest step, p = 1 at the final step), plus a constant
//! temporal weight:
//!
//! ```text
//! lambda_id(p)   = exp(-alpha * p)
//! lambda_rel(p)  = exp(-(p - mu)^2 / (2 sigma^2))
//! lambda_attr(p) = 1 - exp(-beta * p)
//! lambda_neg(p)  = gamma * exp(-delta * p)
//! ```
//!
//! Identity and negative suppression dominate early steps, relations peak
//! mid-trajectory, attributes ramp toward the end.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the weight schedule plus the constant temporal weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleParams {
    pub alpha: f64,
    pub mu: f64,
    pub sigma: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub lambda_temp: f64,
}

impl Default for ScheduleParams {
    fn default() -> Self {
        Self {
            alpha: 4.0,
            mu: 0.5,
            sigma: 0.18,
            beta: 4.0,
            gamma: 1.2,
            delta: 5.0,
            lambda_temp: 0.5,
        }
    }
}

/// Weight vector at one denoising step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleWeights {
    pub lambda_id: f64,
    pub lambda_rel: f64,
    pub lambda_attr: f64,
    pub lambda_neg: f64,
    pub lambda_temp: f64,
}

impl ScheduleWeights {
    /// All four group weights pinned to 1.0 (the no-schedule ablation arm);
    /// the temporal weight keeps its configured constant.
    pub fn uniform(lambda_temp: f64) -> Self {
        Self {
            lambda_id: 1.0,
            lambda_rel: 1.0,
            lambda_attr: 1.0,
            lambda_neg: 1.0,
            lambda_temp,
        }
    }
}

/// One row of the tabulated schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub step: usize,
    pub progress: f64,
    pub weights: ScheduleWeights,
}

/// Names every violated invariant; empty means the parameters are valid.
pub fn validate_params(params: &ScheduleParams) -> Vec<String> {
    let mut violations = Vec::new();
    let finite = [
        ("alpha", params.alpha),
        ("mu", params.mu),
        ("sigma", params.sigma),
        ("beta", params.beta),
        ("gamma", params.gamma),
        ("delta", params.delta),
        ("lambda_temp", params.lambda_temp),
    ];
    for (name, value) in finite {
        if !value.is_finite() {
            violations.push(format!("{name}_nonfinite"));
        }
    }
    if params.sigma <= 0.0 {
        violations.push("sigma_nonpositive".to_string());
    }
    if params.gamma < 0.0 {
        violations.push("gamma_negative".to_string());
    }
    if params.lambda_temp < 0.0 {
        violations.push("lambda_temp_negative".to_string());
    }
    violations
}

/// Evaluates the weight vector at denoising progress `progress` in [0, 1].
pub fn weights_at(params: &ScheduleParams, progress: f64) -> Result<ScheduleWeights> {
    let violations = validate_params(params);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    if !progress.is_finite() || !(0.0..=1.0).contains(&progress) {
        return Err(Error::domain(format!(
            "progress must lie in [0, 1], got {progress}"
        )));
    }
    let p = progress;
    Ok(ScheduleWeights {
        lambda_id: (-params.alpha * p).exp(),
        lambda_rel: (-(p - params.mu).powi(2) / (2.0 * params.sigma * params.sigma)).exp(),
        lambda_attr: 1.0 - (-params.beta * p).exp(),
        lambda_neg: params.gamma * (-params.delta * p).exp(),
        lambda_temp: params.lambda_temp,
    })
}

/// Progress of step `i` out of `n_steps`: i/(n_steps-1), or 0 for a
/// single-step schedule.
pub fn step_progress(step: usize, n_steps: usize) -> f64 {
    if n_steps <= 1 {
        0.0
    } else {
        step as f64 / (n_steps - 1) as f64
    }
}

/// Tabulates the schedule over `n_steps` rows, progress 0 to 1 inclusive.
pub fn schedule_table(params: &ScheduleParams, n_steps: usize) -> Result<Vec<ScheduleRow>> {
    if n_steps == 0 {
        return Err(Error::domain("n_steps must be at least 1"));
    }
    (0..n_steps)
        .map(|i| {
            let progress = step_progress(i, n_steps);
            Ok(ScheduleRow {
                step: i,
                progress,
                weights: weights_at(params, progress)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> ScheduleParams {
        ScheduleParams::default()
    }

    #[test]
    fn endpoint_values_exact() {
        let w0 = weights_at(&defaults(), 0.0).unwrap();
        assert_eq!(w0.lambda_id, 1.0);
        assert_eq!(w0.lambda_attr, 0.0);
        assert_eq!(w0.lambda_neg, 1.2);
        assert_eq!(w0.lambda_temp, 0.5);
        // Gaussian peak at its mean.
        let wm = weights_at(&defaults(), 0.5).unwrap();
        assert_eq!(wm.lambda_rel, 1.0);
    }

    #[test]
    fn derived_values_direct_evaluation() {
        // Frozen by independent evaluation of the closed forms.
        let w0 = weights_at(&defaults(), 0.0).unwrap();
        assert!((w0.lambda_rel - 0.021109656453671053).abs() < 1e-15);
        let w1 = weights_at(&defaults(), 1.0).unwrap();
        assert!((w1.lambda_id - 0.01831563888873418).abs() < 1e-15);
        assert!((w1.lambda_attr - 0.9816843611112658).abs() < 1e-15);
        assert!((w1.lambda_neg - 0.00808553639890256).abs() < 1e-15);
    }

    #[test]
    fn progress_out_of_range_rejected() {
        assert!(weights_at(&defaults(), -0.1).is_err());
        assert!(weights_at(&defaults(), 1.1).is_err());
        assert!(weights_at(&defaults(), f64::NAN).is_err());
    }

    #[test]
    fn table_shapes_and_limits() {
        let one = schedule_table(&defaults(), 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].progress, 0.0);

        let two = schedule_table(&defaults(), 2).unwrap();
        assert_eq!(two[0].progress, 0.0);
        assert_eq!(two[1].progress, 1.0);

        assert!(schedule_table(&defaults(), 0).is_err());
    }

    #[test]
    fn table_rel_argmax_is_middle_row() {
        // Scan oracle: first strictly-greater row wins. Rows 24 and 25 tie
        // bit-exactly (|24/49 - 0.5| == |25/49 - 0.5| in f64), so the scan
        // lands on index 24, i.e. the 25th row.
        let table = schedule_table(&defaults(), 50).unwrap();
        let mut best = 0usize;
        for (i, row) in table.iter().enumerate() {
            if row.weights.lambda_rel > table[best].weights.lambda_rel {
                best = i;
            }
        }
        assert_eq!(best, 24);
        assert_eq!(
            table[24].weights.lambda_rel.to_bits(),
            table[25].weights.lambda_rel.to_bits()
        );
    }

    #[test]
    fn validate_names_each_violation() {
        assert!(validate_params(&defaults()).is_empty());
        let mut p = defaults();
        p.sigma = 0.0;
        assert_eq!(validate_params(&p), vec!["sigma_nonpositive"]);
        let mut p = defaults();
        p.gamma = -1.0;
        assert_eq!(validate_params(&p), vec!["gamma_negative"]);
        let mut p = defaults();
        p.alpha = f64::INFINITY;
        p.gamma = -1.0;
        assert_eq!(validate_params(&p), vec!["alpha_nonfinite", "gamma_negative"]);
    }

    #[test]
    fn monotonicity_over_grid() {
        // lambda_id and lambda_neg strictly decrease, lambda_attr strictly
        // increases, lambda_rel is unimodal with its peak at mu.
        let p = defaults();
        let n = 257;
        let mut prev = weights_at(&p, 0.0).unwrap();
        let mut rel_increasing = true;
        for i in 1..n {
            let x = i as f64 / (n - 1) as f64;
            let w = weights_at(&p, x).unwrap();
            assert!(w.lambda_id < prev.lambda_id);
            assert!(w.lambda_neg < prev.lambda_neg);
            assert!(w.lambda_attr > prev.lambda_attr);
            if w.lambda_rel < prev.lambda_rel {
                // once descending it must stay descending (unimodality)
                rel_increasing = false;
            } else {
                assert!(rel_increasing, "lambda_rel rose again after its peak");
            }
            for v in [w.lambda_id, w.lambda_rel, w.lambda_attr, w.lambda_neg, w.lambda_temp] {
                assert!(v.is_finite());
            }
            prev = w;
        }
    }
}
