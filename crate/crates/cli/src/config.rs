//! Flag validation and the resolved configuration echoed in every report.

use std::path::PathBuf;

use nogo_core::{
    build_counterexample, validate_weights, CounterexampleParams64, PhasePolicy, SuccessPolicy, SuperposerConfig64, C64,
};
use serde::Serialize;

use crate::args::{Geometry, PhasePolicyKind, Policies, SuccessPolicyKind, Weights};
use crate::error::{CliError, CliResult};

/// Everything needed to reproduce a run. Fields a command does not use are
/// left out of the serialized form.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<PolarConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<PolarConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_policy: Option<PhaseConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_policy: Option<SuccessConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<usize>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    pub deterministic: bool,
}

/// Complex weight given as modulus and phase.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolarConfig {
    pub modulus: f64,
    pub arg: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseConfig {
    pub name: &'static str,
    pub theta: f64,
    /// Per-input overrides; `null` means `theta`.
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub theta3: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuccessConfig {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

pub fn finite(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("--{name} must be finite, got {x}")))
    }
}

/// Relative tolerances live strictly inside (0, 1).
pub fn tolerance(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(CliError::Config(format!("--{name} must lie in (0, 1), got {x}")))
    }
}

pub fn grid_step(x: f64) -> CliResult<f64> {
    if x > 0.0 && x <= 0.1 {
        Ok(x)
    } else {
        Err(CliError::Config(format!(
            "--grid-step must lie in (0, 0.1] radians, got {x}"
        )))
    }
}

pub fn params(g: &Geometry, cfg: &mut RunConfig) -> CliResult<CounterexampleParams64> {
    let a = finite("a", g.a)?;
    let b = finite("b", g.b)?;
    cfg.dim = Some(g.dim);
    cfg.a = Some(a);
    cfg.b = Some(b);
    CounterexampleParams64::standard(g.dim, a, b).map_err(CliError::config)
}

pub fn weights(w: &Weights, cfg: &mut RunConfig) -> CliResult<(C64, C64)> {
    let alpha = PolarConfig {
        modulus: finite("alpha-mod", w.alpha_mod)?,
        arg: finite("alpha-arg", w.alpha_arg)?,
    };
    let beta = PolarConfig {
        modulus: finite("beta-mod", w.beta_mod)?,
        arg: finite("beta-arg", w.beta_arg)?,
    };
    for (name, m) in [("alpha-mod", alpha.modulus), ("beta-mod", beta.modulus)] {
        if m <= 0.0 {
            return Err(CliError::Config(format!("--{name} must be positive, got {m}")));
        }
    }
    cfg.alpha = Some(alpha);
    cfg.beta = Some(beta);
    let (a, b) = (
        C64::from_polar(alpha.modulus, alpha.arg),
        C64::from_polar(beta.modulus, beta.arg),
    );
    validate_weights(a, b).map_err(CliError::config)?;
    Ok((a, b))
}

pub fn superposer(
    pol: &Policies,
    (alpha, beta): (C64, C64),
    params: &CounterexampleParams64,
    cfg: &mut RunConfig,
) -> CliResult<SuperposerConfig64> {
    let theta = finite("theta", pol.theta)?;
    let pinned = [pol.theta1, pol.theta2, pol.theta3];
    for (k, t) in pinned.iter().enumerate() {
        if let Some(t) = t {
            finite(&format!("theta{}", k + 1), *t)?;
        }
    }
    let any_pinned = pinned.iter().any(Option::is_some);
    let phase = match pol.phase_policy {
        PhasePolicyKind::Constant if any_pinned => {
            let inputs = build_counterexample(params).map_err(CliError::config)?;
            let thetas: Vec<f64> = pinned.iter().map(|t| t.unwrap_or(theta)).collect();
            PhasePolicy::lookup(inputs.members(), &thetas, theta).map_err(CliError::config)?
        }
        PhasePolicyKind::Constant => PhasePolicy::Constant(theta),
        _ if any_pinned => {
            return Err(CliError::Config(
                "--theta1/--theta2/--theta3 require --phase-policy constant".into(),
            ))
        }
        PhasePolicyKind::OverlapArg => PhasePolicy::OverlapArg,
        PhasePolicyKind::CanonicalHash => PhasePolicy::CanonicalHash,
    };
    let success = match (pol.success_policy, pol.success_p) {
        (SuccessPolicyKind::Constant, Some(p)) => SuccessPolicy::Constant(finite("success-p", p)?),
        (SuccessPolicyKind::Constant, None) => {
            return Err(CliError::Config(
                "--success-policy constant requires --success-p".into(),
            ))
        }
        (_, Some(_)) => {
            return Err(CliError::Config(
                "--success-p requires --success-policy constant".into(),
            ))
        }
        (SuccessPolicyKind::Always, None) => SuccessPolicy::Always,
        (SuccessPolicyKind::OverlapScaled, None) => SuccessPolicy::OverlapScaled,
    };
    cfg.phase_policy = Some(PhaseConfig {
        name: match pol.phase_policy {
            PhasePolicyKind::Constant => "constant",
            PhasePolicyKind::OverlapArg => "overlap-arg",
            PhasePolicyKind::CanonicalHash => "canonical-hash",
        },
        theta,
        theta1: pol.theta1,
        theta2: pol.theta2,
        theta3: pol.theta3,
    });
    cfg.success_policy = Some(SuccessConfig {
        name: success.name(),
        p: pol.success_p,
    });
    SuperposerConfig64::new(alpha, beta, phase, success).map_err(CliError::config)
}
