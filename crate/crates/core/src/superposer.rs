//! The hypothetical superposer oracle.
//!
//! Given unknown inputs `|ψ⟩` and `|φ⟩` the oracle emits the normalized state
//! `α|ψ⟩ + β e^{iθ}|φ⟩` with some nonzero probability. The relative phase `θ`
//! comes from a [`PhasePolicy`]; every policy reads its inputs through
//! [`canonicalize`], so it cannot see the global phase of either argument.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{cis, wrap_angle, Real};
use crate::states::{canonicalize, CanonicalForm, PureState};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Decimal digits kept when hashing canonical amplitudes.
pub const HASH_DIGITS: i32 = 12;

/// Rule choosing the relative phase `θ ∈ [0, 2π)` for an input pair.
#[derive(Debug, Clone, PartialEq)]
pub enum PhasePolicy<T> {
    /// Same `θ` for every pair.
    Constant(T),
    /// `θ = arg⟨canonical(ψ)|canonical(φ)⟩`, or 0 when the overlap modulus is
    /// below the pivot floor.
    OverlapArg,
    /// `θ = 2π · FNV-1a(rounded canonical amplitudes) / 2⁶⁴`.
    CanonicalHash,
    /// Per-state phases keyed by the canonical form of `ψ`; other inputs get
    /// `default`. Lets a caller pin the phases of a known family of inputs.
    Lookup {
        entries: Vec<(CanonicalForm<T>, T)>,
        default: T,
    },
}

impl<T: Real> PhasePolicy<T> {
    /// Builds a lookup policy assigning `thetas[k]` to `states[k]`.
    pub fn lookup(states: &[PureState<T>], thetas: &[T], default: T) -> Result<Self> {
        if states.len() != thetas.len() {
            return Err(Error::InvalidConfig(format!(
                "{} states but {} phases",
                states.len(),
                thetas.len()
            )));
        }
        for &t in thetas.iter().chain(std::iter::once(&default)) {
            if !t.is_finite() {
                return Err(Error::InvalidConfig("phase must be finite".into()));
            }
        }
        Ok(Self::Lookup {
            entries: states
                .iter()
                .zip(thetas)
                .map(|(s, &t)| (canonicalize(s), wrap_angle(t)))
                .collect(),
            default: wrap_angle(default),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant(_) => "constant",
            Self::OverlapArg => "overlap-arg",
            Self::CanonicalHash => "canonical-hash",
            Self::Lookup { .. } => "lookup",
        }
    }

    pub fn phase(&self, psi: &PureState<T>, phi: &PureState<T>) -> T {
        self.phase_canonical(&canonicalize(psi), &canonicalize(phi))
    }

    /// Phase as a function of canonical forms only.
    pub fn phase_canonical(&self, psi: &CanonicalForm<T>, phi: &CanonicalForm<T>) -> T {
        match self {
            Self::Constant(theta) => wrap_angle(*theta),
            Self::OverlapArg => {
                let overlap: Complex<T> = psi
                    .amplitudes()
                    .iter()
                    .zip(phi.amplitudes())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                if overlap.norm() < T::PIVOT_FLOOR {
                    T::zero()
                } else {
                    wrap_angle(overlap.arg())
                }
            }
            Self::CanonicalHash => {
                let h = fnv1a_canonical(psi, phi);
                // Top 53 bits keep the ratio strictly below one.
                let unit = (h >> 11) as f64 / (1u64 << 53) as f64;
                wrap_angle(T::lit(unit * std::f64::consts::TAU))
            }
            Self::Lookup { entries, default } => entries
                .iter()
                .find(|(key, _)| {
                    key.amplitudes().len() == psi.amplitudes().len() && key.max_deviation(psi) <= T::ORTHO_TOL
                })
                .map_or(*default, |(_, t)| *t),
        }
    }
}

fn fnv1a_canonical<T: Real>(psi: &CanonicalForm<T>, phi: &CanonicalForm<T>) -> u64 {
    let scale = 10f64.powi(HASH_DIGITS);
    let mut h = FNV_OFFSET;
    for z in psi.amplitudes().iter().chain(phi.amplitudes()) {
        for part in [z.re, z.im] {
            // Integer rounding folds -0.0 and 0.0 together.
            let q = (part.to_f64_lossy() * scale).round() as i64;
            for byte in q.to_le_bytes() {
                h ^= u64::from(byte);
                h = h.wrapping_mul(FNV_PRIME);
            }
        }
    }
    h
}

/// Rule for the probability with which the oracle succeeds.
#[derive(Debug, Clone, PartialEq)]
pub enum SuccessPolicy<T> {
    Always,
    Constant(T),
    /// `p = (1 + |⟨ψ|φ⟩|²) / 2`.
    OverlapScaled,
}

impl<T: Real> SuccessPolicy<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Always => "always",
            Self::Constant(_) => "constant",
            Self::OverlapScaled => "overlap-scaled",
        }
    }

    pub fn probability(&self, psi: &PureState<T>, phi: &PureState<T>) -> T {
        match self {
            Self::Always => T::one(),
            Self::Constant(p) => *p,
            Self::OverlapScaled => ((T::one() + psi.fidelity(phi)) * T::lit(0.5)).min(T::one()),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Self::Constant(p) = self {
            if !(*p > T::zero() && *p <= T::one()) {
                return Err(Error::InvalidConfig(format!("success probability {p} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

/// Weights and policies defining one oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperposerConfig<T> {
    alpha: Complex<T>,
    beta: Complex<T>,
    phase_policy: PhasePolicy<T>,
    success_policy: SuccessPolicy<T>,
}

impl<T: Real> SuperposerConfig<T> {
    pub fn new(
        alpha: Complex<T>,
        beta: Complex<T>,
        phase_policy: PhasePolicy<T>,
        success_policy: SuccessPolicy<T>,
    ) -> Result<Self> {
        validate_weights(alpha, beta)?;
        success_policy.validate()?;
        if let PhasePolicy::Constant(t) = &phase_policy {
            if !t.is_finite() {
                return Err(Error::InvalidConfig("phase must be finite".into()));
            }
        }
        Ok(Self {
            alpha,
            beta,
            phase_policy,
            success_policy,
        })
    }

    /// Equal real weights `1/√2`, phase `θ`, always succeeds.
    pub fn balanced(theta: T) -> Self {
        let w = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        Self {
            alpha: w,
            beta: w,
            phase_policy: PhasePolicy::Constant(theta),
            success_policy: SuccessPolicy::Always,
        }
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn beta(&self) -> Complex<T> {
        self.beta
    }

    pub fn phase_policy(&self) -> &PhasePolicy<T> {
        &self.phase_policy
    }

    pub fn success_policy(&self) -> &SuccessPolicy<T> {
        &self.success_policy
    }

    pub fn with_phase_policy(mut self, policy: PhasePolicy<T>) -> Self {
        self.phase_policy = policy;
        self
    }

    pub fn with_success_policy(mut self, policy: SuccessPolicy<T>) -> Result<Self> {
        policy.validate()?;
        self.success_policy = policy;
        Ok(self)
    }
}

/// Checks `α, β ≠ 0` and `|α|² + |β|² = 1`.
pub fn validate_weights<T: Real>(alpha: Complex<T>, beta: Complex<T>) -> Result<()> {
    if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
        return Err(Error::InvalidConfig("weights must be finite".into()));
    }
    if alpha.norm() <= T::zero() || beta.norm() <= T::zero() {
        return Err(Error::InvalidConfig("weights alpha and beta must be nonzero".into()));
    }
    let total = alpha.norm_sqr() + beta.norm_sqr();
    if (total - T::one()).abs() > T::UNIT_NORM_TOL {
        return Err(Error::InvalidConfig(format!(
            "|alpha|^2 + |beta|^2 must equal 1, got {total}"
        )));
    }
    Ok(())
}

/// `normalize(α ψ + β e^{iθ} φ)` for an explicit phase.
pub fn superpose_with_phase<T: Real>(
    alpha: Complex<T>,
    beta: Complex<T>,
    theta: T,
    psi: &PureState<T>,
    phi: &PureState<T>,
) -> Result<PureState<T>> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            found: phi.dim(),
        });
    }
    let b = beta * cis(theta);
    let v = psi
        .amplitudes()
        .iter()
        .zip(phi.amplitudes())
        .map(|(x, y)| alpha * x + b * y)
        .collect();
    PureState::normalize(v).map_err(|e| match e {
        Error::NullVector => Error::NullSuperposition,
        other => other,
    })
}

/// Oracle output assuming it succeeds. Inputs are replaced by their canonical
/// forms first, so the output ray depends only on the input rays.
pub fn superpose_deterministic<T: Real>(
    cfg: &SuperposerConfig<T>,
    psi: &PureState<T>,
    phi: &PureState<T>,
) -> Result<PureState<T>> {
    let (psi, phi) = (canonicalize(psi), canonicalize(phi));
    let theta = cfg.phase_policy.phase_canonical(&psi, &phi);
    superpose_with_phase(cfg.alpha, cfg.beta, theta, &psi.to_state(), &phi.to_state())
}

/// Result of one oracle invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperposeOutcome<T> {
    pub succeeded: bool,
    /// Present iff `succeeded`.
    pub state: Option<PureState<T>>,
    pub theta_used: T,
    pub probability: T,
}

/// One probabilistic oracle call. Consumes exactly one uniform draw.
pub fn superpose<T: Real, R: Rng + ?Sized>(
    cfg: &SuperposerConfig<T>,
    psi: &PureState<T>,
    phi: &PureState<T>,
    rng: &mut R,
) -> Result<SuperposeOutcome<T>> {
    let (cpsi, cphi) = (canonicalize(psi), canonicalize(phi));
    let theta = cfg.phase_policy.phase_canonical(&cpsi, &cphi);
    let state = superpose_with_phase(cfg.alpha, cfg.beta, theta, &cpsi.to_state(), &cphi.to_state())?;
    let probability = cfg.success_policy.probability(psi, phi);
    let draw: f64 = rng.gen();
    let succeeded = T::lit(draw) < probability;
    Ok(SuperposeOutcome {
        succeeded,
        state: succeeded.then_some(state),
        theta_used: theta,
        probability,
    })
}
