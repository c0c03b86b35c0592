//! Unambiguous state discrimination and identify-then-prepare cloning.
//!
//! For linearly independent hypotheses `{ψⱼ}` the measurement element for
//! hypothesis `j` is `Eⱼ = s |ψ̃ⱼ⟩⟨ψ̃ⱼ|`, where `ψ̃ⱼ` is the reciprocal vector
//! orthogonal to every other hypothesis. A single scale
//! `s = 1 / λ_max(Σⱼ |ψ̃ⱼ⟩⟨ψ̃ⱼ|)` is the largest one for which the
//! inconclusive element `E₀ = P − Σⱼ Eⱼ` stays positive semidefinite, with `P`
//! the projector onto the span of the hypotheses.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigh, max_eigenvalue_hermitian, reciprocal_basis, ComplexMatrix};
use crate::scalar::Real;
use crate::states::{PureState, StateSet};

/// Slack allowed on PSD and completeness checks of a built measurement.
const POVM_TOL: f64 = 1e-10;

/// POVM restricted to the span of its hypotheses.
#[derive(Debug, Clone)]
pub struct UsdMeasurement<T> {
    hypotheses: StateSet<T>,
    reciprocal: StateSet<T>,
    scale: T,
    elements: Vec<ComplexMatrix<T>>,
    inconclusive: ComplexMatrix<T>,
    span_projector: ComplexMatrix<T>,
}

impl<T: Real> UsdMeasurement<T> {
    pub fn dim(&self) -> usize {
        self.hypotheses.dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `E₁ … Eₙ`, one per hypothesis.
    pub fn elements(&self) -> &[ComplexMatrix<T>] {
        &self.elements
    }

    /// `E₀`.
    pub fn inconclusive(&self) -> &ComplexMatrix<T> {
        &self.inconclusive
    }

    pub fn span_projector(&self) -> &ComplexMatrix<T> {
        &self.span_projector
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn hypotheses(&self) -> &StateSet<T> {
        &self.hypotheses
    }

    pub fn reciprocal_basis(&self) -> &StateSet<T> {
        &self.reciprocal
    }

    /// Outcome probabilities `Tr(E ρ)` for a pure state.
    pub fn born_distribution(&self, state: &PureState<T>) -> Result<BornDistribution<T>> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let amps = state.amplitudes();
        let conclusive = self
            .elements
            .iter()
            .map(|e| e.expectation(amps).map(|z| z.re))
            .collect::<Result<Vec<_>>>()?;
        let inconclusive = self.inconclusive.expectation(amps)?.re;
        Ok(BornDistribution {
            inconclusive,
            conclusive,
        })
    }
}

/// Builds the unambiguous discrimination measurement for independent states.
pub fn build_usd<T: Real>(hypotheses: &StateSet<T>) -> Result<UsdMeasurement<T>> {
    if hypotheses.len() > hypotheses.dim() {
        return Err(Error::LinearlyDependentInput);
    }
    let reciprocal = reciprocal_basis(hypotheses)?;
    let dim = hypotheses.dim();

    let projectors: Vec<ComplexMatrix<T>> = reciprocal.members().iter().map(|v| v.density_matrix()).collect();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for p in &projectors {
        total = total.add(p)?;
    }
    let lambda_max = max_eigenvalue_hermitian(&total)?;
    if lambda_max <= T::zero() {
        return Err(Error::Numerical("reciprocal frame has no positive eigenvalue".into()));
    }
    let scale = lambda_max.recip();
    let elements: Vec<ComplexMatrix<T>> = projectors.iter().map(|p| p.scale(scale)).collect();

    // P = A G⁻¹ Aᴴ with the hypotheses as the columns of A.
    let a = hypotheses.amplitude_matrix();
    let g_inv = hypotheses.gram().inverse()?;
    let span_projector = a.matmul(&g_inv)?.matmul(&a.adjoint())?;

    let inconclusive = span_projector.sub(&total.scale(scale))?;
    let floor = -T::lit(POVM_TOL);
    if eigh(&inconclusive)?.values.last().is_some_and(|&v| v < floor) {
        return Err(Error::Numerical(
            "inconclusive element is not positive semidefinite".into(),
        ));
    }

    Ok(UsdMeasurement {
        hypotheses: hypotheses.clone(),
        reciprocal,
        scale,
        elements,
        inconclusive,
        span_projector,
    })
}

/// `Tr(Eⱼ ρⱼ)` for each hypothesis.
pub fn success_probabilities<T: Real>(m: &UsdMeasurement<T>, hypotheses: &StateSet<T>) -> Result<Vec<T>> {
    let own = m.hypotheses();
    if own.len() != hypotheses.len() || own.dim() != hypotheses.dim() {
        return Err(Error::MeasurementMismatch);
    }
    if own
        .members()
        .iter()
        .zip(hypotheses.members())
        .any(|(a, b)| (T::one() - a.fidelity(b)).abs() > T::ORTHO_TOL)
    {
        return Err(Error::MeasurementMismatch);
    }
    hypotheses
        .members()
        .iter()
        .zip(m.elements())
        .map(|(psi, e)| e.expectation(psi.amplitudes()).map(|z| z.re.min(T::one())))
        .collect()
}

/// Measurement result label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Hypothesis index, zero-based.
    Conclusive(usize),
    Inconclusive,
}

/// Probabilities over `{E₀, E₁, …, Eₙ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BornDistribution<T> {
    pub inconclusive: T,
    pub conclusive: Vec<T>,
}

impl<T: Real> BornDistribution<T> {
    /// Clamps negatives and renormalizes; the raw total must be within
    /// `T::PROBABILITY_SUM_TOL` of one.
    pub fn sanitized(&self) -> Result<Self> {
        let clamp = |p: T| p.max(T::zero());
        let raw: T = self.inconclusive + self.conclusive.iter().copied().sum::<T>();
        if !raw.is_finite() || (raw - T::one()).abs() > T::PROBABILITY_SUM_TOL {
            return Err(Error::Numerical(format!("Born probabilities sum to {raw}")));
        }
        let inconclusive = clamp(self.inconclusive);
        let conclusive: Vec<T> = self.conclusive.iter().map(|&p| clamp(p)).collect();
        let total = inconclusive + conclusive.iter().copied().sum::<T>();
        Ok(Self {
            inconclusive: inconclusive / total,
            conclusive: conclusive.into_iter().map(|p| p / total).collect(),
        })
    }

    /// Inverse-CDF draw, ordered inconclusive first.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        let u = T::lit(rng.gen::<f64>());
        let mut cdf = self.inconclusive;
        if u < cdf {
            return Outcome::Inconclusive;
        }
        let mut last_positive = None;
        for (k, &p) in self.conclusive.iter().enumerate() {
            cdf += p;
            if p > T::zero() {
                last_positive = Some(k);
            }
            if u < cdf && p > T::zero() {
                return Outcome::Conclusive(k);
            }
        }
        // u landed in the rounding gap above the final cdf value.
        last_positive.map_or(Outcome::Inconclusive, Outcome::Conclusive)
    }
}

/// Tally of a batch of measurement trials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiscriminationOutcome {
    pub trials: u64,
    pub inconclusive: u64,
    /// Conclusive counts indexed by hypothesis.
    pub per_label_counts: Vec<u64>,
}

impl DiscriminationOutcome {
    pub fn new(labels: usize) -> Self {
        Self {
            trials: 0,
            inconclusive: 0,
            per_label_counts: vec![0; labels],
        }
    }

    pub fn record(&mut self, outcome: Outcome) {
        self.trials += 1;
        match outcome {
            Outcome::Inconclusive => self.inconclusive += 1,
            Outcome::Conclusive(k) => self.per_label_counts[k] += 1,
        }
    }

    /// Sums another tally into this one.
    pub fn merge(&mut self, other: &Self) {
        self.trials += other.trials;
        self.inconclusive += other.inconclusive;
        for (a, b) in self.per_label_counts.iter_mut().zip(&other.per_label_counts) {
            *a += b;
        }
    }

    pub fn conclusive(&self) -> u64 {
        self.per_label_counts.iter().sum()
    }

    /// Conclusive results naming a hypothesis other than `truth`.
    pub fn misidentifications(&self, truth: usize) -> u64 {
        self.per_label_counts
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != truth)
            .map(|(_, c)| c)
            .sum()
    }
}

/// Samples `trials` outcomes of `m` on `truth`.
pub fn simulate_usd<T: Real, R: Rng + ?Sized>(
    m: &UsdMeasurement<T>,
    truth: &PureState<T>,
    trials: u64,
    rng: &mut R,
) -> Result<DiscriminationOutcome> {
    let dist = m.born_distribution(truth)?.sanitized()?;
    let mut tally = DiscriminationOutcome::new(m.len());
    for _ in 0..trials {
        tally.record(dist.sample(rng));
    }
    Ok(tally)
}

/// Result of one probabilistic cloning attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneResult<T> {
    pub succeeded: bool,
    /// Present iff `succeeded`.
    pub copies: Option<(PureState<T>, PureState<T>)>,
    /// `|⟨copy|input⟩|²`; zero when the attempt failed.
    pub fidelity_to_input: T,
    pub outcome: Outcome,
}

/// Identify-then-prepare cloner for a fixed hypothesis set.
#[derive(Debug, Clone)]
pub struct Cloner<T> {
    measurement: UsdMeasurement<T>,
}

impl<T: Real> Cloner<T> {
    pub fn new(hypotheses: &StateSet<T>) -> Result<Self> {
        Ok(Self {
            measurement: build_usd(hypotheses)?,
        })
    }

    pub fn from_measurement(measurement: UsdMeasurement<T>) -> Self {
        Self { measurement }
    }

    pub fn measurement(&self) -> &UsdMeasurement<T> {
        &self.measurement
    }

    /// One USD trial on `input`; a conclusive label `k` yields two fresh
    /// copies of hypothesis `k`.
    pub fn clone_state<R: Rng + ?Sized>(&self, input: &PureState<T>, rng: &mut R) -> Result<CloneResult<T>> {
        let outcome = self.measurement.born_distribution(input)?.sanitized()?.sample(rng);
        Ok(match outcome {
            Outcome::Conclusive(k) => {
                let prepared = self.measurement.hypotheses().members()[k].clone();
                CloneResult {
                    succeeded: true,
                    fidelity_to_input: prepared.fidelity(input),
                    copies: Some((prepared.clone(), prepared)),
                    outcome,
                }
            }
            Outcome::Inconclusive => CloneResult {
                succeeded: false,
                copies: None,
                fidelity_to_input: T::zero(),
                outcome,
            },
        })
    }
}

/// Builds the USD measurement for `hypotheses` and makes one cloning attempt
/// on `truth`, which must be one of them.
pub fn probabilistic_clone<T: Real, R: Rng + ?Sized>(
    hypotheses: &StateSet<T>,
    truth: &PureState<T>,
    rng: &mut R,
) -> Result<CloneResult<T>> {
    let cloner = Cloner::new(hypotheses)?;
    if hypotheses.position_of(truth).is_none() {
        return Err(Error::InvalidParams("truth state is not one of the hypotheses".into()));
    }
    cloner.clone_state(truth, rng)
}

/// `Tr(E ρ)` for a pure state, exposed for report generation.
pub fn expectation<T: Real>(e: &ComplexMatrix<T>, state: &PureState<T>) -> Result<T> {
    e.expectation(state.amplitudes()).map(|z: Complex<T>| z.re)
}
