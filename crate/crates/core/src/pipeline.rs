//! The impossibility argument as an executable pipeline.
//!
//! Three linearly dependent inputs `ψ, ψ⊥, aψ + bψ⊥` are each superposed with
//! a state `φ` orthogonal to both. A dependence `Σ xⱼ Ψⱼ = 0` among the outputs
//! forces `x₁ = −a x₃`, `x₂ = −b x₃` and `a + e^{iθ₂₁} b = e^{iθ₃₁}`. With real
//! nonzero `a, b` that last equation holds only for `θ₂₁ ∈ {π/2, 3π/2}`, so
//! for any other phases the outputs are independent and could be discriminated
//! unambiguously, which quantum mechanics forbids.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::discrimination::{build_usd, success_probabilities, Cloner, Outcome};
use crate::error::{Error, Result};
use crate::linalg::{eigh, numerical_rank, RankResult};
use crate::scalar::{cis, wrap_angle, Real};
use crate::states::{canonical_phase, canonicalize, inner, random_gaussian_vector, vector_norm, PureState, StateSet};
use crate::superposer::{superpose, superpose_with_phase, validate_weights, SuperposerConfig};

/// Smallest dimension that fits `ψ`, `ψ⊥` and an orthogonal `φ`.
pub const MIN_COUNTEREXAMPLE_DIM: usize = 3;

/// Human-readable form of the analytic degeneracy family.
pub const LOCUS_FAMILY: &str = "theta21 in {pi/2, 3pi/2}; a = cos(theta31), b = +/- sin(theta31)";

/// Inputs of the counterexample: real weights `a, b` and an orthonormal triple.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleParams<T> {
    a: T,
    b: T,
    psi: PureState<T>,
    psi_perp: PureState<T>,
    phi: PureState<T>,
}

impl<T: Real> CounterexampleParams<T> {
    pub fn new(a: T, b: T, psi: PureState<T>, psi_perp: PureState<T>, phi: PureState<T>) -> Result<Self> {
        validate_ab(a, b)?;
        let dim = psi.dim();
        if dim < MIN_COUNTEREXAMPLE_DIM {
            return Err(Error::InvalidParams(format!(
                "dimension must be at least {MIN_COUNTEREXAMPLE_DIM} (d >= 3), got {dim}"
            )));
        }
        if psi_perp.dim() != dim || phi.dim() != dim {
            return Err(Error::InvalidParams(
                "psi, psi_perp and phi must share a dimension".into(),
            ));
        }
        let pairs = [
            (&psi, &psi_perp, "psi, psi_perp"),
            (&psi, &phi, "psi, phi"),
            (&psi_perp, &phi, "psi_perp, phi"),
        ];
        for (x, y, name) in pairs {
            let overlap = x.inner(y).norm();
            if overlap > T::ORTHO_TOL {
                return Err(Error::InvalidParams(format!(
                    "{name} are not orthogonal (overlap {overlap})"
                )));
            }
        }
        Ok(Self {
            a,
            b,
            psi,
            psi_perp,
            phi,
        })
    }

    /// `ψ = e₁`, `ψ⊥ = e₂`, `φ = e₃` in dimension `dim`.
    pub fn standard(dim: usize, a: T, b: T) -> Result<Self> {
        if dim < MIN_COUNTEREXAMPLE_DIM {
            return Err(Error::InvalidParams(format!(
                "dimension must be at least {MIN_COUNTEREXAMPLE_DIM} (d >= 3), got {dim}"
            )));
        }
        Self::new(
            a,
            b,
            PureState::basis(dim, 0)?,
            PureState::basis(dim, 1)?,
            PureState::basis(dim, 2)?,
        )
    }

    /// Random orthonormal triple and random `(a, b)` on the unit circle, kept
    /// away from the axes so neither weight is close to zero.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        if dim < MIN_COUNTEREXAMPLE_DIM {
            return Err(Error::InvalidParams(format!(
                "dimension must be at least {MIN_COUNTEREXAMPLE_DIM} (d >= 3), got {dim}"
            )));
        }
        let triple = random_orthonormal(dim, 3, rng)?;
        let (a, b) = loop {
            let t = T::lit(rng.gen::<f64>() * std::f64::consts::TAU);
            let (s, c) = t.sin_cos();
            if s.abs() > T::lit(0.05) && c.abs() > T::lit(0.05) {
                break (c, s);
            }
        };
        let mut it = triple.into_iter();
        let (psi, psi_perp, phi) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        Self::new(a, b, psi, psi_perp, phi)
    }

    pub fn dim(&self) -> usize {
        self.psi.dim()
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn psi(&self) -> &PureState<T> {
        &self.psi
    }

    pub fn psi_perp(&self) -> &PureState<T> {
        &self.psi_perp
    }

    pub fn phi(&self) -> &PureState<T> {
        &self.phi
    }
}

fn validate_ab<T: Real>(a: T, b: T) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParams("a and b must be finite".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidParams("a and b must both be nonzero (a, b != 0)".into()));
    }
    let total = a * a + b * b;
    if (total - T::one()).abs() > T::UNIT_NORM_TOL {
        return Err(Error::InvalidParams(format!("a^2 + b^2 must equal 1, got {total}")));
    }
    Ok(())
}

/// Gram–Schmidt on Gaussian vectors.
fn random_orthonormal<T: Real, R: Rng + ?Sized>(dim: usize, count: usize, rng: &mut R) -> Result<Vec<PureState<T>>> {
    let mut basis: Vec<PureState<T>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<Complex<T>> = random_gaussian_vector(dim, rng);
        // Two passes keep the result orthogonal to working precision.
        for _ in 0..2 {
            for q in &basis {
                let proj = inner(q.amplitudes(), &v);
                for (x, y) in v.iter_mut().zip(q.amplitudes()) {
                    *x -= proj * y;
                }
            }
        }
        if vector_norm(&v) > T::lit(1e-3) {
            basis.push(PureState::normalize(v)?);
        }
    }
    Ok(basis)
}

/// `{ψ, ψ⊥, aψ + bψ⊥}`, linearly dependent by construction.
pub fn build_counterexample<T: Real>(p: &CounterexampleParams<T>) -> Result<StateSet<T>> {
    let third: Vec<Complex<T>> = p
        .psi
        .amplitudes()
        .iter()
        .zip(p.psi_perp.amplitudes())
        .map(|(x, y)| x.scale(p.a) + y.scale(p.b))
        .collect();
    StateSet::new(vec![p.psi.clone(), p.psi_perp.clone(), PureState::normalize(third)?])
}

/// Phases applied to the three inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTriple<T> {
    pub theta1: T,
    pub theta2: T,
    pub theta3: T,
}

impl<T: Real> PhaseTriple<T> {
    pub fn new(theta1: T, theta2: T, theta3: T) -> Self {
        Self {
            theta1: wrap_angle(theta1),
            theta2: wrap_angle(theta2),
            theta3: wrap_angle(theta3),
        }
    }

    pub fn theta21(&self) -> T {
        wrap_angle(self.theta2 - self.theta1)
    }

    pub fn theta31(&self) -> T {
        wrap_angle(self.theta3 - self.theta1)
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.theta1, self.theta2, self.theta3]
    }
}

/// `Ψⱼ = normalize(α ψⱼ + β e^{iθⱼ} φ)` with explicit phases.
pub fn superpose_set_with_phases<T: Real>(
    p: &CounterexampleParams<T>,
    alpha: Complex<T>,
    beta: Complex<T>,
    phases: &PhaseTriple<T>,
) -> Result<StateSet<T>> {
    validate_weights(alpha, beta)?;
    let inputs = build_counterexample(p)?;
    let outputs = inputs
        .members()
        .iter()
        .zip(phases.as_array())
        .map(|(psi, theta)| superpose_with_phase(alpha, beta, theta, psi, &p.phi))
        .collect::<Result<Vec<_>>>()?;
    StateSet::new(outputs)
}

/// Feeds each counterexample state with `φ` through the oracle. The returned
/// phases are the relative phases actually applied to the raw inputs.
pub fn apply_superposer_to_set<T: Real>(
    cfg: &SuperposerConfig<T>,
    p: &CounterexampleParams<T>,
) -> Result<(StateSet<T>, PhaseTriple<T>)> {
    let inputs = build_counterexample(p)?;
    let policy = cfg.phase_policy();
    let phi = canonicalize(&p.phi);
    let delta = canonical_phase(&p.phi);
    // The oracle mixes canonical forms; in the frame of the raw inputs that
    // shifts θⱼ by γⱼ − δ and leaves each output ray unchanged.
    let effective =
        |psi: &PureState<T>| policy.phase_canonical(&canonicalize(psi), &phi) + canonical_phase(psi) - delta;
    let m = inputs.members();
    let phases = PhaseTriple::new(effective(&m[0]), effective(&m[1]), effective(&m[2]));
    let outputs = superpose_set_with_phases(p, cfg.alpha(), cfg.beta(), &phases)?;
    Ok((outputs, phases))
}

/// Verdict on the linear independence of three states.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceCertificate<T> {
    pub independent: bool,
    /// Witness `(x₁, x₂, x₃)`, max modulus one, first maximal entry real
    /// positive. Present iff dependent.
    pub coefficients: Option<[Complex<T>; 3]>,
    /// `‖Σ xⱼ Ψⱼ‖` for the least-singular direction, scaled like the witness.
    pub residual_norm: T,
    /// Dependent verdict whose witness residual is within `T::RESIDUAL_TOL`.
    /// Inputs a few 1e-8 off the degeneracy locus are rank deficient at the
    /// Gram tolerance yet leave a larger residual; those report `false`.
    pub witness_verified: bool,
    pub gram_rank: RankResult<T>,
    pub gram_determinant: T,
}

/// Rank test on the Gram matrix plus an explicit dependence witness taken
/// from its smallest eigenvector.
pub fn certify_independence<T: Real>(outputs: &StateSet<T>) -> Result<DependenceCertificate<T>> {
    if outputs.len() != 3 {
        return Err(Error::WrongSetSize {
            expected: 3,
            found: outputs.len(),
        });
    }
    let g = outputs.gram();
    let gram_rank = numerical_rank(g, T::RANK_TOL)?;
    let independent = gram_rank.rank == 3;
    let eig = eigh(g)?;
    let null = normalize_witness(eig.vector(2));
    let residual_norm = combination_norm(outputs, &null);
    Ok(DependenceCertificate {
        independent,
        coefficients: (!independent).then_some(null),
        residual_norm,
        witness_verified: !independent && residual_norm <= T::RESIDUAL_TOL,
        gram_rank,
        gram_determinant: g.determinant()?.re,
    })
}

fn normalize_witness<T: Real>(v: Vec<Complex<T>>) -> [Complex<T>; 3] {
    let max = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let cut = max * (T::one() - T::lit(1e-12));
    let k = v.iter().position(|z| z.norm() >= cut).unwrap_or(0);
    let pivot = v[k];
    // Divide by the pivot: max modulus becomes one and the pivot becomes 1.
    let rot = pivot.inv();
    let mut out = [Complex::zero(); 3];
    for (o, z) in out.iter_mut().zip(&v) {
        *o = *z * rot;
    }
    out[k] = Complex::new(T::one(), T::zero());
    out
}

fn combination_norm<T: Real>(set: &StateSet<T>, x: &[Complex<T>]) -> T {
    let mut acc = vec![Complex::zero(); set.dim()];
    for (psi, c) in set.members().iter().zip(x) {
        for (a, amp) in acc.iter_mut().zip(psi.amplitudes()) {
            *a += *c * amp;
        }
    }
    vector_norm(&acc)
}

/// Phase pairs `(θ₂₁, θ₃₁)` for which the outputs stay dependent.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyLocus<T> {
    pub solutions: Vec<(T, T)>,
}

impl<T: Real> DegeneracyLocus<T> {
    pub fn family(&self) -> &'static str {
        LOCUS_FAMILY
    }
}

/// `|a + e^{iθ₂₁} b − e^{iθ₃₁}|`.
pub fn locus_residual<T: Real>(a: T, b: T, theta21: T, theta31: T) -> T {
    (Complex::new(a, T::zero()) + cis(theta21).scale(b) - cis(theta31)).norm()
}

/// Closed-form solutions: `(π/2, θ)` with `a + ib = e^{iθ}` and
/// `(3π/2, θ)` with `a − ib = e^{iθ}`.
pub fn solve_degeneracy_analytic<T: Real>(a: T, b: T) -> Result<DegeneracyLocus<T>> {
    validate_ab(a, b)?;
    let half_pi = T::FRAC_PI_2();
    let three_half_pi = half_pi * T::lit(3.0);
    Ok(DegeneracyLocus {
        solutions: vec![
            (half_pi, wrap_angle(b.atan2(a))),
            (three_half_pi, wrap_angle((-b).atan2(a))),
        ],
    })
}

/// One grid evaluation of the phase scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint<T> {
    pub theta21: T,
    pub theta31: T,
    /// Smallest singular value of the output Gram matrix.
    pub min_singular_value: T,
    pub rank: usize,
}

/// Output Gram rank with `θ₁ = 0` and the given phase differences.
pub fn evaluate_phase_point<T: Real>(
    p: &CounterexampleParams<T>,
    alpha: Complex<T>,
    beta: Complex<T>,
    theta21: T,
    theta31: T,
    tol: T,
) -> Result<ScanPoint<T>> {
    let outputs = superpose_set_with_phases(p, alpha, beta, &PhaseTriple::new(T::zero(), theta21, theta31))?;
    let rank = numerical_rank(outputs.gram(), tol)?;
    Ok(ScanPoint {
        theta21,
        theta31,
        min_singular_value: rank.min_singular_value(),
        rank: rank.rank,
    })
}

/// Number of grid samples covering `[0, 2π)` at `step`.
pub fn grid_len<T: Real>(step: T) -> usize {
    let n = (T::two_pi() / step - T::lit(1e-9)).ceil();
    n.to_usize().unwrap_or(0).max(1)
}

fn check_grid_step<T: Real>(step: T) -> Result<()> {
    if !(step > T::zero() && step <= T::lit(0.1)) {
        return Err(Error::InvalidParams(format!("grid step {step} outside (0, 0.1]")));
    }
    Ok(())
}

/// Full `[0, 2π)²` grid over `(θ₂₁, θ₃₁)`, row-major in `θ₂₁`.
pub fn scan_degeneracy_grid<T: Real>(
    p: &CounterexampleParams<T>,
    alpha: Complex<T>,
    beta: Complex<T>,
    grid_step: T,
    tol: T,
) -> Result<Vec<ScanPoint<T>>> {
    check_grid_step(grid_step)?;
    validate_weights(alpha, beta).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let n = grid_len(grid_step);
    let mut points = Vec::with_capacity(n * n);
    for i in 0..n {
        let t21 = T::lit(i as f64) * grid_step;
        for j in 0..n {
            let t31 = T::lit(j as f64) * grid_step;
            points.push(evaluate_phase_point(p, alpha, beta, t21, t31, tol)?);
        }
    }
    Ok(points)
}

/// Grid pairs where the output Gram rank drops below three at
/// `T::SCAN_RANK_TOL`.
pub fn scan_degeneracy_numeric<T: Real>(
    p: &CounterexampleParams<T>,
    alpha: Complex<T>,
    beta: Complex<T>,
    grid_step: T,
) -> Result<DegeneracyLocus<T>> {
    let grid = scan_degeneracy_grid(p, alpha, beta, grid_step, T::SCAN_RANK_TOL)?;
    Ok(locus_from_grid(&grid))
}

pub fn locus_from_grid<T: Real>(grid: &[ScanPoint<T>]) -> DegeneracyLocus<T> {
    DegeneracyLocus {
        solutions: grid
            .iter()
            .filter(|pt| pt.rank < 3)
            .map(|pt| (pt.theta21, pt.theta31))
            .collect(),
    }
}

/// Distance between angles on the circle.
pub fn angular_distance<T: Real>(x: T, y: T) -> T {
    let d = wrap_angle(x - y);
    d.min(T::two_pi() - d)
}

/// Max-metric distance on the phase torus.
pub fn torus_distance<T: Real>(p: (T, T), q: (T, T)) -> T {
    angular_distance(p.0, q.0).max(angular_distance(p.1, q.1))
}

/// Largest distance from any point of `from` to its nearest point in `to`.
/// Infinite when `to` is empty and `from` is not.
pub fn directed_hausdorff<T: Real>(from: &[(T, T)], to: &[(T, T)]) -> T {
    from.iter()
        .map(|&p| to.iter().map(|&q| torus_distance(p, q)).fold(T::infinity(), T::min))
        .fold(T::zero(), T::max)
}

/// Symmetric Hausdorff distance on the phase torus.
pub fn hausdorff_distance<T: Real>(a: &[(T, T)], b: &[(T, T)]) -> T {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Groups points whose torus distance chains within `radius`.
pub fn cluster_points<T: Real>(points: &[(T, T)], radius: T) -> Vec<Vec<(T, T)>> {
    let mut clusters: Vec<Vec<(T, T)>> = Vec::new();
    for &p in points {
        let hits: Vec<usize> = clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|&q| torus_distance(p, q) <= radius))
            .map(|(k, _)| k)
            .collect();
        match hits.split_first() {
            None => clusters.push(vec![p]),
            Some((&first, rest)) => {
                for &k in rest.iter().rev() {
                    let moved = clusters.remove(k);
                    clusters[first].extend(moved);
                }
                clusters[first].push(p);
            }
        }
    }
    clusters
}

/// Tally of an end-to-end forbidden-task run.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport<T> {
    pub trials: u64,
    pub phases: PhaseTriple<T>,
    pub certificate: DependenceCertificate<T>,
    /// USD success probability for each superposed output.
    pub usd_success_probabilities: Vec<T>,
    /// Oracle success probability for each input paired with `φ`.
    pub superposer_probabilities: Vec<T>,
    /// How often each secret index was drawn.
    pub secret_counts: Vec<u64>,
    pub superposer_failures: u64,
    pub inconclusive: u64,
    /// Correct conclusive identifications per secret index.
    pub conclusive_per_hypothesis: Vec<u64>,
    pub misidentifications: u64,
    pub clone_successes: u64,
    /// Lowest fidelity among successful clones, if any.
    pub min_clone_fidelity: Option<T>,
    pub predicted_conclusive_rate: T,
    pub empirical_conclusive_rate: T,
    /// Binomial standard error of the conclusive rate at the prediction.
    pub rate_std_error: T,
}

impl<T: Real> DemoReport<T> {
    pub fn conclusive(&self) -> u64 {
        self.conclusive_per_hypothesis.iter().sum()
    }

    /// Empirical rate within three standard errors of the prediction;
    /// vacuously true for an empty run.
    pub fn rate_within_three_sigma(&self) -> bool {
        self.trials == 0
            || (self.empirical_conclusive_rate - self.predicted_conclusive_rate).abs()
                <= T::lit(3.0) * self.rate_std_error
    }
}

/// Secret index → oracle → USD on the certified outputs → clone.
///
/// Each trial draws a secret `j` uniformly, superposes `ψⱼ` with `φ`, and on
/// oracle success makes one identify-then-prepare cloning attempt, whose USD
/// outcome doubles as the discrimination record.
pub fn forbidden_task_demo<T: Real, R: Rng + ?Sized>(
    p: &CounterexampleParams<T>,
    cfg: &SuperposerConfig<T>,
    trials: u64,
    rng: &mut R,
) -> Result<DemoReport<T>> {
    let inputs = build_counterexample(p)?;
    let (outputs, phases) = apply_superposer_to_set(cfg, p)?;
    let certificate = certify_independence(&outputs)?;
    if !certificate.independent {
        return Err(Error::DependentOutputs);
    }
    let measurement = build_usd(&outputs).map_err(|e| match e {
        Error::LinearlyDependentInput => Error::DependentOutputs,
        other => other,
    })?;
    let usd_success_probabilities = success_probabilities(&measurement, &outputs)?;
    let superposer_probabilities: Vec<T> = inputs
        .members()
        .iter()
        .map(|psi| cfg.success_policy().probability(psi, &p.phi))
        .collect();
    let third = T::lit(1.0 / 3.0);
    let predicted: T = superposer_probabilities
        .iter()
        .zip(&usd_success_probabilities)
        .map(|(&s, &u)| s * u * third)
        .sum();

    let cloner = Cloner::from_measurement(measurement);
    let mut secret_counts = vec![0u64; 3];
    let mut conclusive_per_hypothesis = vec![0u64; 3];
    let mut superposer_failures = 0;
    let mut inconclusive = 0;
    let mut misidentifications = 0;
    let mut clone_successes = 0;
    let mut min_clone_fidelity: Option<T> = None;

    for _ in 0..trials {
        let secret = rng.gen_range(0..3usize);
        secret_counts[secret] += 1;
        let out = superpose(cfg, &inputs.members()[secret], &p.phi, rng)?;
        let Some(state) = out.state else {
            superposer_failures += 1;
            continue;
        };
        let cloned = cloner.clone_state(&state, rng)?;
        match cloned.outcome {
            Outcome::Inconclusive => inconclusive += 1,
            Outcome::Conclusive(k) if k == secret => {
                conclusive_per_hypothesis[secret] += 1;
                clone_successes += 1;
                let f = cloned.fidelity_to_input;
                min_clone_fidelity = Some(min_clone_fidelity.map_or(f, |m| m.min(f)));
            }
            Outcome::Conclusive(_) => misidentifications += 1,
        }
    }

    let conclusive: u64 = conclusive_per_hypothesis.iter().sum::<u64>() + misidentifications;
    let (empirical, std_error) = if trials == 0 {
        (T::zero(), T::zero())
    } else {
        let n = T::lit(trials as f64);
        (
            T::lit(conclusive as f64) / n,
            (predicted * (T::one() - predicted) / n).sqrt(),
        )
    };

    Ok(DemoReport {
        trials,
        phases,
        certificate,
        usd_success_probabilities,
        superposer_probabilities,
        secret_counts,
        superposer_failures,
        inconclusive,
        conclusive_per_hypothesis,
        misidentifications,
        clone_successes,
        min_clone_fidelity,
        predicted_conclusive_rate: predicted,
        empirical_conclusive_rate: empirical,
        rate_std_error: std_error,
    })
}
