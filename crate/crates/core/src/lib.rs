//! Numerical toolkit for the universal probabilistic superposer no-go argument.
//!
//! A hypothetical oracle that superposes two unknown pure states would map the
//! linearly dependent triple `{ψ, ψ⊥, aψ + bψ⊥}` onto linearly independent
//! outputs, and independent states admit unambiguous discrimination and
//! probabilistic cloning. This crate models the oracle, certifies the rank
//! change, locates the phase choices where it fails, and simulates the
//! resulting discrimination and cloning.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the scalar.

pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod pipeline;
pub mod scalar;
pub mod states;
pub mod superposer;

pub use discrimination::{
    build_usd, probabilistic_clone, simulate_usd, success_probabilities, BornDistribution, CloneResult, Cloner,
    DiscriminationOutcome, Outcome, UsdMeasurement,
};
pub use error::{Error, Result};
pub use linalg::{
    eigh, gram, gram_of, max_eigenvalue_hermitian, numerical_rank, reciprocal_basis, singular_values, ComplexMatrix,
    HermitianEigen, RankResult,
};
pub use pipeline::{
    apply_superposer_to_set, build_counterexample, certify_independence, forbidden_task_demo, scan_degeneracy_grid,
    scan_degeneracy_numeric, solve_degeneracy_analytic, superpose_set_with_phases, CounterexampleParams,
    DegeneracyLocus, DemoReport, DependenceCertificate, PhaseTriple, ScanPoint,
};
pub use scalar::{wrap_angle, Real};
pub use states::{canonical_phase, canonicalize, is_linearly_independent, CanonicalForm, PureState, StateSet};
pub use superposer::{
    superpose, superpose_deterministic, superpose_with_phase, validate_weights, PhasePolicy, SuccessPolicy,
    SuperposeOutcome, SuperposerConfig,
};

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type PureState64 = PureState<f64>;
pub type StateSet64 = StateSet<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type SuperposerConfig64 = SuperposerConfig<f64>;
pub type PhasePolicy64 = PhasePolicy<f64>;
pub type SuccessPolicy64 = SuccessPolicy<f64>;
pub type UsdMeasurement64 = UsdMeasurement<f64>;
pub type CounterexampleParams64 = CounterexampleParams<f64>;
pub type DependenceCertificate64 = DependenceCertificate<f64>;
pub type DemoReport64 = DemoReport<f64>;

pub type PureState32 = PureState<f32>;
pub type StateSet32 = StateSet<f32>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type SuperposerConfig32 = SuperposerConfig<f32>;
pub type UsdMeasurement32 = UsdMeasurement<f32>;
pub type CounterexampleParams32 = CounterexampleParams<f32>;
