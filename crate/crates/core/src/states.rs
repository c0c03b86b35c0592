//! Pure states, their phase-free canonical forms, and ordered state sets.

use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{compute_gram, numerical_rank, ComplexMatrix};
use crate::scalar::{cis, Real};

/// Smallest Hilbert-space dimension a state may live in.
pub const MIN_DIM: usize = 2;

/// Unit-norm amplitude vector of dimension at least two.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = vector_norm(&amplitudes);
        if (norm - T::one()).abs() > T::UNIT_NORM_TOL {
            return Err(Error::NotNormalized {
                norm: norm.to_f64_lossy(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Divides `v` by its norm; fails with [`Error::NullVector`] when the norm
    /// is at or below `T::NULL_NORM`.
    pub fn normalize(v: Vec<Complex<T>>) -> Result<Self> {
        check_dim(v.len())?;
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFiniteEntry);
        }
        let norm = vector_norm(&v);
        if norm <= T::NULL_NORM {
            return Err(Error::NullVector);
        }
        let inv = norm.recip();
        Ok(Self {
            amplitudes: v.into_iter().map(|z| z.scale(inv)).collect(),
        })
    }

    /// Computational basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::InvalidParams(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Ok(Self { amplitudes })
    }

    /// Haar-random state from normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        check_dim(dim)?;
        loop {
            let v = random_gaussian_vector(dim, rng);
            match Self::normalize(v) {
                Err(Error::NullVector) => continue,
                other => return other,
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: T) -> Self {
        self.scaled(cis(theta))
    }

    /// Multiplies every amplitude by a scalar, assumed unit-modulus.
    pub fn scaled(&self, u: Complex<T>) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|z| *z * u).collect(),
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn canonicalize(&self) -> CanonicalForm<T> {
        canonicalize(self)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < MIN_DIM {
        return Err(Error::InvalidDimension {
            min: MIN_DIM,
            found: dim,
        });
    }
    Ok(())
}

pub(crate) fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vector_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

pub(crate) fn random_gaussian_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..dim)
        .map(|_| Complex::new(T::lit(standard_normal(rng)), T::lit(standard_normal(rng))))
        .collect()
}

// Box–Muller; keeps the crate free of a distributions dependency.
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Representative of a state's global-phase class.
///
/// The first amplitude whose modulus exceeds `T::PIVOT_FLOOR` is rotated onto
/// the positive real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> CanonicalForm<T> {
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn to_state(&self) -> PureState<T> {
        PureState {
            amplitudes: self.amplitudes.clone(),
        }
    }

    /// Index of the phase pivot, if any amplitude clears the floor.
    pub fn pivot(&self) -> Option<usize> {
        pivot_index(&self.amplitudes)
    }

    /// Entrywise distance to another canonical form.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }
}

fn pivot_index<T: Real>(amplitudes: &[Complex<T>]) -> Option<usize> {
    amplitudes.iter().position(|z| z.norm() > T::PIVOT_FLOOR)
}

/// Phase `γ` removed by canonicalization: `s = e^{iγ} canonical(s)`.
pub fn canonical_phase<T: Real>(s: &PureState<T>) -> T {
    pivot_index(&s.amplitudes).map_or(T::zero(), |k| s.amplitudes[k].arg())
}

pub fn canonicalize<T: Real>(s: &PureState<T>) -> CanonicalForm<T> {
    let mut amplitudes = s.amplitudes.clone();
    if let Some(k) = pivot_index(&amplitudes) {
        let pivot = amplitudes[k];
        let r = pivot.norm();
        let rotation = pivot.conj().unscale(r);
        for z in amplitudes.iter_mut() {
            *z *= rotation;
        }
        amplitudes[k] = Complex::new(r, T::zero());
    }
    CanonicalForm { amplitudes }
}

/// Nonempty ordered collection of states of one dimension.
#[derive(Debug, Clone)]
pub struct StateSet<T> {
    dim: usize,
    members: Vec<PureState<T>>,
    gram: OnceLock<ComplexMatrix<T>>,
}

impl<T: Real> StateSet<T> {
    pub fn new(members: Vec<PureState<T>>) -> Result<Self> {
        let dim = members.first().ok_or(Error::EmptySet)?.dim();
        if let Some(bad) = members.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self {
            dim,
            members,
            gram: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[PureState<T>] {
        &self.members
    }

    pub fn get(&self, i: usize) -> Option<&PureState<T>> {
        self.members.get(i)
    }

    /// Cached Gram matrix.
    pub fn gram(&self) -> &ComplexMatrix<T> {
        self.gram.get_or_init(|| compute_gram(&self.members))
    }

    /// `dim × n` matrix whose columns are the member amplitudes.
    pub fn amplitude_matrix(&self) -> ComplexMatrix<T> {
        let cols: Vec<&[Complex<T>]> = self.members.iter().map(|s| s.amplitudes()).collect();
        ComplexMatrix::from_columns(&cols).expect("members share a dimension")
    }

    /// Index of the member equal to `s` up to global phase.
    pub fn position_of(&self, s: &PureState<T>) -> Option<usize> {
        if s.dim() != self.dim {
            return None;
        }
        let one = T::one();
        self.members
            .iter()
            .position(|m| (one - m.fidelity(s)).abs() <= T::ORTHO_TOL)
    }

    pub fn is_linearly_independent(&self, tol: T) -> Result<bool> {
        is_linearly_independent(self, tol)
    }
}

impl<T: PartialEq> PartialEq for StateSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.members == other.members
    }
}

/// True iff the Gram matrix has full numerical rank at `tol`.
pub fn is_linearly_independent<T: Real>(s: &StateSet<T>, tol: T) -> Result<bool> {
    Ok(numerical_rank(s.gram(), tol)?.rank == s.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn assert_amps(got: &[Complex<f64>], want: &[Complex<f64>], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(want) {
            assert!((a - b).norm() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn normalize_examples() {
        let s = PureState::normalize(vec![c(2., 0.), c(0., 0.)]).unwrap();
        assert_amps(s.amplitudes(), &[c(1., 0.), c(0., 0.)], 0.0);
        let h = FRAC_1_SQRT_2;
        let s = PureState::normalize(vec![c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        assert_amps(s.amplitudes(), &[c(h, 0.), c(h, 0.), c(0., 0.)], 1e-15);
        assert_eq!(
            PureState::normalize(vec![c(1e-14, 0.), c(0., 0.)]),
            Err(Error::NullVector)
        );
    }

    #[test]
    fn dimension_one_is_rejected() {
        assert!(matches!(
            PureState::normalize(vec![c(1., 0.)]),
            Err(Error::InvalidDimension { min: 2, found: 1 })
        ));
        assert!(PureState::<f64>::basis(1, 0).is_err());
    }

    #[test]
    fn new_checks_normalization() {
        assert!(PureState::new(vec![c(1., 0.), c(1., 0.)]).is_err());
        assert!(PureState::new(vec![c(0., 1.), c(0., 0.)]).is_ok());
    }

    #[test]
    fn canonicalize_strips_global_phase() {
        let s = PureState::new(vec![c(0., 1.), c(0., 0.)]).unwrap();
        assert_amps(s.canonicalize().amplitudes(), &[c(1., 0.), c(0., 0.)], 1e-15);

        let h = FRAC_1_SQRT_2;
        let base = PureState::new(vec![c(h, 0.), c(0., h)]).unwrap();
        let rotated = base.with_global_phase(PI / 3.0);
        assert_amps(rotated.canonicalize().amplitudes(), &[c(h, 0.), c(0., h)], 1e-15);

        for theta in [0.0, 0.4, 2.0, -1.3, PI] {
            let s = PureState::new(vec![c(0., 0.), c(theta.cos(), theta.sin())]).unwrap();
            assert_amps(s.canonicalize().amplitudes(), &[c(0., 0.), c(1., 0.)], 1e-15);
        }
    }

    #[test]
    fn canonicalize_skips_noise_below_pivot_floor() {
        let s = PureState::normalize(vec![c(0., 1e-12), c(0., -1.)]).unwrap();
        let canon = s.canonicalize();
        assert_eq!(canon.pivot(), Some(1));
        assert_eq!(canon.amplitudes()[1], c(1., 0.));
    }

    #[test]
    fn canonical_form_preserves_density_matrix() {
        let s = PureState::new(vec![c(0.6, 0.0), c(0.0, -0.8)])
            .unwrap()
            .with_global_phase(1.1);
        let rho = s.density_matrix();
        let rho_c = s.canonicalize().to_state().density_matrix();
        assert!(rho.sub(&rho_c).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn independence_examples() {
        let e1 = PureState::<f64>::basis(2, 0).unwrap();
        let e2 = PureState::basis(2, 1).unwrap();
        let plus = PureState::normalize(vec![c(1., 0.), c(1., 0.)]).unwrap();
        let pair = StateSet::new(vec![e1.clone(), e2.clone()]).unwrap();
        assert!(pair.is_linearly_independent(1e-9).unwrap());
        let zero_plus = StateSet::new(vec![e1.clone(), plus.clone()]).unwrap();
        assert!(zero_plus.is_linearly_independent(1e-9).unwrap());
        assert_abs_diff_eq!(zero_plus.gram().determinant().unwrap().re, 0.5, epsilon = 1e-15);
        let triple = StateSet::new(vec![e1, e2, plus]).unwrap();
        assert!(!triple.is_linearly_independent(1e-9).unwrap());
    }

    #[test]
    fn state_set_contract() {
        assert_eq!(StateSet::<f64>::new(vec![]).unwrap_err(), Error::EmptySet);
        let a = PureState::<f64>::basis(2, 0).unwrap();
        let b = PureState::basis(3, 0).unwrap();
        assert!(matches!(
            StateSet::new(vec![a.clone(), b]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        let s = StateSet::new(vec![a.clone()]).unwrap();
        assert_eq!(s.position_of(&a.with_global_phase(0.7)), Some(0));
        assert_eq!(s.position_of(&PureState::basis(2, 1).unwrap()), None);
    }

    #[test]
    fn single_precision_canonical_form() {
        let s: PureState<f32> = PureState::normalize(vec![Complex::new(0.0, 3.0), Complex::new(4.0, 0.0)]).unwrap();
        let canon = s.canonicalize();
        assert!((canon.amplitudes()[0].re - 0.6).abs() < 1e-6);
        assert!((canon.amplitudes()[1] - Complex::new(0.0, -0.8)).norm() < 1e-6);
    }
}
