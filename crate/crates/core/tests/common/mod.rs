#![allow(dead_code)]

use nalgebra::{Complex as NaComplex, DMatrix};
use nogo_core::{ComplexMatrix, PureState, StateSet, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim).map(|_| c(gaussian(rng), gaussian(rng))).collect()
}

pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> PureState<f64> {
    PureState::normalize(random_vector(dim, rng)).unwrap()
}

pub fn random_phase<R: Rng>(rng: &mut R) -> C64 {
    let t: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    c(t.cos(), t.sin())
}

/// Random set of `size` states in `dim` whose span has dimension `rank`.
pub fn random_set_with_rank<R: Rng>(dim: usize, size: usize, rank: usize, rng: &mut R) -> StateSet<f64> {
    assert!(rank >= 1 && rank <= size.min(dim));
    let base: Vec<Vec<C64>> = (0..rank).map(|_| random_vector(dim, rng)).collect();
    let mut members: Vec<PureState<f64>> = base.iter().map(|v| PureState::normalize(v.clone()).unwrap()).collect();
    while members.len() < size {
        let mut v = vec![c(0.0, 0.0); dim];
        for b in &base {
            let w = c(gaussian(rng), gaussian(rng));
            for (x, y) in v.iter_mut().zip(b) {
                *x += w * y;
            }
        }
        if let Ok(s) = PureState::normalize(v) {
            members.push(s);
        }
    }
    // Shuffle so dependent members are not always last.
    for i in (1..members.len()).rev() {
        let j = rng.gen_range(0..=i);
        members.swap(i, j);
    }
    StateSet::new(members).unwrap()
}

pub fn to_nalgebra(m: &ComplexMatrix<f64>) -> DMatrix<NaComplex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m[(i, j)];
        NaComplex::new(z.re, z.im)
    })
}

/// Amplitude matrix (states as columns) built without the crate's helpers.
pub fn amplitude_matrix(s: &StateSet<f64>) -> DMatrix<NaComplex<f64>> {
    DMatrix::from_fn(s.dim(), s.len(), |i, j| {
        let z = s.members()[j].amplitudes()[i];
        NaComplex::new(z.re, z.im)
    })
}

/// Singular values of the amplitude matrix, descending, via nalgebra.
pub fn oracle_singular_values(s: &StateSet<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = amplitude_matrix(s)
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Gram rank from the amplitude SVD: Gram eigenvalues are `σ²`.
pub fn oracle_gram_rank(s: &StateSet<f64>, tol: f64) -> usize {
    let sv = oracle_singular_values(s);
    let top = sv[0] * sv[0];
    sv.iter().filter(|&&x| x * x > tol * top).count()
}

/// Ratio `σ²_min / σ²_max` over the first `rank` singular values.
pub fn oracle_gram_conditioning(s: &StateSet<f64>, rank: usize) -> f64 {
    let sv = oracle_singular_values(s);
    (sv[rank - 1] / sv[0]).powi(2)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    match n {
        0 => c(1.0, 0.0),
        1 => m[0][0],
        _ => {
            let mut acc = c(0.0, 0.0);
            for col in 0..n {
                let minor: Vec<Vec<C64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, z)| *z)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[0][col] * cofactor_det(&minor) * sign;
            }
            acc
        }
    }
}

pub fn rows_of(m: &ComplexMatrix<f64>) -> Vec<Vec<C64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Gram matrix by explicit dot products.
pub fn oracle_gram(states: &[&[C64]]) -> Vec<Vec<C64>> {
    states
        .iter()
        .map(|a| {
            states
                .iter()
                .map(|b| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
                .collect()
        })
        .collect()
}

/// Smallest eigenvalue of a Hermitian matrix via nalgebra.
pub fn oracle_min_eigenvalue(m: &ComplexMatrix<f64>) -> f64 {
    to_nalgebra(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
