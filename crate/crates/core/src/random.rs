//! Seeded generators for states, bases and subspaces used by property runs.
//!
//! All generators draw from a caller-supplied RNG, so a run is reproducible from
//! its seed. [`DEFAULT_SEED`] is the seed used when none is configured.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{spin_direction_basis, MeasurementBasis, Projector, StateVector};
use crate::lattice::Subspace;

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<Complex64> {
    DVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Unitarily invariant random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v = gaussian_vector(rng, dim);
        if let Ok(s) = StateVector::normalized(v.as_slice().to_vec()) {
            return s;
        }
    }
}

/// `count` orthonormal vectors obtained by Gram-Schmidt on Gaussian draws (Haar frame).
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<DVector<Complex64>> {
    assert!(count <= dim);
    let mut frame: Vec<DVector<Complex64>> = Vec::with_capacity(count);
    while frame.len() < count {
        let mut v = gaussian_vector(rng, dim);
        for _ in 0..2 {
            for u in &frame {
                let coeff = u.dotc(&v);
                v -= u * coeff;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            frame.push(v.unscale(norm));
        }
    }
    frame
}

/// Haar-random orthonormal measurement basis.
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> MeasurementBasis {
    let frame = random_frame(rng, dim, dim);
    let vectors: Vec<Vec<Complex64>> = frame.iter().map(|v| v.as_slice().to_vec()).collect();
    MeasurementBasis::from_vectors(&vectors, (0..dim).map(|i| i.to_string()).collect())
        .expect("Gram-Schmidt output is an orthonormal basis")
}

/// A second basis sharing the projectors of `basis`, in shuffled order.
///
/// Rank-one bases commute exactly when they consist of the same rays.
pub fn commuting_partner<R: Rng + ?Sized>(rng: &mut R, basis: &MeasurementBasis) -> MeasurementBasis {
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.shuffle(rng);
    let projectors: Vec<Projector> = order.iter().map(|&i| basis.projectors()[i].clone()).collect();
    let labels = order.iter().map(|&i| format!("{}'", basis.labels()[i])).collect();
    MeasurementBasis::new(projectors, labels).expect("permutation of a basis is a basis")
}

/// Uniformly distributed point on the unit sphere, as `(polar, azimuth)`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let cos_polar: f64 = rng.random_range(-1.0..=1.0);
    let azimuth: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (cos_polar.acos(), azimuth)
}

pub fn random_spin_basis<R: Rng + ?Sized>(rng: &mut R) -> MeasurementBasis {
    let (polar, azimuth) = random_direction(rng);
    spin_direction_basis(polar, azimuth)
}

/// Random subspace of the given ambient dimension and rank.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Subspace {
    let frame = random_frame(rng, dim, rank);
    Subspace::span(dim, &frame).expect("dimension within range")
}

/// Ambient dimension drawn uniformly from `dims`, rank uniformly from `0..=dim`.
pub fn random_subspace_in<R: Rng + ?Sized>(rng: &mut R, dims: std::ops::RangeInclusive<usize>) -> Subspace {
    let dim = rng.random_range(dims);
    let rank = rng.random_range(0..=dim);
    random_subspace(rng, dim, rank)
}

/// Random pair `(a, b)` with `a ⊆ b`: `a` is spanned by a random sub-frame of `b`'s frame.
pub fn random_nested_pair<R: Rng + ?Sized>(
    rng: &mut R,
    dims: std::ops::RangeInclusive<usize>,
) -> (Subspace, Subspace) {
    let dim = rng.random_range(dims);
    let rank_b = rng.random_range(0..=dim);
    let rank_a = rng.random_range(0..=rank_b);
    let mut frame = random_frame(rng, dim, rank_b);
    let b = Subspace::span(dim, &frame).expect("dimension within range");
    frame.shuffle(rng);
    let a = Subspace::span(dim, &frame[..rank_a]).expect("dimension within range");
    (a, b)
}

/// Subspace spanned by a random subset of the rays of `basis`.
pub fn random_basis_subspace<R: Rng + ?Sized>(rng: &mut R, basis: &[DVector<Complex64>]) -> Subspace {
    let dim = basis[0].len();
    let chosen: Vec<DVector<Complex64>> = basis.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
    Subspace::span(dim, &chosen).expect("dimension within range")
}
