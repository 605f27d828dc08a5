//! Low-dimensional complex linear algebra: pure states, orthogonal projectors,
//! rank-one measurement bases, the Born rule and Lüders collapse.
//!
//! Everything here is immutable after construction. Constructors validate the
//! type invariants, so an operation receiving a [`Projector`] can rely on it being
//! Hermitian and idempotent.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported Hilbert space dimension.
pub const MAX_DIM: usize = 8;
/// Tolerance on the squared norm of a state.
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Tolerance for Hermiticity, idempotency, orthogonality and completeness.
pub const OPERATOR_TOL: f64 = 1e-10;
/// Default tolerance for comparing probabilities.
pub const PROBABILITY_TOL: f64 = 1e-9;
/// Outcomes at or below this probability cannot be collapsed onto.
pub const COLLAPSE_THRESHOLD: f64 = 1e-12;
/// Rays are equal when `|<u|v>|` is within this distance of one.
pub const PHASE_TOL: f64 = 1e-10;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A normalized vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let v = DVector::from_vec(amplitudes);
        let norm_sqr = v.norm_squared();
        if (norm_sqr - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes: v })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm <= f64::EPSILON {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amplitudes: v.unscale(norm) })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub(crate) fn from_dvector_unchecked(amplitudes: DVector<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Equality up to a global phase.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && (self.amplitudes.dotc(&other.amplitudes).norm() - 1.0).abs() <= tol
    }
}

/// An orthogonal projector, `P = P†` and `P² = P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: DMatrix<Complex64>,
}

impl Projector {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        check_dim(matrix.nrows())?;
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        if herm > OPERATOR_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let idem = max_abs(&(&matrix * &matrix - &matrix));
        if idem > OPERATOR_TOL {
            return Err(Error::NotIdempotent(idem));
        }
        Ok(Self { matrix })
    }

    /// Rank-one projector `|v><v|/<v|v>` onto the ray through `v`.
    pub fn onto(vector: &[Complex64]) -> Result<Self> {
        let state = StateVector::normalized(vector.to_vec())?;
        Ok(Self::onto_state(&state))
    }

    pub fn onto_state(state: &StateVector) -> Self {
        let v = state.amplitudes();
        Self { matrix: v * v.adjoint() }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { matrix: DMatrix::identity(dim, dim) })
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Rank, read off the trace.
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    /// `Tr(P Q)`; equals `|<u|v>|²` for two rank-one projectors.
    pub fn trace_product(&self, other: &Projector) -> Result<f64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok((&self.matrix * &other.matrix).trace().re)
    }

    pub fn apply(&self, state: &StateVector) -> Result<DVector<Complex64>> {
        check_same_dim(self.dim(), state.dim())?;
        Ok(&self.matrix * state.amplitudes())
    }
}

/// A complete set of pairwise orthogonal rank-one projectors with outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    projectors: Vec<Projector>,
    labels: Vec<String>,
}

impl MeasurementBasis {
    pub fn new(projectors: Vec<Projector>, labels: Vec<String>) -> Result<Self> {
        if projectors.len() != labels.len() {
            return Err(Error::LabelCount { projectors: projectors.len(), labels: labels.len() });
        }
        let dim = projectors.first().map(Projector::dim).ok_or(Error::UnsupportedDimension(0))?;
        for p in &projectors {
            check_same_dim(dim, p.dim())?;
            let tr = p.matrix.trace().re;
            if (tr - 1.0).abs() > OPERATOR_TOL {
                return Err(Error::NotRankOne(tr));
            }
        }
        for (i, p) in projectors.iter().enumerate() {
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                if max_abs(&(&p.matrix * &q.matrix)) > OPERATOR_TOL {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
        }
        let sum = projectors.iter().fold(DMatrix::zeros(dim, dim), |acc, p| acc + &p.matrix);
        let dev = max_abs(&(sum - DMatrix::identity(dim, dim)));
        if dev > OPERATOR_TOL {
            return Err(Error::Incomplete(dev));
        }
        Ok(Self { projectors, labels })
    }

    /// Basis of projectors onto the given vectors, which must be orthonormal up to scale.
    pub fn from_vectors(vectors: &[Vec<Complex64>], labels: Vec<String>) -> Result<Self> {
        let projectors = vectors.iter().map(|v| Projector::onto(v)).collect::<Result<Vec<_>>>()?;
        Self::new(projectors, labels)
    }

    /// The computational basis, labelled `0..dim`.
    pub fn standard(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let projectors = (0..dim)
            .map(|i| Projector::onto_state(&StateVector::basis(dim, i).expect("index in range")))
            .collect();
        Self::new(projectors, (0..dim).map(|i| i.to_string()).collect())
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn projector(&self, index: usize) -> Result<&Projector> {
        self.projectors.get(index).ok_or(Error::IndexOutOfRange { index, len: self.len() })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Transition probability `|<b_j|a_i>|²` between outcome `i` here and `j` of `other`.
    pub fn overlap(&self, i: usize, other: &MeasurementBasis, j: usize) -> Result<f64> {
        let tp = self.projector(i)?.trace_product(other.projector(j)?)?;
        Ok(tp.clamp(0.0, 1.0))
    }

    /// Same projectors in the same order, entrywise within `tol`.
    pub fn same_as(&self, other: &MeasurementBasis, tol: f64) -> bool {
        self.dim() == other.dim()
            && self.len() == other.len()
            && self
                .projectors
                .iter()
                .zip(&other.projectors)
                .all(|(p, q)| max_abs(&(&p.matrix - &q.matrix)) <= tol)
    }

    /// Whether every projector here commutes with every projector of `other`.
    pub fn commutes_with(&self, other: &MeasurementBasis, tol: f64) -> Result<bool> {
        for p in &self.projectors {
            for q in &other.projectors {
                if !commutes(p, q, tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `<ψ|P|ψ>`, clamped to `[0, 1]`.
pub fn born_probability(state: &StateVector, proj: &Projector) -> Result<f64> {
    let projected = proj.apply(state)?;
    let p = state.amplitudes().dotc(&projected).re;
    Ok(p.clamp(0.0, 1.0))
}

/// Lüders collapse: `P|ψ> / ‖P|ψ>‖`.
pub fn collapse(state: &StateVector, proj: &Projector) -> Result<StateVector> {
    let projected = proj.apply(state)?;
    let norm_sqr = projected.norm_squared();
    if norm_sqr <= COLLAPSE_THRESHOLD {
        return Err(Error::ImpossibleOutcome(norm_sqr));
    }
    Ok(StateVector::from_dvector_unchecked(projected.unscale(norm_sqr.sqrt())))
}

/// Largest entry magnitude of `AB - BA`.
pub fn commutator_norm(a: &Projector, b: &Projector) -> Result<f64> {
    check_same_dim(a.dim(), b.dim())?;
    let ab = &a.matrix * &b.matrix;
    let ba = &b.matrix * &a.matrix;
    Ok(max_abs(&(ab - ba)))
}

pub fn commutes(a: &Projector, b: &Projector, tol: f64) -> Result<bool> {
    Ok(commutator_norm(a, b)? <= tol)
}

/// Spin-up state along the direction with the given polar and azimuthal angles.
pub fn spin_state(polar: f64, azimuth: f64) -> StateVector {
    let (s, c) = (polar / 2.0).sin_cos();
    StateVector::from_dvector_unchecked(DVector::from_vec(vec![
        Complex64::new(c, 0.0),
        Complex64::from_polar(s, azimuth),
    ]))
}

/// Spin-1/2 analyzer basis `{|n+>, |n->}` for the direction `(polar, azimuth)`.
pub fn spin_direction_basis(polar: f64, azimuth: f64) -> MeasurementBasis {
    let up = spin_state(polar, azimuth);
    let (s, c) = (polar / 2.0).sin_cos();
    let down = StateVector::from_dvector_unchecked(DVector::from_vec(vec![
        Complex64::new(s, 0.0),
        -Complex64::from_polar(c, azimuth),
    ]));
    MeasurementBasis {
        projectors: vec![Projector::onto_state(&up), Projector::onto_state(&down)],
        labels: vec!["+".to_string(), "-".to_string()],
    }
}
