//! The lattice of subspaces of `C^d`: meet, join, orthocomplement and inclusion,
//! plus checkers for the ortholattice axioms, orthomodularity and distributivity.
//!
//! A [`Subspace`] is stored as an orthonormal frame obtained from the spanning
//! vectors by pivoted Gram-Schmidt. Residuals at or below [`RANK_TOL`] count as zero.
//! Two subspaces are equal when each includes the other at [`INCLUSION_TOL`].

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{check_dim, check_same_dim, max_abs, Projector, StateVector};

pub const RANK_TOL: f64 = 1e-10;
pub const INCLUSION_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    frame: Vec<DVector<Complex64>>,
}

/// Orthonormal basis of the column space of `m` by Gram-Schmidt with column
/// pivoting: the column with the largest residual is taken next, and the
/// process stops once every residual is at most `threshold` or `max_rank`
/// vectors have been taken.
fn column_space(m: DMatrix<Complex64>, threshold: f64, max_rank: usize) -> Vec<DVector<Complex64>> {
    let mut residuals: Vec<DVector<Complex64>> = m.column_iter().map(|c| c.into_owned()).collect();
    let mut frame: Vec<DVector<Complex64>> = Vec::new();
    while frame.len() < max_rank {
        let Some((k, norm)) = residuals
            .iter()
            .map(|r| r.norm())
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(&y.1))
        else {
            break;
        };
        if norm <= threshold {
            break;
        }
        let mut u = residuals.swap_remove(k);
        // second pass against the frame keeps the vectors orthogonal to working precision
        for f in &frame {
            let c = f.dotc(&u);
            u -= f * c;
        }
        let u = fix_phase(u.unscale(u.norm()));
        for r in &mut residuals {
            let c = u.dotc(r);
            *r -= &u * c;
        }
        frame.push(u);
    }
    frame
}

/// Frame for the range of an orthogonal projector, whose rank is its trace.
fn projector_range(p: DMatrix<Complex64>) -> Vec<DVector<Complex64>> {
    let rank = p.trace().re.round().max(0.0) as usize;
    column_space(p, 1e-8, rank)
}

fn fix_phase(v: DVector<Complex64>) -> DVector<Complex64> {
    match v.iter().find(|z| z.norm() > 1e-8) {
        Some(lead) => {
            let phase = lead.conj() / lead.norm();
            v * phase
        }
        None => v,
    }
}

impl Subspace {
    /// Span of arbitrary (not necessarily independent) vectors.
    pub fn span(ambient_dim: usize, vectors: &[DVector<Complex64>]) -> Result<Self> {
        check_dim(ambient_dim)?;
        for v in vectors {
            check_same_dim(ambient_dim, v.len())?;
        }
        let m = if vectors.is_empty() { DMatrix::zeros(ambient_dim, 0) } else { DMatrix::from_columns(vectors) };
        Ok(Self { ambient_dim, frame: column_space(m, RANK_TOL, ambient_dim) })
    }

    pub fn zero(ambient_dim: usize) -> Result<Self> {
        check_dim(ambient_dim)?;
        Ok(Self { ambient_dim, frame: Vec::new() })
    }

    pub fn full(ambient_dim: usize) -> Result<Self> {
        check_dim(ambient_dim)?;
        let frame = (0..ambient_dim).map(|i| StateVector::basis(ambient_dim, i).unwrap().amplitudes().clone()).collect();
        Ok(Self { ambient_dim, frame })
    }

    /// The ray through a nonzero vector.
    pub fn ray(vector: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(vector);
        if v.norm() <= RANK_TOL {
            return Err(Error::ZeroVector);
        }
        Self::span(vector.len(), &[v])
    }

    pub fn ray_real(vector: &[f64]) -> Result<Self> {
        Self::ray(&vector.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Span of the `index`-th standard basis vector.
    pub fn axis(ambient_dim: usize, index: usize) -> Result<Self> {
        let e = StateVector::basis(ambient_dim, index)?;
        Ok(Self { ambient_dim, frame: vec![e.amplitudes().clone()] })
    }

    /// Range of a projector.
    pub fn range_of(proj: &Projector) -> Self {
        Self { ambient_dim: proj.dim(), frame: projector_range(proj.matrix().clone()) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &[DVector<Complex64>] {
        &self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.frame.len() == self.ambient_dim
    }

    /// Orthogonal projector onto this subspace.
    pub fn projector_matrix(&self) -> DMatrix<Complex64> {
        self.frame
            .iter()
            .fold(DMatrix::zeros(self.ambient_dim, self.ambient_dim), |acc, v| acc + v * v.adjoint())
    }

    pub fn projector(&self) -> Projector {
        Projector::from_matrix_unchecked(self.projector_matrix())
    }

    /// `‖v - P v‖` for the projector `P` onto this subspace.
    fn residual(&self, v: &DVector<Complex64>) -> f64 {
        let mut r = v.clone();
        for u in &self.frame {
            r -= u * u.dotc(v);
        }
        r.norm()
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && includes(self, other).unwrap_or(false)
            && includes(other, self).unwrap_or(false)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim() {
            0 => write!(f, "0"),
            d if d == self.ambient_dim => write!(f, "I"),
            d => {
                write!(f, "span{{")?;
                for (k, v) in self.frame.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "(")?;
                    for (i, z) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        if z.im.abs() < 1e-12 {
                            write!(f, "{:.4}", z.re)?;
                        } else {
                            write!(f, "{:.4}{:+.4}i", z.re, z.im)?;
                        }
                    }
                    write!(f, ")")?;
                }
                write!(f, "}} (dim {d})")
            }
        }
    }
}

/// `a ⊆ b`: every frame vector of `a` lies in `b` up to [`INCLUSION_TOL`].
pub fn includes(a: &Subspace, b: &Subspace) -> Result<bool> {
    check_same_dim(a.ambient_dim, b.ambient_dim)?;
    Ok(a.frame.iter().all(|v| b.residual(v) <= INCLUSION_TOL))
}

/// Smallest subspace containing both.
pub fn join(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_same_dim(a.ambient_dim, b.ambient_dim)?;
    let vectors: Vec<DVector<Complex64>> = a.frame.iter().chain(&b.frame).cloned().collect();
    Subspace::span(a.ambient_dim, &vectors)
}

/// Orthogonal complement, the range of `I - P`.
pub fn orthocomplement(a: &Subspace) -> Subspace {
    if a.is_zero() {
        return Subspace::full(a.ambient_dim).expect("dimension already validated");
    }
    let d = a.ambient_dim;
    let complement = DMatrix::<Complex64>::identity(d, d) - a.projector_matrix();
    Subspace { ambient_dim: d, frame: projector_range(complement) }
}

/// Intersection, computed as `(a′ ∨ b′)′`.
pub fn meet(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_same_dim(a.ambient_dim, b.ambient_dim)?;
    Ok(orthocomplement(&join(&orthocomplement(a), &orthocomplement(b))?))
}

/// Both sides of the distributive law `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
#[derive(Debug, Clone)]
pub struct DistributivityVerdict {
    pub lhs: Subspace,
    pub rhs: Subspace,
    pub distributive: bool,
    /// `rhs ⊆ lhs` holds in every lattice.
    pub rhs_within_lhs: bool,
}

pub fn distributes(a: &Subspace, b: &Subspace, c: &Subspace) -> Result<DistributivityVerdict> {
    check_same_dim(a.ambient_dim, b.ambient_dim)?;
    check_same_dim(a.ambient_dim, c.ambient_dim)?;
    let lhs = meet(a, &join(b, c)?)?;
    let rhs = join(&meet(a, b)?, &meet(a, c)?)?;
    let rhs_within_lhs = includes(&rhs, &lhs)?;
    let distributive = lhs == rhs;
    Ok(DistributivityVerdict { lhs, rhs, distributive, rhs_within_lhs })
}

/// Orthomodular law: for `a ⊆ b`, `b = a ∨ (b ∧ a′)`.
///
/// Returns [`Error::Precondition`] when `a` is not included in `b`.
pub fn orthomodular_holds(a: &Subspace, b: &Subspace) -> Result<bool> {
    if !includes(a, b)? {
        return Err(Error::Precondition("orthomodular law requires a ⊆ b".into()));
    }
    let rebuilt = join(a, &meet(b, &orthocomplement(a))?)?;
    Ok(rebuilt == *b)
}

/// One ortholattice axiom and the first sample indices violating it.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomResult {
    pub name: &'static str,
    pub checked: usize,
    pub counterexample: Option<Vec<usize>>,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub sample_size: usize,
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.axioms.iter().all(AxiomResult::passed)
    }
}

struct AxiomTally {
    name: &'static str,
    checked: usize,
    counterexample: Option<Vec<usize>>,
}

impl AxiomTally {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, witness: &[usize]) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness.to_vec());
        }
    }

    fn finish(self) -> AxiomResult {
        AxiomResult { name: self.name, checked: self.checked, counterexample: self.counterexample }
    }
}

/// Checks the partial order and orthocomplement axioms on every element and pair
/// of `sample`: reflexivity, antisymmetry, transitivity, involution `a″ = a`,
/// noncontradiction `a ∧ a′ = 0`, excluded middle `a ∨ a′ = I`, and order
/// reversal `a ⊆ b ⇔ b′ ⊆ a′`.
pub fn check_lattice_axioms(sample: &[Subspace]) -> Result<AxiomReport> {
    if let Some(first) = sample.first() {
        for s in sample {
            check_same_dim(first.ambient_dim, s.ambient_dim)?;
        }
    }
    let n = sample.len();
    let complements: Vec<Subspace> = sample.iter().map(orthocomplement).collect();
    let mut inc = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            inc[i][j] = includes(&sample[i], &sample[j])?;
        }
    }

    let mut reflexive = AxiomTally::new("reflexivity: a ⊆ a");
    let mut antisymmetric = AxiomTally::new("antisymmetry: a ⊆ b and b ⊆ a imply a = b");
    let mut transitive = AxiomTally::new("transitivity: a ⊆ b and b ⊆ c imply a ⊆ c");
    let mut involution = AxiomTally::new("involution: (a′)′ = a");
    let mut noncontradiction = AxiomTally::new("noncontradiction: a ∧ a′ = 0");
    let mut excluded_middle = AxiomTally::new("excluded middle: a ∨ a′ = I");
    let mut order_reversal = AxiomTally::new("order reversal: a ⊆ b iff b′ ⊆ a′");

    for i in 0..n {
        let a = &sample[i];
        let ac = &complements[i];
        reflexive.record(inc[i][i], &[i]);
        involution.record(orthocomplement(ac) == *a, &[i]);
        noncontradiction.record(meet(a, ac)?.is_zero(), &[i]);
        excluded_middle.record(join(a, ac)?.is_full(), &[i]);
        for j in 0..n {
            if inc[i][j] && inc[j][i] {
                let same = a.dim() == sample[j].dim()
                    && max_abs(&(a.projector_matrix() - sample[j].projector_matrix())) <= INCLUSION_TOL * 10.0;
                antisymmetric.record(same, &[i, j]);
            }
            let reversed = includes(&complements[j], ac)?;
            order_reversal.record(inc[i][j] == reversed, &[i, j]);
            if inc[i][j] {
                for (k, &jk) in inc[j].iter().enumerate() {
                    if jk {
                        transitive.record(inc[i][k], &[i, j, k]);
                    }
                }
            }
        }
    }

    Ok(AxiomReport {
        sample_size: n,
        axioms: vec![
            reflexive.finish(),
            antisymmetric.finish(),
            transitive.finish(),
            involution.finish(),
            noncontradiction.finish(),
            excluded_middle.finish(),
            order_reversal.finish(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn e(d: usize, i: usize) -> DVector<Complex64> {
        StateVector::basis(d, i).unwrap().amplitudes().clone()
    }

    #[test]
    fn meet_examples() {
        let a = Subspace::ray_real(&[1.0, 0.0]).unwrap();
        let x = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        assert!(meet(&a, &x).unwrap().is_zero());
        assert_eq!(meet(&a, &a).unwrap(), a);

        let s12 = Subspace::span(3, &[e(3, 0), e(3, 1)]).unwrap();
        let s23 = Subspace::span(3, &[e(3, 1), e(3, 2)]).unwrap();
        let m = meet(&s12, &s23).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(includes(&m, &s12).unwrap() && includes(&m, &s23).unwrap());
        assert!(includes(&Subspace::axis(3, 1).unwrap(), &m).unwrap());
    }

    #[test]
    fn join_examples() {
        let a = Subspace::ray_real(&[1.0, 0.0]).unwrap();
        let b = Subspace::ray_real(&[0.0, 1.0]).unwrap();
        let x = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        assert!(join(&a, &b).unwrap().is_full());
        assert!(join(&a, &x).unwrap().is_full());
        assert_eq!(join(&a, &Subspace::zero(2).unwrap()).unwrap(), a);
    }

    #[test]
    fn orthocomplement_examples() {
        let a = Subspace::ray_real(&[1.0, 0.0]).unwrap();
        assert_eq!(orthocomplement(&a), Subspace::ray_real(&[0.0, 1.0]).unwrap());
        assert!(orthocomplement(&Subspace::zero(2).unwrap()).is_full());
        let x = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        let xc = orthocomplement(&x);
        assert_eq!(xc.dim(), 1);
        let expected = DVector::from_vec(vec![Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(-FRAC_1_SQRT_2, 0.0)]);
        assert!((xc.frame()[0].dotc(&expected).norm() - 1.0).abs() < 1e-10);
        assert_eq!(orthocomplement(&xc), x);
    }

    #[test]
    fn includes_examples() {
        let zero = Subspace::zero(3).unwrap();
        let e1 = Subspace::axis(3, 0).unwrap();
        let s12 = Subspace::span(3, &[e(3, 0), e(3, 1)]).unwrap();
        assert!(includes(&zero, &e1).unwrap());
        assert!(includes(&e1, &s12).unwrap());
        // residual of (1,1)/√2 against the x-axis is 1/√2
        let x = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        let a = Subspace::ray_real(&[1.0, 0.0]).unwrap();
        assert!((a.residual(&x.frame()[0]) - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(!includes(&x, &a).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::axis(2, 0).unwrap();
        let b = Subspace::axis(3, 0).unwrap();
        assert!(matches!(meet(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(join(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(includes(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(check_lattice_axioms(&[a, b]).is_err());
    }

    #[test]
    fn nondistributive_witness() {
        let a = Subspace::ray_real(&[1.0, 0.0]).unwrap();
        let b = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        let c = orthocomplement(&b);
        let v = distributes(&a, &b, &c).unwrap();
        assert!(!v.distributive);
        assert_eq!(v.lhs, a);
        assert_eq!(v.lhs.dim(), 1);
        assert_eq!(v.rhs.dim(), 0);
        assert!(v.rhs_within_lhs);
    }

    #[test]
    fn comparable_elements_distribute() {
        let a = Subspace::axis(2, 0).unwrap();
        let c = Subspace::axis(2, 1).unwrap();
        let v = distributes(&a, &a, &c).unwrap();
        assert!(v.distributive);
        assert_eq!(v.lhs, a);
        assert_eq!(v.rhs, a);
    }

    #[test]
    fn orthomodular_examples() {
        let e1 = Subspace::axis(2, 0).unwrap();
        let full = Subspace::full(2).unwrap();
        assert!(orthomodular_holds(&e1, &full).unwrap());
        assert!(orthomodular_holds(&e1, &e1).unwrap());
        let x = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(orthomodular_holds(&x, &e1), Err(Error::Precondition(_))));
    }

    #[test]
    fn axioms_on_small_sample() {
        let sample = vec![Subspace::zero(2).unwrap(), Subspace::axis(2, 0).unwrap(), Subspace::full(2).unwrap()];
        let report = check_lattice_axioms(&sample).unwrap();
        assert!(report.all_passed(), "{report:?}");
        let x = Subspace::ray_real(&[1.0, 1.0]).unwrap();
        assert_eq!(orthocomplement(&orthocomplement(&x)), x);
    }

    #[test]
    fn canonical_frame_is_orthonormal() {
        let s = Subspace::span(
            3,
            &[
                DVector::from_vec(vec![Complex64::new(1.0, 1.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]),
                DVector::from_vec(vec![Complex64::new(2.0, 2.0), Complex64::new(4.0, 0.0), Complex64::new(0.0, 0.0)]),
                DVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(3.0, 0.0)]),
            ],
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        for (i, u) in s.frame().iter().enumerate() {
            for (j, v) in s.frame().iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((u.dotc(v) - Complex64::new(expected, 0.0)).norm() < 1e-10);
            }
        }
    }
}
