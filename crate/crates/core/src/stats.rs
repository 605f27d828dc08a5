//! Probability calculus for one and two sequential projective measurements.
//!
//! Tables are indexed `[first outcome][second outcome]` and hold the joint
//! probability of the ordered pair, `P(first = i) · P(second = j | first = i)`.
//! Arguments are always named by temporal order, never by position in a product.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, check_same_dim, collapse, MeasurementBasis, StateVector, COLLAPSE_THRESHOLD};

/// Tolerance on probability sums.
pub const SUM_TOL: f64 = 1e-9;

/// Observed outcome counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    labels: Vec<String>,
    counts: Vec<u64>,
}

impl FrequencyTable {
    pub fn new(labels: Vec<String>, counts: Vec<u64>) -> Result<Self> {
        if labels.len() != counts.len() {
            return Err(Error::LabelCount { projectors: counts.len(), labels: labels.len() });
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::ZeroTrials);
        }
        Ok(Self { labels, counts })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact relative frequencies `n_i / n`.
    pub fn probabilities(&self) -> Vec<Ratio<u64>> {
        let n = self.total();
        self.counts.iter().map(|&c| Ratio::new(c, n)).collect()
    }

    pub fn to_distribution(&self) -> Distribution {
        let n = self.total() as f64;
        Distribution { labels: self.labels.clone(), probs: self.counts.iter().map(|&c| c as f64 / n).collect() }
    }
}

/// A probability vector over labelled outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::LabelCount { projectors: probs.len(), labels: labels.len() });
        }
        if let Some(&p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotConvex(sum));
        }
        Ok(Self { labels, probs })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &Distribution) -> f64 {
        if self.probs.len() != other.probs.len() {
            return f64::INFINITY;
        }
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `P(first = i, then second = j)` for an ordered pair of measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialTable {
    first: MeasurementBasis,
    second: MeasurementBasis,
    entries: Vec<Vec<f64>>,
}

impl SequentialTable {
    pub fn new(first: MeasurementBasis, second: MeasurementBasis, entries: Vec<Vec<f64>>) -> Result<Self> {
        check_same_dim(first.dim(), second.dim())?;
        if entries.len() != first.len() {
            return Err(Error::DimensionMismatch { expected: first.len(), found: entries.len() });
        }
        for row in &entries {
            if row.len() != second.len() {
                return Err(Error::DimensionMismatch { expected: second.len(), found: row.len() });
            }
            if let Some(&p) = row.iter().find(|p| !(0.0..=1.0 + SUM_TOL).contains(*p)) {
                return Err(Error::ProbabilityOutOfRange(p));
            }
        }
        let sum: f64 = entries.iter().flatten().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::NotConvex(sum));
        }
        Ok(Self { first, second, entries })
    }

    pub fn first(&self) -> &MeasurementBasis {
        &self.first
    }

    pub fn second(&self) -> &MeasurementBasis {
        &self.second
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn entry(&self, first: usize, second: usize) -> f64 {
        self.entries[first][second]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.second.len()).map(|j| self.entries.iter().map(|r| r[j]).sum()).collect()
    }

    /// Largest entrywise difference against another table of the same shape.
    pub fn max_diff(&self, other: &SequentialTable) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn born_distribution(state: &StateVector, basis: &MeasurementBasis) -> Result<Distribution> {
    check_same_dim(basis.dim(), state.dim())?;
    let probs = basis.projectors().iter().map(|p| born_probability(state, p)).collect::<Result<Vec<_>>>()?;
    Ok(Distribution { labels: basis.labels().to_vec(), probs })
}

/// Measure `first`, collapse, then measure `second`.
pub fn sequential_distribution(
    state: &StateVector,
    first: &MeasurementBasis,
    second: &MeasurementBasis,
) -> Result<SequentialTable> {
    check_same_dim(first.dim(), state.dim())?;
    check_same_dim(second.dim(), state.dim())?;
    let mut entries = Vec::with_capacity(first.len());
    for p in first.projectors() {
        let p_first = born_probability(state, p)?;
        let row = if p_first <= COLLAPSE_THRESHOLD {
            vec![0.0; second.len()]
        } else {
            let post = collapse(state, p)?;
            second
                .projectors()
                .iter()
                .map(|q| Ok(p_first * born_probability(&post, q)?))
                .collect::<Result<Vec<_>>>()?
        };
        entries.push(row);
    }
    Ok(SequentialTable { first: first.clone(), second: second.clone(), entries })
}

/// Distribution of the first measurement, summing out the second.
pub fn marginal_over_second(table: &SequentialTable) -> Distribution {
    Distribution { labels: table.first.labels().to_vec(), probs: table.row_sums() }
}

/// `|P(A = target) − Σ_j P(B = j, then A = target)|`: how far the direct
/// probability of an outcome is from its sum over an interposed measurement.
pub fn nondistribution_defect(
    state: &StateVector,
    measured: &MeasurementBasis,
    target: usize,
    interposed: &MeasurementBasis,
) -> Result<f64> {
    let direct = born_probability(state, measured.projector(target)?)?;
    let through = sequential_distribution(state, interposed, measured)?;
    Ok((direct - through.column_sums()[target]).abs())
}

/// Largest asymmetry `|q_AB[i][j] − q_BA[j][i]|` between two opposite-order tables.
pub fn table_asymmetry(first_then: &SequentialTable, reversed: &SequentialTable) -> Result<(f64, (usize, usize))> {
    if !first_then.first.same_as(&reversed.second, 1e-9) || !first_then.second.same_as(&reversed.first, 1e-9) {
        return Err(Error::BasisMismatch);
    }
    let mut worst = (0.0, (0, 0));
    for (i, row) in first_then.entries.iter().enumerate() {
        for (j, &q) in row.iter().enumerate() {
            let d = (q - reversed.entries[j][i]).abs();
            // ties go to the first entry in row-major order
            if d > worst.0 + 1e-12 {
                worst = (d, (i, j));
            }
        }
    }
    Ok(worst)
}

/// Order dependence of sequential statistics: `max |q_AB[i][j] − q_BA[j][i]|`.
pub fn commutation_defect(state: &StateVector, a: &MeasurementBasis, b: &MeasurementBasis) -> Result<f64> {
    let ab = sequential_distribution(state, a, b)?;
    let ba = sequential_distribution(state, b, a)?;
    Ok(table_asymmetry(&ab, &ba)?.0)
}

#[derive(Debug, Clone, PartialEq)]
pub enum JointVerdict {
    /// Both orders agree; the common table is an order-free joint distribution.
    Exists { joint: SequentialTable },
    /// The orders disagree. `witness` indexes `(A outcome, B outcome)`.
    Absent { witness: (usize, usize), first_then: f64, reversed: f64, asymmetry: f64 },
}

impl JointVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, JointVerdict::Exists { .. })
    }
}

/// Whether an order-independent joint distribution matches both sequential tables.
pub fn joint_exists(first_then: &SequentialTable, reversed: &SequentialTable, tol: f64) -> Result<JointVerdict> {
    let (asymmetry, (i, j)) = table_asymmetry(first_then, reversed)?;
    if asymmetry <= tol {
        Ok(JointVerdict::Exists { joint: first_then.clone() })
    } else {
        Ok(JointVerdict::Absent {
            witness: (i, j),
            first_then: first_then.entries[i][j],
            reversed: reversed.entries[j][i],
            asymmetry,
        })
    }
}

/// `σ = p − p²`, zero exactly for definite outcomes.
pub fn dispersion(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p - p * p)
}

/// Half-width of the `k`-standard-deviation interval of a binomial proportion.
pub fn binomial_bound(p: f64, trials: u64, k_sigma: f64) -> f64 {
    k_sigma * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Entries where an empirical table leaves the `k`-sigma band around the exact one.
pub fn entries_outside_bound(
    empirical: &SequentialTable,
    exact: &SequentialTable,
    trials: u64,
    k_sigma: f64,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, (er, xr)) in empirical.entries.iter().zip(&exact.entries).enumerate() {
        for (j, (&e, &x)) in er.iter().zip(xr).enumerate() {
            // exact entries are clamped so rounding noise near 0 or 1 does not shrink the band to nothing
            let p = x.clamp(0.0, 1.0);
            if (e - p).abs() > binomial_bound(p, trials, k_sigma) + 1e-12 {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::spin_direction_basis;
    use std::f64::consts::FRAC_PI_2;

    fn z_up() -> StateVector {
        StateVector::from_real(&[1.0, 0.0]).unwrap()
    }

    fn zb() -> MeasurementBasis {
        spin_direction_basis(0.0, 0.0)
    }

    fn xb() -> MeasurementBasis {
        spin_direction_basis(FRAC_PI_2, 0.0)
    }

    fn assert_table(t: &SequentialTable, expected: [[f64; 2]; 2]) {
        for (i, row) in expected.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert!((t.entry(i, j) - e).abs() < 1e-12, "{:?}", t.entries());
            }
        }
    }

    #[test]
    fn born_distribution_examples() {
        assert_eq!(born_distribution(&z_up(), &zb()).unwrap().probs(), &[1.0, 0.0]);
        let x = born_distribution(&z_up(), &xb()).unwrap();
        assert!((x.probs()[0] - 0.5).abs() < 1e-15 && (x.probs()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sequential_examples() {
        assert_table(&sequential_distribution(&z_up(), &zb(), &xb()).unwrap(), [[0.5, 0.5], [0.0, 0.0]]);
        assert_table(&sequential_distribution(&z_up(), &xb(), &zb()).unwrap(), [[0.25, 0.25], [0.25, 0.25]]);
        let x_up = crate::hilbert::spin_state(1.0, 0.4);
        let rep = sequential_distribution(&x_up, &xb(), &xb()).unwrap();
        let born = born_distribution(&x_up, &xb()).unwrap();
        for i in 0..2 {
            assert!((rep.entry(i, i) - born.probs()[i]).abs() < 1e-12);
            assert!(rep.entry(i, 1 - i).abs() < 1e-12);
        }
    }

    #[test]
    fn marginals() {
        let zx = sequential_distribution(&z_up(), &zb(), &xb()).unwrap();
        assert!(marginal_over_second(&zx).max_diff(&born_distribution(&z_up(), &zb()).unwrap()) < 1e-12);
        let xz = sequential_distribution(&z_up(), &xb(), &zb()).unwrap();
        assert!(marginal_over_second(&xz).max_diff(&born_distribution(&z_up(), &xb()).unwrap()) < 1e-12);
    }

    #[test]
    fn nondistribution_examples() {
        assert!((nondistribution_defect(&z_up(), &zb(), 0, &xb()).unwrap() - 0.5).abs() < 1e-12);
        assert!(nondistribution_defect(&z_up(), &zb(), 0, &zb()).unwrap() < 1e-12);
        let swapped = MeasurementBasis::new(
            zb().projectors().iter().rev().cloned().collect(),
            vec!["-".into(), "+".into()],
        )
        .unwrap();
        let psi = crate::hilbert::spin_state(0.7, 2.0);
        assert!(nondistribution_defect(&psi, &zb(), 1, &swapped).unwrap() < 1e-12);
        assert!(matches!(
            nondistribution_defect(&z_up(), &zb(), 2, &xb()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn commutation_examples() {
        assert!((commutation_defect(&z_up(), &zb(), &xb()).unwrap() - 0.25).abs() < 1e-12);
        assert!(commutation_defect(&z_up(), &xb(), &xb()).unwrap() < 1e-12);
        let psi = crate::hilbert::spin_state(0.7, 2.0);
        assert!(commutation_defect(&psi, &zb(), &zb()).unwrap() < 1e-12);
    }

    #[test]
    fn joint_examples() {
        let zx = sequential_distribution(&z_up(), &zb(), &xb()).unwrap();
        let xz = sequential_distribution(&z_up(), &xb(), &zb()).unwrap();
        match joint_exists(&zx, &xz, 1e-9).unwrap() {
            JointVerdict::Absent { witness, first_then, reversed, asymmetry } => {
                assert_eq!(witness, (0, 0));
                assert!((first_then - 0.5).abs() < 1e-12 && (reversed - 0.25).abs() < 1e-12);
                assert!((asymmetry - 0.25).abs() < 1e-12);
            }
            other => panic!("expected absence, got {other:?}"),
        }
        let psi = crate::hilbert::spin_state(0.7, 2.0);
        let zz = sequential_distribution(&psi, &zb(), &zb()).unwrap();
        assert!(joint_exists(&zz, &zz, 1e-9).unwrap().exists());

        let hand = SequentialTable::new(zb(), xb(), vec![vec![0.1, 0.2], vec![0.3, 0.4]]).unwrap();
        let hand_t = SequentialTable::new(xb(), zb(), vec![vec![0.1, 0.3], vec![0.2, 0.4]]).unwrap();
        assert!(joint_exists(&hand, &hand_t, 1e-12).unwrap().exists());
        assert_eq!(joint_exists(&hand, &hand, 1e-12), Err(Error::BasisMismatch));
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(0.0).unwrap(), 0.0);
        assert_eq!(dispersion(1.0).unwrap(), 0.0);
        assert_eq!(dispersion(0.5).unwrap(), 0.25);
        for k in 1..100 {
            assert!(dispersion(k as f64 / 100.0).unwrap() > 0.0);
        }
        assert!(matches!(dispersion(1.5), Err(Error::ProbabilityOutOfRange(_))));
        assert!(matches!(dispersion(-0.1), Err(Error::ProbabilityOutOfRange(_))));
    }

    #[test]
    fn frequencies_are_exact() {
        let f = FrequencyTable::new(vec!["+".into(), "-".into(), "0".into()], vec![1, 1, 1]).unwrap();
        let sum = f.probabilities().into_iter().fold(Ratio::from_integer(0), |a, b| a + b);
        assert_eq!(sum, Ratio::from_integer(1));
        let d = f.to_distribution();
        for p in d.probs() {
            assert!((p - 1.0 / 3.0).abs() <= 1e-15);
        }
        assert!(FrequencyTable::new(vec!["+".into()], vec![0]).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(Distribution::new(vec!["a".into(), "b".into()], vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec!["a".into()], vec![1.0]).is_ok());
    }
}
