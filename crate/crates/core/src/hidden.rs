//! Value-definite hidden-variable models for two measurement contexts.
//!
//! A [`HiddenModel`] is a convex mixture of hidden states, each assigning one
//! definite outcome to both contexts, together with stochastic kernels that
//! describe how the hidden value of the *next* context is disturbed by obtaining
//! an outcome in the *current* one. With the kernels built from squared overlaps,
//! the model reproduces the quantum sequential statistics in both orders while
//! every member is dispersion-free and every member's truth table is Boolean.
//!
//! The construction shipped here is one of many: any initial coupling with the
//! right marginal works for a single order, and the product of the two Born
//! marginals is used so that both orders are served by the same ensemble.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{check_same_dim, MeasurementBasis, StateVector};
use crate::stats::{born_distribution, dispersion, sequential_distribution, table_asymmetry, SequentialTable};

/// Tolerance on ensemble weights and kernel rows.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Trials handled by one random substream in [`simulate_sequential`].
pub const TRIALS_PER_STREAM: u64 = 4096;

/// One of the two measurement contexts of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Context {
    A,
    B,
}

impl Context {
    fn index(self) -> usize {
        match self {
            Context::A => 0,
            Context::B => 1,
        }
    }

    pub fn other(self) -> Context {
        match self {
            Context::A => Context::B,
            Context::B => Context::A,
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::A => "A",
            Context::B => "B",
        })
    }
}

/// A dispersion-free state: one definite outcome per context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HiddenState {
    values: [usize; 2],
}

impl HiddenState {
    pub fn new(a: usize, b: usize) -> Self {
        Self { values: [a, b] }
    }

    pub fn value(&self, ctx: Context) -> usize {
        self.values[ctx.index()]
    }

    /// `ω(a)` for the proposition "context `ctx` yields `outcome`".
    pub fn truth(&self, ctx: Context, outcome: usize) -> u8 {
        u8::from(self.value(ctx) == outcome)
    }
}

/// Convex mixture of hidden states.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenEnsemble {
    members: Vec<(HiddenState, f64)>,
    outcomes: [usize; 2],
}

impl HiddenEnsemble {
    pub fn new(members: Vec<(HiddenState, f64)>, outcomes_a: usize, outcomes_b: usize) -> Result<Self> {
        let mut sum = 0.0;
        for (state, w) in &members {
            if *w < 0.0 || !w.is_finite() {
                return Err(Error::NotConvex(*w));
            }
            if state.values[0] >= outcomes_a {
                return Err(Error::IndexOutOfRange { index: state.values[0], len: outcomes_a });
            }
            if state.values[1] >= outcomes_b {
                return Err(Error::IndexOutOfRange { index: state.values[1], len: outcomes_b });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotConvex(sum));
        }
        Ok(Self { members, outcomes: [outcomes_a, outcomes_b] })
    }

    pub fn members(&self) -> &[(HiddenState, f64)] {
        &self.members
    }

    pub fn outcome_count(&self, ctx: Context) -> usize {
        self.outcomes[ctx.index()]
    }

    /// Mixture probability `ω(a) = Σ α_i ω_i(a)`.
    pub fn probability(&self, ctx: Context, outcome: usize) -> f64 {
        self.members.iter().filter(|(s, _)| s.value(ctx) == outcome).map(|(_, w)| w).sum()
    }

    /// Every member gives each proposition truth value 0 or 1, with exactly one
    /// true outcome per context.
    pub fn is_value_definite(&self) -> bool {
        self.members.iter().all(|(s, _)| {
            [Context::A, Context::B].iter().all(|&ctx| {
                let truths: Vec<u8> = (0..self.outcome_count(ctx)).map(|o| s.truth(ctx, o)).collect();
                truths.iter().all(|&t| t <= 1) && truths.iter().map(|&t| t as usize).sum::<usize>() == 1
            })
        })
    }
}

/// `rows[i][j]`: probability that the hidden value in `to` becomes `j` after
/// outcome `i` was obtained in `from`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionKernel {
    from: Context,
    to: Context,
    rows: Vec<Vec<f64>>,
}

impl TransitionKernel {
    pub fn new(from: Context, to: Context, rows: Vec<Vec<f64>>) -> Result<Self> {
        for (row, r) in rows.iter().enumerate() {
            let sum: f64 = r.iter().sum();
            if r.iter().any(|&p| p < 0.0 || !p.is_finite()) || (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic { row });
            }
        }
        Ok(Self { from, to, rows })
    }

    pub fn from(&self) -> Context {
        self.from
    }

    pub fn to(&self) -> Context {
        self.to
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, &p)| (p - if i == j { 1.0 } else { 0.0 }).abs() <= tol)
        })
    }
}

/// Ensemble plus the two disturbance kernels, over two named bases.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenModel {
    bases: [MeasurementBasis; 2],
    ensemble: HiddenEnsemble,
    forward: TransitionKernel,
    backward: TransitionKernel,
}

impl HiddenModel {
    /// Assembles a model from explicit parts, e.g. when replaying a saved model.
    pub fn from_parts(
        a: MeasurementBasis,
        b: MeasurementBasis,
        ensemble: HiddenEnsemble,
        forward: TransitionKernel,
        backward: TransitionKernel,
    ) -> Result<Self> {
        check_same_dim(a.dim(), b.dim())?;
        let (na, nb) = (a.len(), b.len());
        if ensemble.outcomes != [na, nb] {
            return Err(Error::DimensionMismatch { expected: na, found: ensemble.outcomes[0] });
        }
        let shape_ok = |k: &TransitionKernel, rows: usize, cols: usize| {
            k.rows.len() == rows && k.rows.iter().all(|r| r.len() == cols)
        };
        if forward.from != Context::A || forward.to != Context::B || !shape_ok(&forward, na, nb) {
            return Err(Error::Precondition("forward kernel must map A outcomes to B outcomes".into()));
        }
        if backward.from != Context::B || backward.to != Context::A || !shape_ok(&backward, nb, na) {
            return Err(Error::Precondition("backward kernel must map B outcomes to A outcomes".into()));
        }
        Ok(Self { bases: [a, b], ensemble, forward, backward })
    }

    pub fn basis(&self, ctx: Context) -> &MeasurementBasis {
        &self.bases[ctx.index()]
    }

    pub fn ensemble(&self) -> &HiddenEnsemble {
        &self.ensemble
    }

    /// Kernel applied when `to` is measured right after `from`; `None` for a repeat.
    pub fn kernel(&self, from: Context, to: Context) -> Option<&TransitionKernel> {
        match (from, to) {
            (Context::A, Context::B) => Some(&self.forward),
            (Context::B, Context::A) => Some(&self.backward),
            _ => None,
        }
    }

    /// `w[i][j]`: weight of the member with value `i` on A and `j` on B.
    pub fn weight_matrix(&self) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.ensemble.outcomes[1]]; self.ensemble.outcomes[0]];
        for (s, weight) in &self.ensemble.members {
            w[s.values[0]][s.values[1]] += weight;
        }
        w
    }

    fn transition(&self, from: Context, to: Context, outcome: usize) -> Vec<f64> {
        match self.kernel(from, to) {
            Some(k) => k.rows[outcome].clone(),
            None => (0..self.ensemble.outcome_count(to)).map(|j| if j == outcome { 1.0 } else { 0.0 }).collect(),
        }
    }
}

/// Builds the dispersion-free model reproducing the quantum statistics of `state`
/// for `a` and `b` measured in either order.
pub fn build_qm_equivalent_model(state: &StateVector, a: &MeasurementBasis, b: &MeasurementBasis) -> Result<HiddenModel> {
    check_same_dim(a.dim(), state.dim())?;
    check_same_dim(b.dim(), state.dim())?;
    let pa = born_distribution(state, a)?;
    let pb = born_distribution(state, b)?;
    let mut members = Vec::with_capacity(a.len() * b.len());
    for (i, &p) in pa.probs().iter().enumerate() {
        for (j, &q) in pb.probs().iter().enumerate() {
            members.push((HiddenState::new(i, j), p * q));
        }
    }
    // Born probabilities are clamped, so the product weights can drift from one by rounding only.
    let total: f64 = members.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut members {
        *w /= total;
    }
    let ensemble = HiddenEnsemble::new(members, a.len(), b.len())?;
    let forward = overlap_kernel(a, b, Context::A, Context::B)?;
    let backward = overlap_kernel(b, a, Context::B, Context::A)?;
    HiddenModel::from_parts(a.clone(), b.clone(), ensemble, forward, backward)
}

fn overlap_kernel(from: &MeasurementBasis, to: &MeasurementBasis, f: Context, t: Context) -> Result<TransitionKernel> {
    let mut rows = Vec::with_capacity(from.len());
    for i in 0..from.len() {
        let mut row = (0..to.len()).map(|j| from.overlap(i, to, j)).collect::<Result<Vec<_>>>()?;
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= s);
        rows.push(row);
    }
    TransitionKernel::new(f, t, rows)
}

/// Closed-form sequential table of the model: weight of members whose `first`
/// value is `i`, times the kernel entry for `i → j`.
pub fn exact_sequential(model: &HiddenModel, first: Context, then: Context) -> SequentialTable {
    let n_first = model.ensemble.outcome_count(first);
    let entries: Vec<Vec<f64>> = (0..n_first)
        .map(|i| {
            let p = model.ensemble.probability(first, i);
            model.transition(first, then, i).into_iter().map(|k| p * k).collect()
        })
        .collect();
    SequentialTable::new(model.basis(first).clone(), model.basis(then).clone(), entries)
        .expect("convex weights and stochastic kernels give a valid table")
}

/// Monte-Carlo tallies `counts[i][j]` of `trials` runs of the model.
///
/// Trials are split into blocks of [`TRIALS_PER_STREAM`]; block `k` draws from
/// stream `k` of a ChaCha generator seeded with `seed`, so the result does not
/// depend on how blocks are scheduled across threads.
pub fn simulate_counts(model: &HiddenModel, first: Context, then: Context, trials: u64, seed: u64) -> Result<Vec<Vec<u64>>> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let n_first = model.ensemble.outcome_count(first);
    let n_then = model.ensemble.outcome_count(then);
    let weights: Vec<f64> = model.ensemble.members.iter().map(|(_, w)| *w).collect();
    let member_dist = WeightedIndex::new(&weights).map_err(|e| Error::Precondition(e.to_string()))?;
    let row_dists = (0..n_first)
        .map(|i| WeightedIndex::new(model.transition(first, then, i)).map_err(|e| Error::Precondition(e.to_string())))
        .collect::<Result<Vec<_>>>()?;

    let blocks = trials.div_ceil(TRIALS_PER_STREAM);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let len = TRIALS_PER_STREAM.min(trials - block * TRIALS_PER_STREAM);
            let mut tally = vec![vec![0u64; n_then]; n_first];
            for _ in 0..len {
                let (member, _) = model.ensemble.members[member_dist.sample(&mut rng)];
                let i = member.value(first);
                let j = row_dists[i].sample(&mut rng);
                tally[i][j] += 1;
            }
            tally
        })
        .reduce(
            || vec![vec![0u64; n_then]; n_first],
            |mut acc, t| {
                for (ra, rt) in acc.iter_mut().zip(t) {
                    for (a, b) in ra.iter_mut().zip(rt) {
                        *a += b;
                    }
                }
                acc
            },
        );
    Ok(counts)
}

/// Empirical sequential table, `count / trials` per entry.
pub fn simulate_sequential(model: &HiddenModel, first: Context, then: Context, trials: u64, seed: u64) -> Result<SequentialTable> {
    let counts = simulate_counts(model, first, then, trials, seed)?;
    let entries = counts.iter().map(|r| r.iter().map(|&c| c as f64 / trials as f64).collect()).collect();
    SequentialTable::new(model.basis(first).clone(), model.basis(then).clone(), entries)
}

/// One row of the Boolean check `a ∧ (b ∨ ¬b) = (a ∧ b) ∨ (a ∧ ¬b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruthRow {
    pub a: u8,
    pub b: u8,
    pub lhs: u8,
    pub rhs: u8,
}

impl TruthRow {
    pub fn evaluate(a: u8, b: u8) -> Self {
        let not_b = 1 - b;
        let lhs = a.min(b.max(not_b));
        let rhs = a.min(b).max(a.min(not_b));
        Self { a, b, lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// All four definite assignments of `(a, b)`.
pub fn truth_table_distributivity() -> Vec<TruthRow> {
    let mut rows = Vec::with_capacity(4);
    for a in 0..=1 {
        for b in 0..=1 {
            rows.push(TruthRow::evaluate(a, b));
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainVerdict {
    /// Members are value-definite and Boolean, yet the statistics depend on order.
    BrokenAtDistributiveToCommutative,
    /// The two measurements give order-independent statistics on this state.
    NotExercised,
}

impl fmt::Display for ChainVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainVerdict::BrokenAtDistributiveToCommutative => write!(f, "broken at \"distributive ⇒ commutative\""),
            ChainVerdict::NotExercised => write!(f, "not exercised (order-independent statistics)"),
        }
    }
}

/// Evidence gathered on each link of the realism-to-classicality chain.
#[derive(Debug, Clone, PartialEq)]
pub struct NoGoAudit {
    pub members: usize,
    pub members_value_definite: bool,
    /// Every member's definite truth values satisfy the distributive law for every
    /// pair of propositions "A gives i", "B gives j".
    pub members_distributive: bool,
    pub truth_table: Vec<TruthRow>,
    pub quantum_commutation_defect: f64,
    pub model_commutation_defect: f64,
    /// Largest deviation of the model tables from the quantum tables, both orders.
    pub model_vs_quantum: f64,
    pub max_member_dispersion: f64,
    pub max_mixture_dispersion: f64,
    pub projectors_commute: bool,
    pub verdict: ChainVerdict,
}

/// Order dependence above this counts as noncommuting statistics.
pub const AUDIT_TOL: f64 = 1e-9;

pub fn audit_no_go(state: &StateVector, a: &MeasurementBasis, b: &MeasurementBasis) -> Result<NoGoAudit> {
    let model = build_qm_equivalent_model(state, a, b)?;
    let ens = model.ensemble();

    let truth_table = truth_table_distributivity();
    let members_distributive = ens.members().iter().all(|(s, _)| {
        (0..a.len()).all(|i| {
            (0..b.len()).all(|j| TruthRow::evaluate(s.truth(Context::A, i), s.truth(Context::B, j)).holds())
        })
    });

    let hv_ab = exact_sequential(&model, Context::A, Context::B);
    let hv_ba = exact_sequential(&model, Context::B, Context::A);
    let qm_ab = sequential_distribution(state, a, b)?;
    let qm_ba = sequential_distribution(state, b, a)?;
    let model_commutation_defect = table_asymmetry(&hv_ab, &hv_ba)?.0;
    let quantum_commutation_defect = table_asymmetry(&qm_ab, &qm_ba)?.0;
    let model_vs_quantum = hv_ab.max_diff(&qm_ab).max(hv_ba.max_diff(&qm_ba));

    let mut max_member_dispersion: f64 = 0.0;
    let mut max_mixture_dispersion: f64 = 0.0;
    for ctx in [Context::A, Context::B] {
        for o in 0..ens.outcome_count(ctx) {
            for (s, _) in ens.members() {
                max_member_dispersion = max_member_dispersion.max(dispersion(f64::from(s.truth(ctx, o)))?);
            }
            max_mixture_dispersion = max_mixture_dispersion.max(dispersion(ens.probability(ctx, o).clamp(0.0, 1.0))?);
        }
    }

    let members_value_definite = ens.is_value_definite();
    let verdict = if model_commutation_defect > AUDIT_TOL && members_value_definite && members_distributive {
        ChainVerdict::BrokenAtDistributiveToCommutative
    } else {
        ChainVerdict::NotExercised
    };

    Ok(NoGoAudit {
        members: ens.members().len(),
        members_value_definite,
        members_distributive,
        truth_table,
        quantum_commutation_defect,
        model_commutation_defect,
        model_vs_quantum,
        max_member_dispersion,
        max_mixture_dispersion,
        projectors_commute: a.commutes_with(b, crate::hilbert::OPERATOR_TOL)?,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::spin_direction_basis;
    use std::f64::consts::FRAC_PI_2;

    fn z_up() -> StateVector {
        StateVector::from_real(&[1.0, 0.0]).unwrap()
    }

    fn zx_model() -> HiddenModel {
        build_qm_equivalent_model(&z_up(), &spin_direction_basis(0.0, 0.0), &spin_direction_basis(FRAC_PI_2, 0.0)).unwrap()
    }

    #[test]
    fn zx_model_weights_and_kernels() {
        let m = zx_model();
        let w = m.weight_matrix();
        assert!((w[0][0] - 0.5).abs() < 1e-15 && (w[0][1] - 0.5).abs() < 1e-15);
        assert!(w[1][0].abs() < 1e-15 && w[1][1].abs() < 1e-15);
        for row in m.kernel(Context::B, Context::A).unwrap().rows() {
            assert!((row[0] - 0.5).abs() < 1e-15 && (row[1] - 0.5).abs() < 1e-15);
        }
        assert!(m.ensemble().is_value_definite());
    }

    #[test]
    fn repeated_basis_gives_identity_kernels() {
        let zb = spin_direction_basis(0.3, 0.1);
        let m = build_qm_equivalent_model(&z_up(), &zb, &zb).unwrap();
        assert!(m.kernel(Context::A, Context::B).unwrap().is_identity(1e-12));
        assert!(m.kernel(Context::B, Context::A).unwrap().is_identity(1e-12));
    }

    #[test]
    fn exact_tables_match_examples() {
        let m = zx_model();
        let zx = exact_sequential(&m, Context::A, Context::B);
        assert!((zx.entry(0, 0) - 0.5).abs() < 1e-12);
        let xz = exact_sequential(&m, Context::B, Context::A);
        assert!((xz.entry(0, 0) - 0.25).abs() < 1e-12);
        let zz = exact_sequential(&m, Context::A, Context::A);
        assert!((zz.entry(0, 0) - 1.0).abs() < 1e-12 && zz.entry(0, 1) == 0.0 && zz.entry(1, 0) == 0.0);
    }

    #[test]
    fn simulation_is_deterministic() {
        let m = zx_model();
        let one = simulate_sequential(&m, Context::B, Context::A, 1, 7).unwrap();
        assert_eq!(one.entries().iter().flatten().filter(|&&p| p == 1.0).count(), 1);
        let a = simulate_counts(&m, Context::B, Context::A, 20_000, 42).unwrap();
        let b = simulate_counts(&m, Context::B, Context::A, 20_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().flatten().sum::<u64>(), 20_000);
        assert!(matches!(simulate_counts(&m, Context::A, Context::B, 0, 1), Err(Error::ZeroTrials)));
    }

    #[test]
    fn invalid_parts_rejected() {
        assert!(matches!(
            HiddenEnsemble::new(vec![(HiddenState::new(0, 0), 0.7)], 1, 1),
            Err(Error::NotConvex(_))
        ));
        assert!(matches!(
            TransitionKernel::new(Context::A, Context::B, vec![vec![0.5, 0.6]]),
            Err(Error::NotStochastic { row: 0 })
        ));
    }

    #[test]
    fn truth_table_rows() {
        let rows = truth_table_distributivity();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(TruthRow::holds));
        assert_eq!(TruthRow::evaluate(1, 0), TruthRow { a: 1, b: 0, lhs: 1, rhs: 1 });
        assert_eq!(TruthRow::evaluate(0, 1).lhs, 0);
    }

    #[test]
    fn audit_examples() {
        let zb = spin_direction_basis(0.0, 0.0);
        let xb = spin_direction_basis(FRAC_PI_2, 0.0);
        let audit = audit_no_go(&z_up(), &zb, &xb).unwrap();
        assert!(audit.members_value_definite && audit.members_distributive);
        assert!((audit.model_commutation_defect - 0.25).abs() < 1e-12);
        assert!((audit.quantum_commutation_defect - 0.25).abs() < 1e-12);
        assert_eq!(audit.max_member_dispersion, 0.0);
        assert!(audit.max_mixture_dispersion > 0.0);
        assert_eq!(audit.verdict, ChainVerdict::BrokenAtDistributiveToCommutative);

        let same = audit_no_go(&z_up(), &xb, &xb).unwrap();
        assert!(same.model_commutation_defect < 1e-12);
        assert_eq!(same.verdict, ChainVerdict::NotExercised);
    }
}
