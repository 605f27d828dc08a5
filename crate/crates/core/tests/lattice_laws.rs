use nalgebra::DVector;
use nogo_core::lattice::{
    check_lattice_axioms, distributes, includes, join, meet, orthocomplement, orthomodular_holds, Subspace,
};
use nogo_core::random::{random_basis, random_basis_subspace, random_nested_pair, random_subspace_in, seeded};
use nogo_core::Complex64;
use proptest::prelude::*;

fn triple(seed: u64) -> (Subspace, Subspace, Subspace) {
    let mut rng = seeded(seed);
    let a = random_subspace_in(&mut rng, 2..=4);
    let d = a.ambient_dim();
    let b = random_subspace_in(&mut rng, d..=d);
    let c = random_subspace_in(&mut rng, d..=d);
    (a, b, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn join_and_meet_are_idempotent_and_commutative(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        prop_assert_eq!(join(&a, &a).unwrap(), a.clone());
        prop_assert_eq!(meet(&a, &a).unwrap(), a.clone());
        prop_assert_eq!(join(&a, &b).unwrap(), join(&b, &a).unwrap());
        prop_assert_eq!(meet(&a, &b).unwrap(), meet(&b, &a).unwrap());
    }

    #[test]
    fn join_and_meet_are_associative(seed in any::<u64>()) {
        let (a, b, c) = triple(seed);
        let left = join(&join(&a, &b).unwrap(), &c).unwrap();
        let right = join(&a, &join(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let left = meet(&meet(&a, &b).unwrap(), &c).unwrap();
        let right = meet(&a, &meet(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn absorption(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        prop_assert_eq!(join(&a, &meet(&a, &b).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(meet(&a, &join(&a, &b).unwrap()).unwrap(), a.clone());
    }

    #[test]
    fn de_morgan(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        let lhs = orthocomplement(&join(&a, &b).unwrap());
        let rhs = meet(&orthocomplement(&a), &orthocomplement(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = orthocomplement(&meet(&a, &b).unwrap());
        let rhs = join(&orthocomplement(&a), &orthocomplement(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn complement_is_an_involution_and_splits_the_space(seed in any::<u64>()) {
        let (a, _, _) = triple(seed);
        let ac = orthocomplement(&a);
        prop_assert_eq!(orthocomplement(&ac), a.clone());
        prop_assert_eq!(a.dim() + ac.dim(), a.ambient_dim());
        prop_assert!(meet(&a, &ac).unwrap().is_zero());
        prop_assert!(join(&a, &ac).unwrap().is_full());
    }

    // dimension formula: dim(a ∧ b) + dim(a ∨ b) = dim a + dim b
    #[test]
    fn meet_matches_the_dimension_formula(seed in any::<u64>()) {
        let (a, b, _) = triple(seed);
        let m = meet(&a, &b).unwrap();
        let j = join(&a, &b).unwrap();
        prop_assert_eq!(m.dim() + j.dim(), a.dim() + b.dim());
        prop_assert!(includes(&m, &a).unwrap() && includes(&m, &b).unwrap());
        prop_assert!(includes(&a, &j).unwrap() && includes(&b, &j).unwrap());
    }

    #[test]
    fn orthomodular_law_on_nested_pairs(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let (a, b) = random_nested_pair(&mut rng, 2..=4);
        prop_assert!(orthomodular_holds(&a, &b).unwrap());
    }

    // subspaces spanned by rays of one orthonormal basis commute and so distribute
    #[test]
    fn commuting_triples_distribute(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let basis = random_basis(&mut rng, 4);
        let frame: Vec<DVector<Complex64>> = basis
            .projectors()
            .iter()
            .map(|p| p.matrix().column(0).into_owned())
            .map(|v| v.normalize())
            .collect();
        let a = random_basis_subspace(&mut rng, &frame);
        let b = random_basis_subspace(&mut rng, &frame);
        let c = random_basis_subspace(&mut rng, &frame);
        let verdict = distributes(&a, &b, &c).unwrap();
        prop_assert!(verdict.distributive);
    }

    // the inclusion (a ∧ b) ∨ (a ∧ c) ⊆ a ∧ (b ∨ c) holds in any lattice
    #[test]
    fn distributive_inequality_always_holds(seed in any::<u64>()) {
        let (a, b, c) = triple(seed);
        prop_assert!(distributes(&a, &b, &c).unwrap().rhs_within_lhs);
    }
}

#[test]
fn axioms_hold_on_a_seeded_sample() {
    let mut rng = seeded(7);
    let sample: Vec<Subspace> = (0..40).map(|_| random_subspace_in(&mut rng, 3..=3)).collect();
    let report = check_lattice_axioms(&sample).unwrap();
    for axiom in &report.axioms {
        assert!(axiom.passed(), "{} failed at {:?}", axiom.name, axiom.counterexample);
    }
}

#[test]
fn three_rays_in_a_plane_do_not_distribute() {
    let a = Subspace::ray_real(&[1.0, 0.0]).unwrap();
    let b = Subspace::ray_real(&[0.0, 1.0]).unwrap();
    let c = Subspace::ray_real(&[1.0, 1.0]).unwrap();
    let verdict = distributes(&c, &a, &b).unwrap();
    assert!(!verdict.distributive);
    assert_eq!(verdict.lhs.dim(), 1);
    assert_eq!(verdict.rhs.dim(), 0);
}

#[test]
fn orthomodular_rejects_unordered_pairs() {
    let a = Subspace::axis(2, 0).unwrap();
    let b = Subspace::axis(2, 1).unwrap();
    assert!(orthomodular_holds(&a, &b).is_err());
}

