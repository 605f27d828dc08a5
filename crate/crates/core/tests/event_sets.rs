use std::collections::BTreeSet;
use std::sync::Arc;

use nogo_core::events::{
    atom_distribution_trace, complement_relative, distributes_classical, universe_mismatch_demo, Complement,
    EventSet, OutcomeSpace, Universe,
};
use proptest::prelude::*;

fn space(n: usize) -> Arc<OutcomeSpace> {
    OutcomeSpace::single((0..n).map(|i| format!("x{i}"))).unwrap()
}

fn event_from_mask(space: &Arc<OutcomeSpace>, mask: u32) -> EventSet {
    let labels: Vec<String> = (0..space.len()).filter(|i| mask >> i & 1 == 1).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    space.event(&refs).unwrap()
}

// plain bit-mask oracle for a ∩ (b ∪ c) and (a ∩ b) ∪ (a ∩ c)
fn mask_sides(a: u32, b: u32, c: u32) -> (u32, u32) {
    (a & (b | c), (a & b) | (a & c))
}

fn mask_of(e: &EventSet) -> u32 {
    e.labels().map(|l| 1u32 << l[1..].parse::<u32>().unwrap()).fold(0, |m, b| m | b)
}

#[test]
fn classical_distributivity_exhaustive_up_to_five_labels() {
    for n in 1..=5 {
        let s = space(n);
        let subsets = 1u32 << n;
        for a in 0..subsets {
            for b in 0..subsets {
                for c in 0..subsets {
                    let v = distributes_classical(
                        &event_from_mask(&s, a),
                        &event_from_mask(&s, b),
                        &event_from_mask(&s, c),
                    )
                    .unwrap();
                    let (lhs, rhs) = mask_sides(a, b, c);
                    assert!(v.equal());
                    assert_eq!(mask_of(&v.lhs), lhs);
                    assert_eq!(mask_of(&v.rhs), rhs);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classical_distributivity_on_eight_labels(a in 0u32..256, b in 0u32..256, c in 0u32..256) {
        let s = space(8);
        let v = distributes_classical(&event_from_mask(&s, a), &event_from_mask(&s, b), &event_from_mask(&s, c)).unwrap();
        prop_assert!(v.equal());
        prop_assert_eq!(mask_of(&v.lhs), mask_sides(a, b, c).0);
    }

    #[test]
    fn complement_is_an_involution(mask in 0u32..256) {
        let s = space(8);
        let e = event_from_mask(&s, mask);
        let c = complement_relative(&e, Complement::Whole).unwrap();
        prop_assert_eq!(mask_of(&c), !mask & 0xff);
        prop_assert_eq!(complement_relative(&c, Complement::Whole).unwrap(), e);
    }

    #[test]
    fn union_and_intersection_match_bit_masks(a in 0u32..256, b in 0u32..256) {
        let s = space(8);
        let (ea, eb) = (event_from_mask(&s, a), event_from_mask(&s, b));
        prop_assert_eq!(mask_of(&ea.union(&eb).unwrap()), a | b);
        prop_assert_eq!(mask_of(&ea.intersect(&eb).unwrap()), a & b);
        prop_assert_eq!(ea.is_subset(&eb).unwrap(), a & !b == 0);
    }
}

#[test]
fn every_atom_trace_collapses_to_its_target() {
    let s = space(8);
    for t in 0..8 {
        for i in 0..8 {
            let trace = atom_distribution_trace(&format!("x{t}"), &format!("x{i}"), &s).unwrap();
            assert!(trace.ends_at_target());
            let target: BTreeSet<String> = [format!("x{t}")].into();
            for line in &trace.lines {
                let got: BTreeSet<String> = line.value.label_vec().into_iter().collect();
                assert_eq!(got, target, "{}", line.expression);
            }
        }
    }
}

#[test]
fn mismatched_universes_manufacture_an_inequality() {
    let s = OutcomeSpace::new(vec![
        Universe::new("X", ["a", "x"]).unwrap(),
        Universe::new("Y", ["b", "y"]).unwrap(),
    ])
    .unwrap();
    let report = universe_mismatch_demo("a", "b", &s, true).unwrap();
    assert!(report.consistent_whole.equal());
    assert!(report.consistent_local.as_ref().unwrap().equal());
    assert!(!report.mixed.as_ref().unwrap().equal());
    assert!(report.inequality_from_mismatch());

    let refused = universe_mismatch_demo("a", "b", &s, false).unwrap();
    assert!(refused.consistent_whole.equal());
    assert!(refused.mixed.is_none());
    assert!(!refused.inequality_from_mismatch());
}

#[test]
fn events_from_different_spaces_do_not_mix() {
    let (s1, s2, s3) = (space(3), space(3), space(4));
    let a = s1.event(&["x0"]).unwrap();
    assert!(a.union(&s2.event(&["x1"]).unwrap()).is_ok());
    assert!(a.union(&s3.event(&["x0"]).unwrap()).is_err());
}
