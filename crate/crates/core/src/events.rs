//! Finite event algebra over declared outcome universes.
//!
//! An [`OutcomeSpace`] is the disjoint union of its universes. Events are finite
//! label sets; the power set is never materialized. Complements always name the
//! universe they are taken against, see [`Complement`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// One experiment's outcome set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    id: String,
    outcomes: Vec<String>,
}

impl Universe {
    pub fn new(id: impl Into<String>, outcomes: impl IntoIterator<Item = impl Into<String>>) -> Result<Self> {
        let id = id.into();
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.is_empty() {
            return Err(Error::EmptyUniverse(id));
        }
        let mut seen = BTreeSet::new();
        for o in &outcomes {
            if !seen.insert(o.as_str()) {
                return Err(Error::DuplicateLabel(o.clone()));
            }
        }
        Ok(Self { id, outcomes })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }
}

/// Disjoint union of universes with globally distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    universes: Vec<Universe>,
    labels: Vec<String>,
    owner: Vec<usize>,
}

impl OutcomeSpace {
    pub fn new(universes: Vec<Universe>) -> Result<Arc<Self>> {
        let mut labels = Vec::new();
        let mut owner = Vec::new();
        let mut seen = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for (u, universe) in universes.iter().enumerate() {
            if !ids.insert(universe.id.clone()) {
                return Err(Error::DuplicateLabel(universe.id.clone()));
            }
            for o in &universe.outcomes {
                if !seen.insert(o.clone()) {
                    return Err(Error::DuplicateLabel(o.clone()));
                }
                labels.push(o.clone());
                owner.push(u);
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyUniverse("X".into()));
        }
        Ok(Arc::new(Self { universes, labels, owner }))
    }

    /// A space made of a single universe named `X`.
    pub fn single(outcomes: impl IntoIterator<Item = impl Into<String>>) -> Result<Arc<Self>> {
        Self::new(vec![Universe::new("X", outcomes)?])
    }

    pub fn universes(&self) -> &[Universe] {
        &self.universes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn universe(&self, id: &str) -> Result<&Universe> {
        self.universes.iter().find(|u| u.id == id).ok_or_else(|| Error::UnknownUniverse(id.to_string()))
    }

    /// The universe containing `label`.
    pub fn universe_of(&self, label: &str) -> Result<&Universe> {
        Ok(&self.universes[self.owner[self.index_of(label)?]])
    }

    pub fn event(self: &Arc<Self>, labels: &[&str]) -> Result<EventSet> {
        let members = labels.iter().map(|l| self.index_of(l)).collect::<Result<BTreeSet<_>>>()?;
        Ok(EventSet { space: Arc::clone(self), members })
    }

    pub fn empty_event(self: &Arc<Self>) -> EventSet {
        EventSet { space: Arc::clone(self), members: BTreeSet::new() }
    }

    /// The whole space `X` as an event.
    pub fn whole(self: &Arc<Self>) -> EventSet {
        EventSet { space: Arc::clone(self), members: (0..self.len()).collect() }
    }

    /// A universe's label set as an event.
    pub fn universe_event(self: &Arc<Self>, id: &str) -> Result<EventSet> {
        let u = self.universes.iter().position(|u| u.id == id).ok_or_else(|| Error::UnknownUniverse(id.to_string()))?;
        let members = (0..self.len()).filter(|&i| self.owner[i] == u).collect();
        Ok(EventSet { space: Arc::clone(self), members })
    }

    fn event_from_indices(self: &Arc<Self>, members: BTreeSet<usize>) -> EventSet {
        EventSet { space: Arc::clone(self), members }
    }
}

/// A finite set of outcome labels drawn from one [`OutcomeSpace`].
#[derive(Debug, Clone)]
pub struct EventSet {
    space: Arc<OutcomeSpace>,
    members: BTreeSet<usize>,
}

impl PartialEq for EventSet {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.members == other.members
    }
}

impl Eq for EventSet {}

impl fmt::Display for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (k, label) in self.labels().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "}}")
    }
}

fn same_space(a: &Arc<OutcomeSpace>, b: &Arc<OutcomeSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl EventSet {
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> + '_ {
        self.members.iter().map(|&i| self.space.labels[i].as_str())
    }

    pub fn label_vec(&self) -> Vec<String> {
        self.labels().map(str::to_string).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.space.index_of(label).is_ok_and(|i| self.members.contains(&i))
    }

    fn check_space(&self, other: &EventSet) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn union(&self, other: &EventSet) -> Result<EventSet> {
        self.check_space(other)?;
        Ok(self.space.event_from_indices(self.members.union(&other.members).copied().collect()))
    }

    pub fn intersect(&self, other: &EventSet) -> Result<EventSet> {
        self.check_space(other)?;
        Ok(self.space.event_from_indices(self.members.intersection(&other.members).copied().collect()))
    }

    pub fn is_subset(&self, other: &EventSet) -> Result<bool> {
        self.check_space(other)?;
        Ok(self.members.is_subset(&other.members))
    }
}

/// The set a complement is taken against. There is deliberately no default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Complement<'a> {
    /// A single declared universe `Ω`, by id.
    Universe(&'a str),
    /// The whole outcome space `X`.
    Whole,
}

impl fmt::Display for Complement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Complement::Universe(id) => write!(f, "Ω_{id}"),
            Complement::Whole => write!(f, "X"),
        }
    }
}

/// `U ∖ e`. Fails if `e` has a member outside `U`.
pub fn complement_relative(e: &EventSet, against: Complement<'_>) -> Result<EventSet> {
    let universe = match against {
        Complement::Whole => e.space.whole(),
        Complement::Universe(id) => e.space.universe_event(id)?,
    };
    if let Some(&outside) = e.members.difference(&universe.members).next() {
        return Err(Error::OutsideUniverse {
            label: e.space.labels[outside].clone(),
            universe: against.to_string(),
        });
    }
    Ok(e.space.event_from_indices(universe.members.difference(&e.members).copied().collect()))
}

/// Both sides of `a ∩ (b ∪ c)` versus `(a ∩ b) ∪ (a ∩ c)` for finite sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SetVerdict {
    pub lhs: EventSet,
    pub rhs: EventSet,
}

impl SetVerdict {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn distributes_classical(a: &EventSet, b: &EventSet, c: &EventSet) -> Result<SetVerdict> {
    let lhs = a.intersect(&b.union(c)?)?;
    let rhs = a.intersect(b)?.union(&a.intersect(c)?)?;
    Ok(SetVerdict { lhs, rhs })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceLine {
    pub expression: String,
    pub value: EventSet,
}

/// Step-by-step evaluation showing that an atom `a` survives distribution over
/// `b ∪ b′` when every complement is taken against the whole space.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTrace {
    pub target: String,
    pub interposed: String,
    pub lines: Vec<TraceLine>,
}

impl DistributionTrace {
    /// Every line evaluates to `{a}`.
    pub fn ends_at_target(&self) -> bool {
        let target = &self.target;
        self.lines.iter().all(|l| l.value.len() == 1 && l.value.contains(target))
    }
}

fn union_all(space: &Arc<OutcomeSpace>, events: impl IntoIterator<Item = EventSet>) -> Result<EventSet> {
    events.into_iter().try_fold(space.empty_event(), |acc, e| acc.union(&e))
}

/// Evaluates the chain
/// `a ∩ X = a ∩ (b ∪ b′) = (a ∩ b) ∪ (a ∩ b′) = … = a` for atoms `a`, `b` of the
/// space, taking every complement against `X`, and records each line.
pub fn atom_distribution_trace(target: &str, interposed: &str, space: &Arc<OutcomeSpace>) -> Result<DistributionTrace> {
    let a = space.event(&[target])?;
    let b = space.event(&[interposed])?;
    let x = space.whole();
    let b_c = complement_relative(&b, Complement::Whole)?;
    let mut lines = Vec::new();
    let mut push = |expression: String, value: EventSet| lines.push(TraceLine { expression, value });

    push(format!("{target} ∩ X"), a.intersect(&x)?);
    push(format!("{target} ∩ ({interposed} ∪ {interposed}′_X)"), a.intersect(&b.union(&b_c)?)?);
    push(
        format!("({target} ∩ {interposed}) ∪ ({target} ∩ {interposed}′_X)"),
        a.intersect(&b)?.union(&a.intersect(&b_c)?)?,
    );

    // b′_X spelled out atom by atom
    let atoms: Vec<EventSet> = space.labels().iter().map(|l| space.event(&[l.as_str()])).collect::<Result<_>>()?;
    let rest: Vec<&EventSet> = atoms.iter().filter(|x| **x != b).collect();
    let spelled = union_all(space, rest.iter().map(|x| (*x).clone()))?;
    let rest_names: Vec<String> = rest.iter().flat_map(|x| x.label_vec()).collect();
    push(
        format!("({target} ∩ {interposed}) ∪ [{target} ∩ ({})]", if rest_names.is_empty() { "∅".to_string() } else { rest_names.join(" ∪ ") }),
        a.intersect(&b)?.union(&a.intersect(&spelled)?)?,
    );

    // distribute over every atom and its complement
    let mut pairs = Vec::new();
    for x in &atoms {
        let xc = complement_relative(x, Complement::Whole)?;
        pairs.push(a.intersect(x)?.union(&a.intersect(&xc)?)?);
    }
    push(format!("⋃_x [({target} ∩ x) ∪ ({target} ∩ x′_X)], x ∈ X"), union_all(space, pairs)?);

    // terminal rule: a ∩ x = ∅ for every atom x ≠ a
    let singles: Vec<EventSet> = atoms.iter().map(|x| a.intersect(x)).collect::<Result<_>>()?;
    push(format!("({target} ∩ {target}) ∪ ⋃_(x ≠ {target}) ({target} ∩ x)"), union_all(space, singles)?);
    push(target.to_string(), a.clone());

    Ok(DistributionTrace { target: target.to_string(), interposed: interposed.to_string(), lines })
}

/// The two sides `a ∩ (b ∪ b′)` and `(a ∩ b) ∪ (a ∩ b′)` under one choice of
/// complement universe per side.
#[derive(Debug, Clone, PartialEq)]
pub struct SidePair {
    pub lhs_universe: String,
    pub rhs_universe: String,
    pub lhs: EventSet,
    pub rhs: EventSet,
}

impl SidePair {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchReport {
    pub target: String,
    pub interposed: String,
    pub target_universe: String,
    pub interposed_universe: String,
    /// Both sides complemented against `X`.
    pub consistent_whole: SidePair,
    /// Both sides complemented against `Ω_b`; needs the target coerced into `Ω_b`.
    pub consistent_local: Option<SidePair>,
    /// Left side against `X`, right side against `Ω_b`.
    pub mixed: Option<SidePair>,
    pub coerced: bool,
    pub log: Vec<String>,
}

impl MismatchReport {
    /// The mixed evaluation disagrees while both consistent ones agree.
    pub fn inequality_from_mismatch(&self) -> bool {
        let mixed_differs = self.mixed.as_ref().is_some_and(|m| !m.equal());
        let local_ok = self.consistent_local.as_ref().is_none_or(SidePair::equal);
        mixed_differs && local_ok && self.consistent_whole.equal()
    }
}

fn sides(
    a: &EventSet,
    b: &EventSet,
    lhs_against: Complement<'_>,
    rhs_against: Complement<'_>,
) -> Result<SidePair> {
    let lhs = a.intersect(&b.union(&complement_relative(b, lhs_against)?)?)?;
    let rhs_c = complement_relative(b, rhs_against)?;
    let rhs = a.intersect(b)?.union(&a.intersect(&rhs_c)?)?;
    Ok(SidePair { lhs_universe: lhs_against.to_string(), rhs_universe: rhs_against.to_string(), lhs, rhs })
}

/// Reproduces the distributivity failure that appears when the two sides of
/// `a ∩ (b ∪ b′) = (a ∩ b) ∪ (a ∩ b′)` complement `b` against different sets.
///
/// Without `coerce` only the consistent evaluation against `X` is produced; the
/// evaluations involving `Ω_b` are refused because `a` lies outside `Ω_b`.
pub fn universe_mismatch_demo(
    target: &str,
    interposed: &str,
    space: &Arc<OutcomeSpace>,
    coerce: bool,
) -> Result<MismatchReport> {
    let target_universe = space.universe_of(target)?.id().to_string();
    let interposed_universe = space.universe_of(interposed)?.id().to_string();
    if target_universe == interposed_universe {
        return Err(Error::SameUniverse(target.to_string(), interposed.to_string()));
    }
    let a = space.event(&[target])?;
    let b = space.event(&[interposed])?;
    let local = Complement::Universe(&interposed_universe);
    let mut log = Vec::new();

    let consistent_whole = sides(&a, &b, Complement::Whole, Complement::Whole)?;

    let (consistent_local, mixed) = if coerce {
        log.push(format!("coerce: complement of {interposed} taken against {local} on the right-hand side only"));
        let mixed = sides(&a, &b, Complement::Whole, local)?;
        let omega_b = space.universe_event(&interposed_universe)?;
        let a_local = a.intersect(&omega_b)?;
        log.push(format!("coerce: {target} ∉ {local}, restricted to {target} ∩ {local} = {a_local}"));
        let consistent_local = sides(&a_local, &b, local, local)?;
        (Some(consistent_local), Some(mixed))
    } else {
        log.push(format!(
            "refused: {target} lies outside {local}; evaluations against {local} need explicit coercion"
        ));
        (None, None)
    };
    if mixed.as_ref().is_some_and(|m| !m.equal()) {
        log.push("inequality manufactured by complement-universe mismatch".to_string());
    }

    Ok(MismatchReport {
        target: target.to_string(),
        interposed: interposed.to_string(),
        target_universe,
        interposed_universe,
        consistent_whole,
        consistent_local,
        mixed,
        coerced: coerce,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numbered(n: usize) -> Arc<OutcomeSpace> {
        OutcomeSpace::single((1..=n).map(|i| i.to_string())).unwrap()
    }

    fn two_contexts() -> Arc<OutcomeSpace> {
        OutcomeSpace::new(vec![
            Universe::new("a", ["a1", "a2"]).unwrap(),
            Universe::new("b", ["b1", "b2"]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn union_and_intersection() {
        let s = numbered(4);
        assert_eq!(s.event(&["1"]).unwrap().union(&s.event(&["2"]).unwrap()).unwrap(), s.event(&["1", "2"]).unwrap());
        assert_eq!(
            s.event(&["1", "2"]).unwrap().intersect(&s.event(&["2", "3"]).unwrap()).unwrap(),
            s.event(&["2"]).unwrap()
        );
        assert!(s.event(&["1", "3"]).unwrap().intersect(&s.empty_event()).unwrap().is_empty());
    }

    #[test]
    fn events_from_different_spaces_do_not_mix() {
        let s = numbered(3);
        let t = numbered(4);
        assert_eq!(s.whole().union(&t.whole()), Err(Error::SpaceMismatch));
    }

    #[test]
    fn invalid_universes() {
        assert!(matches!(Universe::new("u", Vec::<String>::new()), Err(Error::EmptyUniverse(_))));
        assert!(matches!(Universe::new("u", ["p", "p"]), Err(Error::DuplicateLabel(_))));
        let clash = OutcomeSpace::new(vec![Universe::new("u", ["p"]).unwrap(), Universe::new("v", ["p"]).unwrap()]);
        assert!(matches!(clash, Err(Error::DuplicateLabel(_))));
        assert!(matches!(numbered(2).event(&["9"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn complements() {
        let s = two_contexts();
        let b1 = s.event(&["b1"]).unwrap();
        assert_eq!(complement_relative(&b1, Complement::Universe("b")).unwrap(), s.event(&["b2"]).unwrap());
        assert_eq!(complement_relative(&b1, Complement::Whole).unwrap(), s.event(&["a1", "a2", "b2"]).unwrap());
        let a1 = s.event(&["a1"]).unwrap();
        assert!(matches!(complement_relative(&a1, Complement::Universe("b")), Err(Error::OutsideUniverse { .. })));
        assert!(matches!(complement_relative(&a1, Complement::Universe("q")), Err(Error::UnknownUniverse(_))));
    }

    #[test]
    fn classical_distribution_example() {
        let s = numbered(4);
        let v = distributes_classical(
            &s.event(&["1", "2"]).unwrap(),
            &s.event(&["2", "3"]).unwrap(),
            &s.event(&["3", "4"]).unwrap(),
        )
        .unwrap();
        assert_eq!(v.lhs, s.event(&["2"]).unwrap());
        assert_eq!(v.rhs, s.event(&["2"]).unwrap());
        assert!(v.equal());

        let v = distributes_classical(&s.empty_event(), &s.whole(), &s.event(&["1"]).unwrap()).unwrap();
        assert!(v.lhs.is_empty() && v.rhs.is_empty());
    }

    #[test]
    fn trace_over_four_atoms() {
        let s = OutcomeSpace::single(["a", "b", "c", "d"]).unwrap();
        let t = atom_distribution_trace("a", "b", &s).unwrap();
        assert!(t.ends_at_target(), "{t:?}");
        assert_eq!(t.lines.len(), 7);
        assert_eq!(t.lines[2].expression, "(a ∩ b) ∪ (a ∩ b′_X)");
        let same = atom_distribution_trace("a", "a", &s).unwrap();
        assert!(same.ends_at_target());
    }

    #[test]
    fn mismatch_demo() {
        let s = two_contexts();
        let r = universe_mismatch_demo("a1", "b1", &s, true).unwrap();
        let mixed = r.mixed.as_ref().unwrap();
        assert_eq!(mixed.lhs, s.event(&["a1"]).unwrap());
        assert!(mixed.rhs.is_empty());
        assert!(r.consistent_whole.equal());
        assert_eq!(r.consistent_whole.lhs, s.event(&["a1"]).unwrap());
        let local = r.consistent_local.as_ref().unwrap();
        assert!(local.lhs.is_empty() && local.rhs.is_empty());
        assert!(r.inequality_from_mismatch());
        assert!(r.log.iter().any(|l| l.contains("coerce")));

        let swapped = universe_mismatch_demo("b1", "a1", &s, true).unwrap();
        assert_eq!(swapped.mixed.as_ref().unwrap().lhs, s.event(&["b1"]).unwrap());
        assert!(swapped.mixed.unwrap().rhs.is_empty());

        let refused = universe_mismatch_demo("a1", "b1", &s, false).unwrap();
        assert!(refused.mixed.is_none() && !refused.inequality_from_mismatch());

        assert!(matches!(universe_mismatch_demo("a1", "a2", &s, true), Err(Error::SameUniverse(..))));
    }
}
