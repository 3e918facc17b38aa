//! Finite atomic probability spaces and their event lattice.
//!
//! The sigma-algebra is the power set of the atom list, so every subset is
//! an event. Atoms of probability zero are allowed; all almost-sure
//! comparisons skip them.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, RealScalar};

/// Float-mode threshold below which an atom counts as null, and the
/// tolerance on the total mass.
pub const FLOAT_NULL_PROB: f64 = 1e-12;
/// Default zero tolerance for float-valued scalars.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: String,
    pub prob: Rational,
}

impl Atom {
    pub fn new(id: impl Into<String>, prob: Rational) -> Self {
        Self {
            id: id.into(),
            prob,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Exact,
    /// Float mode: `tol` is the zero tolerance for scalar values.
    Float { tol: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbSpace {
    atoms: Vec<Atom>,
    mode: Mode,
}

/// Shared handle; every L0 value keeps one.
pub type Space = Arc<ProbSpace>;

impl ProbSpace {
    /// Exact space: probabilities must sum to one exactly.
    pub fn new(atoms: Vec<Atom>) -> Result<Space> {
        Self::build(atoms, Mode::Exact)
    }

    /// Float space: the total may deviate from one by at most 1e-12 and
    /// atoms below 1e-12 are null.
    pub fn new_float(atoms: Vec<Atom>, tol: f64) -> Result<Space> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidSpace(format!("tolerance {tol} must be positive")));
        }
        Self::build(atoms, Mode::Float { tol })
    }

    /// Uniform exact space with atoms named `a1`, `a2`, ...
    pub fn uniform(count: usize) -> Space {
        let p = Rational::from_ratio(1, count as i64);
        let atoms = (1..=count).map(|i| Atom::new(format!("a{i}"), p.clone())).collect();
        Self::new(atoms).expect("uniform space is valid")
    }

    fn build(atoms: Vec<Atom>, mode: Mode) -> Result<Space> {
        if atoms.is_empty() {
            return Err(Error::InvalidSpace("at least one atom is required".into()));
        }
        let mut seen = HashSet::new();
        for atom in &atoms {
            if atom.id.is_empty() || atom.id.chars().any(|c| c.is_whitespace() || c == ',' || c == ':') {
                return Err(Error::InvalidSpace(format!("bad atom id `{}`", atom.id)));
            }
            if !seen.insert(atom.id.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate atom id `{}`", atom.id)));
            }
            if atom.prob.is_negative() {
                return Err(Error::InvalidSpace(format!("atom `{}` has negative probability", atom.id)));
            }
        }
        let total: Rational = atoms.iter().map(|a| a.prob.clone()).sum();
        let one = Rational::from_ratio(1, 1);
        let ok = match mode {
            Mode::Exact => total == one,
            Mode::Float { .. } => (total - one).abs().to_f64() <= FLOAT_NULL_PROB,
        };
        if !ok {
            return Err(Error::InvalidSpace("probabilities must sum to 1".into()));
        }
        Ok(Arc::new(Self { atoms, mode }))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Zero tolerance for float scalars; exact scalars ignore it.
    pub fn tol(&self) -> f64 {
        match self.mode {
            Mode::Exact => 0.0,
            Mode::Float { tol } => tol,
        }
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a.id == id)
    }

    pub fn is_null_atom(&self, index: usize) -> bool {
        let p = &self.atoms[index].prob;
        match self.mode {
            Mode::Exact => p.is_zero(),
            Mode::Float { .. } => p.to_f64() < FLOAT_NULL_PROB,
        }
    }

    /// Indices of atoms that carry positive probability.
    pub fn positive_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| !self.is_null_atom(i))
    }
}

/// Two handles denote the same space if they are the same allocation or
/// structurally equal.
pub fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_same(a: &Space, b: &Space) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch)
    }
}

/// A set of atoms. Equality as values is exact set equality; use
/// [`Event::eq_as`] for almost-sure equality.
#[derive(Clone, PartialEq)]
pub struct Event {
    space: Space,
    members: Vec<bool>,
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Event{{{}}}", self.ids().join(","))
    }
}

impl Event {
    pub fn from_mask(space: &Space, members: Vec<bool>) -> Result<Self> {
        if members.len() != space.len() {
            return Err(Error::AtomCountMismatch {
                expected: space.len(),
                found: members.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    pub fn from_ids<S: AsRef<str>>(space: &Space, ids: &[S]) -> Result<Self> {
        let mut members = vec![false; space.len()];
        for id in ids {
            let i = space
                .index_of(id.as_ref())
                .ok_or_else(|| Error::UnknownAtom(id.as_ref().to_string()))?;
            members[i] = true;
        }
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    pub fn from_indices(space: &Space, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut members = vec![false; space.len()];
        for i in indices {
            members[i] = true;
        }
        Self {
            space: space.clone(),
            members,
        }
    }

    pub fn empty(space: &Space) -> Self {
        Self {
            space: space.clone(),
            members: vec![false; space.len()],
        }
    }

    pub fn full(space: &Space) -> Self {
        Self {
            space: space.clone(),
            members: vec![true; space.len()],
        }
    }

    pub fn singleton(space: &Space, index: usize) -> Self {
        Self::from_indices(space, [index])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members[index]
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    /// Member atoms of positive probability.
    pub fn positive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices().filter(move |&i| !self.space.is_null_atom(i))
    }

    pub fn ids(&self) -> Vec<String> {
        self.indices().map(|i| self.space.atoms[i].id.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn prob(&self) -> Rational {
        self.indices().map(|i| self.space.atoms[i].prob.clone()).sum()
    }

    /// Probability zero (in float mode: no member is a positive atom).
    pub fn is_null(&self) -> bool {
        self.positive_indices().next().is_none()
    }

    pub fn complement(&self) -> Self {
        Self {
            space: self.space.clone(),
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        check_same(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a != b)
    }

    /// Almost-sure equality: the symmetric difference is null.
    pub fn eq_as(&self, other: &Self) -> Result<bool> {
        Ok(self.symmetric_difference(other)?.is_null())
    }

    /// `self ⊆ other` up to a null set.
    pub fn subset_as(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_null())
    }
}

fn common_space(family: &[Event]) -> Result<Space> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    for e in &family[1..] {
        check_same(&first.space, &e.space)?;
    }
    Ok(first.space.clone())
}

/// True iff the parts are pairwise disjoint up to null sets and their union
/// has full probability.
pub fn partition_validate(parts: &[Event]) -> Result<bool> {
    let space = common_space(parts)?;
    for i in space.positive_atoms() {
        let hits = parts.iter().filter(|p| p.contains(i)).count();
        if hits != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Essential supremum of a finite family of events: the union.
pub fn ess_sup_events(family: &[Event]) -> Result<Event> {
    let space = common_space(family)?;
    let mut acc = Event::empty(&space);
    for e in family {
        acc = acc.union(e)?;
    }
    Ok(acc)
}

/// Essential infimum of a finite family of events: the intersection.
pub fn ess_inf_events(family: &[Event]) -> Result<Event> {
    let space = common_space(family)?;
    let mut acc = Event::full(&space);
    for e in family {
        acc = acc.intersection(e)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn lit(s: &str) -> Rational {
        <Rational as crate::scalar::Scalar>::parse_literal(s).unwrap()
    }

    fn abc_with_null() -> Space {
        ProbSpace::new(vec![
            Atom::new("a", q(1, 2)),
            Atom::new("b", q(1, 4)),
            Atom::new("c", q(1, 4)),
            Atom::new("z", q(0, 1)),
        ])
        .unwrap()
    }

    fn ev(s: &Space, ids: &[&str]) -> Event {
        Event::from_ids(s, ids).unwrap()
    }

    #[test]
    fn space_validation() {
        assert!(ProbSpace::new(vec![]).is_err());
        let err = ProbSpace::new(vec![Atom::new("a", q(9, 10))]).unwrap_err();
        assert_eq!(err.to_string(), "invalid probability space: probabilities must sum to 1");
        assert!(ProbSpace::new(vec![Atom::new("a", q(1, 2)), Atom::new("a", q(1, 2))]).is_err());
        assert!(ProbSpace::new(vec![Atom::new("a", q(3, 2)), Atom::new("b", q(-1, 2))]).is_err());
        let s = ProbSpace::new_float(
            vec![Atom::new("a", q(1, 3)), Atom::new("b", lit("0.666666666666667"))],
            1e-9,
        );
        assert!(s.is_ok());
    }

    #[test]
    fn partition_examples() {
        let s = ProbSpace::uniform(2);
        let a = ev(&s, &["a1"]);
        let b = ev(&s, &["a2"]);
        let ab = ev(&s, &["a1", "a2"]);
        assert!(partition_validate(&[a.clone(), b]).unwrap());
        assert!(partition_validate(&[ab.clone(), Event::empty(&s)]).unwrap());
        assert!(!partition_validate(&[a, ab]).unwrap());
    }

    #[test]
    fn partition_ignores_null_atoms() {
        let s = abc_with_null();
        let p1 = [ev(&s, &["a"]), ev(&s, &["b", "c"])];
        let p2 = [ev(&s, &["a", "z"]), ev(&s, &["b", "c", "z"])];
        assert!(partition_validate(&p1).unwrap());
        assert!(partition_validate(&p2).unwrap());
    }

    #[test]
    fn partition_mixed_spaces_is_error() {
        let s1 = ProbSpace::uniform(2);
        let s2 = ProbSpace::uniform(3);
        assert_eq!(
            partition_validate(&[Event::full(&s1), Event::empty(&s2)]),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn ess_sup_and_inf_examples() {
        let s = abc_with_null();
        let sup = ess_sup_events(&[ev(&s, &["a"]), ev(&s, &["b"])]).unwrap();
        assert_eq!(sup, ev(&s, &["a", "b"]));
        let idem = ess_sup_events(&[ev(&s, &["a"]), ev(&s, &["a"])]).unwrap();
        assert_eq!(idem, ev(&s, &["a"]));
        let with_null = ess_sup_events(&[ev(&s, &["a"]), ev(&s, &["z"])]).unwrap();
        assert_eq!(with_null, ev(&s, &["a", "z"]));
        assert!(with_null.eq_as(&ev(&s, &["a"])).unwrap());

        let inf = ess_inf_events(&[ev(&s, &["a", "b"]), ev(&s, &["b", "c"])]).unwrap();
        assert_eq!(inf, ev(&s, &["b"]));
        assert!(ess_inf_events(&[ev(&s, &["a"]), ev(&s, &["b"])]).unwrap().is_empty());
        assert_eq!(ess_inf_events(&[ev(&s, &["c"])]).unwrap(), ev(&s, &["c"]));

        assert_eq!(ess_sup_events(&[]), Err(Error::EmptyFamily));
        assert_eq!(ess_inf_events(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn event_probabilities() {
        let s = abc_with_null();
        assert_eq!(ev(&s, &["a", "c"]).prob(), q(3, 4));
        assert!(ev(&s, &["z"]).is_null());
        assert!(!ev(&s, &["z"]).is_empty());
        assert!(ev(&s, &["a", "z"]).subset_as(&ev(&s, &["a"])).unwrap());
    }

    #[test]
    fn float_mode_null_atoms() {
        let s = ProbSpace::new_float(
            vec![Atom::new("a", q(1, 1)), Atom::new("b", lit("1e-13"))],
            1e-9,
        )
        .unwrap();
        assert!(s.is_null_atom(1));
        assert!(!s.is_null_atom(0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn mask(n: usize) -> impl Strategy<Value = Vec<bool>> {
            proptest::collection::vec(any::<bool>(), n)
        }

        proptest! {
            #[test]
            fn ess_sup_is_associative_over_family_splits(
                f1 in proptest::collection::vec(mask(4), 1..4),
                f2 in proptest::collection::vec(mask(4), 1..4),
            ) {
                let s = abc_with_null();
                let e1: Vec<Event> = f1.into_iter().map(|m| Event::from_mask(&s, m).unwrap()).collect();
                let e2: Vec<Event> = f2.into_iter().map(|m| Event::from_mask(&s, m).unwrap()).collect();
                let all: Vec<Event> = e1.iter().chain(&e2).cloned().collect();
                let lhs = ess_sup_events(&all).unwrap();
                let rhs = ess_sup_events(&[ess_sup_events(&e1).unwrap(), ess_sup_events(&e2).unwrap()]).unwrap();
                prop_assert!(lhs.eq_as(&rhs).unwrap());
            }

            #[test]
            fn partition_check_respects_null_perturbation(
                cells in proptest::collection::vec(mask(4), 1..4),
                flips in proptest::collection::vec(any::<bool>(), 1..4),
            ) {
                let s = abc_with_null();
                let parts: Vec<Event> = cells.iter().map(|m| Event::from_mask(&s, m.clone()).unwrap()).collect();
                let perturbed: Vec<Event> = cells
                    .iter()
                    .zip(flips.iter().cycle())
                    .map(|(m, &f)| {
                        let mut m = m.clone();
                        m[3] = f;
                        Event::from_mask(&s, m).unwrap()
                    })
                    .collect();
                prop_assert_eq!(partition_validate(&parts).unwrap(), partition_validate(&perturbed).unwrap());
            }
        }
    }
}
