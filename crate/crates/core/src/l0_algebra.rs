//! The algebra L0(F, K) over a finite atomic space: one K-value per atom.
//!
//! Arithmetic through `std::ops` panics when the operands live on different
//! spaces (like shape mismatches in array libraries); the `try_*` methods
//! report it as [`Error::SpaceMismatch`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::prob_space::{check_same, Event, Space};
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, PartialEq)]
pub struct L0Scalar<K> {
    space: Space,
    values: Vec<K>,
}

impl<K: Scalar> fmt::Debug for L0Scalar<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(Scalar::render).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Order relations available for [`L0Scalar::compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Greater,
    GreaterEq,
    Equal,
}

impl<K: Scalar> L0Scalar<K> {
    pub fn new(space: &Space, values: Vec<K>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::AtomCountMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub(crate) fn from_fn(space: &Space, f: impl FnMut(usize) -> K) -> Self {
        Self {
            space: space.clone(),
            values: (0..space.len()).map(f).collect(),
        }
    }

    pub fn constant(space: &Space, value: K) -> Self {
        Self {
            space: space.clone(),
            values: vec![value; space.len()],
        }
    }

    pub fn zero(space: &Space) -> Self {
        Self::constant(space, K::zero())
    }

    pub fn one(space: &Space) -> Self {
        Self::constant(space, K::one())
    }

    /// The idempotent Ĩ_A as a scalar.
    pub fn indicator(event: &Event) -> Self {
        Self::from_fn(event.space(), |i| if event.contains(i) { K::one() } else { K::zero() })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[K] {
        &self.values
    }

    pub fn at(&self, atom: usize) -> &K {
        &self.values[atom]
    }

    pub fn into_values(self) -> Vec<K> {
        self.values
    }

    fn tol(&self) -> f64 {
        self.space.tol()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&K, &K) -> K) -> Result<Self> {
        check_same(&self.space, &other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn map(&self, f: impl Fn(&K) -> K) -> Self {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    /// Multiplication by a constant of K.
    pub fn scalar_mul(&self, k: &K) -> Self {
        self.map(|a| a.clone() * k.clone())
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    /// ξ⁻¹: the reciprocal where ξ ≠ 0 and 0 elsewhere, so that
    /// ξ·ξ⁻¹ = Ĩ_{[|ξ|>0]}.
    pub fn pseudo_inverse(&self) -> Self {
        let tol = self.tol();
        self.map(|a| if a.is_zero_within(tol) { K::zero() } else { a.recip() })
    }

    /// |ξ|² as a real scalar.
    pub fn abs_sq(&self) -> L0Scalar<K::Real> {
        L0Scalar {
            space: self.space.clone(),
            values: self.values.iter().map(Scalar::abs_sq).collect(),
        }
    }

    /// Ĩ_A·ξ.
    pub fn restrict(&self, event: &Event) -> Self {
        debug_assert!(crate::prob_space::same_space(&self.space, event.space()));
        Self::from_fn(&self.space, |i| {
            if event.contains(i) {
                self.values[i].clone()
            } else {
                K::zero()
            }
        })
    }

    /// The event [|ξ| > 0].
    pub fn support(&self) -> Event {
        let tol = self.tol();
        Event::from_indices(
            &self.space,
            self.values
                .iter()
                .enumerate()
                .filter_map(|(i, v)| (!v.is_zero_within(tol)).then_some(i)),
        )
    }

    /// Almost-sure equality.
    pub fn eq_as(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.is_zero_as())
    }

    pub fn is_zero_as(&self) -> bool {
        self.support().is_null()
    }

    /// Almost-sure equality restricted to `event`.
    pub fn eq_on(&self, other: &Self, event: &Event) -> Result<bool> {
        let diff = self.try_sub(other)?.support();
        Ok(diff.intersection(event)?.is_null())
    }

    /// Real values, rejecting any atom with a nonzero imaginary part.
    pub fn real_values(&self) -> Result<Vec<K::Real>> {
        let tol = self.tol();
        self.values
            .iter()
            .map(|v| if v.is_real_within(tol) { Ok(v.re()) } else { Err(Error::ComplexOrder) })
            .collect()
    }

    pub fn to_real(&self) -> Result<L0Scalar<K::Real>> {
        Ok(L0Scalar {
            space: self.space.clone(),
            values: self.real_values()?,
        })
    }

    /// The event [ξ ⋈ η] for a real-valued pair.
    pub fn compare(&self, other: &Self, relation: Relation) -> Result<Event> {
        check_same(&self.space, &other.space)?;
        let a = self.real_values()?;
        let b = other.real_values()?;
        let tol = self.tol();
        let members = a
            .iter()
            .zip(&b)
            .map(|(x, y)| {
                let diff = K::from_real(x.clone() - y.clone());
                let equal = diff.is_zero_within(tol);
                match relation {
                    Relation::Equal => equal,
                    Relation::Greater => !equal && x > y,
                    Relation::GreaterEq => equal || x > y,
                }
            })
            .collect();
        Event::from_mask(&self.space, members)
    }

    /// ξ ≤ η almost surely.
    pub fn leq_as(&self, other: &Self) -> Result<bool> {
        Ok(other.compare(self, Relation::GreaterEq)?.complement().is_null())
    }

    /// ξ ≤ η on `event` (almost surely).
    pub fn leq_on(&self, other: &Self, event: &Event) -> Result<bool> {
        let bad = other.compare(self, Relation::GreaterEq)?.complement();
        Ok(bad.intersection(event)?.is_null())
    }

    /// ξ > η on `event`: strict inequality at every positive atom of it.
    pub fn gt_on(&self, other: &Self, event: &Event) -> Result<bool> {
        let good = self.compare(other, Relation::Greater)?;
        Ok(event.difference(&good)?.is_null())
    }
}

impl<R: RealScalar> L0Scalar<R> {
    pub fn from_real_values(space: &Space, values: Vec<R>) -> Result<Self> {
        Self::new(space, values)
    }

    /// Embeds a real scalar into a (possibly complex) field.
    pub fn lift<K: Scalar<Real = R>>(&self) -> L0Scalar<K> {
        L0Scalar {
            space: self.space.clone(),
            values: self.values.iter().cloned().map(K::from_real).collect(),
        }
    }
}

fn lattice_fold<K: Scalar>(
    set: &[L0Scalar<K>],
    pick_left: impl Fn(&K::Real, &K::Real) -> bool,
) -> Result<L0Scalar<K>> {
    let first = set.first().ok_or(Error::EmptyFamily)?;
    let mut best = first.real_values()?;
    for other in &set[1..] {
        check_same(&first.space, &other.space)?;
        for (b, v) in best.iter_mut().zip(other.real_values()?) {
            if !pick_left(b, &v) {
                *b = v;
            }
        }
    }
    Ok(L0Scalar {
        space: first.space.clone(),
        values: best.into_iter().map(K::from_real).collect(),
    })
}

/// ⋁ of a finite nonempty family of real scalars: per-atom maximum.
pub fn lattice_sup<K: Scalar>(set: &[L0Scalar<K>]) -> Result<L0Scalar<K>> {
    lattice_fold(set, |a, b| a >= b)
}

/// ⋀ of a finite nonempty family of real scalars: per-atom minimum.
pub fn lattice_inf<K: Scalar>(set: &[L0Scalar<K>]) -> Result<L0Scalar<K>> {
    lattice_fold(set, |a, b| a <= b)
}

/// The idempotent Ĩ_A of an event.
#[derive(Debug, Clone, PartialEq)]
pub struct Idempotent {
    event: Event,
}

impl Idempotent {
    pub fn new(event: Event) -> Self {
        Self { event }
    }

    pub fn event(&self) -> &Event {
        &self.event
    }

    pub fn to_scalar<K: Scalar>(&self) -> L0Scalar<K> {
        L0Scalar::indicator(&self.event)
    }
}

impl<'a, K: Scalar> Add<&'a L0Scalar<K>> for &'a L0Scalar<K> {
    type Output = L0Scalar<K>;
    fn add(self, rhs: &'a L0Scalar<K>) -> L0Scalar<K> {
        self.try_add(rhs).expect("L0 addition across spaces")
    }
}

impl<'a, K: Scalar> Sub<&'a L0Scalar<K>> for &'a L0Scalar<K> {
    type Output = L0Scalar<K>;
    fn sub(self, rhs: &'a L0Scalar<K>) -> L0Scalar<K> {
        self.try_sub(rhs).expect("L0 subtraction across spaces")
    }
}

impl<'a, K: Scalar> Mul<&'a L0Scalar<K>> for &'a L0Scalar<K> {
    type Output = L0Scalar<K>;
    fn mul(self, rhs: &'a L0Scalar<K>) -> L0Scalar<K> {
        self.try_mul(rhs).expect("L0 multiplication across spaces")
    }
}

impl<K: Scalar> Neg for &L0Scalar<K> {
    type Output = L0Scalar<K>;
    fn neg(self) -> L0Scalar<K> {
        self.map(|a| -a.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob_space::{Atom, ProbSpace};
    use crate::scalar::{GaussianRational, Rational};
    use num_complex::Complex;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn s2() -> Space {
        ProbSpace::uniform(2)
    }

    fn sc(space: &Space, vals: &[(i64, i64)]) -> L0Scalar<Rational> {
        L0Scalar::new(space, vals.iter().map(|&(p, d)| q(p, d)).collect()).unwrap()
    }

    fn ints(space: &Space, vals: &[i64]) -> L0Scalar<Rational> {
        L0Scalar::new(space, vals.iter().map(|&p| q(p, 1)).collect()).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let s = s2();
        assert_eq!(&ints(&s, &[1, 2]) + &ints(&s, &[3, 4]), ints(&s, &[4, 6]));
        assert_eq!(&ints(&s, &[1, 2]) * &ints(&s, &[0, 1]), ints(&s, &[0, 2]));
        let xi = ints(&s, &[7, -3]);
        assert_eq!(&xi + &L0Scalar::zero(&s), xi);
        assert_eq!(xi.scalar_mul(&q(1, 2)), sc(&s, &[(7, 2), (-3, 2)]));
    }

    #[test]
    fn space_mismatch_is_reported() {
        let a = ints(&s2(), &[1, 2]);
        let b = ints(&ProbSpace::uniform(3), &[1, 2, 3]);
        assert_eq!(a.try_add(&b), Err(Error::SpaceMismatch));
        assert!(L0Scalar::<Rational>::new(&s2(), vec![q(1, 1)]).is_err());
    }

    #[test]
    fn pseudo_inverse_examples() {
        let s = s2();
        assert_eq!(ints(&s, &[2, 0]).pseudo_inverse(), sc(&s, &[(1, 2), (0, 1)]));
        assert_eq!(ints(&s, &[0, 0]).pseudo_inverse(), ints(&s, &[0, 0]));
        assert_eq!(ints(&s, &[1, -4]).pseudo_inverse(), sc(&s, &[(1, 1), (-1, 4)]));
        let xi = ints(&s, &[2, 0]);
        assert_eq!(&xi * &xi.pseudo_inverse(), L0Scalar::indicator(&xi.support()));
    }

    #[test]
    fn support_and_compare() {
        let s = s2();
        assert_eq!(ints(&s, &[2, 0]).support(), Event::from_ids(&s, &["a1"]).unwrap());
        let gt = ints(&s, &[1, 3]).compare(&ints(&s, &[2, 2]), Relation::Greater).unwrap();
        assert_eq!(gt, Event::from_ids(&s, &["a2"]).unwrap());
        let ge = ints(&s, &[2, 3]).compare(&ints(&s, &[2, 2]), Relation::GreaterEq).unwrap();
        assert_eq!(ge, Event::full(&s));
        let eq = ints(&s, &[2, 3]).compare(&ints(&s, &[2, 2]), Relation::Equal).unwrap();
        assert_eq!(eq, Event::from_ids(&s, &["a1"]).unwrap());
        let a = Event::from_ids(&s, &["a2"]).unwrap();
        assert_eq!(L0Scalar::<Rational>::indicator(&a).support(), a);
    }

    #[test]
    fn lattice_examples() {
        let s = s2();
        let set = [ints(&s, &[1, 5]), ints(&s, &[4, 2])];
        assert_eq!(lattice_sup(&set).unwrap(), ints(&s, &[4, 5]));
        assert_eq!(lattice_inf(&set).unwrap(), ints(&s, &[1, 2]));
        assert_eq!(lattice_sup(&set[..1]).unwrap(), set[0]);
        assert_eq!(lattice_sup::<Rational>(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn complex_order_is_rejected() {
        let s = s2();
        let z = L0Scalar::<GaussianRational>::new(
            &s,
            vec![Complex::new(q(1, 1), q(1, 1)), Complex::new(q(0, 1), q(0, 1))],
        )
        .unwrap();
        assert_eq!(lattice_sup(&[z.clone()]), Err(Error::ComplexOrder));
        assert_eq!(z.leq_as(&z), Err(Error::ComplexOrder));
        // Values with zero imaginary part still compare.
        let w = L0Scalar::<GaussianRational>::one(&s);
        assert!(w.leq_as(&w).unwrap());
    }

    #[test]
    fn order_examples() {
        let s = s2();
        assert!(ints(&s, &[1, 2]).leq_as(&ints(&s, &[1, 3])).unwrap());
        assert!(!ints(&s, &[1, 2]).leq_as(&ints(&s, &[0, 3])).unwrap());
        let a1 = Event::from_ids(&s, &["a1"]).unwrap();
        assert!(ints(&s, &[2, 0]).gt_on(&ints(&s, &[1, 5]), &a1).unwrap());
        assert!(ints(&s, &[0, 3]).leq_on(&ints(&s, &[1, 2]), &a1).unwrap());
    }

    #[test]
    fn null_atoms_do_not_matter() {
        let s = ProbSpace::new(vec![Atom::new("a", q(1, 1)), Atom::new("z", q(0, 1))]).unwrap();
        let x = ints(&s, &[1, 5]);
        let y = ints(&s, &[1, -9]);
        assert!(x.eq_as(&y).unwrap());
        assert!(x.leq_as(&ints(&s, &[1, -100])).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn space() -> Space {
            ProbSpace::new(vec![
                Atom::new("a", q(1, 2)),
                Atom::new("b", q(1, 2)),
                Atom::new("c", q(0, 1)),
            ])
            .unwrap()
        }

        fn scalar() -> impl Strategy<Value = L0Scalar<Rational>> {
            proptest::collection::vec((-4i64..5, 1i64..4), 3)
                .prop_map(|v| sc(&space(), &v))
        }

        fn event() -> impl Strategy<Value = Event> {
            proptest::collection::vec(any::<bool>(), 3)
                .prop_map(|m| Event::from_mask(&space(), m).unwrap())
        }

        proptest! {
            #[test]
            fn pseudo_inverse_laws(xi in scalar()) {
                let inv = xi.pseudo_inverse();
                prop_assert_eq!(&xi * &inv, L0Scalar::indicator(&xi.support()));
                prop_assert_eq!(inv.pseudo_inverse(), xi.restrict(&xi.support()));
            }

            #[test]
            fn idempotent_laws(a in event(), b in event()) {
                let ia = L0Scalar::<Rational>::indicator(&a);
                let ib = L0Scalar::<Rational>::indicator(&b);
                prop_assert_eq!(&ia * &ia, ia.clone());
                prop_assert_eq!(&ia * &ib, L0Scalar::indicator(&a.intersection(&b).unwrap()));
                let iac = L0Scalar::indicator(&a.complement());
                prop_assert_eq!(&ia + &iac, L0Scalar::one(&space()));
            }

            #[test]
            fn lattice_sup_laws(x in scalar(), y in scalar(), z in scalar()) {
                let xy = lattice_sup(&[x.clone(), y.clone()]).unwrap();
                prop_assert_eq!(xy.clone(), lattice_sup(&[y.clone(), x.clone()]).unwrap());
                prop_assert_eq!(
                    lattice_sup(&[xy.clone(), z.clone()]).unwrap(),
                    lattice_sup(&[x.clone(), lattice_sup(&[y.clone(), z]).unwrap()]).unwrap()
                );
                prop_assert_eq!(lattice_sup(&[x.clone(), x.clone()]).unwrap(), x.clone());
                prop_assert!(x.leq_as(&xy).unwrap());
            }

            #[test]
            fn operations_respect_null_perturbation(x in scalar(), y in scalar(), junk in -9i64..9) {
                let mut v = x.values().to_vec();
                v[2] = q(junk, 1);
                let x2 = L0Scalar::new(&space(), v).unwrap();
                prop_assert!(x.eq_as(&x2).unwrap());
                prop_assert!((&x * &y).eq_as(&(&x2 * &y)).unwrap());
                prop_assert!(x.pseudo_inverse().eq_as(&x2.pseudo_inverse()).unwrap());
                prop_assert!(x.support().eq_as(&x2.support()).unwrap());
                prop_assert_eq!(x.leq_as(&y).unwrap(), x2.leq_as(&y).unwrap());
            }
        }
    }
}
