//! A.s. bounded random linear functionals on L0(F, Kⁿ), held in Riesz
//! form f(x) = ⟨x, y₀⟩.

use crate::error::{Error, Result};
use crate::l0_algebra::L0Scalar;
use crate::l0_module::{L0Norm, L0Vector, SubmoduleSpec};
use crate::prob_space::{check_same, Event};
use crate::scalar::Scalar;
use crate::stratification::stratify;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomFunctional<K: Scalar> {
    riesz: L0Vector<K>,
}

impl<K: Scalar> RandomFunctional<K> {
    pub fn from_riesz(riesz: L0Vector<K>) -> Self {
        Self { riesz }
    }

    /// The functional x ↦ Σ rowⱼ·xⱼ (no conjugation), i.e. Riesz vector conj(row).
    pub fn from_row(row: &L0Vector<K>) -> Self {
        Self { riesz: row.conj() }
    }

    pub fn riesz(&self) -> &L0Vector<K> {
        &self.riesz
    }

    pub fn dim(&self) -> usize {
        self.riesz.dim()
    }

    pub fn apply(&self, x: &L0Vector<K>) -> Result<L0Scalar<K>> {
        x.inner_product(&self.riesz)
    }

    /// ‖f‖*, equal to the norm of the Riesz vector.
    pub fn dual_norm(&self) -> L0Norm<K::Real> {
        self.riesz.norm()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            riesz: self.riesz.try_add(&other.riesz)?,
        })
    }

    /// ξ·f, whose Riesz vector is conj(ξ)·y₀.
    pub fn scale(&self, xi: &L0Scalar<K>) -> Result<Self> {
        Ok(Self {
            riesz: self.riesz.scale(&xi.conj())?,
        })
    }

    pub fn restrict(&self, event: &Event) -> Self {
        Self {
            riesz: self.riesz.restrict(event),
        }
    }
}

/// Σ λₖ·fₖ.
pub fn combine<K: Scalar>(lambda: &[L0Scalar<K>], functionals: &[RandomFunctional<K>]) -> Result<RandomFunctional<K>> {
    let first = functionals.first().ok_or(Error::EmptyFamily)?;
    if lambda.len() != functionals.len() {
        return Err(Error::LengthMismatch {
            left: lambda.len(),
            right: functionals.len(),
        });
    }
    let mut acc = RandomFunctional::from_riesz(L0Vector::zero(first.riesz.space(), first.dim()));
    for (l, f) in lambda.iter().zip(functionals) {
        check_same(l.space(), f.riesz.space())?;
        acc = acc.try_add(&f.scale(l)?)?;
    }
    Ok(acc)
}

/// The submodule spanned by the Riesz vectors.
pub fn riesz_span<K: Scalar>(functionals: &[RandomFunctional<K>]) -> Result<SubmoduleSpec<K>> {
    SubmoduleSpec::new(functionals.iter().map(|f| f.riesz.clone()).collect())
}

/// Whether f₁,…,f_n are L0-independent: the span of their Riesz vectors
/// is free of rank n on all of Ω.
pub fn are_independent<K: Scalar>(functionals: &[RandomFunctional<K>]) -> Result<bool> {
    let module = riesz_span(functionals)?;
    let n = functionals.len();
    if n > module.dim() {
        return Ok(false);
    }
    let strat = stratify(&module);
    strat.parts[n].eq_as(&Event::full(module.space()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob_space::{ProbSpace, Space};
    use crate::scalar::{GaussianRational, Rational, RealScalar};
    use num_complex::Complex;

    fn q(p: i64) -> Rational {
        Rational::from_ratio(p, 1)
    }

    fn vec_of(space: &Space, fibers: &[&[i64]]) -> L0Vector<Rational> {
        let f: Vec<Vec<Rational>> = fibers.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        L0Vector::from_fibers(space, &f).unwrap()
    }

    #[test]
    fn coordinate_functional() {
        let s = ProbSpace::uniform(2);
        let f = RandomFunctional::from_riesz(vec_of(&s, &[&[1, 0], &[1, 0]]));
        let x = vec_of(&s, &[&[4, 5], &[-2, 7]]);
        assert_eq!(f.apply(&x).unwrap().values(), &[q(4), q(-2)]);
        assert!(f.apply(&L0Vector::zero(&s, 2)).unwrap().is_zero_as());
        let a = Event::from_ids(&s, &["a2"]).unwrap();
        assert_eq!(f.apply(&x.restrict(&a)).unwrap(), f.apply(&x).unwrap().restrict(&a));
    }

    #[test]
    fn dual_norm_examples() {
        let s = ProbSpace::uniform(1);
        let f = RandomFunctional::from_riesz(vec_of(&s, &[&[3, 4]]));
        assert_eq!(f.dual_norm().to_scalar().unwrap().values(), &[q(5)]);
        let z = RandomFunctional::from_riesz(L0Vector::<Rational>::zero(&s, 2));
        assert_eq!(z.dual_norm().to_scalar().unwrap().values(), &[q(0)]);
    }

    #[test]
    fn module_operations() {
        let s = ProbSpace::uniform(2);
        let f = RandomFunctional::from_riesz(vec_of(&s, &[&[1, 2], &[0, 1]]));
        let g = RandomFunctional::from_riesz(vec_of(&s, &[&[3, 0], &[1, 1]]));
        let x = vec_of(&s, &[&[1, 1], &[2, -1]]);
        let a = Event::from_ids(&s, &["a1"]).unwrap();
        let ind = L0Scalar::indicator(&a);
        assert_eq!(f.scale(&ind).unwrap().apply(&x).unwrap(), f.apply(&x).unwrap().restrict(&a));
        assert_eq!(
            f.try_add(&g).unwrap().apply(&x).unwrap(),
            &f.apply(&x).unwrap() + &g.apply(&x).unwrap()
        );
    }

    #[test]
    fn complex_scaling_conjugates_riesz_vector() {
        let s = ProbSpace::uniform(1);
        let c = |a: i64, b: i64| Complex::new(q(a), q(b));
        let y = L0Vector::<GaussianRational>::from_fibers(&s, &[vec![c(1, 0), c(0, 1)]]).unwrap();
        let f = RandomFunctional::from_riesz(y);
        let xi = L0Scalar::constant(&s, c(2, 3));
        let x = L0Vector::from_fibers(&s, &[vec![c(1, 1), c(2, -1)]]).unwrap();
        assert_eq!(f.scale(&xi).unwrap().apply(&x).unwrap(), &xi * &f.apply(&x).unwrap());
        assert_eq!(
            f.scale(&xi).unwrap().dual_norm().squares(),
            &(&xi.abs_sq() * f.dual_norm().squares())
        );
    }

    #[test]
    fn independence_detector() {
        let s = ProbSpace::uniform(2);
        let f1 = RandomFunctional::from_riesz(vec_of(&s, &[&[1, 0], &[1, 0]]));
        let f2 = RandomFunctional::from_riesz(vec_of(&s, &[&[0, 1], &[0, 1]]));
        assert!(are_independent(&[f1.clone(), f2.clone()]).unwrap());
        let a = Event::from_ids(&s, &["a1"]).unwrap();
        let dep = f1.scale(&L0Scalar::indicator(&a)).unwrap();
        assert!(!are_independent(&[f1.clone(), dep]).unwrap());
        let f3 = RandomFunctional::from_riesz(vec_of(&s, &[&[1, 1], &[2, 3]]));
        assert!(!are_independent(&[f1, f2, f3]).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn vector() -> impl Strategy<Value = L0Vector<Rational>> {
            proptest::collection::vec(proptest::collection::vec(-4i64..5, 3), 2).prop_map(|f| {
                let s = ProbSpace::uniform(2);
                let fibers: Vec<Vec<Rational>> = f.into_iter().map(|r| r.into_iter().map(q).collect()).collect();
                L0Vector::from_fibers(&s, &fibers).unwrap()
            })
        }

        fn spaces_match(x: L0Vector<Rational>, y: &L0Vector<Rational>) -> L0Vector<Rational> {
            L0Vector::from_fibers(y.space(), &x.fibers()).unwrap()
        }

        proptest! {
            #[test]
            fn bounded_and_tight(y in vector(), x in vector()) {
                let x = spaces_match(x, &y);
                let f = RandomFunctional::from_riesz(y.clone());
                let lhs = f.apply(&x).unwrap().abs_sq();
                let rhs = f.dual_norm().squares() * &x.norm_sq();
                prop_assert!(lhs.leq_as(&rhs).unwrap());
                // equality at x = y₀
                let at = f.apply(&y).unwrap().abs_sq();
                let sq = f.dual_norm().squares() * f.dual_norm().squares();
                prop_assert_eq!(at, sq);
            }

            #[test]
            fn l0_linearity(y in vector(), x1 in vector(), x2 in vector(), l in proptest::collection::vec(-3i64..4, 4)) {
                let s = y.space().clone();
                let (x1, x2) = (spaces_match(x1, &y), spaces_match(x2, &y));
                let f = RandomFunctional::from_riesz(y);
                let l1 = L0Scalar::new(&s, vec![q(l[0]), q(l[1])]).unwrap();
                let l2 = L0Scalar::new(&s, vec![q(l[2]), q(l[3])]).unwrap();
                let comb = x1.scale(&l1).unwrap().try_add(&x2.scale(&l2).unwrap()).unwrap();
                let lhs = f.apply(&comb).unwrap();
                let rhs = &(&l1 * &f.apply(&x1).unwrap()) + &(&l2 * &f.apply(&x2).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
