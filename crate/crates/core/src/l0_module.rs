//! The free module L0(F, Kⁿ): vectors, the L0 inner product and norm,
//! finite concatenation and generator-presented submodules.

use std::fmt;

use crate::error::{Error, Result};
use crate::fiber;
use crate::l0_algebra::L0Scalar;
use crate::prob_space::{check_same, partition_validate, Event, Space};
use crate::scalar::{RealScalar, Scalar};

#[derive(Clone, PartialEq)]
pub struct L0Vector<K> {
    space: Space,
    coords: Vec<L0Scalar<K>>,
}

impl<K: Scalar> fmt::Debug for L0Vector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl<K: Scalar> L0Vector<K> {
    pub fn new(space: &Space, coords: Vec<L0Scalar<K>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for c in &coords {
            check_same(space, c.space())?;
        }
        Ok(Self {
            space: space.clone(),
            coords,
        })
    }

    /// Builds a vector from its per-atom fibers (one `dim`-vector per atom).
    pub fn from_fibers(space: &Space, fibers: &[Vec<K>]) -> Result<Self> {
        if fibers.len() != space.len() {
            return Err(Error::AtomCountMismatch {
                expected: space.len(),
                found: fibers.len(),
            });
        }
        let dim = fibers.first().map_or(0, Vec::len);
        for f in fibers {
            if f.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.len() });
            }
        }
        let coords = (0..dim)
            .map(|d| L0Scalar::from_fn(space, |w| fibers[w][d].clone()))
            .collect();
        Self::new(space, coords)
    }

    pub fn zero(space: &Space, dim: usize) -> Self {
        Self {
            space: space.clone(),
            coords: vec![L0Scalar::zero(space); dim],
        }
    }

    /// The i-th standard basis vector (constant).
    pub fn unit(space: &Space, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(space, dim);
        v.coords[i] = L0Scalar::one(space);
        v
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[L0Scalar<K>] {
        &self.coords
    }

    pub fn fiber(&self, atom: usize) -> Vec<K> {
        self.coords.iter().map(|c| c.at(atom).clone()).collect()
    }

    pub fn fibers(&self) -> Vec<Vec<K>> {
        (0..self.space.len()).map(|w| self.fiber(w)).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        check_same(&self.space, &other.space)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            space: self.space.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            space: self.space.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    /// Module multiplication ξ·x.
    pub fn scale(&self, xi: &L0Scalar<K>) -> Result<Self> {
        check_same(&self.space, xi.space())?;
        Ok(Self {
            space: self.space.clone(),
            coords: self.coords.iter().map(|c| c * xi).collect(),
        })
    }

    /// Ĩ_A·x.
    pub fn restrict(&self, event: &Event) -> Self {
        Self {
            space: self.space.clone(),
            coords: self.coords.iter().map(|c| c.restrict(event)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            space: self.space.clone(),
            coords: self.coords.iter().map(L0Scalar::conj).collect(),
        }
    }

    /// ⟨x, y⟩ = Σ ξᵢ·conj(ηᵢ).
    pub fn inner_product(&self, other: &Self) -> Result<L0Scalar<K>> {
        self.check_compatible(other)?;
        let mut acc = L0Scalar::zero(&self.space);
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = &acc + &(a * &b.conj());
        }
        Ok(acc)
    }

    /// ⟨x, x⟩ as a real scalar.
    pub fn norm_sq(&self) -> L0Scalar<K::Real> {
        let mut acc = L0Scalar::zero(&self.space);
        for c in &self.coords {
            acc = &acc + &c.abs_sq();
        }
        acc
    }

    /// The L0 norm √⟨x, x⟩.
    pub fn norm(&self) -> L0Norm<K::Real> {
        L0Norm { squares: self.norm_sq() }
    }

    /// Event where the vector is nonzero.
    pub fn support(&self) -> Event {
        let tol = self.space.tol();
        Event::from_indices(
            &self.space,
            (0..self.space.len()).filter(|&w| self.coords.iter().any(|c| !c.at(w).is_zero_within(tol))),
        )
    }

    pub fn eq_as(&self, other: &Self) -> Result<bool> {
        Ok(self.try_sub(other)?.support().is_null())
    }

    pub fn is_zero_as(&self) -> bool {
        self.support().is_null()
    }
}

/// Σ ξⱼ·xⱼ for scalars and vectors of equal length (nonempty).
pub fn linear_combination<K: Scalar>(coeffs: &[L0Scalar<K>], vectors: &[L0Vector<K>]) -> Result<L0Vector<K>> {
    let first = vectors.first().ok_or(Error::EmptyFamily)?;
    if coeffs.len() != vectors.len() {
        return Err(Error::LengthMismatch {
            left: coeffs.len(),
            right: vectors.len(),
        });
    }
    let mut acc = L0Vector::zero(first.space(), first.dim());
    for (c, v) in coeffs.iter().zip(vectors) {
        acc = acc.try_add(&v.scale(c)?)?;
    }
    Ok(acc)
}

/// An L0 norm value √s kept through its square `s`, so that comparisons
/// stay exact even where the root is irrational.
#[derive(Debug, Clone, PartialEq)]
pub struct L0Norm<R: RealScalar> {
    squares: L0Scalar<R>,
}

impl<R: RealScalar> L0Norm<R> {
    pub fn from_squares(squares: L0Scalar<R>) -> Self {
        Self { squares }
    }

    pub fn squares(&self) -> &L0Scalar<R> {
        &self.squares
    }

    pub fn space(&self) -> &Space {
        self.squares.space()
    }

    /// The norm as a scalar, when every root exists in the field.
    pub fn to_scalar(&self) -> Option<L0Scalar<R>> {
        let values = self
            .squares
            .values()
            .iter()
            .map(RealScalar::sqrt_exact)
            .collect::<Option<Vec<_>>>()?;
        L0Scalar::new(self.squares.space(), values).ok()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.squares.values().iter().map(|s| s.to_f64().max(0.0).sqrt()).collect()
    }

    pub fn support(&self) -> Event {
        self.squares.support()
    }

    /// ‖·‖ ≤ bound almost surely.
    pub fn leq_as(&self, bound: &L0Scalar<R>) -> Result<bool> {
        self.leq_on(bound, &Event::full(self.space()))
    }

    /// ‖·‖ ≤ bound on `event`: bound ≥ 0 and square ≤ bound² at each
    /// positive atom of the event.
    pub fn leq_on(&self, bound: &L0Scalar<R>, event: &Event) -> Result<bool> {
        check_same(self.space(), bound.space())?;
        let tol = self.space().tol();
        Ok(event.positive_indices().all(|w| {
            let b = bound.at(w);
            let s = self.squares.at(w);
            let b_sq = b.clone() * b.clone();
            let nonneg = *b >= R::zero() || b.is_zero_within(tol);
            nonneg && (*s <= b_sq || (s.clone() - b_sq).is_zero_within(tol))
        }))
    }

    /// Atoms where ‖·‖ > bound (ignoring null atoms is left to the caller).
    pub fn exceeds(&self, bound: &L0Scalar<R>) -> Result<Event> {
        check_same(self.space(), bound.space())?;
        let tol = self.space().tol();
        Ok(Event::from_indices(
            self.space(),
            (0..self.space().len()).filter(|&w| {
                let b = bound.at(w);
                let s = self.squares.at(w);
                let b_sq = b.clone() * b.clone();
                let over = *s > b_sq && !(s.clone() - b_sq).is_zero_within(tol);
                (*b < R::zero() && !b.is_zero_within(tol)) || over
            }),
        ))
    }
}

/// Glues `x_n` on `A_n` for a partition {A_n}: the unique vector equal to
/// `x_n` on each `A_n`.
pub fn concatenate<K: Scalar>(parts: &[(Event, L0Vector<K>)]) -> Result<L0Vector<K>> {
    let (_, first) = parts.first().ok_or(Error::EmptyFamily)?;
    let events: Vec<Event> = parts.iter().map(|(e, _)| e.clone()).collect();
    if !partition_validate(&events)? {
        return Err(Error::NotPartition);
    }
    let mut acc = L0Vector::zero(first.space(), first.dim());
    for (event, x) in parts {
        acc = acc.try_add(&x.restrict(event))?;
    }
    Ok(acc)
}

/// A finitely generated submodule of L0(F, Kⁿ), given by generators.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmoduleSpec<K: Scalar> {
    dim: usize,
    generators: Vec<L0Vector<K>>,
}

impl<K: Scalar> SubmoduleSpec<K> {
    pub fn new(generators: Vec<L0Vector<K>>) -> Result<Self> {
        let first = generators.first().ok_or(Error::NoGenerators)?;
        for g in &generators[1..] {
            first.check_compatible(g)?;
        }
        Ok(Self {
            dim: first.dim(),
            generators,
        })
    }

    /// L0(F, Kⁿ) itself, via the standard generators.
    pub fn full(space: &Space, dim: usize) -> Self {
        Self {
            dim,
            generators: (0..dim).map(|i| L0Vector::unit(space, dim, i)).collect(),
        }
    }

    /// The zero module {θ}.
    pub fn zero(space: &Space, dim: usize) -> Self {
        Self {
            dim,
            generators: vec![L0Vector::zero(space, dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> &Space {
        self.generators[0].space()
    }

    pub fn generators(&self) -> &[L0Vector<K>] {
        &self.generators
    }

    /// Generator fibers at one atom.
    pub fn fiber_rows(&self, atom: usize) -> Vec<Vec<K>> {
        self.generators.iter().map(|g| g.fiber(atom)).collect()
    }

    /// Rank of the generator fibers at one atom.
    pub fn fiber_rank(&self, atom: usize) -> usize {
        fiber::rank(&self.fiber_rows(atom), self.space().tol())
    }

    /// The largest event A (up to null sets) with Ĩ_A·y ∈ Ĩ_A·M.
    pub fn membership(&self, y: &L0Vector<K>) -> Result<Event> {
        check_same(self.space(), y.space())?;
        if y.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: y.dim(),
            });
        }
        let tol = self.space().tol();
        Ok(Event::from_indices(
            self.space(),
            (0..self.space().len()).filter(|&w| fiber::in_span(&self.fiber_rows(w), &y.fiber(w), tol)),
        ))
    }
}
