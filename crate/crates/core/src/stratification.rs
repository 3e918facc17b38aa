//! Stratified elimination for underdetermined systems, free-rank
//! stratification of generator-presented submodules, and the derived
//! constructions (hereditary disjointness, orthogonal complements).

use std::fmt;

use crate::error::{Error, Result};
use crate::fiber;
use crate::l0_algebra::L0Scalar;
use crate::l0_module::{concatenate, L0Vector, SubmoduleSpec};
use crate::prob_space::{check_same, ess_sup_events, Event, Space};
use crate::scalar::Scalar;

/// A solution (λ₁,…,λ_h) of Σⱼ ξᵢⱼ λⱼ = 0 (i = 1..m), nonzero at every
/// atom of `nontrivial_on`.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationSolution<K: Scalar> {
    pub solution: Vec<L0Scalar<K>>,
    pub nontrivial_on: Event,
    /// Atoms resolved at each free column, in elimination order.
    pub free_columns: Vec<(usize, Event)>,
}

/// Support of the coefficient in column `col` of each row.
fn column_supports<K: Scalar>(rows: &[Vec<L0Scalar<K>>], col: usize) -> Vec<Event> {
    rows.iter().map(|r| r[col].support()).collect()
}

/// Nontrivial solution of an underdetermined system `coeffs · λ = 0` on `event`.
///
/// `coeffs` is m×h (rows are equations) with h > m ≥ 1. Coefficients are
/// first masked to `event`; the solution vanishes off it.
pub fn solve_underdetermined<K: Scalar>(coeffs: &[Vec<L0Scalar<K>>], event: &Event) -> Result<EliminationSolution<K>> {
    let m = coeffs.len();
    let h = coeffs.first().map_or(0, Vec::len);
    if m == 0 {
        return Err(Error::EmptyFamily);
    }
    for row in coeffs {
        if row.len() != h {
            return Err(Error::DimensionMismatch { expected: h, found: row.len() });
        }
        for c in row {
            check_same(event.space(), c.space())?;
        }
    }
    if h <= m {
        return Err(Error::NotUnderdetermined { rows: m, cols: h });
    }
    if event.is_null() {
        return Err(Error::NullEvent);
    }
    let space = event.space().clone();
    let mut rows: Vec<Vec<L0Scalar<K>>> = coeffs
        .iter()
        .map(|r| r.iter().map(|c| c.restrict(event)).collect())
        .collect();
    let mut lambda = vec![L0Scalar::zero(&space); h];
    let mut active = event.clone();
    let mut free_columns = Vec::new();

    for k in 0..m {
        let supports = column_supports(&rows, k);
        let mut covered = Event::empty(&space);
        for s in &supports[k..] {
            covered = covered.union(s)?;
        }
        let free = active.difference(&covered)?;
        if !free.is_empty() {
            let ind = L0Scalar::indicator(&free);
            lambda[k] = &lambda[k] + &ind;
            for kk in 0..k {
                lambda[kk] = &lambda[kk] - &rows[kk][k].restrict(&free);
            }
            active = active.difference(&free)?;
            free_columns.push((k, free));
        }
        if active.is_empty() {
            break;
        }

        // Pivot strata: C_l = supp(row l) minus the supports of rows k..l-1.
        let mut pivot: Vec<L0Scalar<K>> = {
            let keep = supports[k].complement();
            let scale = &L0Scalar::indicator(&keep) + &rows[k][k].pseudo_inverse();
            rows[k].iter().map(|c| c * &scale).collect()
        };
        let mut seen = supports[k].clone();
        for l in k + 1..m {
            let c_l = supports[l].difference(&seen)?;
            seen = seen.union(&supports[l])?;
            if c_l.is_empty() {
                continue;
            }
            let scale = rows[l][k].pseudo_inverse().restrict(&c_l);
            for (p, c) in pivot.iter_mut().zip(&rows[l]) {
                *p = &*p + &(c * &scale);
            }
        }
        let pivot: Vec<L0Scalar<K>> = pivot.iter().map(|c| c.restrict(&active)).collect();
        rows[k] = pivot.clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j == k {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                *x = &*x - &(&f * p);
            }
        }
    }

    if !active.is_empty() {
        let ind = L0Scalar::indicator(&active);
        lambda[m] = &lambda[m] - &ind;
        for kk in 0..m {
            lambda[kk] = &lambda[kk] + &rows[kk][m].restrict(&active);
        }
        free_columns.push((m, active));
    }

    Ok(EliminationSolution {
        solution: lambda,
        nontrivial_on: event.clone(),
        free_columns,
    })
}

/// A free basis of the submodule on one stratum, with the generator
/// expansion of each basis vector: `vectors[j] = Σ_k coefficients[k][j]·x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumBasis<K: Scalar> {
    pub vectors: Vec<L0Vector<K>>,
    pub coefficients: Vec<Vec<L0Scalar<K>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceStep {
    GeneratorSupport { generator: usize, event: Event },
    RankEvents { rank: usize, events: Vec<Event> },
    EssSup { rank: usize, event: Event },
    Stitch { rank: usize, event: Event },
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn ids(e: &Event) -> String {
            format!("{{{}}}", e.ids().join(","))
        }
        match self {
            TraceStep::GeneratorSupport { generator, event } => write!(f, "support x{} = {}", generator + 1, ids(event)),
            TraceStep::RankEvents { rank, events } => {
                let list: Vec<String> = events.iter().map(ids).collect();
                write!(f, "rank {} events = [{}]", rank, list.join(" "))
            }
            TraceStep::EssSup { rank, event } => write!(f, "esssup rank {} = {}", rank, ids(event)),
            TraceStep::Stitch { rank, event } => write!(f, "stitch rank {} over {}", rank, ids(event)),
        }
    }
}

/// Partition {A₀,…,A_n} with the submodule free of rank i on A_i.
#[derive(Debug, Clone, PartialEq)]
pub struct Stratification<K: Scalar> {
    pub parts: Vec<Event>,
    /// `Some` exactly for strata of positive probability.
    pub bases: Vec<Option<StratumBasis<K>>>,
    pub generators: SubmoduleSpec<K>,
    /// Fiber rank at each atom.
    pub ranks: Vec<usize>,
    pub trace: Vec<TraceStep>,
}

impl<K: Scalar> Stratification<K> {
    pub fn space(&self) -> &Space {
        self.generators.space()
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    /// Coordinates of `y` in the basis of stratum `i`, supported on A_i.
    pub fn coordinates(&self, i: usize, y: &L0Vector<K>) -> Result<Vec<L0Scalar<K>>> {
        check_same(self.space(), y.space())?;
        let Some(basis) = self.bases.get(i).and_then(Option::as_ref) else {
            return Err(Error::NullEvent);
        };
        let tol = self.space().tol();
        let mut per_atom = vec![vec![K::zero(); i]; self.space().len()];
        for w in self.parts[i].indices() {
            let b: Vec<Vec<K>> = basis.vectors.iter().map(|v| v.fiber(w)).collect();
            per_atom[w] = fiber::coordinates(&b, &y.fiber(w), tol)
                .ok_or_else(|| Error::NotInSpan(self.space().atoms()[w].id.clone()))?;
        }
        Ok((0..i)
            .map(|j| L0Scalar::from_fn(self.space(), |w| per_atom[w][j].clone()))
            .collect())
    }

    /// Σᵢ Ĩ_{A_i}·(expansion of y in the stratum-i basis).
    pub fn reconstruct(&self, y: &L0Vector<K>) -> Result<L0Vector<K>> {
        let mut acc = L0Vector::zero(self.space(), self.dim());
        for (i, basis) in self.bases.iter().enumerate() {
            let Some(basis) = basis else { continue };
            let c = self.coordinates(i, y)?;
            for (cj, v) in c.iter().zip(&basis.vectors) {
                acc = acc.try_add(&v.scale(cj)?)?;
            }
        }
        Ok(acc)
    }
}

/// Basis over A ∪ B from bases over A and B: zⱼ = Ĩ_A yⱼ + Ĩ_{B∖A} y′ⱼ.
pub fn stitch_bases<K: Scalar>(
    a: &Event,
    basis_a: &[L0Vector<K>],
    b: &Event,
    basis_b: &[L0Vector<K>],
) -> Result<Vec<L0Vector<K>>> {
    if basis_a.len() != basis_b.len() {
        return Err(Error::LengthMismatch {
            left: basis_a.len(),
            right: basis_b.len(),
        });
    }
    let rest = b.difference(a)?;
    basis_a
        .iter()
        .zip(basis_b)
        .map(|(y, y2)| y.restrict(a).try_add(&y2.restrict(&rest)))
        .collect()
}

fn stitch_coefficients<K: Scalar>(
    a: &Event,
    coeffs_a: &[Vec<L0Scalar<K>>],
    b: &Event,
    coeffs_b: &[Vec<L0Scalar<K>>],
) -> Result<Vec<Vec<L0Scalar<K>>>> {
    let rest = b.difference(a)?;
    Ok(coeffs_a
        .iter()
        .zip(coeffs_b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| &x.restrict(a) + &y.restrict(&rest)).collect())
        .collect())
}

/// Free-rank stratification of a generator-presented submodule.
pub fn stratify<K: Scalar>(module: &SubmoduleSpec<K>) -> Stratification<K> {
    let space = module.space().clone();
    let n = module.dim();
    let gens = module.generators();
    let tol = space.tol();
    let mut trace: Vec<TraceStep> = gens
        .iter()
        .enumerate()
        .map(|(g, x)| TraceStep::GeneratorSupport {
            generator: g,
            event: x.support(),
        })
        .collect();

    let picks: Vec<Vec<usize>> = (0..space.len())
        .map(|w| fiber::independent_subset(&module.fiber_rows(w), tol))
        .collect();
    let ranks: Vec<usize> = picks.iter().map(Vec::len).collect();

    let mut parts = Vec::with_capacity(n + 1);
    let mut bases = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let singles: Vec<Event> = (0..space.len())
            .filter(|&w| ranks[w] == i)
            .map(|w| Event::singleton(&space, w))
            .collect();
        let part = if singles.is_empty() {
            Event::empty(&space)
        } else {
            trace.push(TraceStep::RankEvents {
                rank: i,
                events: singles.clone(),
            });
            let sup = ess_sup_events(&singles).expect("events share one space");
            trace.push(TraceStep::EssSup { rank: i, event: sup.clone() });
            sup
        };

        let mut acc_event = Event::empty(&space);
        let mut acc_vectors: Vec<L0Vector<K>> = (0..i).map(|_| L0Vector::zero(&space, n)).collect();
        let mut acc_coeffs: Vec<Vec<L0Scalar<K>>> = vec![vec![L0Scalar::zero(&space); i]; gens.len()];
        for single in &singles {
            let w = single.indices().next().expect("singleton");
            let local: Vec<L0Vector<K>> = picks[w].iter().map(|&g| gens[g].clone()).collect();
            let local_coeffs: Vec<Vec<L0Scalar<K>>> = (0..gens.len())
                .map(|k| {
                    picks[w]
                        .iter()
                        .map(|&g| if g == k { L0Scalar::one(&space) } else { L0Scalar::zero(&space) })
                        .collect()
                })
                .collect();
            acc_vectors = stitch_bases(&acc_event, &acc_vectors, single, &local).expect("equal rank");
            acc_coeffs = stitch_coefficients(&acc_event, &acc_coeffs, single, &local_coeffs).expect("same space");
            acc_event = acc_event.union(single).expect("same space");
            if i > 0 {
                trace.push(TraceStep::Stitch {
                    rank: i,
                    event: acc_event.clone(),
                });
            }
        }
        bases.push((!part.is_null()).then(|| StratumBasis {
            vectors: acc_vectors,
            coefficients: acc_coeffs,
        }));
        parts.push(part);
    }

    Stratification {
        parts,
        bases,
        generators: module.clone(),
        ranks,
        trace,
    }
}

/// The event on which `y` is hereditarily disjoint from `module`: the
/// complement of the membership event.
pub fn hds_point_vs_submodule<K: Scalar>(module: &SubmoduleSpec<K>, y: &L0Vector<K>) -> Result<Event> {
    let h = module.membership(y)?.complement();
    if h.is_null() {
        return Err(Error::NoHereditaryStratum);
    }
    Ok(h)
}

/// Hereditarily disjoint event of `y` against the zero module.
pub fn hds_point_vs_zero<K: Scalar>(y: &L0Vector<K>) -> Result<Event> {
    hds_point_vs_submodule(&SubmoduleSpec::zero(y.space(), y.dim()), y)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Orthogonal<K: Scalar> {
    /// x with ⟨x, g⟩ = 0 for every generator, nonzero exactly on `proper`.
    Witness { vector: L0Vector<K>, proper: Event },
    /// The fiber span is all of Kⁿ almost surely.
    Full,
}

/// A nonzero vector orthogonal to the module, or `Full`.
pub fn orthogonal_witness<K: Scalar>(module: &SubmoduleSpec<K>) -> Result<Orthogonal<K>> {
    let strat = stratify(module);
    let space = module.space().clone();
    let n = module.dim();
    let mut proper = Event::empty(&space);
    for part in &strat.parts[..n] {
        proper = proper.union(part)?;
    }
    if proper.is_null() {
        return Ok(Orthogonal::Full);
    }
    let mut pieces = Vec::with_capacity(n + 1);
    for (i, part) in strat.parts.iter().enumerate() {
        let x = match (&strat.bases[i], i) {
            (Some(_), 0) => L0Vector::unit(&space, n, 0).restrict(part),
            (Some(basis), i) if i < n => {
                let coeffs: Vec<Vec<L0Scalar<K>>> = basis
                    .vectors
                    .iter()
                    .map(|b| b.coords().iter().map(L0Scalar::conj).collect())
                    .collect();
                let sol = solve_underdetermined(&coeffs, part)?;
                L0Vector::new(&space, sol.solution)?
            }
            _ => L0Vector::zero(&space, n),
        };
        pieces.push((part.clone(), x));
    }
    Ok(Orthogonal::Witness {
        vector: concatenate(&pieces)?,
        proper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob_space::{Atom, ProbSpace};
    use crate::scalar::{Rational, RealScalar};

    fn q(p: i64) -> Rational {
        Rational::from_ratio(p, 1)
    }

    fn sc(space: &Space, xs: &[i64]) -> L0Scalar<Rational> {
        L0Scalar::new(space, xs.iter().map(|&x| q(x)).collect()).unwrap()
    }

    fn vec_of(space: &Space, fibers: &[&[i64]]) -> L0Vector<Rational> {
        let f: Vec<Vec<Rational>> = fibers.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        L0Vector::from_fibers(space, &f).unwrap()
    }

    fn residual(coeffs: &[Vec<L0Scalar<Rational>>], lambda: &[L0Scalar<Rational>]) -> Vec<L0Scalar<Rational>> {
        coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .zip(lambda)
                    .fold(L0Scalar::zero(lambda[0].space()), |acc, (c, l)| &acc + &(c * l))
            })
            .collect()
    }

    #[test]
    fn elimination_two_atom_example() {
        let s = ProbSpace::uniform(2);
        let coeffs = vec![vec![sc(&s, &[1, 0]), sc(&s, &[1, 1])]];
        let sol = solve_underdetermined(&coeffs, &Event::full(&s)).unwrap();
        assert_eq!(sol.solution, vec![sc(&s, &[1, 1]), sc(&s, &[-1, 0])]);
        assert!(residual(&coeffs, &sol.solution).iter().all(L0Scalar::is_zero_as));
    }

    #[test]
    fn elimination_zero_matrix() {
        let s = ProbSpace::uniform(3);
        let a = Event::from_ids(&s, &["a1", "a3"]).unwrap();
        let coeffs = vec![vec![sc(&s, &[0, 0, 0]); 3]; 2];
        let sol = solve_underdetermined(&coeffs, &a).unwrap();
        assert_eq!(sol.solution[0], L0Scalar::indicator(&a));
        assert!(sol.solution[1..].iter().all(|l| l.values().iter().all(|v| *v == q(0))));
    }

    #[test]
    fn elimination_constant_system_matches_classical() {
        let s = ProbSpace::uniform(1);
        // x + 2y + 3z = 0, 4x + 5y + 6z = 0: nullspace spanned by (1,-2,1), last entry fixed to -1.
        let coeffs = vec![
            vec![sc(&s, &[1]), sc(&s, &[2]), sc(&s, &[3])],
            vec![sc(&s, &[4]), sc(&s, &[5]), sc(&s, &[6])],
        ];
        let sol = solve_underdetermined(&coeffs, &Event::full(&s)).unwrap();
        let v: Vec<Rational> = sol.solution.iter().map(|l| l.at(0).clone()).collect();
        assert_eq!(v, vec![q(-1), q(2), q(-1)]);
    }

    #[test]
    fn elimination_row_swap_stratum() {
        // First pivot vanishes on a2, so the second row supplies it there.
        let s = ProbSpace::uniform(2);
        let coeffs = vec![
            vec![sc(&s, &[1, 0]), sc(&s, &[0, 1]), sc(&s, &[1, 1])],
            vec![sc(&s, &[0, 2]), sc(&s, &[1, 0]), sc(&s, &[3, 1])],
        ];
        let sol = solve_underdetermined(&coeffs, &Event::full(&s)).unwrap();
        assert!(residual(&coeffs, &sol.solution).iter().all(L0Scalar::is_zero_as));
        for w in 0..2 {
            assert!(sol.solution.iter().any(|l| *l.at(w) != q(0)));
        }
    }

    #[test]
    fn elimination_errors() {
        let s = ProbSpace::uniform(1);
        let sq = vec![vec![sc(&s, &[1]), sc(&s, &[2])]; 2];
        assert_eq!(
            solve_underdetermined(&sq, &Event::full(&s)),
            Err(Error::NotUnderdetermined { rows: 2, cols: 2 })
        );
        let t = ProbSpace::new(vec![Atom::new("a", q(1)), Atom::new("z", q(0))]).unwrap();
        let coeffs = vec![vec![sc(&t, &[1, 1]), sc(&t, &[1, 1])]];
        let null = Event::from_ids(&t, &["z"]).unwrap();
        assert_eq!(solve_underdetermined(&coeffs, &null), Err(Error::NullEvent));
    }

    fn example_module(s: &Space) -> SubmoduleSpec<Rational> {
        SubmoduleSpec::new(vec![
            vec_of(s, &[&[1, 0], &[1, 1]]),
            vec_of(s, &[&[0, 1], &[2, 2]]),
        ])
        .unwrap()
    }

    #[test]
    fn stratify_example() {
        let s = ProbSpace::uniform(2);
        let m = example_module(&s);
        let st = stratify(&m);
        assert!(st.parts[0].is_empty());
        assert_eq!(st.parts[1], Event::from_ids(&s, &["a2"]).unwrap());
        assert_eq!(st.parts[2], Event::from_ids(&s, &["a1"]).unwrap());
        assert!(st.bases[0].is_none());
        assert_eq!(st.bases[1].as_ref().unwrap().vectors.len(), 1);
        assert_eq!(st.bases[2].as_ref().unwrap().vectors.len(), 2);
        for g in m.generators() {
            assert!(st.reconstruct(g).unwrap().eq_as(g).unwrap());
        }
        assert!(st.trace.iter().any(|t| matches!(t, TraceStep::EssSup { rank: 2, .. })));
    }

    #[test]
    fn stratify_degenerate_and_full() {
        let s = ProbSpace::uniform(3);
        let zero = stratify(&SubmoduleSpec::<Rational>::zero(&s, 2));
        assert_eq!(zero.parts[0], Event::full(&s));
        assert_eq!(zero.bases[0].as_ref().unwrap().vectors.len(), 0);

        let full = stratify(&SubmoduleSpec::<Rational>::full(&s, 3));
        assert_eq!(full.parts[3], Event::full(&s));
        let basis = &full.bases[3].as_ref().unwrap().vectors;
        for (i, b) in basis.iter().enumerate() {
            assert_eq!(*b, L0Vector::unit(&s, 3, i));
        }
    }

    #[test]
    fn basis_coefficients_expand_generators() {
        let s = ProbSpace::uniform(3);
        let m = SubmoduleSpec::new(vec![
            vec_of(&s, &[&[0, 0], &[1, 1], &[1, 0]]),
            vec_of(&s, &[&[1, 2], &[2, 2], &[0, 1]]),
        ])
        .unwrap();
        let st = stratify(&m);
        for basis in st.bases.iter().flatten() {
            for (j, v) in basis.vectors.iter().enumerate() {
                let c: Vec<L0Scalar<Rational>> = basis.coefficients.iter().map(|row| row[j].clone()).collect();
                let lhs = crate::l0_module::linear_combination(&c, m.generators()).unwrap();
                assert_eq!(&lhs, v);
            }
        }
    }

    #[test]
    fn stitch_examples() {
        let s = ProbSpace::uniform(2);
        let a = Event::from_ids(&s, &["a1"]).unwrap();
        let b = Event::from_ids(&s, &["a2"]).unwrap();
        let y = vec_of(&s, &[&[1, 0], &[9, 9]]);
        let y2 = vec_of(&s, &[&[7, 7], &[0, 1]]);
        let z = stitch_bases(&a, &[y.clone()], &b, &[y2]).unwrap();
        assert_eq!(z[0], vec_of(&s, &[&[1, 0], &[0, 1]]));
        let same = stitch_bases(&a, &[y.clone()], &a, &[y.clone()]).unwrap();
        assert_eq!(same[0], y.restrict(&a));
        assert_eq!(
            stitch_bases(&a, &[y.clone()], &b, &[]),
            Err(Error::LengthMismatch { left: 1, right: 0 })
        );
    }

    #[test]
    fn hds_examples() {
        let s = ProbSpace::uniform(2);
        let m = SubmoduleSpec::new(vec![vec_of(&s, &[&[1, 0], &[1, 0]])]).unwrap();
        assert_eq!(hds_point_vs_submodule(&m, &vec_of(&s, &[&[0, 1], &[0, 1]])).unwrap(), Event::full(&s));
        assert_eq!(
            hds_point_vs_submodule(&m, &vec_of(&s, &[&[2, 0], &[3, 0]])),
            Err(Error::NoHereditaryStratum)
        );
        assert_eq!(
            hds_point_vs_submodule(&m, &vec_of(&s, &[&[2, 0], &[0, 1]])).unwrap(),
            Event::from_ids(&s, &["a2"]).unwrap()
        );
        assert_eq!(
            hds_point_vs_zero(&vec_of(&s, &[&[0, 0], &[0, 1]])).unwrap(),
            Event::from_ids(&s, &["a2"]).unwrap()
        );
    }

    fn assert_orthogonal(m: &SubmoduleSpec<Rational>, x: &L0Vector<Rational>) {
        for g in m.generators() {
            assert!(x.inner_product(g).unwrap().values().iter().all(|v| *v == q(0)));
        }
    }

    #[test]
    fn orthogonal_examples() {
        let s = ProbSpace::uniform(2);
        let m = SubmoduleSpec::new(vec![vec_of(&s, &[&[1, 0], &[1, 0]])]).unwrap();
        let Orthogonal::Witness { vector, proper } = orthogonal_witness(&m).unwrap() else {
            panic!("expected witness");
        };
        assert_eq!(proper, Event::full(&s));
        assert_orthogonal(&m, &vector);
        assert_eq!(vector.norm_sq().support(), Event::full(&s));

        assert_eq!(orthogonal_witness(&SubmoduleSpec::<Rational>::full(&s, 2)).unwrap(), Orthogonal::Full);

        let mixed = SubmoduleSpec::new(vec![
            vec_of(&s, &[&[1, 1], &[1, 0]]),
            vec_of(&s, &[&[2, 2], &[0, 1]]),
        ])
        .unwrap();
        let Orthogonal::Witness { vector, proper } = orthogonal_witness(&mixed).unwrap() else {
            panic!("expected witness");
        };
        assert_eq!(proper, Event::from_ids(&s, &["a1"]).unwrap());
        assert_eq!(vector.norm_sq().support(), proper);
        assert_orthogonal(&mixed, &vector);
    }

    #[test]
    fn orthogonal_on_zero_module() {
        let s = ProbSpace::uniform(2);
        let m = SubmoduleSpec::<Rational>::zero(&s, 3);
        let Orthogonal::Witness { vector, proper } = orthogonal_witness(&m).unwrap() else {
            panic!("expected witness");
        };
        assert_eq!(proper, Event::full(&s));
        assert_eq!(vector.norm_sq().support(), proper);
    }
}
