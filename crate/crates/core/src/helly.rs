//! Feasibility of f_k(x) = ξ_k (k = 1..n) under ‖x‖ ≤ β: verdicts,
//! violation certificates, construction of x, and the sample-wise solver.

use crate::conjugate::{riesz_span, RandomFunctional};
use crate::error::{Error, Result};
use crate::fiber;
use crate::l0_algebra::L0Scalar;
use crate::l0_module::{concatenate, L0Vector};
use crate::prob_space::{check_same, Event, Space};
use crate::scalar::Scalar;
use crate::stratification::{stratify, Stratification};

#[derive(Debug, Clone, PartialEq)]
pub struct HellyInstance<K: Scalar> {
    pub functionals: Vec<RandomFunctional<K>>,
    pub targets: Vec<L0Scalar<K>>,
    pub beta: L0Scalar<K::Real>,
    pub eps: L0Scalar<K::Real>,
}

impl<K: Scalar> HellyInstance<K> {
    pub fn new(
        functionals: Vec<RandomFunctional<K>>,
        targets: Vec<L0Scalar<K>>,
        beta: L0Scalar<K::Real>,
        eps: L0Scalar<K::Real>,
    ) -> Result<Self> {
        let inst = Self {
            functionals,
            targets,
            beta,
            eps,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::MalformedInstance(m.to_string()));
        let Some(first) = self.functionals.first() else {
            return bad("no functionals");
        };
        if self.targets.len() != self.functionals.len() {
            return bad(&format!(
                "{} functionals but {} targets",
                self.functionals.len(),
                self.targets.len()
            ));
        }
        let space = first.riesz().space();
        for f in &self.functionals {
            check_same(space, f.riesz().space())?;
            if f.dim() != first.dim() {
                return bad("functionals have different dimensions");
            }
        }
        for t in &self.targets {
            check_same(space, t.space())?;
        }
        check_same(space, self.beta.space())?;
        check_same(space, self.eps.space())?;
        let tol = space.tol();
        let zero = <K::Real as Scalar>::zero();
        if space
            .positive_atoms()
            .any(|w| *self.beta.at(w) < zero && !self.beta.at(w).is_zero_within(tol))
        {
            return bad("beta is negative on a positive-probability atom");
        }
        if self.eps.values().iter().any(|e| *e <= zero || e.is_zero_within(tol)) {
            return bad("eps must be strictly positive on every atom");
        }
        Ok(())
    }

    pub fn space(&self) -> &Space {
        self.functionals[0].riesz().space()
    }

    pub fn dim(&self) -> usize {
        self.functionals[0].dim()
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomStatus {
    Feasible,
    /// ξ(ω) is outside the range of the fiber map.
    Inconsistent,
    /// The minimal-norm solution exceeds β(ω).
    OverBudget,
}

impl AtomStatus {
    pub fn label(self) -> &'static str {
        match self {
            AtomStatus::Feasible => "feasible",
            AtomStatus::Inconsistent => "inconsistent",
            AtomStatus::OverBudget => "over-budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HellyVerdict<K: Scalar> {
    pub feasible: bool,
    pub witness: Option<Vec<L0Scalar<K>>>,
    pub solution: Option<L0Vector<K>>,
    pub violation_event: Option<Event>,
}

/// Everything computed while deciding an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct HellyAnalysis<K: Scalar> {
    pub stratification: Stratification<K>,
    pub statuses: Vec<AtomStatus>,
    /// Minimal-norm solution of the reduced system, stitched over strata.
    pub candidate: L0Vector<K>,
    /// Violating positive-probability atoms.
    pub violation_event: Event,
    pub witness: Option<Vec<L0Scalar<K>>>,
}

impl<K: Scalar> HellyAnalysis<K> {
    pub fn feasible(&self) -> bool {
        self.violation_event.is_empty()
    }

    pub fn verdict(&self, with_solution: bool) -> HellyVerdict<K> {
        let feasible = self.feasible();
        HellyVerdict {
            feasible,
            witness: self.witness.clone(),
            solution: (feasible && with_solution).then(|| self.candidate.clone()),
            violation_event: (!feasible).then(|| self.violation_event.clone()),
        }
    }
}

/// Basis fibers b_j(ω) and expansion coefficients c_kj(ω) with
/// b_j = Σ_k c_kj y_k at one atom.
fn atom_basis<K: Scalar>(strat: &Stratification<K>, w: usize) -> (Vec<Vec<K>>, Vec<Vec<K>>) {
    let rank = strat.ranks[w];
    if let Some(basis) = strat.bases[rank].as_ref() {
        let b = basis.vectors.iter().map(|v| v.fiber(w)).collect();
        let c = basis
            .coefficients
            .iter()
            .map(|row| row.iter().map(|x| x.at(w).clone()).collect())
            .collect();
        return (b, c);
    }
    // Null stratum: no stored basis, use the same greedy choice locally.
    let rows = strat.generators.fiber_rows(w);
    let picks = fiber::independent_subset(&rows, strat.space().tol());
    let b = picks.iter().map(|&g| rows[g].clone()).collect();
    let c = (0..rows.len())
        .map(|k| picks.iter().map(|&g| if g == k { K::one() } else { K::zero() }).collect())
        .collect();
    (b, c)
}

struct AtomSolve<K> {
    x: Vec<K>,
    w: Vec<K>,
    basis: Vec<Vec<K>>,
    coeffs: Vec<Vec<K>>,
}

/// Reduced per-atom solve: γ_j = Σ_k conj(c_kj) ξ_k, then the minimal-norm
/// solution of ⟨x, b_j⟩ = γ_j.
fn solve_atom<K: Scalar>(strat: &Stratification<K>, xi: &[K], w: usize) -> AtomSolve<K> {
    let (basis, coeffs) = atom_basis(strat, w);
    let dim = strat.dim();
    let gamma: Vec<K> = (0..basis.len())
        .map(|j| {
            coeffs
                .iter()
                .zip(xi)
                .fold(K::zero(), |acc, (row, x)| acc + row[j].conj() * x.clone())
        })
        .collect();
    let g: Vec<Vec<K>> = basis.iter().map(|b| b.iter().map(Scalar::conj).collect()).collect();
    let (x, wv) = fiber::minnorm_full_row_rank(&g, &gamma, dim, strat.space().tol());
    AtomSolve {
        x,
        w: wv,
        basis,
        coeffs,
    }
}

fn targets_at<K: Scalar>(inst: &HellyInstance<K>, w: usize) -> Vec<K> {
    inst.targets.iter().map(|t| t.at(w).clone()).collect()
}

fn atom_status<K: Scalar>(inst: &HellyInstance<K>, sol: &AtomSolve<K>, w: usize) -> AtomStatus {
    let tol = inst.space().tol();
    let xi = targets_at(inst, w);
    let riesz: Vec<Vec<K>> = inst.functionals.iter().map(|f| f.riesz().fiber(w)).collect();
    let fx: Vec<K> = riesz.iter().map(|y| fiber::inner(&sol.x, y)).collect();
    let mut scale_src = riesz.clone();
    scale_src.push(xi.clone());
    let thr = fiber::threshold(&scale_src, tol.sqrt()) * (1.0 + sol.x.iter().map(Scalar::magnitude).fold(0.0, f64::max));
    let consistent = fx
        .iter()
        .zip(&xi)
        .all(|(a, b)| (a.clone() - b.clone()).is_zero_within(if K::EXACT { 0.0 } else { thr }));
    if !consistent {
        return AtomStatus::Inconsistent;
    }
    let norm_sq = sol.x.iter().fold(<K::Real as Scalar>::zero(), |acc, v| acc + v.abs_sq());
    let b = inst.beta.at(w);
    let b_sq = b.clone() * b.clone();
    let negative = *b < <K::Real as Scalar>::zero() && !b.is_zero_within(tol);
    let slack = if K::EXACT { 0.0 } else { tol * (1.0 + b_sq.magnitude()) };
    if negative || (norm_sq > b_sq.clone() && !(norm_sq - b_sq).is_zero_within(slack)) {
        AtomStatus::OverBudget
    } else {
        AtomStatus::Feasible
    }
}

/// λ fiber certifying the violation at one atom, scaled so max |λ_k| = 1.
fn witness_at<K: Scalar>(inst: &HellyInstance<K>, sol: &AtomSolve<K>, status: AtomStatus, w: usize) -> Vec<K> {
    let n = inst.len();
    let tol = inst.space().tol();
    let raw: Vec<K> = match status {
        AtomStatus::Feasible => return vec![K::zero(); n],
        AtomStatus::Inconsistent => {
            // y_k = Σ_j e_jk b_j; f_k = Σ_j conj(e_jk) g_j, so F = H·G with H_kj = conj(e_jk).
            let xi = targets_at(inst, w);
            let i = sol.basis.len();
            let h: Vec<Vec<K>> = inst
                .functionals
                .iter()
                .map(|f| {
                    fiber::coordinates(&sol.basis, &f.riesz().fiber(w), tol)
                        .unwrap_or_else(|| vec![K::zero(); i])
                        .into_iter()
                        .map(|e| e.conj())
                        .collect()
                })
                .collect();
            // r = ξ − H (HᴴH)⁻¹ Hᴴ ξ, the component of ξ orthogonal to range(F).
            let cols: Vec<Vec<K>> = (0..i).map(|j| h.iter().map(|row| row[j].clone()).collect()).collect();
            let gram: Vec<Vec<K>> = (0..i)
                .map(|a| (0..i).map(|b| fiber::inner(&cols[b], &cols[a])).collect())
                .collect();
            let hx: Vec<K> = cols.iter().map(|c| fiber::inner(&xi, c)).collect();
            let coef = fiber::solve_consistent(&gram, &hx, i, tol).unwrap_or_else(|| vec![K::zero(); i]);
            (0..n)
                .map(|k| {
                    let proj = h[k].iter().zip(&coef).fold(K::zero(), |acc, (a, c)| acc + a.clone() * c.clone());
                    (xi[k].clone() - proj).conj()
                })
                .collect()
        }
        AtomStatus::OverBudget => {
            // x = Σ_j w_j b_j = Σ_k (Σ_j w_j c_kj) y_k, so λ_k = conj(Σ_j w_j c_kj)
            // gives Σ λ_k f_k = ⟨·, x⟩ and |Σ λ_k ξ_k| = ‖x‖².
            sol.coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&sol.w)
                        .fold(K::zero(), |acc, (c, wj)| acc + c.clone() * wj.clone())
                        .conj()
                })
                .collect()
        }
    };
    normalize(raw)
}

fn normalize<K: Scalar>(v: Vec<K>) -> Vec<K> {
    let mut best: Option<(usize, K::Real)> = None;
    for (i, x) in v.iter().enumerate() {
        let m = x.abs_sq();
        if best.as_ref().is_none_or(|(_, b)| m > *b) {
            best = Some((i, m));
        }
    }
    match best {
        Some((i, m)) if !m.is_zero_within(0.0) => {
            let inv = v[i].recip();
            v.into_iter().map(|x| x * inv.clone()).collect()
        }
        _ => v,
    }
}

/// Per-atom analysis on the stratified Riesz span; fills in statuses for
/// every atom and the witness when some positive atom violates.
pub fn analyze<K: Scalar>(inst: &HellyInstance<K>) -> Result<HellyAnalysis<K>> {
    inst.validate()?;
    let space = inst.space().clone();
    let strat = stratify(&riesz_span(&inst.functionals)?);
    let atoms = space.len();
    let n = inst.len();
    let solves: Vec<AtomSolve<K>> = (0..atoms).map(|w| solve_atom(&strat, &targets_at(inst, w), w)).collect();
    let statuses: Vec<AtomStatus> = (0..atoms).map(|w| atom_status(inst, &solves[w], w)).collect();

    let pieces: Vec<(Event, L0Vector<K>)> = strat
        .parts
        .iter()
        .map(|part| {
            let fibers: Vec<Vec<K>> = (0..atoms)
                .map(|w| {
                    if part.contains(w) {
                        solves[w].x.clone()
                    } else {
                        vec![K::zero(); inst.dim()]
                    }
                })
                .collect();
            (part.clone(), L0Vector::from_fibers(&space, &fibers).expect("consistent fibers"))
        })
        .collect();
    let candidate = concatenate(&pieces)?;

    let violation_event = Event::from_indices(
        &space,
        space.positive_atoms().filter(|&w| statuses[w] != AtomStatus::Feasible),
    );
    let witness = (!violation_event.is_empty()).then(|| {
        let fibers: Vec<Vec<K>> = (0..atoms)
            .map(|w| {
                if violation_event.contains(w) {
                    witness_at(inst, &solves[w], statuses[w], w)
                } else {
                    vec![K::zero(); n]
                }
            })
            .collect();
        (0..n)
            .map(|k| L0Scalar::from_fn(&space, |w| fibers[w][k].clone()))
            .collect()
    });

    Ok(HellyAnalysis {
        stratification: strat,
        statuses,
        candidate,
        violation_event,
        witness,
    })
}

/// Verdict without the solution vector.
pub fn check<K: Scalar>(inst: &HellyInstance<K>) -> Result<HellyVerdict<K>> {
    Ok(analyze(inst)?.verdict(false))
}

/// Verdict with the solution vector when feasible.
pub fn decide<K: Scalar>(inst: &HellyInstance<K>) -> Result<HellyVerdict<K>> {
    Ok(analyze(inst)?.verdict(true))
}

/// λ with |Σ λ_k ξ_k| > β‖Σ λ_k f_k‖* on the violation event.
pub fn witness<K: Scalar>(inst: &HellyInstance<K>) -> Result<Vec<L0Scalar<K>>> {
    analyze(inst)?.witness.ok_or(Error::Feasible)
}

/// x with f_k(x) = ξ_k and ‖x‖ ≤ β (exact) or ≤ β + ε (float) a.s.
pub fn construct<K: Scalar>(inst: &HellyInstance<K>) -> Result<L0Vector<K>> {
    let analysis = analyze(inst)?;
    if analysis.feasible() {
        Ok(analysis.candidate)
    } else {
        Err(Error::Infeasible(analysis.violation_event.ids()))
    }
}

pub type Sides<K> = (L0Scalar<<K as Scalar>::Real>, L0Scalar<<K as Scalar>::Real>);

/// |Σ λ_k ξ_k|² and (β‖Σ λ_k f_k‖*)², the two sides of the Helly
/// inequality squared.
pub fn helly_sides<K: Scalar>(
    inst: &HellyInstance<K>,
    lambda: &[L0Scalar<K>],
) -> Result<Sides<K>> {
    let combined = crate::conjugate::combine(lambda, &inst.functionals)?;
    let mut lhs = L0Scalar::zero(inst.space());
    for (l, x) in lambda.iter().zip(&inst.targets) {
        lhs = &lhs + &(l * x);
    }
    let beta_sq = &inst.beta * &inst.beta;
    Ok((lhs.abs_sq(), &beta_sq * combined.dual_norm().squares()))
}

/// Atoms where |Σ λ_k ξ_k| > β‖Σ λ_k f_k‖*.
pub fn violated_on<K: Scalar>(inst: &HellyInstance<K>, lambda: &[L0Scalar<K>]) -> Result<Event> {
    let (lhs, rhs) = helly_sides(inst, lambda)?;
    let tol = inst.space().tol();
    Ok(Event::from_indices(
        inst.space(),
        (0..inst.space().len()).filter(|&w| {
            let (a, b) = (lhs.at(w), rhs.at(w));
            let slack = if K::EXACT { 0.0 } else { tol * (1.0 + b.magnitude()) };
            *a > b.clone() && !(a.clone() - b.clone()).is_zero_within(slack)
        }),
    ))
}

/// Per-atom data of a sample-wise problem: `matrices[ω]` is n×m with
/// f_i(ω, b) = Σ_j F_ij(ω) b_j.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplewiseInput<K: Scalar> {
    pub space: Space,
    pub matrices: Vec<Vec<Vec<K>>>,
    pub targets: Vec<Vec<K>>,
    pub beta: Vec<K::Real>,
    pub eps: Vec<K::Real>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplewiseReport<K: Scalar> {
    pub feasible: bool,
    pub solution: L0Vector<K>,
    pub statuses: Vec<AtomStatus>,
    /// Atoms that had to be solved and were not.
    pub failing: Event,
    /// Atoms where the returned solution satisfies equations and bound.
    pub omega0: Event,
}

impl<K: Scalar> SamplewiseInput<K> {
    pub fn to_instance(&self) -> Result<HellyInstance<K>> {
        let atoms = self.space.len();
        for (name, len) in [
            ("matrices", self.matrices.len()),
            ("targets", self.targets.len()),
            ("beta", self.beta.len()),
            ("eps", self.eps.len()),
        ] {
            if len != atoms {
                return Err(Error::MalformedInstance(format!("{name} has {len} atoms, space has {atoms}")));
            }
        }
        let n = self.matrices[0].len();
        let m = self.matrices[0].first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::MalformedInstance("empty functional matrix".into()));
        }
        for (w, mat) in self.matrices.iter().enumerate() {
            if mat.len() != n || mat.iter().any(|r| r.len() != m) || self.targets[w].len() != n {
                let id = &self.space.atoms()[w].id;
                return Err(Error::MalformedInstance(format!("atom {id}: expected {n}x{m} matrix and {n} targets")));
            }
        }
        let functionals = (0..n)
            .map(|i| {
                let rows: Vec<Vec<K>> = self.matrices.iter().map(|mat| mat[i].clone()).collect();
                Ok(RandomFunctional::from_row(&L0Vector::from_fibers(&self.space, &rows)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let targets = (0..n)
            .map(|i| L0Scalar::new(&self.space, self.targets.iter().map(|t| t[i].clone()).collect()))
            .collect::<Result<Vec<_>>>()?;
        HellyInstance::new(
            functionals,
            targets,
            L0Scalar::new(&self.space, self.beta.clone())?,
            L0Scalar::new(&self.space, self.eps.clone())?,
        )
    }
}

/// Sample-wise Helly solve. Positive-probability atoms must all be
/// feasible; with `everywhere`, null atoms are solved and required too.
pub fn solve_samplewise<K: Scalar>(input: &SamplewiseInput<K>, everywhere: bool) -> Result<SamplewiseReport<K>> {
    let inst = input.to_instance()?;
    let analysis = analyze(&inst)?;
    let space = inst.space().clone();
    let atoms = space.len();
    let required: Vec<bool> = (0..atoms).map(|w| everywhere || !space.is_null_atom(w)).collect();
    let omega0 = Event::from_indices(
        &space,
        (0..atoms).filter(|&w| required[w] && analysis.statuses[w] == AtomStatus::Feasible),
    );
    let failing = Event::from_indices(
        &space,
        (0..atoms).filter(|&w| required[w] && analysis.statuses[w] != AtomStatus::Feasible),
    );
    Ok(SamplewiseReport {
        feasible: failing.is_empty(),
        solution: analysis.candidate.restrict(&omega0),
        statuses: analysis.statuses,
        failing,
        omega0,
    })
}

/// β + ε.
pub fn relaxed_budget<K: Scalar>(inst: &HellyInstance<K>) -> L0Scalar<K::Real> {
    &inst.beta + &inst.eps
}
