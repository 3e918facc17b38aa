//! Per-atom reference implementations and random instance generators.
//!
//! Everything here works on one fiber at a time with plain matrices and
//! uses full pivoting, so it shares no elimination code with the main
//! algorithms. Generators produce exact Gaussian-rational data that can be
//! instantiated over any scalar field.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conjugate::RandomFunctional;
use crate::helly::{HellyInstance, SamplewiseInput};
use crate::l0_algebra::L0Scalar;
use crate::l0_module::{L0Vector, SubmoduleSpec};
use crate::prob_space::{Atom, ProbSpace, Space, DEFAULT_FLOAT_TOL};
use crate::scalar::{from_gaussian, from_rational, GaussianRational, Rational, RealScalar, Scalar};

fn zero_threshold<K: Scalar>(m: &[Vec<K>], tol: f64) -> f64 {
    if K::EXACT {
        0.0
    } else {
        tol * m.iter().flatten().map(Scalar::magnitude).fold(1.0, f64::max)
    }
}

/// Gauss-Jordan with full pivoting restricted to the first `cols` columns.
/// Returns the reduced rows and the pivot column of each leading row.
fn reduce<K: Scalar>(matrix: &[Vec<K>], cols: usize, tol: f64) -> (Vec<Vec<K>>, Vec<usize>) {
    let thr = zero_threshold(matrix, tol);
    let mut a = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut used = vec![false; cols];
    for r in 0..a.len() {
        let mut best: Option<(usize, usize, K::Real)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for c in (0..cols).filter(|&c| !used[c]) {
                let m = row[c].abs_sq();
                if best.as_ref().is_none_or(|b| m > b.2) {
                    best = Some((i, c, m));
                }
            }
        }
        let Some((i, c, m)) = best else { break };
        if m.is_zero_within(0.0) || m.to_f64().sqrt() <= thr {
            break;
        }
        a.swap(r, i);
        let inv = a[r][c].recip();
        a[r] = a[r].iter().map(|x| x.clone() * inv.clone()).collect();
        let prow = a[r].clone();
        for (j, row) in a.iter_mut().enumerate() {
            if j != r {
                let f = row[c].clone();
                *row = row.iter().zip(&prow).map(|(x, p)| x.clone() - f.clone() * p.clone()).collect();
            }
        }
        used[c] = true;
        pivots.push(c);
    }
    (a, pivots)
}

/// Rank of a matrix given by rows.
pub fn fiber_rank<K: Scalar>(matrix: &[Vec<K>], tol: f64) -> usize {
    let cols = matrix.first().map_or(0, Vec::len);
    reduce(matrix, cols, tol).1.len()
}

/// A basis of {x : matrix·x = 0} in Kᶜᵒˡˢ.
pub fn fiber_nullspace<K: Scalar>(matrix: &[Vec<K>], cols: usize, tol: f64) -> Vec<Vec<K>> {
    let (a, pivots) = reduce(matrix, cols, tol);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![K::zero(); cols];
            v[f] = K::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

fn dot<K: Scalar>(a: &[K], b: &[K]) -> K {
    a.iter().zip(b).fold(K::zero(), |s, (x, y)| s + x.clone() * y.conj())
}

fn mat_vec<K: Scalar>(matrix: &[Vec<K>], x: &[K]) -> Vec<K> {
    matrix
        .iter()
        .map(|row| row.iter().zip(x).fold(K::zero(), |s, (a, b)| s + a.clone() * b.clone()))
        .collect()
}

fn norm_sq<K: Scalar>(x: &[K]) -> K::Real {
    x.iter().fold(<K::Real as Scalar>::zero(), |s, v| s + v.abs_sq())
}

/// Minimal-norm solution of `matrix·x = rhs`, or `None` if inconsistent.
pub fn fiber_minnorm_solve<K: Scalar>(matrix: &[Vec<K>], rhs: &[K], cols: usize, tol: f64) -> Option<Vec<K>> {
    let aug: Vec<Vec<K>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    let (a, pivots) = reduce(&aug, cols, tol);
    let thr = zero_threshold(&aug, tol);
    if a[pivots.len()..].iter().any(|row| row[cols].magnitude() > thr && !row[cols].is_zero_within(0.0)) {
        return None;
    }
    let mut x = vec![K::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][cols].clone();
    }
    // Orthogonalize the nullspace, then remove its component from x.
    let mut ortho: Vec<Vec<K>> = Vec::new();
    for mut v in fiber_nullspace(matrix, cols, tol) {
        for u in &ortho {
            let c = dot(&v, u) * K::from_real(norm_sq(u)).recip();
            v = v.iter().zip(u).map(|(a, b)| a.clone() - c.clone() * b.clone()).collect();
        }
        ortho.push(v);
    }
    for u in &ortho {
        let c = dot(&x, u) * K::from_real(norm_sq(u)).recip();
        x = x.iter().zip(u).map(|(a, b)| a.clone() - c.clone() * b.clone()).collect();
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FiberHelly<K> {
    Feasible(Vec<K>),
    Inconsistent,
    OverBudget(Vec<K>),
}

impl<K> FiberHelly<K> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FiberHelly::Feasible(_))
    }
}

/// Classical Helly check at one atom: `matrix` has rows F_k with
/// f_k(x) = Σ_d F_kd x_d.
pub fn fiber_helly<K: Scalar>(matrix: &[Vec<K>], xi: &[K], beta: &K::Real, cols: usize, tol: f64) -> FiberHelly<K> {
    match fiber_minnorm_solve(matrix, xi, cols, tol) {
        None => FiberHelly::Inconsistent,
        Some(x) => {
            let n = norm_sq(&x);
            let b = beta.clone() * beta.clone();
            let slack = if K::EXACT { 0.0 } else { tol * (1.0 + b.magnitude()) };
            if n <= b || (n.clone() - b).is_zero_within(slack) {
                FiberHelly::Feasible(x)
            } else {
                FiberHelly::OverBudget(x)
            }
        }
    }
}

/// Helly inequality at one atom for one λ: returns (|λᵀξ|², β²‖Fᵀλ‖²).
pub fn fiber_sides<K: Scalar>(matrix: &[Vec<K>], xi: &[K], beta: &K::Real, lambda: &[K]) -> (K::Real, K::Real) {
    let cols = matrix.first().map_or(0, Vec::len);
    let lhs = lambda.iter().zip(xi).fold(K::zero(), |s, (l, x)| s + l.clone() * x.clone());
    let combined: Vec<K> = (0..cols)
        .map(|d| matrix.iter().zip(lambda).fold(K::zero(), |s, (row, l)| s + l.clone() * row[d].clone()))
        .collect();
    (lhs.abs_sq(), beta.clone() * beta.clone() * norm_sq(&combined))
}

/// Whether λ strictly violates |λᵀξ| ≤ β‖Fᵀλ‖ at one atom.
pub fn fiber_violates<K: Scalar>(matrix: &[Vec<K>], xi: &[K], beta: &K::Real, lambda: &[K], tol: f64) -> bool {
    let (l, r) = fiber_sides(matrix, xi, beta, lambda);
    let slack = if K::EXACT { 0.0 } else { tol * (1.0 + r.magnitude()) };
    l > r.clone() && !(l - r).is_zero_within(slack)
}

/// Exhaustive check of the Helly inequality over a rational grid of λ
/// (real parts in {-2,-1,-1/2,0,1/2,1,2}; for complex fields also the
/// units ±i and 1+i). Returns a violating λ if one exists.
pub fn grid_violation<K: Scalar>(matrix: &[Vec<K>], xi: &[K], beta: &K::Real, tol: f64) -> Option<Vec<K>> {
    let mut grid: Vec<K> = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(p, q)| from_rational::<K>(&Rational::new(p.into(), q.into())))
        .collect();
    if K::COMPLEX {
        for (re, im) in [(0, 1), (0, -1), (1, 1)] {
            let g = GaussianRational::new(Rational::from_ratio(re, 1), Rational::from_ratio(im, 1));
            grid.push(from_gaussian::<K>(&g).expect("complex field"));
        }
    }
    let n = xi.len();
    let mut idx = vec![0usize; n];
    loop {
        let lambda: Vec<K> = idx.iter().map(|&i| grid[i].clone()).collect();
        if fiber_violates(matrix, xi, beta, &lambda, tol) {
            return Some(lambda);
        }
        let mut k = 0;
        loop {
            if k == n {
                return None;
            }
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Rows of the fiber map of a Helly instance at one atom: F_kd = conj(y_kd).
pub fn helly_fiber_matrix<K: Scalar>(inst: &HellyInstance<K>, atom: usize) -> Vec<Vec<K>> {
    inst.functionals
        .iter()
        .map(|f| f.riesz().fiber(atom).iter().map(Scalar::conj).collect())
        .collect()
}

pub fn helly_fiber_targets<K: Scalar>(inst: &HellyInstance<K>, atom: usize) -> Vec<K> {
    inst.targets.iter().map(|t| t.at(atom).clone()).collect()
}

/// Classical Helly verdict for every atom of an instance.
pub fn helly_per_atom<K: Scalar>(inst: &HellyInstance<K>) -> Vec<FiberHelly<K>> {
    let tol = inst.space().tol();
    (0..inst.space().len())
        .map(|w| {
            fiber_helly(
                &helly_fiber_matrix(inst, w),
                &helly_fiber_targets(inst, w),
                inst.beta.at(w),
                inst.dim(),
                tol,
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// generators

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A space description that can be instantiated in either mode.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSpace {
    pub atoms: Vec<(String, Rational)>,
}

impl RawSpace {
    pub fn build(&self, float: bool) -> Space {
        let atoms = self.atoms.iter().map(|(id, p)| Atom::new(id.clone(), p.clone())).collect();
        if float {
            ProbSpace::new_float(atoms, DEFAULT_FLOAT_TOL)
        } else {
            ProbSpace::new(atoms)
        }
        .expect("generated space is valid")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_null(&self, atom: usize) -> bool {
        self.atoms[atom].1 == Rational::from_ratio(0, 1)
    }
}

/// Random space with `atoms` atoms, the listed ones of probability zero.
pub fn gen_space(rng: &mut Rng8, atoms: usize, null_atoms: &[usize]) -> RawSpace {
    let weights: Vec<i64> = (0..atoms)
        .map(|w| if null_atoms.contains(&w) { 0 } else { rng.gen_range(1..=4) })
        .collect();
    let total: i64 = weights.iter().sum();
    assert!(total > 0, "at least one atom must carry mass");
    RawSpace {
        atoms: weights
            .iter()
            .enumerate()
            .map(|(i, &wt)| (format!("w{}", i + 1), Rational::from_ratio(wt, total)))
            .collect(),
    }
}

fn small_rational(rng: &mut Rng8) -> Rational {
    let p = rng.gen_range(-3i64..=3);
    let q = *[1i64, 1, 1, 2, 3].choose(rng).expect("nonempty");
    Rational::from_ratio(p, q)
}

fn small_entry(rng: &mut Rng8, complex: bool) -> GaussianRational {
    let im = if complex && rng.gen_bool(0.5) {
        small_rational(rng)
    } else {
        Rational::from_ratio(0, 1)
    };
    GaussianRational::new(small_rational(rng), im)
}

fn nonzero_entry(rng: &mut Rng8, complex: bool) -> GaussianRational {
    loop {
        let e = small_entry(rng, complex);
        if !e.is_zero_within(0.0) {
            return e;
        }
    }
}

type Fiber = Vec<Vec<GaussianRational>>;

/// Random `rows`×`cols` matrix of rank exactly `rank` (product of random
/// rows×rank and rank×cols factors, retried until the rank is right).
pub fn gen_matrix_of_rank(rng: &mut Rng8, rows: usize, cols: usize, rank: usize, complex: bool) -> Fiber {
    assert!(rank <= rows.min(cols));
    if rank == 0 {
        return vec![vec![GaussianRational::zero(); cols]; rows];
    }
    loop {
        let c: Fiber = (0..rows).map(|_| (0..rank).map(|_| small_entry(rng, complex)).collect()).collect();
        let b: Fiber = (0..rank).map(|_| (0..cols).map(|_| small_entry(rng, complex)).collect()).collect();
        let m: Fiber = c
            .iter()
            .map(|crow| {
                (0..cols)
                    .map(|d| {
                        crow.iter()
                            .zip(&b)
                            .fold(GaussianRational::zero(), |s, (x, brow)| s + x.clone() * brow[d].clone())
                    })
                    .collect()
            })
            .collect();
        if fiber_rank(&m, 0.0) == rank {
            return m;
        }
    }
}

fn convert<K: Scalar>(v: &GaussianRational) -> K {
    from_gaussian::<K>(v).expect("generated value fits the field")
}

/// Generator fibers `gens[g][atom][d]` over a raw space.
#[derive(Debug, Clone, PartialEq)]
pub struct RawModule {
    pub space: RawSpace,
    pub dim: usize,
    pub gens: Vec<Vec<Vec<GaussianRational>>>,
    /// Fiber rank planted at each atom.
    pub profile: Vec<usize>,
}

impl RawModule {
    pub fn build<K: Scalar>(&self, float: bool) -> SubmoduleSpec<K> {
        let space = self.space.build(float);
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let fibers: Vec<Vec<K>> = g.iter().map(|f| f.iter().map(convert).collect()).collect();
                L0Vector::from_fibers(&space, &fibers).expect("well-formed generator")
            })
            .collect();
        SubmoduleSpec::new(gens).expect("nonempty generators")
    }
}

/// Random module whose generator fibers have the given rank per atom.
pub fn gen_module(rng: &mut Rng8, space: RawSpace, dim: usize, gens: usize, profile: &[usize], complex: bool) -> RawModule {
    assert_eq!(profile.len(), space.len());
    let per_atom: Vec<Fiber> = profile
        .iter()
        .map(|&r| gen_matrix_of_rank(rng, gens, dim, r, complex))
        .collect();
    RawModule {
        space,
        dim,
        gens: (0..gens).map(|g| per_atom.iter().map(|m| m[g].clone()).collect()).collect(),
        profile: profile.to_vec(),
    }
}

/// Random rank profile with ranks ≤ `max_rank`.
pub fn gen_profile(rng: &mut Rng8, atoms: usize, max_rank: usize) -> Vec<usize> {
    (0..atoms).map(|_| rng.gen_range(0..=max_rank)).collect()
}

/// The same submodule under a random change of generators: elementary
/// L0 operations (adding random multiples, scaling by a.s.-invertible
/// scalars, permuting) plus one redundant extra generator.
pub fn regenerate<K: Scalar>(rng: &mut Rng8, module: &SubmoduleSpec<K>) -> SubmoduleSpec<K> {
    let space = module.space().clone();
    let random_scalar = |rng: &mut Rng8, invertible: bool| -> L0Scalar<K> {
        let vals: Vec<K> = (0..space.len())
            .map(|_| {
                let e = if invertible {
                    nonzero_entry(rng, K::COMPLEX)
                } else {
                    small_entry(rng, K::COMPLEX)
                };
                convert(&e)
            })
            .collect();
        L0Scalar::new(&space, vals).expect("right length")
    };
    let mut gens = module.generators().to_vec();
    let k = gens.len();
    for _ in 0..2 * k + 1 {
        let i = rng.gen_range(0..k);
        let j = rng.gen_range(0..k);
        if i != j {
            let c = random_scalar(rng, false);
            gens[i] = gens[i].try_add(&gens[j].scale(&c).expect("same space")).expect("same dim");
        }
        let u = random_scalar(rng, true);
        gens[i] = gens[i].scale(&u).expect("same space");
    }
    gens.shuffle(rng);
    let coeffs: Vec<L0Scalar<K>> = (0..k).map(|_| random_scalar(rng, false)).collect();
    gens.push(crate::l0_module::linear_combination(&coeffs, &gens).expect("nonempty"));
    SubmoduleSpec::new(gens).expect("nonempty")
}

/// Random m×h coefficient matrix (`[row][col][atom]`), with roughly a
/// third of the entries zero to exercise the support strata.
pub fn gen_system(rng: &mut Rng8, atoms: usize, m: usize, h: usize, complex: bool) -> Vec<Vec<Vec<GaussianRational>>> {
    (0..m)
        .map(|_| {
            (0..h)
                .map(|_| {
                    (0..atoms)
                        .map(|_| {
                            if rng.gen_bool(0.35) {
                                GaussianRational::zero()
                            } else {
                                small_entry(rng, complex)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn build_system<K: Scalar>(space: &Space, raw: &[Vec<Vec<GaussianRational>>]) -> Vec<Vec<L0Scalar<K>>> {
    raw.iter()
        .map(|row| {
            row.iter()
                .map(|vals| L0Scalar::new(space, vals.iter().map(convert).collect()).expect("right length"))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HellyTag {
    Feasible,
    /// β shrunk below the minimal norm at the planted atom.
    OverBudget,
    /// ξ moved off the range of the fiber map at the planted atom.
    Inconsistent,
}

/// A Helly instance in exact raw form.
#[derive(Debug, Clone, PartialEq)]
pub struct RawHelly {
    pub space: RawSpace,
    pub dim: usize,
    /// `riesz[k][atom][d]`.
    pub riesz: Vec<Vec<Vec<GaussianRational>>>,
    /// `targets[k][atom]`.
    pub targets: Vec<Vec<GaussianRational>>,
    pub beta: Vec<Rational>,
    pub eps: Vec<Rational>,
    pub tag: HellyTag,
    pub planted: Option<usize>,
    /// A point with f(x) = ξ and ‖x‖ ≤ β, for feasible instances.
    pub reference: Option<Vec<Vec<GaussianRational>>>,
}

impl RawHelly {
    pub fn build<K: Scalar>(&self, float: bool) -> HellyInstance<K> {
        let space = self.space.build(float);
        let functionals = self
            .riesz
            .iter()
            .map(|f| {
                let fibers: Vec<Vec<K>> = f.iter().map(|v| v.iter().map(convert).collect()).collect();
                RandomFunctional::from_riesz(L0Vector::from_fibers(&space, &fibers).expect("well-formed"))
            })
            .collect();
        let targets = self
            .targets
            .iter()
            .map(|t| L0Scalar::new(&space, t.iter().map(convert).collect()).expect("right length"))
            .collect();
        let real = |v: &[Rational]| -> L0Scalar<K::Real> {
            L0Scalar::new(&space, v.iter().map(<K::Real as RealScalar>::from_rational).collect()).expect("right length")
        };
        HellyInstance::new(functionals, targets, real(&self.beta), real(&self.eps)).expect("generated instance is valid")
    }

    /// Fiber map rows at one atom (F_kd = conj(y_kd)).
    pub fn fiber_matrix(&self, atom: usize) -> Fiber {
        self.riesz.iter().map(|f| f[atom].iter().map(|v| v.conj()).collect()).collect()
    }

    pub fn fiber_targets(&self, atom: usize) -> Vec<GaussianRational> {
        self.targets.iter().map(|t| t[atom].clone()).collect()
    }
}

/// Smallest k/8 with (k/8)² ≥ s.
fn ceil_root_eighths(s: &Rational) -> Rational {
    let mut k = 0i64;
    while Rational::from_ratio(k * k, 64) < *s {
        k += 1;
    }
    Rational::from_ratio(k, 8)
}

/// Largest k/8 with (k/8)² < s (s > 0).
fn floor_root_eighths_strict(s: &Rational) -> Rational {
    let mut k = 0i64;
    while Rational::from_ratio((k + 1) * (k + 1), 64) < *s {
        k += 1;
    }
    Rational::from_ratio(k, 8)
}

/// Random Helly instance with the requested tag. `null_atoms` are given
/// probability zero; the planted defect is always on a positive atom.
pub fn gen_helly(
    rng: &mut Rng8,
    atoms: usize,
    n: usize,
    dim: usize,
    tag: HellyTag,
    null_atoms: &[usize],
    complex: bool,
) -> RawHelly {
    let space = gen_space(rng, atoms, null_atoms);
    let positive: Vec<usize> = (0..atoms).filter(|w| !space.is_null(*w)).collect();
    let planted = (tag != HellyTag::Feasible).then(|| *positive.choose(rng).expect("positive atom"));
    let max_rank = n.min(dim);
    let profile: Vec<usize> = (0..atoms)
        .map(|w| match (tag, planted == Some(w)) {
            (HellyTag::Inconsistent, true) => rng.gen_range(0..n.min(dim + 1)).min(max_rank),
            (HellyTag::OverBudget, true) => rng.gen_range(1..=max_rank),
            _ => rng.gen_range(0..=max_rank),
        })
        .collect();
    let mats: Vec<Fiber> = profile
        .iter()
        .map(|&r| gen_matrix_of_rank(rng, n, dim, r, complex))
        .collect();
    let mut xs: Vec<Vec<GaussianRational>> = Vec::with_capacity(atoms);
    let mut targets_pa: Vec<Vec<GaussianRational>> = Vec::with_capacity(atoms);
    let mut beta = Vec::with_capacity(atoms);
    for w in 0..atoms {
        let f = &mats[w];
        loop {
            let x: Vec<GaussianRational> = (0..dim).map(|_| small_entry(rng, complex)).collect();
            let xi = mat_vec(f, &x);
            let xn = norm_sq(&x);
            if planted == Some(w) && tag == HellyTag::OverBudget {
                let min = fiber_minnorm_solve(f, &xi, dim, 0.0).expect("consistent by construction");
                let mn = norm_sq(&min);
                if mn.is_zero_within(0.0) {
                    continue;
                }
                beta.push(floor_root_eighths_strict(&mn));
            } else {
                beta.push(ceil_root_eighths(&xn) + Rational::from_ratio(rng.gen_range(0..3), 8));
            }
            xs.push(x);
            targets_pa.push(xi);
            break;
        }
        if planted == Some(w) && tag == HellyTag::Inconsistent {
            loop {
                let k = rng.gen_range(0..n);
                let mut xi = targets_pa[w].clone();
                xi[k] = xi[k].clone() + nonzero_entry(rng, complex);
                if fiber_minnorm_solve(f, &xi, dim, 0.0).is_none() {
                    targets_pa[w] = xi;
                    break;
                }
            }
        }
    }
    // Transpose fibers of F into Riesz vectors y_k = conj(F_k).
    let riesz = (0..n)
        .map(|k| (0..atoms).map(|w| mats[w][k].iter().map(|v| v.conj()).collect()).collect())
        .collect();
    let targets = (0..n).map(|k| (0..atoms).map(|w| targets_pa[w][k].clone()).collect()).collect();
    let eps = (0..atoms).map(|_| Rational::from_ratio(rng.gen_range(1..4), 16)).collect();
    RawHelly {
        space,
        dim,
        riesz,
        targets,
        beta,
        eps,
        tag,
        planted,
        reference: (tag == HellyTag::Feasible).then_some(xs),
    }
}

/// Sample-wise input with an n×m matrix per atom. Null atoms are planted
/// as given; each null atom is classically feasible or not according to
/// `null_feasible`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSamplewise {
    pub space: RawSpace,
    pub matrices: Vec<Fiber>,
    pub targets: Vec<Vec<GaussianRational>>,
    pub beta: Vec<Rational>,
    pub eps: Vec<Rational>,
}

impl RawSamplewise {
    pub fn build<K: Scalar>(&self, float: bool) -> SamplewiseInput<K> {
        SamplewiseInput {
            space: self.space.build(float),
            matrices: self
                .matrices
                .iter()
                .map(|m| m.iter().map(|r| r.iter().map(convert).collect()).collect())
                .collect(),
            targets: self.targets.iter().map(|t| t.iter().map(convert).collect()).collect(),
            beta: self.beta.iter().map(<K::Real as RealScalar>::from_rational).collect(),
            eps: self.eps.iter().map(<K::Real as RealScalar>::from_rational).collect(),
        }
    }
}

/// Random sample-wise problem; each atom is independently feasible with
/// probability `p_feasible` (forced feasible on positive atoms when
/// `positive_feasible`).
pub fn gen_samplewise(
    rng: &mut Rng8,
    atoms: usize,
    n: usize,
    m: usize,
    null_atoms: &[usize],
    positive_feasible: bool,
    complex: bool,
) -> RawSamplewise {
    let space = gen_space(rng, atoms, null_atoms);
    let max_rank = n.min(m);
    let mut matrices = Vec::with_capacity(atoms);
    let mut targets = Vec::with_capacity(atoms);
    let mut beta = Vec::with_capacity(atoms);
    for w in 0..atoms {
        let rank = rng.gen_range(0..=max_rank);
        let f = gen_matrix_of_rank(rng, n, m, rank, complex);
        let x: Vec<GaussianRational> = (0..m).map(|_| small_entry(rng, complex)).collect();
        let mut xi = mat_vec(&f, &x);
        let must = positive_feasible && !space.is_null(w);
        let mut b = ceil_root_eighths(&norm_sq(&x));
        if !must && rng.gen_bool(0.5) {
            if rank < n && rng.gen_bool(0.5) {
                loop {
                    let k = rng.gen_range(0..n);
                    let mut t = xi.clone();
                    t[k] = t[k].clone() + nonzero_entry(rng, complex);
                    if fiber_minnorm_solve(&f, &t, m, 0.0).is_none() {
                        xi = t;
                        break;
                    }
                }
            } else if let Some(min) = fiber_minnorm_solve(&f, &xi, m, 0.0) {
                let mn = norm_sq(&min);
                if !mn.is_zero_within(0.0) {
                    b = floor_root_eighths_strict(&mn);
                }
            }
        }
        matrices.push(f);
        targets.push(xi);
        beta.push(b);
    }
    RawSamplewise {
        space,
        matrices,
        targets,
        beta,
        eps: vec![Rational::from_ratio(1, 8); atoms],
    }
}

/// Outcome of the built-in oracle self-test.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Checks the oracles against their own textbook examples and against
/// each other on seeded random data.
pub fn self_test(seed: u64, rounds: usize) -> Vec<SelfTestLine> {
    let q = |p: i64| GaussianRational::new(Rational::from_ratio(p, 1), Rational::from_ratio(0, 1));
    let mut lines = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| lines.push(SelfTestLine { name, passed, detail });

    let ident = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
    push("rank-identity", fiber_rank(&ident, 0.0) == 2, "rank I2 = 2".into());
    let ns = fiber_nullspace(&[vec![q(1), q(1)]], 2, 0.0);
    let ns_ok = ns.len() == 1 && ns[0][0].clone() + ns[0][1].clone() == q(0) && ns[0][0] != q(0);
    push("nullspace-[1 1]", ns_ok, format!("{} basis vectors", ns.len()));
    let mn = fiber_minnorm_solve(&[vec![q(1), q(0)]], &[q(1)], 2, 0.0);
    push("minnorm-[1 0]", mn == Some(vec![q(1), q(0)]), match &mn {
        Some(x) => format!("x = ({})", x.iter().map(Scalar::render).collect::<Vec<_>>().join(", ")),
        None => "no solution".into(),
    });

    let mut r = rng(seed);
    let mut orth_ok = true;
    let mut rank_ok = true;
    for _ in 0..rounds {
        let rows = r.gen_range(1..=4);
        let cols = r.gen_range(1..=4);
        let rank = r.gen_range(0..=rows.min(cols));
        let f = gen_matrix_of_rank(&mut r, rows, cols, rank, true);
        rank_ok &= fiber_rank(&f, 0.0) == rank && fiber_nullspace(&f, cols, 0.0).len() == cols - rank;
        let x: Vec<GaussianRational> = (0..cols).map(|_| small_entry(&mut r, true)).collect();
        let b = mat_vec(&f, &x);
        match fiber_minnorm_solve(&f, &b, cols, 0.0) {
            Some(sol) => {
                orth_ok &= mat_vec(&f, &sol) == b;
                orth_ok &= fiber_nullspace(&f, cols, 0.0).iter().all(|v| dot(&sol, v) == q(0));
                orth_ok &= norm_sq(&sol) <= norm_sq(&x);
            }
            None => orth_ok = false,
        }
    }
    push("rank-profile", rank_ok, format!("{rounds} random matrices"));
    push("minnorm-orthogonal", orth_ok, format!("{rounds} random systems"));
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> Rational {
        Rational::from_ratio(p, 1)
    }

    #[test]
    fn textbook_examples() {
        assert_eq!(fiber_rank(&[vec![q(1), q(0)], vec![q(0), q(1)]], 0.0), 2);
        let ns = fiber_nullspace(&[vec![q(1), q(1)]], 2, 0.0);
        assert_eq!(ns.len(), 1);
        assert_eq!(&ns[0][0] + &ns[0][1], q(0));
        assert_eq!(fiber_minnorm_solve(&[vec![q(1), q(0)]], &[q(1)], 2, 0.0), Some(vec![q(1), q(0)]));
        assert_eq!(fiber_minnorm_solve(&[vec![q(1), q(1)], vec![q(1), q(1)]], &[q(1), q(2)], 2, 0.0), None);
    }

    #[test]
    fn minnorm_is_orthogonal_to_nullspace() {
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(7)]];
        let x = fiber_minnorm_solve(&a, &[q(1), q(1)], 3, 0.0).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(1), q(1)]);
        for v in fiber_nullspace(&a, 3, 0.0) {
            assert_eq!(dot(&x, &v), q(0));
        }
    }

    #[test]
    fn classical_helly_and_grid() {
        let f = vec![vec![q(1), q(0)]];
        assert!(fiber_helly(&f, &[q(1)], &q(1), 2, 0.0).is_feasible());
        assert!(matches!(
            fiber_helly(&f, &[q(1)], &Rational::from_ratio(1, 2), 2, 0.0),
            FiberHelly::OverBudget(_)
        ));
        assert!(grid_violation(&f, &[q(1)], &q(1), 0.0).is_none());
        assert!(grid_violation(&f, &[q(1)], &Rational::from_ratio(1, 2), 0.0).is_some());
        let dup = vec![vec![q(1), q(0)], vec![q(1), q(0)]];
        assert_eq!(fiber_helly(&dup, &[q(1), q(2)], &q(5), 2, 0.0), FiberHelly::Inconsistent);
    }

    #[test]
    fn generated_rank_profile_is_exact() {
        let mut r = rng(7);
        let space = gen_space(&mut r, 3, &[]);
        let raw = gen_module(&mut r, space, 3, 3, &[2, 1, 0], false);
        let m = raw.build::<Rational>(false);
        for (w, &rank) in [2usize, 1, 0].iter().enumerate() {
            assert_eq!(fiber_rank(&m.fiber_rows(w), 0.0), rank);
        }
    }

    #[test]
    fn generated_helly_tags_are_sound() {
        let mut r = rng(11);
        for tag in [HellyTag::Feasible, HellyTag::OverBudget, HellyTag::Inconsistent] {
            for _ in 0..20 {
                let raw = gen_helly(&mut r, 3, 2, 2, tag, &[], false);
                let verdicts: Vec<bool> = (0..3)
                    .map(|w| {
                        let b = raw.beta[w].clone();
                        let f: Vec<Vec<Rational>> =
                            raw.fiber_matrix(w).iter().map(|r| r.iter().map(|v| v.re.clone()).collect()).collect();
                        let t: Vec<Rational> = raw.fiber_targets(w).iter().map(|v| v.re.clone()).collect();
                        fiber_helly(&f, &t, &b, 2, 0.0).is_feasible()
                    })
                    .collect();
                match raw.planted {
                    None => assert!(verdicts.iter().all(|&v| v)),
                    Some(p) => assert!(!verdicts[p]),
                }
            }
        }
    }

    #[test]
    fn self_test_passes() {
        assert!(self_test(3, 30).iter().all(|l| l.passed));
    }
}
