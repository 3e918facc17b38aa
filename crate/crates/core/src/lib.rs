//! Computations in L0(F, K) over a finite atomic probability space.
//!
//! Values are held per atom. Exact mode uses rationals or Gaussian
//! rationals; float mode uses f64 with a tolerance.
//!
//! ```
//! use l0kit::{stratify, L0Vector, ProbSpace, Rational, SubmoduleSpec};
//! use l0kit::scalar::RealScalar;
//!
//! # fn main() -> l0kit::Result<()> {
//! let space = ProbSpace::uniform(2);
//! let q = |p| Rational::from_ratio(p, 1);
//! let x1 = L0Vector::from_fibers(&space, &[vec![q(1), q(0)], vec![q(1), q(1)]])?;
//! let x2 = L0Vector::from_fibers(&space, &[vec![q(0), q(1)], vec![q(2), q(2)]])?;
//! let st = stratify(&SubmoduleSpec::new(vec![x1, x2])?);
//! assert_eq!(st.ranks, vec![2, 1]);
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod conjugate;
pub mod error;
mod fiber;
pub mod helly;
pub mod io;
pub mod l0_algebra;
pub mod l0_module;
pub mod oracle;
pub mod prob_space;
pub mod scalar;
pub mod stratification;

pub use error::{Error, Result};
pub use l0_algebra::{lattice_inf, lattice_sup, Idempotent, L0Scalar, Relation};
pub use l0_module::{concatenate, linear_combination, L0Norm, L0Vector, SubmoduleSpec};
pub use prob_space::{ess_inf_events, ess_sup_events, partition_validate, Atom, Event, Mode, ProbSpace, Space};
pub use scalar::{Complex64, GaussianRational, Rational, RealScalar, Scalar};
pub use stratification::{
    hds_point_vs_submodule, hds_point_vs_zero, orthogonal_witness, solve_underdetermined, stitch_bases, stratify,
    EliminationSolution, Orthogonal, Stratification, StratumBasis, TraceStep,
};
pub use conjugate::{are_independent, combine, RandomFunctional};
pub use helly::{
    analyze, check, construct, decide, solve_samplewise, witness, AtomStatus, HellyAnalysis, HellyInstance,
    HellyVerdict, SamplewiseInput, SamplewiseReport,
};
