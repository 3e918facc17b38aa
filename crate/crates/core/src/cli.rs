//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and writes the report; the return value is the exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conjugate::RandomFunctional;
use crate::helly::{self, AtomStatus, HellyInstance, SamplewiseInput};
use crate::io::{self, load_data, parse_event, parse_space, read_text, DataFile, Report};
use crate::l0_algebra::L0Scalar;
use crate::l0_module::{L0Vector, SubmoduleSpec};
use crate::oracle;
use crate::prob_space::{Event, Space};
use crate::scalar::{Complex64, GaussianRational, Rational, Scalar};
use crate::stratification::{orthogonal_witness, solve_underdetermined, stratify, Orthogonal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "l0kit", version, about = "Stratification and Helly feasibility over finite L0 modules")]
pub struct Cli {
    /// Arithmetic: exact rationals or f64.
    #[arg(long, value_enum, default_value_t = ModeArg::Exact, global = true)]
    pub mode: ModeArg,
    /// Zero tolerance in float mode.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Emit intermediate events.
    #[arg(long, global = true)]
    pub trace: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free-rank stratification of the module spanned by the generator vectors.
    Stratify {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        generators: PathBuf,
    },
    /// Nontrivial solution of an underdetermined homogeneous system; each
    /// vector block of the coefficient file is one equation.
    Solve {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        /// Comma-separated atom ids (default: all atoms).
        #[arg(long)]
        event: Option<String>,
    },
    /// Nonzero vector orthogonal to the module, if it is proper.
    Ortho {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        generators: PathBuf,
    },
    /// Feasibility of f_k(x) = xi_k with ||x|| <= beta.
    Helly {
        #[command(subcommand)]
        op: HellyOp,
    },
    /// Run the oracle self-checks and oracle-vs-library cross checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HellyOp {
    Check(HellyArgs),
    Construct(HellyArgs),
    Witness(HellyArgs),
    /// Per-atom solve; the functional file holds rows F_i with f_i(b) = sum_j F_ij b_j.
    Samplewise {
        #[command(flatten)]
        args: HellyArgs,
        /// Also require null-probability atoms to be solved.
        #[arg(long)]
        everywhere: bool,
    },
}

#[derive(Debug, Args)]
pub struct HellyArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Riesz vectors, one vector block per functional.
    #[arg(long)]
    pub functionals: PathBuf,
    /// Scalar blocks, one per functional.
    #[arg(long)]
    pub targets: PathBuf,
    /// Constant budget.
    #[arg(long, conflicts_with = "beta_file")]
    pub beta: Option<String>,
    #[arg(long)]
    pub beta_file: Option<PathBuf>,
    /// Constant slack (default 1/1000).
    #[arg(long, conflicts_with = "eps_file")]
    pub eps: Option<String>,
    #[arg(long)]
    pub eps_file: Option<PathBuf>,
}

type CliResult<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, errout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                errout.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(message) => {
            let _ = writeln!(errout, "error: {message}");
            EXIT_ERROR
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    space: Space,
}

fn load_space(cli: &Cli, path: &Path) -> CliResult<Space> {
    if cli.mode == ModeArg::Float && !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err("--tol must be a positive number".into());
    }
    let tol = (cli.mode == ModeArg::Float).then_some(cli.tol);
    parse_space(&path.display().to_string(), &read_text(path).map_err(err)?, tol).map_err(err)
}

/// Dispatches on (mode, real/complex).
macro_rules! typed {
    ($cli:expr, $complex:expr, $f:ident ( $($arg:expr),* )) => {
        match ($cli.mode, $complex) {
            (ModeArg::Exact, false) => $f::<Rational>($($arg),*),
            (ModeArg::Exact, true) => $f::<GaussianRational>($($arg),*),
            (ModeArg::Float, false) => $f::<f64>($($arg),*),
            (ModeArg::Float, true) => $f::<Complex64>($($arg),*),
        }
    };
}

pub fn execute(cli: &Cli) -> CliResult<(String, i32)> {
    match &cli.command {
        Command::Stratify { space, generators } => {
            let ctx = Ctx {
                cli,
                space: load_space(cli, space)?,
            };
            let data = load_data(generators).map_err(err)?;
            typed!(cli, data.has_complex(), run_stratify(&ctx, &data))
        }
        Command::Solve { space, coeffs, event } => {
            let ctx = Ctx {
                cli,
                space: load_space(cli, space)?,
            };
            let data = load_data(coeffs).map_err(err)?;
            typed!(cli, data.has_complex(), run_solve(&ctx, &data, event.as_deref()))
        }
        Command::Ortho { space, generators } => {
            let ctx = Ctx {
                cli,
                space: load_space(cli, space)?,
            };
            let data = load_data(generators).map_err(err)?;
            typed!(cli, data.has_complex(), run_ortho(&ctx, &data))
        }
        Command::Helly { op } => {
            let (args, kind) = match op {
                HellyOp::Check(a) => (a, HellyKind::Check),
                HellyOp::Construct(a) => (a, HellyKind::Construct),
                HellyOp::Witness(a) => (a, HellyKind::Witness),
                HellyOp::Samplewise { args, everywhere } => (args, HellyKind::Samplewise(*everywhere)),
            };
            let ctx = Ctx {
                cli,
                space: load_space(cli, &args.space)?,
            };
            let bundle = HellyFiles::load(args)?;
            typed!(cli, bundle.has_complex(), run_helly(&ctx, &bundle, kind))
        }
        Command::Selftest { seed, rounds } => Ok(run_selftest(*seed, *rounds)),
    }
}

fn header(ctx: &Ctx, title: &str, complex: bool) -> Report {
    let mut r = Report::new(title);
    r.meta("mode", if ctx.cli.mode == ModeArg::Exact { "exact" } else { "float" });
    if ctx.cli.mode == ModeArg::Float {
        r.meta("tol", ctx.cli.tol);
    }
    r.meta("field", if complex { "complex" } else { "real" });
    r
}

fn run_stratify<K: Scalar>(ctx: &Ctx, data: &DataFile) -> CliResult<(String, i32)> {
    let gens: Vec<L0Vector<K>> = data.vectors(&ctx.space).map_err(err)?;
    let module = SubmoduleSpec::new(gens).map_err(err)?;
    let st = stratify(&module);
    let mut r = header(ctx, "stratify", K::COMPLEX);
    r.meta("dim", module.dim());
    r.meta("generators", module.generators().len());
    let ranks: Vec<String> = ctx
        .space
        .atoms()
        .iter()
        .zip(&st.ranks)
        .map(|(a, k)| format!("{}:{}", a.id, k))
        .collect();
    r.meta("rank", ranks.join(" "));
    for (i, part) in st.parts.iter().enumerate() {
        r.meta(&format!("A{i}"), io::render_event(part));
    }
    if ctx.cli.trace {
        for step in &st.trace {
            r.meta("trace", step);
        }
    }
    for (i, basis) in st.bases.iter().enumerate() {
        match basis {
            Some(b) => {
                for (j, v) in b.vectors.iter().enumerate() {
                    r.vector(&format!("basis{}.{}", i, j + 1), v);
                }
            }
            None if !st.parts[i].is_empty() => {
                r.comment(&format!("A{i} has probability zero; no basis"));
            }
            None => {}
        }
    }
    Ok((r.finish(), crate::cli::EXIT_OK))
}

fn run_solve<K: Scalar>(ctx: &Ctx, data: &DataFile, event: Option<&str>) -> CliResult<(String, i32)> {
    let rows: Vec<L0Vector<K>> = data.vectors(&ctx.space).map_err(err)?;
    let coeffs: Vec<Vec<L0Scalar<K>>> = rows.iter().map(|v| v.coords().to_vec()).collect();
    let a = match event {
        Some(text) => parse_event(&ctx.space, text).map_err(err)?,
        None => Event::full(&ctx.space),
    };
    let sol = solve_underdetermined(&coeffs, &a).map_err(err)?;
    let mut r = header(ctx, "solve", K::COMPLEX);
    r.meta("rows", coeffs.len());
    r.meta("cols", coeffs[0].len());
    r.meta("event", io::render_event(&a));
    r.meta("nontrivial_on", io::render_event(&sol.nontrivial_on));
    if ctx.cli.trace {
        for (col, e) in &sol.free_columns {
            r.meta("trace", format!("free column {} on {{{}}}", col + 1, io::render_event(e)));
        }
    }
    for (i, l) in sol.solution.iter().enumerate() {
        r.scalar(&format!("lambda{}", i + 1), l);
    }
    Ok((r.finish(), EXIT_OK))
}

fn run_ortho<K: Scalar>(ctx: &Ctx, data: &DataFile) -> CliResult<(String, i32)> {
    let gens: Vec<L0Vector<K>> = data.vectors(&ctx.space).map_err(err)?;
    let module = SubmoduleSpec::new(gens).map_err(err)?;
    let mut r = header(ctx, "ortho", K::COMPLEX);
    match orthogonal_witness(&module).map_err(err)? {
        Orthogonal::Full => {
            r.meta("module", "FULL");
        }
        Orthogonal::Witness { vector, proper } => {
            r.meta("module", "PROPER");
            r.meta("proper", io::render_event(&proper));
            r.vector("x", &vector);
        }
    }
    Ok((r.finish(), EXIT_OK))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HellyKind {
    Check,
    Construct,
    Witness,
    Samplewise(bool),
}

struct HellyFiles {
    functionals: DataFile,
    targets: DataFile,
    beta: Budget,
    eps: Budget,
}

enum Budget {
    Literal(String),
    File(DataFile),
}

impl Budget {
    fn load(literal: &Option<String>, file: &Option<PathBuf>, default: Option<&str>, flag: &str) -> CliResult<Self> {
        match (literal, file, default) {
            (Some(l), _, _) => Ok(Budget::Literal(l.clone())),
            (None, Some(p), _) => Ok(Budget::File(load_data(p).map_err(err)?)),
            (None, None, Some(d)) => Ok(Budget::Literal(d.into())),
            (None, None, None) => Err(format!("one of --{flag} or --{flag}-file is required")),
        }
    }

    fn has_complex(&self) -> bool {
        match self {
            Budget::Literal(_) => false,
            Budget::File(f) => f.has_complex(),
        }
    }

    fn resolve<R: Scalar>(&self, space: &Space, flag: &str) -> CliResult<L0Scalar<R>> {
        match self {
            Budget::Literal(text) => {
                let v = R::parse_literal(text).map_err(|e| format!("--{flag}: {e}"))?;
                Ok(L0Scalar::constant(space, v))
            }
            Budget::File(f) => f.only_scalar(space).map_err(err),
        }
    }
}

impl HellyFiles {
    fn load(args: &HellyArgs) -> CliResult<Self> {
        Ok(Self {
            functionals: load_data(&args.functionals).map_err(err)?,
            targets: load_data(&args.targets).map_err(err)?,
            beta: Budget::load(&args.beta, &args.beta_file, None, "beta")?,
            eps: Budget::load(&args.eps, &args.eps_file, Some("1/1000"), "eps")?,
        })
    }

    fn has_complex(&self) -> bool {
        self.functionals.has_complex() || self.targets.has_complex() || self.beta.has_complex() || self.eps.has_complex()
    }
}

fn statuses_line(space: &Space, statuses: &[AtomStatus]) -> String {
    space
        .atoms()
        .iter()
        .zip(statuses)
        .map(|(a, s)| format!("{}:{}", a.id, s.label()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_helly<K: Scalar>(ctx: &Ctx, files: &HellyFiles, kind: HellyKind) -> CliResult<(String, i32)> {
    let space = &ctx.space;
    let beta: L0Scalar<K::Real> = files.beta.resolve(space, "beta")?;
    let eps: L0Scalar<K::Real> = files.eps.resolve(space, "eps")?;
    let targets: Vec<L0Scalar<K>> = files.targets.scalars(space).map_err(err)?;

    if let HellyKind::Samplewise(everywhere) = kind {
        let matrices = files.functionals.row_matrices::<K>(space).map_err(err)?;
        let input = SamplewiseInput {
            space: space.clone(),
            matrices,
            targets: (0..space.len())
                .map(|w| targets.iter().map(|t| t.at(w).clone()).collect())
                .collect(),
            beta: beta.values().to_vec(),
            eps: eps.values().to_vec(),
        };
        let rep = helly::solve_samplewise(&input, everywhere).map_err(err)?;
        let mut r = header(ctx, "helly samplewise", K::COMPLEX);
        r.meta("verdict", if rep.feasible { "FEASIBLE" } else { "INFEASIBLE" });
        r.meta("everywhere", everywhere);
        r.meta("omega0", io::render_event(&rep.omega0));
        r.meta("failing", io::render_event(&rep.failing));
        r.meta("status", statuses_line(space, &rep.statuses));
        r.vector("x", &rep.solution);
        r.scalar("norm_sq", &rep.solution.norm_sq());
        let code = if rep.feasible { EXIT_OK } else { EXIT_INFEASIBLE };
        return Ok((r.finish(), code));
    }

    let functionals: Vec<RandomFunctional<K>> = files
        .functionals
        .vectors(space)
        .map_err(err)?
        .into_iter()
        .map(RandomFunctional::from_riesz)
        .collect();
    let inst = HellyInstance::new(functionals, targets, beta, eps).map_err(err)?;
    let analysis = helly::analyze(&inst).map_err(err)?;
    let feasible = analysis.feasible();
    let title = match kind {
        HellyKind::Check => "helly check",
        HellyKind::Construct => "helly construct",
        _ => "helly witness",
    };
    if kind == HellyKind::Witness && feasible {
        return Err(crate::error::Error::Feasible.to_string());
    }
    let mut r = header(ctx, title, K::COMPLEX);
    r.meta("verdict", if feasible { "FEASIBLE" } else { "INFEASIBLE" });
    r.meta("violation", io::render_event(&analysis.violation_event));
    r.meta("status", statuses_line(space, &analysis.statuses));
    if ctx.cli.trace {
        for (i, part) in analysis.stratification.parts.iter().enumerate() {
            r.meta("trace", format!("riesz span A{} = {{{}}}", i, io::render_event(part)));
        }
        for step in &analysis.stratification.trace {
            r.meta("trace", step);
        }
    }
    if kind == HellyKind::Construct && feasible {
        let x = &analysis.candidate;
        r.vector("x", x);
        r.scalar("norm_sq", &x.norm_sq());
        if let Some(norm) = x.norm().to_scalar() {
            r.scalar("norm", &norm);
        }
    }
    if let Some(w) = &analysis.witness {
        for (k, l) in w.iter().enumerate() {
            r.scalar(&format!("lambda{}", k + 1), l);
        }
    }
    let code = if feasible { EXIT_OK } else { EXIT_INFEASIBLE };
    Ok((r.finish(), code))
}

fn run_selftest(seed: u64, rounds: usize) -> (String, i32) {
    let mut lines = oracle::self_test(seed, rounds);
    lines.extend(cross_checks(seed, rounds));
    let mut r = Report::new("selftest");
    r.meta("seed", seed);
    r.meta("rounds", rounds);
    let mut ok = true;
    for l in &lines {
        ok &= l.passed;
        r.meta(
            &format!("check.{}", l.name),
            format!("{} ({})", if l.passed { "PASS" } else { "FAIL" }, l.detail),
        );
    }
    r.meta("result", if ok { "PASS" } else { "FAIL" });
    (r.finish(), if ok { EXIT_OK } else { EXIT_ERROR })
}

/// Library algorithms against the per-atom oracles on seeded instances.
fn cross_checks(seed: u64, rounds: usize) -> Vec<oracle::SelfTestLine> {
    let mut rng = oracle::rng(seed ^ 0x5eed);
    let mut strat_ok = true;
    let mut solve_ok = true;
    let mut helly_ok = true;
    for _ in 0..rounds {
        let atoms = rand::Rng::gen_range(&mut rng, 1..=4);
        let dim = rand::Rng::gen_range(&mut rng, 1..=3);
        let gens = rand::Rng::gen_range(&mut rng, 1..=3);
        let profile = oracle::gen_profile(&mut rng, atoms, dim.min(gens));
        let space = oracle::gen_space(&mut rng, atoms, &[]);
        let raw = oracle::gen_module(&mut rng, space.clone(), dim, gens, &profile, false);
        let m = raw.build::<Rational>(false);
        let st = stratify(&m);
        strat_ok &= (0..atoms).all(|w| st.ranks[w] == oracle::fiber_rank(&m.fiber_rows(w), 0.0));

        let mrows = rand::Rng::gen_range(&mut rng, 1..=3);
        let h = rand::Rng::gen_range(&mut rng, mrows + 1..=4);
        let sys = oracle::gen_system(&mut rng, atoms, mrows, h, false);
        let sp = space.build(false);
        let coeffs = oracle::build_system::<Rational>(&sp, &sys);
        match solve_underdetermined(&coeffs, &Event::full(&sp)) {
            Ok(sol) => {
                for w in 0..atoms {
                    let lam: Vec<Rational> = sol.solution.iter().map(|l| l.at(w).clone()).collect();
                    let in_null = coeffs.iter().all(|r| {
                        r.iter()
                            .zip(&lam)
                            .fold(<Rational as Scalar>::zero(), |s, (a, b)| s + a.at(w).clone() * b.clone())
                            .is_zero_within(0.0)
                    });
                    solve_ok &= in_null && lam.iter().any(|v| !v.is_zero_within(0.0));
                }
            }
            Err(_) => solve_ok = false,
        }

        let tag = [oracle::HellyTag::Feasible, oracle::HellyTag::OverBudget, oracle::HellyTag::Inconsistent]
            [rand::Rng::gen_range(&mut rng, 0..3)];
        let hr = oracle::gen_helly(&mut rng, atoms, 2, 2, tag, &[], false);
        let inst = hr.build::<Rational>(false);
        match helly::analyze(&inst) {
            Ok(a) => {
                let per = oracle::helly_per_atom(&inst);
                helly_ok &= (0..atoms).all(|w| per[w].is_feasible() == (a.statuses[w] == AtomStatus::Feasible));
                helly_ok &= a.feasible() == (tag == oracle::HellyTag::Feasible);
            }
            Err(_) => helly_ok = false,
        }
    }
    vec![
        oracle::SelfTestLine {
            name: "stratify-vs-rank",
            passed: strat_ok,
            detail: format!("{rounds} modules"),
        },
        oracle::SelfTestLine {
            name: "elimination-nullspace",
            passed: solve_ok,
            detail: format!("{rounds} systems"),
        },
        oracle::SelfTestLine {
            name: "helly-vs-classical",
            passed: helly_ok,
            detail: format!("{rounds} instances"),
        },
    ]
}
