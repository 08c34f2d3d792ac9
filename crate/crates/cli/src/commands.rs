//! Subcommand implementations. Each returns an [`Artifact`]; printing and
//! file handling live in `output`.

use std::path::PathBuf;
use std::sync::Arc;

use bogoliubov::atom::{
    critical_t, hartree_energy, hartree_scf, minimize_mu_tilde, mu_upper_bound, BasisConfig, GridConfig, QtProblem,
    RadialGrid, ScfOptions,
};
use bogoliubov::coherent::{toy_bogoliubov_energy, ManyBodyCoefficients};
use bogoliubov::fock::{assemble_hamiltonian, ground_state};
use bogoliubov::json::MatrixJson;
use bogoliubov::linalg::{hermitian_eigenvalues, hermitian_part, sign_matrix};
use bogoliubov::onepdm::{full_gamma, is_admissible, pure_relation_defect, purity_defect, weak_relation_min};
use bogoliubov::quadratic::{fock_verify_ground, ground_energy, ground_onepdm, spectral_flag, stationarity_defect};
use bogoliubov::quasifree::{required_cutoff, verify_quasifree_with_tol};
use bogoliubov::sampling::{
    gaussian_matrix, random_admissible, random_bogoliubov, random_positive_quadratic, random_pure, random_symmetric,
    random_weakly_paired,
};
use bogoliubov::symplectic::{diagonalize_onepdm, pattern_defect, BogoliubovMap};
use bogoliubov::{FockSpace, OnePdm, QuadraticHamiltonian, QuasiFreeSpec, Sector};
use clap::{Args, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::output::{csv_table, Artifact, CliError};

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

// ---------------------------------------------------------------- diag

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiagArgs {
    /// 1-pdm JSON ({"M", "gamma", "alpha"}); `-` reads stdin.
    #[arg(long)]
    pub input: PathBuf,
    /// Admissibility tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

pub fn diag(a: &DiagArgs) -> Result<Artifact, CliError> {
    let p: OnePdm = read_json(&a.input)?;
    let d = diagonalize_onepdm(&p, a.tol)?;
    let bottom: Vec<f64> = d.values.iter().map(|l| 1.0 + l).collect();
    let pattern = pattern_defect(&d.map, &full_gamma(&p), &d.values, &bottom);
    Ok(Artifact::new(json!({
        "diagonalization": d,
        "symplectic_defect": d.map.symplectic_defect(),
        "j_defect": d.map.j_defect(),
        "pattern_defect": pattern,
        "purity_defect": purity_defect(&p),
    })))
}

// ---------------------------------------------------------------- quadham

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadhamArgs {
    /// Single-mode coefficient ε of a*a.
    #[arg(long, conflicts_with = "input")]
    pub a: Option<f64>,
    /// Single-mode pairing coefficient κ.
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
    /// JSON {"a": matrix, "b": matrix} for M modes.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Fock-space cutoffs for the oracle comparison.
    #[arg(long, value_delimiter = ',')]
    pub verify_cutoff: Vec<usize>,
    /// Largest accepted |oracle − Tr d| at the largest cutoff.
    #[arg(long, default_value_t = 1e-6)]
    pub gap_tol: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HamiltonianJson {
    a: MatrixJson,
    b: MatrixJson,
}

pub fn quadham(args: &QuadhamArgs) -> Result<Artifact, CliError> {
    let h = match (&args.input, args.a) {
        (Some(path), _) => {
            let j: HamiltonianJson = read_json(path)?;
            QuadraticHamiltonian::new(j.a.to_matrix()?, j.b.to_matrix()?)?
        }
        (None, Some(eps)) => QuadraticHamiltonian::single_mode(eps, args.b.unwrap_or(0.0)),
        (None, None) => return Err(CliError::Input("give --a/--b or --input".into())),
    };
    let g = ground_energy(&h)?;
    let minimizer = if g.degenerate { None } else { Some(ground_onepdm(&h)?) };
    let mut art = json!({
        "modes": h.modes(),
        "energy": g.energy,
        "d": g.d,
        "degenerate": g.degenerate,
        "diagonalization_residual": g.diagonalization.residual,
        "minimizer": minimizer,
    });
    let mut failed = false;
    if !args.verify_cutoff.is_empty() {
        let v = fock_verify_ground(&h, &args.verify_cutoff)?;
        let last = *v.gaps.last().expect("non-empty");
        failed = !(last.abs() <= args.gap_tol);
        art["verification"] = serde_json::to_value(&v).expect("json");
        art["oracle_gap"] = json!(last);
    }
    Ok(Artifact::new(art).failed_if(failed, format!("oracle gap exceeds {:e}", args.gap_tol)))
}

// ---------------------------------------------------------------- wick

#[derive(Debug, Clone, Args, Serialize)]
pub struct WickArgs {
    /// Occupations λ in the diagonal frame (at most two modes).
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambdas: Vec<f64>,
    /// Squeezing parameters of a single-mode-squeeze frame, one per mode.
    #[arg(long, value_delimiter = ',', conflicts_with = "random_frame")]
    pub squeeze: Vec<f64>,
    /// Random Bogoliubov frame with this maximal squeezing.
    #[arg(long)]
    pub random_frame: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximal string degree.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
    /// Fock cutoff; chosen from the occupations when omitted.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Include every compared string in the output.
    #[arg(long)]
    pub entries: bool,
}

pub fn wick(a: &WickArgs) -> Result<Artifact, CliError> {
    let m = a.lambdas.len();
    let map = if let Some(r) = a.random_frame {
        Some(random_bogoliubov(&mut ChaCha8Rng::seed_from_u64(a.seed), m, r))
    } else if !a.squeeze.is_empty() {
        if a.squeeze.len() != m {
            return Err(CliError::Input("one squeeze parameter per mode is required".into()));
        }
        Some(BogoliubovMap::squeezes(&a.squeeze))
    } else {
        None
    };
    let rotated = map.is_some();
    let spec = match map {
        Some(v) => QuasiFreeSpec::with_map(&a.lambdas, v),
        None => QuasiFreeSpec::thermal(&a.lambdas),
    };
    let cutoff = match a.cutoff {
        Some(c) => c,
        None => {
            let mut c = required_cutoff(&a.lambdas, 1e-12) + 2 * a.degree + if rotated { 16 } else { 0 };
            if rotated && a.lambdas.iter().any(|&l| l > 0.0) {
                // the dense rotated route works on cutoff + 24 and caps its dimension
                while c > 1 && FockSpace::new(m, c + 24)?.dimension() > 1500 {
                    c -= 1;
                }
            }
            c
        }
    };
    let space = FockSpace::new(m, cutoff)?;
    let mut report = verify_quasifree_with_tol(&spec, &space, a.degree, a.tol)?;
    let passed = report.passed;
    let count = report.entries.len();
    if !a.entries {
        report.entries.clear();
    }
    let mut out = serde_json::to_value(&report).expect("json");
    out["strings_compared"] = json!(count);
    out["cutoff"] = json!(cutoff);
    Ok(Artifact::new(out).failed_if(!passed, format!("Wick mismatch above {:e}", a.tol)))
}

// ---------------------------------------------------------------- toy

#[derive(Debug, Clone, Args, Serialize)]
pub struct ToyArgs {
    /// Particle numbers to evaluate.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<f64>,
    /// Also scan N = 10^0, …, 10^K.
    #[arg(long)]
    pub n_max: Option<u32>,
}

fn toy_oracle(n: f64) -> Result<Option<f64>, CliError> {
    if n.fract() != 0.0 || !(0.0..=40.0).contains(&n) {
        return Ok(None);
    }
    let c = ManyBodyCoefficients::toy();
    let space = Arc::new(FockSpace::new(1, n as usize)?);
    let op = assemble_hamiltonian(&space, &c.h, &c.w)?;
    Ok(Some(ground_state(&op, Sector::Fixed(n as usize))?.energy))
}

pub fn toy(a: &ToyArgs) -> Result<Artifact, CliError> {
    let mut ns = a.n.clone();
    if let Some(k) = a.n_max {
        ns.extend((0..=k).map(|e| 10f64.powi(e as i32)));
    }
    if ns.is_empty() {
        return Err(CliError::Input("give --n and/or --n-max".into()));
    }
    if ns.iter().any(|n| !(*n >= 1.0)) {
        return Err(CliError::Input("particle numbers must be at least 1".into()));
    }
    let rows = ns
        .par_iter()
        .map(|&n| -> Result<Value, CliError> {
            let r = toy_bogoliubov_energy(n)?;
            let exact = n * n - n;
            Ok(json!({
                "n": n,
                "exact": exact,
                "oracle": toy_oracle(n)?,
                "bogoliubov": r.energy,
                "lambda": r.lambda,
                "excess": r.energy - exact,
                "ratio": r.ratio(),
                "lower_bound_holds": r.energy >= exact,
            }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table = csv_table(
        &["n", "exact", "bogoliubov", "lambda", "ratio"],
        rows.iter().map(|r| {
            ["n", "exact", "bogoliubov", "lambda", "ratio"]
                .iter()
                .map(|k| num(r[*k].as_f64().unwrap_or(f64::NAN)))
                .collect()
        }),
    );
    let holds = rows.iter().all(|r| r["lower_bound_holds"] == json!(true));
    Ok(Artifact::new(json!({ "rows": rows }))
        .with_table(table)
        .failed_if(!holds, "Bogoliubov energy below N^2 - N"))
}

// ---------------------------------------------------------------- atom

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 800)]
    pub grid_size: usize,
    #[arg(long, default_value_t = 2000.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 0.002)]
    pub r0: f64,
    /// SCF density-residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub scf_tol: f64,
    #[arg(long, default_value_t = 3000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 0.3)]
    pub mixing: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<RadialGrid, CliError> {
        Ok(RadialGrid::new(GridConfig {
            points: self.grid_size,
            rmax: self.rmax,
            r0: self.r0,
        })?)
    }

    fn scf(&self) -> ScfOptions {
        ScfOptions {
            tol: self.scf_tol,
            max_iterations: self.max_iterations,
            mixing: self.mixing,
            ..ScfOptions::default()
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum AtomCommand {
    /// Self-consistent Hartree minimizer at ratio t.
    Scf(ScfArgs),
    /// μ̃(t) and the second-order bound.
    Mu(MuArgs),
    /// Critical ratio by bisection on binding.
    Tc(TcArgs),
    /// e(t) on a uniform t grid.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScfArgs {
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Omit the orbital from the output.
    #[arg(long)]
    pub no_orbital: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MuArgs {
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub channels: Vec<usize>,
    /// Basis functions per channel.
    #[arg(long, default_value_t = 30)]
    pub basis: usize,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TcArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.4)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.004)]
    pub width: f64,
    /// SCF iteration cap for each bisection probe.
    #[arg(long, default_value_t = 800)]
    pub probe_iterations: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.1)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1.2)]
    pub t_max: f64,
    #[arg(long, default_value_t = 12)]
    pub steps: usize,
    #[command(flatten)]
    pub grid: GridArgs,
}

fn residuals(s: &bogoliubov::HartreeSolution) -> Value {
    json!({ "density": s.residual, "equation": s.equation_residual, "iterations": s.iterations })
}

pub fn atom(cmd: &AtomCommand) -> Result<(&'static str, Value, Artifact), CliError> {
    match cmd {
        AtomCommand::Scf(a) => {
            let grid = a.grid.grid()?;
            let s = hartree_scf(a.t, &grid, &a.grid.scf())?;
            let parts = hartree_energy(&grid, &s.phi);
            let mut out = json!({
                "t": s.t,
                "e": s.energy,
                "eprime": s.multiplier,
                "gap": s.gap,
                "bound": s.multiplier < 0.0,
                "energy_parts": parts,
                "mixing": s.mixing,
                "residuals": residuals(&s),
            });
            if !a.no_orbital {
                out["r"] = json!(grid.points());
                out["p"] = json!(grid.reduced(&s.phi));
            }
            Ok(("atom scf", json!(a), Artifact::new(out)))
        }
        AtomCommand::Mu(a) => {
            let grid = a.grid.grid()?;
            let s = hartree_scf(a.t, &grid, &a.grid.scf())?;
            let cfg = BasisConfig {
                size: a.basis,
                beta: a.beta,
            };
            let prob = QtProblem::new(&grid, &s, &a.channels, &cfg)?;
            let mu = minimize_mu_tilde(&prob, &Default::default())?;
            let b = mu_upper_bound(&prob, &mu)?;
            let dropped: Vec<usize> = prob.channels.iter().map(|c| c.dropped).collect();
            let out = json!({
                "t": s.t,
                "e": s.energy,
                "eprime": s.multiplier,
                "gap": s.gap,
                "mu_tilde": mu.mu_tilde,
                "mu_tilde_exact": mu.exact,
                "mu_bound": b.bound,
                "product_coefficient": b.product_coefficient,
                "trial_family": b.trial,
                "trial_relative_gap": b.relative_gap,
                "channels": mu.channels,
                "dropped_basis_functions": dropped,
                "residuals": residuals(&s),
            });
            Ok(("atom mu", json!(a), Artifact::new(out)))
        }
        AtomCommand::Tc(a) => {
            let grid = a.grid.grid()?;
            let opts = ScfOptions {
                max_iterations: a.probe_iterations,
                ..a.grid.scf()
            };
            let c = critical_t(&grid, a.lo, a.hi, a.width, &opts)?;
            let table = csv_table(
                &["t", "bound", "eprime", "iterations"],
                c.trace.iter().map(|s| {
                    vec![
                        num(s.t),
                        s.bound.to_string(),
                        s.multiplier.map(num).unwrap_or_default(),
                        s.iterations.map(|i| i.to_string()).unwrap_or_default(),
                    ]
                }),
            );
            let out = serde_json::to_value(&c).expect("json");
            Ok(("atom tc", json!(a), Artifact::new(out).with_table(table)))
        }
        AtomCommand::Scan(a) => {
            if a.steps < 2 || !(a.t_max > a.t_min) {
                return Err(CliError::Input("scan needs t_max > t_min and at least 2 steps".into()));
            }
            let grid = a.grid.grid()?;
            let opts = a.grid.scf();
            let ts: Vec<f64> = (0..a.steps)
                .map(|k| a.t_min + (a.t_max - a.t_min) * k as f64 / (a.steps - 1) as f64)
                .collect();
            let sols = ts
                .par_iter()
                .map(|&t| hartree_scf(t, &grid, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            let d2: Vec<f64> = sols
                .windows(3)
                .map(|w| w[0].energy - 2.0 * w[1].energy + w[2].energy)
                .collect();
            let min_d2 = d2.iter().copied().fold(f64::INFINITY, f64::min);
            let table = csv_table(
                &["t", "e", "eprime", "gap", "iterations", "second_difference"],
                sols.iter().enumerate().map(|(i, s)| {
                    let d = if i >= 1 && i + 1 < sols.len() { num(d2[i - 1]) } else { String::new() };
                    vec![num(s.t), num(s.energy), num(s.multiplier), num(s.gap), s.iterations.to_string(), d]
                }),
            );
            let rows: Vec<Value> = sols
                .iter()
                .map(|s| json!({ "t": s.t, "e": s.energy, "eprime": s.multiplier, "gap": s.gap, "residuals": residuals(s) }))
                .collect();
            let out = json!({
                "rows": rows,
                "min_second_difference": if d2.is_empty() { Value::Null } else { json!(min_d2) },
                "convex": d2.iter().all(|&x| x >= -1e-8),
                "multiplier_nondecreasing": sols.windows(2).all(|w| w[1].multiplier >= w[0].multiplier),
            });
            Ok(("atom scan", json!(a), Artifact::new(out).with_table(table)))
        }
    }
}

// ---------------------------------------------------------------- verify-all

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Random instances per check.
    #[arg(long, default_value_t = 25)]
    pub cases: usize,
    /// Instances that also run the Fock-space oracle.
    #[arg(long, default_value_t = 3)]
    pub oracle_cases: usize,
}

#[derive(Debug, Clone, Serialize)]
struct CheckSummary {
    name: &'static str,
    cases: usize,
    worst: f64,
    tol: f64,
    passed: bool,
}

fn summarize(name: &'static str, values: &[f64], tol: f64) -> CheckSummary {
    let worst = values.iter().copied().fold(0.0, f64::max);
    CheckSummary {
        name,
        cases: values.len(),
        worst,
        tol,
        passed: values.iter().all(|v| *v <= tol),
    }
}

fn case_rng(seed: u64, check: u64, case: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(check * 1_000_003 + case as u64);
    r
}

pub fn verify_all(a: &VerifyArgs) -> Result<Artifact, CliError> {
    let cases: Vec<usize> = (0..a.cases).collect();
    let diag = cases
        .par_iter()
        .map(|&i| -> Result<f64, CliError> {
            let mut r = case_rng(a.seed, 1, i);
            let m = r.random_range(1..=6);
            let p = random_admissible(&mut r, m);
            let d = diagonalize_onepdm(&p, 1e-9)?;
            let bottom: Vec<f64> = d.values.iter().map(|l| 1.0 + l).collect();
            Ok(d.map
                .symplectic_defect()
                .max(d.map.j_defect())
                .max(pattern_defect(&d.map, &full_gamma(&p), &d.values, &bottom)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let purity: Vec<f64> = cases
        .par_iter()
        .map(|&i| {
            let mut r = case_rng(a.seed, 2, i);
            let m = r.random_range(1..=4);
            let p = if i % 2 == 0 { random_pure(&mut r, m) } else { random_admissible(&mut r, m) };
            let agree = (purity_defect(&p) <= 1e-8) == (pure_relation_defect(&p) <= 1e-8);
            if agree {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    let stationarity = cases
        .par_iter()
        .map(|&i| -> Result<f64, CliError> {
            let mut r = case_rng(a.seed, 3, i);
            let m = r.random_range(1..=4);
            let h = random_positive_quadratic(&mut r, m, 0.1, 0.8);
            let p = ground_onepdm(&h)?;
            let flag = spectral_flag(&h)?;
            let ags = h.doubled() * full_gamma(&p) * sign_matrix(m);
            let ev = hermitian_eigenvalues(&hermitian_part(&ags));
            Ok(stationarity_defect(&h, &p, &flag.projection).max(ev[ev.len() - 1]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let oracle: Vec<usize> = (0..a.oracle_cases).collect();
    let wick = oracle
        .par_iter()
        .map(|&i| -> Result<f64, CliError> {
            let mut r = case_rng(a.seed, 4, i);
            let lambdas = [r.random_range(0.0..0.15), r.random_range(0.0..0.15)];
            let spec = QuasiFreeSpec::with_map(&lambdas, random_bogoliubov(&mut r, 2, 0.2));
            let space = FockSpace::new(2, 18)?;
            Ok(verify_quasifree_with_tol(&spec, &space, 4, 1e-7)?.worst)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let quad = oracle
        .par_iter()
        .map(|&i| -> Result<f64, CliError> {
            let mut r = case_rng(a.seed, 5, i);
            let h = random_weakly_paired(&mut r, 2, 0.3);
            Ok(fock_verify_ground(&h, &[24])?.gaps[0].abs())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let weak = weak_relation_survey(a);
    let checks = vec![
        summarize("diagonalization identities", &diag, 1e-9),
        summarize("purity characterizations agree", &purity, 0.0),
        summarize("minimizer stationarity", &stationarity, 1e-8),
        summarize("Wick theorem vs oracle", &wick, 1e-7),
        summarize("quadratic ground energy vs oracle", &quad, 1e-5),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(Artifact::new(json!({ "checks": checks, "passed": passed, "weak_relation_survey": weak })).failed_if(!passed, "property suite failed"))
}

/// Samples (γ, α) on the boundary region of γ(1+γ) ≥ αα* and records how
/// often full admissibility also holds. Reported only; nothing is asserted.
fn weak_relation_survey(a: &VerifyArgs) -> Value {
    let mut r = case_rng(a.seed, 6, 0);
    let (mut samples, mut admissible, mut worst) = (0usize, 0usize, f64::INFINITY);
    for _ in 0..a.cases {
        let m = r.random_range(1..=3);
        let g = gaussian_matrix(&mut r, m);
        let gamma = &g * g.adjoint();
        let alpha0 = random_symmetric(&mut r, m);
        let with = |s: f64| OnePdm::new(gamma.clone(), alpha0.scale(s)).ok();
        let (mut lo, mut hi) = (0.0, 1.0);
        while with(hi).is_some_and(|p| weak_relation_min(&p) >= 0.0) && hi < 1e6 {
            hi *= 2.0;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if with(mid).is_some_and(|p| weak_relation_min(&p) >= 0.0) {
                lo = mid
            } else {
                hi = mid
            }
        }
        let Some(p) = with(lo * r.random_range(0.9..1.0)) else { continue };
        samples += 1;
        let adm = is_admissible(&p, 1e-10);
        if adm.admissible {
            admissible += 1;
        }
        worst = worst.min(adm.min_eigenvalue());
    }
    json!({
        "samples": samples,
        "weak_relation_holds": samples,
        "also_admissible": admissible,
        "smallest_admissibility_eigenvalue": worst,
    })
}
