mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use sympspec::error::{Error, ErrorClass};
use sympspec::means::{self, KarcherOptions, WeightVector};
use sympspec::sops::{self, SPartition};
use sympspec::symplectic::{self, SymplecticMatrix};
use sympspec::theorems::{self, Status, SuiteConfig, TheoremId, TheoremReport};
use sympspec::williamson::{self, PosDefMatrix};

use io::{JsonObject, Kind, MatrixFile};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable input, malformed file or bad flag value (exit 2).
    Parse(String),
    /// Input parsed but is outside the operation's domain (exit 3).
    Validation(String),
    /// A numerical kernel failed (exit 4).
    Numerical(String),
    /// Output could not be written (exit 2).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e.class() {
            ErrorClass::Input | ErrorClass::Domain => CliError::Validation(e.to_string()),
            ErrorClass::Numerical => CliError::Numerical(e.to_string()),
        }
    }
}

/// Exit status of a command that ran to completion.
enum Outcome {
    Ok,
    /// Verification failures or a negative Gaussian verdict.
    Negative,
    /// Karcher iteration budget exhausted.
    Budget,
}

#[derive(Parser)]
#[command(name = "sympspec", version, about = "Symplectic spectra, Euler decompositions, SPD means and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputFlags {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write the resulting matrix to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic eigenvalues and, with --form, the Williamson matrix M.
    Williamson {
        file: PathBuf,
        /// Also compute M with MᵀAM = D ⊕ D.
        #[arg(long)]
        form: bool,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Euler decomposition M = O₁ (Γ ⊕ Γ⁻¹) O₂ᵀ of a symplectic matrix.
    Euler {
        file: PathBuf,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Weighted Karcher mean of two or more positive definite matrices.
    Mean {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        /// Comma-separated positive weights summing to 1 (default uniform).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Absolute residual tolerance (default 1e-9·‖mean‖).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = means::DEFAULT_KARCHER_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Riemannian distance between two positive definite matrices.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Point A #_t B on the geodesic from A to B.
    Geodesic {
        a: PathBuf,
        b: PathBuf,
        /// Parameter in [0, 1].
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// Run the seeded inequality suite.
    Verify {
        /// Theorem id (thm1, thm3, thm4, thm5, superadd, thm6, thm7,
        /// interlace, pinch, thm11, cor8, minmax, or a bare number) or "all".
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        nmin: usize,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        /// Replace every default tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// One JSON report per line.
        #[arg(long)]
        json: bool,
    },
    /// Whether d₁(A) ≥ 1/2.
    Gaussian {
        file: PathBuf,
        #[arg(long, default_value_t = williamson::DEFAULT_GAUSSIAN_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// s-pinching along a partition of the half-order.
    Spinch {
        file: PathBuf,
        /// Comma-separated block sizes summing to n.
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<usize>,
        #[command(flatten)]
        out: OutputFlags,
    },
    /// s-principal submatrix keeping the given coordinates.
    Sprincipal {
        file: PathBuf,
        /// Comma-separated 1-based indices in 1..=n.
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
        #[command(flatten)]
        out: OutputFlags,
    },
}

fn load_posdef(path: &Path) -> Result<PosDefMatrix, CliError> {
    let m = MatrixFile::read(path)?.block_matrix(Kind::Posdef)?;
    Ok(PosDefMatrix::new(m)?)
}

fn load_symplectic(path: &Path) -> Result<SymplecticMatrix, CliError> {
    let m = MatrixFile::read(path)?.block_matrix(Kind::Symplectic)?;
    Ok(SymplecticMatrix::new(m)?)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &DMatrix<f64>) -> String {
    m.row_iter()
        .map(|r| {
            let parts: Vec<String> = r.iter().map(|x| format!("{x:>24.16e}")).collect();
            format!("  {}", parts.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn write_matrix(out: &OutputFlags, m: &DMatrix<f64>, kind: Kind) -> Result<(), CliError> {
    if let Some(path) = &out.output {
        MatrixFile::from_matrix(m, kind).write(path)?;
    }
    Ok(())
}

fn cmd_williamson(file: &Path, form: bool, out: &OutputFlags) -> Result<Outcome, CliError> {
    let a = load_posdef(file)?;
    let spec = williamson::symplectic_spectrum(&a)?;
    let wf = if form { Some(williamson::williamson_form(&a)?) } else { None };
    if out.json {
        let mut o = JsonObject::new();
        o.numbers("d", &spec.d).numbers("d_hat", &spec.d_hat);
        if let Some(w) = &wf {
            let (symp, diag) = w.residuals(&a);
            o.matrix("m", &w.m)
                .number("symplectic_residual", symp)
                .number("diagonalization_residual", diag)
                .boolean("near_degenerate", w.near_degenerate);
        }
        println!("{}", o.finish());
    } else {
        println!("d     = {}", fmt_vec(&spec.d));
        println!("d_hat = {}", fmt_vec(&spec.d_hat));
        if let Some(w) = &wf {
            let (symp, diag) = w.residuals(&a);
            println!("M =\n{}", fmt_matrix(&w.m));
            println!("|MtJM - J|_F       = {symp:e}");
            println!("|MtAM - D(+)D|_F   = {diag:e}");
            if w.near_degenerate {
                println!("note: nearly repeated symplectic eigenvalues; M is far from unique");
            }
        }
    }
    if let Some(w) = &wf {
        write_matrix(out, &w.m, Kind::Symplectic)?;
    } else if out.output.is_some() {
        return Err(CliError::Parse("--output needs --form".into()));
    }
    Ok(Outcome::Ok)
}

fn cmd_euler(file: &Path, out: &OutputFlags) -> Result<Outcome, CliError> {
    let m = load_symplectic(file)?;
    let e = symplectic::euler_decompose(&m)?;
    let residual = (e.reconstruct() - m.matrix()).norm() / m.matrix().norm();
    let mut o = JsonObject::new();
    o.matrix("o1", &e.o1)
        .numbers("gamma", &e.gamma)
        .matrix("o2", &e.o2)
        .number("residual", residual);
    if out.json {
        println!("{}", o.finish());
    } else {
        println!("gamma = {}", fmt_vec(&e.gamma));
        println!("O1 =\n{}", fmt_matrix(&e.o1));
        println!("O2 =\n{}", fmt_matrix(&e.o2));
        println!("relative reconstruction residual = {residual:e}");
    }
    if let Some(path) = &out.output {
        std::fs::write(path, o.finish() + "\n").map_err(|err| CliError::Io(format!("{}: {err}", path.display())))?;
    }
    Ok(Outcome::Ok)
}

fn cmd_mean(
    files: &[PathBuf],
    weights: Option<Vec<f64>>,
    tol: Option<f64>,
    max_iter: usize,
    out: &OutputFlags,
) -> Result<Outcome, CliError> {
    let ms = files.iter().map(|f| load_posdef(f)).collect::<Result<Vec<_>, _>>()?;
    let w = match weights {
        Some(w) => WeightVector::new(w)?,
        None => WeightVector::uniform(ms.len()),
    };
    if let Some(t) = tol {
        if !(t >= 0.0) {
            return Err(CliError::Parse(format!("--tol must be non-negative, got {t}")));
        }
    }
    let opts = KarcherOptions {
        tol,
        max_iter,
        walk_steps: None,
    };
    let r = means::karcher_mean(&ms, &w, &opts)?;
    if out.json {
        let mut o = JsonObject::new();
        o.matrix("mean", r.mean.matrix())
            .number("residual", r.residual)
            .integer("iterations", r.iterations)
            .boolean("converged", r.converged);
        println!("{}", o.finish());
    } else {
        println!("mean =\n{}", fmt_matrix(r.mean.matrix()));
        println!("residual   = {:e}", r.residual);
        println!("iterations = {}", r.iterations);
        println!("converged  = {}", r.converged);
    }
    write_matrix(out, r.mean.matrix(), Kind::Posdef)?;
    Ok(if r.converged { Outcome::Ok } else { Outcome::Budget })
}

fn cmd_distance(a: &Path, b: &Path, json: bool) -> Result<Outcome, CliError> {
    let d = means::riemannian_distance(&load_posdef(a)?, &load_posdef(b)?)?;
    if json {
        println!("{}", JsonObject::new().number("distance", d).finish());
    } else {
        println!("{d}");
    }
    Ok(Outcome::Ok)
}

fn cmd_geodesic(a: &Path, b: &Path, t: f64, out: &OutputFlags) -> Result<Outcome, CliError> {
    let g = means::geodesic(&load_posdef(a)?, &load_posdef(b)?, t)?;
    print_matrix_result("geodesic", g.matrix(), out.json);
    write_matrix(out, g.matrix(), Kind::Posdef)?;
    Ok(Outcome::Ok)
}

fn print_matrix_result(key: &str, m: &DMatrix<f64>, json: bool) {
    if json {
        println!("{}", JsonObject::new().matrix(key, m).finish());
    } else {
        println!("{}", fmt_matrix(m));
    }
}

pub fn report_json(r: &TheoremReport) -> String {
    let mut o = JsonObject::new();
    o.string("theorem_id", r.theorem_id.as_str());
    match r.digest.trial {
        Some(t) => o.integer("trial", t),
        None => o.raw("trial", "null"),
    };
    o.integer("n", r.digest.n)
        .boolean("holds", r.holds)
        .number("margin", r.margin)
        .number("tolerance", r.tolerance)
        .string("digest", &r.digest.to_string())
        .string("status", r.status.as_str());
    if let Some(note) = &r.note {
        o.string("note", note);
    }
    o.finish()
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    theorem: &str,
    seed: u64,
    trials: usize,
    nmin: usize,
    nmax: usize,
    tol: Option<f64>,
    json: bool,
) -> Result<Outcome, CliError> {
    let theorems = if theorem.eq_ignore_ascii_case("all") {
        TheoremId::ALL.to_vec()
    } else {
        vec![TheoremId::parse(theorem).ok_or_else(|| CliError::Parse(format!("unknown theorem '{theorem}'")))?]
    };
    let cfg = SuiteConfig {
        seed,
        trials,
        n_min: nmin,
        n_max: nmax,
        tolerance: tol,
        theorems,
        ..SuiteConfig::default()
    };
    cfg.validate().map_err(|e| CliError::Parse(e.to_string()))?;
    let reports = theorems::run_suite(&cfg)?;
    let summary = theorems::summarize(&reports);
    if json {
        for r in &reports {
            println!("{}", report_json(r));
        }
    } else {
        println!(
            "{:<10} {:>6} {:>6} {:>6} {:>8} {:>12} {:>6} {:>14}",
            "theorem", "trials", "pass", "fail", "boundary", "inconclusive", "error", "worst margin"
        );
        for s in &summary {
            println!(
                "{:<10} {:>6} {:>6} {:>6} {:>8} {:>12} {:>6} {:>14.3e}",
                s.theorem_id.as_str(),
                s.trials,
                s.passed,
                s.failed,
                s.boundary,
                s.inconclusive,
                s.errors,
                s.worst_margin
            );
        }
        for r in reports.iter().filter(|r| r.status != Status::Pass) {
            println!(
                "{} trial {} [{}] margin {:e}: {}{}",
                r.theorem_id,
                r.digest.trial.unwrap_or(0),
                r.status.as_str(),
                r.margin,
                r.digest,
                r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
            );
        }
    }
    let failures: usize = summary.iter().map(|s| s.failures()).sum();
    Ok(if failures == 0 { Outcome::Ok } else { Outcome::Negative })
}

fn cmd_gaussian(file: &Path, tol: f64, json: bool) -> Result<Outcome, CliError> {
    let a = load_posdef(file)?;
    let d1 = williamson::symplectic_spectrum(&a)?.smallest();
    let gaussian = williamson::is_gaussian(&a, tol)?;
    if json {
        println!("{}", JsonObject::new().number("d1", d1).boolean("gaussian", gaussian).finish());
    } else {
        println!("d1 = {d1}");
        println!("gaussian = {gaussian}");
    }
    Ok(if gaussian { Outcome::Ok } else { Outcome::Negative })
}

fn cmd_spinch(file: &Path, partition: Vec<usize>, out: &OutputFlags) -> Result<Outcome, CliError> {
    let a = load_posdef(file)?;
    let p = SPartition::new(partition)?;
    let c = sops::s_pinching(&a, &p)?;
    print_matrix_result("pinched", c.matrix(), out.json);
    write_matrix(out, c.matrix(), Kind::Posdef)?;
    Ok(Outcome::Ok)
}

fn cmd_sprincipal(file: &Path, keep: &[usize], out: &OutputFlags) -> Result<Outcome, CliError> {
    let a = load_posdef(file)?;
    if let Some(bad) = keep.iter().find(|&&i| i == 0 || i > a.half_order()) {
        return Err(CliError::Validation(format!(
            "index {bad} out of range 1..={}",
            a.half_order()
        )));
    }
    let zero_based: Vec<usize> = keep.iter().map(|i| i - 1).collect();
    let s = sops::s_principal_submatrix(&a, &zero_based)?;
    print_matrix_result("submatrix", s.matrix(), out.json);
    write_matrix(out, s.matrix(), Kind::Posdef)?;
    Ok(Outcome::Ok)
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Williamson { file, form, out } => cmd_williamson(&file, form, &out),
        Command::Euler { file, out } => cmd_euler(&file, &out),
        Command::Mean {
            files,
            weights,
            tol,
            max_iter,
            out,
        } => cmd_mean(&files, weights, tol, max_iter, &out),
        Command::Distance { a, b, json } => cmd_distance(&a, &b, json),
        Command::Geodesic { a, b, t, out } => cmd_geodesic(&a, &b, t, &out),
        Command::Verify {
            theorem,
            seed,
            trials,
            nmin,
            nmax,
            tol,
            json,
        } => cmd_verify(&theorem, seed, trials, nmin, nmax, tol, json),
        Command::Gaussian { file, tol, json } => cmd_gaussian(&file, tol, json),
        Command::Spinch { file, partition, out } => cmd_spinch(&file, partition, &out),
        Command::Sprincipal { file, keep, out } => cmd_sprincipal(&file, &keep, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Ok(Outcome::Budget) => ExitCode::from(5),
        Err(e) => {
            eprintln!("sympspec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
