//! `brank`: command-line front end for the bi-polynomial rank toolkit.
//!
//! Every subcommand writes canonical JSON (sorted keys). Exit status is 0 on
//! success or an accepted certificate, 2 on a rejected certificate, 1 on error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use brank_core::abpdec::bounds::{dc_pipeline_bound, p_bound};
use brank_core::abpdec::{
    dc_bound_from_brank, decompose_from_dc, generic_brank_floor, mv_coefficients, sqrt_bound, AffineMatrixPoly,
};
use brank_core::certify::{certify_brank, certify_minrank, DualCertificate, FloatSymMatrix, DEFAULT_TOL};
use brank_core::exactla::ExactMatrix;
use brank_core::permhess::{mr_report, sigma_matrix};
use brank_core::polyring::{perm_poly, Point, Polynomial};
use brank_core::rankmin::{
    build_affine_system, build_psd_pair_system, build_sym_system, build_z2k, minrank_interval, ConstraintSystem,
    DEFAULT_BUDGET,
};
use brank_core::rational::{frac, parse_rational, to_f64, Rational};

#[derive(Parser, Debug)]
#[command(name = "brank", version, about = "Bi-polynomial rank, determinantal complexity bounds and certificates")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, signature and block structure of the permanent's Hessian at Σ_d.
    Hessian {
        #[arg(long, short)]
        d: usize,
    },
    /// Build a rank-minimization constraint system.
    Build {
        #[arg(long, value_enum)]
        kind: SystemChoice,
        #[command(flatten)]
        source: PolySource,
        /// Grid size for `z2k`.
        #[arg(long, short)]
        d: Option<usize>,
        /// Half degree for `z2k` and `--perm`.
        #[arg(long, short)]
        k: Option<usize>,
        /// Also write the sparse-triplet system to this file.
        #[arg(long)]
        export_cs: Option<PathBuf>,
    },
    /// Decompose `(det Q(x + x0))^{(2k)}` into products of degree-k polynomials.
    Decompose {
        /// Affine matrix polynomial JSON file.
        #[arg(long)]
        q: PathBuf,
        /// Comma-separated rationals, or `sigma` for Σ_d.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, short)]
        k: usize,
        /// Write the decomposition here; the report still goes to --output.
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Coefficients of det(A(x) + λI) through the clow-sequence program.
    MvDet {
        /// Linear matrix polynomial JSON file.
        #[arg(long, conflicts_with = "random")]
        matrix: Option<PathBuf>,
        /// Use a random n x n matrix with small rational coefficients instead.
        #[arg(long)]
        random: Option<usize>,
        /// Variables of the random matrix.
        #[arg(long, default_value_t = 2)]
        vars: usize,
        /// Comma-separated coefficient degrees; all by default.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
    },
    /// Interval for the minimum rank of the Gram family of a polynomial.
    BrankInterval {
        #[command(flatten)]
        source: PolySource,
        #[arg(long, short)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = IntervalKind::Xp)]
        kind: IntervalKind,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Also write the sparse-triplet system to this file.
        #[arg(long)]
        export_cs: Option<PathBuf>,
    },
    /// Check an outer-approximation certificate.
    Certify {
        /// JSON file: a list of matrices, `{"vertices": [...]}`, or
        /// `{"polynomial": ..., "pairs": [[Q+, Q-], ...], "duals": [...]}`.
        #[arg(long)]
        vertices: PathBuf,
        #[arg(long, short)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Closed-form bound calculators.
    Bounds {
        /// A lower bound on brank, as a rational.
        #[arg(long)]
        brank: Option<String>,
        #[arg(long, short)]
        k: usize,
        /// Number of variables D.
        #[arg(long)]
        vars: usize,
        /// Matrix size, for the decomposition pair-count bounds.
        #[arg(long, short)]
        n: Option<usize>,
    },
}

#[derive(clap::Args, Debug)]
#[group(multiple = false)]
struct PolySource {
    /// Polynomial JSON file.
    #[arg(long)]
    poly: Option<PathBuf>,
    /// Use perm_d shifted to Σ_d, restricted to degree 2k.
    #[arg(long)]
    perm: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SystemChoice {
    Xp,
    Sym,
    PsdPair,
    Z2k,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IntervalKind {
    Xp,
    Sym,
}

/// Result of a subcommand: JSON plus whether a certificate was rejected.
struct Report {
    value: Value,
    rejected: bool,
}

impl From<Value> for Report {
    fn from(value: Value) -> Self {
        Report { value, rejected: false }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    fs::write(path, canonical(value)?).with_context(|| format!("writing {}", path.display()))
}

/// Pretty JSON with keys in sorted order.
fn canonical(value: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn perm_target(d: usize, k: Option<usize>) -> Result<Polynomial> {
    let k = k.ok_or_else(|| anyhow!("--perm needs --k"))?;
    if d < 2 {
        bail!("--perm needs d >= 2, got {d}");
    }
    if 2 * k > d {
        bail!("perm_{d} has degree {d}, below 2k = {}", 2 * k);
    }
    Ok(perm_poly(d)?.shift(&sigma_matrix(d)?)?.homogeneous_part(2 * k))
}

fn load_poly(source: &PolySource, k: Option<usize>) -> Result<Polynomial> {
    match (&source.poly, source.perm) {
        (Some(path), None) => read_json(path),
        (None, Some(d)) => perm_target(d, k),
        _ => bail!("give exactly one of --poly and --perm"),
    }
}

fn parse_point(text: &str, num_vars: usize) -> Result<Point> {
    if text.trim() == "sigma" {
        let d =
            (1..=num_vars).find(|d| d * d == num_vars).ok_or_else(|| anyhow!("sigma needs D = d^2, got {num_vars}"))?;
        return Ok(sigma_matrix(d)?);
    }
    let coords = text.split(',').map(|s| parse_rational(s.trim())).collect::<std::result::Result<Vec<_>, _>>()?;
    if coords.len() != num_vars {
        bail!("x0 has {} coordinates, expected {num_vars}", coords.len());
    }
    Ok(Point::new(coords))
}

fn cmd_hessian(d: usize) -> Result<Report> {
    if d < 2 {
        bail!("d must be at least 2, got {d}");
    }
    Ok(to_value(&mr_report(d)?)?.into())
}

fn build_system(
    kind: SystemChoice,
    source: &PolySource,
    d: Option<usize>,
    k: Option<usize>,
) -> Result<ConstraintSystem> {
    Ok(match kind {
        SystemChoice::Z2k => {
            let (d, k) = d.zip(k).ok_or_else(|| anyhow!("z2k needs --d and --k"))?;
            build_z2k(d, k)?
        }
        SystemChoice::Xp => build_affine_system(&load_poly(source, k)?)?,
        SystemChoice::Sym => build_sym_system(&load_poly(source, k)?)?,
        SystemChoice::PsdPair => build_psd_pair_system(&load_poly(source, k)?)?,
    })
}

fn cmd_build(
    kind: SystemChoice,
    source: &PolySource,
    d: Option<usize>,
    k: Option<usize>,
    export: Option<&Path>,
) -> Result<Report> {
    let system = build_system(kind, source, d, k)?.to_json();
    if let Some(path) = export {
        write_json(path, &system)?;
    }
    Ok(system.into())
}

fn cmd_decompose(q: &Path, x0: &str, k: usize, out: Option<&Path>) -> Result<Report> {
    if k == 0 {
        bail!("k must be positive");
    }
    let q: AffineMatrixPoly = read_json(q)?;
    let x0 = parse_point(x0, q.num_vars())?;
    let dec = decompose_from_dc(&q, &x0, k)?;
    let bound = dc_pipeline_bound(q.n(), k, q.num_vars());
    let dec_json = to_value(&dec)?;
    let mut report = json!({
        "n": q.n(),
        "k": k,
        "num_vars": q.num_vars(),
        "num_pairs": dec.len(),
        "pair_bound": bound.to_string(),
        "verified": true,
    });
    match out {
        Some(path) => write_json(path, &dec_json)?,
        None => report["decomposition"] = dec_json,
    }
    Ok(report.into())
}

fn random_matrix(n: usize, vars: usize, seed: u64) -> Result<AffineMatrixPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..vars)
        .map(|_| ExactMatrix::from_fn(n, n, |_, _| frac(rng.gen_range(-3..=3), rng.gen_range(1..=3))))
        .collect();
    Ok(AffineMatrixPoly::linear(n, coeffs)?)
}

fn cmd_mv_det(
    matrix: Option<&Path>,
    random: Option<usize>,
    vars: usize,
    degrees: &[usize],
    seed: u64,
) -> Result<Report> {
    let (a, generated) = match (matrix, random) {
        (Some(path), None) => (read_json::<AffineMatrixPoly>(path)?, false),
        (None, Some(n)) => {
            if n == 0 || n > 8 {
                bail!("--random needs 1 <= n <= 8, got {n}");
            }
            (random_matrix(n, vars, seed)?, true)
        }
        _ => bail!("give exactly one of --matrix and --random"),
    };
    let degrees: Vec<usize> = if degrees.is_empty() { (0..=a.n()).collect() } else { degrees.to_vec() };
    let mv = mv_coefficients(&a, &degrees)?;
    let mut report = json!({
        "n": a.n(),
        "num_vars": a.num_vars(),
        "coefficients": mv.coefficients.iter().map(|(k, p)| Ok((k.to_string(), to_value(p)?))).collect::<Result<serde_json::Map<_, _>>>()?,
        "layer_widths": mv.layer_widths,
    });
    if let Some(top) = mv.coefficients.get(&a.n()) {
        report["top_matches_det"] = json!(*top == a.det());
    }
    if generated {
        report["matrix"] = to_value(&a)?;
        report["seed"] = json!(seed);
    }
    Ok(report.into())
}

fn cmd_brank_interval(
    source: &PolySource,
    k: Option<usize>,
    kind: IntervalKind,
    budget: usize,
    export: Option<&Path>,
) -> Result<Report> {
    let p = load_poly(source, k)?;
    let cs = match kind {
        IntervalKind::Xp => build_affine_system(&p)?,
        IntervalKind::Sym => build_sym_system(&p)?,
    };
    if let Some(path) = export {
        write_json(path, &cs.to_json())?;
    }
    let deg = p.homogeneous_degree().unwrap_or(0);
    let iv = minrank_interval(&cs, budget)?;
    let half = deg / 2;
    let lower = Rational::from_integer(iv.lower.into());
    Ok(json!({
        "k": half,
        "num_vars": p.num_vars(),
        "interval": to_value(&iv)?,
        "dc_lower_bound": dc_bound_from_brank(&lower, half.max(1), p.num_vars()).to_string(),
        "sqrt_bound": sqrt_bound(iv.lower as f64),
    })
    .into())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CertifyInput {
    Bare(Vec<FloatSymMatrix>),
    Vertices {
        vertices: Vec<FloatSymMatrix>,
    },
    Pairs {
        polynomial: Polynomial,
        pairs: Vec<(FloatSymMatrix, FloatSymMatrix)>,
        #[serde(default)]
        duals: Option<Vec<DualCertificate>>,
    },
}

fn cmd_certify(path: &Path, r: usize, tol: f64) -> Result<Report> {
    if !(tol.is_finite() && tol >= 0.0) {
        bail!("tolerance must be a nonnegative number");
    }
    let input: CertifyInput = read_json(path)?;
    let (value, accepted) = match input {
        CertifyInput::Bare(vertices) | CertifyInput::Vertices { vertices } => {
            let cert = certify_minrank(&vertices, r, tol)?;
            (to_value(&cert)?, cert.accepted)
        }
        CertifyInput::Pairs { polynomial, pairs, duals } => {
            let cert = certify_brank(&polynomial, &pairs, r, tol, duals.as_deref())?;
            (to_value(&cert)?, cert.accepted)
        }
    };
    Ok(Report { value, rejected: !accepted })
}

fn cmd_bounds(brank: Option<&str>, k: usize, vars: usize, n: Option<usize>) -> Result<Report> {
    if k == 0 {
        bail!("k must be positive");
    }
    let mut report = json!({
        "k": k,
        "num_vars": vars,
        "generic_brank_floor": generic_brank_floor(vars, k).to_string(),
    });
    if let Some(b) = brank {
        let b = parse_rational(b)?;
        report["dc_bound_from_brank"] = json!(dc_bound_from_brank(&b, k, vars).to_string());
        report["sqrt_bound"] = json!(sqrt_bound(to_f64(&b)));
    }
    if let Some(n) = n {
        report["dc_pipeline_pair_bound"] = json!(dc_pipeline_bound(n, k, vars).to_string());
        let per_r: serde_json::Map<String, Value> =
            (n.saturating_sub(2 * k)..n).map(|r| (r.to_string(), json!(p_bound(n, k, r, vars).to_string()))).collect();
        report["p_pair_bound_by_r"] = Value::Object(per_r);
    }
    Ok(report.into())
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Hessian { d } => cmd_hessian(*d),
        Command::Build { kind, source, d, k, export_cs } => cmd_build(*kind, source, *d, *k, export_cs.as_deref()),
        Command::Decompose { q, x0, k, decomposition } => cmd_decompose(q, x0, *k, decomposition.as_deref()),
        Command::MvDet { matrix, random, vars, degrees } => {
            cmd_mv_det(matrix.as_deref(), *random, *vars, degrees, cli.seed)
        }
        Command::BrankInterval { source, k, kind, budget, export_cs } => {
            cmd_brank_interval(source, *k, *kind, *budget, export_cs.as_deref())
        }
        Command::Certify { vertices, r, tol } => cmd_certify(vertices, *r, *tol),
        Command::Bounds { brank, k, vars, n } => cmd_bounds(brank.as_deref(), *k, *vars, *n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let emitted = run(&cli).and_then(|report| {
        let text = canonical(&report.value)?;
        match &cli.output {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(report.rejected)
    });
    match emitted {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
