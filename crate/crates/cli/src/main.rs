//! Command-line surface: analyze | check | solve | oracle | bvp | gen.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 hypothesis violation,
//! 3 non-convergence.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use proxikit::bvp::{
    estimate_lipschitz, residual_check, solve_bvp, BvpProblem, GridFunction, Quadrature, Rhs,
};
use proxikit::instance::{load_instance, save_instance, Instance};
use proxikit::metric::{hausdorff_subsets, Metric, Point};
use proxikit::oracle::{gen_instance, oracle_bpp, GenProfile};
use proxikit::solver::{
    certify, check_uniqueness_h, solve, solve_fixed_point, Outcome, SolveError,
};
use proxikit::theta::{check_theta_conditions, ThetaGrid};

use report::{
    render_human, AnalyzeReport, BvpReport, CheckReport, OracleSection, RunReport, SolveReport,
};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "proxikit",
    version,
    about = "Best proximity points of set-valued maps on finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Set distance, proximal subsets, and pairwise image distances
    Analyze(InstanceArgs),
    /// Audit every solver hypothesis and the comparison-function conditions
    Check(InstanceArgs),
    /// Run the proximal Picard iteration from the instance seeds
    Solve(SolveArgs),
    /// Brute-force scan for all best proximity points
    Oracle(InstanceArgs),
    /// Solve the two-point boundary value problem -x'' = f(t, x)
    Bvp(BvpArgs),
    /// Generate a random instance that satisfies every hypothesis
    Gen(GenArgs),
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Instance file
    #[arg(value_name = "PATH")]
    path: Option<PathBuf>,
    /// Instance file (alternative to the positional form)
    #[arg(long, value_name = "PATH")]
    instance: Option<PathBuf>,
    /// Emit the machine-readable JSON report
    #[arg(long)]
    json: bool,
    /// Override the instance's proximality tolerance
    #[arg(long)]
    eps_prox: Option<f64>,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance> {
        let path = self
            .path
            .clone()
            .or_else(|| self.instance.clone())
            .ok_or_else(|| anyhow!("an instance path is required (positional or --instance)"))?;
        let mut inst =
            load_instance(&path).with_context(|| format!("loading {}", path.display()))?;
        if let Some(eps) = self.eps_prox {
            if !eps.is_finite() || eps <= 0.0 {
                bail!("--eps-prox must be positive");
            }
            inst.tolerances.eps_prox = eps;
        }
        Ok(inst)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: InstanceArgs,
    /// Fixed-point mode: the two sets must coincide; iterates from x0
    #[arg(long)]
    fixed_point: bool,
    /// Override the instance's stopping gap
    #[arg(long)]
    eps_stop: Option<f64>,
    /// Override the instance's iteration budget
    #[arg(long)]
    max_iter: Option<usize>,
    /// Cross-check the result against the brute-force oracle
    #[arg(long)]
    oracle: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum QuadratureArg {
    Trapezoid,
    Simpson,
}

impl From<QuadratureArg> for Quadrature {
    fn from(q: QuadratureArg) -> Self {
        match q {
            QuadratureArg::Trapezoid => Quadrature::Trapezoid,
            QuadratureArg::Simpson => Quadrature::Simpson,
        }
    }
}

#[derive(Args)]
struct BvpArgs {
    /// Right-hand side: constant:C | sin | scaled-sin:MU | affine:A,G0,G1
    #[arg(long, default_value = "sin")]
    f: String,
    /// Number of grid intervals
    #[arg(long, default_value_t = 128)]
    n: usize,
    #[arg(long, value_enum, default_value_t = QuadratureArg::Simpson)]
    quadrature: QuadratureArg,
    /// Picard stopping tolerance on the sup-norm step
    #[arg(long, default_value_t = 1e-10)]
    eps_fix: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Start from amp * t * (1 - t) instead of the zero function
    #[arg(long, value_name = "AMP")]
    x0_bump: Option<f64>,
    /// Write the solution as CSV rows "t,x" to this path
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Random pairs for the operator Lipschitz estimate
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    L1,
    L2,
    Linf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    n_a: usize,
    #[arg(long, default_value_t = 6)]
    n_b: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::L1)]
    metric: MetricArg,
    /// Largest image cardinality
    #[arg(long, default_value_t = 2)]
    image_size: usize,
    /// Keep draws that fail the weak P property
    #[arg(long)]
    allow_weak_p_failure: bool,
    /// Generate a self-map (fixed-point) instance
    #[arg(long)]
    self_map: bool,
    /// Lattice half-width for coordinates
    #[arg(long, default_value_t = 10)]
    coord_range: i64,
    /// Reject draws whose proximal projections are smaller than this
    #[arg(long, default_value_t = 1)]
    min_proximal: usize,
    /// Output path (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Check(args) => cmd_check(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bvp(args) => cmd_bvp(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", render_human(report));
    }
}

fn cmd_analyze(args: &InstanceArgs) -> Result<u8> {
    let inst = args.load()?;
    let p = &inst.problem;
    let pairing = proxikit::proximal_pairs(&p.a, &p.b, &p.metric, inst.tolerances.eps_prox)?;
    let attaining_pair = *pairing
        .pairs
        .first()
        .expect("finite sets attain their distance");
    let mut image_hausdorff = vec![vec![0.0; p.a.len()]; p.a.len()];
    #[allow(clippy::needless_range_loop)]
    for i in 0..p.a.len() {
        for j in 0..p.a.len() {
            image_hausdorff[i][j] =
                hausdorff_subsets(&p.b, p.map.image(i), p.map.image(j), &p.metric)?;
        }
    }
    let pick = |s: &proxikit::PointSet, idx: &[usize]| -> Vec<Point> {
        idx.iter().map(|&i| s.point(i).clone()).collect()
    };
    let mut report = RunReport::new("analyze", Some(&inst));
    report.analyze = Some(AnalyzeReport {
        d_ab: pairing.d_ab,
        attaining_pair,
        a0_points: pick(&p.a, &pairing.a0),
        b0_points: pick(&p.b, &pairing.b0),
        a0: pairing.a0,
        b0: pairing.b0,
        image_hausdorff,
    });
    emit(&report, args.json);
    Ok(EXIT_OK)
}

fn cmd_check(args: &InstanceArgs) -> Result<u8> {
    let inst = args.load()?;
    let p = &inst.problem;
    let certification = certify(p, &inst.tolerances)?;
    let theta_conditions = check_theta_conditions(&p.theta, &ThetaGrid::default());
    let oracle = oracle_bpp(&p.a, &p.b, &p.map, &p.metric, inst.tolerances.eps_prox)?;
    let uniqueness = check_uniqueness_h(&oracle.bpps, &p.params.alpha, &certification.contraction);
    let ok = certification.hypotheses_hold;
    let mut report = RunReport::new("check", Some(&inst));
    report.check = Some(CheckReport {
        certification,
        theta_conditions,
        uniqueness: Some(uniqueness),
    });
    emit(&report, args.json);
    Ok(if ok { EXIT_OK } else { EXIT_HYPOTHESIS })
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let inst = args.common.load()?;
    let p = &inst.problem;
    let mut tol = inst.tolerances;
    if let Some(eps) = args.eps_stop {
        if !eps.is_finite() || eps <= 0.0 {
            bail!("--eps-stop must be positive");
        }
        tol.eps_stop = eps;
    }
    if let Some(m) = args.max_iter {
        if m == 0 {
            bail!("--max-iter must be at least 1");
        }
        tol.max_iter = m;
    }
    let seeds = inst
        .seeds
        .ok_or_else(|| anyhow!("instance declares no seeds; add a \"seeds\" block"))?;
    let result = if args.fixed_point {
        solve_fixed_point(p, seeds.x0, &tol)
    } else {
        solve(p, seeds, &tol)
    };
    let result = match result {
        Ok(r) => r,
        Err(
            e @ (SolveError::SeedImageMismatch { .. }
            | SolveError::SeedNotProximal { .. }
            | SolveError::SeedAlphaBelowOne { .. }
            | SolveError::SeedOutsideA0 { .. }
            | SolveError::NoAdmissibleStart { .. }),
        ) => {
            eprintln!("hypothesis violation: {e}");
            return Ok(EXIT_HYPOTHESIS);
        }
        Err(e) => return Err(e.into()),
    };
    let oracle = if args.oracle {
        Some(oracle_bpp(&p.a, &p.b, &p.map, &p.metric, tol.eps_prox)?)
    } else {
        None
    };
    let code = match &result.trace.outcome {
        Outcome::Converged => EXIT_OK,
        Outcome::MaxIter => EXIT_NO_CONVERGENCE,
        Outcome::HypothesisViolation(_) => EXIT_HYPOTHESIS,
    };
    let mut report = RunReport::new("solve", Some(&inst));
    report.solve = Some(SolveReport::from_result(&result, oracle.as_ref()));
    report.oracle = oracle.map(|o| OracleSection {
        d_ab: o.d_ab,
        bpp_points: o.bpps.iter().map(|&i| p.a.point(i).clone()).collect(),
        bpps: o.bpps,
        gaps: o.gaps,
    });
    emit(&report, args.common.json);
    Ok(code)
}

fn cmd_oracle(args: &InstanceArgs) -> Result<u8> {
    let inst = args.load()?;
    let p = &inst.problem;
    let o = oracle_bpp(&p.a, &p.b, &p.map, &p.metric, inst.tolerances.eps_prox)?;
    let mut report = RunReport::new("oracle", Some(&inst));
    report.oracle = Some(OracleSection {
        d_ab: o.d_ab,
        bpp_points: o.bpps.iter().map(|&i| p.a.point(i).clone()).collect(),
        bpps: o.bpps,
        gaps: o.gaps,
    });
    emit(&report, args.json);
    Ok(EXIT_OK)
}

fn parse_rhs(spec: &str) -> Result<Rhs> {
    let lower = spec.to_ascii_lowercase();
    let (name, params) = match lower.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (lower.as_str(), None),
    };
    let rhs = match (name, params) {
        ("sin", None) => Rhs::Sin,
        ("constant", Some(p)) => Rhs::Constant {
            c: p.parse().context("constant:<c> takes a number")?,
        },
        ("scaled-sin" | "scaled_sin", Some(p)) => Rhs::ScaledSin {
            mu: p.parse().context("scaled-sin:<mu> takes a number")?,
        },
        ("affine", Some(p)) => {
            let parts: Vec<&str> = p.split(',').collect();
            if parts.len() != 3 {
                bail!("affine takes three numbers: affine:<a>,<g0>,<g1>");
            }
            Rhs::Affine {
                a: parts[0].parse().context("affine slope")?,
                g0: parts[1].parse().context("affine offset")?,
                g1: parts[2].parse().context("affine drift")?,
            }
        }
        _ => bail!(
            "unknown right-hand side `{spec}`; use constant:<c> | sin | scaled-sin:<mu> | affine:<a>,<g0>,<g1>"
        ),
    };
    rhs.validate()?;
    Ok(rhs)
}

fn cmd_bvp(args: &BvpArgs) -> Result<u8> {
    let rhs = parse_rhs(&args.f)?;
    if !args.eps_fix.is_finite() || args.eps_fix <= 0.0 {
        bail!("--eps-fix must be positive");
    }
    let prob = BvpProblem::new(rhs, args.n, args.quadrature.into())?
        .with_stopping(args.eps_fix, args.max_iter);
    let x0 = match args.x0_bump {
        Some(amp) => GridFunction::from_fn(args.n, |t| amp * t * (1.0 - t)),
        None => GridFunction::zeros(args.n),
    };
    let run = solve_bvp(&prob, &x0)?;
    let residual = residual_check(&run.solution, &prob)?;
    let lipschitz = estimate_lipschitz(&prob, args.pairs, args.seed)?;
    let csv_path = match &args.csv {
        Some(path) => {
            let mut text = String::from("t,x\n");
            for (i, v) in run.solution.values.iter().enumerate() {
                text.push_str(&format!("{},{v}\n", i as f64 / args.n as f64));
            }
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    let mut report = RunReport::new("bvp", None);
    report.bvp = Some(BvpReport {
        rhs,
        n: args.n,
        quadrature: prob.quadrature,
        eps_fix: prob.eps_fix,
        converged: run.converged,
        iterations: run.iterations,
        contraction_ratio: BvpReport::contraction_ratio(&run),
        history: run.history.clone(),
        lipschitz_estimate: lipschitz,
        residual,
        midpoint_value: run.solution.values[args.n / 2],
        csv_path,
        solution: if args.json {
            Some(run.solution.values.clone())
        } else {
            None
        },
    });
    emit(&report, args.json);
    Ok(if run.converged {
        EXIT_OK
    } else {
        EXIT_NO_CONVERGENCE
    })
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let profile = GenProfile {
        n_a: args.n_a,
        n_b: args.n_b,
        dim: args.dim,
        metric: match args.metric {
            MetricArg::L1 => Metric::L1,
            MetricArg::L2 => Metric::L2,
            MetricArg::Linf => Metric::Linf,
        },
        image_size: args.image_size,
        force_weak_p: !args.allow_weak_p_failure,
        self_map: args.self_map,
        coord_range: args.coord_range,
        min_proximal: args.min_proximal,
    };
    let file = gen_instance(args.seed, &profile)?;
    // parse back through the validator so emitted files are known-good
    Instance::from_file(file.clone()).expect("generated instances validate");
    match &args.out {
        Some(path) => {
            save_instance(&file, path)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
            );
        }
    }
    Ok(EXIT_OK)
}
