//! Command-line front end: point-set I/O, magnitude and cube-union
//! computations, convergence/determinant/perturbation experiments and an
//! embedded fixture check suite.
//!
//! Exit codes: 0 success, 1 check failure, 2 input/parse, 3 numeric/solver,
//! 4 domain precondition.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use maglab::cubes::{
    alphas_with_tolerances, corner, vertex_system, weight_measure_from_alphas, AlphaMethod,
    CubeUnionSpec, SignVector, DEFAULT_CROSS_RESIDUAL_TOL,
};
use maglab::error::Error;
use maglab::experiments::{
    conjecture_probe, continuity_probe, convergence_sweep, geometric_schedule,
    interval_union_magnitude, linear_schedule, two_point_closed_form,
    two_point_nonskew_closed_form,
};
use maglab::io::{alpha_table_to_csv, alpha_table_to_json, point_set_from_str};
use maglab::linalg::condition_estimate_1norm;
use maglab::magnitude::{magnitude_finite, weighting_with_tolerance, DEFAULT_RESIDUAL_TOL};
use maglab::points::PointSet;

#[derive(Parser)]
#[command(name = "maglab", version, about = "Magnitude of finite subsets of l1^N and their cube thickenings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum System {
    Vertex,
    Corner,
    Auto,
}

impl From<System> for AlphaMethod {
    fn from(s: System) -> AlphaMethod {
        match s {
            System::Vertex => AlphaMethod::Vertex,
            System::Corner => AlphaMethod::Corner,
            System::Auto => AlphaMethod::Auto,
        }
    }
}

#[derive(Debug, Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output path; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolverOpts {
    /// Relative residual tolerance (env MAGLAB_RESIDUAL_TOL overrides the default)
    #[arg(long)]
    residual_tol: Option<f64>,
    /// Cross-system residual tolerance
    #[arg(long, default_value_t = DEFAULT_CROSS_RESIDUAL_TOL)]
    cross_tol: f64,
}

impl SolverOpts {
    fn residual_tol(&self) -> f64 {
        self.residual_tol
            .or_else(|| {
                std::env::var("MAGLAB_RESIDUAL_TOL")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(DEFAULT_RESIDUAL_TOL)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Magnitude, weighting and skewness of a finite point set
    Magnitude {
        #[arg(long)]
        points: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Alpha table and magnitude of the cube union of radius R
    Cubes {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value = "auto")]
        system: System,
        #[command(flatten)]
        output: OutputOpts,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Cube-union magnitudes over a radius schedule
    Sweep {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        r_start: f64,
        #[arg(long)]
        r_end: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value = "geometric")]
        schedule: Schedule,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Log-determinant growth of the vertex similarity matrix
    Conjecture {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        r_start: f64,
        #[arg(long)]
        r_end: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Magnitude sensitivity under random coordinate perturbations
    Perturb {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        scale: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the embedded fixture suite
    Check {
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Schedule {
    Geometric,
    Linear,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::DuplicatePoint { .. }
        | Error::EmptyPointSet
        | Error::ZeroDimension
        | Error::NonFiniteCoordinate { .. }
        | Error::DimensionMismatch { .. } => 2,
        Error::Singular { .. }
        | Error::ResidualTooLarge { .. }
        | Error::CrossResidualTooLarge { .. }
        | Error::NonpositiveDeterminant { .. }
        | Error::LimitInconsistency { .. }
        | Error::NotSymmetric { .. }
        | Error::ResamplingExhausted { .. } => 3,
        Error::RadiusExceedsSkew { .. }
        | Error::NonpositiveRadius { .. }
        | Error::NotSkew
        | Error::InvalidIntervals { .. }
        | Error::ClosedFormPrecondition { .. }
        | Error::InvalidSchedule { .. } => 4,
    }
}

fn load_points(path: &Path) -> Result<PointSet, Error> {
    let text = std::fs::read_to_string(path)?;
    point_set_from_str(&text)
}

/// Writes atomically (temp file + rename) when a path is given.
fn emit(output: &OutputOpts, content: &str) -> Result<(), Error> {
    match &output.out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
            std::io::Write::write_all(&mut tmp, content.as_bytes())?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
            Ok(())
        }
    }
}

fn skewness_json(s: f64) -> serde_json::Value {
    if s.is_finite() {
        json!(s)
    } else {
        json!("inf")
    }
}

fn cmd_magnitude(points: &Path, output: &OutputOpts, solver: &SolverOpts) -> Result<(), Error> {
    let f = load_points(points)?;
    let w = weighting_with_tolerance(&f, solver.residual_tol())?;
    let mg = w.sum();
    let content = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "magnitude": mg,
                "weighting": w.values,
                "residual": w.residual_inf,
                "skewness": skewness_json(f.skewness()),
                "is_skew": f.is_skew(),
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("key,value\n");
            let _ = writeln!(s, "magnitude,{:.10e}", mg);
            for (i, v) in w.values.iter().enumerate() {
                let _ = writeln!(s, "w{i},{v:.10e}");
            }
            let _ = writeln!(s, "residual,{:.10e}", w.residual_inf);
            let _ = writeln!(s, "skewness,{}", f.skewness());
            let _ = writeln!(s, "is_skew,{}", f.is_skew());
            s
        }
    };
    emit(output, &content)
}

fn cmd_cubes(
    points: &Path,
    r: f64,
    system: System,
    output: &OutputOpts,
    solver: &SolverOpts,
) -> Result<(), Error> {
    let f = load_points(points)?;
    let spec = CubeUnionSpec::new(f, r)?;
    let table =
        alphas_with_tolerances(&spec, system.into(), solver.residual_tol(), solver.cross_tol)?;
    let (z, _) = vertex_system(&spec);
    let cond = condition_estimate_1norm(&z)?;
    let content = match output.format {
        Format::Json => {
            let table_json: serde_json::Value =
                serde_json::from_str(&alpha_table_to_json(&table)).expect("valid json");
            let mut s = serde_json::to_string_pretty(&json!({
                "alpha_table": table_json,
                "magnitude": table.magnitude(),
                "cross_residual": table.cross_residual(),
                "condition_estimate": cond,
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = alpha_table_to_csv(&table);
            s.push('\n');
            let _ = writeln!(s, "key,value");
            let _ = writeln!(s, "magnitude,{:.10e}", table.magnitude());
            let _ = writeln!(s, "cross_residual,{:.10e}", table.cross_residual());
            let _ = writeln!(s, "condition_estimate,{:.10e}", cond);
            s
        }
    };
    emit(output, &content)
}

fn build_schedule(
    r_start: f64,
    r_end: f64,
    steps: usize,
    kind: Schedule,
) -> Result<Vec<f64>, Error> {
    if steps == 0 {
        return Err(Error::InvalidSchedule {
            reason: "steps must be positive".into(),
        });
    }
    if !(r_start > 0.0 && r_end > 0.0) {
        return Err(Error::NonpositiveRadius {
            r: r_start.min(r_end),
        });
    }
    if steps > 1 && r_end >= r_start {
        return Err(Error::InvalidSchedule {
            reason: "need r_start > r_end".into(),
        });
    }
    Ok(match kind {
        Schedule::Geometric => geometric_schedule(r_start, r_end, steps),
        Schedule::Linear => linear_schedule(r_start, r_end, steps),
    })
}

fn cmd_sweep(
    points: &Path,
    r_start: f64,
    r_end: f64,
    steps: usize,
    kind: Schedule,
    output: &OutputOpts,
) -> Result<(), Error> {
    let f = load_points(points)?;
    let schedule = build_schedule(r_start, r_end, steps, kind)?;
    let report = convergence_sweep(&f, &schedule)?;
    let content = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "base_magnitude": report.base_magnitude,
                "rows": report.rows.iter().map(|row| json!({
                    "r": row.r,
                    "mg_cubes": row.mg_cubes,
                    "gap": row.gap,
                })).collect::<Vec<_>>(),
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("r,mg_cubes,mg_F,gap\n");
            for row in &report.rows {
                let _ = writeln!(
                    s,
                    "{:.10e},{:.10e},{:.10e},{:.10e}",
                    row.r, row.mg_cubes, report.base_magnitude, row.gap
                );
            }
            s
        }
    };
    emit(output, &content)
}

fn cmd_conjecture(
    points: &Path,
    r_start: f64,
    r_end: f64,
    steps: usize,
    output: &OutputOpts,
) -> Result<(), Error> {
    let f = load_points(points)?;
    let schedule = build_schedule(r_start, r_end, steps, Schedule::Geometric)?;
    let report = conjecture_probe(&f, &schedule)?;
    let content = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "k_expected": report.k_expected,
                "fitted_exponent": report.fitted_exponent,
                "fitted_log_coefficient": report.fitted_log_coefficient,
                "expected_log_coefficient": report.expected_log_coefficient(),
                "rows": report.rows.iter().map(|&(r, logdet)| json!({
                    "r": r, "logdet": logdet,
                })).collect::<Vec<_>>(),
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("r,logdet\n");
            for &(r, logdet) in &report.rows {
                let _ = writeln!(s, "{r:.10e},{logdet:.10e}");
            }
            s.push_str("k_expected,fitted_exponent,fitted_log_coeff,expected_log_coeff\n");
            let _ = writeln!(
                s,
                "{},{:.10e},{:.10e},{:.10e}",
                report.k_expected,
                report.fitted_exponent,
                report.fitted_log_coefficient,
                report.expected_log_coefficient()
            );
            s
        }
    };
    emit(output, &content)
}

fn cmd_perturb(
    points: &Path,
    scale: f64,
    trials: usize,
    seed: u64,
    output: &OutputOpts,
) -> Result<(), Error> {
    let f = load_points(points)?;
    let rows = continuity_probe(&f, scale, trials, seed)?;
    let content = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "rows": rows.iter().enumerate().map(|(i, &(dh, dmg))| json!({
                    "trial": i, "d_H": dh, "delta_mg": dmg,
                })).collect::<Vec<_>>(),
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("trial,d_H,delta_mg\n");
            for (i, &(dh, dmg)) in rows.iter().enumerate() {
                let _ = writeln!(s, "{i},{dh:.10e},{dmg:.10e}");
            }
            s
        }
    };
    emit(output, &content)
}

struct CheckOutcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: String, out: &mut Vec<CheckOutcome>) {
    out.push(CheckOutcome {
        name,
        passed,
        detail,
    });
}

fn triple_fixture() -> PointSet {
    PointSet::new(2, vec![vec![0.0, 0.0], vec![4.0, 8.0], vec![7.0, 3.0]]).unwrap()
}

fn run_fixture_suite() -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let triple = triple_fixture();

    // triple magnitude, reported as approximately 2.99923
    match magnitude_finite(&triple) {
        Ok(mg) => check(
            "triple magnitude",
            (mg - 2.99923).abs() <= 5e-6,
            format!("got {mg:.10}, expected 2.99923 +- 5e-6"),
            &mut out,
        ),
        Err(e) => check("triple magnitude", false, e.to_string(), &mut out),
    }

    // triple alpha table at r = 1
    let expected_alphas = [
        (0usize, 3usize, 0.0028011),
        (1, 0, 0.0003345),
        (1, 2, 0.0179801),
        (2, 0, 0.0024718),
        (2, 1, 0.0179855),
    ];
    let alpha_result = CubeUnionSpec::new(triple.clone(), 1.0)
        .and_then(|spec| alphas_with_tolerances(&spec, AlphaMethod::Auto, DEFAULT_RESIDUAL_TOL, DEFAULT_CROSS_RESIDUAL_TOL));
    match alpha_result {
        Ok(table) => {
            let mut passed = true;
            let mut detail = String::new();
            for &(p, s, want) in &expected_alphas {
                let got = table.get(p, &SignVector::from_index(2, s));
                if (got - want).abs() > 5e-7 {
                    passed = false;
                    let _ = write!(detail, "alpha[{p},{s}] = {got} != {want}; ");
                }
            }
            let nonzero: Vec<(usize, usize)> =
                expected_alphas.iter().map(|&(p, s, _)| (p, s)).collect();
            for p in 0..3 {
                for s in 0..4 {
                    if !nonzero.contains(&(p, s)) {
                        let got = table.get(p, &SignVector::from_index(2, s));
                        if got.abs() > 1e-10 {
                            passed = false;
                            let _ = write!(detail, "alpha[{p},{s}] = {got} != 0; ");
                        }
                    }
                }
            }
            if detail.is_empty() {
                detail = "five nonzero alphas to 5e-7, outer vertices zero".into();
            }
            check("triple alpha table (Example 6.9)", passed, detail, &mut out);
        }
        Err(e) => check("triple alpha table (Example 6.9)", false, e.to_string(), &mut out),
    }

    // limit alpha vector
    match maglab::alpha_limits(&triple) {
        Ok(limits) => {
            let expect = [
                0.0, 0.0, 0.0, 0.0000515, 0.0000061, 0.0, 0.0003353, 0.0, 0.0000454,
                0.0003353, 0.0, 0.0,
            ];
            let mut passed = limits
                .alpha0()
                .iter()
                .zip(expect)
                .all(|(got, want)| (got - want).abs() <= 5e-8);
            let mg = magnitude_finite(&triple).unwrap_or(f64::NAN);
            passed &= (3.0 - limits.alpha0_sum() - mg).abs() <= 1e-10;
            check(
                "limit alpha vector (Lemma 6.1)",
                passed,
                format!("3 - sum(alpha0) = {:.10}", 3.0 - limits.alpha0_sum()),
                &mut out,
            );
        }
        Err(e) => check("limit alpha vector (Lemma 6.1)", false, e.to_string(), &mut out),
    }

    // interval magnitudes (Example 2.6)
    {
        let single = interval_union_magnitude(&[(0.0, 2.0)]);
        let a = 5.0;
        let r = 0.75;
        let pair = interval_union_magnitude(&[(-r, r), (a - r, a + r)]);
        let cube = PointSet::new(1, vec![vec![0.0], vec![a]])
            .and_then(|f| CubeUnionSpec::new(f, r))
            .and_then(|spec| maglab::cube_union_magnitude(&spec));
        let passed = match (&single, &pair, &cube) {
            (Ok(s), Ok(p), Ok(c)) => (s - 2.0).abs() <= 1e-12 && (p - c).abs() <= 1e-10,
            _ => false,
        };
        check(
            "interval union magnitude",
            passed,
            format!("mg([0,2]) = {single:?}, pair vs cube union: {pair:?} vs {cube:?}"),
            &mut out,
        );
    }

    // single cube magnitude and the product property (Example 4.2)
    {
        let single = PointSet::new(2, vec![vec![1.0, 1.0]]).unwrap();
        let cube = CubeUnionSpec::new(single, 0.25).and_then(|s| maglab::cube_union_magnitude(&s));
        let f = PointSet::new(1, vec![vec![0.0], vec![3.0]]).unwrap();
        let g = PointSet::new(1, vec![vec![0.0], vec![5.0]]).unwrap();
        let product = f
            .product(&g)
            .and_then(|p| magnitude_finite(&p))
            .and_then(|lhs| {
                Ok(lhs - magnitude_finite(&f)? * magnitude_finite(&g)?)
            });
        let passed = matches!(&cube, Ok(c) if (c - 1.5625).abs() <= 1e-12)
            && matches!(&product, Ok(d) if d.abs() <= 1e-9);
        check(
            "single cube and product property",
            passed,
            format!("mg(cube) = {cube:?}, product defect = {product:?}"),
            &mut out,
        );
    }

    // corner fixture (Example 5.5)
    {
        let f = PointSet::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 3.0], vec![3.0, 2.0], vec![4.0, -1.0]],
        )
        .unwrap();
        let c1 = corner(&f, 0, &SignVector::from_index(2, 3)); // (1,1) at a
        let c2 = corner(&f, 3, &SignVector::from_index(2, 1)); // (-1,1) at d
        let passed = matches!(&c1, Ok(v) if v == &[1, 2]) && matches!(&c2, Ok(v) if v == &[0, 1, 2]);
        check(
            "corner fixture (Example 5.5)",
            passed,
            format!("Cor(a,(1,1)) = {c1:?}, Cor(d,(-1,1)) = {c2:?}"),
            &mut out,
        );
    }

    // skew pair closed form (Example 6.6)
    {
        let p = [3.0, 4.0];
        let oracle = two_point_closed_form(&p, 0.5);
        let cube = PointSet::new(2, vec![vec![0.0, 0.0], vec![3.0, 4.0]])
            .and_then(|f| CubeUnionSpec::new(f, 0.5))
            .and_then(|spec| maglab::cube_union_magnitude(&spec));
        let passed = matches!((&oracle, &cube), (Ok(o), Ok(c)) if (o - c).abs() <= 1e-10);
        check(
            "skew pair closed form (Example 6.6)",
            passed,
            format!("oracle {oracle:?} vs cube union {cube:?}"),
            &mut out,
        );
    }

    // non-skew pair closed form (Example 6.7)
    {
        let a = 4.0;
        let reduced = two_point_nonskew_closed_form(&[a, 0.0], 1, 0.1);
        let e = (-(a - 0.2f64)).exp();
        let expect = (2.0 * 1.1 - 2.0 * e / (1.0 + e)) * 1.1;
        let limit = two_point_nonskew_closed_form(&[a, 0.0], 1, 0.0);
        let mg2 = 2.0 / (1.0 + (-a as f64).exp());
        let passed = matches!(&reduced, Ok(v) if (v - expect).abs() <= 1e-12)
            && matches!(&limit, Ok(v) if (v - mg2).abs() <= 1e-12);
        check(
            "non-skew pair closed form (Example 6.7)",
            passed,
            format!("r=0.1: {reduced:?}, r=0: {limit:?}"),
            &mut out,
        );
    }

    // weight measure total mass agrees with the magnitude formula
    {
        let spec = CubeUnionSpec::new(triple.clone(), 1.0).unwrap();
        let wm = alphas_with_tolerances(&spec, AlphaMethod::Auto, DEFAULT_RESIDUAL_TOL, DEFAULT_CROSS_RESIDUAL_TOL)
            .and_then(weight_measure_from_alphas);
        let passed = match &wm {
            Ok(w) => {
                let probe = maglab::weight_integral(w, &[1.0, 1.0]);
                matches!(probe, Ok(v) if (v - 1.0).abs() <= 1e-10)
            }
            Err(_) => false,
        };
        check(
            "weight measure integral at an inner vertex",
            passed,
            "integral of e^{-d1} against the measure is 1".into(),
            &mut out,
        );
    }

    out
}

fn cmd_check(output: &OutputOpts) -> Result<bool, Error> {
    let outcomes = run_fixture_suite();
    let all_passed = outcomes.iter().all(|o| o.passed);
    let content = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "passed": all_passed,
                "fixtures": outcomes.iter().map(|o| json!({
                    "name": o.name,
                    "status": if o.passed { "pass" } else { "fail" },
                    "detail": o.detail,
                })).collect::<Vec<_>>(),
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("name,status\n");
            for o in &outcomes {
                let _ = writeln!(s, "{},{}", o.name, if o.passed { "pass" } else { "fail" });
            }
            s
        }
    };
    emit(output, &content)?;
    if !all_passed {
        for o in outcomes.iter().filter(|o| !o.passed) {
            eprintln!("FAIL {}: {}", o.name, o.detail);
        }
    }
    Ok(all_passed)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Magnitude {
            points,
            output,
            solver,
        } => cmd_magnitude(&points, &output, &solver).map(|_| true),
        Command::Cubes {
            points,
            r,
            system,
            output,
            solver,
        } => cmd_cubes(&points, r, system, &output, &solver).map(|_| true),
        Command::Sweep {
            points,
            r_start,
            r_end,
            steps,
            schedule,
            output,
        } => cmd_sweep(&points, r_start, r_end, steps, schedule, &output).map(|_| true),
        Command::Conjecture {
            points,
            r_start,
            r_end,
            steps,
            output,
        } => cmd_conjecture(&points, r_start, r_end, steps, &output).map(|_| true),
        Command::Perturb {
            points,
            scale,
            trials,
            seed,
            output,
        } => cmd_perturb(&points, scale, trials, seed, &output).map(|_| true),
        Command::Check { output } => cmd_check(&output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
