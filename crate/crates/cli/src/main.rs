//! `pierce-lab`: generate, solve, pierce and verify rectangle-piercing
//! instances from the command line.
//!
//! Exit codes: 0 success, 2 the input violates a hypothesis, 3 a certified
//! bound failed (a counterexample file was written), 4 an exact solve ran
//! out of node budget.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pierce_lab::dinterval::{kaiser_check, DIntervalError};
use pierce_lab::reduction::{self, PierceReport, ReductionError};
use pierce_lab::solver::{max_packing_with, min_hitting_set_with, SolveError, SolverConfig};
use pierce_lab::trace::{self, PqOutcome, TraceError};
use pierce_lab::verify::{verify_halman, verify_pach_tardos, Verdict, VerifyReport};
use pierce_lab::{fixtures, Coord, Instance, Point};
use pierce_lab_cli::gen::{self, GenError};
use pierce_lab_cli::io::{self, AnyFile, DIntervalFile, InstanceFile, Metadata};
use pierce_lab_cli::suite::{self, Campaign, RunConfig};
use pierce_lab_cli::{resolve_budget, EXIT_BUDGET, EXIT_HYPOTHESIS, EXIT_THEOREM};

#[derive(Parser)]
#[command(
    name = "pierce-lab",
    version,
    about = "Exact piercing laboratory for axis-parallel rectangles over finite point sets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    /// Pairwise trace-intersecting family, uniform with repairs.
    RandomPairwise,
    /// Fixed rectangle cycle with a known piercing number (use --k).
    Cycle,
    /// Family with opposite-quadrant trace pairs around the origin.
    Quadrant,
    /// p-1 disjoint clusters, each pairwise trace-intersecting (use --p).
    Clusters,
    /// Family whose every subfamily of size <= 4 has a pointed trace.
    Helly,
    /// Random d-interval family (use --d, --max-line).
    Dinterval,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance or family file.
    Gen {
        #[arg(long, value_enum)]
        generator: Generator,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 6)]
        n_rects: usize,
        #[arg(long, default_value_t = 24)]
        n_points: usize,
        #[arg(long, default_value_t = 100)]
        span: Coord,
        /// Cycle length for --generator cycle.
        #[arg(long, default_value_t = 6)]
        k: usize,
        /// (p,2) parameter for --generator clusters.
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Components per member for --generator dinterval.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Points per line for --generator dinterval.
        #[arg(long, default_value_t = 12)]
        max_line: usize,
    },
    /// Exact piercing number of a file's trace family (or d-interval family).
    Tau {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Exact packing number of a file's trace family (or d-interval family).
    Nu {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Pierce a pairwise trace-intersecting family with at most 8 points.
    Pierce8 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        /// Write the full piercing report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write a counterexample if a certified bound fails.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Pierce a pairwise-intersecting family with at most 12(p-1) points.
    PierceP {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Pierce a family with the opposite-quadrant condition with at most
    /// 4(p-1) points.
    PierceQuadrantP {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        /// Origin as "x,y"; defaults to the file's metadata origin.
        #[arg(long)]
        origin: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Pierce a clustered family class by class; no pairwise assumption.
    PierceComposite {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Check the (p,q) property of a file's trace family.
    CheckPq {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Discrete Helly check: small subfamilies pointed implies family pointed.
    VerifyHalman {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check tau <= (d^2 - d) nu exactly on a d-interval family.
    VerifyKaiser {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Verify the structure of a packing witness instance.
    VerifyPt {
        /// Instance file carrying d, r and class labels in its metadata.
        #[arg(long = "in", conflicts_with = "fixture")]
        input: Option<PathBuf>,
        /// Run a built-in fixture instead of a file.
        #[arg(long, value_enum)]
        fixture: Option<PtFixture>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run a verification campaign and write its report files.
    RunSuite {
        #[arg(long, value_enum)]
        campaign: Campaign,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 6)]
        n_rects: usize,
        #[arg(long, default_value_t = 24)]
        n_points: usize,
        #[arg(long, default_value_t = 100)]
        span: Coord,
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PtFixture {
    Valid,
    OverlappingClass,
    WrongPointCount,
    WrongClassSizes,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn plain(message: impl Into<String>) -> Self {
        Failure::new(1, message)
    }
}

impl From<io::FileError> for Failure {
    fn from(e: io::FileError) -> Self {
        Failure::plain(e.to_string())
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        Failure::plain(e.to_string())
    }
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::BudgetExhausted { .. } => Failure::new(EXIT_BUDGET, e.to_string()),
        SolveError::UnpierceableMember(_) => Failure::new(EXIT_HYPOTHESIS, e.to_string()),
        other => Failure::plain(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Gen { generator, seed, out, n_rects, n_points, span, k, p, d, max_line } => {
            run_gen(generator, seed, &out, n_rects, n_points, span, k, p, d, max_line)
        }
        Cmd::Tau { input, budget } => run_tau_nu(&input, budget, true),
        Cmd::Nu { input, budget } => run_tau_nu(&input, budget, false),
        Cmd::Pierce8 { input, budget, out, dump } => {
            let scfg = budget_config(budget)?;
            run_pierce(&input, out.as_deref(), dump.as_deref(), |inst| {
                reduction::pierce_8(inst, &scfg)
            })
        }
        Cmd::PierceP { input, p, budget, out, dump } => {
            let scfg = budget_config(budget)?;
            run_pierce(&input, out.as_deref(), dump.as_deref(), |inst| {
                reduction::pierce_pairwise_p(inst, p, &scfg)
            })
        }
        Cmd::PierceQuadrantP { input, p, origin, budget, out, dump } => {
            let scfg = budget_config(budget)?;
            let (_, file) = io::read_instance(&input)?;
            let origin = resolve_origin(origin.as_deref(), &file)?;
            run_pierce(&input, out.as_deref(), dump.as_deref(), |inst| {
                reduction::pierce_quadrant_condition_p(inst, p, origin, &scfg)
            })
        }
        Cmd::PierceComposite { input, p, budget, out, dump } => {
            let scfg = budget_config(budget)?;
            run_pierce(&input, out.as_deref(), dump.as_deref(), |inst| {
                reduction::pierce_pq_composite(inst, p, &scfg)
            })
        }
        Cmd::CheckPq { input, p, q, budget } => run_check_pq(&input, p, q, budget),
        Cmd::VerifyHalman { input } => run_verify_halman(&input),
        Cmd::VerifyKaiser { input, budget } => run_verify_kaiser(&input, budget),
        Cmd::VerifyPt { input, fixture, budget } => run_verify_pt(input.as_deref(), fixture, budget),
        Cmd::RunSuite { campaign, seed, count, out, n_rects, n_points, span, p, q, d, budget } => {
            let scfg = budget_config(budget)?;
            let cfg = RunConfig {
                campaign,
                seed,
                count,
                n_rects,
                n_points,
                span,
                p,
                q,
                d,
                node_budget: scfg.node_budget,
                out_dir: out,
            };
            run_run_suite(&cfg)
        }
    }
}

fn budget_config(flag: Option<u64>) -> Result<SolverConfig, Failure> {
    resolve_budget(flag).map_err(Failure::plain)
}

#[allow(clippy::too_many_arguments)]
fn run_gen(
    generator: Generator,
    seed: u64,
    out: &Path,
    n_rects: usize,
    n_points: usize,
    span: Coord,
    k: usize,
    p: usize,
    d: usize,
    max_line: usize,
) -> Result<(), Failure> {
    let name = match generator {
        Generator::RandomPairwise => "random-pairwise",
        Generator::Cycle => "cycle",
        Generator::Quadrant => "quadrant",
        Generator::Clusters => "clusters",
        Generator::Helly => "helly",
        Generator::Dinterval => "dinterval",
    };
    if generator == Generator::Dinterval {
        let fam = gen::gen_dinterval(seed, d, n_rects, max_line)?;
        let meta = Metadata { generator: Some(name.into()), seed: Some(seed), ..Metadata::default() };
        let file = DIntervalFile::from_family(&fam, Some(meta));
        io::write_json(&out.to_path_buf(), &file)?;
        println!(
            "wrote {} ({} members on {} lines, digest {})",
            out.display(),
            fam.n_members(),
            fam.d(),
            file.digest()
        );
        return Ok(());
    }
    let g = match generator {
        Generator::RandomPairwise => gen::gen_random_pairwise(seed, n_rects, n_points, span)?,
        Generator::Cycle => gen::gen_cycle(k)?,
        Generator::Quadrant => gen::gen_quadrant(seed, n_rects, n_points, span)?,
        Generator::Clusters => {
            if p < 2 {
                return Err(Failure::plain("clusters generator needs --p >= 2"));
            }
            let per = (n_points / (p - 1)).max(1);
            gen::gen_clusters(seed, p - 1, n_rects, per, span)?
        }
        Generator::Helly => gen::gen_helly_hypothesis(seed, n_rects, n_points, span)?,
        Generator::Dinterval => unreachable!("handled above"),
    };
    let meta = Metadata {
        generator: Some(name.into()),
        seed: Some(seed),
        origin: g.origin.map(|o| [o.x, o.y]),
        tau: g.tau,
        ..Metadata::default()
    };
    let file = InstanceFile::from_instance(&g.instance, Some(meta));
    io::write_json(&out.to_path_buf(), &file)?;
    print!(
        "wrote {} ({} rectangles, {} points, digest {}, rejection rate {:.3})",
        out.display(),
        g.instance.n_rects(),
        g.instance.n_points(),
        file.digest(),
        g.stats.rejection_rate()
    );
    if let Some(t) = g.tau {
        print!(", confirmed tau {t}");
    }
    println!();
    Ok(())
}

fn run_tau_nu(input: &Path, budget: Option<u64>, hitting: bool) -> Result<(), Failure> {
    let scfg = budget_config(budget)?;
    let (ss, points): (_, Option<Vec<Point>>) = match io::read_any(input)? {
        AnyFile::Instance(f) => {
            let inst = f.to_instance()?;
            (trace::trace(&inst).to_set_system(), Some(inst.points().to_vec()))
        }
        AnyFile::DInterval(f) => (f.to_family()?.to_set_system(), None),
    };
    let result = if hitting {
        min_hitting_set_with(&ss, &scfg).map_err(solve_failure)?
    } else {
        max_packing_with(&ss, &scfg).map_err(solve_failure)?
    };
    let what = if hitting { "tau" } else { "nu" };
    println!("{what} = {} ({} nodes)", result.value, result.stats.nodes);
    if hitting {
        match &points {
            Some(pts) => {
                let cert: Vec<String> =
                    result.certificate.iter().map(|&i| format!("({}, {})", pts[i].x, pts[i].y)).collect();
                println!("piercing points: {}", cert.join(" "));
            }
            None => println!("piercing elements: {:?}", result.certificate),
        }
    } else {
        println!("disjoint members: {:?}", result.certificate);
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct PierceReportJson {
    piercing: Vec<PiercePointJson>,
    size: usize,
    bound: usize,
    route: String,
    interval_tau: Option<usize>,
    nu_interval: Option<usize>,
    nu_trace: Option<usize>,
    solver_nodes: u64,
}

#[derive(serde::Serialize)]
struct PiercePointJson {
    index: usize,
    x: Coord,
    y: Coord,
}

fn report_json(report: &PierceReport<Coord>) -> PierceReportJson {
    PierceReportJson {
        piercing: report
            .piercing
            .iter()
            .map(|pp| PiercePointJson { index: pp.index, x: pp.point.x, y: pp.point.y })
            .collect(),
        size: report.piercing.len(),
        bound: report.bound,
        route: route_label(report),
        interval_tau: report.interval_tau,
        nu_interval: report.nu_interval,
        nu_trace: report.nu_trace,
        solver_nodes: report.solver_nodes,
    }
}

fn route_label(report: &PierceReport<Coord>) -> String {
    use reduction::PierceRoute::*;
    match &report.route {
        ShortCircuit => "short-circuit".into(),
        Guarded { guards } => format!("guarded({guards})"),
        Direct => "direct".into(),
        Composite { classes, geometric_tau } => {
            format!("composite({classes} classes, geometric tau {geometric_tau})")
        }
    }
}

fn run_pierce(
    input: &Path,
    out: Option<&Path>,
    dump: Option<&Path>,
    f: impl FnOnce(&Instance) -> Result<PierceReport<Coord>, ReductionError<Coord>>,
) -> Result<(), Failure> {
    let (inst, _) = io::read_instance(input)?;
    let report = match f(&inst) {
        Ok(r) => r,
        Err(e) => return Err(pierce_failure(e, dump)),
    };
    let json = report_json(&report);
    println!(
        "pierced {} rectangles with {} points (bound {}, route {})",
        inst.n_rects(),
        json.size,
        json.bound,
        json.route
    );
    if let Some(it) = report.interval_tau {
        println!(
            "reduced system tau {it}, packing {} <= trace packing {}, {} solver nodes",
            report.nu_interval.unwrap_or(0),
            report.nu_trace.unwrap_or(0),
            report.solver_nodes
        );
    }
    let cert: Vec<String> =
        report.piercing.iter().map(|pp| format!("({}, {})", pp.point.x, pp.point.y)).collect();
    println!("piercing: {}", cert.join(" "));
    if let Some(path) = out {
        io::write_json(&path.to_path_buf(), &json)?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

fn pierce_failure(e: ReductionError<Coord>, dump: Option<&Path>) -> Failure {
    match e {
        ReductionError::Hypothesis(h) => {
            Failure::new(EXIT_HYPOTHESIS, format!("hypothesis violation: {h}"))
        }
        ReductionError::NotPairwiseIntersecting | ReductionError::OriginNotContained => {
            Failure::new(EXIT_HYPOTHESIS, e.to_string())
        }
        ReductionError::TheoremViolation(tv) => {
            let path =
                dump.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("counterexample.json"));
            let file = InstanceFile::from_instance(&tv.instance, None);
            match io::write_json(&path, &file) {
                Ok(()) => Failure::new(
                    EXIT_THEOREM,
                    format!(
                        "certified bound failed: {} (tau {} > bound {}); counterexample written to {}",
                        tv.detail,
                        tv.tau,
                        tv.bound,
                        path.display()
                    ),
                ),
                Err(we) => Failure::new(
                    EXIT_THEOREM,
                    format!(
                        "certified bound failed: {} (tau {} > bound {}); failed to write counterexample: {we}",
                        tv.detail, tv.tau, tv.bound
                    ),
                ),
            }
        }
        ReductionError::Solver(s) => solve_failure(s),
        other => Failure::plain(other.to_string()),
    }
}

fn resolve_origin(flag: Option<&str>, file: &InstanceFile) -> Result<Point, Failure> {
    if let Some(text) = flag {
        let (x, y) = text
            .split_once(',')
            .ok_or_else(|| Failure::plain(format!("--origin must be \"x,y\", got {text}")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<Coord>()
                .map_err(|_| Failure::plain(format!("--origin coordinate {s} is not an integer")))
        };
        return Ok(Point::new(parse(x)?, parse(y)?));
    }
    if let Some([x, y]) = file.metadata.as_ref().and_then(|m| m.origin) {
        return Ok(Point::new(x, y));
    }
    Err(Failure::plain("no origin: pass --origin \"x,y\" or use a file with metadata.origin"))
}

fn run_check_pq(input: &Path, p: usize, q: usize, budget: Option<u64>) -> Result<(), Failure> {
    let _ = budget_config(budget)?;
    let (inst, _) = io::read_instance(input)?;
    let tf = trace::trace(&inst);
    match trace::has_pq_property(&tf, p, q) {
        Ok(PqOutcome::Holds) => {
            println!("({p},{q}) trace property holds on {} members", tf.n_members());
            Ok(())
        }
        Ok(PqOutcome::Violated { witness }) => Err(Failure::new(
            EXIT_HYPOTHESIS,
            format!("({p},{q}) trace property violated by members {witness:?}"),
        )),
        Err(TraceError::Solver(s)) => Err(solve_failure(s)),
        Err(e) => Err(Failure::plain(e.to_string())),
    }
}

fn print_report(report: &VerifyReport) {
    println!("{} on instance {}: {}", report.theorem, report.digest, report.verdict);
    for c in &report.checks {
        match &c.witness {
            Some(w) => println!("  {}: {} ({w})", c.name, c.verdict),
            None => println!("  {}: {}", c.name, c.verdict),
        }
    }
    let q = &report.quantities;
    if q.tau.is_some() || q.nu.is_some() || q.bound.is_some() {
        println!(
            "  quantities: tau {:?}, nu {:?}, bound {:?}",
            q.tau, q.nu, q.bound
        );
    }
}

fn run_verify_halman(input: &Path) -> Result<(), Failure> {
    let (inst, _) = io::read_instance(input)?;
    let report = verify_halman(&inst).map_err(|e| Failure::plain(e.to_string()))?;
    print_report(&report);
    match report.verdict {
        Verdict::Pass => Ok(()),
        Verdict::HypothesisUnmet => Err(Failure::new(
            EXIT_HYPOTHESIS,
            "a subfamily of size <= 4 has an empty common trace; the conclusion is not claimed",
        )),
        _ => Err(Failure::new(
            EXIT_THEOREM,
            format!("discrete Helly property failed; the counterexample is {}", input.display()),
        )),
    }
}

fn run_verify_kaiser(input: &Path, budget: Option<u64>) -> Result<(), Failure> {
    let scfg = budget_config(budget)?;
    let (fam, _) = io::read_dinterval(input)?;
    let report = kaiser_check(&fam, &scfg).map_err(|e| match e {
        DIntervalError::Solver(s) => solve_failure(s),
        other => Failure::new(EXIT_HYPOTHESIS, other.to_string()),
    })?;
    println!(
        "d = {}: tau {} vs (d^2 - d) nu = {} (nu {}): {}",
        report.d,
        report.tau.value,
        report.bound,
        report.nu.value,
        if report.pass { "pass" } else { "FAIL" }
    );
    if report.pass {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_THEOREM,
            format!("piercing-packing bound failed; the counterexample is {}", input.display()),
        ))
    }
}

fn run_verify_pt(
    input: Option<&Path>,
    fixture: Option<PtFixture>,
    budget: Option<u64>,
) -> Result<(), Failure> {
    let scfg = budget_config(budget)?;
    let pt = match (input, fixture) {
        (Some(path), None) => match io::read_any(path)? {
            AnyFile::Instance(f) => f.to_pt_instance()?,
            AnyFile::DInterval(_) => {
                return Err(Failure::plain("packing witness verification needs an instance file"))
            }
        },
        (None, Some(fx)) => match fx {
            PtFixture::Valid => fixtures::pt_valid(),
            PtFixture::OverlappingClass => fixtures::pt_overlapping_class(),
            PtFixture::WrongPointCount => fixtures::pt_wrong_point_count(),
            PtFixture::WrongClassSizes => fixtures::pt_wrong_class_sizes(),
        },
        _ => return Err(Failure::plain("pass exactly one of --in or --fixture")),
    };
    let report = verify_pach_tardos(&pt, &scfg);
    print_report(&report);
    if report.passed() {
        Ok(())
    } else {
        let witness = report
            .first_failure()
            .map(|c| format!("{}: {}", c.name, c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()))
            .unwrap_or_else(|| "structural check failed".into());
        Err(Failure::new(EXIT_HYPOTHESIS, format!("instance lacks the claimed structure ({witness})")))
    }
}

fn run_run_suite(cfg: &RunConfig) -> Result<(), Failure> {
    let outcome = suite::run_suite(cfg).map_err(suite_failure)?;
    let s = &outcome.summary;
    println!(
        "campaign {}: {} instances, {} ok, {} failures",
        s.campaign, s.instances, s.ok, s.failures
    );
    if let Some(t) = s.max_tau {
        println!("max exact tau {t}, histogram {:?}", s.tau_histogram);
    }
    if let Some(m) = s.max_pierce_size {
        println!("max piercing size {m}");
    }
    println!(
        "records {}, aggregate {}, summary {}",
        outcome.records_path.display(),
        outcome.csv_path.display(),
        outcome.summary_path.display()
    );
    if s.failures > 0 {
        return Err(Failure::plain(format!("{} instances did not verify", s.failures)));
    }
    Ok(())
}

fn suite_failure(e: suite::SuiteError) -> Failure {
    use suite::SuiteError::*;
    match &e {
        TheoremViolation { .. } => Failure::new(EXIT_THEOREM, e.to_string()),
        Hypothesis { .. } => Failure::new(EXIT_HYPOTHESIS, e.to_string()),
        Budget { .. } => Failure::new(EXIT_BUDGET, e.to_string()),
        _ => Failure::plain(e.to_string()),
    }
}
