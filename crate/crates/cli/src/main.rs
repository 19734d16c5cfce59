//! `escdyn`: classify orbits, render escaping sets, inspect singular values and
//! run the sampled containment checks.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use escdyn::harness::{reports_csv, run_check, CheckName, Pair, PropertyReport, SampleSpec, SuiteOptions};
use escdyn::orbit::orbit;
use escdyn::raster::{rasterize, GridSpec};
use escdyn::singular::{
    hyperbolicity, order_estimate, postsingular_verdict, singular_csv, singular_set_of, ASYMPTOTIC_VALUE_NOTE,
    DEFAULT_POSTSINGULAR_BOUND,
};
use escdyn::{classify, parse_complex, parse_expr, FunctionExpr, Verdict, Window};

use crate::config::{parse_size, parse_window, FileConfig};

#[derive(Debug, Parser)]
#[command(name = "escdyn", version, about = "Escaping-set experiments for affine-exponential entire functions")]
struct Cli {
    /// Worker threads for raster and verify (0 = one per core).
    #[arg(long, global = true, env = "ESCDYN_THREADS")]
    threads: Option<usize>,
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the verdict, certificate and step for one point.
    Classify {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Print the orbit of one point as CSV.
    Orbit {
        #[command(flatten)]
        target: Target,
        /// Number of iterates to record.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every pixel of a window and write a PPM image.
    Raster {
        #[arg(long = "fn")]
        function: Option<String>,
        /// re_min,re_max,im_min,im_max
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// WIDTHxHEIGHT
        #[arg(long)]
        px: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-pixel verdicts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Singular values, postsingular verdict and hyperbolicity.
    Singular {
        #[arg(long = "fn")]
        function: Option<String>,
        /// Lattice truncation |k| <= K.
        #[arg(long = "K", visible_alias = "k")]
        truncation: Option<u32>,
        /// CSV of singular values and their orbit verdicts.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Run containment checks and write CSV and JSON reports.
    Verify {
        /// `all` or one check name.
        #[arg(long)]
        suite: Option<String>,
        /// `fatou` or `exp`.
        #[arg(long)]
        pair: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Seed for random sample sets.
        #[arg(long)]
        seed: Option<u64>,
        /// Override every check's samples with N random points.
        #[arg(long, conflicts_with = "grid")]
        random: Option<usize>,
        /// Override every check's samples with a WIDTHxHEIGHT grid.
        #[arg(long)]
        grid: Option<String>,
        /// Window for --random/--grid (default -8,8,-8,8).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Summarize the JSON reports in a directory.
    Report {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Write the aggregated CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Target {
    #[arg(long = "fn")]
    function: Option<String>,
    /// Starting point, e.g. 1+0i.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

/// Successful runs report whether a certified violation was found.
enum Status {
    Clean,
    Violation,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(Status::Clean) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let threads = cli.threads.or(file.run.threads).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().context("building thread pool")?;
    pool.install(|| dispatch(cli.command, &file))
}

fn function_of(flag: Option<String>, file: &FileConfig) -> Result<FunctionExpr> {
    let text = flag.or_else(|| file.run.function.clone()).ok_or_else(|| anyhow!("--fn is required"))?;
    parse_expr(&text).with_context(|| format!("parsing function {text:?}"))
}

fn point_of(flag: Option<String>, file: &FileConfig) -> Result<num_complex::Complex64> {
    let text = flag.or_else(|| file.run.z.clone()).ok_or_else(|| anyhow!("--z is required"))?;
    parse_complex(&text).with_context(|| format!("parsing point {text:?}"))
}

fn dispatch(command: Command, file: &FileConfig) -> Result<Status> {
    match command {
        Command::Classify { target, max_iter } => {
            let f = function_of(target.function, file)?;
            let z = point_of(target.z, file)?;
            let cfg = file.escape_config(max_iter)?;
            println!("{}", classify(&f, z, &cfg));
            Ok(Status::Clean)
        }
        Command::Orbit { target, steps, max_iter, out } => {
            let f = function_of(target.function, file)?;
            let z = point_of(target.z, file)?;
            let cfg = file.escape_config(max_iter)?;
            let record = orbit(&f, z, steps.or(file.orbit.steps).unwrap_or(50), &cfg);
            let mut csv = String::from("n,re,im,abs\n");
            for (n, v) in record.values.iter().enumerate() {
                writeln!(csv, "{n},{:?},{:?},{:?}", v.re, v.im, v.norm())?;
            }
            match out.or_else(|| file.orbit.out.clone()) {
                Some(path) => write_file(&path, csv.as_bytes())?,
                None => print!("{csv}"),
            }
            eprintln!("{}", record.classification);
            Ok(Status::Clean)
        }
        Command::Raster { function, window, px, out, csv, max_iter } => {
            let f = function_of(function, file)?;
            let r = &file.raster;
            let window =
                parse_window(&window.or_else(|| r.window.clone()).ok_or_else(|| anyhow!("--window is required"))?)?;
            let (width, height) = parse_size(&px.or_else(|| r.px.clone()).ok_or_else(|| anyhow!("--px is required"))?)?;
            let out = out.or_else(|| r.out.clone()).ok_or_else(|| anyhow!("--out is required"))?;
            let cfg = file.escape_config(max_iter)?;
            let field = rasterize(&f, &GridSpec::new(window, width, height), &cfg)?;
            field.write_ppm(&out).with_context(|| format!("writing {}", out.display()))?;
            if let Some(path) = csv.or_else(|| r.csv.clone()) {
                let mut buf = Vec::new();
                field.write_csv(&mut buf)?;
                write_file(&path, &buf)?;
            }
            println!(
                "{width}x{height} escaping={} bounded={} undecided={} -> {}",
                field.count(Verdict::Escaping),
                field.count(Verdict::Bounded),
                field.count(Verdict::Undecided),
                out.display()
            );
            Ok(Status::Clean)
        }
        Command::Singular { function, truncation, out, max_iter } => {
            let f = function_of(function, file)?;
            let s = &file.singular;
            let k = truncation.or(s.truncation).unwrap_or(50);
            let cfg = file.escape_config(max_iter)?;
            let sing = singular_set_of(&f, k)?;
            let post = postsingular_verdict(&f, &sing, &cfg, s.bound.unwrap_or(DEFAULT_POSTSINGULAR_BOUND));
            let hyp = hyperbolicity(&post, &cfg);
            let avs = sing.asymptotic_values().count();
            let order = order_estimate(&f, &[10.0, 100.0, 1e3, 1e4], 4096);
            println!("function: {f}");
            println!("truncation K: {k}");
            println!(
                "critical values: {}  asymptotic values: {avs}{}",
                sing.critical_values().count(),
                if sing.over_approximation { "  (superset)" } else { "" }
            );
            println!("bounded type: {}", if sing.is_bounded() { "yes" } else { "no" });
            println!("postsingular: {:?} (max modulus {:.6e})", post.verdict, post.bound_witness);
            println!("hyperbolicity: {hyp:?}");
            match order {
                Ok(rho) => println!("#AV = {avs}, 2*order = {:.4}", 2.0 * rho),
                Err(e) => println!("#AV = {avs}, 2*order unavailable ({e})"),
            }
            println!("note: {ASYMPTOTIC_VALUE_NOTE}");
            if let Some(path) = out.or_else(|| s.out.clone()) {
                write_file(&path, singular_csv(&post).as_bytes())?;
            }
            Ok(Status::Clean)
        }
        Command::Verify { suite, pair, out_dir, seed, random, grid, window, max_iter } => {
            let v = &file.verify;
            let suite = suite.or_else(|| v.suite.clone()).unwrap_or_else(|| "all".into());
            let checks = if suite == "all" { CheckName::ALL.to_vec() } else { vec![suite.parse::<CheckName>()?] };
            let pair = Pair::canonical(&pair.or_else(|| v.pair.clone()).unwrap_or_else(|| "fatou".into()))?;
            let out_dir = out_dir.or_else(|| v.out_dir.clone()).unwrap_or_else(|| PathBuf::from("reports"));
            let defaults = SuiteOptions::default();
            let seed = seed.or(file.samples.seed).unwrap_or(defaults.seed);
            let samples = sample_override(random, grid, window, seed, file)?;
            let opts = SuiteOptions {
                cfg: file.escape_config(max_iter)?,
                samples,
                seed,
                truncation: v.truncation.unwrap_or(defaults.truncation),
            };
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let mut reports = Vec::new();
            for check in checks {
                for report in run_check(check, &pair, &opts)? {
                    println!("{}", report.summary_line());
                    for w in &report.warnings {
                        println!("  warning: {w}");
                    }
                    write_file(&out_dir.join(format!("{}.json", report.check_name)), report.to_json().as_bytes())?;
                    reports.push(report);
                }
            }
            write_file(&out_dir.join("reports.csv"), reports_csv(&reports).as_bytes())?;
            Ok(status_of(&reports))
        }
        Command::Report { dir, out } => {
            let dir = dir.or_else(|| file.report.dir.clone()).unwrap_or_else(|| PathBuf::from("reports"));
            let reports = load_reports(&dir)?;
            if reports.is_empty() {
                bail!("no JSON reports found in {}", dir.display());
            }
            let mut total = escdyn::harness::Counts::default();
            for r in &reports {
                println!("{}", r.summary_line());
                total.applicable += r.counts.applicable;
                total.passed += r.counts.passed;
                total.violated += r.counts.violated;
                total.vacuous_undecided += r.counts.vacuous_undecided;
            }
            println!(
                "{} reports: applicable={} passed={} violated={} vacuous={} ({:.1}% vacuous)",
                reports.len(),
                total.applicable,
                total.passed,
                total.violated,
                total.vacuous_undecided,
                100.0 * total.vacuous_fraction()
            );
            if let Some(path) = out.or_else(|| file.report.out.clone()) {
                write_file(&path, reports_csv(&reports).as_bytes())?;
            }
            Ok(status_of(&reports))
        }
    }
}

fn sample_override(
    random: Option<usize>,
    grid: Option<String>,
    window: Option<String>,
    seed: u64,
    file: &FileConfig,
) -> Result<Option<SampleSpec>> {
    let window = window.map(|w| parse_window(&w)).transpose()?;
    let spec = match (random, grid) {
        (Some(n), _) => SampleSpec::random(window.unwrap_or_else(default_window), n, seed),
        (None, Some(g)) => {
            let (w, h) = parse_size(&g)?;
            SampleSpec::grid(window.unwrap_or_else(default_window), w, h)
        }
        (None, None) => return file.samples(),
    };
    spec.validate()?;
    Ok(Some(spec))
}

fn default_window() -> Window {
    Window::new(-8.0, 8.0, -8.0, 8.0)
}

fn status_of(reports: &[PropertyReport]) -> Status {
    if reports.iter().any(|r| r.counts.violated > 0) {
        Status::Violation
    } else {
        Status::Clean
    }
}

fn load_reports(dir: &Path) -> Result<Vec<PropertyReport>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing report {}", p.display()))
        })
        .collect()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
