//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the process exit code.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::MAX_PROTOTYPES;
use crate::classifier::{Label, Labeling, DEFAULT_MU};
use crate::constructions::{
    odd_polygon_arrangement, odd_polygon_shatter, polytope_to_prototypes, takacs_arrangement, takacs_shatter,
    Arrangement, ArrangementKind,
};
use crate::error::Error;
use crate::geometry::{plane, regular_polygon_vertices, ConvexPolytope, Halfspace, Point};
use crate::verification::{search_lower_bound, verify_shattering, SearchConfig, ShatterCertificate};

mod certificate;
mod render;

pub use certificate::{labeling_key, CertificateFile, Meta, SCHEMA_VERSION};
pub use render::{bounds_csv, bounds_json, bounds_rows, bounds_table, plot_data_csv, BOUNDS_CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Most rows a single `bounds` or `plot-data` call will emit.
const MAX_ROWS: usize = 1_000_000;

/// Membership samples for polytope certificates.
const POLYTOPE_GRID: [f64; 5] = [-1.6, -0.8, 0.0, 0.8, 1.6];
/// Samples closer than this to the boundary are left out.
const POLYTOPE_BAND: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(name = "nnvc", version, about = "VC-dimension bounds and shattering certificates for 1NN classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower and upper VC-dimension bounds over a (d, m) grid.
    Bounds {
        /// Dimension: `2`, `2..5` (inclusive) or `2,3,7`.
        #[arg(long, default_value = "2")]
        d: String,
        /// Prototype count, same syntax as --d.
        #[arg(long, default_value = "3..10")]
        m: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Build an explicit arrangement, verify every labeling and write a certificate.
    Witness(WitnessArgs),
    /// Re-check a certificate file from its witnesses alone.
    Verify {
        path: PathBuf,
        /// Check at this margin instead of the recorded one.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Randomized search for a shattered set of n points.
    Search(SearchArgs),
    /// Upper-bound curves as CSV.
    PlotData {
        #[arg(long, default_value = "2,3")]
        d: String,
        #[arg(long, default_value = "3..50")]
        m: String,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[command(subcommand)]
    kind: WitnessKind,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Certificate path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the certificate even if verification fails.
    #[arg(long, global = true)]
    force: bool,
    /// Omit tool version and timestamp from the file.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Required margin.
    #[arg(long, global = true, default_value_t = DEFAULT_MU)]
    mu: f64,
}

#[derive(Subcommand, Debug)]
enum WitnessKind {
    /// 2N + 1 circle points plus the centre, shattered by N + 1 prototypes.
    Takacs {
        /// Facet count N.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Regular (2m - 1)-gon plus two inner points, shattered by m prototypes.
    OddPolygon {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Reflection prototypes for one convex polygon, checked on a sample grid.
    Polytope {
        /// The square [-1, 1]^2.
        #[arg(long, conflicts_with = "regular", required_unless_present = "regular")]
        square: bool,
        /// Regular polygon with this many sides and circumradius 1.
        #[arg(long)]
        regular: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, env = "NNVC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::Construction { .. } | Error::InvalidWitness(_) => EXIT_VERIFY_FAILED,
        _ => EXIT_USAGE,
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidInput(format!("{}: {e}", path.display()))
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    match cmd {
        Command::Bounds { d, m, format } => {
            let ds = parse_range::<u32>(&d, "--d")?;
            let ms = parse_range::<u64>(&m, "--m")?;
            check_rows(ds.len() * ms.len())?;
            let rows = bounds_rows(&ds, &ms)?;
            let text = match format {
                Format::Table => bounds_table(&rows),
                Format::Csv => bounds_csv(&rows),
                Format::Json => bounds_json(&rows)?,
            };
            write_out(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::PlotData { d, m, out: path } => {
            let ds = parse_range::<u32>(&d, "--d")?;
            let ms = parse_range::<u64>(&m, "--m")?;
            check_rows(ms.len())?;
            let text = plot_data_csv(&ds, &ms)?;
            match path {
                Some(p) => fs::write(&p, text).map_err(|e| io_err(&p, e))?,
                None => write_out(out, &text)?,
            }
            Ok(EXIT_OK)
        }
        Command::Witness(args) => witness(args, out, err),
        Command::Verify { path, mu } => verify(&path, mu, out, err),
        Command::Search(args) => search(args, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> crate::Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::InvalidInput(format!("writing output: {e}")))
}

fn check_rows(rows: usize) -> crate::Result<()> {
    if rows > MAX_ROWS {
        return Err(Error::InvalidInput(format!("{rows} rows requested, limit {MAX_ROWS}")));
    }
    Ok(())
}

/// `a`, `a..b` (inclusive), `a..=b`, or a comma-separated list of those.
fn parse_range<T>(s: &str, flag: &str) -> crate::Result<Vec<T>>
where
    T: std::str::FromStr + Copy + PartialOrd + TryFrom<u64> + Into<u64>,
{
    let bad = || Error::InvalidInput(format!("{flag}: cannot parse {s:?}"));
    let mut values = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let a: T = a.trim().parse().map_err(|_| bad())?;
            let b: T = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            let (a, b): (u64, u64) = (a.into(), b.into());
            check_rows((b - a + 1).try_into().unwrap_or(usize::MAX))?;
            for v in a..=b {
                values.push(T::try_from(v).map_err(|_| bad())?);
            }
        } else {
            values.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(values)
}

fn meta(no_meta: bool) -> Option<Meta> {
    (!no_meta).then(|| Meta {
        tool: concat!("nnvc ", env!("CARGO_PKG_VERSION")).to_string(),
        created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    })
}

fn witness(args: WitnessArgs, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    let o = &args.output;
    let (cert, generator) = match args.kind {
        WitnessKind::Takacs { n, radius } => {
            let arr = takacs_arrangement(n, radius)?;
            (verify_shattering(&arr, |l| takacs_shatter(&arr, l), o.mu)?, "takacs_shatter")
        }
        WitnessKind::OddPolygon { m, radius } => {
            let arr = odd_polygon_arrangement(m, radius)?;
            (verify_shattering(&arr, |l| odd_polygon_shatter(&arr, l), o.mu)?, "odd_polygon_shatter")
        }
        WitnessKind::Polytope { square, regular } => {
            (polytope_certificate(square, regular, o.mu)?, "polytope_to_prototypes")
        }
    };
    report_certificate(&cert, out)?;
    let verified = cert.verified;
    if let Some(path) = &o.out {
        if verified || o.force {
            let file = CertificateFile::from_certificate(&cert, generator, meta(o.no_meta));
            fs::write(path, file.to_json()?).map_err(|e| io_err(path, e))?;
            writeln!(out, "wrote {}", path.display()).ok();
        } else {
            writeln!(err, "refusing to write an unverified certificate (use --force)").ok();
        }
    }
    Ok(if verified { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn polytope_certificate(square: bool, regular: Option<usize>, mu: f64) -> crate::Result<ShatterCertificate> {
    let poly = if square {
        ConvexPolytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0])?
    } else {
        let n = regular.unwrap_or(0);
        let verts = regular_polygon_vertices(n, 1.0, std::f64::consts::FRAC_PI_2)?;
        let facets = (0..n)
            .map(|i| {
                let (a, b) = (&verts[i], &verts[(i + 1) % n]);
                let normal = plane::chord_normal(a, b);
                let offset = normal.dot(a);
                Halfspace::new(normal, offset)
            })
            .collect::<crate::Result<Vec<_>>>()?;
        ConvexPolytope::new(facets)?
    };
    let set = polytope_to_prototypes(&poly, &Point::origin(2), Label::Pos)?;
    let points: Vec<Point> = POLYTOPE_GRID
        .iter()
        .flat_map(|&y| POLYTOPE_GRID.iter().map(move |&x| Point::xy(x, y)))
        .filter(|p| poly.min_slack(p).abs() > POLYTOPE_BAND)
        .collect();
    let labels: Vec<Label> = points.iter().map(|p| Label::from_bit(poly.min_slack(p) > 0.0)).collect();
    let labeling = Labeling::from_labels(&labels)?;
    let arr = Arrangement { kind: ArrangementKind::Polytope, radius: 1.0, points };
    ShatterCertificate::for_labelings(arr, BTreeMap::from([(labeling.bits(), set)]), mu)
}

fn report_certificate(cert: &ShatterCertificate, out: &mut dyn Write) -> crate::Result<()> {
    let n = cert.arrangement.len();
    let mut text = format!(
        "points: {n}\nwitnesses: {}\nmax prototypes: {}\nmu: {:e}\nmin_margin: {:e}\nverified: {}\n",
        cert.witnesses.len(),
        cert.witnesses.values().map(|s| s.len()).max().unwrap_or(0),
        cert.mu,
        cert.min_margin,
        cert.verified
    );
    if let Some(f) = &cert.first_failure {
        text.push_str(&format!("first failure: 0x{} ({})\n", labeling_key(f.labeling, n), f.reason));
    }
    write_out(out, &text)
}

fn verify(path: &Path, mu: Option<f64>, out: &mut dyn Write, err: &mut dyn Write) -> crate::Result<i32> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let file = CertificateFile::from_json(&text)?;
    let r = file.reverify(mu)?;
    let n = file.arrangement.len();
    let mut report = format!(
        "points: {n}\nwitnesses: {}\nmu: {:e}\nmin_margin: {:e}\nverified: {}\n",
        file.witnesses.len(),
        mu.unwrap_or(file.mu),
        r.min_margin,
        r.verified
    );
    if mu.is_none() && r.verified != file.verified {
        report.push_str(&format!("note: file records verified = {}\n", file.verified));
    }
    write_out(out, &report)?;
    if let Some(f) = r.first_failure {
        writeln!(err, "FAIL labeling 0x{}: {}", labeling_key(f.labeling, n), f.reason).ok();
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(EXIT_OK)
}

fn search(args: SearchArgs, out: &mut dyn Write) -> crate::Result<i32> {
    let mut cfg = SearchConfig::new(args.d, args.m, args.n);
    cfg.trials = args.trials;
    cfg.rng_seed = args.seed;
    cfg.restarts = args.restarts;
    cfg.steps = args.steps;
    cfg.mu = args.output.mu;
    if args.m as u64 > MAX_PROTOTYPES {
        return Err(Error::InvalidInput(format!("m = {} too large", args.m)));
    }
    let outcome = search_lower_bound(&cfg)?;
    let mut text = format!(
        "d: {}\nm: {}\nn: {}\nseed: {}\nbudget: trials={} restarts={} steps={} initial_step={} min_step={}\ntrials_run: {}\nbest_labelings_realized: {}/{}\n",
        cfg.d,
        cfg.m,
        cfg.n,
        cfg.rng_seed,
        cfg.trials,
        cfg.restarts,
        cfg.steps,
        cfg.initial_step,
        cfg.min_step,
        outcome.trials_run,
        outcome.best_labelings_realized,
        1u64 << cfg.n,
    );
    match &outcome.certificate {
        Some(cert) => {
            text.push_str(&format!("certificate: found\nmin_margin: {:e}\n", cert.min_margin));
            if let Some(path) = &args.output.out {
                let file = CertificateFile::from_certificate(cert, "search_lower_bound", meta(args.output.no_meta));
                fs::write(path, file.to_json()?).map_err(|e| io_err(path, e))?;
                text.push_str(&format!("wrote {}\n", path.display()));
            }
        }
        None => text
            .push_str("certificate: none within budget (not finding one does not show the set size is unattainable)\n"),
    }
    write_out(out, &text)?;
    Ok(EXIT_OK)
}
