//! sievelab: batch runner for the experiment suite.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, bad parameters,
//! unknown experiment or config key), 2 invariant violation detected
//! during the run, 3 resource-guard abort. Invariant violations never
//! exit 0, and the CSV / JSON reports are still written when the run
//! itself completed.

mod config;
mod experiments;
mod report;
mod shard;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use sievelab_core::{Error, Result};

use config::FileConfig;
use report::{write_outputs, Format, RunOutput};

#[derive(Parser)]
#[command(
    name = "sievelab",
    version,
    about = "Sharded, seeded brute-force experiments over sieves, Galois censuses, and GL2 data"
)]
struct Cli {
    #[command(subcommand)]
    experiment: Experiment,

    /// Worker threads; 0 or absent lets the pool size itself.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Root seed; required by experiments that consume randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory receiving {experiment}.csv and {experiment}.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Which report files to write.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// How many shards to split the parameter box into; defaults to the
    /// thread count. The merged result is shard-count invariant.
    #[arg(long, global = true)]
    shards: Option<usize>,

    /// Rerun single-sharded and insist on an identical sorted CSV.
    #[arg(long = "self-test", global = true)]
    self_test: bool,

    /// JSON file whose keys mirror the long flags; flags win on conflict.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Experiment {
    /// Larger-sieve bound on a structured integer set.
    SieveDemo {
        /// squares | cubes | parabola (values of x^2 + x).
        #[arg(long)]
        set: Option<String>,
        /// The set holds the values in [0, B].
        #[arg(long = "B")]
        b: Option<u64>,
        /// Degree weight in the d*log B subtrahend.
        #[arg(long)]
        d: Option<u32>,
        /// Ceiling for the doubling search over the sieve cutoff.
        #[arg(long)]
        xmax: Option<u64>,
    },
    /// Galois-group census over monic x^n + t1 x^{n-1} + ... + tn.
    VdwCensus {
        /// Degree, 2 through 16; degrees 5+ classify by certificate.
        #[arg(long)]
        n: Option<usize>,
        /// Coefficient box radius: t in [-B, B]^n.
        #[arg(long = "B")]
        b: Option<i64>,
        /// Reduction primes tried per certificate (degrees 5 and up).
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Count tuples whose discriminant is a perfect square, two routes.
    DiscSquare {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "B")]
        b: Option<i64>,
    },
    /// Verify the GL2(F_ell) trace/det fiber counts ell^2 + eps*ell.
    Gl2Verify {
        /// Check all primes 5 <= ell <= lmax (at most 31).
        #[arg(long)]
        lmax: Option<u64>,
    },
    /// Commutator indices in SL2(Z/m) and the mod-8 kernel identities.
    GroupIndices {
        /// Comma-separated levels m, e.g. 2,4,8,12.
        #[arg(long)]
        levels: Option<String>,
    },
    /// Mod-ell surjectivity census over a one-parameter curve family.
    EcCensus {
        /// Family name; legendre is the built-in one.
        #[arg(long)]
        family: Option<String>,
        /// Parameter box: t in [-B, B].
        #[arg(long = "B")]
        b: Option<i64>,
        /// Comma-separated primes ell >= 5, e.g. 5,7.
        #[arg(long)]
        ells: Option<String>,
        /// Good primes scanned per certification attempt.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Orbit-length density profile of a polynomial map mod p.
    Dynamics {
        /// Coefficients of phi, ascending, e.g. 1,0,1 for x^2 + 1.
        #[arg(long)]
        poly: Option<String>,
        /// Orbit base point.
        #[arg(long)]
        base: Option<i64>,
        /// Scan all primes p <= x.
        #[arg(long)]
        x: Option<u64>,
        /// Threshold eps in m_p >= eps*log p; default 0.5 / log(deg).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Quadratic-residue equidistribution of one polynomial.
    Charsum {
        /// Coefficients of f, ascending; monic, odd degree.
        #[arg(long)]
        f: Option<String>,
        /// Check all odd primes p <= pmax with good reduction.
        #[arg(long)]
        pmax: Option<u64>,
    },
    /// Evaluate the explicit cover bound c * B^{d(n-1+delta)} * log B.
    BoundCalc {
        /// Order of the geometric group G^g.
        #[arg(long)]
        gg: Option<u64>,
        /// Frobenius classes as size:classsize pairs, e.g. 1:6,2:5.
        #[arg(long)]
        kappa: Option<String>,
        /// Excluded primes, comma separated.
        #[arg(long = "S")]
        s: Option<String>,
        /// Number of indeterminates.
        #[arg(long)]
        n: Option<u32>,
        /// Height budget B >= 2.
        #[arg(long = "B")]
        b: Option<f64>,
        /// Field degree [k:Q].
        #[arg(long)]
        d: Option<u32>,
    },
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Range(_) => 1,
        Error::Invariant(_) => 2,
        Error::Resource(_) | Error::Overflow(_) => 3,
    }
}

/// Config keys the runner itself consumes, valid for every experiment.
const GLOBAL_KEYS: [&str; 6] = ["threads", "seed", "out", "format", "shards", "self-test"];

fn allowed_keys(exp: &Experiment) -> Vec<&'static str> {
    let mut keys = GLOBAL_KEYS.to_vec();
    keys.extend_from_slice(match exp {
        Experiment::SieveDemo { .. } => &["set", "B", "d", "xmax"][..],
        Experiment::VdwCensus { .. } => &["n", "B", "budget"][..],
        Experiment::DiscSquare { .. } => &["n", "B"][..],
        Experiment::Gl2Verify { .. } => &["lmax"][..],
        Experiment::GroupIndices { .. } => &["levels"][..],
        Experiment::EcCensus { .. } => &["family", "B", "ells", "budget"][..],
        Experiment::Dynamics { .. } => &["poly", "base", "x", "eps"][..],
        Experiment::Charsum { .. } => &["f", "pmax"][..],
        Experiment::BoundCalc { .. } => &["gg", "kappa", "S", "n", "B", "d"][..],
    });
    keys
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Domain(format!("missing required --{flag}")))
}

fn to_usize(value: u64, what: &str) -> Result<usize> {
    usize::try_from(value).map_err(|_| Error::Domain(format!("{what} is out of range")))
}

fn to_u32(value: u64, what: &str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::Domain(format!("{what} is out of range")))
}

fn parse_format(text: &str) -> Result<Format> {
    match text {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        "both" => Ok(Format::Both),
        other => Err(Error::Domain(format!(
            "format must be csv, json, or both, got {other}"
        ))),
    }
}

/// Runs the chosen experiment with every parameter resolved as flag
/// first, config value second, default last.
fn dispatch(
    exp: &Experiment,
    file: &FileConfig,
    seed: Option<u64>,
    shards: usize,
) -> Result<RunOutput> {
    match exp {
        Experiment::SieveDemo { set, b, d, xmax } => {
            let set = set.clone().or(file.string("set")?).unwrap_or_else(|| "squares".into());
            let b = b.or(file.u64("B")?).unwrap_or(1000);
            let d = match d {
                Some(d) => *d,
                None => match file.u64("d")? {
                    Some(v) => to_u32(v, "d")?,
                    None => 1,
                },
            };
            let xmax = xmax.or(file.u64("xmax")?).unwrap_or(1_000_000);
            experiments::sieve_demo(&set, b, d, xmax)
        }
        Experiment::VdwCensus { n, b, budget } => {
            let n = match n {
                Some(n) => *n,
                None => to_usize(need(file.u64("n")?, "n")?, "n")?,
            };
            let b = need(b.or(file.i64("B")?), "B")?;
            let budget = match budget {
                Some(v) => *v,
                None => match file.u64("budget")? {
                    Some(v) => to_u32(v, "budget")?,
                    None => 60,
                },
            };
            let seed = seed.ok_or_else(|| {
                Error::Domain(
                    "vdw-census requires --seed; the certificate classifiers consume it \
                     and the CSV records it"
                        .into(),
                )
            })?;
            experiments::vdw_census(n, b, budget, seed, shards)
        }
        Experiment::DiscSquare { n, b } => {
            let n = match n {
                Some(n) => *n,
                None => to_usize(need(file.u64("n")?, "n")?, "n")?,
            };
            let b = need(b.or(file.i64("B")?), "B")?;
            experiments::disc_square(n, b, shards)
        }
        Experiment::Gl2Verify { lmax } => {
            let lmax = lmax.or(file.u64("lmax")?).unwrap_or(31);
            experiments::gl2_verify(lmax, shards)
        }
        Experiment::GroupIndices { levels } => {
            let levels = levels
                .clone()
                .or(file.string("levels")?)
                .unwrap_or_else(|| "2,4,8,12".into());
            let levels = experiments::parse_u64_list(&levels, "levels")?;
            experiments::group_indices(&levels, shards)
        }
        Experiment::EcCensus { family, b, ells, budget } => {
            let family = family
                .clone()
                .or(file.string("family")?)
                .unwrap_or_else(|| "legendre".into());
            let b = need(b.or(file.i64("B")?), "B")?;
            let ells = ells.clone().or(file.string("ells")?).unwrap_or_else(|| "5,7".into());
            let ells = experiments::parse_u64_list(&ells, "ells")?;
            let budget = budget.or(file.u64("budget")?).unwrap_or(2000);
            experiments::ec_census(&family, b, &ells, budget, shards)
        }
        Experiment::Dynamics { poly, base, x, eps } => {
            let poly = need(poly.clone().or(file.string("poly")?), "poly")?;
            let poly = experiments::parse_i64_list(&poly, "poly")?;
            let base = base.or(file.i64("base")?).unwrap_or(0);
            let x = need(x.or(file.u64("x")?), "x")?;
            let eps = match eps {
                Some(e) => Some(*e),
                None => file.f64("eps")?,
            };
            experiments::dynamics(&poly, base, x, eps)
        }
        Experiment::Charsum { f, pmax } => {
            let f = need(f.clone().or(file.string("f")?), "f")?;
            let f = experiments::parse_i64_list(&f, "f")?;
            let pmax = pmax.or(file.u64("pmax")?).unwrap_or(500);
            experiments::charsum(&f, pmax, shards)
        }
        Experiment::BoundCalc { gg, kappa, s, n, b, d } => {
            let gg = need(gg.or(file.u64("gg")?), "gg")?;
            let kappa = need(kappa.clone().or(file.string("kappa")?), "kappa")?;
            let kappa = experiments::parse_kappa(&kappa)?;
            let s: BTreeSet<u64> = match s.clone().or(file.string("S")?) {
                Some(text) if !text.trim().is_empty() => {
                    experiments::parse_u64_list(&text, "S")?.into_iter().collect()
                }
                _ => BTreeSet::new(),
            };
            let n = match n {
                Some(n) => *n,
                None => to_u32(need(file.u64("n")?, "n")?, "n")?,
            };
            let b = need(b.or(file.f64("B")?), "B")?;
            let d = match d {
                Some(d) => *d,
                None => to_u32(need(file.u64("d")?, "d")?, "d")?,
            };
            experiments::bound_calc(gg, &kappa, &s, n, b, d)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::empty(),
    };
    file.reject_unknown(&allowed_keys(&cli.experiment))?;

    let threads = match cli.threads {
        Some(t) => t,
        None => match file.u64("threads")? {
            Some(v) => to_usize(v, "threads")?,
            None => 0,
        },
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Resource(format!("cannot size the worker pool: {e}")))?;
    }

    let seed = match cli.seed {
        Some(s) => Some(s),
        None => file.u64("seed")?,
    };
    let out_dir = cli
        .out
        .clone()
        .or(file.string("out")?.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let format = match cli.format {
        Some(f) => f,
        None => match file.string("format")? {
            Some(text) => parse_format(&text)?,
            None => Format::Both,
        },
    };
    let shards = match cli.shards {
        Some(s) => s,
        None => match file.u64("shards")? {
            Some(v) => to_usize(v, "shards")?,
            None => threads.max(1),
        },
    };
    if shards == 0 {
        return Err(Error::Domain("shard count must be at least 1".into()));
    }
    let self_test = cli.self_test || file.bool("self-test")?.unwrap_or(false);

    let start = Instant::now();
    let mut output = dispatch(&cli.experiment, &file, seed, shards)?;
    if self_test {
        let single = dispatch(&cli.experiment, &file, seed, 1)?;
        let mut sharded_rows = output.csv_rows.clone();
        let mut single_rows = single.csv_rows.clone();
        sharded_rows.sort_unstable();
        single_rows.sort_unstable();
        if sharded_rows == single_rows {
            output.notes.push(format!(
                "self-test: {shards} shard(s) and 1 shard produced identical sorted CSV ({} rows)",
                sharded_rows.len()
            ));
        } else {
            output.invariant_failures += 1;
            output
                .notes
                .push("invariant: sharded and single-shard CSV disagree".into());
        }
    }
    let wall_ms = start.elapsed().as_millis();

    let written = write_outputs(&output, &out_dir, format, wall_ms)?;
    for line in &output.notes {
        println!("{line}");
    }
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(if output.invariant_failures > 0 { 2 } else { 0 })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Clap's own usage exit code is 2, which this tool reserves
            // for invariant violations; remap usage to 1.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}
