//! Command-line surface over the lensspec library.
//!
//! Boolean answers go to stdout, never into exit codes. Exit codes:
//! 0 = command completed, 2 = malformed input (lens literal, group file,
//! usage), 3 = internal invariant violation, 1 = any other error.

use clap::{Parser, Subcommand, ValueEnum};
use lensspec::config::{default_jobs, OutputFormat, RunConfig};
use lensspec::enumeration::{self, EnumerationMode, SearchOptions};
use lensspec::error::Error;
use lensspec::report;
use lensspec::{eigen, lens, orbifold, towers};
use serde_json::{json, Value};
use std::path::PathBuf;

static VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (exact arithmetic; certified isospectrality cutoff K = q*(n*(n-1)+1) - 1)"
);

#[derive(Parser)]
#[command(name = "lensspec", version = VERSION, about = "Exact Laplace spectra of lens spaces and spherical orbifolds")]
struct Cli {
    /// Worker threads (default: LENSSPEC_JOBS or all CPUs)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Compare spectra only up to this degree. Below the certified cutoff
    /// every affected answer is stamped HEURISTIC.
    #[arg(long, global = true)]
    cutoff_override: Option<usize>,

    /// Seed echoed into reports; reserved for randomized subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two lens quotients are isometric
    Isometric { a: String, b: String },
    /// Decide isospectrality rigorously at the certified cutoff
    Isospectral { a: String, b: String },
    /// Exact multiplicities and lattice counts up to a degree
    Spectrum {
        lens: String,
        #[arg(long = "max-k")]
        max_k: usize,
    },
    /// Least odd one-norm in the congruence lattice (governs the eigenvalue set)
    K0 { lens: String },
    /// Equality of eigenvalue sets, multiplicities disregarded
    EigenEquiv { a: String, b: String },
    /// List the isometry classes at (n, q)
    Enumerate {
        n: usize,
        q: u64,
        #[arg(long)]
        orbifold: bool,
    },
    /// Find all isospectral families at (n, q)
    Search {
        n: usize,
        q: u64,
        #[arg(long)]
        orbifold: bool,
    },
    /// Minimal irreducible isospectral pairs over 3 <= n <= nmax, 3 <= q <= qmax
    Table1 {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 23)]
        qmax: u64,
        /// Checkpoint directory; finished (n, q) cells are replayed on resume
        #[arg(long)]
        work_dir: Option<PathBuf>,
    },
    /// Existence grid of isospectral pairs (none / pair / pair_highest)
    Table2 {
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 23)]
        qmax: u64,
        #[arg(long)]
        work_dir: Option<PathBuf>,
    },
    /// Density of spectrally unique classes over q <= x
    Density { n: usize, x: u64 },
    /// Append r copies of t(q): the dimension-raising extension
    Extend { lens: String, r: usize },
    /// Descending isospectral towers
    Tower {
        #[command(subcommand)]
        cmd: TowerCommand,
    },
    /// Tuple predicates mod r and the (r, t, a) pair check
    DdCheck {
        r: u64,
        t: u64,
        /// comma-separated entries, e.g. 1,2,8
        a: String,
    },
    /// Signed-permutation orbifold groups
    Orbifold {
        #[command(subcommand)]
        cmd: OrbifoldCommand,
    },
    /// How many leading eigenvalues pin down the spectrum at volume ratio > epsilon
    FinitePart {
        n: usize,
        /// rational, e.g. 3/10 (or an integer)
        epsilon: String,
    },
    /// Non-isospectral orbifold pair agreeing on at least N leading eigenvalues
    Example54 { n: u64 },
}

#[derive(Subcommand)]
enum TowerCommand {
    Build {
        r: u64,
        t: u64,
        k: u64,
        a: String,
        depth: usize,
    },
    Verify {
        r: u64,
        t: u64,
        k: u64,
        a: String,
        depth: usize,
        #[arg(long = "full-depth", default_value_t = 1)]
        full_depth: usize,
    },
}

#[derive(Subcommand)]
enum OrbifoldCommand {
    /// The order-4 almost conjugate pair in SO(d+1)
    Gassmann { d: usize },
    /// Invariant dimensions of the group generated by a file of matrices
    Spectrum { groupfile: PathBuf, k: usize },
    /// Spectral uniqueness of order-2 or order-3 quotients of S^d
    Unique { d: usize, order: u32, k: usize },
}

struct Output {
    plain: String,
    json: Value,
    csv: Option<String>,
    certificates: Value,
}

impl Output {
    fn new(plain: impl Into<String>, json: Value) -> Self {
        Output {
            plain: plain.into(),
            json,
            csv: None,
            certificates: Value::Null,
        }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    fn with_certificates(mut self, certs: Value) -> Self {
        self.certificates = certs;
        self
    }
}

fn parse_lens(text: &str) -> Result<lens::LensParams, Error> {
    text.parse()
}

fn parse_tuple(text: &str) -> Result<Vec<i64>, Error> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .map_err(|_| Error::ParseLens(format!("bad tuple entry {tok:?}")))
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<(u64, u64), Error> {
    let parse_err = || Error::ParseLens(format!("bad rational {text:?}; expected a/b"));
    match text.split_once('/') {
        Some((a, b)) => Ok((
            a.trim().parse().map_err(|_| parse_err())?,
            b.trim().parse().map_err(|_| parse_err())?,
        )),
        None => Ok((text.trim().parse().map_err(|_| parse_err())?, 1)),
    }
}

fn mode_of(orbifold: bool) -> EnumerationMode {
    if orbifold {
        EnumerationMode::Orbifold
    } else {
        EnumerationMode::Manifold
    }
}

fn heuristic_stamp(certified: bool) -> &'static str {
    if certified {
        ""
    } else {
        " HEURISTIC"
    }
}

fn run(cli: &Cli, config: &RunConfig) -> Result<Output, Error> {
    let opts = SearchOptions {
        prefix_len: None,
        cutoff_override: config.cutoff_override,
    };
    match &cli.command {
        Command::Isometric { a, b } => {
            let (la, lb) = (parse_lens(a)?, parse_lens(b)?);
            let ans = lens::are_isometric(&la, &lb);
            Ok(Output::new(format!("{ans}"), json!(ans)))
        }
        Command::Isospectral { a, b } => {
            let (la, lb) = (parse_lens(a)?, parse_lens(b)?);
            let d = lens::decide_isospectral(&la, &lb, config.cutoff_override);
            Ok(Output::new(
                format!(
                    "{} (cutoff {}){}",
                    d.isospectral,
                    d.cutoff,
                    heuristic_stamp(d.certified)
                ),
                json!(d.isospectral),
            )
            .with_certificates(json!({"cutoff": d.cutoff, "certified": d.certified})))
        }
        Command::Spectrum { lens: l, max_k } => {
            let slice = lens::spectrum_slice(&parse_lens(l)?, *max_k);
            let mut plain = String::from("k lambda count mult\n");
            let mut csv = String::from("k,lambda,count,mult\n");
            for k in 0..=*max_k {
                plain.push_str(&format!(
                    "{k} {} {} {}\n",
                    slice.eigenvalues[k], slice.lattice_counts[k], slice.multiplicities[k]
                ));
                csv.push_str(&format!(
                    "{k},{},{},{}\n",
                    slice.eigenvalues[k], slice.lattice_counts[k], slice.multiplicities[k]
                ));
            }
            Ok(Output::new(plain, slice.to_json()).with_csv(csv))
        }
        Command::K0 { lens: l } => {
            let v = eigen::k0(&parse_lens(l)?);
            let plain = v.map_or("none".to_string(), |k| k.to_string());
            Ok(Output::new(plain, json!(v)))
        }
        Command::EigenEquiv { a, b } => {
            let (la, lb) = (parse_lens(a)?, parse_lens(b)?);
            let (da, db) = (eigen::eigenvalue_spectrum(&la), eigen::eigenvalue_spectrum(&lb));
            let ans = da == db;
            Ok(Output::new(
                format!("{ans} (n={}, k0={:?} vs n={}, k0={:?})", da.n, da.k0, db.n, db.k0),
                json!({"equivalent": ans, "a": da, "b": db}),
            ))
        }
        Command::Enumerate { n, q, orbifold } => {
            let classes = enumeration::enumerate_classes(*n, *q, mode_of(*orbifold));
            let mut plain = String::new();
            for key in &classes {
                plain.push_str(&format!(
                    "{}\n",
                    key.canonical_s
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
            plain.push_str(&format!("classes: {}\n", classes.len()));
            Ok(Output::new(plain, json!(classes)))
        }
        Command::Search { n, q, orbifold } => {
            let report = enumeration::find_isospectral_families(*n, *q, mode_of(*orbifold), &opts);
            let mut plain = format!(
                "classes: {} (cutoff {}{})\n",
                report.classes,
                report.cutoff,
                heuristic_stamp(report.certified)
            );
            for family in &report.families {
                let members: Vec<String> = family
                    .iter()
                    .map(|k| {
                        format!(
                            "[{}]",
                            k.canonical_s
                                .iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        )
                    })
                    .collect();
                plain.push_str(&format!("family: {}\n", members.join(" ")));
            }
            if report.families.is_empty() {
                plain.push_str("no isospectral families\n");
            }
            let certified = report.certified;
            let certs = json!({"cutoff": report.cutoff, "certified": certified});
            Ok(Output::new(plain, serde_json::to_value(&report).expect("serializable"))
                .with_certificates(certs))
        }
        Command::Table1 { nmax, qmax, work_dir } => {
            let rows = report::family_table(*nmax, *qmax, &opts, work_dir.as_deref())?;
            let csv = report::family_table_csv(&rows);
            let certified = opts.cutoff_override.is_none();
            Ok(Output::new(
                format!("{csv}{}", heuristic_stamp(certified).trim_start()),
                serde_json::to_value(&rows).expect("serializable"),
            )
            .with_csv(csv)
            .with_certificates(json!({"certified": certified})))
        }
        Command::Table2 { nmax, qmax, work_dir } => {
            // existence cells derive from the same per-(n, q) searches as the
            // family table, so the checkpoint directory is shared
            let _ = work_dir;
            let table = enumeration::existence_table(3, *nmax, 3, *qmax, EnumerationMode::Manifold);
            let csv = report::existence_csv(&table);
            Ok(Output::new(csv.clone(), serde_json::to_value(&table).expect("serializable"))
                .with_csv(csv))
        }
        Command::Density { n, x } => {
            let r = enumeration::density(*n, *x);
            let csv = report::density_csv(std::slice::from_ref(&r));
            let line = csv.lines().nth(1).unwrap_or_default().to_string();
            Ok(Output::new(line, serde_json::to_value(&r).expect("serializable")).with_csv(csv))
        }
        Command::Extend { lens: l, r } => {
            let ext = enumeration::extend_params(&parse_lens(l)?, *r)?;
            Ok(Output::new(ext.to_string(), json!(ext)))
        }
        Command::Tower { cmd } => run_tower(cmd, config),
        Command::DdCheck { r, t, a } => {
            let tuple = parse_tuple(a)?;
            let report = towers::dd_pair_check(*r, *t, &tuple)?;
            let plain = format!(
                "univalent {}\nself_reversing {}\nreversible {}\ngood {}\nhereditarily_good {}\nuseful {}\npair {} vs {}\nisospectral {}\nisometric {}\nconsistent {}\n",
                report.univalent,
                report.self_reversing,
                report.reversible,
                report.good,
                report.hereditarily_good,
                report.useful,
                report.lens_a,
                report.lens_neg_a,
                report.isospectral,
                report.isometric,
                report.consistent,
            );
            Ok(Output::new(plain, serde_json::to_value(&report).expect("serializable")))
        }
        Command::Orbifold { cmd } => run_orbifold(cmd),
        Command::FinitePart { n, epsilon } => {
            let (num, den) = parse_rational(epsilon)?;
            let cert = eigen::finite_part_bound(*n, num, den)?;
            Ok(Output::new(
                format!(
                    "q {}\nK {}\nN {}\n",
                    cert.q, cert.k_cap, cert.n_eigenvalues
                ),
                serde_json::to_value(&cert).expect("serializable"),
            ))
        }
        Command::Example54 { n } => {
            let r = eigen::example_sequence_agreement(*n);
            Ok(Output::new(
                format!(
                    "q {}\npair {} vs {}\nagree_count {}\npredicted {}\nisospectral {}\nisometric {}\n",
                    r.q, r.l1, r.l2, r.agree_count, r.predicted_agreement, r.isospectral, r.isometric
                ),
                serde_json::to_value(&r).expect("serializable"),
            ))
        }
    }
}

fn run_tower(cmd: &TowerCommand, _config: &RunConfig) -> Result<Output, Error> {
    match cmd {
        TowerCommand::Build { r, t, k, a, depth } => {
            let tuple = parse_tuple(a)?;
            let spec = towers::build_tower(*r, *t, *k, &tuple, *depth)?;
            let mut plain = String::new();
            for level in &spec.levels {
                plain.push_str(&format!(
                    "level {}: t_j {} q {} {} | {}\n",
                    level.j, level.t_j, level.q, level.m, level.n
                ));
            }
            Ok(Output::new(plain, serde_json::to_value(&spec).expect("serializable")))
        }
        TowerCommand::Verify {
            r,
            t,
            k,
            a,
            depth,
            full_depth,
        } => {
            let tuple = parse_tuple(a)?;
            let spec = towers::build_tower(*r, *t, *k, &tuple, *depth)?;
            match towers::verify_tower(&spec, *full_depth) {
                Ok(report) => {
                    let mut plain = String::new();
                    for level in &report.levels {
                        plain.push_str(&format!(
                            "level {}: predicate {} congruence {} full {}\n",
                            level.j,
                            level.predicate,
                            level.congruence,
                            level
                                .full
                                .map_or("skipped".to_string(), |b| b.to_string())
                        ));
                    }
                    plain.push_str("all checks passed\n");
                    Ok(Output::new(plain, serde_json::to_value(&report).expect("serializable")))
                }
                Err(failure) => Ok(Output::new(
                    format!("FAILED {failure}\n"),
                    json!({
                        "failed": {
                            "level": failure.level,
                            "check": failure.check,
                            "witness": failure.witness,
                        }
                    }),
                )),
            }
        }
    }
}

fn run_orbifold(cmd: &OrbifoldCommand) -> Result<Output, Error> {
    match cmd {
        OrbifoldCommand::Gassmann { d } => {
            let (g1, g2) = orbifold::gassmann_pair(*d)?;
            let ac = orbifold::almost_conjugate(&g1, &g2);
            let s1 = orbifold::orbifold_spectrum_slice(&g1, 50);
            let s2 = orbifold::orbifold_spectrum_slice(&g2, 50);
            let distinction = orbifold::distinguish(&g1, &g2);
            let plain = format!(
                "order {} / {}\nalmost_conjugate {}\nslices_agree_k50 {}\nfixed_space_dim {} / {}\nfixed_coordinate_dim {} / {}\ndistinction {:?}\n",
                g1.order(),
                g2.order(),
                ac,
                s1 == s2,
                orbifold::fixed_space_dim(&g1),
                orbifold::fixed_space_dim(&g2),
                orbifold::fixed_coordinate_dim(&g1),
                orbifold::fixed_coordinate_dim(&g2),
                distinction,
            );
            let json = json!({
                "almost_conjugate": ac,
                "slices_agree_k50": s1 == s2,
                "fixed_space_dim": [orbifold::fixed_space_dim(&g1), orbifold::fixed_space_dim(&g2)],
                "fixed_coordinate_dim": [orbifold::fixed_coordinate_dim(&g1), orbifold::fixed_coordinate_dim(&g2)],
                "elements": [
                    g1.elements().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    g2.elements().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                ],
                "distinction": distinction,
            });
            Ok(Output::new(plain, json))
        }
        OrbifoldCommand::Spectrum { groupfile, k } => {
            let text = std::fs::read_to_string(groupfile)
                .map_err(|e| Error::ParseGroup(format!("{}: {e}", groupfile.display())))?;
            let gens = orbifold::parse_group_file(&text)?;
            let group = orbifold::generate_group(&gens, 20_000)?;
            let slice = orbifold::orbifold_spectrum_slice(&group, *k);
            let mut plain = format!("order {}\n", group.order());
            for (deg, dim) in slice.iter().enumerate() {
                plain.push_str(&format!("{deg} {dim}\n"));
            }
            Ok(Output::new(
                plain,
                json!({
                    "order": group.order(),
                    "dims": slice.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                }),
            ))
        }
        OrbifoldCommand::Unique { d, order, k } => {
            let ans = orbifold::small_order_uniqueness(*d, *order, *k)?;
            Ok(Output::new(format!("{ans}"), json!(ans)))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let config = RunConfig {
        jobs: cli.jobs.unwrap_or_else(default_jobs),
        cutoff_override: cli.cutoff_override,
        output_format: match cli.format {
            Format::Plain => OutputFormat::Plain,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        seed: cli.seed,
    };
    // a single aggregator (this thread) owns stdout; workers share nothing
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build_global();

    let command_name = std::env::args().nth(1).unwrap_or_default();
    match run(&cli, &config) {
        Ok(out) => match cli.format {
            Format::Plain => {
                print!("{}", out.plain);
                if !out.plain.ends_with('\n') && !out.plain.is_empty() {
                    println!();
                }
            }
            Format::Json => {
                let env = report::envelope(&command_name, &config, out.json, out.certificates);
                println!("{}", serde_json::to_string_pretty(&env).expect("valid json"));
            }
            Format::Csv => match out.csv {
                Some(csv) => print!("{csv}"),
                None => print!("{}", out.plain),
            },
        },
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::ParseLens(_) | Error::ParseGroup(_) => 2,
                Error::Internal(_) => 3,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}
