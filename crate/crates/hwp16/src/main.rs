//! Thin command-line front end over the `hwp16` library.
//!
//! Exit codes: 0 success, 2 usage, 3 unsupported parameters, 4 search
//! timeout, 5 verification failure, 6 parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use hwp16::assembly::{generate, AssemblyError, GenContext};
use hwp16::cache::SolutionCache;
use hwp16::certificate;
use hwp16::factor::verify_decomposition;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;
const EXIT_VERIFY: u8 = 5;
const EXIT_PARSE: u8 = 6;

#[derive(Parser)]
#[command(
    name = "hwp16",
    about = "Construct and verify 2-factorizations of the wreath product C_m wr K_16",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a verified certificate for one (m, r) pair.
    Generate {
        /// Number of rows; odd, at least 9.
        #[arg(long)]
        m: u32,
        /// Number of 16-cycle factors; between 7 and 23.
        #[arg(long)]
        r: u32,
        /// Output certificate path.
        #[arg(long)]
        out: PathBuf,
        /// Search seed (0 = lexicographic-first, fully deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solution cache directory (default: $HWP_CACHE_DIR or the user cache).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Skip the on-disk solution cache entirely.
        #[arg(long)]
        no_cache: bool,
    },
    /// Re-verify a certificate file from its host descriptor alone.
    Verify {
        path: PathBuf,
    },
    /// Generate and verify a whole grid of (m, r) pairs.
    Sweep {
        /// Comma-separated list of m values, e.g. 9,11,13,15.
        #[arg(long)]
        m: String,
        /// r values: a comma list, a range like 7-23, or a mix.
        #[arg(long)]
        r: String,
        /// Directory for the certificate files.
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Re-run all fixed-table invariants.
    SelftestTables,
    /// Inspect or clear the solution cache.
    Cache {
        #[command(subcommand)]
        op: CacheOp,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CacheOp {
    List,
    Clear,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Generate { m, r, out, seed, cache_dir, no_cache } => {
            cmd_generate(m, r, &out, seed, cache_dir, no_cache)
        }
        Cmd::Verify { path } => cmd_verify(&path),
        Cmd::Sweep { m, r, out_dir, jobs, seed, cache_dir, no_cache } => {
            cmd_sweep(&m, &r, &out_dir, jobs, seed, cache_dir, no_cache)
        }
        Cmd::SelftestTables => cmd_selftest_tables(),
        Cmd::Cache { op, cache_dir } => cmd_cache(op, cache_dir),
    };
    ExitCode::from(code)
}

fn context(seed: u64, cache_dir: Option<PathBuf>, no_cache: bool) -> GenContext {
    if no_cache {
        GenContext { seed, cache: None }
    } else {
        GenContext::with_cache_dir(seed, cache_dir)
    }
}

fn exit_for(err: &AssemblyError) -> u8 {
    match err {
        AssemblyError::Unsupported(_) => EXIT_UNSUPPORTED,
        AssemblyError::Search(_) => EXIT_TIMEOUT,
        AssemblyError::Verification(_) | AssemblyError::Internal(_) => EXIT_VERIFY,
    }
}

/// Write atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        std::process::id()
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn cmd_generate(
    m: u32,
    r: u32,
    out: &Path,
    seed: u64,
    cache_dir: Option<PathBuf>,
    no_cache: bool,
) -> u8 {
    let ctx = context(seed, cache_dir, no_cache);
    let started = Instant::now();
    match generate(m, r, &ctx) {
        Ok((d, stats)) => {
            let text = match certificate::serialize(&d) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_VERIFY;
                }
            };
            if let Err(e) = write_atomic(out, &text) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return EXIT_USAGE;
            }
            println!(
                "generated m={m} r={r}: factors c16={r} cm={} matchings=1, {} edges, \
                 {} ms (solver calls {}, cache hits {}) -> {}",
                23 - r,
                376 * m,
                started.elapsed().as_millis(),
                stats.solver_calls,
                stats.cache_hits,
                out.display()
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn cmd_verify(path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_PARSE;
        }
    };
    let d = match certificate::parse(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("parse error: {e}");
            return EXIT_PARSE;
        }
    };
    match verify_decomposition(&d) {
        Ok(stats) => {
            let m = d.host.m();
            println!(
                "accepted: c16={} cm={} matchings={} edges={}",
                stats.cycles_of_len(16),
                if m == 16 { 0 } else { stats.cycles_of_len(m) },
                stats.one_factor_count,
                stats.edge_count
            );
            EXIT_OK
        }
        Err(v) => {
            eprintln!("verification failure: {v}");
            EXIT_VERIFY
        }
    }
}

fn parse_u32_list(spec: &str) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((a, b)) = tok.split_once('-') {
            let a: u32 = a.trim().parse().ok()?;
            let b: u32 = b.trim().parse().ok()?;
            if a > b {
                return None;
            }
            out.extend(a..=b);
        } else {
            out.push(tok.parse().ok()?);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    m_spec: &str,
    r_spec: &str,
    out_dir: &Path,
    jobs: usize,
    seed: u64,
    cache_dir: Option<PathBuf>,
    no_cache: bool,
) -> u8 {
    let Some(ms) = parse_u32_list(m_spec) else {
        eprintln!("usage error: bad --m list `{m_spec}`");
        return EXIT_USAGE;
    };
    let Some(rs) = parse_u32_list(r_spec) else {
        eprintln!("usage error: bad --r list `{r_spec}`");
        return EXIT_USAGE;
    };
    if jobs == 0 {
        eprintln!("usage error: --jobs must be positive");
        return EXIT_USAGE;
    }
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return EXIT_USAGE;
    }

    let pairs: Vec<(u32, u32)> =
        ms.iter().flat_map(|&m| rs.iter().map(move |&r| (m, r))).collect();
    let ctx = context(seed, cache_dir, no_cache);

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    struct Row {
        m: u32,
        r: u32,
        status: String,
        millis: u128,
        solver_calls: u32,
        cache_hits: u32,
        exit: u8,
    }

    let rows: Vec<Row> = pool.install(|| {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|&(m, r)| {
                let started = Instant::now();
                match generate(m, r, &ctx) {
                    Ok((d, stats)) => {
                        let path = out_dir.join(format!("hwp-m{m}-r{r}.cert"));
                        let outcome = certificate::serialize(&d)
                            .map_err(|e| e.to_string())
                            .and_then(|text| {
                                write_atomic(&path, &text).map_err(|e| e.to_string())
                            });
                        match outcome {
                            Ok(()) => Row {
                                m,
                                r,
                                status: "pass".into(),
                                millis: started.elapsed().as_millis(),
                                solver_calls: stats.solver_calls,
                                cache_hits: stats.cache_hits,
                                exit: EXIT_OK,
                            },
                            Err(e) => Row {
                                m,
                                r,
                                status: format!("write-error: {e}"),
                                millis: started.elapsed().as_millis(),
                                solver_calls: stats.solver_calls,
                                cache_hits: stats.cache_hits,
                                exit: EXIT_USAGE,
                            },
                        }
                    }
                    Err(e) => Row {
                        m,
                        r,
                        status: format!("fail: {e}"),
                        millis: started.elapsed().as_millis(),
                        solver_calls: 0,
                        cache_hits: 0,
                        exit: exit_for(&e),
                    },
                }
            })
            .collect()
    });

    println!("m\tr\tstatus\tms\tsolver_calls\tcache_hits");
    let mut worst = EXIT_OK;
    for row in &rows {
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            row.m, row.r, row.status, row.millis, row.solver_calls, row.cache_hits
        );
        worst = worst.max(row.exit);
    }
    let passed = rows.iter().filter(|r| r.exit == EXIT_OK).count();
    println!("# {passed}/{} pairs passed", rows.len());
    worst
}

fn cmd_selftest_tables() -> u8 {
    match hwp16::tables::selftest() {
        Ok(()) => {
            println!("tables ok: 2 x 15 perfect matchings, six 16-cycle unions, walecki bases, ring model");
            EXIT_OK
        }
        Err(msg) => {
            eprintln!("selftest failure: {msg}");
            EXIT_VERIFY
        }
    }
}

fn cmd_cache(op: CacheOp, cache_dir: Option<PathBuf>) -> u8 {
    let cache = SolutionCache::resolve(cache_dir);
    match op {
        CacheOp::List => {
            let entries = cache.entries();
            println!("cache dir: {}", cache.dir().display());
            for name in &entries {
                println!("{name}");
            }
            println!("# {} entries", entries.len());
            EXIT_OK
        }
        CacheOp::Clear => match cache.clear() {
            Ok(n) => {
                println!("removed {n} entries from {}", cache.dir().display());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
    }
}
