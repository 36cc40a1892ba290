//! Command-line front end behind the `prunedperm` binary.
//!
//! ```text
//! prunedperm stats   <descriptor> [--p <lag>] [--format csv|json] [--out <path>]
//! prunedperm prune   <descriptor> --beta <β> [--alpha <α>] [--p <windows>] [--verify]
//!                    [--gap-only] [--format csv|json|bin] [--trace <path>] [--out <path>]
//! prunedperm bench   [--family <name>|all]... [--n <list>] [--p <list>] [--trials <t>]
//!                    [--seed <s>] [--beta-fraction <num/den>] [--timing] [--format csv|json] [--out <path>]
//! prunedperm banksim <descriptor> --beta <β> --W <window> --M <banks> [--mode msb|lsb]
//!                    [--filler] [--format csv|json] [--out <path>]
//! ```
//!
//! Permutations are given as descriptors:
//!
//! ```text
//! brp:n=<bits>                      bit reversal on 2^bits
//! circ:k=<len>,c=<shift>            j + c mod k
//! lcs:k=<len>,h=<odd>               h·j mod k
//! qpp:k=<len>,h=<lin>,b=<quad>      h·j + b·j² mod k
//! flip:<descriptor>                 k − 1 − inner(j)
//! table:v=<a>.<b>.<c>...            explicit image list
//! random:k=<len>,seed=<u64>         seeded random table
//! block2d:s1=[<descriptor>],s2=[<descriptor>]
//! mstream:s0=[<descriptor>],s1=[<descriptor>],...[,w=<order>.<list>]
//! ```
//!
//! Lists such as `--n` accept `10,12,14` or ranges `10..=24`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification or
//! contention failure, 3 overflow or size limit.

use crate::banking::{schedule_pruned, BankLayout, BankMode, WritePacking};
use crate::bench::{self, BenchConfig, Family};
use crate::error::{Error, Result};
use crate::inliers::FastCounter;
use crate::perm::parse_descriptor;
use crate::pruning::{addresses_to_csv, addresses_to_le_bytes, minimal_inliers, ppbri, spbri, PruneRequest};
use crate::stats::StatsReport;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prunedperm", version, about = "Pruned bit-reversal permutations: counts, gaps, statistics and bank schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Bin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Msb,
    Lsb,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form statistics next to enumerated values.
    Stats {
        descriptor: String,
        /// Lag of the serial correlation.
        #[arg(long = "p", default_value_t = 1)]
        lag: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serially pruned addresses, computed with parallel windows.
    Prune {
        descriptor: String,
        #[arg(long)]
        beta: u64,
        /// Domain size; defaults to β.
        #[arg(long)]
        alpha: Option<u64>,
        /// Number of windows.
        #[arg(long = "p", default_value_t = 1)]
        windows: u64,
        /// Compare against the serial scan.
        #[arg(long)]
        verify: bool,
        /// Only solve for the gap of α.
        #[arg(long)]
        gap_only: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write the gap trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serial versus parallel pruning cost over interleaver families.
    Bench {
        /// Family name, repeatable, or `all`.
        #[arg(long = "family", default_value = "brev1D")]
        families: Vec<String>,
        #[arg(long = "n", default_value = "10..=16")]
        sizes: String,
        #[arg(long = "p", default_value = "8")]
        parallelism: String,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "3/4")]
        beta_fraction: String,
        /// Record wall-clock times.
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Step-by-step memory bank schedule of the pruned permutation stage.
    Banksim {
        descriptor: String,
        #[arg(long)]
        beta: u64,
        #[arg(long = "W")]
        window: u64,
        #[arg(long = "M")]
        banks: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Lsb)]
        mode: ModeArg,
        /// Write in the read step with filler in pruned slots.
        #[arg(long)]
        filler: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::Contention { .. } => EXIT_VERIFY,
        Error::Overflow(_) | Error::TooLarge(_) => EXIT_OVERFLOW,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Stats { descriptor, lag, format, out } => {
            let perm = parse_descriptor(&descriptor)?;
            let report = StatsReport::build(&perm, lag)?;
            let body = match format {
                Format::Json => report.to_json()? + "\n",
                Format::Csv => report.to_csv(),
                Format::Bin => return Err(Error::InvalidArgument("stats has no binary format".into())),
            };
            emit(body.as_bytes(), out.as_ref(), stdout)?;
            let bad = report.mismatches();
            if !bad.is_empty() {
                return Err(Error::Verification(format!("closed forms disagree with enumeration: {bad:?}")));
            }
            Ok(())
        }
        Command::Prune { descriptor, beta, alpha, windows, verify, gap_only, format, trace, out } => {
            let perm = parse_descriptor(&descriptor)?;
            let req = PruneRequest::new(perm, alpha.unwrap_or(beta), beta)?;
            prune(&req, windows, verify, gap_only, format, trace, out, stdout, stderr)
        }
        Command::Bench { families, sizes, parallelism, trials, seed, beta_fraction, timing, format, out } => {
            let cfg = BenchConfig {
                families: parse_families(&families)?,
                sizes: parse_list(&sizes)?.into_iter().map(|n| n as u32).collect(),
                parallelism: parse_list(&parallelism)?,
                trials,
                seed,
                beta_fraction: parse_fraction(&beta_fraction)?,
                timing,
            };
            let rows = bench::run(&cfg)?;
            let body = match format {
                Format::Csv => bench::to_csv(&rows),
                Format::Json => json(&rows)?,
                Format::Bin => return Err(Error::InvalidArgument("bench has no binary format".into())),
            };
            emit(body.as_bytes(), out.as_ref(), stdout)?;
            if let Some(r) = rows.iter().find(|r| !r.verified) {
                return Err(Error::Verification(format!("{} n={} p={} differs from the serial scan", r.family, r.n, r.p)));
            }
            Ok(())
        }
        Command::Banksim { descriptor, beta, window, banks, mode, filler, format, out } => {
            let perm = parse_descriptor(&descriptor)?;
            let mode = match mode {
                ModeArg::Msb => BankMode::Msb,
                ModeArg::Lsb => BankMode::Lsb,
            };
            let layout = BankLayout::new(window, banks, mode)?;
            let packing = if filler { WritePacking::Filler } else { WritePacking::Dense };
            let sched = schedule_pruned(&perm, beta, &layout, packing, &FastCounter::new(&perm))?;
            let body = match format {
                Format::Csv => sched.to_csv(),
                Format::Json => json(&sched)?,
                Format::Bin => return Err(Error::InvalidArgument("banksim has no binary format".into())),
            };
            emit(body.as_bytes(), out.as_ref(), stdout)?;
            writeln!(
                stderr,
                "write steps {}, stalls {}, lockstep read steps {}, per-bank read steps {}",
                sched.write_steps,
                sched.total_stalls(),
                sched.lockstep_read_steps,
                sched.per_bank_read_steps
            )?;
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn prune(
    req: &PruneRequest,
    windows: u64,
    verify: bool,
    gap_only: bool,
    format: Format,
    trace_path: Option<PathBuf>,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let counter = FastCounter::new(&req.perm);
    let trace = minimal_inliers(&counter, req.alpha, req.beta)?;
    if let Some(path) = &trace_path {
        std::fs::write(path, trace.to_json()? + "\n")?;
    }
    if gap_only {
        let body = match format {
            Format::Json => trace.to_json()? + "\n",
            _ => format!(
                "# prunedperm-csv v1\nk,alpha,beta,gap,iterations\n{},{},{},{},{}\n",
                trace.k,
                trace.alpha,
                trace.beta,
                trace.final_gap,
                trace.fixed_point_at()
            ),
        };
        emit(body.as_bytes(), out.as_ref(), stdout)?;
        writeln!(stderr, "gap {} reached at iteration {}", trace.final_gap, trace.fixed_point_at())?;
        return Ok(());
    }
    if req.alpha == 0 {
        return Err(Error::InvalidArgument("nothing to prune with α = 0".into()));
    }
    let addresses = if windows == 1 && req.alpha < req.beta {
        spbri(&req.perm, 0, req.alpha - 1, req.beta, 0)?.addresses
    } else {
        let mut a = ppbri(&req.perm, windows, req.beta, &counter)?.addresses;
        a.truncate(req.alpha as usize);
        a
    };
    if verify {
        let serial = spbri(&req.perm, 0, req.alpha - 1, req.beta, 0)?;
        if serial.addresses != addresses {
            return Err(Error::Verification("parallel output differs from the serial scan".into()));
        }
        writeln!(stderr, "verification OK: {} addresses", addresses.len())?;
    }
    match format {
        Format::Csv => emit(addresses_to_csv(&addresses).as_bytes(), out.as_ref(), stdout),
        Format::Bin => emit(&addresses_to_le_bytes(&addresses)?, out.as_ref(), stdout),
        Format::Json => {
            let body = serde_json::json!({ "addresses": addresses, "trace": trace });
            emit((body.to_string() + "\n").as_bytes(), out.as_ref(), stdout)
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
}

fn emit(bytes: &[u8], out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn parse_families(names: &[String]) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    for name in names.iter().flat_map(|s| s.split(',')) {
        if name.eq_ignore_ascii_case("all") {
            out.extend(Family::ALL);
        } else {
            out.push(name.trim().parse()?);
        }
    }
    Ok(out)
}

/// `a,b,c` or `lo..=hi` (or `lo..hi`).
pub fn parse_list(text: &str) -> Result<Vec<u64>> {
    let num = |s: &str| {
        s.trim().parse::<u64>().map_err(|_| Error::InvalidArgument(format!("not a number: {s:?}")))
    };
    if let Some((lo, hi)) = text.split_once("..=") {
        return Ok((num(lo)?..=num(hi)?).collect());
    }
    if let Some((lo, hi)) = text.split_once("..") {
        return Ok((num(lo)?..num(hi)?).collect());
    }
    text.split(',').filter(|s| !s.trim().is_empty()).map(num).collect()
}

fn parse_fraction(text: &str) -> Result<(u64, u64)> {
    let bad = || Error::InvalidArgument(format!("expected num/den, got {text:?}"));
    let (a, b) = text.split_once('/').ok_or_else(bad)?;
    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a == 0 || b == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("prunedperm").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lists_and_fractions() {
        assert_eq!(parse_list("10..=12").unwrap(), vec![10, 11, 12]);
        assert_eq!(parse_list("2,4, 8").unwrap(), vec![2, 4, 8]);
        assert_eq!(parse_list("3..5").unwrap(), vec![3, 4]);
        assert!(parse_list("x").is_err());
        assert_eq!(parse_fraction("3/4").unwrap(), (3, 4));
        assert!(parse_fraction("5/4").is_err());
    }

    #[test]
    fn stats_command() {
        let (code, out, _) = call(&["stats", "brp:n=4", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("16,num_descents,8,8\n"));
        assert!(out.contains("16,major_index,64,64\n"));
        assert!(out.contains("16,num_fixed_points,4,4\n"));
        assert!(out.contains("16,num_excedances,6,6\n"));
        assert!(out.contains("16,num_inversions,44,44\n"));
        let (code, out, _) = call(&["stats", "brp:n=2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["num_inversions"]["closed_form"], 1);
        let (code, _, err) = call(&["stats", "brp:n="]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("byte"));
    }

    #[test]
    fn prune_command() {
        let (code, out, err) = call(&["prune", "brp:n=5", "--beta", "22", "--p", "8", "--verify"]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 2 + 22);
        assert!(err.contains("verification OK"));
        let (code, out, _) =
            call(&["prune", "brp:n=32", "--alpha", "4096", "--beta", "2147483658", "--gap-only", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["final_gap"], 4093);
        let (code, _, _) = call(&["prune", "brp:n=5", "--beta", "22", "--p", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = call(&["prune", "brp:n=5", "--beta", "40"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn banksim_command() {
        let (code, out, err) = call(&["banksim", "brp:n=5", "--beta", "22", "--W", "4", "--M", "8"]);
        assert_eq!(code, 0, "{err}");
        assert!(err.contains("write steps 3, stalls 10"));
        assert_eq!(out.lines().filter(|l| l.contains(",stall,")).count(), 10);
        let (code, _, err) = call(&["banksim", "random:k=16,seed=3", "--beta", "12", "--W", "4", "--M", "4"]);
        assert_eq!(code, EXIT_VERIFY, "{err}");
        assert!(err.contains("contention"));
        let (code, out, err) = call(&["banksim", "brp:n=5", "--beta", "32", "--W", "4", "--M", "8"]);
        assert_eq!(code, 0);
        assert!(err.contains("stalls 0"));
        assert!(!out.contains("stall"));
    }

    #[test]
    fn bench_command() {
        let (code, out, _) = call(&["bench", "--family", "all", "--n", "10", "--p", "4", "--seed", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2 + 9);
        let (code, out, _) = call(&["bench", "--trials", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, bench::BENCH_CSV_HEADER);
        let (code, _, _) = call(&["bench", "--family", "nope"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn overflow_exit_code() {
        assert_eq!(exit_code(&Error::Overflow("x")), EXIT_OVERFLOW);
        let (code, _, _) = call(&["stats", "brp:n=63", "--p", "3"]);
        assert_eq!(code, EXIT_OVERFLOW);
    }
}
