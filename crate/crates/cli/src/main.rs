//! `cubesum`: sums of three and four cubes equal to `2^(n-1)(2^n - 1)`.
//!
//! Exit codes: 0 success, 1 verification or internal failure, 2 incomplete
//! (factoring timeouts, uncertified indices or an interrupted search),
//! 64 usage error.

mod output;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubesum_core::factorize::Seed;
use cubesum_core::identities::{four_cube_rep, three_cube_identity};
use cubesum_core::mersenne::{p_mod9, sanity_checks, x_residue_filter};
use cubesum_core::record::OutputRecord;
use cubesum_core::search::{search_observed, Progress};
use cubesum_core::tables::{self, RowCheck};
use cubesum_core::twocubes::{search_two_cubes_with, TwoCubeOutcome};
use cubesum_core::{
    p_value, Error, FactorOptions, Factorizer, Mode, PIndex, Representation, SearchConfig,
};

use output::{write_records, write_table, Format};

const EXIT_FAILURE: u8 = 1;
const EXIT_INCOMPLETE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "cubesum",
    version,
    about = "Sums of cubes equal to P_n = 2^(n-1)(2^n - 1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format [default: table on a terminal, json otherwise]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for searches
    #[arg(long, global = true, env = "CUBESUM_JOBS", default_value_t = 1)]
    jobs: usize,

    /// Seed mixed into the factoring randomness (runs stay reproducible)
    #[arg(long, global = true, conflicts_with = "fresh_seed")]
    seed: Option<u64>,

    /// Seed factoring from fresh process entropy
    #[arg(long, global = true)]
    fresh_seed: bool,

    /// Wall-clock budget per factorization, in milliseconds
    #[arg(long, global = true, value_name = "MS")]
    timeout_per_factor: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print P_n, P_n mod 9 and the admissible residues of x mod 3
    Pvalue {
        #[arg(long)]
        n: u32,
    },
    /// Divisor-method search for P_n = x^3 + y^3 + z^3
    Search(SearchArgs),
    /// All integer solutions of P_n = x^3 + y^3 for a range of n
    Twocubes {
        #[arg(long, default_value_t = 1)]
        min_n: u32,
        #[arg(long, default_value_t = 40)]
        max_n: u32,
    },
    /// Closed-form three-cube representations of P_n
    Identity {
        #[arg(long)]
        n: u32,
        /// Only this family (e.g. p3m1, p6m2, p6m1-sq, p6m1-21, p6m5-a, p6m5-b)
        #[arg(long)]
        family: Option<String>,
    },
    /// The closed-form four-cube representation of P_n
    Fourcubes {
        #[arg(long)]
        n: u32,
    },
    /// Check the embedded reference tables or the congruence facts
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Nonneg)]
    mode: ModeArg,
    #[arg(long)]
    x_min: Option<u64>,
    #[arg(long)]
    x_max: Option<u64>,
    /// Search the scaled target 2^(a+3k)(2^n - 1) and lift the solutions
    #[arg(long, conflicts_with_all = ["x_min", "x_max"])]
    k: Option<u32>,
    /// Append completed chunks here and resume from it
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
    /// Also print the mixed-sign triples met in non-negative mode
    #[arg(long)]
    byproducts: bool,
    /// Disable the mod-9 residue filter
    #[arg(long)]
    no_filter: bool,
    #[arg(long, default_value_t = 4096)]
    chunk_size: u64,
    /// Seconds between progress lines on stderr; 0 disables them
    #[arg(long, default_value_t = 5.0)]
    progress_interval: f64,
    #[arg(long, hide = true)]
    stop_after_chunks: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Nonneg,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Reps,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(
        long,
        value_enum,
        required_unless_present = "facts",
        conflicts_with = "facts"
    )]
    table: Option<TableArg>,
    /// Congruence and not-a-cube facts for every n <= --max-n
    #[arg(long)]
    facts: bool,
    /// Table 1 only: also re-derive the rows by live search
    #[arg(long)]
    live: bool,
    #[arg(long)]
    max_n: Option<u32>,
}

/// Error carrying the process exit code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidIndex(_) | Error::InvalidConfig(_) | Error::InvalidScale { .. } => {
                EXIT_USAGE
            }
            Error::UnknownIdentity(_) => EXIT_USAGE,
            Error::Interrupted { .. } => EXIT_INCOMPLETE,
            _ => EXIT_FAILURE,
        };
        Exit(code, e.to_string())
    }
}

impl From<io::Error> for Exit {
    fn from(e: io::Error) -> Self {
        // A closed pipe (`| head`) is not an error worth reporting.
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Exit(0, String::new());
        }
        Exit(EXIT_FAILURE, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

fn index(n: u32) -> Result<PIndex, Exit> {
    PIndex::new(n).map_err(|_| usage(format!("n must be at least 1, got {n}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            if !msg.is_empty() {
                eprintln!("cubesum: {msg}");
            }
            ExitCode::from(code)
        }
    }
}

impl Cli {
    fn format(&self) -> Format {
        self.format.unwrap_or(if io::stdout().is_terminal() {
            Format::Table
        } else {
            Format::Json
        })
    }

    fn factor_options(&self) -> FactorOptions {
        FactorOptions {
            seed: match (self.fresh_seed, self.seed) {
                (true, _) => Seed::Fresh,
                (false, s) => Seed::FromInput(s.unwrap_or(0)),
            },
            timeout: self.timeout_per_factor.map(Duration::from_millis),
            ..Default::default()
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Exit> {
    if cli.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    match &cli.command {
        Command::Pvalue { n } => pvalue(cli, index(*n)?),
        Command::Search(args) => search_cmd(cli, args),
        Command::Twocubes { min_n, max_n } => twocubes(cli, *min_n, *max_n),
        Command::Identity { n, family } => identity(cli, index(*n)?, family.as_deref()),
        Command::Fourcubes { n } => {
            let n = index(*n)?;
            if n.get() < 2 {
                return Err(usage("fourcubes needs n >= 2"));
            }
            emit(cli, &[four_cube_rep(n)?], None, true)
        }
        Command::Verify(args) => verify(cli, args),
    }
}

fn emit(
    cli: &Cli,
    reps: &[Representation],
    mode: Option<Mode>,
    complete: bool,
) -> Result<u8, Exit> {
    let records: Vec<OutputRecord> = reps
        .iter()
        .map(|r| {
            if !r.verify() {
                return Err(Exit(EXIT_FAILURE, format!("{r} failed re-verification")));
            }
            Ok(OutputRecord::from_rep(r, mode, complete))
        })
        .collect::<Result<_, _>>()?;
    let mut out = io::stdout().lock();
    write_records(&mut out, cli.format(), &records)?;
    out.flush()?;
    Ok(0)
}

#[derive(serde::Serialize)]
struct PValue {
    n: u32,
    p: String,
    mod9: u32,
    x_mod3: Vec<u32>,
}

fn pvalue(cli: &Cli, n: PIndex) -> Result<u8, Exit> {
    let filter = x_residue_filter(n);
    let v = PValue {
        n: n.get(),
        p: p_value(n).to_string(),
        mod9: p_mod9(n),
        x_mod3: filter.allowed.clone(),
    };
    let mut out = io::stdout().lock();
    match cli.format() {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&v).map_err(io::Error::other)?
        )?,
        Format::Csv => {
            writeln!(out, "n,p,mod9,x_mod3")?;
            let allowed: Vec<String> = v.x_mod3.iter().map(u32::to_string).collect();
            writeln!(out, "{},{},{},{}", v.n, v.p, v.mod9, allowed.join(" "))?;
        }
        Format::Table => {
            writeln!(out, "P_{} = {}", v.n, v.p)?;
            writeln!(out, "P_{} mod 9 = {}", v.n, v.mod9)?;
            writeln!(out, "x mod 3 in {filter}")?;
        }
    }
    Ok(0)
}

fn search_cmd(cli: &Cli, a: &SearchArgs) -> Result<u8, Exit> {
    let n = index(a.n)?;
    if a.chunk_size == 0 {
        return Err(usage("--chunk-size must be positive"));
    }
    let mode = match a.mode {
        ModeArg::Nonneg => Mode::Nonneg,
        ModeArg::Mixed => Mode::Mixed,
    };
    let cfg = SearchConfig {
        mode,
        x_min: a.x_min,
        x_max: a.x_max,
        scale_k: a.k,
        residue_filter: !a.no_filter,
        shards: cli.jobs,
        chunk_size: a.chunk_size,
        checkpoint_path: a.checkpoint.clone(),
        factor: cli.factor_options(),
        stop_after_chunks: a.stop_after_chunks,
        ..Default::default()
    };

    let started = Instant::now();
    let interval =
        (a.progress_interval > 0.0).then(|| Duration::from_secs_f64(a.progress_interval));
    let last = Mutex::new(Instant::now());
    let observer = |p: &Progress| {
        let Some(iv) = interval else { return };
        let mut last = last.lock().expect("progress lock");
        if last.elapsed() >= iv || p.chunks_done == p.chunks_total {
            *last = Instant::now();
            eprintln!(
                "[{:>7.1}s] chunks {}/{}  triples {}",
                started.elapsed().as_secs_f64(),
                p.chunks_done,
                p.chunks_total,
                p.found
            );
        }
    };

    let set = match search_observed(n, &cfg, &observer) {
        Ok(s) => s,
        Err(Error::Interrupted { completed, total }) => {
            eprintln!(
                "cubesum: interrupted after {completed} of {total} chunks; rerun with the same --checkpoint to resume"
            );
            return Ok(EXIT_INCOMPLETE);
        }
        Err(e) => return Err(e.into()),
    };

    let mut reps = set.reps.clone();
    if a.byproducts {
        reps.extend(set.byproducts.iter().cloned());
    }
    emit(cli, &reps, Some(mode), set.complete)?;

    let s = set.stats;
    eprintln!(
        "n={} mode={}{} x=[{}, {}] solutions={} byproducts={} scanned={} filtered={} factored={} timeouts={} complete={} elapsed={:.2}s",
        n,
        mode.as_str(),
        set.scale_k.map(|k| format!(" k={k}")).unwrap_or_default(),
        set.x_min,
        set.x_max,
        set.reps.len(),
        set.byproducts.len(),
        s.x_scanned,
        s.x_filtered,
        s.x_factored,
        s.factor_timeouts,
        set.complete,
        started.elapsed().as_secs_f64()
    );
    if !set.complete {
        eprintln!(
            "cubesum: factoring timed out for x in {:?}",
            set.incomplete_x
        );
        return Ok(EXIT_INCOMPLETE);
    }
    Ok(0)
}

fn twocubes(cli: &Cli, min_n: u32, max_n: u32) -> Result<u8, Exit> {
    index(min_n)?;
    if max_n < min_n {
        return Err(usage("--max-n is below --min-n"));
    }
    let mut opts = cli.factor_options();
    if opts.timeout.is_none() {
        opts.timeout = Some(cubesum_core::twocubes::DEFAULT_BUDGET);
    }
    let fz = Factorizer::new(opts);
    let mut reps = Vec::new();
    let mut uncertified = Vec::new();
    for n in min_n..=max_n {
        match search_two_cubes_with(index(n)?, &fz)? {
            TwoCubeOutcome::Certified(r) => reps.extend(r),
            TwoCubeOutcome::NotCertified { reason } => {
                eprintln!("cubesum: n = {n} not certified: {reason}");
                uncertified.push(n);
            }
        }
    }
    emit(cli, &reps, None, uncertified.is_empty())?;
    Ok(if uncertified.is_empty() {
        0
    } else {
        EXIT_INCOMPLETE
    })
}

fn identity(cli: &Cli, n: PIndex, family: Option<&str>) -> Result<u8, Exit> {
    let mut reps = three_cube_identity(n)?;
    if let Some(f) = family {
        const FAMILIES: [&str; 6] = ["p3m1", "p6m2", "p6m1-sq", "p6m1-21", "p6m5-a", "p6m5-b"];
        if !FAMILIES.contains(&f) {
            return Err(Error::UnknownIdentity(f.to_string()).into());
        }
        let want = format!("identity:{f}");
        reps.retain(|r| r.provenance().to_string() == want);
    }
    if reps.is_empty() {
        eprintln!("cubesum: no identity family applies to n = {n}");
    }
    emit(cli, &reps, None, true)
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<u8, Exit> {
    if a.facts {
        let max = index(a.max_n.unwrap_or(10_000))?;
        let report = sanity_checks(max)?;
        let mut out = io::stdout().lock();
        match cli.format() {
            Format::Json => writeln!(
                out,
                "{}",
                serde_json::to_string(&report).map_err(io::Error::other)?
            )?,
            _ => {
                writeln!(out, "checked n = 1..={}", report.n_max)?;
                writeln!(out, "P_n not a cube (n >= 2):       {}", report.not_cube)?;
                writeln!(
                    out,
                    "P_n / 2 not a cube (n >= 2):   {}",
                    report.half_not_cube
                )?;
                writeln!(
                    out,
                    "P_n mod 9 not in {{4, 5}}:       {}",
                    report.mod9_admissible
                )?;
                writeln!(
                    out,
                    "P_2m = 0 (mod 6):              {}",
                    report.even_index_mod6
                )?;
                writeln!(
                    out,
                    "P_2m+1 = 10 (mod 18) (n >= 3): {}",
                    report.odd_index_mod18
                )?;
            }
        }
        return Ok(0);
    }
    let table = a.table.expect("clap requires --table without --facts");
    if a.live && table != TableArg::One {
        return Err(usage("--live applies to --table 1 only"));
    }
    let mut checks = match table {
        TableArg::One => tables::verify_nonneg_rows()?,
        TableArg::Two => tables::verify_mixed_rows()?,
        TableArg::Reps => tables::verify_special_rows()?,
        TableArg::Three => return table3(cli),
    };
    if let Some(max) = a.max_n {
        checks.retain(|c| c.n <= max);
    }
    if a.live {
        checks.extend(live_table1(cli, a.max_n.unwrap_or(19))?);
    }
    write_checks(cli, &checks)?;
    let failed: Vec<&RowCheck> = checks.iter().filter(|c| !c.ok).collect();
    for c in &failed {
        eprintln!(
            "cubesum: table {} row n = {} ({}): {}",
            c.table,
            c.n,
            c.terms.join(", "),
            c.detail
        );
    }
    eprintln!(
        "{} of {} rows pass",
        checks.len() - failed.len(),
        checks.len()
    );
    Ok(if failed.is_empty() { 0 } else { EXIT_FAILURE })
}

/// Re-derives the non-negative table by search, one check per index.
fn live_table1(cli: &Cli, max_n: u32) -> Result<Vec<RowCheck>, Exit> {
    let mut want: BTreeMap<u32, BTreeSet<Vec<String>>> = BTreeMap::new();
    for r in tables::nonneg_rows()? {
        let mut t = r.terms.to_vec();
        t.sort();
        want.entry(r.n)
            .or_default()
            .insert(t.iter().map(ToString::to_string).collect());
    }
    let cfg = SearchConfig {
        shards: cli.jobs,
        factor: cli.factor_options(),
        ..Default::default()
    };
    let mut out = Vec::new();
    // The table starts at n = 2 (P_1 = 1 is trivial).
    for n in 2..=max_n {
        let set = cubesum_core::search(index(n)?, &cfg)?;
        let got: BTreeSet<Vec<String>> = set
            .reps
            .iter()
            .map(|r| r.terms().iter().map(ToString::to_string).collect())
            .collect();
        let expected = want.get(&n).cloned().unwrap_or_default();
        let ok = set.complete && got == expected;
        let detail = if ok {
            String::new()
        } else if !set.complete {
            "search incomplete".to_string()
        } else {
            format!(
                "search found {} triples, table has {}",
                got.len(),
                expected.len()
            )
        };
        out.push(RowCheck {
            table: "1-live".into(),
            n,
            terms: vec![format!("{} triples", got.len())],
            ok,
            detail,
        });
    }
    Ok(out)
}

fn write_checks(cli: &Cli, checks: &[RowCheck]) -> Result<(), Exit> {
    let mut out = io::stdout().lock();
    match cli.format() {
        Format::Json => {
            for c in checks {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(c).map_err(io::Error::other)?
                )?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["table", "n", "terms", "ok", "detail"])
                .map_err(io::Error::other)?;
            for c in checks {
                w.write_record([
                    c.table.as_str(),
                    &c.n.to_string(),
                    &c.terms.join(" "),
                    if c.ok { "pass" } else { "FAIL" },
                    &c.detail,
                ])
                .map_err(io::Error::other)?;
            }
            w.flush()?;
        }
        Format::Table => {
            let rows: Vec<[String; 4]> = checks
                .iter()
                .map(|c| {
                    [
                        c.table.clone(),
                        c.n.to_string(),
                        c.terms.join(", "),
                        if c.ok {
                            "pass".into()
                        } else {
                            format!("FAIL {}", c.detail)
                        },
                    ]
                })
                .collect();
            write_table(&mut out, &["table", "n", "terms", "status"], &rows)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(serde::Serialize)]
struct CountRow {
    n: u32,
    reported: u32,
    nonneg_rows: usize,
}

/// The reported solution counts next to the number of non-negative rows.
/// Informational: the counting rules behind the reported numbers are not
/// known, so nothing is asserted.
fn table3(cli: &Cli) -> Result<u8, Exit> {
    let nonneg = tables::nonneg_rows()?;
    let rows: Vec<CountRow> = tables::reported_counts()?
        .into_iter()
        .map(|(n, reported)| CountRow {
            n,
            reported,
            nonneg_rows: nonneg.iter().filter(|r| r.n == n).count(),
        })
        .collect();
    let mut out = io::stdout().lock();
    match cli.format() {
        Format::Json => {
            for r in &rows {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(r).map_err(io::Error::other)?
                )?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,reported,nonneg_rows")?;
            for r in &rows {
                writeln!(out, "{},{},{}", r.n, r.reported, r.nonneg_rows)?;
            }
        }
        Format::Table => {
            let cells: Vec<[String; 3]> = rows
                .iter()
                .map(|r| {
                    [
                        r.n.to_string(),
                        r.reported.to_string(),
                        r.nonneg_rows.to_string(),
                    ]
                })
                .collect();
            write_table(&mut out, &["n", "reported", "non-negative rows"], &cells)?;
        }
    }
    eprintln!("counts are informational; their counting rules are not specified");
    Ok(0)
}
