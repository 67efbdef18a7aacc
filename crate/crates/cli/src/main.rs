use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Mutex;

use casoratia::arith::parse_rational;
use casoratia::casoratian::IndexSet;
use casoratia::families::{eigen_eta, pseudo_eta, sample_params_with_base, FamilyName, FamilySpec};
use casoratia::report::{serialize_report, tsv_header, Format};
use casoratia::verify::{run_batch, run_batch_with, BatchConfig, Job, Options, Verdict, VerificationReport};
use casoratia::{EtaKind, QBase};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact verification of Casoratian identities for the Askey-scheme
/// families with imaginary shifts.
#[derive(Parser, Debug)]
#[command(name = "casoratia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every applicable check for one index set.
    Verify(RunArgs),
    /// Run every applicable check over randomly drawn index sets.
    Fuzz {
        #[command(flatten)]
        run: RunArgs,
        /// Largest index a drawn set may contain.
        #[arg(long, default_value_t = 5)]
        max_index: usize,
    },
    /// List the families with their parameter counts.
    ListFamilies,
    /// Print the η-coefficients of one eigenpolynomial.
    ShowPoly {
        #[arg(long)]
        family: FamilyName,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fourth root of q for the multiplicative families.
        #[arg(long, value_parser = parse_sbase)]
        sbase: Option<BigRational>,
        /// Show the pseudo virtual polynomial ξ_n instead.
        #[arg(long)]
        pseudo: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// A family name, or `all`.
    #[arg(long, default_value = "all")]
    family: FamilySel,
    /// Index set D as comma-separated integers.
    #[arg(long, default_value = "1,2")]
    dset: IndexSet,
    /// The integer N of the dual set, or `auto` for max(D).
    #[arg(long = "N", default_value = "auto")]
    n_top: NTop,
    /// Added to N, to exercise larger choices of N.
    #[arg(long = "N-extra", default_value_t = 0)]
    n_extra: usize,
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    #[arg(long, default_value_t = 3)]
    vmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent parameter draws per check.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    draws: u64,
    /// Fourth root s of q (q = s⁴), a fraction in (0, 1).
    #[arg(long, value_parser = parse_sbase)]
    sbase: Option<BigRational>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Emit reports in job order rather than completion order.
    #[arg(long)]
    stable_order: bool,
    /// Record wall-clock time per report (breaks byte-for-byte
    /// reproducibility).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Debug)]
enum FamilySel {
    All,
    One(FamilyName),
}

impl FromStr for FamilySel {
    type Err = casoratia::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(FamilySel::All)
        } else {
            s.parse().map(FamilySel::One)
        }
    }
}

impl FamilySel {
    fn names(&self) -> Vec<FamilyName> {
        match self {
            FamilySel::All => FamilyName::ALL.to_vec(),
            FamilySel::One(f) => vec![*f],
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum NTop {
    Auto,
    Fixed(usize),
}

impl FromStr for NTop {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(NTop::Auto);
        }
        s.parse()
            .map(NTop::Fixed)
            .map_err(|_| format!("expected an integer or `auto`, got {s:?}"))
    }
}

fn parse_sbase(s: &str) -> Result<BigRational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    QBase::new(r.clone()).map_err(|e| e.to_string())?;
    Ok(r)
}

/// Worst verdict seen; variants are ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Pass,
    Degenerate,
    Fail,
}

impl Status {
    fn of(v: Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Degenerate => Status::Degenerate,
            Verdict::Fail => Status::Fail,
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Degenerate => 2,
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CASORATIA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("CASORATIA_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn batch_config(a: &RunArgs, dset: IndexSet, n_top: NTop) -> BatchConfig {
    BatchConfig {
        dset,
        n_top: match n_top {
            NTop::Auto => None,
            NTop::Fixed(n) => Some(n),
        },
        n_extra: a.n_extra,
        n_max: a.nmax,
        v_max: a.vmax,
    }
}

fn verify_jobs(a: &RunArgs) -> Result<Vec<Job>, String> {
    batch_config(a, a.dset.clone(), a.n_top)
        .jobs(&a.family.names(), a.seed, a.draws)
        .map_err(|e| e.to_string())
}

/// One random `D` (1 to 3 indices up to `max_index`) and `N` per draw.
fn fuzz_jobs(a: &RunArgs, max_index: usize) -> Result<Vec<Job>, String> {
    let mut jobs = Vec::new();
    for k in 0..a.draws {
        let seed = a.seed.wrapping_add(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = rng.gen_range(1..=3.min(max_index + 1));
        let mut pool: Vec<usize> = (0..=max_index).collect();
        let mut elems = Vec::new();
        for _ in 0..size {
            elems.push(pool.swap_remove(rng.gen_range(0..pool.len())));
        }
        let dset = IndexSet::new(elems).map_err(|e| e.to_string())?;
        let n_top = NTop::Fixed(dset.largest().unwrap_or(0) + rng.gen_range(0..=2));
        let cfg = batch_config(a, dset, n_top);
        jobs.extend(cfg.jobs(&a.family.names(), seed, 1).map_err(|e| e.to_string())?);
    }
    Ok(jobs)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write + Send>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run_jobs(a: &RunArgs, jobs: &[Job]) -> Result<Status, String> {
    let opts = Options {
        mutation: None,
        timings: a.timings,
    };
    let sbase = a.sbase.as_ref();
    let mut out = open_out(&a.out)?;
    if a.format == Format::Tsv {
        writeln!(out, "{}", tsv_header()).map_err(|e| e.to_string())?;
    }
    let emit = |out: &mut dyn Write, r: &VerificationReport| -> Result<Status, String> {
        writeln!(out, "{}", serialize_report(r, a.format)).map_err(|e| e.to_string())?;
        Ok(Status::of(r.verdict))
    };
    let mut status = Status::Pass;
    if a.stable_order {
        for r in run_batch(&opts, jobs, sbase) {
            let r = r.map_err(|e| e.to_string())?;
            status = status.max(emit(&mut out, &r)?);
        }
    } else {
        let shared = Mutex::new((out, Ok(Status::Pass)));
        run_batch_with(&opts, jobs, sbase, |_, r| {
            let mut guard = shared.lock().expect("output lock");
            let (out, acc) = &mut *guard;
            let Ok(cur) = acc.clone() else { return };
            *acc = r
                .map_err(|e| e.to_string())
                .and_then(|r| emit(out.as_mut(), &r))
                .map(|s| s.max(cur));
        });
        let (o, acc) = shared.into_inner().expect("output lock");
        out = o;
        status = acc?;
    }
    out.flush().map_err(|e| e.to_string())?;
    Ok(status)
}

fn eta_name(k: EtaKind) -> &'static str {
    match k {
        EtaKind::XSquared => "x^2",
        EtaKind::X => "x",
        EtaKind::CosX => "cos x",
    }
}

fn show_poly(
    family: FamilyName,
    n: usize,
    seed: u64,
    sbase: Option<&BigRational>,
    pseudo: bool,
) -> Result<(), String> {
    let spec = FamilySpec::get(family);
    let p = sample_params_with_base(spec, seed, sbase).map_err(|e| e.to_string())?;
    let poly = if pseudo {
        pseudo_eta(spec, n, &p)
    } else {
        eigen_eta(spec, n, &p)
    }
    .map_err(|e| e.to_string())?;
    let values: Vec<String> = p.values.iter().map(|v| v.to_string()).collect();
    println!("family: {family}");
    println!("parameters: [{}]", values.join(", "));
    if let Some(qb) = &p.qbase {
        println!("s: {}", casoratia::arith::fmt_rational(qb.s()));
    }
    println!("eta: {}", eta_name(spec.eta_kind));
    println!("{}_{n}: {poly}", if pseudo { "xi" } else { "P" });
    for (k, c) in poly.coeffs().iter().enumerate() {
        println!("eta^{k}\t{c}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Status, String> {
    configure_threads()?;
    match cli.command {
        Command::Verify(a) => {
            let jobs = verify_jobs(&a)?;
            run_jobs(&a, &jobs)
        }
        Command::Fuzz { run, max_index } => {
            let jobs = fuzz_jobs(&run, max_index)?;
            run_jobs(&run, &jobs)
        }
        Command::ListFamilies => {
            for spec in FamilySpec::all() {
                println!("{}\t{}", spec.name, spec.n_params);
            }
            Ok(Status::Pass)
        }
        Command::ShowPoly {
            family,
            n,
            seed,
            sbase,
            pseudo,
        } => show_poly(family, n, seed, sbase.as_ref(), pseudo).map(|_| Status::Pass),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version go to stdout with status 0; usage errors are
            // configuration errors
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_status_wins() {
        let worst = [Status::Degenerate, Status::Pass, Status::Fail]
            .into_iter()
            .max()
            .unwrap();
        assert_eq!(worst, Status::Fail);
        assert_eq!(Status::Pass.max(Status::Degenerate).exit_code(), 2);
        assert_eq!(Status::Fail.exit_code(), 1);
    }

    #[test]
    fn n_top_parses() {
        assert!(matches!("auto".parse::<NTop>(), Ok(NTop::Auto)));
        assert!(matches!("4".parse::<NTop>(), Ok(NTop::Fixed(4))));
        assert!("-1".parse::<NTop>().is_err());
    }

    #[test]
    fn fuzz_draws_valid_sets() {
        let a = Cli::try_parse_from(["casoratia", "fuzz", "--family", "W", "--draws", "20"]).unwrap();
        let Command::Fuzz { run, max_index } = a.command else { unreachable!() };
        let jobs = fuzz_jobs(&run, max_index).unwrap();
        assert!(!jobs.is_empty());
        assert_eq!(jobs.len(), fuzz_jobs(&run, max_index).unwrap().len());
    }
}
