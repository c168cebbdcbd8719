//! Batch front end for the kick-back simulator.
//!
//! Every command builds one oracle, hands it to the matching solver in
//! `gpk-core`, and prints either a text report or the stable JSON shape.
//! Nothing here decides anything; the library does.

use std::fs;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use gpk_core::{
    classical_bv_solver, compact_final_transform, compact_gpk_run, detect_dropped_bit_report,
    gpk_run, parse_truth_table, random_affine_instance, random_promise_instance,
    solve_generalized_bv, solve_generalized_dj, Backend, BitString, BooleanFunction, BvReport,
    DjReport, DropBitReport, Error, GpkRunRecord, PromiseKind, StateVector,
};

const AFTER_HELP: &str = "\
oracle specs (--oracle, or --gen for the seeded random kinds):
  constant       random constant function (needs --n and --m)
  balanced       random balanced function (needs --n and --m)
  affine         random affine function (needs --n and --m)
  bitdrop:<j>    copies the input with bit j removed; m is fixed at n-1
  table:<path>   truth-table file: a `n m` header line, then 2^n rows,
                 row k giving f(k) with the highest output bit leftmost

bit strings print highest index leftmost: 010 is the string whose bit 1
is set. Markers and basis rows use the same convention.

exit codes:
  0  success
  2  usage error
  3  oracle loading, shape, or promise error";

#[derive(Parser)]
#[command(name = "gpk", version, about = "Phase kick-back batch simulator", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide constant versus balanced with one run per marker.
    Dj(SolveArgs),
    /// Recover (r, r0) from a single-output f(x) = r0 xor r·x.
    Bv(OracleArgs),
    /// Reconstruct the full affine map f(x) = r0 xor R·x.
    Gbv(SolveArgs),
    /// Execute one run with an explicit marker and report the outcome.
    Gpk(GpkArgs),
    /// Identify which input bit an (n-1)-output oracle discards.
    Dropbit(OracleArgs),
    /// Walk the three-bit worked example through every pipeline step.
    Demo,
}

#[derive(Args)]
struct OracleArgs {
    /// First-register width in bits.
    #[arg(long)]
    n: Option<usize>,
    /// Second-register width in bits.
    #[arg(long)]
    m: Option<usize>,
    /// Oracle source; the grammar is listed under --help.
    #[arg(long, value_name = "SPEC")]
    oracle: Option<String>,
    /// Shorthand for --oracle, limited to the random generators.
    #[arg(long, value_name = "KIND", conflicts_with = "oracle",
          value_parser = ["constant", "balanced", "affine"])]
    gen: Option<String>,
    /// Seed for instance generation and measurement sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simulation engine.
    #[arg(long, default_value = "auto", value_parser = ["full", "compact", "auto"])]
    backend: String,
    /// Report format.
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    output: String,
    /// Stamp JSON reports with the current Unix time.
    #[arg(long)]
    timestamp: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: OracleArgs,
    /// Marker rows replacing the canonical basis, comma separated.
    #[arg(long, value_name = "ROWS", value_delimiter = ',')]
    basis: Vec<String>,
}

#[derive(Args)]
struct GpkArgs {
    #[command(flatten)]
    common: OracleArgs,
    /// Marker string y for the run.
    #[arg(long)]
    marker: String,
}

/// A reportable failure: message for standard error plus the exit code.
struct Failure {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            message: err.to_string(),
            code: 3,
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Dj(args) => run_dj(args),
        Command::Bv(args) => run_bv(args),
        Command::Gbv(args) => run_gbv(args),
        Command::Gpk(args) => run_gpk(args),
        Command::Dropbit(args) => run_dropbit(args),
        Command::Demo => run_demo(),
    }
}

enum OracleSpec {
    Constant,
    Balanced,
    Affine,
    BitDrop(usize),
    Table(String),
}

fn parse_oracle_spec(raw: &str) -> Result<OracleSpec, Failure> {
    if let Some(rest) = raw.strip_prefix("bitdrop:") {
        let j = rest
            .parse()
            .map_err(|_| usage(format!("bad bit index {rest:?} in --oracle {raw:?}")))?;
        return Ok(OracleSpec::BitDrop(j));
    }
    if let Some(rest) = raw.strip_prefix("table:") {
        if rest.is_empty() {
            return Err(usage("empty path in --oracle table:<path>"));
        }
        return Ok(OracleSpec::Table(rest.to_string()));
    }
    match raw {
        "constant" => Ok(OracleSpec::Constant),
        "balanced" => Ok(OracleSpec::Balanced),
        "affine" => Ok(OracleSpec::Affine),
        other => Err(usage(format!(
            "unknown oracle spec {other:?}; expected constant | balanced | affine | \
             bitdrop:<j> | table:<path>"
        ))),
    }
}

fn build_oracle(args: &OracleArgs) -> Result<BooleanFunction, Failure> {
    let raw = match (&args.oracle, &args.gen) {
        (Some(spec), _) => spec.as_str(),
        (None, Some(kind)) => kind.as_str(),
        (None, None) => {
            return Err(usage(
                "an oracle is required: pass --oracle SPEC or --gen KIND",
            ))
        }
    };
    let spec = parse_oracle_spec(raw)?;

    let need = |value: Option<usize>, flag: &str| {
        value.ok_or_else(|| usage(format!("--{flag} is required with --oracle {raw}")))
    };
    match spec {
        OracleSpec::Constant => {
            let f = random_promise_instance(need(args.n, "n")?, need(args.m, "m")?,
                PromiseKind::Constant, args.seed)?;
            Ok(f)
        }
        OracleSpec::Balanced => {
            let f = random_promise_instance(need(args.n, "n")?, need(args.m, "m")?,
                PromiseKind::Balanced, args.seed)?;
            Ok(f)
        }
        OracleSpec::Affine => {
            Ok(random_affine_instance(need(args.n, "n")?, need(args.m, "m")?, args.seed)?)
        }
        OracleSpec::BitDrop(j) => {
            let n = need(args.n, "n")?;
            if let Some(m) = args.m {
                if n == 0 || m != n - 1 {
                    return Err(usage(format!(
                        "--oracle bitdrop:{j} fixes m = n-1; got --n {n} --m {m}"
                    )));
                }
            }
            Ok(BooleanFunction::bit_drop(n, j)?)
        }
        OracleSpec::Table(path) => {
            let text = fs::read_to_string(&path).map_err(|err| Failure {
                message: format!("cannot read {path}: {err}"),
                code: 3,
            })?;
            let f = parse_truth_table(&text)?;
            for (flag, given, actual) in [("n", args.n, f.n()), ("m", args.m, f.m())] {
                if let Some(given) = given {
                    if given != actual {
                        return Err(usage(format!(
                            "--{flag} {given} disagrees with {path}, which has {flag} = {actual}"
                        )));
                    }
                }
            }
            Ok(f)
        }
    }
}

fn resolve_backend(choice: &str, f: &BooleanFunction) -> Result<Backend, Failure> {
    if choice == "auto" {
        return Ok(Backend::auto(f.n(), f.m()));
    }
    Ok(choice.parse::<Backend>()?)
}

fn parse_basis(rows: &[String], m: usize) -> Result<Option<Vec<BitString>>, Failure> {
    if rows.is_empty() {
        return Ok(None);
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        let bits: BitString = row
            .parse()
            .map_err(|err: Error| usage(format!("--basis: {err}")))?;
        if bits.len() != m {
            return Err(usage(format!(
                "--basis: row {row} has {} bits, the oracle has m = {m}",
                bits.len()
            )));
        }
        parsed.push(bits);
    }
    Ok(Some(parsed))
}

fn stamp(enabled: bool) -> Option<u64> {
    enabled.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|elapsed| elapsed.as_secs())
            .unwrap_or(0)
    })
}

fn run_dj(args: SolveArgs) -> Result<(), Failure> {
    let f = build_oracle(&args.common)?;
    let backend = resolve_backend(&args.common.backend, &f)?;
    let markers = parse_basis(&args.basis, f.m())?;
    let report = solve_generalized_dj(&f, markers.as_deref(), backend, args.common.seed)?;
    if args.common.output == "json" {
        println!("{}", report.to_json(stamp(args.common.timestamp)));
    } else {
        print_dj_text(&f, &report);
    }
    Ok(())
}

fn print_dj_text(f: &BooleanFunction, report: &DjReport) {
    println!("problem: dj");
    println!("n: {}, m: {}", f.n(), f.m());
    println!("verdict: {}", report.verdict);
    println!("lambda: {}", report.lambda);
    let values: Vec<String> = report.values.iter().map(BitString::to_string).collect();
    println!("values: {}", values.join(" "));
    print_runs(&report.runs);
    print_counts(report.total_quantum_calls, report.classical_calls);
    println!(
        "classical worst case: 2^(n-1)+1 = {} calls",
        (1u64 << (f.n() - 1)) + 1
    );
}

fn run_bv(args: OracleArgs) -> Result<(), Failure> {
    let f = build_oracle(&args)?;
    if f.m() != 1 {
        return Err(Error::WrongShape(format!(
            "bv needs a single-output oracle, this one has m = {}",
            f.m()
        ))
        .into());
    }
    let backend = resolve_backend(&args.backend, &f)?;
    let report = solve_generalized_bv(&f, None, backend, args.seed)?;
    if args.output == "json" {
        println!("{}", report.to_json("bv", stamp(args.timestamp)));
    } else {
        println!("problem: bv");
        println!("n: {}, m: 1", f.n());
        println!("r: {}", report.matrix.row(0));
        println!("r0: {}", report.r0.bit(0));
        print_runs(&report.runs);
        print_counts(report.total_quantum_calls, report.classical_calls);
        print_bv_baseline(&f)?;
    }
    Ok(())
}

fn run_gbv(args: SolveArgs) -> Result<(), Failure> {
    let f = build_oracle(&args.common)?;
    let backend = resolve_backend(&args.common.backend, &f)?;
    let markers = parse_basis(&args.basis, f.m())?;
    let report = solve_generalized_bv(&f, markers.as_deref(), backend, args.common.seed)?;
    if args.common.output == "json" {
        println!("{}", report.to_json("gbv", stamp(args.common.timestamp)));
    } else {
        print_gbv_text(&f, &report)?;
    }
    Ok(())
}

fn print_gbv_text(f: &BooleanFunction, report: &BvReport) -> Result<(), Failure> {
    println!("problem: gbv");
    println!("n: {}, m: {}", f.n(), f.m());
    print_matrix("matrix", &report.matrix);
    println!("r0: {}", report.r0);
    if let Some(basis) = &report.basis {
        print_matrix("basis", basis);
    }
    if let Some(combination) = &report.combination {
        print_matrix("combination", combination);
    }
    print_runs(&report.runs);
    print_counts(report.total_quantum_calls, report.classical_calls);
    print_bv_baseline(f)
}

/// Runs the classical reconstruction on the same oracle so the report can
/// quote a measured call count next to the quantum one.
fn print_bv_baseline(f: &BooleanFunction) -> Result<(), Failure> {
    f.reset_counters();
    classical_bv_solver(f)?;
    println!(
        "classical route: n+1 = {} calls (measured {})",
        f.n() as u64 + 1,
        f.classical_calls()
    );
    Ok(())
}

fn run_gpk(args: GpkArgs) -> Result<(), Failure> {
    let f = build_oracle(&args.common)?;
    let marker: BitString = args
        .marker
        .parse()
        .map_err(|err: Error| usage(format!("--marker: {err}")))?;
    if marker.len() != f.m() {
        return Err(usage(format!(
            "--marker {} has {} bits, the oracle has m = {}",
            args.marker,
            marker.len(),
            f.m()
        )));
    }
    let backend = resolve_backend(&args.common.backend, &f)?;
    let record = gpk_run(&f, &marker, backend, args.common.seed)?;
    if args.common.output == "json" {
        println!("{}", record.to_json(stamp(args.common.timestamp)));
    } else {
        println!("problem: gpk");
        println!("n: {}, m: {}", f.n(), f.m());
        println!("marker: {}", record.marker);
        println!("outcome: {}", record.outcome);
        println!("probability: {:.9}", record.probability);
        println!("deterministic: {}", record.deterministic);
        println!("backend: {}", record.backend);
        println!("seed: {}", record.seed);
        print_counts(record.quantum_oracle_calls, f.classical_calls());
    }
    Ok(())
}

fn run_dropbit(args: OracleArgs) -> Result<(), Failure> {
    let f = build_oracle(&args)?;
    let report = detect_dropped_bit_report(&f, args.seed)?;
    if args.output == "json" {
        println!("{}", report.to_json(stamp(args.timestamp)));
    } else {
        print_dropbit_text(&f, &report);
    }
    Ok(())
}

fn print_dropbit_text(f: &BooleanFunction, report: &DropBitReport) {
    println!("problem: dropbit");
    println!("n: {}, m: {}", f.n(), f.m());
    println!("dropped bit: {}", report.dropped);
    print_runs(&report.runs);
    print_counts(report.total_quantum_calls, report.classical_calls);
}

fn print_runs(runs: &[GpkRunRecord]) {
    println!("runs:");
    for run in runs {
        println!(
            "  marker {} -> outcome {} (probability {:.9}, {}, backend {}, seed {})",
            run.marker,
            run.outcome,
            run.probability,
            if run.deterministic {
                "deterministic"
            } else {
                "sampled"
            },
            run.backend,
            run.seed,
        );
    }
}

fn print_counts(quantum: u64, classical: u64) {
    println!("quantum U_f calls: {quantum}, classical calls: {classical}");
}

fn print_matrix(label: &str, matrix: &gpk_core::F2Matrix) {
    println!("{label}:");
    for i in 0..matrix.rows() {
        println!("  {}", matrix.row(i));
    }
}

/// The fixed walkthrough: bit_drop(3, 0) with marker 01, full backend
/// stage by stage, then the compact backend for the same run.
fn run_demo() -> Result<(), Failure> {
    let f = BooleanFunction::bit_drop(3, 0)?;
    let marker: BitString = "01".parse()?;
    let (n, m) = (f.n(), f.m());

    println!("worked example: three input bits, the oracle drops bit 0, marker 01");
    println!();
    println!("full backend:");
    let zero_n = BitString::zero(n)?;
    let zero_m = BitString::zero(m)?;
    let mut state = StateVector::basis_state(n, m, &zero_n, &zero_m)?;
    println!("step 1: prepare |000>|00>");
    describe_state(&state, n, m)?;

    for qubit in 0..m {
        if marker.bit(qubit) == 1 {
            state.apply_x(qubit)?;
        }
    }
    println!("step 2: write the marker into the second register with X gates");
    describe_state(&state, n, m)?;

    state.apply_h_all(0..n + m)?;
    println!("step 3: Hadamard every qubit");
    describe_state(&state, n, m)?;

    state.apply_oracle(&f)?;
    println!("step 4: apply the oracle once");
    describe_state(&state, n, m)?;

    state.apply_h_all(m..n + m)?;
    println!("step 5: Hadamard the first register");
    describe_state(&state, n, m)?;

    let measured = state.measure_first_register(n, 0)?;
    println!("step 6: measure the first register");
    println!(
        "  outcome {} (probability {:.9})",
        measured.value, measured.probability
    );
    println!();

    println!("compact backend:");
    let pv = compact_gpk_run(&f, &marker)?;
    let signs: String = (0..1usize << n)
        .map(|x| if pv.sign(x) > 0 { '+' } else { '-' })
        .collect();
    println!("  kicked signs by input value 0..{}: {signs}", (1 << n) - 1);
    let amps = compact_final_transform(&pv);
    let best = (0..amps.len())
        .max_by(|&a, &b| amps[a].abs().total_cmp(&amps[b].abs()))
        .expect("the transform of a nonempty sign table is nonempty");
    println!(
        "  outcome {} (probability {:.9})",
        BitString::from_int(n, best as u64)?,
        amps[best] * amps[best]
    );
    println!();
    print_counts(f.quantum_calls(), f.classical_calls());
    println!("outcome {}", BitString::from_int(n, best as u64)?);
    Ok(())
}

fn describe_state(state: &StateVector, n: usize, m: usize) -> Result<(), Failure> {
    let amps = state.amps();
    let nonzero: Vec<usize> = (0..amps.len())
        .filter(|&i| amps[i].norm() > 1e-12)
        .collect();
    println!(
        "  nonzero amplitudes: {} of {} (each magnitude {:.9})",
        nonzero.len(),
        amps.len(),
        amps[nonzero[0]].norm()
    );
    if nonzero.len() <= 4 {
        let mut terms = Vec::with_capacity(nonzero.len());
        for &i in &nonzero {
            let first = BitString::from_int(n, (i >> m) as u64)?;
            let second = BitString::from_int(m, (i as u64) & ((1 << m) - 1))?;
            terms.push(format!("{:+.3} |{first}>|{second}>", amps[i].re));
        }
        println!("  {}", terms.join("  "));
    }
    Ok(())
}
