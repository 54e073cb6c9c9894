//! `sepdisc` command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 negative answer (pair not
//! distinguishable, states identical), 4 verification failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sepdisc::cone::{verify_overlap_identity, ConeMembership, MembershipMethod, SeeSawOptions};
use sepdisc::discrimination::{
    capacity_family, construct_measurement, decide_canonical, extend_to_full, min_copies, multicopy_measurement, verify_states,
    verify_states_with, DiscriminationReport, Measurement, DEFAULT_DIMENSION_CAP, VERDICT_TOL,
};
use sepdisc::json::{
    measurement_from_json, measurement_to_json, parse_state_str, product_state_to_json, to_canonical_string, Slot,
    StateSpec,
};
use sepdisc::states::{canonicalize, CanonicalPair, ProductMixedState, PureProductState};
use sepdisc::sweep::{sweep_grid, write_csv};
use sepdisc::{Error, Parallelism};

const ORIGIN: &str = r#"{"canonical": {"alpha1": 0, "alpha2": 0}}"#;

#[derive(Parser, Debug)]
#[command(name = "sepdisc", version, about = "Perfect discrimination of separable pure states with block-positive measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Pair {
    /// First state: a path or inline JSON. Defaults to |0>|0>.
    #[arg(long, default_value = ORIGIN)]
    state1: String,
    /// Second state: a path or inline JSON.
    #[arg(long)]
    state2: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide distinguishability and compare with unrestricted quantum theory.
    Decide {
        #[command(flatten)]
        pair: Pair,
    },
    /// Build a certified discriminating measurement and write it as JSON.
    Construct {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check a measurement file against a pair of states.
    Verify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        measurement: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Seed for the see-saw search on effects without a certificate.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Number of copies needed to make a pair distinguishable.
    Multicopy {
        #[command(flatten)]
        pair: Pair,
        /// Also build and verify the multicopy measurement.
        #[arg(long)]
        materialize: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Verify the d_A * d_B product basis family.
    Capacity {
        d_a: usize,
        d_b: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Tabulate the distinguishability region over the canonical parameters.
    Sweep {
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        /// Output CSV path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn input(err: impl Into<anyhow::Error>) -> Self {
        Self { code: 2, err: err.into() }
    }

    fn verification(err: impl Into<anyhow::Error>) -> Self {
        Self { code: 4, err: err.into() }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let res = match cli.command {
        Command::Decide { pair } => cmd_decide(&pair),
        Command::Construct { pair, out, tol } => cmd_construct(&pair, &out, tol),
        Command::Verify { pair, measurement, tol, seed } => cmd_verify(&pair, &measurement, tol, seed),
        Command::Multicopy { pair, materialize, tol } => cmd_multicopy(&pair, materialize, tol),
        Command::Capacity { d_a, d_b, tol } => cmd_capacity(d_a, d_b, tol),
        Command::Sweep { grid_step, out } => cmd_sweep(grid_step, out.as_deref()),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn emit(v: &Value) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(to_canonical_string(v).as_bytes());
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_owned())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}")).map_err(Failure::input)
    }
}

fn load_state(arg: &str, which: &str) -> Result<StateSpec, Failure> {
    parse_state_str(&read_arg(arg)?).with_context(|| format!("--{which}")).map_err(Failure::input)
}

fn load_specs(pair: &Pair) -> Result<(StateSpec, StateSpec), Failure> {
    Ok((load_state(&pair.state1, "state1")?, load_state(&pair.state2, "state2")?))
}

/// States plus their canonical form. A `canonical` second state against the
/// default first state is taken at its exact parameters.
struct PurePair {
    s1: PureProductState,
    s2: PureProductState,
    canon: CanonicalPair,
}

fn pure_pair(pair: &Pair) -> Result<PurePair, Failure> {
    let (a, b) = load_specs(pair)?;
    let exact = match (&a, &b) {
        (StateSpec::Canonical { alpha1: 0.0, alpha2: 0.0 }, StateSpec::Canonical { alpha1, alpha2 }) => {
            Some(CanonicalPair::from_alphas(*alpha1, *alpha2).map_err(Failure::input)?)
        }
        _ => None,
    };
    let (s1, s2) = product_pair(a, b)?;
    let canon = match exact {
        Some(c) => c,
        None => canonicalize(&s1, &s2).map_err(Failure::input)?,
    };
    Ok(PurePair { s1, s2, canon })
}

fn product_pair(a: StateSpec, b: StateSpec) -> Result<(PureProductState, PureProductState), Failure> {
    match (a.product().map_err(Failure::input)?, b.product().map_err(Failure::input)?) {
        (Some(s1), Some(s2)) => {
            if s1.dims() != s2.dims() {
                return Err(Failure::input(anyhow!("states have dimensions {:?} and {:?}", s1.dims(), s2.dims())));
            }
            Ok((s1, s2))
        }
        _ => Err(Failure::input(anyhow!("this command needs pure product states"))),
    }
}

fn verdict_json(pair: &CanonicalPair) -> (bool, Value) {
    let v = decide_canonical(pair);
    (
        v.sep_distinguishable,
        json!({
            "alpha1": pair.alpha1,
            "alpha2": pair.alpha2,
            "gamma": pair.gamma(),
            "sep_distinguishable": v.sep_distinguishable,
            "qt_distinguishable": v.qt_distinguishable,
            "lhs_sep": v.lhs_sep,
            "lhs_qt": v.lhs_qt,
        }),
    )
}

fn cmd_decide(pair: &Pair) -> CmdResult {
    let (sep, out) = verdict_json(&pure_pair(pair)?.canon);
    emit(&out);
    Ok(if sep { 0 } else { 3 })
}

fn membership_json(c: &ConeMembership) -> Value {
    json!({
        "member": c.member,
        "method": match c.method {
            MembershipMethod::Certificate => "certificate",
            MembershipMethod::SeeSaw => "see_saw",
        },
        "min_product_value": c.min_product_value,
        "converged": c.converged,
        "certificate_residual": c.certificate_residual,
        "witness": c.witness_vector.as_ref().map(product_state_to_json),
    })
}

fn report_json(r: &DiscriminationReport, tol: f64) -> Value {
    json!({
        "probability_matrix": r.probability_matrix,
        "completeness_residual": r.completeness_residual,
        "max_deviation": r.max_deviation,
        "cone_results": r.cone_results.iter().map(membership_json).collect::<Vec<_>>(),
        "tol": tol,
        "perfect": r.is_perfect(tol),
    })
}

fn cmd_construct(pair: &Pair, out: &Path, tol: f64) -> CmdResult {
    let PurePair { s1, s2, canon } = pure_pair(pair)?;
    let (sep, verdict) = verdict_json(&canon);
    if !sep {
        emit(&json!({ "verdict": verdict }));
        eprintln!("not distinguishable: gamma = {}", verdict["gamma"]);
        return Ok(3);
    }
    let m = construct_measurement(&canon)
        .and_then(|m| extend_to_full(&m, &canon))
        .map_err(Failure::input)?;
    let report = verify_states(&[&s1.density(), &s2.density()], &m, tol).map_err(Failure::verification)?;
    fs::write(out, to_canonical_string(&measurement_to_json(&m)))
        .with_context(|| format!("writing {}", out.display()))
        .map_err(Failure::input)?;
    let branch = if (canon.gamma() - 1.0).abs() <= VERDICT_TOL { "boundary" } else { "interior" };
    emit(&json!({
        "verdict": verdict,
        "branch": branch,
        "out": out.display().to_string(),
        "report": report_json(&report, tol),
    }));
    Ok(if report.is_perfect(tol) { 0 } else { 4 })
}

fn load_measurement(path: &Path) -> Result<Measurement, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::input)?;
    let v: Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::input)?;
    measurement_from_json(&v).map_err(|e| match e {
        // Well-formed but not a valid effect, e.g. a tampered entry.
        Error::NotHermitian { .. } => Failure::verification(anyhow!(e).context("measurement effect")),
        other => Failure::input(anyhow!(other).context("measurement file")),
    })
}

/// Parameters of the two-qubit family when the inputs are given in that form.
fn mixed_family(a: &StateSpec, b: &StateSpec) -> Result<Option<ProductMixedState>, Failure> {
    match (a, b) {
        (StateSpec::Mixed(x), StateSpec::Mixed(y)) if x != y => {
            Err(Failure::input(anyhow!("both mixed states must describe the same pair")))
        }
        (StateSpec::Mixed(x), _) | (_, StateSpec::Mixed(x)) => Ok(Some(*x)),
        (StateSpec::Canonical { alpha1: 0.0, alpha2: 0.0 }, StateSpec::Canonical { alpha1, alpha2 }) => {
            ProductMixedState::pure(*alpha1, *alpha2).map(Some).map_err(Failure::input)
        }
        _ => Ok(None),
    }
}

fn cmd_verify(pair: &Pair, path: &Path, tol: f64, seed: u64) -> CmdResult {
    let (a, b) = load_specs(pair)?;
    let rho1 = a.density(Slot::First).map_err(Failure::input)?;
    let rho2 = b.density(Slot::Second).map_err(Failure::input)?;
    let family = mixed_family(&a, &b)?;
    let m = load_measurement(path)?;
    let opts = SeeSawOptions { tol, seed, ..SeeSawOptions::default() };
    let report = verify_states_with(&[&rho1, &rho2], &m, &opts).map_err(|e| match e {
        Error::DimensionMismatch { .. } | Error::MissingBipartite | Error::BadBipartite { .. } => Failure::input(e),
        other => Failure::verification(other),
    })?;
    let mut out = report_json(&report, tol);
    if let Some(fam) = family.filter(|_| m.dim() == 4 && m.effects.len() == 2) {
        match verify_overlap_identity(&fam, &m, tol) {
            Ok(r) => out["overlap_identity_residual"] = json!(r),
            Err(e) => out["overlap_identity_skipped"] = json!(e.to_string()),
        }
    }
    emit(&out);
    Ok(if report.is_perfect(tol) { 0 } else { 4 })
}

fn cmd_multicopy(pair: &Pair, materialize: bool, tol: f64) -> CmdResult {
    let PurePair { s1, s2, .. } = pure_pair(pair)?;
    let f = s1.overlap(&s2);
    let n = match min_copies(f) {
        Ok(n) => n,
        Err(Error::IdenticalStates(_)) => {
            emit(&json!({ "overlap": f }));
            eprintln!("states are identical; no number of copies separates them");
            return Ok(3);
        }
        Err(e) => return Err(Failure::input(e)),
    };
    let mut out = json!({ "overlap": f, "copies_per_side": n, "total_copies": 2 * n });
    let mut code = 0;
    if materialize {
        let copies = u32::try_from(n).map_err(|_| Failure::input(anyhow!("copy count {n} too large")))?;
        match multicopy_measurement(&s1, &s2, copies, DEFAULT_DIMENSION_CAP) {
            Ok(mc) => {
                let report = verify_states(&[&mc.rho1, &mc.rho2], &mc.measurement, tol).map_err(Failure::verification)?;
                if !report.is_perfect(tol) {
                    code = 4;
                }
                out["materialized"] = json!({
                    "dim": mc.rho1.dim(),
                    "alpha": mc.pair.alpha1,
                    "completeness_residual": report.completeness_residual,
                    "max_deviation": report.max_deviation,
                    "all_members": report.all_members(),
                    "perfect": report.is_perfect(tol),
                });
            }
            Err(e @ Error::DimensionCap { .. }) => out["materialize_skipped"] = json!(e.to_string()),
            Err(e) => return Err(Failure::verification(e)),
        }
    }
    emit(&out);
    Ok(code)
}

fn cmd_capacity(d_a: usize, d_b: usize, tol: f64) -> CmdResult {
    let (states, m) = capacity_family(d_a, d_b).map_err(Failure::input)?;
    let rhos: Vec<_> = states.iter().map(PureProductState::density).collect();
    let refs: Vec<_> = rhos.iter().collect();
    let report = verify_states(&refs, &m, tol).map_err(Failure::verification)?;
    emit(&json!({
        "d_a": d_a,
        "d_b": d_b,
        "n": states.len(),
        "max_deviation": report.max_deviation,
        "completeness_residual": report.completeness_residual,
        "all_members": report.all_members(),
        "perfect": report.is_perfect(tol),
    }));
    Ok(if report.is_perfect(tol) { 0 } else { 4 })
}

fn cmd_sweep(step: f64, out: Option<&Path>) -> CmdResult {
    let rows = sweep_grid(step, Parallelism::Parallel).map_err(Failure::input)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display())).map_err(Failure::input)?;
            let mut w = io::BufWriter::new(file);
            write_csv(&rows, &mut w).and_then(|_| w.flush()).map_err(Failure::input)?;
        }
        None => write_csv(&rows, io::stdout().lock()).map_err(Failure::input)?,
    }
    Ok(0)
}
