//! `qdeform`: evaluate recoupling symbols, count physical states, compile
//! and check Trotter circuits for one q-deformed SU(2)_k plaquette.

mod num;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use num::{json_f64, json_u128, sig17};
use qdeform::gauge::{phys_dim, retention_ratio};
use qdeform::plaquette::{box_triple_prime, g_move, EvolutionParams, BLOCK_GUARD};
use qdeform::qalgebra::{f_symbol, q_number};
use qdeform::sim::{compare_on_physical, reference_evolution};
use qdeform::synth::{emit_trotter_step, GateList, ResourceReport, Scheme, CENTERING_GUARD};
use qdeform::{Spin, Truncation};
use verify::{Status, Suite};

#[derive(Parser)]
#[command(name = "qdeform", version, about = "q-deformed SU(2)_k plaquette toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Largest truncation accepted by `physdim`; the exact trace costs about
/// k^3 operations.
const PHYSDIM_MAX_K: u32 = 2000;
/// Largest truncation accepted by `resources`.
const RESOURCES_MAX_K: u32 = 4096;
/// Largest truncation accepted by `synth`.
const SYNTH_MAX_K: u32 = CENTERING_GUARD;
/// Largest truncation accepted by `simulate`.
const SIM_MAX_K: u32 = BLOCK_GUARD;

#[derive(Subcommand)]
enum Command {
    /// q-number [n] at q = exp(2 pi i / (k + 2)).
    Qnum {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        k: u32,
        /// `false` prints the undeformed value n.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        deformed: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// F-symbol [a b e; c d f]. Spins are written `0`, `1/2`, `1`, `3/2`, ...
    Fsymbol {
        #[arg(long)]
        k: u32,
        #[arg(num_args = 6, value_parser = parse_spin, required = true)]
        spins: Vec<Spin>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Physical Hilbert-space dimensions and their ratio.
    Physdim {
        #[arg(long, conflicts_with = "kmax", value_parser = clap::value_parser!(u32).range(..=PHYSDIM_MAX_K as i64))]
        k: Option<u32>,
        #[arg(long, default_value_t = 1)]
        kmin: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(..=PHYSDIM_MAX_K as i64))]
        kmax: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Compressed plaquette blocks and their spectra as JSON.
    Operator {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=256))]
        k: u32,
        /// Only the sector with this spin on the top middle link.
        #[arg(long, value_parser = parse_spin)]
        control: Option<Spin>,
    },
    /// Compile one Trotter step into a gate list.
    Synth {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=SYNTH_MAX_K as i64))]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, default_value = "reduced", value_parser = parse_scheme)]
        scheme: Scheme,
        /// Write the gate list here instead of stdout; a JSON summary is
        /// printed instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// GCX count per Trotter step for every scheme.
    Resources {
        #[arg(long, conflicts_with = "kmax", value_parser = clap::value_parser!(u32).range(..=RESOURCES_MAX_K as i64))]
        k: Option<u32>,
        #[arg(long, default_value_t = 1)]
        kmin: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(..=RESOURCES_MAX_K as i64))]
        kmax: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the verification suites (all of them when none is selected).
    Verify {
        #[arg(long)]
        qalgebra: bool,
        #[arg(long)]
        gauge: bool,
        #[arg(long)]
        plaquette: bool,
        #[arg(long)]
        fhi: bool,
        #[arg(long)]
        synth: bool,
        #[arg(long)]
        sim: bool,
        #[arg(long)]
        all: bool,
        /// Largest truncation checked by every suite.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=64))]
        kmax: u32,
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Pentagon tuples sampled above the exhaustive limit.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Simulate one Trotter step on every physical basis state and compare
    /// it with exact evolution.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=SIM_MAX_K as i64))]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        tau: f64,
        #[arg(long, default_value = "reduced", value_parser = parse_scheme)]
        scheme: Scheme,
        /// Gate list written by `synth`; emitted afresh when absent.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Largest acceptable deviation and auxiliary leakage.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn parse_spin(s: &str) -> Result<Spin, String> {
    let bad = || format!("`{s}` is not a spin (use 0, 1/2, 1, 3/2, ...)");
    let two_j = match s.split_once('/') {
        Some((num, "2")) => num.parse::<u32>().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => 2 * s.parse::<u32>().map_err(|_| bad())?,
    };
    Ok(Spin::from_twice(two_j))
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

/// Failure after argument parsing: the message goes to stderr as JSON.
struct Failure(Value);

impl From<qdeform::Error> for Failure {
    fn from(e: qdeform::Error) -> Self {
        Failure(json!({ "error": e.to_string() }))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(json!({ "error": e.to_string() }))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure(json!({ "error": e.to_string() }))
    }
}

type Outcome = Result<(), Failure>;

fn usage_error(sub: &str, message: String) -> ! {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = cmd.find_subcommand_mut(sub).expect("known subcommand");
    sub.error(clap::error::ErrorKind::ValueValidation, message).exit()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    validate(&cli.command);
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(report)) => {
            eprintln!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::FAILURE
        }
    }
}

/// Checks that clap cannot express; exits with status 2 on failure.
fn validate(cmd: &Command) {
    let range = |sub: &str, k: Option<u32>, kmin: u32, kmax: Option<u32>| {
        if k.is_none() && kmax.is_none() {
            usage_error(sub, "one of --k or --kmax is required".into());
        }
        if let Some(kmax) = kmax {
            if kmin > kmax {
                usage_error(sub, format!("--kmin {kmin} exceeds --kmax {kmax}"));
            }
        }
    };
    match cmd {
        Command::Fsymbol { k, spins, .. } => {
            if let Some(s) = spins.iter().find(|s| s.two_j() > *k) {
                usage_error("fsymbol", format!("spin {s} exceeds k/2 for k={k}"));
            }
        }
        Command::Operator { k, control: Some(s) } if s.two_j() > *k => {
            usage_error("operator", format!("control spin {s} exceeds k/2 for k={k}"));
        }
        Command::Physdim { k, kmin, kmax, .. } => range("physdim", *k, *kmin, *kmax),
        Command::Resources { k, kmin, kmax, .. } => range("resources", *k, *kmin, *kmax),
        Command::Synth { k, scheme, tau, .. } | Command::Simulate { k, scheme, tau, .. } => {
            let sub = if matches!(cmd, Command::Synth { .. }) { "synth" } else { "simulate" };
            if *scheme == Scheme::Nondeformed {
                usage_error(sub, "the nondeformed scheme is counted, not emitted".into());
            }
            if *scheme == Scheme::ParityK1 && *k != 1 {
                usage_error(sub, format!("scheme parity-k1 needs --k 1, got {k}"));
            }
            if !tau.is_finite() {
                usage_error(sub, "--tau must be finite".into());
            }
        }
        _ => {}
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Qnum { n, k, deformed, format } => {
            let value = if deformed { q_number::<f64>(n, Truncation::new(k)) } else { n as f64 };
            scalar(format, &[("k", k.to_string()), ("n", n.to_string())], value)
        }
        Command::Fsymbol { k, spins, format } => {
            let s = &spins;
            let value = f_symbol::<f64>(s[0], s[1], s[2], s[3], s[4], s[5], Truncation::new(k));
            let names = ["a", "b", "e", "c", "d", "f"];
            let mut keys: Vec<(&str, String)> = vec![("k", k.to_string())];
            keys.extend(names.iter().zip(s).map(|(n, s)| (*n, s.to_string())));
            scalar(format, &keys, value)
        }
        Command::Physdim { k, kmin, kmax, format } => physdim(ks(k, kmin, kmax), format),
        Command::Resources { k, kmin, kmax, format } => resources(ks(k, kmin, kmax), format),
        Command::Operator { k, control } => operator(k, control),
        Command::Synth { k, tau, scheme, out } => synth(k, tau, scheme, out),
        Command::Simulate { k, tau, scheme, circuit, tol } => simulate(k, tau, scheme, circuit, tol),
        Command::Verify { qalgebra, gauge, plaquette, fhi, synth, sim, all, kmax, tau, seed, samples, format } => {
            let flags = [qalgebra, gauge, plaquette, fhi, synth, sim];
            let suites: Vec<Suite> = if all || !flags.contains(&true) {
                Suite::ALL.to_vec()
            } else {
                Suite::ALL.iter().zip(flags).filter(|p| p.1).map(|p| *p.0).collect()
            };
            run_verify(&suites, verify::Options { kmax, tau, seed, samples }, format)
        }
    }
}

fn ks(k: Option<u32>, kmin: u32, kmax: Option<u32>) -> Vec<u32> {
    match (k, kmax) {
        (Some(k), _) => vec![k],
        (None, Some(kmax)) => (kmin..=kmax).collect(),
        (None, None) => unreachable!("validated"),
    }
}

fn print_json(v: &Value) -> Outcome {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json serializes"))?;
    Ok(())
}

/// One value: bare by default, or one CSV row / JSON object with its inputs.
fn scalar(format: Option<Format>, keys: &[(&str, String)], value: f64) -> Outcome {
    match format {
        None => println!("{}", sig17(value)),
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(keys.iter().map(|p| p.0).chain(["value"]))?;
            w.write_record(keys.iter().map(|p| p.1.clone()).chain([sig17(value)]))?;
            w.flush()?;
        }
        Some(Format::Json) => {
            let mut obj = serde_json::Map::new();
            for (key, v) in keys {
                obj.insert(key.to_string(), v.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(v.clone())));
            }
            obj.insert("value".into(), json_f64(value));
            print_json(&Value::Object(obj))?;
        }
    }
    Ok(())
}

fn physdim(ks: Vec<u32>, format: Format) -> Outcome {
    let mut rows = Vec::new();
    for k in ks {
        let t = Truncation::new(k);
        rows.push((k, phys_dim::<u128>(t, true)?, phys_dim::<u128>(t, false)?, retention_ratio(t)?));
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["k", "dim_q", "dim_nq", "ratio"])?;
            for (k, q, nq, r) in rows {
                w.write_record([k.to_string(), q.to_string(), nq.to_string(), sig17(r)])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => print_json(&Value::Array(
            rows.into_iter()
                .map(|(k, q, nq, r)| json!({ "k": k, "dim_q": json_u128(q), "dim_nq": json_u128(nq), "ratio": json_f64(r) }))
                .collect(),
        )),
    }
}

fn resources(ks: Vec<u32>, format: Format) -> Outcome {
    let mut reports = Vec::new();
    for k in ks {
        let t = Truncation::new(k);
        for scheme in Scheme::ALL {
            if scheme == Scheme::ParityK1 && k != 1 {
                continue;
            }
            reports.push(ResourceReport::new(scheme, t)?);
        }
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["k", "scheme", "gcx"])?;
            for r in reports {
                w.write_record([r.k.to_string(), r.scheme.to_string(), r.gcx_total.to_string()])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Json => print_json(&Value::Array(
            reports
                .into_iter()
                .map(|r| {
                    let breakdown: serde_json::Map<String, Value> =
                        r.breakdown.iter().map(|i| (i.component.to_string(), json_u128(i.gcx))).collect();
                    json!({
                        "k": r.k,
                        "scheme": r.scheme.name(),
                        "gcx": json_u128(r.gcx_total),
                        "breakdown": breakdown,
                        "centering_overhead": r.centering_overhead.map(json_u128),
                    })
                })
                .collect(),
        )),
    }
}

fn operator(k: u32, control: Option<Spin>) -> Outcome {
    let t = Truncation::new(k);
    let sectors: Vec<Spin> = match control {
        Some(s) => vec![s],
        None => t.spins().filter(|s| s.is_integer()).collect(),
    };
    let mut out = Vec::new();
    for big_j in sectors {
        let op = box_triple_prime(big_j, t);
        let m = op.matrix();
        let matrix: Vec<Value> = (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| json!([json_f64(m[(r, c)].re), json_f64(m[(r, c)].im)])).collect()))
            .collect();
        let mut entry = json!({ "control": big_j.to_string(), "matrix": matrix });
        if big_j.is_integer() {
            let g = g_move(big_j, t);
            entry["active_levels"] = json!(g.active);
            entry["spectrum"] = Value::Array(g.spectrum.iter().map(|&x| json_f64(x)).collect());
            entry["diagonal"] = Value::Array(g.diagonal().iter().map(|&x| json_f64(x)).collect());
        }
        out.push(entry);
    }
    print_json(&json!({ "k": k, "sectors": out }))
}

fn synth(k: u32, tau: f64, scheme: Scheme, out: Option<PathBuf>) -> Outcome {
    let list = emit_trotter_step(Truncation::new(k), EvolutionParams::with_tau(tau), scheme)?.lowered();
    let text = list.to_text()?;
    match out {
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            fs::write(&path, text)?;
            print_json(&json!({
                "k": k,
                "tau": json_f64(tau),
                "scheme": scheme.name(),
                "gates": list.len(),
                "gcx": list.gcx_count(),
                "out": path.display().to_string(),
            }))
        }
    }
}

fn simulate(k: u32, tau: f64, scheme: Scheme, circuit: Option<PathBuf>, tol: f64) -> Outcome {
    let t = Truncation::new(k);
    let params = EvolutionParams::with_tau(tau);
    let list = match &circuit {
        Some(path) => GateList::parse(&fs::read_to_string(path)?)?,
        None => emit_trotter_step(t, params, scheme)?,
    };
    let reference = reference_evolution(t, params)?;
    let c = compare_on_physical(&list, &reference, t)?;
    let report = json!({
        "k": k,
        "tau": json_f64(tau),
        "scheme": scheme.name(),
        "circuit": circuit.map(|p| p.display().to_string()),
        "max_deviation": json_f64(c.max_deviation),
        "aux_leakage": json_f64(c.aux_leakage),
        "unphysical_leakage": json_f64(c.unphysical_leakage),
        "columns": c.columns,
        "gcx": list.gcx_count(),
    });
    print_json(&report)?;
    if c.passes(tol, tol) {
        Ok(())
    } else {
        Err(Failure(json!({ "status": "fail", "tolerance": json_f64(tol), "result": report })))
    }
}

fn check_json(c: &verify::Check) -> Value {
    json!({
        "suite": c.suite.name(),
        "check": c.check,
        "status": c.status.to_string(),
        "max_dev": c.max_dev.map(json_f64),
        "note": c.note,
    })
}

fn run_verify(suites: &[Suite], opts: verify::Options, format: Format) -> Outcome {
    let checks = verify::run(suites, opts);
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["suite", "check", "status", "max_dev"])?;
            for c in &checks {
                let dev = c.max_dev.map(sig17).unwrap_or_default();
                w.write_record([c.suite.name(), &c.check, &c.status.to_string(), &dev])?;
            }
            w.flush()?;
        }
        Format::Json => print_json(&Value::Array(checks.iter().map(check_json).collect()))?,
    }
    let failures: Vec<Value> = checks.iter().filter(|c| c.status == Status::Fail).map(check_json).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure(json!({ "status": "fail", "failures": failures })))
    }
}
