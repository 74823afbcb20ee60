//! The `latcirc` command-line surface: model I/O, mapping, simulation,
//! compilation, estimation, and the verification suites.
//!
//! stdout carries machine-readable JSON only; diagnostics go to stderr, so
//! subcommands compose in shell pipelines (`latcirc map m.json | latcirc
//! simulate -`). Exit codes: 0 on success, 2 on validation errors, 1 when a
//! verification suite fails. `LATCIRC_THREADS` caps the worker count.

use crate::compile::{self, IsingSourceGate, LgtLogicalGate, PottsLogicalGate, SixVertexSourceGate};
use crate::encodings;
use crate::estimate::{self, EstimatorConfig};
use crate::map;
use crate::qcirc::ProductState;
use crate::schema::{self, SourceCircuitJson, SourceGateJson};
use crate::spinlat::{brute_force_partition, EnumLimits};
use crate::verify;
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::{Read, Write};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "latcirc", version, about = "Lattice-model partition functions as qudit circuits: exact oracles, mappings, reductions, estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact partition function of a model by brute-force enumeration
    Partition {
        /// Model JSON file ("-" for stdin)
        model: String,
        /// Override the free-spin enumeration cap
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Map a lattice model to its circuit (emits the mapped-circuit JSON)
    Map {
        model: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a mapped circuit: κ·⟨L|C|R⟩ or κ·Tr C
    Simulate {
        /// Mapped-circuit JSON file ("-" for stdin)
        mapped: String,
    },
    /// Compile a source circuit into a lattice instance
    Compile {
        /// Source-circuit JSON file ("-" for stdin)
        circuit: String,
        /// ising | sixvertex | potts | lgt | dqc1
        #[arg(long)]
        target: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the per-gate provenance log here
        #[arg(long)]
        audit: Option<PathBuf>,
        /// Filter strength for the Potts Hadamard
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Hadamard-test / one-clean-qubit estimators on a unitary circuit
    Estimate {
        /// Circuit JSON file ("-" for stdin)
        circuit: String,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed shot count per quadrature (default: Hoeffding auto-sizing)
        #[arg(long)]
        shots: Option<u64>,
        /// Estimate the normalized trace instead of a matrix element
        #[arg(long)]
        dqc1: bool,
        /// Left boundary state, one character per wire (digits or '+')
        #[arg(long)]
        left: Option<String>,
        /// Right boundary state, one character per wire (digits or '+')
        #[arg(long)]
        right: Option<String>,
    },
    /// Verification suites: one recipe, or the full battery
    Verify(VerifyArgs),
    /// The four constructions at minimal size with expected outputs
    Demo,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run every suite (exit nonzero on any failure)
    #[arg(long)]
    all: bool,
    /// One recipe: potts_i1 | potts_p8 | potts_h | potts_i2 | potts_cz |
    /// lgt_rz | lgt_diag | lgt_teleport_h | lgt_i1
    #[arg(long)]
    recipe: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Entry point used by the binary.
pub fn run_main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    run(&args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Testable entry point: parse `argv`, write JSON to `out`, diagnostics to
/// `err`, return the exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    init_thread_pool(err);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn init_thread_pool(err: &mut dyn Write) {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("LATCIRC_THREADS") {
            match v.parse::<usize>() {
                Ok(n) if n > 0 => {
                    // Ignore the error if a global pool already exists.
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
                _ => {
                    let _ = writeln!(err, "warning: ignoring invalid LATCIRC_THREADS={v}");
                }
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = err;
}

type AnyError = Box<dyn std::error::Error>;

fn read_input(path: &str) -> Result<String, AnyError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn emit(out: &mut dyn Write, value: &serde_json::Value, file: &Option<PathBuf>) -> Result<(), AnyError> {
    let text = serde_json::to_string_pretty(value)?;
    match file {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn c2a(z: num_complex::Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, AnyError> {
    match cmd {
        Command::Partition { model, cap } => {
            let j: schema::ModelJson = serde_json::from_str(&read_input(&model)?)?;
            let compiled = j.compiled.clone();
            let m = schema::model_from_json(j)?;
            let limits = cap.map(EnumLimits::uniform).unwrap_or_default();
            let free = m.free_spins()?;
            let pv = brute_force_partition(&m, &limits)?;
            let mut report = json!({
                "Z": c2a(pv.z),
                "kappa": c2a(pv.kappa),
                "provenance": "oracle",
                "free_spins": free,
            });
            if let Some(c) = compiled {
                let kappa = num_complex::Complex64::new(c.kappa.value[0], c.kappa.value[1]);
                let normalized = match c.target {
                    schema::TargetJson::NormalizedTrace { n } => pv.z / kappa / 2f64.powi(n as i32),
                    _ => pv.z / kappa,
                };
                report["normalized"] = c2a(normalized);
            }
            emit(out, &report, &None)?;
            Ok(0)
        }
        Command::Map { model, output } => {
            let j: schema::ModelJson = serde_json::from_str(&read_input(&model)?)?;
            let m = schema::model_from_json(j)?;
            let mapped = map::model_to_circuit(&m)?;
            let value = serde_json::to_value(schema::mapped_to_json(&mapped))?;
            emit(out, &value, &output)?;
            Ok(0)
        }
        Command::Simulate { mapped } => {
            let j: schema::MappedCircuitJson = serde_json::from_str(&read_input(&mapped)?)?;
            let mc = schema::mapped_from_json(j)?;
            let z = mc.evaluate()?;
            emit(out, &json!({ "Z": c2a(z), "kappa": c2a(mc.kappa.value()) }), &None)?;
            Ok(0)
        }
        Command::Compile { circuit, target, output, audit, epsilon } => {
            let src: SourceCircuitJson = serde_json::from_str(&read_input(&circuit)?)?;
            if src.latcirc_schema != schema::SCHEMA_VERSION {
                return Err(Box::new(schema::SchemaError::Version(src.latcirc_schema)));
            }
            let inst = compile_source(&src, &target, epsilon)?;
            if let Some(path) = audit {
                let log: Vec<serde_json::Value> = inst
                    .provenance
                    .iter()
                    .map(|p| json!({ "gate": p.gate, "emitted": p.emitted }))
                    .collect();
                std::fs::write(&path, serde_json::to_string_pretty(&json!(log))? + "\n")?;
            }
            let value = serde_json::to_value(schema::compiled_to_json(&inst))?;
            emit(out, &value, &output)?;
            Ok(0)
        }
        Command::Estimate { circuit, epsilon, delta, seed, shots, dqc1, left, right } => {
            let j: schema::CircuitJson = serde_json::from_str(&read_input(&circuit)?)?;
            let c = schema::circuit_from_json(j)?;
            let cfg = EstimatorConfig { shots, epsilon, delta, seed };
            let estimate = if dqc1 {
                estimate::dqc1_trace_estimate(&c, &cfg)?
            } else {
                let l = parse_boundary_state(&left, c.width, c.q)?;
                let r = parse_boundary_state(&right, c.width, c.q)?;
                estimate::hadamard_test(&c, &l, &r, &cfg)?
            };
            let value = serde_json::to_value(schema::estimate_to_json(&estimate))?;
            emit(out, &value, &None)?;
            Ok(0)
        }
        Command::Verify(args) => run_verify(args, out, err),
        Command::Demo => run_demo(out),
    }
}

fn parse_boundary_state(descriptor: &Option<String>, width: usize, q: usize) -> Result<ProductState, AnyError> {
    let Some(s) = descriptor else {
        return Ok(ProductState::basis(q, &vec![0u8; width]));
    };
    if s.chars().count() != width {
        return Err(format!("state '{s}' does not match circuit width {width}").into());
    }
    let plus = ProductState::plus(q, 1).factors[0].clone();
    let mut factors = Vec::with_capacity(width);
    for ch in s.chars() {
        if ch == '+' {
            factors.push(plus.clone());
        } else {
            let d = ch.to_digit(10).ok_or_else(|| format!("bad state character '{ch}'"))? as usize;
            if d >= q {
                return Err(format!("state digit {d} >= q = {q}").into());
            }
            let mut f = vec![num_complex::Complex64::new(0.0, 0.0); q];
            f[d] = num_complex::Complex64::new(1.0, 0.0);
            factors.push(f);
        }
    }
    Ok(ProductState { q, factors })
}

fn compile_source(
    src: &SourceCircuitJson,
    target: &str,
    epsilon: Option<f64>,
) -> Result<compile::CompiledInstance, AnyError> {
    let bad = |msg: &str| -> AnyError { msg.to_string().into() };
    match target {
        "ising" | "dqc1" => {
            let gates: Vec<IsingSourceGate> = src
                .gates
                .iter()
                .map(|g| match *g {
                    SourceGateJson::T { wire } => Ok(IsingSourceGate::T { wire }),
                    SourceGateJson::Ttwvtt { top } => Ok(IsingSourceGate::TTWvTT { top }),
                    _ => Err(bad("ising compilation accepts only t / ttwvtt gates")),
                })
                .collect::<Result<_, _>>()?;
            if target == "dqc1" {
                Ok(compile::dqc1_instance(&gates, src.width)?)
            } else {
                Ok(compile::compile_to_ising(&gates, src.width)?)
            }
        }
        "sixvertex" => {
            let gates: Vec<SixVertexSourceGate> = src
                .gates
                .iter()
                .enumerate()
                .map(|(i, g)| match g {
                    SourceGateJson::U { top, t } => Ok(SixVertexSourceGate {
                        matrix: encodings::u_gate(*t),
                        top: *top,
                        label: format!("U({t})#{i}"),
                    }),
                    SourceGateJson::V { top } => Ok(SixVertexSourceGate {
                        matrix: encodings::v_gate(),
                        top: *top,
                        label: format!("V#{i}"),
                    }),
                    SourceGateJson::SixVertex { top, matrix } => {
                        let n = matrix.len();
                        let mut m = ndarray::Array2::from_elem((n, n), num_complex::Complex64::new(0.0, 0.0));
                        for (r, row) in matrix.iter().enumerate() {
                            for (c, v) in row.iter().enumerate() {
                                m[(r, c)] = num_complex::Complex64::new(v[0], v[1]);
                            }
                        }
                        Ok(SixVertexSourceGate { matrix: m, top: *top, label: format!("G#{i}") })
                    }
                    _ => Err(bad("sixvertex compilation accepts u / v / six_vertex gates")),
                })
                .collect::<Result<_, _>>()?;
            Ok(compile::compile_to_six_vertex(&gates, src.width)?)
        }
        "potts" => {
            let gates: Vec<PottsLogicalGate> = src
                .gates
                .iter()
                .map(|g| match *g {
                    SourceGateJson::I1 { q } => Ok(PottsLogicalGate::I1 { q }),
                    SourceGateJson::P8 { q } => Ok(PottsLogicalGate::P8 { q }),
                    SourceGateJson::H { q } => Ok(PottsLogicalGate::H { q }),
                    SourceGateJson::I2 { q } => Ok(PottsLogicalGate::I2 { q }),
                    SourceGateJson::Cz { q } => Ok(PottsLogicalGate::Cz { q }),
                    _ => Err(bad("potts compilation accepts i1 / p8 / h / i2 / cz gates")),
                })
                .collect::<Result<_, _>>()?;
            let eps = epsilon.or(src.epsilon).unwrap_or(1e-3);
            let readout = src.readout.clone().unwrap_or_else(|| vec![0; src.width]);
            Ok(compile::compile_to_potts(&gates, src.width, eps, &readout, None)?)
        }
        "lgt" => {
            let gates: Vec<LgtLogicalGate> = src
                .gates
                .iter()
                .map(|g| match *g {
                    SourceGateJson::Rz { q, xi } => Ok(LgtLogicalGate::Rz { q, xi }),
                    SourceGateJson::Diag1ii1 { q } => Ok(LgtLogicalGate::Diag1ii1 { q }),
                    SourceGateJson::TeleportH { q, alpha } => {
                        Ok(LgtLogicalGate::TeleportH { q, alpha })
                    }
                    _ => Err(bad("lgt compilation accepts rz / diag1ii1 / teleport_h gates")),
                })
                .collect::<Result<_, _>>()?;
            let readout = src.readout.clone().unwrap_or_else(|| vec![0; src.width]);
            Ok(compile::compile_to_lgt(&gates, src.width, &readout, None)?)
        }
        other => Err(format!("unknown compile target '{other}'").into()),
    }
}

fn run_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, AnyError> {
    if args.all {
        let checks = verify::full_suite(args.seed);
        let mut pass = true;
        let items: Vec<serde_json::Value> = checks
            .iter()
            .map(|c| {
                pass &= c.pass;
                let _ = writeln!(err, "[{}] {} — {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                json!({ "name": c.name, "pass": c.pass, "detail": c.detail })
            })
            .collect();
        emit(out, &json!({ "checks": items, "pass": pass }), &None)?;
        return Ok(if pass { 0 } else { 1 });
    }
    let Some(name) = args.recipe else {
        return Err("verify needs --all or --recipe <name>".to_string().into());
    };
    let eps = args.epsilon.unwrap_or(1e-3);
    let report = match name.as_str() {
        "potts_i1" => encodings::verify_recipe(&encodings::potts_i1(), args.trials, args.seed)?,
        "potts_p8" => encodings::verify_recipe(&encodings::potts_p8(), args.trials, args.seed)?,
        "potts_i2" => encodings::verify_recipe(&encodings::potts_i2(), args.trials, args.seed)?,
        "potts_cz" => encodings::verify_recipe(&encodings::potts_cz(), args.trials, args.seed)?,
        "potts_h" => {
            let mut report =
                encodings::verify_recipe(&encodings::potts_h(eps)?, args.trials, args.seed)?;
            let (slope, _) = encodings::fitted_error_slope(
                |e| encodings::potts_h(e).unwrap(),
                &[1e-2, 3e-3, 1e-3],
                args.trials,
                args.seed,
            )?;
            report.fitted_slope = Some(slope);
            report.pass &= (slope - 2.0).abs() < 0.2;
            report
        }
        "lgt_rz" => encodings::verify_recipe(&encodings::lgt_rz(0.7)?, args.trials, args.seed)?,
        "lgt_diag" => encodings::verify_recipe(&encodings::lgt_diag_1ii1(), args.trials, args.seed)?,
        "lgt_teleport_h" => {
            encodings::verify_recipe(&encodings::lgt_teleport_h(0.3), args.trials, args.seed)?
        }
        "lgt_i1" => encodings::verify_recipe(&encodings::lgt_i1_physical(eps)?, args.trials, args.seed)?,
        other => return Err(format!("unknown recipe '{other}'").into()),
    };
    let value = json!({
        "recipe": report.name,
        "trials": report.trials,
        "max_distance": report.max_distance,
        "fitted_slope": report.fitted_slope,
        "pass": report.pass,
    });
    emit(out, &value, &None)?;
    Ok(if report.pass { 0 } else { 1 })
}

/// Minimal instances of the four constructions as golden fixtures.
fn run_demo(out: &mut dyn Write) -> Result<i32, AnyError> {
    let limits = EnumLimits::default();
    let mut items = Vec::new();
    let mut all_pass = true;
    let mut record = |name: &str,
                      inst: compile::CompiledInstance,
                      expect: num_complex::Complex64,
                      items: &mut Vec<serde_json::Value>|
     -> Result<(), AnyError> {
        let z = brute_force_partition(&inst.model, &limits)?.z;
        let got = inst.normalized(z);
        let pass = (got - expect).norm() < 1e-9;
        all_pass &= pass;
        items.push(json!({
            "construction": name,
            "Z": c2a(z),
            "normalized": c2a(got),
            "expected": c2a(expect),
            "pass": pass,
        }));
        Ok(())
    };

    // Six-vertex: a V gate on staggered boundaries reads the singlet overlap.
    let v = SixVertexSourceGate { matrix: encodings::v_gate(), top: 0, label: "V".into() };
    let inst = compile::compile_to_six_vertex(&[v], 2)?;
    record("six-vertex: <01|V|01>", inst, num_complex::Complex64::new(1.0 / 2f64.sqrt(), 0.0), &mut items)?;

    // Ising: a single T gate between the boundary field operators.
    let gates = [IsingSourceGate::T { wire: 0 }];
    let inst = compile::compile_to_ising(&gates, 1)?;
    let reference = compile::ising_source_circuit(&gates, 1)?;
    let me = crate::qcirc::matrix_element(&reference, &ProductState::plus(2, 1), &ProductState::plus(2, 1))?;
    record("ising: <+|A T A|+>", inst, me, &mut items)?;

    // Potts: the logical pi/8 phase on |0>_L.
    let inst = compile::compile_to_potts(&[PottsLogicalGate::P8 { q: 0 }], 1, 1e-3, &[0], None)?;
    record("potts: <0_L|P_pi8|0_L>", inst, num_complex::Complex64::new(1.0, 0.0), &mut items)?;

    // LGT: one teleported Hadamard block, readout |1>_L.
    let inst = compile::compile_to_lgt(&[LgtLogicalGate::TeleportH { q: 0, alpha: 0.0 }], 1, &[1], None)?;
    let expect = num_complex::Complex64::new(0.0, 1.0 / 2f64.sqrt());
    record("lgt: <1_L|Rz(pi/2) H|0_L>", inst, expect, &mut items)?;

    emit(out, &json!({ "demos": items, "pass": all_pass }), &None)?;
    Ok(if all_pass { 0 } else { 1 })
}
