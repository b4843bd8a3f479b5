use std::path::PathBuf;

use clap::ValueEnum;
use qsp_core::sim::check_circuit;
use qsp_core::synth::{synthesize, Algorithm};
use qsp_core::{transpile, DiagramStats, GateCounts, GroupKind, LimTdd, StateVector};
use serde::Serialize;

use crate::{parse_group, read_state, verify_cap, write_file, CliError, CliResult};

const FIDELITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AlgoArg {
    Noanc,
    One,
    Full,
    Budget,
}

#[derive(clap::Args)]
pub struct Args {
    /// State file (dense or sparse JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Ancilla budget; only with `--algo budget`.
    #[arg(long)]
    ancillas: Option<usize>,
    #[arg(long, default_value = "xp", value_parser = parse_group)]
    group: GroupKind,
    /// Lower to single-qubit gates and CX.
    #[arg(long)]
    transpile: bool,
    /// Simulate and print the preparation fidelity.
    #[arg(long)]
    verify: bool,
    /// Circuit JSON output.
    #[arg(long)]
    output: PathBuf,
    /// OpenQASM 2 output; needs `--transpile`.
    #[arg(long)]
    qasm: Option<PathBuf>,
    /// Diagram and gate statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Serialize)]
struct Stats {
    num_qubits: usize,
    group: String,
    algo: String,
    diagram: DiagramStats,
    ancillas: usize,
    counts: GateCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    transpiled: Option<GateCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity: Option<f64>,
}

fn algorithm(a: &Args) -> CliResult<Algorithm> {
    match (a.algo, a.ancillas) {
        (AlgoArg::Budget, Some(0)) => Err(CliError::Usage("--ancillas must be at least 1".into())),
        (AlgoArg::Budget, Some(m)) => Ok(Algorithm::Budget(m)),
        (AlgoArg::Budget, None) => Err(CliError::Usage("--algo budget needs --ancillas".into())),
        (_, Some(_)) => Err(CliError::Usage("--ancillas is only valid with --algo budget".into())),
        (AlgoArg::Noanc, None) => Ok(Algorithm::NoAncilla),
        (AlgoArg::One, None) => Ok(Algorithm::OneAncilla),
        (AlgoArg::Full, None) => Ok(Algorithm::Full),
    }
}

pub fn run(a: Args) -> CliResult {
    let algo = algorithm(&a)?;
    if a.qasm.is_some() && !a.transpile {
        return Err(CliError::Usage("--qasm needs --transpile".into()));
    }
    let cap = verify_cap()?;
    let psi = read_state(&a.input)?;
    let psi = if psi.norm() == 0.0 {
        return Err(CliError::Usage("input state is the zero vector".into()));
    } else {
        psi.normalized()
    };
    let dd = LimTdd::from_statevector(&psi, a.group)?;
    let prep = synthesize(&dd, algo)?.circuit.inverse();
    let counts = prep.counts();
    let (circuit, transpiled) = if a.transpile {
        let t = transpile(&prep);
        let k = t.counts();
        (t, Some(k))
    } else {
        (prep, None)
    };

    let mut fidelity = None;
    if a.verify {
        if circuit.width() > cap {
            return Err(CliError::Usage(format!(
                "verification of {} qubits exceeds the cap of {cap} (set QSP_VERIFY_CAP)",
                circuit.width()
            )));
        }
        let zero = StateVector::zero_state(psi.num_qubits());
        let chk = check_circuit(&circuit, &zero, &psi, cap)?;
        println!("fidelity {:.12}", chk.fidelity);
        fidelity = Some(chk.fidelity);
    }

    write_file(&a.output, &circuit.to_json_string())?;
    if let Some(p) = &a.qasm {
        write_file(p, &circuit.to_qasm()?)?;
    }
    if let Some(p) = &a.stats {
        let s = Stats {
            num_qubits: psi.num_qubits(),
            group: a.group.to_string(),
            algo: algo.to_string(),
            diagram: dd.stats(),
            ancillas: circuit.ancilla_qubits(),
            counts,
            transpiled,
            fidelity,
        };
        write_file(p, &serde_json::to_string_pretty(&s).expect("stats serialize"))?;
    }
    match fidelity {
        Some(f) if f < 1.0 - FIDELITY_TOL => Err(CliError::Verify(format!("fidelity {f} below 1 - {FIDELITY_TOL}"))),
        _ => Ok(()),
    }
}
