use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use qsp_core::sim::{check_circuit, default_depth, random_clifford_t_state};
use qsp_core::synth::{baseline_ucr, synthesize, Algorithm};
use qsp_core::{transpile, Circuit, GateCounts, GroupKind, LimTdd, StateVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::{io_err, parse_group, verify_cap, CliError, CliResult};

const FIDELITY_TOL: f64 = 1e-8;

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let a: usize = a.trim().parse().map_err(|_| format!("bad qubit range '{s}'"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| format!("bad qubit range '{s}'"))?;
    if a == 0 || a > b {
        return Err(format!("empty or zero qubit range '{s}'"));
    }
    Ok(a..=b)
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: qsp_core::Error| e.to_string())
}

#[derive(clap::Args)]
pub struct Args {
    /// Qubit counts, `A..B` inclusive or a single `N`.
    #[arg(long, default_value = "4..8", value_parser = parse_range)]
    qubits: RangeInclusive<usize>,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated: noanc, one, full, budget:K.
    #[arg(long, value_delimiter = ',', default_value = "noanc,one,full", value_parser = parse_algo)]
    algos: Vec<Algorithm>,
    #[arg(long, default_value = "xp", value_parser = parse_group)]
    group: GroupKind,
    /// Clifford+T gates per state; defaults to 3n.
    #[arg(long)]
    depth: Option<usize>,
    /// Add a row per state for the multiplexed-rotation baseline.
    #[arg(long)]
    baseline: bool,
    /// Also count gates after lowering to single-qubit gates and CX.
    #[arg(long)]
    transpile: bool,
    /// Leave the timing columns empty so that reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct Record {
    n: usize,
    sample: usize,
    algo: String,
    group: String,
    seed: u64,
    total_nodes: usize,
    non_terminal: usize,
    branch_nodes: usize,
    reduced_paths: u128,
    ancillas: usize,
    gates: usize,
    multi_qubit: usize,
    weighted: usize,
    depth: usize,
    blocks: Option<usize>,
    t_gates: Option<usize>,
    t_multi_qubit: Option<usize>,
    t_depth: Option<usize>,
    synth_ms: Option<f64>,
    transpile_ms: Option<f64>,
    fidelity: Option<f64>,
    status: &'static str,
}

/// Per-state seed; distinct for every (n, sample) under one run seed.
fn state_seed(seed: u64, n: usize, sample: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((n as u64) << 40) ^ sample as u64
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

struct Job {
    n: usize,
    sample: usize,
    seed: u64,
}

impl Args {
    fn rows_for(&self, job: &Job, cap: usize) -> Result<Vec<Record>, qsp_core::Error> {
        let depth = self.depth.unwrap_or_else(|| default_depth(job.n));
        let psi = random_clifford_t_state(job.n, depth, job.seed);
        let dd = LimTdd::from_statevector(&psi, self.group)?;
        let st = dd.stats();
        let zero = StateVector::zero_state(job.n);
        let record = |algo: String, prep: &Circuit, synth_ms: f64, blocks: Option<usize>| -> Result<Record, qsp_core::Error> {
            let k = prep.counts();
            let mut t: Option<(GateCounts, f64)> = None;
            if self.transpile {
                let t0 = Instant::now();
                let c = transpile(prep);
                t = Some((c.counts(), ms(t0)));
            }
            let fidelity = if prep.width() <= cap { Some(check_circuit(prep, &zero, &psi, cap)?.fidelity) } else { None };
            let status = match fidelity {
                Some(f) if f < 1.0 - FIDELITY_TOL => "failed",
                Some(_) => "ok",
                None => "unverified",
            };
            let timing = |v: f64| if self.no_timing { None } else { Some(v) };
            Ok(Record {
                n: job.n,
                sample: job.sample,
                algo,
                group: self.group.to_string(),
                seed: job.seed,
                total_nodes: st.total_nodes,
                non_terminal: st.non_terminal,
                branch_nodes: st.branch_nodes,
                reduced_paths: st.reduced_paths,
                ancillas: prep.ancilla_qubits(),
                gates: k.total(),
                multi_qubit: k.multi_qubit(),
                weighted: k.weighted(),
                depth: k.depth,
                blocks,
                t_gates: t.as_ref().map(|(k, _)| k.total()),
                t_multi_qubit: t.as_ref().map(|(k, _)| k.multi_qubit()),
                t_depth: t.as_ref().map(|(k, _)| k.depth),
                synth_ms: timing(synth_ms),
                transpile_ms: t.and_then(|(_, d)| timing(d)),
                fidelity,
                status,
            })
        };
        let mut rows = Vec::new();
        for &algo in &self.algos {
            let t0 = Instant::now();
            let prep = synthesize(&dd, algo)?.circuit.inverse();
            let dt = ms(t0);
            rows.push(record(algo.to_string(), &prep, dt, None)?);
        }
        if self.baseline {
            let t0 = Instant::now();
            let b = baseline_ucr(&psi)?;
            let dt = ms(t0);
            rows.push(record("baseline".into(), &b.circuit, dt, Some(b.controlled_blocks))?);
        }
        Ok(rows)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

fn summarize(rows: &[Record], transpiled: bool) {
    let mut groups: BTreeMap<(usize, &str), Vec<&Record>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.n, r.algo.as_str())).or_default().push(r);
    }
    print!("{:>3} {:>10} {:>8} {:>8}", "n", "algo", "mq", "gates");
    if transpiled {
        print!(" {:>8}", "t_mq");
    }
    println!(" {:>9}", "synth_ms");
    for ((n, algo), rs) in groups {
        let med = |f: &dyn Fn(&Record) -> Option<f64>| -> String {
            let v: Vec<f64> = rs.iter().filter_map(|r| f(r)).collect();
            if v.is_empty() {
                "-".into()
            } else {
                format!("{}", median(v))
            }
        };
        print!(
            "{n:>3} {algo:>10} {:>8} {:>8}",
            med(&|r| Some(r.multi_qubit as f64)),
            med(&|r| Some(r.gates as f64))
        );
        if transpiled {
            print!(" {:>8}", med(&|r| r.t_multi_qubit.map(|x| x as f64)));
        }
        println!(" {:>9}", med(&|r| r.synth_ms.map(|x| (x * 1e3).round() / 1e3)));
    }
}

pub fn run(a: Args) -> CliResult {
    if a.algos.is_empty() && !a.baseline {
        return Err(CliError::Usage("nothing to benchmark".into()));
    }
    let cap = verify_cap()?;
    let jobs: Vec<Job> = a
        .qubits
        .clone()
        .flat_map(|n| (0..a.samples).map(move |sample| (n, sample)))
        .map(|(n, sample)| Job { n, sample, seed: state_seed(a.seed, n, sample) })
        .collect();
    // Rows stay in (n, sample, algo) order whatever the completion order.
    let rows: Vec<Vec<Record>> = jobs.par_iter().map(|j| a.rows_for(j, cap)).collect::<Result<_, _>>()?;
    let rows: Vec<Record> = rows.into_iter().flatten().collect();

    let mut w = csv::Writer::from_path(&a.out).map_err(|e| io_err(&a.out, e))?;
    for r in &rows {
        w.serialize(r).map_err(|e| io_err(&a.out, e))?;
    }
    w.flush().map_err(|e| io_err(&a.out, e))?;

    summarize(&rows, a.transpile);
    let failed = rows.iter().filter(|r| r.status == "failed").count();
    if failed > 0 {
        return Err(CliError::Verify(format!("{failed} rows below fidelity 1 - {FIDELITY_TOL}")));
    }
    Ok(())
}
