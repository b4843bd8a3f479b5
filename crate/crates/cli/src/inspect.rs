use std::path::PathBuf;

use qsp_core::{GroupKind, LimTdd};

use crate::{parse_group, read_state, write_file, CliResult};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "xp", value_parser = parse_group)]
    group: GroupKind,
    /// Write a Graphviz rendering here.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Print the statistics as JSON.
    #[arg(long)]
    json: bool,
}

pub fn run(a: Args) -> CliResult {
    let psi = read_state(&a.input)?;
    let dd = LimTdd::from_statevector(&psi, a.group)?;
    let s = dd.stats();
    if a.json {
        println!("{}", serde_json::to_string(&s).expect("stats serialize"));
    } else {
        println!("qubits        {}", dd.num_qubits());
        println!("group         {}", a.group);
        println!("nodes         {}", s.total_nodes);
        println!("non-terminal  {}", s.non_terminal);
        println!("branch nodes  {}", s.branch_nodes);
        println!("reduced paths {}", s.reduced_paths);
    }
    if let Some(p) = &a.dot {
        write_file(p, &dd.to_dot())?;
    }
    Ok(())
}
