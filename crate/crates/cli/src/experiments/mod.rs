mod counting;
mod dynamics;
mod growth;
mod trees;

use std::time::Instant;

use crate::config::{Experiment, ExperimentConfig};
use crate::report::Report;
use crate::CliError;

pub fn run(mut cfg: ExperimentConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let outcome = match cfg.subcommand {
        Experiment::Histories => counting::histories(&mut cfg),
        Experiment::Sequences => counting::sequences(&mut cfg),
        Experiment::Locality1d => counting::locality_1d(&mut cfg),
        Experiment::Table1 => trees::table1(&mut cfg),
        Experiment::Kupin => trees::kupin(&mut cfg),
        Experiment::TreeFamily => trees::tree_family(&mut cfg),
        Experiment::Blowup => dynamics::blowup(&mut cfg),
        Experiment::Eden => growth::eden(&mut cfg),
        Experiment::Crosscheck => dynamics::crosscheck(&mut cfg),
    }?;
    Ok(Report { config: cfg, outcome, wall_seconds: start.elapsed().as_secs_f64() })
}
