mod evaluate;
mod pipeline;
mod report;
mod train;
mod verify;

use clap::ArgMatches;

use crate::args::Command;
use crate::context::{effective_config, CliResult};

pub fn run(command: Command, matches: &ArgMatches) -> CliResult {
    let config = effective_config(matches);
    match command {
        Command::TrainVictim(a) => train::run(&a, train::Role::Victim, &config),
        Command::TrainAttacker(a) => train::run(&a, train::Role::Attacker, &config),
        Command::Pipeline(a) => pipeline::run(&a, &config),
        Command::Evaluate(a) => evaluate::run(&a),
        Command::VerifyTheorem1(a) => verify::theorem(&a),
        Command::SampleBound(a) => verify::bound(&a),
        Command::Report(a) => report::run(&a),
    }
}
