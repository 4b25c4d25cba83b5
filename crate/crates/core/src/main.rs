use clap::Parser;
use cyclofusion::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
