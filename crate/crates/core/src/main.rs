use clap::Parser;
use twobridge::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
