//! Binary entry point for the `cremona` tool.

use clap::Parser;

fn main() {
    let cli = cremona_cli::Cli::parse();
    std::process::exit(cremona_cli::run(cli));
}
