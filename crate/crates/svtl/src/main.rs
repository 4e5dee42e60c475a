use clap::Parser;

use svtl::cli::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = execute(&cli);
    print!("{report}");
    std::process::exit(code);
}
