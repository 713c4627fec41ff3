use clap::Parser;

use tricat::cli::{emit_report, run, Cli};

fn main() {
    let cli = Cli::parse();
    let report = run(&cli);
    print!("{}", emit_report(&report, cli.format));
    std::process::exit(report.status.exit_code());
}
