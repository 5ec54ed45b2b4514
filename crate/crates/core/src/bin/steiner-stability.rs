use clap::Parser;
use steiner_stability::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (report, code) = run(&cli);
    print!("{}", report.render(cli.format));
    std::process::exit(code);
}
