use clap::Parser;

fn main() {
    let cli = mugev_cli::Cli::parse();
    std::process::exit(mugev_cli::run(&cli));
}
