use clap::Parser;

fn main() {
    let cli = twinsmooth::cli::Cli::parse();
    std::process::exit(twinsmooth::cli::run(cli.cmd));
}
