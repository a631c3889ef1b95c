use clap::Parser;

fn main() {
    let cli = dbcscan::cli::Cli::parse();
    std::process::exit(dbcscan::cli::run(cli));
}
