use clap::Parser;

fn main() {
    let cli = detlaw::cli::Cli::parse();
    if let Err(e) = detlaw::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
