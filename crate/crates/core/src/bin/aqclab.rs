use clap::Parser;

fn main() {
    if let Err(e) = aqclab::cli::run(aqclab::cli::Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
