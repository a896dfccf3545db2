use clap::Parser;

fn main() {
    if let Err(e) = uavpos::cli::run(uavpos::cli::Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
