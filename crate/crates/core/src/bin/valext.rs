use clap::Parser;

fn main() {
    let cli = valext::cli::Cli::parse();
    std::process::exit(valext::cli::main_with(cli));
}
