use clap::Parser;

fn main() {
    let cli = sdf_cli::Cli::parse();
    std::process::exit(sdf_cli::run(&cli));
}
