use clap::Parser;

fn main() {
    let cli = qtoric::cli::Cli::parse();
    std::process::exit(qtoric::cli::run(cli));
}
