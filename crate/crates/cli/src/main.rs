use clap::Parser;

fn main() {
    let cli = conecert_cli::Cli::parse();
    std::process::exit(conecert_cli::run(cli));
}
