use clap::Parser;

fn main() {
    let cli = rmrll_tool::Cli::parse();
    if let Err(e) = rmrll_tool::run(&cli) {
        eprintln!("rmrll: {e}");
        std::process::exit(e.exit_code());
    }
}
