use clap::Parser;

fn main() {
    let cli = kpos_cli::Cli::parse();
    let code = kpos_cli::run(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
