use clap::Parser;

fn main() {
    let cli = pva_cli::Cli::parse();
    let code = pva_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
