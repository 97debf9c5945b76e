use clap::Parser;

use arcgen_cli::{run, Cli, Toolchain};

fn main() {
    let cli = Cli::parse();
    let code = run(&cli, &Toolchain::new(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
