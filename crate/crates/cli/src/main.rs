use clap::Parser;
use dragonfish_cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Help and version exit 0; every other parse failure exits 2.
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = run(cli, &mut stdout) {
        eprintln!("dragonfish: {e}");
        std::process::exit(e.exit_code());
    }
}
