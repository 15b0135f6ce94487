use clap::Parser;

use charburg_cli::args::Cli;
use charburg_cli::run;

fn main() {
    // Cap the sampling pool before any parallel work starts.
    if let Ok(raw) = std::env::var("CHARBURG_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = charburg::set_thread_cap(n);
            }
            _ => {
                eprintln!("error: CHARBURG_THREADS must be a positive integer, got '{raw}'");
                std::process::exit(run::EXIT_USAGE);
            }
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => run::EXIT_OK,
                _ => run::EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run::dispatch(&cli.command));
}
