use std::process::ExitCode;

use clap::Parser;
use fermatseq_cli::{run, Cli, CliError, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(Outcome::AllMatch) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(fermatseq::Error::Capacity { .. }) = e {
                eprintln!("hint: raise the cap with --degree-cap or --max-p where supported");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
