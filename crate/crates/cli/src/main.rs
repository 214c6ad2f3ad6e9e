use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use almostfin_cli::{exit_code, run, Cli, Record};

fn write_records(cli: &Cli, records: &[Record]) -> std::io::Result<()> {
    let mut text = String::new();
    for r in records {
        text.push_str(&r.to_line());
        text.push('\n');
    }
    match &cli.output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let code = exit_code(&result);
    match &result {
        Err(e) => eprintln!("almostfin {}: {e}", cli.command.name()),
        Ok(records) => {
            if let Err(e) = write_records(&cli, records) {
                eprintln!("almostfin: cannot write output: {e}");
                return ExitCode::from(almostfin_cli::EXIT_INVALID as u8);
            }
            if !cli.quiet {
                let failed = records.iter().filter(|r| !r.passed()).count();
                eprintln!("{}: {} records, {failed} failed", cli.command.name(), records.len());
            }
        }
    }
    ExitCode::from(code as u8)
}
