mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Bad arguments or input that clap could not catch.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use tvdlab_core::Error as E;
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(E::Vacuum(_) | E::VacuumEncountered { .. }) => 3,
        Some(E::Convergence(_) | E::Search(_) | E::Quadrature { .. }) => 4,
        Some(E::Domain(_) | E::Overflow { .. } | E::Degenerate(_) | E::Precondition(_)) => 2,
        None => 1,
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match &cli.command {
        Command::Phi(a) => commands::phi_table(a, out),
        Command::Riemann(a) => commands::riemann(a, out),
        Command::Interact(a) => commands::interact(a, out),
        Command::TvdExpand(a) => commands::tvd_expand(a, out),
        Command::Counterexample(a) => commands::counterexample(a, out),
        Command::Glimm(a) => commands::glimm(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.output {
        Some(p) => match File::create(p) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", p.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let res = dispatch(&cli, out.as_mut()).and_then(|_| Ok(out.flush()?));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
