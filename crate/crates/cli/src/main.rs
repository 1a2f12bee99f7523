use std::io::{self, BufRead, IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;
use omega_agm::limits::CancelToken;
use omega_agm_cli::{limits_for, run_command, Cli, Command, Session, EXIT_INPUT};

fn main() -> ExitCode {
    let cancel = CancelToken::new();
    let handler = cancel.clone();
    if let Err(e) = ctrlc::set_handler(move || handler.cancel()) {
        eprintln!("warning: cannot install interrupt handler: {e}");
    }
    let argv: Vec<String> = std::env::args().collect();
    if let Ok(cli) = Cli::try_parse_from(&argv) {
        if let Command::Repl { state, pref } = &cli.command {
            return repl(&cli, state.as_deref(), pref.as_deref(), &cancel);
        }
    }
    let out = run_command(&argv, &cancel);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}

fn repl(cli: &Cli, state: Option<&std::path::Path>, pref: Option<&std::path::Path>, cancel: &CancelToken) -> ExitCode {
    let limits = match limits_for(cli.cap, cancel) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let mut session = Session::new(limits);
    let mut preload = Vec::new();
    if let Some(p) = state {
        preload.push(format!(":load {}", p.display()));
    }
    if let Some(p) = pref {
        preload.push(format!(":pref {}", p.display()));
    }
    for line in preload {
        let out = session.step(&line);
        print!("{}", out.text);
    }
    let interactive = io::stdin().is_terminal();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            print!("> ");
            let _ = io::stdout().flush();
        }
        let Some(Ok(line)) = lines.next() else { break };
        cancel.reset();
        let out = session.step(&line);
        print!("{}", out.text);
        if out.quit {
            break;
        }
    }
    ExitCode::SUCCESS
}
