//! Command-line front end: batch subcommands and a line-oriented REPL over
//! epistemic states stored as HOA files.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use omega_agm::automata::{
    complement, from_ltl, inclusion_counterexample, is_empty, parse_hoa, to_dot, to_hoa, BuchiAutomaton, HoaDocument,
};
use omega_agm::belief::{
    check_postulates, contract, entailment_counterexample, expand, model_consistent, EpistemicState,
};
use omega_agm::kripke::KripkeStructure;
use omega_agm::limits::{CancelToken, Limits, DEFAULT_COMPLEMENT_CAP, MAX_COMPLEMENT_CAP};
use omega_agm::preference::{choice, earliest_occurrence, BuchiMealyAutomaton};
use omega_agm::{parse_ltl, Alphabet, AlphabetRef, Error, Formula};
use sha2::{Digest, Sha256};

mod session;

pub use session::{Session, StepOutput};

/// Environment variable holding the default complement cap.
pub const CAP_ENV: &str = "OMEGA_AGM_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;
pub const EXIT_CHOICE: i32 = 3;
pub const EXIT_CANCELLED: i32 = 130;

/// A failed command: the exit code and a message naming the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> CliError {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn from_core(context: &str, e: Error) -> CliError {
        CliError {
            code: exit_code(&e),
            message: format!("{context}: {e}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapacityExceeded { .. } | Error::StateBudgetExceeded { .. } | Error::TooManyProps { .. } => {
            EXIT_CAPACITY
        }
        Error::MaximalCutViolated { .. } | Error::ChoiceViolation { .. } => EXIT_CHOICE,
        Error::Cancelled => EXIT_CANCELLED,
        _ => EXIT_INPUT,
    }
}

/// Result of one batch invocation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "omega-agm", version, about = "Belief change over LTL epistemic states")]
pub struct Cli {
    /// Largest automaton (in states, after reduction) that may be complemented.
    #[arg(long, global = true, env = CAP_ENV, default_value_t = DEFAULT_COMPLEMENT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translate an LTL formula to a Büchi automaton.
    Translate {
        ltl: String,
        /// Comma-separated propositions; defaults to the formula's atoms.
        #[arg(long, value_delimiter = ',')]
        ap: Vec<String>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Print an accepted lasso, or EMPTY.
    Empty { input: PathBuf },
    /// Decide L(a) ⊆ L(b).
    Include { a: PathBuf, b: PathBuf },
    /// Decide whether a state supports a formula.
    Entail { state: PathBuf, ltl: String },
    /// Decide whether every trace of a Kripke structure is a model of a state.
    Modelcheck { state: PathBuf, kripke: PathBuf },
    /// Expand a state by a formula.
    Expand {
        state: PathBuf,
        ltl: String,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Contract a state by a formula under a preference automaton.
    Contract {
        state: PathBuf,
        ltl: String,
        #[arg(long)]
        pref: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Check the basic contraction postulates on one instance.
    Postulates {
        state: PathBuf,
        ltl: String,
        #[arg(long)]
        pref: PathBuf,
        /// Extensionality partner; defaults to the double negation of the formula.
        #[arg(long)]
        partner: Option<String>,
    },
    /// Complement an automaton.
    Complement {
        input: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Render an automaton in Graphviz DOT.
    Dot {
        input: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Write the earliest-occurrence preference for a proposition.
    Earliest {
        prop: String,
        #[arg(long, value_delimiter = ',', required = true)]
        ap: Vec<String>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Print the digest of a state's pruned canonical automaton.
    Digest { state: PathBuf },
    /// Start an interactive session.
    Repl {
        state: Option<PathBuf>,
        #[arg(long)]
        pref: Option<PathBuf>,
    },
}

pub fn limits_for(cap: usize, cancel: &CancelToken) -> CliResult<Limits> {
    if cap == 0 || cap > MAX_COMPLEMENT_CAP {
        return Err(CliError::input(format!(
            "--cap must be between 1 and {MAX_COMPLEMENT_CAP}, got {cap}"
        )));
    }
    Ok(Limits::with_cap(cap).with_cancel(cancel.clone()))
}

/// Parses `argv` (program name first) and runs every subcommand except
/// `repl`, which needs a terminal loop and is driven by the binary.
pub fn run_command<S: AsRef<str>>(argv: &[S], cancel: &CancelToken) -> CommandOutput {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli, cancel) {
        Ok(stdout) => CommandOutput {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => CommandOutput {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

pub fn execute(cli: &Cli, cancel: &CancelToken) -> CliResult<String> {
    let limits = limits_for(cli.cap, cancel)?;
    match &cli.command {
        Command::Translate { ltl, ap, o } => {
            let ab = if ap.is_empty() {
                infer_alphabet(ltl)?
            } else {
                Alphabet::shared(ap.iter().cloned()).map_err(|e| CliError::from_core("--ap", e))?
            };
            let f = formula(ltl, &ab)?;
            let a = from_ltl(&f, &ab).map_err(|e| CliError::from_core(ltl, e))?;
            emit(o.as_deref(), to_hoa(&a.canonical()))
        }
        Command::Empty { input } => {
            let a = read_automaton(input)?;
            Ok(match is_empty(&a) {
                None => "EMPTY\n".into(),
                Some(w) => format!("{}\n", w.display(a.alphabet())),
            })
        }
        Command::Include { a, b } => {
            let (x, y) = (read_automaton(a)?, read_automaton(b)?);
            let context = format!("{} ⊆ {}", a.display(), b.display());
            match inclusion_counterexample(&x, &y, &limits).map_err(|e| CliError::from_core(&context, e))? {
                None => Ok("true\n".into()),
                Some(t) => Ok(format!("false\ncounterexample: {}\n", t.display(x.alphabet()))),
            }
        }
        Command::Entail { state, ltl } => {
            let k = read_state(state)?;
            let f = formula(ltl, k.alphabet())?;
            entail_text(&k, &f, ltl)
        }
        Command::Modelcheck { state, kripke } => {
            let k = read_state(state)?;
            let text = read_text(kripke)?;
            let m = KripkeStructure::parse(&text, k.alphabet().clone())
                .map_err(|e| CliError::from_core(&kripke.display().to_string(), e))?;
            let ok =
                model_consistent(&k, &m, &limits).map_err(|e| CliError::from_core(&kripke.display().to_string(), e))?;
            Ok(format!("{ok}\n"))
        }
        Command::Expand { state, ltl, o } => {
            let k = read_state(state)?;
            let f = formula(ltl, k.alphabet())?;
            let r = expand(&k, &f).map_err(|e| CliError::from_core(ltl, e))?;
            emit(o.as_deref(), state_hoa(&r))
        }
        Command::Contract { state, ltl, pref, o } => {
            let k = read_state(state)?;
            let b = read_preference(pref)?;
            let f = formula(ltl, k.alphabet())?;
            let c = contract(&k, &f, &choice(&b), &limits).map_err(|e| CliError::from_core(ltl, e))?;
            let branch = format!("branch: {}\n", c.branch);
            match o {
                Some(path) => {
                    write_file(path, &state_hoa(&c.state))?;
                    Ok(branch)
                }
                None => Ok(format!("{branch}{}", state_hoa(&c.state))),
            }
        }
        Command::Postulates {
            state,
            ltl,
            pref,
            partner,
        } => {
            let k = read_state(state)?;
            let b = read_preference(pref)?;
            let f = formula(ltl, k.alphabet())?;
            let g = match partner {
                Some(text) => formula(text, k.alphabet())?,
                None => Formula::not(Formula::not(f.clone())),
            };
            let report = check_postulates(&k, &f, &g, &choice(&b), &limits).map_err(|e| CliError::from_core(ltl, e))?;
            Ok(format!("{report}\nall hold: {}\n", report.all_hold()))
        }
        Command::Complement { input, o } => {
            let a = read_automaton(input)?;
            let c = complement(&a, &limits).map_err(|e| CliError::from_core(&input.display().to_string(), e))?;
            emit(o.as_deref(), to_hoa(&c.canonical()))
        }
        Command::Dot { input, o } => {
            let a = read_automaton(input)?;
            let name = input.file_stem().and_then(|s| s.to_str()).unwrap_or("automaton");
            emit(o.as_deref(), to_dot(&a, name))
        }
        Command::Earliest { prop, ap, o } => {
            let ab = Alphabet::shared(ap.iter().cloned()).map_err(|e| CliError::from_core("--ap", e))?;
            let b = earliest_occurrence(&ab, prop).map_err(|e| CliError::from_core(prop, e))?;
            emit(o.as_deref(), b.to_hoa())
        }
        Command::Digest { state } => Ok(format!("{}\n", digest(&read_state(state)?))),
        Command::Repl { .. } => Err(CliError::input("repl must be run interactively")),
    }
}

/// SHA-256 of the canonical HOA of the trimmed automaton, in hex. Labels
/// and state numbering do not affect it.
pub fn digest(k: &EpistemicState) -> String {
    let text = to_hoa(&pruned(k.automaton()));
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn pruned(a: &BuchiAutomaton) -> BuchiAutomaton {
    a.trim().canonical()
}

/// The form states are read, stored and written in: pruned and canonical,
/// with the label kept. Batch and REPL runs thus operate on identical
/// automata.
pub fn normalize(k: &EpistemicState) -> EpistemicState {
    EpistemicState::from_hoa(HoaDocument {
        automaton: pruned(k.automaton()),
        label: k.label().map(str::to_owned),
        mealy_inputs: None,
    })
}

pub fn state_hoa(k: &EpistemicState) -> String {
    normalize(k).to_hoa()
}

pub(crate) fn entail_text(k: &EpistemicState, f: &Formula, ltl: &str) -> CliResult<String> {
    match entailment_counterexample(k, f).map_err(|e| CliError::from_core(ltl, e))? {
        None => Ok("true\n".into()),
        Some(t) => Ok(format!("false\ncounterexample: {}\n", t.display(k.alphabet()))),
    }
}

pub(crate) fn formula(text: &str, ab: &Alphabet) -> CliResult<Formula> {
    parse_ltl(text, ab).map_err(|e| CliError::from_core(&format!("formula `{text}`"), e))
}

/// Propositions of `text` in sorted order, found by letting the parser
/// report unknown atoms one at a time.
fn infer_alphabet(text: &str) -> CliResult<AlphabetRef> {
    let mut props: Vec<String> = Vec::new();
    loop {
        let candidate = if props.is_empty() {
            vec!["p".to_owned()]
        } else {
            props.clone()
        };
        let ab =
            Alphabet::shared(candidate.clone()).map_err(|e| CliError::from_core(&format!("formula `{text}`"), e))?;
        match parse_ltl(text, &ab) {
            Ok(f) => {
                let mut atoms: Vec<String> = f.atoms().into_iter().collect();
                if atoms.is_empty() {
                    atoms = candidate;
                }
                atoms.sort();
                return Alphabet::shared(atoms).map_err(|e| CliError::from_core(&format!("formula `{text}`"), e));
            }
            Err(Error::UnknownAtom(a)) if !props.contains(&a) => props.push(a),
            Err(e) => return Err(CliError::from_core(&format!("formula `{text}`"), e)),
        }
    }
}

pub(crate) fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> CliResult<HoaDocument> {
    parse_hoa(&read_text(path)?).map_err(|e| CliError::from_core(&path.display().to_string(), e))
}

fn read_automaton(path: &Path) -> CliResult<BuchiAutomaton> {
    Ok(read_document(path)?.automaton)
}

pub(crate) fn read_state(path: &Path) -> CliResult<EpistemicState> {
    Ok(normalize(&EpistemicState::from_hoa(read_document(path)?)))
}

pub(crate) fn read_preference(path: &Path) -> CliResult<BuchiMealyAutomaton> {
    BuchiMealyAutomaton::from_hoa(read_document(path)?).map_err(|e| CliError::from_core(&path.display().to_string(), e))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: String) -> CliResult<String> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Runs one REPL line against `session`.
pub fn repl_step(session: &mut Session, line: &str) -> StepOutput {
    session.step(line)
}
