use std::path::Path;

use omega_agm::belief::{contract, expand, EpistemicState};
use omega_agm::limits::Limits;
use omega_agm::preference::{choice, BuchiMealyAutomaton};

use crate::{
    digest, entail_text, formula, normalize, read_preference, read_state, state_hoa, CliError, CliResult, EXIT_INPUT,
};

/// REPL state: the current epistemic state, the states it replaced, and the
/// active preference.
#[derive(Debug, Clone)]
pub struct Session {
    current: Option<EpistemicState>,
    /// One entry per mutating command: the command line and the digest of
    /// the state it produced.
    history: Vec<(String, String)>,
    previous: Vec<Option<EpistemicState>>,
    preference: Option<BuchiMealyAutomaton>,
    limits: Limits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutput {
    pub text: String,
    /// Exit code of the failed command, if it failed.
    pub error: Option<i32>,
    pub quit: bool,
}

impl StepOutput {
    fn ok(text: impl Into<String>) -> StepOutput {
        StepOutput {
            text: text.into(),
            error: None,
            quit: false,
        }
    }
}

const HELP: &str = "\
:load <state.hoa>   replace the current state
:pref <bm.hoa>      set the preference used by :contract
:entail <ltl>       decide whether the current state supports a formula
:expand <ltl>       expand the current state
:contract <ltl>     contract the current state under the preference
:undo               restore the state before the last change
:show               print the current state as canonical HOA
:history            list the changes with their digests
:quit               end the session
";

impl Session {
    pub fn new(limits: Limits) -> Session {
        Session {
            current: None,
            history: Vec::new(),
            previous: Vec::new(),
            preference: None,
            limits,
        }
    }

    pub fn current(&self) -> Option<&EpistemicState> {
        self.current.as_ref()
    }

    pub fn history(&self) -> &[(String, String)] {
        &self.history
    }

    /// Digest of the current state, if one is loaded.
    pub fn digest(&self) -> Option<String> {
        self.current.as_ref().map(digest)
    }

    /// Runs one line. Errors are reported in the output and leave the
    /// session unchanged.
    pub fn step(&mut self, line: &str) -> StepOutput {
        match self.dispatch(line.trim()) {
            Ok(out) => out,
            Err(e) => StepOutput {
                text: format!("error: {}\n", e.message),
                error: Some(e.code),
                quit: false,
            },
        }
    }

    fn dispatch(&mut self, line: &str) -> CliResult<StepOutput> {
        if line.is_empty() {
            return Ok(StepOutput::ok(""));
        }
        let (cmd, arg) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let arg = arg.trim();
        match cmd {
            ":load" => {
                let k = read_state(Path::new(need(arg, cmd)?))?;
                Ok(self.replace(line, k))
            }
            ":pref" => {
                self.preference = Some(read_preference(Path::new(need(arg, cmd)?))?);
                Ok(StepOutput::ok("preference loaded\n"))
            }
            ":entail" => {
                let k = self.state()?;
                let f = formula(need(arg, cmd)?, k.alphabet())?;
                Ok(StepOutput::ok(entail_text(k, &f, arg)?))
            }
            ":expand" => {
                let k = self.state()?;
                let f = formula(need(arg, cmd)?, k.alphabet())?;
                let r = expand(k, &f).map_err(|e| CliError::from_core(arg, e))?;
                Ok(self.replace(line, r))
            }
            ":contract" => {
                let k = self.state()?;
                let f = formula(need(arg, cmd)?, k.alphabet())?;
                let b = self
                    .preference
                    .as_ref()
                    .ok_or_else(|| CliError::input(":contract needs a preference; load one with :pref"))?;
                let c = contract(k, &f, &choice(b), &self.limits).map_err(|e| CliError::from_core(arg, e))?;
                let mut out = self.replace(line, c.state);
                out.text = format!("branch: {}\n{}", c.branch, out.text);
                Ok(out)
            }
            ":undo" => match self.previous.pop() {
                None => Err(CliError::input("nothing to undo")),
                Some(k) => {
                    self.history.pop();
                    self.current = k;
                    Ok(StepOutput::ok(match self.digest() {
                        Some(d) => format!("state {d}\n"),
                        None => "no state\n".to_owned(),
                    }))
                }
            },
            ":show" => Ok(StepOutput::ok(state_hoa(self.state()?))),
            ":history" => Ok(StepOutput::ok(
                self.history
                    .iter()
                    .map(|(c, d)| format!("{d}  {c}\n"))
                    .collect::<String>(),
            )),
            ":help" => Ok(StepOutput::ok(HELP)),
            ":quit" | ":q" => Ok(StepOutput {
                text: String::new(),
                error: None,
                quit: true,
            }),
            other => Err(CliError::input(format!("unknown command `{other}`; try :help"))),
        }
    }

    fn state(&self) -> CliResult<&EpistemicState> {
        self.current
            .as_ref()
            .ok_or_else(|| CliError::input("no state loaded; use :load <state.hoa>"))
    }

    fn replace(&mut self, line: &str, k: EpistemicState) -> StepOutput {
        let k = normalize(&k);
        let d = digest(&k);
        self.previous.push(self.current.replace(k));
        self.history.push((line.to_owned(), d.clone()));
        StepOutput::ok(format!("state {d}\n"))
    }
}

fn need<'a>(arg: &'a str, cmd: &str) -> CliResult<&'a str> {
    if arg.is_empty() {
        Err(CliError {
            code: EXIT_INPUT,
            message: format!("{cmd} needs an argument"),
        })
    } else {
        Ok(arg)
    }
}
