//! Batch scripts for `revpi trace`.
//!
//! ```text
//! # comment
//! semantics bs
//! start new a.(b<a> | c<a> | a(z))
//! fwd 0          take the first enabled forward transition
//! bwd 1
//! expect fwd 2   fail unless exactly two forward transitions are enabled
//! ```
//!
//! `semantics` is optional (default rpi) and must precede `start`; `start`
//! takes the rest of the line as process source and must come before any
//! step.

use revpi::{Direction, SemanticsKind};
use serde::Serialize;

use crate::session::{Session, StepError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Semantics(SemanticsKind),
    Start(String),
    Step(Direction, usize),
    Expect(Direction, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub number: usize,
    pub command: Command,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Step { line: usize, source: StepError },
    #[error("line {line}: expected {expected} {dir} transitions, found {found}")]
    Expectation {
        line: usize,
        dir: &'static str,
        expected: usize,
        found: usize,
    },
}

fn direction(word: &str) -> Option<Direction> {
    match word {
        "fwd" => Some(Direction::Forward),
        "bwd" => Some(Direction::Backward),
        _ => None,
    }
}

pub fn parse_script(text: &str) -> Result<Vec<Line>, ScriptError> {
    let mut out = Vec::new();
    let mut started = false;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let err = |message: String| ScriptError::Syntax { line: number, message };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let index = |s: &str| s.parse::<usize>().map_err(|_| err(format!("expected an index, found {s:?}")));
        let command = match word {
            "semantics" if started => return Err(err("semantics must come before start".into())),
            "semantics" => Command::Semantics(rest.parse().map_err(|e| err(format!("{e}")))?),
            "start" if started => return Err(err("start given twice".into())),
            "start" => {
                started = true;
                Command::Start(rest.to_owned())
            }
            "expect" => {
                let (d, n) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let d = direction(d).ok_or_else(|| err(format!("expected fwd or bwd, found {d:?}")))?;
                Command::Expect(d, index(n.trim())?)
            }
            _ => match direction(word) {
                Some(d) => Command::Step(d, index(rest)?),
                None => return Err(err(format!("unknown command {word:?}"))),
            },
        };
        if matches!(command, Command::Step(..) | Command::Expect(..)) && !started {
            return Err(err("step before start".into()));
        }
        out.push(Line { number, command });
    }
    if !started {
        return Err(ScriptError::Syntax {
            line: text.lines().count(),
            message: "script has no start line".into(),
        });
    }
    Ok(out)
}

/// One executed step, for printing.
#[derive(Clone, Debug, Serialize)]
pub struct TraceLine {
    pub line: usize,
    pub dir: Direction,
    pub label: String,
    pub state: String,
}

/// Runs a parsed script; the returned session holds the full trace.
pub fn run_script(lines: &[Line]) -> Result<(Session, Vec<TraceLine>), ScriptError> {
    let mut kind = SemanticsKind::Rpi;
    let mut session: Option<Session> = None;
    let mut out = Vec::new();
    for Line { number, command } in lines {
        let line = *number;
        match command {
            Command::Semantics(k) => kind = *k,
            Command::Start(src) => {
                let s = Session::new("script".into(), src, kind).map_err(|e| ScriptError::Syntax {
                    line,
                    message: e.to_string(),
                })?;
                session = Some(s);
            }
            Command::Step(dir, index) => {
                let s = session.as_mut().expect("parser orders start first");
                let a = s.step_index(*dir, *index).map_err(|source| ScriptError::Step { line, source })?;
                out.push(TraceLine {
                    line,
                    dir: *dir,
                    label: a.transition.label.to_string(),
                    state: a.transition.target.to_string(),
                });
            }
            Command::Expect(dir, expected) => {
                let s = session.as_ref().expect("parser orders start first");
                let found = s.enabled(Some(*dir)).len();
                if found != *expected {
                    return Err(ScriptError::Expectation {
                        line,
                        dir: dir.as_str(),
                        expected: *expected,
                        found,
                    });
                }
            }
        }
    }
    Ok((session.expect("parser requires start"), out))
}
