//! State files and the canonical listing of enabled transitions.

use revpi::syntax::{key_set, ParseError};
use revpi::{lift, parse_process, Direction, Engine, Key, KeySupply, Label, Lts, RProcess, SemanticsKind, Transition};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A reversible process together with the semantics it runs under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateFile {
    pub semantics: SemanticsKind,
    pub state: RProcess,
}

#[derive(Debug, thiserror::Error)]
pub enum StateError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid state JSON: {0}")]
    Json(serde_json::Error),
}

impl StateFile {
    /// Reads either the JSON form written by `step` or process source, which
    /// is lifted under `kind`.
    pub fn load(text: &str, kind: SemanticsKind) -> Result<Self, StateError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(StateError::Json);
        }
        let p = parse_process(text)?;
        Ok(StateFile {
            semantics: kind,
            state: lift(&p, kind),
        })
    }
}

/// One enabled transition as listed to users and clients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionView {
    pub index: usize,
    pub id: String,
    pub dir: Direction,
    pub label: Label,
    pub text: String,
    pub target: RProcess,
    pub target_text: String,
}

/// Content address of a transition: the same step from the same state
/// always gets the same id, and a step that is no longer enabled gets an id
/// nothing else matches.
pub fn transition_id(t: &Transition) -> String {
    let bytes = serde_json::to_vec(&(&t.source, t.dir, &t.label, &t.target)).expect("transitions serialize");
    hex::encode(&Sha256::digest(&bytes)[..8])
}

/// Enabled transitions in a stable order: forward before backward, then by
/// label and target. `dir = None` lists both directions.
pub fn enabled(kind: SemanticsKind, x: &RProcess, dir: Option<Direction>, supply: KeySupply) -> Vec<Transition> {
    let engine = Engine::new(kind);
    let mut v = Vec::new();
    if dir != Some(Direction::Backward) {
        v.extend(engine.forward(x, supply));
    }
    if dir != Some(Direction::Forward) {
        v.extend(engine.backward(x));
    }
    v.sort_by(|a, b| (a.dir, &a.label, &a.target).cmp(&(b.dir, &b.label, &b.target)));
    v
}

pub fn views(ts: &[Transition]) -> Vec<TransitionView> {
    ts.iter()
        .enumerate()
        .map(|(index, t)| TransitionView {
            index,
            id: transition_id(t),
            dir: t.dir,
            label: t.label.clone(),
            text: format!("{} {}", t.dir.as_str(), t.label),
            target: t.target.clone(),
            target_text: t.target.to_string(),
        })
        .collect()
}

/// The key after every key occurring in `x`.
pub fn next_key(x: &RProcess) -> Key {
    Key(key_set(x).iter().map(|k| k.0).max().unwrap_or(0) + 1)
}
