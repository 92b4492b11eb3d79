//! Exploration sessions: a current state, the trace that led there and a
//! key counter that never hands out a key twice.

use revpi::bs_oracle::AnnotatedTransition;
use revpi::causality::CausalityGraph;
use revpi::{lift, parse_process, Direction, Key, KeySupply, Process, RProcess, SemanticsKind, Transition};
use serde::Serialize;

use crate::state::{enabled, transition_id, views, TransitionView};

#[derive(Clone, Debug, Serialize)]
pub struct Session {
    pub id: String,
    pub semantics: SemanticsKind,
    pub source: Process,
    pub initial: RProcess,
    pub current: RProcess,
    pub trace: Vec<AnnotatedTransition>,
    pub next_key: Key,
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("transition {0} is not enabled in the current state")]
    NotEnabled(String),
    #[error("no {dir} transition with index {index} ({available} enabled)")]
    OutOfRange { dir: &'static str, index: usize, available: usize },
}

impl Session {
    pub fn new(id: String, source: &str, semantics: SemanticsKind) -> Result<Self, revpi::syntax::ParseError> {
        let p = parse_process(source)?;
        let initial = lift(&p, semantics);
        Ok(Session {
            id,
            semantics,
            source: p,
            current: initial.clone(),
            initial,
            trace: Vec::new(),
            next_key: Key(1),
        })
    }

    pub fn enabled(&self, dir: Option<Direction>) -> Vec<Transition> {
        enabled(self.semantics, &self.current, dir, KeySupply::Fixed(self.next_key))
    }

    pub fn transitions(&self, dir: Option<Direction>) -> Vec<TransitionView> {
        views(&self.enabled(dir))
    }

    fn apply(&mut self, t: Transition) -> &AnnotatedTransition {
        if t.dir == Direction::Forward {
            self.next_key = Key(self.next_key.0.max(t.label.key.0) + 1);
        }
        self.current = t.target.clone();
        self.trace.push(AnnotatedTransition::new(t));
        self.trace.last().unwrap()
    }

    /// Takes the enabled transition with the given content id.
    pub fn step(&mut self, id: &str) -> Result<&AnnotatedTransition, StepError> {
        let t = self
            .enabled(None)
            .into_iter()
            .find(|t| transition_id(t) == id)
            .ok_or_else(|| StepError::NotEnabled(id.to_owned()))?;
        Ok(self.apply(t))
    }

    /// Takes the `index`-th enabled transition in direction `dir`.
    pub fn step_index(&mut self, dir: Direction, index: usize) -> Result<&AnnotatedTransition, StepError> {
        let mut ts = self.enabled(Some(dir));
        if index >= ts.len() {
            return Err(StepError::OutOfRange {
                dir: dir.as_str(),
                index,
                available: ts.len(),
            });
        }
        Ok(self.apply(ts.swap_remove(index)))
    }

    pub fn causality(&self) -> CausalityGraph {
        let trace: Vec<Transition> = self.trace.iter().map(|a| a.transition.clone()).collect();
        CausalityGraph::of_trace(&trace)
    }

    /// Replays the recorded trace from the initial term, checking that each
    /// step is enabled where it was taken and that it ends in the current
    /// state.
    pub fn replays(&self) -> bool {
        let mut x = self.initial.clone();
        for a in &self.trace {
            let t = &a.transition;
            let supply = KeySupply::Fixed(t.label.key);
            if !enabled(self.semantics, &x, Some(t.dir), supply).contains(t) {
                return false;
            }
            x = t.target.clone();
        }
        x == self.current
    }
}
