//! Abstract syntax for plain and reversible processes.
//!
//! Plain processes ([`Process`]) are ordinary π-calculus terms. Reversible
//! processes ([`RProcess`]) extend them with executed ("past") prefixes that
//! carry a key and a contextual cause set, restrictions decorated with an
//! extrusion [`Memory`], and names decorated with an instantiator.
//!
//! A reversible process has no separate "lifted" constructor: the active part
//! of a term is the fragment built from `Nil`, `Out`, `In`, `Par` and `New`
//! with an empty memory, which is exactly the image of [`lift`].

mod context;
mod parse;
mod print;
mod term;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::memory::Memory;

pub use context::{decompositions, Frame, GeneralContext, HistoryContext};
pub use parse::{parse_process, ParseError};
pub use print::ReversibleDisplay;
pub use term::{
    alpha_equivalent, erase, erase_label, free_names, has_unique_binders, key_multiset, key_set,
    lift, occurs, substitute, unsubstitute, uniquify,
};

/// Channel names, variables and restricted names share one lexical space.
pub type Ident = Arc<str>;

/// Identifier of an executed action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Key(pub u32);

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A key or the distinguished `*` ("no key").
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyStar {
    Star,
    Key(Key),
}

impl KeyStar {
    pub fn key(self) -> Option<Key> {
        match self {
            KeyStar::Star => None,
            KeyStar::Key(k) => Some(k),
        }
    }

    pub fn is_star(self) -> bool {
        self == KeyStar::Star
    }
}

impl From<Key> for KeyStar {
    fn from(k: Key) -> Self {
        KeyStar::Key(k)
    }
}

impl fmt::Display for KeyStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyStar::Star => f.write_str("*"),
            KeyStar::Key(k) => write!(f, "{k}"),
        }
    }
}

impl Serialize for KeyStar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            KeyStar::Star => s.serialize_str("*"),
            KeyStar::Key(k) => s.serialize_u32(k.0),
        }
    }
}

impl<'de> Deserialize<'de> for KeyStar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(KeyStar::Key(Key(n))),
            Raw::Str(s) if s == "*" => Ok(KeyStar::Star),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a key or \"*\", found {s:?}"
            ))),
        }
    }
}

/// Contextual cause set. Never empty: "no cause" is `{*}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CauseSet(BTreeSet<KeyStar>);

impl CauseSet {
    pub fn star() -> Self {
        CauseSet(BTreeSet::from([KeyStar::Star]))
    }

    pub fn singleton(k: Key) -> Self {
        CauseSet(BTreeSet::from([KeyStar::Key(k)]))
    }

    /// Builds a cause set; an empty iterator yields `{*}`.
    pub fn from_iter_or_star(items: impl IntoIterator<Item = KeyStar>) -> Self {
        let set: BTreeSet<KeyStar> = items.into_iter().collect();
        if set.is_empty() {
            Self::star()
        } else {
            CauseSet(set)
        }
    }

    pub fn union(&self, other: impl IntoIterator<Item = KeyStar>) -> Self {
        let mut set = self.0.clone();
        set.extend(other);
        CauseSet(set)
    }

    pub fn with(&self, item: KeyStar) -> Self {
        self.union([item])
    }

    pub fn contains(&self, item: KeyStar) -> bool {
        self.0.contains(&item)
    }

    pub fn contains_key(&self, k: Key) -> bool {
        self.0.contains(&KeyStar::Key(k))
    }

    pub fn has_star(&self) -> bool {
        self.0.contains(&KeyStar::Star)
    }

    pub fn is_star(&self) -> bool {
        self.0.len() == 1 && self.has_star()
    }

    /// The single element, if this is a singleton.
    pub fn as_singleton(&self) -> Option<KeyStar> {
        if self.0.len() == 1 {
            self.0.iter().next().copied()
        } else {
            None
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = Key> + '_ {
        self.0.iter().filter_map(|k| k.key())
    }

    pub fn iter(&self) -> impl Iterator<Item = KeyStar> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'de> Deserialize<'de> for CauseSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let set = BTreeSet::<KeyStar>::deserialize(d)?;
        if set.is_empty() {
            return Err(serde::de::Error::custom("cause set must not be empty"));
        }
        Ok(CauseSet(set))
    }
}

impl fmt::Display for CauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(single) = self.as_singleton() {
            return write!(f, "{single}");
        }
        f.write_str("{")?;
        for (n, k) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("}")
    }
}

/// A channel name decorated with its instantiator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Name {
    #[serde(rename = "name")]
    pub base: Ident,
    pub inst: KeyStar,
}

impl Name {
    pub fn star(base: impl Into<Ident>) -> Self {
        Name {
            base: base.into(),
            inst: KeyStar::Star,
        }
    }

    pub fn inst(base: impl Into<Ident>, key: Key) -> Self {
        Name {
            base: base.into(),
            inst: KeyStar::Key(key),
        }
    }
}

/// Standard π-calculus process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Process {
    Nil,
    Out {
        subj: Ident,
        obj: Ident,
        cont: Box<Process>,
    },
    In {
        subj: Ident,
        binder: Ident,
        cont: Box<Process>,
    },
    Par {
        left: Box<Process>,
        right: Box<Process>,
    },
    New {
        name: Ident,
        body: Box<Process>,
    },
}

impl Process {
    pub fn out(subj: &str, obj: &str, cont: Process) -> Self {
        Process::Out {
            subj: subj.into(),
            obj: obj.into(),
            cont: Box::new(cont),
        }
    }

    pub fn input(subj: &str, binder: &str, cont: Process) -> Self {
        Process::In {
            subj: subj.into(),
            binder: binder.into(),
            cont: Box::new(cont),
        }
    }

    pub fn par(left: Process, right: Process) -> Self {
        Process::Par {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn new(name: &str, body: Process) -> Self {
        Process::New {
            name: name.into(),
            body: Box::new(body),
        }
    }

    /// Number of prefixes in the term.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil => 0,
            Process::Out { cont, .. } | Process::In { cont, .. } => 1 + cont.size(),
            Process::Par { left, right } => left.size() + right.size(),
            Process::New { body, .. } => body.size(),
        }
    }
}

/// Reversible process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RProcess {
    Nil,
    Out {
        subj: Name,
        obj: Name,
        cont: Box<RProcess>,
    },
    In {
        subj: Name,
        binder: Ident,
        cont: Box<RProcess>,
    },
    PastOut {
        subj: Name,
        obj: Name,
        key: Key,
        cause: CauseSet,
        cont: Box<RProcess>,
    },
    PastIn {
        subj: Name,
        binder: Ident,
        key: Key,
        cause: CauseSet,
        cont: Box<RProcess>,
    },
    Par {
        left: Box<RProcess>,
        right: Box<RProcess>,
    },
    New {
        name: Ident,
        mem: Memory,
        body: Box<RProcess>,
    },
}

impl RProcess {
    pub fn par(left: RProcess, right: RProcess) -> Self {
        RProcess::Par {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn new(name: Ident, mem: Memory, body: RProcess) -> Self {
        RProcess::New {
            name,
            mem,
            body: Box::new(body),
        }
    }

    /// True when the term has no history: no past prefixes and every memory
    /// is empty.
    pub fn is_plain(&self) -> bool {
        match self {
            RProcess::Nil => true,
            RProcess::Out { cont, .. } | RProcess::In { cont, .. } => cont.is_plain(),
            RProcess::PastOut { .. } | RProcess::PastIn { .. } => false,
            RProcess::Par { left, right } => left.is_plain() && right.is_plain(),
            RProcess::New { mem, body, .. } => mem.is_empty() && body.is_plain(),
        }
    }

    /// Key and cause of a past prefix; `None` for other constructors.
    pub fn past_key(&self) -> Option<(Key, &CauseSet)> {
        match self {
            RProcess::PastOut { key, cause, .. } | RProcess::PastIn { key, cause, .. } => {
                Some((*key, cause))
            }
            _ => None,
        }
    }
}

/// Position of a past prefix, ignoring restriction nodes so that positions
/// survive scope closing (which wraps a parallel composition in a new
/// restriction).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<Step>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Left,
    Right,
    Under,
}

impl RProcess {
    /// Restriction-insensitive positions of every past prefix carrying `key`.
    pub fn positions_of(&self, key: Key) -> BTreeSet<Position> {
        fn go(x: &RProcess, key: Key, path: &mut Vec<Step>, out: &mut BTreeSet<Position>) {
            match x {
                RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => {}
                RProcess::PastOut { key: k, cont, .. } | RProcess::PastIn { key: k, cont, .. } => {
                    if *k == key {
                        out.insert(Position(path.clone()));
                    }
                    path.push(Step::Under);
                    go(cont, key, path, out);
                    path.pop();
                }
                RProcess::Par { left, right } => {
                    path.push(Step::Left);
                    go(left, key, path, out);
                    path.pop();
                    path.push(Step::Right);
                    go(right, key, path, out);
                    path.pop();
                }
                RProcess::New { body, .. } => go(body, key, path, out),
            }
        }
        let mut out = BTreeSet::new();
        go(self, key, &mut Vec::new(), &mut out);
        out
    }
}
