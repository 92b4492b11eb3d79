//! Extrusion memories and the per-semantics cause predicates.
//!
//! Every restriction carries a [`Memory`] recording which actions extruded
//! the restricted name. The shape of the memory selects the causal
//! semantics: a plain set gives the Rπ reading (any extruder may be picked
//! as cause), a set indexed by its first extruder gives Boreale–Sangiorgi
//! causality, and a set indexed by a set gives disjunctive causality in the
//! style of Crafa, Varacca and Yoshida.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::{CauseSet, Key, KeyStar, RProcess};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsKind {
    Rpi,
    Bs,
    Cvy,
}

impl SemanticsKind {
    pub const ALL: [SemanticsKind; 3] = [SemanticsKind::Rpi, SemanticsKind::Bs, SemanticsKind::Cvy];

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsKind::Rpi => "rpi",
            SemanticsKind::Bs => "bs",
            SemanticsKind::Cvy => "cvy",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown semantics {0:?} (expected rpi, bs or cvy)")]
pub struct UnknownSemantics(pub String);

impl FromStr for SemanticsKind {
    type Err = UnknownSemantics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rpi" => Ok(SemanticsKind::Rpi),
            "bs" => Ok(SemanticsKind::Bs),
            "cvy" => Ok(SemanticsKind::Cvy),
            _ => Err(UnknownSemantics(s.to_owned())),
        }
    }
}

/// Extrusion memory Δ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", try_from = "RawMemory", into = "RawMemory")]
pub enum Memory {
    /// Γ
    Set { gamma: BTreeSet<Key> },
    /// Γ_w
    Indexed { gamma: BTreeSet<Key>, w: KeyStar },
    /// Γ_Ω
    SetIndexed {
        gamma: BTreeSet<Key>,
        omega: BTreeSet<KeyStar>,
    },
}

impl Memory {
    pub fn init(kind: SemanticsKind) -> Self {
        match kind {
            SemanticsKind::Rpi => Memory::Set {
                gamma: BTreeSet::new(),
            },
            SemanticsKind::Bs => Memory::Indexed {
                gamma: BTreeSet::new(),
                w: KeyStar::Star,
            },
            SemanticsKind::Cvy => Memory::SetIndexed {
                gamma: BTreeSet::new(),
                omega: BTreeSet::from([KeyStar::Star]),
            },
        }
    }

    pub fn kind(&self) -> SemanticsKind {
        match self {
            Memory::Set { .. } => SemanticsKind::Rpi,
            Memory::Indexed { .. } => SemanticsKind::Bs,
            Memory::SetIndexed { .. } => SemanticsKind::Cvy,
        }
    }

    pub fn gamma(&self) -> &BTreeSet<Key> {
        match self {
            Memory::Set { gamma } | Memory::Indexed { gamma, .. } | Memory::SetIndexed { gamma, .. } => {
                gamma
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Memory::Set { gamma } => gamma.is_empty(),
            Memory::Indexed { gamma, w } => gamma.is_empty() && w.is_star(),
            Memory::SetIndexed { gamma, omega } => {
                gamma.is_empty() && omega.len() == 1 && omega.contains(&KeyStar::Star)
            }
        }
    }

    /// `Δ + i`
    pub fn add(&self, i: Key) -> Self {
        let mut m = self.clone();
        match &mut m {
            Memory::Set { gamma } => {
                gamma.insert(i);
            }
            Memory::Indexed { gamma, w } => {
                gamma.insert(i);
                if w.is_star() {
                    *w = KeyStar::Key(i);
                }
            }
            Memory::SetIndexed { gamma, omega } => {
                gamma.insert(i);
                omega.insert(KeyStar::Key(i));
            }
        }
        m
    }

    /// `i ∈ Δ`: membership in Γ, regardless of the index.
    pub fn contains(&self, i: Key) -> bool {
        self.gamma().contains(&i)
    }

    /// True when `i` appears anywhere in the memory, index included.
    pub fn mentions(&self, i: Key) -> bool {
        let k = KeyStar::Key(i);
        match self {
            Memory::Set { gamma } => gamma.contains(&i),
            Memory::Indexed { gamma, w } => gamma.contains(&i) || *w == k,
            Memory::SetIndexed { gamma, omega } => gamma.contains(&i) || omega.contains(&k),
        }
    }

    /// The `#i` operation on a single memory: drops `i` from the index.
    pub fn remove_index(&self, i: Key) -> Self {
        let mut m = self.clone();
        match &mut m {
            Memory::Set { .. } => {}
            Memory::Indexed { w, .. } => {
                if *w == KeyStar::Key(i) {
                    *w = KeyStar::Star;
                }
            }
            Memory::SetIndexed { omega, .. } => {
                omega.remove(&KeyStar::Key(i));
            }
        }
        m
    }

    /// Inverse of `+ i`, tolerant of a later `#i`: the result Δ satisfies
    /// `Δ + i = self` or `(Δ + i)#i = self`. `None` when `i ∉ Γ`.
    pub fn pop(&self, i: Key) -> Option<Self> {
        if !self.contains(i) {
            return None;
        }
        let mut m = self.remove_index(i);
        match &mut m {
            Memory::Set { gamma } | Memory::Indexed { gamma, .. } | Memory::SetIndexed { gamma, .. } => {
                gamma.remove(&i);
            }
        }
        Some(m)
    }

    /// The memory with the BS index ignored, for label equivalence.
    pub fn without_index(&self) -> Self {
        match self {
            Memory::Indexed { gamma, .. } => Memory::Indexed {
                gamma: gamma.clone(),
                w: KeyStar::Star,
            },
            other => other.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawMemory {
    Rpi {
        gamma: BTreeSet<Key>,
    },
    Bs {
        gamma: BTreeSet<Key>,
        w: KeyStar,
    },
    Cvy {
        gamma: BTreeSet<Key>,
        omega: BTreeSet<KeyStar>,
    },
}

impl From<Memory> for RawMemory {
    fn from(m: Memory) -> Self {
        match m {
            Memory::Set { gamma } => RawMemory::Rpi { gamma },
            Memory::Indexed { gamma, w } => RawMemory::Bs { gamma, w },
            Memory::SetIndexed { gamma, omega } => RawMemory::Cvy { gamma, omega },
        }
    }
}

impl TryFrom<RawMemory> for Memory {
    type Error = String;

    fn try_from(raw: RawMemory) -> Result<Self, String> {
        match raw {
            RawMemory::Rpi { gamma } => Ok(Memory::Set { gamma }),
            RawMemory::Bs { gamma, w } => match w {
                KeyStar::Key(k) if !gamma.contains(&k) => {
                    Err(format!("index {k} is not an element of the memory"))
                }
                _ => Ok(Memory::Indexed { gamma, w }),
            },
            RawMemory::Cvy { gamma, omega } => {
                if !omega.contains(&KeyStar::Star) {
                    return Err("index set must contain *".into());
                }
                if let Some(k) = omega.iter().filter_map(|k| k.key()).find(|k| !gamma.contains(k)) {
                    return Err(format!("index {k} is not an element of the memory"));
                }
                Ok(Memory::SetIndexed { gamma, omega })
            }
        }
    }
}

/// Applies `#i` to every memory in `x`.
pub fn remove_key(x: &RProcess, i: Key) -> RProcess {
    match x {
        RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => x.clone(),
        RProcess::PastOut {
            subj,
            obj,
            key,
            cause,
            cont,
        } => RProcess::PastOut {
            subj: subj.clone(),
            obj: obj.clone(),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(remove_key(cont, i)),
        },
        RProcess::PastIn {
            subj,
            binder,
            key,
            cause,
            cont,
        } => RProcess::PastIn {
            subj: subj.clone(),
            binder: binder.clone(),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(remove_key(cont, i)),
        },
        RProcess::Par { left, right } => RProcess::par(remove_key(left, i), remove_key(right, i)),
        RProcess::New { name, mem, body } => {
            RProcess::new(name.clone(), mem.remove_index(i), remove_key(body, i))
        }
    }
}

/// `i1 ⇝_X i2`: the past input keyed `i1` binds a variable whose
/// substitution instantiated the subject of the past action keyed `i2`,
/// which lies in the input's continuation.
pub fn instantiation_related(x: &RProcess, i1: Key, i2: Key) -> bool {
    fn find_input(x: &RProcess, i1: Key, i2: Key) -> bool {
        match x {
            RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => false,
            RProcess::PastIn { key, cont, .. } if *key == i1 => subject_inst(cont, i1, i2),
            RProcess::PastOut { cont, .. } | RProcess::PastIn { cont, .. } => {
                find_input(cont, i1, i2)
            }
            RProcess::Par { left, right } => find_input(left, i1, i2) || find_input(right, i1, i2),
            RProcess::New { body, .. } => find_input(body, i1, i2),
        }
    }
    fn subject_inst(x: &RProcess, j: Key, i2: Key) -> bool {
        match x {
            RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => false,
            RProcess::PastOut { subj, key, cont, .. } | RProcess::PastIn { subj, key, cont, .. } => {
                (*key == i2 && subj.inst == KeyStar::Key(j)) || subject_inst(cont, j, i2)
            }
            RProcess::Par { left, right } => subject_inst(left, j, i2) || subject_inst(right, j, i2),
            RProcess::New { body, .. } => subject_inst(body, j, i2),
        }
    }
    find_input(x, i1, i2)
}

/// Admissible new causes `K'` for an action with cause `k` whose subject is
/// the name restricted with memory `m` (rule Cause Ref). `x` is the process
/// under the restriction, used by the Rπ instantiation relation. Empty when
/// the memory is empty.
pub fn cause_candidates(m: &Memory, k: &CauseSet, x: &RProcess) -> Vec<CauseSet> {
    if m.is_empty() {
        return Vec::new();
    }
    match m {
        Memory::Set { gamma } => {
            if k.is_star() {
                return gamma.iter().map(|&g| CauseSet::singleton(g)).collect();
            }
            let mut out = vec![k.clone()];
            for cause in k.keys() {
                for &g in gamma {
                    let alt = CauseSet::singleton(g);
                    if g != cause && instantiation_related(x, cause, g) && !out.contains(&alt) {
                        out.push(alt);
                    }
                }
            }
            out.sort();
            out
        }
        Memory::Indexed { w, .. } => vec![k.with(*w)],
        Memory::SetIndexed { omega, .. } => vec![k.union(omega.iter().copied())],
    }
}

/// Whether a recorded cause `k` is still one that rule Cause Ref would
/// produce under `m`, i.e. `caus(m, K, k)` holds for some `K` (rule
/// Cause Ref•). Under Γ_Ω this fails once an extrusion newer than the
/// action has grown Ω.
pub fn cause_admissible(m: &Memory, k: &CauseSet) -> bool {
    if m.is_empty() {
        return false;
    }
    match m {
        Memory::Set { .. } => !k.is_star(),
        Memory::Indexed { w, .. } => k.contains(*w),
        Memory::SetIndexed { omega, .. } => omega.iter().all(|o| k.contains(*o)),
    }
}

/// Admissible new causes for an extrusion passing a restriction with memory
/// `m`, evaluated before the extruding key is added (rule Open).
pub fn update_candidates(m: &Memory, k: &CauseSet) -> Vec<CauseSet> {
    match m {
        Memory::Indexed { w, .. } => vec![k.with(*w)],
        Memory::Set { .. } | Memory::SetIndexed { .. } => vec![k.clone()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Name;

    fn keys(ks: &[u32]) -> BTreeSet<Key> {
        ks.iter().map(|&k| Key(k)).collect()
    }

    #[test]
    fn add_follows_each_instance() {
        let (i, h) = (Key(1), Key(2));
        let bs = Memory::init(SemanticsKind::Bs).add(i);
        assert_eq!(
            bs,
            Memory::Indexed {
                gamma: keys(&[1]),
                w: KeyStar::Key(i)
            }
        );
        assert_eq!(
            bs.add(h),
            Memory::Indexed {
                gamma: keys(&[1, 2]),
                w: KeyStar::Key(i)
            }
        );
        assert_eq!(
            Memory::init(SemanticsKind::Cvy).add(i).add(h),
            Memory::SetIndexed {
                gamma: keys(&[1, 2]),
                omega: BTreeSet::from([KeyStar::Star, KeyStar::Key(i), KeyStar::Key(h)]),
            }
        );
        assert!(Memory::init(SemanticsKind::Rpi).add(i).add(h).contains(h));
    }

    #[test]
    fn remove_index_examples() {
        let rpi = Memory::init(SemanticsKind::Rpi).add(Key(1));
        assert_eq!(rpi.remove_index(Key(1)), rpi);
        let bs = Memory::init(SemanticsKind::Bs).add(Key(1));
        assert_eq!(
            bs.remove_index(Key(1)),
            Memory::Indexed {
                gamma: keys(&[1]),
                w: KeyStar::Star
            }
        );
        let cvy = Memory::init(SemanticsKind::Cvy).add(Key(1)).add(Key(2));
        assert_eq!(
            cvy.remove_index(Key(1)),
            Memory::SetIndexed {
                gamma: keys(&[1, 2]),
                omega: BTreeSet::from([KeyStar::Star, KeyStar::Key(Key(2))]),
            }
        );
        let x = RProcess::new("a".into(), bs, RProcess::Nil);
        let RProcess::New { mem, .. } = remove_key(&x, Key(1)) else {
            unreachable!()
        };
        assert_eq!(mem.to_string(), "{1}_*");
    }

    #[test]
    fn pop_inverts_add_and_closed_add() {
        for kind in SemanticsKind::ALL {
            let base = Memory::init(kind).add(Key(3));
            let grown = base.add(Key(5));
            assert_eq!(grown.pop(Key(5)), Some(base.clone()));
            assert_eq!(grown.remove_index(Key(5)).pop(Key(5)), Some(base.clone()));
            assert_eq!(base.pop(Key(9)), None);
        }
        let bs = Memory::init(SemanticsKind::Bs);
        assert_eq!(bs.add(Key(1)).remove_index(Key(1)).pop(Key(1)), Some(bs));
    }

    #[test]
    fn cause_candidates_per_instance() {
        let (i, h) = (Key(1), Key(2));
        let star = CauseSet::star();
        let rpi = Memory::init(SemanticsKind::Rpi).add(i).add(h);
        assert_eq!(
            cause_candidates(&rpi, &star, &RProcess::Nil),
            vec![CauseSet::singleton(i), CauseSet::singleton(h)]
        );
        let bs = Memory::init(SemanticsKind::Bs).add(i);
        assert_eq!(
            cause_candidates(&bs, &star, &RProcess::Nil),
            vec![star.with(KeyStar::Key(i))]
        );
        let cvy = Memory::init(SemanticsKind::Cvy).add(i).add(h);
        assert_eq!(
            cause_candidates(&cvy, &star, &RProcess::Nil),
            vec![star.with(KeyStar::Key(i)).with(KeyStar::Key(h))]
        );
        assert!(cause_candidates(&Memory::init(SemanticsKind::Bs), &star, &RProcess::Nil).is_empty());
    }

    #[test]
    fn update_candidates_per_instance() {
        let star = CauseSet::star();
        let i = Key(1);
        assert_eq!(
            update_candidates(&Memory::init(SemanticsKind::Rpi).add(i), &star),
            vec![star.clone()]
        );
        assert_eq!(
            update_candidates(&Memory::init(SemanticsKind::Bs).add(i), &star),
            vec![star.with(KeyStar::Key(i))]
        );
        assert_eq!(
            update_candidates(&Memory::init(SemanticsKind::Bs), &star),
            vec![star]
        );
    }

    #[test]
    fn instantiation_relation_follows_the_substituted_subject() {
        let (i1, i2) = (Key(1), Key(2));
        let x = RProcess::PastIn {
            subj: Name::star("b"),
            binder: "x".into(),
            key: i1,
            cause: CauseSet::star(),
            cont: Box::new(RProcess::PastOut {
                subj: Name::inst("a", i1),
                obj: Name::star("c"),
                key: i2,
                cause: CauseSet::singleton(Key(7)),
                cont: Box::new(RProcess::Nil),
            }),
        };
        assert!(instantiation_related(&x, i1, i2));
        assert!(!instantiation_related(&x, i2, i1));
        let apart = RProcess::par(
            RProcess::PastIn {
                subj: Name::star("b"),
                binder: "x".into(),
                key: i1,
                cause: CauseSet::star(),
                cont: Box::new(RProcess::Nil),
            },
            RProcess::PastOut {
                subj: Name::star("a"),
                obj: Name::star("c"),
                key: i2,
                cause: CauseSet::star(),
                cont: Box::new(RProcess::Nil),
            },
        );
        assert!(!instantiation_related(&apart, i1, i2));
    }

    #[test]
    fn json_shape_and_validation() {
        let m = Memory::init(SemanticsKind::Bs).add(Key(4));
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"kind":"bs","gamma":[4],"w":4}"#);
        assert_eq!(serde_json::from_str::<Memory>(&text).unwrap(), m);
        assert!(serde_json::from_str::<Memory>(r#"{"kind":"bs","gamma":[],"w":4}"#).is_err());
        assert!(serde_json::from_str::<Memory>(r#"{"kind":"cvy","gamma":[1],"omega":[1]}"#).is_err());
        let cvy: Memory = serde_json::from_str(r#"{"kind":"cvy","gamma":[],"omega":["*"]}"#).unwrap();
        assert!(cvy.is_empty());
    }

    #[test]
    fn admissible_recorded_causes() {
        let (i, h) = (Key(1), Key(2));
        let cvy = Memory::init(SemanticsKind::Cvy).add(i);
        let recorded = CauseSet::star().with(KeyStar::Key(i));
        assert!(cause_admissible(&cvy, &recorded));
        assert!(!cause_admissible(&cvy.add(h), &recorded));
        let bs = Memory::init(SemanticsKind::Bs).add(i).add(h);
        assert!(cause_admissible(&bs, &recorded));
        assert!(!cause_admissible(&bs, &CauseSet::star()));
        let rpi = Memory::init(SemanticsKind::Rpi);
        assert!(!cause_admissible(&rpi, &CauseSet::singleton(i)));
        assert!(cause_admissible(&rpi.add(i), &CauseSet::singleton(i)));
    }
}
