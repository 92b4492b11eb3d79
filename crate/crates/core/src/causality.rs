//! Causality between transitions, the square lemma and equivalence of
//! traces up to permutation.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{Action, Direction, KeySupply, Label, Lts, Transition};
use crate::syntax::{key_set, Key, RProcess};

/// A sequence of pairwise composable transitions.
pub type Trace = Vec<Transition>;

/// Checks that consecutive transitions compose.
pub fn is_composable(trace: &[Transition]) -> bool {
    trace.windows(2).all(|w| w[0].target == w[1].source)
}

/// `i1 <_X i2`: some past prefix keyed `i1` has `i2` among the keys of its
/// continuation.
pub fn structural_cause(i1: Key, i2: Key, x: &RProcess) -> bool {
    match x {
        RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => false,
        RProcess::PastOut { key, cont, .. } | RProcess::PastIn { key, cont, .. } => {
            (*key == i1 && key_set(cont).contains(&i2)) || structural_cause(i1, i2, cont)
        }
        RProcess::Par { left, right } => {
            structural_cause(i1, i2, left) || structural_cause(i1, i2, right)
        }
        RProcess::New { body, .. } => structural_cause(i1, i2, body),
    }
}

/// `t1 ⊏ t2`: `i1 <_{X'''} i2` where `X'''` is the target of `t2`, or
/// `i2 <_X i1` where `X` is the source of `t1`.
pub fn structural_precedes(t1: &Transition, t2: &Transition) -> bool {
    let (i1, i2) = (t1.label.key, t2.label.key);
    i1 != i2 && (structural_cause(i1, i2, &t2.target) || structural_cause(i2, i1, &t1.source))
}

/// `t1 ⊏obj t2`: `i1 ∈ K2` or `i2 ∈ K1`, unless `t1` is the reverse of `t2`.
pub fn object_cause(t1: &Transition, t2: &Transition) -> bool {
    let hit = t2.label.cause.contains_key(t1.label.key) || t1.label.cause.contains_key(t2.label.key);
    hit && !is_reverse_of(t1, t2)
}

pub fn is_reverse_of(t1: &Transition, t2: &Transition) -> bool {
    t1.dir != t2.dir && t1.label == t2.label && t1.source == t2.target && t1.target == t2.source
}

/// Label equivalence: equal up to the memory carried by a bound output.
pub fn labels_equivalent(m1: &Label, m2: &Label) -> bool {
    if m1.key != m2.key || m1.cause != m2.cause || m1.inst != m2.inst {
        return false;
    }
    match (&m1.action, &m2.action) {
        (
            Action::BoundOut { subj: b1, obj: a1, .. },
            Action::BoundOut { subj: b2, obj: a2, .. },
        ) => b1 == b2 && a1 == a2,
        (x, y) => x == y,
    }
}

/// Restriction-insensitive footprint of a transition: the positions of the
/// past prefixes it creates or removes.
fn footprint(t: &Transition) -> BTreeSet<crate::syntax::Position> {
    let state = match t.dir {
        Direction::Forward => &t.target,
        Direction::Backward => &t.source,
    };
    state.positions_of(t.label.key)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalVerdict {
    pub structural: bool,
    pub object: bool,
    /// `structural ∨ object`.
    pub related: bool,
    /// Both steps act on the same key or on the same prefix position: the
    /// second consumes or re-creates what the first touched. Such pairs
    /// (`t; t•` among them) can never be swapped.
    pub conflict: bool,
    /// Neither related nor in conflict.
    pub concurrent: bool,
}

/// Classifies an adjacent pair `t1; t2`.
pub fn classify_adjacent(t1: &Transition, t2: &Transition) -> CausalVerdict {
    let structural = structural_precedes(t1, t2);
    let object = object_cause(t1, t2);
    let related = structural || object;
    let conflict = t1.label.key == t2.label.key || !footprint(t1).is_disjoint(&footprint(t2));
    CausalVerdict {
        structural,
        object,
        related,
        conflict,
        concurrent: !related && !conflict,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error("transitions are not concurrent")]
    NotConcurrent,
    #[error("transitions are not composable")]
    NotComposable,
    #[error("no residual closes the square")]
    NoResidual,
}

/// The two sides of a commuting square: `t2' : X → Y1` and `t1' : Y1 → Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub first: Transition,
    pub second: Transition,
}

fn steps_in(lts: &dyn Lts, x: &RProcess, dir: Direction, key: Key) -> Vec<Transition> {
    match dir {
        Direction::Forward => lts.forward(x, KeySupply::Fixed(key)),
        Direction::Backward => lts.backward(x),
    }
}

/// Given concurrent `t1 : X → Y` and `t2 : Y → Z`, finds `t2' : X → Y1` and
/// `t1' : Y1 → Z` with labels equivalent to those of `t2` and `t1`.
pub fn residual(lts: &dyn Lts, t1: &Transition, t2: &Transition) -> Result<Square, SquareError> {
    if t1.target != t2.source {
        return Err(SquareError::NotComposable);
    }
    if !classify_adjacent(t1, t2).concurrent {
        return Err(SquareError::NotConcurrent);
    }
    residual_unchecked(lts, t1, t2).ok_or(SquareError::NoResidual)
}

fn residual_unchecked(lts: &dyn Lts, t1: &Transition, t2: &Transition) -> Option<Square> {
    for first in steps_in(lts, &t1.source, t2.dir, t2.label.key) {
        if !labels_equivalent(&first.label, &t2.label) {
            continue;
        }
        for second in steps_in(lts, &first.target, t1.dir, t1.label.key) {
            if second.target == t2.target && labels_equivalent(&second.label, &t1.label) {
                return Some(Square { first, second });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("rewriting budget of {0} trace forms exceeded")]
    BudgetExceeded(usize),
    #[error("trace is not composable")]
    NotComposable,
}

/// Limits for the rewriting search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_len: usize,
    pub max_forms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_len: 8,
            max_forms: 100_000,
        }
    }
}

/// One rewriting step: cancel `t; t•` or swap a concurrent adjacent pair.
fn rewrites(lts: &dyn Lts, trace: &[Transition]) -> Vec<Trace> {
    let mut out = Vec::new();
    for k in 0..trace.len().saturating_sub(1) {
        let (t1, t2) = (&trace[k], &trace[k + 1]);
        if is_reverse_of(t1, t2) {
            let mut v = trace[..k].to_vec();
            v.extend_from_slice(&trace[k + 2..]);
            out.push(v);
            continue;
        }
        if classify_adjacent(t1, t2).concurrent {
            if let Some(sq) = residual_unchecked(lts, t1, t2) {
                let mut v = trace.to_vec();
                v[k] = sq.first;
                v[k + 1] = sq.second;
                out.push(v);
            }
        }
    }
    out
}

/// Canonical representative of the equivalence class of `trace`: the least
/// among the shortest traces reachable by swaps and cancellations.
pub fn canonical_form(lts: &dyn Lts, trace: &[Transition], budget: Budget) -> Result<Trace, EquivalenceError> {
    if !is_composable(trace) {
        return Err(EquivalenceError::NotComposable);
    }
    if trace.len() > budget.max_len {
        return Err(EquivalenceError::BudgetExceeded(budget.max_forms));
    }
    let start = trace.to_vec();
    let mut seen: HashSet<Trace> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut best: Option<Trace> = None;
    while let Some(t) = queue.pop_front() {
        let better = match &best {
            None => true,
            Some(b) => t.len() < b.len() || (t.len() == b.len() && order_key(&t) < order_key(b)),
        };
        if better {
            best = Some(t.clone());
        }
        for next in rewrites(lts, &t) {
            if seen.insert(next.clone()) {
                if seen.len() > budget.max_forms {
                    return Err(EquivalenceError::BudgetExceeded(budget.max_forms));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(best.unwrap_or_default())
}

fn order_key(t: &[Transition]) -> Vec<(Direction, &Label, &RProcess)> {
    t.iter().map(|s| (s.dir, &s.label, &s.target)).collect()
}

/// Decides equivalence up to permutation by comparing canonical forms.
pub fn traces_equivalent(
    lts: &dyn Lts,
    s1: &[Transition],
    s2: &[Transition],
    budget: Budget,
) -> Result<bool, EquivalenceError> {
    let source = |s: &[Transition]| s.first().map(|t| t.source.clone());
    if let (Some(a), Some(b)) = (source(s1), source(s2)) {
        if a != b {
            return Ok(false);
        }
    }
    Ok(canonical_form(lts, s1, budget)? == canonical_form(lts, s2, budget)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Structural,
    Object,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalNode {
    pub index: usize,
    pub key: Key,
    pub label: Label,
    pub dir: Direction,
}

/// Direct causes between the steps of a trace, each edge pointing from an
/// earlier step to a later one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalityGraph {
    pub nodes: Vec<CausalNode>,
    pub edges: Vec<CausalEdge>,
}

impl CausalityGraph {
    pub fn of_trace(trace: &[Transition]) -> Self {
        let nodes = trace
            .iter()
            .enumerate()
            .map(|(index, t)| CausalNode {
                index,
                key: t.label.key,
                label: t.label.clone(),
                dir: t.dir,
            })
            .collect();
        let mut edges = Vec::new();
        for (a, t1) in trace.iter().enumerate() {
            for (b, t2) in trace.iter().enumerate().skip(a + 1) {
                if structural_precedes(t1, t2) {
                    edges.push(CausalEdge {
                        from: a,
                        to: b,
                        kind: EdgeKind::Structural,
                    });
                }
                if object_cause(t1, t2) {
                    edges.push(CausalEdge {
                        from: a,
                        to: b,
                        kind: EdgeKind::Object,
                    });
                }
            }
        }
        CausalityGraph { nodes, edges }
    }

    /// The reflexive-transitive closure `(⊑ ∪ ⊑obj)*` as a boolean matrix.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.nodes.len();
        let mut m = vec![vec![false; n]; n];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = true;
        }
        for e in &self.edges {
            m[e.from][e.to] = true;
        }
        for k in 0..n {
            let via = m[k].clone();
            for row in m.iter_mut().filter(|row| row[k]) {
                for (x, &y) in row.iter_mut().zip(&via) {
                    *x |= y;
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::{Memory, SemanticsKind};
    use crate::semantics::Engine;
    use crate::syntax::{lift, parse_process, CauseSet, KeyStar, Name};

    fn fire(lts: &dyn Lts, x: &RProcess, pick: impl Fn(&Transition) -> bool) -> Transition {
        lts.forward(x, KeySupply::LowestFresh)
            .into_iter()
            .find(pick)
            .expect("step")
    }

    #[test]
    fn nested_prefixes_are_structural_causes() {
        let x = RProcess::PastOut {
            subj: Name::star("b"),
            obj: Name::star("a"),
            key: Key(1),
            cause: CauseSet::star(),
            cont: Box::new(RProcess::PastOut {
                subj: Name::star("c"),
                obj: Name::star("e"),
                key: Key(2),
                cause: CauseSet::star(),
                cont: Box::new(RProcess::Nil),
            }),
        };
        assert!(structural_cause(Key(1), Key(2), &x));
        assert!(!structural_cause(Key(2), Key(1), &x));
    }

    #[test]
    fn label_equivalence_ignores_memory() {
        let bout = |mem: Memory| Label {
            key: Key(1),
            cause: CauseSet::star(),
            inst: KeyStar::Star,
            action: Action::BoundOut {
                subj: "b".into(),
                obj: "a".into(),
                mem,
            },
        };
        let m = Memory::init(SemanticsKind::Rpi);
        assert!(labels_equivalent(&bout(m.add(Key(1))), &bout(m.add(Key(1)).add(Key(2)))));
        assert!(labels_equivalent(&Label::tau(Key(3)), &Label::tau(Key(3))));
        assert!(!labels_equivalent(&Label::tau(Key(3)), &Label::tau(Key(4))));
    }

    #[test]
    fn a_step_followed_by_its_reverse_is_empty() {
        let lts = Engine::new(SemanticsKind::Rpi);
        let x = lift(&parse_process("b<a> | c<d>").unwrap(), lts.kind);
        let t = fire(&lts, &x, |_| true);
        let pair = vec![t.clone(), t.reverse()];
        assert!(!object_cause(&t, &t.reverse()));
        assert_eq!(canonical_form(&lts, &pair, Budget::default()).unwrap(), Vec::new());
        assert!(!traces_equivalent(&lts, &[t], &[], Budget::default()).unwrap());
    }

    #[test]
    fn disjoint_outputs_commute() {
        let lts = Engine::new(SemanticsKind::Cvy);
        let x = lift(&parse_process("b<a> | c<d>").unwrap(), lts.kind);
        let t1 = fire(&lts, &x, |t| matches!(&t.label.action, Action::Out { subj, .. } if &**subj == "b"));
        let t2 = fire(&lts, &t1.target, |_| true);
        let sq = residual(&lts, &t1, &t2).unwrap();
        assert_eq!(sq.first.label, t2.label);
        assert_eq!(sq.second.label, t1.label);
        let swapped = vec![sq.first, sq.second];
        assert!(traces_equivalent(&lts, &[t1, t2], &swapped, Budget::default()).unwrap());
    }

    #[test]
    fn bs_extruder_object_causes_later_uses() {
        let lts = Engine::new(SemanticsKind::Bs);
        let x = lift(&parse_process("new a.(b<a> | c<a> | a(z))").unwrap(), lts.kind);
        let t1 = fire(&lts, &x, |t| t.label.action.subject().is_some_and(|s| &**s == "b"));
        let t2 = fire(&lts, &t1.target, |t| t.label.action.subject().is_some_and(|s| &**s == "c"));
        let t3 = fire(&lts, &t2.target, |t| matches!(t.label.action, Action::In { .. }));
        assert!(object_cause(&t1, &t2));
        assert!(object_cause(&t1, &t3));
        assert!(!object_cause(&t2, &t3));
        let g = CausalityGraph::of_trace(&[t1, t2, t3]);
        let kinds: Vec<_> = g.edges.iter().map(|e| (e.from, e.to, e.kind)).collect();
        assert_eq!(kinds, [(0, 1, EdgeKind::Object), (0, 2, EdgeKind::Object)]);
    }

    #[test]
    fn rpi_extrusions_are_concurrent() {
        let lts = Engine::new(SemanticsKind::Rpi);
        let x = lift(&parse_process("new a.(b<a> | c<a> | a(z))").unwrap(), lts.kind);
        let t1 = fire(&lts, &x, |t| t.label.action.subject().is_some_and(|s| &**s == "b"));
        let t2 = fire(&lts, &t1.target, |t| t.label.action.subject().is_some_and(|s| &**s == "c"));
        assert!(classify_adjacent(&t1, &t2).concurrent);
        let sq = residual(&lts, &t1, &t2).unwrap();
        // The swapped extrusions carry different memories but equivalent labels.
        assert_ne!(sq.first.label, t2.label);
        assert!(labels_equivalent(&sq.first.label, &t2.label));
    }
}
