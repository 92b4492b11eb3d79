//! The labelled transition system: forward and backward rules.
//!
//! Rules are applied compositionally. A derivation for a subterm is built
//! first and then pushed through the enclosing operators, each of which
//! either passes the label unchanged (Par, Res, history prefixes), rewrites
//! its cause (Cause Ref, Open) or combines two derivations into a silent step
//! (Com, Close).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::memory::{cause_admissible, cause_candidates, remove_key, update_candidates, Memory, SemanticsKind};
use crate::syntax::{
    key_set, occurs, substitute, unsubstitute, CauseSet, Ident, Key, KeyStar, RProcess,
};

/// The action part π of a label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Action {
    Out { subj: Ident, obj: Ident },
    In { subj: Ident, binder: Ident },
    #[serde(rename = "bout")]
    BoundOut { subj: Ident, obj: Ident, mem: Memory },
    Tau,
}

impl Action {
    pub fn subject(&self) -> Option<&Ident> {
        match self {
            Action::Out { subj, .. } | Action::In { subj, .. } | Action::BoundOut { subj, .. } => {
                Some(subj)
            }
            Action::Tau => None,
        }
    }

    /// Object name of an output; inputs bind a variable instead.
    pub fn object(&self) -> Option<&Ident> {
        match self {
            Action::Out { obj, .. } | Action::BoundOut { obj, .. } => Some(obj),
            Action::In { .. } | Action::Tau => None,
        }
    }

    pub fn is_output(&self) -> bool {
        matches!(self, Action::Out { .. } | Action::BoundOut { .. })
    }

    fn mentions(&self, a: &Ident) -> bool {
        self.subject() == Some(a) || self.object() == Some(a)
    }
}

/// A transition label `(i, K, j): π`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub key: Key,
    pub cause: CauseSet,
    pub inst: KeyStar,
    pub action: Action,
}

impl Label {
    pub fn tau(key: Key) -> Self {
        Label {
            key,
            cause: CauseSet::star(),
            inst: KeyStar::Star,
            action: Action::Tau,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Out { subj, obj } => write!(f, "{subj}<{obj}>"),
            Action::In { subj, binder } => write!(f, "{subj}({binder})"),
            Action::BoundOut { subj, obj, mem } => write!(f, "{subj}<({obj})>{mem}"),
            Action::Tau => f.write_str("tau"),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}):{}", self.key, self.cause, self.inst, self.action)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "bwd")]
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Backward => "bwd",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub source: RProcess,
    pub label: Label,
    pub dir: Direction,
    pub target: RProcess,
}

impl Transition {
    /// The same step taken in the opposite direction.
    pub fn reverse(&self) -> Transition {
        Transition {
            source: self.target.clone(),
            label: self.label.clone(),
            dir: self.dir.flip(),
            target: self.source.clone(),
        }
    }
}

/// A derivation result before the source is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deriv {
    pub label: Label,
    pub target: RProcess,
}

/// How forward steps pick their key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum KeySupply {
    /// The smallest key that does not occur in the source.
    #[default]
    LowestFresh,
    /// A caller-chosen key; no steps are produced if it is not fresh.
    Fixed(Key),
}

impl KeySupply {
    pub fn pick(self, x: &RProcess) -> Option<Key> {
        match self {
            KeySupply::LowestFresh => Some(lowest_fresh(x)),
            KeySupply::Fixed(k) => (!occurs(k, x)).then_some(k),
        }
    }
}

pub fn lowest_fresh(x: &RProcess) -> Key {
    (1..).map(Key).find(|&k| !occurs(k, x)).expect("unbounded key space")
}

/// `K =* j`: `* ∈ K`, or `j = *`, or `K = {j}`.
pub fn star_compatible(k: &CauseSet, j: KeyStar) -> bool {
    k.has_star() || j.is_star() || k.as_singleton() == Some(j)
}

/// Contextual cause update `X[K'/K]_i`: rewrites the cause of the past
/// prefix keyed `i` when it equals `old`.
pub fn apply_cause_update(x: &RProcess, i: Key, old: &CauseSet, new: &CauseSet) -> RProcess {
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
            cause: if *key == i && cause == old {
                new.clone()
            } else {
                cause.clone()
            },
            cont: Box::new(apply_cause_update(cont, i, old, new)),
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
            cause: if *key == i && cause == old {
                new.clone()
            } else {
                cause.clone()
            },
            cont: Box::new(apply_cause_update(cont, i, old, new)),
        },
        RProcess::Par { left, right } => RProcess::par(
            apply_cause_update(left, i, old, new),
            apply_cause_update(right, i, old, new),
        ),
        RProcess::New { name, mem, body } => RProcess::new(
            name.clone(),
            mem.clone(),
            apply_cause_update(body, i, old, new),
        ),
    }
}

/// Substitutes `a^i` for the variable bound by the past input keyed `i`,
/// inside that input's continuation.
fn substitute_at(x: &RProcess, i: Key, a: &Ident) -> RProcess {
    match x {
        RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => x.clone(),
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
            cont: Box::new(if *key == i {
                substitute(cont, binder, a, i)
            } else {
                substitute_at(cont, i, a)
            }),
        },
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
            cont: Box::new(substitute_at(cont, i, a)),
        },
        RProcess::Par { left, right } => {
            RProcess::par(substitute_at(left, i, a), substitute_at(right, i, a))
        }
        RProcess::New { name, mem, body } => {
            RProcess::new(name.clone(), mem.clone(), substitute_at(body, i, a))
        }
    }
}

fn wrap_hist(x: &RProcess, cont: RProcess) -> RProcess {
    match x {
        RProcess::PastOut {
            subj,
            obj,
            key,
            cause,
            ..
        } => RProcess::PastOut {
            subj: subj.clone(),
            obj: obj.clone(),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(cont),
        },
        RProcess::PastIn {
            subj,
            binder,
            key,
            cause,
            ..
        } => RProcess::PastIn {
            subj: subj.clone(),
            binder: binder.clone(),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(cont),
        },
        _ => unreachable!("not a past prefix"),
    }
}

/// Pairs an output derivation with an input derivation on the same channel
/// and key, subject to the `=*` side conditions. Returns the output label,
/// the input's binder side derivation and the transmitted name.
fn synchronises(out: &Deriv, inp: &Deriv) -> Option<Ident> {
    let (Some(b1), Some(a)) = (out.label.action.subject(), out.label.action.object()) else {
        return None;
    };
    let Action::In { subj: b2, .. } = &inp.label.action else {
        return None;
    };
    (out.label.action.is_output()
        && b1 == b2
        && out.label.key == inp.label.key
        && star_compatible(&out.label.cause, inp.label.inst)
        && star_compatible(&inp.label.cause, out.label.inst))
    .then(|| a.clone())
}

/// All forward derivations of `x` using key `i`, which must be fresh.
pub fn fwd(x: &RProcess, i: Key) -> Vec<Deriv> {
    match x {
        RProcess::Nil => Vec::new(),
        // Out1
        RProcess::Out { subj, obj, cont } => vec![Deriv {
            label: Label {
                key: i,
                cause: CauseSet::star(),
                inst: subj.inst,
                action: Action::Out {
                    subj: subj.base.clone(),
                    obj: obj.base.clone(),
                },
            },
            target: RProcess::PastOut {
                subj: subj.clone(),
                obj: obj.clone(),
                key: i,
                cause: CauseSet::star(),
                cont: cont.clone(),
            },
        }],
        // In1
        RProcess::In { subj, binder, cont } => vec![Deriv {
            label: Label {
                key: i,
                cause: CauseSet::star(),
                inst: subj.inst,
                action: Action::In {
                    subj: subj.base.clone(),
                    binder: binder.clone(),
                },
            },
            target: RProcess::PastIn {
                subj: subj.clone(),
                binder: binder.clone(),
                key: i,
                cause: CauseSet::star(),
                cont: cont.clone(),
            },
        }],
        // Out2 / In2: the freshness premise holds because `i` is fresh in x.
        RProcess::PastOut { cont, .. } | RProcess::PastIn { cont, .. } => fwd(cont, i)
            .into_iter()
            .map(|d| Deriv {
                target: wrap_hist(x, d.target),
                label: d.label,
            })
            .collect(),
        RProcess::Par { left, right } => {
            let ls = fwd(left, i);
            let rs = fwd(right, i);
            let mut out = Vec::new();
            // Par, both sides.
            if !occurs(i, right) {
                out.extend(ls.iter().map(|d| Deriv {
                    label: d.label.clone(),
                    target: RProcess::par(d.target.clone(), (**right).clone()),
                }));
            }
            if !occurs(i, left) {
                out.extend(rs.iter().map(|d| Deriv {
                    label: d.label.clone(),
                    target: RProcess::par((**left).clone(), d.target.clone()),
                }));
            }
            // Com / Close, with the output on either side.
            for l in &ls {
                for r in &rs {
                    if let Some(a) = synchronises(l, r) {
                        out.push(communicate(l, r, &a, i, true));
                    } else if let Some(a) = synchronises(r, l) {
                        out.push(communicate(r, l, &a, i, false));
                    }
                }
            }
            out
        }
        RProcess::New { name, mem, body } => {
            let mut out = Vec::new();
            for d in fwd(body, i) {
                let subj = d.label.action.subject();
                let obj = d.label.action.object();
                if !d.label.action.mentions(name) {
                    // Res
                    out.push(Deriv {
                        label: d.label,
                        target: RProcess::new(name.clone(), mem.clone(), d.target),
                    });
                } else if subj == Some(name) {
                    // Cause Ref
                    for k2 in cause_candidates(mem, &d.label.cause, &d.target) {
                        out.push(Deriv {
                            label: Label {
                                cause: k2.clone(),
                                ..d.label.clone()
                            },
                            target: RProcess::new(
                                name.clone(),
                                mem.clone(),
                                apply_cause_update(&d.target, i, &d.label.cause, &k2),
                            ),
                        });
                    }
                } else if obj == Some(name) {
                    // Open
                    let Some(b) = subj else { continue };
                    for k2 in update_candidates(mem, &d.label.cause) {
                        out.push(Deriv {
                            label: Label {
                                key: i,
                                cause: k2.clone(),
                                inst: d.label.inst,
                                action: Action::BoundOut {
                                    subj: b.clone(),
                                    obj: name.clone(),
                                    mem: mem.clone(),
                                },
                            },
                            target: RProcess::new(
                                name.clone(),
                                mem.add(i),
                                apply_cause_update(&d.target, i, &d.label.cause, &k2),
                            ),
                        });
                    }
                }
            }
            out
        }
    }
}

fn communicate(out: &Deriv, inp: &Deriv, a: &Ident, i: Key, out_on_left: bool) -> Deriv {
    let received = substitute_at(&inp.target, i, a);
    match &out.label.action {
        // Com
        Action::Out { .. } => {
            let target = if out_on_left {
                RProcess::par(out.target.clone(), received)
            } else {
                RProcess::par(received, out.target.clone())
            };
            Deriv {
                label: Label::tau(i),
                target,
            }
        }
        // Close
        Action::BoundOut { obj, mem, .. } => {
            let sender = remove_key(&out.target, i);
            let body = if out_on_left {
                RProcess::par(sender, received)
            } else {
                RProcess::par(received, sender)
            };
            Deriv {
                label: Label::tau(i),
                target: RProcess::new(obj.clone(), mem.clone(), body),
            }
        }
        _ => unreachable!("synchronises only accepts outputs"),
    }
}

/// All backward derivations of `x`.
pub fn bwd(x: &RProcess) -> Vec<Deriv> {
    match x {
        RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => Vec::new(),
        RProcess::PastOut {
            subj,
            obj,
            key,
            cause,
            cont,
        } => {
            if cont.is_plain() {
                // Out1•
                return vec![Deriv {
                    label: Label {
                        key: *key,
                        cause: cause.clone(),
                        inst: subj.inst,
                        action: Action::Out {
                            subj: subj.base.clone(),
                            obj: obj.base.clone(),
                        },
                    },
                    target: RProcess::Out {
                        subj: subj.clone(),
                        obj: obj.clone(),
                        cont: cont.clone(),
                    },
                }];
            }
            under_history(x, *key, cont)
        }
        RProcess::PastIn {
            subj,
            binder,
            key,
            cause,
            cont,
        } => {
            if cont.is_plain() {
                // In1•
                return vec![Deriv {
                    label: Label {
                        key: *key,
                        cause: cause.clone(),
                        inst: subj.inst,
                        action: Action::In {
                            subj: subj.base.clone(),
                            binder: binder.clone(),
                        },
                    },
                    target: RProcess::In {
                        subj: subj.clone(),
                        binder: binder.clone(),
                        cont: cont.clone(),
                    },
                }];
            }
            under_history(x, *key, cont)
        }
        RProcess::Par { left, right } => {
            let ls = bwd(left);
            let rs = bwd(right);
            let mut out = Vec::new();
            // Par•
            out.extend(ls.iter().filter(|d| !occurs(d.label.key, right)).map(|d| Deriv {
                label: d.label.clone(),
                target: RProcess::par(d.target.clone(), (**right).clone()),
            }));
            out.extend(rs.iter().filter(|d| !occurs(d.label.key, left)).map(|d| Deriv {
                label: d.label.clone(),
                target: RProcess::par((**left).clone(), d.target.clone()),
            }));
            // Com•
            for l in &ls {
                for r in &rs {
                    let pair = if matches!(l.label.action, Action::Out { .. }) {
                        synchronises(l, r).map(|a| (l, r, a, true))
                    } else if matches!(r.label.action, Action::Out { .. }) {
                        synchronises(r, l).map(|a| (r, l, a, false))
                    } else {
                        None
                    };
                    if let Some((o, inp, a, left_out)) = pair {
                        out.push(uncommunicate(o, inp, &a, left_out));
                    }
                }
            }
            out
        }
        RProcess::New { name, mem, body } => {
            let mut out = Vec::new();
            for d in bwd(body) {
                let subj = d.label.action.subject();
                let obj = d.label.action.object();
                if !d.label.action.mentions(name) {
                    // Res•
                    out.push(Deriv {
                        label: d.label,
                        target: RProcess::new(name.clone(), mem.clone(), d.target),
                    });
                } else if subj == Some(name) {
                    // Cause Ref•
                    if cause_admissible(mem, &d.label.cause) {
                        out.push(Deriv {
                            label: d.label,
                            target: RProcess::new(name.clone(), mem.clone(), d.target),
                        });
                    }
                } else if obj == Some(name) {
                    // Open•
                    let (Some(b), Some(prev)) = (subj, mem.pop(d.label.key)) else {
                        continue;
                    };
                    out.push(Deriv {
                        label: Label {
                            action: Action::BoundOut {
                                subj: b.clone(),
                                obj: name.clone(),
                                mem: prev.clone(),
                            },
                            ..d.label.clone()
                        },
                        target: RProcess::new(name.clone(), prev, d.target),
                    });
                }
            }
            // Close•
            if let RProcess::Par { left, right } = &**body {
                for l in bwd(left) {
                    for r in bwd(right) {
                        let pair = if closes(&l, name, mem) {
                            synchronises(&l, &r).map(|a| (l.clone(), r.clone(), a, true))
                        } else if closes(&r, name, mem) {
                            synchronises(&r, &l).map(|a| (r.clone(), l.clone(), a, false))
                        } else {
                            None
                        };
                        if let Some((o, inp, a, left_out)) = pair {
                            out.push(uncommunicate(&o, &inp, &a, left_out));
                        }
                    }
                }
            }
            out
        }
    }
}

fn closes(d: &Deriv, name: &Ident, mem: &Memory) -> bool {
    matches!(&d.label.action, Action::BoundOut { obj, mem: m, .. } if obj == name && m == mem)
}

fn under_history(x: &RProcess, own: Key, cont: &RProcess) -> Vec<Deriv> {
    // Out2• / In2•: the undone key must be fresh in H[X].
    bwd(cont)
        .into_iter()
        .filter(|d| d.label.key != own && !key_set(&d.target).contains(&d.label.key))
        .map(|d| Deriv {
            target: wrap_hist(x, d.target),
            label: d.label,
        })
        .collect()
}

fn uncommunicate(out: &Deriv, inp: &Deriv, a: &Ident, out_on_left: bool) -> Deriv {
    let Action::In { binder, .. } = &inp.label.action else {
        unreachable!("checked by synchronises")
    };
    let i = out.label.key;
    let restored = unsubstitute(&inp.target, a, i, binder);
    let target = if out_on_left {
        RProcess::par(out.target.clone(), restored)
    } else {
        RProcess::par(restored, out.target.clone())
    };
    Deriv {
        label: Label::tau(i),
        target,
    }
}

/// A transition system over reversible processes. The engine is the
/// reference implementation; tests wrap it to inject faults.
pub trait Lts: Sync {
    fn kind(&self) -> SemanticsKind;
    fn forward(&self, x: &RProcess, supply: KeySupply) -> Vec<Transition>;
    fn backward(&self, x: &RProcess) -> Vec<Transition>;

    /// Forward steps followed by backward steps.
    fn all_steps(&self, x: &RProcess) -> Vec<Transition> {
        let mut v = self.forward(x, KeySupply::LowestFresh);
        v.extend(self.backward(x));
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Engine {
    pub kind: SemanticsKind,
}

impl Engine {
    pub fn new(kind: SemanticsKind) -> Self {
        Engine { kind }
    }
}

impl Lts for Engine {
    fn kind(&self) -> SemanticsKind {
        self.kind
    }

    fn forward(&self, x: &RProcess, supply: KeySupply) -> Vec<Transition> {
        forward_steps(x, self.kind, supply)
    }

    fn backward(&self, x: &RProcess) -> Vec<Transition> {
        backward_steps(x, self.kind)
    }
}

/// Every forward transition of `x`. The semantics is fixed by the memories
/// inside `x`; `kind` is checked against them in debug builds.
pub fn forward_steps(x: &RProcess, kind: SemanticsKind, supply: KeySupply) -> Vec<Transition> {
    debug_assert!(kind_consistent(x, kind));
    let Some(i) = supply.pick(x) else {
        return Vec::new();
    };
    fwd(x, i)
        .into_iter()
        .map(|d| Transition {
            source: x.clone(),
            label: d.label,
            dir: Direction::Forward,
            target: d.target,
        })
        .collect()
}

/// Every backward transition of `x`.
pub fn backward_steps(x: &RProcess, kind: SemanticsKind) -> Vec<Transition> {
    debug_assert!(kind_consistent(x, kind));
    bwd(x)
        .into_iter()
        .map(|d| Transition {
            source: x.clone(),
            label: d.label,
            dir: Direction::Backward,
            target: d.target,
        })
        .collect()
}

/// True when every memory in `x` has the given kind.
pub fn kind_consistent(x: &RProcess, kind: SemanticsKind) -> bool {
    match x {
        RProcess::Nil => true,
        RProcess::Out { cont, .. }
        | RProcess::In { cont, .. }
        | RProcess::PastOut { cont, .. }
        | RProcess::PastIn { cont, .. } => kind_consistent(cont, kind),
        RProcess::Par { left, right } => kind_consistent(left, kind) && kind_consistent(right, kind),
        RProcess::New { mem, body, .. } => mem.kind() == kind && kind_consistent(body, kind),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{lift, parse_process, Name};

    fn start(src: &str, kind: SemanticsKind) -> RProcess {
        lift(&parse_process(src).unwrap(), kind)
    }

    #[test]
    fn star_compatibility() {
        let (h, l) = (Key(2), Key(3));
        assert!(star_compatible(&CauseSet::star(), KeyStar::Key(h)));
        assert!(star_compatible(&CauseSet::singleton(h), KeyStar::Key(h)));
        assert!(star_compatible(&CauseSet::singleton(h), KeyStar::Star));
        assert!(!star_compatible(&CauseSet::singleton(h), KeyStar::Key(l)));
    }

    #[test]
    fn cause_update_touches_only_the_named_key() {
        let x = RProcess::PastOut {
            subj: Name::star("b"),
            obj: Name::star("a"),
            key: Key(1),
            cause: CauseSet::star(),
            cont: Box::new(RProcess::Nil),
        };
        let h = CauseSet::singleton(Key(5));
        let RProcess::PastOut { cause, .. } = apply_cause_update(&x, Key(1), &CauseSet::star(), &h)
        else {
            unreachable!()
        };
        assert_eq!(cause, h);
        assert_eq!(apply_cause_update(&x, Key(2), &CauseSet::star(), &h), x);
    }

    #[test]
    fn lifted_process_has_no_backward_steps() {
        for kind in SemanticsKind::ALL {
            let x = start("new a.(b<a> | c<a> | a(z)) | b(y).y<c>", kind);
            assert!(backward_steps(&x, kind).is_empty());
        }
    }

    #[test]
    fn fixed_key_must_be_fresh() {
        let kind = SemanticsKind::Rpi;
        let x = start("b<a> | c<d>", kind);
        let t = &forward_steps(&x, kind, KeySupply::Fixed(Key(4)))[0];
        assert_eq!(t.label.key, Key(4));
        assert!(forward_steps(&t.target, kind, KeySupply::Fixed(Key(4))).is_empty());
    }

    #[test]
    fn restricted_subject_without_extrusion_is_stuck() {
        let kind = SemanticsKind::Bs;
        let x = start("new a.a<b>", kind);
        assert!(forward_steps(&x, kind, KeySupply::LowestFresh).is_empty());
    }

    #[test]
    fn close_round_trips() {
        for kind in SemanticsKind::ALL {
            let x = start("new a.b<a>.a<c> | b(x).x(y)", kind);
            let steps = forward_steps(&x, kind, KeySupply::LowestFresh);
            let tau = steps
                .iter()
                .find(|t| t.label.action == Action::Tau)
                .expect("close");
            let back = backward_steps(&tau.target, kind);
            assert_eq!(back.len(), 1, "{kind}: {back:?}");
            assert_eq!(back[0].target, x);
            // After the close the name is private again; the only visible
            // continuation is a further internal step.
            let next = forward_steps(&tau.target, kind, KeySupply::LowestFresh);
            assert_eq!(next.len(), 1, "{kind}: {next:?}");
            assert_eq!(next[0].label.action, Action::Tau);
        }
    }

    #[test]
    fn growing_omega_blocks_undoing_an_older_reader() {
        let kind = SemanticsKind::Cvy;
        let fire = |x: &RProcess, subj: &str| {
            forward_steps(x, kind, KeySupply::LowestFresh)
                .into_iter()
                .find(|t| t.label.action.subject().is_some_and(|s| &**s == subj))
                .unwrap()
        };
        let t1 = fire(&start("new a.(b<a> | c<a> | a(z))", kind), "b");
        let t2 = fire(&t1.target, "a");
        assert_eq!(t2.label.cause.to_string(), "{*,1}");
        let t3 = fire(&t2.target, "c");
        let undo = |x: &RProcess| -> Vec<Key> { backward_steps(x, kind).iter().map(|t| t.label.key).collect() };
        assert_eq!(undo(&t2.target), [Key(2)]);
        assert_eq!(undo(&t3.target), [Key(3)]);
    }
}
