//! Textbook late π-calculus semantics, used as ground truth for the
//! erasure correspondence.
//!
//! ```text
//! Out    b<a>.P  --b<a>-->  P
//! In     b(x).P  --b(x)-->  P                       (no substitution: late)
//! Par    P --α--> P'  ⟹  P|Q --α--> P'|Q            bn(α) ∉ fn(Q)
//! Res    P --α--> P'  ⟹  νa P --α--> νa P'          a ∉ n(α)
//! Open   P --b<a>--> P'  ⟹  νa P --b<(a)>--> P'     b ≠ a
//! Com    P --b<a>--> P',  Q --b(x)--> Q'  ⟹  P|Q --τ--> P' | Q'{a/x}
//! Close  P --b<(a)>--> P', Q --b(x)--> Q'  ⟹  P|Q --τ--> νa(P' | Q'{a/x})
//! ```
//!
//! Par, Com and Close are used in both orientations. Bound names are
//! renamed apart whenever a side condition would otherwise fail.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::memory::SemanticsKind;
use crate::semantics::{Direction, Lts};
use crate::syntax::{alpha_equivalent, erase, erase_label, free_names, Ident, Process, RProcess};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PiLabel {
    #[serde(rename = "out")]
    FreeOut { subj: Ident, obj: Ident },
    In { subj: Ident, binder: Ident },
    #[serde(rename = "bout")]
    BoundOut { subj: Ident, obj: Ident },
    Tau,
}

impl PiLabel {
    fn names(&self) -> Vec<&Ident> {
        match self {
            PiLabel::FreeOut { subj, obj } | PiLabel::BoundOut { subj, obj } => vec![subj, obj],
            PiLabel::In { subj, binder } => vec![subj, binder],
            PiLabel::Tau => vec![],
        }
    }

    fn bound(&self) -> Option<&Ident> {
        match self {
            PiLabel::In { binder, .. } => Some(binder),
            PiLabel::BoundOut { obj, .. } => Some(obj),
            _ => None,
        }
    }
}

impl std::fmt::Display for PiLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PiLabel::FreeOut { subj, obj } => write!(f, "{subj}<{obj}>"),
            PiLabel::In { subj, binder } => write!(f, "{subj}({binder})"),
            PiLabel::BoundOut { subj, obj } => write!(f, "{subj}<({obj})>"),
            PiLabel::Tau => f.write_str("tau"),
        }
    }
}

fn all_names(p: &Process, out: &mut BTreeSet<Ident>) {
    match p {
        Process::Nil => {}
        Process::Out { subj, obj, cont } => {
            out.insert(subj.clone());
            out.insert(obj.clone());
            all_names(cont, out);
        }
        Process::In { subj, binder, cont } => {
            out.insert(subj.clone());
            out.insert(binder.clone());
            all_names(cont, out);
        }
        Process::Par { left, right } => {
            all_names(left, out);
            all_names(right, out);
        }
        Process::New { name, body } => {
            out.insert(name.clone());
            all_names(body, out);
        }
    }
}

fn fresh_apart(base: &Ident, avoid: &BTreeSet<Ident>) -> Ident {
    (1..)
        .map(|n| Ident::from(format!("{base}_{n}")))
        .find(|c| !avoid.contains(c))
        .expect("unbounded supply")
}

/// Capture-avoiding substitution `p{a/x}`.
pub fn subst(p: &Process, x: &Ident, a: &Ident) -> Process {
    let r = |n: &Ident| if n == x { a.clone() } else { n.clone() };
    match p {
        Process::Nil => Process::Nil,
        Process::Out { subj, obj, cont } => Process::Out {
            subj: r(subj),
            obj: r(obj),
            cont: Box::new(subst(cont, x, a)),
        },
        Process::In { subj, binder, cont } => {
            let subj = r(subj);
            if binder == x {
                return Process::In {
                    subj,
                    binder: binder.clone(),
                    cont: cont.clone(),
                };
            }
            let (binder, cont) = rebind(binder, cont, x, a);
            Process::In {
                subj,
                binder,
                cont: Box::new(subst(&cont, x, a)),
            }
        }
        Process::Par { left, right } => Process::par(subst(left, x, a), subst(right, x, a)),
        Process::New { name, body } => {
            if name == x {
                return p.clone();
            }
            let (name, body) = rebind(name, body, x, a);
            Process::New {
                name,
                body: Box::new(subst(&body, x, a)),
            }
        }
    }
}

// Renames `binder` in `scope` when it would capture `a` substituted for `x`.
fn rebind(binder: &Ident, scope: &Process, x: &Ident, a: &Ident) -> (Ident, Process) {
    if binder != a || !free_names(scope).contains(x) {
        return (binder.clone(), scope.clone());
    }
    let mut avoid = BTreeSet::new();
    all_names(scope, &mut avoid);
    avoid.insert(a.clone());
    avoid.insert(x.clone());
    let fresh = fresh_apart(binder, &avoid);
    let renamed = subst(scope, binder, &fresh);
    (fresh, renamed)
}

/// Renames the bound name of `label` (and its occurrences in `target`) away
/// from `avoid`.
fn rename_bound(label: PiLabel, target: Process, avoid: &BTreeSet<Ident>) -> (PiLabel, Process) {
    let Some(bn) = label.bound().cloned() else {
        return (label, target);
    };
    if !avoid.contains(&bn) {
        return (label, target);
    }
    let mut used = avoid.clone();
    all_names(&target, &mut used);
    for n in label.names() {
        used.insert(n.clone());
    }
    let fresh = fresh_apart(&bn, &used);
    let target = subst(&target, &bn, &fresh);
    let label = match label {
        PiLabel::In { subj, .. } => PiLabel::In {
            subj,
            binder: fresh,
        },
        PiLabel::BoundOut { subj, .. } => PiLabel::BoundOut { subj, obj: fresh },
        other => other,
    };
    (label, target)
}

/// All late transitions of `p`.
pub fn pi_steps(p: &Process) -> Vec<(PiLabel, Process)> {
    match p {
        Process::Nil => Vec::new(),
        Process::Out { subj, obj, cont } => vec![(
            PiLabel::FreeOut {
                subj: subj.clone(),
                obj: obj.clone(),
            },
            (**cont).clone(),
        )],
        Process::In { subj, binder, cont } => vec![(
            PiLabel::In {
                subj: subj.clone(),
                binder: binder.clone(),
            },
            (**cont).clone(),
        )],
        Process::Par { left, right } => {
            let fl = free_names(left);
            let fr = free_names(right);
            let ls: Vec<_> = pi_steps(left)
                .into_iter()
                .map(|(l, t)| rename_bound(l, t, &fr))
                .collect();
            let rs: Vec<_> = pi_steps(right)
                .into_iter()
                .map(|(l, t)| rename_bound(l, t, &fl))
                .collect();
            let mut out = Vec::new();
            for (l, t) in &ls {
                out.push((l.clone(), Process::par(t.clone(), (**right).clone())));
            }
            for (l, t) in &rs {
                out.push((l.clone(), Process::par((**left).clone(), t.clone())));
            }
            for (l1, t1) in &ls {
                for (l2, t2) in &rs {
                    if let Some(t) = sync(l1, t1, l2, t2, true) {
                        out.push((PiLabel::Tau, t));
                    } else if let Some(t) = sync(l2, t2, l1, t1, false) {
                        out.push((PiLabel::Tau, t));
                    }
                }
            }
            out
        }
        Process::New { name, body } => {
            let mut out = Vec::new();
            for (l, t) in pi_steps(body) {
                match &l {
                    _ if !l.names().contains(&name) => {
                        out.push((l.clone(), Process::new(name, t)));
                    }
                    PiLabel::FreeOut { subj, obj } if obj == name && subj != name => {
                        out.push((
                            PiLabel::BoundOut {
                                subj: subj.clone(),
                                obj: obj.clone(),
                            },
                            t,
                        ));
                    }
                    _ => {}
                }
            }
            out
        }
    }
}

fn sync(
    out: &PiLabel,
    p: &Process,
    inp: &PiLabel,
    q: &Process,
    out_on_left: bool,
) -> Option<Process> {
    let PiLabel::In { subj: b2, binder } = inp else {
        return None;
    };
    let pair = |x: Process, y: Process| {
        if out_on_left {
            Process::par(x, y)
        } else {
            Process::par(y, x)
        }
    };
    match out {
        PiLabel::FreeOut { subj, obj } if subj == b2 => Some(pair(p.clone(), subst(q, binder, obj))),
        PiLabel::BoundOut { subj, obj } if subj == b2 => Some(Process::New {
            name: obj.clone(),
            body: Box::new(pair(p.clone(), subst(q, binder, obj))),
        }),
        _ => None,
    }
}

/// First failure found by [`check_forward_bisim`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisimCounterexample {
    /// The reversible state at which the mismatch occurs.
    pub state: RProcess,
    /// `"reversible"`: a forward step with no π match; `"pi"`: a π step
    /// with no forward match.
    pub unmatched_side: String,
    pub label: PiLabel,
    pub target: Process,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisimVerdict {
    pub states: usize,
    pub counterexample: Option<BisimCounterexample>,
}

impl BisimVerdict {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn pi_matches(label: &PiLabel, target: &Process, steps: &[(PiLabel, Process)]) -> bool {
    steps
        .iter()
        .any(|(l, t)| l == label && (t == target || alpha_equivalent(t, target)))
}

/// Checks, at one state, that forward steps and π steps of the erasure
/// match each other.
pub fn check_state(lts: &dyn Lts, x: &RProcess) -> Option<BisimCounterexample> {
    let p = erase(x);
    let pi = pi_steps(&p);
    let fwd: Vec<(PiLabel, Process)> = lts
        .forward(x, Default::default())
        .into_iter()
        .map(|t| (erase_label(&t.label), erase(&t.target)))
        .collect();
    for (l, t) in &fwd {
        if !pi_matches(l, t, &pi) {
            return Some(BisimCounterexample {
                state: x.clone(),
                unmatched_side: "reversible".into(),
                label: l.clone(),
                target: t.clone(),
            });
        }
    }
    for (l, t) in &pi {
        if !pi_matches(l, t, &fwd) {
            return Some(BisimCounterexample {
                state: x.clone(),
                unmatched_side: "pi".into(),
                label: l.clone(),
                target: t.clone(),
            });
        }
    }
    None
}

/// Bounded check that `{(X, φ(X))}` is a strong forward bisimulation on the
/// states reachable from `x` in at most `depth` steps in either direction.
pub fn check_forward_bisim(lts: &dyn Lts, x: &RProcess, depth: usize) -> BisimVerdict {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(x.clone(), 0usize)]);
    seen.insert(x.clone());
    while let Some((state, d)) = queue.pop_front() {
        if let Some(cx) = check_state(lts, &state) {
            return BisimVerdict {
                states: seen.len(),
                counterexample: Some(cx),
            };
        }
        if d == depth {
            continue;
        }
        for t in lts.all_steps(&state) {
            debug_assert!(matches!(t.dir, Direction::Forward | Direction::Backward));
            if seen.insert(t.target.clone()) {
                queue.push_back((t.target, d + 1));
            }
        }
    }
    BisimVerdict {
        states: seen.len(),
        counterexample: None,
    }
}

/// Convenience wrapper starting from a plain process.
pub fn check_forward_bisim_from(p: &Process, kind: SemanticsKind, depth: usize) -> BisimVerdict {
    let engine = crate::semantics::Engine::new(kind);
    check_forward_bisim(&engine, &crate::syntax::lift(p, kind), depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn labels(src: &str) -> Vec<String> {
        let mut v: Vec<String> = pi_steps(&parse_process(src).unwrap())
            .into_iter()
            .map(|(l, _)| l.to_string())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn first_steps() {
        assert_eq!(labels("b<a>.0 | b(x).x<c>"), ["b(x)", "b<a>", "tau"]);
        assert_eq!(labels("new a.b<a>.a<c>"), ["b<(a)>"]);
        assert!(labels("0").is_empty());
        assert!(labels("new a.a<b>").is_empty());
    }

    #[test]
    fn communication_substitutes_late() {
        let p = parse_process("b<a> | b(x).x<c>").unwrap();
        let tau = pi_steps(&p)
            .into_iter()
            .find(|(l, _)| *l == PiLabel::Tau)
            .unwrap();
        assert_eq!(tau.1, parse_process("0 | a<c>").unwrap());
    }

    #[test]
    fn close_avoids_capture() {
        // The extruded `a` clashes with a free `a` on the receiving side.
        let p = parse_process("(new a.b<a>.a<d>) | b(x).(x<c> | a<e>)").unwrap();
        let (_, t) = pi_steps(&p)
            .into_iter()
            .find(|(l, _)| *l == PiLabel::Tau)
            .unwrap();
        assert!(alpha_equivalent(
            &t,
            &parse_process("new z.(z<d> | z<c> | a<e>)").unwrap()
        ));
    }

    #[test]
    fn bisimulation_on_small_examples() {
        for kind in SemanticsKind::ALL {
            for src in ["b<a>.0 | b(x).x<c>", "new a.(b<a> | c<a> | a(z))"] {
                let v = check_forward_bisim_from(&parse_process(src).unwrap(), kind, 3);
                assert!(v.holds(), "{kind} {src}: {:?}", v.counterexample);
            }
        }
    }
}
