//! Term utilities: lifting, binder hygiene, keys, substitution and erasure.

use std::collections::{BTreeMap, BTreeSet};

use super::{Ident, Key, KeyStar, Name, Process, RProcess};
use crate::memory::{Memory, SemanticsKind};
use crate::pi_oracle::PiLabel;
use crate::semantics::{Action, Label};

/// Free names of a plain process.
pub fn free_names(p: &Process) -> BTreeSet<Ident> {
    fn go(p: &Process, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        let mut see = |n: &Ident, bound: &Vec<Ident>| {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        };
        match p {
            Process::Nil => {}
            Process::Out { subj, obj, cont } => {
                see(subj, bound);
                see(obj, bound);
                go(cont, bound, out);
            }
            Process::In { subj, binder, cont } => {
                see(subj, bound);
                bound.push(binder.clone());
                go(cont, bound, out);
                bound.pop();
            }
            Process::Par { left, right } => {
                go(left, bound, out);
                go(right, bound, out);
            }
            Process::New { name, body } => {
                bound.push(name.clone());
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(p, &mut Vec::new(), &mut out);
    out
}

fn all_idents(p: &Process, out: &mut BTreeSet<Ident>) {
    match p {
        Process::Nil => {}
        Process::Out { subj, obj, cont } => {
            out.insert(subj.clone());
            out.insert(obj.clone());
            all_idents(cont, out);
        }
        Process::In { subj, binder, cont } => {
            out.insert(subj.clone());
            out.insert(binder.clone());
            all_idents(cont, out);
        }
        Process::Par { left, right } => {
            all_idents(left, out);
            all_idents(right, out);
        }
        Process::New { name, body } => {
            out.insert(name.clone());
            all_idents(body, out);
        }
    }
}

/// Smallest `base_n` (n ≥ 1) not in `used`.
pub(crate) fn fresh_ident(base: &str, used: &BTreeSet<Ident>) -> Ident {
    (1..)
        .map(|n| Ident::from(format!("{base}_{n}")))
        .find(|c| !used.contains(c))
        .expect("unbounded supply")
}

fn rename_free(p: &Process, from: &Ident, to: &Ident) -> Process {
    let r = |n: &Ident| if n == from { to.clone() } else { n.clone() };
    match p {
        Process::Nil => Process::Nil,
        Process::Out { subj, obj, cont } => Process::Out {
            subj: r(subj),
            obj: r(obj),
            cont: Box::new(rename_free(cont, from, to)),
        },
        Process::In { subj, binder, cont } => Process::In {
            subj: r(subj),
            binder: binder.clone(),
            cont: if binder == from {
                cont.clone()
            } else {
                Box::new(rename_free(cont, from, to))
            },
        },
        Process::Par { left, right } => Process::par(
            rename_free(left, from, to),
            rename_free(right, from, to),
        ),
        Process::New { name, body } => Process::New {
            name: name.clone(),
            body: if name == from {
                body.clone()
            } else {
                Box::new(rename_free(body, from, to))
            },
        },
    }
}

/// True when every binder is distinct from every other binder and from every
/// free name.
pub fn has_unique_binders(p: &Process) -> bool {
    fn go(p: &Process, seen: &mut BTreeSet<Ident>) -> bool {
        match p {
            Process::Nil => true,
            Process::Out { cont, .. } => go(cont, seen),
            Process::In { binder, cont, .. } => seen.insert(binder.clone()) && go(cont, seen),
            Process::Par { left, right } => go(left, seen) && go(right, seen),
            Process::New { name, body } => seen.insert(name.clone()) && go(body, seen),
        }
    }
    let mut seen = free_names(p);
    go(p, &mut seen)
}

/// α-renames binders so that all of them are pairwise distinct and distinct
/// from the free names. Renaming is deterministic (left to right, smallest
/// unused `_n` suffix) and the identity on terms that already comply.
///
/// Without replication no step can duplicate a binder, so a term with unique
/// binders keeps them along every transition and substitution never captures.
pub fn uniquify(p: &Process) -> Process {
    fn go(p: &Process, taken: &mut BTreeSet<Ident>, used: &mut BTreeSet<Ident>) -> Process {
        match p {
            Process::Nil => Process::Nil,
            Process::Out { subj, obj, cont } => Process::Out {
                subj: subj.clone(),
                obj: obj.clone(),
                cont: Box::new(go(cont, taken, used)),
            },
            Process::In { subj, binder, cont } => {
                let (binder, cont) = claim(binder, cont, taken, used);
                Process::In {
                    subj: subj.clone(),
                    binder,
                    cont: Box::new(go(&cont, taken, used)),
                }
            }
            Process::Par { left, right } => {
                let left = go(left, taken, used);
                Process::par(left, go(right, taken, used))
            }
            Process::New { name, body } => {
                let (name, body) = claim(name, body, taken, used);
                Process::New {
                    name,
                    body: Box::new(go(&body, taken, used)),
                }
            }
        }
    }
    fn claim(
        binder: &Ident,
        scope: &Process,
        taken: &mut BTreeSet<Ident>,
        used: &mut BTreeSet<Ident>,
    ) -> (Ident, Process) {
        if taken.insert(binder.clone()) {
            return (binder.clone(), scope.clone());
        }
        let fresh = fresh_ident(binder, used);
        used.insert(fresh.clone());
        taken.insert(fresh.clone());
        let scope = rename_free(scope, binder, &fresh);
        (fresh, scope)
    }
    let mut used = BTreeSet::new();
    all_idents(p, &mut used);
    let mut taken = free_names(p);
    go(p, &mut taken, &mut used)
}

/// Structural equality up to renaming of bound names.
pub fn alpha_equivalent(p: &Process, q: &Process) -> bool {
    fn canon(p: &Process, env: &mut Vec<(Ident, Ident)>, counter: &mut usize) -> Process {
        let look = |n: &Ident, env: &Vec<(Ident, Ident)>| {
            env.iter()
                .rev()
                .find(|(from, _)| from == n)
                .map_or_else(|| n.clone(), |(_, to)| to.clone())
        };
        match p {
            Process::Nil => Process::Nil,
            Process::Out { subj, obj, cont } => Process::Out {
                subj: look(subj, env),
                obj: look(obj, env),
                cont: Box::new(canon(cont, env, counter)),
            },
            Process::In { subj, binder, cont } => {
                let subj = look(subj, env);
                *counter += 1;
                let fresh: Ident = format!("#{counter}").into();
                env.push((binder.clone(), fresh.clone()));
                let cont = canon(cont, env, counter);
                env.pop();
                Process::In {
                    subj,
                    binder: fresh,
                    cont: Box::new(cont),
                }
            }
            Process::Par { left, right } => {
                let left = canon(left, env, counter);
                Process::par(left, canon(right, env, counter))
            }
            Process::New { name, body } => {
                *counter += 1;
                let fresh: Ident = format!("#{counter}").into();
                env.push((name.clone(), fresh.clone()));
                let body = canon(body, env, counter);
                env.pop();
                Process::New {
                    name: fresh,
                    body: Box::new(body),
                }
            }
        }
    }
    canon(p, &mut Vec::new(), &mut 0) == canon(q, &mut Vec::new(), &mut 0)
}

/// Lifts a plain process into an initial reversible process: binders are
/// made unique, every name gets instantiator `*` and every restriction an
/// initialised memory of the given kind.
pub fn lift(p: &Process, kind: SemanticsKind) -> RProcess {
    fn go(p: &Process, kind: SemanticsKind) -> RProcess {
        match p {
            Process::Nil => RProcess::Nil,
            Process::Out { subj, obj, cont } => RProcess::Out {
                subj: Name::star(subj.clone()),
                obj: Name::star(obj.clone()),
                cont: Box::new(go(cont, kind)),
            },
            Process::In { subj, binder, cont } => RProcess::In {
                subj: Name::star(subj.clone()),
                binder: binder.clone(),
                cont: Box::new(go(cont, kind)),
            },
            Process::Par { left, right } => RProcess::par(go(left, kind), go(right, kind)),
            Process::New { name, body } => {
                RProcess::new(name.clone(), Memory::init(kind), go(body, kind))
            }
        }
    }
    go(&uniquify(p), kind)
}

/// Communication keys with multiplicity: the two endpoints of a
/// communication contribute the same key twice.
pub fn key_multiset(x: &RProcess) -> BTreeMap<Key, usize> {
    fn go(x: &RProcess, out: &mut BTreeMap<Key, usize>) {
        match x {
            RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => {}
            RProcess::PastOut { key, cont, .. } | RProcess::PastIn { key, cont, .. } => {
                *out.entry(*key).or_default() += 1;
                go(cont, out);
            }
            RProcess::Par { left, right } => {
                go(left, out);
                go(right, out);
            }
            RProcess::New { body, .. } => go(body, out),
        }
    }
    let mut out = BTreeMap::new();
    go(x, &mut out);
    out
}

/// Communication keys of a process.
pub fn key_set(x: &RProcess) -> BTreeSet<Key> {
    key_multiset(x).into_keys().collect()
}

/// True when `key` occurs anywhere in `x`: as a history key, inside a cause
/// set, as an instantiator or inside a memory.
pub fn occurs(key: Key, x: &RProcess) -> bool {
    let k = KeyStar::Key(key);
    match x {
        RProcess::Nil => false,
        RProcess::Out { subj, obj, cont } => subj.inst == k || obj.inst == k || occurs(key, cont),
        RProcess::In { subj, cont, .. } => subj.inst == k || occurs(key, cont),
        RProcess::PastOut {
            subj,
            obj,
            key: own,
            cause,
            cont,
        } => {
            *own == key
                || cause.contains(k)
                || subj.inst == k
                || obj.inst == k
                || occurs(key, cont)
        }
        RProcess::PastIn {
            subj,
            key: own,
            cause,
            cont,
            ..
        } => *own == key || cause.contains(k) || subj.inst == k || occurs(key, cont),
        RProcess::Par { left, right } => occurs(key, left) || occurs(key, right),
        RProcess::New { mem, body, .. } => mem.mentions(key) || occurs(key, body),
    }
}

fn rp_idents(x: &RProcess, out: &mut BTreeSet<Ident>) {
    match x {
        RProcess::Nil => {}
        RProcess::Out { subj, obj, cont } | RProcess::PastOut { subj, obj, cont, .. } => {
            out.insert(subj.base.clone());
            out.insert(obj.base.clone());
            rp_idents(cont, out);
        }
        RProcess::In {
            subj, binder, cont, ..
        }
        | RProcess::PastIn {
            subj, binder, cont, ..
        } => {
            out.insert(subj.base.clone());
            out.insert(binder.clone());
            rp_idents(cont, out);
        }
        RProcess::Par { left, right } => {
            rp_idents(left, out);
            rp_idents(right, out);
        }
        RProcess::New { name, body, .. } => {
            out.insert(name.clone());
            rp_idents(body, out);
        }
    }
}

fn rp_free_in(x: &RProcess, var: &Ident) -> bool {
    match x {
        RProcess::Nil => false,
        RProcess::Out { subj, obj, cont } | RProcess::PastOut { subj, obj, cont, .. } => {
            &subj.base == var || &obj.base == var || rp_free_in(cont, var)
        }
        RProcess::In {
            subj, binder, cont, ..
        }
        | RProcess::PastIn {
            subj, binder, cont, ..
        } => &subj.base == var || (binder != var && rp_free_in(cont, var)),
        RProcess::Par { left, right } => rp_free_in(left, var) || rp_free_in(right, var),
        RProcess::New { name, mem, body } => {
            (name != var || !mem.is_empty()) && rp_free_in(body, var)
        }
    }
}

fn rp_rename(x: &RProcess, from: &Ident, to: &Ident) -> RProcess {
    let r = |n: &Name| {
        if &n.base == from {
            Name {
                base: to.clone(),
                inst: n.inst,
            }
        } else {
            n.clone()
        }
    };
    match x {
        RProcess::Nil => RProcess::Nil,
        RProcess::Out { subj, obj, cont } => RProcess::Out {
            subj: r(subj),
            obj: r(obj),
            cont: Box::new(rp_rename(cont, from, to)),
        },
        RProcess::PastOut {
            subj,
            obj,
            key,
            cause,
            cont,
        } => RProcess::PastOut {
            subj: r(subj),
            obj: r(obj),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(rp_rename(cont, from, to)),
        },
        RProcess::In { subj, binder, cont } => RProcess::In {
            subj: r(subj),
            binder: binder.clone(),
            cont: if binder == from {
                cont.clone()
            } else {
                Box::new(rp_rename(cont, from, to))
            },
        },
        RProcess::PastIn {
            subj,
            binder,
            key,
            cause,
            cont,
        } => RProcess::PastIn {
            subj: r(subj),
            binder: binder.clone(),
            key: *key,
            cause: cause.clone(),
            cont: if binder == from {
                cont.clone()
            } else {
                Box::new(rp_rename(cont, from, to))
            },
        },
        RProcess::Par { left, right } => {
            RProcess::par(rp_rename(left, from, to), rp_rename(right, from, to))
        }
        RProcess::New { name, mem, body } => RProcess::New {
            name: name.clone(),
            mem: mem.clone(),
            body: if name == from && mem.is_empty() {
                body.clone()
            } else {
                Box::new(rp_rename(body, from, to))
            },
        },
    }
}

/// Replaces every free occurrence of variable `var` in the active part of
/// `x` with the name `a` instantiated by key `i`. Names recorded in past
/// prefixes are left alone. Binders on `a` that would capture the new name
/// are renamed first.
pub fn substitute(x: &RProcess, var: &Ident, a: &Ident, i: Key) -> RProcess {
    let mut used = BTreeSet::new();
    rp_idents(x, &mut used);
    used.insert(a.clone());
    subst_go(x, var, a, i, &mut used)
}

fn subst_go(
    x: &RProcess,
    var: &Ident,
    a: &Ident,
    i: Key,
    used: &mut BTreeSet<Ident>,
) -> RProcess {
    let s = |n: &Name| {
        if &n.base == var {
            Name::inst(a.clone(), i)
        } else {
            n.clone()
        }
    };
    match x {
        RProcess::Nil => RProcess::Nil,
        RProcess::Out { subj, obj, cont } => RProcess::Out {
            subj: s(subj),
            obj: s(obj),
            cont: Box::new(subst_go(cont, var, a, i, used)),
        },
        RProcess::In { subj, binder, cont } => {
            let subj = s(subj);
            if binder == var {
                return RProcess::In {
                    subj,
                    binder: binder.clone(),
                    cont: cont.clone(),
                };
            }
            let (binder, cont) = if binder == a && rp_free_in(cont, var) {
                let fresh = fresh_ident(binder, used);
                used.insert(fresh.clone());
                let renamed = rp_rename(cont, binder, &fresh);
                (fresh, renamed)
            } else {
                (binder.clone(), (**cont).clone())
            };
            RProcess::In {
                subj,
                binder,
                cont: Box::new(subst_go(&cont, var, a, i, used)),
            }
        }
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
            cont: Box::new(subst_go(cont, var, a, i, used)),
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
            cont: if binder == var {
                cont.clone()
            } else {
                Box::new(subst_go(cont, var, a, i, used))
            },
        },
        RProcess::Par { left, right } => {
            let left = subst_go(left, var, a, i, used);
            RProcess::par(left, subst_go(right, var, a, i, used))
        }
        RProcess::New { name, mem, body } => {
            if mem.is_empty() && name == var {
                return x.clone();
            }
            let (name, body) = if mem.is_empty() && name == a && rp_free_in(body, var) {
                let fresh = fresh_ident(name, used);
                used.insert(fresh.clone());
                let renamed = rp_rename(body, name, &fresh);
                (fresh, renamed)
            } else {
                (name.clone(), (**body).clone())
            };
            RProcess::New {
                name,
                mem: mem.clone(),
                body: Box::new(subst_go(&body, var, a, i, used)),
            }
        }
    }
}

/// Inverse of [`substitute`] for the key `i`: every occurrence of `a^i`
/// becomes the variable `var` again.
pub fn unsubstitute(x: &RProcess, a: &Ident, i: Key, var: &Ident) -> RProcess {
    let u = |n: &Name| {
        if &n.base == a && n.inst == KeyStar::Key(i) {
            Name::star(var.clone())
        } else {
            n.clone()
        }
    };
    match x {
        RProcess::Nil => RProcess::Nil,
        RProcess::Out { subj, obj, cont } => RProcess::Out {
            subj: u(subj),
            obj: u(obj),
            cont: Box::new(unsubstitute(cont, a, i, var)),
        },
        RProcess::In { subj, binder, cont } => RProcess::In {
            subj: u(subj),
            binder: binder.clone(),
            cont: Box::new(unsubstitute(cont, a, i, var)),
        },
        RProcess::PastOut {
            subj,
            obj,
            key,
            cause,
            cont,
        } => RProcess::PastOut {
            subj: u(subj),
            obj: u(obj),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(unsubstitute(cont, a, i, var)),
        },
        RProcess::PastIn {
            subj,
            binder,
            key,
            cause,
            cont,
        } => RProcess::PastIn {
            subj: u(subj),
            binder: binder.clone(),
            key: *key,
            cause: cause.clone(),
            cont: Box::new(unsubstitute(cont, a, i, var)),
        },
        RProcess::Par { left, right } => RProcess::par(
            unsubstitute(left, a, i, var),
            unsubstitute(right, a, i, var),
        ),
        RProcess::New { name, mem, body } => RProcess::New {
            name: name.clone(),
            mem: mem.clone(),
            body: Box::new(unsubstitute(body, a, i, var)),
        },
    }
}

/// Erasing function: drops history, instantiators and non-empty
/// restrictions.
pub fn erase(x: &RProcess) -> Process {
    match x {
        RProcess::Nil => Process::Nil,
        RProcess::Out { subj, obj, cont } => Process::Out {
            subj: subj.base.clone(),
            obj: obj.base.clone(),
            cont: Box::new(erase(cont)),
        },
        RProcess::In { subj, binder, cont } => Process::In {
            subj: subj.base.clone(),
            binder: binder.clone(),
            cont: Box::new(erase(cont)),
        },
        RProcess::PastOut { cont, .. } | RProcess::PastIn { cont, .. } => erase(cont),
        RProcess::Par { left, right } => Process::par(erase(left), erase(right)),
        RProcess::New { name, mem, body } => {
            if mem.is_empty() {
                Process::New {
                    name: name.clone(),
                    body: Box::new(erase(body)),
                }
            } else {
                erase(body)
            }
        }
    }
}

/// Erasing function on labels.
pub fn erase_label(label: &Label) -> PiLabel {
    match &label.action {
        Action::Out { subj, obj } => PiLabel::FreeOut {
            subj: subj.clone(),
            obj: obj.clone(),
        },
        Action::In { subj, binder } => PiLabel::In {
            subj: subj.clone(),
            binder: binder.clone(),
        },
        Action::BoundOut { subj, obj, mem } if mem.is_empty() => PiLabel::BoundOut {
            subj: subj.clone(),
            obj: obj.clone(),
        },
        Action::BoundOut { subj, obj, .. } => PiLabel::FreeOut {
            subj: subj.clone(),
            obj: obj.clone(),
        },
        Action::Tau => PiLabel::Tau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_process, CauseSet};

    fn p(src: &str) -> Process {
        parse_process(src).unwrap()
    }

    #[test]
    fn lift_decorates_with_star_and_initial_memory() {
        assert_eq!(lift(&Process::Nil, SemanticsKind::Rpi), RProcess::Nil);
        assert_eq!(
            lift(&p("b<a>.0"), SemanticsKind::Bs),
            RProcess::Out {
                subj: Name::star("b"),
                obj: Name::star("a"),
                cont: Box::new(RProcess::Nil),
            }
        );
        for kind in SemanticsKind::ALL {
            match lift(&p("new a.a<b>"), kind) {
                RProcess::New { mem, .. } => {
                    assert!(mem.is_empty());
                    assert_eq!(mem.kind(), kind);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn key_set_counts_communication_pairs_twice() {
        let x = RProcess::par(
            RProcess::PastOut {
                subj: Name::star("b"),
                obj: Name::star("a"),
                key: Key(1),
                cause: CauseSet::star(),
                cont: Box::new(RProcess::Nil),
            },
            RProcess::PastIn {
                subj: Name::star("b"),
                binder: "x".into(),
                key: Key(1),
                cause: CauseSet::star(),
                cont: Box::new(RProcess::Nil),
            },
        );
        assert_eq!(key_multiset(&x), BTreeMap::from([(Key(1), 2)]));
        assert_eq!(key_set(&x), BTreeSet::from([Key(1)]));
        let wrapped = RProcess::new("a".into(), Memory::init(SemanticsKind::Cvy), x.clone());
        assert_eq!(key_multiset(&wrapped), key_multiset(&x));
        assert!(key_set(&lift(&p("b<a> | b(x).x<c>"), SemanticsKind::Rpi)).is_empty());
    }

    #[test]
    fn substitution_examples() {
        let kind = SemanticsKind::Rpi;
        let x = lift(&p("x<c>"), kind);
        assert_eq!(
            substitute(&x, &"x".into(), &"a".into(), Key(7)),
            RProcess::Out {
                subj: Name::inst("a", Key(7)),
                obj: Name::star("c"),
                cont: Box::new(RProcess::Nil),
            }
        );
        assert_eq!(
            substitute(&RProcess::Nil, &"x".into(), &"a".into(), Key(7)),
            RProcess::Nil
        );
        let nested = lift(&p("y(z).z<x>"), kind);
        assert_eq!(
            substitute(&nested, &"x".into(), &"a".into(), Key(2)),
            RProcess::In {
                subj: Name::star("y"),
                binder: "z".into(),
                cont: Box::new(RProcess::Out {
                    subj: Name::star("z"),
                    obj: Name::inst("a", Key(2)),
                    cont: Box::new(RProcess::Nil),
                }),
            }
        );
    }

    #[test]
    fn substitution_respects_shadowing_and_avoids_capture() {
        let kind = SemanticsKind::Rpi;
        let shadow = lift(&p("y(x).x<c>"), kind);
        assert_eq!(
            substitute(&shadow, &"x".into(), &"a".into(), Key(1)),
            shadow
        );
        // The restriction on `a` must not capture the substituted name.
        let raw = RProcess::new(
            "a".into(),
            Memory::init(kind),
            RProcess::Out {
                subj: Name::star("x"),
                obj: Name::star("a"),
                cont: Box::new(RProcess::Nil),
            },
        );
        let got = substitute(&raw, &"x".into(), &"a".into(), Key(1));
        let RProcess::New { name, body, .. } = &got else {
            panic!("{got:?}")
        };
        assert_eq!(&**name, "a_1");
        assert_eq!(
            **body,
            RProcess::Out {
                subj: Name::inst("a", Key(1)),
                obj: Name::star("a_1"),
                cont: Box::new(RProcess::Nil),
            }
        );
    }

    #[test]
    fn unsubstitute_inverts_substitute() {
        let x = lift(&p("x<c>.y(z).z<x> | x(w)"), SemanticsKind::Bs);
        let s = substitute(&x, &"x".into(), &"a".into(), Key(4));
        assert_ne!(s, x);
        assert_eq!(unsubstitute(&s, &"a".into(), Key(4), &"x".into()), x);
    }

    #[test]
    fn uniquify_renames_clashing_binders_deterministically() {
        let q = p("(new a.b<a>) | (new a.c<a>) | a(a).a<a>");
        let u = uniquify(&q);
        assert!(has_unique_binders(&u));
        assert!(alpha_equivalent(&q, &u));
        assert_eq!(
            u.to_string(),
            "(new a_1.b<a_1>) | (new a_2.c<a_2>) | a(a_3).a_3<a_3>"
        );
        let fine = p("new a.(b<a> | c(x).x<a>)");
        assert_eq!(uniquify(&fine), fine);
    }

    #[test]
    fn erase_examples() {
        let kind = SemanticsKind::Rpi;
        let past = RProcess::PastOut {
            subj: Name::star("b"),
            obj: Name::star("a"),
            key: Key(1),
            cause: CauseSet::star(),
            cont: Box::new(RProcess::Nil),
        };
        assert_eq!(erase(&past), Process::Nil);
        let x = RProcess::new("a".into(), Memory::init(kind), past.clone());
        assert_eq!(erase(&x), Process::new("a", Process::Nil));
        let opened = RProcess::new("a".into(), Memory::init(kind).add(Key(1)), past);
        assert_eq!(erase(&opened), Process::Nil);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::semantics::{Engine, KeySupply, Lts};
    use crate::syntax::parse_process;
    use proptest::prelude::*;

    fn name() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["a", "b", "c", "x", "y"]).prop_map(str::to_owned)
    }

    fn process() -> impl Strategy<Value = Process> {
        let leaf = Just(Process::Nil);
        leaf.prop_recursive(5, 16, 2, |inner| {
            prop_oneof![
                (name(), name(), inner.clone()).prop_map(|(s, o, k)| Process::out(&s, &o, k)),
                (name(), name(), inner.clone()).prop_map(|(s, b, k)| Process::input(&s, &b, k)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Process::par(l, r)),
                (name(), inner).prop_map(|(n, b)| Process::new(&n, b)),
            ]
        })
    }

    fn kind() -> impl Strategy<Value = SemanticsKind> {
        prop::sample::select(SemanticsKind::ALL.to_vec())
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(p in process()) {
            prop_assert_eq!(parse_process(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn lift_is_initial_and_erases_back(p in process(), k in kind()) {
            let x = lift(&p, k);
            prop_assert!(key_set(&x).is_empty());
            prop_assert!(alpha_equivalent(&erase(&x), &p));
        }

        #[test]
        fn forward_steps_undo(p in process(), k in kind()) {
            let engine = Engine::new(k);
            let x = lift(&p, k);
            for t in engine.forward(&x, KeySupply::LowestFresh) {
                prop_assert!(engine.backward(&t.target).iter().any(|b| b.target == x && b.label == t.label));
            }
        }
    }
}
