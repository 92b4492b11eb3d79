//! One-hole contexts over reversible processes.

use super::{CauseSet, Ident, Key, Name, RProcess};
use crate::memory::Memory;

/// One layer of a context, from the hole's point of view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    PastOut {
        subj: Name,
        obj: Name,
        key: Key,
        cause: CauseSet,
    },
    PastIn {
        subj: Name,
        binder: Ident,
        key: Key,
        cause: CauseSet,
    },
    /// The hole is the left operand; the right one is kept.
    ParLeft(RProcess),
    /// The hole is the right operand; the left one is kept.
    ParRight(RProcess),
    New { name: Ident, mem: Memory },
}

impl Frame {
    pub fn is_history(&self) -> bool {
        matches!(self, Frame::PastOut { .. } | Frame::PastIn { .. })
    }

    pub fn plug(&self, x: RProcess) -> RProcess {
        let cont = Box::new(x);
        match self.clone() {
            Frame::PastOut {
                subj,
                obj,
                key,
                cause,
            } => RProcess::PastOut {
                subj,
                obj,
                key,
                cause,
                cont,
            },
            Frame::PastIn {
                subj,
                binder,
                key,
                cause,
            } => RProcess::PastIn {
                subj,
                binder,
                key,
                cause,
                cont,
            },
            Frame::ParLeft(right) => RProcess::Par {
                left: cont,
                right: Box::new(right),
            },
            Frame::ParRight(left) => RProcess::Par {
                left: Box::new(left),
                right: cont,
            },
            Frame::New { name, mem } => RProcess::New {
                name,
                mem,
                body: cont,
            },
        }
    }
}

/// A chain of past prefixes around a hole.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HistoryContext(pub Vec<Frame>);

impl HistoryContext {
    /// Splits off the maximal history prefix of `x`.
    pub fn split(x: &RProcess) -> (HistoryContext, &RProcess) {
        let mut frames = Vec::new();
        let mut cur = x;
        loop {
            match cur {
                RProcess::PastOut {
                    subj,
                    obj,
                    key,
                    cause,
                    cont,
                } => {
                    frames.push(Frame::PastOut {
                        subj: subj.clone(),
                        obj: obj.clone(),
                        key: *key,
                        cause: cause.clone(),
                    });
                    cur = cont;
                }
                RProcess::PastIn {
                    subj,
                    binder,
                    key,
                    cause,
                    cont,
                } => {
                    frames.push(Frame::PastIn {
                        subj: subj.clone(),
                        binder: binder.clone(),
                        key: *key,
                        cause: cause.clone(),
                    });
                    cur = cont;
                }
                _ => return (HistoryContext(frames), cur),
            }
        }
    }

    pub fn plug(&self, x: RProcess) -> RProcess {
        self.0.iter().rev().fold(x, |acc, f| f.plug(acc))
    }
}

/// Frames listed outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneralContext(pub Vec<Frame>);

impl GeneralContext {
    pub fn plug(&self, x: RProcess) -> RProcess {
        self.0.iter().rev().fold(x, |acc, f| f.plug(acc))
    }
}

/// Every way of writing `x` as `C[Y]`, in preorder.
pub fn decompositions(x: &RProcess) -> Vec<(GeneralContext, RProcess)> {
    fn go(x: &RProcess, path: &mut Vec<Frame>, out: &mut Vec<(GeneralContext, RProcess)>) {
        out.push((GeneralContext(path.clone()), x.clone()));
        match x {
            RProcess::Nil => {}
            // Active prefixes guard lifted terms, which hold no history.
            RProcess::Out { .. } | RProcess::In { .. } => {}
            RProcess::PastOut { cont, .. } | RProcess::PastIn { cont, .. } => {
                let (h, _) = HistoryContext::split(x);
                path.push(h.0[0].clone());
                go(cont, path, out);
                path.pop();
            }
            RProcess::Par { left, right } => {
                path.push(Frame::ParLeft((**right).clone()));
                go(left, path, out);
                path.pop();
                path.push(Frame::ParRight((**left).clone()));
                go(right, path, out);
                path.pop();
            }
            RProcess::New { name, mem, body } => {
                path.push(Frame::New {
                    name: name.clone(),
                    mem: mem.clone(),
                });
                go(body, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(x, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::SemanticsKind;
    use crate::syntax::{lift, parse_process};

    #[test]
    fn every_decomposition_plugs_back() {
        let inner = lift(
            &parse_process("new a.(b<a> | c(x).x<d>)").unwrap(),
            SemanticsKind::Bs,
        );
        let x = RProcess::PastOut {
            subj: Name::star("e"),
            obj: Name::star("f"),
            key: Key(1),
            cause: CauseSet::star(),
            cont: Box::new(inner),
        };
        let ds = decompositions(&x);
        assert!(ds.len() >= 5);
        for (ctx, hole) in ds {
            assert_eq!(ctx.plug(hole), x);
        }
    }

    #[test]
    fn history_split_stops_at_active_part() {
        let x = RProcess::PastIn {
            subj: Name::star("b"),
            binder: "x".into(),
            key: Key(2),
            cause: CauseSet::star(),
            cont: Box::new(RProcess::Nil),
        };
        let (h, rest) = HistoryContext::split(&x);
        assert_eq!(h.0.len(), 1);
        assert_eq!(*rest, RProcess::Nil);
        assert_eq!(h.plug(rest.clone()), x);
    }
}
