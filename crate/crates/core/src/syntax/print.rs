use std::fmt::{self, Display, Formatter};

use super::{CauseSet, Key, KeyStar, Name, Process, RProcess};
use crate::memory::Memory;

// `new` extends maximally to the right, so a left operand of `|` whose
// rightmost spine ends in a restriction must be parenthesised.
fn process_ends_open(p: &Process) -> bool {
    match p {
        Process::New { .. } => true,
        Process::Out { cont, .. } | Process::In { cont, .. } => process_ends_open(cont),
        Process::Nil | Process::Par { .. } => false,
    }
}

fn fmt_seq(p: &Process, f: &mut Formatter<'_>) -> fmt::Result {
    match p {
        Process::Par { .. } => write!(f, "({p})"),
        _ => write!(f, "{p}"),
    }
}

impl Display for Process {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Process::Nil => f.write_str("0"),
            Process::Out { subj, obj, cont } => {
                write!(f, "{subj}<{obj}>")?;
                if **cont != Process::Nil {
                    f.write_str(".")?;
                    fmt_seq(cont, f)?;
                }
                Ok(())
            }
            Process::In { subj, binder, cont } => {
                write!(f, "{subj}({binder})")?;
                if **cont != Process::Nil {
                    f.write_str(".")?;
                    fmt_seq(cont, f)?;
                }
                Ok(())
            }
            Process::Par { left, right } => {
                if matches!(**left, Process::Par { .. }) || process_ends_open(left) {
                    write!(f, "({left}) | {right}")
                } else {
                    write!(f, "{left} | {right}")
                }
            }
            Process::New { name, body } => write!(f, "new {name}.{body}"),
        }
    }
}

impl Display for Name {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.inst {
            KeyStar::Star => write!(f, "{}", self.base),
            KeyStar::Key(k) => write!(f, "{}^{k}", self.base),
        }
    }
}

fn fmt_set<T: Display>(items: impl IntoIterator<Item = T>, f: &mut Formatter<'_>) -> fmt::Result {
    f.write_str("{")?;
    for (n, item) in items.into_iter().enumerate() {
        if n > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str("}")
}

impl Display for Memory {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Memory::Set { gamma } => fmt_set(gamma, f),
            Memory::Indexed { gamma, w } => {
                fmt_set(gamma, f)?;
                write!(f, "_{w}")
            }
            Memory::SetIndexed { gamma, omega } => {
                fmt_set(gamma, f)?;
                f.write_str("_")?;
                fmt_set(omega, f)
            }
        }
    }
}

/// Renders a reversible process with its history, e.g.
/// `new a{1,2}_1.(b<a>[1,*] | c(x)[2,{*,1}])`.
///
/// Instantiators other than `*` print as `a^3`; empty memories are omitted.
/// The output is meant for people; use the JSON encoding to round-trip.
pub struct ReversibleDisplay<'a>(pub &'a RProcess);

fn history(key: Key, cause: &CauseSet) -> String {
    format!("[{key},{cause}]")
}

fn rp_ends_open(x: &RProcess) -> bool {
    match x {
        RProcess::New { .. } => true,
        RProcess::Out { cont, .. }
        | RProcess::In { cont, .. }
        | RProcess::PastOut { cont, .. }
        | RProcess::PastIn { cont, .. } => rp_ends_open(cont),
        RProcess::Nil | RProcess::Par { .. } => false,
    }
}

fn rp_cont(cont: &RProcess, f: &mut Formatter<'_>) -> fmt::Result {
    if *cont == RProcess::Nil {
        return Ok(());
    }
    f.write_str(".")?;
    match cont {
        RProcess::Par { .. } => write!(f, "({})", ReversibleDisplay(cont)),
        _ => write!(f, "{}", ReversibleDisplay(cont)),
    }
}

impl Display for ReversibleDisplay<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            RProcess::Nil => f.write_str("0"),
            RProcess::Out { subj, obj, cont } => {
                write!(f, "{subj}<{obj}>")?;
                rp_cont(cont, f)
            }
            RProcess::In { subj, binder, cont } => {
                write!(f, "{subj}({binder})")?;
                rp_cont(cont, f)
            }
            RProcess::PastOut {
                subj,
                obj,
                key,
                cause,
                cont,
            } => {
                write!(f, "{subj}<{obj}>{}", history(*key, cause))?;
                rp_cont(cont, f)
            }
            RProcess::PastIn {
                subj,
                binder,
                key,
                cause,
                cont,
            } => {
                write!(f, "{subj}({binder}){}", history(*key, cause))?;
                rp_cont(cont, f)
            }
            RProcess::Par { left, right } => {
                let l = ReversibleDisplay(left);
                let r = ReversibleDisplay(right);
                if matches!(**left, RProcess::Par { .. }) || rp_ends_open(left) {
                    write!(f, "({l}) | {r}")
                } else {
                    write!(f, "{l} | {r}")
                }
            }
            RProcess::New { name, mem, body } => {
                if mem.is_empty() {
                    write!(f, "new {name}.{}", ReversibleDisplay(body))
                } else {
                    write!(f, "new {name}{mem}.{}", ReversibleDisplay(body))
                }
            }
        }
    }
}

impl Display for RProcess {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        ReversibleDisplay(self).fmt(f)
    }
}
