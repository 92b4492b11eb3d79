//! Bounded, corpus-driven checks of the metatheory.

use std::collections::{HashMap, HashSet, VecDeque};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bs_oracle::{check_structural_correspondence_with, rem, CorrespondenceError, RemFn, DEFAULT_TRACE_BUDGET};
use crate::causality::{canonical_form, classify_adjacent, residual, Budget, EquivalenceError, Trace};
use crate::memory::SemanticsKind;
use crate::pi_oracle::check_forward_bisim;
use crate::semantics::{Direction, KeySupply, Lts, Transition};
use crate::syntax::{lift, parse_process, Key, ParseError, Process, RProcess};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub source: String,
    pub process: Process,
    /// Upper bound on the exploration depth for this entry.
    pub depth: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{name}: {source}")]
    Parse { name: String, source: ParseError },
    #[error("{name}: bad depth line {line:?}")]
    Depth { name: String, line: String },
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

const DEFAULT_ENTRY_DEPTH: usize = 4;

macro_rules! builtin {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/", $name, ".pi")))),*]
    };
}

const BUILTIN: &[(&str, &str)] = builtin![
    "01-name-passing",
    "02-three-extruders",
    "03-double-extrusion",
    "04-two-rounds",
    "05-forward-received",
    "06-private-channel",
    "07-close-then-use",
    "08-competing-senders",
    "09-competing-receivers",
    "10-repeat-extrusion",
    "11-two-restrictions",
    "12-receiver-first",
    "13-spawn-after-input",
    "14-internal-only",
    "15-extrude-and-use",
    "16-merged-causes",
    "17-two-extruders-one-reader",
    "18-close-then-talk",
    "19-relay",
    "20-two-private-names",
    "21-inside-and-outside",
    "22-guarded-pairs",
    "23-send-twice",
    "24-extruded-input",
];

impl CorpusEntry {
    /// Parses a corpus file: `#` lines are comments, `# depth: N` sets the
    /// depth bound, everything else is the process.
    pub fn parse(name: &str, text: &str) -> Result<Self, CorpusError> {
        let mut depth = DEFAULT_ENTRY_DEPTH;
        let mut body = String::new();
        for line in text.lines() {
            let t = line.trim();
            if let Some(comment) = t.strip_prefix('#') {
                if let Some(d) = comment.trim().strip_prefix("depth:") {
                    depth = d.trim().parse().map_err(|_| CorpusError::Depth {
                        name: name.to_owned(),
                        line: line.to_owned(),
                    })?;
                }
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let process = parse_process(&body).map_err(|source| CorpusError::Parse {
            name: name.to_owned(),
            source,
        })?;
        Ok(CorpusEntry {
            name: name.to_owned(),
            source: body.trim().to_owned(),
            process,
            depth,
        })
    }
}

impl Corpus {
    /// The corpus shipped with the crate.
    pub fn builtin() -> Self {
        let entries = BUILTIN
            .iter()
            .map(|(n, t)| CorpusEntry::parse(n, t).expect("builtin corpus parses"))
            .collect();
        Corpus { entries }
    }

    /// Every `*.pi` file in `dir`, sorted by file name.
    pub fn load_dir(dir: &Path) -> Result<Self, CorpusError> {
        let io = |e| CorpusError::Io(dir.display().to_string(), e);
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "pi"))
            .collect();
        paths.sort();
        let mut entries = Vec::new();
        for p in paths {
            let text = std::fs::read_to_string(&p).map_err(|e| CorpusError::Io(p.display().to_string(), e))?;
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            entries.push(CorpusEntry::parse(&name, &text)?);
        }
        Ok(Corpus { entries })
    }

    pub fn single(name: &str, p: Process, depth: usize) -> Self {
        Corpus {
            entries: vec![CorpusEntry {
                name: name.to_owned(),
                source: p.to_string(),
                process: p,
                depth,
            }],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub entry: String,
    pub message: String,
    /// Transitions that witness the failure, in trace order. For
    /// consistency failures, the two traces are separated by their sources.
    pub witness: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub kind: Option<SemanticsKind>,
    pub depth: usize,
    pub entries: usize,
    pub states: usize,
    /// Transitions, pairs or traces examined, depending on the property.
    pub checked: usize,
    pub violations: usize,
    /// Bidirectional-edge contractions exercised (correspondence checks only).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub contractions: usize,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn summary(&self) -> String {
        let kind = self.kind.map(|k| format!(" [{k}]")).unwrap_or_default();
        let mut s = format!(
            "{}{kind}: {:?}, {} entries, depth {}, {} states, {} checked, {} violations",
            self.property, self.verdict, self.entries, self.depth, self.states, self.checked, self.violations
        );
        if self.contractions > 0 {
            s.push_str(&format!(", {} contractions", self.contractions));
        }
        if let Some(c) = &self.counterexample {
            s.push_str(&format!("\n    first counterexample in {}: {}", c.entry, c.message));
        }
        s
    }
}

/// Per-entry outcome, merged in corpus order.
#[derive(Default)]
struct Partial {
    states: usize,
    checked: usize,
    violations: usize,
    contractions: usize,
    budget: bool,
    counterexample: Option<Counterexample>,
}

fn run(
    property: &str,
    kind: Option<SemanticsKind>,
    corpus: &Corpus,
    depth: usize,
    f: impl Fn(&CorpusEntry, usize) -> Partial + Sync,
) -> CheckReport {
    let parts: Vec<Partial> = corpus
        .entries
        .par_iter()
        .map(|e| {
            let d = depth.min(e.depth);
            let p = f(e, d);
            tracing::debug!(property, entry = %e.name, states = p.states, checked = p.checked, violations = p.violations);
            p
        })
        .collect();
    let mut report = CheckReport {
        property: property.to_owned(),
        kind,
        depth,
        entries: corpus.entries.len(),
        states: 0,
        checked: 0,
        violations: 0,
        contractions: 0,
        verdict: Verdict::Pass,
        counterexample: None,
    };
    let mut budget = false;
    for p in parts {
        report.states += p.states;
        report.checked += p.checked;
        report.violations += p.violations;
        report.contractions += p.contractions;
        budget |= p.budget;
        if report.counterexample.is_none() {
            report.counterexample = p.counterexample;
        }
    }
    report.verdict = if report.violations > 0 {
        Verdict::Fail
    } else if budget {
        Verdict::BudgetExceeded
    } else {
        Verdict::Pass
    };
    report
}

/// States reachable from `x` in at most `depth` steps in either direction,
/// with their distance, in breadth-first order.
pub fn reachable(lts: &dyn Lts, x: &RProcess, depth: usize) -> Vec<(RProcess, usize)> {
    let mut seen = HashSet::from([x.clone()]);
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(x.clone(), 0)]);
    while let Some((s, d)) = queue.pop_front() {
        if d < depth {
            for t in lts.all_steps(&s) {
                if seen.insert(t.target.clone()) {
                    queue.push_back((t.target, d + 1));
                }
            }
        }
        out.push((s, d));
    }
    out
}

/// Every forward step is undone by a backward step with the same label, and
/// every backward step is redone by a forward step with the same label.
pub fn check_loop_lemma(corpus: &Corpus, lts: &dyn Lts, depth: usize) -> CheckReport {
    run("loop", Some(lts.kind()), corpus, depth, |e, d| {
        let states = reachable(lts, &lift(&e.process, lts.kind()), d);
        let mut p = Partial {
            states: states.len(),
            ..Partial::default()
        };
        for (x, _) in &states {
            for t in lts.all_steps(x) {
                p.checked += 1;
                let back = match t.dir {
                    Direction::Forward => lts.backward(&t.target),
                    Direction::Backward => lts.forward(&t.target, KeySupply::Fixed(t.label.key)),
                };
                let inverse = t.reverse();
                if !back.contains(&inverse) {
                    p.violations += 1;
                    p.counterexample.get_or_insert_with(|| Counterexample {
                        entry: e.name.clone(),
                        message: format!("{} step {} has no inverse", t.dir.as_str(), t.label),
                        witness: vec![t.clone()],
                    });
                }
            }
        }
        p
    })
}

/// Every concurrent adjacent pair `t1; t2`, with `t1` leaving a state at
/// distance below `depth`, closes into a square.
pub fn check_square_lemma(corpus: &Corpus, lts: &dyn Lts, depth: usize) -> CheckReport {
    run("square", Some(lts.kind()), corpus, depth, |e, d| {
        let states = reachable(lts, &lift(&e.process, lts.kind()), d);
        let mut p = Partial {
            states: states.len(),
            ..Partial::default()
        };
        for (x, dist) in &states {
            if *dist >= d {
                continue;
            }
            for t1 in lts.all_steps(x) {
                for t2 in lts.all_steps(&t1.target) {
                    if !classify_adjacent(&t1, &t2).concurrent {
                        continue;
                    }
                    p.checked += 1;
                    if let Err(err) = residual(lts, &t1, &t2) {
                        p.violations += 1;
                        p.counterexample.get_or_insert_with(|| Counterexample {
                            entry: e.name.clone(),
                            message: format!("{} {} then {} {}: {err}", t1.dir.as_str(), t1.label, t2.dir.as_str(), t2.label),
                            witness: vec![t1.clone(), t2],
                        });
                    }
                }
            }
        }
        p
    })
}

/// How forward steps pick keys while enumerating traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyPolicy {
    LowestFresh,
    /// Any fresh key in `1..=n`.
    Pool(u32),
}

fn steps_with(lts: &dyn Lts, x: &RProcess, policy: KeyPolicy) -> Vec<Transition> {
    let mut out = match policy {
        KeyPolicy::LowestFresh => lts.forward(x, KeySupply::LowestFresh),
        KeyPolicy::Pool(n) => (1..=n).flat_map(|k| lts.forward(x, KeySupply::Fixed(Key(k)))).collect(),
    };
    out.extend(lts.backward(x));
    out
}

/// All traces of length at most `depth` from `x`, the empty one included.
pub fn traces(lts: &dyn Lts, x: &RProcess, depth: usize, policy: KeyPolicy) -> Vec<Trace> {
    fn go(lts: &dyn Lts, x: &RProcess, depth: usize, policy: KeyPolicy, cur: &mut Trace, out: &mut Vec<Trace>) {
        out.push(cur.clone());
        if cur.len() == depth {
            return;
        }
        for t in steps_with(lts, x, policy) {
            let next = t.target.clone();
            cur.push(t);
            go(lts, &next, depth, policy, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(lts, x, depth, policy, &mut Vec::new(), &mut out);
    out
}

/// Coinitial traces are cofinal exactly when they are equivalent up to
/// permutation: within each endpoint group all canonical forms coincide, and
/// no canonical form is shared by two groups.
pub fn check_causal_consistency(corpus: &Corpus, lts: &dyn Lts, depth: usize, policy: KeyPolicy) -> CheckReport {
    run("consistency", Some(lts.kind()), corpus, depth, |e, d| {
        let x = lift(&e.process, lts.kind());
        let all = traces(lts, &x, d, policy);
        let mut p = Partial {
            checked: all.len(),
            ..Partial::default()
        };
        let forms: Vec<Result<Trace, EquivalenceError>> = all
            .par_iter()
            .map(|s| canonical_form(lts, s, Budget::default()))
            .collect();
        let endpoint = |s: &Trace| s.last().map_or(x.clone(), |t| t.target.clone());
        let mut groups: HashMap<RProcess, (usize, &Trace)> = HashMap::new();
        let mut owner: HashMap<&Trace, usize> = HashMap::new();
        for (n, (s, form)) in all.iter().zip(&forms).enumerate() {
            let form = match form {
                Ok(f) => f,
                Err(_) => {
                    p.budget = true;
                    continue;
                }
            };
            let end = endpoint(s);
            let mut fail = |msg: &str, other: usize| {
                p.violations += 1;
                p.counterexample.get_or_insert_with(|| Counterexample {
                    entry: e.name.clone(),
                    message: msg.to_owned(),
                    witness: all[other].iter().chain(s).cloned().collect(),
                });
            };
            if endpoint(form) != end || form.first().is_some_and(|t| t.source != x) {
                fail("canonical form changes the endpoints", n);
                continue;
            }
            match groups.get(&end) {
                Some(&(first, f)) if f != form => fail("cofinal traces are not equivalent", first),
                Some(_) => {}
                None => {
                    groups.insert(end.clone(), (n, form));
                }
            }
            match owner.get(form) {
                Some(&first) if endpoint(&all[first]) != end => fail("equivalent traces are not cofinal", first),
                Some(_) => {}
                None => {
                    owner.insert(form, n);
                }
            }
        }
        p.states = groups.len();
        p
    })
}

/// `{(X, φ(X))}` is a strong forward bisimulation on the reachable states.
pub fn check_bisim(corpus: &Corpus, lts: &dyn Lts, depth: usize) -> CheckReport {
    run("bisim", Some(lts.kind()), corpus, depth, |e, d| {
        let v = check_forward_bisim(lts, &lift(&e.process, lts.kind()), d);
        Partial {
            states: v.states,
            checked: v.states,
            violations: usize::from(v.counterexample.is_some()),
            contractions: 0,
            budget: false,
            counterexample: v.counterexample.map(|c| Counterexample {
                entry: e.name.clone(),
                message: format!("{} step {} -> {} unmatched", c.unmatched_side, c.label, c.target),
                witness: Vec::new(),
            }),
        }
    })
}

/// Structural and causal correspondence with the oracle, under indexed
/// memories.
pub fn check_bs_correspondence(corpus: &Corpus, depth: usize) -> CheckReport {
    check_bs_correspondence_with(corpus, depth, &rem)
}

pub fn check_bs_correspondence_with(corpus: &Corpus, depth: usize, rem_fn: &RemFn) -> CheckReport {
    run("bs-corr", Some(SemanticsKind::Bs), corpus, depth, |e, d| {
        match check_structural_correspondence_with(&e.process, d, rem_fn, DEFAULT_TRACE_BUDGET) {
            Ok(r) => Partial {
                states: r.engine_traces,
                checked: r.engine_traces + r.oracle_traces,
                violations: usize::from(r.mismatch.is_some()),
                contractions: r.contractions,
                budget: false,
                counterexample: r.mismatch.map(|m| Counterexample {
                    entry: e.name.clone(),
                    message: format!("{:?} trace [{}]: {}", m.side, m.trace.join("; "), m.reason),
                    witness: Vec::new(),
                }),
            },
            Err(CorrespondenceError::BudgetExceeded(_)) => Partial {
                budget: true,
                ..Partial::default()
            },
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Engine;

    #[test]
    fn builtin_corpus_respects_its_size_limits() {
        fn count(p: &Process, par: &mut usize, new: &mut usize, pre: &mut usize) {
            match p {
                Process::Nil => {}
                Process::Out { cont, .. } | Process::In { cont, .. } => {
                    *pre += 1;
                    count(cont, par, new, pre)
                }
                Process::Par { left, right } => {
                    *par += 1;
                    count(left, par, new, pre);
                    count(right, par, new, pre)
                }
                Process::New { body, .. } => {
                    *new += 1;
                    count(body, par, new, pre)
                }
            }
        }
        let c = Corpus::builtin();
        assert_eq!(c.entries.len(), 24);
        for e in &c.entries {
            let (mut par, mut new, mut pre) = (0, 0, 0);
            count(&e.process, &mut par, &mut new, &mut pre);
            assert!(par <= 2 && new <= 2 && pre <= 5, "{}", e.name);
        }
    }

    #[test]
    fn corpus_entry_parsing() {
        let e = CorpusEntry::parse("x", "# a comment\n# depth: 2\nb<a>.0\n| c(x)\n").unwrap();
        assert_eq!(e.depth, 2);
        assert_eq!(e.process.to_string(), "b<a> | c(x)");
        assert!(matches!(CorpusEntry::parse("x", "# depth: two\n0"), Err(CorpusError::Depth { .. })));
        assert!(matches!(CorpusEntry::parse("x", "b<a"), Err(CorpusError::Parse { .. })));
    }

    #[test]
    fn single_prefix_loop() {
        let c = Corpus::single("one", parse_process("b<a>.0").unwrap(), 2);
        let r = check_loop_lemma(&c, &Engine::new(SemanticsKind::Rpi), 2);
        assert!(r.passed());
        assert_eq!((r.states, r.checked), (2, 2));
    }

    #[test]
    fn depth_is_capped_per_entry() {
        let c = Corpus::single("one", parse_process("b<a>.c<d>.e<f>").unwrap(), 1);
        assert_eq!(check_loop_lemma(&c, &Engine::new(SemanticsKind::Rpi), 4).states, 2);
    }

    #[test]
    fn trace_enumeration_counts() {
        let lts = Engine::new(SemanticsKind::Rpi);
        let x = lift(&parse_process("b<a>").unwrap(), lts.kind());
        // ε, fwd, fwd;bwd
        assert_eq!(traces(&lts, &x, 2, KeyPolicy::LowestFresh).len(), 3);
        // ε, fwd1, fwd2, and each undone
        assert_eq!(traces(&lts, &x, 2, KeyPolicy::Pool(2)).len(), 5);
    }
}
