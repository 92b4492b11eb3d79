//! Late causal semantics with cause-set wrappers `K :: A`, used as an
//! independent oracle for the indexed-memory instance of the engine.
//!
//! ```text
//! Pre    π.P  --∅; k:π-->  {k} :: P
//! Cau    A --K; k:π--> A'  ⟹  H :: A --K∪H; k:π--> H :: A'
//! Com    A --K1; k:b<a>--> A',  B --K2; k:b(x)--> B'
//!          ⟹  A|B --τ--> A'[k ↦ K2] | B'[k ↦ K1]{a/x}
//! Close  as Com with b<(a)>, under νa
//! ```
//!
//! Object causes live on traces: the first extrusion of a name causes every
//! later action that mentions it. Terms are assumed to have unique binders,
//! so no renaming is ever needed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::causality::CausalityGraph;
use crate::memory::SemanticsKind;
use crate::pi_oracle::{subst, PiLabel};
use crate::semantics::{Direction, Engine, KeySupply, Label, Lts, Transition};
use crate::syntax::{alpha_equivalent, erase, erase_label, lift, uniquify, Ident, Key, Process, RProcess};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
// Adjacent tagging: `Plain` wraps a `Process`, which is itself tagged by `type`.
#[serde(tag = "type", content = "term", rename_all = "snake_case")]
pub enum CausalTerm {
    Plain(Process),
    Cause { keys: BTreeSet<Key>, body: Box<CausalTerm> },
    Par { left: Box<CausalTerm>, right: Box<CausalTerm> },
    Restrict { name: Ident, body: Box<CausalTerm> },
}

/// `k : π`, or a bare τ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zeta {
    pub key: Option<Key>,
    pub action: PiLabel,
}

/// `K_B` and `ζ`. Silent actions carry no key and an empty cause set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BsLabel {
    pub cause: BTreeSet<Key>,
    pub key: Option<Key>,
    pub action: PiLabel,
}

impl BsLabel {
    pub fn zeta(&self) -> Zeta {
        Zeta {
            key: self.key,
            action: self.action.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BsStep {
    pub label: BsLabel,
    /// For τ, the union of the participants' causes; equal to `label.cause`
    /// otherwise.
    pub merged: BTreeSet<Key>,
    pub target: CausalTerm,
}

fn names(action: &PiLabel) -> Vec<&Ident> {
    match action {
        PiLabel::FreeOut { subj, obj } | PiLabel::BoundOut { subj, obj } => vec![subj, obj],
        PiLabel::In { subj, .. } => vec![subj],
        PiLabel::Tau => vec![],
    }
}

fn wrap(keys: BTreeSet<Key>, body: CausalTerm) -> CausalTerm {
    CausalTerm::Cause {
        keys,
        body: Box::new(body),
    }
}

fn par(left: CausalTerm, right: CausalTerm) -> CausalTerm {
    CausalTerm::Par {
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// `A[k ↦ K]`: replaces the cause `k` by the set `K`.
fn replace_cause(a: &CausalTerm, k: Key, with: &BTreeSet<Key>) -> CausalTerm {
    match a {
        CausalTerm::Plain(_) => a.clone(),
        CausalTerm::Cause { keys, body } => {
            let mut keys = keys.clone();
            if keys.remove(&k) {
                keys.extend(with.iter().copied());
            }
            wrap(keys, replace_cause(body, k, with))
        }
        CausalTerm::Par { left, right } => par(replace_cause(left, k, with), replace_cause(right, k, with)),
        CausalTerm::Restrict { name, body } => CausalTerm::Restrict {
            name: name.clone(),
            body: Box::new(replace_cause(body, k, with)),
        },
    }
}

fn rename(a: &CausalTerm, x: &Ident, b: &Ident) -> CausalTerm {
    match a {
        CausalTerm::Plain(p) => CausalTerm::Plain(subst(p, x, b)),
        CausalTerm::Cause { keys, body } => wrap(keys.clone(), rename(body, x, b)),
        CausalTerm::Par { left, right } => par(rename(left, x, b), rename(right, x, b)),
        CausalTerm::Restrict { name, .. } if name == x => a.clone(),
        CausalTerm::Restrict { name, body } => {
            debug_assert!(name != b, "binders are unique");
            CausalTerm::Restrict {
                name: name.clone(),
                body: Box::new(rename(body, x, b)),
            }
        }
    }
}

type Raw = (PiLabel, BTreeSet<Key>, CausalTerm);

fn raw_steps(a: &CausalTerm, k: Key) -> Vec<Raw> {
    match a {
        CausalTerm::Plain(p) => match p {
            Process::Nil => vec![],
            Process::Out { subj, obj, cont } => vec![(
                PiLabel::FreeOut {
                    subj: subj.clone(),
                    obj: obj.clone(),
                },
                BTreeSet::new(),
                wrap(BTreeSet::from([k]), CausalTerm::Plain((**cont).clone())),
            )],
            Process::In { subj, binder, cont } => vec![(
                PiLabel::In {
                    subj: subj.clone(),
                    binder: binder.clone(),
                },
                BTreeSet::new(),
                wrap(BTreeSet::from([k]), CausalTerm::Plain((**cont).clone())),
            )],
            Process::Par { left, right } => raw_steps(
                &par(CausalTerm::Plain((**left).clone()), CausalTerm::Plain((**right).clone())),
                k,
            ),
            Process::New { name, body } => raw_steps(
                &CausalTerm::Restrict {
                    name: name.clone(),
                    body: Box::new(CausalTerm::Plain((**body).clone())),
                },
                k,
            ),
        },
        CausalTerm::Cause { keys, body } => raw_steps(body, k)
            .into_iter()
            .map(|(l, c, t)| (l, &c | keys, wrap(keys.clone(), t)))
            .collect(),
        CausalTerm::Restrict { name, body } => {
            let mut out = Vec::new();
            for (l, c, t) in raw_steps(body, k) {
                let keep = |t| CausalTerm::Restrict {
                    name: name.clone(),
                    body: Box::new(t),
                };
                match &l {
                    PiLabel::FreeOut { subj, obj } if subj != name && obj == name => {
                        let l = PiLabel::BoundOut {
                            subj: subj.clone(),
                            obj: obj.clone(),
                        };
                        out.push((l, c, t));
                    }
                    PiLabel::Tau => out.push((l, c, keep(t))),
                    _ if names(&l).contains(&name) => {}
                    _ => out.push((l, c, keep(t))),
                }
            }
            out
        }
        CausalTerm::Par { left, right } => {
            let ls = raw_steps(left, k);
            let rs = raw_steps(right, k);
            let mut out = Vec::new();
            for (l, c, t) in &ls {
                out.push((l.clone(), c.clone(), par(t.clone(), (**right).clone())));
            }
            for (l, c, t) in &rs {
                out.push((l.clone(), c.clone(), par((**left).clone(), t.clone())));
            }
            for (lo, co, to) in &ls {
                for (li, ci, ti) in &rs {
                    if let Some(s) = communicate(k, (lo, co, to), (li, ci, ti), false) {
                        out.push(s);
                    }
                }
            }
            for (li, ci, ti) in &ls {
                for (lo, co, to) in &rs {
                    if let Some(s) = communicate(k, (lo, co, to), (li, ci, ti), true) {
                        out.push(s);
                    }
                }
            }
            out
        }
    }
}

fn communicate(
    k: Key,
    (lo, co, to): (&PiLabel, &BTreeSet<Key>, &CausalTerm),
    (li, ci, ti): (&PiLabel, &BTreeSet<Key>, &CausalTerm),
    output_on_right: bool,
) -> Option<Raw> {
    let PiLabel::In { subj: b2, binder } = li else {
        return None;
    };
    let (b1, a, bound) = match lo {
        PiLabel::FreeOut { subj, obj } => (subj, obj, false),
        PiLabel::BoundOut { subj, obj } => (subj, obj, true),
        _ => return None,
    };
    if b1 != b2 {
        return None;
    }
    let sender = replace_cause(to, k, ci);
    let receiver = rename(&replace_cause(ti, k, co), binder, a);
    let body = if output_on_right {
        par(receiver, sender)
    } else {
        par(sender, receiver)
    };
    let target = if bound {
        CausalTerm::Restrict {
            name: a.clone(),
            body: Box::new(body),
        }
    } else {
        body
    };
    Some((PiLabel::Tau, co | ci, target))
}

/// Every step of `a` whose key, if visible, is `k`.
pub fn bs_steps(a: &CausalTerm, k: Key) -> Vec<BsStep> {
    raw_steps(a, k)
        .into_iter()
        .map(|(action, c, target)| {
            let tau = action == PiLabel::Tau;
            BsStep {
                label: BsLabel {
                    cause: if tau { BTreeSet::new() } else { c.clone() },
                    key: (!tau).then_some(k),
                    action,
                },
                merged: c,
                target,
            }
        })
        .collect()
}

/// Erases cause wrappers.
pub fn lambda(a: &CausalTerm) -> Process {
    match a {
        CausalTerm::Plain(p) => p.clone(),
        CausalTerm::Cause { body, .. } => lambda(body),
        CausalTerm::Par { left, right } => Process::par(lambda(left), lambda(right)),
        CausalTerm::Restrict { name, body } => Process::New {
            name: name.clone(),
            body: Box::new(lambda(body)),
        },
    }
}

/// Maps an engine label to `ζ`.
pub fn gamma(mu: &Label) -> Zeta {
    let action = erase_label(mu);
    Zeta {
        key: (action != PiLabel::Tau).then_some(mu.key),
        action,
    }
}

/// Direct causes of each step of an oracle trace, by trace index: subject
/// causes from the cause sets (merged sets for τ) and object causes from the
/// first extrusion of every name a later visible label mentions.
pub fn bs_trace_causes(trace: &[BsStep]) -> Vec<BTreeSet<usize>> {
    let mut by_key = BTreeMap::new();
    let mut extruder: BTreeMap<Ident, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(trace.len());
    for (n, s) in trace.iter().enumerate() {
        let mut causes: BTreeSet<usize> = s.merged.iter().filter_map(|k| by_key.get(k).copied()).collect();
        for a in names(&s.label.action) {
            if let Some(&e) = extruder.get(a) {
                causes.insert(e);
            }
        }
        if let PiLabel::BoundOut { obj, .. } = &s.label.action {
            extruder.entry(obj.clone()).or_insert(n);
        }
        if let Some(k) = s.label.key {
            by_key.insert(k, n);
        }
        out.push(causes);
    }
    out
}

fn closure(direct: &[BTreeSet<usize>]) -> Vec<Vec<bool>> {
    let n = direct.len();
    let mut m = vec![vec![false; n]; n];
    for (b, causes) in direct.iter().enumerate() {
        m[b][b] = true;
        for &a in causes {
            m[a][b] = true;
        }
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

/// Keys of executed actions as vertices, with prefix nesting as edges. A
/// communication key labels two vertices joined in both directions.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DependencyGraph {
    pub vertices: Vec<Key>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DependencyGraph {
    pub fn new(vertices: Vec<Key>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        assert!(edges.iter().all(|&(a, b)| a < vertices.len() && b < vertices.len()));
        DependencyGraph { vertices, edges }
    }

    /// Graph of the history of `x`.
    pub fn of_history(x: &RProcess) -> Self {
        fn go(x: &RProcess, parent: Option<usize>, g: &mut DependencyGraph) {
            match x {
                RProcess::Nil | RProcess::Out { .. } | RProcess::In { .. } => {}
                RProcess::PastOut { key, cont, .. } | RProcess::PastIn { key, cont, .. } => {
                    let v = g.vertices.len();
                    g.vertices.push(*key);
                    if let Some(p) = parent {
                        g.edges.insert((p, v));
                    }
                    go(cont, Some(v), g);
                }
                RProcess::Par { left, right } => {
                    go(left, parent, g);
                    go(right, parent, g);
                }
                RProcess::New { body, .. } => go(body, parent, g),
            }
        }
        let mut g = DependencyGraph::default();
        go(x, None, &mut g);
        let mut first: BTreeMap<Key, usize> = BTreeMap::new();
        for (v, k) in g.vertices.iter().enumerate() {
            if let Some(&u) = first.get(k) {
                g.edges.insert((u, v));
                g.edges.insert((v, u));
            } else {
                first.insert(*k, v);
            }
        }
        g
    }

    /// Vertices with a path to a vertex keyed `i`, including those.
    fn ancestors(&self, i: Key) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = (0..self.vertices.len()).filter(|&v| self.vertices[v] == i).collect();
        let mut stack: Vec<usize> = seen.iter().copied().collect();
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                if b == v && seen.insert(a) {
                    stack.push(a);
                }
            }
        }
        seen
    }

    /// `K_F = V(i) \ {i}` as a multiset.
    pub fn structural_causes(&self, i: Key) -> BTreeMap<Key, usize> {
        let mut out = BTreeMap::new();
        for v in self.ancestors(i) {
            if self.vertices[v] != i {
                *out.entry(self.vertices[v]).or_insert(0) += 1;
            }
        }
        out
    }

    /// Edge list with one `key multiplicity` line per key, then one
    /// `from to` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut mult: BTreeMap<Key, usize> = BTreeMap::new();
        for k in &self.vertices {
            *mult.entry(*k).or_insert(0) += 1;
        }
        let mut s = String::from("# key multiplicity\n");
        for (k, m) in mult {
            let _ = writeln!(s, "{} {}", k.0, m);
        }
        s.push_str("# from to\n");
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "{} {}", self.vertices[a].0, self.vertices[b].0);
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Vertex {
    Key(Key),
    Tau(usize),
}

/// Removing keys from a set: restrict to the paths ending at `i`, contract
/// every bidirectional pair into a fresh τ vertex (ascending key order) and
/// return the surviving keys other than `i`.
pub fn rem(g: &DependencyGraph, i: Key) -> BTreeSet<Key> {
    let sub = g.ancestors(i);
    let mut label: BTreeMap<usize, Vertex> = sub.iter().map(|&v| (v, Vertex::Key(g.vertices[v]))).collect();
    let mut edges: BTreeSet<(usize, usize)> = g
        .edges
        .iter()
        .copied()
        .filter(|(a, b)| sub.contains(a) && sub.contains(b))
        .collect();
    let mut pairs: Vec<(Key, usize, usize)> = edges
        .iter()
        .filter(|&&(a, b)| a < b && edges.contains(&(b, a)))
        .map(|&(a, b)| (g.vertices[a], a, b))
        .collect();
    pairs.sort();
    for (l, (_, a, b)) in pairs.into_iter().enumerate() {
        // Merge b into a and relabel the result as τ_l.
        edges = edges
            .into_iter()
            .map(|(x, y)| (if x == b { a } else { x }, if y == b { a } else { y }))
            .filter(|(x, y)| x != y)
            .collect();
        label.remove(&b);
        label.insert(a, Vertex::Tau(l + 1));
    }
    label
        .values()
        .filter_map(|v| match v {
            Vertex::Key(k) if *k != i => Some(*k),
            _ => None,
        })
        .collect()
}

/// Reference implementation of [`rem`] by explicit enumeration of simple
/// paths ending at `i`.
pub fn rem_by_paths(g: &DependencyGraph, i: Key) -> BTreeSet<Key> {
    fn walk(g: &DependencyGraph, v: usize, path: &mut Vec<usize>, on_path: &mut BTreeSet<usize>) {
        on_path.extend(path.iter().copied());
        for &(a, b) in &g.edges {
            if b == v && !path.contains(&a) {
                path.push(a);
                walk(g, a, path, on_path);
                path.pop();
            }
        }
    }
    let mut on_path = BTreeSet::new();
    for v in (0..g.vertices.len()).filter(|&v| g.vertices[v] == i) {
        walk(g, v, &mut vec![v], &mut on_path);
    }
    let paired = |v: usize| {
        g.edges
            .iter()
            .any(|&(a, b)| a == v && g.edges.contains(&(b, a)) && on_path.contains(&b))
    };
    on_path
        .iter()
        .copied()
        .filter(|&v| g.vertices[v] != i && !paired(v))
        .map(|v| g.vertices[v])
        .collect()
}

/// A forward engine transition together with `K_F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedTransition {
    pub transition: Transition,
    pub structural_causes: BTreeMap<Key, usize>,
}

impl AnnotatedTransition {
    pub fn new(transition: Transition) -> Self {
        let g = DependencyGraph::of_history(match transition.dir {
            Direction::Forward => &transition.target,
            Direction::Backward => &transition.source,
        });
        let structural_causes = g.structural_causes(transition.label.key);
        AnnotatedTransition {
            transition,
            structural_causes,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// An engine trace without an oracle counterpart.
    Engine,
    /// An oracle trace without an engine counterpart.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub side: Side,
    /// Labels of the unmatched trace, last step included.
    pub trace: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub engine_traces: usize,
    pub oracle_traces: usize,
    /// Visible engine steps whose `K_F` contained a communication pair.
    pub contractions: usize,
    pub mismatch: Option<Mismatch>,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("search budget of {0} traces exceeded")]
    BudgetExceeded(usize),
}

pub type RemFn = dyn Fn(&DependencyGraph, Key) -> BTreeSet<Key> + Sync;

pub const DEFAULT_TRACE_BUDGET: usize = 1_000_000;

struct Search<'a> {
    engine: Engine,
    rem: &'a RemFn,
    budget: usize,
    report: CorrespondenceReport,
}

impl Search<'_> {
    /// Whether the oracle step `s` matches the engine step `t`.
    fn matches(&self, t: &Transition, s: &BsStep) -> bool {
        if s.label.zeta() != gamma(&t.label) {
            return false;
        }
        let g = DependencyGraph::of_history(&t.target);
        if (self.rem)(&g, t.label.key) != s.merged {
            return false;
        }
        let (p, q) = (erase(&t.target), lambda(&s.target));
        p == q || alpha_equivalent(&p, &q)
    }

    fn tick(&mut self, engine_side: bool) -> Result<(), CorrespondenceError> {
        let n = if engine_side {
            &mut self.report.engine_traces
        } else {
            &mut self.report.oracle_traces
        };
        *n += 1;
        if *n > self.budget {
            return Err(CorrespondenceError::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn fail(&mut self, side: Side, trace: Vec<String>, reason: impl Into<String>) {
        if self.report.mismatch.is_none() {
            self.report.mismatch = Some(Mismatch {
                side,
                trace,
                reason: reason.into(),
            });
        }
    }

    /// Engine traces, each carrying every oracle trace that matches it so far.
    fn engine_side(
        &mut self,
        x: &RProcess,
        trace: &mut Vec<Transition>,
        partners: Vec<(CausalTerm, Vec<BsStep>)>,
        depth: usize,
    ) -> Result<(), CorrespondenceError> {
        if self.report.mismatch.is_some() || trace.len() == depth {
            return Ok(());
        }
        for t in self.engine.forward(x, KeySupply::LowestFresh) {
            self.tick(true)?;
            let mut next = Vec::new();
            let mut seen = HashSet::new();
            for (a, bs) in &partners {
                for s in bs_steps(a, t.label.key) {
                    if self.matches(&t, &s) && seen.insert(s.target.clone()) {
                        let mut bs = bs.clone();
                        bs.push(s.clone());
                        next.push((s.target, bs));
                    }
                }
            }
            trace.push(t.clone());
            let labels = || trace.iter().map(|t| t.label.to_string()).collect();
            match next.first() {
                None => self.fail(Side::Engine, labels(), "no oracle step matches"),
                Some((_, bs)) => {
                    if t.label.action != crate::semantics::Action::Tau {
                        let kf = DependencyGraph::of_history(&t.target).structural_causes(t.label.key);
                        if kf.values().any(|&m| m > 1) {
                            self.report.contractions += 1;
                        }
                    }
                    if !causality_agrees(trace, bs) {
                        self.fail(Side::Engine, labels(), "causal orders differ");
                    }
                }
            }
            if self.report.mismatch.is_none() {
                let x2 = t.target.clone();
                self.engine_side(&x2, trace, next, depth)?;
            }
            trace.pop();
        }
        Ok(())
    }

    /// Oracle traces, each carrying every engine state that matches it so far.
    fn oracle_side(
        &mut self,
        a: &CausalTerm,
        trace: &mut Vec<BsStep>,
        partners: Vec<RProcess>,
        depth: usize,
    ) -> Result<(), CorrespondenceError> {
        if self.report.mismatch.is_some() || trace.len() == depth {
            return Ok(());
        }
        let k = Key(trace.len() as u32 + 1);
        for s in bs_steps(a, k) {
            self.tick(false)?;
            let mut next = Vec::new();
            let mut seen = HashSet::new();
            for x in &partners {
                for t in self.engine.forward(x, KeySupply::Fixed(k)) {
                    if self.matches(&t, &s) && seen.insert(t.target.clone()) {
                        next.push(t.target);
                    }
                }
            }
            trace.push(s.clone());
            if next.is_empty() {
                let labels = trace.iter().map(describe).collect();
                self.fail(Side::Oracle, labels, "no engine step matches");
            } else {
                self.oracle_side(&s.target, trace, next, depth)?;
            }
            trace.pop();
        }
        Ok(())
    }
}

fn describe(s: &BsStep) -> String {
    let keys = |c: &BTreeSet<Key>| c.iter().map(|k| k.0.to_string()).collect::<Vec<_>>().join(",");
    match s.label.key {
        Some(k) => format!("{{{}}} {}:{}", keys(&s.label.cause), k.0, s.label.action),
        None => format!("{{{}}} {}", keys(&s.merged), s.label.action),
    }
}

/// Compares the reflexive-transitive closures of engine causality and
/// oracle causality on every pair whose first step is visible. Silent
/// oracle steps are never causes, so pairs starting at τ are skipped.
fn causality_agrees(engine: &[Transition], oracle: &[BsStep]) -> bool {
    let f = CausalityGraph::of_trace(engine).closure();
    let b = closure(&bs_trace_causes(oracle));
    (0..engine.len()).all(|a| {
        oracle[a].label.key.is_none() || (0..engine.len()).all(|c| f[a][c] == b[a][c])
    })
}

/// Two-sided trace matching between the engine under indexed memories and
/// the oracle, to `depth` forward steps from `p`, with causal orders
/// compared along the way.
pub fn check_structural_correspondence(p: &Process, depth: usize) -> Result<CorrespondenceReport, CorrespondenceError> {
    check_structural_correspondence_with(p, depth, &rem, DEFAULT_TRACE_BUDGET)
}

/// As [`check_structural_correspondence`], with the `Rem` algorithm and the
/// trace budget supplied by the caller.
pub fn check_structural_correspondence_with(
    p: &Process,
    depth: usize,
    rem_fn: &RemFn,
    budget: usize,
) -> Result<CorrespondenceReport, CorrespondenceError> {
    let p = uniquify(p);
    let x = lift(&p, SemanticsKind::Bs);
    let a = CausalTerm::Plain(p);
    let mut search = Search {
        engine: Engine::new(SemanticsKind::Bs),
        rem: rem_fn,
        budget,
        report: CorrespondenceReport::default(),
    };
    search.engine_side(&x, &mut Vec::new(), vec![(a.clone(), Vec::new())], depth)?;
    search.oracle_side(&a, &mut Vec::new(), vec![x], depth)?;
    Ok(search.report)
}
