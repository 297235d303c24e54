//! Barbs, weak barbs and weak bisimilarity over explored graphs.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::congruence::Answer;
use crate::lts::{build_graph, saturate, Action, LtsError, LtsGraph, Mode, NameBudget};
use crate::name::Name;
use crate::process::{alpha_canonicalize, BinderKind, Process};
use crate::reduction::{reach, Bounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Barb {
    pub subject: Name,
    pub polarity: Polarity,
}

impl Barb {
    pub fn input(x: impl Into<Name>) -> Self {
        Barb {
            subject: x.into(),
            polarity: Polarity::Input,
        }
    }

    pub fn output(x: impl Into<Name>) -> Self {
        Barb {
            subject: x.into(),
            polarity: Polarity::Output,
        }
    }
}

impl fmt::Display for Barb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Input => write!(f, "{}?", self.subject),
            Polarity::Output => write!(f, "{}!", self.subject),
        }
    }
}

/// Strong barbs of `p`. A prefix counts when its subject is not captured
/// by an enclosing binder; an output additionally needs an object that no
/// enclosing hide captures, and a trusted input needs an accepted name that
/// no enclosing binder captures. Spies exhibit no barb.
pub fn barbs(p: &Process) -> BTreeSet<Barb> {
    fn walk(p: &Process, scope: &mut Vec<(Name, BinderKind)>, out: &mut BTreeSet<Barb>) {
        let bound = |n: &Name, scope: &Vec<(Name, BinderKind)>| scope.iter().any(|(b, _)| b == n);
        let hidden = |n: &Name, scope: &Vec<(Name, BinderKind)>| {
            scope.iter().any(|(b, k)| b == n && *k == BinderKind::Hide)
        };
        match p {
            Process::Input { subject, .. } => {
                if !bound(subject, scope) {
                    out.insert(Barb::input(subject.clone()));
                }
            }
            Process::TrustedInput {
                subject, accepted, ..
            } => {
                if !bound(subject, scope) && accepted.iter().any(|a| !bound(a, scope)) {
                    out.insert(Barb::input(subject.clone()));
                }
            }
            Process::Output {
                subject, object, ..
            } => {
                if !bound(subject, scope) && !hidden(object, scope) {
                    out.insert(Barb::output(subject.clone()));
                }
            }
            Process::Par(l, r) => {
                walk(l, scope, out);
                walk(r, scope, out);
            }
            Process::New(x, body) | Process::Hide(x, body) => {
                let kind = if matches!(p, Process::New(..)) {
                    BinderKind::New
                } else {
                    BinderKind::Hide
                };
                scope.push((x.clone(), kind));
                walk(body, scope, out);
                scope.pop();
            }
            Process::Repl(body) => walk(body, scope, out),
            Process::Nil | Process::Spy { .. } => {}
        }
    }
    let mut out = BTreeSet::new();
    walk(&alpha_canonicalize(p), &mut Vec::new(), &mut out);
    out
}

/// Whether some reduct of `p` exhibits `b`. `Unknown` when the search was
/// cut off without finding one.
pub fn weak_barb(p: &Process, b: &Barb, bounds: &Bounds) -> Answer {
    let r = reach(p, bounds);
    if r.states.iter().any(|s| barbs(s).contains(b)) {
        Answer::Yes
    } else if r.bound_hit {
        Answer::Unknown
    } else {
        Answer::No
    }
}

/// All weak barbs of `p`, with the reachability bound flag.
pub fn weak_barbs(p: &Process, bounds: &Bounds) -> (BTreeSet<Barb>, bool) {
    let r = reach(p, bounds);
    (r.states.iter().flat_map(barbs).collect(), r.bound_hit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// One round of the bisimulation game: `side` plays the weak move
/// `action` into `attacker`; `defender` is the other side's best answer,
/// absent when it has none.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub side: Side,
    pub action: Action,
    pub attacker: usize,
    pub defender: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InconclusiveReason {
    StateBound,
    ReplicationBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BisimVerdict {
    /// Related pairs of (left state, right state) indices.
    Bisimilar(Vec<(usize, usize)>),
    NotBisimilar(Vec<TraceStep>),
    Inconclusive(InconclusiveReason),
}

impl BisimVerdict {
    pub fn is_bisimilar(&self) -> bool {
        matches!(self, BisimVerdict::Bisimilar(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            BisimVerdict::Bisimilar(_) => "bisimilar",
            BisimVerdict::NotBisimilar(_) => "not-bisimilar",
            BisimVerdict::Inconclusive(_) => "inconclusive",
        }
    }

    /// Line format: `verdict <name>` then `pair <l> <r>`, `trace <action>
    /// <side>` or `reason <reason>` lines.
    pub fn to_lines(&self) -> String {
        let mut s = format!("verdict {}\n", self.name());
        match self {
            BisimVerdict::Bisimilar(pairs) => {
                for (l, r) in pairs {
                    s.push_str(&format!("pair {l} {r}\n"));
                }
            }
            BisimVerdict::NotBisimilar(trace) => {
                for t in trace {
                    s.push_str(&format!("trace {} {}\n", t.action, t.side));
                }
            }
            BisimVerdict::Inconclusive(r) => s.push_str(match r {
                InconclusiveReason::StateBound => "reason state-bound\n",
                InconclusiveReason::ReplicationBound => "reason replication-bound\n",
            }),
        }
        s
    }
}

/// A verdict together with the two graphs it was computed on.
#[derive(Debug, Clone)]
pub struct BisimReport {
    pub verdict: BisimVerdict,
    pub left: LtsGraph,
    pub right: LtsGraph,
}

impl BisimReport {
    pub fn graph(&self, side: Side) -> &LtsGraph {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Replays a distinguishing trace: every attacker move must be a weak
    /// move of the attacker's current state, every defender answer a weak
    /// move of the defender's, and the final defender must have no answer.
    pub fn replay(&self) -> bool {
        let BisimVerdict::NotBisimilar(trace) = &self.verdict else {
            return false;
        };
        let sat = [saturate(&self.left), saturate(&self.right)];
        let idx = |s: Side| if s == Side::Left { 0 } else { 1 };
        let mut cur = [0usize, 0usize];
        for (i, step) in trace.iter().enumerate() {
            let a = idx(step.side);
            let d = idx(step.side.other());
            if !sat[a][cur[a]].contains(&(step.action.clone(), step.attacker)) {
                return false;
            }
            let answers = sat[d][cur[d]].iter().any(|(act, _)| *act == step.action);
            match step.defender {
                Some(t) => {
                    if !sat[d][cur[d]].contains(&(step.action.clone(), t)) {
                        return false;
                    }
                    cur[d] = t;
                }
                None => return i + 1 == trace.len() && !answers,
            }
            cur[a] = step.attacker;
        }
        // the last step had a defender answer: the pair must still be split
        !trace.is_empty()
    }
}

struct Refinement {
    /// Block of each combined state after each round.
    history: Vec<Vec<usize>>,
    sat: Vec<BTreeSet<(Action, usize)>>,
}

impl Refinement {
    fn run(left: &LtsGraph, right: &LtsGraph) -> Self {
        let n = left.states.len();
        let mut sat = saturate(left);
        sat.extend(
            saturate(right)
                .into_iter()
                .map(|s| s.into_iter().map(|(a, t)| (a, t + n)).collect()),
        );
        let expanded: Vec<bool> = left
            .expanded
            .iter()
            .chain(&right.expanded)
            .copied()
            .collect();
        let mut next_frozen = 1;
        let initial: Vec<usize> = expanded
            .iter()
            .map(|&e| {
                if e {
                    0
                } else {
                    next_frozen += 1;
                    next_frozen - 1
                }
            })
            .collect();
        let mut history = vec![initial];
        loop {
            let prev = history.last().unwrap();
            let mut ids: HashMap<(usize, BTreeSet<(Action, usize)>), usize> = HashMap::new();
            let block: Vec<usize> = (0..sat.len())
                .map(|s| {
                    let sig: BTreeSet<(Action, usize)> = if expanded[s] {
                        sat[s].iter().map(|(a, t)| (a.clone(), prev[*t])).collect()
                    } else {
                        BTreeSet::new()
                    };
                    let len = ids.len();
                    *ids.entry((prev[s], sig)).or_insert(len)
                })
                .collect();
            let count = |b: &Vec<usize>| b.iter().collect::<BTreeSet<_>>().len();
            let stable = count(&block) == count(prev);
            history.push(block);
            if stable {
                break;
            }
        }
        Refinement { history, sat }
    }

    fn last(&self) -> &Vec<usize> {
        self.history.last().unwrap()
    }

    /// First round in which `s` and `t` are in different blocks.
    fn split_round(&self, s: usize, t: usize) -> Option<usize> {
        self.history.iter().position(|b| b[s] != b[t])
    }

    /// Attack and defence for a split pair; combined indices.
    fn trace(&self, mut s: usize, mut t: usize, n: usize) -> Vec<TraceStep> {
        let side_of = |x: usize| if x < n { Side::Left } else { Side::Right };
        let local = |x: usize| if x < n { x } else { x - n };
        let mut out = Vec::new();
        while let Some(k) = self.split_round(s, t) {
            if k == 0 {
                break;
            }
            let prev = &self.history[k - 1];
            let sig = |x: usize| -> BTreeSet<(Action, usize)> {
                self.sat[x]
                    .iter()
                    .map(|(a, y)| (a.clone(), prev[*y]))
                    .collect()
            };
            let (ss, st) = (sig(s), sig(t));
            let (attacker, defender, (action, block)) = match ss.difference(&st).next() {
                Some(m) => (s, t, m.clone()),
                None => (t, s, st.difference(&ss).next().expect("split pair").clone()),
            };
            let target = self.sat[attacker]
                .iter()
                .find(|(a, y)| *a == action && prev[*y] == block)
                .map(|(_, y)| *y)
                .expect("attacker move");
            let answer = self.sat[defender]
                .iter()
                .filter(|(a, _)| *a == action)
                .max_by_key(|(_, y)| self.split_round(target, *y).unwrap_or(usize::MAX))
                .map(|(_, y)| *y);
            out.push(TraceStep {
                side: side_of(attacker),
                action,
                attacker: local(target),
                defender: answer.map(local),
            });
            match answer {
                Some(y) => {
                    s = target;
                    t = y;
                }
                None => break,
            }
        }
        out
    }
}

/// Decides weak bisimilarity of `p` and `q` on their explored graphs.
/// Both graphs use the free names of `p` and `q` plus `fresh_count` fresh
/// names as input candidates.
pub fn bisim_report(
    p: &Process,
    q: &Process,
    mode: Mode,
    bounds: &Bounds,
    fresh_count: usize,
) -> Result<BisimReport, LtsError> {
    let budget = NameBudget::new(
        p.free_names().into_iter().chain(q.free_names()).collect(),
        fresh_count,
    );
    let left = build_graph(p, mode, &budget, bounds.max_states)?;
    let right = build_graph(q, mode, &budget, bounds.max_states)?;
    let n = left.states.len();
    let r = Refinement::run(&left, &right);
    let block = r.last();
    let verdict = if block[0] == block[n] {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..right.states.len() {
                if block[i] == block[n + j] {
                    pairs.push((i, j));
                }
            }
        }
        BisimVerdict::Bisimilar(pairs)
    } else if left.bound_hit || right.bound_hit {
        BisimVerdict::Inconclusive(if p.contains_repl() || q.contains_repl() {
            InconclusiveReason::ReplicationBound
        } else {
            InconclusiveReason::StateBound
        })
    } else {
        BisimVerdict::NotBisimilar(r.trace(0, n, n))
    };
    Ok(BisimReport {
        verdict,
        left,
        right,
    })
}

pub fn bisimilar(
    p: &Process,
    q: &Process,
    mode: Mode,
    bounds: &Bounds,
    fresh_count: usize,
) -> Result<BisimVerdict, LtsError> {
    Ok(bisim_report(p, q, mode, bounds, fresh_count)?.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(src: &str) -> Process {
        parse(src).unwrap()
    }

    fn barb_names(src: &str) -> Vec<String> {
        barbs(&p(src)).iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn barb_clauses() {
        assert_eq!(barb_names("(hide x) z[y:{x}]"), Vec::<String>::new());
        assert_eq!(barb_names("(hide y) x!<v>"), vec!["x!"]);
        assert_eq!(barb_names("(hide y) x!<y>"), Vec::<String>::new());
        assert_eq!(barb_names("(new y) x!<y>"), vec!["x!"]);
        assert_eq!(barb_names("(new x) z[y:{a,x}]"), vec!["z?"]);
        assert_eq!(barb_names("(new x) z[y:{x}]"), Vec::<String>::new());
        assert_eq!(barb_names("z[y:{}]"), Vec::<String>::new());
        assert_eq!(barb_names("!a(x) | spy:a.b!<b>"), vec!["a?"]);
        assert_eq!(barb_names("c!<c>.a(x)"), vec!["c!"]);
    }

    #[test]
    fn weak_barb_examples() {
        let b = Bounds::default();
        assert_eq!(weak_barb(&p("a!<b>"), &Barb::output("a"), &b), Answer::Yes);
        assert_eq!(
            weak_barb(
                &p("(hide z) x!<v> | x(y).leak!<y>"),
                &Barb::output("leak"),
                &b
            ),
            Answer::Yes
        );
        assert_eq!(
            weak_barb(
                &p("(hide z) x!<z> | x(y).leak!<y>"),
                &Barb::output("leak"),
                &b
            ),
            Answer::No
        );
    }

    fn verdict(l: &str, r: &str, mode: Mode) -> BisimReport {
        bisim_report(&p(l), &p(r), mode, &Bounds::default(), 1).unwrap()
    }

    #[test]
    fn identity_and_simple_differences() {
        assert!(verdict("a!<b> | c(x)", "c(x) | a!<b>", Mode::Plain)
            .verdict
            .is_bisimilar());
        let r = verdict("a!<b>", "a!<c>", Mode::Plain);
        assert!(matches!(r.verdict, BisimVerdict::NotBisimilar(_)));
        assert!(r.replay());
    }

    #[test]
    fn restricted_comm_is_visible_to_the_spy() {
        let r = verdict("(new x) (x!<z> | x(y))", "0", Mode::Spied);
        match &r.verdict {
            BisimVerdict::NotBisimilar(t) => {
                assert_eq!(t.len(), 1);
                assert_eq!(t[0].action, Action::CommSignal(Name::nu()));
                assert_eq!(t[0].side, Side::Left);
                assert_eq!(t[0].defender, None);
            }
            v => panic!("unexpected {v:?}"),
        }
        assert!(r.replay());
        assert!(verdict("(new x) (x!<z> | x(y))", "0", Mode::Plain)
            .verdict
            .is_bisimilar());
    }

    #[test]
    fn hidden_comm_is_invisible() {
        for q in ["0", "a!<a>", "a(w)"] {
            let l = format!("(hide x) (x!<z> | x(y).{q})");
            assert!(verdict(&l, q, Mode::Spied).verdict.is_bisimilar(), "{q}");
        }
        assert!(verdict("(hide x) z!<x>", "0", Mode::Spied)
            .verdict
            .is_bisimilar());
    }

    #[test]
    fn deep_trace_replays() {
        let r = verdict("a(x).b!<b>.c!<c>", "a(x).b!<b>.d!<d>", Mode::Plain);
        let BisimVerdict::NotBisimilar(t) = &r.verdict else {
            panic!()
        };
        assert_eq!(t.len(), 3);
        assert!(r.replay());
    }

    #[test]
    fn weak_matching_absorbs_tau() {
        assert!(
            verdict("(new c) (c!<c> | c(y).a!<a>)", "a!<a>", Mode::Plain)
                .verdict
                .is_bisimilar()
        );
    }

    #[test]
    fn bound_hit_is_inconclusive() {
        let b = Bounds {
            max_states: 3,
            ..Bounds::default()
        };
        let v = bisimilar(&p("!(new c) x!<c>.c(w)"), &p("0"), Mode::Plain, &b, 1).unwrap();
        assert_eq!(
            v,
            BisimVerdict::Inconclusive(InconclusiveReason::ReplicationBound)
        );
    }

    #[test]
    fn verdict_lines() {
        let v = verdict("(new x) (x!<z> | x(y))", "0", Mode::Spied).verdict;
        assert_eq!(v.to_lines(), "verdict not-bisimilar\ntrace !nu left\n");
        let v = verdict("0", "0", Mode::Plain).verdict;
        assert_eq!(v.to_lines(), "verdict bisimilar\npair 0 0\n");
    }
}
