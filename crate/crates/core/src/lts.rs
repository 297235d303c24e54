//! Labelled transitions, plain and spied.
//!
//! Transitions are derived rule by rule over the syntax of a state. States
//! are normalised first and then rearranged so that spies sit where the
//! spy rules can see the communications they are allowed to witness: hide
//! binders outermost, bare spies outside every restriction they do not
//! mention, named spies next to the threads they watch.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::congruence::{from_standard_form, normalize, Binder, StandardForm};
use crate::name::{Name, NameSet};
use crate::parser::pretty;
use crate::process::{alpha_canonicalize, readable, substitute, BinderKind, Process};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    /// `x(z)`
    In {
        subject: Name,
        object: Name,
    },
    /// `x!<z>`
    Out {
        subject: Name,
        object: Name,
    },
    /// `(z)x!<z>`
    BoundOut {
        subject: Name,
        object: Name,
    },
    Tau,
    /// `?x`, offered by a spy; the subject may be `nu`.
    SpyQuery(Name),
    /// `!x`, a communication on `x`; the subject may be `nu`.
    CommSignal(Name),
}

impl Action {
    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    pub fn free_names(&self) -> NameSet {
        match self {
            Action::In { subject, .. } | Action::BoundOut { subject, .. } => {
                [subject.clone()].into()
            }
            Action::Out { subject, object } => [subject.clone(), object.clone()].into(),
            Action::Tau => NameSet::new(),
            Action::SpyQuery(x) | Action::CommSignal(x) => [x.clone()].into(),
        }
    }

    pub fn bound_names(&self) -> NameSet {
        match self {
            Action::In { object, .. } | Action::BoundOut { object, .. } => [object.clone()].into(),
            _ => NameSet::new(),
        }
    }

    pub fn subject(&self) -> Option<&Name> {
        match self {
            Action::In { subject, .. }
            | Action::Out { subject, .. }
            | Action::BoundOut { subject, .. } => Some(subject),
            _ => None,
        }
    }

    pub fn object(&self) -> Option<&Name> {
        match self {
            Action::In { object, .. } | Action::Out { object, .. } => Some(object),
            _ => None,
        }
    }

    fn map_object(&self, f: impl Fn(&Name) -> Name) -> Action {
        match self {
            Action::BoundOut { subject, object } => Action::BoundOut {
                subject: subject.clone(),
                object: f(object),
            },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::In { subject, object } => write!(f, "{subject}({object})"),
            Action::Out { subject, object } => write!(f, "{subject}!<{object}>"),
            Action::BoundOut { subject, object } => write!(f, "({object}){subject}!<{object}>"),
            Action::Tau => f.write_str("tau"),
            Action::SpyQuery(x) => write!(f, "?{x}"),
            Action::CommSignal(x) => write!(f, "!{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Plain,
    Spied,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LtsError {
    #[error("term contains a spy; use spied mode")]
    ModeMismatch,
}

/// Names tried as the object of an input. Besides `known`, the names
/// `#1 .. #fresh_count` stand for names nobody has seen yet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameBudget {
    pub known: NameSet,
    pub fresh_count: usize,
}

impl NameBudget {
    pub fn new(known: NameSet, fresh_count: usize) -> Self {
        NameBudget {
            known,
            fresh_count: fresh_count.max(1),
        }
    }

    /// Budget for comparing the given processes: their free names plus one
    /// fresh name.
    pub fn for_processes<'a>(ps: impl IntoIterator<Item = &'a Process>) -> Self {
        let known = ps.into_iter().flat_map(|p| p.free_names()).collect();
        NameBudget::new(known, 1)
    }

    fn candidates(&self, state: &Process) -> NameSet {
        let mut c = self.known.clone();
        c.extend((1..=self.fresh_count).map(Name::generated));
        c.extend(state.free_names().into_iter().filter(Name::is_generated));
        c
    }
}

fn is_bare_spy(t: &Process) -> bool {
    match t {
        Process::Spy { spied: None, .. } => true,
        Process::Repl(body) => is_bare_spy(body),
        _ => false,
    }
}

fn is_spy(t: &Process) -> bool {
    match t {
        Process::Spy { .. } => true,
        Process::Repl(body) => is_spy(body),
        _ => false,
    }
}

/// Lays out a standard form for rule-by-rule derivation.
pub(crate) fn arrange(s: &StandardForm) -> Process {
    let (bare, rest): (Vec<&Process>, Vec<&Process>) =
        s.threads.iter().partition(|t| is_bare_spy(t));
    let (named, plain): (Vec<&Process>, Vec<&Process>) = rest.into_iter().partition(|t| is_spy(t));
    let spy_names: NameSet = bare.iter().flat_map(|t| t.free_names()).collect();
    let (outer, inner): (Vec<&Binder>, Vec<&Binder>) = s
        .binders
        .iter()
        .filter(|b| b.kind == BinderKind::New)
        .partition(|b| spy_names.contains(&b.name));

    let core = Process::par_all(named.into_iter().cloned().chain(std::iter::once(
        Process::par_all(plain.into_iter().cloned()),
    )));
    let core = inner
        .iter()
        .rev()
        .fold(core, |acc, b| Process::new_(b.name.clone(), acc));
    let body = Process::par_all(bare.into_iter().cloned().chain(std::iter::once(core)));
    let body = outer
        .iter()
        .rev()
        .fold(body, |acc, b| Process::new_(b.name.clone(), acc));
    s.binders
        .iter()
        .filter(|b| b.kind == BinderKind::Hide)
        .rev()
        .fold(body, |acc, b| Process::hide(b.name.clone(), acc))
}

struct Deriver<'a> {
    mode: Mode,
    candidates: &'a NameSet,
}

impl Deriver<'_> {
    fn com_label(&self, x: &Name) -> Action {
        match self.mode {
            Mode::Plain => Action::Tau,
            Mode::Spied => Action::CommSignal(x.clone()),
        }
    }

    fn derive(&self, p: &Process) -> Vec<(Action, Process)> {
        match p {
            Process::Nil => Vec::new(),
            Process::Input {
                subject,
                param,
                blocked,
                body,
            } => self
                .candidates
                .iter()
                .filter(|z| !blocked.contains(*z))
                .map(|z| {
                    (
                        Action::In {
                            subject: subject.clone(),
                            object: z.clone(),
                        },
                        substitute(body, z, param),
                    )
                })
                .collect(),
            Process::TrustedInput {
                subject,
                param,
                accepted,
                body,
            } => accepted
                .iter()
                .filter(|z| self.candidates.contains(*z))
                .map(|z| {
                    (
                        Action::In {
                            subject: subject.clone(),
                            object: z.clone(),
                        },
                        substitute(body, z, param),
                    )
                })
                .collect(),
            Process::Output {
                subject,
                object,
                body,
            } => vec![(
                Action::Out {
                    subject: subject.clone(),
                    object: object.clone(),
                },
                (**body).clone(),
            )],
            Process::Spy { spied, body } => vec![(
                Action::SpyQuery(spied.clone().unwrap_or_else(Name::nu)),
                (**body).clone(),
            )],
            Process::Repl(body) => self
                .derive(body)
                .into_iter()
                .map(|(a, q)| (a, Process::par(q, p.clone())))
                .collect(),
            Process::New(b, body) => self.derive_new(b, body),
            Process::Hide(h, body) => self.derive_hide(h, body),
            Process::Par(l, r) => self.derive_par(l, r),
        }
    }

    fn derive_new(&self, b: &Name, body: &Process) -> Vec<(Action, Process)> {
        let mut out = Vec::new();
        for (a, q) in self.derive(body) {
            if let Action::Out { subject, object } = &a {
                if object == b && subject != b {
                    out.push((
                        Action::BoundOut {
                            subject: subject.clone(),
                            object: b.clone(),
                        },
                        q,
                    ));
                    continue;
                }
            }
            if a.object() == Some(b) {
                continue;
            }
            let relabelled = match self.mode {
                Mode::Plain => (!a.free_names().contains(b)).then_some(a),
                Mode::Spied => {
                    if a.subject() == Some(b) {
                        None
                    } else if !a.free_names().contains(b) {
                        Some(a)
                    } else {
                        match a {
                            Action::CommSignal(_) => Some(Action::CommSignal(Name::nu())),
                            Action::SpyQuery(_) => Some(Action::SpyQuery(Name::nu())),
                            _ => None,
                        }
                    }
                }
            };
            if let Some(a) = relabelled {
                out.push((a, Process::new_(b.clone(), q)));
            }
        }
        out
    }

    fn derive_hide(&self, h: &Name, body: &Process) -> Vec<(Action, Process)> {
        let mut out = Vec::new();
        for (a, q) in self.derive(body) {
            if a.subject() == Some(h) || a.object() == Some(h) {
                continue;
            }
            let relabelled = match self.mode {
                Mode::Plain => (!a.free_names().contains(h)).then_some(a),
                Mode::Spied => {
                    if !a.free_names().contains(h) {
                        Some(a)
                    } else {
                        match a {
                            Action::CommSignal(_) | Action::SpyQuery(_) => Some(Action::Tau),
                            _ => None,
                        }
                    }
                }
            };
            if let Some(a) = relabelled {
                out.push((a, Process::hide(h.clone(), q)));
            }
        }
        out
    }

    fn derive_par(&self, l: &Process, r: &Process) -> Vec<(Action, Process)> {
        let dl = self.derive(l);
        let dr = self.derive(r);
        let mut out = Vec::new();
        for (a, q) in &dl {
            if !a.bound_names().iter().any(|n| r.is_free(n))
                || !matches!(a, Action::BoundOut { .. })
            {
                out.push((a.clone(), Process::par(q.clone(), r.clone())));
            }
        }
        for (a, q) in &dr {
            if !a.bound_names().iter().any(|n| l.is_free(n))
                || !matches!(a, Action::BoundOut { .. })
            {
                out.push((a.clone(), Process::par(l.clone(), q.clone())));
            }
        }
        // Com and Close in both directions
        for (outputs, receiver, out_on_left) in [(&dr, l, false), (&dl, r, true)] {
            for (a, q) in outputs.iter() {
                let (x, y, bound) = match a {
                    Action::Out { subject, object } => (subject, object, false),
                    Action::BoundOut { subject, object } => (subject, object, true),
                    _ => continue,
                };
                if bound && receiver.is_free(y) {
                    continue;
                }
                for p in recv(receiver, x, y) {
                    let joined = if out_on_left {
                        Process::par(q.clone(), p)
                    } else {
                        Process::par(p, q.clone())
                    };
                    let result = if bound {
                        Process::new_(y.clone(), joined)
                    } else {
                        joined
                    };
                    out.push((self.com_label(x), result));
                }
            }
        }
        if self.mode == Mode::Spied {
            for (a, q) in &dl {
                for (b, s) in &dr {
                    let hit = match (a, b) {
                        (Action::CommSignal(x), Action::SpyQuery(y))
                        | (Action::SpyQuery(y), Action::CommSignal(x)) => x == y,
                        _ => false,
                    };
                    if hit {
                        out.push((Action::Tau, Process::par(q.clone(), s.clone())));
                    }
                }
            }
        }
        out
    }
}

/// Residuals of `p` after receiving `y` on `x`.
fn recv(p: &Process, x: &Name, y: &Name) -> Vec<Process> {
    match p {
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } if subject == x && !blocked.contains(y) => vec![substitute(body, y, param)],
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } if subject == x && accepted.contains(y) => vec![substitute(body, y, param)],
        Process::Par(l, r) => {
            let mut out: Vec<Process> = recv(l, x, y)
                .into_iter()
                .map(|q| Process::par(q, (**r).clone()))
                .collect();
            out.extend(
                recv(r, x, y)
                    .into_iter()
                    .map(|q| Process::par((**l).clone(), q)),
            );
            out
        }
        Process::New(b, body) if b != x && b != y => recv(body, x, y)
            .into_iter()
            .map(|q| Process::new_(b.clone(), q))
            .collect(),
        Process::Hide(h, body) if h != x && h != y => recv(body, x, y)
            .into_iter()
            .map(|q| Process::hide(h.clone(), q))
            .collect(),
        Process::Repl(body) => recv(body, x, y)
            .into_iter()
            .map(|q| Process::par(q, p.clone()))
            .collect(),
        _ => Vec::new(),
    }
}

/// The extrusion name used for a bound output from `state`.
fn extrusion_name(state: &Process, budget: &NameBudget) -> Name {
    let free = state.free_names();
    (budget.fresh_count + 1..)
        .map(Name::generated)
        .find(|n| !free.contains(n))
        .expect("unbounded search")
}

/// Transitions of `p` with normalised targets, each paired with its
/// state key. Duplicate (action, target) pairs are removed.
pub fn transitions_keyed(
    p: &Process,
    mode: Mode,
    budget: &NameBudget,
) -> Result<Vec<(Action, String, Process)>, LtsError> {
    if mode == Mode::Plain && p.contains_spy() {
        return Err(LtsError::ModeMismatch);
    }
    let (_, sf) = normalize(p);
    let state = from_standard_form(&sf);
    let candidates = budget.candidates(&state);
    let deriver = Deriver {
        mode,
        candidates: &candidates,
    };
    let extruded = extrusion_name(&state, budget);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (a, q) in deriver.derive(&arrange(&sf)) {
        let (a, q) = match &a {
            Action::BoundOut { object, .. } => {
                let q = substitute(&alpha_canonicalize(&q), &extruded, object);
                (a.map_object(|_| extruded.clone()), q)
            }
            _ => (a, q),
        };
        let (key, form) = normalize(&q);
        if seen.insert((a.clone(), key.clone())) {
            out.push((a, key, from_standard_form(&form)));
        }
    }
    Ok(out)
}

/// All transitions of `p`, targets normalised.
pub fn transitions(
    p: &Process,
    mode: Mode,
    budget: &NameBudget,
) -> Result<Vec<(Action, Process)>, LtsError> {
    Ok(transitions_keyed(p, mode, budget)?
        .into_iter()
        .map(|(a, _, q)| (a, q))
        .collect())
}

/// An explored transition system. State 0 is the initial state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LtsGraph {
    pub states: Vec<Process>,
    pub keys: Vec<String>,
    pub edges: Vec<(usize, Action, usize)>,
    /// Whether the outgoing transitions of each state were computed.
    pub expanded: Vec<bool>,
    pub bound_hit: bool,
    pub mode: Mode,
}

impl LtsGraph {
    pub fn successors(&self, s: usize) -> impl Iterator<Item = (&Action, usize)> {
        self.edges
            .iter()
            .filter(move |(a, _, _)| *a == s)
            .map(|(_, act, b)| (act, *b))
    }

    pub fn index_of(&self, p: &Process) -> Option<usize> {
        let key = normalize(p).0;
        self.keys.iter().position(|k| *k == key)
    }

    /// Line format: `state <id> <term>`, `edge <src> <action> <dst>`,
    /// `boundhit <0|1>`.
    pub fn to_machine(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.states.iter().enumerate() {
            s.push_str(&format!("state {i} {}\n", pretty(&readable(p))));
        }
        for (a, act, b) in &self.edges {
            s.push_str(&format!("edge {a} {act} {b}\n"));
        }
        s.push_str(&format!("boundhit {}\n", u8::from(self.bound_hit)));
        s
    }

    pub fn to_dot(&self) -> String {
        let esc = |t: &str| t.replace('\\', "\\\\").replace('"', "\\\"");
        let mut s = String::from("digraph lts {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, p) in self.states.iter().enumerate() {
            let style = match (i == 0, self.expanded[i]) {
                (true, true) => ", style=bold",
                (true, false) => ", style=\"bold,dashed\"",
                (false, true) => "",
                (false, false) => ", style=dashed",
            };
            s.push_str(&format!(
                "  s{i} [label=\"{}\"{style}];\n",
                esc(&pretty(&readable(p)))
            ));
        }
        for (a, act, b) in &self.edges {
            s.push_str(&format!(
                "  s{a} -> s{b} [label=\"{}\"];\n",
                esc(&act.to_string())
            ));
        }
        s.push_str("}\n");
        s
    }

    /// Flat view with printed states and actions, for JSON export.
    pub fn view(&self) -> GraphView {
        GraphView {
            states: self.states.iter().map(|p| pretty(&readable(p))).collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, act, b)| EdgeView {
                    src: *a,
                    action: act.to_string(),
                    dst: *b,
                })
                .collect(),
            bound_hit: self.bound_hit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphView {
    pub states: Vec<String>,
    pub edges: Vec<EdgeView>,
    pub bound_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeView {
    pub src: usize,
    pub action: String,
    pub dst: usize,
}

/// Explores the transition graph of `p` breadth-first, up to `max_states`
/// states. States whose successors would exceed the bound are left
/// unexpanded and `bound_hit` is set.
pub fn build_graph(
    p: &Process,
    mode: Mode,
    budget: &NameBudget,
    max_states: usize,
) -> Result<LtsGraph, LtsError> {
    if mode == Mode::Plain && p.contains_spy() {
        return Err(LtsError::ModeMismatch);
    }
    let (key0, form0) = normalize(p);
    let mut g = LtsGraph {
        states: vec![from_standard_form(&form0)],
        keys: vec![key0.clone()],
        edges: Vec::new(),
        expanded: vec![false],
        bound_hit: false,
        mode,
    };
    let mut index: HashMap<String, usize> = HashMap::from([(key0, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let succ = transitions_keyed(&g.states[i], mode, budget)?;
        let fresh = succ
            .iter()
            .map(|(_, k, _)| k)
            .filter(|k| !index.contains_key(*k))
            .collect::<BTreeSet<_>>()
            .len();
        if g.states.len() + fresh > max_states.max(1) {
            g.bound_hit = true;
            continue;
        }
        g.expanded[i] = true;
        for (a, key, q) in succ {
            let j = *index.entry(key.clone()).or_insert_with(|| {
                g.states.push(q);
                g.keys.push(key);
                g.expanded.push(false);
                queue.push_back(g.states.len() - 1);
                g.states.len() - 1
            });
            g.edges.push((i, a, j));
        }
    }
    Ok(g)
}

/// Weak transition relation of an explored graph: for every state, the
/// pairs (α, target) with `s ⇒ -α̂-> ⇒ target`; τ stands for `τ*`.
pub fn saturate(g: &LtsGraph) -> Vec<BTreeSet<(Action, usize)>> {
    let n = g.states.len();
    let mut tau_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut vis_succ: Vec<Vec<(Action, usize)>> = vec![Vec::new(); n];
    for (a, act, b) in &g.edges {
        if act.is_tau() {
            tau_succ[*a].push(*b);
        } else {
            vis_succ[*a].push((act.clone(), *b));
        }
    }
    let tau_closure: Vec<BTreeSet<usize>> = (0..n)
        .map(|s| {
            let mut seen = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &tau_succ[u] {
                    if seen.insert(v) {
                        stack.push(v);
                    }
                }
            }
            seen
        })
        .collect();
    (0..n)
        .map(|s| {
            let mut out: BTreeSet<(Action, usize)> =
                tau_closure[s].iter().map(|&t| (Action::Tau, t)).collect();
            for &u in &tau_closure[s] {
                for (act, v) in &vis_succ[u] {
                    for &w in &tau_closure[*v] {
                        out.insert((act.clone(), w));
                    }
                }
            }
            out
        })
        .collect()
}

/// States reachable from `p` by `τ* α̂ τ*`, with α̂ empty when α is τ.
pub fn weak_closure(
    p: &Process,
    mode: Mode,
    budget: &NameBudget,
    alpha: &Action,
    max_states: usize,
) -> Result<(Vec<Process>, bool), LtsError> {
    let g = build_graph(p, mode, budget, max_states)?;
    let sat = saturate(&g);
    let mut out: Vec<Process> = sat[0]
        .iter()
        .filter(|(a, _)| a == alpha)
        .map(|(_, t)| g.states[*t].clone())
        .collect();
    out.dedup();
    Ok((out, g.bound_hit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(src: &str) -> Process {
        parse(src).unwrap()
    }

    fn budget(p: &Process) -> NameBudget {
        NameBudget::new(p.free_names(), 1)
    }

    fn acts(src: &str, mode: Mode) -> Vec<String> {
        let t = p(src);
        let mut v: Vec<String> = transitions(&t, mode, &budget(&t))
            .unwrap()
            .into_iter()
            .map(|(a, _)| a.to_string())
            .collect();
        v.sort();
        v
    }

    fn key(src: &str) -> String {
        normalize(&p(src)).0
    }

    #[test]
    fn action_names() {
        let a = Action::In {
            subject: "x".into(),
            object: "z".into(),
        };
        assert_eq!(a.free_names(), crate::name::name_set(["x"]));
        assert_eq!(a.bound_names(), crate::name::name_set(["z"]));
        let b = Action::BoundOut {
            subject: "x".into(),
            object: "z".into(),
        };
        assert_eq!(b.free_names(), crate::name::name_set(["x"]));
        assert_eq!(b.to_string(), "(z)x!<z>");
        assert!(Action::Tau.free_names().is_empty());
        assert_eq!(Action::CommSignal(Name::nu()).to_string(), "!nu");
    }

    #[test]
    fn input_branching_follows_blocked_and_accepted() {
        assert_eq!(acts("x(y/{a})", Mode::Plain), vec!["x(#1)", "x(x)"]);
        assert_eq!(acts("x(y) | a!<b>", Mode::Plain).len(), 5);
        assert_eq!(acts("x[y:{a}] | a!<a>", Mode::Plain), vec!["a!<a>", "x(a)"]);
        assert_eq!(acts("x[y:{q}]", Mode::Plain), vec!["x(q)"]);
        assert_eq!(acts("(hide q) x[y:{q}]", Mode::Plain), Vec::<String>::new());
    }

    #[test]
    fn spied_restricted_comm_signals_nu() {
        let t = p("(new x) (x!<z> | x(y))");
        let ts = transitions(&t, Mode::Spied, &budget(&t)).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].0, Action::CommSignal(Name::nu()));
        assert_eq!(normalize(&ts[0].1).0, key("0"));
        let plain = transitions(&t, Mode::Plain, &budget(&t)).unwrap();
        assert_eq!(plain[0].0, Action::Tau);
    }

    #[test]
    fn hidden_comm_is_silent_and_filtered() {
        let t = p("(hide x) (x!<z> | x(y).a!<y>)");
        let ts = transitions(&t, Mode::Spied, &budget(&t)).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].0, Action::Tau);
        assert_eq!(normalize(&ts[0].1).0, key("a!<z>"));
    }

    #[test]
    fn hidden_name_never_extruded() {
        for mode in [Mode::Plain, Mode::Spied] {
            assert!(acts("(hide x) z!<x>", mode).is_empty());
        }
    }

    #[test]
    fn spies_fire_queries() {
        assert_eq!(acts("spy:x.0", Mode::Spied), vec!["?x"]);
        assert_eq!(acts("spy.0", Mode::Spied), vec!["?nu"]);
        let t = p("spy.0");
        assert_eq!(
            transitions(&t, Mode::Plain, &budget(&t)),
            Err(LtsError::ModeMismatch)
        );
    }

    #[test]
    fn open_gives_bound_output_with_extrusion_name() {
        let ts = acts("(new y) x!<y>.y!<a>", Mode::Plain);
        assert_eq!(ts, vec!["(#2)x!<#2>"]);
        let t = p("(new y) x!<y>.y!<a>");
        let (_, q) = &transitions(&t, Mode::Plain, &budget(&t)).unwrap()[0];
        assert_eq!(pretty(q), "#2!<a>");
    }

    #[test]
    fn close_scopes_the_received_name() {
        let t = p("(new y) x!<y> | x(w).w!<a>");
        let ts = transitions(&t, Mode::Plain, &budget(&t)).unwrap();
        let tau: Vec<_> = ts.iter().filter(|(a, _)| a.is_tau()).collect();
        assert_eq!(tau.len(), 1);
        assert_eq!(normalize(&tau[0].1).0, key("(new y) y!<a>"));
    }

    #[test]
    fn spy_com_is_tau() {
        let ts = acts("x!<a> | x(y) | spy:x.w!<w>", Mode::Spied);
        assert!(ts.contains(&"tau".to_string()));
        assert!(ts.contains(&"!x".to_string()));
        let ts = acts("(new x) (x!<a> | x(y)) | spy.w!<w>", Mode::Spied);
        assert!(ts.contains(&"tau".to_string()));
        assert!(ts.contains(&"!nu".to_string()));
    }

    #[test]
    fn spy_mentioning_restricted_name_does_not_witness_it() {
        let ts = acts("(new x) (x!<a> | x(y) | spy.x!<x>)", Mode::Spied);
        assert!(!ts.contains(&"tau".to_string()));
    }

    #[test]
    fn replication_keeps_the_replica() {
        let t = p("!x!<a>");
        let ts = transitions(&t, Mode::Plain, &budget(&t)).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(normalize(&ts[0].1).0, key("!x!<a>"));
    }

    #[test]
    fn graph_examples() {
        let g = build_graph(&Process::Nil, Mode::Plain, &budget(&Process::Nil), 10).unwrap();
        assert_eq!(g.states.len(), 1);
        assert!(g.edges.is_empty());
        let t = p("(new x) (x!<z> | x(y))");
        let g = build_graph(&t, Mode::Spied, &budget(&t), 10).unwrap();
        assert_eq!(g.states.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].1, Action::CommSignal(Name::nu()));
        let t = p("!(new c) x!<c>.c(w)");
        let g = build_graph(&t, Mode::Plain, &budget(&t), 4).unwrap();
        assert!(g.bound_hit);
    }

    #[test]
    fn weak_closure_composes_tau_and_output() {
        let t = p("(hide x) (x!<m> | x(y).a!<y>)");
        let out = Action::Out {
            subject: "a".into(),
            object: "m".into(),
        };
        let (w, hit) = weak_closure(&t, Mode::Plain, &budget(&t), &out, 100).unwrap();
        assert!(!hit);
        assert_eq!(w.len(), 1);
        assert_eq!(normalize(&w[0]).0, key("0"));
        let (w, _) =
            weak_closure(&Process::Nil, Mode::Plain, &budget(&t), &Action::Tau, 10).unwrap();
        assert_eq!(w, vec![Process::Nil]);
    }

    #[test]
    fn serialisations() {
        let t = p("a!<b>");
        let g = build_graph(&t, Mode::Plain, &budget(&t), 10).unwrap();
        assert_eq!(
            g.to_machine(),
            "state 0 a!<b>\nstate 1 0\nedge 0 a!<b> 1\nboundhit 0\n"
        );
        assert!(g.to_dot().contains("s0 -> s1 [label=\"a!<b>\"]"));
    }
}
