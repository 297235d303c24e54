//! One-step reduction, with and without spies, and bounded reachability.
//!
//! Reduction works on standard forms: every binder is at the top, so a
//! redex is a pair (or, with a spy, a triple) of threads.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::congruence::{normalize, unfold_tracked, StandardForm};
use crate::name::Name;
use crate::process::{alpha_canonicalize, substitute, BinderKind, Process};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RedexKind {
    PlainCom,
    TrustedCom,
    SpyCom,
    SpyTrustedCom,
}

/// Thread indices into a standard form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Redex {
    pub kind: RedexKind,
    pub sender: usize,
    pub receiver: usize,
    pub spy: Option<usize>,
    pub object: Name,
}

/// Exploration bounds shared by reduction, the LTS and bisimulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_steps: usize,
    pub max_states: usize,
    /// Copies taken of every replicated thread before looking for redexes.
    pub repl_unfold: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_steps: 64,
            max_states: 5000,
            repl_unfold: 2,
        }
    }
}

fn can_witness(s: &StandardForm, spy: &Process, subject: &Name) -> bool {
    match spy {
        Process::Spy { spied: Some(x), .. } => x == subject,
        // (νx)P | spy.R ≡ (νx)(P | spy:x.R) when x ∉ fv(spy.R)
        Process::Spy { spied: None, .. } => {
            s.binder_kind(subject) == Some(BinderKind::New) && !spy.is_free(subject)
        }
        _ => false,
    }
}

/// All communication redexes among the threads of `s`.
pub fn enumerate_redexes(s: &StandardForm) -> Vec<Redex> {
    let mut out = Vec::new();
    for (si, sender) in s.threads.iter().enumerate() {
        let Process::Output {
            subject, object, ..
        } = sender
        else {
            continue;
        };
        for (ri, receiver) in s.threads.iter().enumerate() {
            let (plain, spied) = match receiver {
                Process::Input {
                    subject: x,
                    blocked,
                    ..
                } if x == subject && !blocked.contains(object) => {
                    (RedexKind::PlainCom, RedexKind::SpyCom)
                }
                Process::TrustedInput {
                    subject: x,
                    accepted,
                    ..
                } if x == subject && accepted.contains(object) => {
                    (RedexKind::TrustedCom, RedexKind::SpyTrustedCom)
                }
                _ => continue,
            };
            out.push(Redex {
                kind: plain,
                sender: si,
                receiver: ri,
                spy: None,
                object: object.clone(),
            });
            for (ki, spy) in s.threads.iter().enumerate() {
                if can_witness(s, spy, subject) {
                    out.push(Redex {
                        kind: spied,
                        sender: si,
                        receiver: ri,
                        spy: Some(ki),
                        object: object.clone(),
                    });
                }
            }
        }
    }
    out
}

/// The threads of `s` after firing `r`: the three prefixes are replaced by
/// their continuations, the receiver's with the parameter instantiated.
fn fire(s: &StandardForm, r: &Redex) -> Vec<Process> {
    let mut threads = s.threads.clone();
    let Process::Output { body: sent, .. } = &s.threads[r.sender] else {
        panic!("redex sender is not an output");
    };
    let received = match &s.threads[r.receiver] {
        Process::Input {
            param,
            blocked,
            body,
            ..
        } => {
            assert!(
                !blocked.contains(&r.object),
                "object is blocked by the receiver"
            );
            substitute(body, &r.object, param)
        }
        Process::TrustedInput {
            param,
            accepted,
            body,
            ..
        } => {
            assert!(
                accepted.contains(&r.object),
                "object is not accepted by the receiver"
            );
            substitute(body, &r.object, param)
        }
        _ => panic!("redex receiver is not an input"),
    };
    threads[r.sender] = (**sent).clone();
    threads[r.receiver] = received;
    if let Some(k) = r.spy {
        let Process::Spy { body, .. } = &s.threads[k] else {
            panic!("redex spy is not a spy");
        };
        threads[k] = (**body).clone();
    }
    threads
}

/// Fires `r` in `s` and returns the canonical reduct.
pub fn apply_redex(s: &StandardForm, r: &Redex) -> Process {
    let threads = fire(s, r);
    let p = crate::congruence::from_standard_form(&StandardForm {
        binders: s.binders.clone(),
        threads,
    });
    alpha_canonicalize(&p)
}

/// One-step successors of `p` up to structural congruence, each paired
/// with its state key. Replicated threads are unfolded `repl_unfold` times.
pub fn step_keyed(p: &Process, repl_unfold: usize) -> Vec<(String, Process)> {
    let (_, sf) = normalize(p);
    let unfolded = unfold_tracked(&sf, repl_unfold);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in enumerate_redexes(&unfolded.sf) {
        let threads = fire(&unfolded.sf, &r);
        let touched: HashSet<usize> = [Some(r.sender), Some(r.receiver), r.spy]
            .into_iter()
            .flatten()
            .filter_map(|i| unfolded.origin[i])
            .collect();
        let reduct = unfolded.residual(threads, &touched);
        let (key, form) = normalize(&reduct);
        if seen.insert(key.clone()) {
            out.push((key, crate::congruence::from_standard_form(&form)));
        }
    }
    out
}

/// One-step successors of `p`, deduplicated up to structural congruence.
pub fn step(p: &Process, repl_unfold: usize) -> Vec<Process> {
    step_keyed(p, repl_unfold)
        .into_iter()
        .map(|(_, q)| q)
        .collect()
}

/// Reachable state space explored breadth-first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reach {
    /// Normalised representatives; index 0 is the initial state.
    pub states: Vec<Process>,
    pub keys: Vec<String>,
    /// Reduction edges between state indices.
    pub edges: Vec<(usize, usize)>,
    /// BFS depth at which each state was first reached.
    pub depth: Vec<usize>,
    pub bound_hit: bool,
}

impl Reach {
    /// Indices of the states on a shortest reduction path from the initial
    /// state to `target`.
    pub fn path_to(&self, target: usize) -> Vec<usize> {
        let mut pred: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in &self.edges {
            if self.depth[a] + 1 == self.depth[b] {
                pred.entry(b).or_insert(a);
            }
        }
        let mut path = vec![target];
        let mut cur = target;
        while let Some(&p) = pred.get(&cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// Breadth-first closure of [`step`] from `p`. States further than
/// `max_steps` reductions from `p` and states beyond `max_states` are not
/// explored; `bound_hit` records whether anything was cut off.
pub fn reach(p: &Process, bounds: &Bounds) -> Reach {
    let (key0, form0) = normalize(p);
    let mut r = Reach {
        states: vec![crate::congruence::from_standard_form(&form0)],
        keys: vec![key0.clone()],
        edges: Vec::new(),
        depth: vec![0],
        bound_hit: false,
    };
    let mut index: HashMap<String, usize> = HashMap::from([(key0, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let succ = step_keyed(&r.states[i], bounds.repl_unfold);
        for (key, q) in succ {
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    if r.depth[i] >= bounds.max_steps || r.states.len() >= bounds.max_states {
                        r.bound_hit = true;
                        continue;
                    }
                    let j = r.states.len();
                    r.states.push(q);
                    r.keys.push(key.clone());
                    r.depth.push(r.depth[i] + 1);
                    index.insert(key, j);
                    queue.push_back(j);
                    j
                }
            };
            r.edges.push((i, j));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::to_standard_form;
    use crate::parser::parse;

    fn sf(src: &str) -> StandardForm {
        to_standard_form(&alpha_canonicalize(&parse(src).unwrap()))
    }

    fn key(src: &str) -> String {
        normalize(&parse(src).unwrap()).0
    }

    #[test]
    fn blocked_object_has_no_redex() {
        assert_eq!(enumerate_redexes(&sf("x!<v> | x(y/{z}).leak!<y>")).len(), 1);
        assert!(enumerate_redexes(&sf("x!<z> | x(y/{z}).leak!<y>")).is_empty());
        assert!(enumerate_redexes(&sf("x!<z> | x[y:{a}]")).is_empty());
        let rs = enumerate_redexes(&sf("x!<a> | x[y:{a}]"));
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].kind, RedexKind::TrustedCom);
    }

    #[test]
    fn spy_triple_and_pair_both_exist() {
        let s = sf("x!<z> | x(y).p!<y> | spy:x.w!<w>");
        let rs = enumerate_redexes(&s);
        assert_eq!(rs.len(), 2);
        let triple = rs.iter().find(|r| r.spy.is_some()).unwrap();
        assert_eq!(triple.kind, RedexKind::SpyCom);
        let out = apply_redex(&s, triple);
        assert_eq!(normalize(&out).0, key("p!<z> | w!<w>"));
    }

    #[test]
    fn bare_spy_witnesses_restricted_channels_only() {
        assert_eq!(
            enumerate_redexes(&sf("(new x) (x!<z> | x(y)) | spy.w!<w>")).len(),
            2
        );
        assert_eq!(enumerate_redexes(&sf("x!<z> | x(y) | spy.w!<w>")).len(), 1);
        assert_eq!(
            enumerate_redexes(&sf("(hide x) (x!<z> | x(y)) | spy.w!<w>")).len(),
            1
        );
    }

    #[test]
    fn step_examples() {
        assert!(step(&Process::Nil, 2).is_empty());
        let s = step(&parse("(hide x) (x!<z> | x(y).y!<y>)").unwrap(), 2);
        assert_eq!(s.len(), 1);
        assert_eq!(normalize(&s[0]).0, key("z!<z>"));
        let s = step(&parse("(hide z) x!<v> | x(y).leak!<y>").unwrap(), 2);
        assert_eq!(s.len(), 1);
        assert_eq!(normalize(&s[0]).0, key("leak!<v>"));
    }

    #[test]
    fn step_consumes_prefixes() {
        let s = step(&parse("a!<b>.c!<c> | a(x).x!<x>").unwrap(), 2);
        assert_eq!(s.len(), 1);
        assert_eq!(normalize(&s[0]).0, key("c!<c> | b!<b>"));
    }

    #[test]
    fn replication_unfolds_and_folds_back() {
        let p = parse("!x!<a> | x(y).y!<y>").unwrap();
        let s = step(&p, 2);
        assert_eq!(s.len(), 1);
        assert_eq!(normalize(&s[0]).0, key("!x!<a> | a!<a>"));
        // the reduct is congruent to the source
        let p = parse("!x!<a> | !x(y)").unwrap();
        let s = step(&p, 2);
        assert_eq!(s.len(), 1);
        assert_eq!(normalize(&s[0]).0, normalize(&p).0);
    }

    #[test]
    fn nested_replication_unfolds() {
        let s = step(&parse("!!x!<a> | x(y).y!<y>").unwrap(), 2);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn reach_examples() {
        let r = reach(&Process::Nil, &Bounds::default());
        assert_eq!(r.states.len(), 1);
        assert!(!r.bound_hit);
        let r = reach(
            &parse("(new x) (x!<z> | x(y))").unwrap(),
            &Bounds::default(),
        );
        assert_eq!(r.states.len(), 2);
        assert_eq!(r.keys[1], key("0"));
    }

    #[test]
    fn growing_replication_hits_the_bound() {
        let p = parse("!(new c) x!<c> | !x(y).y!<y>").unwrap();
        let b = Bounds {
            max_steps: 4,
            max_states: 100,
            repl_unfold: 2,
        };
        let r = reach(&p, &b);
        assert!(r.bound_hit);
        let b = Bounds {
            max_states: 3,
            ..Bounds::default()
        };
        assert!(reach(&p, &b).bound_hit);
    }

    #[test]
    fn path_to_follows_bfs_tree() {
        let r = reach(
            &parse("a!<b>.c!<d> | a(x) | c(y)").unwrap(),
            &Bounds::default(),
        );
        assert_eq!(r.states.len(), 3);
        assert_eq!(r.path_to(2), vec![0, 1, 2]);
    }
}
