//! Process terms and the name-level operations on them: free and bound
//! names, capture-avoiding substitution, the blocking operation `⊎`, and
//! alpha-conversion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::name::{plain_fresh, FreshSupply, Name, NameSet};

/// A term of the secret π-calculus, including spy prefixes.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Process {
    Nil,
    /// `x(y/B).P`: receive on `x` any name not in `blocked`.
    Input {
        subject: Name,
        param: Name,
        blocked: NameSet,
        body: Box<Process>,
    },
    /// `x[y:A].P`: receive on `x` only names in `accepted`.
    TrustedInput {
        subject: Name,
        param: Name,
        accepted: NameSet,
        body: Box<Process>,
    },
    /// `x!<y>.P`
    Output {
        subject: Name,
        object: Name,
        body: Box<Process>,
    },
    Par(Box<Process>, Box<Process>),
    New(Name, Box<Process>),
    Hide(Name, Box<Process>),
    Repl(Box<Process>),
    /// `spy:x.P` when `spied` is set, bare `spy.P` otherwise.
    Spy {
        spied: Option<Name>,
        body: Box<Process>,
    },
}

/// The two binder operators that can scope over a parallel composition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinderKind {
    Hide,
    New,
}

impl Process {
    pub fn input(subject: impl Into<Name>, param: impl Into<Name>, body: Process) -> Self {
        Process::Input {
            subject: subject.into(),
            param: param.into(),
            blocked: NameSet::new(),
            body: Box::new(body),
        }
    }

    pub fn input_blocking(
        subject: impl Into<Name>,
        param: impl Into<Name>,
        blocked: NameSet,
        body: Process,
    ) -> Self {
        Process::Input {
            subject: subject.into(),
            param: param.into(),
            blocked,
            body: Box::new(body),
        }
    }

    pub fn trusted(
        subject: impl Into<Name>,
        param: impl Into<Name>,
        accepted: NameSet,
        body: Process,
    ) -> Self {
        Process::TrustedInput {
            subject: subject.into(),
            param: param.into(),
            accepted,
            body: Box::new(body),
        }
    }

    pub fn output(subject: impl Into<Name>, object: impl Into<Name>, body: Process) -> Self {
        Process::Output {
            subject: subject.into(),
            object: object.into(),
            body: Box::new(body),
        }
    }

    pub fn par(left: Process, right: Process) -> Self {
        Process::Par(Box::new(left), Box::new(right))
    }

    /// Left-nested parallel composition, as the parser builds it; `Nil`
    /// for an empty iterator.
    pub fn par_all<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Process>,
    {
        let mut it = items.into_iter();
        match it.next() {
            None => Process::Nil,
            Some(first) => it.fold(first, Process::par),
        }
    }

    pub fn new_(binder: impl Into<Name>, body: Process) -> Self {
        Process::New(binder.into(), Box::new(body))
    }

    pub fn hide(binder: impl Into<Name>, body: Process) -> Self {
        Process::Hide(binder.into(), Box::new(body))
    }

    pub fn bind(kind: BinderKind, binder: Name, body: Process) -> Self {
        match kind {
            BinderKind::New => Process::New(binder, Box::new(body)),
            BinderKind::Hide => Process::Hide(binder, Box::new(body)),
        }
    }

    pub fn repl(body: Process) -> Self {
        Process::Repl(Box::new(body))
    }

    pub fn spy(spied: Option<Name>, body: Process) -> Self {
        Process::Spy {
            spied,
            body: Box::new(body),
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }

    /// Number of AST nodes, counting `Nil` leaves.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil => 1,
            Process::Input { body, .. }
            | Process::TrustedInput { body, .. }
            | Process::Output { body, .. }
            | Process::New(_, body)
            | Process::Hide(_, body)
            | Process::Repl(body)
            | Process::Spy { body, .. } => 1 + body.size(),
            Process::Par(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn contains_spy(&self) -> bool {
        match self {
            Process::Spy { .. } => true,
            Process::Nil => false,
            Process::Par(l, r) => l.contains_spy() || r.contains_spy(),
            Process::Input { body, .. }
            | Process::TrustedInput { body, .. }
            | Process::Output { body, .. }
            | Process::New(_, body)
            | Process::Hide(_, body)
            | Process::Repl(body) => body.contains_spy(),
        }
    }

    pub fn contains_repl(&self) -> bool {
        match self {
            Process::Repl(_) => true,
            Process::Nil => false,
            Process::Par(l, r) => l.contains_repl() || r.contains_repl(),
            Process::Input { body, .. }
            | Process::TrustedInput { body, .. }
            | Process::Output { body, .. }
            | Process::New(_, body)
            | Process::Hide(_, body)
            | Process::Spy { body, .. } => body.contains_repl(),
        }
    }

    pub fn free_names(&self) -> NameSet {
        let mut out = NameSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut NameSet) {
        let mut add = |n: &Name, bound: &Vec<Name>| {
            if !bound.contains(n) {
                out.insert(n.clone());
            }
        };
        match self {
            Process::Nil => {}
            Process::Input {
                subject,
                param,
                blocked,
                body,
            } => {
                add(subject, bound);
                blocked.iter().for_each(|b| add(b, bound));
                bound.push(param.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Process::TrustedInput {
                subject,
                param,
                accepted,
                body,
            } => {
                add(subject, bound);
                accepted.iter().for_each(|a| add(a, bound));
                bound.push(param.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Process::Output {
                subject,
                object,
                body,
            } => {
                add(subject, bound);
                add(object, bound);
                body.collect_free(bound, out);
            }
            Process::Par(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Process::New(x, body) | Process::Hide(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Process::Repl(body) => body.collect_free(bound, out),
            Process::Spy { spied, body } => {
                if let Some(s) = spied {
                    add(s, bound);
                }
                body.collect_free(bound, out);
            }
        }
    }

    pub fn bound_names(&self) -> NameSet {
        let mut out = NameSet::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut NameSet) {
        match self {
            Process::Nil => {}
            Process::Input { param, body, .. } | Process::TrustedInput { param, body, .. } => {
                out.insert(param.clone());
                body.collect_bound(out);
            }
            Process::New(x, body) | Process::Hide(x, body) => {
                out.insert(x.clone());
                body.collect_bound(out);
            }
            Process::Par(l, r) => {
                l.collect_bound(out);
                r.collect_bound(out);
            }
            Process::Output { body, .. } | Process::Repl(body) | Process::Spy { body, .. } => {
                body.collect_bound(out)
            }
        }
    }

    /// Every name occurring anywhere in the term, free or bound.
    pub fn all_names(&self) -> NameSet {
        let mut out = self.free_names();
        out.extend(self.bound_names());
        out
    }

    pub fn is_free(&self, name: &Name) -> bool {
        self.free_names().contains(name)
    }
}

/// `p{with/for_}`: replaces free occurrences of `for_` by `with`, renaming
/// binders that would capture `with`. Names in blocked and accepted sets are
/// free occurrences and are replaced too.
pub fn substitute(p: &Process, with: &Name, for_: &Name) -> Process {
    if with == for_ || !p.is_free(for_) {
        return p.clone();
    }
    let mut supply = FreshSupply::new(
        p.all_names()
            .into_iter()
            .chain([with.clone(), for_.clone()]),
    );
    subst_rec(p, with, for_, &mut supply)
}

fn subst_rec(p: &Process, with: &Name, for_: &Name, supply: &mut FreshSupply) -> Process {
    let swap = |n: &Name| if n == for_ { with.clone() } else { n.clone() };
    let swap_set = |s: &NameSet| s.iter().map(swap).collect::<NameSet>();
    // Handles a binder scoping over `body`: shadowing stops the substitution,
    // a binder equal to `with` is renamed first.
    let under = |binder: &Name, body: &Process, supply: &mut FreshSupply| -> (Name, Process) {
        if binder == for_ || !body.is_free(for_) {
            (binder.clone(), body.clone())
        } else if binder == with {
            let renamed = supply.fresh(binder);
            let body = subst_rec(body, &renamed, binder, supply);
            (renamed, subst_rec(&body, with, for_, supply))
        } else {
            (binder.clone(), subst_rec(body, with, for_, supply))
        }
    };
    match p {
        Process::Nil => Process::Nil,
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => {
            let (param, body) = under(param, body, supply);
            Process::Input {
                subject: swap(subject),
                param,
                blocked: swap_set(blocked),
                body: Box::new(body),
            }
        }
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => {
            let (param, body) = under(param, body, supply);
            Process::TrustedInput {
                subject: swap(subject),
                param,
                accepted: swap_set(accepted),
                body: Box::new(body),
            }
        }
        Process::Output {
            subject,
            object,
            body,
        } => Process::Output {
            subject: swap(subject),
            object: swap(object),
            body: Box::new(subst_rec(body, with, for_, supply)),
        },
        Process::Par(l, r) => Process::par(
            subst_rec(l, with, for_, supply),
            subst_rec(r, with, for_, supply),
        ),
        Process::New(x, body) => {
            let (x, body) = under(x, body, supply);
            Process::New(x, Box::new(body))
        }
        Process::Hide(x, body) => {
            let (x, body) = under(x, body, supply);
            Process::Hide(x, Box::new(body))
        }
        Process::Repl(body) => Process::repl(subst_rec(body, with, for_, supply)),
        Process::Spy { spied, body } => Process::Spy {
            spied: spied.as_ref().map(swap),
            body: Box::new(subst_rec(body, with, for_, supply)),
        },
    }
}

/// `p ⊎ b`: adds `b` to the blocked set of every input in `p`. Trusted
/// inputs keep their accepted sets. Binders named `b` are renamed first so
/// the added name is never captured.
pub fn block_name(p: &Process, b: &Name) -> Process {
    let mut supply = FreshSupply::new(p.all_names().into_iter().chain([b.clone()]));
    block_rec(p, b, &mut supply)
}

fn block_rec(p: &Process, b: &Name, supply: &mut FreshSupply) -> Process {
    let avoid = |binder: &Name, body: &Process, supply: &mut FreshSupply| -> (Name, Process) {
        if binder == b {
            let renamed = supply.fresh(binder);
            let body = subst_rec(body, &renamed, binder, supply);
            (renamed, block_rec(&body, b, supply))
        } else {
            (binder.clone(), block_rec(body, b, supply))
        }
    };
    match p {
        Process::Nil => Process::Nil,
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => {
            let (param, body) = avoid(param, body, supply);
            let mut blocked = blocked.clone();
            blocked.insert(b.clone());
            Process::Input {
                subject: subject.clone(),
                param,
                blocked,
                body: Box::new(body),
            }
        }
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => {
            let (param, body) = avoid(param, body, supply);
            Process::TrustedInput {
                subject: subject.clone(),
                param,
                accepted: accepted.clone(),
                body: Box::new(body),
            }
        }
        Process::Output {
            subject,
            object,
            body,
        } => Process::Output {
            subject: subject.clone(),
            object: object.clone(),
            body: Box::new(block_rec(body, b, supply)),
        },
        Process::Par(l, r) => Process::par(block_rec(l, b, supply), block_rec(r, b, supply)),
        Process::New(x, body) => {
            let (x, body) = avoid(x, body, supply);
            Process::New(x, Box::new(body))
        }
        Process::Hide(x, body) => {
            let (x, body) = avoid(x, body, supply);
            Process::Hide(x, Box::new(body))
        }
        Process::Repl(body) => Process::repl(block_rec(body, b, supply)),
        Process::Spy { spied, body } => Process::Spy {
            spied: spied.clone(),
            body: Box::new(block_rec(body, b, supply)),
        },
    }
}

/// Removes `b` from every blocked set in `p`. Inverse of [`block_name`] on
/// terms where `b` is bound outside `p`.
pub(crate) fn unblock_name(p: &Process, b: &Name) -> Process {
    map_blocked(p, &mut |set| {
        set.remove(b);
    })
}

fn map_blocked(p: &Process, f: &mut impl FnMut(&mut NameSet)) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => {
            let mut blocked = blocked.clone();
            f(&mut blocked);
            Process::Input {
                subject: subject.clone(),
                param: param.clone(),
                blocked,
                body: Box::new(map_blocked(body, f)),
            }
        }
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => Process::TrustedInput {
            subject: subject.clone(),
            param: param.clone(),
            accepted: accepted.clone(),
            body: Box::new(map_blocked(body, f)),
        },
        Process::Output {
            subject,
            object,
            body,
        } => Process::Output {
            subject: subject.clone(),
            object: object.clone(),
            body: Box::new(map_blocked(body, f)),
        },
        Process::Par(l, r) => Process::par(map_blocked(l, f), map_blocked(r, f)),
        Process::New(x, body) => Process::New(x.clone(), Box::new(map_blocked(body, f))),
        Process::Hide(x, body) => Process::Hide(x.clone(), Box::new(map_blocked(body, f))),
        Process::Repl(body) => Process::repl(map_blocked(body, f)),
        Process::Spy { spied, body } => Process::Spy {
            spied: spied.clone(),
            body: Box::new(map_blocked(body, f)),
        },
    }
}

/// True when every input prefix in `p`, at any depth, blocks `b`.
pub(crate) fn all_inputs_block(p: &Process, b: &Name) -> bool {
    match p {
        Process::Nil => true,
        Process::Input { blocked, body, .. } => blocked.contains(b) && all_inputs_block(body, b),
        Process::Par(l, r) => all_inputs_block(l, b) && all_inputs_block(r, b),
        Process::TrustedInput { body, .. }
        | Process::Output { body, .. }
        | Process::New(_, body)
        | Process::Hide(_, body)
        | Process::Repl(body)
        | Process::Spy { body, .. } => all_inputs_block(body, b),
    }
}

/// Renames every binder to a fresh `base#n` name, numbering binders in
/// pre-order. Afterwards all binders are pairwise distinct and distinct
/// from the free names. The result is a fixpoint of this function.
pub fn alpha_canonicalize(p: &Process) -> Process {
    let mut supply = FreshSupply::new(p.free_names());
    rename_binders(p, &mut Vec::new(), &mut |like: &Name| supply.fresh(like))
}

/// Renames every binder to a distinct identifier the parser accepts, keeping
/// the base of the old name where possible (`y#2` becomes `y`).
pub fn readable(p: &Process) -> Process {
    let mut taken = p.all_names();
    rename_binders(p, &mut Vec::new(), &mut |like: &Name| {
        let stem = match like.base() {
            "" => "n",
            b => b,
        };
        let n = plain_fresh(stem, &taken);
        taken.insert(n.clone());
        n
    })
}

/// Alpha-normal form with positional binder names `@0, @1, ...`; two terms
/// are alpha-equivalent iff their keys are structurally equal.
pub fn alpha_key(p: &Process) -> Process {
    let mut counter = 0usize;
    rename_binders(p, &mut Vec::new(), &mut |_: &Name| {
        let n = Name::new(format!("@{counter}"));
        counter += 1;
        n
    })
}

pub fn alpha_eq(p: &Process, q: &Process) -> bool {
    p == q || alpha_key(p) == alpha_key(q)
}

/// Renames binders of `p`, with `env` mapping names bound by enclosing
/// binders to their replacements (innermost last).
pub(crate) fn rename_binders(
    p: &Process,
    env: &mut Vec<(Name, Name)>,
    next: &mut impl FnMut(&Name) -> Name,
) -> Process {
    fn look(env: &[(Name, Name)], n: &Name) -> Name {
        env.iter()
            .rev()
            .find(|(from, _)| from == n)
            .map(|(_, to)| to.clone())
            .unwrap_or_else(|| n.clone())
    }
    let look_set = |env: &[(Name, Name)], s: &NameSet| s.iter().map(|n| look(env, n)).collect();
    match p {
        Process::Nil => Process::Nil,
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => {
            let subject = look(env, subject);
            let blocked = look_set(env, blocked);
            let fresh = next(param);
            env.push((param.clone(), fresh.clone()));
            let body = rename_binders(body, env, next);
            env.pop();
            Process::Input {
                subject,
                param: fresh,
                blocked,
                body: Box::new(body),
            }
        }
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => {
            let subject = look(env, subject);
            let accepted = look_set(env, accepted);
            let fresh = next(param);
            env.push((param.clone(), fresh.clone()));
            let body = rename_binders(body, env, next);
            env.pop();
            Process::TrustedInput {
                subject,
                param: fresh,
                accepted,
                body: Box::new(body),
            }
        }
        Process::Output {
            subject,
            object,
            body,
        } => Process::Output {
            subject: look(env, subject),
            object: look(env, object),
            body: Box::new(rename_binders(body, env, next)),
        },
        Process::Par(l, r) => {
            let l = rename_binders(l, env, next);
            let r = rename_binders(r, env, next);
            Process::par(l, r)
        }
        Process::New(x, body) | Process::Hide(x, body) => {
            let fresh = next(x);
            env.push((x.clone(), fresh.clone()));
            let body = rename_binders(body, env, next);
            env.pop();
            if matches!(p, Process::New(..)) {
                Process::New(fresh, Box::new(body))
            } else {
                Process::Hide(fresh, Box::new(body))
            }
        }
        Process::Repl(body) => Process::repl(rename_binders(body, env, next)),
        Process::Spy { spied, body } => Process::Spy {
            spied: spied.as_ref().map(|s| look(env, s)),
            body: Box::new(rename_binders(body, env, next)),
        },
    }
}

/// Renames free names according to `map` (no binder is touched; callers
/// guarantee the targets are not captured).
pub(crate) fn rename_free(p: &Process, map: &HashMap<Name, Name>) -> Process {
    let mut env: Vec<(Name, Name)> = Vec::new();
    rename_free_rec(p, map, &mut env)
}

fn rename_free_rec(
    p: &Process,
    map: &HashMap<Name, Name>,
    bound: &mut Vec<(Name, Name)>,
) -> Process {
    let f = |n: &Name, bound: &Vec<(Name, Name)>| {
        if bound.iter().any(|(b, _)| b == n) {
            n.clone()
        } else {
            map.get(n).cloned().unwrap_or_else(|| n.clone())
        }
    };
    match p {
        Process::Nil => Process::Nil,
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => {
            let subject = f(subject, bound);
            let blocked = blocked.iter().map(|n| f(n, bound)).collect();
            bound.push((param.clone(), param.clone()));
            let body = rename_free_rec(body, map, bound);
            bound.pop();
            Process::Input {
                subject,
                param: param.clone(),
                blocked,
                body: Box::new(body),
            }
        }
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => {
            let subject = f(subject, bound);
            let accepted = accepted.iter().map(|n| f(n, bound)).collect();
            bound.push((param.clone(), param.clone()));
            let body = rename_free_rec(body, map, bound);
            bound.pop();
            Process::TrustedInput {
                subject,
                param: param.clone(),
                accepted,
                body: Box::new(body),
            }
        }
        Process::Output {
            subject,
            object,
            body,
        } => Process::Output {
            subject: f(subject, bound),
            object: f(object, bound),
            body: Box::new(rename_free_rec(body, map, bound)),
        },
        Process::Par(l, r) => {
            let l = rename_free_rec(l, map, bound);
            let r = rename_free_rec(r, map, bound);
            Process::par(l, r)
        }
        Process::New(x, body) => {
            bound.push((x.clone(), x.clone()));
            let body = rename_free_rec(body, map, bound);
            bound.pop();
            Process::New(x.clone(), Box::new(body))
        }
        Process::Hide(x, body) => {
            bound.push((x.clone(), x.clone()));
            let body = rename_free_rec(body, map, bound);
            bound.pop();
            Process::Hide(x.clone(), Box::new(body))
        }
        Process::Repl(body) => Process::repl(rename_free_rec(body, map, bound)),
        Process::Spy { spied, body } => Process::Spy {
            spied: spied.as_ref().map(|s| f(s, bound)),
            body: Box::new(rename_free_rec(body, map, bound)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::name_set;

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn free_names_per_clause() {
        assert!(Process::Nil.free_names().is_empty());
        // x(y/{b}).y!<z>
        let p = Process::input_blocking(
            "x",
            "y",
            name_set(["b"]),
            Process::output("y", "z", Process::Nil),
        );
        assert_eq!(p.free_names(), name_set(["x", "b", "z"]));
        let t = Process::trusted(
            "x",
            "y",
            name_set(["a"]),
            Process::output("y", "y", Process::Nil),
        );
        assert_eq!(t.free_names(), name_set(["x", "a"]));
        let h = Process::hide("z", Process::output("x", "v", Process::Nil));
        assert_eq!(h.free_names(), name_set(["x", "v"]));
        let s = Process::spy(Some(n("s")), Process::output("a", "b", Process::Nil));
        assert_eq!(s.free_names(), name_set(["s", "a", "b"]));
        let r = Process::repl(Process::new_("x", Process::output("x", "a", Process::Nil)));
        assert_eq!(r.free_names(), name_set(["a"]));
    }

    #[test]
    fn blocked_set_is_outside_param_scope() {
        // x(y/{y}).0 : the blocked y is free
        let p = Process::input_blocking("x", "y", name_set(["y"]), Process::Nil);
        assert_eq!(p.free_names(), name_set(["x", "y"]));
    }

    #[test]
    fn bound_names_per_clause() {
        assert!(Process::Nil.bound_names().is_empty());
        let h = Process::hide("z", Process::output("x", "v", Process::Nil));
        assert_eq!(h.bound_names(), name_set(["z"]));
        let p = Process::new_("x", Process::input("x", "y", Process::Nil));
        assert_eq!(p.bound_names(), name_set(["x", "y"]));
        let s = Process::spy(
            None,
            Process::trusted("a", "w", NameSet::new(), Process::Nil),
        );
        assert_eq!(s.bound_names(), name_set(["w"]));
    }

    #[test]
    fn substitute_simple_and_blocked_sets() {
        let p = Process::output("x", "y", Process::Nil);
        assert_eq!(
            substitute(&p, &n("z"), &n("y")),
            Process::output("x", "z", Process::Nil)
        );
        let q = Process::input_blocking("x", "w", name_set(["y"]), Process::Nil);
        let r = substitute(&q, &n("z"), &n("y"));
        assert_eq!(
            r,
            Process::input_blocking("x", "w", name_set(["z"]), Process::Nil)
        );
        assert!(!r.free_names().contains(&n("y")));
    }

    #[test]
    fn substitute_avoids_capture() {
        // (new y) x!<y> with {y/x}: the binder must move out of the way
        let p = Process::new_("y", Process::output("x", "y", Process::Nil));
        let r = substitute(&p, &n("y"), &n("x"));
        match &r {
            Process::New(b, body) => {
                assert_ne!(b, &n("y"));
                assert_eq!(**body, Process::output(n("y"), b.clone(), Process::Nil));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(r.free_names(), name_set(["y"]));
    }

    #[test]
    fn substitute_respects_shadowing() {
        let p = Process::input("a", "x", Process::output("x", "x", Process::Nil));
        assert_eq!(substitute(&p, &n("b"), &n("x")), p);
    }

    #[test]
    fn block_name_clauses() {
        let body = Process::output("y", "y", Process::Nil);
        let p = Process::input_blocking("x", "y", name_set(["c"]), body.clone());
        assert_eq!(
            block_name(&p, &n("b")),
            Process::input_blocking("x", "y", name_set(["b", "c"]), body)
        );
        assert_eq!(block_name(&Process::Nil, &n("b")), Process::Nil);
        let t = Process::trusted(
            "x",
            "y",
            name_set(["a"]),
            Process::input("x", "w", Process::Nil),
        );
        assert_eq!(
            block_name(&t, &n("b")),
            Process::trusted(
                "x",
                "y",
                name_set(["a"]),
                Process::input_blocking("x", "w", name_set(["b"]), Process::Nil)
            )
        );
        let s = Process::spy(Some(n("s")), Process::input("a", "w", Process::Nil));
        assert_eq!(
            block_name(&s, &n("b")),
            Process::spy(
                Some(n("s")),
                Process::input_blocking("a", "w", name_set(["b"]), Process::Nil)
            )
        );
    }

    #[test]
    fn block_name_renames_clashing_binder() {
        // (hide b) a(w).0  ⊎ b  must not block the inner b
        let p = Process::hide("b", Process::input("a", "w", Process::Nil));
        let r = block_name(&p, &n("b"));
        match &r {
            Process::Hide(h, body) => {
                assert_ne!(h, &n("b"));
                assert_eq!(
                    **body,
                    Process::input_blocking("a", "w", name_set(["b"]), Process::Nil)
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonicalize_distinct_and_idempotent() {
        let p = Process::par(
            Process::new_("x", Process::Nil),
            Process::new_("x", Process::output("x", "a", Process::Nil)),
        );
        let c = alpha_canonicalize(&p);
        match &c {
            Process::Par(l, r) => match (&**l, &**r) {
                (Process::New(a, _), Process::New(b, _)) => assert_ne!(a, b),
                _ => panic!(),
            },
            _ => panic!(),
        }
        assert_eq!(alpha_canonicalize(&c), c);
        assert!(alpha_eq(&p, &c));
    }

    #[test]
    fn canonicalize_avoids_free_hash_names() {
        let p = Process::par(
            Process::output("a", "x#1", Process::Nil),
            Process::new_("x", Process::output("x", "a", Process::Nil)),
        );
        let c = alpha_canonicalize(&p);
        assert_eq!(c.free_names(), p.free_names());
    }

    #[test]
    fn alpha_eq_cases() {
        let a = Process::new_("x", Process::output("x", "a", Process::Nil));
        let b = Process::new_("y", Process::output("y", "a", Process::Nil));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(
            &Process::output("x", "a", Process::Nil),
            &Process::output("x", "b", Process::Nil)
        ));
        let h1 = Process::hide("z", Process::output("x", "z", Process::Nil));
        let h2 = Process::hide("w", Process::output("x", "w", Process::Nil));
        assert!(alpha_eq(&h1, &h2));
        // binding structure matters
        let c = Process::new_(
            "x",
            Process::new_("y", Process::output("x", "y", Process::Nil)),
        );
        let d = Process::new_(
            "x",
            Process::new_("y", Process::output("y", "x", Process::Nil)),
        );
        assert!(!alpha_eq(&c, &d));
    }

    #[test]
    fn readable_names_parse_back() {
        let p = alpha_canonicalize(&Process::par(
            Process::new_("y", Process::output("y", "y#7", Process::Nil)),
            Process::input("a", "y", Process::output("y", "y", Process::Nil)),
        ));
        let r = readable(&p);
        assert!(alpha_eq(&r, &p));
        assert!(r
            .all_names()
            .iter()
            .all(|n| !n.as_str().contains('#') || n.as_str() == "y#7"));
    }
}
