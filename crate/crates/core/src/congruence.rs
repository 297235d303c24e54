//! Structural congruence.
//!
//! Terms are normalised by lifting every `new`/`hide` binder to the top
//! (applying `⊎` to the components a hide scope engulfs), flattening
//! parallel composition into a thread list and dropping `0` and dead
//! binders. The resulting [`StandardForm`] is the unit the reduction and
//! transition engines work on. [`congruent_bounded`] is an independent
//! semi-decision procedure that rewrites with the congruence rules directly.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::name::{FreshSupply, Name, NameSet};
use crate::process::{
    all_inputs_block, alpha_canonicalize, alpha_key, block_name, rename_binders, rename_free,
    unblock_name, BinderKind, Process,
};

/// Three-valued answer of the bounded procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Binder {
    pub kind: BinderKind,
    pub name: Name,
}

/// Binders over a flat multiset of threads. Threads are prefix-headed,
/// replicated or spy processes; the empty thread list stands for `0`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StandardForm {
    pub binders: Vec<Binder>,
    pub threads: Vec<Process>,
}

impl StandardForm {
    pub fn binder_kind(&self, name: &Name) -> Option<BinderKind> {
        self.binders
            .iter()
            .find(|b| &b.name == name)
            .map(|b| b.kind)
    }

    pub fn is_nil(&self) -> bool {
        self.threads.is_empty()
    }

    fn threads_mention(&self, name: &Name) -> bool {
        self.threads.iter().any(|t| t.is_free(name))
    }

    /// Removes binders whose name no thread uses. A hide binder whose name
    /// only appears because every input blocks it is removed as well, with
    /// the blocking undone: `hide x[Q ⊎ x] ≡ Q` when `x ∉ fv(Q)`.
    fn collect_garbage(&mut self) {
        let mut i = 0;
        while i < self.binders.len() {
            let b = self.binders[i].clone();
            if !self.threads_mention(&b.name) {
                self.binders.remove(i);
                continue;
            }
            if b.kind == BinderKind::Hide
                && self.threads.iter().all(|t| all_inputs_block(t, &b.name))
            {
                let stripped: Vec<Process> = self
                    .threads
                    .iter()
                    .map(|t| unblock_name(t, &b.name))
                    .collect();
                if stripped.iter().all(|t| !t.is_free(&b.name)) {
                    self.threads = stripped;
                    self.binders.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }
}

/// True when binders are pairwise distinct and disjoint from the free names.
pub fn is_canonical(p: &Process) -> bool {
    fn walk(p: &Process, seen: &mut HashSet<Name>) -> bool {
        let mut bind = |n: &Name| seen.insert(n.clone());
        match p {
            Process::Nil => true,
            Process::Input { param, body, .. } | Process::TrustedInput { param, body, .. } => {
                bind(param) && walk(body, seen)
            }
            Process::New(x, body) | Process::Hide(x, body) => bind(x) && walk(body, seen),
            Process::Par(l, r) => walk(l, seen) && walk(r, seen),
            Process::Output { body, .. } | Process::Repl(body) | Process::Spy { body, .. } => {
                walk(body, seen)
            }
        }
    }
    let mut seen: HashSet<Name> = HashSet::new();
    walk(p, &mut seen) && p.free_names().iter().all(|n| !seen.contains(n))
}

/// Normalises an alpha-canonical process into standard form. Thread
/// continuations are normalised recursively. Replication is not unfolded.
pub fn to_standard_form(p: &Process) -> StandardForm {
    debug_assert!(
        is_canonical(p),
        "to_standard_form needs canonical input: {p}"
    );
    let mut sf = lift(p);
    sf.collect_garbage();
    fold_replicas(&mut sf);
    sf
}

/// `P | !P ≡ !P` for replicated bodies without top-level binders.
fn fold_replicas(s: &mut StandardForm) {
    'again: loop {
        for (i, t) in s.threads.iter().enumerate() {
            let Process::Repl(body) = t else { continue };
            let copy = lift(body);
            if !copy.binders.is_empty() || copy.threads.is_empty() {
                continue;
            }
            let mut used = vec![i];
            for c in &copy.threads {
                let want = alpha_key(c);
                match (0..s.threads.len())
                    .find(|j| !used.contains(j) && alpha_key(&s.threads[*j]) == want)
                {
                    Some(j) => used.push(j),
                    None => break,
                }
            }
            if used.len() == copy.threads.len() + 1 {
                used.remove(0);
                used.sort_unstable();
                for j in used.into_iter().rev() {
                    s.threads.remove(j);
                }
                continue 'again;
            }
        }
        break;
    }
}

fn lift(p: &Process) -> StandardForm {
    match p {
        Process::Nil => StandardForm::default(),
        Process::Par(l, r) => {
            let mut a = lift(l);
            let b = lift(r);
            let hides = |s: &StandardForm| -> Vec<Name> {
                s.binders
                    .iter()
                    .filter(|b| b.kind == BinderKind::Hide)
                    .map(|b| b.name.clone())
                    .collect()
            };
            let (ha, hb) = (hides(&a), hides(&b));
            let block_all = |ts: Vec<Process>, names: &[Name]| -> Vec<Process> {
                ts.into_iter()
                    .map(|t| names.iter().fold(t, |t, h| block_name(&t, h)))
                    .collect()
            };
            let left = block_all(std::mem::take(&mut a.threads), &hb);
            let right = block_all(b.threads, &ha);
            a.threads = left;
            a.threads.extend(right);
            a.binders.extend(b.binders);
            a
        }
        Process::New(x, body) | Process::Hide(x, body) => {
            let mut s = lift(body);
            let kind = if matches!(p, Process::New(..)) {
                BinderKind::New
            } else {
                BinderKind::Hide
            };
            s.binders.insert(
                0,
                Binder {
                    kind,
                    name: x.clone(),
                },
            );
            s
        }
        thread => StandardForm {
            binders: Vec::new(),
            threads: vec![normalize_thread(thread)],
        },
    }
}

/// Normalises the continuation(s) under a thread's head constructor.
fn normalize_thread(t: &Process) -> Process {
    let inner = |body: &Process| Box::new(from_standard_form(&ordered(to_standard_form(body)).1));
    match t {
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => Process::Input {
            subject: subject.clone(),
            param: param.clone(),
            blocked: blocked.clone(),
            body: inner(body),
        },
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => Process::TrustedInput {
            subject: subject.clone(),
            param: param.clone(),
            accepted: accepted.clone(),
            body: inner(body),
        },
        Process::Output {
            subject,
            object,
            body,
        } => Process::Output {
            subject: subject.clone(),
            object: object.clone(),
            body: inner(body),
        },
        Process::Repl(body) => Process::Repl(inner(body)),
        Process::Spy { spied, body } => Process::Spy {
            spied: spied.clone(),
            body: inner(body),
        },
        other => other.clone(),
    }
}

/// Binders outermost, in list order, over a right-nested parallel
/// composition of the threads.
pub fn from_standard_form(s: &StandardForm) -> Process {
    let body = Process::par_all(s.threads.iter().cloned());
    s.binders
        .iter()
        .rev()
        .fold(body, |acc, b| Process::bind(b.kind, b.name.clone(), acc))
}

fn free_names_in_order(p: &Process, out: &mut Vec<Name>) {
    fn walk(p: &Process, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let mut see = |n: &Name, bound: &Vec<Name>| {
            if !bound.contains(n) && !out.contains(n) {
                out.push(n.clone());
            }
        };
        match p {
            Process::Nil => {}
            Process::Input {
                subject,
                param,
                blocked,
                body,
            } => {
                see(subject, bound);
                blocked.iter().for_each(|n| see(n, bound));
                bound.push(param.clone());
                walk(body, bound, out);
                bound.pop();
            }
            Process::TrustedInput {
                subject,
                param,
                accepted,
                body,
            } => {
                see(subject, bound);
                accepted.iter().for_each(|n| see(n, bound));
                bound.push(param.clone());
                walk(body, bound, out);
                bound.pop();
            }
            Process::Output {
                subject,
                object,
                body,
            } => {
                see(subject, bound);
                see(object, bound);
                walk(body, bound, out);
            }
            Process::Par(l, r) => {
                walk(l, bound, out);
                walk(r, bound, out);
            }
            Process::New(x, body) | Process::Hide(x, body) => {
                bound.push(x.clone());
                walk(body, bound, out);
                bound.pop();
            }
            Process::Repl(body) => walk(body, bound, out),
            Process::Spy { spied, body } => {
                if let Some(s) = spied {
                    see(s, bound);
                }
                walk(body, bound, out);
            }
        }
    }
    walk(p, &mut Vec::new(), out);
}

/// Orders a standard form deterministically and computes its state key.
///
/// Threads are first sorted by their shape with top-level binder names
/// erased, binders are then numbered by first occurrence, and the key is
/// printed with binders renamed to `$n` and thread-local binders to `@n`.
/// Congruent terms usually share a key; equal keys always mean congruent.
pub fn ordered(s: StandardForm) -> (String, StandardForm) {
    let erase: HashMap<Name, Name> = s
        .binders
        .iter()
        .map(|b| {
            let tag = match b.kind {
                BinderKind::Hide => "$H",
                BinderKind::New => "$N",
            };
            (b.name.clone(), Name::new(tag))
        })
        .collect();
    let mut idx: Vec<(String, usize)> = s
        .threads
        .iter()
        .enumerate()
        .map(|(i, t)| (alpha_key(&rename_free(t, &erase)).to_string(), i))
        .collect();
    idx.sort_by(|a, b| a.0.cmp(&b.0));

    let mut occurrence = Vec::new();
    for (_, i) in &idx {
        free_names_in_order(&s.threads[*i], &mut occurrence);
    }
    let mut numbered: Vec<&Binder> = Vec::new();
    for n in &occurrence {
        if let Some(b) = s.binders.iter().find(|b| &b.name == n) {
            numbered.push(b);
        }
    }
    for b in &s.binders {
        if !numbered.iter().any(|x| x.name == b.name) {
            numbered.push(b);
        }
    }
    let rename: HashMap<Name, Name> = numbered
        .iter()
        .enumerate()
        .map(|(k, b)| (b.name.clone(), Name::new(format!("${k}"))))
        .collect();

    let mut keyed: Vec<(String, usize)> = idx
        .iter()
        .map(|(_, i)| {
            (
                alpha_key(&rename_free(&s.threads[*i], &rename)).to_string(),
                *i,
            )
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));

    let mut binder_order: Vec<(BinderKind, usize, Binder)> = numbered
        .iter()
        .enumerate()
        .map(|(k, b)| (b.kind, k, (*b).clone()))
        .collect();
    binder_order.sort_by_key(|b| (b.0, b.1));

    let mut key = String::new();
    for (kind, k, _) in &binder_order {
        key.push_str(match kind {
            BinderKind::Hide => "H",
            BinderKind::New => "N",
        });
        key.push_str(&format!("${k} "));
    }
    key.push(';');
    for (i, (t, _)) in keyed.iter().enumerate() {
        if i > 0 {
            key.push_str(" | ");
        }
        key.push_str(t);
    }
    let sf = StandardForm {
        binders: binder_order.into_iter().map(|(_, _, b)| b).collect(),
        threads: keyed.iter().map(|(_, i)| s.threads[*i].clone()).collect(),
    };
    (key, sf)
}

/// Canonicalises, normalises and orders `p`; returns the state key with the
/// ordered standard form.
pub fn normalize(p: &Process) -> (String, StandardForm) {
    ordered(to_standard_form(&alpha_canonicalize(p)))
}

/// The normalised representative of `p` as a process.
pub fn normal_process(p: &Process) -> Process {
    from_standard_form(&normalize(p).1)
}

/// A standard form with replicated threads unfolded, remembering which
/// threads belong to which unfolded copy.
#[derive(Debug, Clone)]
pub(crate) struct Unfolded {
    pub sf: StandardForm,
    /// Copy id per thread; `None` for threads of the original form.
    pub origin: Vec<Option<usize>>,
    pub base_binders: Vec<Binder>,
    pub copy_binders: Vec<Vec<Binder>>,
    /// The copy that owns the replicated thread a copy was taken from.
    pub parent: Vec<Option<usize>>,
}

impl Unfolded {
    /// Rebuilds a process from the unfolded form, keeping only the copies
    /// in `touched`. The blocking applied on behalf of dropped copies' hide
    /// binders is undone.
    pub fn residual(&self, threads: Vec<Process>, touched: &HashSet<usize>) -> Process {
        let mut touched = touched.clone();
        for &id in touched.clone().iter() {
            let mut up = self.parent[id];
            while let Some(p) = up {
                touched.insert(p);
                up = self.parent[p];
            }
        }
        let touched = &touched;
        let mut binders = self.base_binders.clone();
        let mut dropped_hides = Vec::new();
        for (id, bs) in self.copy_binders.iter().enumerate() {
            if touched.contains(&id) {
                binders.extend(bs.iter().cloned());
            } else {
                dropped_hides.extend(
                    bs.iter()
                        .filter(|b| b.kind == BinderKind::Hide)
                        .map(|b| b.name.clone()),
                );
            }
        }
        let kept: Vec<Process> = threads
            .into_iter()
            .zip(&self.origin)
            .filter(|(_, o)| o.is_none_or(|id| touched.contains(&id)))
            .map(|(t, _)| dropped_hides.iter().fold(t, |t, h| unblock_name(&t, h)))
            .collect();
        from_standard_form(&StandardForm {
            binders,
            threads: kept,
        })
    }
}

pub(crate) fn unfold_tracked(s: &StandardForm, copies: usize) -> Unfolded {
    let mut supply = FreshSupply::new(from_standard_form(s).all_names());
    let mut threads = s.threads.clone();
    let mut origin: Vec<Option<usize>> = vec![None; threads.len()];
    let mut copy_binders: Vec<Vec<Binder>> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    // replicated threads still to unfold, with their nesting depth
    let mut work: VecDeque<(usize, usize)> = (0..threads.len()).map(|i| (i, 0)).collect();
    while let Some((i, depth)) = work.pop_front() {
        let Process::Repl(body) = threads[i].clone() else {
            continue;
        };
        if depth >= copies.max(1) {
            continue;
        }
        for _ in 0..copies {
            let fresh = rename_binders(&body, &mut Vec::new(), &mut |like: &Name| {
                supply.fresh(like)
            });
            let mut copy = lift(&fresh);
            copy.collect_garbage();
            let id = copy_binders.len();
            for t in copy.threads {
                work.push_back((threads.len(), depth + 1));
                threads.push(t);
                origin.push(Some(id));
            }
            copy_binders.push(copy.binders);
            parent.push(origin[i]);
        }
    }
    for (id, bs) in copy_binders.iter().enumerate() {
        for h in bs.iter().filter(|b| b.kind == BinderKind::Hide) {
            for (t, o) in threads.iter_mut().zip(&origin) {
                if *o != Some(id) {
                    *t = block_name(t, &h.name);
                }
            }
        }
    }
    let mut binders = s.binders.clone();
    binders.extend(copy_binders.iter().flatten().cloned());
    Unfolded {
        sf: StandardForm { binders, threads },
        origin,
        base_binders: s.binders.clone(),
        copy_binders,
        parent,
    }
}

/// `!P ≡ P | !P`, applied `copies` times to every replicated thread. Each
/// copy gets fresh binder names; hide binders of a copy block their name in
/// every other thread. Replicated threads inside copies are unfolded in turn,
/// down to `copies` levels of nesting.
pub fn unfold_repl(s: &StandardForm, copies: usize) -> StandardForm {
    unfold_tracked(s, copies).sf
}

/// Searches the congruence closures of `p` and `q` for a common term,
/// expanding at most `fuel` terms. Only rewrites that do not grow the term
/// are used (binder extrusion in both directions, binder swaps, commutativity
/// and associativity of `|`, removal of `0` and of dead binders, folding
/// `P | !P` into `!P`, the spy rule for restriction), so both closures are
/// finite and a `No` is reported once both are exhausted. When replication
/// occurs the closures are incomplete and exhaustion gives `Unknown`.
pub fn congruent_bounded(p: &Process, q: &Process, fuel: usize) -> Answer {
    let start_p = alpha_key(p);
    let start_q = alpha_key(q);
    if start_p == start_q {
        return Answer::Yes;
    }
    let mut seen = [HashSet::new(), HashSet::new()];
    let mut frontier = [VecDeque::new(), VecDeque::new()];
    seen[0].insert(start_p.clone());
    seen[1].insert(start_q.clone());
    frontier[0].push_back(start_p);
    frontier[1].push_back(start_q);
    let mut spent = 0usize;
    while !(frontier[0].is_empty() && frontier[1].is_empty()) {
        for side in 0..2 {
            let Some(t) = frontier[side].pop_front() else {
                continue;
            };
            if spent >= fuel {
                return Answer::Unknown;
            }
            spent += 1;
            for next in rewrites(&t) {
                let next = alpha_key(&next);
                if seen[1 - side].contains(&next) {
                    return Answer::Yes;
                }
                if seen[side].insert(next.clone()) {
                    frontier[side].push_back(next);
                }
            }
        }
    }
    if p.contains_repl() || q.contains_repl() {
        Answer::Unknown
    } else {
        Answer::No
    }
}

/// One-step congruence rewrites at every position of `p`.
fn rewrites(p: &Process) -> Vec<Process> {
    let mut out = root_rewrites(p);
    let rebuild_body = |body: &Process, mk: &dyn Fn(Process) -> Process, out: &mut Vec<Process>| {
        for b in rewrites(body) {
            out.push(mk(b));
        }
    };
    match p {
        Process::Nil => {}
        Process::Input {
            subject,
            param,
            blocked,
            body,
        } => rebuild_body(
            body,
            &|b| Process::input_blocking(subject.clone(), param.clone(), blocked.clone(), b),
            &mut out,
        ),
        Process::TrustedInput {
            subject,
            param,
            accepted,
            body,
        } => rebuild_body(
            body,
            &|b| Process::trusted(subject.clone(), param.clone(), accepted.clone(), b),
            &mut out,
        ),
        Process::Output {
            subject,
            object,
            body,
        } => rebuild_body(
            body,
            &|b| Process::output(subject.clone(), object.clone(), b),
            &mut out,
        ),
        Process::Par(l, r) => {
            rebuild_body(l, &|b| Process::par(b, (**r).clone()), &mut out);
            rebuild_body(r, &|b| Process::par((**l).clone(), b), &mut out);
        }
        Process::New(x, body) => rebuild_body(body, &|b| Process::new_(x.clone(), b), &mut out),
        Process::Hide(x, body) => rebuild_body(body, &|b| Process::hide(x.clone(), b), &mut out),
        Process::Repl(body) => rebuild_body(body, &Process::repl, &mut out),
        Process::Spy { spied, body } => {
            rebuild_body(body, &|b| Process::spy(spied.clone(), b), &mut out)
        }
    }
    out
}

/// `q` such that `d = q ⊎ x` and `x ∉ fv(q)`, if any.
fn unblocked_origin(d: &Process, x: &Name) -> Option<Process> {
    if !all_inputs_block(d, x) {
        return None;
    }
    let q = unblock_name(d, x);
    (!q.is_free(x)).then_some(q)
}

fn root_rewrites(p: &Process) -> Vec<Process> {
    let mut out = Vec::new();
    match p {
        Process::Par(a, b) => {
            let (a, b) = (&**a, &**b);
            out.push(Process::par(b.clone(), a.clone()));
            if let Process::Par(a1, a2) = a {
                out.push(Process::par(
                    (**a1).clone(),
                    Process::par((**a2).clone(), b.clone()),
                ));
            }
            if let Process::Par(b1, b2) = b {
                out.push(Process::par(
                    Process::par(a.clone(), (**b1).clone()),
                    (**b2).clone(),
                ));
            }
            if b.is_nil() {
                out.push(a.clone());
            }
            if a.is_nil() {
                out.push(b.clone());
            }
            for (this, other, this_left) in [(a, b, true), (b, a, false)] {
                let join = |x: Process, y: Process| {
                    if this_left {
                        Process::par(x, y)
                    } else {
                        Process::par(y, x)
                    }
                };
                match this {
                    Process::New(x, body) if !other.is_free(x) => {
                        out.push(Process::new_(
                            x.clone(),
                            join((**body).clone(), other.clone()),
                        ));
                        if let Process::Spy {
                            spied: None,
                            body: r,
                        } = other
                        {
                            out.push(Process::new_(
                                x.clone(),
                                join(
                                    (**body).clone(),
                                    Process::spy(Some(x.clone()), (**r).clone()),
                                ),
                            ));
                        }
                    }
                    Process::Hide(x, body) if !other.is_free(x) => {
                        out.push(Process::hide(
                            x.clone(),
                            join((**body).clone(), block_name(other, x)),
                        ));
                    }
                    Process::Repl(body) if crate::process::alpha_eq(body, other) => {
                        out.push(this.clone());
                    }
                    _ => {}
                }
            }
        }
        Process::New(x, body) => {
            if !body.is_free(x) {
                out.push((**body).clone());
            }
            match &**body {
                Process::Par(c, d) => {
                    if !d.is_free(x) {
                        out.push(Process::par(
                            Process::new_(x.clone(), (**c).clone()),
                            (**d).clone(),
                        ));
                    }
                    if !c.is_free(x) {
                        out.push(Process::par(
                            (**c).clone(),
                            Process::new_(x.clone(), (**d).clone()),
                        ));
                    }
                    if let Process::Spy {
                        spied: Some(s),
                        body: r,
                    } = &**d
                    {
                        if s == x && !r.is_free(x) {
                            out.push(Process::par(
                                Process::new_(x.clone(), (**c).clone()),
                                Process::spy(None, (**r).clone()),
                            ));
                        }
                    }
                    if let Process::Spy {
                        spied: Some(s),
                        body: r,
                    } = &**c
                    {
                        if s == x && !r.is_free(x) {
                            out.push(Process::par(
                                Process::spy(None, (**r).clone()),
                                Process::new_(x.clone(), (**d).clone()),
                            ));
                        }
                    }
                }
                Process::Hide(y, e) => out.push(Process::hide(
                    y.clone(),
                    Process::new_(x.clone(), (**e).clone()),
                )),
                Process::New(y, e) => out.push(Process::new_(
                    y.clone(),
                    Process::new_(x.clone(), (**e).clone()),
                )),
                _ => {}
            }
        }
        Process::Hide(x, body) => {
            if !body.is_free(x) {
                out.push((**body).clone());
            } else if let Some(q) = unblocked_origin(body, x) {
                out.push(q);
            }
            match &**body {
                Process::Par(c, d) => {
                    if let Some(q) = unblocked_origin(d, x) {
                        out.push(Process::par(Process::hide(x.clone(), (**c).clone()), q));
                    }
                    if let Some(q) = unblocked_origin(c, x) {
                        out.push(Process::par(q, Process::hide(x.clone(), (**d).clone())));
                    }
                }
                Process::New(y, e) => out.push(Process::new_(
                    y.clone(),
                    Process::hide(x.clone(), (**e).clone()),
                )),
                Process::Hide(y, e) => out.push(Process::hide(
                    y.clone(),
                    Process::hide(x.clone(), (**e).clone()),
                )),
                _ => {}
            }
        }
        _ => {}
    }
    out
}

/// Set of names bound by the binders of a standard form.
pub fn binder_names(s: &StandardForm) -> NameSet {
    s.binders.iter().map(|b| b.name.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn sf(src: &str) -> StandardForm {
        to_standard_form(&alpha_canonicalize(&parse(src).unwrap()))
    }

    #[test]
    fn hide_extrusion_blocks_engulfed_threads() {
        // z is not free, so only the blocking mark is left and GC removes it
        assert!(sf("(hide z) x!<v> | x(y).leak!<y>").binders.is_empty());
        let s = sf("(hide z) x!<z> | x(y).leak!<y>");
        assert_eq!(s.binders.len(), 1);
        assert_eq!(s.binders[0].kind, BinderKind::Hide);
        let z = s.binders[0].name.clone();
        assert_eq!(s.threads.len(), 2);
        let input = s
            .threads
            .iter()
            .find(|t| matches!(t, Process::Input { .. }))
            .unwrap();
        match input {
            Process::Input { blocked, .. } => assert_eq!(blocked, &[z].into_iter().collect()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn dead_binders_vanish() {
        assert!(sf("(new x) 0").is_nil());
        assert!(sf("(hide x) 0").is_nil());
        assert!(sf("(new x) a!<b>").binders.is_empty());
        // only present as a blocked name added by extrusion
        let s = sf("(hide h) 0 | a(w).w!<w>");
        assert!(s.binders.is_empty());
        assert!(crate::process::alpha_eq(
            &from_standard_form(&s),
            &parse("a(w).w!<w>").unwrap()
        ));
    }

    #[test]
    fn nil_is_unit() {
        let (k1, _) = normalize(&parse("0 | a!<b>").unwrap());
        let (k2, _) = normalize(&parse("a!<b>").unwrap());
        assert_eq!(k1, k2);
    }

    #[test]
    fn replicas_fold_into_replication() {
        let (k1, _) = normalize(&parse("!(x!<a> | b(y)) | b(w) | x!<a>").unwrap());
        let (k2, _) = normalize(&parse("!(x!<a> | b(y))").unwrap());
        assert_eq!(k1, k2);
        let (k3, _) = normalize(&parse("!(x!<a> | b(y)) | x!<a>").unwrap());
        assert_ne!(k3, k2);
    }

    #[test]
    fn from_standard_form_examples() {
        assert_eq!(from_standard_form(&StandardForm::default()), Process::Nil);
        let s = StandardForm {
            binders: vec![Binder {
                kind: BinderKind::New,
                name: Name::new("x"),
            }],
            threads: vec![Process::output("x", "a", Process::Nil)],
        };
        assert_eq!(
            from_standard_form(&s),
            Process::new_("x", Process::output("x", "a", Process::Nil))
        );
    }

    #[test]
    fn keys_identify_reorderings() {
        let a = normalize(&parse("(new x) (x!<a> | b(y)) | (hide z) c!<z>").unwrap()).0;
        let b = normalize(&parse("(hide w) (c!<w> | (new u) (b(y/w) | u!<a>))").unwrap()).0;
        assert_eq!(a, b);
        let c = normalize(&parse("(new x) (x!<a> | b(y)) | (new z) c!<z>").unwrap()).0;
        assert_ne!(a, c);
    }

    #[test]
    fn unfold_examples() {
        let s = sf("!x!<a>");
        assert_eq!(unfold_repl(&s, 0), s);
        let u = unfold_repl(&s, 1);
        assert_eq!(u.threads.len(), 2);
        assert!(u.threads.contains(&Process::output("x", "a", Process::Nil)));
        let s = sf("!(new x) x!<a>");
        let u = unfold_repl(&s, 2);
        let names: NameSet = u.binders.iter().map(|b| b.name.clone()).collect();
        assert_eq!(names.len(), 2);
    }

    #[test]
    fn unfolded_hide_copy_blocks_others() {
        let s = sf("!(hide h) x!<h> | x(y).y!<y>");
        let u = unfold_repl(&s, 1);
        let h = u
            .binders
            .iter()
            .find(|b| b.kind == BinderKind::Hide)
            .unwrap();
        let blocked_everywhere = u.threads.iter().any(|t| match t {
            Process::Input { blocked, .. } => blocked.contains(&h.name),
            _ => false,
        });
        assert!(blocked_everywhere);
    }

    #[test]
    fn congruent_bounded_examples() {
        let p = parse("a!<b> | c(x)").unwrap();
        assert_eq!(congruent_bounded(&p, &p, 10), Answer::Yes);
        let l = parse("(new x) (hide y) x!<y>").unwrap();
        let r = parse("(hide y) (new x) x!<y>").unwrap();
        assert_eq!(congruent_bounded(&l, &r, 100), Answer::Yes);
        let a = parse("x!<a>").unwrap();
        let b = parse("x!<b>").unwrap();
        assert_eq!(congruent_bounded(&a, &b, 100), Answer::No);
    }

    #[test]
    fn congruent_bounded_hide_extrusion() {
        let l = parse("(hide z) x!<z> | x(y).leak!<y>").unwrap();
        let r = parse("(hide z) (x!<z> | x(y/z).leak!<y>)").unwrap();
        assert_eq!(congruent_bounded(&l, &r, 1000), Answer::Yes);
        let wrong = parse("(hide z) (x!<z> | x(y).leak!<y>)").unwrap();
        assert_eq!(congruent_bounded(&l, &wrong, 5000), Answer::No);
    }

    #[test]
    fn congruent_bounded_fuel_runs_out() {
        let l = parse("a!<b> | c!<d> | e!<f> | g!<h>").unwrap();
        let r = parse("g!<h> | e!<f> | c!<d> | a!<b>").unwrap();
        assert_eq!(congruent_bounded(&l, &r, 1), Answer::Unknown);
        assert_eq!(congruent_bounded(&l, &r, 10_000), Answer::Yes);
    }

    #[test]
    fn spy_upgrade_is_a_congruence() {
        let l = parse("(new x) (x!<z> | x(y)) | spy.w!<w>").unwrap();
        let r = parse("(new x) (x!<z> | x(y) | spy:x.w!<w>)").unwrap();
        assert_eq!(congruent_bounded(&l, &r, 5000), Answer::Yes);
    }
}
