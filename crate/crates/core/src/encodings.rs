//! Process builders: the if-then-else encoding, the secrecy and
//! non-interference examples, the credit-card protocol, the D-Bus models
//! and the distinguishing contexts for the block/accept/spy inequations.

use serde::{Deserialize, Serialize};

use crate::name::{name_set, plain_fresh, Name, NameSet};
use crate::process::{block_name, substitute, Process};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodingError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// `if x = y then then_p else else_q`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSpec {
    pub x: Name,
    pub y: Name,
    pub then_p: Process,
    pub else_q: Process,
}

impl MatchSpec {
    pub fn new(x: impl Into<Name>, y: impl Into<Name>, then_p: Process, else_q: Process) -> Self {
        MatchSpec {
            x: x.into(),
            y: y.into(),
            then_p,
            else_q,
        }
    }

    /// Free names of the conditional, `{x, y} ∪ fv(P) ∪ fv(Q)`.
    pub fn free_names(&self) -> NameSet {
        let mut z: NameSet = [self.x.clone(), self.y.clone()].into();
        z.extend(self.then_p.free_names());
        z.extend(self.else_q.free_names());
        z
    }
}

/// `hide k[y[w:k] | x!<k>.(P ⊎ k) | z1!<k>.(Q ⊎ k) | … | zn!<k>.(Q ⊎ k)]`
/// where `z1 … zn` are the free names of the conditional other than `x`
/// and `k` is fresh.
pub fn encode_match(m: &MatchSpec) -> Process {
    let z = m.free_names();
    let k = plain_fresh("k", &z);
    let mut taken = z.clone();
    taken.insert(k.clone());
    let w = plain_fresh("w", &taken);
    let p = block_name(&m.then_p, &k);
    let q = block_name(&m.else_q, &k);
    let mut threads = vec![
        Process::trusted(m.y.clone(), w, [k.clone()].into(), Process::Nil),
        Process::output(m.x.clone(), k.clone(), p),
    ];
    threads.extend(
        z.iter()
            .filter(|zi| **zi != m.x)
            .map(|zi| Process::output(zi.clone(), k.clone(), q.clone())),
    );
    Process::hide(k, Process::par_all(threads))
}

/// The secrecy example: `P = hide z[x!<v>]` and the context
/// `C[-] = - | x(y).leak!<y>`. Returns `(P, C[P])`.
pub fn example1(
    v: impl Into<Name>,
    z: impl Into<Name>,
) -> Result<(Process, Process), EncodingError> {
    let (v, z) = (v.into(), z.into());
    if z.as_str() == "x" {
        return Err(EncodingError::InvalidArgument(
            "the hidden name must differ from x".into(),
        ));
    }
    let p = Process::hide(z, Process::output("x", v, Process::Nil));
    let ctx = Process::input("x", "y", Process::output("leak", "y", Process::Nil));
    Ok((p.clone(), Process::par(p, ctx)))
}

/// The non-interference example with its context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example2 {
    /// `hide z1 … hide zn [x[y:Z].ok!<y> | x!<zi>]`
    pub p: Process,
    /// `(new y0) !x!<y0> | !x(w)`
    pub context: Process,
    /// `p | context`
    pub filled: Process,
    /// The process reached by the internal communication, in context:
    /// `hide z1 … hide zn [ok!<zi>] | context`.
    pub after: Process,
    pub hidden: Vec<Name>,
    /// Name bound by the context's restriction.
    pub context_name: Name,
}

/// Builds the example for hidden names `z1 … zn`, trusted set
/// `{zj | j ∈ accepted}` and sent name `zi` (indices from 1).
pub fn example2(n: usize, accepted: &[usize], i: usize) -> Result<Example2, EncodingError> {
    if n == 0 || i == 0 || i > n {
        return Err(EncodingError::InvalidArgument(format!(
            "need 1 <= i <= n, got n = {n}, i = {i}"
        )));
    }
    if let Some(j) = accepted.iter().find(|&&j| j == 0 || j > n) {
        return Err(EncodingError::InvalidArgument(format!(
            "accepted index {j} out of range"
        )));
    }
    let hidden: Vec<Name> = (1..=n).map(|j| Name::new(format!("z{j}"))).collect();
    let a: NameSet = accepted.iter().map(|&j| hidden[j - 1].clone()).collect();
    let zi = hidden[i - 1].clone();
    let wrap = |body: Process| {
        hidden
            .iter()
            .rev()
            .fold(body, |acc, z| Process::hide(z.clone(), acc))
    };
    let p = wrap(Process::par(
        Process::trusted("x", "y", a, Process::output("ok", "y", Process::Nil)),
        Process::output("x", zi.clone(), Process::Nil),
    ));
    let context_name = Name::new("y0");
    let context = Process::par(
        Process::new_(
            context_name.clone(),
            Process::repl(Process::output("x", context_name.clone(), Process::Nil)),
        ),
        Process::repl(Process::input("x", "w", Process::Nil)),
    );
    let after = Process::par(
        wrap(Process::output("ok", zi, Process::Nil)),
        context.clone(),
    );
    Ok(Example2 {
        filled: Process::par(p.clone(), context.clone()),
        p,
        context,
        after,
        hidden,
        context_name,
    })
}

/// `U1 | U2`, or `U' | U2` when patched, with
/// `U1 = (new c)(!sys!<c> | (new pwd) c!<pwd> | c(x).done!<x>)`,
/// `U' = (hide c)(…)` with the same body and `U2 = sys(x2).x2(ypwd).leak!<ypwd>`.
pub fn dbus(patched: bool) -> Process {
    Process::par(dbus_user(patched), dbus_attacker())
}

/// The first user, vulnerable (`new c`) or patched (`hide c`).
pub fn dbus_user(patched: bool) -> Process {
    let body = Process::par_all([
        Process::repl(Process::output("sys", "c", Process::Nil)),
        Process::new_("pwd", Process::output("c", "pwd", Process::Nil)),
        Process::input("c", "x", dbus_continuation("x")),
    ]);
    if patched {
        Process::hide("c", body)
    } else {
        Process::new_("c", body)
    }
}

fn dbus_continuation(x: &str) -> Process {
    Process::output("done", x, Process::Nil)
}

/// The second user, who reads the bus name from the system bus.
pub fn dbus_attacker() -> Process {
    Process::input(
        "sys",
        "x2",
        Process::input("x2", "ypwd", Process::output("leak", "ypwd", Process::Nil)),
    )
}

/// The two sides of the D-Bus equation: `U'` and
/// `hide c[(new pwd) P{pwd/x}]` with `P = done!<x>`.
pub fn dbus_equation() -> (Process, Process) {
    let rhs = Process::hide(
        "c",
        Process::new_(
            "pwd",
            substitute(&dbus_continuation("x"), &"pwd".into(), &"x".into()),
        ),
    );
    (dbus_user(true), rhs)
}

/// `(new s)(s!<cc> | s(x).[[if x = oc then p!<ok> | p!<s> else 0]])`
pub fn credit_card() -> Process {
    let then_p = Process::par(
        Process::output("p", "ok", Process::Nil),
        Process::output("p", "s", Process::Nil),
    );
    let test = encode_match(&MatchSpec::new("x", "oc", then_p, Process::Nil));
    Process::new_(
        "s",
        Process::par(
            Process::output("s", "cc", Process::Nil),
            Process::input("s", "x", test),
        ),
    )
}

/// `omega!<omega>`, the success signal used by the distinguishing contexts.
pub fn omega() -> Process {
    Process::output("omega", "omega", Process::Nil)
}

/// Distinguishing context for inputs with blocked sets `b` and `b2`:
/// `hide (b ∪ b2)[x!<z>.omega!<omega> | x(y/b).0]`, and the same with `b2`.
/// `z` is the first name in exactly one of the two sets.
pub fn block_witness(b: &[&str], b2: &[&str]) -> Result<(Process, Process), EncodingError> {
    let (sb, sb2) = (name_set(b), name_set(b2));
    let z = sb
        .symmetric_difference(&sb2)
        .next()
        .cloned()
        .ok_or_else(|| EncodingError::InvalidArgument("the blocked sets are equal".into()))?;
    let fill = |set: &NameSet| {
        let body = Process::par(
            Process::output("x", z.clone(), omega()),
            Process::input_blocking("x", "y", set.clone(), Process::Nil),
        );
        sb.union(&sb2)
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .fold(body, |acc, h| Process::hide(h.clone(), acc))
    };
    Ok((fill(&sb), fill(&sb2)))
}

/// Distinguishing context for trusted inputs with accepted sets `a` and
/// `a2`: `x!<n>.omega!<omega> | x[y:a].0` and the same with `a2`.
pub fn accept_witness(a: &[&str], a2: &[&str]) -> Result<(Process, Process), EncodingError> {
    let (sa, sa2) = (name_set(a), name_set(a2));
    let n = if !sa.is_subset(&sa2) {
        sa.difference(&sa2).next()
    } else {
        sa2.difference(&sa).next()
    }
    .cloned()
    .ok_or_else(|| EncodingError::InvalidArgument("the accepted sets are equal".into()))?;
    let fill = |set: &NameSet| {
        Process::par(
            Process::output("x", n.clone(), omega()),
            Process::trusted("x", "y", set.clone(), Process::Nil),
        )
    };
    Ok((fill(&sa), fill(&sa2)))
}

/// `spy.omega!<omega> | (new x)(x!<z> | x(y))` and `spy.omega!<omega> | 0`.
pub fn spy_witness() -> (Process, Process) {
    let spy = Process::spy(None, omega());
    let comm = Process::new_(
        "x",
        Process::par(
            Process::output("x", "z", Process::Nil),
            Process::input("x", "y", Process::Nil),
        ),
    );
    (
        Process::par(spy.clone(), comm),
        Process::par(spy, Process::Nil),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{is_canonical, normalize};
    use crate::parser::{parse, pretty};
    use crate::reduction::{enumerate_redexes, step};

    fn sf(p: &Process) -> crate::congruence::StandardForm {
        normalize(p).1
    }

    #[test]
    fn match_encoding_shape() {
        let m = MatchSpec::new("x", "x", parse("p!<p>").unwrap(), parse("q!<q>").unwrap());
        let e = encode_match(&m);
        assert_eq!(
            pretty(&e),
            "(hide k) (x[w:{k}] | x!<k>.p!<p> | p!<k>.q!<q> | q!<k>.q!<q>)"
        );
        assert!(!e.free_names().contains(&Name::new("k")));
        assert_eq!(enumerate_redexes(&sf(&e)).len(), 1);
    }

    #[test]
    fn match_encoding_blocks_k_in_branches() {
        let m = MatchSpec::new("x", "y", parse("a(u)").unwrap(), parse("b(u)").unwrap());
        let e = encode_match(&m);
        let text = pretty(&e);
        assert!(text.contains("a(u/{k})"), "{text}");
        assert!(text.contains("b(u/{k})"), "{text}");
    }

    #[test]
    fn fresh_k_avoids_free_names() {
        let m = MatchSpec::new("k", "x", parse("k!<k>").unwrap(), Process::Nil);
        let e = encode_match(&m);
        let Process::Hide(k, _) = &e else { panic!() };
        assert_eq!(k.as_str(), "k1");
    }

    #[test]
    fn example1_shapes() {
        let (p, c) = example1("v", "z").unwrap();
        assert_eq!(pretty(&p), "(hide z) x!<v>");
        assert_eq!(pretty(&c), "(hide z) x!<v> | x(y).leak!<y>");
        assert!(example1("v", "x").is_err());
        let (_, c) = example1("z", "z").unwrap();
        assert!(step(&c, 2).is_empty());
    }

    #[test]
    fn example2_shapes() {
        let e = example2(2, &[1], 1).unwrap();
        assert_eq!(
            pretty(&e.p),
            "(hide z1) (hide z2) (x[y:{z1}].ok!<y> | x!<z1>)"
        );
        assert_eq!(pretty(&e.context), "(new y0) !x!<y0> | !x(w)");
        assert!(example2(2, &[3], 1).is_err());
        assert!(example2(2, &[1], 0).is_err());
        let s = sf(&e.p);
        assert_eq!(enumerate_redexes(&s).len(), 1);
    }

    #[test]
    fn builders_are_canonical_and_round_trip() {
        let e2 = example2(3, &[1, 2], 2).unwrap();
        let (u, spec) = dbus_equation();
        let all = [
            example1("v", "z").unwrap().1,
            e2.filled,
            dbus(false),
            dbus(true),
            u,
            spec,
            credit_card(),
            block_witness(&[], &["z"]).unwrap().1,
            accept_witness(&["a"], &[]).unwrap().0,
            spy_witness().0,
        ];
        for p in all {
            assert!(is_canonical(&p), "{}", pretty(&p));
            assert_eq!(parse(&pretty(&p)).unwrap(), p);
        }
    }

    #[test]
    fn dbus_text() {
        assert_eq!(
            pretty(&dbus(false)),
            "(new c) (!sys!<c> | (new pwd) c!<pwd> | c(x).done!<x>) | sys(x2).x2(ypwd).leak!<ypwd>"
        );
        assert_eq!(pretty(&dbus_equation().1), "(hide c) (new pwd) done!<pwd>");
    }

    #[test]
    fn witnesses() {
        let (l, r) = block_witness(&[], &["z"]).unwrap();
        assert_eq!(pretty(&l), "(hide z) (x!<z>.omega!<omega> | x(y))");
        assert_eq!(pretty(&r), "(hide z) (x!<z>.omega!<omega> | x(y/{z}))");
        let (l, r) = accept_witness(&["a"], &[]).unwrap();
        assert_eq!(pretty(&l), "x!<a>.omega!<omega> | x[y:{a}]");
        assert_eq!(pretty(&r), "x!<a>.omega!<omega> | x[y:{}]");
        assert!(block_witness(&["a"], &["a"]).is_err());
    }
}
