//! The acceptance checks: the worked examples, the barb fixtures, the
//! algebraic laws and the engine properties, each as a named pass/fail run.

use std::collections::BTreeSet;
use std::panic;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::congruence::{congruent_bounded, normalize, Answer};
use crate::encodings::{
    accept_witness, block_witness, dbus, dbus_equation, encode_match, example1, example2,
    spy_witness, MatchSpec,
};
use crate::equivalence::{barbs, bisimilar, weak_barb, weak_barbs, Barb, BisimVerdict};
use crate::gen::{seed_from_env, GenConfig, TermGen};
use crate::lts::{transitions, Action, Mode, NameBudget};
use crate::name::{name_set, Name};
use crate::parser::{parse, parse_bytes, pretty};
use crate::process::{alpha_eq, block_name, substitute, BinderKind, Process};
use crate::reduction::{reach, step, Bounds};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn() -> Result<String, String>;

/// `(id, title, check)` in running order.
pub const CHECKS: [(&str, &str, CheckFn); 12] = [
    (
        "example1-secrecy",
        "hidden name is not leaked to the context",
        example1_secrecy,
    ),
    (
        "example2-no-interference",
        "trusted input ignores the context",
        example2_no_interference,
    ),
    (
        "barb-fixtures",
        "strong barbs of the fixture terms",
        barb_fixtures,
    ),
    (
        "block-accept",
        "blocked and accepted sets are observable",
        block_accept,
    ),
    (
        "spy-restricted-comm",
        "a spy sees restricted communication",
        spy_restricted_comm,
    ),
    (
        "hide-invisible",
        "hidden communication is invisible",
        hide_invisible,
    ),
    (
        "hide-no-extrusion",
        "hidden names are never extruded",
        hide_no_extrusion,
    ),
    (
        "match-encoding",
        "matching encoded with hide and trusted input",
        match_encoding,
    ),
    ("dbus", "bus name leak and its patch", dbus_check),
    ("harmony", "reductions agree with tau transitions", harmony),
    (
        "soundness",
        "bisimilar pairs agree on barbs and in contexts",
        soundness,
    ),
    (
        "hygiene",
        "parser round trip, substitution laws, fuzzing",
        hygiene,
    ),
];

pub fn check_ids() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|c| c.0)
}

/// Runs the checks whose id is in `only`, or all of them.
pub fn run_suite(only: Option<&[String]>) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .filter(|(id, ..)| only.is_none_or(|o| o.iter().any(|s| s == id)))
        .map(|&(id, title, f)| run_one(id, title, f))
        .collect()
}

fn run_one(id: &'static str, title: &'static str, f: CheckFn) -> CheckResult {
    let (passed, detail) = match panic::catch_unwind(f) {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(_) => (false, "panicked".into()),
    };
    CheckResult {
        id,
        title,
        passed,
        detail,
    }
}

fn p(src: &str) -> Process {
    parse(src).unwrap_or_else(|e| panic!("fixture {src:?}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_bisim(l: &Process, r: &Process, mode: Mode) -> Result<(), String> {
    let v = bisimilar(l, r, mode, &Bounds::default(), 1).map_err(|e| e.to_string())?;
    ensure(v.is_bisimilar(), || {
        format!("{} vs {}: {}", pretty(l), pretty(r), v.name())
    })
}

fn example1_secrecy() -> Result<String, String> {
    let b = Bounds::default();
    let (_, leaky) = example1("v", "z").map_err(|e| e.to_string())?;
    let leak = weak_barb(&leaky, &Barb::output("leak"), &b);
    ensure(leak == Answer::Yes, || {
        format!("v != z: leak barb {leak:?}")
    })?;
    let r = reach(&leaky, &b);
    ensure(r.states.iter().any(|s| alpha_eq(s, &p("leak!<v>"))), || {
        "v != z: leak!<v> not reached".into()
    })?;
    let (_, safe) = example1("z", "z").map_err(|e| e.to_string())?;
    let r = reach(&safe, &b);
    ensure(
        r.states.len() == 1 && r.edges.is_empty() && !r.bound_hit,
        || format!("v = z: {} states reached", r.states.len()),
    )?;
    Ok("v != z reaches leak!<v>; v = z has no reduction".into())
}

fn example2_no_interference() -> Result<String, String> {
    let b = Bounds::default();
    let mut seen = 0;
    for i in 1..=2 {
        let ex = example2(2, &[1], i).map_err(|e| e.to_string())?;
        let start = normalize(&ex.filled).0;
        let after = normalize(&ex.after).0;
        let r = reach(&ex.filled, &b);
        ensure(!r.bound_hit, || format!("i = {i}: bound hit"))?;
        for (s, key) in r.states.iter().zip(&r.keys) {
            ensure(*key == start || *key == after, || {
                format!("i = {i}: unexpected successor {}", pretty(s))
            })?;
            let (_, sf) = normalize(s);
            for t in &sf.threads {
                if let Process::Output {
                    subject, object, ..
                } = t
                {
                    ensure(
                        subject.as_str() != "ok"
                            || sf.binder_kind(object) == Some(BinderKind::Hide),
                        || format!("i = {i}: ok received {object}"),
                    )?;
                }
            }
        }
        ensure((i == 1) == r.keys.contains(&after), || {
            format!("i = {i}: trusted communication reachability wrong")
        })?;
        seen += r.states.len();
    }
    Ok(format!("{seen} states, all of shape (a) or (b)"))
}

fn barb_fixtures() -> Result<String, String> {
    let z_in = Barb::input("z");
    let cases: [(&str, &Barb, bool); 8] = [
        ("(hide x) z[y:{x}].q!<q>", &z_in, false),
        ("(new z) z(y/{b}).q!<q>", &z_in, false),
        ("z[y:{}].q!<q>", &z_in, false),
        ("(new x) z[y:{a, x}].q!<q>", &z_in, true),
        ("(new x) z[y:{x}].q!<q>", &z_in, false),
        ("(hide x) z(y/{b}).q!<q>", &z_in, true),
        ("(hide y) x!<v>.q!<q>", &Barb::output("x"), true),
        ("(hide y) x!<y>.q!<q>", &Barb::output("x"), false),
    ];
    for (src, b, expected) in cases {
        let got = barbs(&p(src)).contains(b);
        ensure(got == expected, || format!("{src}: barb {b} is {got}"))?;
    }
    Ok(format!("{} fixtures", cases.len()))
}

fn omega_split(with: &Process, without: &Process) -> Result<(), String> {
    let b = Bounds::default();
    let w = Barb::output("omega");
    let (a1, a2) = (weak_barb(with, &w, &b), weak_barb(without, &w, &b));
    ensure(a1 == Answer::Yes && a2 == Answer::No, || {
        format!("{}: {a1:?}, {}: {a2:?}", pretty(with), pretty(without))
    })
}

fn block_accept() -> Result<String, String> {
    let (l, r) = block_witness(&[], &["z"]).map_err(|e| e.to_string())?;
    omega_split(&l, &r)?;
    let (l, r) = accept_witness(&["a"], &[]).map_err(|e| e.to_string())?;
    omega_split(&l, &r)?;
    Ok("both contexts separate the inputs".into())
}

fn spy_restricted_comm() -> Result<String, String> {
    let left = p("(new x) (x!<z> | x(y))");
    let v = bisimilar(&left, &Process::Nil, Mode::Spied, &Bounds::default(), 1)
        .map_err(|e| e.to_string())?;
    match &v {
        BisimVerdict::NotBisimilar(t)
            if t.first().map(|s| &s.action) == Some(&Action::CommSignal(Name::nu())) => {}
        other => return Err(format!("verdict {other:?}")),
    }
    let (with, without) = spy_witness();
    omega_split(&with, &without)?;
    Ok("distinguished by !nu; spy context separates".into())
}

/// The pairs claimed bisimilar by the equational checks, with their mode.
fn bisimilar_pairs() -> Vec<(Process, Process, Mode)> {
    let mut out = Vec::new();
    for q in ["0", "a!<a>", "a(w)"] {
        out.push((
            p(&format!("(hide x) (x!<z> | x(y).{q})")),
            p(&format!("(hide x) {q}")),
            Mode::Spied,
        ));
    }
    out.push((p("(hide x) z!<x>"), Process::Nil, Mode::Spied));
    for (then_p, else_q) in match_cases() {
        out.push((
            encode_match(&MatchSpec::new("x", "x", then_p.clone(), else_q.clone())),
            then_p.clone(),
            Mode::Plain,
        ));
        out.push((
            encode_match(&MatchSpec::new("x", "y", then_p, else_q.clone())),
            else_q,
            Mode::Plain,
        ));
    }
    let (u, rhs) = dbus_equation();
    out.push((u, rhs, Mode::Spied));
    out
}

fn match_cases() -> Vec<(Process, Process)> {
    vec![(p("p!<p>"), p("q!<q>")), (p("p!<p>.p(u)"), p("q(u).q!<q>"))]
}

fn hide_invisible() -> Result<String, String> {
    for (l, r, m) in bisimilar_pairs().iter().take(3) {
        check_bisim(l, r, *m)?;
    }
    Ok("bisimilar for Q in {0, a!<a>, a(w)}".into())
}

fn hide_no_extrusion() -> Result<String, String> {
    let h = p("(hide x) z!<x>");
    check_bisim(&h, &Process::Nil, Mode::Spied)?;
    for mode in [Mode::Plain, Mode::Spied] {
        let t =
            transitions(&h, mode, &NameBudget::for_processes([&h])).map_err(|e| e.to_string())?;
        ensure(t.is_empty(), || {
            format!("{} transitions in {mode:?}", t.len())
        })?;
    }
    Ok("bisimilar to 0, no transitions".into())
}

fn match_encoding() -> Result<String, String> {
    let pairs = bisimilar_pairs();
    for (l, r, m) in &pairs[4..pairs.len() - 1] {
        check_bisim(l, r, *m)?;
    }
    Ok(format!("{} cases", pairs.len() - 5))
}

fn dbus_check() -> Result<String, String> {
    let b = Bounds::default();
    let leak = Barb::output("leak");
    let open = weak_barb(&dbus(false), &leak, &b);
    ensure(open == Answer::Yes, || {
        format!("unpatched leak barb {open:?}")
    })?;
    let r = reach(&dbus(false), &b);
    let leaked = r.states.iter().any(|s| {
        let (_, sf) = normalize(s);
        sf.threads.iter().any(|t| {
            matches!(t, Process::Output { subject, object, .. }
                if subject.as_str() == "leak" && object.base() == "pwd")
        })
    });
    ensure(leaked, || "no state where the attacker holds pwd".into())?;
    let closed = weak_barb(&dbus(true), &leak, &b);
    ensure(closed == Answer::No, || {
        format!("patched leak barb {closed:?}")
    })?;
    let (u, rhs) = dbus_equation();
    check_bisim(&u, &rhs, Mode::Spied)?;
    Ok(format!(
        "leak after {} states; patch bisimilar",
        r.states.len()
    ))
}

/// Whether every element of `xs` has a congruent partner in `ys`.
fn covered(xs: &[(String, Process)], ys: &[(String, Process)]) -> bool {
    xs.iter().all(|(kx, x)| {
        ys.iter()
            .any(|(ky, y)| kx == ky || congruent_bounded(x, y, 2000) == Answer::Yes)
    })
}

/// Terms for which the reducts and the τ-successors differ.
pub fn harmony_discrepancies(terms: &[Process]) -> Vec<Process> {
    terms
        .iter()
        .filter(|t| {
            let keyed = |ps: Vec<Process>| -> Vec<(String, Process)> {
                ps.into_iter().map(|q| (normalize(&q).0, q)).collect()
            };
            let reducts = keyed(step(t, 0));
            let taus = match transitions(t, Mode::Plain, &NameBudget::for_processes([*t])) {
                Ok(ts) => keyed(
                    ts.into_iter()
                        .filter(|(a, _)| a.is_tau())
                        .map(|(_, q)| q)
                        .collect(),
                ),
                Err(_) => return true,
            };
            !(covered(&reducts, &taus) && covered(&taus, &reducts))
        })
        .cloned()
        .collect()
}

fn harmony() -> Result<String, String> {
    let terms = TermGen::new(seed_from_env(1), GenConfig::harmony()).terms(600);
    let with_steps = terms.iter().filter(|t| !step(t, 0).is_empty()).count();
    let bad = harmony_discrepancies(&terms);
    ensure(bad.is_empty(), || {
        format!("{} discrepancies, first {}", bad.len(), pretty(&bad[0]))
    })?;
    Ok(format!(
        "{} terms, {with_steps} with reductions",
        terms.len()
    ))
}

fn barb_set(p: &Process) -> Result<BTreeSet<Barb>, String> {
    let (set, hit) = weak_barbs(p, &Bounds::default());
    ensure(!hit, || format!("{}: bound hit", pretty(p)))?;
    Ok(set)
}

/// The three contexts used for the congruence spot checks.
type Context = Box<dyn Fn(&Process) -> Process>;

fn contexts(l: &Process, r: &Process) -> Vec<Context> {
    let free = l.free_names().into_iter().chain(r.free_names()).next();
    let a = free.unwrap_or_else(|| Name::new("a"));
    let a2 = a.clone();
    vec![
        Box::new(|x: &Process| Process::par(x.clone(), p("obs!<obs>"))),
        Box::new(move |x: &Process| Process::new_(a.clone(), x.clone())),
        Box::new(move |x: &Process| Process::hide(a2.clone(), x.clone())),
    ]
}

fn soundness() -> Result<String, String> {
    let mut n = 0;
    for (l, r, m) in bisimilar_pairs() {
        let (bl, br) = (barb_set(&l)?, barb_set(&r)?);
        ensure(bl == br, || {
            format!("{} and {}: weak barbs differ", pretty(&l), pretty(&r))
        })?;
        for c in contexts(&l, &r) {
            check_bisim(&c(&l), &c(&r), m)?;
            n += 1;
        }
    }
    Ok(format!("{n} context checks"))
}

fn hygiene_clauses() -> Result<(), String> {
    let same = |a: &Process, b: &str, what: &str| {
        ensure(alpha_eq(a, &p(b)), || format!("{what}: got {}", pretty(a)))
    };
    let t = p("x(y/{b}).y!<z>");
    ensure(t.free_names() == name_set(["x", "b", "z"]), || {
        "fv input".into()
    })?;
    ensure(t.bound_names() == name_set(["y"]), || "bv input".into())?;
    let t = p("(hide z) x!<v> | (new w) w[u:{k}]");
    ensure(t.free_names() == name_set(["x", "v", "k"]), || {
        "fv binders".into()
    })?;
    ensure(t.bound_names() == name_set(["z", "w", "u"]), || {
        "bv binders".into()
    })?;
    let (b, z) = (Name::new("b"), Name::new("z"));
    same(
        &block_name(&p("x(y/{c}).y!<y>"), &b),
        "x(y/{b, c}).y!<y>",
        "block input",
    )?;
    same(
        &block_name(&p("x[y:{b}].a(w)"), &b),
        "x[y:{b}].a(w/{b})",
        "block trusted",
    )?;
    same(
        &block_name(&p("(hide b) a(w)"), &b),
        "(hide c) a(w/{b})",
        "block shadow",
    )?;
    let once = block_name(&p("a(w) | !x!<y>.c(u)"), &b);
    same(&block_name(&once, &b), &pretty(&once), "block idempotent")?;
    same(
        &substitute(&p("x!<y>.y(w)"), &z, &Name::new("y")),
        "x!<z>.z(w)",
        "subst",
    )?;
    same(
        &substitute(&p("a(x).x!<x>"), &z, &Name::new("x")),
        "a(x).x!<x>",
        "subst shadow",
    )?;
    let capture = substitute(&p("(new y) x!<y>"), &Name::new("y"), &Name::new("x"));
    same(&capture, "(new w) y!<w>", "subst capture")?;
    same(
        &substitute(&p("a(w/{x})"), &z, &Name::new("x")),
        "a(w/{z})",
        "subst blocked",
    )
}

fn hygiene() -> Result<String, String> {
    hygiene_clauses()?;
    let seed = seed_from_env(2);
    let terms = TermGen::new(seed, GenConfig::general()).terms(10_000);
    for t in &terms {
        let text = pretty(t);
        let back = parse(&text).map_err(|e| format!("{text}: {e}"))?;
        ensure(alpha_eq(&back, t), || format!("round trip changed {text}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = b"ab xyz0!|.()[]{}<>/:,-\nnewhidespy#\xff";
    let mut errors = 0;
    for (i, t) in terms.iter().take(3000).enumerate() {
        let bytes: Vec<u8> = if i % 2 == 0 {
            let len = rng.gen_range(0..40);
            (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect()
        } else {
            let mut b = pretty(t).into_bytes();
            for _ in 0..rng.gen_range(1..4) {
                if b.is_empty() {
                    break;
                }
                let k = rng.gen_range(0..b.len());
                b[k] = rng.gen();
            }
            b
        };
        match panic::catch_unwind(|| parse_bytes(&bytes)) {
            Ok(Err(e)) => {
                ensure(e.line >= 1 && e.column >= 1, || format!("no position: {e}"))?;
                errors += 1;
            }
            Ok(Ok(_)) => {}
            Err(_) => return Err(format!("parser panicked on {bytes:?}")),
        }
    }
    Ok(format!(
        "{} round trips, 3000 fuzz inputs ({errors} rejected)",
        terms.len()
    ))
}
