use proptest::prelude::*;
use secretpi::congruence::normal_process;
use secretpi::gen::{GenConfig, TermGen};
use secretpi::{
    alpha_canonicalize, alpha_eq, block_name, congruent_bounded, normalize, parse, pretty,
    substitute, Answer, Name, Process,
};

fn term() -> impl Strategy<Value = Process> {
    any::<u64>().prop_map(|seed| TermGen::new(seed, GenConfig::general()).term())
}

fn small_term() -> impl Strategy<Value = Process> {
    any::<u64>().prop_map(|seed| TermGen::new(seed, GenConfig::harmony()).term())
}

fn name() -> impl Strategy<Value = Name> {
    prop::sample::select(vec!["a", "b", "x", "q"]).prop_map(Name::from)
}

proptest! {
    #[test]
    fn alpha_eq_is_an_equivalence(p in term(), q in term()) {
        prop_assert!(alpha_eq(&p, &p));
        prop_assert_eq!(alpha_eq(&p, &q), alpha_eq(&q, &p));
        let c = alpha_canonicalize(&p);
        prop_assert!(alpha_eq(&p, &c));
        prop_assert_eq!(alpha_eq(&c, &q), alpha_eq(&p, &q));
    }

    #[test]
    fn block_name_is_idempotent(p in term(), b in name()) {
        let once = block_name(&p, &b);
        prop_assert!(alpha_eq(&block_name(&once, &b), &once));
        let mut allowed = p.free_names();
        allowed.insert(b.clone());
        prop_assert!(once.free_names().is_subset(&allowed));
    }

    #[test]
    fn substitution_identities(p in term(), x in name(), y in name()) {
        prop_assert_eq!(substitute(&p, &x, &x), p.clone());
        let fresh = Name::from("unused");
        prop_assert_eq!(substitute(&p, &x, &fresh), p.clone());
        let s = substitute(&p, &y, &x);
        prop_assert!(!s.is_free(&x) || x == y);
    }

    #[test]
    fn pretty_parses_back(p in term()) {
        let text = pretty(&p);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert!(alpha_eq(&back, &p), "{}", text);
    }

    #[test]
    fn standard_form_is_congruent(p in small_term()) {
        let n = normal_process(&p);
        prop_assert_eq!(congruent_bounded(&p, &n, 20_000), Answer::Yes, "{}", pretty(&p));
    }

    #[test]
    fn normalize_is_idempotent(p in term()) {
        let (key, _) = normalize(&p);
        prop_assert_eq!(normalize(&normal_process(&p)).0, key);
    }
}
