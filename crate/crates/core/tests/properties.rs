use proptest::prelude::*;

use treeshift::cpc::kraft_sum;
use treeshift::decision::{enumerate_blocks, essential_core, is_empty, locally_admissible};
use treeshift::mixing::{check_property, connect_through, hierarchy_report, Budgets, Property, Status};
use treeshift::periodic::{check_periodic, search_periodic, PeriodicSearch};
use treeshift::{enumerate_cpcs, fixtures, validate_cpc, CompletePrefixCode, Error, Pattern, TreeShift, Word};

fn small_budgets() -> Budgets {
    Budgets { height: 2, cpc_leaves: 6, closure_cap: 256, ..Budgets::default() }
}

fn shift_strategy() -> impl Strategy<Value = TreeShift> {
    (1usize..=3, 0.15f64..0.7, any::<u64>()).prop_map(|(k, density, seed)| fixtures::random_one_step(2, k, density, seed))
}

/// A complete code grown by splitting leaves chosen by `picks`.
fn grown_code(arity: usize, picks: &[usize]) -> CompletePrefixCode {
    let mut words = vec![Word::root()];
    for &p in picks {
        let w = words.remove(p % words.len());
        words.extend((0..arity).map(|i| w.child(i)));
    }
    validate_cpc(words, arity).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grown_codes_are_complete(arity in 2usize..=3, picks in prop::collection::vec(0usize..64, 1..12)) {
        let code = grown_code(arity, &picks);
        let (num, den) = kraft_sum(code.words(), arity);
        prop_assert_eq!(num, den);
        prop_assert_eq!(code.leaf_count(), 1 + picks.len() * (arity - 1));
        if code.leaf_count() <= 7 && arity == 2 {
            prop_assert!(enumerate_cpcs(arity, 7).any(|c| c == code));
        }
        let mut fewer = code.words().to_vec();
        fewer.pop();
        prop_assert!(validate_cpc(fewer, arity).is_err());
    }

    #[test]
    fn shift_documents_round_trip(x in shift_strategy()) {
        let again = TreeShift::parse_str(&x.canonical_json()).unwrap();
        prop_assert_eq!(again.canonical_json(), x.canonical_json());
        prop_assert_eq!(again.fingerprint(), x.fingerprint());
    }

    #[test]
    fn core_is_a_fixed_point(x in shift_strategy()) {
        let core = essential_core(&x).unwrap();
        let restricted: Vec<Vec<usize>> = core.tuples.clone();
        let doc = serde_json::json!({
            "kind": "one_step",
            "alphabet": x.alphabet().names(),
            "allowed": restricted.iter().map(|t| t.iter().map(|&s| x.alphabet().name(s)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        let y = TreeShift::parse_str(&doc.to_string()).unwrap();
        prop_assert_eq!(essential_core(&y).unwrap().core, core.core.clone());
        // symbols outside the core never occur in long enough blocks
        if !core.core.is_empty() {
            let h = x.alphabet().len().max(1);
            for b in enumerate_blocks(&x, h, 10_000).unwrap() {
                prop_assert!(b.labels().iter().all(|&s| core.core.contains(s)));
            }
        }
    }

    #[test]
    fn verdicts_are_sound(x in shift_strategy()) {
        prop_assume!(!is_empty(&x, 2).unwrap().empty);
        let b = small_budgets();
        for p in [Property::Bg, Property::Ubg, Property::Si] {
            let v = check_property(&x, p, &b).unwrap();
            if let Some(w) = &v.witness_pattern {
                prop_assert!(locally_admissible(w, &x).unwrap());
            }
            if let Some(ce) = &v.counterexample {
                // replay: the pair fails for every code of the budget of the matching kind
                for code in enumerate_cpcs(2, b.cpc_leaves) {
                    if p.to_string().starts_with('U') && code.uniform_len().is_none() {
                        continue;
                    }
                    let r = connect_through(&x, &ce.u, &ce.v, &code);
                    prop_assert!(matches!(r, Err(Error::NoFill)), "{} connects through {}", p, code);
                }
            }
        }
    }

    #[test]
    fn periodic_points_replay(x in shift_strategy()) {
        if let PeriodicSearch::Found { spec, .. } = search_periodic(&x, 5).unwrap() {
            prop_assert!(check_periodic(&x, &spec).unwrap());
        }
    }

    #[test]
    fn glued_patterns_restrict_correctly(x in shift_strategy(), k in 1usize..=3) {
        prop_assume!(!is_empty(&x, 2).unwrap().empty);
        let blocks = enumerate_blocks(&x, 2, 100).unwrap();
        let u = blocks[0].to_pattern();
        let v = blocks[blocks.len() - 1].to_pattern();
        let code = CompletePrefixCode::uniform(2, k);
        if let Ok(t) = connect_through(&x, &u, &v, &code) {
            prop_assert!(locally_admissible(&t, &x).unwrap());
            for (w, s) in u.iter() {
                prop_assert_eq!(t.get(w), Some(s));
            }
            for l in u.leaves() {
                for c in code.words() {
                    let sub: Pattern = t.subtree_at(&l.concat(c)).unwrap();
                    for (w, s) in v.iter() {
                        prop_assert_eq!(sub.get(w), Some(s));
                    }
                }
            }
        }
    }
}

#[test]
fn hierarchy_has_no_violations_on_random_shifts() {
    let b = small_budgets();
    let mut decided = 0;
    for seed in 0..50 {
        let x = fixtures::random_one_step(2, 1 + seed as usize % 3, 0.45, 2000 + seed);
        let r = hierarchy_report(&x, &b).unwrap();
        assert!(r.violations.is_empty(), "seed {seed}: {:?}", r.violations);
        decided += r.verdicts.iter().filter(|v| v.status != Status::Unknown).count();
    }
    assert!(decided > 0);
}
