use proptest::prelude::*;

use syncword::congruence::{
    check_stability, congruence_from_scc, detect_t_cycle, order_from_scc, quotient,
};
use syncword::generate::{random_monotone_dfa, Family, GenSpec};
use syncword::monoid::{is_aperiodic, relabel, sinks, state_condensation, DEFAULT_MONOID_CAP};
use syncword::oracle::shortest_sync_word;
use syncword::pair_graph::{find_almost_minimal_scc, has_pair_sink, is_synchronizing_pair_word};
use syncword::synth::{escape_word, synchronize_aperiodic, StageTag, SynthOptions};
use syncword::{parse_dfa, serialize_dfa, Dfa, StateSet, Word};

const CAP: usize = 1 << 20;

fn dfa_strategy(max_n: usize, max_k: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        proptest::collection::vec(proptest::collection::vec(0..n, n), k)
            .prop_map(move |rows| Dfa::from_rows(n, rows).unwrap())
    })
}

fn dfa_and_words(max_n: usize, max_k: usize) -> impl Strategy<Value = (Dfa, Word, Word)> {
    dfa_strategy(max_n, max_k).prop_flat_map(|d| {
        let k = d.num_letters();
        let word = proptest::collection::vec(0..k, 0..8).prop_map(Word::from);
        (Just(d), word.clone(), word)
    })
}

fn monotone_strategy() -> impl Strategy<Value = Dfa> {
    (2usize..=7, 1usize..=3, any::<u64>())
        .prop_map(|(n, k, seed)| random_monotone_dfa(&GenSpec::new(Family::Monotone, n, k, seed)))
}

proptest! {
    #[test]
    fn action_is_a_homomorphism((d, u, v) in dfa_and_words(6, 3)) {
        let uv = u.concat(&v);
        for q in d.states() {
            prop_assert_eq!(d.apply(q, &uv), d.apply(d.apply(q, &u), &v));
        }
        prop_assert_eq!(
            d.transformation_of_word(&uv),
            d.transformation_of_word(&u).then(&d.transformation_of_word(&v))
        );
    }

    #[test]
    fn images_never_grow((d, u, _) in dfa_and_words(6, 3), mask in 1u32..64) {
        let p: StateSet = d.states().filter(|&q| mask & (1 << q) != 0).collect();
        prop_assume!(!p.is_empty());
        prop_assert!(d.apply_set(&p, &u).unwrap().len() <= p.len());
    }

    #[test]
    fn format_round_trip(d in dfa_strategy(8, 4)) {
        let text = serialize_dfa(&d);
        let back = parse_dfa(&text).unwrap();
        prop_assert_eq!(serialize_dfa(&back), text);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn aperiodicity_survives_relabeling(d in dfa_strategy(4, 2), perm in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle()) {
        let n = d.num_states();
        let perm: Vec<usize> = perm.into_iter().filter(|&q| q < n).collect();
        let e = relabel(&d, &perm);
        prop_assert_eq!(
            is_aperiodic(&d, CAP).unwrap().is_aperiodic(),
            is_aperiodic(&e, CAP).unwrap().is_aperiodic()
        );
    }

    #[test]
    fn sinks_are_the_unique_terminal_component(d in dfa_strategy(7, 3)) {
        let cond = state_condensation(&d);
        let terminal: Vec<usize> = cond.terminal_components().collect();
        let s = sinks(&d);
        if terminal.len() == 1 {
            prop_assert_eq!(s.as_slice(), cond.component(terminal[0]));
        } else {
            prop_assert!(s.is_empty());
        }
        // brute force: reachable from every state
        for t in d.states() {
            let from_all = d.states().all(|p| {
                let mut seen = vec![false; d.num_states()];
                let mut stack = vec![p];
                seen[p] = true;
                while let Some(x) = stack.pop() {
                    for a in d.letters() {
                        let y = d.step(x, a);
                        if !seen[y] { seen[y] = true; stack.push(y); }
                    }
                }
                seen[t]
            });
            prop_assert_eq!(from_all, s.contains(t));
        }
    }

    #[test]
    fn pair_sink_matches_oracle(d in dfa_strategy(7, 3)) {
        let oracle = shortest_sync_word(&d, 16).unwrap().word.is_some();
        prop_assert_eq!(has_pair_sink(&d, CAP).unwrap(), oracle);
    }

    #[test]
    fn pair_graph_and_state_graph_agree_on_words((d, u, _) in dfa_and_words(5, 2)) {
        prop_assert_eq!(d.is_synchronizing_word(&u), is_synchronizing_pair_word(&d, &u));
    }

    #[test]
    fn almost_minimal_component_structure(d in dfa_strategy(6, 3), words in proptest::collection::vec(proptest::collection::vec(0usize..3, 0..6), 10)) {
        let Some(m) = find_almost_minimal_scc(&d, CAP).unwrap() else {
            prop_assert_eq!(d.num_states(), 1);
            return Ok(());
        };
        prop_assert!(m.pairs().iter().all(|&(p, q)| p != q));
        prop_assert!(m.is_closed_in(&d));
        let order = order_from_scc(&d, &m);
        let part = congruence_from_scc(&d, &m);
        prop_assert_eq!(check_stability(&d, &order), Ok(()));
        prop_assert_eq!(check_stability(&d, &part.to_relation()), Ok(()));
        for q in m.support().iter() {
            prop_assert!(part.block(part.block_of(q)).len() >= 2);
        }
        // pairs related strictly either collapse or stay inside the support
        for (r, q) in order.pairs().filter(|(r, q)| r != q) {
            for w in &words {
                let w: Word = w.iter().copied().filter(|&a| a < d.num_letters()).collect();
                let (rw, qw) = (d.apply(r, &w), d.apply(q, &w));
                if !m.support().contains(rw) {
                    prop_assert_eq!(rw, qw);
                }
            }
        }
        let (quot, proj) = quotient(&d, &part).unwrap();
        for q in d.states() {
            for a in d.letters() {
                prop_assert_eq!(proj[d.step(q, a)], quot.step(proj[q], a));
            }
        }
    }

    #[test]
    fn aperiodic_sink_iff_synchronizable(d in dfa_strategy(5, 2)) {
        prop_assume!(is_aperiodic(&d, CAP).unwrap().is_aperiodic());
        let oracle = shortest_sync_word(&d, 16).unwrap().word;
        prop_assert_eq!(!sinks(&d).is_empty(), oracle.is_some());
        if let Some(m) = find_almost_minimal_scc(&d, CAP).unwrap() {
            prop_assert!(detect_t_cycle(&d, &m).is_none());
            prop_assert!(order_from_scc(&d, &m).is_antisymmetric());
            let (quot, _) = quotient(&d, &congruence_from_scc(&d, &m)).unwrap();
            prop_assert!(is_aperiodic(&quot, CAP).unwrap().is_aperiodic());
        }
    }

    #[test]
    fn monotone_certificates(d in monotone_strategy()) {
        prop_assert!(is_aperiodic(&d, CAP).unwrap().is_aperiodic());
        let n = d.num_states();
        match synchronize_aperiodic(&d, &SynthOptions::default()) {
            Ok(cert) => {
                prop_assert!(cert.verified);
                prop_assert!(cert.word.len() <= n * (n - 1) / 2);
                prop_assert_eq!(cert.trimmed, 0);
                let oracle = shortest_sync_word(&d, 16).unwrap().word.unwrap();
                prop_assert!(oracle.len() <= cert.word.len());
                for stage in &cert.stages {
                    if let Some(b) = stage.bound {
                        prop_assert!(stage.word.len() <= b, "{:?}", stage);
                    }
                }
            }
            Err(_) => prop_assert!(sinks(&d).is_empty()),
        }
    }

    #[test]
    fn escape_words_leave_and_stay_short(d in dfa_strategy(6, 3)) {
        let cond = state_condensation(&d);
        for c in 0..cond.len() {
            if cond.successors(c).is_empty() {
                continue;
            }
            let comp: StateSet = cond.component(c).iter().copied().collect();
            let w = escape_word(&d, &comp).unwrap();
            prop_assert!(!w.is_empty());
            prop_assert!(d.apply_set(&comp, &w).unwrap().intersection(&comp).is_empty());
            let r = comp.len();
            prop_assert!(w.len() <= r * (r + 1) / 2);
        }
    }
}

/// Brute force over all words up to the given length.
fn shortest_escape_brute_force(d: &Dfa, comp: &StateSet, max_len: usize) -> Option<usize> {
    let k = d.num_letters();
    for len in 1..=max_len {
        let total = k.pow(len as u32);
        for code in 0..total {
            let mut c = code;
            let w: Word = (0..len).map(|_| { let a = c % k; c /= k; a }).collect();
            if d.apply_set(comp, &w).unwrap().intersection(comp).is_empty() {
                return Some(len);
            }
        }
    }
    None
}

#[test]
fn escape_example_matches_exhaustive_search() {
    let d = Dfa::from_rows(3, vec![vec![1, 0, 2], vec![0, 2, 2]]).unwrap();
    let comp = StateSet::from(vec![0, 1]);
    let w = escape_word(&d, &comp).unwrap();
    assert_eq!(shortest_escape_brute_force(&d, &comp, 6), Some(3));
    assert_eq!(w.len(), 3);
    assert_eq!(d.apply_set(&comp, &w).unwrap(), StateSet::singleton(2));
}

#[test]
fn class_stages_respect_their_bounds() {
    for seed in 0..300 {
        let d = random_monotone_dfa(&GenSpec::new(Family::Monotone, 6, 2, seed));
        let Ok(cert) = synchronize_aperiodic(&d, &SynthOptions::default()) else { continue };
        for stage in cert.stages.iter().filter(|s| s.tag == StageTag::ClassMerge) {
            assert!(stage.word.len() <= stage.bound.unwrap(), "seed {seed}: {stage:?}");
        }
        assert!(is_aperiodic(&d, DEFAULT_MONOID_CAP).unwrap().is_aperiodic());
    }
}
