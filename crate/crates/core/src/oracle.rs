//! Exact shortest synchronizing words by breadth-first search over subsets.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::automaton::{Dfa, Letter, Word};
use crate::pair_graph::{has_pair_sink, PairGraphError, DEFAULT_PAIR_CAP};
use crate::synth::SyncCertificate;

pub const DEFAULT_ORACLE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subset search over {states} states exceeds the cap of {cap} states")]
    CapExceeded { states: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Shortest, then lexicographically least, synchronizing word.
    pub word: Option<Word>,
    /// Number of distinct subsets reached.
    pub explored: usize,
    pub capped: bool,
}

/// Shortest synchronizing word, searching subsets of states encoded as bit
/// masks. Refuses automata with more than `max_states` states (and more than
/// 64 in any case).
pub fn shortest_sync_word(dfa: &Dfa, max_states: usize) -> Result<OracleResult, OracleError> {
    let n = dfa.num_states();
    if n > max_states.min(64) {
        return Err(OracleError::CapExceeded {
            states: n,
            cap: max_states.min(64),
        });
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    if n == 1 {
        return Ok(OracleResult {
            word: Some(Word::empty()),
            explored: 1,
            capped: false,
        });
    }
    let image = |set: u64, a: Letter| {
        let mut out = 0u64;
        let mut rest = set;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << dfa.step(q, a);
        }
        out
    };
    let mut parent: HashMap<u64, (u64, Letter)> = HashMap::new();
    parent.insert(full, (0, 0));
    let mut queue = VecDeque::from([full]);
    while let Some(set) = queue.pop_front() {
        for a in dfa.letters() {
            let next = image(set, a);
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, (set, a));
            if next.count_ones() == 1 {
                let mut letters = Vec::new();
                let mut cur = next;
                while cur != full {
                    let (prev, a) = parent[&cur];
                    letters.push(a);
                    cur = prev;
                }
                letters.reverse();
                return Ok(OracleResult {
                    word: Some(Word::from(letters)),
                    explored: parent.len(),
                    capped: false,
                });
            }
            queue.push_back(next);
        }
    }
    Ok(OracleResult {
        word: None,
        explored: parent.len(),
        capped: false,
    })
}

/// Whether `dfa` has a synchronizing word, decided on the pair graph.
pub fn is_synchronizable(dfa: &Dfa) -> Result<bool, PairGraphError> {
    has_pair_sink(dfa, DEFAULT_PAIR_CAP)
}

/// Whether the certificate's word synchronizes `dfa` within `n(n-1)/2`.
pub fn verify_bound(dfa: &Dfa, cert: &SyncCertificate) -> bool {
    let n = dfa.num_states();
    dfa.check_word(&cert.word).is_ok()
        && cert.word.len() <= n * (n - 1) / 2
        && dfa.is_synchronizing_word(&cert.word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, identity_only, trivial};
    use crate::generate::cerny;
    use crate::synth::{synchronize_aperiodic, SynthOptions};

    #[test]
    fn a1_shortest() {
        let r = shortest_sync_word(&a1(), 16).unwrap();
        assert_eq!(r.word, Some(Word::from(vec![0, 0])));
    }

    #[test]
    fn cerny_lengths() {
        for (n, len) in [(2, 1), (3, 4), (4, 9)] {
            let r = shortest_sync_word(&cerny(n), 16).unwrap();
            assert_eq!(r.word.unwrap().len(), len, "cerny({n})");
        }
    }

    #[test]
    fn non_synchronizing() {
        let r = shortest_sync_word(&identity_only(3, 2), 16).unwrap();
        assert_eq!(r.word, None);
        assert_eq!(r.explored, 1);
    }

    #[test]
    fn cap() {
        assert_eq!(
            shortest_sync_word(&cerny(5), 4),
            Err(OracleError::CapExceeded { states: 5, cap: 4 })
        );
    }

    #[test]
    fn synchronizability() {
        assert!(is_synchronizable(&a1()).unwrap());
        assert!(is_synchronizable(&cerny(4)).unwrap());
        assert!(!is_synchronizable(&identity_only(2, 1)).unwrap());
    }

    #[test]
    fn bounds() {
        let cert = synchronize_aperiodic(&a1(), &SynthOptions::default()).unwrap();
        assert!(verify_bound(&a1(), &cert));
        let cert = synchronize_aperiodic(&trivial(), &SynthOptions::default()).unwrap();
        assert!(verify_bound(&trivial(), &cert));
        let mut long = synchronize_aperiodic(&a1(), &SynthOptions::default()).unwrap();
        long.word = Word::from(vec![0, 0, 0, 0]);
        assert!(!verify_bound(&a1(), &long));
    }
}
