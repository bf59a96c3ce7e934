//! Small named automata used throughout the tests and documentation.

use crate::automaton::Dfa;

/// Three states, two order-preserving letters: `a = [0,0,1]`, `b = [1,2,2]`.
/// Strongly connected, aperiodic, shortest synchronizing word `aa`.
pub fn a1() -> Dfa {
    Dfa::from_rows(3, vec![vec![0, 0, 1], vec![1, 2, 2]]).unwrap()
}

/// Two states; `a` swaps them and `b` is the identity.
pub fn swap() -> Dfa {
    Dfa::from_rows(2, vec![vec![1, 0], vec![0, 1]]).unwrap()
}

/// `n` states and `k` letters that all act as the identity.
pub fn identity_only(n: usize, k: usize) -> Dfa {
    Dfa::from_rows(n, vec![(0..n).collect(); k]).unwrap()
}

/// The one-state, one-letter automaton.
pub fn trivial() -> Dfa {
    Dfa::from_rows(1, vec![vec![0]]).unwrap()
}
