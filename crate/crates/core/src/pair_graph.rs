//! The pair graph: vertices are ordered pairs of states and each letter acts
//! componentwise. Vertex `(p, q)` has id `p * n + q`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::automaton::{Dfa, Letter, State, StateSet, Word};
use crate::scc::Condensation;

/// Default vertex cap, i.e. automata with up to 2000 states.
pub const DEFAULT_PAIR_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairGraphError {
    #[error("pair graph would have {vertices} vertices, above the cap of {cap}")]
    CapExceeded { vertices: usize, cap: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct PairGraph<'a> {
    dfa: &'a Dfa,
}

pub fn build_pair_graph(dfa: &Dfa, cap: usize) -> Result<PairGraph<'_>, PairGraphError> {
    let n = dfa.num_states();
    let vertices = n.saturating_mul(n);
    if vertices > cap {
        return Err(PairGraphError::CapExceeded { vertices, cap });
    }
    Ok(PairGraph { dfa })
}

impl<'a> PairGraph<'a> {
    pub fn dfa(&self) -> &'a Dfa {
        self.dfa
    }

    pub fn num_vertices(&self) -> usize {
        self.dfa.num_states() * self.dfa.num_states()
    }

    #[inline]
    pub fn vertex(&self, p: State, q: State) -> usize {
        p * self.dfa.num_states() + q
    }

    #[inline]
    pub fn pair(&self, v: usize) -> (State, State) {
        let n = self.dfa.num_states();
        (v / n, v % n)
    }

    pub fn is_diagonal(&self, v: usize) -> bool {
        let (p, q) = self.pair(v);
        p == q
    }

    #[inline]
    pub fn successor(&self, v: usize, a: Letter) -> usize {
        let (p, q) = self.pair(v);
        self.vertex(self.dfa.step(p, a), self.dfa.step(q, a))
    }

    pub fn condensation(&self) -> Condensation {
        Condensation::with_degree(self.num_vertices(), self.dfa.num_letters(), |v, a| {
            Some(self.successor(v, a))
        })
    }

    /// Whether some vertex is reachable from every vertex.
    pub fn has_sink(&self) -> bool {
        self.condensation().terminal_components().nth(1).is_none()
    }
}

/// Whether the pair graph of `dfa` has a sink vertex; equivalently whether
/// `dfa` has a synchronizing word.
pub fn has_pair_sink(dfa: &Dfa, cap: usize) -> Result<bool, PairGraphError> {
    Ok(build_pair_graph(dfa, cap)?.has_sink())
}

/// Whether `w` sends every vertex of the pair graph to one vertex.
pub fn is_synchronizing_pair_word(dfa: &Dfa, w: &Word) -> bool {
    let n = dfa.num_states();
    let mut target = None;
    for p in 0..n {
        let pw = dfa.apply(p, w);
        for q in 0..n {
            let image = (pw, dfa.apply(q, w));
            match target {
                None => target = Some(image),
                Some(t) if t != image => return false,
                Some(_) => {}
            }
        }
    }
    true
}

/// Shortest (then lexicographically least) word `w` with `pw == qw`.
pub fn merge_word(dfa: &Dfa, p: State, q: State) -> Option<Word> {
    if p == q {
        return Some(Word::empty());
    }
    let n = dfa.num_states();
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; n * n];
    let start = p * n + q;
    let mut visited = vec![false; n * n];
    visited[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let (x, y) = (v / n, v % n);
        for a in dfa.letters() {
            let (xa, ya) = (dfa.step(x, a), dfa.step(y, a));
            let u = xa * n + ya;
            if visited[u] {
                continue;
            }
            visited[u] = true;
            parent[u] = Some((v, a));
            if xa == ya {
                let mut letters = Vec::new();
                let mut cur = u;
                while let Some((prev, a)) = parent[cur] {
                    letters.push(a);
                    cur = prev;
                }
                letters.reverse();
                return Some(Word::from(letters));
            }
            queue.push_back(u);
        }
    }
    None
}

/// An off-diagonal strongly connected component `M` of the pair graph such
/// that every letter either collapses a pair of `M` or keeps it inside `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostMinimalScc {
    pairs: Vec<(State, State)>,
    support: StateSet,
}

impl AlmostMinimalScc {
    /// Wraps a pair set without checking it. Meant for tests and for callers
    /// that validated the set themselves.
    pub fn from_pairs_unchecked(mut pairs: Vec<(State, State)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let support = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
        Self { pairs, support }
    }

    /// Pairs in increasing vertex order.
    pub fn pairs(&self) -> &[(State, State)] {
        &self.pairs
    }

    pub fn contains(&self, p: State, q: State) -> bool {
        self.pairs.binary_search(&(p, q)).is_ok()
    }

    /// States that occur as a component of some pair.
    pub fn support(&self) -> &StateSet {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether every non-collapsing transition of a pair stays in the set.
    pub fn is_closed_in(&self, dfa: &Dfa) -> bool {
        self.pairs.iter().all(|&(p, q)| {
            dfa.letters().all(|a| {
                let (pa, qa) = (dfa.step(p, a), dfa.step(q, a));
                pa == qa || self.contains(pa, qa)
            })
        })
    }
}

/// The almost minimal component with the smallest vertex id, or `None` when
/// the automaton has a single state.
pub fn find_almost_minimal_scc(
    dfa: &Dfa,
    cap: usize,
) -> Result<Option<AlmostMinimalScc>, PairGraphError> {
    let graph = build_pair_graph(dfa, cap)?;
    let cond = graph.condensation();
    Ok(almost_minimal_in(&graph, &cond))
}

pub(crate) fn almost_minimal_in(graph: &PairGraph<'_>, cond: &Condensation) -> Option<AlmostMinimalScc> {
    let dfa = graph.dfa();
    (0..cond.len())
        .find(|&c| {
            let members = cond.component(c);
            !graph.is_diagonal(members[0])
                && members.iter().all(|&v| {
                    dfa.letters().all(|a| {
                        let u = graph.successor(v, a);
                        graph.is_diagonal(u) || cond.component_of(u) == c
                    })
                })
        })
        .map(|c| {
            AlmostMinimalScc::from_pairs_unchecked(
                cond.component(c).iter().map(|&v| graph.pair(v)).collect(),
            )
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, identity_only, swap, trivial};
    use crate::generate::cerny;

    #[test]
    fn a1_pair_graph() {
        let d = a1();
        let g = build_pair_graph(&d, 100).unwrap();
        assert_eq!(g.num_vertices(), 9);
        assert_eq!(g.pair(g.successor(g.vertex(0, 1), 1)), (1, 2));
        for q in d.states() {
            for a in d.letters() {
                assert!(g.is_diagonal(g.successor(g.vertex(q, q), a)));
            }
        }
    }

    #[test]
    fn pair_cap() {
        assert_eq!(
            build_pair_graph(&a1(), 8).unwrap_err(),
            PairGraphError::CapExceeded { vertices: 9, cap: 8 }
        );
    }

    #[test]
    fn a1_components() {
        let d = a1();
        let g = build_pair_graph(&d, 100).unwrap();
        let c = g.condensation();
        let m = c.component_of(g.vertex(0, 1));
        assert_eq!(c.component(m), &[g.vertex(0, 1), g.vertex(1, 2)]);
        let diag = c.component_of(0);
        assert_eq!(c.component(diag), &[0, 4, 8]);
    }

    #[test]
    fn trivial_pair_graph() {
        let d = trivial();
        let g = build_pair_graph(&d, 100).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.condensation().len(), 1);
    }

    #[test]
    fn pair_sinks() {
        assert!(has_pair_sink(&a1(), 100).unwrap());
        assert!(!has_pair_sink(&identity_only(2, 1), 100).unwrap());
        assert!(has_pair_sink(&cerny(4), 100).unwrap());
        assert!(!has_pair_sink(&swap(), 100).unwrap());
    }

    #[test]
    fn merge_words() {
        let d = a1();
        assert_eq!(merge_word(&d, 0, 1), Some(Word::from(vec![0])));
        assert_eq!(merge_word(&d, 2, 2), Some(Word::empty()));
        assert_eq!(merge_word(&identity_only(2, 1), 0, 1), None);
        // 0 and 2 need two letters; "aa" is the least of the candidates
        assert_eq!(merge_word(&d, 0, 2), Some(Word::from(vec![0, 0])));
    }

    #[test]
    fn almost_minimal_components() {
        let m = find_almost_minimal_scc(&a1(), 100).unwrap().unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (1, 2)]);
        assert_eq!(m.support(), &StateSet::full(3));
        assert!(m.is_closed_in(&a1()));

        let m = find_almost_minimal_scc(&swap(), 100).unwrap().unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (1, 0)]);

        assert_eq!(find_almost_minimal_scc(&trivial(), 100).unwrap(), None);
    }

    #[test]
    fn pair_word_collapse() {
        let d = a1();
        assert!(is_synchronizing_pair_word(&d, &Word::from(vec![0, 0])));
        assert!(!is_synchronizing_pair_word(&d, &Word::from(vec![0])));
    }
}
