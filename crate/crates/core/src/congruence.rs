//! The order and congruence induced by an almost minimal component, stability
//! checks, cycle detection and quotient automata.

use thiserror::Error;

use crate::automaton::{Dfa, Letter, State, StateSet};
use crate::pair_graph::AlmostMinimalScc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationKind {
    StrictOrder,
    QuasiOrder,
    Equivalence,
    Plain,
}

/// A binary relation on states stored as a dense boolean matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct StateRelation {
    n: usize,
    bits: Vec<bool>,
    kind: RelationKind,
}

impl std::fmt::Debug for StateRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StateRelation")
            .field("kind", &self.kind)
            .field("pairs", &self.pairs().collect::<Vec<_>>())
            .finish()
    }
}

impl StateRelation {
    pub fn empty(n: usize, kind: RelationKind) -> Self {
        Self {
            n,
            bits: vec![false; n * n],
            kind,
        }
    }

    pub fn from_pairs(n: usize, kind: RelationKind, pairs: &[(State, State)]) -> Self {
        let mut rel = Self::empty(n, kind);
        for &(p, q) in pairs {
            rel.insert(p, q);
        }
        rel
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn contains(&self, p: State, q: State) -> bool {
        self.bits[p * self.n + q]
    }

    pub fn insert(&mut self, p: State, q: State) {
        self.bits[p * self.n + q] = true;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (State, State)> + '_ {
        let n = self.n;
        (0..n * n).filter(|&i| self.bits[i]).map(move |i| (i / n, i % n))
    }

    /// `p` is strictly above `q`: related and distinct.
    pub fn strictly_above(&self, p: State, q: State) -> bool {
        p != q && self.contains(p, q)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(p, q)| p == q || !self.contains(q, p))
    }

    /// The relation with every pair reversed.
    pub fn reversed(&self) -> Self {
        let mut rev = Self::empty(self.n, self.kind);
        for (p, q) in self.pairs() {
            rev.insert(q, p);
        }
        rev
    }

    /// Elements of `set` with nothing in `set` strictly above them.
    pub fn maximal_in(&self, set: &StateSet) -> StateSet {
        set.iter()
            .filter(|&q| !set.iter().any(|p| self.strictly_above(p, q)))
            .collect()
    }

    /// Elements of `set` strictly above nothing in `set`.
    pub fn minimal_in(&self, set: &StateSet) -> StateSet {
        set.iter()
            .filter(|&q| !set.iter().any(|p| self.strictly_above(q, p)))
            .collect()
    }

    fn close_transitively(&mut self) {
        let n = self.n;
        for m in 0..n {
            for p in 0..n {
                if !self.bits[p * n + m] {
                    continue;
                }
                for q in 0..n {
                    if self.bits[m * n + q] {
                        self.bits[p * n + q] = true;
                    }
                }
            }
        }
    }

    fn close_reflexively(&mut self) {
        for q in 0..self.n {
            self.insert(q, q);
        }
    }
}

/// The quasi-order "reachable by a chain of pairs of `M`", reflexively closed.
/// It is antisymmetric exactly when `M` has no cycle.
pub fn order_from_scc(dfa: &Dfa, m: &AlmostMinimalScc) -> StateRelation {
    let mut rel = StateRelation::from_pairs(dfa.num_states(), RelationKind::QuasiOrder, m.pairs());
    rel.close_transitively();
    rel.close_reflexively();
    rel
}

/// A partition of the states into blocks, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<StateSet>,
}

impl Partition {
    /// Partition from an arbitrary block label per state.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber = std::collections::HashMap::new();
        let mut blocks: Vec<Vec<State>> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for (q, &l) in labels.iter().enumerate() {
            let b = *renumber.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(q);
            block_of.push(b);
        }
        Self {
            block_of,
            blocks: blocks.into_iter().map(StateSet::from).collect(),
        }
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_states(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, q: State) -> usize {
        self.block_of[q]
    }

    pub fn block(&self, b: usize) -> &StateSet {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }

    pub fn to_relation(&self) -> StateRelation {
        let n = self.num_states();
        let mut rel = StateRelation::empty(n, RelationKind::Equivalence);
        for block in &self.blocks {
            for p in block.iter() {
                for q in block.iter() {
                    rel.insert(p, q);
                }
            }
        }
        rel
    }
}

/// The equivalence generated by the pairs of `M`.
pub fn congruence_from_scc(dfa: &Dfa, m: &AlmostMinimalScc) -> Partition {
    let n = dfa.num_states();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(p, q) in m.pairs() {
        let (a, b) = (find(&mut parent, p), find(&mut parent, q));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let labels: Vec<usize> = (0..n).map(|q| find(&mut parent, q)).collect();
    Partition::from_labels(&labels)
}

/// A related pair whose image under `letter` is not related.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityViolation {
    pub p: State,
    pub q: State,
    pub letter: Letter,
}

/// Checks `p ~ q => pa ~ qa` for every letter; reports the first failure in
/// order of `p`, then `q`, then letter.
pub fn check_stability(dfa: &Dfa, rel: &StateRelation) -> Result<(), StabilityViolation> {
    for (p, q) in rel.pairs() {
        for a in dfa.letters() {
            if !rel.contains(dfa.step(p, a), dfa.step(q, a)) {
                return Err(StabilityViolation { p, q, letter: a });
            }
        }
    }
    Ok(())
}

/// A closed walk `p_1, ..., p_m = p_1` along pairs of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TCycle {
    states: Vec<State>,
}

impl TCycle {
    /// The walk including the repeated first state at the end.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// Number of distinct states on the cycle.
    pub fn size(&self) -> usize {
        self.states.len() - 1
    }
}

/// Looks for a cycle in the graph whose edges are the pairs of `M`.
///
/// Depth-first search from the states of the support in increasing order,
/// trying successors in increasing order; the first back edge found closes
/// the reported cycle.
pub fn detect_t_cycle(dfa: &Dfa, m: &AlmostMinimalScc) -> Option<TCycle> {
    let n = dfa.num_states();
    let mut succ = vec![Vec::new(); n];
    for &(p, q) in m.pairs() {
        succ[p].push(q);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let mut color = vec![Color::White; n];
    for root in m.support().iter() {
        if color[root] != Color::White {
            continue;
        }
        let mut path = vec![root];
        let mut frames = vec![(root, 0usize)];
        color[root] = Color::Grey;
        while let Some(frame) = frames.last_mut() {
            let (v, i) = *frame;
            if let Some(&w) = succ[v].get(i) {
                frame.1 += 1;
                match color[w] {
                    Color::Grey => {
                        let start = path.iter().position(|&x| x == w).expect("grey is on path");
                        let mut states = path[start..].to_vec();
                        states.push(w);
                        return Some(TCycle { states });
                    }
                    Color::White => {
                        color[w] = Color::Grey;
                        path.push(w);
                        frames.push((w, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color[v] = Color::Black;
                path.pop();
                frames.pop();
            }
        }
    }
    None
}

impl std::fmt::Display for TCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.states.iter().map(|q| q.to_string()).collect();
        f.write_str(&parts.join(" -> "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("partition is not a congruence: states {p} and {q} share a block but letter {letter} sends them to blocks {block_p} and {block_q}")]
    NotCongruence {
        p: State,
        q: State,
        letter: Letter,
        block_p: usize,
        block_q: usize,
    },
    #[error("partition covers {found} states but the automaton has {expected}")]
    SizeMismatch { found: usize, expected: usize },
}

/// The quotient automaton on the blocks of `part`, together with the
/// projection from states to blocks.
pub fn quotient(dfa: &Dfa, part: &Partition) -> Result<(Dfa, Vec<usize>), QuotientError> {
    if part.num_states() != dfa.num_states() {
        return Err(QuotientError::SizeMismatch {
            found: part.num_states(),
            expected: dfa.num_states(),
        });
    }
    let mut rows = Vec::with_capacity(dfa.num_letters());
    for a in dfa.letters() {
        let mut row = Vec::with_capacity(part.num_blocks());
        for block in part.blocks() {
            let p = block.first().expect("blocks are nonempty");
            let target = part.block_of(dfa.step(p, a));
            for q in block.iter().skip(1) {
                let other = part.block_of(dfa.step(q, a));
                if other != target {
                    return Err(QuotientError::NotCongruence {
                        p,
                        q,
                        letter: a,
                        block_p: target,
                        block_q: other,
                    });
                }
            }
            row.push(target);
        }
        rows.push(row);
    }
    let projection = dfa.states().map(|q| part.block_of(q)).collect();
    Ok((
        Dfa::from_rows(part.num_blocks(), rows).expect("quotient table is valid"),
        projection,
    ))
}
