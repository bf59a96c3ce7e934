//! Transition monoid enumeration, aperiodicity and sinks.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::automaton::{Dfa, State, StateSet, Transformation, Word};
use crate::scc::Condensation;

pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("transition monoid exceeds the cap of {cap} elements (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
}

/// The transition semigroup: every transformation induced by a nonempty word.
///
/// Elements are stored in shortlex order of their witness words, so the
/// witness of each element is its shortest, lexicographically least word.
#[derive(Debug, Clone)]
pub struct Monoid {
    elements: Vec<Transformation>,
    witnesses: Vec<Word>,
    index: HashMap<Transformation, usize>,
    generators: Vec<Transformation>,
}

impl Monoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn witness(&self, i: usize) -> &Word {
        &self.witnesses[i]
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.index.contains_key(t)
    }

    pub fn position(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Transformation, &Word)> {
        self.elements.iter().zip(&self.witnesses)
    }
}

/// Breadth-first closure of the letter transformations under composition.
///
/// Fails once more than `cap` distinct elements have been found.
pub fn transition_monoid(dfa: &Dfa, cap: usize) -> Result<Monoid, MonoidError> {
    let generators: Vec<Transformation> =
        dfa.letters().map(|a| dfa.letter_transformation(a)).collect();
    let mut elements = Vec::new();
    let mut witnesses = Vec::new();
    let mut index = HashMap::new();
    let mut queue = VecDeque::new();

    let mut insert = |t: Transformation,
                      w: Word,
                      elements: &mut Vec<Transformation>,
                      witnesses: &mut Vec<Word>,
                      queue: &mut VecDeque<usize>|
     -> Result<(), MonoidError> {
        if index.contains_key(&t) {
            return Ok(());
        }
        if elements.len() == cap {
            return Err(MonoidError::CapExceeded {
                cap,
                reached: cap + 1,
            });
        }
        index.insert(t.clone(), elements.len());
        queue.push_back(elements.len());
        elements.push(t);
        witnesses.push(w);
        Ok(())
    };

    for (a, g) in generators.iter().enumerate() {
        insert(
            g.clone(),
            Word::from(vec![a]),
            &mut elements,
            &mut witnesses,
            &mut queue,
        )?;
    }
    while let Some(i) = queue.pop_front() {
        for a in dfa.letters() {
            let t = elements[i].then_row(dfa.row(a));
            let mut w = witnesses[i].clone();
            w.push(a);
            insert(t, w, &mut elements, &mut witnesses, &mut queue)?;
        }
    }
    Ok(Monoid {
        elements,
        witnesses,
        index,
        generators,
    })
}

/// Index and period of the cyclic semigroup generated by a transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexPeriod {
    /// Smallest `i >= 1` such that `t^i` lies on the cycle of powers.
    pub index: usize,
    /// Smallest `p >= 1` with `t^(index + p) == t^index`.
    pub period: usize,
}

pub fn index_period(t: &Transformation) -> IndexPeriod {
    let mut seen: HashMap<Transformation, usize> = HashMap::new();
    let mut power = t.clone();
    let mut exponent = 1;
    loop {
        if let Some(&first) = seen.get(&power) {
            return IndexPeriod {
                index: first,
                period: exponent - first,
            };
        }
        seen.insert(power.clone(), exponent);
        power = power.then(t);
        exponent += 1;
    }
}

/// An element of the transition semigroup generating a nontrivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicWitness {
    pub word: Word,
    pub element: Transformation,
    pub index_period: IndexPeriod,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aperiodicity {
    pub monoid_size: usize,
    /// `None` when the semigroup is aperiodic.
    pub witness: Option<PeriodicWitness>,
}

impl Aperiodicity {
    pub fn is_aperiodic(&self) -> bool {
        self.witness.is_none()
    }
}

/// Decides aperiodicity by checking that every element has period 1. The
/// witness, if any, is the first periodic element in shortlex order.
pub fn is_aperiodic(dfa: &Dfa, cap: usize) -> Result<Aperiodicity, MonoidError> {
    let monoid = transition_monoid(dfa, cap)?;
    let witness = monoid.iter().find_map(|(t, w)| {
        let ip = index_period(t);
        (ip.period > 1).then(|| PeriodicWitness {
            word: w.clone(),
            element: t.clone(),
            index_period: ip,
        })
    });
    Ok(Aperiodicity {
        monoid_size: monoid.len(),
        witness,
    })
}

/// Reachability condensation of the transition graph.
pub fn state_condensation(dfa: &Dfa) -> Condensation {
    Condensation::new(dfa.num_states(), |q, out| {
        out.extend(dfa.letters().map(|a| dfa.step(q, a)))
    })
}

/// States reachable from every state. Empty when the reachability graph has
/// more than one terminal component.
pub fn sinks(dfa: &Dfa) -> StateSet {
    sinks_of(&state_condensation(dfa))
}

pub(crate) fn sinks_of(cond: &Condensation) -> StateSet {
    let mut terminal = cond.terminal_components();
    match (terminal.next(), terminal.next()) {
        (Some(c), None) => cond.component(c).iter().copied().collect(),
        _ => StateSet::default(),
    }
}

pub fn is_strongly_connected(dfa: &Dfa) -> bool {
    state_condensation(dfa).len() == 1
}

/// Every state of `dfa` under the same relabeling `perm` (a bijection on
/// states).
pub fn relabel(dfa: &Dfa, perm: &[State]) -> Dfa {
    let n = dfa.num_states();
    let mut rows = vec![vec![0; n]; dfa.num_letters()];
    for a in dfa.letters() {
        for q in dfa.states() {
            rows[a][perm[q]] = perm[dfa.step(q, a)];
        }
    }
    Dfa::from_rows(n, rows).expect("relabeling preserves validity")
}
