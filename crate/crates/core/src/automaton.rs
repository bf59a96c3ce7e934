//! Complete deterministic automata, words, transformations and state sets.
//!
//! States and letters are dense 0-based indices. Words act on the right and
//! compose left to right, so `q.apply(uv) == q.apply(u).apply(v)`.

use std::fmt;

use thiserror::Error;

/// Index of a state.
pub type State = usize;

/// Index of a letter of the input alphabet.
pub type Letter = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaError {
    #[error("an automaton needs at least one state and one letter (got {states} states, {letters} letters)")]
    Empty { states: usize, letters: usize },
    #[error("transition table has {rows} rows of lengths {lengths:?}, expected {letters} rows of {states} entries")]
    Shape {
        states: usize,
        letters: usize,
        rows: usize,
        lengths: Vec<usize>,
    },
    #[error("state {state} is out of range [0,{states})")]
    StateOutOfRange { state: State, states: usize },
    #[error("letter {letter} is out of range [0,{letters})")]
    LetterOutOfRange { letter: Letter, letters: usize },
    #[error("state set must be nonempty")]
    EmptyStateSet,
    #[error("cannot parse word {0:?}")]
    BadWord(String),
}

/// A complete DFA given by its transition table.
///
/// The table is stored letter-major: entry `delta[a * n + q]` is the image of
/// state `q` under letter `a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    n: usize,
    k: usize,
    delta: Vec<State>,
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dfa")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("rows", &self.delta.chunks(self.n).collect::<Vec<_>>())
            .finish()
    }
}

impl Dfa {
    /// Builds an automaton from one row per letter.
    pub fn from_rows(n: usize, rows: Vec<Vec<State>>) -> Result<Self, DfaError> {
        let k = rows.len();
        if n == 0 || k == 0 {
            return Err(DfaError::Empty {
                states: n,
                letters: k,
            });
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(DfaError::Shape {
                states: n,
                letters: k,
                rows: k,
                lengths: rows.iter().map(Vec::len).collect(),
            });
        }
        let delta: Vec<State> = rows.into_iter().flatten().collect();
        if let Some(&state) = delta.iter().find(|&&t| t >= n) {
            return Err(DfaError::StateOutOfRange { state, states: n });
        }
        Ok(Self { n, k, delta })
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_letters(&self) -> usize {
        self.k
    }

    /// Image of `q` under the single letter `a`.
    #[inline]
    pub fn step(&self, q: State, a: Letter) -> State {
        self.delta[a * self.n + q]
    }

    /// The row of letter `a`, i.e. the map it induces on states.
    pub fn row(&self, a: Letter) -> &[State] {
        &self.delta[a * self.n..(a + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[State]> + '_ {
        self.delta.chunks(self.n)
    }

    pub fn states(&self) -> std::ops::Range<State> {
        0..self.n
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.k
    }

    pub fn apply(&self, q: State, w: &Word) -> State {
        w.iter().fold(q, |q, a| self.step(q, a))
    }

    /// The image set `Pw`. Rejects an empty `P`.
    pub fn apply_set(&self, p: &StateSet, w: &Word) -> Result<StateSet, DfaError> {
        if p.is_empty() {
            return Err(DfaError::EmptyStateSet);
        }
        Ok(p.iter().map(|q| self.apply(q, w)).collect())
    }

    /// Whether `w` maps every state to one common state.
    pub fn is_synchronizing_word(&self, w: &Word) -> bool {
        let target = self.apply(0, w);
        self.states().all(|q| self.apply(q, w) == target)
    }

    pub fn transformation_of_word(&self, w: &Word) -> Transformation {
        Transformation(self.states().map(|q| self.apply(q, w)).collect())
    }

    pub fn letter_transformation(&self, a: Letter) -> Transformation {
        Transformation(self.row(a).to_vec())
    }

    pub fn check_word(&self, w: &Word) -> Result<(), DfaError> {
        match w.iter().find(|&a| a >= self.k) {
            Some(letter) => Err(DfaError::LetterOutOfRange {
                letter,
                letters: self.k,
            }),
            None => Ok(()),
        }
    }

    /// Restriction to a set of states closed under every letter.
    ///
    /// Returns the sub-automaton (states renumbered in increasing order) and
    /// the map from new indices back to the original states, or `None` if
    /// `subset` is empty or not closed.
    pub fn restrict(&self, subset: &StateSet) -> Option<(Dfa, Vec<State>)> {
        if subset.is_empty() {
            return None;
        }
        let back: Vec<State> = subset.iter().collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &q) in back.iter().enumerate() {
            index[q] = i;
        }
        let mut rows = Vec::with_capacity(self.k);
        for a in self.letters() {
            let mut row = Vec::with_capacity(back.len());
            for &q in &back {
                let t = index[self.step(q, a)];
                if t == usize::MAX {
                    return None;
                }
                row.push(t);
            }
            rows.push(row);
        }
        let sub = Dfa::from_rows(back.len(), rows).expect("restriction is a valid table");
        Some((sub, back))
    }
}

/// A finite word over letter indices. The empty word acts as the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    /// Renders the word for an alphabet of `k` letters: `a`–`z` when
    /// `k <= 26`, otherwise space-separated `l<index>` tokens. The empty word
    /// renders as the empty string.
    pub fn render(&self, k: usize) -> String {
        if k <= 26 {
            self.0.iter().map(|&a| (b'a' + a as u8) as char).collect()
        } else {
            self.0
                .iter()
                .map(|a| format!("l{a}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Parses the rendering produced by [`Word::render`]. `ε` and the empty
    /// string both denote the empty word. The `l<index>` form is accepted for
    /// every alphabet size.
    pub fn parse(text: &str, k: usize) -> Result<Word, DfaError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let bad = || DfaError::BadWord(text.to_string());
        let letters: Vec<Letter> = if text.starts_with('l') && text[1..].starts_with(|c: char| c.is_ascii_digit()) {
            text.split_whitespace()
                .map(|tok| tok.strip_prefix('l').and_then(|d| d.parse().ok()).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| match c {
                    'a'..='z' => Ok(c as usize - 'a' as usize),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()?
        };
        if let Some(&letter) = letters.iter().find(|&&a| a >= k) {
            return Err(DfaError::LetterOutOfRange { letter, letters: k });
        }
        Ok(Word(letters))
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a < 26) {
            write!(f, "Word({:?})", self.render(26))
        } else {
            write!(f, "Word({:?})", self.0)
        }
    }
}

/// A total map on `0..n`; an element of the transition semigroup.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Transformation(Vec<State>);

impl Transformation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn new(image: Vec<State>) -> Result<Self, DfaError> {
        let n = image.len();
        match image.iter().find(|&&q| q >= n) {
            Some(&state) => Err(DfaError::StateOutOfRange { state, states: n }),
            None => Ok(Self(image)),
        }
    }

    pub fn image(&self) -> &[State] {
        &self.0
    }

    pub fn apply(&self, q: State) -> State {
        self.0[q]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Transformation(self.0.iter().map(|&q| other.0[q]).collect())
    }

    /// `self` followed by the letter row `row`.
    pub fn then_row(&self, row: &[State]) -> Transformation {
        Transformation(self.0.iter().map(|&q| row[q]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &q)| i == q)
    }
}

/// A set of states kept sorted and deduplicated.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(Vec<State>);

impl StateSet {
    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn singleton(q: State) -> Self {
        Self(vec![q])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: State) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = State> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[State] {
        &self.0
    }

    pub fn first(&self) -> Option<State> {
        self.0.first().copied()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.iter().all(|q| other.contains(q))
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.iter().filter(|&q| other.contains(q)).collect()
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.iter().filter(|&q| !other.contains(q)).collect()
    }
}

impl FromIterator<State> for StateSet {
    fn from_iter<I: IntoIterator<Item = State>>(iter: I) -> Self {
        let mut v: Vec<State> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        StateSet(v)
    }
}

impl From<Vec<State>> for StateSet {
    fn from(v: Vec<State>) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for q in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{q}")?;
            first = false;
        }
        Ok(())
    }
}
