//! Synchronizing words for deterministic finite automata.
//!
//! The crate decides whether a complete DFA is synchronizable and whether its
//! transition semigroup is aperiodic, and for aperiodic automata with a sink
//! builds a synchronizing word of length at most `n(n-1)/2`. A brute-force
//! subset search provides exact shortest words for cross-checking.
//!
//! ```
//! use syncword::{fixtures, synth};
//!
//! let dfa = fixtures::a1();
//! let cert = synth::synchronize_aperiodic(&dfa, &synth::SynthOptions::default()).unwrap();
//! assert!(cert.verified);
//! assert_eq!(cert.word.render(2), "aa");
//! ```

pub mod automaton;
pub mod congruence;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod monoid;
pub mod oracle;
pub mod pair_graph;
pub mod scc;
pub mod synth;

pub use automaton::{Dfa, DfaError, Letter, State, StateSet, Transformation, Word};
pub use format::{parse_dfa, serialize_dfa, ParseError};
