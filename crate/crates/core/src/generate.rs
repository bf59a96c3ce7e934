//! Seeded automaton generators.
//!
//! All randomness comes from SplitMix64 seeded with `GenSpec::seed`. A draw in
//! `[0, m)` takes one 64-bit output `x` and returns `(x * m) >> 64`
//! (128-bit product). Tables are filled letter-major: all states of letter 0,
//! then letter 1, and so on, one draw per entry.
//!
//! Monotone letters use `n` draws each: a partial Fisher-Yates shuffle picks an
//! `n`-subset `c_0 < ... < c_{n-1}` of `[0, 2n-1)` (draw `j` selects position
//! `j + draw(2n-1-j)`), and the letter maps `i` to `c_i - i`. This is the
//! stars-and-bars bijection, so every nondecreasing map is equally likely.

use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::automaton::{Dfa, State};
use crate::monoid::{is_aperiodic, DEFAULT_MONOID_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cerny,
    Random,
    Monotone,
    AperiodicRejection,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Cerny => "cerny",
            Family::Random => "random",
            Family::Monotone => "monotone",
            Family::AperiodicRejection => "aperiodic_rejection",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cerny" => Ok(Family::Cerny),
            "random" => Ok(Family::Random),
            "monotone" => Ok(Family::Monotone),
            "aperiodic_rejection" | "aperiodic" => Ok(Family::AperiodicRejection),
            other => Err(format!(
                "unknown family {other:?} (expected cerny, random, monotone or aperiodic_rejection)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub family: Family,
    pub max_tries: usize,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, k: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            seed,
            family,
            max_tries: 1000,
        }
    }
}

struct Draws(SplitMix64);

impl Draws {
    fn new(seed: u64) -> Self {
        Draws(SplitMix64::seed_from_u64(seed))
    }

    fn below(&mut self, m: usize) -> usize {
        ((self.0.next_u64() as u128 * m as u128) >> 64) as usize
    }

    fn table(&mut self, n: usize, k: usize) -> Vec<Vec<State>> {
        (0..k).map(|_| (0..n).map(|_| self.below(n)).collect()).collect()
    }

    fn monotone_row(&mut self, n: usize) -> Vec<State> {
        let mut pool: Vec<usize> = (0..2 * n - 1).collect();
        for j in 0..n {
            let r = j + self.below(2 * n - 1 - j);
            pool.swap(j, r);
        }
        let mut chosen = pool[..n].to_vec();
        chosen.sort_unstable();
        chosen.iter().enumerate().map(|(i, &c)| c - i).collect()
    }
}

/// Černý automaton: `a` is the cyclic shift `q -> q+1 mod n`, `b` sends 0 to 1
/// and fixes every other state.
///
/// # Panics
/// If `n < 2`.
pub fn cerny(n: usize) -> Dfa {
    assert!(n >= 2, "Černý automata need at least two states");
    let a = (0..n).map(|q| (q + 1) % n).collect();
    let b = (0..n).map(|q| if q == 0 { 1 } else { q }).collect();
    Dfa::from_rows(n, vec![a, b]).unwrap()
}

/// Every entry uniform in `[0, n)`.
pub fn random_dfa(spec: &GenSpec) -> Dfa {
    let mut draws = Draws::new(spec.seed);
    Dfa::from_rows(spec.n, draws.table(spec.n, spec.k)).expect("generated table is valid")
}

/// Every letter a uniformly chosen nondecreasing map on `0 < 1 < ... < n-1`.
pub fn random_monotone_dfa(spec: &GenSpec) -> Dfa {
    let mut draws = Draws::new(spec.seed);
    let rows = (0..spec.k).map(|_| draws.monotone_row(spec.n)).collect();
    Dfa::from_rows(spec.n, rows).expect("generated table is valid")
}

/// Random tables from one SplitMix64 stream until one is aperiodic, at most
/// `max_tries` of them. Tables whose monoid exceeds the default cap count as
/// rejected.
pub fn random_aperiodic_dfa(spec: &GenSpec) -> Option<Dfa> {
    let mut draws = Draws::new(spec.seed);
    for _ in 0..spec.max_tries {
        let dfa = Dfa::from_rows(spec.n, draws.table(spec.n, spec.k)).expect("generated table is valid");
        if matches!(is_aperiodic(&dfa, DEFAULT_MONOID_CAP), Ok(a) if a.is_aperiodic()) {
            return Some(dfa);
        }
    }
    None
}

/// Dispatches on `spec.family`. The Černý family ignores `k` and `seed` and
/// yields `None` for `n < 2`.
pub fn generate(spec: &GenSpec) -> Option<Dfa> {
    match spec.family {
        Family::Cerny => (spec.n >= 2).then(|| cerny(spec.n)),
        Family::Random => Some(random_dfa(spec)),
        Family::Monotone => Some(random_monotone_dfa(spec)),
        Family::AperiodicRejection => random_aperiodic_dfa(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_dfa;
    use crate::monoid::index_period;

    #[test]
    fn splitmix_reference_stream() {
        let mut d = Draws::new(0);
        assert_eq!(d.0.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(d.0.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn cerny_table() {
        let c = cerny(4);
        assert_eq!(c.row(0), &[1, 2, 3, 0]);
        assert_eq!(c.row(1), &[1, 1, 2, 3]);
        assert_eq!(index_period(&c.letter_transformation(0)).period, 4);
        assert_eq!(serialize_dfa(&c), "dfa v1\nstates 4\nletters 2\ntable\n1 2 3 0\n1 1 2 3\n");
    }

    #[test]
    fn seeded_determinism() {
        for family in [Family::Random, Family::Monotone, Family::AperiodicRejection] {
            let spec = GenSpec::new(family, 6, 3, 42);
            assert_eq!(
                generate(&spec).map(|d| serialize_dfa(&d)),
                generate(&spec).map(|d| serialize_dfa(&d))
            );
        }
        let a = random_dfa(&GenSpec::new(Family::Random, 6, 3, 1));
        let b = random_dfa(&GenSpec::new(Family::Random, 6, 3, 2));
        assert_ne!(a, b);
    }

    #[test]
    fn one_state_random() {
        let d = random_dfa(&GenSpec::new(Family::Random, 1, 3, 9));
        assert_eq!(d, Dfa::from_rows(1, vec![vec![0]; 3]).unwrap());
    }

    #[test]
    fn monotone_rows_are_nondecreasing() {
        for seed in 0..200 {
            let d = random_monotone_dfa(&GenSpec::new(Family::Monotone, 7, 3, seed));
            for row in d.rows() {
                assert!(row.windows(2).all(|w| w[0] <= w[1]), "{row:?}");
            }
        }
    }

    #[test]
    fn monotone_is_uniform_on_small_chain() {
        // nondecreasing maps on 3 points: C(5,3) = 10 of them
        let mut counts = std::collections::HashMap::new();
        let trials = 20_000;
        for seed in 0..trials {
            let d = random_monotone_dfa(&GenSpec::new(Family::Monotone, 3, 1, seed));
            *counts.entry(d.row(0).to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 10);
        for (row, c) in counts {
            let expected = trials as f64 / 10.0;
            assert!((c as f64 - expected).abs() < 0.1 * expected, "{row:?}: {c}");
        }
    }

    #[test]
    fn rejection_sampling() {
        // find a seed whose first random table is not aperiodic
        let seed = (0..)
            .find(|&s| {
                let d = random_dfa(&GenSpec::new(Family::Random, 4, 2, s));
                !is_aperiodic(&d, DEFAULT_MONOID_CAP).unwrap().is_aperiodic()
            })
            .unwrap();
        let mut spec = GenSpec::new(Family::AperiodicRejection, 4, 2, seed);
        spec.max_tries = 1;
        assert_eq!(random_aperiodic_dfa(&spec), None);
        spec.max_tries = 500;
        let d = random_aperiodic_dfa(&spec).unwrap();
        assert!(is_aperiodic(&d, DEFAULT_MONOID_CAP).unwrap().is_aperiodic());
    }

    #[test]
    fn family_names() {
        for f in [Family::Cerny, Family::Random, Family::Monotone, Family::AperiodicRejection] {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("dense".parse::<Family>().is_err());
    }
}
