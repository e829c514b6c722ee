//! Resource caps for the exponential constructions.
//!
//! Every automaton construction and enumeration checks against these bounds
//! and reports a structured error instead of diverging.

use alloc::string::String;

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Cap on states of any single word or tree automaton.
    pub max_automaton_states: usize,
    /// Cap on alphabet letters materialized for one automaton.
    pub max_letters: usize,
    /// Cap on parity-game vertices.
    pub max_game_vertices: usize,
    /// Cap on enumerated strategy profiles / relabelings in the oracle.
    pub max_enumeration: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_automaton_states: 200_000,
            max_letters: 65_536,
            max_game_vertices: 2_000_000,
            max_enumeration: 10_000_000,
        }
    }
}

impl Limits {
    /// Scales every cap by `factor` (used by the CLI override).
    pub fn scaled(factor: u64) -> Limits {
        let d = Limits::default();
        Limits {
            max_automaton_states: (d.max_automaton_states as u64).saturating_mul(factor) as usize,
            max_letters: (d.max_letters as u64).saturating_mul(factor) as usize,
            max_game_vertices: (d.max_game_vertices as u64).saturating_mul(factor) as usize,
            max_enumeration: d.max_enumeration.saturating_mul(factor),
        }
    }
}

/// A construction blew through a cap; `site` names the construction and, for
/// the tree pipeline, the offending nesting level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapExceeded {
    pub site: String,
    pub limit: u64,
}

impl core::fmt::Display for CapExceeded {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "resource cap exceeded in {} (limit {})", self.site, self.limit)
    }
}
