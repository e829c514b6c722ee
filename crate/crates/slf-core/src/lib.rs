//! Core library for model checking SL[F] — strategy logic with functions
//! over [0,1] — on weighted concurrent game structures.
//!
//! Everything in this crate is pure computation over exact rationals: formula
//! ASTs and parsing, weighted game/Kripke structures, a brute-force reference
//! semantics, word and tree automata, parity games, and the two decision
//! pipelines (SL[1G] via parity games, full SL[F] via the QCTL reduction).
//! IO, file formats and the CLI live in the companion `slf-cli` crate.
//!
//! The crate is `no_std` (with `alloc`); all collections are ordered so that
//! every computation is deterministic.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod rat;
pub mod func;
pub mod formula;
pub mod predicate;
pub mod parse;
pub mod concepts;
pub mod game;
pub mod kripke;
pub mod values;
pub mod lasso;
pub mod oracle;
pub mod word;
pub mod safra;
pub mod parity;
pub mod translate;
pub mod tree;
pub mod nondet;
pub mod bqctl;
pub mod sl1g;
pub mod limits;
pub(crate) mod graph;

pub use rat::Rat;
pub use func::{FuncKind, FuncSpec, Registry};
pub use predicate::Predicate;
