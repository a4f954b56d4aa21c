//! Automaton semigroups and automaton groups defined by Mealy machines.
//!
//! The crate is organised bottom-up:
//!
//! - [`words`]: alphabets, finite words and ultimately periodic words;
//! - [`machine`]: Mealy machines and their action on words;
//! - [`compose`]: cascade composition, trimming and relabeling;
//! - [`invert`]: invertibility, inverse machines and signed generator words;
//! - [`seqfn`]: sequential functions, quotients, synthesis and the regular tree;
//! - [`algebra`]: canonical elements, semigroup/group enumeration and Cayley tables;
//! - [`morphism`]: machine homomorphisms and simulations;
//! - [`laws`]: bounded checks of the structural laws on a given machine;
//! - [`catalog`]: small example machines used throughout the tests;
//! - [`format`](mod@format) and [`dot`]: the text file formats and Graphviz output.

pub mod algebra;
pub mod catalog;
pub mod compose;
pub mod dot;
pub mod format;
pub mod invert;
pub mod laws;
pub mod machine;
pub mod morphism;
pub mod seqfn;
pub mod words;

pub use machine::{InitialMachine, Machine, RawMachine, StateId};
pub use words::{Alphabet, Letter, UltimatelyPeriodicWord, Word};
