//! Evolutionary melody generation toolkit.
//!
//! The toolkit composes melodies in ABC notation through a two-stage pipeline:
//!
//! 1. An initial genetic algorithm evolves random note sequences toward each
//!    tune of a reference corpus, and its snapshots form a bad-to-good spectrum
//!    of melodies labeled by n-gram similarity (normalized to 0..100).
//! 2. A bidirectional LSTM regression network trains on that labeled dataset
//!    to score arbitrary melodies.
//! 3. A main genetic algorithm then maximizes the learned score plus a
//!    rhythm-correctness term to generate new tunes.
//!
//! Modules map onto the stages: [`notation`] parses and serializes ABC text,
//! [`chromosome`] holds the 4-row gene matrix and its corpus statistics,
//! [`rhythm`] counts meter violations, [`similarity`] measures n-gram overlap,
//! [`evolution`] is the shared GA engine, [`neural`] is the from-scratch
//! bi-LSTM, and [`pipeline`] wires everything into dataset assembly, training
//! and generation.

pub mod chromosome;
pub mod evolution;
pub mod neural;
pub mod notation;
pub mod pipeline;
pub mod rational;
pub mod rhythm;
pub mod seed;
pub mod similarity;

pub use chromosome::{Chromosome, GeneDistributions, Note};
pub use notation::{Tune, TuneHeader};
pub use rational::Rational;
