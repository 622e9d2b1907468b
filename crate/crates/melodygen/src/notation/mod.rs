//! ABC notation parsing and serialization.
//!
//! Covers the subset of ABC used by the melody code table: X/T/M/L/K header
//! lines, notes with one optional accidental mark, single-direction octave
//! marks, rational duration text, rests and bar lines. Pitches are read
//! literally per the code table — there is no key-signature accidental
//! propagation and no within-measure accidental persistence. Octaves are
//! stored as absolute codes 1..=7 with plain `A` at 4.
//!
//! Ties, slurs, chords, repeats and grace notes are outside the encoding and
//! rejected with an error naming the construct.

mod lexer;
mod parser;
mod serializer;

pub use lexer::{tokenize_body_line, NoteToken, Token, TokenKind};
pub use parser::{
    parse_corpus, parse_corpus_verbose, parse_tune_block, split_tune_blocks, ParseWarning,
    TuneBlock,
};
pub use serializer::{serialize_corpus, serialize_tune};

use thiserror::Error;

use crate::chromosome::{Chromosome, ChromosomeError};
use crate::rational::{rational, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("line {line}: malformed header line: {text}")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}, column {col}: unrecognized character {ch:?}")]
    UnrecognizedChar { line: usize, col: usize, ch: char },
    #[error("line {line}, column {col}: octave {octave} outside 1..=7")]
    OctaveOutOfRange { line: usize, col: usize, octave: i32 },
    #[error("line {line}, column {col}: octave marks must all be commas or all apostrophes")]
    MixedOctaveMarks { line: usize, col: usize },
    #[error("line {line}, column {col}: duration {text:?} is not a positive rational")]
    BadDuration { line: usize, col: usize, text: String },
    #[error("line {line}, column {col}: unsupported construct: {construct}")]
    UnsupportedConstruct {
        line: usize,
        col: usize,
        construct: &'static str,
    },
    #[error("line {line}: tune body before the first X header line")]
    BodyBeforeFirstTune { line: usize },
    #[error("tune starting at line {start_line} has no notes")]
    EmptyTune { start_line: usize },
    #[error("tune starting at line {start_line}: {source}")]
    InvalidNote {
        start_line: usize,
        source: ChromosomeError,
    },
}

/// Tune metadata from the X/T/M/L/K header lines.
///
/// `meter` and `unit_length` are fractions of a whole note, so `M:4/4`
/// stores the rational 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuneHeader {
    pub index: u32,
    pub title: String,
    pub meter: Rational,
    pub unit_length: Rational,
    pub key: String,
}

impl TuneHeader {
    /// Measure length expressed in unit-length multiples.
    pub fn measure_units(&self) -> Rational {
        self.meter / self.unit_length
    }
}

impl Default for TuneHeader {
    fn default() -> Self {
        TuneHeader {
            index: 0,
            title: String::new(),
            meter: rational(1, 1),
            unit_length: rational(1, 4),
            key: "C".to_string(),
        }
    }
}

/// One parsed tune: header plus melody.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tune {
    pub header: TuneHeader,
    pub chromosome: Chromosome,
}
