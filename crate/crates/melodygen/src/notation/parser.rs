//! Corpus and tune-block parsing.

use super::lexer::{parse_duration_text, tokenize_body_line, TokenKind};
use super::{NotationError, Tune, TuneHeader};
use crate::chromosome::{Chromosome, Note, OCTAVE_MAX, OCTAVE_MIN};
use crate::rational::{parse_fraction, rational, Rational};

/// Non-fatal parse diagnostics (for now: skipped unknown header labels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

/// One tune block: the lines from its X header line up to the next X line,
/// with 1-based line numbers.
#[derive(Debug, Clone)]
pub struct TuneBlock<'a> {
    pub start_line: usize,
    pub lines: Vec<(usize, &'a str)>,
}

fn header_label(line: &str) -> Option<(char, &str)> {
    let mut chars = line.chars();
    let label = chars.next()?;
    if !label.is_ascii_alphabetic() {
        return None;
    }
    let rest = chars.as_str();
    let rest = rest.strip_prefix(':')?;
    Some((label, rest.trim()))
}

/// Splits a file into tune blocks on X header lines. Blank lines and `%`
/// comment lines outside blocks are skipped; any other content before the
/// first X line is an error.
pub fn split_tune_blocks(text: &str) -> Result<Vec<TuneBlock<'_>>, NotationError> {
    let mut blocks: Vec<TuneBlock> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        let is_x_line = matches!(header_label(trimmed), Some(('X', _)));
        if is_x_line {
            blocks.push(TuneBlock {
                start_line: line_no,
                lines: vec![(line_no, raw)],
            });
        } else if let Some(block) = blocks.last_mut() {
            block.lines.push((line_no, raw));
        } else if !trimmed.is_empty() && !trimmed.starts_with('%') {
            return Err(NotationError::BodyBeforeFirstTune { line: line_no });
        }
    }
    Ok(blocks)
}

fn parse_meter(value: &str, line: usize, raw: &str) -> Result<Rational, NotationError> {
    let malformed = || NotationError::MalformedHeader {
        line,
        text: raw.to_string(),
    };
    let meter = match value {
        "C" => rational(1, 1),
        "C|" => rational(1, 1),
        other => parse_fraction(other).ok_or_else(malformed)?,
    };
    if meter <= rational(0, 1) {
        return Err(malformed());
    }
    Ok(meter)
}

fn octave_from_marks(
    letter: char,
    marks: &str,
    line: usize,
    col: usize,
) -> Result<u8, NotationError> {
    let base: i32 = if letter.is_ascii_lowercase() { 5 } else { 4 };
    let shift = marks.len() as i32;
    let octave = if marks.starts_with(',') {
        base - shift
    } else {
        base + shift
    };
    if octave < OCTAVE_MIN as i32 || octave > OCTAVE_MAX as i32 {
        return Err(NotationError::OctaveOutOfRange { line, col, octave });
    }
    Ok(octave as u8)
}

fn step_from_letter(letter: char) -> u8 {
    match letter.to_ascii_lowercase() {
        'c' => 1,
        'd' => 2,
        'e' => 3,
        'f' => 4,
        'g' => 5,
        'a' => 6,
        'b' => 7,
        _ => unreachable!("lexer only passes note letters"),
    }
}

/// Parses one tune block into a header and chromosome plus any warnings.
///
/// Headers missing M or L default to 4/4 and 1/4. Bar lines and whitespace
/// are consumed but never stored. Unknown header labels are skipped with a
/// warning.
pub fn parse_tune_block(block: &TuneBlock<'_>) -> Result<(Tune, Vec<ParseWarning>), NotationError> {
    let mut warnings = Vec::new();
    let mut header = TuneHeader {
        key: String::new(),
        ..TuneHeader::default()
    };
    let mut notes: Vec<Note> = Vec::new();

    for &(line_no, raw) in &block.lines {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some((label, value)) = header_label(trimmed) {
            let malformed = || NotationError::MalformedHeader {
                line: line_no,
                text: raw.to_string(),
            };
            match label {
                'X' => {
                    header.index = value.parse().map_err(|_| malformed())?;
                }
                'T' => header.title = value.to_string(),
                'M' => header.meter = parse_meter(value, line_no, raw)?,
                'L' => {
                    let unit = parse_fraction(value).ok_or_else(malformed)?;
                    if unit <= rational(0, 1) {
                        return Err(malformed());
                    }
                    header.unit_length = unit;
                }
                'K' => header.key = value.to_string(),
                other => warnings.push(ParseWarning {
                    line: line_no,
                    message: format!("skipping unknown header label {other}:"),
                }),
            }
            continue;
        }
        for token in tokenize_body_line(raw, line_no)? {
            match token.kind {
                TokenKind::Note(note_token) => {
                    let accidental = match note_token.accidental_mark {
                        Some('^') => 1,
                        Some('_') => -1,
                        _ => 0,
                    };
                    let step = step_from_letter(note_token.letter);
                    let octave = octave_from_marks(
                        note_token.letter,
                        &note_token.octave_marks,
                        token.line,
                        token.col,
                    )?;
                    let duration =
                        parse_duration_text(&note_token.duration_text, token.line, token.col)?;
                    let note = Note::new(accidental, step, octave, duration).map_err(|source| {
                        NotationError::InvalidNote {
                            start_line: block.start_line,
                            source,
                        }
                    })?;
                    notes.push(note);
                }
                TokenKind::Rest { duration_text } => {
                    let duration = parse_duration_text(&duration_text, token.line, token.col)?;
                    let note =
                        Note::rest(duration).map_err(|source| NotationError::InvalidNote {
                            start_line: block.start_line,
                            source,
                        })?;
                    notes.push(note);
                }
                TokenKind::Bar | TokenKind::Whitespace => {}
            }
        }
    }

    let chromosome = Chromosome::new(notes).map_err(|_| NotationError::EmptyTune {
        start_line: block.start_line,
    })?;
    Ok((Tune { header, chromosome }, warnings))
}

/// Parses a whole ABC file into tunes, collecting warnings. Fails on the
/// first malformed tune.
pub fn parse_corpus_verbose(text: &str) -> Result<(Vec<Tune>, Vec<ParseWarning>), NotationError> {
    let blocks = split_tune_blocks(text)?;
    let mut tunes = Vec::with_capacity(blocks.len());
    let mut warnings = Vec::new();
    for block in &blocks {
        let (tune, mut block_warnings) = parse_tune_block(block)?;
        tunes.push(tune);
        warnings.append(&mut block_warnings);
    }
    Ok((tunes, warnings))
}

/// [`parse_corpus_verbose`] with warnings discarded.
pub fn parse_corpus(text: &str) -> Result<Vec<Tune>, NotationError> {
    parse_corpus_verbose(text).map(|(tunes, _)| tunes)
}
