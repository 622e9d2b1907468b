//! Chromosome to ABC text.

use super::{Tune, TuneHeader};
use crate::chromosome::{Chromosome, Note};
use crate::rational::{format_fraction, rational, Rational};

fn duration_text(duration: Rational) -> String {
    if duration == rational(1, 1) {
        String::new()
    } else if duration == rational(1, 2) {
        "/".to_string()
    } else if duration == rational(1, 4) {
        "//".to_string()
    } else {
        format_fraction(duration)
    }
}

fn note_text(note: &Note) -> String {
    let mut out = String::new();
    if note.is_rest() {
        out.push('z');
        out.push_str(&duration_text(note.duration));
        return out;
    }
    match note.accidental {
        -1 => out.push('_'),
        1 => out.push('^'),
        _ => {}
    }
    let letter = match note.step {
        1 => 'c',
        2 => 'd',
        3 => 'e',
        4 => 'f',
        5 => 'g',
        6 => 'a',
        7 => 'b',
        _ => unreachable!("rests handled above"),
    };
    if note.octave <= 4 {
        out.push(letter.to_ascii_uppercase());
        for _ in note.octave..4 {
            out.push(',');
        }
    } else {
        out.push(letter);
        for _ in 5..note.octave {
            out.push('\'');
        }
    }
    out.push_str(&duration_text(note.duration));
    out
}

/// A meter of one whole note prints as the conventional `4/4`; anything else
/// prints as the stored fraction in lowest terms.
fn meter_text(meter: Rational) -> String {
    if meter == rational(1, 1) {
        "4/4".to_string()
    } else {
        format_fraction(meter)
    }
}

/// Serializes a tune: X/T/M/L/K header lines then the note body with a bar
/// line after each note whose cumulative duration is an exact positive
/// multiple of the measure length. Empty titles and keys omit their lines.
pub fn serialize_tune(header: &TuneHeader, chromosome: &Chromosome) -> String {
    let mut out = String::new();
    out.push_str(&format!("X: {}\n", header.index));
    if !header.title.is_empty() {
        out.push_str(&format!("T: {}\n", header.title));
    }
    out.push_str(&format!("M: {}\n", meter_text(header.meter)));
    out.push_str(&format!("L: {}\n", format_fraction(header.unit_length)));
    if !header.key.is_empty() {
        out.push_str(&format!("K: {}\n", header.key));
    }

    let measure_units = header.measure_units();
    let mut cumulative = rational(0, 1);
    let mut body = String::new();
    for note in chromosome.iter() {
        body.push_str(&note_text(note));
        cumulative += note.duration;
        let measures = cumulative / measure_units;
        if *measures.denom() == 1 && *measures.numer() >= 1 {
            body.push_str(" | ");
        }
    }
    let body = body.trim_end().to_string();
    out.push_str(&body);
    out.push('\n');
    out
}

/// Serializes tunes back-to-back with a blank separator line.
pub fn serialize_corpus(tunes: &[Tune]) -> String {
    tunes
        .iter()
        .map(|t| serialize_tune(&t.header, &t.chromosome))
        .collect::<Vec<_>>()
        .join("\n")
}
