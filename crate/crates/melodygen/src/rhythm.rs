//! Meter-violation counting.
//!
//! The rhythm cost is the number of bar boundaries that fall strictly inside
//! a note, plus one if the melody ends mid-measure. A boundary that lands
//! exactly on a note end is not a violation. All boundary tests use exact
//! rational arithmetic.

use crate::chromosome::Chromosome;
use crate::rational::{rational, Rational};

/// One broken measure: boundary `boundary_index * meter` falls strictly
/// inside note `note_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub boundary_index: u64,
    pub note_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhythmReport {
    /// violations.len() plus one when the melody ends mid-measure.
    pub cost: u64,
    /// Melody length in whole-note units.
    pub total_duration: Rational,
    /// Measure length in whole-note units (the meter fraction).
    pub measure_length: Rational,
    pub violations: Vec<Violation>,
    pub ends_mid_measure: bool,
}

/// Walks cumulative time in whole-note units (`duration * unit_length` per
/// note) and counts every bar boundary `k * meter` (k >= 1) that falls
/// strictly inside a note, plus one if the total duration is not an exact
/// positive multiple of the meter.
pub fn rhythm_cost(c: &Chromosome, meter: Rational, unit_length: Rational) -> RhythmReport {
    assert!(meter > rational(0, 1), "meter must be positive");
    assert!(unit_length > rational(0, 1), "unit length must be positive");

    let mut violations = Vec::new();
    let mut elapsed = rational(0, 1);
    for (note_index, note) in c.iter().enumerate() {
        let start = elapsed;
        let end = elapsed + note.duration * unit_length;
        // First candidate boundary strictly after the note start.
        let mut k = *(start / meter).floor().numer() as u64 + 1;
        loop {
            let boundary = rational(k as i64, 1) * meter;
            if boundary >= end {
                break;
            }
            if boundary > start {
                violations.push(Violation {
                    boundary_index: k,
                    note_index,
                });
            }
            k += 1;
        }
        elapsed = end;
    }

    let measures = elapsed / meter;
    let ends_mid_measure = *measures.denom() != 1 || *measures.numer() < 1;
    RhythmReport {
        cost: violations.len() as u64 + u64::from(ends_mid_measure),
        total_duration: elapsed,
        measure_length: meter,
        violations,
        ends_mid_measure,
    }
}
