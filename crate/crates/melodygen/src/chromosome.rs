//! The 4×N melody matrix and its corpus statistics.
//!
//! A melody is a sequence of notes, each carrying four genes: accidental,
//! step, octave and duration. Gene values follow the ABC code table used by
//! the notation module: step 0 is a rest, steps 1..=7 are c..b, octaves run
//! 1..=7 with plain `A` at 4, and durations are exact positive rationals
//! multiplying the tune's unit note length.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::rational::{rational, Rational};

pub const ACCIDENTAL_MIN: i8 = -1;
pub const ACCIDENTAL_MAX: i8 = 1;
pub const STEP_MAX: u8 = 7;
pub const OCTAVE_MIN: u8 = 1;
pub const OCTAVE_MAX: u8 = 7;
/// Octave a rest is stored at, and the octave of a plain uppercase letter.
pub const OCTAVE_DEFAULT: u8 = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChromosomeError {
    #[error("accidental {0} outside -1..=1")]
    BadAccidental(i8),
    #[error("step {0} outside 0..=7")]
    BadStep(u8),
    #[error("octave {0} outside 1..=7")]
    BadOctave(u8),
    #[error("duration {0} is not positive")]
    BadDuration(Rational),
    #[error("chromosome must contain at least one note")]
    Empty,
    #[error("corpus must contain at least one chromosome")]
    EmptyCorpus,
    #[error("octave {octave} out of range after transposing note {note_index} by {offset}")]
    TransposeOutOfRange {
        note_index: usize,
        octave: i32,
        offset: i32,
    },
}

/// One note: a 4-gene column of the melody matrix.
///
/// Rests are canonical: `step == 0` forces `accidental == 0` and
/// `octave == 4` so equality and round-trips are well defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Note {
    pub accidental: i8,
    pub step: u8,
    pub octave: u8,
    pub duration: Rational,
}

impl Note {
    /// Validating constructor; rests are canonicalized silently.
    pub fn new(
        accidental: i8,
        step: u8,
        octave: u8,
        duration: Rational,
    ) -> Result<Self, ChromosomeError> {
        if !(ACCIDENTAL_MIN..=ACCIDENTAL_MAX).contains(&accidental) {
            return Err(ChromosomeError::BadAccidental(accidental));
        }
        if step > STEP_MAX {
            return Err(ChromosomeError::BadStep(step));
        }
        if !(OCTAVE_MIN..=OCTAVE_MAX).contains(&octave) {
            return Err(ChromosomeError::BadOctave(octave));
        }
        if duration <= rational(0, 1) {
            return Err(ChromosomeError::BadDuration(duration));
        }
        Ok(Note {
            accidental,
            step,
            octave,
            duration,
        }
        .canonicalized())
    }

    pub fn rest(duration: Rational) -> Result<Self, ChromosomeError> {
        Note::new(0, 0, OCTAVE_DEFAULT, duration)
    }

    pub fn is_rest(&self) -> bool {
        self.step == 0
    }

    /// Forces the canonical rest form; non-rests pass through unchanged.
    pub fn canonicalized(mut self) -> Self {
        if self.step == 0 {
            self.accidental = 0;
            self.octave = OCTAVE_DEFAULT;
        }
        self
    }

    fn validate(&self) -> Result<(), ChromosomeError> {
        Note::new(self.accidental, self.step, self.octave, self.duration).and_then(|n| {
            if n == *self {
                Ok(())
            } else {
                Err(ChromosomeError::BadStep(self.step))
            }
        })
    }
}

/// An ordered, non-empty sequence of notes; the melody matrix with one
/// column per note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    notes: Vec<Note>,
}

impl Chromosome {
    pub fn new(notes: Vec<Note>) -> Result<Self, ChromosomeError> {
        if notes.is_empty() {
            return Err(ChromosomeError::Empty);
        }
        for note in &notes {
            note.validate()?;
        }
        Ok(Chromosome { notes })
    }

    pub fn len(&self) -> usize {
        self.notes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn notes(&self) -> &[Note] {
        &self.notes
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Note> {
        self.notes.iter()
    }

    /// Gene count D = 4N.
    pub fn gene_count(&self) -> usize {
        4 * self.notes.len()
    }
}

/// Empirical categorical distribution of one gene row over a corpus.
///
/// Probabilities are exact ratios count/total; sampling inverts the
/// cumulative counts with one integer draw, so sampled frequencies match the
/// stored ratios with no floating-point bias.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Categorical<T> {
    values: Vec<T>,
    counts: Vec<u64>,
    cumulative: Vec<u64>,
    total: u64,
}

impl<T: Copy + Ord> Categorical<T> {
    pub fn from_counts(counts: BTreeMap<T, u64>) -> Result<Self, ChromosomeError> {
        let filtered: Vec<(T, u64)> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        if filtered.is_empty() {
            return Err(ChromosomeError::EmptyCorpus);
        }
        let values: Vec<T> = filtered.iter().map(|&(v, _)| v).collect();
        let counts: Vec<u64> = filtered.iter().map(|&(_, c)| c).collect();
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut running = 0u64;
        for &c in &counts {
            running += c;
            cumulative.push(running);
        }
        Ok(Categorical {
            values,
            counts,
            cumulative,
            total: running,
        })
    }

    /// Uniform distribution over the given values (count 1 each).
    pub fn uniform(values: &[T]) -> Result<Self, ChromosomeError> {
        Categorical::from_counts(values.iter().map(|&v| (v, 1u64)).collect())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// count(v) / total as f64; 0.0 for values outside the support.
    pub fn probability(&self, value: T) -> f64 {
        match self.values.binary_search(&value) {
            Ok(i) => self.counts[i] as f64 / self.total as f64,
            Err(_) => 0.0,
        }
    }

    pub fn probabilities(&self) -> Vec<(T, f64)> {
        self.values
            .iter()
            .zip(&self.counts)
            .map(|(&v, &c)| (v, c as f64 / self.total as f64))
            .collect()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> T {
        let k = rng.gen_range(0..self.total);
        let idx = self.cumulative.partition_point(|&c| c <= k);
        self.values[idx]
    }
}

/// Per-row categorical distributions of the four gene rows over a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneDistributions {
    pub accidental: Categorical<i8>,
    pub step: Categorical<u8>,
    pub octave: Categorical<u8>,
    pub duration: Categorical<Rational>,
}

impl GeneDistributions {
    /// Uniform distributions over the full code table: accidentals -1..=1,
    /// steps 0..=7, octaves 1..=7 and the eight listed duration values.
    pub fn table_uniform() -> GeneDistributions {
        GeneDistributions {
            accidental: Categorical::uniform(&[-1, 0, 1]).unwrap(),
            step: Categorical::uniform(&[0, 1, 2, 3, 4, 5, 6, 7]).unwrap(),
            octave: Categorical::uniform(&[1, 2, 3, 4, 5, 6, 7]).unwrap(),
            duration: Categorical::uniform(&table_durations()).unwrap(),
        }
    }
}

/// The duration multipliers named by the code table.
pub fn table_durations() -> Vec<Rational> {
    vec![
        rational(1, 8),
        rational(1, 4),
        rational(1, 2),
        rational(3, 4),
        rational(1, 1),
        rational(3, 2),
        rational(2, 1),
        rational(4, 1),
    ]
}

/// Tallies every gene value across all notes of all chromosomes; one
/// distribution per gene row with probability = count / total.
pub fn gene_distributions(corpus: &[Chromosome]) -> Result<GeneDistributions, ChromosomeError> {
    if corpus.is_empty() {
        return Err(ChromosomeError::EmptyCorpus);
    }
    let mut accidental: BTreeMap<i8, u64> = BTreeMap::new();
    let mut step: BTreeMap<u8, u64> = BTreeMap::new();
    let mut octave: BTreeMap<u8, u64> = BTreeMap::new();
    let mut duration: BTreeMap<Rational, u64> = BTreeMap::new();
    for chromosome in corpus {
        for note in chromosome.iter() {
            *accidental.entry(note.accidental).or_insert(0) += 1;
            *step.entry(note.step).or_insert(0) += 1;
            *octave.entry(note.octave).or_insert(0) += 1;
            *duration.entry(note.duration).or_insert(0) += 1;
        }
    }
    Ok(GeneDistributions {
        accidental: Categorical::from_counts(accidental)?,
        step: Categorical::from_counts(step)?,
        octave: Categorical::from_counts(octave)?,
        duration: Categorical::from_counts(duration)?,
    })
}

/// Samples an `n`-note melody, each gene drawn independently from its row
/// distribution. Draw order per note is accidental, step, octave, duration;
/// sampled rests are canonicalized.
pub fn random_melody<R: Rng>(dist: &GeneDistributions, n: usize, rng: &mut R) -> Chromosome {
    assert!(n >= 1, "melody length must be at least 1");
    let notes = (0..n)
        .map(|_| {
            let accidental = dist.accidental.sample(rng);
            let step = dist.step.sample(rng);
            let octave = dist.octave.sample(rng);
            let duration = dist.duration.sample(rng);
            Note {
                accidental,
                step,
                octave,
                duration,
            }
            .canonicalized()
        })
        .collect();
    Chromosome::new(notes).expect("sampled notes are valid by construction")
}

/// Fully random melody: every gene uniform over the code table's values.
pub fn random_melody_uniform<R: Rng>(n: usize, rng: &mut R) -> Chromosome {
    let dist = GeneDistributions::table_uniform();
    random_melody(&dist, n, rng)
}

/// Shifts every non-rest note's octave by `offset`; rests are untouched.
/// Fails if any shifted octave leaves 1..=7.
pub fn transpose_octave(c: &Chromosome, offset: i32) -> Result<Chromosome, ChromosomeError> {
    let mut notes = Vec::with_capacity(c.len());
    for (note_index, note) in c.iter().enumerate() {
        if note.is_rest() {
            notes.push(*note);
            continue;
        }
        let octave = note.octave as i32 + offset;
        if !(OCTAVE_MIN as i32..=OCTAVE_MAX as i32).contains(&octave) {
            return Err(ChromosomeError::TransposeOutOfRange {
                note_index,
                octave,
                offset,
            });
        }
        notes.push(Note {
            octave: octave as u8,
            ..*note
        });
    }
    Chromosome::new(notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn note(a: i8, s: u8, o: u8, num: i64, den: i64) -> Note {
        Note::new(a, s, o, rational(num, den)).unwrap()
    }

    #[test]
    fn rests_are_canonicalized() {
        let n = Note::new(1, 0, 6, rational(2, 1)).unwrap();
        assert_eq!(n, note(0, 0, 4, 2, 1));
        assert!(n.is_rest());
    }

    #[test]
    fn note_validation_rejects_out_of_range_genes() {
        assert_eq!(
            Note::new(2, 1, 4, rational(1, 1)),
            Err(ChromosomeError::BadAccidental(2))
        );
        assert_eq!(
            Note::new(0, 8, 4, rational(1, 1)),
            Err(ChromosomeError::BadStep(8))
        );
        assert_eq!(
            Note::new(0, 1, 0, rational(1, 1)),
            Err(ChromosomeError::BadOctave(0))
        );
        assert_eq!(
            Note::new(0, 1, 4, rational(0, 1)),
            Err(ChromosomeError::BadDuration(rational(0, 1)))
        );
    }

    #[test]
    fn empty_chromosome_is_rejected() {
        assert_eq!(Chromosome::new(vec![]), Err(ChromosomeError::Empty));
    }

    #[test]
    fn singleton_corpus_gives_probability_one_per_row() {
        let c = Chromosome::new(vec![note(0, 3, 4, 1, 2)]).unwrap();
        let dist = gene_distributions(&[c]).unwrap();
        assert_eq!(dist.accidental.probabilities(), vec![(0, 1.0)]);
        assert_eq!(dist.step.probabilities(), vec![(3, 1.0)]);
        assert_eq!(dist.octave.probabilities(), vec![(4, 1.0)]);
        assert_eq!(dist.duration.probabilities(), vec![(rational(1, 2), 1.0)]);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert_eq!(gene_distributions(&[]), Err(ChromosomeError::EmptyCorpus));
    }

    // Brute-force tally oracle: recount every gene value by hand and compare
    // exact count/total ratios against the distribution under test.
    #[test]
    fn distributions_match_brute_force_tally() {
        let mut r = rng(11);
        let corpus: Vec<Chromosome> = (0..10)
            .map(|_| random_melody_uniform(1 + r.gen_range(0..20), &mut r))
            .collect();
        let dist = gene_distributions(&corpus).unwrap();

        let all_notes: Vec<Note> = corpus.iter().flat_map(|c| c.iter().copied()).collect();
        let total = all_notes.len() as u64;

        assert_eq!(dist.step.total(), total);
        for &(value, probability) in dist.step.probabilities().iter() {
            let count = all_notes.iter().filter(|n| n.step == value).count() as u64;
            assert_eq!(probability, count as f64 / total as f64);
            assert_eq!(dist.step.probability(value), count as f64 / total as f64);
        }
        for &(value, probability) in dist.duration.probabilities().iter() {
            let count = all_notes.iter().filter(|n| n.duration == value).count() as u64;
            assert_eq!(probability, count as f64 / total as f64);
        }
        // Summing counts over values reproduces the total per row.
        for row_total in [
            dist.accidental.counts().iter().sum::<u64>(),
            dist.step.counts().iter().sum::<u64>(),
            dist.octave.counts().iter().sum::<u64>(),
            dist.duration.counts().iter().sum::<u64>(),
        ] {
            assert_eq!(row_total, total);
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut r = rng(7);
        let corpus: Vec<Chromosome> = (0..5)
            .map(|_| random_melody_uniform(17, &mut r))
            .collect();
        let dist = gene_distributions(&corpus).unwrap();
        for sum in [
            dist.accidental.probabilities().iter().map(|p| p.1).sum::<f64>(),
            dist.step.probabilities().iter().map(|p| p.1).sum::<f64>(),
            dist.octave.probabilities().iter().map(|p| p.1).sum::<f64>(),
            dist.duration.probabilities().iter().map(|p| p.1).sum::<f64>(),
        ] {
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_distributions_sample_the_single_value() {
        let c = Chromosome::new(vec![note(1, 5, 3, 3, 2)]).unwrap();
        let dist = gene_distributions(&[c]).unwrap();
        let melody = random_melody(&dist, 4, &mut rng(0));
        for n in melody.iter() {
            assert_eq!(*n, note(1, 5, 3, 3, 2));
        }
    }

    #[test]
    fn random_melody_is_deterministic_per_seed() {
        let dist = GeneDistributions::table_uniform();
        let a = random_melody(&dist, 25, &mut rng(99));
        let b = random_melody(&dist, 25, &mut rng(99));
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_notes_satisfy_invariants() {
        let mut r = rng(5);
        for _ in 0..200 {
            let c = random_melody_uniform(8, &mut r);
            assert_eq!(c.len(), 8);
            for n in c.iter() {
                n.validate().unwrap();
            }
        }
    }

    #[test]
    fn transpose_shifts_non_rests_only() {
        let c = Chromosome::new(vec![note(0, 6, 4, 1, 1), note(0, 0, 4, 2, 1)]).unwrap();
        let up = transpose_octave(&c, 1).unwrap();
        assert_eq!(up.notes()[0].octave, 5);
        assert_eq!(up.notes()[1], note(0, 0, 4, 2, 1));
    }

    #[test]
    fn transpose_all_rests_is_identity() {
        let c = Chromosome::new(vec![
            Note::rest(rational(1, 1)).unwrap(),
            Note::rest(rational(1, 2)).unwrap(),
        ])
        .unwrap();
        assert_eq!(transpose_octave(&c, 3).unwrap(), c);
        assert_eq!(transpose_octave(&c, -5).unwrap(), c);
    }

    #[test]
    fn transpose_out_of_range_is_an_error() {
        let c = Chromosome::new(vec![note(0, 2, 7, 1, 1)]).unwrap();
        assert_eq!(
            transpose_octave(&c, 1),
            Err(ChromosomeError::TransposeOutOfRange {
                note_index: 0,
                octave: 8,
                offset: 1
            })
        );
    }

    #[test]
    fn transpose_round_trips_when_in_range() {
        let mut r = rng(3);
        for _ in 0..50 {
            let c = random_melody_uniform(12, &mut r);
            for offset in [-2i32, -1, 1, 2] {
                if let Ok(shifted) = transpose_octave(&c, offset) {
                    assert_eq!(transpose_octave(&shifted, -offset).unwrap(), c);
                }
            }
        }
    }
}
