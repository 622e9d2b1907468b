//! N-gram melody similarity.
//!
//! A candidate's score against a target is the fraction of its contiguous
//! note n-grams that occur anywhere in the target, with notes compared by
//! exact gene equality on a configurable set of rows. The measure is
//! directional (containment, not overlap): a candidate that is a contiguous
//! substring of the target scores 1 while the reverse generally does not.
//!
//! The corpus score is the maximum pairwise score over all corpus melodies.
//! Downstream code treats these functions as the pluggable scoring interface
//! for dataset labeling.

use std::collections::HashSet;

use thiserror::Error;

use crate::chromosome::{Chromosome, Note};

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("candidate has {len} notes but the n-gram order is {n}")]
    CandidateTooShort { len: usize, n: usize },
    #[error("corpus must contain at least one melody")]
    EmptyCorpus,
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("degenerate spectrum: all raw scores equal {0}")]
    DegenerateSpectrum(f64),
}

/// Which gene rows participate in n-gram equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchFields {
    pub accidental: bool,
    pub step: bool,
    pub octave: bool,
    pub duration: bool,
}

impl Default for MatchFields {
    fn default() -> Self {
        MatchFields {
            accidental: true,
            step: true,
            octave: true,
            duration: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimilarityConfig {
    /// N-gram order; at least 1.
    pub n: usize,
    pub match_fields: MatchFields,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig {
            n: 4,
            match_fields: MatchFields::default(),
        }
    }
}

/// A note projected onto the selected match fields; ignored rows collapse to
/// fixed sentinels so they never distinguish two keys.
type NoteKey = (i8, u8, u8, i64, i64);

fn note_key(note: &Note, fields: MatchFields) -> NoteKey {
    (
        if fields.accidental { note.accidental } else { 0 },
        if fields.step { note.step } else { 0 },
        if fields.octave { note.octave } else { 0 },
        if fields.duration { *note.duration.numer() } else { 0 },
        if fields.duration { *note.duration.denom() } else { 0 },
    )
}

fn keys(c: &Chromosome, fields: MatchFields) -> Vec<NoteKey> {
    c.iter().map(|n| note_key(n, fields)).collect()
}

/// Fraction of the candidate's n-grams that occur anywhere in the target.
///
/// Returns 0 when the target is shorter than n. Errors when the candidate
/// is. The target's n-grams are hash-indexed; agreement with the naive
/// all-pairs scan is exercised by tests.
pub fn ngram_similarity(
    candidate: &Chromosome,
    target: &Chromosome,
    cfg: &SimilarityConfig,
) -> Result<f64, SimilarityError> {
    assert!(cfg.n >= 1, "n-gram order must be at least 1");
    if candidate.len() < cfg.n {
        return Err(SimilarityError::CandidateTooShort {
            len: candidate.len(),
            n: cfg.n,
        });
    }
    if target.len() < cfg.n {
        return Ok(0.0);
    }
    let target_keys = keys(target, cfg.match_fields);
    let index: HashSet<&[NoteKey]> = target_keys.windows(cfg.n).collect();
    let candidate_keys = keys(candidate, cfg.match_fields);
    let matched = candidate_keys
        .windows(cfg.n)
        .filter(|w| index.contains(*w))
        .count();
    let windows = candidate.len() - cfg.n + 1;
    Ok(matched as f64 / windows as f64)
}

/// Maximum [`ngram_similarity`] over all corpus melodies.
pub fn corpus_similarity(
    candidate: &Chromosome,
    corpus: &[Chromosome],
    cfg: &SimilarityConfig,
) -> Result<f64, SimilarityError> {
    if corpus.is_empty() {
        return Err(SimilarityError::EmptyCorpus);
    }
    let mut best = 0.0f64;
    for target in corpus {
        let score = ngram_similarity(candidate, target, cfg)?;
        if score > best {
            best = score;
        }
    }
    Ok(best)
}

/// Min-max scales raw scores onto [0, 100]. A flat spectrum carries no label
/// information and is reported as degenerate for the caller to discard.
pub fn normalize_spectrum(raw_scores: &[f64]) -> Result<Vec<f64>, SimilarityError> {
    if raw_scores.is_empty() {
        return Err(SimilarityError::EmptySpectrum);
    }
    let min = raw_scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = raw_scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Err(SimilarityError::DegenerateSpectrum(min));
    }
    Ok(raw_scores
        .iter()
        .map(|&s| 100.0 * (s - min) / (max - min))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromosome::{random_melody_uniform, Note};
    use crate::rational::rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Naive all-pairs oracle: compares every candidate window to every
    /// target window by per-field equality, no hashing or indexing.
    pub fn naive_ngram_similarity(
        candidate: &Chromosome,
        target: &Chromosome,
        cfg: &SimilarityConfig,
    ) -> f64 {
        let notes_equal = |a: &Note, b: &Note| {
            let f = cfg.match_fields;
            (!f.accidental || a.accidental == b.accidental)
                && (!f.step || a.step == b.step)
                && (!f.octave || a.octave == b.octave)
                && (!f.duration || a.duration == b.duration)
        };
        let n = cfg.n;
        if target.len() < n {
            return 0.0;
        }
        let mut matched = 0usize;
        for i in 0..=candidate.len() - n {
            let window = &candidate.notes()[i..i + n];
            let mut found = false;
            for j in 0..=target.len() - n {
                let target_window = &target.notes()[j..j + n];
                if window
                    .iter()
                    .zip(target_window)
                    .all(|(a, b)| notes_equal(a, b))
                {
                    found = true;
                    break;
                }
            }
            if found {
                matched += 1;
            }
        }
        matched as f64 / (candidate.len() - n + 1) as f64
    }

    fn steps(values: &[u8]) -> Chromosome {
        let notes = values
            .iter()
            .map(|&s| Note::new(0, s, 4, rational(1, 1)).unwrap())
            .collect();
        Chromosome::new(notes).unwrap()
    }

    #[test]
    fn identical_melody_scores_one() {
        let c = steps(&[1, 2, 3, 4, 5, 6]);
        let cfg = SimilarityConfig::default();
        assert_eq!(ngram_similarity(&c, &c, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_steps_score_zero() {
        let a = steps(&[1, 2, 3, 4, 1, 2]);
        let b = steps(&[5, 6, 7, 5, 6, 7]);
        let cfg = SimilarityConfig::default();
        assert_eq!(ngram_similarity(&a, &b, &cfg).unwrap(), 0.0);
    }

    // One matched window of three: the first four notes equal a target
    // substring, the remaining two windows are unmatched -> 1/3 by the
    // all-pairs oracle.
    #[test]
    fn partial_overlap_scores_one_third() {
        let candidate = steps(&[1, 2, 3, 4, 7, 7]);
        let target = steps(&[5, 1, 2, 3, 4, 6]);
        let cfg = SimilarityConfig::default();
        let expected = naive_ngram_similarity(&candidate, &target, &cfg);
        assert_eq!(expected, 1.0 / 3.0);
        assert_eq!(
            ngram_similarity(&candidate, &target, &cfg).unwrap(),
            expected
        );
    }

    #[test]
    fn candidate_shorter_than_n_is_an_error() {
        let c = steps(&[1, 2, 3]);
        let cfg = SimilarityConfig::default();
        assert_eq!(
            ngram_similarity(&c, &c, &cfg),
            Err(SimilarityError::CandidateTooShort { len: 3, n: 4 })
        );
    }

    #[test]
    fn short_target_scores_zero() {
        let c = steps(&[1, 2, 3, 4]);
        let t = steps(&[1, 2, 3]);
        let cfg = SimilarityConfig::default();
        assert_eq!(ngram_similarity(&c, &t, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn substring_scores_one_but_not_symmetric() {
        let target = steps(&[7, 1, 2, 3, 4, 5, 6]);
        let candidate = steps(&[1, 2, 3, 4, 5]);
        let cfg = SimilarityConfig::default();
        assert_eq!(ngram_similarity(&candidate, &target, &cfg).unwrap(), 1.0);
        assert!(ngram_similarity(&target, &candidate, &cfg).unwrap() < 1.0);
    }

    #[test]
    fn match_fields_relax_equality() {
        let a = steps(&[1, 2, 3, 4]);
        let mut notes = a.notes().to_vec();
        for note in &mut notes {
            note.octave = 5;
        }
        let b = Chromosome::new(notes).unwrap();
        let strict = SimilarityConfig::default();
        assert_eq!(ngram_similarity(&a, &b, &strict).unwrap(), 0.0);
        let loose = SimilarityConfig {
            n: 4,
            match_fields: MatchFields {
                octave: false,
                ..MatchFields::default()
            },
        };
        assert_eq!(ngram_similarity(&a, &b, &loose).unwrap(), 1.0);
    }

    #[test]
    fn hashed_implementation_matches_naive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cfg = SimilarityConfig::default();
        for _ in 0..300 {
            let len_c = 4 + rng.gen_range(0..27);
            let len_t = 1 + rng.gen_range(0..30);
            let candidate = random_melody_uniform(len_c, &mut rng);
            let target = random_melody_uniform(len_t, &mut rng);
            let fast = ngram_similarity(&candidate, &target, &cfg).unwrap();
            let slow = naive_ngram_similarity(&candidate, &target, &cfg);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn corpus_similarity_is_the_pairwise_max() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = SimilarityConfig::default();
        let candidate = random_melody_uniform(12, &mut rng);
        let corpus: Vec<Chromosome> = (0..5)
            .map(|_| random_melody_uniform(15, &mut rng))
            .collect();
        let by_hand = corpus
            .iter()
            .map(|t| naive_ngram_similarity(&candidate, t, &cfg))
            .fold(0.0f64, f64::max);
        assert_eq!(
            corpus_similarity(&candidate, &corpus, &cfg).unwrap(),
            by_hand
        );
    }

    #[test]
    fn corpus_containing_candidate_scores_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let candidate = random_melody_uniform(10, &mut rng);
        let corpus = vec![random_melody_uniform(10, &mut rng), candidate.clone()];
        let cfg = SimilarityConfig::default();
        assert_eq!(corpus_similarity(&candidate, &corpus, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn singleton_corpus_equals_pairwise_score() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = SimilarityConfig::default();
        let candidate = random_melody_uniform(9, &mut rng);
        let target = random_melody_uniform(9, &mut rng);
        assert_eq!(
            corpus_similarity(&candidate, std::slice::from_ref(&target), &cfg).unwrap(),
            ngram_similarity(&candidate, &target, &cfg).unwrap()
        );
    }

    #[test]
    fn corpus_similarity_monotone_in_corpus_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = SimilarityConfig::default();
        let candidate = random_melody_uniform(10, &mut rng);
        let corpus: Vec<Chromosome> = (0..8)
            .map(|_| random_melody_uniform(12, &mut rng))
            .collect();
        let mut previous = 0.0;
        for k in 1..=corpus.len() {
            let score = corpus_similarity(&candidate, &corpus[..k], &cfg).unwrap();
            assert!(score >= previous);
            previous = score;
        }
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let c = steps(&[1, 2, 3, 4]);
        let cfg = SimilarityConfig::default();
        assert_eq!(
            corpus_similarity(&c, &[], &cfg),
            Err(SimilarityError::EmptyCorpus)
        );
    }

    #[test]
    fn spectrum_normalization_endpoints() {
        assert_eq!(
            normalize_spectrum(&[0.1, 0.5, 0.9]).unwrap(),
            vec![0.0, 50.0, 100.0]
        );
    }

    #[test]
    fn spectrum_range_property() {
        let normalized = normalize_spectrum(&[0.07, 0.002, 0.4, 0.31]).unwrap();
        let min = normalized.iter().copied().fold(f64::INFINITY, f64::min);
        let max = normalized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(min, 0.0);
        assert_eq!(max, 100.0);
        assert!(normalized.iter().all(|&s| (0.0..=100.0).contains(&s)));
    }

    #[test]
    fn flat_spectrum_is_degenerate() {
        assert_eq!(
            normalize_spectrum(&[0.2, 0.2]),
            Err(SimilarityError::DegenerateSpectrum(0.2))
        );
    }
}
