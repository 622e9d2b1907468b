//! The generative genetic algorithm engine.
//!
//! One engine serves both stages: the data-manufacturing run (fitness =
//! n-gram similarity to a target, mutation resampling from the target's own
//! gene distributions) and the melody-generating run (fitness = learned
//! score plus the rhythm term, mutation resampling from the corpus
//! distributions). Populations are seeded from gene distributions, parents
//! come from roulette-wheel selection, children from per-gene uniform
//! crossover, and the best half of each population carries over unchanged.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;
use thiserror::Error;

use crate::chromosome::{random_melody, Chromosome, GeneDistributions, Note};
use crate::neural::{lstm_score, LstmModel};
use crate::rational::Rational;
use crate::rhythm::rhythm_cost;
use crate::similarity::{ngram_similarity, SimilarityConfig, SimilarityError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvolutionError {
    #[error("crossover parents have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// GA run parameters. The defaults are the reference settings: population
/// 20, 6000 iterations, crossover rate 0.5, mutation probability 0.5,
/// mutation rate 0.1, elitism fraction 0.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub pop_size: usize,
    pub max_iter: usize,
    /// Crossover rate: per-gene probability of inheriting from parent 2.
    pub cr: f64,
    /// Probability that a freshly bred child is mutated at all.
    pub mp: f64,
    /// Per-gene mutation rate within a mutated child.
    pub mr: f64,
    /// Fraction of the population carried over unchanged each iteration.
    pub elitism_fraction: f64,
    /// Chromosome length for the run.
    pub n_notes: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            pop_size: 20,
            max_iter: 6000,
            cr: 0.5,
            mp: 0.5,
            mr: 0.1,
            elitism_fraction: 0.5,
            n_notes: 32,
            seed: 0,
        }
    }
}

impl GaConfig {
    /// Default settings with the run's chromosome length.
    pub fn with_notes(n_notes: usize) -> Self {
        GaConfig {
            n_notes,
            ..GaConfig::default()
        }
    }
}

/// Weighting between the learned score and the rhythm term; the combined
/// objective is `score + alpha / (alpha + rhythm_cost)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessConfig {
    pub alpha: f64,
}

impl Default for FitnessConfig {
    fn default() -> Self {
        FitnessConfig { alpha: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

/// Best-ever chromosome recorded at the iteration where it first appeared.
#[derive(Debug, Clone, PartialEq)]
pub struct BestSnapshot {
    pub iteration: usize,
    pub chromosome: Chromosome,
    pub fitness: f64,
}

/// Per-iteration statistics plus the trail of best-ever improvements.
/// Index 0 describes the freshly initialized population.
#[derive(Debug, Clone, PartialEq)]
pub struct RunHistory {
    pub iterations: Vec<IterationStats>,
    pub best_changes: Vec<BestSnapshot>,
}

impl RunHistory {
    /// Final iteration index (equals the configured max_iter).
    pub fn last_iteration(&self) -> usize {
        self.iterations.len() - 1
    }

    /// The best-ever snapshot as of iteration `iteration`.
    pub fn best_at(&self, iteration: usize) -> &BestSnapshot {
        let idx = self
            .best_changes
            .partition_point(|s| s.iteration <= iteration);
        &self.best_changes[idx.saturating_sub(1)]
    }

    pub fn final_best(&self) -> &BestSnapshot {
        self.best_changes.last().expect("history is never empty")
    }
}

/// Combined objective: learned melody score plus `alpha / (alpha + cost)`
/// where cost is the melody's rhythm violation count.
pub fn main_fitness(
    c: &Chromosome,
    model: &LstmModel,
    meter: Rational,
    unit_length: Rational,
    cfg: &FitnessConfig,
) -> f64 {
    let cost = rhythm_cost(c, meter, unit_length).cost;
    lstm_score(model, c) + cfg.alpha / (cfg.alpha + cost as f64)
}

/// Data-manufacturing objective: n-gram similarity to the target melody.
pub fn initial_fitness(
    c: &Chromosome,
    target: &Chromosome,
    cfg: &SimilarityConfig,
) -> Result<f64, SimilarityError> {
    ngram_similarity(c, target, cfg)
}

/// Roulette-wheel selection. Non-negative fitness vectors use the literal
/// fitness-proportional weights; vectors containing negatives (or summing to
/// zero) are shifted by `-min + 1e-6` first, which preserves ranking while
/// making every weight positive.
pub fn select_parent<R: Rng>(fitnesses: &[f64], rng: &mut R) -> usize {
    assert!(!fitnesses.is_empty(), "cannot select from an empty population");
    let min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = fitnesses.iter().sum();
    let shifted = min < 0.0 || sum <= 0.0;
    let weight = |f: f64| if shifted { f - min + 1e-6 } else { f };
    let total: f64 = fitnesses.iter().map(|&f| weight(f)).sum();
    let mut threshold = rng.gen::<f64>() * total;
    for (i, &f) in fitnesses.iter().enumerate() {
        threshold -= weight(f);
        if threshold < 0.0 {
            return i;
        }
    }
    fitnesses.len() - 1
}

fn gene_from(parent: &Note, child: &mut Note, row: usize) {
    match row {
        0 => child.accidental = parent.accidental,
        1 => child.step = parent.step,
        2 => child.octave = parent.octave,
        3 => child.duration = parent.duration,
        _ => unreachable!(),
    }
}

/// Per-gene uniform crossover over all D = 4N gene cells: each cell comes
/// from parent 1 when a fresh uniform draw exceeds `cr`, else from parent 2.
/// Rests in the assembled child are re-canonicalized.
pub fn crossover<R: Rng>(
    c1: &Chromosome,
    c2: &Chromosome,
    cr: f64,
    rng: &mut R,
) -> Result<Chromosome, EvolutionError> {
    if c1.len() != c2.len() {
        return Err(EvolutionError::LengthMismatch(c1.len(), c2.len()));
    }
    let mut notes = Vec::with_capacity(c1.len());
    for (a, b) in c1.iter().zip(c2.iter()) {
        let mut child = *a;
        for row in 0..4 {
            let source = if rng.gen::<f64>() > cr { a } else { b };
            gene_from(source, &mut child, row);
        }
        notes.push(child.canonicalized());
    }
    Ok(Chromosome::new(notes).expect("genes copied from valid parents"))
}

/// Per-gene mutation: each cell is kept when a fresh uniform draw exceeds
/// `mr`, else replaced by a sample from that gene row's distribution.
pub fn mutate<R: Rng>(
    c: &Chromosome,
    mr: f64,
    dist: &GeneDistributions,
    rng: &mut R,
) -> Chromosome {
    let mut notes = Vec::with_capacity(c.len());
    for note in c.iter() {
        let mut child = *note;
        if rng.gen::<f64>() <= mr {
            child.accidental = dist.accidental.sample(rng);
        }
        if rng.gen::<f64>() <= mr {
            child.step = dist.step.sample(rng);
        }
        if rng.gen::<f64>() <= mr {
            child.octave = dist.octave.sample(rng);
        }
        if rng.gen::<f64>() <= mr {
            child.duration = dist.duration.sample(rng);
        }
        notes.push(child.canonicalized());
    }
    Chromosome::new(notes).expect("mutated genes stay in range")
}

fn argmax(fitnesses: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in fitnesses.iter().enumerate() {
        if f > fitnesses[best] {
            best = i;
        }
    }
    best
}

/// Runs the GA: a distribution-seeded population, then `max_iter`
/// iterations of elitist replacement where the top `elitism_fraction` of
/// the population survives unchanged and roulette-selected parent pairs
/// breed the rest. Returns the best chromosome ever seen and the full
/// history. Identical configuration and seed give bit-identical results;
/// fitness evaluation may run in parallel but never touches the run's
/// random stream.
pub fn evolve<F>(
    fitness_fn: F,
    init_dist: &GeneDistributions,
    mutation_dist: &GeneDistributions,
    ga: &GaConfig,
) -> (Chromosome, RunHistory)
where
    F: Fn(&Chromosome) -> f64 + Sync,
{
    assert!(ga.pop_size >= 1, "population must be non-empty");
    assert!(ga.n_notes >= 1, "chromosomes must be non-empty");
    assert!(
        ga.elitism_fraction > 0.0 && ga.elitism_fraction < 1.0,
        "elitism fraction must be in (0, 1)"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(ga.seed);

    let eval = |pop: &[Chromosome]| -> Vec<f64> {
        if pop.len() >= 4 {
            pop.par_iter().map(&fitness_fn).collect()
        } else {
            pop.iter().map(&fitness_fn).collect()
        }
    };

    let mut population: Vec<Chromosome> = (0..ga.pop_size)
        .map(|_| random_melody(init_dist, ga.n_notes, &mut rng))
        .collect();
    let mut fitnesses = eval(&population);

    let elite_count = ((ga.elitism_fraction * ga.pop_size as f64).ceil() as usize)
        .clamp(1, ga.pop_size - 1);
    let child_count = ga.pop_size - elite_count;

    let best_idx = argmax(&fitnesses);
    let mut history = RunHistory {
        iterations: Vec::with_capacity(ga.max_iter + 1),
        best_changes: vec![BestSnapshot {
            iteration: 0,
            chromosome: population[best_idx].clone(),
            fitness: fitnesses[best_idx],
        }],
    };
    history.iterations.push(IterationStats {
        best_fitness: fitnesses[best_idx],
        mean_fitness: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
    });

    for iteration in 1..=ga.max_iter {
        // Rank by fitness, ties broken by index for determinism.
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| {
            fitnesses[b]
                .partial_cmp(&fitnesses[a])
                .expect("fitness values must not be NaN")
                .then(a.cmp(&b))
        });

        let mut children = Vec::with_capacity(child_count);
        for _ in 0..child_count {
            let p1 = select_parent(&fitnesses, &mut rng);
            let p2 = select_parent(&fitnesses, &mut rng);
            let mut child = crossover(&population[p1], &population[p2], ga.cr, &mut rng)
                .expect("population chromosomes share one length");
            if rng.gen::<f64>() < ga.mp {
                child = mutate(&child, ga.mr, mutation_dist, &mut rng);
            }
            children.push(child);
        }
        let child_fitnesses = eval(&children);

        let mut next_population = Vec::with_capacity(ga.pop_size);
        let mut next_fitnesses = Vec::with_capacity(ga.pop_size);
        for &i in order.iter().take(elite_count) {
            next_population.push(population[i].clone());
            next_fitnesses.push(fitnesses[i]);
        }
        next_population.extend(children);
        next_fitnesses.extend(child_fitnesses);
        population = next_population;
        fitnesses = next_fitnesses;

        let best_idx = argmax(&fitnesses);
        let best_fitness = fitnesses[best_idx];
        history.iterations.push(IterationStats {
            best_fitness,
            mean_fitness: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
        });
        if best_fitness > history.final_best().fitness {
            history.best_changes.push(BestSnapshot {
                iteration,
                chromosome: population[best_idx].clone(),
                fitness: best_fitness,
            });
        }
    }

    let final_best = history.final_best();
    (final_best.chromosome.clone(), history)
}

/// The bad-to-good spectrum: the initial best, the best at every
/// `stride`-th iteration, and the final best, deduplicated by iteration
/// index.
pub fn run_snapshots(history: &RunHistory, stride: usize) -> Vec<(Chromosome, f64)> {
    assert!(stride >= 1, "stride must be positive");
    let last = history.last_iteration();
    let mut indices = vec![0usize];
    let mut k = stride;
    while k < last {
        indices.push(k);
        k += stride;
    }
    if last > 0 {
        indices.push(last);
    }
    indices
        .into_iter()
        .map(|i| {
            let snap = history.best_at(i);
            (snap.chromosome.clone(), snap.fitness)
        })
        .collect()
}
