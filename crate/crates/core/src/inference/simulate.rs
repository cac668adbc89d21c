use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measure::ask_indexed;
use super::observable::Observable;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Generator for trial `index` of a run seeded with `seed`: ChaCha8 keyed by
/// `seed_from_u64(seed)`, on stream `index`. Streams never overlap, so the
/// draws of a trial do not depend on how many trials run or in what order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEntry {
    pub outcomes: Vec<f64>,
    pub count: u64,
}

/// Joint counts of answer tuples over many independent question chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub chain: Vec<String>,
    pub trials: u64,
    pub seed: u64,
    pub counts: Vec<FrequencyEntry>,
}

impl FrequencyTable {
    /// Fraction of trials where step `step` answered `value`.
    pub fn marginal(&self, step: usize, value: f64, tol: f64) -> f64 {
        let hits: u64 = self
            .counts
            .iter()
            .filter(|e| (e.outcomes[step] - value).abs() <= tol)
            .map(|e| e.count)
            .sum();
        hits as f64 / self.trials as f64
    }

    /// Frequency of `value` at step `step` among trials whose step `given` answered `given_value`.
    pub fn conditional(
        &self,
        step: usize,
        value: f64,
        given: usize,
        given_value: f64,
        tol: f64,
    ) -> Option<f64> {
        let matching = self
            .counts
            .iter()
            .filter(|e| (e.outcomes[given] - given_value).abs() <= tol);
        let (mut hits, mut total) = (0u64, 0u64);
        for e in matching {
            total += e.count;
            if (e.outcomes[step] - value).abs() <= tol {
                hits += e.count;
            }
        }
        (total > 0).then(|| hits as f64 / total as f64)
    }
}

fn run_chain(
    initial: &StateVector,
    qs: &[Observable],
    seed: u64,
    trial: u64,
) -> Result<Vec<usize>> {
    let mut rng = trial_rng(seed, trial);
    let mut state = initial.clone();
    let mut path = Vec::with_capacity(qs.len());
    for q in qs {
        let (k, _, next) = ask_indexed(&state, q, &mut rng)?;
        path.push(k);
        state = next;
    }
    Ok(path)
}

fn tabulate(
    qs: &[Observable],
    trials: u64,
    seed: u64,
    counts: BTreeMap<Vec<usize>, u64>,
) -> FrequencyTable {
    let spectra: Vec<Vec<f64>> = qs.iter().map(|q| q.spectrum()).collect();
    FrequencyTable {
        chain: qs.iter().map(|q| q.name().to_string()).collect(),
        trials,
        seed,
        counts: counts
            .into_iter()
            .map(|(path, count)| FrequencyEntry {
                outcomes: path.iter().zip(&spectra).map(|(&k, s)| s[k]).collect(),
                count,
            })
            .collect(),
    }
}

fn check(initial: &StateVector, qs: &[Observable], trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::BadParameter("trials must be at least 1".into()));
    }
    for q in qs {
        initial.ensure_dim(q.d_r())?;
    }
    Ok(())
}

/// Runs `trials` independent chains of asks in parallel and counts the answer tuples.
///
/// The result is identical to [`simulate_sequence_serial`] for the same seed.
pub fn simulate_sequence(
    initial: &StateVector,
    qs: &[Observable],
    trials: u64,
    seed: u64,
) -> Result<FrequencyTable> {
    check(initial, qs, trials)?;
    let counts = (0..trials)
        .into_par_iter()
        .try_fold(BTreeMap::new, |mut acc: BTreeMap<Vec<usize>, u64>, t| {
            *acc.entry(run_chain(initial, qs, seed, t)?).or_default() += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })?;
    Ok(tabulate(qs, trials, seed, counts))
}

/// Single-threaded [`simulate_sequence`].
pub fn simulate_sequence_serial(
    initial: &StateVector,
    qs: &[Observable],
    trials: u64,
    seed: u64,
) -> Result<FrequencyTable> {
    check(initial, qs, trials)?;
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for t in 0..trials {
        *counts.entry(run_chain(initial, qs, seed, t)?).or_default() += 1;
    }
    Ok(tabulate(qs, trials, seed, counts))
}
