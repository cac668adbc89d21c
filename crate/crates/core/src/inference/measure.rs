use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::observable::Observable;
use super::state::StateVector;
use super::PROBABILITY_FLOOR;
use crate::error::{Error, Result};
use crate::kernel::{simultaneous_eigenbasis, spectral_exp, ComplexMatrix};

/// One answer with its Born probability and Lüders post-state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub eigenvalue: f64,
    pub probability: f64,
    /// Absent when the probability is clamped to zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_state: Option<StateVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Probability of the answer nearest to `eigenvalue` within `tol`, or zero.
    pub fn probability_of(&self, eigenvalue: f64, tol: f64) -> f64 {
        self.outcomes
            .iter()
            .filter(|o| (o.eigenvalue - eigenvalue).abs() <= tol)
            .map(|o| o.probability)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.outcomes
            .iter()
            .map(|o| o.eigenvalue * o.probability)
            .sum()
    }

    /// Draws an outcome index from the support using one uniform variate.
    pub(crate) fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index_for(rng.random())
    }

    /// Outcome selected by the variate `u` in `[0, 1)`: the first supported
    /// outcome whose cumulative probability exceeds `u` times the total.
    pub fn index_for(&self, u: f64) -> usize {
        let total: f64 = self
            .outcomes
            .iter()
            .filter(|o| o.post_state.is_some())
            .map(|o| o.probability)
            .sum();
        let target = u * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (k, o) in self.outcomes.iter().enumerate() {
            if o.post_state.is_none() {
                continue;
            }
            acc += o.probability;
            last = k;
            if target < acc {
                return k;
            }
        }
        last
    }
}

fn clamp(p: f64) -> f64 {
    if p < PROBABILITY_FLOOR {
        0.0
    } else {
        p.min(1.0)
    }
}

/// Born probabilities and post-states for every distinct answer, without
/// changing `state`.
pub fn peek(state: &StateVector, q: &Observable) -> Result<OutcomeDistribution> {
    state.ensure_dim(q.d_r())?;
    let eig = q.eigen();
    let outcomes = (0..eig.clusters().len())
        .map(|k| {
            let (post, p) = state.project(&eig.cluster_basis(k));
            let probability = clamp(p);
            Outcome {
                eigenvalue: eig.cluster_value(k),
                probability,
                post_state: if probability > 0.0 { post } else { None },
            }
        })
        .collect();
    Ok(OutcomeDistribution { outcomes })
}

/// Samples an answer and returns it with the collapsed state.
pub fn ask<R: Rng + ?Sized>(
    state: &StateVector,
    q: &Observable,
    rng: &mut R,
) -> Result<(f64, StateVector)> {
    let (_, eigenvalue, post) = ask_indexed(state, q, rng)?;
    Ok((eigenvalue, post))
}

pub(crate) fn ask_indexed<R: Rng + ?Sized>(
    state: &StateVector,
    q: &Observable,
    rng: &mut R,
) -> Result<(usize, f64, StateVector)> {
    let mut dist = peek(state, q)?;
    let k = dist.sample_index(rng);
    let outcome = dist.outcomes.swap_remove(k);
    let post = outcome
        .post_state
        .ok_or_else(|| Error::BadParameter("state has no support on any answer".into()))?;
    Ok((k, outcome.eigenvalue, post))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointOutcome {
    /// One eigenvalue per question.
    pub eigenvalues: Vec<f64>,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_state: Option<StateVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    pub outcomes: Vec<JointOutcome>,
}

impl JointDistribution {
    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Marginal distribution of question `k` as (eigenvalue, probability), ascending.
    pub fn marginal(&self, k: usize, tol: f64) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for o in &self.outcomes {
            let v = o.eigenvalues[k];
            match out.iter_mut().find(|e| (e.0 - v).abs() <= tol) {
                Some(e) => e.1 += o.probability,
                None => out.push((v, o.probability)),
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }
}

/// Distribution over joint answers of mutually commuting questions.
pub fn joint_peek(state: &StateVector, qs: &[&Observable]) -> Result<JointDistribution> {
    if qs.is_empty() {
        return Err(Error::BadParameter(
            "joint_peek needs at least one question".into(),
        ));
    }
    for q in qs {
        state.ensure_dim(q.d_r())?;
    }
    if let [q] = qs {
        let single = peek(state, q)?;
        return Ok(JointDistribution {
            outcomes: single
                .outcomes
                .into_iter()
                .map(|o| JointOutcome {
                    eigenvalues: vec![o.eigenvalue],
                    probability: o.probability,
                    post_state: o.post_state,
                })
                .collect(),
        });
    }
    let matrices: Vec<ComplexMatrix> = qs.iter().map(|q| q.matrix().clone()).collect();
    let joint = simultaneous_eigenbasis(&matrices)?;
    let outcomes = joint
        .blocks
        .iter()
        .map(|b| {
            let (post, p) = state.project(&joint.basis.columns(b.clone()));
            let probability = clamp(p);
            JointOutcome {
                eigenvalues: joint.weights[b.start].clone(),
                probability,
                post_state: if probability > 0.0 { post } else { None },
            }
        })
        .collect();
    Ok(JointDistribution { outcomes })
}

/// `⟨ψ|H|ψ⟩`.
pub fn expectation(state: &StateVector, q: &Observable) -> Result<f64> {
    state.ensure_dim(q.d_r())?;
    let hpsi = q.matrix().mul_vec(state.amplitudes())?;
    Ok(state
        .amplitudes()
        .iter()
        .zip(&hpsi)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .re)
}

/// Applies `exp(-i θ H)` to the state.
pub fn evolve(state: &StateVector, h: &Observable, theta: f64) -> Result<StateVector> {
    state.ensure_dim(h.d_r())?;
    if theta == 0.0 {
        return Ok(state.clone());
    }
    let u = spectral_exp(h.eigen(), theta);
    let out = u.mul_vec(state.amplitudes())?;
    let norm = crate::kernel::vec_norm(&out);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    Ok(StateVector::from_unit(out))
}
