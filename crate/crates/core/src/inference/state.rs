use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{fix_phase, inner, vec_norm, ComplexMatrix, ZERO};

/// Allowed deviation of `‖ψ‖` from one.
pub const NORM_TOL: f64 = 1e-12;

/// A pure state: unit complex vector of length `d_r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if amplitudes.is_empty() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if amplitudes.is_empty() || norm < 1e-300 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `(1, 1, ..., 1) / √d`.
    pub fn uniform(d_r: usize) -> Result<Self> {
        Self::from_real(&vec![1.0; d_r])
    }

    /// The `i`-th standard basis vector.
    pub fn basis(d_r: usize, i: usize) -> Result<Self> {
        if i >= d_r {
            return Err(Error::BadParameter(format!(
                "basis index {i} out of range for dimension {d_r}"
            )));
        }
        let mut a = vec![ZERO; d_r];
        a[i] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: a })
    }

    /// Normalized projection `V V† ψ / ‖V† ψ‖` onto the span of `basis`'s
    /// columns, with the phase convention applied. Returns the state and
    /// the squared norm of the projection.
    pub(crate) fn project(&self, basis: &ComplexMatrix) -> (Option<StateVector>, f64) {
        let n = self.dim();
        let coeffs: Vec<Complex64> = (0..basis.cols())
            .map(|k| {
                (0..n)
                    .map(|i| basis[(i, k)].conj() * self.amplitudes[i])
                    .sum()
            })
            .collect();
        let weight: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if weight < super::PROBABILITY_FLOOR {
            return (None, weight);
        }
        let mut out = vec![ZERO; n];
        for (k, c) in coeffs.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate() {
                *o += basis[(i, k)] * c;
            }
        }
        fix_phase(&mut out);
        (StateVector::normalized(out).ok(), weight)
    }

    pub(crate) fn from_unit(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.overlap(other).norm()
    }

    pub(crate) fn ensure_dim(&self, d_r: usize) -> Result<()> {
        if self.dim() != d_r {
            return Err(Error::dims(
                format!("state of length {d_r}"),
                format!("length {}", self.dim()),
            ));
        }
        Ok(())
    }
}

impl TryFrom<Vec<Complex64>> for StateVector {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StateVector> for Vec<Complex64> {
    fn from(s: StateVector) -> Self {
        s.amplitudes
    }
}
