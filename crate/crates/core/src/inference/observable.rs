use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{hermitian_eigen, hermitize, ComplexMatrix, EigenSystem};
use crate::lie::GeneratorSet;

/// Allowed deviation of a question's coefficient norm from one.
pub const COEFFICIENT_NORM_TOL: f64 = 1e-9;

/// A question: a unit real combination of generators and its resolved matrix.
#[derive(Debug, Clone)]
pub struct Observable {
    name: String,
    coefficients: Vec<f64>,
    matrix: ComplexMatrix,
    eigen: EigenSystem,
}

/// Rescales a coefficient vector to unit Euclidean norm.
pub fn normalize_coefficients(coeffs: &[f64]) -> Result<Vec<f64>> {
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NotNormalized(norm));
    }
    Ok(coeffs.iter().map(|c| c / norm).collect())
}

/// Resolves `Σ_a c_a t_a` for a unit coefficient vector.
pub fn compose_question(coeffs: &[f64], set: &GeneratorSet) -> Result<Observable> {
    if coeffs.len() != set.d() {
        return Err(Error::LengthMismatch {
            expected: set.d(),
            found: coeffs.len(),
        });
    }
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > COEFFICIENT_NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let matrix = hermitize(&set.combine(coeffs)?);
    let eigen = hermitian_eigen(&matrix)?;
    Ok(Observable {
        name: String::new(),
        coefficients: coeffs.to_vec(),
        matrix,
        eigen,
    })
}

impl Observable {
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Display name; empty for anonymous questions.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    pub fn d_r(&self) -> usize {
        self.matrix.rows()
    }

    /// Distinct answers, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        (0..self.eigen.clusters().len())
            .map(|k| self.eigen.cluster_value(k))
            .collect()
    }

    /// The same question with every coefficient negated.
    pub fn negated(&self) -> Result<Observable> {
        let coeffs: Vec<f64> = self.coefficients.iter().map(|c| -c).collect();
        let matrix = self.matrix.scale_real(-1.0);
        let eigen = hermitian_eigen(&matrix)?;
        Ok(Observable {
            name: self.name.clone(),
            coefficients: coeffs,
            matrix,
            eigen,
        })
    }

    pub fn summary(&self) -> QuestionSummary {
        QuestionSummary {
            name: self.name.clone(),
            coefficients: self.coefficients.clone(),
            spectrum: self.spectrum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionSummary {
    pub name: String,
    pub coefficients: Vec<f64>,
    pub spectrum: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::su_fundamental;

    #[test]
    fn unit_vector_selects_generator() {
        let r = su_fundamental(3).unwrap();
        let mut c = vec![0.0; 8];
        c[7] = 1.0;
        let q = compose_question(&c, &r).unwrap();
        assert!(q.matrix().max_abs_diff(r.generator(7)) <= 1e-12);
        let s = 1.0 / 3f64.sqrt();
        let spec = q.spectrum();
        assert_eq!(spec.len(), 2);
        assert!((spec[0] + s).abs() <= 1e-12 && (spec[1] - s / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn rejects_bad_coefficients() {
        let r = su_fundamental(2).unwrap();
        assert!(matches!(
            compose_question(&[1.0, 0.0], &r),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            compose_question(&[0.95, 0.312, 0.0], &r),
            Err(Error::NotNormalized(_))
        ));
        let c = normalize_coefficients(&[0.95, 0.312, 0.0]).unwrap();
        assert!(compose_question(&c, &r).is_ok());
        assert!(normalize_coefficients(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn negation_flips_spectrum() {
        let r = su_fundamental(3).unwrap();
        let mut c = vec![0.0; 8];
        c[2] = 1.0;
        let beer = compose_question(&c, &r).unwrap();
        let lager = compose_question(&c.iter().map(|x| -x).collect::<Vec<_>>(), &r).unwrap();
        let mut flipped: Vec<f64> = beer.spectrum().iter().map(|x| -x).collect();
        flipped.reverse();
        for (a, b) in lager.spectrum().iter().zip(&flipped) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert!(
            beer.negated()
                .unwrap()
                .matrix()
                .max_abs_diff(lager.matrix())
                == 0.0
        );
    }
}
