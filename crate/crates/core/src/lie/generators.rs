//! Generator sets: Hermitian matrices realising a Lie algebra representation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::algebra::AlgebraId;
use crate::error::{Error, Result};
use crate::kernel::{commutator, ComplexMatrix, I};

/// `d` Hermitian `d_r x d_r` matrices with `tr(t_a t_b) = T δ_ab`.
///
/// Serializes as `{algebra_id, d_r, T, matrices}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSet", into = "RawGeneratorSet")]
pub struct GeneratorSet {
    algebra: AlgebraId,
    dim: usize,
    trace_index: f64,
    generators: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawGeneratorSet {
    algebra_id: AlgebraId,
    d_r: usize,
    #[serde(rename = "T")]
    trace_index: f64,
    matrices: Vec<ComplexMatrix>,
}

impl TryFrom<RawGeneratorSet> for GeneratorSet {
    type Error = Error;

    fn try_from(raw: RawGeneratorSet) -> Result<Self> {
        let set = GeneratorSet::from_parts(raw.algebra_id, raw.d_r, raw.matrices)?;
        if (set.trace_index - raw.trace_index).abs() > 1e-10 * set.trace_index.max(1.0) {
            return Err(Error::validation(
                "T",
                format!(
                    "declared {} but generators give {}",
                    raw.trace_index, set.trace_index
                ),
            ));
        }
        Ok(set)
    }
}

impl From<GeneratorSet> for RawGeneratorSet {
    fn from(s: GeneratorSet) -> Self {
        RawGeneratorSet {
            algebra_id: s.algebra,
            d_r: s.dim,
            trace_index: s.trace_index,
            matrices: s.generators,
        }
    }
}

impl GeneratorSet {
    /// Wraps matrices after checking only that they are `dim x dim`.
    ///
    /// The trace index is the mean of `tr(t_a²)`; use [`verify_generator_set`]
    /// for the full invariant check.
    pub fn from_parts(
        algebra: AlgebraId,
        dim: usize,
        generators: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        for (a, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::validation(
                    format!("matrices[{a}]"),
                    format!("expected {dim}x{dim}, found {}x{}", g.rows(), g.cols()),
                ));
            }
        }
        let trace_index = if generators.is_empty() {
            0.0
        } else {
            generators
                .iter()
                .map(|g| trace_product(g, g).re)
                .sum::<f64>()
                / generators.len() as f64
        };
        Ok(Self {
            algebra,
            dim,
            trace_index,
            generators,
        })
    }

    /// `d` zero matrices of size `dim`: the trivial representation repeated `dim` times.
    pub fn trivial(algebra: AlgebraId, d: usize, dim: usize) -> Self {
        Self {
            algebra,
            dim,
            trace_index: 0.0,
            generators: vec![ComplexMatrix::zeros(dim, dim); d],
        }
    }

    pub fn algebra(&self) -> &AlgebraId {
        &self.algebra
    }

    /// Number of generators.
    pub fn d(&self) -> usize {
        self.generators.len()
    }

    /// Representation dimension.
    pub fn d_r(&self) -> usize {
        self.dim
    }

    pub fn trace_index(&self) -> f64 {
        self.trace_index
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn generator(&self, a: usize) -> &ComplexMatrix {
        &self.generators[a]
    }

    pub fn into_generators(self) -> Vec<ComplexMatrix> {
        self.generators
    }

    /// `Σ_a c_a t_a`.
    pub fn combine(&self, coeffs: &[f64]) -> Result<ComplexMatrix> {
        if coeffs.len() != self.d() {
            return Err(Error::LengthMismatch {
                expected: self.d(),
                found: coeffs.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if *c != 0.0 {
                out.add_scaled(Complex64::new(*c, 0.0), g);
            }
        }
        Ok(out)
    }

    /// Expansion coefficients `c_a = tr(H t_a) / T` of a matrix in the generator basis.
    pub fn coefficients_of(&self, h: &ComplexMatrix) -> Result<Vec<f64>> {
        if h.rows() != self.dim || h.cols() != self.dim {
            return Err(Error::dims(self.dim, h.rows()));
        }
        if self.trace_index <= 0.0 {
            return Err(Error::BadParameter(
                "trivial generator set has no basis".into(),
            ));
        }
        Ok(self
            .generators
            .iter()
            .map(|g| trace_product(h, g).re / self.trace_index)
            .collect())
    }

    /// Relabels the algebra tag without touching the matrices.
    pub fn with_algebra(mut self, algebra: AlgebraId) -> Self {
        self.algebra = algebra;
        self
    }
}

/// `tr(AB)` in O(n²).
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..a.cols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Fundamental representation of su(n) in the generalized Gell-Mann basis, `T = 1/2`.
///
/// Ordering: for `k = 2..=n`, the symmetric and antisymmetric off-diagonal
/// pairs `(j, k)` for `j < k`, then the `k`-th diagonal generator. For n = 2
/// this is Pauli/2 and for n = 3 the conventional Gell-Mann order `t_1..t_8`.
pub fn su_fundamental(n: usize) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(Error::BadParameter(format!("su(n) needs n >= 2, got {n}")));
    }
    let half = Complex64::new(0.5, 0.0);
    let mut gens = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            let mut sym = ComplexMatrix::zeros(n, n);
            sym[(j, k)] = half;
            sym[(k, j)] = half;
            gens.push(sym);

            let mut anti = ComplexMatrix::zeros(n, n);
            anti[(j, k)] = -I * 0.5;
            anti[(k, j)] = I * 0.5;
            gens.push(anti);
        }
        // diag(1, ..., 1, -k, 0, ...) scaled so tr(t²) = 1/2.
        let m = (k + 1) as f64;
        let scale = 0.5 * (2.0 / (m * (m - 1.0))).sqrt();
        let mut diag = vec![0.0; n];
        for d in diag.iter_mut().take(k) {
            *d = scale;
        }
        diag[k] = -(k as f64) * scale;
        gens.push(ComplexMatrix::from_real_diagonal(&diag));
    }
    GeneratorSet::from_parts(AlgebraId::Su(n), n, gens)
}

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACELESS_TOL: f64 = 1e-12;
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
pub const CLOSURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub algebra_id: String,
    pub d: usize,
    pub d_r: usize,
    pub trace_index: f64,
    /// No generators or zero-dimensional matrices.
    pub degenerate: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.degenerate && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Measures every generator-set invariant against its tolerance.
pub fn verify_generator_set(set: &GeneratorSet) -> VerificationReport {
    let gens = set.generators();
    let degenerate = gens.is_empty() || set.d_r() == 0;
    let scale = gens.iter().map(|g| g.frobenius_norm()).fold(1.0, f64::max);
    let t = set.trace_index();

    let herm = gens
        .iter()
        .map(|g| g.hermiticity_residual())
        .fold(0.0, f64::max);
    let traceless = gens.iter().map(|g| g.trace().norm()).fold(0.0, f64::max);

    let mut ortho = 0.0_f64;
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            let want = if a == b { t } else { 0.0 };
            ortho = ortho.max((trace_product(ga, gb) - want).norm());
        }
    }

    let closure = closure_residual(set);

    let checks = vec![
        Check::new("hermiticity", herm, HERMITICITY_TOL * scale),
        Check::new("traceless", traceless, TRACELESS_TOL * scale),
        Check::new(
            "trace_orthonormality",
            ortho,
            ORTHONORMALITY_TOL * t.max(1.0),
        ),
        Check::new("closure", closure, CLOSURE_TOL * scale),
    ];
    VerificationReport {
        algebra_id: set.algebra().to_string(),
        d: set.d(),
        d_r: set.d_r(),
        trace_index: t,
        degenerate,
        checks,
    }
}

/// Distance of every `[t_a, t_b]` from the real span of `{i t_c}`.
///
/// Projects with the trace form, so it assumes trace-orthogonal generators;
/// a trivial set (T = 0) must have vanishing commutators.
fn closure_residual(set: &GeneratorSet) -> f64 {
    let gens = set.generators();
    let t = set.trace_index();
    let mut worst = 0.0_f64;
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let Ok(c) = commutator(&gens[a], &gens[b]) else {
                return f64::INFINITY;
            };
            if t <= 1e-14 {
                worst = worst.max(c.max_abs());
                continue;
            }
            // [t_a, t_b] = i f_abc t_c with f_abc = -i tr([t_a,t_b] t_c) / T.
            let mut rebuilt = ComplexMatrix::zeros(set.d_r(), set.d_r());
            for g in gens {
                let f = (-I * trace_product(&c, g) / t).re;
                if f != 0.0 {
                    rebuilt.add_scaled(I * f, g);
                }
            }
            worst = worst.max(c.max_abs_diff(&rebuilt));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_is_pauli_over_two() {
        let r = su_fundamental(2).unwrap();
        assert_eq!(r.d(), 3);
        assert_eq!(r.trace_index(), 0.5);
        assert_eq!(
            *r.generator(2),
            ComplexMatrix::from_real_diagonal(&[0.5, -0.5])
        );
        assert_eq!(r.generator(1)[(0, 1)], Complex64::new(0.0, -0.5));
    }

    #[test]
    fn su3_diagonals_are_t3_and_t8() {
        let r = su_fundamental(3).unwrap();
        assert_eq!(r.d(), 8);
        let s = 1.0 / (2.0 * 3f64.sqrt());
        assert_eq!(
            *r.generator(2),
            ComplexMatrix::from_real_diagonal(&[0.5, -0.5, 0.0])
        );
        assert!(
            r.generator(7)
                .max_abs_diff(&ComplexMatrix::from_real_diagonal(&[s, s, -2.0 * s]))
                < 1e-15
        );
        // λ_5 sits on the (1,3) pair.
        assert_eq!(r.generator(4)[(0, 2)], Complex64::new(0.0, -0.5));
    }

    #[test]
    fn su_n_sets_verify_cleanly() {
        for n in 2..=5 {
            let r = su_fundamental(n).unwrap();
            assert_eq!(r.d(), n * n - 1);
            let report = verify_generator_set(&r);
            assert!(report.passed(), "su({n}): {report:?}");
            for c in &report.checks {
                assert!(c.residual <= 1e-12, "su({n}) {}: {}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn bad_parameter_below_two() {
        assert!(matches!(su_fundamental(1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn verify_flags_non_hermitian_copy() {
        let r = su_fundamental(2).unwrap();
        let mut gens = r.clone().into_generators();
        // Complex-symmetric copy of t_2: upper triangle mirrored without conjugation.
        let mut bad = gens[1].clone();
        bad[(1, 0)] = bad[(0, 1)];
        gens[1] = bad;
        let broken = GeneratorSet::from_parts(AlgebraId::Su(2), 2, gens).unwrap();
        let report = verify_generator_set(&broken);
        assert!(!report.passed());
        assert!(!report.check("hermiticity").unwrap().passed);
    }

    #[test]
    fn verify_marks_empty_set_degenerate() {
        let empty = GeneratorSet::from_parts(AlgebraId::Custom("none".into()), 2, vec![]).unwrap();
        let report = verify_generator_set(&empty);
        assert!(report.degenerate);
        assert!(!report.passed());
    }

    #[test]
    fn verify_flags_unclosed_set() {
        // t_1 and t_2 of su(2) alone: their commutator needs t_3.
        let r = su_fundamental(2).unwrap();
        let gens = r.into_generators()[..2].to_vec();
        let partial =
            GeneratorSet::from_parts(AlgebraId::Custom("partial".into()), 2, gens).unwrap();
        let report = verify_generator_set(&partial);
        assert!(!report.check("closure").unwrap().passed);
    }

    #[test]
    fn combine_and_expand_are_inverse() {
        let r = su_fundamental(3).unwrap();
        let c = [0.1, -0.2, 0.3, 0.0, 0.5, -0.6, 0.7, 0.05];
        let h = r.combine(&c).unwrap();
        let back = r.coefficients_of(&h).unwrap();
        for (x, y) in c.iter().zip(back) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(matches!(
            r.combine(&[1.0, 0.0]),
            Err(Error::LengthMismatch {
                expected: 8,
                found: 2
            })
        ));
    }

    #[test]
    fn serde_round_trip_checks_trace_index() {
        let r = su_fundamental(2).unwrap();
        let mut json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["algebra_id"], "su2");
        assert_eq!(json["T"], 0.5);
        let back: GeneratorSet = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, r);
        json["T"] = serde_json::json!(1.0);
        assert!(serde_json::from_value::<GeneratorSet>(json).is_err());
    }
}
