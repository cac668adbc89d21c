//! Building representations: su(2) spin ladders, adjoints, conjugates and
//! tensor products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{kron, ComplexMatrix, I};
use crate::lie::{
    jacobi_residual, structure_constants, AlgebraId, GeneratorSet, StructureConstants,
};

/// Spin-`j` irrep of su(2) with `d_r = 2j + 1`, basis ordered `m = j, j-1, ..., -j`.
///
/// `d_r = 1` gives three zero matrices.
pub fn su2_spin_irrep(d_r: usize) -> Result<GeneratorSet> {
    if d_r < 1 {
        return Err(Error::BadParameter("spin irrep needs d_r >= 1".into()));
    }
    let j = (d_r as f64 - 1.0) / 2.0;
    let mut raise = ComplexMatrix::zeros(d_r, d_r);
    for i in 1..d_r {
        // Column i holds m = j - i; t+ sends it to row i - 1 (m + 1).
        let m = j - i as f64;
        raise[(i - 1, i)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let t1 = (&raise + &lower).scale_real(0.5);
    let t2 = (&raise - &lower).scale(-I * 0.5);
    let t3 = ComplexMatrix::from_real_diagonal(&(0..d_r).map(|i| j - i as f64).collect::<Vec<_>>());
    GeneratorSet::from_parts(AlgebraId::Su(2), d_r, vec![t1, t2, t3])
}

/// Adjoint representation `(t_a)_bc = -i f_abc`.
pub fn adjoint_rep(f: &StructureConstants, algebra: AlgebraId) -> Result<GeneratorSet> {
    let residual = jacobi_residual(f);
    if residual > 1e-10 {
        return Err(Error::JacobiViolation(residual));
    }
    let d = f.d();
    let gens = (0..d)
        .map(|a| {
            let mut m = ComplexMatrix::zeros(d, d);
            for b in 0..d {
                for c in 0..d {
                    m[(b, c)] = -I * f.get(a, b, c);
                }
            }
            m
        })
        .collect();
    GeneratorSet::from_parts(algebra, d, gens)
}

/// The adjoint of the algebra a generator set realises.
pub fn adjoint_of(set: &GeneratorSet) -> Result<GeneratorSet> {
    adjoint_rep(&structure_constants(set)?, set.algebra().clone())
}

/// Conjugate representation `-t_a*`.
pub fn conjugate_rep(set: &GeneratorSet) -> GeneratorSet {
    let gens = set
        .generators()
        .iter()
        .map(|g| g.map(|z| -z.conj()))
        .collect();
    GeneratorSet::from_parts(set.algebra().clone(), set.d_r(), gens)
        .expect("conjugation preserves shapes")
}

/// Tensor product representation `t_a ⊗ 1 + 1 ⊗ s_a`.
///
/// Both factors must carry the same algebra tag, the same number of
/// generators, and (when neither is trivial) matching structure constants.
pub fn tensor_rep(left: &GeneratorSet, right: &GeneratorSet) -> Result<GeneratorSet> {
    if left.algebra() != right.algebra() || left.d() != right.d() {
        return Err(Error::AlgebraMismatch(format!(
            "{} with {} generators vs {} with {}",
            left.algebra(),
            left.d(),
            right.algebra(),
            right.d()
        )));
    }
    if left.trace_index() > 1e-14 && right.trace_index() > 1e-14 {
        let diff = structure_constants(left)?.max_abs_diff(&structure_constants(right)?);
        if diff > 1e-10 {
            return Err(Error::AlgebraMismatch(format!(
                "structure constants differ by {diff:.3e}"
            )));
        }
    }
    let il = ComplexMatrix::identity(left.d_r());
    let ir = ComplexMatrix::identity(right.d_r());
    let gens = left
        .generators()
        .iter()
        .zip(right.generators())
        .map(|(t, s)| &kron(t, &ir) + &kron(&il, s))
        .collect();
    GeneratorSet::from_parts(left.algebra().clone(), left.d_r() * right.d_r(), gens)
}
