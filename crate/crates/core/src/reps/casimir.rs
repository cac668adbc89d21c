//! Casimir operators, Cartan weights and the equivalence test.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{simultaneous_eigenbasis, ComplexMatrix};
use crate::lie::{d_symbols, su_fundamental, AlgebraId, DSymbols, GeneratorSet};

/// `C2 = Σ_a t_a²`.
pub fn quadratic_casimir(set: &GeneratorSet) -> ComplexMatrix {
    let n = set.d_r();
    let mut c = ComplexMatrix::zeros(n, n);
    for g in set.generators() {
        c.add_scaled(Complex64::new(1.0, 0.0), &(g * g));
    }
    c
}

/// `C3 = Σ_abc d_abc t_a t_b t_c`.
pub fn cubic_casimir(set: &GeneratorSet, d: &DSymbols) -> Result<ComplexMatrix> {
    if d.d() != set.d() {
        return Err(Error::AlgebraMismatch(format!(
            "d-symbols for {} generators, set has {}",
            d.d(),
            set.d()
        )));
    }
    let gens = set.generators();
    let n = set.d_r();
    let dim = set.d();
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..dim {
        // inner = Σ_b t_b (Σ_c d_abc t_c)
        let mut inner = ComplexMatrix::zeros(n, n);
        for b in 0..dim {
            let mut m = ComplexMatrix::zeros(n, n);
            let mut any = false;
            for (c, gc) in gens.iter().enumerate() {
                let v = d.get(a, b, c);
                if v != 0.0 {
                    m.add_scaled(Complex64::new(v, 0.0), gc);
                    any = true;
                }
            }
            if any {
                inner.add_scaled(Complex64::new(1.0, 0.0), &(&gens[b] * &m));
            }
        }
        out.add_scaled(Complex64::new(1.0, 0.0), &(&gens[a] * &inner));
    }
    Ok(out)
}

/// Mean diagonal value `tr(M)/n`; the scalar of a Casimir on an irrep.
pub fn casimir_scalar(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 {
        return 0.0;
    }
    m.trace().re / m.rows() as f64
}

/// Largest deviation of `m` from `scalar · I`.
pub fn scalar_deviation(m: &ComplexMatrix) -> f64 {
    let s = casimir_scalar(m);
    m.max_abs_diff(&ComplexMatrix::identity(m.rows()).scale_real(s))
}

/// d-symbols of the algebra's fundamental, when the algebra has one we build.
pub fn d_symbols_for(algebra: &AlgebraId) -> Option<DSymbols> {
    match algebra {
        AlgebraId::Su(n) => d_symbols(&su_fundamental(*n).ok()?).ok(),
        AlgebraId::Custom(_) => None,
    }
}

/// Simultaneous eigenvalues of the chosen commuting generators, sorted lexicographically.
pub fn weights(set: &GeneratorSet, cartan_indices: &[usize]) -> Result<Vec<Vec<f64>>> {
    let hs: Vec<ComplexMatrix> = cartan_indices
        .iter()
        .map(|&i| {
            set.generators()
                .get(i)
                .cloned()
                .ok_or_else(|| Error::BadParameter(format!("no generator with index {i}")))
        })
        .collect::<Result<_>>()?;
    let mut w = simultaneous_eigenbasis(&hs)?.weights;
    w.sort_by(|x, y| {
        x.iter()
            .zip(y)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(w)
}

/// Weights on the algebra's standard Cartan generators.
pub fn cartan_weights(set: &GeneratorSet) -> Result<Vec<Vec<f64>>> {
    let idx = set
        .algebra()
        .cartan_indices()
        .ok_or_else(|| Error::Unsupported(format!("no Cartan choice for {}", set.algebra())))?;
    weights(set, &idx)
}

/// Pairs every tuple of `a` with an unused tuple of `b` within `tol` per component.
pub fn weight_multisets_match(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for wa in a {
        for (k, wb) in b.iter().enumerate() {
            if !used[k]
                && wa.len() == wb.len()
                && wa.iter().zip(wb).all(|(x, y)| (x - y).abs() <= tol)
            {
                used[k] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Equivalence of two representations by their Cartan weight multisets.
///
/// Different algebras or dimensions are never equivalent. Sets with no known
/// Cartan choice fall back to comparing every generator's spectrum, which is
/// only a necessary condition.
pub fn rep_equivalent(r1: &GeneratorSet, r2: &GeneratorSet) -> bool {
    if r1.algebra() != r2.algebra() || r1.d_r() != r2.d_r() || r1.d() != r2.d() {
        return false;
    }
    const TOL: f64 = 1e-8;
    match (cartan_weights(r1), cartan_weights(r2)) {
        (Ok(w1), Ok(w2)) => weight_multisets_match(&w1, &w2, TOL),
        _ => r1.generators().iter().zip(r2.generators()).all(|(a, b)| {
            match (
                crate::kernel::hermitian_eigen(a),
                crate::kernel::hermitian_eigen(b),
            ) {
                (Ok(ea), Ok(eb)) => ea
                    .eigenvalues
                    .iter()
                    .zip(&eb.eigenvalues)
                    .all(|(x, y)| (x - y).abs() <= TOL),
                _ => false,
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::commutator;
    use crate::reps::{adjoint_of, conjugate_rep, su2_spin_irrep, tensor_rep};

    fn commutes_with_all(c: &ComplexMatrix, set: &GeneratorSet, tol: f64) -> bool {
        set.generators()
            .iter()
            .all(|g| commutator(c, g).unwrap().max_abs() <= tol * c.frobenius_norm().max(1.0))
    }

    #[test]
    fn quadratic_casimir_values() {
        let su3 = su_fundamental(3).unwrap();
        let c = quadratic_casimir(&su3);
        assert!(c.max_abs_diff(&ComplexMatrix::identity(3).scale_real(4.0 / 3.0)) <= 1e-14);

        let su2 = su_fundamental(2).unwrap();
        let c = quadratic_casimir(&su2);
        assert!(c.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.75)) <= 1e-15);

        let spin1 = su2_spin_irrep(3).unwrap();
        assert!(
            quadratic_casimir(&spin1).max_abs_diff(&ComplexMatrix::identity(3).scale_real(2.0))
                <= 1e-14
        );
    }

    #[test]
    fn casimir_commutes_on_reducible_sets() {
        let r = su_fundamental(3).unwrap();
        let t = tensor_rep(&r, &r).unwrap();
        let c2 = quadratic_casimir(&t);
        assert!(commutes_with_all(&c2, &t, 1e-10));
        assert!(scalar_deviation(&c2) > 0.1);
        let c3 = cubic_casimir(&t, &d_symbols_for(t.algebra()).unwrap()).unwrap();
        assert!(commutes_with_all(&c3, &t, 1e-8));
    }

    #[test]
    fn cubic_casimir_vanishes_for_su2() {
        let d = d_symbols_for(&AlgebraId::Su(2)).unwrap();
        for d_r in 1..=4 {
            let c3 = cubic_casimir(&su2_spin_irrep(d_r).unwrap(), &d).unwrap();
            assert!(c3.max_abs() <= 1e-14);
        }
    }

    #[test]
    fn cubic_casimir_flips_under_conjugation() {
        let r = su_fundamental(3).unwrap();
        let d = d_symbols_for(r.algebra()).unwrap();
        let c3 = cubic_casimir(&r, &d).unwrap();
        let c3bar = cubic_casimir(&conjugate_rep(&r), &d).unwrap();
        assert!(scalar_deviation(&c3) <= 1e-12);
        let (s, sbar) = (casimir_scalar(&c3), casimir_scalar(&c3bar));
        assert!(s.abs() > 0.1);
        assert!((s + sbar).abs() <= 1e-12);
        // (n² - 4)(n² - 1) / (4 n²) for the fundamental of su(n), n = 3.
        assert!((s - 10.0 / 9.0).abs() <= 1e-12);

        let adj = adjoint_of(&r).unwrap();
        assert!(cubic_casimir(&adj, &d).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn cubic_casimir_rejects_wrong_d_tensor() {
        let d = d_symbols_for(&AlgebraId::Su(2)).unwrap();
        let r = su_fundamental(3).unwrap();
        assert!(matches!(
            cubic_casimir(&r, &d),
            Err(Error::AlgebraMismatch(_))
        ));
    }

    #[test]
    fn su3_fundamental_weights() {
        let w = cartan_weights(&su_fundamental(3).unwrap()).unwrap();
        let s = 1.0 / (2.0 * 3f64.sqrt());
        let want = vec![vec![-0.5, s], vec![0.0, -2.0 * s], vec![0.5, s]];
        assert!(weight_multisets_match(&w, &want, 1e-14));
    }

    #[test]
    fn su2_doublet_weights() {
        let w = weights(&su_fundamental(2).unwrap(), &[2]).unwrap();
        assert_eq!(w.len(), 2);
        assert!((w[0][0] + 0.5).abs() < 1e-15 && (w[1][0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weights_need_commuting_generators() {
        let r = su_fundamental(3).unwrap();
        assert!(matches!(
            weights(&r, &[0, 1]),
            Err(Error::NonCommuting { .. })
        ));
    }

    #[test]
    fn equivalence() {
        let su2 = su_fundamental(2).unwrap();
        assert!(rep_equivalent(&su2, &conjugate_rep(&su2)));
        let su3 = su_fundamental(3).unwrap();
        assert!(rep_equivalent(&su3, &su3));
        assert!(!rep_equivalent(&su3, &conjugate_rep(&su3)));
        assert!(!rep_equivalent(&su2, &su3));
        assert!(!rep_equivalent(&su2, &su2_spin_irrep(3).unwrap()));
    }
}
