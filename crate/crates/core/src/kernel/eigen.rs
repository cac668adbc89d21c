//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, plus the
//! spectral routines built on it.

use std::ops::Range;

use num_complex::Complex64;

use super::matrix::{commutator, ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Relative tolerance used to group numerically degenerate eigenvalues.
pub const CLUSTER_RTOL: f64 = 1e-8;

/// Components below this magnitude are skipped when fixing eigenvector phases.
const PHASE_EPS: f64 = 1e-8;

/// Spectrum of a Hermitian matrix: ascending eigenvalues, orthonormal
/// eigenvectors as columns, and runs of numerically equal eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
    clusters: Vec<Range<usize>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn clusters(&self) -> &[Range<usize>] {
        &self.clusters
    }

    /// Start index of every cluster.
    pub fn cluster_boundaries(&self) -> Vec<usize> {
        self.clusters.iter().map(|r| r.start).collect()
    }

    /// Mean eigenvalue of a cluster.
    pub fn cluster_value(&self, k: usize) -> f64 {
        let r = &self.clusters[k];
        self.eigenvalues[r.clone()].iter().sum::<f64>() / r.len() as f64
    }

    /// Orthonormal basis of a cluster's eigenspace.
    pub fn cluster_basis(&self, k: usize) -> ComplexMatrix {
        self.eigenvectors.columns(self.clusters[k].clone())
    }
}

fn cluster_tolerance(m: &ComplexMatrix) -> f64 {
    CLUSTER_RTOL * m.frobenius_norm().max(1.0)
}

/// Groups sorted values into runs whose adjacent gaps are at most `tol`.
pub(crate) fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > tol {
            if i > start {
                clusters.push(start..i);
            }
            start = i;
        }
    }
    clusters
}

/// Rotates `v` so its first component of magnitude above `1e-8` is real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    if let Some(lead) = v.iter().find(|z| z.norm() > PHASE_EPS).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

pub(crate) fn fix_column_phases(m: &mut ComplexMatrix) {
    for j in 0..m.cols() {
        let mut col = m.column(j);
        fix_phase(&mut col);
        for (i, z) in col.into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Cyclic Jacobi: each pivot `(p, q)` is annihilated by a phase shift that
/// makes `a_pq` real followed by a real plane rotation. Converges when the
/// off-diagonal norm falls below `1e-14 ‖M‖_F` or stops improving at the
/// roundoff floor.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<EigenSystem> {
    if !m.is_square() {
        return Err(Error::dims(
            "square matrix",
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    m.ensure_hermitian()?;
    let n = m.rows();
    let frob = m.frobenius_norm();

    // Symmetrise so the iteration starts exactly Hermitian.
    let mut a = vec![ZERO; n * n];
    for i in 0..n {
        a[i * n + i] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut z = vec![ZERO; n * n];
    for i in 0..n {
        z[i * n + i] = ONE;
    }

    let skip = 1e-18 * frob;
    let mut off = off_diagonal_norm(&a, n);
    let mut sweeps = 0;
    while off > 1e-14 * frob {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let beta = a[p * n + q];
                let b = beta.norm();
                if b <= skip {
                    continue;
                }
                let ph = beta / b;
                let (alpha, gamma) = (a[p * n + p].re, a[q * n + q].re);
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let vpp = Complex64::new(c, 0.0);
                let vpq = Complex64::new(s, 0.0);
                let vqp = -s * ph.conj();
                let vqq = c * ph.conj();

                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = akp * vpp + akq * vqp;
                    a[k * n + q] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[q * n + k] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                for k in 0..n {
                    let (zkp, zkq) = (z[k * n + p], z[k * n + q]);
                    z[k * n + p] = zkp * vpp + zkq * vqp;
                    z[k * n + q] = zkp * vpq + zkq * vqq;
                }
            }
        }
        let next = off_diagonal_norm(&a, n);
        // Roundoff floor: further sweeps only shuffle noise.
        if next > 0.5 * off && next < 1e-11 * frob {
            break;
        }
        off = next;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (jj, &j) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, jj)] = z[i * n + j];
        }
    }
    fix_column_phases(&mut eigenvectors);
    let clusters = cluster_sorted(&eigenvalues, cluster_tolerance(m));
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
        clusters,
    })
}

/// `exp(-i θ H)` via the spectral decomposition of `H`.
pub fn unitary_exp(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(h)?;
    Ok(spectral_exp(&eig, theta))
}

/// `exp(-i θ H)` from an already computed spectrum.
pub fn spectral_exp(eig: &EigenSystem, theta: f64) -> ComplexMatrix {
    let n = eig.dim();
    let v = &eig.eigenvectors;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -theta * l))
        .collect();
    let mut u = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            u[(i, j)] = (0..n)
                .map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj())
                .sum();
        }
    }
    u
}

/// Common eigenbasis of commuting Hermitian matrices.
#[derive(Debug, Clone)]
pub struct SimultaneousEigenbasis {
    /// `weights[j][k]` is the eigenvalue of the k-th matrix on column `j`.
    pub weights: Vec<Vec<f64>>,
    pub basis: ComplexMatrix,
    /// Column ranges sharing one weight tuple.
    pub blocks: Vec<Range<usize>>,
}

/// Commutation tolerance for a pair, `1e-10 · max(1, ‖A‖_F ‖B‖_F)`.
pub fn commutes(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(bool, f64)> {
    let residual = commutator(a, b)?.max_abs();
    let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);
    Ok((residual <= 1e-10 * scale, residual))
}

/// Simultaneous eigenbasis of mutually commuting Hermitian matrices.
///
/// Diagonalises the first matrix, then each later one restricted to every
/// eigenspace found so far, splitting clusters as it goes.
pub fn simultaneous_eigenbasis(hs: &[ComplexMatrix]) -> Result<SimultaneousEigenbasis> {
    let first = hs
        .first()
        .ok_or_else(|| Error::BadParameter("no matrices to diagonalise".into()))?;
    let n = first.rows();
    for h in hs {
        if !h.is_square() || h.rows() != n {
            return Err(Error::dims(
                format!("{n}x{n}"),
                format!("{}x{}", h.rows(), h.cols()),
            ));
        }
        h.ensure_hermitian()?;
    }
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let (ok, residual) = commutes(&hs[i], &hs[j])?;
            if !ok {
                return Err(Error::NonCommuting {
                    first: i,
                    second: j,
                    residual,
                });
            }
        }
    }

    // Each block: (basis columns, weight tuple so far).
    let mut blocks: Vec<(ComplexMatrix, Vec<f64>)> = vec![(ComplexMatrix::identity(n), Vec::new())];
    for h in hs {
        let mut refined = Vec::new();
        for (basis, weight) in blocks {
            let restricted = hermitize(&h.restrict(&basis)?);
            let eig = hermitian_eigen(&restricted)?;
            for (k, range) in eig.clusters().iter().enumerate() {
                let sub = basis.checked_mul(&eig.eigenvectors.columns(range.clone()))?;
                let mut w = weight.clone();
                w.push(eig.cluster_value(k));
                refined.push((sub, w));
            }
        }
        blocks = refined;
    }

    let mut basis = ComplexMatrix::zeros(n, n);
    let mut weights = Vec::with_capacity(n);
    let mut ranges = Vec::with_capacity(blocks.len());
    let mut col = 0;
    for (b, w) in blocks {
        let start = col;
        for j in 0..b.cols() {
            for i in 0..n {
                basis[(i, col)] = b[(i, j)];
            }
            weights.push(w.clone());
            col += 1;
        }
        ranges.push(start..col);
    }
    fix_column_phases(&mut basis);
    Ok(SimultaneousEigenbasis {
        weights,
        basis,
        blocks: ranges,
    })
}

/// `(M + M†)/2`, removing roundoff asymmetry from products like `V† H V`.
pub(crate) fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    let n = m.rows();
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::matrix::I;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn pauli_half() -> [ComplexMatrix; 3] {
        let h = 0.5;
        [
            ComplexMatrix::from_real_rows(&[[0.0, h], [h, 0.0]]),
            ComplexMatrix::from_rows(&[[ZERO, -I * h], [I * h, ZERO]]),
            ComplexMatrix::from_real_rows(&[[h, 0.0], [0.0, -h]]),
        ]
    }

    fn assert_eigen_contract(m: &ComplexMatrix, eig: &EigenSystem) {
        let n = m.rows();
        let scale = m.frobenius_norm().max(1.0);
        for k in 0..n {
            let v = eig.eigenvectors.column(k);
            let mv = m.mul_vec(&v).unwrap();
            let r: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b * eig.eigenvalues[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r <= 1e-10 * scale, "residual {r} for eigenpair {k}");
        }
        let gram = eig.eigenvectors.adjoint_mul(&eig.eigenvectors).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_is_one_cluster() {
        let eig = hermitian_eigen(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
        assert_eq!(eig.clusters(), std::slice::from_ref(&(0..2)));
    }

    #[test]
    fn spin_half_t3_spectrum() {
        let [_, _, t3] = pauli_half();
        let eig = hermitian_eigen(&t3).unwrap();
        assert!((eig.eigenvalues[0] + 0.5).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 0.5).abs() < 1e-15);
        assert_eq!(eig.clusters().len(), 2);
    }

    #[test]
    fn gell_mann_t8_has_degenerate_pair() {
        let s = 1.0 / (2.0 * 3f64.sqrt());
        let t8 = ComplexMatrix::from_real_diagonal(&[s, s, -2.0 * s]);
        let eig = hermitian_eigen(&t8).unwrap();
        assert!((eig.eigenvalues[0] + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(eig.clusters(), &[0..1, 1..3]);
    }

    #[test]
    fn complex_offdiagonal_phase_handled() {
        let [_, t2, _] = pauli_half();
        let eig = hermitian_eigen(&t2).unwrap();
        assert_eigen_contract(&t2, &eig);
        // First nonzero component is real positive.
        for k in 0..2 {
            let v = eig.eigenvectors.column(k);
            let lead = v.iter().find(|z| z.norm() > 1e-8).unwrap();
            assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn zero_matrix() {
        let eig = hermitian_eigen(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
        assert_eq!(eig.clusters().len(), 1);
    }

    #[test]
    fn exp_at_zero_angle_is_identity() {
        let [t1, _, _] = pauli_half();
        let u = unitary_exp(&t1, 0.0).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    // exp(-iθ σ_y/2) = cos(θ/2) I - i sin(θ/2) σ_y, evaluated by hand.
    fn spin_half_rotation(theta: f64) -> ComplexMatrix {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        ComplexMatrix::from_real_rows(&[[c, -s], [s, c]])
    }

    #[test]
    fn spinor_sign_under_full_turn() {
        let [_, t2, _] = pauli_half();
        let u = unitary_exp(&t2, 2.0 * PI).unwrap();
        assert!(u.max_abs_diff(&spin_half_rotation(2.0 * PI)) < 1e-12);
        assert!(u.max_abs_diff(&ComplexMatrix::identity(2).scale_real(-1.0)) < 1e-10);
        let uu = &u * &u;
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
        let u1 = unitary_exp(&t2, 1.234).unwrap();
        assert!(u1.max_abs_diff(&spin_half_rotation(1.234)) < 1e-14);
    }

    #[test]
    fn diagonal_exponential() {
        let h = ComplexMatrix::from_real_diagonal(&[-0.5, 0.5]);
        let u = unitary_exp(&h, PI).unwrap();
        let want = ComplexMatrix::from_rows(&[
            [Complex64::from_polar(1.0, PI / 2.0), ZERO],
            [ZERO, Complex64::from_polar(1.0, -PI / 2.0)],
        ]);
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn simultaneous_basis_su3_fundamental() {
        let h = 0.5;
        let s = 1.0 / (2.0 * 3f64.sqrt());
        let t3 = ComplexMatrix::from_real_diagonal(&[h, -h, 0.0]);
        let t8 = ComplexMatrix::from_real_diagonal(&[s, s, -2.0 * s]);
        let sb = simultaneous_eigenbasis(&[t3, t8]).unwrap();
        let want = [[-0.5, s], [0.0, -2.0 * s], [0.5, s]];
        assert_eq!(sb.weights.len(), 3);
        for (w, e) in sb.weights.iter().zip(want) {
            assert!((w[0] - e[0]).abs() < 1e-14 && (w[1] - e[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn simultaneous_basis_identity() {
        let sb = simultaneous_eigenbasis(&[ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(sb.weights, vec![vec![1.0], vec![1.0]]);
        assert_eq!(sb.blocks, vec![0..2]);
    }

    #[test]
    fn simultaneous_basis_rejects_noncommuting() {
        let [t1, t2, _] = pauli_half();
        assert!(matches!(
            simultaneous_eigenbasis(&[t1, t2]),
            Err(Error::NonCommuting {
                first: 0,
                second: 1,
                ..
            })
        ));
    }

    fn random_hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    let (re, im) = v[i * n + j];
                    m[(i, j)] = Complex64::new(re, im);
                }
            }
            hermitize(&m)
        })
    }

    fn sized_hermitian() -> impl Strategy<Value = ComplexMatrix> {
        prop_oneof![
            (1usize..8).prop_flat_map(random_hermitian),
            Just(16).prop_flat_map(random_hermitian),
            Just(64).prop_flat_map(random_hermitian),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn eigen_contract_holds(m in sized_hermitian()) {
            let eig = hermitian_eigen(&m).unwrap();
            assert_eigen_contract(&m, &eig);
        }

        #[test]
        fn exp_is_a_one_parameter_group(m in (2usize..6).prop_flat_map(random_hermitian),
                                         a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let ua = unitary_exp(&m, a).unwrap();
            let ub = unitary_exp(&m, b).unwrap();
            let uab = unitary_exp(&m, a + b).unwrap();
            prop_assert!((&ua * &ub).max_abs_diff(&uab) <= 1e-10);
            let n = m.rows();
            prop_assert!(ua.adjoint_mul(&ua).unwrap().max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12);
        }

        #[test]
        fn simultaneous_weights_ignore_basis_choice(
            diag in proptest::collection::vec(-2i32..3, 4),
            diag2 in proptest::collection::vec(-2i32..3, 4),
            u in random_hermitian(4),
        ) {
            // Conjugating commuting diagonals by a unitary leaves the weight multiset unchanged.
            let rot = unitary_exp(&u, 0.7).unwrap();
            let d1 = ComplexMatrix::from_real_diagonal(&diag.iter().map(|&x| x as f64).collect::<Vec<_>>());
            let d2 = ComplexMatrix::from_real_diagonal(&diag2.iter().map(|&x| x as f64).collect::<Vec<_>>());
            let h1 = hermitize(&(&(&rot * &d1) * &rot.adjoint()));
            let h2 = hermitize(&(&(&rot * &d2) * &rot.adjoint()));
            let sb = simultaneous_eigenbasis(&[h1.clone(), h2.clone()]).unwrap();
            let mut got: Vec<(i64, i64)> = sb.weights.iter()
                .map(|w| ((w[0] * 1e6).round() as i64, (w[1] * 1e6).round() as i64)).collect();
            let mut want: Vec<(i64, i64)> = diag.iter().zip(&diag2)
                .map(|(&a, &b)| (a as i64 * 1_000_000, b as i64 * 1_000_000)).collect();
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
            for j in 0..4 {
                let v = sb.basis.column(j);
                for (h, w) in [(&h1, sb.weights[j][0]), (&h2, sb.weights[j][1])] {
                    let hv = h.mul_vec(&v).unwrap();
                    let r: f64 = hv.iter().zip(&v).map(|(a, b)| (a - b * w).norm()).fold(0.0, f64::max);
                    prop_assert!(r < 1e-10);
                }
            }
        }
    }
}
