//! Splitting a representation into irreducible blocks through its commutant.
//!
//! The commutant (Hermitian `X` with `[X, t_a] = 0` for every generator) is
//! found as the null space of the positive semidefinite map
//! `X ↦ Σ_a [t_a, [t_a, X]]`. Any such `X` also commutes with a generic
//! algebra element `h` and with `C2`, so the unknowns are restricted to the
//! joint eigenspaces of `(h, C2)` before the null space is computed. A
//! generic element of the commutant then acts as a distinct scalar on each
//! irreducible copy, and its eigenspaces are the invariant blocks.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::casimir::{
    casimir_scalar, cubic_casimir, d_symbols_for, quadratic_casimir, scalar_deviation,
};
use super::catalog::IrrepLabel;
use crate::error::{Error, Result};
use crate::kernel::{
    cluster_sorted, hermitian_eigen, hermitize, simultaneous_eigenbasis, ComplexMatrix, ZERO,
};
use crate::lie::GeneratorSet;

/// Seed for the generic algebra and commutant elements.
pub const DECOMPOSE_SEED: u64 = 0x00C0_FFEE_5EED_0001;

/// Gram eigenvalues at or below this fraction of the largest Gram entry span the commutant.
pub const NULL_SPACE_RTOL: f64 = 1e-9;

/// Relative tolerance when matching block Casimir scalars to catalog labels.
pub const LABEL_RTOL: f64 = 1e-6;

/// Maximum invariance residual `‖t_a W - W (W† t_a W)‖` accepted for a block.
pub const BLOCK_RESIDUAL_TOL: f64 = 1e-8;

/// One irreducible invariant subspace.
#[derive(Debug, Clone)]
pub struct InvariantBlock {
    /// `d_r x k` matrix with orthonormal columns spanning the block.
    pub isometry: ComplexMatrix,
    /// Generators restricted to the block, `W† t_a W`.
    pub generators: GeneratorSet,
    pub c2: f64,
    pub c3: f64,
    pub residual: f64,
}

impl InvariantBlock {
    pub fn dim(&self) -> usize {
        self.isometry.cols()
    }
}

impl BlockSplit {
    /// Dimension of the largest block.
    pub fn max_dim(&self) -> usize {
        self.blocks
            .iter()
            .map(InvariantBlock::dim)
            .max()
            .unwrap_or(0)
    }
}

/// Invariant blocks of a representation together with the commutant dimension.
#[derive(Debug, Clone)]
pub struct BlockSplit {
    pub blocks: Vec<InvariantBlock>,
    pub commutant_dim: usize,
}

/// A sparse Hermitian basis matrix for the commutant search.
struct Param {
    entries: Vec<(usize, usize, Complex64)>,
}

fn commutant_params(blocks: &[std::ops::Range<usize>]) -> Vec<Param> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut params = Vec::new();
    for b in blocks {
        for i in b.clone() {
            params.push(Param {
                entries: vec![(i, i, Complex64::new(1.0, 0.0))],
            });
            for j in i + 1..b.end {
                params.push(Param {
                    entries: vec![
                        (i, j, Complex64::new(r, 0.0)),
                        (j, i, Complex64::new(r, 0.0)),
                    ],
                });
                params.push(Param {
                    entries: vec![
                        (i, j, Complex64::new(0.0, r)),
                        (j, i, Complex64::new(0.0, -r)),
                    ],
                });
            }
        }
    }
    params
}

/// Gram matrix `G_kl = Σ_a ⟨[E_k, t_a], [E_l, t_a]⟩`, evaluated as
/// `2 Re tr(E_k E_l S) - 2 Σ_a Re tr(E_k t_a E_l t_a)` with `S = Σ_a t_a²`.
fn commutant_gram(params: &[Param], gens: &[ComplexMatrix], s: &ComplexMatrix) -> ComplexMatrix {
    let p = params.len();
    let mut g = ComplexMatrix::zeros(p, p);
    for k in 0..p {
        for l in k..p {
            let mut acc = 0.0;
            for &(pk, qk, v) in &params[k].entries {
                for &(rl, sl, w) in &params[l].entries {
                    if qk == rl {
                        acc += 2.0 * (v * w * s[(sl, pk)]).re;
                    }
                    for t in gens {
                        acc -= 2.0 * (v * w * t[(qk, rl)] * t[(sl, pk)]).re;
                    }
                }
            }
            g[(k, l)] = Complex64::new(acc, 0.0);
            g[(l, k)] = Complex64::new(acc, 0.0);
        }
    }
    g
}

fn scalars_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= LABEL_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Splits a representation into irreducible invariant blocks.
///
/// Blocks are returned sorted by dimension, then `C2`, then `C3`, all descending.
pub fn invariant_blocks(set: &GeneratorSet) -> Result<BlockSplit> {
    let n = set.d_r();
    if n == 0 {
        return Err(Error::CommutantFailure(
            "zero-dimensional representation".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DECOMPOSE_SEED);
    let coeffs: Vec<f64> = (0..set.d()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let h = hermitize(&set.combine(&coeffs)?);
    let c2_full = hermitize(&quadratic_casimir(set));
    let joint = simultaneous_eigenbasis(&[h, c2_full])?;
    let v = &joint.basis;

    let rotated: Vec<ComplexMatrix> = set
        .generators()
        .iter()
        .map(|t| Ok(hermitize(&t.restrict(v)?)))
        .collect::<Result<_>>()?;
    let mut s = ComplexMatrix::zeros(n, n);
    for t in &rotated {
        s.add_scaled(Complex64::new(1.0, 0.0), &(t * t));
    }

    let params = commutant_params(&joint.blocks);
    let gram = commutant_gram(&params, &rotated, &s);
    let gram_eig = hermitian_eigen(&gram)?;
    let null_tol = NULL_SPACE_RTOL * gram.max_abs().max(1.0);
    let null_count = gram_eig
        .eigenvalues
        .iter()
        .take_while(|&&l| l <= null_tol)
        .count();
    if null_count == 0 {
        return Err(Error::CommutantFailure("empty commutant".into()));
    }

    // Generic commutant element, block diagonal in the (h, C2) eigenbasis.
    let weights: Vec<f64> = (0..null_count)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let mut x = ComplexMatrix::zeros(n, n);
    for (k, param) in params.iter().enumerate() {
        let coef: f64 = (0..null_count)
            .map(|j| weights[j] * gram_eig.eigenvectors[(k, j)].re)
            .sum();
        for &(i, j, z) in &param.entries {
            x[(i, j)] += z * coef;
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
    for block in &joint.blocks {
        let m = block.len();
        let mut sub = ComplexMatrix::zeros(m, m);
        for (ii, i) in block.clone().enumerate() {
            for (jj, j) in block.clone().enumerate() {
                sub[(ii, jj)] = x[(i, j)];
            }
        }
        let eig = hermitian_eigen(&hermitize(&sub))?;
        for k in 0..m {
            let mut full = vec![ZERO; n];
            for (ii, i) in block.clone().enumerate() {
                let u = eig.eigenvectors[(ii, k)];
                for (r, f) in full.iter_mut().enumerate() {
                    *f += v[(r, i)] * u;
                }
            }
            pairs.push((eig.eigenvalues[k], full));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let clusters = cluster_sorted(&values, 1e-8 * x.frobenius_norm().max(1.0));

    let d_tensor = d_symbols_for(set.algebra());
    let mut blocks = Vec::with_capacity(clusters.len());
    for range in clusters {
        let cols: Vec<Vec<Complex64>> = pairs[range].iter().map(|p| p.1.clone()).collect();
        let w = ComplexMatrix::from_columns(n, &cols);
        blocks.push(project_block(set, w, d_tensor.as_ref())?);
    }

    let total: usize = blocks.iter().map(|b| b.dim()).sum();
    if total != n {
        return Err(Error::CommutantFailure(format!(
            "blocks cover {total} of {n} dimensions"
        )));
    }
    blocks.sort_by(|a, b| {
        b.dim()
            .cmp(&a.dim())
            .then(b.c2.total_cmp(&a.c2))
            .then(b.c3.total_cmp(&a.c3))
    });

    // Each irrep class of multiplicity m contributes m² to the commutant.
    let mut classes: Vec<(usize, f64, f64, usize)> = Vec::new();
    for b in &blocks {
        match classes
            .iter_mut()
            .find(|c| c.0 == b.dim() && scalars_match(c.1, b.c2) && scalars_match(c.2, b.c3))
        {
            Some(c) => c.3 += 1,
            None => classes.push((b.dim(), b.c2, b.c3, 1)),
        }
    }
    let expected: usize = classes.iter().map(|c| c.3 * c.3).sum();
    if expected != null_count {
        return Err(Error::CommutantFailure(format!(
            "commutant has dimension {null_count} but blocks imply {expected}"
        )));
    }
    Ok(BlockSplit {
        blocks,
        commutant_dim: null_count,
    })
}

fn project_block(
    set: &GeneratorSet,
    w: ComplexMatrix,
    d_tensor: Option<&crate::lie::DSymbols>,
) -> Result<InvariantBlock> {
    let k = w.cols();
    let mut residual = 0.0_f64;
    let mut projected = Vec::with_capacity(set.d());
    for t in set.generators() {
        let tw = t.checked_mul(&w)?;
        let p = hermitize(&w.adjoint_mul(&tw)?);
        residual = residual.max(tw.max_abs_diff(&w.checked_mul(&p)?));
        projected.push(p);
    }
    if residual > BLOCK_RESIDUAL_TOL {
        return Err(Error::CommutantFailure(format!(
            "block of dimension {k} is not invariant (residual {residual:.3e})"
        )));
    }
    let generators = GeneratorSet::from_parts(set.algebra().clone(), k, projected)?;
    let c2m = quadratic_casimir(&generators);
    let deviation = scalar_deviation(&c2m);
    if deviation > LABEL_RTOL * casimir_scalar(&c2m).abs().max(1.0) {
        return Err(Error::CommutantFailure(format!(
            "block of dimension {k} is reducible (C2 deviates from a scalar by {deviation:.3e})"
        )));
    }
    let c2 = casimir_scalar(&c2m);
    let c3 = match d_tensor {
        Some(d) => casimir_scalar(&cubic_casimir(&generators, d)?),
        None => 0.0,
    };
    Ok(InvariantBlock {
        isometry: w,
        generators,
        c2,
        c3,
        residual,
    })
}

/// One irrep class in a decomposition.
#[derive(Debug, Clone)]
pub struct DecompositionPart {
    pub label: IrrepLabel,
    pub multiplicity: usize,
    /// One isometry per copy, each mapping the irrep block into the full space.
    pub isometries: Vec<ComplexMatrix>,
    /// Projected generators of each copy.
    pub blocks: Vec<GeneratorSet>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub parts: Vec<DecompositionPart>,
    pub commutant_dim: usize,
    /// Largest block invariance residual.
    pub residual: f64,
}

/// Serialized form of a decomposition part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartSummary {
    pub name: String,
    pub d_r: usize,
    pub multiplicity: usize,
    pub c2: f64,
    pub c3: f64,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometries: Option<Vec<ComplexMatrix>>,
}

impl DecompositionResult {
    pub fn total_dim(&self) -> usize {
        self.parts
            .iter()
            .map(|p| p.multiplicity * p.label.d_r)
            .sum()
    }

    pub fn multiplicity_of(&self, name: &str) -> usize {
        self.parts
            .iter()
            .find(|p| p.label.name == name)
            .map_or(0, |p| p.multiplicity)
    }

    /// Irrep names with multiplicity expanded, in part order.
    pub fn names(&self) -> Vec<String> {
        self.parts
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.label.name.clone(), p.multiplicity))
            .collect()
    }

    pub fn summary(&self, with_isometries: bool) -> Vec<PartSummary> {
        self.parts
            .iter()
            .map(|p| PartSummary {
                name: p.label.name.clone(),
                d_r: p.label.d_r,
                multiplicity: p.multiplicity,
                c2: p.label.c2,
                c3: p.label.c3,
                residual: p.residual,
                isometries: with_isometries.then(|| p.isometries.clone()),
            })
            .collect()
    }
}

impl fmt::Display for DecompositionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(" ⊕ "))
    }
}

/// Finds the catalog label matching `(dim, c2, c3)`.
pub fn match_label(catalog: &[IrrepLabel], dim: usize, c2: f64, c3: f64) -> Option<&IrrepLabel> {
    catalog
        .iter()
        .find(|l| l.d_r == dim && scalars_match(l.c2, c2) && scalars_match(l.c3, c3))
}

/// Decomposes a representation into catalog irreps with multiplicities.
pub fn decompose(set: &GeneratorSet, catalog: &[IrrepLabel]) -> Result<DecompositionResult> {
    label_blocks(invariant_blocks(set)?, catalog)
}

/// Matches already split blocks against a catalog and merges equal labels.
pub fn label_blocks(split: BlockSplit, catalog: &[IrrepLabel]) -> Result<DecompositionResult> {
    let mut parts: Vec<DecompositionPart> = Vec::new();
    for block in split.blocks {
        let label =
            match_label(catalog, block.dim(), block.c2, block.c3).ok_or(Error::UnknownIrrep {
                dim: block.dim(),
                c2: block.c2,
                c3: block.c3,
            })?;
        match parts.iter_mut().find(|p| p.label == *label) {
            Some(p) => {
                p.multiplicity += 1;
                p.residual = p.residual.max(block.residual);
                p.isometries.push(block.isometry);
                p.blocks.push(block.generators);
            }
            None => parts.push(DecompositionPart {
                label: label.clone(),
                multiplicity: 1,
                isometries: vec![block.isometry],
                blocks: vec![block.generators],
                residual: block.residual,
            }),
        }
    }
    let residual = parts.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(DecompositionResult {
        parts,
        commutant_dim: split.commutant_dim,
        residual,
    })
}
