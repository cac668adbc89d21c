//! Structure constants, the Jacobi identity and symmetric d-symbols.

use serde::{Deserialize, Serialize};

use super::generators::{trace_product, GeneratorSet, CLOSURE_TOL};
use crate::error::{Error, Result};
use crate::kernel::{anticommutator, commutator, ComplexMatrix, I};

/// Dense rank-3 real tensor indexed `[a][b][c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    d: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            data: vec![0.0; d * d * d],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.d + b) * self.d + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.data[(a * self.d + b) * self.d + c] = v;
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.d != other.d {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Real structure constants `f_abc` with `[t_a, t_b] = i f_abc t_c`.
///
/// Serializes as `{d, entries: [[a, b, c, value], ...]}` listing nonzero
/// values with `a < b`; the `b > a` half follows by antisymmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SparseConstants", into = "SparseConstants")]
pub struct StructureConstants(Tensor3);

#[derive(Serialize, Deserialize)]
struct SparseConstants {
    d: usize,
    entries: Vec<(usize, usize, usize, f64)>,
}

/// Entries at or below this magnitude are omitted from the sparse form.
const SPARSE_EPS: f64 = 1e-14;

impl From<StructureConstants> for SparseConstants {
    fn from(f: StructureConstants) -> Self {
        let d = f.d();
        let mut entries = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                for c in 0..d {
                    let v = f.get(a, b, c);
                    if v.abs() > SPARSE_EPS {
                        entries.push((a, b, c, v));
                    }
                }
            }
        }
        SparseConstants { d, entries }
    }
}

impl TryFrom<SparseConstants> for StructureConstants {
    type Error = Error;

    fn try_from(s: SparseConstants) -> Result<Self> {
        let mut t = Tensor3::zeros(s.d);
        for (k, &(a, b, c, v)) in s.entries.iter().enumerate() {
            if a >= b || b >= s.d || c >= s.d {
                return Err(Error::validation(
                    format!("entries[{k}]"),
                    format!(
                        "need a < b < d and c < d, got ({a}, {b}, {c}) with d = {}",
                        s.d
                    ),
                ));
            }
            t.set(a, b, c, v);
            t.set(b, a, c, -v);
        }
        Ok(StructureConstants(t))
    }
}

impl StructureConstants {
    pub fn from_tensor(t: Tensor3) -> Self {
        Self(t)
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.d()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.0.get(a, b, c)
    }

    /// Largest violation of `f_abc = -f_bac = -f_acb`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let d = self.d();
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = self.get(a, b, c);
                    worst = worst
                        .max((v + self.get(b, a, c)).abs())
                        .max((v + self.get(a, c, b)).abs());
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

/// Structure constants from traces, `f_abc = -(i/T) tr([t_a, t_b] t_c)`.
///
/// Fails with `NotClosed` if `i f_abc t_c` does not rebuild every commutator
/// to within `1e-10` (scaled by the largest generator norm).
pub fn structure_constants(set: &GeneratorSet) -> Result<StructureConstants> {
    let t = set.trace_index();
    if t <= 1e-14 {
        return Err(Error::BadParameter(
            "trace index is zero; structure constants are undefined for a trivial set".into(),
        ));
    }
    let gens = set.generators();
    let d = gens.len();
    let scale = gens.iter().map(|g| g.frobenius_norm()).fold(1.0, f64::max);
    let mut f = Tensor3::zeros(d);
    let mut residual = 0.0_f64;
    for a in 0..d {
        for b in a + 1..d {
            let comm = commutator(&gens[a], &gens[b])?;
            let mut rebuilt = ComplexMatrix::zeros(set.d_r(), set.d_r());
            for (c, gc) in gens.iter().enumerate() {
                let z = -I * trace_product(&comm, gc) / t;
                residual = residual.max(z.im.abs());
                f.set(a, b, c, z.re);
                f.set(b, a, c, -z.re);
                if z.re != 0.0 {
                    rebuilt.add_scaled(I * z.re, gc);
                }
            }
            residual = residual.max(comm.max_abs_diff(&rebuilt));
        }
    }
    if residual > CLOSURE_TOL * scale {
        return Err(Error::NotClosed(residual));
    }
    Ok(StructureConstants(f))
}

/// `max |f_abd f_dce + f_bcd f_dae + f_cad f_dbe|` over all free indices.
pub fn jacobi_residual(f: &StructureConstants) -> f64 {
    let d = f.d();
    let mut worst = 0.0_f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let mut s = 0.0;
                    for k in 0..d {
                        s += f.get(a, b, k) * f.get(k, c, e)
                            + f.get(b, c, k) * f.get(k, a, e)
                            + f.get(c, a, k) * f.get(k, b, e);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// Totally symmetric invariant tensor `d_abc = 2 tr({t_a, t_b} t_c)` of an su(n)
/// fundamental set.
#[derive(Debug, Clone, PartialEq)]
pub struct DSymbols(Tensor3);

impl DSymbols {
    pub fn d(&self) -> usize {
        self.0.d()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.0.get(a, b, c)
    }

    pub fn tensor(&self) -> &Tensor3 {
        &self.0
    }

    pub fn symmetry_residual(&self) -> f64 {
        let d = self.d();
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = self.get(a, b, c);
                    worst = worst
                        .max((v - self.get(b, a, c)).abs())
                        .max((v - self.get(a, c, b)).abs());
                }
            }
        }
        worst
    }
}

pub fn d_symbols(set: &GeneratorSet) -> Result<DSymbols> {
    let t = set.trace_index();
    if (t - 0.5).abs() > 1e-10 {
        return Err(Error::WrongNormalization {
            expected: 0.5,
            found: t,
        });
    }
    let gens = set.generators();
    let d = gens.len();
    let mut out = Tensor3::zeros(d);
    for a in 0..d {
        for b in a..d {
            let anti = anticommutator(&gens[a], &gens[b])?;
            for (c, gc) in gens.iter().enumerate() {
                let v = 2.0 * trace_product(&anti, gc).re;
                out.set(a, b, c, v);
                out.set(b, a, c, v);
            }
        }
    }
    Ok(DSymbols(out))
}
