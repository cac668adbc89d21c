//! Irrep catalogs for su(2) and su(3).

use serde::{Deserialize, Serialize};

use super::construct::{conjugate_rep, su2_spin_irrep, tensor_rep};
use super::decompose::{invariant_blocks, match_label};
use crate::error::{Error, Result};
use crate::lie::{su_fundamental, AlgebraId, GeneratorSet};

/// `C3` magnitudes below this count as zero (self-conjugate irreps).
const C3_ZERO: f64 = 1e-9;

/// Identifies an irrep by dimension and Casimir scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub algebra_id: AlgebraId,
    pub d_r: usize,
    pub c2: f64,
    /// Zero for self-conjugate irreps and for every su(2) irrep.
    pub c3: f64,
    pub name: String,
}

/// Labels with one representative generator set each, sorted by dimension, then `C2`, then `C3` descending.
#[derive(Debug, Clone)]
pub struct IrrepCatalog {
    algebra: AlgebraId,
    max_dim: usize,
    entries: Vec<(IrrepLabel, GeneratorSet)>,
}

impl IrrepCatalog {
    pub fn algebra(&self) -> &AlgebraId {
        &self.algebra
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn labels(&self) -> Vec<IrrepLabel> {
        self.entries.iter().map(|e| e.0.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrepLabel, &GeneratorSet)> {
        self.entries.iter().map(|(l, g)| (l, g))
    }

    pub fn get(&self, name: &str) -> Option<&IrrepLabel> {
        self.entries.iter().find(|e| e.0.name == name).map(|e| &e.0)
    }

    /// The generator set the label was discovered with.
    pub fn representative(&self, name: &str) -> Option<&GeneratorSet> {
        self.entries.iter().find(|e| e.0.name == name).map(|e| &e.1)
    }

    /// Representative of the catalog entry carrying exactly this label.
    pub fn representative_of(&self, label: &IrrepLabel) -> Option<&GeneratorSet> {
        self.entries.iter().find(|e| &e.0 == label).map(|e| &e.1)
    }
}

/// Builds every irrep of dimension at most `max_dim`.
///
/// su(2) irreps are the spin ladders, named by dimension. su(3) irreps are
/// found by tensoring known irreps with the 3, splitting the products into
/// blocks and closing under conjugation. Names are the dimension, with a
/// prime per extra distinct `C2` at that dimension (ascending) and a `bar`
/// suffix when `C3 < 0`.
pub fn build_irrep_catalog(algebra: &AlgebraId, max_dim: usize) -> Result<IrrepCatalog> {
    let entries = match algebra {
        AlgebraId::Su(2) => (1..=max_dim)
            .map(|d| {
                let j = (d as f64 - 1.0) / 2.0;
                let label = IrrepLabel {
                    algebra_id: algebra.clone(),
                    d_r: d,
                    c2: j * (j + 1.0),
                    c3: 0.0,
                    name: d.to_string(),
                };
                Ok((label, su2_spin_irrep(d)?))
            })
            .collect::<Result<Vec<_>>>()?,
        AlgebraId::Su(3) => su3_entries(max_dim)?,
        other => {
            return Err(Error::Unsupported(format!(
                "irrep catalogs exist for su2 and su3, not {other}"
            )))
        }
    };
    Ok(IrrepCatalog {
        algebra: algebra.clone(),
        max_dim,
        entries,
    })
}

fn su3_entries(max_dim: usize) -> Result<Vec<(IrrepLabel, GeneratorSet)>> {
    let algebra = AlgebraId::Su(3);
    let fund = su_fundamental(3)?;
    // (dim, c2, c3, representative), names are assigned once discovery ends.
    let mut found: Vec<(usize, f64, f64, GeneratorSet)> = Vec::new();
    let mut labels: Vec<IrrepLabel> = Vec::new();
    let add = |found: &mut Vec<(usize, f64, f64, GeneratorSet)>,
               labels: &mut Vec<IrrepLabel>,
               c2: f64,
               c3: f64,
               rep: GeneratorSet|
     -> bool {
        let d = rep.d_r();
        if d > max_dim || match_label(labels, d, c2, c3).is_some() {
            return false;
        }
        let c3 = if c3.abs() < C3_ZERO { 0.0 } else { c3 };
        labels.push(IrrepLabel {
            algebra_id: AlgebraId::Su(3),
            d_r: d,
            c2,
            c3,
            name: String::new(),
        });
        found.push((d, c2, c3, rep));
        true
    };

    let trivial = GeneratorSet::trivial(algebra.clone(), 8, 1);
    add(&mut found, &mut labels, 0.0, 0.0, trivial);
    let fund_blocks = invariant_blocks(&fund)?;
    let (c2f, c3f) = (fund_blocks.blocks[0].c2, fund_blocks.blocks[0].c3);
    add(&mut found, &mut labels, c2f, c3f, fund.clone());
    add(&mut found, &mut labels, c2f, -c3f, conjugate_rep(&fund));

    let mut next = 1;
    while next < found.len() {
        let rep = found[next].3.clone();
        next += 1;
        for block in invariant_blocks(&tensor_rep(&rep, &fund)?)?.blocks {
            let (c2, c3) = (block.c2, block.c3);
            if add(&mut found, &mut labels, c2, c3, block.generators.clone()) && c3.abs() >= C3_ZERO
            {
                add(
                    &mut found,
                    &mut labels,
                    c2,
                    -c3,
                    conjugate_rep(&block.generators),
                );
            }
        }
    }

    let mut entries: Vec<(IrrepLabel, GeneratorSet)> = Vec::with_capacity(found.len());
    for (d, c2, c3, rep) in &found {
        let mut c2s: Vec<f64> = found.iter().filter(|f| f.0 == *d).map(|f| f.1).collect();
        c2s.sort_by(f64::total_cmp);
        c2s.dedup_by(|a, b| (*a - *b).abs() <= 1e-6 * a.abs().max(1.0));
        let primes = c2s
            .iter()
            .position(|x| (x - c2).abs() <= 1e-6 * x.abs().max(1.0))
            .unwrap_or(0);
        let mut name = d.to_string();
        name.push_str(&"'".repeat(primes));
        if *c3 < 0.0 {
            name.push_str("bar");
        }
        entries.push((
            IrrepLabel {
                algebra_id: algebra.clone(),
                d_r: *d,
                c2: *c2,
                c3: *c3,
                name,
            },
            rep.clone(),
        ));
    }
    entries.sort_by(|a, b| {
        a.0.d_r
            .cmp(&b.0.d_r)
            .then(a.0.c2.total_cmp(&b.0.c2))
            .then(b.0.c3.total_cmp(&a.0.c3))
    });
    Ok(entries)
}
