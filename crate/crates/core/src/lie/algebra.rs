//! Algebra identifiers and the catalog of compact simple Lie algebras.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag naming the algebra a generator set represents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraId {
    Su(usize),
    /// User-supplied sets that make no claim about which algebra they realise.
    Custom(String),
}

impl AlgebraId {
    /// Indices of the diagonal (Cartan) generators in the generalized Gell-Mann ordering.
    pub fn cartan_indices(&self) -> Option<Vec<usize>> {
        match self {
            AlgebraId::Su(n) => Some((2..=*n).map(|k| k * k - 2).collect()),
            AlgebraId::Custom(_) => None,
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            AlgebraId::Su(n) => Some(n * n - 1),
            AlgebraId::Custom(_) => None,
        }
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            AlgebraId::Su(n) => Some(n - 1),
            AlgebraId::Custom(_) => None,
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::Su(n) => write!(f, "su{n}"),
            AlgebraId::Custom(s) => f.write_str(s),
        }
    }
}

impl FromStr for AlgebraId {
    type Err = Error;

    /// Accepts `su3`, `su(3)` and `SU(3)`; anything else is an error.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let digits = lower
            .strip_prefix("su")
            .map(|rest| rest.trim_start_matches('(').trim_end_matches(')'))
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        match digits.and_then(|d| d.parse::<usize>().ok()) {
            Some(n) if n >= 2 => Ok(AlgebraId::Su(n)),
            _ => Err(Error::UnknownAlgebra(s.to_string())),
        }
    }
}

impl Serialize for AlgebraId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlgebraId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(s.parse().unwrap_or(AlgebraId::Custom(s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "a" => Family::A,
            "b" => Family::B,
            "c" => Family::C,
            "d" => Family::D,
            "g2" => Family::G2,
            "f4" => Family::F4,
            "e6" => Family::E6,
            "e7" => Family::E7,
            "e8" => Family::E8,
            other => return Err(Error::UnknownAlgebra(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub family: Family,
    pub n: usize,
    pub rank: usize,
    pub dimension: usize,
    pub alt_name: String,
}

/// Rank, dimension and alternative name of a compact simple algebra.
///
/// Classical families need `n ≥ 1` (`n ≥ 3` for `d`). The exceptional
/// families ignore `n` and report their fixed rank.
pub fn algebra_catalog(family: Family, n: usize) -> Result<AlgebraInfo> {
    let min_n = match family {
        Family::A | Family::B | Family::C => 1,
        Family::D => 3,
        _ => 0,
    };
    if n < min_n {
        return Err(Error::BadParameter(format!(
            "{family:?}_n needs n >= {min_n}, got {n}"
        )));
    }
    let (n, rank, dimension, alt_name) = match family {
        Family::A => (n, n, n * (n + 2), format!("su({})", n + 1)),
        Family::B => (n, n, n * (2 * n + 1), format!("o({})", 2 * n + 1)),
        Family::C => (n, n, n * (2 * n + 1), format!("usp({})", 2 * n)),
        Family::D => (n, n, n * (2 * n - 1), format!("o({})", 2 * n)),
        Family::G2 => (2, 2, 14, "G2".to_string()),
        Family::F4 => (4, 4, 52, "F4".to_string()),
        Family::E6 => (6, 6, 78, "E6".to_string()),
        Family::E7 => (7, 7, 133, "E7".to_string()),
        Family::E8 => (8, 8, 248, "E8".to_string()),
    };
    Ok(AlgebraInfo {
        family,
        n,
        rank,
        dimension,
        alt_name,
    })
}
