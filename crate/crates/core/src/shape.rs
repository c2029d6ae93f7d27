use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::multinomial;
use crate::error::{Error, Result};

/// The composition `(d_1, ..., d_l)` describing the multiset with `d_j`
/// copies of the letter `j`.
///
/// Zero parts are dropped on construction, so every stored part is positive
/// and letters are exactly `1..=l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultisetShape {
    parts: Vec<u32>,
}

impl MultisetShape {
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        parts.retain(|&p| p != 0);
        MultisetShape { parts }
    }

    /// The all-ones shape `(1, ..., 1)` of length `l`, i.e. an ordinary set.
    pub fn ones(l: usize) -> Self {
        MultisetShape { parts: vec![1; l] }
    }

    /// Parses `"2,1"` and reports whether zero parts were dropped.
    pub fn parse_lossy(s: &str) -> Result<(Self, bool)> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(Error::InvalidShape(s.to_string()));
        }
        let raw = trimmed
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidShape(s.to_string()))?;
        let had_zero = raw.contains(&0);
        Ok((MultisetShape::new(raw), had_zero))
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of letters `l`.
    pub fn num_letters(&self) -> usize {
        self.parts.len()
    }

    /// Total size `d`.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyShape)
        } else {
            Ok(())
        }
    }

    /// Number of distinct permutations of the multiset.
    pub fn multinomial(&self) -> BigInt {
        let parts: Vec<u64> = self.parts.iter().map(|&p| p as u64).collect();
        multinomial(&parts)
    }

    /// The weakly increasing word `1^{d_1} 2^{d_2} ...`.
    pub fn sorted_word(&self) -> Vec<u32> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(j, &p)| std::iter::repeat_n(j as u32 + 1, p as usize))
            .collect()
    }
}

impl fmt::Display for MultisetShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for MultisetShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MultisetShape::parse_lossy(s).map(|(shape, _)| shape)
    }
}

/// All compositions with `1 <= d <= d_max` and at most `l_max` parts,
/// ordered by `d`, then lexicographically by parts.
pub fn compositions(d_max: usize, l_max: usize) -> Vec<MultisetShape> {
    fn extend(remaining: usize, l_left: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultisetShape>) {
        if remaining == 0 {
            out.push(MultisetShape { parts: prefix.clone() });
            return;
        }
        if l_left == 0 {
            return;
        }
        for first in 1..=remaining {
            prefix.push(first as u32);
            extend(remaining - first, l_left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 1..=d_max {
        extend(d, l_max, &mut Vec::new(), &mut out);
    }
    out
}
