//! Eulerian numbers, ordered Stirling numbers of the second and third kind,
//! and the q-families `A`, `B`, `C` over a multiset.
//!
//! Each integer family has at least two routes: direct enumeration of the
//! defining objects, and a closed formula or triangular solve derived from
//! the lattice-point identities. The q-families are always computed from
//! their definitions (statistic enumeration); `C` additionally has a closed
//! form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, q_binomial};
use crate::chain::{chain_major_index, for_each_chain_any_dimension, prefix_contents};
use crate::error::{Error, Result};
use crate::perm::{descent_count, for_each_permutation_word, major_index};
use crate::poly::QPolynomial;
use crate::shape::MultisetShape;

/// `<d, i>` for `i = 0..d-1`, trailing zeros kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerianRow {
    pub shape: MultisetShape,
    pub values: Vec<BigInt>,
}

impl EulerianRow {
    pub fn get(&self, i: usize) -> BigInt {
        self.values.get(i).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StirlingKind {
    SecondOrdered,
    ThirdOrdered,
}

/// An ordered Stirling row indexed `k = 1..=d` (stored at `values[k - 1]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StirlingRow {
    pub shape: MultisetShape,
    pub kind: StirlingKind,
    pub values: Vec<BigInt>,
}

impl StirlingRow {
    /// Value at `k`; zero outside `1..=d`.
    pub fn get(&self, k: usize) -> BigInt {
        k.checked_sub(1)
            .and_then(|i| self.values.get(i))
            .cloned()
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
}

/// A q-family indexed `1..=d` (stored at `values[index - 1]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPolyFamily {
    pub shape: MultisetShape,
    pub family: Family,
    pub values: Vec<QPolynomial>,
}

impl QPolyFamily {
    pub fn get(&self, index: usize) -> QPolynomial {
        index
            .checked_sub(1)
            .and_then(|i| self.values.get(i))
            .cloned()
            .unwrap_or_default()
    }

    /// Each member evaluated at `q = 1`.
    pub fn at_one(&self) -> Vec<BigInt> {
        self.values.iter().map(QPolynomial::eval_at_one).collect()
    }
}

/// Which version of the closed formula for `{d, k}_O` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StirlingVariant {
    /// `C(k, h+1)` weights, the actual inverse of the identity matrix.
    #[default]
    Corrected,
    /// `C(k, h)` weights, as the formula is commonly printed.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CMethod {
    #[default]
    Enumeration,
    Closed,
}

/// Which lower-triangular system [`solve_from_identity`] inverts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveKind {
    Eulerian,
    Stirling2,
}

fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value: value as i64,
            min: min as i64,
            max: max as i64,
        });
    }
    Ok(())
}

/// `prod_j C(n + d_j, d_j)`, the number of lattice points of the `n`-th dilate.
pub fn lattice_count(shape: &MultisetShape, n: u64) -> BigInt {
    shape
        .parts()
        .iter()
        .map(|&p| binomial(n + p as u64, p as u64))
        .product()
}

/// `prod_j [n + d_j, d_j]_q`.
pub fn lattice_gf(shape: &MultisetShape, n: u64) -> QPolynomial {
    shape
        .parts()
        .iter()
        .map(|&p| q_binomial(n + p as u64, p as u64))
        .product()
}

fn histogram_to_big(counts: &[u64]) -> Vec<BigInt> {
    counts.iter().map(|&c| BigInt::from(c)).collect()
}

/// Counts permutations by number of descents.
pub fn eulerian_row_enum(shape: &MultisetShape) -> Result<EulerianRow> {
    shape.require_nonempty()?;
    let d = shape.size();
    let mut counts = vec![0u64; d];
    for_each_permutation_word(shape, |w| counts[descent_count(w)] += 1);
    Ok(EulerianRow {
        shape: shape.clone(),
        values: histogram_to_big(&counts),
    })
}

/// `<d, i> = sum_{h=0}^{i} (-1)^{i-h} C(d+1, i-h) prod_j C(h + d_j, d_j)`.
pub fn eulerian_closed(shape: &MultisetShape, i: usize) -> Result<BigInt> {
    shape.require_nonempty()?;
    let d = shape.size();
    check_range("descent count i", i, 0, d - 1)?;
    let mut acc = BigInt::zero();
    for h in 0..=i {
        let term = binomial(d as u64 + 1, (i - h) as u64) * lattice_count(shape, h as u64);
        if (i - h).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

pub fn eulerian_row_closed(shape: &MultisetShape) -> Result<EulerianRow> {
    shape.require_nonempty()?;
    let values = (0..shape.size())
        .map(|i| eulerian_closed(shape, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(EulerianRow {
        shape: shape.clone(),
        values,
    })
}

/// Counts chain simplices (ordered partitions) by dimension.
pub fn stirling2_row_enum(shape: &MultisetShape) -> Result<StirlingRow> {
    shape.require_nonempty()?;
    let mut counts = vec![0u64; shape.size()];
    for_each_chain_any_dimension(shape, |vs| counts[vs.len() - 2] += 1);
    Ok(StirlingRow {
        shape: shape.clone(),
        kind: StirlingKind::SecondOrdered,
        values: histogram_to_big(&counts),
    })
}

/// Closed formula for `{d, k}_O`:
/// `sum_{h=0}^{k-1} (-1)^{k-1-h} W(k, h) prod_j C(h + d_j, d_j)` with
/// `W = C(k, h+1)` (corrected) or `W = C(k, h)` (as printed).
pub fn stirling2_closed(shape: &MultisetShape, k: usize, variant: StirlingVariant) -> Result<BigInt> {
    shape.require_nonempty()?;
    check_range("block count k", k, 1, shape.size())?;
    let mut acc = BigInt::zero();
    for h in 0..k {
        let weight = match variant {
            StirlingVariant::Corrected => binomial(k as u64, h as u64 + 1),
            StirlingVariant::AsPrinted => binomial(k as u64, h as u64),
        };
        let term = weight * lattice_count(shape, h as u64);
        if (k - 1 - h).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

pub fn stirling2_row_closed(shape: &MultisetShape, variant: StirlingVariant) -> Result<StirlingRow> {
    shape.require_nonempty()?;
    let values = (1..=shape.size())
        .map(|k| stirling2_closed(shape, k, variant))
        .collect::<Result<Vec<_>>>()?;
    Ok(StirlingRow {
        shape: shape.clone(),
        kind: StirlingKind::SecondOrdered,
        values,
    })
}

/// `|d,k|_O = multinomial(d) * C(d-1, k-1)`.
pub fn lah_ordered(shape: &MultisetShape, k: usize) -> Result<BigInt> {
    shape.require_nonempty()?;
    let d = shape.size();
    check_range("block count k", k, 1, d)?;
    Ok(shape.multinomial() * binomial(d as u64 - 1, k as u64 - 1))
}

pub fn lah_row_closed(shape: &MultisetShape) -> Result<StirlingRow> {
    shape.require_nonempty()?;
    let values = (1..=shape.size())
        .map(|k| lah_ordered(shape, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(StirlingRow {
        shape: shape.clone(),
        kind: StirlingKind::ThirdOrdered,
        values,
    })
}

/// Visits every (permutation, cut set) pair as `(k, chain major index)`,
/// reading the major index off the prefix-content vertices of the chain.
fn for_each_cut_chain(shape: &MultisetShape, mut visit: impl FnMut(usize, usize)) {
    let d = shape.size();
    let l = shape.num_letters();
    let cut_slots = d - 1;
    for_each_permutation_word(shape, |w| {
        let prefixes = prefix_contents(w, l);
        let totals: Vec<usize> = prefixes.iter().map(|v| v.iter().map(|&c| c as usize).sum()).collect();
        for mask in 0u64..(1u64 << cut_slots) {
            let mut maj = 0;
            let mut k = 1;
            for slot in 0..cut_slots {
                if mask >> slot & 1 == 1 {
                    maj += totals[slot + 1];
                    k += 1;
                }
            }
            visit(k, maj);
        }
    });
}

/// Counts (permutation, segmentation into k parts) pairs by enumeration.
pub fn lah_row_enum(shape: &MultisetShape) -> Result<StirlingRow> {
    shape.require_nonempty()?;
    let mut counts = vec![0u64; shape.size()];
    for_each_cut_chain(shape, |k, _| counts[k - 1] += 1);
    Ok(StirlingRow {
        shape: shape.clone(),
        kind: StirlingKind::ThirdOrdered,
        values: histogram_to_big(&counts),
    })
}

fn bump(table: &mut [Vec<u64>], index: usize, power: usize) {
    let row = &mut table[index];
    if row.len() <= power {
        row.resize(power + 1, 0);
    }
    row[power] += 1;
}

fn family_from_tables(shape: &MultisetShape, family: Family, table: Vec<Vec<u64>>) -> QPolyFamily {
    QPolyFamily {
        shape: shape.clone(),
        family,
        values: table.iter().map(|counts| QPolynomial::from_counts(counts)).collect(),
    }
}

/// `A_{d,i}(q) = sum over permutations with d - i descents of q^maj`, `i = 1..=d`.
pub fn a_polynomials(shape: &MultisetShape) -> Result<QPolyFamily> {
    shape.require_nonempty()?;
    let d = shape.size();
    let mut table = vec![Vec::new(); d];
    for_each_permutation_word(shape, |w| {
        let i = d - descent_count(w);
        bump(&mut table, i - 1, major_index(w));
    });
    Ok(family_from_tables(shape, Family::A, table))
}

/// `B_{d,k}(q) = sum over k-dimensional chain simplices of q^maj`.
pub fn b_polynomials(shape: &MultisetShape) -> Result<QPolyFamily> {
    shape.require_nonempty()?;
    let mut table = vec![Vec::new(); shape.size()];
    for_each_chain_any_dimension(shape, |vs| bump(&mut table, vs.len() - 2, chain_major_index(vs)));
    Ok(family_from_tables(shape, Family::B, table))
}

/// `C_{d,k}(q) = sum over (permutation, k-segment cut) pairs of q^maj(chain)`.
pub fn c_polynomials(shape: &MultisetShape, method: CMethod) -> Result<QPolyFamily> {
    shape.require_nonempty()?;
    let d = shape.size();
    match method {
        CMethod::Enumeration => {
            let mut table = vec![Vec::new(); d];
            for_each_cut_chain(shape, |k, maj| bump(&mut table, k - 1, maj));
            Ok(family_from_tables(shape, Family::C, table))
        }
        CMethod::Closed => {
            let m = shape.multinomial();
            let values = (1..=d)
                .map(|k| q_binomial(d as u64 - 1, k as u64 - 1).shift(k * (k - 1) / 2).scale(&m))
                .collect();
            Ok(QPolyFamily {
                shape: shape.clone(),
                family: Family::C,
                values,
            })
        }
    }
}

/// Recovers a row by forward substitution on the unit lower-triangular
/// system obtained from a lattice-point identity at `n = 0..d-1`.
///
/// Eulerian: `sum_i C(n - i + d, d) x_i = prod_j C(n + d_j, d_j)`, `i = 0..d-1`.
/// Stirling2: `sum_k C(n + 1, k) x_k = prod_j C(n + d_j, d_j)`, `k = 1..d`.
pub fn solve_from_identity(kind: SolveKind, shape: &MultisetShape) -> Result<Vec<BigInt>> {
    shape.require_nonempty()?;
    let d = shape.size();
    let entry = |n: usize, col: usize| -> BigInt {
        match kind {
            SolveKind::Eulerian => {
                if col > n {
                    BigInt::zero()
                } else {
                    binomial((n - col + d) as u64, d as u64)
                }
            }
            SolveKind::Stirling2 => binomial(n as u64 + 1, col as u64 + 1),
        }
    };
    let mut x: Vec<BigInt> = Vec::with_capacity(d);
    for n in 0..d {
        let mut value = lattice_count(shape, n as u64);
        for (col, known) in x.iter().enumerate() {
            value -= entry(n, col) * known;
        }
        debug_assert!(entry(n, n).is_one());
        x.push(value);
    }
    Ok(x)
}
