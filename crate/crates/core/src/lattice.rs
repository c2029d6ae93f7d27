//! Lattice points of the dilated product of simplices `n * (a^{d_1} x ... x a^{d_l})`.
//!
//! A point is a family of weakly decreasing tuples
//! `n >= x_{j,1} >= ... >= x_{j,d_j} >= 0`, one per letter `j`. Regions of the
//! two decompositions are never built as geometry: membership is decided
//! arithmetically on coordinates.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{q_binomial, QBinomialTable};
use crate::chain::ChainSimplex;
use crate::error::{Error, Result};
use crate::numbers::lattice_gf;
use crate::perm::{descent_count, major_index, Permutation};
use crate::poly::QPolynomial;
use crate::shape::MultisetShape;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    n: u32,
    coords: Vec<Vec<u32>>,
}

impl LatticePoint {
    pub fn new(shape: &MultisetShape, n: u32, coords: Vec<Vec<u32>>) -> Result<Self> {
        if coords.len() != shape.num_letters() {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinate groups, got {}",
                shape.num_letters(),
                coords.len()
            )));
        }
        for (j, (group, &part)) in coords.iter().zip(shape.parts()).enumerate() {
            if group.len() != part as usize {
                return Err(Error::InvalidPoint(format!(
                    "group {} needs {part} coordinates, got {}",
                    j + 1,
                    group.len()
                )));
            }
            if group.first().is_some_and(|&x| x > n) {
                return Err(Error::InvalidPoint(format!(
                    "group {} exceeds the bound n = {n}",
                    j + 1
                )));
            }
            if group.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidPoint(format!("group {} is not weakly decreasing", j + 1)));
            }
        }
        Ok(LatticePoint { n, coords })
    }

    /// Parses `"x11,x12;x21"`, one `;`-separated group per letter.
    pub fn parse(shape: &MultisetShape, n: u32, s: &str) -> Result<Self> {
        let coords = s
            .trim()
            .split(';')
            .map(|g| {
                g.split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidPoint(format!("cannot parse {s:?}")))?;
        LatticePoint::new(shape, n, coords)
    }

    pub fn dilation(&self) -> u32 {
        self.n
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.coords
    }

    /// Coordinates in factor-major order.
    pub fn flat(&self) -> Vec<u32> {
        self.coords.iter().flatten().copied().collect()
    }

    /// `sum of all coordinates`, the exponent of `q^x`.
    pub fn weight(&self) -> usize {
        self.coords.iter().flatten().map(|&x| x as usize).sum()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, group) in self.coords.iter().enumerate() {
            if j > 0 {
                f.write_str(";")?;
            }
            for (i, x) in group.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Factor offsets into the flat coordinate layout.
fn offsets(shape: &MultisetShape) -> Vec<usize> {
    let mut acc = 0;
    shape
        .parts()
        .iter()
        .map(|&p| {
            let start = acc;
            acc += p as usize;
            start
        })
        .collect()
}

/// Weakly decreasing tuples of length `len` bounded by `n`, lexicographically
/// ascending.
fn decreasing_tuples(len: usize, n: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, len: usize, bound: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=bound {
            prefix.push(x);
            extend(prefix, len, x, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(len), len, n, &mut out);
    out
}

/// Visits every lattice point of the `n`-th dilate as flat coordinates, in
/// lexicographic order.
pub fn for_each_point_flat(shape: &MultisetShape, n: u32, mut visit: impl FnMut(&[u32])) {
    let factors: Vec<Vec<Vec<u32>>> = shape
        .parts()
        .iter()
        .map(|&p| decreasing_tuples(p as usize, n))
        .collect();
    let offs = offsets(shape);
    let mut buf = vec![0u32; shape.size()];
    let mut idx = vec![0usize; factors.len()];
    for (j, f) in factors.iter().enumerate() {
        buf[offs[j]..offs[j] + f[0].len()].copy_from_slice(&f[0]);
    }
    loop {
        visit(&buf);
        let mut j = factors.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < factors[j].len() {
                let t = &factors[j][idx[j]];
                buf[offs[j]..offs[j] + t.len()].copy_from_slice(t);
                break;
            }
            idx[j] = 0;
            let t = &factors[j][0];
            buf[offs[j]..offs[j] + t.len()].copy_from_slice(t);
        }
    }
}

pub fn enumerate_points(shape: &MultisetShape, n: u32) -> Vec<LatticePoint> {
    let offs = offsets(shape);
    let mut out = Vec::new();
    for_each_point_flat(shape, n, |flat| {
        let coords = shape
            .parts()
            .iter()
            .zip(&offs)
            .map(|(&p, &o)| flat[o..o + p as usize].to_vec())
            .collect();
        out.push(LatticePoint { n, coords });
    });
    out
}

/// Precomputed label layout for classifying many points of one shape.
#[derive(Clone, Debug)]
pub struct Classifier {
    shape: MultisetShape,
    /// letter (1-based) of each flat slot
    letters: Vec<u32>,
    offsets: Vec<usize>,
}

impl Classifier {
    pub fn new(shape: &MultisetShape) -> Self {
        Classifier {
            shape: shape.clone(),
            letters: shape.sorted_word(),
            offsets: offsets(shape),
        }
    }

    pub fn shape(&self) -> &MultisetShape {
        &self.shape
    }

    /// Reading order of flat slots: value descending, then letter, then
    /// position within the letter's group.
    pub fn reading_order(&self, flat: &[u32]) -> Vec<usize> {
        let mut order: Vec<usize> = (0..flat.len()).collect();
        // flat slots are already letter-major then index-ascending
        order.sort_by(|&a, &b| flat[b].cmp(&flat[a]).then(a.cmp(&b)));
        order
    }

    /// Letter word of the reading order.
    pub fn first_word(&self, flat: &[u32]) -> Vec<u32> {
        self.reading_order(flat).into_iter().map(|s| self.letters[s]).collect()
    }

    /// Whether `flat` lies in the half-open region `A(word)` of the `n`-th
    /// dilate: weakly decreasing along the word, strictly at descents.
    pub fn in_first_region(&self, word: &[u32], flat: &[u32], n: u32) -> bool {
        self.read_along(word, flat, n, true)
    }

    /// Whether `flat` lies in the closed simplex of `word` (weak chain only).
    pub fn in_closed_simplex(&self, word: &[u32], flat: &[u32], n: u32) -> bool {
        self.read_along(word, flat, n, false)
    }

    fn read_along(&self, word: &[u32], flat: &[u32], n: u32, strict_at_descents: bool) -> bool {
        let mut seen = vec![0usize; self.offsets.len()];
        let mut prev_value = n;
        let mut prev_letter = 0u32;
        for &letter in word {
            let j = letter as usize - 1;
            let value = flat[self.offsets[j] + seen[j]];
            seen[j] += 1;
            if value > prev_value {
                return false;
            }
            if strict_at_descents && prev_letter > letter && value == prev_value {
                return false;
            }
            prev_value = value;
            prev_letter = letter;
        }
        true
    }

    /// Chain vertices of the second decomposition: one block per distinct
    /// value, cumulative contents taken in descending value order.
    pub fn second_chain(&self, flat: &[u32]) -> Vec<Vec<u32>> {
        let mut values: Vec<u32> = flat.to_vec();
        values.sort_unstable_by(|a, b| b.cmp(a));
        values.dedup();
        let l = self.offsets.len();
        let mut vertices = Vec::with_capacity(values.len() + 1);
        vertices.push(vec![0u32; l]);
        for &y in &values {
            let v = (0..l)
                .map(|j| {
                    let group = &flat[self.offsets[j]..self.offsets[j] + self.shape.parts()[j] as usize];
                    group.iter().filter(|&&x| x >= y).count() as u32
                })
                .collect();
            vertices.push(v);
        }
        vertices
    }

    /// Whether `flat` lies in the region of the chain in the `n`-th dilate:
    /// constant on each block, strictly decreasing across blocks, within `[0, n]`.
    pub fn in_chain_region(&self, chain: &[Vec<u32>], flat: &[u32], n: u32) -> bool {
        let mut prev: Option<u32> = None;
        for w in chain.windows(2) {
            let mut block_value: Option<u32> = None;
            for j in 0..self.offsets.len() {
                for i in w[0][j]..w[1][j] {
                    let x = flat[self.offsets[j] + i as usize];
                    match block_value {
                        None => block_value = Some(x),
                        Some(y) if y != x => return false,
                        _ => {}
                    }
                }
            }
            let y = match block_value {
                Some(y) => y,
                None => return false,
            };
            if y > n || prev.is_some_and(|p| p <= y) {
                return false;
            }
            prev = Some(y);
        }
        true
    }
}

/// The permutation whose half-open region contains `x`.
pub fn classify_first(shape: &MultisetShape, x: &LatticePoint) -> Permutation {
    let classifier = Classifier::new(shape);
    Permutation::from_word_unchecked(classifier.first_word(&x.flat()))
}

/// The chain simplex whose region contains `x`.
pub fn classify_second(shape: &MultisetShape, x: &LatticePoint) -> ChainSimplex {
    let classifier = Classifier::new(shape);
    ChainSimplex::from_vertices_unchecked(classifier.second_chain(&x.flat()))
}

/// `sum over lattice points of q^x`, as the product of Gaussian binomials.
pub fn f1(shape: &MultisetShape, n: u32) -> QPolynomial {
    lattice_gf(shape, n as u64)
}

/// `f1` by summing over the enumerated points.
pub fn f1_by_enumeration(shape: &MultisetShape, n: u32) -> QPolynomial {
    let mut counts = Vec::new();
    for_each_point_flat(shape, n, |flat| bump(&mut counts, weight(flat)));
    QPolynomial::from_counts(&counts)
}

/// `q^maj * [n - des + d, d]_q`, the generating function of `A(p)` in the
/// `n`-th dilate.
pub fn region_gf(p: &Permutation, n: u32) -> QPolynomial {
    let d = p.len() as i64;
    let top = n as i64 - p.descent_count() as i64 + d;
    if top < d {
        return QPolynomial::zero();
    }
    q_binomial(top as u64, d as u64).shift(p.major_index())
}

/// `region_gf` by summing `q^x` over points classified into `p`.
pub fn region_gf_by_enumeration(shape: &MultisetShape, p: &Permutation, n: u32) -> QPolynomial {
    let classifier = Classifier::new(shape);
    let mut counts = Vec::new();
    for_each_point_flat(shape, n, |flat| {
        if classifier.first_word(flat) == p.word() {
            bump(&mut counts, weight(flat));
        }
    });
    QPolynomial::from_counts(&counts)
}

/// `sum over n >= y_1 > ... > y_k >= 0 of q^(m_1 y_1 + ... + m_k y_k)`
/// for block sizes `m`, by dynamic programming over the upper bound.
pub fn weight_sum_for_blocks(block_sizes: &[usize], n: u32) -> QPolynomial {
    let n = n as usize;
    let k = block_sizes.len();
    if k == 0 {
        return QPolynomial::one();
    }
    // below[u] = sum over admissible tails y_a > ... with y_a <= u
    // (index u + 1 so that below[0] stands for the empty range u = -1)
    let mut below: Vec<QPolynomial> = vec![QPolynomial::one(); n + 2];
    for &m in block_sizes.iter().rev() {
        let mut next = vec![QPolynomial::zero(); n + 2];
        let mut running = QPolynomial::zero();
        for y in 0..=n {
            running += below[y].shift(m * y);
            next[y + 1] = running.clone();
        }
        below = next;
    }
    below[n + 1].clone()
}

/// Exact generating function of the chain's region in the `n`-th dilate.
pub fn chain_weight_sum(c: &ChainSimplex, n: u32) -> QPolynomial {
    weight_sum_for_blocks(&c.block_sizes(), n)
}

/// `multinomial * [n + d, d]_q`: the closed simplices of all permutations,
/// each contributing a Gaussian binomial.
pub fn f2(shape: &MultisetShape, n: u32) -> QPolynomial {
    let d = shape.size() as u64;
    q_binomial(n as u64 + d, d).scale(&shape.multinomial())
}

/// `f2` by testing every point against every closed permutation simplex.
pub fn f2_by_membership(shape: &MultisetShape, n: u32) -> QPolynomial {
    let classifier = Classifier::new(shape);
    let words: Vec<Vec<u32>> = crate::perm::enumerate_permutations(shape)
        .map(|p| p.word().to_vec())
        .collect();
    let mut counts = Vec::new();
    for_each_point_flat(shape, n, |flat| {
        let w = weight(flat);
        for word in &words {
            if classifier.in_closed_simplex(word, flat, n) {
                bump(&mut counts, w);
            }
        }
    });
    QPolynomial::from_counts(&counts)
}

fn weight(flat: &[u32]) -> usize {
    flat.iter().map(|&x| x as usize).sum()
}

fn bump(counts: &mut Vec<u64>, power: usize) {
    if counts.len() <= power {
        counts.resize(power + 1, 0);
    }
    counts[power] += 1;
}

/// Per-region histograms of `q`-weights. Tallies from disjoint slices of the
/// point stream merge into the tally of the whole stream.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegionTally<K: Ord> {
    regions: BTreeMap<K, Vec<u64>>,
}

impl<K: Ord> RegionTally<K> {
    pub fn new() -> Self {
        RegionTally {
            regions: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, key: K, weight: usize) {
        bump(self.regions.entry(key).or_default(), weight);
    }

    pub fn merge(&mut self, other: RegionTally<K>) {
        for (key, counts) in other.regions {
            let mine = self.regions.entry(key).or_default();
            if mine.len() < counts.len() {
                mine.resize(counts.len(), 0);
            }
            for (a, b) in mine.iter_mut().zip(counts) {
                *a += b;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn size(&self, key: &K) -> u64 {
        self.regions.get(key).map_or(0, |c| c.iter().sum())
    }

    pub fn gf(&self, key: &K) -> QPolynomial {
        self.regions
            .get(key)
            .map_or_else(QPolynomial::zero, |c| QPolynomial::from_counts(c))
    }

    pub fn total(&self) -> u64 {
        self.regions.values().flatten().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Vec<u64>)> {
        self.regions.iter()
    }
}

/// Classifies every point of the `n`-th dilate under the first decomposition.
/// Points that fail their region's inequalities are counted separately and
/// left out of the tally.
pub fn tally_first(shape: &MultisetShape, n: u32) -> (RegionTally<Vec<u32>>, u64) {
    let classifier = Classifier::new(shape);
    let mut tally = RegionTally::new();
    let mut bad = 0;
    for_each_point_flat(shape, n, |flat| {
        let word = classifier.first_word(flat);
        if classifier.in_first_region(&word, flat, n) {
            tally.record(word, weight(flat));
        } else {
            bad += 1;
        }
    });
    (tally, bad)
}

/// Same as [`tally_first`] for the second decomposition.
pub fn tally_second(shape: &MultisetShape, n: u32) -> (RegionTally<Vec<Vec<u32>>>, u64) {
    let classifier = Classifier::new(shape);
    let mut tally = RegionTally::new();
    let mut bad = 0;
    for_each_point_flat(shape, n, |flat| {
        let chain = classifier.second_chain(flat);
        if classifier.in_chain_region(&chain, flat, n) {
            tally.record(chain, weight(flat));
        } else {
            bad += 1;
        }
    });
    (tally, bad)
}

/// Output of the CLI `classify` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub sigma: String,
    pub descents: Vec<usize>,
    pub maj: usize,
    pub chain: String,
    pub block_sizes: Vec<usize>,
    pub k: usize,
}

pub fn classify(shape: &MultisetShape, x: &LatticePoint) -> Classification {
    let sigma = classify_first(shape, x);
    let chain = classify_second(shape, x);
    Classification {
        sigma: sigma.to_string(),
        descents: sigma.descent_set(),
        maj: sigma.major_index(),
        chain: chain.to_string(),
        block_sizes: chain.block_sizes(),
        k: chain.dimension(),
    }
}

/// Sums `q^maj * [n - des + d, d]_q` over all permutations using a shared
/// Gaussian-binomial table.
pub fn first_decomposition_gf(shape: &MultisetShape, n: u32, table: &QBinomialTable) -> QPolynomial {
    let d = shape.size() as i64;
    let mut total = QPolynomial::zero();
    crate::perm::for_each_permutation_word(shape, |w| {
        let top = n as i64 - descent_count(w) as i64 + d;
        total += table.get(top, d).shift(major_index(w));
    });
    total
}
