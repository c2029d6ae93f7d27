//! Chain simplices of the staircase triangulation and ordered multiset
//! partitions.
//!
//! A chain simplex containing both extreme vertices of the product of
//! simplices is recorded by its vertex vectors `0 = v_0 < v_1 < ... < v_k = d`,
//! where each step is nonzero and componentwise nonnegative. Successive
//! differences are the blocks of an ordered partition of the multiset.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::shape::MultisetShape;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainSimplex {
    vertices: Vec<Vec<u32>>,
}

/// Ordered partition of a multiset into nonempty blocks, each stored as a
/// content vector (block `h` holds `blocks[h][j]` copies of letter `j + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    blocks: Vec<Vec<u32>>,
}

impl ChainSimplex {
    /// Validates that the vertices run from `0` to the shape vector with
    /// nonzero, nonnegative steps.
    pub fn new(shape: &MultisetShape, vertices: Vec<Vec<u32>>) -> Result<Self> {
        let l = shape.num_letters();
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidChain("no vertices".into()))?;
        if vertices.iter().any(|v| v.len() != l) {
            return Err(Error::InvalidChain(format!("every vertex needs {l} coordinates")));
        }
        if first.iter().any(|&c| c != 0) {
            return Err(Error::InvalidChain("chain must start at the origin".into()));
        }
        if vertices.last().map(Vec::as_slice) != Some(shape.parts()) {
            return Err(Error::InvalidChain(format!("chain must end at ({shape})")));
        }
        for pair in vertices.windows(2) {
            let weakly_up = pair[0].iter().zip(&pair[1]).all(|(a, b)| a <= b);
            if !weakly_up || pair[0] == pair[1] {
                return Err(Error::InvalidChain("steps must be nonzero and nonnegative".into()));
            }
        }
        if shape.is_empty() != (vertices.len() == 1) {
            return Err(Error::InvalidChain("a nonempty shape needs at least one step".into()));
        }
        Ok(ChainSimplex { vertices })
    }

    /// Parses `"0,0;1,0;1,1"`.
    pub fn parse(shape: &MultisetShape, s: &str) -> Result<Self> {
        let vertices = s
            .trim()
            .split(';')
            .map(|v| {
                v.split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidChain(s.to_string()))?;
        ChainSimplex::new(shape, vertices)
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Vec<u32>>) -> Self {
        ChainSimplex { vertices }
    }

    pub fn vertices(&self) -> &[Vec<u32>] {
        &self.vertices
    }

    /// Dimension `k` (number of steps).
    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Sum of coordinate totals of the internal vertices `v_1 .. v_{k-1}`.
    pub fn major_index(&self) -> usize {
        chain_major_index(&self.vertices)
    }

    /// Coordinate totals of the successive steps.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.vertices.windows(2).map(|w| total(&w[1]) - total(&w[0])).collect()
    }

    pub fn to_partition(&self) -> OrderedPartition {
        let blocks = self
            .vertices
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
            .collect();
        OrderedPartition { blocks }
    }
}

impl fmt::Display for ChainSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, c) in v.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

impl OrderedPartition {
    pub fn new(shape: &MultisetShape, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let partition = OrderedPartition { blocks };
        ChainSimplex::new(shape, partition.partial_sums(shape.num_letters()))
            .map_err(|e| Error::InvalidChain(format!("not an ordered partition: {e}")))?;
        Ok(partition)
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn to_chain(&self, shape: &MultisetShape) -> ChainSimplex {
        ChainSimplex {
            vertices: self.partial_sums(shape.num_letters()),
        }
    }

    fn partial_sums(&self, l: usize) -> Vec<Vec<u32>> {
        let mut acc = vec![0u32; l];
        let mut vertices = vec![acc.clone()];
        for block in &self.blocks {
            for (a, b) in acc.iter_mut().zip(block) {
                *a += b;
            }
            vertices.push(acc.clone());
        }
        vertices
    }
}

fn total(v: &[u32]) -> usize {
    v.iter().map(|&c| c as usize).sum()
}

pub(crate) fn chain_major_index(vertices: &[Vec<u32>]) -> usize {
    match vertices.len() {
        0..=2 => 0,
        n => vertices[1..n - 1].iter().map(|v| total(v)).sum(),
    }
}

/// Advances `v` to the next vector of the box `lo <= v <= hi` in
/// lexicographic order.
fn next_in_box(v: &mut [u32], lo: &[u32], hi: &[u32]) -> bool {
    for j in (0..v.len()).rev() {
        if v[j] < hi[j] {
            v[j] += 1;
            return true;
        }
        v[j] = lo[j];
    }
    false
}

/// Depth-first walk over chains from `0` to the shape vector.
///
/// With `target = Some(k)` only chains of exactly `k` steps are produced;
/// with `None` every chain is produced. Children are taken in lexicographic
/// order, so for fixed `k` the output is lexicographic on flattened vertices.
fn walk_chains(shape: &MultisetShape, target: Option<usize>, visit: &mut dyn FnMut(&[Vec<u32>])) {
    let top: Vec<u32> = shape.parts().to_vec();
    let d = shape.size();
    let mut path: Vec<Vec<u32>> = vec![vec![0; top.len()]];

    fn recurse(
        path: &mut Vec<Vec<u32>>,
        top: &[u32],
        d: usize,
        target: Option<usize>,
        visit: &mut dyn FnMut(&[Vec<u32>]),
    ) {
        let current = path.last().unwrap().clone();
        let done = total(&current);
        let steps = path.len() - 1;
        if done == d {
            if target.is_none_or(|k| k == steps) {
                visit(path);
            }
            return;
        }
        if let Some(k) = target {
            // each further step adds at least one element
            if steps >= k || d - done < k - steps {
                return;
            }
        }
        let mut next = current.clone();
        while next_in_box(&mut next, &current, top) {
            if let Some(k) = target {
                let left_after = k - steps - 1;
                let remaining = d - total(&next);
                if remaining < left_after || (left_after == 0 && remaining != 0) {
                    continue;
                }
            }
            path.push(next.clone());
            recurse(path, top, d, target, visit);
            path.pop();
        }
    }

    recurse(&mut path, &top, d, target, visit);
}

/// Every chain simplex of dimension `k`, lexicographic on flattened vertices.
///
/// Empty for `k` outside `1..=d`, except that the empty shape has one chain
/// of dimension 0.
pub fn enumerate_chains(shape: &MultisetShape, k: usize) -> Vec<ChainSimplex> {
    let mut out = Vec::new();
    for_each_chain(shape, k, |vs| {
        out.push(ChainSimplex::from_vertices_unchecked(vs.to_vec()))
    });
    out
}

pub fn for_each_chain(shape: &MultisetShape, k: usize, mut visit: impl FnMut(&[Vec<u32>])) {
    let d = shape.size();
    if d == 0 {
        if k == 0 {
            visit(&[Vec::new()]);
        }
        return;
    }
    if k == 0 || k > d {
        return;
    }
    walk_chains(shape, Some(k), &mut visit);
}

/// Visits chains of every dimension in one pass.
pub fn for_each_chain_any_dimension(shape: &MultisetShape, mut visit: impl FnMut(&[Vec<u32>])) {
    if shape.is_empty() {
        visit(&[Vec::new()]);
        return;
    }
    walk_chains(shape, None, &mut visit);
}

/// Advances `cuts` to the next `r`-subset of `1..=max` in lexicographic order.
pub(crate) fn next_combination(cuts: &mut [usize], max: usize) -> bool {
    let r = cuts.len();
    for i in (0..r).rev() {
        if cuts[i] < max - (r - 1 - i) {
            cuts[i] += 1;
            for j in i + 1..r {
                cuts[j] = cuts[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Prefix content vectors of a word: entry `h` counts each letter among the
/// first `h` positions.
pub fn prefix_contents(word: &[u32], l: usize) -> Vec<Vec<u32>> {
    let mut acc = vec![0u32; l];
    let mut out = Vec::with_capacity(word.len() + 1);
    out.push(acc.clone());
    for &letter in word {
        acc[letter as usize - 1] += 1;
        out.push(acc.clone());
    }
    out
}

/// The chains obtained by cutting the word into `k` nonempty consecutive
/// segments, in lexicographic order of the cut positions.
pub fn chains_of_permutation(p: &Permutation, k: usize) -> Vec<ChainSimplex> {
    let d = p.len();
    if k == 0 || k > d {
        return Vec::new();
    }
    let l = p.word().iter().copied().max().unwrap_or(0) as usize;
    let prefixes = prefix_contents(p.word(), l);
    let mut cuts: Vec<usize> = (1..k).collect();
    let mut out = Vec::new();
    loop {
        let mut vertices = Vec::with_capacity(k + 1);
        vertices.push(prefixes[0].clone());
        vertices.extend(cuts.iter().map(|&c| prefixes[c].clone()));
        vertices.push(prefixes[d].clone());
        out.push(ChainSimplex::from_vertices_unchecked(vertices));
        if !next_combination(&mut cuts, d - 1) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;
    use crate::perm::enumerate_permutations;
    use crate::shape::compositions;
    use num_bigint::BigInt;
    use std::collections::BTreeSet;

    fn shape(parts: &[u32]) -> MultisetShape {
        MultisetShape::new(parts.to_vec())
    }

    fn strings(chains: &[ChainSimplex]) -> Vec<String> {
        chains.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            strings(&enumerate_chains(&shape(&[1, 1]), 2)),
            ["0,0;0,1;1,1", "0,0;1,0;1,1"]
        );
        assert_eq!(strings(&enumerate_chains(&shape(&[1, 1]), 1)), ["0,0;1,1"]);
        assert_eq!(
            strings(&enumerate_chains(&shape(&[2, 1]), 3)),
            ["0,0;0,1;1,1;2,1", "0,0;1,0;1,1;2,1", "0,0;1,0;2,0;2,1"]
        );
        assert!(enumerate_chains(&shape(&[2, 1]), 0).is_empty());
        assert!(enumerate_chains(&shape(&[2, 1]), 4).is_empty());
        assert_eq!(enumerate_chains(&shape(&[]), 0).len(), 1);
        assert!(enumerate_chains(&shape(&[]), 1).is_empty());
    }

    /// Brute force over subsets of internal box points: a chain of dimension
    /// k is a (k-1)-set of intermediate vectors that is totally ordered.
    fn brute_force_chain_count(s: &MultisetShape, k: usize) -> usize {
        let top = s.parts().to_vec();
        let mut interior = Vec::new();
        let zero = vec![0u32; top.len()];
        let mut v = zero.clone();
        while next_in_box(&mut v, &zero, &top) {
            if v != top {
                interior.push(v.clone());
            }
        }
        let leq = |a: &Vec<u32>, b: &Vec<u32>| a.iter().zip(b).all(|(x, y)| x <= y);
        let m = interior.len();
        let mut count = 0;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != k - 1 {
                continue;
            }
            let chosen: Vec<&Vec<u32>> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &interior[i]).collect();
            let comparable = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| leq(a, b) || leq(b, a)));
            if comparable {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn counts_match_brute_force() {
        for s in compositions(5, 5) {
            if s.parts().iter().map(|&p| p as usize + 1).product::<usize>() > 18 {
                continue;
            }
            for k in 1..=s.size() {
                assert_eq!(
                    enumerate_chains(&s, k).len(),
                    brute_force_chain_count(&s, k),
                    "{s} k={k}"
                );
            }
        }
    }

    #[test]
    fn fixed_dimension_and_single_pass_walks_agree() {
        for s in compositions(6, 6) {
            let mut by_k = vec![Vec::new(); s.size() + 1];
            for_each_chain_any_dimension(&s, |vs| by_k[vs.len() - 1].push(vs.to_vec()));
            for (k, by_k) in by_k.iter().enumerate().skip(1) {
                let direct: Vec<Vec<Vec<u32>>> = enumerate_chains(&s, k)
                    .into_iter()
                    .map(|c| c.vertices().to_vec())
                    .collect();
                assert!(direct.windows(2).all(|w| w[0] < w[1]), "{s} k={k} not lex");
                let mut single = by_k.clone();
                single.sort();
                assert_eq!(single, direct, "{s} k={k}");
            }
        }
    }

    #[test]
    fn major_index_and_block_sizes() {
        let s11 = shape(&[1, 1]);
        let s21 = shape(&[2, 1]);
        assert_eq!(ChainSimplex::parse(&s11, "0,0;1,0;1,1").unwrap().major_index(), 1);
        assert_eq!(ChainSimplex::parse(&s21, "0,0;1,0;2,0;2,1").unwrap().major_index(), 3);
        assert_eq!(ChainSimplex::parse(&s21, "0,0;2,1").unwrap().major_index(), 0);
        assert_eq!(ChainSimplex::parse(&s11, "0,0;1,1").unwrap().block_sizes(), vec![2]);
        assert_eq!(
            ChainSimplex::parse(&s11, "0,0;1,0;1,1").unwrap().block_sizes(),
            vec![1, 1]
        );
        assert_eq!(
            ChainSimplex::parse(&s21, "0,0;1,1;2,1").unwrap().block_sizes(),
            vec![2, 1]
        );
        for s in compositions(6, 6) {
            for k in 1..=s.size() {
                for c in enumerate_chains(&s, k) {
                    let sizes = c.block_sizes();
                    assert_eq!(sizes.len(), k);
                    assert!(sizes.iter().all(|&m| m >= 1));
                    assert_eq!(sizes.iter().sum::<usize>(), s.size());
                }
            }
        }
    }

    #[test]
    fn chain_validation() {
        let s = shape(&[2, 1]);
        assert!(ChainSimplex::parse(&s, "0,0;2,1").is_ok());
        assert!(ChainSimplex::parse(&s, "0,0;1,0;1,0;2,1").is_err());
        assert!(ChainSimplex::parse(&s, "0,0;1,1;2,0;2,1").is_err());
        assert!(ChainSimplex::parse(&s, "1,0;2,1").is_err());
        assert!(ChainSimplex::parse(&s, "0,0;2,0").is_err());
        assert!(ChainSimplex::parse(&s, "0,0;2").is_err());
        assert!(ChainSimplex::parse(&s, "0,0").is_err());
    }

    #[test]
    fn cutting_permutations() {
        let s11 = shape(&[1, 1]);
        let s21 = shape(&[2, 1]);
        let p = Permutation::parse(&s11, "12").unwrap();
        assert_eq!(strings(&chains_of_permutation(&p, 2)), ["0,0;1,0;1,1"]);
        let p = Permutation::parse(&s21, "211").unwrap();
        assert_eq!(strings(&chains_of_permutation(&p, 2)), ["0,0;0,1;2,1", "0,0;1,1;2,1"]);
        assert_eq!(strings(&chains_of_permutation(&p, 1)), ["0,0;2,1"]);
        assert!(chains_of_permutation(&p, 4).is_empty());
    }

    #[test]
    fn cut_chains_are_members_and_counted() {
        for s in compositions(6, 6) {
            let d = s.size();
            for k in 1..=d {
                let members: BTreeSet<ChainSimplex> = enumerate_chains(&s, k).into_iter().collect();
                let mut pairs = BigInt::from(0);
                for p in enumerate_permutations(&s) {
                    let cut = chains_of_permutation(&p, k);
                    assert_eq!(BigInt::from(cut.len()), binomial(d as u64 - 1, k as u64 - 1));
                    for c in &cut {
                        assert!(members.contains(c), "{s} {p} {c}");
                        // maj of a cut chain is the sum of the cut positions
                        let cuts_sum: usize = c.vertices()[1..k].iter().map(|v| total(v)).sum();
                        assert_eq!(c.major_index(), cuts_sum);
                    }
                    pairs += cut.len();
                }
                assert_eq!(pairs, s.multinomial() * binomial(d as u64 - 1, k as u64 - 1));
            }
        }
    }

    /// Independent route: ordered partitions as l x k matrices of block
    /// contents with prescribed row sums and no zero column.
    fn ordered_partitions_by_matrix(s: &MultisetShape, k: usize) -> BTreeSet<OrderedPartition> {
        fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
            if parts == 1 {
                return vec![vec![total]];
            }
            let mut out = Vec::new();
            for first in 0..=total {
                for mut rest in weak_compositions(total - first, parts - 1) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        let rows: Vec<Vec<Vec<u32>>> = s.parts().iter().map(|&p| weak_compositions(p, k)).collect();
        let mut out = BTreeSet::new();
        let mut idx = vec![0usize; rows.len()];
        loop {
            let blocks: Vec<Vec<u32>> = (0..k)
                .map(|col| (0..rows.len()).map(|j| rows[j][idx[j]][col]).collect())
                .collect();
            if blocks.iter().all(|b| b.iter().any(|&c| c > 0)) {
                out.insert(OrderedPartition { blocks });
            }
            let mut j = rows.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < rows[j].len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    #[test]
    fn partitions_biject_with_chains() {
        let s = shape(&[2, 1]);
        let c = ChainSimplex::parse(&s, "0,0;1,1;2,1").unwrap();
        assert_eq!(c.to_partition().blocks(), &[vec![1, 1], vec![1, 0]]);
        let s11 = shape(&[1, 1]);
        assert_eq!(
            ChainSimplex::parse(&s11, "0,0;1,1").unwrap().to_partition().blocks(),
            &[vec![1, 1]]
        );

        for s in compositions(6, 6) {
            for k in 1..=s.size() {
                let chains = enumerate_chains(&s, k);
                let from_chains: BTreeSet<OrderedPartition> = chains.iter().map(ChainSimplex::to_partition).collect();
                assert_eq!(from_chains.len(), chains.len());
                assert_eq!(from_chains, ordered_partitions_by_matrix(&s, k), "{s} k={k}");
                for part in &from_chains {
                    let back = part.to_chain(&s);
                    assert_eq!(&back.to_partition(), part);
                    assert!(OrderedPartition::new(&s, part.blocks().to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn combinations_in_order() {
        let mut c = vec![1, 2];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }
}
