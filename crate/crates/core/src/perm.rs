//! Multiset permutations and their descent statistics.

use std::fmt;

use crate::error::{Error, Result};
use crate::shape::MultisetShape;

/// A word over `1..=l` in which letter `j` appears exactly `d_j` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    pub fn new(shape: &MultisetShape, word: Vec<u32>) -> Result<Self> {
        let mut counts = vec![0u32; shape.num_letters()];
        for &letter in &word {
            let slot = (letter as usize)
                .checked_sub(1)
                .and_then(|i| counts.get_mut(i))
                .ok_or_else(|| {
                    Error::InvalidPermutation(format!("letter {letter} not in 1..={}", shape.num_letters()))
                })?;
            *slot += 1;
        }
        if counts != shape.parts() {
            return Err(Error::InvalidPermutation(format!(
                "letter multiplicities {counts:?} do not match shape {shape}"
            )));
        }
        Ok(Permutation { word })
    }

    /// Parses either a digit word (`"211"`) or a comma-separated word (`"2,1,1"`).
    pub fn parse(shape: &MultisetShape, s: &str) -> Result<Self> {
        let s = s.trim();
        let word = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u32>().ok())
                .collect::<Option<Vec<_>>>()
        } else {
            s.chars().map(|c| c.to_digit(10)).collect::<Option<Vec<_>>>()
        }
        .ok_or_else(|| Error::InvalidPermutation(s.to_string()))?;
        Permutation::new(shape, word)
    }

    pub(crate) fn from_word_unchecked(word: Vec<u32>) -> Self {
        Permutation { word }
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Positions `h` (1-based) with `w[h] > w[h+1]`.
    pub fn descent_set(&self) -> Vec<usize> {
        descent_set(&self.word)
    }

    pub fn descent_count(&self) -> usize {
        descent_count(&self.word)
    }

    pub fn major_index(&self) -> usize {
        major_index(&self.word)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.word.iter().copied().max().unwrap_or(0);
        if max <= 9 {
            for letter in &self.word {
                write!(f, "{letter}")?;
            }
        } else {
            for (i, letter) in self.word.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{letter}")?;
            }
        }
        Ok(())
    }
}

pub fn descent_set(word: &[u32]) -> Vec<usize> {
    word.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn descent_count(word: &[u32]) -> usize {
    word.windows(2).filter(|w| w[0] > w[1]).count()
}

pub fn major_index(word: &[u32]) -> usize {
    word.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > w[1])
        .map(|(i, _)| i + 1)
        .sum()
}

/// Rearranges `word` into the next permutation in lexicographic order.
/// Returns `false` (leaving `word` untouched) at the last one.
pub fn next_permutation(word: &mut [u32]) -> bool {
    let n = word.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

/// Lexicographic iterator over all distinct permutations of a multiset.
#[derive(Clone, Debug)]
pub struct Permutations {
    current: Option<Vec<u32>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let word = self.current.as_mut()?;
        let out = word.clone();
        if !next_permutation(word) {
            self.current = None;
        }
        Some(Permutation::from_word_unchecked(out))
    }
}

/// Every distinct permutation of the shape, in lexicographic order.
/// The empty shape yields the single empty word.
pub fn enumerate_permutations(shape: &MultisetShape) -> Permutations {
    Permutations {
        current: Some(shape.sorted_word()),
    }
}

/// Visits each permutation word in lexicographic order without allocating
/// per item.
pub fn for_each_permutation_word(shape: &MultisetShape, mut visit: impl FnMut(&[u32])) {
    let mut word = shape.sorted_word();
    loop {
        visit(&word);
        if !next_permutation(&mut word) {
            break;
        }
    }
}
