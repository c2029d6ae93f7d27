//! Exact integer combinatorics: binomials, multinomials and Gaussian binomials.
//!
//! Everything here stays in integer arithmetic. Gaussian binomials are built
//! from the Pascal-type recurrence `[n,k] = [n-1,k-1] + q^k [n-1,k]`, so no
//! rational function ever appears.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::QPolynomial;

/// `n choose k`, with the convention that it vanishes for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Signed-top binomial used by identity right-hand sides such as
/// `C(n - i + d, d)`: zero whenever the top is negative or below `k`.
pub fn binomial_signed(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 {
        return BigInt::zero();
    }
    binomial(n as u64, k as u64)
}

/// `(sum parts)! / prod(part!)`; the empty product gives 1.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Gaussian binomial `[n, k]_q` as an integer polynomial in `q`.
pub fn q_binomial(n: u64, k: u64) -> QPolynomial {
    if k > n {
        return QPolynomial::zero();
    }
    let k = k as usize;
    // row[j] holds [m, j] for the current m, j <= k
    let mut row: Vec<QPolynomial> = vec![QPolynomial::zero(); k + 1];
    row[0] = QPolynomial::one();
    for m in 1..=n as usize {
        let top = m.min(k);
        for j in (1..=top).rev() {
            let shifted = row[j].shift(j);
            row[j] = &row[j - 1] + &shifted;
        }
    }
    row.swap_remove(k)
}

/// Memo table of Gaussian binomials `[n, k]_q` for `n <= max_n`.
///
/// Identity checks request the same handful of Gaussian binomials many times;
/// this builds the whole Pascal triangle once.
#[derive(Clone, Debug)]
pub struct QBinomialTable {
    rows: Vec<Vec<QPolynomial>>,
}

impl QBinomialTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<QPolynomial>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![QPolynomial::one()]);
        for m in 1..=max_n {
            let prev = &rows[m - 1];
            let mut row = Vec::with_capacity(m + 1);
            row.push(QPolynomial::one());
            for j in 1..m {
                row.push(&prev[j - 1] + &prev[j].shift(j));
            }
            row.push(QPolynomial::one());
            rows.push(row);
        }
        QBinomialTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `[n, k]_q`, zero for negative arguments or `k > n`.
    ///
    /// Panics if `n` exceeds the table size.
    pub fn get(&self, n: i64, k: i64) -> QPolynomial {
        if n < 0 || k < 0 || k > n {
            return QPolynomial::zero();
        }
        self.rows[n as usize][k as usize].clone()
    }
}
