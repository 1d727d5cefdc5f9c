//! Conjectural linear recurrences fitted to count sequences.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// a_k = Σ_{i=1}^{r} coeffs[i−1]·a_{k−i}. Fitted, never proved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub coeffs: Vec<BigInt>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// True iff every term from index `order` on follows from its predecessors.
    pub fn reproduces(&self, terms: &[BigInt]) -> bool {
        let r = self.order();
        (r..terms.len()).all(|k| self.next_from(&terms[k - r..k]) == terms[k])
    }

    /// Term following `window` (the last `order` terms, oldest first).
    pub fn next_from(&self, window: &[BigInt]) -> BigInt {
        self.coeffs.iter().zip(window.iter().rev()).map(|(c, a)| c * a).sum()
    }
}

impl fmt::Display for Recurrence {
    /// `a(n) = 3a(n-1) - 2a(n-2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a(n) =")?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let coeff = if mag.is_one() { String::new() } else { mag.to_string() };
            if first && sign.is_empty() {
                write!(f, " {coeff}a(n-{})", i + 1)?;
            } else {
                write!(f, " {sign} {coeff}a(n-{})", i + 1)?;
            }
            first = false;
        }
        if first {
            f.write_str(" 0")?;
        }
        Ok(())
    }
}

/// Smallest-order integer recurrence of order at most `len/2` matching every
/// supplied term. Needs at least 8 terms.
pub fn guess_recurrence(counts: &[u64]) -> Option<Recurrence> {
    if counts.len() < 8 {
        return None;
    }
    let terms: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
    (1..=terms.len() / 2).find_map(|r| fit(&terms, r))
}

fn fit(terms: &[BigInt], r: usize) -> Option<Recurrence> {
    // Rows k = r..len: Σ_i x_i a_{k−i} = a_k.
    let mut rows: Vec<Vec<BigRational>> = (r..terms.len())
        .map(|k| {
            let mut row: Vec<BigRational> =
                (1..=r).map(|i| BigRational::from_integer(terms[k - i].clone())).collect();
            row.push(BigRational::from_integer(terms[k].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for v in rows[row].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != row && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..=r {
                    let delta = &factor * &rows[row][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|rw| !rw[r].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); r];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][r].clone();
    }
    if !x.iter().all(|v| v.is_integer()) {
        return None;
    }
    let rec = Recurrence { coeffs: x.into_iter().map(|v| v.to_integer()).collect() };
    rec.reproduces(terms).then_some(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_two_minus_one() {
        let counts: Vec<u64> = (1..=8).map(|n| (1 << (n + 1)) - 1).collect();
        let rec = guess_recurrence(&counts).unwrap();
        assert_eq!(rec.coeffs, vec![BigInt::from(3), BigInt::from(-2)]);
        assert_eq!(rec.to_string(), "a(n) = 3a(n-1) - 2a(n-2)");
    }

    #[test]
    fn constant_sequence() {
        let rec = guess_recurrence(&[5; 9]).unwrap();
        assert_eq!(rec.coeffs, vec![BigInt::one()]);
        assert_eq!(rec.to_string(), "a(n) = a(n-1)");
    }

    #[test]
    fn short_or_irregular_input() {
        assert_eq!(guess_recurrence(&[1, 2, 3]), None);
        assert_eq!(guess_recurrence(&[1, 2, 4, 8, 16, 32, 64, 129]), None);
    }

    #[test]
    fn fibonacci() {
        let rec = guess_recurrence(&[1, 1, 2, 3, 5, 8, 13, 21, 34, 55]).unwrap();
        assert_eq!(rec.coeffs, vec![BigInt::one(), BigInt::one()]);
    }
}
