use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Element of Z[θ] as integer coordinates in the power basis 1, θ, …, θ^{d−1}.
///
/// Operations that need the minimal polynomial (multiplication by θ, sign,
/// embeddings) live on [`crate::MinPoly`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicInt {
    coords: Vec<BigInt>,
}

impl AlgebraicInt {
    pub fn new(coords: Vec<BigInt>) -> Self {
        assert!(!coords.is_empty(), "Z[θ] needs at least one coordinate");
        Self { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![BigInt::zero(); degree])
    }

    /// The rational integer `v`.
    pub fn from_int(v: BigInt, degree: usize) -> Self {
        let mut a = Self::zero(degree);
        a.coords[0] = v;
        a
    }

    pub fn one(degree: usize) -> Self {
        Self::from_int(BigInt::one(), degree)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.degree() == other.degree() {
            Ok(())
        } else {
            Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() })
        }
    }

    /// Coordinate-wise sum.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()))
    }

    /// Adds the rational integer `v`.
    pub fn add_int(&self, v: &BigInt) -> Self {
        let mut out = self.clone();
        out.coords[0] += v;
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coords.iter().map(|c| c * k).collect())
    }
}

impl Neg for &AlgebraicInt {
    type Output = AlgebraicInt;
    fn neg(self) -> AlgebraicInt {
        AlgebraicInt::new(self.coords.iter().map(|c| -c).collect())
    }
}

impl Neg for AlgebraicInt {
    type Output = AlgebraicInt;
    fn neg(self) -> AlgebraicInt {
        -&self
    }
}

impl fmt::Display for AlgebraicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_examples() {
        let a = AlgebraicInt::from_i64s(&[1, 0]);
        let b = AlgebraicInt::from_i64s(&[0, 1]);
        assert_eq!(a.checked_add(&b).unwrap(), AlgebraicInt::from_i64s(&[1, 1]));
        assert_eq!(a.checked_add(&AlgebraicInt::zero(2)).unwrap(), a);
        let c = AlgebraicInt::from_i64s(&[2, -1]);
        assert!(c.checked_add(&-&c).unwrap().is_zero());
        assert_eq!(
            a.checked_add(&AlgebraicInt::zero(3)),
            Err(Error::DegreeMismatch { expected: 2, found: 3 })
        );
    }
}
