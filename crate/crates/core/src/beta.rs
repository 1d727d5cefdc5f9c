//! Greedy θ-expansions and lexicographically admissible digit words.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebraic::minpoly::eval_real;
use crate::algebraic::{AlgebraicInt, Interval, MinPoly, Sign};
use crate::error::{Error, Result};

/// Σ coords[i]·θ^i with rational coordinates, an element of Q(θ).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QThetaNumber {
    pub coords: Vec<BigRational>,
}

impl QThetaNumber {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    pub fn zero(degree: usize) -> Self {
        Self { coords: vec![BigRational::zero(); degree] }
    }

    pub fn from_int(v: i64, degree: usize) -> Self {
        let mut q = Self::zero(degree);
        q.coords[0] = BigRational::from_integer(BigInt::from(v));
        q
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    /// (numerators, common positive denominator).
    fn to_scaled(&self) -> (AlgebraicInt, BigInt) {
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (AlgebraicInt::new(nums), den)
    }
}

impl FromStr for QThetaNumber {
    type Err = Error;

    /// `"[2,-1]"` or `"[1/2, 0, 3/4]"`, low degree first.
    fn from_str(text: &str) -> Result<Self> {
        let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Syntax { column: 1, message: "expected '[…]'".into() })?;
        if inner.is_empty() {
            return Err(Error::Syntax { column: 2, message: "empty coordinate list".into() });
        }
        let coords = inner
            .split(',')
            .map(|part| {
                let part = part.replace('\u{2212}', "-");
                part.parse::<BigRational>().map_err(|_| Error::Syntax {
                    column: 1,
                    message: format!("bad rational coordinate {part:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords })
    }
}

impl fmt::Display for QThetaNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Digits over {0, …, m}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitWord {
    pub digits: Vec<u64>,
    /// Largest admissible digit.
    pub m: u64,
}

impl DigitWord {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

impl fmt::Display for DigitWord {
    /// `10100` when m ≤ 9, otherwise `10,0,3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 && self.m > 9 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// ⌊y⌋ for y = num/den ∈ [0, bound], with exact checks at integer ties.
fn certified_floor(mp: &MinPoly, num: &AlgebraicInt, den: &BigInt) -> Result<BigInt> {
    let bits = num.coords().iter().map(|c| c.bits()).max().unwrap_or(0) as u32 + den.bits() as u32;
    let theta = mp.theta(64 + bits)?;
    let v = eval_real(num.coords(), &theta);
    let lo = v.div_int(den).expect("positive denominator");
    let mut k = lo.floor_lo();
    // Walk up while y − (k+1) ≥ 0.
    loop {
        let next = &k + 1;
        let sign = mp.sign_of(&num.add_int(&(-&next * den)))?;
        if sign == Sign::Negative {
            break;
        }
        k = next;
    }
    // Walk down while y − k < 0.
    while mp.sign_of(&num.add_int(&(-&k * den)))? == Sign::Negative {
        k -= 1;
    }
    Ok(k)
}

/// Applies T(x) = θx − ⌊θx⌋ `n` times and records the digits ⌊θx⌋.
fn greedy_orbit(mp: &MinPoly, x: &QThetaNumber, n: usize, stop_at_zero: bool) -> Result<(Vec<u64>, bool)> {
    let (mut num, den) = x.to_scaled();
    let mut digits = Vec::with_capacity(n);
    for _ in 0..n {
        if stop_at_zero && num.is_zero() {
            return Ok((digits, true));
        }
        num = mp.mul_by_theta(&num);
        let a = certified_floor(mp, &num, &den)?;
        num = num.add_int(&(-&a * &den));
        digits.push(a.to_u64().expect("digit is a nonnegative machine integer"));
    }
    Ok((digits, stop_at_zero && num.is_zero()))
}

/// First `n` digits of the greedy θ-expansion of x ∈ [0, 1).
pub fn greedy_digits(mp: &MinPoly, x: &QThetaNumber, n: usize) -> Result<DigitWord> {
    if x.degree() != mp.degree() {
        return Err(Error::DegreeMismatch { expected: mp.degree(), found: x.degree() });
    }
    let (num, den) = x.to_scaled();
    let below_zero = mp.sign_of(&num)? == Sign::Negative;
    let at_least_one = mp.sign_of(&num.add_int(&-&den))? != Sign::Negative;
    if below_zero || at_least_one {
        return Err(Error::OutOfRange(format!("greedy expansion needs 0 ≤ x < 1, got {x}")));
    }
    let (digits, _) = greedy_orbit(mp, x, n, false)?;
    Ok(DigitWord { digits, m: mp.floor_theta() })
}

/// First `n` digits of the quasi-greedy expansion d*(1).
///
/// If the greedy expansion of 1 stops as d_1…d_t, d*(1) is the periodic word
/// (d_1 … d_{t−1} (d_t − 1))^∞.
pub fn quasi_greedy_one(mp: &MinPoly, n: usize) -> Result<DigitWord> {
    let one = QThetaNumber::from_int(1, mp.degree());
    let (greedy, terminated) = greedy_orbit(mp, &one, n, true)?;
    let digits = if terminated && !greedy.is_empty() {
        let mut period = greedy;
        *period.last_mut().unwrap() -= 1;
        period.iter().copied().cycle().take(n).collect()
    } else {
        greedy
    };
    Ok(DigitWord { digits, m: mp.floor_theta() })
}

/// Counts for lengths 1..=n of words whose every suffix is lexicographically
/// at most the matching prefix of `e`.
///
/// The automaton state is the longest suffix of the word read so far that
/// is a prefix of `e`.
pub fn admissible_counts_for(e: &[u64], m: u64, n: usize) -> Vec<BigUint> {
    assert!(e.len() >= n, "need n digits of the reference word");
    let mut fail = vec![0usize; n + 1];
    let mut k = 0;
    for q in 1..n {
        while k > 0 && e[q] != e[k] {
            k = fail[k];
        }
        if e[q] == e[k] {
            k += 1;
        }
        fail[q + 1] = k;
    }
    // (allowed, next state) for state q and symbol s.
    let step = |q: usize, s: u64| -> Option<usize> {
        let mut r = q;
        loop {
            if s > e[r] {
                return None;
            }
            if r == 0 {
                break;
            }
            r = fail[r];
        }
        let mut r = q;
        loop {
            if e[r] == s {
                return Some(r + 1);
            }
            if r == 0 {
                return Some(0);
            }
            r = fail[r];
        }
    };
    let mut counts = Vec::with_capacity(n);
    let mut dist = vec![BigUint::zero(); n + 1];
    dist[0] = BigUint::one();
    for len in 0..n {
        let mut next = vec![BigUint::zero(); n + 1];
        for q in 0..=len.min(n - 1) {
            if dist[q].is_zero() {
                continue;
            }
            for s in 0..=m.min(e[q]) {
                if let Some(r) = step(q, s) {
                    next[r] += &dist[q];
                }
            }
        }
        dist = next;
        counts.push(dist.iter().sum());
    }
    counts
}

/// Number of length-n words admissible against d*(1).
pub fn count_admissible(mp: &MinPoly, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let e = quasi_greedy_one(mp, n)?;
    Ok(admissible_counts_for(&e.digits, mp.floor_theta(), n).pop().expect("n ≥ 1"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundRow {
    pub n: usize,
    pub admissible: BigUint,
    pub count: u64,
    /// admissible ≤ #D_n
    pub holds: bool,
    /// admissible / θ^n
    pub ratio: Interval,
}

/// Compares admissible-word counts with `counts[k] = #D_{k+1}`.
pub fn lower_bound_check(mp: &MinPoly, counts: &[u64]) -> Result<Vec<LowerBoundRow>> {
    let n = counts.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let e = quasi_greedy_one(mp, n)?;
    let admissible = admissible_counts_for(&e.digits, mp.floor_theta(), n);
    lower_bound_rows(mp, &admissible, counts)
}

/// As [`lower_bound_check`] with precomputed admissible counts.
pub fn lower_bound_rows(mp: &MinPoly, admissible: &[BigUint], counts: &[u64]) -> Result<Vec<LowerBoundRow>> {
    if admissible.len() != counts.len() {
        return Err(Error::LengthMismatch { expected: admissible.len(), found: counts.len() });
    }
    const PREC: u32 = 128;
    let theta = mp.theta(PREC + 16)?.with_prec(PREC);
    let mut power = Interval::from_i64(1, PREC);
    let mut rows = Vec::with_capacity(counts.len());
    for (i, (a, &count)) in admissible.iter().zip(counts).enumerate() {
        power = (&power * &theta).with_prec(PREC);
        let ratio = Interval::from_int(&BigInt::from(a.clone()), PREC).checked_div(&power).expect("θ^n > 0");
        rows.push(LowerBoundRow { n: i + 1, admissible: a.clone(), count, holds: *a <= BigUint::from(count), ratio });
    }
    Ok(rows)
}
