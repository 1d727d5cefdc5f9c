//! Dyadic interval arithmetic over arbitrary-precision integers.
//!
//! An [`Interval`] at precision `p` is the closed set `[lo·2^-p, hi·2^-p]`.
//! Every operation rounds its endpoints outward, so the result always
//! encloses the exact result for any choice of points in the operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

pub(crate) fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    x.div_floor(&pow2(k))
}

pub(crate) fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    -((-x).div_floor(&pow2(k)))
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Closed interval with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

impl Interval {
    /// Builds `[lo·2^-prec, hi·2^-prec]`. Panics if `lo > hi`.
    pub fn from_scaled(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_scaled(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        let s = v << prec;
        Self::from_scaled(s.clone(), s, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(v), prec)
    }

    /// Outward enclosure of `num/den`. Panics if `den` is zero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let scaled = num << prec;
        Self::from_scaled(scaled.div_floor(&den), div_ceil(&scaled, &den), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Scaled lower endpoint: the bound is `lo_scaled()·2^-prec()`.
    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    /// Re-expresses the interval at another precision, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = prec - self.prec;
                Self::from_scaled(&self.lo << k, &self.hi << k, prec)
            }
            Ordering::Less => {
                let k = self.prec - prec;
                Self::from_scaled(shr_floor(&self.lo, k), shr_ceil(&self.hi, k), prec)
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn lo(&self) -> Interval {
        Self::from_scaled(self.lo.clone(), self.lo.clone(), self.prec)
    }

    pub fn hi(&self) -> Interval {
        Self::from_scaled(self.hi.clone(), self.hi.clone(), self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `Some(ordering)` of the enclosed value against zero when certified.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_positive() {
            Some(Ordering::Greater)
        } else if self.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    pub fn certainly_gt(&self, other: &Self) -> bool {
        other.certainly_lt(self)
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.hi && b.lo <= a.hi
    }

    pub fn contains(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.lo && b.hi <= a.hi
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains(&Self::from_int(v, self.prec))
    }

    /// Scaled width `hi − lo` (in units of `2^-prec`).
    pub fn width_scaled(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// True when the width is at most `2^-bits`.
    pub fn width_at_most_pow2(&self, bits: i64) -> bool {
        let w = self.width_scaled();
        if w.is_zero() {
            return true;
        }
        // w·2^-prec <= 2^-bits  <=>  w <= 2^(prec - bits)
        let e = self.prec as i64 - bits;
        if e < 0 {
            return false;
        }
        w <= pow2(e as u32)
    }

    /// Floor of the lower endpoint.
    pub fn floor_lo(&self) -> BigInt {
        shr_floor(&self.lo, self.prec)
    }

    /// Floor of the upper endpoint.
    pub fn floor_hi(&self) -> BigInt {
        shr_floor(&self.hi, self.prec)
    }

    pub fn ceil_hi(&self) -> BigInt {
        shr_ceil(&self.hi, self.prec)
    }

    /// The only integer the interval can contain, if its endpoints pin one down.
    pub fn unique_integer(&self) -> Option<BigInt> {
        let lo = shr_ceil(&self.lo, self.prec);
        let hi = self.floor_hi();
        (lo == hi).then_some(lo)
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            let hi = (-&self.lo).max(self.hi.clone());
            Self::from_scaled(BigInt::zero(), hi, self.prec)
        } else if self.hi.is_positive() || self.hi.is_zero() && !self.lo.is_negative() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn square(&self) -> Self {
        let a = self.abs();
        let p = self.prec;
        Self::from_scaled(shr_floor(&(&a.lo * &a.lo), p), shr_ceil(&(&a.hi * &a.hi), p), p)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Self::from_scaled(b, a, self.prec)
        } else {
            Self::from_scaled(a, b, self.prec)
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul_int(&BigInt::from(k))
    }

    /// Division; `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            let xs = x << p;
            for y in [&b.lo, &b.hi] {
                let (n, dv) = if y.is_negative() { (-&xs, -y) } else { (xs.clone(), y.clone()) };
                let f = n.div_floor(&dv);
                let c = div_ceil(&n, &dv);
                lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
            }
        }
        Some(Self::from_scaled(lo.unwrap(), hi.unwrap(), p))
    }

    pub fn div_int(&self, k: &BigInt) -> Option<Self> {
        if k.is_zero() {
            return None;
        }
        let (lo, hi) = if k.is_negative() {
            (self.hi.div_floor(k), div_ceil(&self.lo, k))
        } else {
            (self.lo.div_floor(k), div_ceil(&self.hi, k))
        };
        Some(Self::from_scaled(lo, hi, self.prec))
    }

    /// Square root of the nonnegative part.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        let clamp = |x: &BigInt| if x.is_negative() { BigInt::zero() } else { x.clone() };
        // sqrt(x·2^-p) = sqrt(x·2^p)·2^-p
        let lo = (clamp(&self.lo) << p).sqrt();
        let hv = clamp(&self.hi) << p;
        let mut hi = hv.sqrt();
        if &hi * &hi < hv {
            hi += 1;
        }
        Self::from_scaled(lo, hi, p)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::from_i64(1, self.prec);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Convex hull.
    pub fn hull(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::from_scaled(a.lo.min(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Enclosure of `min(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn min(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::from_scaled(a.lo.min(b.lo), a.hi.min(b.hi), a.prec)
    }

    pub fn max(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self::from_scaled(a.lo.max(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Midpoint as an approximate `f64`.
    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.prec + 1)
    }

    pub fn lo_f64(&self) -> f64 {
        scaled_to_f64(&self.lo, self.prec)
    }

    pub fn hi_f64(&self) -> f64 {
        scaled_to_f64(&self.hi, self.prec)
    }

    /// Decimal rendering of the lower endpoint, rounded toward −∞.
    pub fn lo_decimal(&self) -> String {
        to_decimal(&self.lo, self.prec, Rounding::Down, DECIMAL_DIGITS)
    }

    /// Decimal rendering of the upper endpoint, rounded toward +∞.
    pub fn hi_decimal(&self) -> String {
        to_decimal(&self.hi, self.prec, Rounding::Up, DECIMAL_DIGITS)
    }

    /// Decimal rendering of the midpoint (nearest-ish; not an enclosure).
    pub fn mid_decimal(&self) -> String {
        to_decimal(&(&self.lo + &self.hi), self.prec + 1, Rounding::Down, DECIMAL_DIGITS)
    }
}

/// Significant digits used when rendering interval endpoints.
pub const DECIMAL_DIGITS: u32 = 17;

fn scaled_to_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits();
    if bits > 900 {
        let k = (bits - 900) as u32;
        let head = shr_floor(x, k).to_f64().unwrap_or(f64::NAN);
        return head * 2f64.powi(k as i32 - prec as i32);
    }
    let v = x.to_f64().unwrap_or(f64::NAN);
    // split the exponent so 2^-prec does not underflow prematurely
    let mut out = v;
    let mut p = prec as i32;
    while p > 1000 {
        out *= 2f64.powi(-1000);
        p -= 1000;
    }
    out * 2f64.powi(-p)
}

/// Renders `x·2^-prec` with `digits` significant decimal digits, rounding in
/// the given direction. Plain notation is used for moderate exponents.
pub fn to_decimal(x: &BigInt, prec: u32, rounding: Rounding, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let mag = x.abs();
    // Rounding of the magnitude: toward +inf for (Up, positive) or (Down, negative).
    let round_up = matches!((rounding, negative), (Rounding::Up, false) | (Rounding::Down, true));
    let ten = BigInt::from(10);
    // estimate e = floor(log10(value))
    let log2 = mag.bits() as f64 - 1.0 - prec as f64;
    let mut e = (log2 * std::f64::consts::LOG10_2).floor() as i64;
    let scaled = |e: i64| -> BigInt {
        // mag·2^-prec·10^(digits-1-e), rounded
        let k = digits as i64 - 1 - e;
        let (num, den) = if k >= 0 {
            (&mag * num_traits::pow(ten.clone(), k as usize), pow2(prec))
        } else {
            (mag.clone(), pow2(prec) * num_traits::pow(ten.clone(), (-k) as usize))
        };
        if round_up {
            div_ceil(&num, &den)
        } else {
            num.div_floor(&den)
        }
    };
    let lower = num_traits::pow(ten.clone(), (digits - 1) as usize);
    let upper = &lower * &ten;
    let mut s = scaled(e);
    for _ in 0..4 {
        if s >= upper {
            e += 1;
        } else if s < lower {
            e -= 1;
        } else {
            break;
        }
        s = scaled(e);
    }
    if s == upper {
        // rounding carried into a new digit
        e += 1;
        s = lower.clone();
    }
    let mut mantissa = s.to_string();
    while mantissa.len() > 1 && mantissa.ends_with('0') {
        mantissa.pop();
    }
    let sign = if negative { "-" } else { "" };
    if (-6..=20).contains(&e) {
        let body = if e >= 0 {
            let int_len = e as usize + 1;
            if mantissa.len() <= int_len {
                format!("{mantissa}{}", "0".repeat(int_len - mantissa.len()))
            } else {
                format!("{}.{}", &mantissa[..int_len], &mantissa[int_len..])
            }
        } else {
            format!("0.{}{mantissa}", "0".repeat((-e - 1) as usize))
        };
        format!("{sign}{body}")
    } else if mantissa.len() == 1 {
        format!("{sign}{mantissa}e{e}")
    } else {
        format!("{sign}{}.{}e{e}", &mantissa[..1], &mantissa[1..])
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(), self.hi_decimal())
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let (a, b) = self.aligned(rhs);
        Interval::from_scaled(a.lo + b.lo, a.hi + b.hi, a.prec)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let (a, b) = self.aligned(rhs);
        Interval::from_scaled(a.lo - b.hi, a.hi - b.lo, a.prec)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::from_scaled(-&self.hi, -&self.lo, self.prec)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let (a, b) = self.aligned(rhs);
        let p = a.prec;
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        Interval::from_scaled(shr_floor(lo, p), shr_ceil(hi, p), p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        Self { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        Self { re, im: Interval::zero(p) }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::real(Interval::from_i64(v, prec))
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        Self { re: &self.re + &Interval::from_int(k, self.re.prec()), im: self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Interval {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> Interval {
        self.norm_sqr().sqrt()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    pub fn scale_real(&self, k: &Interval) -> Self {
        Self { re: &self.re * k, im: &self.im * k }
    }

    pub fn checked_div_real(&self, k: &Interval) -> Option<Self> {
        Some(Self { re: self.re.checked_div(k)?, im: self.im.checked_div(k)? })
    }

    /// Both components have width at most `2^-bits`.
    pub fn width_at_most_pow2(&self, bits: i64) -> bool {
        self.re.width_at_most_pow2(bits) && self.im.width_at_most_pow2(bits)
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl Add for &ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}
