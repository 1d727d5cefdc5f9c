use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::interval::{ComplexInterval, Interval};
use super::poly::IntPolynomial;
use super::roots::{isolate, ConjugateSet};
use super::zint::AlgebraicInt;
use crate::error::{Error, Result};

/// Default ceiling, in bits, for precision refinement in modulus comparisons.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Hard ceiling for refinements that are guaranteed to terminate (signs of
/// nonzero algebraic integers); reaching it means the input is degenerate.
const ABSOLUTE_PRECISION_LIMIT: u32 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PerronStatus {
    Perron,
    NotPerron,
    /// A modulus comparison stayed ambiguous up to the precision cap.
    Undecided,
}

/// Comparison of |θ_j| against θ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModulusOrder {
    Less,
    Equal,
    Greater,
    Undecided,
}

/// Monic minimal polynomial of a real algebraic integer θ > 1 together with
/// certified data about its roots.
///
/// Construction checks that the polynomial is monic, squarefree and (for
/// degree > 1) free of rational roots, isolates all roots, and requires the
/// root of largest modulus to be real, positive and greater than 1 (ties in
/// modulus are allowed; they make the number non-Perron). Full irreducibility
/// is not verified: callers must pass the minimal polynomial.
///
/// Values are immutable; refined root sets are cached behind a lock so a
/// `MinPoly` can be shared across threads.
#[derive(Clone, Debug)]
pub struct MinPoly {
    poly: IntPolynomial,
    floor_theta: u64,
    conjugates: Arc<ConjugateSet>,
    cache: Arc<RwLock<Vec<Arc<ConjugateSet>>>>,
    precision_cap: u32,
    status: PerronStatus,
    orders: Vec<ModulusOrder>,
}

impl MinPoly {
    pub fn new(poly: IntPolynomial, precision: u32) -> Result<Self> {
        Self::with_cap(poly, precision, DEFAULT_PRECISION_CAP)
    }

    pub fn with_cap(poly: IntPolynomial, precision: u32, precision_cap: u32) -> Result<Self> {
        let d = poly.degree();
        if d == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !poly.is_monic() {
            return Err(Error::NotMonic);
        }
        if !poly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        if d > 1 && poly.coeffs()[0].is_zero() {
            return Err(Error::RationalRoot(BigInt::zero()));
        }
        let precision = precision.max(32);
        let conjugates = Arc::new(isolate(&poly, precision, precision_cap, None)?);
        if d > 1 {
            for root in conjugates.roots().iter().filter(|r| r.is_real()) {
                let re = root.re();
                let mut k = re.floor_lo();
                while k <= re.ceil_hi() {
                    if poly.eval(&k).is_zero() {
                        return Err(Error::RationalRoot(k));
                    }
                    k += 1;
                }
            }
        }
        let mut mp = Self {
            poly,
            floor_theta: 0,
            cache: Arc::new(RwLock::new(vec![conjugates.clone()])),
            conjugates,
            precision_cap,
            status: PerronStatus::Undecided,
            orders: Vec::new(),
        };
        mp.check_above_one()?;
        mp.orders = (2..=d).map(|j| mp.compare_modulus(j)).collect::<Result<_>>()?;
        for (k, order) in mp.orders.iter().enumerate() {
            if *order == ModulusOrder::Greater {
                let root = mp.conjugates.get(k + 2).expect("index in range");
                return Err(if root.is_real() { Error::NegativeDominant } else { Error::NonRealDominant });
            }
        }
        mp.status = if mp.orders.iter().all(|o| *o == ModulusOrder::Less) {
            PerronStatus::Perron
        } else if mp.orders.contains(&ModulusOrder::Equal) {
            PerronStatus::NotPerron
        } else {
            PerronStatus::Undecided
        };
        mp.floor_theta = mp.compute_floor()?;
        Ok(mp)
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// m = ⌊θ⌋, the largest digit.
    pub fn floor_theta(&self) -> u64 {
        self.floor_theta
    }

    pub fn precision_cap(&self) -> u32 {
        self.precision_cap
    }

    /// Roots at construction precision.
    pub fn conjugates(&self) -> &ConjugateSet {
        &self.conjugates
    }

    /// Roots with every disk radius at most `2^-prec`.
    pub fn conjugates_at(&self, prec: u32) -> Result<Arc<ConjugateSet>> {
        {
            let cache = self.cache.read().expect("root cache poisoned");
            if let Some(set) = cache.iter().find(|s| s.prec() >= prec) {
                return Ok(set.clone());
            }
        }
        let finest = {
            let cache = self.cache.read().expect("root cache poisoned");
            cache.last().expect("cache holds the construction set").clone()
        };
        let limit = self.precision_cap.max(ABSOLUTE_PRECISION_LIMIT);
        let refined = Arc::new(isolate(&self.poly, prec, limit, Some(&finest))?);
        let mut cache = self.cache.write().expect("root cache poisoned");
        let pos = cache.partition_point(|s| s.prec() < refined.prec());
        if cache.get(pos).is_none_or(|s| s.prec() != refined.prec()) {
            cache.insert(pos, refined.clone());
        }
        Ok(refined)
    }

    /// Enclosure of θ of width at most `2^(1-prec)`.
    pub fn theta(&self, prec: u32) -> Result<Interval> {
        Ok(self.conjugates_at(prec)?.dominant().re())
    }

    /// Verdict on "θ exceeds every other conjugate in modulus".
    pub fn is_perron(&self) -> PerronStatus {
        self.status
    }

    /// Certified comparison of |θ_j| with θ for each j = 2..d.
    pub fn modulus_orders(&self) -> &[ModulusOrder] {
        &self.orders
    }

    pub fn zero(&self) -> AlgebraicInt {
        AlgebraicInt::zero(self.degree())
    }

    pub fn one(&self) -> AlgebraicInt {
        AlgebraicInt::one(self.degree())
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<AlgebraicInt> {
        if coords.len() != self.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: coords.len() });
        }
        Ok(AlgebraicInt::new(coords))
    }

    pub fn from_int(&self, v: i64) -> AlgebraicInt {
        AlgebraicInt::from_int(BigInt::from(v), self.degree())
    }

    /// Multiplication by θ: shift up one degree and reduce θ^d = −Σ p_i θ^i.
    pub fn mul_by_theta(&self, a: &AlgebraicInt) -> AlgebraicInt {
        let p = self.poly.coeffs();
        let c = a.coords();
        let d = c.len();
        debug_assert_eq!(d, self.degree());
        let top = &c[d - 1];
        let out = (0..d)
            .map(|i| {
                let shifted = if i == 0 { BigInt::zero() } else { c[i - 1].clone() };
                shifted - &p[i] * top
            })
            .collect();
        AlgebraicInt::new(out)
    }

    /// Product in Z[θ].
    pub fn mul(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> Result<AlgebraicInt> {
        a.checked_add(b)?;
        let mut acc = self.zero();
        for c in b.coords().iter().rev() {
            acc = self.mul_by_theta(&acc).checked_add(&a.scale(c))?;
        }
        Ok(acc)
    }

    /// θ^k reduced to the power basis.
    pub fn theta_pow(&self, k: usize) -> AlgebraicInt {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul_by_theta(&acc);
        }
        acc
    }

    /// Σ coeffs[i]·θ^i reduced to the power basis.
    pub fn eval_poly(&self, coeffs: &[BigInt]) -> AlgebraicInt {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul_by_theta(&acc).add_int(c);
        }
        acc
    }

    /// Certified sign of the real number `a` (its value at θ).
    ///
    /// Precision is refined until the enclosure excludes zero. If it never
    /// could, a nonzero algebraic integer would have |N(a)| < 1; the norm
    /// bound |a| ≥ 1/∏_{j≥2}|a(θ_j)| detects that and reports
    /// [`Error::NotMinimal`] instead of looping.
    pub fn sign_of(&self, a: &AlgebraicInt) -> Result<Sign> {
        self.check_degree(a)?;
        if a.is_zero() {
            return Ok(Sign::Zero);
        }
        let coord_bits = a.coords().iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
        let mut prec = 64 + coord_bits;
        loop {
            let set = self.conjugates_at(prec)?;
            let v = eval_real(a.coords(), &set.dominant().re());
            if v.is_positive() {
                return Ok(Sign::Positive);
            }
            if v.is_negative() {
                return Ok(Sign::Negative);
            }
            let mut norm_rest = Interval::from_i64(1, prec);
            for root in &set.roots()[1..] {
                norm_rest = &norm_rest * &eval_complex(a.coords(), &root.enclosure()).abs();
            }
            match Interval::from_i64(1, prec).checked_div(&norm_rest.hi()) {
                None => return Err(Error::NotMinimal),
                Some(bound) => {
                    if v.abs().certainly_lt(&bound.lo()) {
                        return Err(Error::NotMinimal);
                    }
                }
            }
            prec *= 2;
            if prec > ABSOLUTE_PRECISION_LIMIT {
                return Err(Error::PrecisionExhausted(prec));
            }
        }
    }

    /// Enclosure of the real value of `a` with width at most `2^-precision`.
    pub fn eval_dominant(&self, a: &AlgebraicInt, precision: u32) -> Result<Interval> {
        self.check_degree(a)?;
        let mut extra = 16 + a.coords().iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
        loop {
            let set = self.conjugates_at(precision + extra)?;
            let v = eval_real(a.coords(), &set.dominant().re()).with_prec(precision + extra);
            if v.width_at_most_pow2(precision as i64) {
                return Ok(v);
            }
            extra *= 2;
        }
    }

    /// Enclosure of the conjugate embedding σ_j(a) = Σ a_i θ_j^i, j 1-based,
    /// with each component of width at most `2^-precision`.
    pub fn embed(&self, a: &AlgebraicInt, j: usize, precision: u32) -> Result<ComplexInterval> {
        self.check_degree(a)?;
        self.check_index(j)?;
        let mut extra = 16 + a.coords().iter().map(|c| c.bits()).max().unwrap_or(0) as u32;
        loop {
            let set = self.conjugates_at(precision + extra)?;
            let root = set.get(j).expect("index checked");
            let v = if root.is_real() {
                ComplexInterval::real(eval_real(a.coords(), &root.re()))
            } else {
                eval_complex(a.coords(), &root.enclosure())
            };
            if v.width_at_most_pow2(precision as i64) {
                return Ok(v);
            }
            extra *= 2;
        }
    }

    /// Certified comparison of |θ_j| with θ (j 1-based, j ≥ 2).
    ///
    /// Exact ties are recognised exactly: for a negative real θ_j by testing
    /// p(−θ) = 0 in Z[θ]; for non-real θ_j through the separation bound on
    /// the algebraic integer θ² − θ_j·conj(θ_j), whose nonzero value has
    /// modulus at least 1/∏ max(1, |θ_a² − θ_b θ_c|) over the other ordered
    /// triples of distinct roots. Returns `Undecided` when the precision cap
    /// is reached first.
    pub fn compare_modulus(&self, j: usize) -> Result<ModulusOrder> {
        self.check_index(j)?;
        if j == 1 {
            return Ok(ModulusOrder::Equal);
        }
        let d = self.degree();
        let mut prec = self.conjugates.prec();
        if self.conjugates.get(j).expect("index checked").is_real() {
            let mut negative_checked = false;
            loop {
                let set = self.conjugates_at(prec)?;
                let root = set.get(j).expect("index checked").re();
                if root.is_positive() {
                    return Ok(ModulusOrder::Less);
                }
                if root.is_negative() {
                    if !negative_checked {
                        let coeffs: Vec<BigInt> = self
                            .poly
                            .coeffs()
                            .iter()
                            .enumerate()
                            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                            .collect();
                        let at_minus_theta = self.eval_poly(&coeffs);
                        if at_minus_theta.is_zero() {
                            return Ok(ModulusOrder::Equal);
                        }
                        // Fails with NotMinimal if −θ is a root after all.
                        self.sign_of(&at_minus_theta)?;
                        negative_checked = true;
                    }
                    let theta = set.dominant().re();
                    let modulus = -&root;
                    if modulus.certainly_lt(&theta) {
                        return Ok(ModulusOrder::Less);
                    }
                    if modulus.certainly_gt(&theta) {
                        return Ok(ModulusOrder::Greater);
                    }
                }
                prec *= 2;
                if prec > ABSOLUTE_PRECISION_LIMIT {
                    return Err(Error::PrecisionExhausted(prec));
                }
            }
        }
        let jbar = self.conjugates.conjugate_of(j);
        loop {
            let set = self.conjugates_at(prec)?;
            let roots: Vec<ComplexInterval> = set.roots().iter().map(|r| r.enclosure()).collect();
            let theta_sq = set.dominant().re().square();
            let gap = &theta_sq - &roots[j - 1].norm_sqr();
            if gap.is_positive() {
                return Ok(ModulusOrder::Less);
            }
            if gap.is_negative() {
                return Ok(ModulusOrder::Greater);
            }
            let one = Interval::from_i64(1, prec);
            let mut others = one.clone();
            for a in 0..d {
                let sq = &roots[a] * &roots[a];
                for b in 0..d {
                    for c in 0..d {
                        if a == b || b == c || a == c || (a, b, c) == (0, j - 1, jbar - 1) {
                            continue;
                        }
                        let z = &sq - &(&roots[b] * &roots[c]);
                        let bound = z.abs().hi().max(&one);
                        others = &others * &bound;
                    }
                }
            }
            if let Some(sep) = one.checked_div(&others.hi()) {
                if gap.abs().certainly_lt(&sep.lo()) {
                    return Ok(ModulusOrder::Equal);
                }
            }
            if prec >= self.precision_cap {
                return Ok(ModulusOrder::Undecided);
            }
            prec = (prec * 2).min(self.precision_cap);
        }
    }

    fn check_degree(&self, a: &AlgebraicInt) -> Result<()> {
        if a.degree() == self.degree() {
            Ok(())
        } else {
            Err(Error::DegreeMismatch { expected: self.degree(), found: a.degree() })
        }
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if (1..=self.degree()).contains(&j) {
            Ok(())
        } else {
            Err(Error::ConjugateIndex { index: j, degree: self.degree() })
        }
    }

    fn check_above_one(&self) -> Result<()> {
        let one = self.one();
        let theta_minus_one = self.mul_by_theta(&one).checked_sub(&one)?;
        match self.sign_of(&theta_minus_one)? {
            Sign::Positive => Ok(()),
            _ => Err(Error::DominantNotAboveOne),
        }
    }

    fn compute_floor(&self) -> Result<u64> {
        let floor = if self.degree() == 1 {
            -&self.poly.coeffs()[0]
        } else {
            let mut prec = self.conjugates.prec();
            loop {
                let theta = self.theta(prec)?;
                if theta.floor_lo() == theta.floor_hi() {
                    break theta.floor_lo();
                }
                prec *= 2;
                if prec > ABSOLUTE_PRECISION_LIMIT {
                    return Err(Error::PrecisionExhausted(prec));
                }
            }
        };
        floor.to_u64().filter(|&m| m < (1 << 62)).ok_or(Error::DominantTooLarge)
    }
}

/// Horner evaluation of Σ coords[i]·x^i over real intervals.
pub(crate) fn eval_real(coords: &[BigInt], x: &Interval) -> Interval {
    let p = x.prec();
    let mut acc = Interval::zero(p);
    for c in coords.iter().rev() {
        acc = &(&acc * x) + &Interval::from_int(c, p);
    }
    acc
}

pub(crate) fn eval_complex(coords: &[BigInt], z: &ComplexInterval) -> ComplexInterval {
    let p = z.re.prec();
    let mut acc = ComplexInterval::from_i64(0, p);
    for c in coords.iter().rev() {
        acc = (&acc * z).add_int(c);
    }
    acc
}

impl PartialEq for MinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for MinPoly {}
