//! Traces α_k = Σ_j θ_j^k and conjugate power statistics.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebraic::interval::{pow2, shr_ceil, shr_floor};
use crate::algebraic::{ComplexInterval, Interval, MinPoly};
use crate::error::{Error, Result};

/// α_1, …, α_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSequence {
    pub values: Vec<BigInt>,
}

impl TraceSequence {
    /// α_k, 1-based.
    pub fn get(&self, k: usize) -> Option<&BigInt> {
        k.checked_sub(1).and_then(|i| self.values.get(i))
    }
}

/// Exact traces via Newton's identities.
///
/// With p(x) = x^d + p_{d−1}x^{d−1} + … + p_0,
/// α_k + p_{d−1}α_{k−1} + … + p_{d−k+1}α_1 + k·p_{d−k} = 0 for k ≤ d, and
/// α_k = −Σ_{i<d} p_i α_{k−d+i} for k > d.
pub fn newton_traces(mp: &MinPoly, n: usize) -> TraceSequence {
    let p = mp.poly().coeffs();
    let d = mp.degree();
    let mut alpha: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut v = BigInt::zero();
        if k <= d {
            for i in 1..k {
                v -= &p[d - i] * &alpha[k - i - 1];
            }
            v -= &p[d - k] * BigInt::from(k);
        } else {
            for i in 0..d {
                v -= &p[i] * &alpha[k - d + i - 1];
            }
        }
        alpha.push(v);
    }
    TraceSequence { values: alpha }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRatio {
    pub k: usize,
    pub trace: BigInt,
    /// α_k / θ^k
    pub ratio: Interval,
}

/// Certified α_k/θ^k for k = 1..n.
pub fn trace_ratio(mp: &MinPoly, n: usize) -> Result<Vec<TraceRatio>> {
    let prec = 96 + 2 * bit_length(n);
    let theta = mp.theta(prec + 16)?;
    let traces = newton_traces(mp, n);
    let mut power = Interval::from_i64(1, prec);
    let mut rows = Vec::with_capacity(n);
    for (i, trace) in traces.values.into_iter().enumerate() {
        power = (&power * &theta).with_prec(prec);
        let ratio = Interval::from_int(&trace, prec).checked_div(&power).expect("θ^k > 0");
        rows.push(TraceRatio { k: i + 1, trace, ratio });
    }
    Ok(rows)
}

/// Certified Σ_j σ_j(θ^k), summing the conjugate embeddings numerically.
pub fn trace_enclosure(mp: &MinPoly, k: usize, precision: u32) -> Result<ComplexInterval> {
    let power = mp.theta_pow(k);
    let mut acc = ComplexInterval::from_i64(0, precision);
    for j in 1..=mp.degree() {
        acc = &acc + &mp.embed(&power, j, precision + 8)?;
    }
    Ok(acc)
}

fn bit_length(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Complex disk with center `(re + i·im)·2^-prec` and radius `rad·2^-prec`.
#[derive(Clone, Debug)]
struct Disk {
    re: BigInt,
    im: BigInt,
    rad: BigInt,
    prec: u32,
}

impl Disk {
    fn one(prec: u32) -> Self {
        Self { re: pow2(prec), im: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    fn from_enclosure(z: &ComplexInterval, prec: u32) -> Self {
        let re = z.re.with_prec(prec);
        let im = z.im.with_prec(prec);
        let mid = |x: &Interval| shr_floor(&(x.lo_scaled() + x.hi_scaled()), 1);
        let (cr, ci) = (mid(&re), mid(&im));
        let half = |x: &Interval, c: &BigInt| (x.hi_scaled() - c).max(c - x.lo_scaled());
        // The box's circumscribing disk: radius ≤ half-width_re + half-width_im.
        let rad = half(&re, &cr) + half(&im, &ci);
        Self { re: cr, im: ci, rad, prec }
    }

    /// Upper bound on |center|, scaled.
    fn center_abs_hi(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im).sqrt() + 1
    }

    fn mul(&self, other: &Disk) -> Disk {
        let p = self.prec;
        let re = shr_floor(&(&self.re * &other.re - &self.im * &other.im), p);
        let im = shr_floor(&(&self.re * &other.im + &self.im * &other.re), p);
        let spread = self.center_abs_hi() * &other.rad + other.center_abs_hi() * &self.rad + &self.rad * &other.rad;
        // Two floor roundings, one per component.
        let rad = shr_ceil(&spread, p) + 2;
        Disk { re, im, rad, prec: p }
    }

    fn re_interval(&self) -> Interval {
        Interval::from_scaled(&self.re - &self.rad, &self.re + &self.rad, self.prec)
    }
}

/// Partial means A_t = (1/t)·Σ_{k≤t} Re((θ_j/|θ_j|)^k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngularStats {
    pub j: usize,
    pub n: usize,
    /// A_1, …, A_n.
    pub averages: Vec<Interval>,
}

/// Birkhoff averages of the rotation by θ_j/|θ_j|, for non-real θ_j.
///
/// Whether θ_j/|θ_j| is a root of unity is not checked.
pub fn angular_average(mp: &MinPoly, j: usize, n: usize) -> Result<AngularStats> {
    mp.check_index(j)?;
    if mp.conjugates().get(j).expect("index checked").is_real() {
        return Err(Error::RealConjugate(j));
    }
    let prec = 96 + 2 * bit_length(n);
    let root = mp.conjugates_at(prec + 16)?.get(j).expect("index checked").enclosure();
    let unit = root.checked_div_real(&root.abs()).expect("nonzero root");
    let step = Disk::from_enclosure(&unit, prec);
    let mut power = Disk::one(prec);
    let mut sum = Interval::zero(prec);
    let mut averages = Vec::with_capacity(n);
    for t in 1..=n {
        power = power.mul(&step);
        sum = &sum + &power.re_interval();
        let mean = sum.div_int(&BigInt::from(t)).expect("t > 0");
        averages.push(clamp_unit(mean));
    }
    Ok(AngularStats { j, n, averages })
}

/// Intersection with [−1, 1], which always holds for a mean of cosines.
fn clamp_unit(x: Interval) -> Interval {
    let p = x.prec();
    let one = pow2(p);
    let lo = x.lo_scaled().clone().max(-&one);
    let hi = x.hi_scaled().clone().min(one);
    if lo > hi {
        x
    } else {
        Interval::from_scaled(lo, hi, p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumRow {
    pub t: usize,
    /// Σ_{k≤t} Re(θ_j^k)
    pub sum: Interval,
    /// √t·|θ_j|^t
    pub normalizer: Interval,
}

/// Partial sums Σ_{k≤t} Re(θ_j^k) beside √t·|θ_j|^t, t = 1..n.
pub fn real_power_sum(mp: &MinPoly, j: usize, n: usize) -> Result<Vec<PowerSumRow>> {
    mp.check_index(j)?;
    let prec = 96 + 2 * bit_length(n);
    let set = mp.conjugates_at(prec + 16)?;
    let root = set.get(j).expect("index checked");
    let abs = root.modulus();
    let step = if root.is_real() {
        Disk::from_enclosure(&ComplexInterval::real(root.re()), prec)
    } else {
        Disk::from_enclosure(&root.enclosure(), prec)
    };
    let mut power = Disk::one(prec);
    let mut abs_pow = Interval::from_i64(1, prec);
    let mut sum = Interval::zero(prec);
    let mut rows = Vec::with_capacity(n);
    for t in 1..=n {
        power = power.mul(&step);
        abs_pow = (&abs_pow * &abs).with_prec(prec);
        sum = &sum + &power.re_interval();
        let normalizer = (&Interval::from_i64(t as i64, prec).sqrt() * &abs_pow).with_prec(prec);
        rows.push(PowerSumRow { t, sum: sum.clone(), normalizer });
    }
    Ok(rows)
}
