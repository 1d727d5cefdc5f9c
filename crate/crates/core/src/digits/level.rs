//! Level-by-level enumeration of D_n(θ).
//!
//! Reindexing the defining sum gives
//!
//! ```text
//! D_{n+1} = { θ·(x + a) : x ∈ D_n, a ∈ {0,…,m} },
//! ```
//!
//! because Σ_{k=1}^{n+1} a_k θ^k = θ·(a_1 + Σ_{k=1}^{n} a_{k+1} θ^k). Each level
//! is stored as a sorted, deduplicated vector of packed keys: coordinate i is
//! offset by the level minimum and packed into a fixed bit field, coordinate 0
//! in the most significant field. Key order is therefore lexicographic order
//! of the coordinate vectors, and the output is identical for any thread
//! count.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::algebraic::{AlgebraicInt, Interval, MinPoly};
use crate::error::{Error, Result};

/// 1 GiB.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    /// Approximate ceiling on bytes held by the enumeration.
    pub memory_budget: u64,
    pub threads: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self { memory_budget: DEFAULT_MEMORY_BUDGET, threads: 1 }
    }
}

/// Bit-field layout of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Codec {
    offsets: Vec<i64>,
    widths: Vec<u32>,
    shifts: Vec<u32>,
}

impl Codec {
    fn for_bounds(bounds: &[(i128, i128)]) -> Option<Codec> {
        let mut offsets = Vec::with_capacity(bounds.len());
        let mut widths = Vec::with_capacity(bounds.len());
        for &(lo, hi) in bounds {
            let lo64 = i64::try_from(lo).ok()?;
            i64::try_from(hi).ok()?;
            let span = (hi - lo) as u128;
            offsets.push(lo64);
            widths.push(128 - span.leading_zeros());
        }
        let total: u32 = widths.iter().sum();
        if total > 128 {
            return None;
        }
        let mut shifts = vec![0; widths.len()];
        let mut acc = 0;
        for i in (0..widths.len()).rev() {
            shifts[i] = acc;
            acc += widths[i];
        }
        Some(Codec { offsets, widths, shifts })
    }

    fn total_bits(&self) -> u32 {
        self.widths.iter().sum()
    }

    #[inline]
    fn encode(&self, coords: &[i64]) -> u128 {
        let mut key = 0u128;
        for i in 0..coords.len() {
            key |= ((coords[i] as i128 - self.offsets[i] as i128) as u128) << self.shifts[i];
        }
        key
    }

    #[inline]
    fn decode(&self, key: u128, out: &mut [i64]) {
        for i in 0..out.len() {
            let mask = if self.widths[i] == 0 { 0 } else { u128::MAX >> (128 - self.widths[i]) };
            out[i] = (((key >> self.shifts[i]) & mask) as i128 + self.offsets[i] as i128) as i64;
        }
    }
}

trait PackedKey: Copy + Ord + Send + Sync + 'static {
    fn from_u128(v: u128) -> Self;
    fn to_u128(self) -> u128;
}

impl PackedKey for u64 {
    #[inline]
    fn from_u128(v: u128) -> Self {
        v as u64
    }
    #[inline]
    fn to_u128(self) -> u128 {
        self as u128
    }
}

impl PackedKey for u128 {
    #[inline]
    fn from_u128(v: u128) -> Self {
        v
    }
    #[inline]
    fn to_u128(self) -> u128 {
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Keys {
    Narrow(Vec<u64>),
    Wide(Vec<u128>),
}

impl Keys {
    fn len(&self) -> usize {
        match self {
            Keys::Narrow(v) => v.len(),
            Keys::Wide(v) => v.len(),
        }
    }

    fn get(&self, i: usize) -> u128 {
        match self {
            Keys::Narrow(v) => v[i] as u128,
            Keys::Wide(v) => v[i],
        }
    }

    fn bytes(&self) -> u64 {
        match self {
            Keys::Narrow(v) => v.capacity() as u64 * 8,
            Keys::Wide(v) => v.capacity() as u64 * 16,
        }
    }
}

/// The deduplicated set D_n(θ), sorted lexicographically by coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSet {
    n: usize,
    dim: usize,
    codec: Codec,
    keys: Keys,
    min: Vec<i64>,
    max: Vec<i64>,
}

impl LevelSet {
    /// D_0 = {0}, the empty sum.
    pub fn zero(dim: usize) -> Self {
        let codec = Codec::for_bounds(&vec![(0, 0); dim]).expect("zero-width codec");
        Self { n: 0, dim, codec, keys: Keys::Narrow(vec![0]), min: vec![0; dim], max: vec![0; dim] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.keys.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Approximate heap bytes held by the level.
    pub fn bytes(&self) -> u64 {
        self.keys.bytes()
    }

    /// Per-coordinate minima and maxima over the level.
    pub fn coordinate_bounds(&self) -> (&[i64], &[i64]) {
        (&self.min, &self.max)
    }

    /// Coordinates of element `i` (in sorted order).
    pub fn coords_i64(&self, i: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        self.codec.decode(self.keys.get(i), &mut out);
        out
    }

    pub fn iter_coords(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.count()).map(|i| self.coords_i64(i))
    }

    pub fn elements(&self) -> impl Iterator<Item = AlgebraicInt> + '_ {
        self.iter_coords().map(|c| AlgebraicInt::from_i64s(&c))
    }

    pub fn contains(&self, a: &AlgebraicInt) -> bool {
        if a.degree() != self.dim {
            return false;
        }
        let mut coords = Vec::with_capacity(self.dim);
        for (i, c) in a.coords().iter().enumerate() {
            match c.to_i64() {
                Some(v) if v >= self.min[i] && v <= self.max[i] => coords.push(v),
                _ => return false,
            }
        }
        let key = self.codec.encode(&coords);
        match &self.keys {
            Keys::Narrow(v) => v.binary_search(&(key as u64)).is_ok(),
            Keys::Wide(v) => v.binary_search(&key).is_ok(),
        }
    }
}

/// Bounds of the coordinates of θ·(x + a) over x in a box, a ∈ [0, m].
fn successor_bounds(p: &[BigInt], min: &[i64], max: &[i64], m: u64) -> Option<Vec<(i128, i128)>> {
    let d = min.len();
    let pc: Vec<i128> = p.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
    let mut vlo: Vec<i128> = min.iter().map(|&x| x as i128).collect();
    let mut vhi: Vec<i128> = max.iter().map(|&x| x as i128).collect();
    vhi[0] = vhi[0].checked_add(m as i128)?;
    let _ = &mut vlo;
    let (tlo, thi) = (vlo[d - 1], vhi[d - 1]);
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let a = pc[i].checked_mul(tlo)?;
        let b = pc[i].checked_mul(thi)?;
        // w_i = v_{i-1} − p_i·top
        let (slo, shi) = if i == 0 { (0, 0) } else { (vlo[i - 1], vhi[i - 1]) };
        let lo = slo.checked_sub(a.max(b))?;
        let hi = shi.checked_sub(a.min(b))?;
        out.push((lo, hi));
    }
    Some(out)
}

struct Step<'a> {
    p: Vec<i128>,
    m: u64,
    from: &'a Codec,
    to: &'a Codec,
    dim: usize,
}

impl Step<'_> {
    #[inline]
    fn expand<Kin: PackedKey, Kout: PackedKey>(&self, key: Kin, out: &mut [Kout]) {
        let d = self.dim;
        let mut v = [0i64; 16];
        let mut big;
        let v: &mut [i64] = if d <= 16 {
            &mut v[..d]
        } else {
            big = vec![0i64; d];
            &mut big[..]
        };
        self.from.decode(key.to_u128(), v);
        let mut w = [0i64; 16];
        let mut wbig;
        let w: &mut [i64] = if d <= 16 {
            &mut w[..d]
        } else {
            wbig = vec![0i64; d];
            &mut wbig[..]
        };
        let base0 = v[0];
        for (a, slot) in out.iter_mut().enumerate() {
            v[0] = base0 + a as i64;
            let top = v[d - 1] as i128;
            for i in 0..d {
                let shifted = if i == 0 { 0 } else { v[i - 1] as i128 };
                w[i] = (shifted - self.p[i] * top) as i64;
            }
            *slot = Kout::from_u128(self.to.encode(w));
        }
        let _ = self.m;
    }
}

fn successor_keys<Kin: PackedKey, Kout: PackedKey>(
    prev: &[Kin],
    step: &Step<'_>,
    parallel: bool,
) -> Vec<Kout> {
    let fan = step.m as usize + 1;
    let mut out: Vec<Kout> = vec![Kout::from_u128(0); prev.len() * fan];
    if parallel {
        out.par_chunks_mut(fan).zip(prev.par_iter()).for_each(|(slot, &k)| step.expand(k, slot));
        out.par_sort_unstable();
    } else {
        out.chunks_mut(fan).zip(prev.iter()).for_each(|(slot, &k)| step.expand(k, slot));
        out.sort_unstable();
    }
    out.dedup();
    out.shrink_to_fit();
    out
}

fn bounds_of(keys: &Keys, codec: &Codec, dim: usize, parallel: bool) -> (Vec<i64>, Vec<i64>) {
    let init = || (vec![i64::MAX; dim], vec![i64::MIN; dim]);
    let fold = |(mut lo, mut hi): (Vec<i64>, Vec<i64>), key: u128| {
        let mut c = vec![0; dim];
        codec.decode(key, &mut c);
        for i in 0..dim {
            lo[i] = lo[i].min(c[i]);
            hi[i] = hi[i].max(c[i]);
        }
        (lo, hi)
    };
    let merge = |(a, b): (Vec<i64>, Vec<i64>), (c, e): (Vec<i64>, Vec<i64>)| {
        (
            a.iter().zip(&c).map(|(x, y)| *x.min(y)).collect(),
            b.iter().zip(&e).map(|(x, y)| *x.max(y)).collect(),
        )
    };
    match (keys, parallel) {
        (Keys::Narrow(v), true) => v.par_iter().fold(init, |acc, &k| fold(acc, k as u128)).reduce(init, merge),
        (Keys::Wide(v), true) => v.par_iter().fold(init, |acc, &k| fold(acc, k)).reduce(init, merge),
        (Keys::Narrow(v), false) => v.iter().fold(init(), |acc, &k| fold(acc, k as u128)),
        (Keys::Wide(v), false) => v.iter().fold(init(), |acc, &k| fold(acc, k)),
    }
}

fn advance_inner(level: &LevelSet, mp: &MinPoly, config: &EnumerationConfig) -> Result<LevelSet> {
    let next_n = level.n + 1;
    let d = level.dim;
    if d != mp.degree() {
        return Err(Error::DegreeMismatch { expected: mp.degree(), found: d });
    }
    let m = mp.floor_theta();
    let overflow = || Error::CoordinateOverflow { level: next_n };
    let bounds = successor_bounds(mp.poly().coeffs(), &level.min, &level.max, m).ok_or_else(overflow)?;
    let codec = Codec::for_bounds(&bounds).ok_or_else(overflow)?;
    let key_bytes = if codec.total_bits() <= 64 { 8 } else { 16 };
    let candidates = level.count() as u64 * (m + 1);
    let needed = level.bytes() + candidates * key_bytes;
    if needed > config.memory_budget {
        return Err(Error::MemoryBudget { level: next_n, needed, budget: config.memory_budget });
    }
    let p: Vec<i128> = mp.poly().coeffs().iter().map(|c| c.to_i128().expect("bounded above")).collect();
    let step = Step { p, m, from: &level.codec, to: &codec, dim: d };
    let parallel = config.threads > 1;
    let keys = match (&level.keys, key_bytes) {
        (Keys::Narrow(v), 8) => Keys::Narrow(successor_keys(v, &step, parallel)),
        (Keys::Narrow(v), _) => Keys::Wide(successor_keys(v, &step, parallel)),
        (Keys::Wide(v), 8) => Keys::Narrow(successor_keys(v, &step, parallel)),
        (Keys::Wide(v), _) => Keys::Wide(successor_keys(v, &step, parallel)),
    };
    let (min, max) = bounds_of(&keys, &codec, d, parallel);
    Ok(LevelSet { n: next_n, dim: d, codec, keys, min, max })
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// D_{n+1} from D_n: insert θ·(x + a) for every x and digit a, deduplicated.
pub fn advance_level(level: &LevelSet, mp: &MinPoly) -> Result<LevelSet> {
    advance_inner(level, mp, &EnumerationConfig { memory_budget: u64::MAX, threads: 1 })
}

/// One step under a memory budget and thread count.
pub fn advance_level_with(level: &LevelSet, mp: &MinPoly, config: &EnumerationConfig) -> Result<LevelSet> {
    with_pool(config.threads, || advance_inner(level, mp, config))
}

/// D_n itself, or the error that stopped the enumeration.
pub fn level_set(mp: &MinPoly, n: usize, config: &EnumerationConfig) -> Result<LevelSet> {
    with_pool(config.threads, || {
        let mut level = LevelSet::zero(mp.degree());
        for _ in 0..n {
            level = advance_inner(&level, mp, config)?;
        }
        Ok(level)
    })
}

/// Why an enumeration stopped before `n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    MemoryBudget { level: usize, needed: u64, budget: u64 },
    CoordinateOverflow { level: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    /// #D_1, …, #D_k.
    pub counts: Vec<u64>,
    pub truncated: Option<Truncation>,
}

/// (#D_1, …, #D_k) for the largest k ≤ n_max that fits in the budget.
pub fn count_sequence(mp: &MinPoly, n_max: usize, memory_budget: u64) -> CountSequence {
    count_sequence_with(mp, n_max, &EnumerationConfig { memory_budget, threads: 1 })
}

pub fn count_sequence_with(mp: &MinPoly, n_max: usize, config: &EnumerationConfig) -> CountSequence {
    with_pool(config.threads, || {
        let mut level = LevelSet::zero(mp.degree());
        let mut counts = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            match advance_inner(&level, mp, config) {
                Ok(next) => {
                    counts.push(next.count() as u64);
                    level = next;
                }
                Err(Error::MemoryBudget { level, needed, budget }) => {
                    return CountSequence {
                        counts,
                        truncated: Some(Truncation::MemoryBudget { level, needed, budget }),
                    };
                }
                Err(Error::CoordinateOverflow { level }) => {
                    return CountSequence { counts, truncated: Some(Truncation::CoordinateOverflow { level }) };
                }
                Err(e) => unreachable!("enumeration cannot fail with {e}"),
            }
        }
        CountSequence { counts, truncated: None }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    pub count: u64,
    /// #D_n / θ^n
    pub ratio: Interval,
    /// #D_n / (θ^n √n)
    pub ratio_over_sqrt_n: Interval,
}

/// Certified growth ratios for `counts[k] = #D_{k+1}`.
pub fn growth_ratios(counts: &[u64], mp: &MinPoly) -> Result<Vec<GrowthRow>> {
    const PREC: u32 = 128;
    let theta = mp.theta(PREC + 16)?.with_prec(PREC);
    let mut power = Interval::from_i64(1, PREC);
    let mut rows = Vec::with_capacity(counts.len());
    for (k, &count) in counts.iter().enumerate() {
        let n = k + 1;
        power = &power * &theta;
        let c = Interval::from_int(&BigInt::from(count), PREC);
        let ratio = c.checked_div(&power).expect("θ^n > 0");
        let root_n = Interval::from_i64(n as i64, PREC).sqrt();
        let ratio_over_sqrt_n = ratio.checked_div(&root_n).expect("√n > 0");
        rows.push(GrowthRow { n, count, ratio, ratio_over_sqrt_n });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::parse_polynomial;

    fn mp(text: &str) -> MinPoly {
        MinPoly::new(parse_polynomial(text).unwrap(), 96).unwrap()
    }

    #[test]
    fn codec_round_trips_and_orders_lexicographically() {
        let codec = Codec::for_bounds(&[(-5, 7), (-100, 3), (0, 0)]).unwrap();
        let pts = [[-5, -100, 0], [-5, 3, 0], [0, 0, 0], [7, -100, 0], [7, 3, 0]];
        let mut prev = None;
        for p in pts {
            let k = codec.encode(&p);
            let mut back = [0; 3];
            codec.decode(k, &mut back);
            assert_eq!(back, p);
            if let Some(q) = prev {
                assert!(q < k);
            }
            prev = Some(k);
        }
    }

    #[test]
    fn golden_ratio_levels() {
        let phi = mp("x^2-x-1");
        let l1 = advance_level(&LevelSet::zero(2), &phi).unwrap();
        assert_eq!(l1.count(), 2);
        assert!(l1.contains(&AlgebraicInt::from_i64s(&[0, 0])));
        assert!(l1.contains(&AlgebraicInt::from_i64s(&[0, 1])));
        let l2 = advance_level(&l1, &phi).unwrap();
        let l3 = advance_level(&l2, &phi).unwrap();
        assert_eq!((l2.count(), l3.count()), (4, 7));
        let sorted: Vec<Vec<i64>> = l2.iter_coords().collect();
        assert_eq!(sorted, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn integer_base_counts() {
        let two = mp("x-2");
        assert_eq!(count_sequence(&two, 10, u64::MAX).counts, (1..=10).map(|n| (1u64 << (n + 1)) - 1).collect::<Vec<_>>());
        assert_eq!(count_sequence(&mp("x-3"), 3, u64::MAX).counts, vec![4, 13, 40]);
    }

    #[test]
    fn single_level_has_every_digit() {
        for (text, m) in [("x^2-x-1", 1), ("x^2-5x+3", 4), ("x^3-x-1", 1), ("x^2-2x-1", 2)] {
            assert_eq!(count_sequence(&mp(text), 1, u64::MAX).counts, vec![m + 1]);
        }
    }

    #[test]
    fn budget_truncates_with_prefix() {
        let phi = mp("x^2-x-1");
        let seq = count_sequence(&phi, 30, 4096);
        assert!(!seq.counts.is_empty());
        assert!(seq.counts.len() < 30);
        assert_eq!(&seq.counts[..3], &[2, 4, 7]);
        assert!(matches!(seq.truncated, Some(Truncation::MemoryBudget { .. })));
    }

    #[test]
    fn threads_do_not_change_levels() {
        let p = mp("x^2-2x-1");
        let one = level_set(&p, 9, &EnumerationConfig { memory_budget: u64::MAX, threads: 1 }).unwrap();
        let four = level_set(&p, 9, &EnumerationConfig { memory_budget: u64::MAX, threads: 4 }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn growth_ratio_examples() {
        let phi = mp("x^2-x-1");
        let rows = growth_ratios(&[2, 4, 7], &phi).unwrap();
        assert!((rows[0].ratio.mid_f64() - 1.236_067_977_499_79).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.ratio.is_positive()));
        let two = mp("x-2");
        let counts: Vec<u64> = (1..=10).map(|n| (1u64 << (n + 1)) - 1).collect();
        for row in growth_ratios(&counts, &two).unwrap() {
            let expect = 2.0 - 2f64.powi(-(row.n as i32));
            assert!(row.ratio.lo_f64() <= expect && expect <= row.ratio.hi_f64());
        }
    }
}
