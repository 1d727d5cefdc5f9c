//! Certified isolation of all complex roots of a squarefree monic integer
//! polynomial.
//!
//! Initial estimates are the eigenvalues of the companion matrix (in `f64`),
//! refined simultaneously with the Aberth–Ehrlich iteration in fixed point.
//! The refined points are then certified with Smith's inclusion theorem:
//! for a monic polynomial of degree d and distinct points z_i, every root
//! lies in the union of the disks |z − z_i| ≤ d·|p(z_i) / ∏_{j≠i}(z_i − z_j)|,
//! and a connected component made of k disks holds exactly k roots. When all
//! disks are pairwise disjoint each holds exactly one root. Radii and
//! disjointness are evaluated with exact integer arithmetic.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use super::interval::{pow2, shr_floor, ComplexInterval, Interval};
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Fixed-point complex number `(re + i·im)·2^-W` used by the iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fix {
    re: BigInt,
    im: BigInt,
}

impl Fix {
    fn zero() -> Self {
        Self { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn add(&self, o: &Self) -> Self {
        Self { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self, w: u32) -> Self {
        Self {
            re: shr_floor(&(&self.re * &o.re - &self.im * &o.im), w),
            im: shr_floor(&(&self.re * &o.im + &self.im * &o.re), w),
        }
    }

    fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Self, w: u32) -> Option<Self> {
        let den = o.norm_sqr();
        if den.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << w;
        let im = (&self.im * &o.re - &self.re * &o.im) << w;
        Some(Self { re: re / &den, im: im / &den })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn rescale(&self, from: u32, to: u32) -> Self {
        if to >= from {
            Self { re: &self.re << (to - from), im: &self.im << (to - from) }
        } else {
            Self { re: shr_floor(&self.re, from - to), im: shr_floor(&self.im, from - to) }
        }
    }
}

/// A root of the polynomial certified to lie in a disk.
///
/// The center is `(center_re + i·center_im)·2^-prec` and the radius is
/// `radius·2^-prec`. Real roots have a center on the real axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDisk {
    center_re: BigInt,
    center_im: BigInt,
    radius: BigInt,
    prec: u32,
    real: bool,
}

impl RootDisk {
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Real part enclosure.
    pub fn re(&self) -> Interval {
        Interval::from_scaled(&self.center_re - &self.radius, &self.center_re + &self.radius, self.prec)
    }

    /// Imaginary part enclosure; exactly zero for real roots.
    pub fn im(&self) -> Interval {
        if self.real {
            Interval::zero(self.prec)
        } else {
            Interval::from_scaled(&self.center_im - &self.radius, &self.center_im + &self.radius, self.prec)
        }
    }

    pub fn enclosure(&self) -> ComplexInterval {
        ComplexInterval::new(self.re(), self.im())
    }

    /// Enclosure of |root|.
    pub fn modulus(&self) -> Interval {
        if self.real {
            self.re().abs()
        } else {
            self.enclosure().abs()
        }
    }

    pub fn center_f64(&self) -> (f64, f64) {
        let s = 2f64.powi(-(self.prec.min(1000) as i32));
        let adj = |x: &BigInt| {
            let extra = self.prec.saturating_sub(1000);
            shr_floor(x, extra).to_f64().unwrap_or(f64::NAN) * s
        };
        (adj(&self.center_re), adj(&self.center_im))
    }

    pub fn radius_f64(&self) -> f64 {
        Interval::from_scaled(self.radius.clone(), self.radius.clone(), self.prec).hi_f64()
    }

    fn center(&self) -> Fix {
        Fix { re: self.center_re.clone(), im: self.center_im.clone() }
    }

    /// The two disks share a point.
    fn intersects(&self, other: &RootDisk) -> bool {
        let p = self.prec.max(other.prec);
        let a = self.center().rescale(self.prec, p);
        let b = other.center().rescale(other.prec, p);
        let ra = &self.radius << (p - self.prec);
        let rb = &other.radius << (p - other.prec);
        let r = ra + rb;
        a.sub(&b).norm_sqr() <= &r * &r
    }
}

/// All roots θ_1, …, θ_d of a minimal polynomial.
///
/// Ordering: index 1 is the dominant root θ (the largest real root), then
/// the non-real roots in conjugate pairs (upper half-plane first, pairs by
/// decreasing modulus), then the remaining real roots by decreasing value.
/// So θ_2, …, θ_s are non-real and θ_{s+1}, …, θ_d are real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateSet {
    roots: Vec<RootDisk>,
    nonreal: usize,
    prec: u32,
}

impl ConjugateSet {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Every disk radius is at most `2^-prec`.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Root `j`, 1-based.
    pub fn get(&self, j: usize) -> Option<&RootDisk> {
        j.checked_sub(1).and_then(|i| self.roots.get(i))
    }

    pub fn roots(&self) -> &[RootDisk] {
        &self.roots
    }

    pub fn dominant_index(&self) -> usize {
        1
    }

    pub fn dominant(&self) -> &RootDisk {
        &self.roots[0]
    }

    /// Index `s` with θ_2..θ_s the non-real roots.
    pub fn s(&self) -> usize {
        1 + self.nonreal
    }

    pub fn nonreal_indices(&self) -> Vec<usize> {
        (2..=self.s()).collect()
    }

    pub fn real_indices(&self) -> Vec<usize> {
        std::iter::once(1).chain(self.s() + 1..=self.degree()).collect()
    }

    /// 1-based index of the complex conjugate of root `j`.
    pub fn conjugate_of(&self, j: usize) -> usize {
        if j >= 2 && j <= self.s() {
            if j.is_multiple_of(2) {
                j + 1
            } else {
                j - 1
            }
        } else {
            j
        }
    }
}

/// Isolates every root of `poly` to a disk of radius at most `2^-target`.
///
/// `seeds`, when given, must be a previously certified set for the same
/// polynomial; its ordering is preserved. Working precision doubles on
/// failure until it exceeds `limit` bits.
pub(crate) fn isolate(
    poly: &IntPolynomial,
    target: u32,
    limit: u32,
    seeds: Option<&ConjugateSet>,
) -> Result<ConjugateSet> {
    let d = poly.degree();
    assert!(d >= 1 && poly.is_monic());
    if d == 1 {
        let root = -&poly.coeffs()[0];
        let disk = RootDisk {
            center_re: root << target,
            center_im: BigInt::zero(),
            radius: BigInt::zero(),
            prec: target,
            real: true,
        };
        return Ok(ConjugateSet { roots: vec![disk], nonreal: 0, prec: target });
    }
    let guard = 32 + 2 * (usize::BITS - d.leading_zeros());
    let mut w = target + guard;
    let mut points: Vec<Fix> = match seeds {
        Some(set) => set.roots.iter().map(|r| r.center().rescale(r.prec, w)).collect(),
        None => initial_points(poly, w),
    };
    loop {
        aberth(poly, &mut points, w);
        if let Some(disks) = certify(poly, &points, w, target) {
            if !disks.iter().any(|r| r.real) {
                return Err(Error::NonRealDominant);
            }
            let ordered = match seeds {
                Some(old) => match_order(disks, old, target),
                None => Some(canonical_order(disks, target)),
            };
            if let Some(set) = ordered {
                return Ok(set);
            }
        }
        let next = 2 * w;
        if next > limit.max(4 * target) {
            return Err(Error::PrecisionExhausted(w));
        }
        points = points.iter().map(|z| z.rescale(w, next)).collect();
        w = next;
    }
}

fn initial_points(poly: &IntPolynomial, w: u32) -> Vec<Fix> {
    let d = poly.degree();
    let c: Vec<f64> = poly.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect();
    let mut estimates: Vec<(f64, f64)> = Vec::new();
    if c.iter().all(|x| x.is_finite()) {
        // companion matrix of the monic polynomial
        let m = DMatrix::from_fn(d, d, |i, j| {
            if j == d - 1 {
                -c[i]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        estimates = m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    }
    if estimates.len() != d || estimates.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        // Cauchy bound circle
        let r = 1.0 + c[..d].iter().fold(0.0f64, |acc, x| acc.max(x.abs())).min(1e300);
        estimates = (0..d)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
                (r * t.cos(), r * t.sin())
            })
            .collect();
    }
    // keep estimates pairwise distinct
    for i in 0..d {
        for j in 0..i {
            if estimates[i] == estimates[j] {
                let eps = 1e-7 * (1.0 + estimates[i].0.abs()) * (i as f64 + 1.0);
                estimates[i].0 += eps;
                estimates[i].1 += eps * 0.7;
            }
        }
    }
    estimates.iter().map(|&(re, im)| Fix { re: f64_to_fixed(re, w), im: f64_to_fixed(im, w) }).collect()
}

fn f64_to_fixed(x: f64, w: u32) -> BigInt {
    let m = BigInt::from_f64(x * 2f64.powi(60)).unwrap_or_default();
    if w >= 60 {
        m << (w - 60)
    } else {
        shr_floor(&m, 60 - w)
    }
}

fn horner(poly: &IntPolynomial, z: &Fix, w: u32) -> (Fix, Fix) {
    let coeffs = poly.coeffs();
    let mut p = Fix { re: coeffs[coeffs.len() - 1].clone() << w, im: BigInt::zero() };
    let mut dp = Fix::zero();
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        dp = dp.mul(z, w).add(&p);
        p = p.mul(z, w);
        p.re += c << w;
    }
    (p, dp)
}

fn aberth(poly: &IntPolynomial, z: &mut [Fix], w: u32) {
    let d = z.len();
    let one = Fix { re: pow2(w), im: BigInt::zero() };
    let tiny = pow2(8) * pow2(8);
    let max_iter = 200 + (w as usize) / 4;
    let mut quiet_rounds = 0;
    for _ in 0..max_iter {
        let mut largest = BigInt::zero();
        for i in 0..d {
            let (p, dp) = horner(poly, &z[i], w);
            if p.is_zero() {
                continue;
            }
            let Some(ratio) = p.div(&dp, w) else {
                z[i].re += pow2(w / 2);
                largest = largest.max(pow2(w));
                continue;
            };
            let mut s = Fix::zero();
            let mut collided = false;
            for j in 0..d {
                if j != i {
                    match one.div(&z[i].sub(&z[j]), w) {
                        Some(q) => s = s.add(&q),
                        None => collided = true,
                    }
                }
            }
            if collided {
                z[i].im += pow2(w / 2);
                largest = largest.max(pow2(w));
                continue;
            }
            let denom = one.sub(&ratio.mul(&s, w));
            let step = ratio.div(&denom, w).unwrap_or(ratio);
            largest = largest.max(step.norm_sqr());
            z[i] = z[i].sub(&step);
        }
        if largest <= tiny {
            quiet_rounds += 1;
            if quiet_rounds >= 2 {
                return;
            }
        } else {
            quiet_rounds = 0;
        }
    }
}

/// Exact evaluation of `p(z)·2^(w·d)` at the dyadic point `z`.
fn eval_exact(poly: &IntPolynomial, z: &Fix, w: u32) -> Fix {
    let coeffs = poly.coeffs();
    let d = poly.degree();
    let mut acc = Fix { re: coeffs[d].clone(), im: BigInt::zero() };
    for (k, c) in coeffs[..d].iter().enumerate().rev() {
        // acc·z has scale 2^(w·(d-k)); add c at the same scale
        let re = &acc.re * &z.re - &acc.im * &z.im;
        let im = &acc.re * &z.im + &acc.im * &z.re;
        acc = Fix { re: re + (c << (w as usize * (d - k))), im };
    }
    acc
}

/// Symmetrises the points, computes Smith radii and checks isolation.
fn certify(poly: &IntPolynomial, points: &[Fix], w: u32, target: u32) -> Option<Vec<RootDisk>> {
    let d = points.len();
    let near_axis = pow2(w - w / 2);
    let mut z: Vec<Fix> = points.to_vec();
    let mut real = vec![false; d];
    for i in 0..d {
        if z[i].im.abs() < near_axis {
            z[i].im = BigInt::zero();
            real[i] = true;
        }
    }
    // pair each upper-half point with the nearest lower-half point
    let upper: Vec<usize> = (0..d).filter(|&i| !real[i] && z[i].im.is_positive()).collect();
    let mut lower: Vec<usize> = (0..d).filter(|&i| !real[i] && z[i].im.is_negative()).collect();
    if upper.len() != lower.len() {
        return None;
    }
    for &u in &upper {
        let target_pt = Fix { re: z[u].re.clone(), im: -&z[u].im };
        let (pos, _) = lower
            .iter()
            .enumerate()
            .min_by_key(|(_, &l)| z[l].sub(&target_pt).norm_sqr())?;
        let l = lower.swap_remove(pos);
        z[l] = target_pt;
    }
    for i in 0..d {
        for j in 0..i {
            if z[i] == z[j] {
                return None;
            }
        }
    }
    let dd = BigInt::from(d);
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let pv = eval_exact(poly, &z[i], w);
        let mut prod = Fix { re: BigInt::from(1), im: BigInt::zero() };
        for j in 0..d {
            if j != i {
                let diff = z[i].sub(&z[j]);
                prod = Fix {
                    re: &prod.re * &diff.re - &prod.im * &diff.im,
                    im: &prod.re * &diff.im + &prod.im * &diff.re,
                };
            }
        }
        // radius·2^w = d·|pv|·2^-(w·d) / (|prod|·2^-(w·(d-1))) · 2^w = d·|pv| / |prod|
        let num = &dd * &dd * pv.norm_sqr();
        let den = prod.norm_sqr();
        let q = (&num + &den - 1u32) / &den;
        let mut r = q.sqrt();
        if &r * &r < q {
            r += 1;
        }
        radii.push(r.max(BigInt::from(1)));
    }
    let target_radius = pow2(w - target);
    for i in 0..d {
        if radii[i] > target_radius {
            return None;
        }
        if !real[i] && z[i].im.abs() <= radii[i] {
            return None;
        }
        for j in 0..i {
            let r = &radii[i] + &radii[j];
            if z[i].sub(&z[j]).norm_sqr() <= &r * &r {
                return None;
            }
        }
    }
    Some(
        (0..d)
            .map(|i| RootDisk {
                center_re: z[i].re.clone(),
                center_im: z[i].im.clone(),
                radius: radii[i].clone(),
                prec: w,
                real: real[i],
            })
            .collect(),
    )
}

fn canonical_order(disks: Vec<RootDisk>, target: u32) -> ConjugateSet {
    let mut reals: Vec<RootDisk> = disks.iter().filter(|r| r.real).cloned().collect();
    // disjoint real disks: center order is certified order
    reals.sort_by(|a, b| b.center_re.cmp(&a.center_re));
    let mut uppers: Vec<RootDisk> =
        disks.iter().filter(|r| !r.real && r.center_im.is_positive()).cloned().collect();
    uppers.sort_by(|a, b| {
        let ma = a.center().norm_sqr();
        let mb = b.center().norm_sqr();
        mb.cmp(&ma).then_with(|| b.center_re.cmp(&a.center_re)).then_with(|| a.center_im.cmp(&b.center_im))
    });
    let mut roots = vec![reals[0].clone()];
    for u in &uppers {
        let mut l = u.clone();
        l.center_im = -&l.center_im;
        roots.push(u.clone());
        roots.push(l);
    }
    roots.extend(reals.into_iter().skip(1));
    ConjugateSet { roots, nonreal: 2 * uppers.len(), prec: target }
}

fn match_order(disks: Vec<RootDisk>, old: &ConjugateSet, target: u32) -> Option<ConjugateSet> {
    let mut slots: Vec<Option<RootDisk>> = vec![None; old.roots.len()];
    for disk in disks {
        let hits: Vec<usize> =
            old.roots.iter().enumerate().filter(|(_, o)| o.intersects(&disk)).map(|(k, _)| k).collect();
        if hits.len() != 1 || slots[hits[0]].is_some() {
            return None;
        }
        if old.roots[hits[0]].real != disk.real {
            return None;
        }
        slots[hits[0]] = Some(disk);
    }
    let roots: Vec<RootDisk> = slots.into_iter().collect::<Option<_>>()?;
    // upper/lower labeling must survive refinement
    for (k, r) in roots.iter().enumerate() {
        if !r.real && r.center_im.is_positive() != old.roots[k].center_im.is_positive() {
            return None;
        }
    }
    Some(ConjugateSet { roots, nonreal: old.nonreal, prec: target })
}
