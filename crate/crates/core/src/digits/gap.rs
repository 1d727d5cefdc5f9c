//! Minimal distance between distinct points of D_n(θ).

use num_bigint::BigInt;

use crate::algebraic::minpoly::eval_real;
use crate::algebraic::{AlgebraicInt, Interval, MinPoly, Sign};
use crate::digits::level::{level_set, EnumerationConfig, LevelSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapResult {
    pub n: usize,
    /// #D_n.
    pub count: u64,
    /// min |x − y| over distinct x, y ∈ D_n.
    pub gap: Interval,
    /// gap·θ^n.
    pub normalized: Interval,
}

const GAP_PREC: u32 = 128;

/// Sorts D_n by value and takes the smallest adjacent difference.
///
/// Elements are ordered by enclosures of their values; any adjacent pair whose
/// enclosures overlap is ordered by the exact sign of the difference.
pub fn min_gap(mp: &MinPoly, n: usize, config: &EnumerationConfig) -> Result<GapResult> {
    if n == 0 {
        return Err(Error::OutOfRange("gap needs n ≥ 1".into()));
    }
    level_gap(mp, &level_set(mp, n, config)?)
}

/// Minimal gap of an already enumerated level.
pub fn level_gap(mp: &MinPoly, level: &LevelSet) -> Result<GapResult> {
    let n = level.n();
    let coords: Vec<Vec<BigInt>> =
        level.iter_coords().map(|c| c.into_iter().map(BigInt::from).collect()).collect();
    let bits = coords.iter().flatten().map(|c| c.bits()).max().unwrap_or(0) as u32;
    let prec = GAP_PREC + bits;
    let theta = mp.theta(prec + 16)?;
    let mut items: Vec<(Interval, usize)> =
        coords.iter().enumerate().map(|(i, c)| (eval_real(c, &theta).with_prec(prec), i)).collect();
    items.sort_by(|a, b| a.0.lo_scaled().cmp(b.0.lo_scaled()).then(a.1.cmp(&b.1)));
    // Insertion pass with exact comparisons wherever enclosures overlap.
    let diff = |a: usize, b: usize| -> AlgebraicInt {
        AlgebraicInt::new(coords[b].iter().zip(&coords[a]).map(|(x, y)| x - y).collect())
    };
    for i in 1..items.len() {
        let mut k = i;
        while k > 0 && items[k - 1].0.overlaps(&items[k].0) {
            if mp.sign_of(&diff(items[k - 1].1, items[k].1))? == Sign::Negative {
                items.swap(k - 1, k);
                k -= 1;
            } else {
                break;
            }
        }
    }
    let mut gap: Option<Interval> = None;
    for w in items.windows(2) {
        let d = eval_real(diff(w[0].1, w[1].1).coords(), &theta).with_prec(prec);
        gap = Some(match gap {
            None => d,
            Some(g) => g.min(&d),
        });
    }
    let gap = gap.ok_or_else(|| Error::OutOfRange("D_n has a single element".into()))?;
    let normalized = (&gap * &theta.pow(n as u32)).with_prec(prec);
    Ok(GapResult { n, count: level.count() as u64, gap, normalized })
}
