//! Shortest zero relations Σ c_k θ^k = 0 with |c_k| ≤ m.
//!
//! Horner's rule read from the top coefficient gives the state graph: start
//! at V = c_n, step V ↦ θV + c, and after n − 1 steps V = Σ c_k θ^{k−1}.
//! A witness is a path that ends at V = 0. Every state on such a path obeys
//! finite bounds in each conjugate embedding, so breadth-first search over
//! the pruned graph terminates and its first goal layer gives the shortest
//! witnesses.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebraic::minpoly::{eval_complex, eval_real};
use crate::algebraic::{AlgebraicInt, Interval, MinPoly, PerronStatus};
use crate::error::{Error, Result};

/// A nonzero sequence (c_1, …, c_n) with Σ c_k θ^k = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CollisionWitness {
    pub coeffs: Vec<i64>,
}

impl CollisionWitness {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |c_k|.
    pub fn height(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// Σ c_k θ^k reduced to the power basis.
    pub fn reduce(&self, mp: &MinPoly) -> AlgebraicInt {
        let mut acc = mp.zero();
        for &c in self.coeffs.iter().rev() {
            acc = mp.mul_by_theta(&acc.add_int(&BigInt::from(c)));
        }
        acc
    }
}

impl fmt::Display for CollisionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub max_depth: usize,
    /// Cap on distinct states stored.
    pub state_cap: usize,
    pub threads: usize,
    /// Half-width of the annulus around |z| = 1 that gets the depth bound.
    pub epsilon: f64,
}

pub const DEFAULT_MAX_DEPTH: usize = 256;
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_depth: DEFAULT_MAX_DEPTH, state_cap: DEFAULT_STATE_CAP, threads: 1, epsilon: 1e-9 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Deepest layer expanded (number of coefficients fixed).
    pub depth: usize,
    pub states: u64,
    pub pruned: u64,
    pub peak_frontier: u64,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth {}, {} states, {} pruned, peak frontier {}",
            self.depth, self.states, self.pruned, self.peak_frontier
        )
    }
}

#[derive(Clone, Debug)]
enum Cap {
    /// |V_j| ≤ bound at every depth.
    Fixed(Interval),
    /// |V_j| ≤ m·Σ_{i<t} r^i at depth t.
    Growing(Interval),
}

#[derive(Clone, Debug)]
struct Embedding {
    root_re: Interval,
    root: Option<crate::algebraic::ComplexInterval>,
    cap: Cap,
}

impl Embedding {
    fn modulus(&self, coords: &[BigInt]) -> Interval {
        match &self.root {
            None => eval_real(coords, &self.root_re).abs(),
            Some(z) => eval_complex(coords, z).abs(),
        }
    }
}

struct Pruner {
    embeddings: Vec<Embedding>,
    /// Growing caps for depths 1, 2, … (index depth − 1).
    m: Interval,
}

const PRUNE_PREC: u32 = 96;

impl Pruner {
    fn new(mp: &MinPoly, epsilon: f64) -> Result<Self> {
        let set = mp.conjugates_at(PRUNE_PREC)?;
        let m = Interval::from_int(&BigInt::from(mp.floor_theta()), PRUNE_PREC);
        let one = Interval::from_i64(1, PRUNE_PREC);
        let mut embeddings = Vec::new();
        for j in 1..=set.degree() {
            if !set.get(j).unwrap().is_real() && set.conjugate_of(j) < j {
                continue;
            }
            let root = set.get(j).unwrap();
            let modulus = root.modulus().with_prec(PRUNE_PREC);
            let cap = if modulus.lo_f64() > 1.0 + epsilon {
                Cap::Fixed(m.checked_div(&(&modulus.lo() - &one)).expect("positive").hi())
            } else if modulus.hi_f64() < 1.0 - epsilon {
                Cap::Fixed(m.checked_div(&(&one - &modulus.hi())).expect("positive").hi())
            } else {
                Cap::Growing(modulus.hi().max(&one))
            };
            let enclosure = (!root.is_real()).then(|| root.enclosure());
            embeddings.push(Embedding { root_re: root.re(), root: enclosure, cap });
        }
        Ok(Self { embeddings, m })
    }

    /// Caps for a state at `depth`, growing ones evaluated at that depth.
    fn caps_at(&self, depth: usize) -> Vec<Interval> {
        self.embeddings
            .iter()
            .map(|e| match &e.cap {
                Cap::Fixed(b) => b.clone(),
                Cap::Growing(r) => {
                    let mut sum = Interval::zero(PRUNE_PREC);
                    let mut pow = Interval::from_i64(1, PRUNE_PREC);
                    for _ in 0..depth {
                        sum = &sum + &pow;
                        pow = (&pow * r).with_prec(PRUNE_PREC);
                    }
                    (&sum * &self.m).with_prec(PRUNE_PREC).hi()
                }
            })
            .collect()
    }

    fn admits(&self, v: &AlgebraicInt, caps: &[Interval]) -> bool {
        self.embeddings
            .iter()
            .zip(caps)
            .all(|(e, cap)| !e.modulus(v.coords()).certainly_gt(cap))
    }
}

/// Shortest witness with the default configuration apart from the caps.
pub fn find_height_witness(mp: &MinPoly, max_depth: usize, state_cap: usize) -> Result<CollisionWitness> {
    let config = SearchConfig { max_depth, state_cap, ..SearchConfig::default() };
    find_height_witness_with(mp, &config).map(|(w, _)| w)
}

/// Breadth-first search for a shortest witness; among those of minimal
/// length the lexicographically smallest (c_1, …, c_n) with c_n ≥ 1 is
/// returned. Output does not depend on `config.threads`.
pub fn find_height_witness_with(mp: &MinPoly, config: &SearchConfig) -> Result<(CollisionWitness, SearchStats)> {
    match mp.is_perron() {
        PerronStatus::Perron => {}
        PerronStatus::NotPerron => return Err(Error::NotPerron),
        PerronStatus::Undecided => return Err(Error::Undecided),
    }
    let m = i64::try_from(mp.floor_theta())
        .map_err(|_| Error::InvalidArgument("⌊θ⌋ does not fit in 64 bits".into()))?;
    let pruner = Pruner::new(mp, config.epsilon)?;
    let pool = if config.threads > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(config.threads).build().ok()
    } else {
        None
    };
    let run = || bfs(mp, m, &pruner, config);
    let (depths, goal_depth, stats) = match &pool {
        Some(p) => p.install(run),
        None => run(),
    }?;
    let witness = reconstruct(mp, m, &depths, goal_depth);
    debug_assert!(verify_witness(&witness, mp));
    Ok((witness, stats))
}

type DepthMap = HashMap<AlgebraicInt, usize>;

fn bfs(mp: &MinPoly, m: i64, pruner: &Pruner, config: &SearchConfig) -> Result<(DepthMap, usize, SearchStats)> {
    let mut stats = SearchStats::default();
    let mut depths: DepthMap = HashMap::new();
    let caps1 = pruner.caps_at(1);
    let mut frontier = Vec::new();
    for c in 1..=m {
        let v = mp.from_int(c);
        if pruner.admits(&v, &caps1) {
            depths.insert(v.clone(), 1);
            frontier.push(v);
        } else {
            stats.pruned += 1;
        }
    }
    stats.depth = 1;
    stats.states = depths.len() as u64;
    stats.peak_frontier = frontier.len() as u64;
    let parallel = config.threads > 1;
    let exhausted = |reason: String, stats: &SearchStats| Error::SearchExhausted { reason, stats: stats.clone() };
    loop {
        if frontier.is_empty() {
            return Err(exhausted("frontier emptied".into(), &stats));
        }
        let depth = stats.depth + 1;
        if depth > config.max_depth {
            return Err(exhausted(format!("max depth {} reached", config.max_depth), &stats));
        }
        let caps = pruner.caps_at(depth);
        let expand = |v: &AlgebraicInt| -> Vec<(AlgebraicInt, bool)> {
            let tv = mp.mul_by_theta(v);
            (-m..=m)
                .map(|c| {
                    let w = tv.add_int(&BigInt::from(c));
                    let ok = w.is_zero() || pruner.admits(&w, &caps);
                    (w, ok)
                })
                .collect()
        };
        let children: Vec<Vec<(AlgebraicInt, bool)>> = if parallel {
            frontier.par_iter().map(expand).collect()
        } else {
            frontier.iter().map(expand).collect()
        };
        let mut next = Vec::new();
        let mut found = false;
        for (w, ok) in children.into_iter().flatten() {
            if !ok {
                stats.pruned += 1;
                continue;
            }
            if w.is_zero() {
                found = true;
                continue;
            }
            if !depths.contains_key(&w) {
                depths.insert(w.clone(), depth);
                next.push(w);
            }
        }
        stats.depth = depth;
        stats.states = depths.len() as u64;
        stats.peak_frontier = stats.peak_frontier.max(next.len() as u64);
        if found {
            return Ok((depths, depth, stats));
        }
        if depths.len() > config.state_cap {
            return Err(exhausted(format!("state cap {} reached", config.state_cap), &stats));
        }
        frontier = next;
    }
}

/// U with θ·U = W, if U lies in Z[θ].
fn divide_by_theta(mp: &MinPoly, w: &AlgebraicInt) -> Option<AlgebraicInt> {
    let p = mp.poly().coeffs();
    let wc = w.coords();
    let d = wc.len();
    let (top, rem) = (-&wc[0]).div_rem(&p[0]);
    if !rem.is_zero() {
        return None;
    }
    let mut u = vec![BigInt::zero(); d];
    for i in 1..d {
        u[i - 1] = &wc[i] + &p[i] * &top;
    }
    u[d - 1] = top;
    Some(AlgebraicInt::new(u))
}

/// Walks back from V = 0 choosing the smallest admissible c at each step.
fn reconstruct(mp: &MinPoly, m: i64, depths: &DepthMap, goal_depth: usize) -> CollisionWitness {
    let mut coeffs = Vec::with_capacity(goal_depth);
    let mut v = mp.zero();
    for t in (2..=goal_depth).rev() {
        let (c, u) = (-m..=m)
            .find_map(|c| {
                let u = divide_by_theta(mp, &v.add_int(&BigInt::from(-c)))?;
                (depths.get(&u) == Some(&(t - 1))).then_some((c, u))
            })
            .expect("every goal-layer state has a parent one layer up");
        coeffs.push(c);
        v = u;
    }
    let lead = v.coords()[0].to_i64().expect("seed is a digit");
    debug_assert!(v.coords()[1..].iter().all(Zero::is_zero));
    coeffs.push(lead);
    CollisionWitness { coeffs }
}

/// Nonzero, every |c_k| ≤ m, and Σ c_k θ^k reduces to zero exactly.
pub fn verify_witness(w: &CollisionWitness, mp: &MinPoly) -> bool {
    let m = mp.floor_theta();
    !w.coeffs.is_empty()
        && w.coeffs.iter().any(|&c| c != 0)
        && w.coeffs.iter().all(|c| c.unsigned_abs() <= m)
        && w.reduce(mp).coords().iter().all(|c| c.is_zero() && !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::parse_polynomial;

    fn mp(text: &str) -> MinPoly {
        MinPoly::new(parse_polynomial(text).unwrap(), 96).unwrap()
    }

    #[test]
    fn small_witnesses() {
        let w = find_height_witness(&mp("x^2-x-1"), 20, 10_000).unwrap();
        assert_eq!(w.coeffs, vec![-1, -1, 1]);
        let w = find_height_witness(&mp("x-2"), 20, 10_000).unwrap();
        assert_eq!(w.coeffs, vec![-2, 1]);
        let w = find_height_witness(&mp("x-3"), 20, 10_000).unwrap();
        assert_eq!(w.coeffs, vec![-3, 1]);
    }

    #[test]
    fn height_five_polynomial_has_height_four_witness() {
        let p = mp("x^2-5x+3");
        let w = find_height_witness(&p, 64, 1_000_000).unwrap();
        assert!(verify_witness(&w, &p));
        assert!(w.height() <= 4);
        assert!(*w.coeffs.last().unwrap() >= 1);
    }

    #[test]
    fn verify_examples() {
        let phi = mp("x^2-x-1");
        let w = |c: &[i64]| CollisionWitness { coeffs: c.to_vec() };
        assert!(verify_witness(&w(&[-1, -1, 1]), &phi));
        assert!(!verify_witness(&w(&[0, 0, 0]), &phi));
        assert!(!verify_witness(&w(&[1, 0, 0]), &phi));
        assert!(!verify_witness(&w(&[-2, -2, 2]), &phi));
        assert!(!verify_witness(&w(&[]), &phi));
    }

    #[test]
    fn non_perron_is_rejected() {
        assert_eq!(find_height_witness(&mp("x^2-2"), 20, 1000), Err(Error::NotPerron));
    }

    #[test]
    fn caps_are_reported() {
        let p = mp("x^2-5x+3");
        match find_height_witness(&p, 2, 1_000_000) {
            Err(Error::SearchExhausted { stats, .. }) => assert_eq!(stats.depth, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn threads_do_not_change_witness() {
        for text in ["x^2-5x+3", "x^3-x-1", "x^2-2x-1"] {
            let p = mp(text);
            let one = find_height_witness_with(&p, &SearchConfig::default()).unwrap();
            let four = find_height_witness_with(&p, &SearchConfig { threads: 4, ..SearchConfig::default() }).unwrap();
            assert_eq!(one, four);
        }
    }

    #[test]
    fn division_by_theta_inverts_multiplication() {
        let p = mp("x^3-x-1");
        let a = AlgebraicInt::from_i64s(&[3, -2, 5]);
        assert_eq!(divide_by_theta(&p, &p.mul_by_theta(&a)), Some(a));
        let q = mp("x^2-5x+3");
        assert_eq!(divide_by_theta(&q, &q.one()), None);
    }
}
