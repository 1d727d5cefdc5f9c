//! Independent oracles: plain machine-integer arithmetic, no crate internals
//! beyond reading polynomial coefficients.

#![allow(dead_code)]

use num_traits::ToPrimitive;
use perron_core::algebraic::parse_polynomial;
use perron_core::MinPoly;

pub const SUITE: [&str; 6] = ["x^2-x-1", "x^2-2x-1", "x^2-5x+3", "x^3-x-1", "x-2", "x-3"];

pub fn mp(text: &str) -> MinPoly {
    MinPoly::new(parse_polynomial(text).unwrap(), 96).unwrap()
}

pub fn coeffs(mp: &MinPoly) -> Vec<i64> {
    mp.poly().coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
}

/// x^k mod p by schoolbook long division, low degree first.
pub fn power_coords(p: &[i64], k: usize) -> Vec<i64> {
    let d = p.len() - 1;
    let mut r = vec![0i128; k.max(d) + 1];
    r[k] = 1;
    for top in (d..=k).rev() {
        let q = r[top];
        if q != 0 {
            for (i, &c) in p.iter().enumerate() {
                r[top - d + i] -= q * c as i128;
            }
        }
    }
    r[..d].iter().map(|&c| i64::try_from(c).unwrap()).collect()
}

/// Σ c_k θ^k in coordinates, k = 1..n.
pub fn reduce(p: &[i64], c: &[i64]) -> Vec<i64> {
    let d = p.len() - 1;
    let mut acc = vec![0i64; d];
    for (k, &ck) in c.iter().enumerate() {
        for (a, t) in acc.iter_mut().zip(power_coords(p, k + 1)) {
            *a += ck * t;
        }
    }
    acc
}

/// Visits every digit string in {0..=m}^n, passing the running coordinates.
fn odometer(p: &[i64], m: i64, n: usize, mut visit: impl FnMut(&[i64])) {
    let d = p.len() - 1;
    let powers: Vec<Vec<i64>> = (1..=n).map(|k| power_coords(p, k)).collect();
    let mut digits = vec![0i64; n];
    let mut value = vec![0i64; d];
    loop {
        visit(&value);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            if digits[k] < m {
                digits[k] += 1;
                for i in 0..d {
                    value[i] += powers[k][i];
                }
                break;
            }
            for i in 0..d {
                value[i] -= m * powers[k][i];
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Distinct values of Σ_{k≤n} a_k θ^k over all (m+1)^n digit strings.
///
/// Values are split into buckets by a hash of the coordinates; each pass
/// enumerates every string but keeps one bucket, so memory stays bounded.
pub fn brute_force_count(p: &[i64], m: i64, n: usize) -> u64 {
    let total = (m as u128 + 1).pow(n as u32);
    let per_pass = 16_000_000u128;
    let passes = total.div_ceil(per_pass).max(1) as u64;
    let mut count = 0u64;
    for pass in 0..passes {
        let mut seen: Vec<[i64; 4]> = Vec::new();
        odometer(p, m, n, |v| {
            let h = v.iter().fold(0u64, |h, &x| (h ^ x as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            if (h >> 32) % passes == pass {
                let mut key = [0i64; 4];
                key[..v.len()].copy_from_slice(v);
                seen.push(key);
            }
        });
        seen.sort_unstable();
        seen.dedup();
        count += seen.len() as u64;
    }
    count
}

/// All distinct values for small cases, sorted.
pub fn brute_force_set(p: &[i64], m: i64, n: usize) -> Vec<Vec<i64>> {
    let mut all = Vec::new();
    odometer(p, m, n, |v| all.push(v.to_vec()));
    all.sort_unstable();
    all.dedup();
    all
}

/// Whether some nonzero c ∈ [−m, m]^n has Σ c_k θ^k = 0.
pub fn exists_relation(p: &[i64], m: i64, n: usize) -> bool {
    let d = p.len() - 1;
    let powers: Vec<Vec<i64>> = (1..=n).map(|k| power_coords(p, k)).collect();
    let mut c = vec![-m; n];
    loop {
        if c.iter().any(|&x| x != 0) {
            let zero = (0..d).all(|i| c.iter().zip(&powers).map(|(ck, pk)| ck * pk[i]).sum::<i64>() == 0);
            if zero {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            if c[k] < m {
                c[k] += 1;
                break;
            }
            c[k] = -m;
            k += 1;
        }
    }
}

/// Words in {0..=m}^n whose every suffix is ≤ the equal-length prefix of e.
pub fn brute_force_admissible(e: &[u64], m: u64, n: usize) -> u64 {
    let mut w = vec![0u64; n];
    let mut count = 0;
    loop {
        if (0..n).all(|i| w[i..] <= e[..n - i]) {
            count += 1;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return count;
            }
            k -= 1;
            if w[k] < m {
                w[k] += 1;
                break;
            }
            w[k] = 0;
        }
    }
}
