//! Grid enumeration and an independent label oracle shared by the
//! integration tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cycblock::arith::{pow_u64, vp_u64};
use cycblock::params::{validate, BlockConfig, Clause, FactorData, Sign};

/// Clauses whose outcome depends on the choice of the `m_j`.
fn m_dependent(c: Clause) -> bool {
    matches!(
        c,
        Clause::MPositive
            | Clause::MCoprime
            | Clause::H2DistinctDims
            | Clause::H3DistinctDims
            | Clause::H3Divides
            | Clause::CValuation
    )
}

fn candidates(p: u64, odd: bool, count: usize) -> Vec<u64> {
    (1..).filter(|m| m % p != 0 && (m % 2 == 1) == odd).take(count).collect()
}

fn make(eps: Sign, p: u64, a: u32, c: u32, cp: u32, aj: &[u32], ms: &[u64]) -> BlockConfig {
    let b1 = if aj.len() == 1 { a } else { 0 };
    BlockConfig {
        epsilon: eps,
        p,
        a,
        c,
        c_prime: cp,
        factors: aj.iter().zip(ms).map(|(&x, &m)| FactorData::new(x, m, b1)).collect(),
        q: None,
        m1_prime_odd: None,
    }
}

/// First `m`-tuple with the requested parities that makes the configuration
/// valid. The last multiplicity is solved for from the required valuation of
/// `n`, so large `p^c` stay cheap.
pub fn find_config(eps: Sign, p: u64, a: u32, c: u32, cp: u32, aj: &[u32], odd: &[bool]) -> Option<BlockConfig> {
    let h = aj.len();
    let probe = make(eps, p, a, c, cp, aj, &vec![1; h]);
    if let Err(e) = validate(&probe) {
        if !m_dependent(e.clause) {
            return None;
        }
    }
    if h == 1 {
        let m = candidates(p, odd[0], 1)[0];
        let cfg = make(eps, p, a, c, cp, aj, &[m]);
        return validate(&cfg).ok().map(|_| cfg);
    }
    let heads: Vec<Vec<u64>> = (0..h - 1).map(|j| candidates(p, odd[j], 6)).collect();
    let last_a = aj[h - 1];
    let unit = pow_u64(p, last_a);
    let mut prefix = vec![0u64; h - 1];
    let total: usize = heads.iter().map(|v| v.len()).product();
    for idx in 0..total {
        let mut k = idx;
        for j in 0..h - 1 {
            prefix[j] = heads[j][k % heads[j].len()];
            k /= heads[j].len();
        }
        let s: u64 = prefix.iter().zip(aj).map(|(&m, &x)| m * pow_u64(p, x)).sum();
        for t in 1..=60u64 {
            let n = t * pow_u64(p, c);
            if n <= s || !(n - s).is_multiple_of(unit) {
                continue;
            }
            let m = (n - s) / unit;
            if m.is_multiple_of(p) || (m % 2 == 1) != odd[h - 1] {
                continue;
            }
            let mut ms = prefix.clone();
            ms.push(m);
            let cfg = make(eps, p, a, c, cp, aj, &ms);
            if validate(&cfg).is_ok() {
                return Some(cfg);
            }
        }
    }
    None
}

/// Every valid abstract configuration of the acceptance grid for one prime:
/// `a ∈ [1,4]`, factor degrees `a_j ∈ [0,3]` (non-increasing), `c, c′ ∈ [0,a]`,
/// every parity pattern and both signs.
pub fn grid(p: u64) -> Vec<BlockConfig> {
    let mut out = Vec::new();
    for eps in [Sign::Plus, Sign::Minus] {
        for a in 1..=4u32 {
            for h in 1..=3usize {
                for aj in degree_tuples(h) {
                    for c in 0..=a {
                        for cp in 0..=a {
                            for bits in 0..(1u32 << h) {
                                let odd: Vec<bool> = (0..h).map(|j| bits >> j & 1 == 1).collect();
                                if let Some(cfg) = find_config(eps, p, a, c, cp, &aj, &odd) {
                                    out.push(cfg);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn degree_tuples(h: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..h {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let top = v.last().copied().unwrap_or(3);
                (0..=top).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `{0,…,l-1}`-indexed sign vector of a subset of `[1, l−1]`, from the
/// partial-sum parity rule.
pub fn signs_of(l: usize, set: &BTreeSet<usize>) -> Vec<i8> {
    let mut parity = false;
    (0..l)
        .map(|i| {
            if set.contains(&i) {
                parity = !parity;
            }
            if parity { -1 } else { 1 }
        })
        .collect()
}

pub fn set_of(signs: &[i8]) -> BTreeSet<usize> {
    let mut prev = 1;
    let mut out = BTreeSet::new();
    for (i, &s) in signs.iter().enumerate() {
        if s != prev {
            out.insert(i);
        }
        prev = s;
    }
    out
}

fn range(lo: u32, hi_excl: u32) -> BTreeSet<usize> {
    (lo as usize..hi_excl as usize).collect()
}

fn product(l: usize, x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> BTreeSet<usize> {
    let (sx, sy) = (signs_of(l, x), signs_of(l, y));
    set_of(&sx.iter().zip(&sy).map(|(a, b)| a * b).collect::<Vec<_>>())
}

/// The label of a valid configuration with two or three factors, computed
/// from the per-factor sign vectors rather than from the case list.
pub fn factorwise_label(cfg: &BlockConfig) -> Option<BTreeSet<usize>> {
    let v = validate(cfg).ok()?;
    let c = &v.config;
    let l = v.derived.l;
    let minus = c.epsilon == Sign::Minus;
    let three = c.p % 4 == 3;
    let odd: Vec<bool> = c.factors.iter().map(|f| f.m_j % 2 == 1).collect();
    let (a, a1) = (c.a, c.factors[0].a_j);
    match c.factors.len() {
        2 => {
            let a2 = c.factors[1].a_j;
            if l == 1 || !minus {
                return Some(BTreeSet::new());
            }
            if a1 == 0 && a2 == 0 {
                if c.c_prime == c.c {
                    return Some(BTreeSet::new());
                }
                // the leading c − c′ powers of t are central
                let l1 = (c.c - c.c_prime) as usize;
                return Some(if odd[0] && odd[1] {
                    let signs: Vec<i8> = (0..l as usize).map(|i| if i < l1 { 1 } else { -1 }).collect();
                    set_of(&signs)
                } else {
                    BTreeSet::new()
                });
            }
            let part = |j: usize, aj: u32| {
                if odd[j] && three {
                    range(l - aj, l)
                } else {
                    BTreeSet::new()
                }
            };
            Some(product(l as usize, &part(0, a1), &part(1, a2)))
        }
        3 => {
            if a1 == 0 || !minus {
                return Some(BTreeSet::new());
            }
            let first = if odd[0] && three { range(a, l) } else { BTreeSet::new() };
            let rest: BTreeSet<usize> = if odd[1] && odd[2] {
                let signs: Vec<i8> = (0..l).map(|i| if i < a1 { 1 } else { -1 }).collect();
                set_of(&signs)
            } else {
                BTreeSet::new()
            };
            Some(product(l as usize, &first, &rest))
        }
        _ => None,
    }
}

/// Subsets of `[1, l−1]` as bit masks over positions `1..l`.
pub fn all_subsets(l: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    let k = l.saturating_sub(1);
    (0u64..1 << k).map(move |mask| (1..l).filter(|&x| mask >> (x - 1) & 1 == 1).collect())
}

/// Brute-force membership in the admissible family for `p ≡ 3 (mod 4)`:
/// an interval, or `[a, l−1] \ {l−a}` / `{l−a} ∪ [a, l−1]` for some `a`.
pub fn admissible_three(l: usize, s: &BTreeSet<usize>) -> bool {
    let is_interval = match (s.first(), s.last()) {
        (Some(&lo), Some(&hi)) => hi - lo + 1 == s.len(),
        _ => true,
    };
    if is_interval {
        return true;
    }
    (1..l).any(|a| {
        let tail: BTreeSet<usize> = (a..l).collect();
        let mut minus = tail.clone();
        minus.remove(&(l - a));
        let mut plus = tail;
        plus.insert(l - a);
        (2 * a <= l && *s == minus) || (2 * a > l && *s == plus)
    })
}

pub fn vp(p: u64, n: u64) -> u32 {
    vp_u64(p, n).unwrap_or(0)
}
