//! Integer helpers: primality, p-adic valuation, prime-power decomposition.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest `e` with `p^e | m`; `None` for `m = 0`.
pub fn vp_big(p: u64, m: &BigUint) -> Option<u32> {
    if m.is_zero() {
        return None;
    }
    let pb = BigUint::from(p);
    let mut e = 0;
    let mut x = m.clone();
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return Some(e);
        }
        x = q;
        e += 1;
    }
}

pub fn vp_u64(p: u64, m: u64) -> Option<u32> {
    if m == 0 {
        return None;
    }
    let mut e = 0;
    let mut x = m;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    Some(e)
}

/// Writes `q = r^k` with `r` prime, or `None` if `q` is not a prime power.
pub fn prime_power(q: &BigUint) -> Option<(u64, u32)> {
    if q <= &BigUint::one() {
        return None;
    }
    let mut r = 2u64;
    loop {
        let rb = BigUint::from(r);
        if (&rb * &rb) > *q && r > 2 {
            // no factor up to sqrt(q): q itself is prime
            return q.to_u64().filter(|&v| is_prime(v)).map(|v| (v, 1));
        }
        if (q % &rb).is_zero() {
            // r^k has between (k·log₂r) and (k·log₂r + 1) bits
            let lg = (r as f64).log2();
            let lo = ((q.bits() as f64 - 1.0) / lg).floor().max(1.0) as u32;
            return (lo.saturating_sub(1)..=lo + 1).filter(|&k| k > 0).find(|&k| rb.pow(k) == *q).map(|k| (r, k));
        }
        r += if r == 2 { 1 } else { 2 };
        if r > 10_000_000 {
            return None;
        }
    }
}

pub fn pow_u64(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("integer overflow in pow")
}
