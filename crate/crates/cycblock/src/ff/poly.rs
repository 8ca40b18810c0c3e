//! Dense univariate polynomials over a [`FieldCtx`], coefficients low to high,
//! and factorization by square-free, distinct-degree and equal-degree
//! splitting.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::FieldCtx;
use super::FfError;

pub type Poly = Vec<u64>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, with `None` for the zero polynomial.
pub fn deg(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn is_one(f: &[u64]) -> bool {
    f == [1]
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn add(k: &FieldCtx, f: &[u64], g: &[u64]) -> Poly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| k.add(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(k: &FieldCtx, f: &[u64], g: &[u64]) -> Poly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| k.sub(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn scale(k: &FieldCtx, f: &[u64], c: u64) -> Poly {
    trim(f.iter().map(|&a| k.mul(a, c)).collect())
}

pub fn mul(k: &FieldCtx, f: &[u64], g: &[u64]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(a, b));
        }
    }
    trim(out)
}

/// `(quotient, remainder)`; panics on division by zero.
pub fn divrem(k: &FieldCtx, f: &[u64], g: &[u64]) -> (Poly, Poly) {
    let dg = deg(g).expect("division by the zero polynomial");
    let mut r: Poly = trim(f.to_vec());
    if r.len() <= dg {
        return (Vec::new(), r);
    }
    let lead_inv = k.inv(g[dg]).unwrap();
    let mut q = vec![0u64; r.len() - dg];
    while let Some(dr) = deg(&r) {
        if dr < dg {
            break;
        }
        let c = k.mul(r[dr], lead_inv);
        let shift = dr - dg;
        q[shift] = c;
        for (i, &b) in g.iter().enumerate() {
            r[shift + i] = k.sub(r[shift + i], k.mul(c, b));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(k: &FieldCtx, f: &[u64], g: &[u64]) -> Poly {
    divrem(k, f, g).1
}

pub fn monic(k: &FieldCtx, f: &[u64]) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&c) => scale(k, f, k.inv(c).unwrap()),
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(k: &FieldCtx, f: &[u64], g: &[u64]) -> Poly {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

pub fn derivative(k: &FieldCtx, f: &[u64]) -> Poly {
    if f.len() <= 1 {
        return Vec::new();
    }
    let out = (1..f.len())
        .map(|i| k.mul(f[i], k.from_int((i as u64 % k.characteristic()) as i64)))
        .collect();
    trim(out)
}

pub fn eval(k: &FieldCtx, f: &[u64], x: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
}

/// `base^e mod m`.
pub fn powmod(k: &FieldCtx, base: &[u64], e: &BigUint, m: &[u64]) -> Poly {
    let mut acc: Poly = rem(k, &[1], m);
    let b = rem(k, base, m);
    for i in (0..e.bits()).rev() {
        acc = rem(k, &mul(k, &acc, &acc), m);
        if e.bit(i) {
            acc = rem(k, &mul(k, &acc, &b), m);
        }
    }
    acc
}

/// Ben-Or test.
pub fn is_irreducible(k: &FieldCtx, f: &[u64]) -> bool {
    let f = trim(f.to_vec());
    let d = match deg(&f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    let f = monic(k, &f);
    let q = BigUint::from(k.size());
    let mut h = rem(k, &x(), &f);
    for _ in 1..=d / 2 {
        h = powmod(k, &h, &q, &f);
        let g = gcd(k, &sub(k, &h, &x()), &f);
        if !is_one(&g) {
            return false;
        }
    }
    true
}

pub fn is_squarefree(k: &FieldCtx, f: &[u64]) -> bool {
    let df = derivative(k, f);
    if df.is_empty() {
        return deg(f) == Some(0);
    }
    is_one(&gcd(k, f, &df))
}

/// `(factor, multiplicity)` pairs of a square-free decomposition.
fn squarefree_decomposition(k: &FieldCtx, f: &[u64]) -> Vec<(Poly, usize)> {
    let f = monic(k, f);
    let mut out = Vec::new();
    if deg(&f) == Some(0) {
        return out;
    }
    let df = derivative(k, &f);
    let mut c = gcd(k, &f, &df);
    let mut w = divrem(k, &f, &c).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(k, &w, &c);
        let fac = divrem(k, &w, &y).0;
        if !is_one(&fac) {
            out.push((fac, i));
        }
        w = y;
        c = divrem(k, &c, &w).0;
        i += 1;
    }
    if !is_one(&c) {
        // c is a polynomial in x^r; take the r-th root coefficientwise
        let r = k.characteristic() as usize;
        let root_exp = (k.size() / k.characteristic()) as u128;
        let root: Poly = (0..=deg(&c).unwrap() / r).map(|j| k.pow(c[j * r], root_exp)).collect();
        for (g, m) in squarefree_decomposition(k, &root) {
            out.push((g, m * r));
        }
    }
    out
}

/// Distinct-degree split of a monic square-free polynomial.
fn distinct_degree(k: &FieldCtx, f: &[u64]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let q = BigUint::from(k.size());
    let mut h = rem(k, &x(), &rest);
    let mut d = 0;
    while let Some(dr) = deg(&rest) {
        if dr < 2 * (d + 1) {
            break;
        }
        d += 1;
        h = powmod(k, &h, &q, &rest);
        let g = gcd(k, &sub(k, &h, &x()), &rest);
        if !is_one(&g) {
            rest = divrem(k, &rest, &g).0;
            h = rem(k, &h, &rest);
            out.push((g, d));
        }
    }
    if let Some(dr) = deg(&rest) {
        if dr > 0 {
            out.push((rest, dr));
        }
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d`.
fn equal_degree(k: &FieldCtx, f: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![f.to_vec()];
    }
    let qd = BigUint::from(k.size()).pow(d as u32);
    loop {
        let a: Poly = trim((0..n).map(|_| rng.gen_range(0..k.size())).collect());
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if k.characteristic() == 2 {
            // trace from F_{Q^d} down to F_2
            let bits = k.degree() as usize * d;
            let mut t = rem(k, &a, f);
            let mut acc = t.clone();
            for _ in 1..bits {
                t = rem(k, &mul(k, &t, &t), f);
                acc = add(k, &acc, &t);
            }
            acc
        } else {
            let e = (&qd - 1u32) / 2u32;
            sub(k, &powmod(k, &a, &e, f), &[1])
        };
        let g = gcd(k, &b, f);
        if let Some(dg) = deg(&g) {
            if dg > 0 && dg < n {
                let h = divrem(k, f, &g).0;
                let mut out = equal_degree(k, &g, d, rng);
                out.extend(equal_degree(k, &monic(k, &h), d, rng));
                return out;
            }
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by degree then
/// coefficients. The leading coefficient of `f` is dropped.
pub fn factor(k: &FieldCtx, f: &[u64], seed: u64) -> Result<Vec<(Poly, usize)>, FfError> {
    let f = trim(f.to_vec());
    if f.is_empty() {
        return Err(FfError::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (sf, m) in squarefree_decomposition(k, &f) {
        for (g, d) in distinct_degree(k, &sf) {
            for h in equal_degree(k, &g, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
    Ok(out)
}

/// `Δ†`: the monic polynomial whose roots are `ξ^{−q}` for the roots `ξ` of
/// `Δ`, over `F_{q²}`. Requires `Δ(0) ≠ 0`.
pub fn dagger(k: &FieldCtx, f: &[u64], q: u64) -> Poly {
    let conj: Poly = f.iter().map(|&c| k.pow(c, q as u128)).collect();
    let rev: Poly = conj.into_iter().rev().collect();
    monic(k, &trim(rev))
}

pub fn product(k: &FieldCtx, fs: &[(Poly, usize)]) -> Poly {
    let mut acc: Poly = vec![1];
    for (g, m) in fs {
        for _ in 0..*m {
            acc = mul(k, &acc, g);
        }
    }
    acc
}

pub fn is_monic_one(f: &[u64]) -> bool {
    f.len() == 1 && f[0].is_one()
}

pub fn is_zero(f: &[u64]) -> bool {
    f.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x2_minus_1_over_f7() {
        let k = FieldCtx::prime(7).unwrap();
        let f = vec![6, 0, 1];
        let fs = factor(&k, &f, 1).unwrap();
        assert_eq!(fs, vec![(vec![1, 1], 1), (vec![6, 1], 1)]);
    }

    #[test]
    fn x3_minus_2_over_f7_is_irreducible() {
        let k = FieldCtx::prime(7).unwrap();
        let f = vec![5, 0, 0, 1];
        assert!(is_irreducible(&k, &f));
        assert_eq!(factor(&k, &f, 9).unwrap(), vec![(f, 1)]);
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let k = FieldCtx::new(2, 2).unwrap();
        // (x+1)^2 (x^2+x+1)... over F_4 the quadratic splits
        let f = mul(&k, &mul(&k, &[1, 1], &[1, 1]), &[1, 1, 1]);
        let fs = factor(&k, &f, 3).unwrap();
        assert_eq!(product(&k, &fs), f);
        assert!(fs.iter().all(|(g, _)| is_irreducible(&k, g)));
        assert!(fs.contains(&(vec![1, 1], 2)));
        let k3 = FieldCtx::prime(3).unwrap();
        // x^6 + 1 = (x^2 + 1)^3 over F_3
        let g = vec![1, 0, 0, 0, 0, 0, 1];
        assert_eq!(factor(&k3, &g, 0).unwrap(), vec![(vec![1, 0, 1], 3)]);
    }

    #[test]
    fn factorization_reconstructs() {
        let k = FieldCtx::new(3, 2).unwrap();
        let f: Poly = vec![2, 5, 0, 7, 1, 3, 1];
        let f = monic(&k, &trim(f.iter().map(|&c| c % 9).collect()));
        let fs = factor(&k, &f, 42).unwrap();
        assert_eq!(product(&k, &fs), f);
        for (g, _) in fs {
            assert!(is_irreducible(&k, &g));
        }
    }

    #[test]
    fn zero_rejected() {
        let k = FieldCtx::prime(5).unwrap();
        assert_eq!(factor(&k, &[], 0), Err(FfError::ZeroPolynomial));
    }
}
