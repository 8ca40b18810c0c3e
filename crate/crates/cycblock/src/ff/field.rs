//! Finite fields `F_{r^k}` as `F_r[y]/(g)` with `g` the first monic
//! irreducible polynomial of degree `k` in lexicographic order.
//!
//! Elements are encoded as integers `Σ c_i r^i` over the coefficient vector.

use std::collections::HashMap;

use super::poly;
use super::FfError;

/// Tables are kept for fields with at most this many elements.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Clone)]
pub struct FieldCtx {
    r: u64,
    k: u32,
    modulus: Vec<u64>,
    size: u64,
    mul_table: Option<Vec<u32>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// The prime field `F_r`.
    pub fn prime(r: u64) -> Result<FieldCtx, FfError> {
        if !crate::arith::is_prime(r) || r >= 1 << 20 {
            return Err(FfError::BadCharacteristic(r));
        }
        let mut f = FieldCtx { r, k: 1, modulus: vec![0, 1], size: r, mul_table: None };
        f.build_tables();
        Ok(f)
    }

    /// `F_{r^k}` with its defining polynomial found by search.
    pub fn new(r: u64, k: u32) -> Result<FieldCtx, FfError> {
        let base = FieldCtx::prime(r)?;
        if k == 1 {
            return Ok(base);
        }
        let size = r.checked_pow(k).filter(|&s| s < 1 << 48).ok_or(FfError::TooLarge)?;
        let tail = r.pow(k);
        for code in 0..tail {
            let mut g: Vec<u64> = (0..k).map(|i| (code / r.pow(i)) % r).collect();
            if g[0] == 0 {
                continue;
            }
            g.push(1);
            if poly::is_irreducible(&base, &g) {
                return FieldCtx::with_modulus(r, g, size);
            }
        }
        Err(FfError::NoIrreducible(r, k))
    }

    /// Field with a caller-supplied modulus; irreducibility is verified.
    pub fn from_modulus(r: u64, modulus: Vec<u64>) -> Result<FieldCtx, FfError> {
        let base = FieldCtx::prime(r)?;
        let m = poly::trim(modulus.iter().map(|&c| c % r).collect());
        if m.len() < 2 || *m.last().unwrap() != 1 || !poly::is_irreducible(&base, &m) {
            return Err(FfError::Reducible);
        }
        let k = (m.len() - 1) as u32;
        let size = r.checked_pow(k).filter(|&s| s < 1 << 48).ok_or(FfError::TooLarge)?;
        FieldCtx::with_modulus(r, m, size)
    }

    fn with_modulus(r: u64, modulus: Vec<u64>, size: u64) -> Result<FieldCtx, FfError> {
        let k = (modulus.len() - 1) as u32;
        let mut f = FieldCtx { r, k, modulus, size, mul_table: None };
        f.build_tables();
        Ok(f)
    }

    fn build_tables(&mut self) {
        if self.size > TABLE_LIMIT {
            return;
        }
        let s = self.size;
        let mut t = vec![0u32; (s * s) as usize];
        for x in 0..s {
            for y in 0..s {
                t[(x * s + y) as usize] = self.mul_slow(x, y) as u32;
            }
        }
        self.mul_table = Some(t);
    }

    pub fn characteristic(&self) -> u64 {
        self.r
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// The class of `y`, a generator of the field over `F_r` when `k > 1`.
    pub fn gen(&self) -> u64 {
        if self.k == 1 {
            1
        } else {
            self.r
        }
    }

    pub fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.r as i64) as u64
    }

    pub fn coeffs(&self, x: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut v = x;
        for _ in 0..self.k {
            out.push(v % self.r);
            v /= self.r;
        }
        out
    }

    pub fn encode(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * self.r + d % self.r)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        if self.k == 1 {
            return (x + y) % self.r;
        }
        if self.r == 2 {
            return x ^ y;
        }
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.r).collect();
        self.encode(&s)
    }

    pub fn neg(&self, x: u64) -> u64 {
        if self.k == 1 {
            return (self.r - x) % self.r;
        }
        if self.r == 2 {
            return x;
        }
        let a: Vec<u64> = self.coeffs(x).iter().map(|&u| (self.r - u) % self.r).collect();
        self.encode(&a)
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if let Some(t) = &self.mul_table {
            return t[(x * self.size + y) as usize] as u64;
        }
        self.mul_slow(x, y)
    }

    fn mul_slow(&self, x: u64, y: u64) -> u64 {
        let r = self.r;
        if self.k == 1 {
            return x * y % r;
        }
        let k = self.k as usize;
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &u) in a.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % r;
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            // y^d = -Σ g_i y^{d-k+i}
            for i in 0..k {
                let t = c * self.modulus[i] % r;
                prod[d - k + i] = (prod[d - k + i] + r - t) % r;
            }
            prod[d] = 0;
        }
        self.encode(&prod[..k])
    }

    pub fn pow(&self, x: u64, e: u128) -> u64 {
        let mut base = x;
        let mut acc = 1u64;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        if x == 0 {
            None
        } else {
            Some(self.pow(x, (self.size - 2) as u128))
        }
    }

    /// Multiplicative order of a non-zero element.
    pub fn order(&self, x: u64) -> u128 {
        assert!(x != 0, "zero has no multiplicative order");
        let n = (self.size - 1) as u128;
        let mut ord = n;
        for (pr, _) in factor_u128(n) {
            while ord.is_multiple_of(pr) && self.pow(x, ord / pr) == 1 {
                ord /= pr;
            }
        }
        ord
    }

    /// First generator of the multiplicative group in encoding order.
    pub fn primitive_element(&self) -> u64 {
        let n = (self.size - 1) as u128;
        let primes: Vec<u128> = factor_u128(n).into_iter().map(|(p, _)| p).collect();
        (1..self.size)
            .find(|&x| primes.iter().all(|&p| self.pow(x, n / p) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// An element of exact order `ord`, if `ord | size − 1`.
    pub fn element_of_order(&self, ord: u128) -> Option<u64> {
        let n = (self.size - 1) as u128;
        if ord == 0 || !n.is_multiple_of(ord) {
            return None;
        }
        Some(self.pow(self.primitive_element(), n / ord))
    }

    /// Image under `x ↦ x^{r^e}`.
    pub fn frobenius(&self, x: u64, e: u32) -> u64 {
        let mut v = x;
        for _ in 0..e {
            v = self.pow(v, self.r as u128);
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size
    }
}

/// An embedding of a small field into a larger one of the same
/// characteristic, with the inverse on the image.
#[derive(Debug, Clone)]
pub struct Embedding {
    gamma: u64,
    back: HashMap<u64, u64>,
}

impl Embedding {
    pub fn new(small: &FieldCtx, big: &FieldCtx) -> Result<Embedding, FfError> {
        if small.r != big.r || !big.k.is_multiple_of(small.k) {
            return Err(FfError::NotSubfield);
        }
        if small.size > 1 << 20 {
            return Err(FfError::TooLarge);
        }
        // a root of the small modulus inside the big field
        let gamma = if small.k == 1 {
            0
        } else {
            let sub = big.size.checked_sub(1).unwrap() / (small.size - 1);
            let g = big.primitive_element();
            let w = big.pow(g, sub as u128);
            // w generates the subfield's multiplicative group; find a root of
            // the small modulus among its powers
            let mut x = 1u64;
            let mut found = None;
            for _ in 0..small.size - 1 {
                if poly::eval(big, &small.modulus, x) == 0 {
                    found = Some(x);
                    break;
                }
                x = big.mul(x, w);
            }
            found.ok_or(FfError::NotSubfield)?
        };
        let mut emb = Embedding { gamma, back: HashMap::new() };
        for s in small.elements() {
            let b = emb.up_raw(small, big, s);
            emb.back.insert(b, s);
        }
        Ok(emb)
    }

    fn up_raw(&self, small: &FieldCtx, big: &FieldCtx, x: u64) -> u64 {
        if small.k == 1 {
            return x;
        }
        let c = small.coeffs(x);
        let mut acc = 0u64;
        let mut pw = 1u64;
        for &d in &c {
            acc = big.add(acc, big.mul(d, pw));
            pw = big.mul(pw, self.gamma);
        }
        acc
    }

    pub fn up(&self, small: &FieldCtx, big: &FieldCtx, x: u64) -> u64 {
        self.up_raw(small, big, x)
    }

    /// Preimage of an element of the big field lying in the subfield.
    pub fn down(&self, y: u64) -> Option<u64> {
        self.back.get(&y).copied()
    }
}

/// Trial-division factorization.
pub fn factor_u128(n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2u128;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let mut e = 0;
            while m.is_multiple_of(d) {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}
