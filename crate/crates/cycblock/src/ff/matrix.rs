//! Square matrices over `F_{q^δ}` and the linear algebra the oracle needs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::FieldCtx;
use super::FfError;
use crate::params::Sign;

/// An element of `GL_n(q)` (`eps = +1`, entries in `F_q`) or of `GL_n(q²)`
/// tested against the standard hermitian form (`eps = −1`).
#[derive(Debug, Clone)]
pub struct MatrixG {
    pub field: Arc<FieldCtx>,
    pub n: usize,
    /// Row-major.
    pub entries: Vec<u64>,
    pub q: u64,
    pub eps: Sign,
}

impl PartialEq for MatrixG {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries && self.q == other.q
    }
}

impl Eq for MatrixG {}

impl MatrixG {
    pub fn identity(field: Arc<FieldCtx>, n: usize, q: u64, eps: Sign) -> MatrixG {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        MatrixG { field, n, entries, q, eps }
    }

    pub fn from_entries(
        field: Arc<FieldCtx>,
        n: usize,
        entries: Vec<u64>,
        q: u64,
        eps: Sign,
    ) -> Result<MatrixG, FfError> {
        if entries.len() != n * n || entries.iter().any(|&x| x >= field.size()) {
            return Err(FfError::Dimension);
        }
        Ok(MatrixG { field, n, entries, q, eps })
    }

    pub fn diag(field: Arc<FieldCtx>, d: &[u64], q: u64, eps: Sign) -> MatrixG {
        let n = d.len();
        let mut m = MatrixG::identity(field, n, q, eps);
        for (i, &x) in d.iter().enumerate() {
            m.entries[i * n + i] = x;
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    fn with_entries(&self, entries: Vec<u64>) -> MatrixG {
        MatrixG { field: self.field.clone(), n: self.n, entries, q: self.q, eps: self.eps }
    }

    pub fn mul(&self, other: &MatrixG) -> MatrixG {
        self.with_entries(mat_mul(&self.field, self.n, &self.entries, &other.entries))
    }

    pub fn pow(&self, e: u128) -> MatrixG {
        let mut acc = MatrixG::identity(self.field.clone(), self.n, self.q, self.eps);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn det(&self) -> u64 {
        det(&self.field, self.n, &self.entries)
    }

    pub fn inverse(&self) -> Result<MatrixG, FfError> {
        let n = self.n;
        let k = &self.field;
        let mut a = self.entries.clone();
        let mut inv = MatrixG::identity(k.clone(), n, self.q, self.eps).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * n + col] != 0).ok_or(FfError::Singular)?;
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
                inv.swap(col * n + j, piv * n + j);
            }
            let s = k.inv(a[col * n + col]).unwrap();
            for j in 0..n {
                a[col * n + j] = k.mul(a[col * n + j], s);
                inv[col * n + j] = k.mul(inv[col * n + j], s);
            }
            for r in 0..n {
                if r == col || a[r * n + col] == 0 {
                    continue;
                }
                let f = a[r * n + col];
                for j in 0..n {
                    a[r * n + j] = k.sub(a[r * n + j], k.mul(f, a[col * n + j]));
                    inv[r * n + j] = k.sub(inv[r * n + j], k.mul(f, inv[col * n + j]));
                }
            }
        }
        Ok(self.with_entries(inv))
    }

    /// Entrywise `x ↦ x^q`.
    pub fn conj(&self) -> MatrixG {
        let q = self.q as u128;
        self.with_entries(self.entries.iter().map(|&x| self.field.pow(x, q)).collect())
    }

    pub fn transpose(&self) -> MatrixG {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.get(i, j);
            }
        }
        self.with_entries(out)
    }

    /// `gᴴ g = I` for the identity Gram matrix.
    pub fn preserves_form(&self) -> bool {
        preserves_form(&self.field, self.n, self.q, &self.entries)
    }

    /// Group membership: invertible, and unitary when `eps = −1`.
    pub fn in_group(&self) -> bool {
        self.det() != 0 && (self.eps == Sign::Plus || self.preserves_form())
    }

    /// Element order, found by factoring a known multiple.
    pub fn order_dividing(&self, multiple: u128) -> Option<u128> {
        if !self.pow(multiple).is_identity() {
            return None;
        }
        let mut ord = multiple;
        for (pr, _) in super::field::factor_u128(multiple) {
            while ord.is_multiple_of(pr) && self.pow(ord / pr).is_identity() {
                ord /= pr;
            }
        }
        Some(ord)
    }

    /// Element order by repeated multiplication, up to `limit`.
    pub fn order(&self, limit: u128) -> Option<u128> {
        let mut x = self.clone();
        for k in 1..=limit {
            if x.is_identity() {
                return Some(k);
            }
            x = x.mul(self);
        }
        None
    }

    /// `f(self)` by Horner's rule.
    pub fn eval_poly(&self, f: &[u64]) -> MatrixG {
        let n = self.n;
        let k = &self.field;
        let mut acc = vec![0u64; n * n];
        for &c in f.iter().rev() {
            acc = mat_mul(k, n, &acc, &self.entries);
            for i in 0..n {
                acc[i * n + i] = k.add(acc[i * n + i], c);
            }
        }
        self.with_entries(acc)
    }

    pub fn rank(&self) -> usize {
        rank(&self.field, self.n, self.n, &self.entries)
    }

    pub fn to_fixture(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.field.coeffs(self.get(i, j))).collect())
            .collect()
    }
}

pub fn mat_mul(k: &FieldCtx, n: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for l in 0..n {
            let x = a[i * n + l];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = k.add(out[i * n + j], k.mul(x, b[l * n + j]));
            }
        }
    }
    out
}

pub fn det(k: &FieldCtx, n: usize, m: &[u64]) -> u64 {
    let mut a = m.to_vec();
    let mut d = 1u64;
    for col in 0..n {
        let piv = match (col..n).find(|&r| a[r * n + col] != 0) {
            Some(r) => r,
            None => return 0,
        };
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            d = k.neg(d);
        }
        let pv = a[col * n + col];
        d = k.mul(d, pv);
        let s = k.inv(pv).unwrap();
        for r in col + 1..n {
            let f = k.mul(a[r * n + col], s);
            if f == 0 {
                continue;
            }
            for j in col..n {
                a[r * n + j] = k.sub(a[r * n + j], k.mul(f, a[col * n + j]));
            }
        }
    }
    d
}

pub fn preserves_form(k: &FieldCtx, n: usize, q: u64, m: &[u64]) -> bool {
    // (gᴴ g)_{ij} = Σ_l conj(g_{li}) g_{lj}
    let c: Vec<u64> = m.iter().map(|&x| k.pow(x, q as u128)).collect();
    for i in 0..n {
        for j in 0..n {
            let mut s = 0;
            for l in 0..n {
                s = k.add(s, k.mul(c[l * n + i], m[l * n + j]));
            }
            if s != u64::from(i == j) {
                return false;
            }
        }
    }
    true
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(k: &FieldCtx, rows: usize, cols: usize, a: &mut [u64]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(r * cols + j, piv * cols + j);
        }
        let s = k.inv(a[r * cols + c]).unwrap();
        for j in 0..cols {
            a[r * cols + j] = k.mul(a[r * cols + j], s);
        }
        for i in 0..rows {
            if i == r || a[i * cols + c] == 0 {
                continue;
            }
            let f = a[i * cols + c];
            for j in 0..cols {
                a[i * cols + j] = k.sub(a[i * cols + j], k.mul(f, a[r * cols + j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &FieldCtx, rows: usize, cols: usize, a: &[u64]) -> usize {
    let mut m = a.to_vec();
    rref(k, rows, cols, &mut m).len()
}

/// Basis of `{x : A x = 0}` for a `rows × cols` matrix.
pub fn nullspace(k: &FieldCtx, rows: usize, cols: usize, a: &[u64]) -> Vec<Vec<u64>> {
    let mut m = a.to_vec();
    let pivots = rref(k, rows, cols, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m[r * cols + f]);
            }
            v
        })
        .collect()
}

/// Serialized matrix: entries as coefficient vectors over the prime field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureMatrix(pub Vec<Vec<Vec<u64>>>);

impl FixtureMatrix {
    pub fn to_matrix(&self, field: Arc<FieldCtx>, q: u64, eps: Sign) -> Result<MatrixG, FfError> {
        let n = self.0.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in &self.0 {
            if row.len() != n {
                return Err(FfError::Dimension);
            }
            for c in row {
                if c.len() > field.degree() as usize || c.iter().any(|&d| d >= field.characteristic()) {
                    return Err(FfError::Dimension);
                }
                entries.push(field.encode(c));
            }
        }
        MatrixG::from_entries(field, n, entries, q, eps)
    }
}
