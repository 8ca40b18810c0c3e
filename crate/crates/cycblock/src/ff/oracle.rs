//! Concrete semisimple elements: torus construction, primary decomposition,
//! centralizer orders by formula and by enumeration of the commutant, and
//! brute-force listings of tiny groups.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::field::{Embedding, FieldCtx};
use super::matrix::{nullspace, FixtureMatrix, MatrixG};
use super::poly::{self, Poly};
use super::{gl_order, FfError};
use crate::params::Sign;

/// `(r, k)` with `q = r^k`.
pub fn split_q(q: u64) -> Result<(u64, u32), FfError> {
    crate::arith::prime_power(&BigUint::from(q)).ok_or(FfError::NotPrimePower(q))
}

/// `F_{q^δ}`.
pub fn matrix_field(q: u64, eps: Sign) -> Result<Arc<FieldCtx>, FfError> {
    let (r, k) = split_q(q)?;
    Ok(Arc::new(FieldCtx::new(r, k * eps.delta())?))
}

fn torus_order(n: usize, q: u64, eps: Sign) -> BigUint {
    let qn = BigUint::from(q).pow(n as u32);
    match eps {
        Sign::Minus if n % 2 == 1 => qn + 1u32,
        _ => qn - 1u32,
    }
}

fn companion(k: &FieldCtx, mu: &[u64]) -> Vec<u64> {
    let d = mu.len() - 1;
    let mut c = vec![0u64; d * d];
    for i in 0..d {
        if i + 1 < d {
            c[(i + 1) * d + i] = 1;
        }
        c[i * d + d - 1] = k.neg(mu[i]);
    }
    c
}

fn block_diag(blocks: &[Vec<u64>], d: usize) -> Vec<u64> {
    let n = d * blocks.len();
    let mut out = vec![0u64; n * n];
    for (b, m) in blocks.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                out[(b * d + i) * n + b * d + j] = m[i * d + j];
            }
        }
    }
    out
}

/// Sesquilinear `uᵀ K v̄` with `v̄` the entrywise `q`-th power.
fn herm(k: &FieldCtx, gram: &[u64], d: usize, q: u64, u: &[u64], v: &[u64]) -> u64 {
    let vb: Vec<u64> = v.iter().map(|&x| k.pow(x, q as u128)).collect();
    let mut s = 0;
    for i in 0..d {
        if u[i] == 0 {
            continue;
        }
        for j in 0..d {
            s = k.add(s, k.mul(u[i], k.mul(gram[i * d + j], vb[j])));
        }
    }
    s
}

/// Columns of a basis orthonormal for the hermitian Gram matrix `gram`.
fn orthonormal_basis(k: &FieldCtx, gram: &[u64], d: usize, q: u64) -> Result<Vec<Vec<u64>>, FfError> {
    let mut rest: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut out = Vec::with_capacity(d);
    while !rest.is_empty() {
        let f = anisotropic(k, gram, d, q, &rest).ok_or(FfError::Check("degenerate trace form".into()))?;
        let nf = herm(k, gram, d, q, &f, &f);
        let target = k.inv(nf).unwrap();
        let lambda = k
            .elements()
            .find(|&x| x != 0 && k.pow(x, q as u128 + 1) == target)
            .ok_or(FfError::Check("norm not surjective".into()))?;
        let f: Vec<u64> = f.iter().map(|&x| k.mul(x, lambda)).collect();
        let projected: Vec<Vec<u64>> = rest
            .iter()
            .map(|w| {
                let c = herm(k, gram, d, q, w, &f);
                w.iter().zip(&f).map(|(&a, &b)| k.sub(a, k.mul(c, b))).collect()
            })
            .collect();
        rest = independent_subset(k, d, projected);
        out.push(f);
    }
    Ok(out)
}

fn anisotropic(k: &FieldCtx, gram: &[u64], d: usize, q: u64, w: &[Vec<u64>]) -> Option<Vec<u64>> {
    if let Some(v) = w.iter().find(|v| herm(k, gram, d, q, v, v) != 0) {
        return Some(v.clone());
    }
    for i in 0..w.len() {
        for j in 0..w.len() {
            if i == j {
                continue;
            }
            for lam in 1..k.size() {
                let v: Vec<u64> = w[i].iter().zip(&w[j]).map(|(&a, &b)| k.add(a, k.mul(lam, b))).collect();
                if herm(k, gram, d, q, &v, &v) != 0 {
                    return Some(v);
                }
            }
        }
    }
    None
}

fn independent_subset(k: &FieldCtx, d: usize, vs: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut kept: Vec<Vec<u64>> = Vec::new();
    for v in vs {
        let mut trial = kept.clone();
        trial.push(v.clone());
        let flat: Vec<u64> = trial.concat();
        if super::matrix::rank(k, trial.len(), d, &flat) == trial.len() {
            kept = trial;
        }
    }
    kept
}

/// A semisimple element of `GL_n^ε(q)` of exact order `target`, acting as
/// multiplication by a field element on each block of a basis. For `ε = −1`
/// the basis is orthonormal for the standard hermitian form; only odd `n`
/// is supported there.
pub fn build_torus_element(n: usize, q: u64, eps: Sign, target: u128) -> Result<MatrixG, FfError> {
    if n == 0 {
        return Err(FfError::Dimension);
    }
    let torus = torus_order(n, q, eps);
    if target == 0 || (&torus % BigUint::from(target)) != BigUint::from(0u32) {
        return Err(FfError::OrderNotDividing { order: target, torus: torus.to_string() });
    }
    if eps == Sign::Minus && n.is_multiple_of(2) {
        return Err(FfError::Unsupported("unitary torus in even dimension"));
    }
    let (r, k) = split_q(q)?;
    let kf = matrix_field(q, eps)?;
    let big = FieldCtx::new(r, k * eps.delta() * n as u32)?;
    if big.size() > 1 << 24 {
        return Err(FfError::TooLarge);
    }
    let xi = big.element_of_order(target).ok_or(FfError::Check("no element of target order".into()))?;
    let qq = kf.size() as u128;
    let mut conjugates = vec![xi];
    loop {
        let next = big.pow(*conjugates.last().unwrap(), qq);
        if next == xi {
            break;
        }
        conjugates.push(next);
    }
    let d = conjugates.len();
    if !n.is_multiple_of(d) {
        return Err(FfError::Check(format!("degree {d} does not divide {n}")));
    }
    let emb = Embedding::new(&kf, &big)?;
    let mut mu_big: Poly = vec![1];
    for &c in &conjugates {
        mu_big = poly::mul(&big, &mu_big, &[big.neg(c), 1]);
    }
    let mu: Poly = mu_big
        .iter()
        .map(|&c| emb.down(c).ok_or(FfError::Check("minimal polynomial not over base".into())))
        .collect::<Result<_, _>>()?;
    let comp = companion(&kf, &mu);
    let block = match eps {
        Sign::Plus => comp,
        Sign::Minus => {
            // Gram matrix of the trace form in the basis 1, ξ, …, ξ^{d−1}
            let trace = |z: u64| -> u64 {
                let mut s = 0;
                let mut y = z;
                for _ in 0..d {
                    s = big.add(s, y);
                    y = big.pow(y, qq);
                }
                s
            };
            let xinv = big.inv(xi).unwrap();
            let mut gram = vec![0u64; d * d];
            for i in 0..d {
                for j in 0..d {
                    let z = if i >= j { big.pow(xi, (i - j) as u128) } else { big.pow(xinv, (j - i) as u128) };
                    gram[i * d + j] = emb.down(trace(z)).ok_or(FfError::Check("trace outside base".into()))?;
                }
            }
            let cols = orthonormal_basis(&kf, &gram, d, q)?;
            let mut e = vec![0u64; d * d];
            for (c, v) in cols.iter().enumerate() {
                for i in 0..d {
                    e[i * d + c] = v[i];
                }
            }
            let em = MatrixG::from_entries(kf.clone(), d, e, q, eps)?;
            let cm = MatrixG::from_entries(kf.clone(), d, comp, q, eps)?;
            em.inverse()?.mul(&cm).mul(&em).entries
        }
    };
    let blocks = vec![block; n / d];
    let t = MatrixG::from_entries(kf, n, block_diag(&blocks, d), q, eps)?;
    if !t.in_group() {
        return Err(FfError::Check("torus element outside the group".into()));
    }
    if t.order_dividing(target) != Some(target) {
        return Err(FfError::Check("torus element has the wrong order".into()));
    }
    Ok(t)
}

/// Minimal polynomial by the first linear dependence among `I, t, t², …`.
pub fn minimal_polynomial(t: &MatrixG) -> Poly {
    let k = &t.field;
    let n2 = t.n * t.n;
    let mut powers: Vec<Vec<u64>> = vec![MatrixG::identity(k.clone(), t.n, t.q, t.eps).entries];
    loop {
        let next = t.mul_entries(powers.last().unwrap());
        powers.push(next);
        let cols = powers.len();
        let mut a = vec![0u64; n2 * cols];
        for (c, p) in powers.iter().enumerate() {
            for r in 0..n2 {
                a[r * cols + c] = p[r];
            }
        }
        if let Some(v) = nullspace(k, n2, cols, &a).into_iter().next() {
            return poly::monic(k, &poly::trim(v));
        }
    }
}

impl MatrixG {
    fn mul_entries(&self, other: &[u64]) -> Vec<u64> {
        super::matrix::mat_mul(&self.field, self.n, other, &self.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimaryFactor {
    pub poly: Poly,
    pub degree: usize,
    /// `n_j′`
    pub multiplicity: usize,
    /// `n_j = dim ker Δ_j(t)`
    pub dim: usize,
    /// `Δ_j = Δ_j†`, for the unitary case only.
    pub self_dual: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimaryDecomposition {
    pub min_poly: Poly,
    pub factors: Vec<PrimaryFactor>,
}

impl PrimaryDecomposition {
    pub fn h(&self) -> usize {
        self.factors.len()
    }
}

pub fn primary_decompose(t: &MatrixG, seed: u64) -> Result<PrimaryDecomposition, FfError> {
    let k = &t.field;
    let mu = minimal_polynomial(t);
    let fs = poly::factor(k, &mu, seed)?;
    if fs.iter().any(|(_, m)| *m > 1) {
        return Err(FfError::NotSemisimple);
    }
    let factors = fs
        .into_iter()
        .map(|(g, _)| {
            let degree = g.len() - 1;
            let dim = t.n - t.eval_poly(&g).rank();
            let self_dual = (t.eps == Sign::Minus).then(|| poly::dagger(k, &g, t.q) == g);
            PrimaryFactor { poly: g, degree, multiplicity: dim / degree, dim, self_dual }
        })
        .collect();
    Ok(PrimaryDecomposition { min_poly: mu, factors })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralizerOrders {
    #[serde(with = "crate::params::big")]
    pub order_in_gtilde: BigUint,
    #[serde(with = "crate::params::big")]
    pub order_in_g: BigUint,
}

impl CentralizerOrders {
    /// `[C_G̃(t) : C_G(t)]`, when it is an integer.
    pub fn index(&self) -> Option<BigUint> {
        let (qt, r) = num_integer::Integer::div_rem(&self.order_in_gtilde, &self.order_in_g);
        (r == BigUint::from(0u32)).then_some(qt)
    }
}

/// Product of `GL^ε` orders over the primary decomposition, divided by
/// `q − ε` for the determinant-one subgroup.
pub fn centralizer_orders(t: &MatrixG, seed: u64) -> Result<CentralizerOrders, FfError> {
    let dec = primary_decompose(t, seed)?;
    let q = BigUint::from(t.q);
    let mut total = BigUint::one();
    match t.eps {
        Sign::Plus => {
            for f in &dec.factors {
                total *= gl_order(f.multiplicity as u32, &q.pow(f.degree as u32), Sign::Plus);
            }
        }
        Sign::Minus => {
            let mut used = vec![false; dec.factors.len()];
            for i in 0..dec.factors.len() {
                if used[i] {
                    continue;
                }
                let f = &dec.factors[i];
                used[i] = true;
                if f.self_dual == Some(true) {
                    total *= gl_order(f.multiplicity as u32, &q.pow(f.degree as u32), Sign::Minus);
                    continue;
                }
                let dual = poly::dagger(&t.field, &f.poly, t.q);
                let j = (0..dec.factors.len())
                    .find(|&j| !used[j] && dec.factors[j].poly == dual)
                    .ok_or(FfError::Check("factor without its dual partner".into()))?;
                used[j] = true;
                total *= gl_order(f.multiplicity as u32, &q.pow(2 * f.degree as u32), Sign::Plus);
            }
        }
    }
    let qe = match t.eps {
        Sign::Plus => &q - 1u32,
        Sign::Minus => &q + 1u32,
    };
    Ok(CentralizerOrders { order_in_g: &total / &qe, order_in_gtilde: total })
}

/// Counts the commutant's group elements directly. Fails with `TooLarge`
/// when the commutant has more than `limit` elements.
pub fn centralizer_enumerate(t: &MatrixG, limit: u64) -> Result<CentralizerOrders, FfError> {
    let n = t.n;
    let k = &t.field;
    let n2 = n * n;
    // X ↦ Xt − tX as an n² × n² matrix on row-major vec(X)
    let mut m = vec![0u64; n2 * n2];
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for l in 0..n {
                let c1 = i * n + l;
                m[row * n2 + c1] = k.add(m[row * n2 + c1], t.get(l, j));
                let c2 = l * n + j;
                m[row * n2 + c2] = k.sub(m[row * n2 + c2], t.get(i, l));
            }
        }
    }
    let basis = nullspace(k, n2, n2, &m);
    let dim = basis.len() as u32;
    let total = k.size().checked_pow(dim).filter(|&s| s <= limit).ok_or(FfError::TooLarge)?;
    let mut coeffs = vec![0u64; basis.len()];
    let (mut units, mut special) = (0u64, 0u64);
    for _ in 0..total {
        let mut x = vec![0u64; n2];
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c == 0 {
                continue;
            }
            for (xe, &be) in x.iter_mut().zip(b) {
                *xe = k.add(*xe, k.mul(*c, be));
            }
        }
        let d = super::matrix::det(k, n, &x);
        if d != 0 && (t.eps == Sign::Plus || super::matrix::preserves_form(k, n, t.q, &x)) {
            units += 1;
            if d == 1 {
                special += 1;
            }
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < k.size() {
                break;
            }
            *c = 0;
        }
    }
    Ok(CentralizerOrders { order_in_gtilde: BigUint::from(units), order_in_g: BigUint::from(special) })
}

/// Multiplicative order of `det(t)`.
pub fn det_order(t: &MatrixG) -> u128 {
    t.field.order(t.det())
}

/// Every element of `GL_n(q)` or `GU_n(q)`, by exhausting all matrices.
pub fn all_group_elements(n: usize, q: u64, eps: Sign) -> Result<Vec<MatrixG>, FfError> {
    let k = matrix_field(q, eps)?;
    let n2 = n * n;
    let total = k.size().checked_pow(n2 as u32).filter(|&s| s <= 1 << 20).ok_or(FfError::TooLarge)?;
    let mut out = Vec::new();
    let mut e = vec![0u64; n2];
    for _ in 0..total {
        let ok = match eps {
            Sign::Plus => super::matrix::det(&k, n, &e) != 0,
            Sign::Minus => super::matrix::preserves_form(&k, n, q, &e),
        };
        if ok {
            out.push(MatrixG { field: k.clone(), n, entries: e.clone(), q, eps });
        }
        for c in e.iter_mut() {
            *c += 1;
            if *c < k.size() {
                break;
            }
            *c = 0;
        }
    }
    Ok(out)
}

/// The semisimple elements (order prime to the characteristic) of a tiny group.
pub fn semisimple_elements(n: usize, q: u64, eps: Sign) -> Result<Vec<MatrixG>, FfError> {
    let (r, _) = split_q(q)?;
    let all = all_group_elements(n, q, eps)?;
    let group_order = gl_order(n as u32, &BigUint::from(q), eps).to_u128().ok_or(FfError::TooLarge)?;
    Ok(all
        .into_iter()
        .filter(|g| g.order_dividing(group_order).is_some_and(|o| o % r as u128 != 0))
        .collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub n: usize,
    pub q: u64,
    pub epsilon: Sign,
    /// Defining polynomial of `F_{q^δ}` over `F_r`, low to high.
    pub modulus: Vec<u64>,
    pub seed: u64,
    pub elements: Vec<FixtureMatrix>,
}

/// `(name, n, q, ε)` of the fixture groups.
pub const FIXTURE_GROUPS: [(&str, usize, u64, Sign); 4] = [
    ("gu2-2", 2, 2, Sign::Minus),
    ("gu3-2", 3, 2, Sign::Minus),
    ("gl2-3", 2, 3, Sign::Plus),
    ("gl2-5", 2, 5, Sign::Plus),
];

pub fn generate_fixture(name: &str, n: usize, q: u64, eps: Sign, seed: u64) -> Result<Fixture, FfError> {
    let k = matrix_field(q, eps)?;
    let elements = semisimple_elements(n, q, eps)?.iter().map(|g| FixtureMatrix(g.to_fixture())).collect();
    Ok(Fixture { name: name.to_string(), n, q, epsilon: eps, modulus: k.modulus().to_vec(), seed, elements })
}

impl Fixture {
    pub fn matrices(&self) -> Result<Vec<MatrixG>, FfError> {
        let (r, _) = split_q(self.q)?;
        let k = Arc::new(FieldCtx::from_modulus(r, self.modulus.clone())?);
        self.elements.iter().map(|m| m.to_matrix(k.clone(), self.q, self.epsilon)).collect()
    }

    pub fn load(dir: &Path, name: &str) -> Result<Fixture, FfError> {
        let path = dir.join(format!("{name}.json"));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| FfError::Check(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| FfError::Check(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, dir: &Path) -> Result<(), FfError> {
        let path = dir.join(format!("{}.json", self.name));
        let text = serde_json::to_string(self).map_err(|e| FfError::Check(e.to_string()))?;
        std::fs::write(&path, text).map_err(|e| FfError::Check(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gu3_2_torus_of_order_9() {
        let t = build_torus_element(3, 2, Sign::Minus, 9).unwrap();
        assert!(t.preserves_form());
        assert_eq!(t.order(100), Some(9));
        assert_eq!(det_order(&t), 3);
        let dec = primary_decompose(&t, 0).unwrap();
        assert_eq!(dec.h(), 1);
        assert_eq!(dec.factors[0].degree, 3);
        assert_eq!(dec.factors[0].self_dual, Some(true));
        let c = centralizer_orders(&t, 0).unwrap();
        assert_eq!(c.order_in_gtilde, BigUint::from(9u32));
        assert_eq!(c.order_in_g, BigUint::from(3u32));
        assert_eq!(centralizer_enumerate(&t, 1 << 20).unwrap(), c);
    }

    #[test]
    fn scalar_unitary_torus() {
        let t = build_torus_element(1, 8, Sign::Minus, 9).unwrap();
        assert_eq!(t.n, 1);
        assert_eq!(t.order(100), Some(9));
        assert_eq!(det_order(&t), 9);
    }

    #[test]
    fn split_torus_over_f7() {
        let t = build_torus_element(2, 7, Sign::Plus, 3).unwrap();
        let dec = primary_decompose(&t, 0).unwrap();
        assert!(dec.factors.iter().all(|f| f.degree == 1));
        assert_eq!(t.order(10), Some(3));
    }

    #[test]
    fn torus_order_must_divide() {
        assert!(matches!(build_torus_element(3, 2, Sign::Minus, 7), Err(FfError::OrderNotDividing { .. })));
    }

    #[test]
    fn identity_decomposition_and_centralizer() {
        let k = matrix_field(3, Sign::Plus).unwrap();
        let id = MatrixG::identity(k, 2, 3, Sign::Plus);
        let dec = primary_decompose(&id, 0).unwrap();
        assert_eq!(dec.h(), 1);
        assert_eq!(dec.factors[0].poly, vec![2, 1]);
        assert_eq!(dec.factors[0].multiplicity, 2);
        let c = centralizer_orders(&id, 0).unwrap();
        assert_eq!((c.order_in_gtilde.clone(), c.order_in_g.clone()), (BigUint::from(48u32), BigUint::from(24u32)));
        assert_eq!(centralizer_enumerate(&id, 1 << 20).unwrap(), c);
    }

    #[test]
    fn unipotent_rejected() {
        let k = matrix_field(3, Sign::Plus).unwrap();
        let u = MatrixG::from_entries(k, 2, vec![1, 1, 0, 1], 3, Sign::Plus).unwrap();
        assert_eq!(primary_decompose(&u, 0), Err(FfError::NotSemisimple));
    }
}
