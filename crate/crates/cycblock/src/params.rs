//! Parameter model of a cyclic block: factor data of the minimal polynomial of
//! the semisimple element `t`, the constraint system those data satisfy, and
//! the orders of `t`, `D`, `D̃` and `D̄` that follow from them.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{is_prime, prime_power, vp_big, vp_u64};

/// `ε = +1` (linear groups) or `ε = −1` (unitary groups).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Degree of the field of definition: 1 for `ε = +1`, 2 for `ε = −1`.
    pub fn delta(self) -> u32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => 2,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom(format!("epsilon must be 1 or -1, got {v}")))
    }
}

/// `q - ε` as a big integer; `None` when `q = 1` and `ε = +1`.
pub fn q_minus_eps(q: &BigUint, eps: Sign) -> Option<BigUint> {
    match eps {
        Sign::Plus => {
            if q.is_zero() {
                None
            } else {
                Some(q - 1u32)
            }
        }
        Sign::Minus => Some(q + 1u32),
    }
}

/// One irreducible factor: degree `p^{a_j}`, multiplicity `m_j p^{b_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorData {
    pub a_j: u32,
    pub m_j: u64,
    pub b_j: u32,
}

impl FactorData {
    pub fn new(a_j: u32, m_j: u64, b_j: u32) -> FactorData {
        FactorData { a_j, m_j, b_j }
    }

    /// `n_j = m_j p^{a_j + b_j}`.
    pub fn dim(&self, p: u64) -> BigUint {
        BigUint::from(self.m_j) * BigUint::from(p).pow(self.a_j + self.b_j)
    }

    /// Parity of `n_j`, which is the parity of `m_j` since `p` is odd.
    pub fn dim_odd(&self) -> bool {
        self.m_j % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockConfig {
    pub epsilon: Sign,
    pub p: u64,
    pub a: u32,
    pub c: u32,
    pub c_prime: u32,
    pub factors: Vec<FactorData>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "big_opt")]
    pub q: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1_prime_odd: Option<bool>,
}

/// A big integer as a JSON number when it fits in 64 bits, otherwise as a
/// decimal string.
pub mod big {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        super::big_opt::serialize(&Some(v.clone()), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        super::big_opt::deserialize(d)?.ok_or_else(|| serde::de::Error::custom("missing integer"))
    }

    /// Newtype for use inside collections.
    #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
    pub struct Big(#[serde(with = "super::big")] pub BigUint);
}

/// `q` is written as a JSON number when it fits in 64 bits and as a decimal
/// string otherwise; both forms are accepted on input.
mod big_opt {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(b) => match b.to_u64() {
                Some(x) => s.serialize_u64(x),
                None => s.serialize_str(&b.to_string()),
            },
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(u64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let v: Option<NumOrStr> = Option::deserialize(d)?;
        match v {
            None => Ok(None),
            Some(NumOrStr::Num(x)) => Ok(Some(BigUint::from(x))),
            Some(NumOrStr::Str(s)) => s
                .parse::<BigUint>()
                .map(Some)
                .map_err(|_| serde::de::Error::custom(format!("q is not an integer: {s:?}"))),
        }
    }
}

impl BlockConfig {
    pub fn h(&self) -> usize {
        self.factors.len()
    }

    pub fn a1(&self) -> u32 {
        self.factors.first().map_or(0, |f| f.a_j)
    }

    pub fn a2(&self) -> u32 {
        self.factors.get(1).map_or(0, |f| f.a_j)
    }

    /// `n = Σ n_j`.
    pub fn n(&self) -> BigUint {
        self.factors.iter().map(|f| f.dim(self.p)).sum()
    }

    pub fn n_u64(&self) -> Option<u64> {
        self.n().to_u64()
    }

    pub fn residue(&self) -> crate::labels::Residue {
        crate::labels::Residue::of_prime(self.p)
    }
}

/// The clause of the constraint system that a configuration violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    FactorCount,
    OddPrime,
    APositive,
    CRange,
    CPrimeRange,
    CPrimeAtMostC,
    MPositive,
    MCoprime,
    CValuation,
    QPrimePower,
    QValuation,
    M1PrimeParity,
    H1Noncentral,
    H1B1EqualsA,
    H2BZero,
    H2Unequal,
    H2EqualPositive,
    H2CAtLeastA2,
    H2Noncentral,
    H2DistinctDims,
    H3Zero,
    H3CPrimeZero,
    H3Divides,
    H3DistinctDims,
    LPositive,
}

impl Clause {
    pub fn text(self) -> &'static str {
        match self {
            Clause::FactorCount => "1 ≤ h ≤ 3",
            Clause::OddPrime => "p odd prime",
            Clause::APositive => "a ≥ 1",
            Clause::CRange => "0 ≤ c ≤ a",
            Clause::CPrimeRange => "0 ≤ c′ ≤ a",
            Clause::CPrimeAtMostC => "c′ ≤ c",
            Clause::MPositive => "m_j ≥ 1",
            Clause::MCoprime => "p ∤ m_j",
            Clause::CValuation => "c = min(a, v_p(n))",
            Clause::QPrimePower => "q a prime power prime to p",
            Clause::QValuation => "v_p(q − ε) = a",
            Clause::M1PrimeParity => "m₁′ parity matches q",
            Clause::H1Noncentral => "a₁ > 0",
            Clause::H1B1EqualsA => "b₁ = a",
            Clause::H2BZero => "b₁ = b₂ = 0",
            Clause::H2Unequal => "a₁ > a₂ ⇒ c′ = 0 and c = a₂",
            Clause::H2EqualPositive => "a₁ = a₂ > 0 ⇒ c′ = c − a₁ < a",
            Clause::H2CAtLeastA2 => "c ≥ a₂",
            Clause::H2Noncentral => "a₁ = a₂ = 0 ⇒ c < a",
            Clause::H2DistinctDims => "a₁ = a₂ = 0 and c′ < c ⇒ n₁ ≠ n₂",
            Clause::H3Zero => "b₁ = a₂ = b₂ = a₃ = b₃ = 0",
            Clause::H3CPrimeZero => "c′ = 0",
            Clause::H3Divides => "p^a | n",
            Clause::H3DistinctDims => "a₁ > 0 ⇒ n₂ ≠ n₃",
            Clause::LPositive => "l = a + a₁ − c′ ≥ 1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} violated{}", clause.text(), if detail.is_empty() { String::new() } else { format!(": {detail}") })]
pub struct ValidationError {
    pub clause: Clause,
    pub detail: String,
}

fn fail<T>(clause: Clause, detail: impl Into<String>) -> Result<T, ValidationError> {
    Err(ValidationError { clause, detail: detail.into() })
}

fn check(ok: bool, clause: Clause, detail: impl FnOnce() -> String) -> Result<(), ValidationError> {
    if ok {
        Ok(())
    } else {
        fail(clause, detail())
    }
}

/// Orders derived from a valid configuration, stored as exponents of `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub p: u64,
    /// `|t| = p^{t_exp}`
    pub t_exp: u32,
    /// orders of the cyclic factors of `D`, as exponents, largest first
    pub defect_factor_exps: Vec<u32>,
    /// `|D̃| = p^{dtilde_exp}`
    pub dtilde_exp: u32,
    /// `|D̄| = p^l`
    pub l: u32,
}

impl DerivedQuantities {
    fn pow(&self, e: u32) -> BigUint {
        BigUint::from(self.p).pow(e)
    }

    pub fn order_t(&self) -> BigUint {
        self.pow(self.t_exp)
    }

    pub fn defect_factors(&self) -> Vec<BigUint> {
        self.defect_factor_exps.iter().map(|&e| self.pow(e)).collect()
    }

    pub fn d_exp(&self) -> u32 {
        self.defect_factor_exps.iter().sum()
    }

    pub fn order_d(&self) -> BigUint {
        self.pow(self.d_exp())
    }

    pub fn order_dtilde(&self) -> BigUint {
        self.pow(self.dtilde_exp)
    }

    pub fn d_cyclic(&self) -> bool {
        self.defect_factor_exps.len() <= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validated {
    pub config: BlockConfig,
    pub derived: DerivedQuantities,
}

/// `v_p(m)` for `m ≥ 1`.
pub fn vp(p: u64, m: &BigUint) -> Result<u32, ParamError> {
    vp_big(p, m).ok_or(ParamError::ZeroValuation)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("valuation of 0 is undefined")]
    ZeroValuation,
    #[error("order {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("factor orders involve different primes ({0} and {1})")]
    MixedPrimes(u64, u64),
}

/// Number of non-trivial cyclic factors, which is the minimal number of
/// generators of the abelian p-group.
pub fn rank_abelian(orders: &[u64]) -> Result<usize, ParamError> {
    let mut prime: Option<u64> = None;
    let mut rank = 0;
    for &o in orders {
        if o == 0 {
            return Err(ParamError::NotPrimePower(o));
        }
        if o == 1 {
            continue;
        }
        let (r, _) = prime_power(&BigUint::from(o)).ok_or(ParamError::NotPrimePower(o))?;
        match prime {
            None => prime = Some(r),
            Some(s) if s != r => return Err(ParamError::MixedPrimes(s, r)),
            _ => {}
        }
        rank += 1;
    }
    Ok(rank)
}

/// `N = (q^{δ p^{a_j}} − 1)/(q^δ − 1) = m′ p^{v}`; returns `(v, m′)`.
pub fn mprime(p: u64, q: &BigUint, delta: u32, a_j: u32) -> (u32, BigUint) {
    let qd = q.pow(delta);
    let d = BigUint::from(p).pow(a_j).to_u32().expect("degree p^a_j too large");
    let num = qd.pow(d) - 1u32;
    let den = &qd - 1u32;
    let n = num / den;
    let v = vp_big(p, &n).expect("N is positive");
    let m = n / BigUint::from(p).pow(v);
    (v, m)
}

/// `v_p(N)` and whether `m′` is odd, for the same `N` as [`mprime`], without
/// forming `N`: the valuation comes from `N mod p^K`, which is cheap even when
/// `q` has thousands of digits.
pub fn mprime_summary(p: u64, q: &BigUint, delta: u32, a_j: u32) -> (u32, bool) {
    let d = crate::arith::pow_u64(p, a_j);
    // N = 1 + Q + … + Q^{d−1}; p is odd, so m′ has the parity of N
    let odd = q.is_even() || d % 2 == 1;
    let mut k = a_j + 2;
    while let Some(m) = p.checked_pow(k).filter(|&m| m < 1 << 62) {
        let qm = (q % m).to_u64().unwrap() as u128;
        let base = (0..delta).fold(1u128, |acc, _| acc * qm % m as u128);
        let (mut term, mut sum) = (1u128, 0u128);
        for _ in 0..d {
            sum = (sum + term) % m as u128;
            term = term * base % m as u128;
        }
        if sum != 0 {
            return (vp_u64(p, sum as u64).unwrap(), odd);
        }
        k *= 2;
    }
    let (v, m) = mprime(p, q, delta, a_j);
    (v, m.is_odd())
}

/// Checks the constraint system and returns the normalized configuration
/// (factors sorted by `a_j` descending, `m₁′` parity filled in when `q` is
/// known) together with the derived orders.
pub fn validate(cfg: &BlockConfig) -> Result<Validated, ValidationError> {
    let mut cfg = cfg.clone();
    cfg.factors.sort_by(|x, y| y.a_j.cmp(&x.a_j));
    let p = cfg.p;
    let (a, c, cp) = (cfg.a, cfg.c, cfg.c_prime);
    let h = cfg.h();

    check((1..=3).contains(&h), Clause::FactorCount, || format!("h = {h}"))?;
    check(p > 2 && is_prime(p), Clause::OddPrime, || format!("p = {p}"))?;
    check(a >= 1, Clause::APositive, String::new)?;
    check(c <= a, Clause::CRange, || format!("c = {c}, a = {a}"))?;
    check(cp <= a, Clause::CPrimeRange, || format!("c′ = {cp}, a = {a}"))?;
    for (j, f) in cfg.factors.iter().enumerate() {
        check(f.m_j >= 1, Clause::MPositive, || format!("m_{} = 0", j + 1))?;
        check(f.m_j % p != 0, Clause::MCoprime, || format!("m_{} = {}", j + 1, f.m_j))?;
    }
    check(cp <= c, Clause::CPrimeAtMostC, || format!("c′ = {cp}, c = {c}"))?;

    let f = &cfg.factors;
    let (a1, a2) = (cfg.a1(), cfg.a2());
    match h {
        1 => {
            check(a1 > 0, Clause::H1Noncentral, String::new)?;
            check(f[0].b_j == a, Clause::H1B1EqualsA, || format!("b₁ = {}, a = {a}", f[0].b_j))?;
        }
        2 => {
            check(f[0].b_j == 0 && f[1].b_j == 0, Clause::H2BZero, || {
                format!("b₁ = {}, b₂ = {}", f[0].b_j, f[1].b_j)
            })?;
            check(c >= a2, Clause::H2CAtLeastA2, || format!("c = {c}, a₂ = {a2}"))?;
            if a1 > a2 {
                check(cp == 0 && c == a2, Clause::H2Unequal, || format!("c′ = {cp}, c = {c}, a₂ = {a2}"))?;
            } else if a1 > 0 {
                check(c >= a1 && cp == c - a1 && cp < a, Clause::H2EqualPositive, || {
                    format!("c′ = {cp}, c = {c}, a₁ = {a1}, a = {a}")
                })?;
            } else {
                // ⟨t⟩ has order p^a and contains O_p(Z), so c = a would make t central
                check(c < a, Clause::H2Noncentral, || format!("c = {c}, a = {a}"))?;
            }
            if a1 == 0 && cp < c {
                check(f[0].m_j != f[1].m_j, Clause::H2DistinctDims, || format!("n₁ = n₂ = {}", f[0].m_j))?;
            }
        }
        _ => {
            let zero = f[0].b_j == 0 && f[1].a_j == 0 && f[1].b_j == 0 && f[2].a_j == 0 && f[2].b_j == 0;
            check(zero, Clause::H3Zero, String::new)?;
            check(cp == 0, Clause::H3CPrimeZero, || format!("c′ = {cp}"))?;
            if a1 > 0 {
                check(f[1].m_j != f[2].m_j, Clause::H3DistinctDims, || format!("n₂ = n₃ = {}", f[1].m_j))?;
            }
            let n = cfg.n();
            check(vp_big(p, &n).unwrap() >= a, Clause::H3Divides, || format!("n = {n}"))?;
        }
    }

    let vn = vp_big(p, &cfg.n()).unwrap();
    check(c == a.min(vn), Clause::CValuation, || format!("c = {c}, v_p(n) = {vn}"))?;
    check(a + a1 > cp, Clause::LPositive, || format!("a = {a}, a₁ = {a1}, c′ = {cp}"))?;

    if let Some(q) = cfg.q.clone() {
        let ok = prime_power(&q).is_some_and(|(r, _)| r != p);
        check(ok, Clause::QPrimePower, || format!("q = {q}"))?;
        let qe = q_minus_eps(&q, cfg.epsilon).unwrap();
        let vq = vp_big(p, &qe).unwrap_or(0);
        check(vq == a, Clause::QValuation, || format!("v_p(q − ε) = {vq}, a = {a}"))?;
        let (_, odd) = mprime_summary(p, &q, cfg.epsilon.delta(), a1);
        if let Some(given) = cfg.m1_prime_odd {
            check(given == odd, Clause::M1PrimeParity, || format!("supplied odd = {given}, computed odd = {odd}"))?;
        }
        cfg.m1_prime_odd = Some(odd);
    }

    let derived = derived(&cfg);
    Ok(Validated { config: cfg, derived })
}

/// Orders of `t`, `D`, `D̃` and `D̄` for a configuration that passed
/// [`validate`].
pub fn derived(cfg: &BlockConfig) -> DerivedQuantities {
    let (a, c, cp) = (cfg.a, cfg.c, cfg.c_prime);
    let (a1, a2) = (cfg.a1(), cfg.a2());
    let mut dexp = match cfg.h() {
        1 => vec![a + a1],
        2 if a1 == 0 && a2 == 0 => vec![a],
        2 => vec![a + a1, c - cp],
        _ => vec![a + a1, a],
    };
    dexp.retain(|&e| e > 0);
    let dsum: u32 = dexp.iter().sum();
    DerivedQuantities {
        p: cfg.p,
        t_exp: a + a1,
        defect_factor_exps: dexp,
        dtilde_exp: dsum + a,
        l: a + a1 - cp,
    }
}

/// `v_p(n)` for a plain integer dimension.
pub fn vp_dim(p: u64, n: u64) -> Option<u32> {
    vp_u64(p, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(eps: Sign, p: u64, a: u32, c: u32, cp: u32, f: &[(u32, u64, u32)]) -> BlockConfig {
        BlockConfig {
            epsilon: eps,
            p,
            a,
            c,
            c_prime: cp,
            factors: f.iter().map(|&(x, m, b)| FactorData::new(x, m, b)).collect(),
            q: None,
            m1_prime_odd: None,
        }
    }

    #[test]
    fn mprime_examples() {
        assert_eq!(mprime(3, &BigUint::from(8u32), 2, 1), (1, BigUint::from(1387u32)));
        assert_eq!(mprime(3, &BigUint::from(8u32), 2, 0), (0, BigUint::from(1u32)));
        let (v, m) = mprime(5, &BigUint::from(4u32), 2, 1);
        assert_eq!(v, 1);
        assert!(!(m % 5u32).is_zero());
    }

    #[test]
    fn mprime_summary_matches_exact() {
        for p in [3u64, 5, 7] {
            for q in 2u64..60 {
                for delta in 1..=2 {
                    for a_j in 0..=2 {
                        let q = BigUint::from(q);
                        let (v, m) = mprime(p, &q, delta, a_j);
                        assert_eq!(mprime_summary(p, &q, delta, a_j), (v, m.is_odd()), "p={p} q={q} δ={delta}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_abelian(&[9]), Ok(1));
        assert_eq!(rank_abelian(&[9, 3]), Ok(2));
        assert_eq!(rank_abelian(&[27, 9, 3]), Ok(3));
        assert_eq!(rank_abelian(&[9, 1]), Ok(1));
        assert_eq!(rank_abelian(&[9, 5]), Err(ParamError::MixedPrimes(3, 5)));
        assert_eq!(rank_abelian(&[6]), Err(ParamError::NotPrimePower(6)));
    }

    #[test]
    fn validate_unequal_degrees() {
        let v = validate(&cfg(Sign::Minus, 3, 1, 1, 0, &[(2, 1, 0), (1, 1, 0)])).unwrap();
        assert_eq!(v.derived.defect_factor_exps, vec![3, 1]);
        assert_eq!(v.derived.order_dtilde(), BigUint::from(243u32));
        assert_eq!(v.derived.l, 3);
    }

    #[test]
    fn validate_nonzero_b_rejected() {
        let e = validate(&cfg(Sign::Minus, 3, 2, 2, 1, &[(1, 1, 1), (1, 1, 0)])).unwrap_err();
        assert_eq!(e.clause, Clause::H2BZero);
        assert!(e.to_string().starts_with("b₁ = b₂ = 0 violated"));
    }

    #[test]
    fn validate_three_factors() {
        // n = 3 + 23 + 1 = 27
        let v = validate(&cfg(Sign::Minus, 3, 2, 2, 0, &[(0, 23, 0), (1, 1, 0), (0, 1, 0)])).unwrap();
        assert_eq!(v.config.factors[0], FactorData::new(1, 1, 0));
        assert_eq!(v.derived.l, 3);
        assert_eq!(v.derived.defect_factor_exps, vec![3, 2]);
        assert_eq!(v.derived.dtilde_exp, 3 * 2 + 1);
        // n = 3 + 17 + 1 = 21 is not divisible by 9
        let e = validate(&cfg(Sign::Minus, 3, 2, 2, 0, &[(1, 1, 0), (0, 17, 0), (0, 1, 0)])).unwrap_err();
        assert_eq!(e.clause, Clause::H3Divides);
    }

    #[test]
    fn derived_examples() {
        let v = validate(&cfg(Sign::Minus, 3, 1, 1, 1, &[(2, 1, 1)])).unwrap();
        assert_eq!(v.derived.order_t(), BigUint::from(27u32));
        assert_eq!(v.derived.defect_factors(), vec![BigUint::from(27u32)]);
        assert_eq!(v.derived.l, 2);

        let v = validate(&cfg(Sign::Minus, 3, 2, 2, 0, &[(1, 1, 0), (0, 5, 0), (0, 1, 0)])).unwrap();
        assert_eq!(v.derived.l, 3);
        assert_eq!(v.derived.order_t(), BigUint::from(27u32));

        // n = 2 + 7 = 9, c = 2
        let v = validate(&cfg(Sign::Minus, 3, 3, 2, 1, &[(0, 2, 0), (0, 7, 0)])).unwrap();
        assert_eq!(v.derived.defect_factor_exps, vec![3]);
        assert_eq!(v.derived.t_exp, 3);
        assert_eq!(v.derived.l, 2);
    }

    #[test]
    fn validate_clause_diagnostics_are_distinct() {
        let cases = [
            (cfg(Sign::Minus, 3, 1, 1, 0, &[(0, 1, 1)]), Clause::H1Noncentral),
            (cfg(Sign::Minus, 3, 2, 2, 0, &[(1, 1, 1)]), Clause::H1B1EqualsA),
            (cfg(Sign::Minus, 3, 1, 1, 1, &[(2, 1, 0), (1, 1, 0)]), Clause::H2Unequal),
            (cfg(Sign::Minus, 3, 2, 1, 1, &[(1, 1, 0), (1, 2, 0)]), Clause::H2EqualPositive),
            (cfg(Sign::Minus, 3, 2, 0, 0, &[(1, 1, 0), (1, 1, 0)]), Clause::H2CAtLeastA2),
            (cfg(Sign::Minus, 3, 2, 1, 0, &[(0, 1, 0), (0, 1, 0)]), Clause::H2DistinctDims),
            (cfg(Sign::Minus, 3, 2, 2, 1, &[(1, 1, 0), (0, 5, 0), (0, 1, 0)]), Clause::H3CPrimeZero),
            (cfg(Sign::Minus, 3, 1, 1, 0, &[(1, 1, 0), (0, 1, 0), (0, 1, 0)]), Clause::H3DistinctDims),
            (cfg(Sign::Minus, 3, 1, 1, 0, &[(1, 1, 0), (0, 2, 1), (0, 1, 0)]), Clause::H3Zero),
            (cfg(Sign::Minus, 3, 2, 0, 0, &[(0, 1, 0), (0, 2, 0)]), Clause::CValuation),
            (cfg(Sign::Minus, 3, 1, 1, 1, &[(0, 2, 0), (0, 1, 0)]), Clause::H2Noncentral),
            (cfg(Sign::Minus, 9, 1, 1, 0, &[(1, 1, 1)]), Clause::OddPrime),
            (cfg(Sign::Minus, 3, 1, 2, 0, &[(1, 1, 1)]), Clause::CRange),
            (cfg(Sign::Minus, 3, 1, 1, 2, &[(1, 1, 1)]), Clause::CPrimeRange),
            (cfg(Sign::Minus, 3, 1, 1, 0, &[(1, 3, 1)]), Clause::MCoprime),
            (cfg(Sign::Minus, 3, 1, 1, 0, &[]), Clause::FactorCount),
        ];
        let mut texts = std::collections::HashSet::new();
        for (c, want) in cases {
            let e = validate(&c).unwrap_err();
            assert_eq!(e.clause, want, "{c:?}");
            texts.insert(want.text());
        }
        assert_eq!(texts.len(), 16);
    }

    #[test]
    fn concrete_q_checks() {
        let mut c = cfg(Sign::Minus, 3, 2, 1, 0, &[(0, 5, 0), (0, 1, 0)]);
        c.q = Some(BigUint::from(8u32));
        let v = validate(&c).unwrap();
        assert_eq!(v.config.m1_prime_odd, Some(true));
        c.q = Some(BigUint::from(16u32));
        assert_eq!(validate(&c).unwrap_err().clause, Clause::QValuation);
        c.q = Some(BigUint::from(12u32));
        assert_eq!(validate(&c).unwrap_err().clause, Clause::QPrimePower);
        c.q = Some(BigUint::from(8u32));
        c.m1_prime_odd = Some(false);
        assert_eq!(validate(&c).unwrap_err().clause, Clause::M1PrimeParity);
    }

    #[test]
    fn json_schema() {
        let c = cfg(Sign::Minus, 3, 2, 1, 0, &[(0, 5, 0), (0, 1, 0)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"epsilon":-1,"p":3,"a":2,"c":1,"c_prime":0,"factors":[{"a_j":0,"m_j":5,"b_j":0},{"a_j":0,"m_j":1,"b_j":0}]}"#
        );
        let back: BlockConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let big = r#"{"epsilon":-1,"p":3,"a":2,"c":1,"c_prime":0,"factors":[],"q":"2417851639229258349412352"}"#;
        let b: BlockConfig = serde_json::from_str(big).unwrap();
        assert_eq!(b.q, Some(BigUint::from(2u32).pow(81)));
        assert!(serde_json::from_str::<BlockConfig>(r#"{"epsilon":-1,"p":3,"a":2,"c":1,"c_prime":0,"factors":[],"x":1}"#).is_err());
        assert!(serde_json::from_str::<BlockConfig>(r#"{"epsilon":2,"p":3,"a":2,"c":1,"c_prime":0,"factors":[]}"#).is_err());
    }
}
