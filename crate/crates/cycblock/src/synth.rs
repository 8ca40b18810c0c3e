//! Witnesses for admissible labels: a prime power `q`, factor data for a
//! unitary group and the order of the central quotient, chosen so that
//! [`classify`] returns the requested label.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, pow_u64, prime_power, vp_big};
use crate::classify::{classify, ClassifyError};
use crate::ff::FieldCtx;
use crate::labels::{is_admissible, shape_of, Label, Residue, Shape};
use crate::params::{mprime_summary, q_minus_eps, validate, BlockConfig, FactorData, Sign};

pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

/// Which existence construction produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    /// One factor, `n = p^{a+a₁}`.
    #[serde(rename = "P4.2")]
    CyclicTorus,
    /// Two factors with `m₂ = 1`.
    #[serde(rename = "P4.3")]
    TwoFactor,
    /// Two central factors, `n ∈ {2, p^c, 2p^c}`.
    #[serde(rename = "P4.5")]
    CentralSplit,
    /// Three factors `p^{a₁}`, `n₂`, `1`.
    #[serde(rename = "P4.6")]
    ThreeFactor,
}

impl Construction {
    pub fn tag(self) -> &'static str {
        match self {
            Construction::CyclicTorus => "P4.2",
            Construction::TwoFactor => "P4.3",
            Construction::CentralSplit => "P4.5",
            Construction::ThreeFactor => "P4.6",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("p = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("a must be positive")]
    ZeroA,
    #[error("no prime r ≤ {bound} with v_{p}(r - ε) = 1 (a = {a}, ε = {eps})")]
    SearchExhausted { p: u64, a: u32, eps: Sign, bound: u64 },
    #[error("p = {p} has residue {actual} mod 4, not {requested}")]
    ResidueMismatch { p: u64, actual: u64, requested: u64 },
    #[error("{label} (l = {l}) is not admissible for residue {residue}: {condition}")]
    NotAdmissible { label: Label, l: usize, residue: u64, condition: &'static str },
    #[error("no construction in the catalogue realizes {label} at l = {l}")]
    NoConstruction { label: Label, l: usize },
    #[error("parameters outside the construction's range: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("round trip failed: expected {expected}, classified as {got}")]
    RoundTrip { expected: Label, got: Label },
}

/// Smallest prime `r ≤ bound`, `r ≠ p`, with `v_p(r − ε) = 1`, and
/// `q = r^{p^{a−1}}`. With `require_gt2`, `q = 2` is skipped.
pub fn find_q(p: u64, a: u32, eps: Sign, bound: u64, require_gt2: bool) -> Result<(u64, BigUint), SynthError> {
    if p < 3 || !is_prime(p) {
        return Err(SynthError::BadPrime(p));
    }
    if a == 0 {
        return Err(SynthError::ZeroA);
    }
    let e = pow_u64(p, a - 1) as u32;
    for r in 2..=bound {
        if r == p || !is_prime(r) {
            continue;
        }
        let re = (r as i128 - eps.as_i64() as i128) as u64;
        if crate::arith::vp_u64(p, re) != Some(1) {
            continue;
        }
        let q = BigUint::from(r).pow(e);
        if require_gt2 && q == BigUint::from(2u32) {
            continue;
        }
        let v = vp_big(p, &q_minus_eps(&q, eps).expect("q ≥ 2")).unwrap_or(0);
        assert_eq!(v, a, "lifting the exponent failed for r = {r}");
        return Ok((r, q));
    }
    Err(SynthError::SearchExhausted { p, a, eps, bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub r: u64,
    #[serde(with = "crate::params::big")]
    pub q: BigUint,
    pub epsilon: Sign,
    #[serde(with = "crate::params::big")]
    pub n: BigUint,
    /// `|Y|`
    #[serde(with = "crate::params::big")]
    pub y_order: BigUint,
    pub config: BlockConfig,
    pub target: Label,
    pub construction: Construction,
}

impl Witness {
    pub fn construction_tag(&self) -> &'static str {
        self.construction.tag()
    }
}

fn q_for(p: u64, a: u32, bound: u64) -> Result<(u64, BigUint), SynthError> {
    // q = 2 is excluded when p^a = 3
    find_q(p, a, Sign::Minus, bound, p == 3 && a == 1)
}

fn check_prime(p: u64) -> Result<(), SynthError> {
    if p < 3 || !is_prime(p) {
        return Err(SynthError::BadPrime(p));
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> SynthError {
    SynthError::BadParameters(msg.into())
}

fn finish(
    p: u64,
    a: u32,
    c: u32,
    c_prime: u32,
    factors: Vec<FactorData>,
    y_exp: u32,
    construction: Construction,
    bound: u64,
) -> Result<Witness, SynthError> {
    let (r, q) = q_for(p, a, bound)?;
    let cfg = BlockConfig {
        epsilon: Sign::Minus,
        p,
        a,
        c,
        c_prime,
        factors,
        q: Some(q.clone()),
        m1_prime_odd: None,
    };
    let v = validate(&cfg).map_err(ClassifyError::from)?;
    let cb = crate::classify::classify_validated(&v)?;
    Ok(Witness {
        r,
        q,
        epsilon: Sign::Minus,
        n: v.config.n(),
        y_order: BigUint::from(p).pow(y_exp),
        config: v.config,
        target: cb.label,
        construction,
    })
}

/// One factor of degree `p^{a₁}` with `n = p^{a+a₁}` and `|Y| = p^{c′}`.
pub fn cyclic_torus(p: u64, a: u32, a1: u32, c_prime: u32, bound: u64) -> Result<Witness, SynthError> {
    check_prime(p)?;
    if a == 0 || a1 == 0 || c_prime > a {
        return Err(bad(format!("need a, a₁ > 0 and c′ ≤ a, got a = {a}, a₁ = {a1}, c′ = {c_prime}")));
    }
    let f = vec![FactorData::new(a1, 1, a)];
    finish(p, a, a, c_prime, f, c_prime, Construction::CyclicTorus, bound)
}

/// Two factors with `a₂ ≤ a, a₁`; `|Y| = p^c`. For `a₁ > a₂` the value of
/// `c` is forced to `a₂`. For `a₁ = a₂ = c` and `p = 3` the multiplicity
/// `m₁ = 4` is used, giving `n = 5·3^{a₂}`.
pub fn two_factor(p: u64, a: u32, a1: u32, a2: u32, c: u32, bound: u64) -> Result<Witness, SynthError> {
    check_prime(p)?;
    if a == 0 || a1 == 0 || a2 > a || a2 > a1 {
        return Err(bad(format!("need a, a₁ > 0 and a₂ ≤ a, a₁, got a = {a}, a₁ = {a1}, a₂ = {a2}")));
    }
    let (m1, c, c_prime) = if a1 > a2 {
        (1, a2, 0)
    } else {
        if c < a1 || c > a {
            return Err(bad(format!("need a₁ ≤ c ≤ a, got a₁ = {a1}, c = {c}, a = {a}")));
        }
        let m1 = if c > a1 {
            pow_u64(p, c - a1) - 1
        } else if p != 3 {
            2
        } else {
            4
        };
        (m1, c, c - a1)
    };
    let f = vec![FactorData::new(a1, m1, 0), FactorData::new(a2, 1, 0)];
    finish(p, a, c, c_prime, f, c, Construction::TwoFactor, bound)
}

/// Two central factors `n − 1` and `1`, with `n = 2` for `c = 0` and
/// otherwise `n = 2p^c` (`double`) or `n = p^c`; `|Y| = p^{c′}`.
pub fn central_split(p: u64, a: u32, c: u32, c_prime: u32, double: bool, bound: u64) -> Result<Witness, SynthError> {
    check_prime(p)?;
    if c_prime > c || c >= a {
        return Err(bad(format!("need c′ ≤ c < a, got c′ = {c_prime}, c = {c}, a = {a}")));
    }
    let n = if c == 0 {
        2
    } else if double {
        2 * pow_u64(p, c)
    } else {
        pow_u64(p, c)
    };
    let f = vec![FactorData::new(0, n - 1, 0), FactorData::new(0, 1, 0)];
    finish(p, a, c, c_prime, f, c_prime, Construction::CentralSplit, bound)
}

/// Three factors `p^{a₁}`, `n₂`, `1` with `a ≠ a₁`; `|Y| = p^a`.
pub fn three_factor(p: u64, a: u32, a1: u32, bound: u64) -> Result<Witness, SynthError> {
    check_prime(p)?;
    if a == 0 || a1 == 0 || a == a1 {
        return Err(bad(format!("need positive a ≠ a₁, got a = {a}, a₁ = {a1}")));
    }
    let n2 = if a1 > a { 2 * pow_u64(p, a) - 1 } else { pow_u64(p, a) - pow_u64(p, a1) - 1 };
    let f = vec![FactorData::new(a1, 1, 0), FactorData::new(0, n2, 0), FactorData::new(0, 1, 0)];
    finish(p, a, a, 0, f, a, Construction::ThreeFactor, bound)
}

/// A unitary witness for an admissible label, checked by classifying it.
pub fn realize(p: u64, target: &Label, residue: Residue, bound: u64) -> Result<Witness, SynthError> {
    check_prime(p)?;
    let actual = Residue::of_prime(p);
    if actual != residue {
        return Err(SynthError::ResidueMismatch { p, actual: actual.as_int(), requested: residue.as_int() });
    }
    let l = target.l();
    if !is_admissible(target, residue) {
        let condition = match residue {
            Residue::One => "|A| ≤ 1",
            Residue::Three => "A must be empty, an interval, or of type II or III",
        };
        return Err(SynthError::NotAdmissible { label: target.clone(), l, residue: residue.as_int(), condition });
    }
    let l32 = l as u32;
    let w = match shape_of(target) {
        Shape::Empty => match residue {
            Residue::One => cyclic_torus(p, l32, 1, 1, bound)?,
            Residue::Three if l == 1 => cyclic_torus(p, 1, 1, 1, bound)?,
            Residue::Three => central_split(p, l32, 0, 0, true, bound)?,
        },
        Shape::Interval(i, j) if i == j => central_split(p, l32, i as u32, 0, true, bound)?,
        Shape::Interval(i, j) if j == l - 1 => cyclic_torus(p, i as u32, (l - i) as u32, 0, bound)?,
        Shape::Interval(i, j) if l - 1 - j <= i => {
            let a2 = (l - 1 - j) as u32;
            two_factor(p, i as u32, (l - i) as u32, a2, a2, bound)?
        }
        Shape::Interval(..) => return Err(SynthError::NoConstruction { label: target.clone(), l }),
        Shape::TypeII(k) | Shape::TypeIII(k) => three_factor(p, k as u32, (l - k) as u32, bound)?,
        Shape::Other => unreachable!("admissible labels have a recognized shape"),
    };
    if &w.target != target {
        return Err(SynthError::RoundTrip { expected: target.clone(), got: w.target });
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub checks: Vec<Check>,
}

impl WitnessReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Largest field `F_{Q^{p^{a_j}}}` built explicitly to count conjugates.
const FIELD_LIMIT: u64 = 1 << 20;

/// Multiplicative order of `x` modulo `m`.
fn mult_order(x: &BigUint, m: &BigUint) -> Option<u64> {
    // reduce first: a binary gcd on a huge x is quadratic
    let x = x % m;
    if !x.gcd(m).is_one() {
        return None;
    }
    let mut acc = x.clone();
    let mut k = 1u64;
    while !acc.is_one() && !(m.is_one()) {
        acc = (&acc * &x) % m;
        k += 1;
        if k > 1 << 24 {
            return None;
        }
    }
    Some(k)
}

/// Re-derives everything a witness claims and reports each check.
pub fn verify_witness(w: &Witness) -> WitnessReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| checks.push(Check { name: name.into(), pass, detail });
    let cfg = &w.config;
    let p = cfg.p;

    let pp = prime_power(&w.q);
    let q_ok = pp.is_some_and(|(r, _)| r == w.r && r != p);
    push("q-prime-power", q_ok, format!("q = {}, r = {}", w.q, w.r));
    let val = q_minus_eps(&w.q, w.epsilon).and_then(|x| vp_big(p, &x));
    push(
        "q-valuation",
        val == Some(cfg.a),
        format!("v_{p}(q - ε) = {}, a = {}", val.map_or("undefined".into(), |v| v.to_string()), cfg.a),
    );
    push("config-q", cfg.q.as_ref() == Some(&w.q), format!("config q = {:?}", cfg.q.as_ref().map(|x| x.to_string())));
    push("epsilon", cfg.epsilon == w.epsilon, format!("witness ε = {}, config ε = {}", w.epsilon, cfg.epsilon));
    let n = cfg.n();
    push("dimension", n == w.n, format!("Σ n_j = {n}, n = {}", w.n));
    let y_ok = vp_big(p, &w.y_order).is_some_and(|v| BigUint::from(p).pow(v) == w.y_order);
    push("y-order", y_ok, format!("|Y| = {}", w.y_order));

    match validate(cfg) {
        Ok(_) => push("validate", true, String::new()),
        Err(e) => push("validate", false, e.to_string()),
    }
    match classify(cfg) {
        Ok(cb) => push("round-trip", cb.label == w.target, format!("classified as {} at l = {}", cb.label, cb.label.l())),
        Err(e) => push("round-trip", false, e.to_string()),
    }

    let delta = w.epsilon.delta();
    if w.q > BigUint::one() {
        for (j, f) in cfg.factors.iter().enumerate() {
            let (v, _) = mprime_summary(p, &w.q, delta, f.a_j);
            push(&format!("mprime-valuation-{}", j + 1), v == f.a_j, format!("v_p = {v}, a_j = {}", f.a_j));
            let deg = BigUint::from(p).pow(f.a_j);
            let ord = BigUint::from(p).pow(cfg.a + f.a_j);
            let big_q = w.q.pow(delta);
            let got = mult_order(&big_q, &ord);
            push(
                &format!("minpoly-degree-{}", j + 1),
                got.map(BigUint::from) == Some(deg.clone()),
                format!("degree of an element of order {ord} over F_(q^δ) is {got:?}, expected {deg}"),
            );
            if let Some(check) = field_degree_check(w, f.a_j) {
                push(&format!("field-conjugates-{}", j + 1), check.0, check.1);
            }
        }
    }
    WitnessReport { checks }
}

/// Builds `F_{q^{δ p^{a_j}}}` when small, takes an element of order
/// `p^{a+a_j}` and counts its conjugates over `F_{q^δ}`.
fn field_degree_check(w: &Witness, a_j: u32) -> Option<(bool, String)> {
    let cfg = &w.config;
    let p = cfg.p;
    let (r, k) = prime_power(&w.q)?;
    let ext = k * w.epsilon.delta() * pow_u64(p, a_j) as u32;
    let size = r.checked_pow(ext)?;
    if size > FIELD_LIMIT {
        return None;
    }
    let field = FieldCtx::new(r, ext).ok()?;
    let ord = pow_u64(p, cfg.a + a_j) as u128;
    let Some(xi) = field.element_of_order(ord) else {
        return Some((false, format!("no element of order {ord} in F_{size}")));
    };
    let base = w.q.pow(w.epsilon.delta()).to_u128()?;
    let mut y = field.pow(xi, base);
    let mut count = 1u64;
    while y != xi {
        y = field.pow(y, base);
        count += 1;
    }
    let want = pow_u64(p, a_j);
    Some((count == want, format!("{count} conjugates in F_{size}, expected {want}")))
}

/// Labels at length `≤ max_l` for the residue, each with its realization.
pub fn realize_all(p: u64, max_l: usize, bound: u64) -> Vec<(Label, Result<Witness, SynthError>)> {
    let residue = Residue::of_prime(p);
    (1..=max_l)
        .flat_map(|l| crate::labels::enumerate_admissible(l, residue))
        .map(|lab| {
            let w = realize(p, &lab, residue, bound);
            (lab, w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(l: usize, e: &[usize]) -> Label {
        Label::new(l, e.to_vec()).unwrap()
    }

    #[test]
    fn find_q_examples() {
        assert_eq!(find_q(3, 2, Sign::Minus, 1000, false).unwrap(), (2, BigUint::from(8u32)));
        assert_eq!(find_q(3, 1, Sign::Minus, 1000, true).unwrap(), (5, BigUint::from(5u32)));
        assert_eq!(find_q(3, 1, Sign::Minus, 1000, false).unwrap(), (2, BigUint::from(2u32)));
        assert_eq!(find_q(5, 1, Sign::Plus, 1000, false).unwrap(), (11, BigUint::from(11u32)));
        assert!(matches!(find_q(7, 1, Sign::Plus, 20, false), Err(SynthError::SearchExhausted { .. })));
        assert_eq!(find_q(9, 1, Sign::Plus, 20, false), Err(SynthError::BadPrime(9)));
    }

    #[test]
    fn singleton_witness() {
        let w = realize(3, &lab(2, &[1]), Residue::Three, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(w.construction_tag(), "P4.5");
        assert_eq!(w.q, BigUint::from(8u32));
        assert_eq!(w.n, BigUint::from(6u32));
        assert_eq!((w.config.a, w.config.c, w.config.c_prime), (2, 1, 0));
        let dims: Vec<u64> = w.config.factors.iter().map(|f| f.m_j).collect();
        assert_eq!(dims, vec![5, 1]);
        assert!(verify_witness(&w).all_pass());
    }

    #[test]
    fn empty_witness() {
        let w = realize(3, &lab(2, &[]), Residue::Three, DEFAULT_SEARCH_BOUND).unwrap();
        assert!(w.target.is_empty());
        assert!(verify_witness(&w).all_pass());
    }

    #[test]
    fn three_factor_union() {
        let w = three_factor(3, 2, 1, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(w.target, lab(3, &[1, 2]));
        assert_eq!(w.q, BigUint::from(8u32));
        assert_eq!(w.n, BigUint::from(9u32));
        assert_eq!(w.y_order, BigUint::from(9u32));
        let dims: Vec<u64> = w.config.factors.iter().map(|f| f.dim(3).to_u64().unwrap()).collect();
        assert_eq!(dims, vec![3, 5, 1]);
    }

    #[test]
    fn tampering_detected() {
        let w = realize(3, &lab(2, &[1]), Residue::Three, DEFAULT_SEARCH_BOUND).unwrap();
        let mut bad_c = w.clone();
        bad_c.config.c_prime = 2;
        let rep = verify_witness(&bad_c);
        assert!(rep.failed().iter().any(|c| c.name == "validate"));
        let mut bad_q = w.clone();
        bad_q.q = &w.q * w.r;
        let rep = verify_witness(&bad_q);
        assert!(rep.failed().iter().any(|c| c.name == "q-valuation"));
    }

    #[test]
    fn inadmissible_rejected() {
        assert!(matches!(
            realize(5, &lab(4, &[1, 2]), Residue::One, 1000),
            Err(SynthError::NotAdmissible { .. })
        ));
        assert!(matches!(
            realize(5, &lab(4, &[1]), Residue::Three, 1000),
            Err(SynthError::ResidueMismatch { .. })
        ));
    }

    #[test]
    fn equal_degree_two_factor_p3() {
        let w = two_factor(3, 2, 1, 1, 1, DEFAULT_SEARCH_BOUND).unwrap();
        assert_eq!(w.n, BigUint::from(15u32));
        assert!(verify_witness(&w).all_pass());
    }
}
