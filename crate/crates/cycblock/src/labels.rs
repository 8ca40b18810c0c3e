//! Dade-group labels: subsets `A ⊆ {1, …, l−1}` of a cyclic group of order
//! `p^l`, their characteristic vectors and the partial-sum sign map.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("l must be at least 1")]
    ZeroLength,
    #[error("element {x} outside [1, {max}]")]
    OutOfRange { x: usize, max: usize },
    #[error("elements must be strictly increasing")]
    NotIncreasing,
    #[error("labels have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("sign entries must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("cannot parse label set {0:?}")]
    Parse(String),
}

/// Parity of the odd prime modulo 4. Only this residue matters for which
/// labels can occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Residue {
    One,
    Three,
}

impl Residue {
    pub fn of_prime(p: u64) -> Residue {
        if p % 4 == 1 {
            Residue::One
        } else {
            Residue::Three
        }
    }

    pub fn from_int(r: u64) -> Option<Residue> {
        match r {
            1 => Some(Residue::One),
            3 => Some(Residue::Three),
            _ => None,
        }
    }

    pub fn as_int(self) -> u64 {
        match self {
            Residue::One => 1,
            Residue::Three => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawLabel", into = "RawLabel")]
pub struct Label {
    l: usize,
    elems: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLabel {
    l: usize,
    #[serde(rename = "A")]
    a: Vec<usize>,
}

impl TryFrom<RawLabel> for Label {
    type Error = LabelError;
    fn try_from(raw: RawLabel) -> Result<Self, Self::Error> {
        Label::new(raw.l, raw.a)
    }
}

impl From<Label> for RawLabel {
    fn from(lab: Label) -> Self {
        RawLabel { l: lab.l, a: lab.elems }
    }
}

impl Label {
    pub fn new(l: usize, elems: Vec<usize>) -> Result<Label, LabelError> {
        if l == 0 {
            return Err(LabelError::ZeroLength);
        }
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(LabelError::NotIncreasing);
            }
        }
        for &x in &elems {
            if x == 0 || x >= l {
                return Err(LabelError::OutOfRange { x, max: l - 1 });
            }
        }
        Ok(Label { l, elems })
    }

    /// Builds a label from an unordered collection, dropping duplicates.
    pub fn from_set<I: IntoIterator<Item = usize>>(l: usize, it: I) -> Result<Label, LabelError> {
        let set: BTreeSet<usize> = it.into_iter().collect();
        Label::new(l, set.into_iter().collect())
    }

    pub fn empty(l: usize) -> Label {
        assert!(l >= 1, "l must be at least 1");
        Label { l, elems: Vec::new() }
    }

    /// `[i, j]`; empty when `i > j`.
    pub fn interval(l: usize, i: usize, j: usize) -> Result<Label, LabelError> {
        if i > j {
            return Label::new(l, Vec::new());
        }
        Label::new(l, (i..=j).collect())
    }

    /// Parses the command-line set syntax `{1,2}` (braces optional, `{}` or
    /// `∅` for the empty set).
    pub fn parse_set(s: &str, l: usize) -> Result<Label, LabelError> {
        let t = s.trim();
        if t == "∅" {
            return Label::new(l, Vec::new());
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .unwrap_or(t)
            .trim();
        let mut out = Vec::new();
        if !inner.is_empty() {
            for part in inner.split(',') {
                let x = part
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| LabelError::Parse(s.to_string()))?;
                out.push(x);
            }
        }
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        if out.len() != before {
            return Err(LabelError::Parse(s.to_string()));
        }
        Label::new(l, out)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.elems.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// `(α₀, …, α_{l−1})` over F₂.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    bits: Vec<bool>,
}

impl BitVec {
    pub fn new(bits: Vec<bool>) -> BitVec {
        assert!(!bits.is_empty(), "bit vectors have length l >= 1");
        BitVec { bits }
    }

    pub fn from_u8s(bits: &[u8]) -> BitVec {
        BitVec::new(bits.iter().map(|&b| b & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len(), other.len());
        BitVec::new(self.bits.iter().zip(&other.bits).map(|(x, y)| x ^ y).collect())
    }
}

/// Entries `s_1, …, s_l` in `{±1}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct SignSeq {
    signs: Vec<i8>,
}

impl TryFrom<Vec<i64>> for SignSeq {
    type Error = LabelError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        if v.is_empty() {
            return Err(LabelError::ZeroLength);
        }
        let mut signs = Vec::with_capacity(v.len());
        for x in v {
            match x {
                1 => signs.push(1),
                -1 => signs.push(-1),
                other => return Err(LabelError::BadSign(other)),
            }
        }
        Ok(SignSeq { signs })
    }
}

impl From<SignSeq> for Vec<i64> {
    fn from(s: SignSeq) -> Self {
        s.signs.into_iter().map(i64::from).collect()
    }
}

impl SignSeq {
    pub fn new(signs: Vec<i8>) -> Result<SignSeq, LabelError> {
        SignSeq::try_from(signs.into_iter().map(i64::from).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SignSeq) -> SignSeq {
        assert_eq!(self.len(), other.len());
        SignSeq {
            signs: self.signs.iter().zip(&other.signs).map(|(x, y)| x * y).collect(),
        }
    }
}

/// `s_i = (−1)^(α₀ + … + α_{i−1})` for `1 ≤ i ≤ l`.
pub fn omega(bits: &BitVec) -> SignSeq {
    let mut parity = false;
    let mut signs = Vec::with_capacity(bits.len());
    for &b in bits.bits() {
        parity ^= b;
        signs.push(if parity { -1 } else { 1 });
    }
    SignSeq { signs }
}

/// Inverse of [`omega`]: `α₀ = [s₁ = −1]`, `α_i = [s_i ≠ s_{i+1}]`.
pub fn omega_inv(signs: &SignSeq) -> BitVec {
    let s = signs.signs();
    let mut bits = Vec::with_capacity(s.len());
    bits.push(s[0] == -1);
    for w in s.windows(2) {
        bits.push(w[0] != w[1]);
    }
    BitVec::new(bits)
}

/// Characteristic vector of `A` with `α₀ = 0`.
pub fn label_to_bits(a: &Label) -> BitVec {
    let mut bits = vec![false; a.l()];
    for &x in a.elements() {
        bits[x] = true;
    }
    BitVec::new(bits)
}

/// Inverse of [`label_to_bits`]; `None` if `α₀ = 1`.
pub fn bits_to_label(bits: &BitVec) -> Option<Label> {
    if bits.bits()[0] {
        return None;
    }
    let elems = (1..bits.len()).filter(|&i| bits.bits()[i]).collect();
    Some(Label { l: bits.len(), elems })
}

pub fn label_to_signs(a: &Label) -> SignSeq {
    omega(&label_to_bits(a))
}

pub fn sym_diff(a: &Label, b: &Label) -> Result<Label, LabelError> {
    if a.l() != b.l() {
        return Err(LabelError::LengthMismatch(a.l(), b.l()));
    }
    let sa: BTreeSet<usize> = a.elements().iter().copied().collect();
    let sb: BTreeSet<usize> = b.elements().iter().copied().collect();
    Ok(Label {
        l: a.l(),
        elems: sa.symmetric_difference(&sb).copied().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Empty,
    Interval(usize, usize),
    /// `[a, l−1] \ {l−a}` with `1 ≤ a ≤ l/2`.
    TypeII(usize),
    /// `{l−a} ∪ [a, l−1]` with `l/2 < a ≤ l−1`.
    TypeIII(usize),
    Other,
}

fn type_ii_set(l: usize, a: usize) -> BTreeSet<usize> {
    (a..l).filter(|&x| x != l - a).collect()
}

fn type_iii_set(l: usize, a: usize) -> BTreeSet<usize> {
    let mut s: BTreeSet<usize> = (a..l).collect();
    s.insert(l - a);
    s
}

pub fn shape_of(a: &Label) -> Shape {
    let e = a.elements();
    if e.is_empty() {
        return Shape::Empty;
    }
    let (lo, hi) = (e[0], e[e.len() - 1]);
    if hi - lo + 1 == e.len() {
        return Shape::Interval(lo, hi);
    }
    let l = a.l();
    let set: BTreeSet<usize> = e.iter().copied().collect();
    for k in 1..=l / 2 {
        if type_ii_set(l, k) == set {
            return Shape::TypeII(k);
        }
    }
    for k in (l / 2 + 1)..l {
        if type_iii_set(l, k) == set {
            return Shape::TypeIII(k);
        }
    }
    Shape::Other
}

/// Membership test for the labels that can occur for the given residue.
pub fn is_admissible(a: &Label, residue: Residue) -> bool {
    match residue {
        Residue::One => a.len() <= 1,
        Residue::Three => shape_of(a) != Shape::Other,
    }
}

pub fn enumerate_admissible(l: usize, residue: Residue) -> Vec<Label> {
    assert!(l >= 1, "l must be at least 1");
    let mut out: BTreeSet<Label> = BTreeSet::new();
    out.insert(Label::empty(l));
    match residue {
        Residue::One => {
            for x in 1..l {
                out.insert(Label { l, elems: vec![x] });
            }
        }
        Residue::Three => {
            for i in 1..l {
                for j in i..l {
                    out.insert(Label { l, elems: (i..=j).collect() });
                }
            }
            for k in 1..=l / 2 {
                out.insert(Label { l, elems: type_ii_set(l, k).into_iter().collect() });
            }
            for k in (l / 2 + 1)..l {
                out.insert(Label { l, elems: type_iii_set(l, k).into_iter().collect() });
            }
        }
    }
    out.into_iter().collect()
}

pub fn count_admissible(l: usize, residue: Residue) -> usize {
    enumerate_admissible(l, residue).len()
}
