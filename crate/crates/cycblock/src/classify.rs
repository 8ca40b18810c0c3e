//! Maps a block configuration to its Dade-group label by the case analysis on
//! the number of irreducible factors of the minimal polynomial of `t`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::labels::{Label, Residue};
use crate::params::{validate, BlockConfig, Sign, Validated, ValidationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("underdetermined: the {0} is needed")]
    Underdetermined(&'static str),
    #[error("the intermediate subgroup is only defined for h ≥ 2")]
    SingleFactor,
    #[error("special table covers p = 3 with n ∈ {{3, 6, 9}} and p = 5 with n = 5, got p = {p}, n = {n}")]
    OutOfTable { p: u64, n: u64 },
    #[error("special table hypotheses fail: {0}")]
    TableHypothesis(&'static str),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Shape of the subgroup `H̃` of `G̃` that controls the computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    FullGroup,
    Product2(BigUint, BigUint),
    Product3(BigUint, BigUint, BigUint),
    /// `G̃₁ × G̃₂,₃` with the dimensions `n₁` and `n₂ + n₃`.
    Product1x23(BigUint, BigUint),
}

pub fn intermediate_structure(cfg: &BlockConfig) -> Result<Structure, ClassifyError> {
    let v = validate(cfg)?;
    let c = &v.config;
    let dims: Vec<BigUint> = c.factors.iter().map(|f| f.dim(c.p)).collect();
    match c.h() {
        1 => Err(ClassifyError::SingleFactor),
        2 => {
            if c.a1() == 0 && c.a2() == 0 && c.c_prime < c.c {
                Ok(Structure::FullGroup)
            } else {
                Ok(Structure::Product2(dims[0].clone(), dims[1].clone()))
            }
        }
        _ => {
            if c.a1() == 0 {
                Ok(Structure::Product3(dims[0].clone(), dims[1].clone(), dims[2].clone()))
            } else {
                Ok(Structure::Product1x23(dims[0].clone(), &dims[1] + &dims[2]))
            }
        }
    }
}

/// Which branch of the case analysis produced a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    OneLinear,
    OneResidueOne,
    OneM1PrimeEven,
    OneFullQuotientA1One,
    OnePartialQuotient,
    OneFullQuotient,
    TwoLengthOne,
    TwoLinear,
    TwoCentralSplitTrivial,
    TwoUnequalFirstOdd,
    TwoUnequalSecondOdd,
    TwoUnequalBothOdd,
    TwoEqualDimOdd,
    TwoCentralSplitBothOdd,
    TwoNoClause,
    ThreeA1Zero,
    ThreeLinear,
    ThreeFirstOddOtherEven,
    ThreeLargeA1Singleton,
    ThreeLargeA1Gap,
    ThreeSmallA1Singleton,
    ThreeSmallA1Union,
    ThreeNoClause,
}

impl Case {
    pub const ALL: [Case; 23] = [
        Case::OneLinear,
        Case::OneResidueOne,
        Case::OneM1PrimeEven,
        Case::OneFullQuotientA1One,
        Case::OnePartialQuotient,
        Case::OneFullQuotient,
        Case::TwoLengthOne,
        Case::TwoLinear,
        Case::TwoCentralSplitTrivial,
        Case::TwoUnequalFirstOdd,
        Case::TwoUnequalSecondOdd,
        Case::TwoUnequalBothOdd,
        Case::TwoEqualDimOdd,
        Case::TwoCentralSplitBothOdd,
        Case::TwoNoClause,
        Case::ThreeA1Zero,
        Case::ThreeLinear,
        Case::ThreeFirstOddOtherEven,
        Case::ThreeLargeA1Singleton,
        Case::ThreeLargeA1Gap,
        Case::ThreeSmallA1Singleton,
        Case::ThreeSmallA1Union,
        Case::ThreeNoClause,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Case::OneLinear => "h=1 ε=+1",
            Case::OneResidueOne => "h=1 p≡1 mod 4",
            Case::OneM1PrimeEven => "h=1 m₁′ even",
            Case::OneFullQuotientA1One => "h=1 c′=a, a₁=1",
            Case::OnePartialQuotient => "h=1 c′<a",
            Case::OneFullQuotient => "h=1 c′=a, a₁>1",
            Case::TwoLengthOne => "h=2 l=1",
            Case::TwoLinear => "h=2 ε=+1",
            Case::TwoCentralSplitTrivial => "h=2 a₁=a₂=0, c′=c",
            Case::TwoUnequalFirstOdd => "h=2 a₁>a₂, n₁ odd, n₂ even or a₂=0",
            Case::TwoUnequalSecondOdd => "h=2 a₁>a₂, n₁ even, n₂ odd, a₂>0",
            Case::TwoUnequalBothOdd => "h=2 a₁>a₂, n₁ and n₂ odd",
            Case::TwoEqualDimOdd => "h=2 a₁=a₂>0, n odd",
            Case::TwoCentralSplitBothOdd => "h=2 a₁=a₂=0, c′<c, n₁ and n₂ odd",
            Case::TwoNoClause => "h=2 trivial",
            Case::ThreeA1Zero => "h=3 a₁=0",
            Case::ThreeLinear => "h=3 ε=+1",
            Case::ThreeFirstOddOtherEven => "h=3 n₁ odd, n₂ or n₃ even",
            Case::ThreeLargeA1Singleton => "h=3 a₁≥a, n₂ n₃ odd, n₁ even or p≡1",
            Case::ThreeLargeA1Gap => "h=3 a₁≥a, n₁ n₂ n₃ odd",
            Case::ThreeSmallA1Singleton => "h=3 a₁<a, n₂ n₃ odd, n₁ even or p≡1",
            Case::ThreeSmallA1Union => "h=3 a₁<a, n₁ n₂ n₃ odd",
            Case::ThreeNoClause => "h=3 trivial",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifiedBlock {
    pub config: BlockConfig,
    pub label: Label,
    pub case: Case,
}

impl ClassifiedBlock {
    pub fn case_tag(&self) -> &'static str {
        self.case.tag()
    }
}

impl Serialize for ClassifiedBlock {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            config: &'a BlockConfig,
            l: usize,
            #[serde(rename = "A")]
            a: &'a [usize],
            case: &'a str,
        }
        Out {
            config: &self.config,
            l: self.label.l(),
            a: self.label.elements(),
            case: self.case.tag(),
        }
        .serialize(s)
    }
}

fn iv(l: usize, i: u32, j: u32) -> Label {
    Label::interval(l, i as usize, j as usize).expect("interval inside [1, l-1]")
}

fn set(l: usize, it: impl IntoIterator<Item = u32>) -> Label {
    Label::from_set(l, it.into_iter().map(|x| x as usize)).expect("elements inside [1, l-1]")
}

pub fn classify(cfg: &BlockConfig) -> Result<ClassifiedBlock, ClassifyError> {
    let v = validate(cfg)?;
    classify_validated(&v)
}

pub fn classify_validated(v: &Validated) -> Result<ClassifiedBlock, ClassifyError> {
    let (label, case) = decide(v)?;
    Ok(ClassifiedBlock { config: v.config.clone(), label, case })
}

fn decide(v: &Validated) -> Result<(Label, Case), ClassifyError> {
    let c = &v.config;
    let l32 = v.derived.l;
    let l = l32 as usize;
    let (a, cc, cp) = (c.a, c.c, c.c_prime);
    let (a1, a2) = (c.a1(), c.a2());
    let minus = c.epsilon == Sign::Minus;
    let three = c.residue() == Residue::Three;
    let empty = Label::empty(l);
    let odd: Vec<bool> = c.factors.iter().map(|f| f.dim_odd()).collect();

    let out = match c.h() {
        1 => {
            if !minus {
                (empty, Case::OneLinear)
            } else if !three {
                (empty, Case::OneResidueOne)
            } else {
                let m1p_odd = c.m1_prime_odd.ok_or(ClassifyError::Underdetermined("parity of m₁′"))?;
                if !m1p_odd {
                    (empty, Case::OneM1PrimeEven)
                } else if cp < a {
                    (iv(l, a - cp, a + a1 - cp - 1), Case::OnePartialQuotient)
                } else if a1 == 1 {
                    (empty, Case::OneFullQuotientA1One)
                } else {
                    (iv(l, 1, a1 - 1), Case::OneFullQuotient)
                }
            }
        }
        2 => {
            let (o1, o2) = (odd[0], odd[1]);
            if l == 1 {
                (empty, Case::TwoLengthOne)
            } else if !minus {
                (empty, Case::TwoLinear)
            } else if a1 == 0 && a2 == 0 && cp == cc {
                (empty, Case::TwoCentralSplitTrivial)
            } else if a1 > a2 && three && (o1 || (o2 && a2 > 0)) {
                // n₁ even, n₂ odd with a₂ = 0 matches no listed formula: both
                // partial intervals are empty then, so it falls through to ∅
                if o1 && (!o2 || a2 == 0) {
                    (iv(l, a, l32 - 1), Case::TwoUnequalFirstOdd)
                } else if !o1 {
                    (iv(l, a + a1 - a2, l32 - 1), Case::TwoUnequalSecondOdd)
                } else {
                    (iv(l, a, l32 - a2 - 1), Case::TwoUnequalBothOdd)
                }
            } else if a1 == a2 && a1 > 0 && three && (o1 != o2) {
                (iv(l, a - cp, l32 - 1), Case::TwoEqualDimOdd)
            } else if a1 == 0 && a2 == 0 && cp < cc && o1 && o2 {
                (set(l, [cc - cp]), Case::TwoCentralSplitBothOdd)
            } else {
                (empty, Case::TwoNoClause)
            }
        }
        _ => {
            let (o1, o2, o3) = (odd[0], odd[1], odd[2]);
            if a1 == 0 {
                let f = &c.factors;
                if f[0].m_j == f[1].m_j && f[1].m_j == f[2].m_j && !(c.p == 3 && a == 1) {
                    return Err(ClassifyError::Internal(format!(
                        "n₁ = n₂ = n₃ forces p = 3 and a = 1, got p = {}, a = {a}",
                        c.p
                    )));
                }
                (empty, Case::ThreeA1Zero)
            } else if !minus {
                (empty, Case::ThreeLinear)
            } else if !(o2 && o3) {
                if o1 && three {
                    (iv(l, a, l32 - 1), Case::ThreeFirstOddOtherEven)
                } else {
                    (empty, Case::ThreeNoClause)
                }
            } else if a1 >= a {
                if !o1 || !three {
                    (set(l, [a1]), Case::ThreeLargeA1Singleton)
                } else {
                    (set(l, (a..l32).filter(|&x| x != a1)), Case::ThreeLargeA1Gap)
                }
            } else if !o1 || !three {
                (set(l, [a1]), Case::ThreeSmallA1Singleton)
            } else {
                (set(l, std::iter::once(a1).chain(a..l32)), Case::ThreeSmallA1Union)
            }
        }
    };
    Ok(out)
}

/// Input to the closed-form table for small dimensions: `|D| = p^{d_exp}`
/// with `D` cyclic, `|Y| = p^{y_exp}`, and the block dimensions `n_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialQuery {
    pub epsilon: Sign,
    pub p: u64,
    pub n: u64,
    pub a: u32,
    pub d_exp: u32,
    pub y_exp: u32,
    pub parts: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecialOutcome {
    Trivial,
    Label(Label),
}

/// Closed-form answer for `p = 3, n ∈ {3, 6, 9}` and `p = 5, n = 5`: the
/// only non-trivial label is `{1}`, for unitary groups with `n = 6`, `|D| = 3^a`,
/// `a ≥ 2` and block dimensions `{5, 1}`.
pub fn special_table(q: &SpecialQuery) -> Result<SpecialOutcome, ClassifyError> {
    let in_range = (q.p == 3 && matches!(q.n, 3 | 6 | 9)) || (q.p == 5 && q.n == 5);
    if !in_range {
        return Err(ClassifyError::OutOfTable { p: q.p, n: q.n });
    }
    if q.d_exp == 0 {
        return Err(ClassifyError::TableHypothesis("D must be non-trivial"));
    }
    if q.n == 9 {
        if q.a < 2 {
            return Err(ClassifyError::TableHypothesis("n = 9 needs a ≥ 2"));
        }
        if q.y_exp > 1 {
            return Err(ClassifyError::TableHypothesis("n = 9 needs |Y| ≤ 3"));
        }
    } else if q.y_exp != 0 {
        return Err(ClassifyError::TableHypothesis("Y must be trivial"));
    }
    let mut parts = q.parts.clone();
    parts.sort_unstable();
    if q.epsilon == Sign::Minus && q.p == 3 && q.n == 6 && q.d_exp == q.a && q.a >= 2 && parts == [1, 5] {
        let l = q.a as usize;
        return Ok(SpecialOutcome::Label(Label::new(l, vec![1]).expect("l ≥ 2")));
    }
    Ok(SpecialOutcome::Trivial)
}

/// The table query matching a validated configuration, when the table's
/// hypotheses apply to it.
pub fn special_query(v: &Validated) -> Option<SpecialQuery> {
    let c = &v.config;
    let n = c.n().to_u64()?;
    let in_range = (c.p == 3 && matches!(n, 3 | 6 | 9)) || (c.p == 5 && n == 5);
    if !in_range || !v.derived.d_cyclic() {
        return None;
    }
    // with D = <t> cyclic, Y ≤ D gives |Y| = |<t> ∩ Y|
    let y_exp = c.c_prime;
    let ok = if n == 9 { c.a >= 2 && y_exp <= 1 } else { y_exp == 0 };
    if !ok {
        return None;
    }
    Some(SpecialQuery {
        epsilon: c.epsilon,
        p: c.p,
        n,
        a: c.a,
        d_exp: v.derived.d_exp(),
        y_exp,
        parts: c.factors.iter().map(|f| f.dim(c.p).to_u64().unwrap()).collect(),
    })
}
