use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::exactlin::Rational;
use crate::params::ParamSpace;

/// Which branch of the classification a parameter point falls into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum CaseTag {
    /// `δ ∉ ℕ`; negative integers land here.
    NonIntegerShift,
    /// `δ = k ∈ ℕ`. `resonant` iff `−2λᵢ ∈ {0,…,k−1}` for every slot, and then
    /// `r = max(−2λᵢ)`.
    Integer {
        k: u32,
        resonant: bool,
        r: Option<u32>,
    },
}

impl CaseTag {
    pub fn k(&self) -> Option<u32> {
        match self {
            CaseTag::NonIntegerShift => None,
            CaseTag::Integer { k, .. } => Some(*k),
        }
    }

    pub fn is_resonant(&self) -> bool {
        matches!(self, CaseTag::Integer { resonant: true, .. })
    }
}

/// `Some(Ok(k))` when `δ = k ∈ ℕ` and `k` fits a `u32`.
pub fn integer_shift(delta: &Rational) -> Option<std::result::Result<u32, BigInt>> {
    if !delta.is_integer() || delta.is_negative() {
        return None;
    }
    let k = delta.to_integer();
    Some(k.to_u32().ok_or(k))
}

/// `−2λ` as a natural number, if it is one.
fn resonance_order(lambda: &Rational) -> Option<BigInt> {
    let m = lambda * Rational::from_integer((-2).into());
    (m.is_integer() && !m.is_negative()).then(|| m.to_integer())
}

pub fn classify(params: &ParamSpace) -> CaseTag {
    let k = match integer_shift(&params.delta()) {
        None => return CaseTag::NonIntegerShift,
        Some(k) => k.expect("ParamSpace bounds integral shifts"),
    };
    let orders: Option<Vec<BigInt>> = params
        .lambda()
        .iter()
        .map(|l| resonance_order(l).filter(|m| *m < BigInt::from(k)))
        .collect();
    match orders {
        Some(orders) => {
            let r = orders.into_iter().max().and_then(|m| m.to_u32());
            CaseTag::Integer {
                k,
                resonant: true,
                r,
            }
        }
        None => CaseTag::Integer {
            k,
            resonant: false,
            r: None,
        },
    }
}
