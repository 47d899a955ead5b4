//! Multi-indices `α ∈ ℕⁿ` labelling the derivative monomials `F^(α) = f₁^(α₁)⋯fₙ^(αₙ)`.
//!
//! All index sets are listed in descending lexicographic order with the
//! leftmost slot most significant, so `(2,0) > (1,1) > (0,2)`. Matrix rows
//! and columns built elsewhere inherit this order.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tuple of derivative orders, one per tensor slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Number of slots `n`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α| = Σ αᵢ`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Entry of the 1-based slot `i`.
    pub fn get(&self, i: usize) -> Option<u32> {
        i.checked_sub(1).and_then(|j| self.0.get(j).copied())
    }

    fn check_slot(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.0.len() {
            return Err(Error::InvalidParameter(format!(
                "slot {i} out of range 1..={}",
                self.0.len()
            )));
        }
        Ok(i - 1)
    }

    /// `αⁱ`: increment the 1-based slot `i`.
    pub fn raise(&self, i: usize) -> Result<MultiIndex> {
        let j = self.check_slot(i)?;
        let mut entries = self.0.clone();
        entries[j] += 1;
        Ok(MultiIndex(entries))
    }

    /// `α⁻ⁱ`: decrement the 1-based slot `i`, which must be nonzero.
    pub fn lower(&self, i: usize) -> Result<MultiIndex> {
        let j = self.check_slot(i)?;
        if self.0[j] == 0 {
            return Err(Error::NotLowerable {
                alpha: self.to_string(),
                slot: i,
            });
        }
        let mut entries = self.0.clone();
        entries[j] -= 1;
        Ok(MultiIndex(entries))
    }

    /// Copy with slot `j` (0-based) replaced. Internal helper for term rewriting.
    pub(crate) fn with_slot(&self, j: usize, value: u32) -> MultiIndex {
        let mut entries = self.0.clone();
        entries[j] = value;
        MultiIndex(entries)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, a) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All `α ∈ ℕⁿ` with `|α| = k`, strictly descending in lexicographic order.
pub fn enumerate(n: usize, k: u32) -> Result<Vec<MultiIndex>> {
    if n == 0 {
        return Err(Error::InvalidParameter("number of slots must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill(&mut current, 0, k, &mut out);
    Ok(out)
}

fn fill(current: &mut [u32], slot: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[slot] = a;
        fill(current, slot + 1, remaining - a, out);
    }
}

/// All `α ∈ ℕⁿ` with `|α| ≤ max_order`, grouped by increasing degree.
pub fn enumerate_up_to(n: usize, max_order: u32) -> Result<Vec<MultiIndex>> {
    let mut out = Vec::new();
    for k in 0..=max_order {
        out.extend(enumerate(n, k)?);
    }
    Ok(out)
}

/// `N_k = #{α ∈ ℕⁿ : |α| = k} = C(n+k−1, k)`, and 0 for `k < 0`.
///
/// With zero slots the only multi-index is the empty one, of degree 0.
pub fn count(n: usize, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    if n == 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n as u64 + k as u64 - 1, k as u64)
}

pub(crate) fn binomial(top: u64, bottom: u64) -> BigUint {
    if bottom > top {
        return BigUint::zero();
    }
    let bottom = bottom.min(top - bottom);
    let mut acc = BigUint::one();
    for j in 0..bottom {
        acc *= top - j;
        acc /= j + 1;
    }
    acc
}
