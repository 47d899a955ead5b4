use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::multiindex::{binomial, MultiIndex};
use crate::params::ParamSpace;

/// A multilinear differential operator `F ↦ Σ_α p_α(x) F^(α)` with
/// polynomial coefficients, from `F_{λ₁}⊗⋯⊗F_{λₙ}` to `F_μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyOperator {
    params: Arc<ParamSpace>,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl PolyOperator {
    pub fn zero(params: Arc<ParamSpace>) -> Self {
        PolyOperator {
            params,
            terms: BTreeMap::new(),
        }
    }

    /// `F ↦ f₁⋯fₙ`.
    pub fn multiplication(params: Arc<ParamSpace>) -> Self {
        let alpha = MultiIndex::zero(params.n());
        let mut op = Self::zero(params);
        op.accumulate(alpha, Poly::one());
        op
    }

    pub fn from_terms(
        params: Arc<ParamSpace>,
        terms: impl IntoIterator<Item = (MultiIndex, Poly)>,
    ) -> Result<Self> {
        let mut op = Self::zero(params);
        for (alpha, p) in terms {
            if alpha.len() != op.params.n() {
                return Err(Error::DimensionMismatch {
                    expected: op.params.n(),
                    found: alpha.len(),
                });
            }
            op.accumulate(alpha, p);
        }
        Ok(op)
    }

    /// Constant-coefficient operator `Σ D_α F^(α)`.
    pub fn constant(
        params: Arc<ParamSpace>,
        coefficients: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        Self::from_terms(
            params,
            coefficients.into_iter().map(|(a, c)| (a, Poly::constant(c))),
        )
    }

    pub(crate) fn accumulate(&mut self, alpha: MultiIndex, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn params(&self) -> &Arc<ParamSpace> {
        &self.params
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Poly> {
        &self.terms
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Poly {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `|α|` carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn max_coefficient_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(Poly::degree).max()
    }

    /// Coefficients as rationals when every coefficient is constant.
    pub fn constant_coefficients(&self) -> Option<BTreeMap<MultiIndex, Rational>> {
        self.terms
            .iter()
            .map(|(a, p)| (p.degree() == Some(0)).then(|| (a.clone(), p.coefficient(0))))
            .collect()
    }

    pub fn add(&self, other: &PolyOperator) -> PolyOperator {
        let mut out = self.clone();
        for (a, p) in &other.terms {
            out.accumulate(a.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyOperator) -> PolyOperator {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> PolyOperator {
        let mut out = Self::zero(self.params.clone());
        for (a, p) in &self.terms {
            out.accumulate(a.clone(), p.scale(s));
        }
        out
    }

    /// Multiplies every coefficient by the polynomial `q`.
    pub fn multiply_coefficients(&self, q: &Poly) -> PolyOperator {
        let mut out = Self::zero(self.params.clone());
        for (a, p) in &self.terms {
            out.accumulate(a.clone(), p * q);
        }
        out
    }

    /// Evaluates the operator on densities `f₁⊗⋯⊗fₙ` with polynomial components.
    pub fn apply(&self, densities: &[Poly]) -> Result<Poly> {
        if densities.len() != self.params.n() {
            return Err(Error::DimensionMismatch {
                expected: self.params.n(),
                found: densities.len(),
            });
        }
        let mut total = Poly::zero();
        for (alpha, p) in &self.terms {
            let product = densities
                .iter()
                .zip(alpha.entries())
                .fold(p.clone(), |acc, (f, &a)| &acc * &f.nth_derivative(a as usize));
            total = &total + &product;
        }
        Ok(total)
    }
}

/// `L^w_{X_h} f = h f′ + w h′ f`.
pub fn lie_derivative(h: &Poly, weight: &Rational, f: &Poly) -> Poly {
    &(h * &f.derivative()) + &(&h.derivative() * f).scale(weight)
}

/// `X_h · A = L^μ_{X_h} ∘ A − A ∘ L^λ_{X_h}` for an arbitrary polynomial field `h`,
/// expanded on the generators `F^(α)` with the slot-wise Leibniz rule.
pub fn act_with_field(h: &Poly, op: &PolyOperator) -> PolyOperator {
    let params = op.params.clone();
    let mu = params.mu().clone();
    let dh = h.derivative();
    let mut h_derivs = vec![h.clone()];
    while !h_derivs.last().unwrap().is_zero() {
        let next = h_derivs.last().unwrap().derivative();
        h_derivs.push(next);
    }
    let h_deriv = |m: usize| h_derivs.get(m).cloned().unwrap_or_default();

    let mut out = PolyOperator::zero(params.clone());
    for (alpha, p) in &op.terms {
        // h (A F)′ + μ h′ A F, minus the top-order part cancelled below
        out.accumulate(alpha.clone(), &(h * &p.derivative()) + &(&dh * p).scale(&mu));
        for (j, (&a, weight)) in alpha.entries().iter().zip(params.lambda()).enumerate() {
            // −p ∂^a (h f′ + λ h′ f) = −p Σ_m C(a,m) (h^(m) f^(a−m+1) + λ h^(m+1) f^(a−m))
            for m in 0..=a {
                let c = Rational::from_integer(BigInt::from(binomial(a as u64, m as u64)));
                if m > 0 {
                    let hm = h_deriv(m as usize);
                    if !hm.is_zero() {
                        out.accumulate(alpha.with_slot(j, a - m + 1), (&hm * p).scale(&-c.clone()));
                    }
                }
                let hm1 = h_deriv(m as usize + 1);
                if !hm1.is_zero() && !weight.is_zero() {
                    out.accumulate(alpha.with_slot(j, a - m), (&hm1 * p).scale(&-(&c * weight)));
                }
            }
        }
    }
    out
}

pub fn act_on_operator(g: &super::Sl2Element, op: &PolyOperator) -> PolyOperator {
    act_with_field(g.h(), op)
}

impl Serialize for PolyOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            alpha: &'a MultiIndex,
            poly: &'a Poly,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (alpha, poly) in self.terms.iter().rev() {
            seq.serialize_element(&Term { alpha, poly })?;
        }
        seq.end()
    }
}

impl fmt::Display for PolyOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (alpha, p)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p}) F^{alpha}")?;
        }
        Ok(())
    }
}
