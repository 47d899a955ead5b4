use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::operator::{act_on_operator, PolyOperator};
use super::poly::Poly;
use super::sl2::{commutator, Sl2Element};
use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::multiindex::MultiIndex;
use crate::params::ParamSpace;

/// Ordered pairs of basis indices spanning `Λ²(sl(2))`.
pub const BASIS_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

const COCHAIN1_KEYS: [&str; 3] = ["X1", "Xx", "Xx2"];
const COCHAIN2_KEYS: [&str; 3] = ["X1^Xx", "X1^Xx2", "Xx^Xx2"];

/// A linear map `sl(2) → D_{λ,μ}`, stored by its values on `(X_1, X_x, X_{x²})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    images: [PolyOperator; 3],
}

/// An alternating bilinear map on `sl(2)`, stored on the pairs of [`BASIS_PAIRS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    images: [PolyOperator; 3],
}

fn check_context(images: &[PolyOperator; 3]) -> Result<()> {
    if images.iter().any(|op| op.params() != images[0].params()) {
        return Err(Error::InvalidParameter("cochain values live in different modules".into()));
    }
    Ok(())
}

impl Cochain1 {
    pub fn new(images: [PolyOperator; 3]) -> Result<Self> {
        check_context(&images)?;
        Ok(Cochain1 { images })
    }

    pub fn zero(params: Arc<ParamSpace>) -> Self {
        Cochain1 {
            images: [0, 1, 2].map(|_| PolyOperator::zero(params.clone())),
        }
    }

    /// The cochain `X_h ↦ A(h)` for `A` given as a function of the field polynomial.
    pub fn from_fn(mut value: impl FnMut(&Poly) -> PolyOperator) -> Result<Self> {
        let [a, b, c] = Sl2Element::basis();
        Self::new([value(a.h()), value(b.h()), value(c.h())])
    }

    pub fn images(&self) -> &[PolyOperator; 3] {
        &self.images
    }

    pub fn params(&self) -> &Arc<ParamSpace> {
        self.images[0].params()
    }

    /// Value on an arbitrary element, by linearity.
    pub fn value_at(&self, g: &Sl2Element) -> PolyOperator {
        g.coordinates()
            .iter()
            .zip(&self.images)
            .filter(|(c, _)| !c.is_zero())
            .fold(PolyOperator::zero(self.params().clone()), |acc, (c, op)| {
                acc.add(&op.scale(c))
            })
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(PolyOperator::is_zero)
    }

    pub fn sub(&self, other: &Cochain1) -> Cochain1 {
        Cochain1 {
            images: [0, 1, 2].map(|i| self.images[i].sub(&other.images[i])),
        }
    }
}

impl Cochain2 {
    pub fn new(images: [PolyOperator; 3]) -> Result<Self> {
        check_context(&images)?;
        Ok(Cochain2 { images })
    }

    pub fn images(&self) -> &[PolyOperator; 3] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(PolyOperator::is_zero)
    }
}

/// `(∂b)(g) = g · b`.
pub fn differential0(b: &PolyOperator) -> Cochain1 {
    Cochain1 {
        images: Sl2Element::basis().map(|g| act_on_operator(&g, b)),
    }
}

/// `(∂c)(g, h) = g · c(h) − h · c(g) − c([g, h])` on each basis pair.
pub fn differential1(c: &Cochain1) -> Cochain2 {
    let basis = Sl2Element::basis();
    let images = BASIS_PAIRS.map(|(a, b)| {
        let (g, h) = (&basis[a], &basis[b]);
        act_on_operator(g, &c.images[b])
            .sub(&act_on_operator(h, &c.images[a]))
            .sub(&c.value_at(&commutator(g, h)))
    });
    Cochain2 { images }
}

/// The coboundary of a constant-coefficient operator `b = Σ D_α F^(α)` in closed form:
/// `X_h ↦ Σ (δ−|α|) D_α h′ F^(α) − ½ Σ_α Σ_i α_i(α_i+2λ_i−1) D_α h″ F^(α⁻ⁱ)`.
pub fn closed_form_coboundary(
    coefficients: &BTreeMap<MultiIndex, Rational>,
    params: Arc<ParamSpace>,
) -> Result<Cochain1> {
    let delta = params.delta();
    let half = Rational::new(1.into(), 2.into());
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (alpha, d) in coefficients {
        if alpha.len() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: params.n(),
                found: alpha.len(),
            });
        }
        let level = Rational::from_integer(alpha.degree().into());
        first.push((alpha.clone(), (&delta - level) * d));
        for i in 1..=params.n() {
            let a = alpha.get(i).unwrap();
            if a == 0 {
                continue;
            }
            let a = Rational::from_integer(a.into());
            let two_lambda = params.lambda_at(i) * Rational::from_integer(2.into());
            let c = -(&half * &a * (&a + two_lambda - Rational::from_integer(1.into())) * d);
            second.push((alpha.lower(i)?, c));
        }
    }
    let first = PolyOperator::constant(params.clone(), first)?;
    let second = PolyOperator::constant(params, second)?;
    Cochain1::from_fn(|h| {
        let dh = h.derivative();
        first
            .multiply_coefficients(&dh)
            .add(&second.multiply_coefficients(&dh.derivative()))
    })
}

/// [`closed_form_coboundary`] for an operator whose coefficients must all be constants.
pub fn closed_form_coboundary_of(b: &PolyOperator) -> Result<Cochain1> {
    let coefficients = b.constant_coefficients().ok_or_else(|| {
        Error::InvalidParameter("closed-form coboundary needs constant coefficients".into())
    })?;
    closed_form_coboundary(&coefficients, b.params().clone())
}

fn serialize_keyed<S: Serializer>(
    keys: &[&str; 3],
    images: &[PolyOperator; 3],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(3))?;
    for (k, op) in keys.iter().zip(images) {
        map.serialize_entry(k, op)?;
    }
    map.end()
}

impl Serialize for Cochain1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_keyed(&COCHAIN1_KEYS, &self.images, s)
    }
}

impl Serialize for Cochain2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_keyed(&COCHAIN2_KEYS, &self.images, s)
    }
}
