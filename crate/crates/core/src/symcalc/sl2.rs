use std::fmt;

use num_traits::Zero;

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactlin::Rational;

/// A vector field `X_h = h d/dx` with `deg h ≤ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Element {
    h: Poly,
}

impl Sl2Element {
    pub fn new(h: Poly) -> Result<Self> {
        if h.degree().is_some_and(|d| d > 2) {
            return Err(Error::InvalidParameter(format!("X_h with h = {h} is not in sl(2)")));
        }
        Ok(Sl2Element { h })
    }

    /// `a X_1 + b X_x + c X_{x²}`.
    pub fn from_coordinates(coords: [Rational; 3]) -> Self {
        Sl2Element {
            h: Poly::new(coords.to_vec()),
        }
    }

    /// The ordered basis `(X_1, X_x, X_{x²})`.
    pub fn basis() -> [Sl2Element; 3] {
        [0, 1, 2].map(|d| Sl2Element { h: Poly::x_pow(d) })
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    /// Coordinates in the basis `(X_1, X_x, X_{x²})`: the coefficients of `h`.
    pub fn coordinates(&self) -> [Rational; 3] {
        [0, 1, 2].map(|d| self.h.coefficient(d))
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero()
    }
}

impl fmt::Display for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_{{{}}}", self.h)
    }
}

/// `[X_f, X_g] = X_{f g′ − f′ g}`.
pub fn commutator(f: &Sl2Element, g: &Sl2Element) -> Sl2Element {
    let h = &(&f.h * &g.h.derivative()) - &(&f.h.derivative() * &g.h);
    debug_assert!(h.degree().is_none_or(|d| d <= 2));
    Sl2Element { h }
}

/// Structure constants `[e_a, e_b] = Σ_c s[a][b][c] e_c`, computed from [`commutator`].
pub fn structure_constants() -> [[[Rational; 3]; 3]; 3] {
    let basis = Sl2Element::basis();
    let mut out: [[[Rational; 3]; 3]; 3] = Default::default();
    for (a, ea) in basis.iter().enumerate() {
        for (b, eb) in basis.iter().enumerate() {
            out[a][b] = commutator(ea, eb).coordinates();
        }
    }
    debug_assert!(out.iter().all(|r| r.iter().all(|c| c.iter().all(|x| x.is_integer() || x.is_zero()))));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: &[i64]) -> Sl2Element {
        Sl2Element::new(Poly::from_i64(d)).unwrap()
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator(&x(&[1]), &x(&[0, 0, 1])), x(&[0, 2]));
        assert!(commutator(&x(&[0, 1]), &x(&[0, 1])).is_zero());
        assert_eq!(commutator(&x(&[1]), &x(&[0, 1])), x(&[1]));
    }

    #[test]
    fn rejects_cubic_fields() {
        assert!(Sl2Element::new(Poly::x_pow(3)).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn structure_constants_are_antisymmetric() {
        let s = structure_constants();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(s[a][b][c], -s[b][a][c].clone());
                }
            }
        }
        // [X_x, X_{x²}] = X_{x²}
        assert_eq!(s[1][2], [0, 0, 1].map(|v| Rational::from_integer(v.into())));
    }
}
