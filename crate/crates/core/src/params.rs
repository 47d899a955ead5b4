use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomology::integer_shift;
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, Rational};

/// The module datum `(n, λ, μ)`; the shift `δ = μ − Σλᵢ` is always derived.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamSpace {
    lambda: Vec<Rational>,
    mu: Rational,
}

impl ParamSpace {
    pub fn new(lambda: Vec<Rational>, mu: Rational) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidParameter("at least one weight is required".into()));
        }
        let params = ParamSpace { lambda, mu };
        if let Some(Err(k)) = integer_shift(&params.delta()) {
            return Err(Error::InvalidParameter(format!("shift δ = {k} is too large")));
        }
        Ok(params)
    }

    /// Chooses `μ = Σλᵢ + δ`.
    pub fn with_delta(lambda: Vec<Rational>, delta: Rational) -> Result<Self> {
        let mu = lambda.iter().fold(Rational::zero(), |acc, l| acc + l) + delta;
        Self::new(lambda, mu)
    }

    /// Parses weights like `"1/2,-1"` and a weight `"3"`.
    pub fn parse(lambda: &str, mu: &str) -> Result<Self> {
        Self::new(parse_list(lambda)?, parse_rational(mu)?)
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    /// Weight of the 1-based slot `i`.
    pub fn lambda_at(&self, i: usize) -> &Rational {
        &self.lambda[i - 1]
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn delta(&self) -> Rational {
        self.lambda.iter().fold(self.mu.clone(), |acc, l| acc - l)
    }

    /// The same point with slot weights reordered by `perm` (0-based images).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.n()];
        for &p in perm {
            if p >= self.n() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(ParamSpace {
            lambda: perm.iter().map(|&p| self.lambda[p].clone()).collect(),
            mu: self.mu.clone(),
        })
    }
}

/// Comma-separated rationals.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: usize,
    lambda: Vec<String>,
    mu: String,
    delta: String,
}

impl Serialize for ParamSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawParams {
            n: self.n(),
            lambda: self.lambda.iter().map(format_rational).collect(),
            mu: format_rational(&self.mu),
            delta: format_rational(&self.delta()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawParams::deserialize(d)?;
        let lambda = raw
            .lambda
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let mu = parse_rational(&raw.mu).map_err(D::Error::custom)?;
        let params = ParamSpace::new(lambda, mu).map_err(D::Error::custom)?;
        if params.n() != raw.n {
            return Err(D::Error::custom("n does not match the number of weights"));
        }
        if parse_rational(&raw.delta).map_err(D::Error::custom)? != params.delta() {
            return Err(D::Error::custom("delta is inconsistent with mu and lambda"));
        }
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_is_derived() {
        let p = ParamSpace::parse("1/2,1/2", "3").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(format_rational(&p.delta()), "2");
        let q = ParamSpace::with_delta(p.lambda().to_vec(), Rational::from_integer(2.into())).unwrap();
        assert_eq!(p, q);
        assert!(ParamSpace::new(vec![], Rational::zero()).is_err());
        assert!(ParamSpace::parse("0", "99999999999").is_err());
        assert!(ParamSpace::parse("0", "-99999999999").is_ok());
    }

    #[test]
    fn json_shape() {
        let p = ParamSpace::parse("1/4", "3/4").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":1,"lambda":["1/4"],"mu":"3/4","delta":"1/2"}"#);
        let back: ParamSpace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<ParamSpace>(r#"{"n":1,"lambda":["1/4"],"mu":"3/4","delta":"1"}"#).is_err());
    }

    #[test]
    fn permutation_checks() {
        let p = ParamSpace::parse("0,1,2", "5").unwrap();
        assert_eq!(p.permuted(&[2, 0, 1]).unwrap().lambda()[0], Rational::from_integer(2.into()));
        assert!(p.permuted(&[0, 0, 1]).is_err());
        assert!(p.permuted(&[0, 1]).is_err());
    }
}
