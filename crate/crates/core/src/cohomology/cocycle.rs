use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::classify::{classify, integer_shift};
use super::lambda::{build_lambda_matrix, LambdaMatrix};
use crate::error::{Error, Result};
use crate::exactlin::{
    format_rational, kernel_basis, parse_rational, solve_or_witness, Echelon, Rational, Solution,
};
use crate::multiindex::MultiIndex;
use crate::params::ParamSpace;
use crate::symcalc::{Cochain1, PolyOperator};

pub type Coefficients = BTreeMap<MultiIndex, Rational>;

/// A normal-form 1-cocycle `X_h ↦ Σ_{|α|=k} B_α h′ F^(α) + Σ_{|β|=k−1} C_β h″ F^(β)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleSymbolic {
    pub b: Coefficients,
    pub c: Coefficients,
}

impl CocycleSymbolic {
    /// Drops zero coefficients.
    pub fn new(b: Coefficients, c: Coefficients) -> Self {
        let clean = |m: Coefficients| m.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        CocycleSymbolic {
            b: clean(b),
            c: clean(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_empty() && self.c.is_empty()
    }

    /// Human-readable term list, e.g. `h' f''⊗g - 4 h' f'⊗g' + h' f⊗g''`.
    pub fn describe(&self, n: usize) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (field, map) in [("h'", &self.b), ("h''", &self.c)] {
            for (alpha, coef) in map.iter().rev() {
                let negative = coef < &Rational::zero();
                let mag = if negative { -coef.clone() } else { coef.clone() };
                let scalar = if mag.is_one() { String::new() } else { format!("{} ", format_rational(&mag)) };
                parts.push((negative, format!("{scalar}{field} {}", monomial(alpha, n))));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (j, (negative, text)) in parts.into_iter().enumerate() {
            match (j, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&text);
        }
        out
    }
}

/// `f''⊗g'` for two slots, `f₁⊗f₂'⊗f₃` beyond that.
fn monomial(alpha: &MultiIndex, n: usize) -> String {
    const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let name = |j: usize| match n {
        1 => "f".to_string(),
        2 => ["f", "g"][j].to_string(),
        _ => format!(
            "f{}",
            (j + 1).to_string().chars().map(|d| SUBSCRIPTS[d as usize - '0' as usize]).collect::<String>()
        ),
    };
    alpha
        .entries()
        .iter()
        .enumerate()
        .map(|(j, &a)| {
            let primes = if a <= 3 { "'".repeat(a as usize) } else { format!("^({a})") };
            format!("{}{primes}", name(j))
        })
        .collect::<Vec<_>>()
        .join("⊗")
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    alpha: MultiIndex,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct CocycleJson {
    #[serde(rename = "B")]
    b: Vec<TermJson>,
    #[serde(rename = "C")]
    c: Vec<TermJson>,
}

fn terms_json(map: &Coefficients) -> Vec<TermJson> {
    map.iter()
        .rev()
        .map(|(alpha, c)| TermJson {
            alpha: alpha.clone(),
            coef: format_rational(c),
        })
        .collect()
}

impl Serialize for CocycleSymbolic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CocycleJson {
            b: terms_json(&self.b),
            c: terms_json(&self.c),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CocycleSymbolic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CocycleJson::deserialize(d)?;
        let parse = |terms: Vec<TermJson>| {
            terms
                .into_iter()
                .map(|t| Ok((t.alpha, parse_rational(&t.coef)?)))
                .collect::<Result<Coefficients>>()
                .map_err(serde::de::Error::custom)
        };
        Ok(CocycleSymbolic::new(parse(raw.b)?, parse(raw.c)?))
    }
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

fn shift_level(params: &ParamSpace) -> Result<u32> {
    match integer_shift(&params.delta()) {
        Some(Ok(k)) => Ok(k),
        _ => Err(Error::WrongCase(format!(
            "δ = {} is not a natural number; every cocycle is a coboundary",
            params.delta()
        ))),
    }
}

fn check_arity(params: &ParamSpace, maps: [&Coefficients; 2]) -> Result<()> {
    for alpha in maps.into_iter().flat_map(|m| m.keys()) {
        if alpha.len() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: params.n(),
                found: alpha.len(),
            });
        }
    }
    Ok(())
}

fn to_vector(map: &Coefficients, index: &[MultiIndex]) -> Vec<Rational> {
    index
        .iter()
        .map(|a| map.get(a).cloned().unwrap_or_else(Rational::zero))
        .collect()
}

fn from_vector(v: &[Rational], index: &[MultiIndex]) -> Coefficients {
    index
        .iter()
        .zip(v)
        .filter(|(_, x)| !x.is_zero())
        .map(|(a, x)| (a.clone(), x.clone()))
        .collect()
}

/// `Σᵢ (αᵢ+1)(αᵢ+2λᵢ) B_{αⁱ}`.
fn raised_sum(alpha: &MultiIndex, b: &Coefficients, params: &ParamSpace) -> Result<Rational> {
    let mut acc = Rational::zero();
    for i in 1..=params.n() {
        if let Some(coef) = b.get(&alpha.raise(i)?) {
            acc += super::lambda::lambda_entry(alpha.get(i).unwrap(), params.lambda_at(i)) * coef;
        }
    }
    Ok(acc)
}

/// Checks the normal-form invariant: level-`k` B, level-`(k−1)` C, `Λ·B = 0`.
fn check_normal_form(c: &CocycleSymbolic, params: &ParamSpace, k: u32) -> Result<LambdaMatrix> {
    check_arity(params, [&c.b, &c.c])?;
    if let Some(a) = c.b.keys().find(|a| a.degree() != k) {
        return Err(Error::NotACocycle(format!("B term {a} is not at level {k}")));
    }
    if let Some(a) = c.c.keys().find(|a| a.degree() + 1 != k) {
        return Err(Error::NotACocycle(format!("C term {a} is not at level {}", k as i64 - 1)));
    }
    let lambda = build_lambda_matrix(params, k)?;
    let image = lambda.matrix.mul_vec(&to_vector(&c.b, &lambda.cols))?;
    if let Some(r) = image.iter().position(|x| !x.is_zero()) {
        return Err(Error::NotACocycle(format!(
            "Λ·B is nonzero at row {}",
            lambda.rows[r]
        )));
    }
    Ok(lambda)
}

/// Explicit basis of `H¹`: first the B-type classes spanning `ker Λ`, then the
/// C-type classes `e_β` for the coordinates of level `k−1` not reached by the
/// pivots of `Λᵀ`. A point with `δ ∉ ℕ` has the empty basis.
pub fn basis(params: &ParamSpace) -> Result<Vec<CocycleSymbolic>> {
    let Some(k) = classify(params).k() else {
        return Ok(Vec::new());
    };
    let lambda = build_lambda_matrix(params, k)?;
    let mut out: Vec<CocycleSymbolic> = kernel_basis(&lambda.matrix)
        .iter()
        .map(|v| CocycleSymbolic::new(from_vector(v, &lambda.cols), Coefficients::new()))
        .collect();
    let image_pivots: BTreeSet<usize> = Echelon::of(&lambda.matrix.transpose()).pivots().iter().copied().collect();
    out.extend(
        lambda
            .rows
            .iter()
            .enumerate()
            .filter(|(r, _)| !image_pivots.contains(r))
            .map(|(_, beta)| {
                CocycleSymbolic::new(Coefficients::new(), Coefficients::from([(beta.clone(), Rational::one())]))
            }),
    );
    Ok(out)
}

/// Coefficients `(B, C)` of the coboundary of `b = Σ D_α F^(α)`:
/// `B_α = (δ−|α|) D_α` and `C_{α⁻ⁱ} −= ½ αᵢ(αᵢ+2λᵢ−1) D_α`.
pub fn coboundary_coefficients(d: &Coefficients, params: &ParamSpace) -> Result<CocycleSymbolic> {
    check_arity(params, [d, d])?;
    let delta = params.delta();
    let half = Rational::new(1.into(), 2.into());
    let mut b = Coefficients::new();
    let mut c = Coefficients::new();
    for (alpha, coef) in d {
        *b.entry(alpha.clone()).or_insert_with(Rational::zero) +=
            (&delta - q(alpha.degree() as i64)) * coef;
        for i in 1..=params.n() {
            let a = alpha.get(i).unwrap();
            if a == 0 {
                continue;
            }
            let a = q(a as i64);
            let weight = &a * (&a + params.lambda_at(i) * q(2) - q(1)) * &half * coef;
            *c.entry(alpha.lower(i)?).or_insert_with(Rational::zero) -= weight;
        }
    }
    Ok(CocycleSymbolic::new(b, c))
}

/// Brings a constant-coefficient cocycle `(B, C)` given at all levels to normal
/// form by subtracting the coboundary of `Σ_{|α|≠k} B_α/(k−|α|) F^(α)`.
pub fn normalize_cocycle(b: &Coefficients, c: &Coefficients, params: &ParamSpace) -> Result<CocycleSymbolic> {
    let k = shift_level(params)?;
    check_arity(params, [b, c])?;
    let delta = params.delta();

    // 2(δ−|α|−1) C_α + Σᵢ (αᵢ+1)(αᵢ+2λᵢ) B_{αⁱ} = 0 wherever either side can be nonzero
    let mut levels: BTreeSet<MultiIndex> = c.keys().cloned().collect();
    for alpha in b.keys() {
        for i in 1..=params.n() {
            if alpha.get(i).unwrap() > 0 {
                levels.insert(alpha.lower(i)?);
            }
        }
    }
    for alpha in &levels {
        let c_alpha = c.get(alpha).cloned().unwrap_or_else(Rational::zero);
        let lhs = q(2) * (&delta - q(alpha.degree() as i64) - q(1)) * c_alpha + raised_sum(alpha, b, params)?;
        if !lhs.is_zero() {
            return Err(Error::NotACocycle(format!("cocycle relation fails at {alpha} by {lhs}")));
        }
    }

    let source: Coefficients = b
        .iter()
        .filter(|(a, _)| a.degree() != k)
        .map(|(a, v)| (a.clone(), v / q(k as i64 - a.degree() as i64)))
        .collect();
    let boundary = coboundary_coefficients(&source, params)?;
    let mut new_b = b.clone();
    for (alpha, v) in &boundary.b {
        *new_b.entry(alpha.clone()).or_insert_with(Rational::zero) -= v;
    }
    let mut new_c = c.clone();
    for (alpha, v) in &boundary.c {
        *new_c.entry(alpha.clone()).or_insert_with(Rational::zero) -= v;
    }
    let out = CocycleSymbolic::new(new_b, new_c);
    if out.b.keys().any(|a| a.degree() != k) || out.c.keys().any(|a| a.degree() + 1 != k) {
        return Err(Error::NotACocycle("residual terms survive off the normal-form levels".into()));
    }
    check_normal_form(&out, params, k)?;
    Ok(out)
}

/// Why a cocycle is or is not a coboundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// `realize(c) = ∂(Σ D_α F^(α))` with `D` the witness at level `k`.
    Trivial { witness: Coefficients },
    /// A coboundary never has `h′` terms at level `k`.
    FirstOrderTerm { alpha: MultiIndex, coef: Rational },
    /// `yᵀΛ = 0` and `yᵀC ≠ 0`, so C is outside the image of `−½Λ`.
    Obstruction { certificate: Coefficients },
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial { .. })
    }
}

impl Serialize for Triviality {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind")]
        enum Repr {
            Trivial { witness: Vec<TermJson> },
            FirstOrderTerm { alpha: MultiIndex, coef: String },
            Obstruction { certificate: Vec<TermJson> },
        }
        match self {
            Triviality::Trivial { witness } => Repr::Trivial { witness: terms_json(witness) },
            Triviality::FirstOrderTerm { alpha, coef } => Repr::FirstOrderTerm {
                alpha: alpha.clone(),
                coef: format_rational(coef),
            },
            Triviality::Obstruction { certificate } => Repr::Obstruction {
                certificate: terms_json(certificate),
            },
        }
        .serialize(s)
    }
}

/// Decides whether a normal-form cocycle is a coboundary.
///
/// Only level-`k` sources can produce pure `h″` terms at level `k−1`, and they
/// produce exactly `C = −½ Λ D`; the system is solved exactly.
pub fn is_trivial(c: &CocycleSymbolic, params: &ParamSpace) -> Result<Triviality> {
    let k = shift_level(params)?;
    let lambda = check_normal_form(c, params, k)?;
    if let Some((alpha, coef)) = c.b.iter().next_back() {
        return Ok(Triviality::FirstOrderTerm {
            alpha: alpha.clone(),
            coef: coef.clone(),
        });
    }
    let system = lambda.matrix.scale(&Rational::new((-1).into(), 2.into()));
    match solve_or_witness(&system, &to_vector(&c.c, &lambda.rows))? {
        Solution::Solved(d) => Ok(Triviality::Trivial {
            witness: from_vector(&d, &lambda.cols),
        }),
        Solution::Inconsistent(y) => Ok(Triviality::Obstruction {
            certificate: from_vector(&y, &lambda.rows),
        }),
    }
}

/// The cochain `X_h ↦ Σ B_α h′ F^(α) + Σ C_β h″ F^(β)`.
pub fn realize(c: &CocycleSymbolic, params: &ParamSpace) -> Result<Cochain1> {
    check_arity(params, [&c.b, &c.c])?;
    let ctx = Arc::new(params.clone());
    let first = PolyOperator::constant(ctx.clone(), c.b.clone())?;
    let second = PolyOperator::constant(ctx, c.c.clone())?;
    Cochain1::from_fn(|h| {
        let dh = h.derivative();
        first
            .multiply_coefficients(&dh)
            .add(&second.multiply_coefficients(&dh.derivative()))
    })
}
