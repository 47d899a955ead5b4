//! Brute-force `H¹` by truncated Chevalley–Eilenberg linear algebra.
//!
//! Cochains are restricted to a box (operator order ≤ M, coefficient degree ≤ d).
//! `Z¹(box)` is the kernel of the linearized `∂¹`; coboundaries inside the box
//! are `∂(S) ∩ box` for sources `S` of order ≤ M and degree ≤ d + margin, whose
//! dimension is `rank ∂|_S − rank (P_out ∘ ∂|_S)`. Only the symbolic
//! differentials and exact elimination are used here: nothing from the
//! closed-form engine.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::cohomology::integer_shift;
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, Rational};
use crate::multiindex::{enumerate_up_to, MultiIndex};
use crate::params::ParamSpace;
use crate::symcalc::{differential0, differential1, Cochain1, Poly, PolyOperator};

/// Caps on the finite-dimensional slice of `C⁰` and `C¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationBox {
    pub max_order: u32,
    pub max_degree: u32,
    pub source_degree_margin: u32,
}

impl TruncationBox {
    pub fn new(max_order: u32, max_degree: u32, source_degree_margin: u32) -> Self {
        TruncationBox {
            max_order,
            max_degree,
            source_degree_margin,
        }
    }

    /// Order `k` (2 off the integer case), degree `k + 2`, margin 2.
    pub fn default_for(params: &ParamSpace) -> Self {
        match integer_shift(&params.delta()) {
            Some(Ok(k)) => TruncationBox::new(k, k + 2, 2),
            _ => TruncationBox::new(2, 4, 2),
        }
    }

    /// The 0-cochain box used as coboundary sources.
    pub fn source_box(&self) -> Self {
        TruncationBox::new(self.max_order, self.max_degree + self.source_degree_margin, 0)
    }

    fn widened(&self, step: u32) -> Self {
        TruncationBox::new(
            self.max_order,
            self.max_degree + step,
            self.source_degree_margin + step,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedH1 {
    pub dim: u64,
    pub cocycle_dim: u64,
    pub coboundary_dim: u64,
    pub warnings: Vec<String>,
}

/// Result of [`stabilized_h1`]; `dim` is `None` when the schedule ran out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub dim: Option<u64>,
    pub stabilized: bool,
    pub steps: u32,
    pub warnings: Vec<String>,
}

type Coord = (usize, MultiIndex, usize);

/// Assigns row indices to `(slot, α, degree)` coordinates on first sight.
#[derive(Default)]
struct CoordinateIndex {
    index: HashMap<Coord, usize>,
}

impl CoordinateIndex {
    fn id(&mut self, key: Coord) -> usize {
        let next = self.index.len();
        *self.index.entry(key).or_insert(next)
    }

    fn len(&self) -> usize {
        self.index.len()
    }
}

fn coordinates(images: &[PolyOperator; 3]) -> impl Iterator<Item = (usize, &MultiIndex, usize, &Rational)> {
    images.iter().enumerate().flat_map(|(slot, op)| {
        op.terms().iter().flat_map(move |(alpha, p)| {
            p.coefficients()
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(move |(d, c)| (slot, alpha, d, c))
        })
    })
}

fn monomial_operator(params: &Arc<ParamSpace>, alpha: &MultiIndex, degree: u32) -> PolyOperator {
    PolyOperator::from_terms(params.clone(), [(alpha.clone(), Poly::x_pow(degree as usize))])
        .expect("arity matches context")
}

fn box_indices(params: &ParamSpace, bx: &TruncationBox) -> Result<Vec<MultiIndex>> {
    enumerate_up_to(params.n(), bx.max_order)
}

/// `dim Z¹(box)`.
fn cocycle_dim(params: &Arc<ParamSpace>, bx: &TruncationBox) -> Result<u64> {
    let indices = box_indices(params, bx)?;
    let zero = PolyOperator::zero(params.clone());
    let mut rows = CoordinateIndex::default();
    let mut columns = Vec::new();
    for slot in 0..3 {
        for alpha in &indices {
            for d in 0..=bx.max_degree {
                let mut images = [zero.clone(), zero.clone(), zero.clone()];
                images[slot] = monomial_operator(params, alpha, d);
                let boundary = differential1(&Cochain1::new(images)?);
                let column: Vec<(usize, Rational)> = coordinates(boundary.images())
                    .map(|(s, a, deg, c)| (rows.id((s, a.clone(), deg)), c.clone()))
                    .collect();
                columns.push(column);
            }
        }
    }
    let total = columns.len() as u64;
    // rank of the matrix equals the rank of its transpose; columns are fed as rows
    let rank = Echelon::from_sparse(rows.len(), columns).rank() as u64;
    Ok(total - rank)
}

/// `(rank ∂|_S, rank P_out ∘ ∂|_S, |S|)` for the sources of `bx`.
fn source_ranks(params: &Arc<ParamSpace>, bx: &TruncationBox) -> Result<(u64, u64, u64)> {
    let indices = box_indices(params, bx)?;
    let sources = bx.source_box();
    let mut all_rows = CoordinateIndex::default();
    let mut out_rows = CoordinateIndex::default();
    let mut full = Vec::new();
    let mut outside = Vec::new();
    for alpha in &indices {
        for d in 0..=sources.max_degree {
            let boundary = differential0(&monomial_operator(params, alpha, d));
            let mut f = Vec::new();
            let mut o = Vec::new();
            for (s, a, deg, c) in coordinates(boundary.images()) {
                f.push((all_rows.id((s, a.clone(), deg)), c.clone()));
                if a.degree() > bx.max_order || deg > bx.max_degree as usize {
                    o.push((out_rows.id((s, a.clone(), deg)), c.clone()));
                }
            }
            full.push(f);
            outside.push(o);
        }
    }
    let count = full.len() as u64;
    let rank_full = Echelon::from_sparse(all_rows.len(), full).rank() as u64;
    let rank_out = Echelon::from_sparse(out_rows.len(), outside).rank() as u64;
    Ok((rank_full, rank_out, count))
}

/// `dim ∂(sources)` for the source box of `bx`.
pub fn coboundary_source_rank(params: &ParamSpace, bx: &TruncationBox) -> Result<u64> {
    Ok(source_ranks(&Arc::new(params.clone()), bx)?.0)
}

/// Number of 0-cochains in the source box of `bx`.
pub fn source_count(params: &ParamSpace, bx: &TruncationBox) -> Result<u64> {
    let orders = box_indices(params, bx)?.len() as u64;
    Ok(orders * (bx.source_box().max_degree as u64 + 1))
}

pub fn truncated_h1(params: &ParamSpace, bx: &TruncationBox) -> Result<TruncatedH1> {
    let ctx = Arc::new(params.clone());
    let mut warnings = Vec::new();
    if let Some(Ok(k)) = integer_shift(&params.delta()) {
        if bx.max_order < k {
            warnings.push(format!(
                "max_order {} is below the shift {k}; first-order classes cannot fit in the box",
                bx.max_order
            ));
        }
    }
    let z = cocycle_dim(&ctx, bx)?;
    let (rank_full, rank_out, _) = source_ranks(&ctx, bx)?;
    let b = rank_full - rank_out;
    Ok(TruncatedH1 {
        dim: z - b,
        cocycle_dim: z,
        coboundary_dim: b,
        warnings,
    })
}

/// Dimension of the `sl(2)`-invariant operators of order ≤ M and degree ≤ d.
pub fn invariant_operator_dim(params: &ParamSpace, bx: &TruncationBox) -> Result<u64> {
    let own = TruncationBox::new(bx.max_order, bx.max_degree, 0);
    let (rank, _, count) = source_ranks(&Arc::new(params.clone()), &own)?;
    Ok(count - rank)
}

/// Runs [`truncated_h1`] while widening degree and margin by 2 per step, until two
/// consecutive steps agree.
pub fn stabilized_h1(params: &ParamSpace, initial: &TruncationBox, max_steps: u32) -> Result<Stabilization> {
    if max_steps < 2 {
        return Err(Error::InvalidParameter("stabilization needs at least two steps".into()));
    }
    let mut warnings = Vec::new();
    let mut previous: Option<u64> = None;
    for step in 0..max_steps {
        let result = truncated_h1(params, &initial.widened(2 * step))?;
        for w in result.warnings {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        if previous == Some(result.dim) {
            return Ok(Stabilization {
                dim: Some(result.dim),
                stabilized: true,
                steps: step + 1,
                warnings,
            });
        }
        previous = Some(result.dim);
    }
    warnings.push(format!("no two consecutive steps agreed within {max_steps} steps"));
    Ok(Stabilization {
        dim: None,
        stabilized: false,
        steps: max_steps,
        warnings,
    })
}
