use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::classify::{classify, CaseTag};
use super::lambda::build_lambda_matrix;
use crate::error::Result;
use crate::exactlin::rank;
use crate::multiindex::count;
use crate::params::ParamSpace;

/// Dimensions of `H¹(sl(2), D_{λ,μ})` and `H¹(sl(2), aff(1); D_{λ,μ})` at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub params: ParamSpace,
    pub case: CaseTag,
    /// `N_k`, the number of level-`k` multi-indices (0 off the integer case).
    pub n_k: u64,
    /// `N_{k−1}`.
    pub n_k_minus_1: u64,
    pub rank_lambda: u64,
    pub dim_h1: u64,
    pub dim_h1_relative: u64,
    /// `C(n+k−2, k)`.
    pub paper_lower: u64,
    /// `C(n+k−2, k)` plus, when resonant, twice the number of level-`(k−1)`
    /// rows whose first-slot entry sits at the vanishing diagonal `βᵢ = r`.
    pub paper_upper: u64,
    pub bounds_satisfied: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn small(x: BigUint) -> u64 {
    x.to_u64().expect("count fits in 64 bits")
}

pub fn compute(params: &ParamSpace) -> Result<CohomologyReport> {
    let case = classify(params);
    let Some(k) = case.k() else {
        return Ok(CohomologyReport {
            params: params.clone(),
            case,
            n_k: 0,
            n_k_minus_1: 0,
            rank_lambda: 0,
            dim_h1: 0,
            dim_h1_relative: 0,
            paper_lower: 0,
            paper_upper: 0,
            bounds_satisfied: true,
            warnings: Vec::new(),
        });
    };
    let n = params.n();
    let lambda = build_lambda_matrix(params, k)?;
    let n_k = lambda.cols.len() as u64;
    let n_k_minus_1 = lambda.rows.len() as u64;
    let rank_lambda = rank(&lambda.matrix) as u64;
    let dim_h1 = n_k + n_k_minus_1 - 2 * rank_lambda;
    let dim_h1_relative = n_k_minus_1 - rank_lambda;

    let paper_lower = small(count(n - 1, k as i64));
    let paper_upper = match &case {
        CaseTag::Integer { r: Some(r), .. } => {
            paper_lower + 2 * small(count(n - 1, k as i64 - 1 - *r as i64))
        }
        _ => paper_lower,
    };
    let mut warnings = Vec::new();
    if !case.is_resonant() && rank_lambda < n_k_minus_1 {
        warnings.push(format!(
            "non-resonant point with rank(Λ) = {rank_lambda} < N_(k-1) = {n_k_minus_1}"
        ));
    }
    Ok(CohomologyReport {
        params: params.clone(),
        case,
        n_k,
        n_k_minus_1,
        rank_lambda,
        dim_h1,
        dim_h1_relative,
        paper_lower,
        paper_upper,
        bounds_satisfied: paper_lower <= dim_h1 && dim_h1 <= paper_upper,
        warnings,
    })
}
